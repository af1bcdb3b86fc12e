//! Word algebra of a free group: alphabets, letters, free reduction,
//! inversion, cyclic decomposition, and endomorphisms given on generators.

use crate::error::{Error, Result};
use std::fmt;

/// An ordered set of distinct generator names. The order is fixed and used
/// for all deterministic tie-breaking downstream (canonical numbering,
/// shortest witnesses, basis extraction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    /// Builds an alphabet from generator names. Names must be nonempty
    /// identifiers, pairwise distinct, and there must be at least one.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("no generators".into()));
        }
        for name in &names {
            if !valid_name(name) {
                return Err(Error::InvalidAlphabet(format!(
                    "`{name}` is not a valid generator name"
                )));
            }
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidAlphabet(format!("duplicate generator `{name}`")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Never true; alphabets carry at least one generator.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Name of generator `index`.
    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    /// Index of the generator called `name`, if any.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All `2n` letters in canonical order: `a < a⁻¹ < b < b⁻¹ < …`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).flat_map(|g| [Letter::positive(g), Letter::negative(g)])
    }

    /// True when every generator name is a single lowercase letter, which
    /// enables the compact word syntax (`"aB"` for `a·b⁻¹`).
    pub fn all_single_lowercase(&self) -> bool {
        self.names
            .iter()
            .all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()))
    }
}

/// A generator or its formal inverse. The derived order is
/// `a < a⁻¹ < b < b⁻¹ < …`, matching the alphabet order with positive
/// letters before negative ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: usize,
    inverse: bool,
}

impl Letter {
    pub fn positive(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn negative(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    /// The formal inverse of this letter.
    pub fn inverse(&self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// Whether `self · other` cancels.
    pub fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A finite, possibly unreduced sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letterwise-inverted reversal: `(a₁…aₙ)⁻¹ = aₙ⁻¹…a₁⁻¹`.
    pub fn invert(&self) -> Word {
        Word { letters: invert_letters(&self.letters) }
    }

    /// Freely reduces this word.
    pub fn reduce(&self) -> ReducedWord {
        free_reduce(self)
    }

    /// Parses `text` against the word grammar.
    ///
    /// Tokens are separated by whitespace. A token is a generator name,
    /// optionally followed by `^` and a signed integer exponent. When every
    /// generator is a single lowercase letter, a token may also be a compact
    /// string in which uppercase means inverse (`"aB"` is `a·b⁻¹`). The empty
    /// string and the token `1` (when `1` is not a generator) denote the
    /// empty word. Parsing never reduces.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            parse_token(token, alphabet, &mut letters)?;
        }
        Ok(Word { letters })
    }

    /// Renders the word in the grammar's canonical spaced form. The empty
    /// word prints as `1`.
    pub fn display(&self, alphabet: &Alphabet) -> String {
        display_letters(&self.letters, alphabet)
    }
}

impl From<ReducedWord> for Word {
    fn from(w: ReducedWord) -> Word {
        Word { letters: w.letters }
    }
}

impl From<&ReducedWord> for Word {
    fn from(w: &ReducedWord) -> Word {
        Word { letters: w.letters.clone() }
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Word {
        Word { letters: vec![l] }
    }
}

impl From<Letter> for ReducedWord {
    fn from(l: Letter) -> ReducedWord {
        ReducedWord { letters: vec![l] }
    }
}

/// A freely reduced word: no adjacent pair `x·x⁻¹`. Only constructible
/// through reduction, so the invariant always holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn empty() -> Self {
        ReducedWord::default()
    }

    /// Parses and reduces.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<ReducedWord> {
        Ok(free_reduce(&Word::parse(text, alphabet)?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Inversion preserves reducedness.
    pub fn invert(&self) -> ReducedWord {
        ReducedWord { letters: invert_letters(&self.letters) }
    }

    /// The group product `self · other`, reduced.
    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let mut stack = self.letters.clone();
        push_reducing(&mut stack, other.letters.iter().copied());
        ReducedWord { letters: stack }
    }

    /// The conjugate `by · self · by⁻¹`, reduced.
    pub fn conjugate_by(&self, by: &ReducedWord) -> ReducedWord {
        by.mul(self).mul(&by.invert())
    }

    /// The reduced power `self^n` (negative exponents invert).
    pub fn pow(&self, n: i64) -> ReducedWord {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut acc = ReducedWord::empty();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// The unique decomposition `self = x·w·x⁻¹` with `w` cyclically reduced
    /// (`w·w` reduced). Returns `(x, w)`.
    pub fn cyclic_decompose(&self) -> (ReducedWord, ReducedWord) {
        let letters = &self.letters;
        let mut i = 0;
        let mut j = letters.len();
        while i + 1 < j && letters[i].cancels(&letters[j - 1]) {
            i += 1;
            j -= 1;
        }
        let x = ReducedWord { letters: letters[..i].to_vec() };
        let w = ReducedWord { letters: letters[i..j].to_vec() };
        (x, w)
    }

    /// Whether `self · self` is reduced.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(first), Some(last)) => !last.cancels(first),
            _ => true,
        }
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        display_letters(&self.letters, alphabet)
    }
}

fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

fn push_reducing<I: IntoIterator<Item = Letter>>(stack: &mut Vec<Letter>, letters: I) {
    for letter in letters {
        match stack.last() {
            Some(top) if top.cancels(&letter) => {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
}

/// Freely reduces a word with a single left-to-right stack pass. The
/// rewriting system `aa⁻¹ → 1` is confluent, so the scan order does not
/// matter and the result is the unique reduced form.
pub fn free_reduce(w: &Word) -> ReducedWord {
    let mut stack = Vec::with_capacity(w.letters.len());
    push_reducing(&mut stack, w.letters.iter().copied());
    ReducedWord { letters: stack }
}

fn display_letters(letters: &[Letter], alphabet: &Alphabet) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    letters
        .iter()
        .map(|l| {
            if l.is_inverse() {
                format!("{}^-1", alphabet.name(l.generator()))
            } else {
                alphabet.name(l.generator()).to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_token(token: &str, alphabet: &Alphabet, out: &mut Vec<Letter>) -> Result<()> {
    if let Some((base, exp)) = token.split_once('^') {
        let generator = alphabet
            .index_of(base)
            .ok_or_else(|| Error::UnknownGenerator(base.to_string()))?;
        let exp: i64 = exp.parse().map_err(|_| Error::WordSyntax {
            token: token.to_string(),
            reason: "exponent must be a signed integer".into(),
        })?;
        let letter = if exp < 0 {
            Letter::negative(generator)
        } else {
            Letter::positive(generator)
        };
        out.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
        return Ok(());
    }
    if let Some(generator) = alphabet.index_of(token) {
        out.push(Letter::positive(generator));
        return Ok(());
    }
    if token == "1" {
        return Ok(());
    }
    if alphabet.all_single_lowercase() && token.chars().all(|c| c.is_ascii_alphabetic()) {
        for c in token.chars() {
            let lower = c.to_ascii_lowercase().to_string();
            let generator = alphabet
                .index_of(&lower)
                .ok_or_else(|| Error::UnknownGenerator(c.to_string()))?;
            if c.is_ascii_uppercase() {
                out.push(Letter::negative(generator));
            } else {
                out.push(Letter::positive(generator));
            }
        }
        return Ok(());
    }
    Err(Error::UnknownGenerator(token.to_string()))
}

/// An elementary Nielsen automorphism: `Alpha(a)` inverts one generator,
/// `Beta(a, b)` maps `a ↦ ab`, and `BetaInv(a, b)` maps `a ↦ ab⁻¹`.
/// Together these generate the full automorphism group of the free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nielsen {
    Alpha(usize),
    Beta(usize, usize),
    BetaInv(usize, usize),
}

impl Nielsen {
    /// The inverse elementary automorphism.
    pub fn inverse(self) -> Nielsen {
        match self {
            Nielsen::Alpha(a) => Nielsen::Alpha(a),
            Nielsen::Beta(a, b) => Nielsen::BetaInv(a, b),
            Nielsen::BetaInv(a, b) => Nielsen::Beta(a, b),
        }
    }
}

/// An endomorphism of the free group, given by one reduced image per
/// generator. Unreduced input images are reduced at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndomorphismSpec {
    alphabet: Alphabet,
    images: Vec<ReducedWord>,
}

impl EndomorphismSpec {
    pub fn new<W: Into<Word>>(alphabet: Alphabet, images: Vec<W>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::ImageCount { expected: alphabet.len(), got: images.len() });
        }
        let images = images.into_iter().map(|w| free_reduce(&w.into())).collect();
        Ok(EndomorphismSpec { alphabet, images })
    }

    /// The identity endomorphism.
    pub fn identity(alphabet: Alphabet) -> Self {
        let images = (0..alphabet.len())
            .map(|g| free_reduce(&Word::from(Letter::positive(g))))
            .collect();
        EndomorphismSpec { alphabet, images }
    }

    /// Builds an elementary Nielsen automorphism. `Beta` kinds require at
    /// least two generators and distinct arguments.
    pub fn nielsen(alphabet: &Alphabet, n: Nielsen) -> Result<Self> {
        let check = |g: usize| -> Result<()> {
            if g >= alphabet.len() {
                return Err(Error::UnknownGenerator(format!("#{g}")));
            }
            Ok(())
        };
        let mut spec = EndomorphismSpec::identity(alphabet.clone());
        match n {
            Nielsen::Alpha(a) => {
                check(a)?;
                spec.images[a] = free_reduce(&Word::from(Letter::negative(a)));
            }
            Nielsen::Beta(a, b) | Nielsen::BetaInv(a, b) => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(Error::InvalidNielsen("the two generators must differ".into()));
                }
                let second = match n {
                    Nielsen::Beta(..) => Letter::positive(b),
                    _ => Letter::negative(b),
                };
                spec.images[a] =
                    free_reduce(&Word::new(vec![Letter::positive(a), second]));
            }
        }
        Ok(spec)
    }

    /// Composes a sequence of elementary automorphisms, applied left to right.
    pub fn nielsen_sequence(alphabet: &Alphabet, seq: &[Nielsen]) -> Result<Self> {
        let mut spec = EndomorphismSpec::identity(alphabet.clone());
        for &n in seq {
            spec = spec.compose(&EndomorphismSpec::nielsen(alphabet, n)?)?;
        }
        Ok(spec)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Image of generator `g`.
    pub fn image(&self, g: usize) -> &ReducedWord {
        &self.images[g]
    }

    pub fn images(&self) -> &[ReducedWord] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self == &EndomorphismSpec::identity(self.alphabet.clone())
    }

    /// Applies the endomorphism: substitutes each letter by its image
    /// (inverse letters by the inverted image), then reduces.
    pub fn apply(&self, w: &Word) -> ReducedWord {
        let mut stack = Vec::new();
        for letter in w.letters() {
            let image = &self.images[letter.generator()];
            if letter.is_inverse() {
                push_reducing(&mut stack, image.letters().iter().rev().map(|l| l.inverse()));
            } else {
                push_reducing(&mut stack, image.letters().iter().copied());
            }
        }
        ReducedWord { letters: stack }
    }

    /// `self` followed by `then`: the image of each generator under the
    /// composite is `then` applied to its image under `self`.
    pub fn compose(&self, then: &EndomorphismSpec) -> Result<EndomorphismSpec> {
        if self.alphabet != then.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let images = self
            .images
            .iter()
            .map(|img| then.apply(&Word::from(img)))
            .collect();
        Ok(EndomorphismSpec { alphabet: self.alphabet.clone(), images })
    }
}

impl fmt::Display for EndomorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.alphabet.len())
            .map(|g| {
                format!("{} -> {}", self.alphabet.name(g), self.images[g].display(&self.alphabet))
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}
