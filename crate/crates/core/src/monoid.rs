//! The transition monoid of an inverse automaton: a finite inverse monoid of
//! partial injections on the state set, with Green's relations, group
//! H-classes, the natural partial order, and the idempotents realizable by
//! nonempty reduced words.

use crate::automaton::InverseAutomaton;
use crate::error::{Error, Result};
use crate::words::{Letter, ReducedWord, Word};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

/// An injective partial self-map of the state set, stored as one image
/// entry per state. Composition is left to right: `(q)(f·g) = ((q)f)g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialInjection {
    map: Vec<Option<usize>>,
}

impl PartialInjection {
    pub fn identity(n: usize) -> Self {
        PartialInjection { map: (0..n).map(Some).collect() }
    }

    /// The empty map (nowhere defined).
    pub fn empty_map(n: usize) -> Self {
        PartialInjection { map: vec![None; n] }
    }

    pub fn from_map(map: Vec<Option<usize>>) -> Result<Self> {
        let n = map.len();
        let mut hit = vec![false; n];
        for target in map.iter().flatten() {
            if *target >= n {
                return Err(Error::Precondition("image entry out of range".into()));
            }
            if hit[*target] {
                return Err(Error::Precondition("map is not injective".into()));
            }
            hit[*target] = true;
        }
        Ok(PartialInjection { map })
    }

    /// Number of states of the underlying set.
    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, q: usize) -> Option<usize> {
        self.map[q]
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &PartialInjection) -> PartialInjection {
        PartialInjection {
            map: self.map.iter().map(|v| v.and_then(|q| other.map[q])).collect(),
        }
    }

    /// The relational inverse; `f · f⁻¹` is the identity restricted to the
    /// domain of `f`.
    pub fn inverse(&self) -> PartialInjection {
        let mut map = vec![None; self.map.len()];
        for (q, target) in self.map.iter().enumerate() {
            if let Some(t) = target {
                map[*t] = Some(q);
            }
        }
        PartialInjection { map }
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&q| self.map[q].is_some()).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut image: Vec<usize> = self.map.iter().flatten().copied().collect();
        image.sort_unstable();
        image
    }

    pub fn domain_size(&self) -> usize {
        self.map.iter().flatten().count()
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(q, v)| *v == Some(q))
    }

    pub fn is_empty_map(&self) -> bool {
        self.map.iter().all(Option::is_none)
    }

    /// An injective partial map is idempotent exactly when it fixes its
    /// whole domain, i.e. it is a restriction of the identity.
    pub fn is_idempotent(&self) -> bool {
        self.map.iter().enumerate().all(|(q, v)| v.is_none() || *v == Some(q))
    }

    /// The natural partial order: `f ≤ g` when `g` restricted to the domain
    /// of `f` equals `f` (equivalently `f = e·g` for an idempotent `e`).
    pub fn natural_leq(&self, other: &PartialInjection) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(q, v)| v.is_none() || other.map[q] == *v)
    }
}

/// The partial injection a single letter induces on the states.
pub fn transition_of_letter(aut: &InverseAutomaton, letter: Letter) -> PartialInjection {
    let map = (0..aut.state_count())
        .map(|q| aut.graph().step(q, letter))
        .collect();
    PartialInjection { map }
}

/// The partial injection realized by reading `w` from every state.
pub fn transition_of_word(aut: &InverseAutomaton, w: &Word) -> PartialInjection {
    w.letters().iter().fold(
        PartialInjection::identity(aut.state_count()),
        |acc, &letter| acc.compose(&transition_of_letter(aut, letter)),
    )
}

/// The transition monoid: all partial injections realized by words, closed
/// under composition and inversion, with one shortest witness word per
/// element and the right-multiplication table by the `2|A|` letters.
#[derive(Clone, Debug)]
pub struct TransitionMonoid {
    state_count: usize,
    letter_count: usize,
    elements: Vec<PartialInjection>,
    witnesses: Vec<Word>,
    position: HashMap<PartialInjection, usize>,
    cayley: Vec<Vec<usize>>,
}

impl TransitionMonoid {
    /// Breadth-first closure of the identity under right multiplication by
    /// the letter transitions. Witnesses are shortest, ties broken by
    /// alphabet order with positive letters first. Fails once more than
    /// `cap` elements appear.
    pub fn generate(aut: &InverseAutomaton, cap: usize) -> Result<Self> {
        let n = aut.state_count();
        let letters: Vec<Letter> = aut.alphabet().letters().collect();
        let letter_maps: Vec<PartialInjection> =
            letters.iter().map(|&l| transition_of_letter(aut, l)).collect();
        let identity = PartialInjection::identity(n);
        let mut elements = vec![identity.clone()];
        let mut witnesses = vec![Word::empty()];
        let mut position = HashMap::from([(identity, 0usize)]);
        let mut cayley: Vec<Vec<usize>> = Vec::new();
        let mut next = 0;
        while next < elements.len() {
            let mut row = Vec::with_capacity(letters.len());
            for (i, lm) in letter_maps.iter().enumerate() {
                let product = elements[next].compose(lm);
                let id = match position.get(&product) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::MonoidCapExceeded { cap });
                        }
                        let id = elements.len();
                        let mut w = witnesses[next].letters().to_vec();
                        w.push(letters[i]);
                        elements.push(product.clone());
                        witnesses.push(Word::new(w));
                        position.insert(product, id);
                        id
                    }
                };
                row.push(id);
            }
            cayley.push(row);
            next += 1;
        }
        Ok(TransitionMonoid {
            state_count: n,
            letter_count: letters.len(),
            elements,
            witnesses,
            position,
            cayley,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Never true; the monoid always contains the identity.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    /// Index of the identity element.
    pub fn identity_id(&self) -> usize {
        0
    }

    pub fn element(&self, id: usize) -> &PartialInjection {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[PartialInjection] {
        &self.elements
    }

    /// A shortest word realizing element `id`.
    pub fn witness(&self, id: usize) -> &Word {
        &self.witnesses[id]
    }

    pub fn position(&self, f: &PartialInjection) -> Option<usize> {
        self.position.get(f).copied()
    }

    pub fn contains(&self, f: &PartialInjection) -> bool {
        self.position.contains_key(f)
    }

    /// Right multiplication by a letter, through the Cayley table.
    pub fn right_multiply_by_letter(&self, id: usize, letter: Letter) -> usize {
        self.cayley[id][letter.generator() * 2 + letter.is_inverse() as usize]
    }

    pub fn letter_count(&self) -> usize {
        self.letter_count
    }

    /// Product of two elements by id.
    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let product = self.elements[a].compose(&self.elements[b]);
        self.position[&product]
    }

    pub fn inverse_id(&self, a: usize) -> usize {
        self.position[&self.elements[a].inverse()]
    }

    /// A finite inverse monoid of partial injections is a group exactly
    /// when every element is a total permutation.
    pub fn is_group(&self) -> bool {
        self.elements.iter().all(PartialInjection::is_total)
    }
}

/// Green's relations of the monoid, each as a partition of element ids.
/// Classes and their members are ordered by first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenClasses {
    pub r: Vec<Vec<usize>>,
    pub l: Vec<Vec<usize>>,
    pub h: Vec<Vec<usize>>,
    pub d: Vec<Vec<usize>>,
}

/// For an inverse monoid of partial injections, two elements are R-related
/// when their domains coincide, L-related when their images coincide, and
/// H-related when both do. D is the join of R and L.
pub fn green_classes(m: &TransitionMonoid) -> GreenClasses {
    let group_by = |key: &dyn Fn(&PartialInjection) -> Vec<usize>| -> Vec<Vec<usize>> {
        let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (id, f) in m.elements().iter().enumerate() {
            classes.entry(key(f)).or_default().push(id);
        }
        let mut out: Vec<Vec<usize>> = classes.into_values().collect();
        out.sort_by_key(|class| class[0]);
        out
    };
    let r = group_by(&|f| f.domain());
    let l = group_by(&|f| f.image());
    let h = {
        let mut classes: BTreeMap<(Vec<usize>, Vec<usize>), Vec<usize>> = BTreeMap::new();
        for (id, f) in m.elements().iter().enumerate() {
            classes.entry((f.domain(), f.image())).or_default().push(id);
        }
        let mut out: Vec<Vec<usize>> = classes.into_values().collect();
        out.sort_by_key(|class| class[0]);
        out
    };
    // D-classes: connected components of the union of R and L
    let mut parent: Vec<usize> = (0..m.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for class in r.iter().chain(l.iter()) {
        for &id in &class[1..] {
            let a = find(&mut parent, class[0]);
            let b = find(&mut parent, id);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut d_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for id in 0..m.len() {
        let root = find(&mut parent, id);
        d_map.entry(root).or_default().push(id);
    }
    let mut d: Vec<Vec<usize>> = d_map.into_values().collect();
    d.sort_by_key(|class| class[0]);
    GreenClasses { r, l, h, d }
}

/// A group H-class: an H-class whose elements all have equal domain and
/// image, together with its identity (the idempotent on that set) and the
/// multiplicative order of every member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHClass {
    /// Element ids of the class, ordered by id.
    pub members: Vec<usize>,
    /// Id of the idempotent identity of the class.
    pub idempotent: usize,
    /// Multiplicative orders, parallel to `members`.
    pub orders: Vec<usize>,
}

/// All group H-classes of the monoid: classes of elements whose domain
/// equals their image. Orders are computed by iterated composition.
pub fn group_h_classes(m: &TransitionMonoid) -> Vec<GroupHClass> {
    let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (id, f) in m.elements().iter().enumerate() {
        let domain = f.domain();
        if domain == f.image() {
            classes.entry(domain).or_default().push(id);
        }
    }
    let mut out = Vec::new();
    for (_, members) in classes {
        let idempotent = *members
            .iter()
            .find(|&&id| m.element(id).is_idempotent())
            .expect("a group H-class contains its idempotent");
        let identity_of_class = m.element(idempotent).clone();
        let orders = members
            .iter()
            .map(|&id| {
                let f = m.element(id);
                let mut power = f.clone();
                let mut order = 1;
                while power != identity_of_class {
                    power = power.compose(f);
                    order += 1;
                    assert!(order <= members.len(), "order exceeds the class size");
                }
                order
            })
            .collect();
        out.push(GroupHClass { members, idempotent, orders });
    }
    out.sort_by_key(|class| class.members[0]);
    out
}

/// Monoid elements realizable by nonempty reduced words, each with one such
/// witness. The closure explores `(element, last letter)` pairs so that the
/// next letter never cancels the last; termination follows from finiteness
/// of the monoid.
#[derive(Clone, Debug)]
pub struct ReducedRealizable {
    pub elements: Vec<PartialInjection>,
    pub witnesses: Vec<ReducedWord>,
}

pub fn reduced_realizable(aut: &InverseAutomaton, cap: usize) -> Result<ReducedRealizable> {
    let letters: Vec<Letter> = aut.alphabet().letters().collect();
    let letter_maps: Vec<PartialInjection> =
        letters.iter().map(|&l| transition_of_letter(aut, l)).collect();
    let mut elements: Vec<PartialInjection> = Vec::new();
    let mut witnesses: Vec<ReducedWord> = Vec::new();
    let mut position: HashMap<PartialInjection, usize> = HashMap::new();
    let mut seen_pairs: HashSet<(usize, Letter)> = HashSet::new();
    // queue entries carry their own witness: the word reaching an element
    // through one pair may end in a different letter than the element's
    // stored witness
    let mut queue: VecDeque<(usize, Letter, ReducedWord)> = VecDeque::new();
    let mut intern = |f: PartialInjection,
                      w: &ReducedWord,
                      elements: &mut Vec<PartialInjection>,
                      witnesses: &mut Vec<ReducedWord>|
     -> Result<usize> {
        if let Some(&id) = position.get(&f) {
            return Ok(id);
        }
        if elements.len() >= cap {
            return Err(Error::MonoidCapExceeded { cap });
        }
        let id = elements.len();
        position.insert(f.clone(), id);
        elements.push(f);
        witnesses.push(w.clone());
        Ok(id)
    };
    for (i, lm) in letter_maps.iter().enumerate() {
        let word = ReducedWord::from(letters[i]);
        let id = intern(lm.clone(), &word, &mut elements, &mut witnesses)?;
        if seen_pairs.insert((id, letters[i])) {
            queue.push_back((id, letters[i], word));
        }
    }
    while let Some((id, last, word)) = queue.pop_front() {
        for (i, lm) in letter_maps.iter().enumerate() {
            let letter = letters[i];
            if letter == last.inverse() {
                continue;
            }
            let product = elements[id].compose(lm);
            let extended = word.mul(&ReducedWord::from(letter));
            let pid = intern(product, &extended, &mut elements, &mut witnesses)?;
            if seen_pairs.insert((pid, letter)) {
                queue.push_back((pid, letter, extended));
            }
        }
    }
    Ok(ReducedRealizable { elements, witnesses })
}

/// The idempotents realizable by nonempty reduced words, with the length of
/// a maximal chain under the natural partial order (domain inclusion, the
/// empty map below everything).
#[derive(Clone, Debug)]
pub struct IdempotentPoset {
    /// Idempotent elements ordered by domain size, then domain.
    pub idempotents: Vec<PartialInjection>,
    /// One nonempty reduced witness per idempotent.
    pub witnesses: Vec<ReducedWord>,
    /// Size of a maximal chain.
    pub chain_length: usize,
}

/// Fails on the trivial subgroup, whose automaton has no nonempty loops at
/// all.
pub fn idempotent_poset(aut: &InverseAutomaton, cap: usize) -> Result<IdempotentPoset> {
    if aut.is_trivial() {
        return Err(Error::TrivialSubgroup);
    }
    let realizable = reduced_realizable(aut, cap)?;
    let mut items: Vec<(PartialInjection, ReducedWord)> = realizable
        .elements
        .into_iter()
        .zip(realizable.witnesses)
        .filter(|(f, _)| f.is_idempotent())
        .collect();
    items.sort_by_key(|(f, _)| (f.domain_size(), f.domain()));
    let (idempotents, witnesses): (Vec<_>, Vec<_>) = items.into_iter().unzip();
    // longest chain under domain inclusion, elements sorted by domain size
    let mut longest = vec![0usize; idempotents.len()];
    let mut chain_length = 0;
    for i in 0..idempotents.len() {
        let mut best = 0;
        for j in 0..i {
            if idempotents[j].domain_size() < idempotents[i].domain_size()
                && idempotents[j].natural_leq(&idempotents[i])
            {
                best = best.max(longest[j]);
            }
        }
        longest[i] = best + 1;
        chain_length = chain_length.max(longest[i]);
    }
    Ok(IdempotentPoset { idempotents, witnesses, chain_length })
}
