//! On-disk formats: a subgroup is an alphabet with generator words, an
//! automaton is an explicit state/edge list. Field order is fixed so output
//! is byte-stable.

use crate::error::{CliError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;
use stallings::{Alphabet, EndomorphismSpec, InverseAutomaton, ReducedWord, Word};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupFile {
    pub alphabet: Vec<String>,
    pub generators: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub basepoint: usize,
    pub edges: Vec<(usize, String, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndomorphismFile {
    pub alphabet: Vec<String>,
    pub images: Vec<String>,
}

/// Any input file: a subgroup presentation or an explicit automaton.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum InputFile {
    Subgroup(SubgroupFile),
    Automaton(AutomatonFile),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Parse(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

impl SubgroupFile {
    pub fn build(&self) -> Result<InverseAutomaton> {
        let alphabet = Alphabet::new(self.alphabet.clone())?;
        let generators = self
            .generators
            .iter()
            .map(|w| Ok(ReducedWord::parse(w, &alphabet)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(InverseAutomaton::stallings(alphabet, &generators)?)
    }
}

impl AutomatonFile {
    pub fn build(&self) -> Result<InverseAutomaton> {
        let alphabet = Alphabet::new(self.alphabet.clone())?;
        let edges = self
            .edges
            .iter()
            .map(|(s, name, t)| {
                let g = alphabet
                    .index_of(name)
                    .ok_or_else(|| stallings::Error::UnknownGenerator(name.clone()))?;
                Ok::<_, CliError>((*s, g, *t))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InverseAutomaton::from_parts(
            alphabet,
            self.states,
            self.basepoint,
            &edges,
        )?)
    }

    pub fn from_automaton(aut: &InverseAutomaton) -> AutomatonFile {
        AutomatonFile {
            alphabet: (0..aut.alphabet().len())
                .map(|g| aut.alphabet().name(g).to_string())
                .collect(),
            states: aut.state_count(),
            basepoint: aut.basepoint(),
            edges: aut
                .positive_edges()
                .into_iter()
                .map(|(s, g, t)| (s, aut.alphabet().name(g).to_string(), t))
                .collect(),
        }
    }
}

impl EndomorphismFile {
    pub fn build(&self) -> Result<EndomorphismSpec> {
        let alphabet = Alphabet::new(self.alphabet.clone())?;
        let images = self
            .images
            .iter()
            .map(|w| Ok(Word::parse(w, &alphabet)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(EndomorphismSpec::new(alphabet, images)?)
    }
}

/// Loads either file shape and builds the (canonical) automaton.
pub fn load_automaton(path: &Path) -> Result<InverseAutomaton> {
    let text = read(path)?;
    match parse_json::<InputFile>(&text, path)? {
        InputFile::Subgroup(subgroup) => subgroup.build(),
        InputFile::Automaton(automaton) => automaton.build(),
    }
}

pub fn load_endomorphism(path: &Path) -> Result<EndomorphismSpec> {
    let text = read(path)?;
    parse_json::<EndomorphismFile>(&text, path)?.build()
}

/// Serializes an automaton file; byte-stable for a fixed automaton.
pub fn render_automaton(aut: &InverseAutomaton) -> String {
    let file = AutomatonFile::from_automaton(aut);
    let mut out = serde_json::to_string_pretty(&file).expect("serializable");
    out.push('\n');
    out
}

pub fn write_automaton(aut: &InverseAutomaton, path: &Path) -> Result<()> {
    std::fs::write(path, render_automaton(aut))
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Parses a semicolon-separated elementary automorphism list such as
/// `"beta a b; alpha c; betainv b a"`, applied left to right.
pub fn parse_nielsen_spec(text: &str, alphabet: &Alphabet) -> Result<EndomorphismSpec> {
    let mut spec = EndomorphismSpec::identity(alphabet.clone());
    for part in text.split(';') {
        let tokens: Vec<&str> = part.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let gen = |name: &str| {
            alphabet
                .index_of(name)
                .ok_or_else(|| CliError::Parse(format!("unknown generator `{name}`")))
        };
        let step = match tokens.as_slice() {
            [kind, a] if kind.eq_ignore_ascii_case("alpha") => {
                stallings::Nielsen::Alpha(gen(a)?)
            }
            [kind, a, b] if kind.eq_ignore_ascii_case("beta") => {
                stallings::Nielsen::Beta(gen(a)?, gen(b)?)
            }
            [kind, a, b] if kind.eq_ignore_ascii_case("betainv") => {
                stallings::Nielsen::BetaInv(gen(a)?, gen(b)?)
            }
            _ => {
                return Err(CliError::Parse(format!(
                    "malformed elementary automorphism `{}`",
                    part.trim()
                )))
            }
        };
        let elementary = EndomorphismSpec::nielsen(alphabet, step)?;
        spec = spec.compose(&elementary)?;
    }
    Ok(spec)
}
