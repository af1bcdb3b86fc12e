//! The `stallings` binary: build and analyze subgroup automata of free
//! groups from the command line.

mod error;
mod files;
mod output;

use clap::{Args, Parser, Subcommand};
use error::{CliError, Result};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use stallings::{analyze, Alphabet, AnalyzeOptions, EndomorphismSpec, Word, DEFAULT_MONOID_CAP};

#[derive(Parser)]
#[command(name = "stallings", version, about = "Subgroup automata of free groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EndoArgs {
    /// Elementary automorphisms, e.g. "beta a b; alpha c", applied left to
    /// right.
    #[arg(long, conflicts_with = "endo")]
    nielsen: Option<String>,
    /// A JSON file with fields alphabet and images.
    #[arg(long)]
    endo: Option<PathBuf>,
}

impl EndoArgs {
    fn build(&self, alphabet: &Alphabet) -> Result<EndomorphismSpec> {
        match (&self.nielsen, &self.endo) {
            (Some(spec), None) => files::parse_nielsen_spec(spec, alphabet),
            (None, Some(path)) => {
                let e = files::load_endomorphism(path)?;
                if e.alphabet() != alphabet {
                    return Err(CliError::Invariant(
                        "endomorphism alphabet differs from the input's".into(),
                    ));
                }
                Ok(e)
            }
            _ => Err(CliError::Parse(
                "exactly one of --nielsen or --endo is required".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the canonical subgroup automaton from a subgroup file.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide the subgroup properties and print a report per input.
    Analyze {
        inputs: Vec<PathBuf>,
        /// Burnside exponents to test, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4, 6])]
        k: Vec<u32>,
        /// A comma-separated prime set to test; repeat the flag for several
        /// sets.
        #[arg(long, action = clap::ArgAction::Append)]
        pi: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MONOID_CAP)]
        monoid_cap: usize,
        /// text or json.
        #[arg(long, default_value = "text")]
        format: String,
        /// Analyze inputs with a pool of this many workers.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Apply an endomorphism to the subgroup and write the image automaton.
    Apply {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        endo: EndoArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the automaton in DOT format.
    ExportDot {
        #[arg(long)]
        input: PathBuf,
    },
    /// Test whether a word lies in the subgroup.
    Member {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Print the index of the subgroup.
    Index {
        #[arg(long)]
        input: PathBuf,
    },
    /// Write the automaton of the conjugate subgroup w·K·w⁻¹.
    Conjugate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the automaton of the intersection of two subgroups.
    Intersect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Test whether two subgroups are conjugate by comparing cores.
    ConjugacyTest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// List the transition monoid, Green's classes, and idempotent poset.
    Monoid {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MONOID_CAP)]
        monoid_cap: usize,
    },
    /// Test whether an endomorphism is an automorphism.
    IsAutomorphism {
        /// Generator names, comma separated (for --nielsen).
        #[arg(long, value_delimiter = ',')]
        alphabet: Vec<String>,
        #[command(flatten)]
        endo: EndoArgs,
    },
    /// Test whether a finite-index subgroup satisfies group identities,
    /// given as words over a variable alphabet.
    Identities {
        #[arg(long)]
        input: PathBuf,
        /// Variable names, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = ["x".to_string(), "y".to_string(), "z".to_string()])]
        variables: Vec<String>,
        /// An identity word over the variables; repeat for several.
        #[arg(long, action = clap::ArgAction::Append, required = true)]
        identity: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MONOID_CAP)]
        monoid_cap: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("stallings: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn parse_pi_sets(raw: &[String]) -> Result<Vec<Vec<u64>>> {
    if raw.is_empty() {
        return Ok(vec![vec![2], vec![3], vec![2, 3]]);
    }
    raw.iter()
        .map(|set| {
            set.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u64>()
                        .map_err(|_| CliError::Parse(format!("`{p}` is not a prime")))
                        .and_then(|p| {
                            if is_prime(p) {
                                Ok(p)
                            } else {
                                Err(CliError::Parse(format!("`{p}` is not a prime")))
                            }
                        })
                })
                .collect()
        })
        .collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Build { input, out } => {
            let aut = files::load_automaton(&input)?;
            files::write_automaton(&aut, &out)?;
            Ok(())
        }
        Command::Analyze { inputs, k, pi, monoid_cap, format, jobs } => {
            if inputs.is_empty() {
                return Err(CliError::Parse("no input files".into()));
            }
            if format != "text" && format != "json" {
                return Err(CliError::Parse(format!("unknown format `{format}`")));
            }
            let options = AnalyzeOptions {
                burnside: k,
                prime_sets: parse_pi_sets(&pi)?,
                monoid_cap,
            };
            let results = analyze_all(&inputs, &options, &format, jobs.max(1));
            let mut failure: Option<CliError> = None;
            for (path, result) in inputs.iter().zip(results) {
                match result {
                    Ok(text) => print!("{text}"),
                    Err(e) => {
                        eprintln!("stallings: {}: {e}", path.display());
                        if failure.is_none() {
                            failure = Some(e);
                        }
                    }
                }
            }
            match failure {
                None => Ok(()),
                Some(e) => Err(e),
            }
        }
        Command::Apply { input, endo, out } => {
            let aut = files::load_automaton(&input)?;
            let spec = endo.build(aut.alphabet())?;
            let image = aut.apply_endo(&spec)?;
            files::write_automaton(&image, &out)?;
            Ok(())
        }
        Command::ExportDot { input } => {
            let aut = files::load_automaton(&input)?;
            print!("{}", output::dot(&aut));
            Ok(())
        }
        Command::Member { input, word } => {
            let aut = files::load_automaton(&input)?;
            let word = Word::parse(&word, aut.alphabet()).map_err(CliError::from)?;
            print!("{}", output::member_line(&aut, &word));
            Ok(())
        }
        Command::Index { input } => {
            let aut = files::load_automaton(&input)?;
            println!("index: {}", aut.index());
            Ok(())
        }
        Command::Conjugate { input, word, out } => {
            let aut = files::load_automaton(&input)?;
            let word = stallings::ReducedWord::parse(&word, aut.alphabet())?;
            files::write_automaton(&aut.conjugate(&word), &out)?;
            Ok(())
        }
        Command::Intersect { input, other, out } => {
            let a = files::load_automaton(&input)?;
            let b = files::load_automaton(&other)?;
            files::write_automaton(&a.intersect(&b)?, &out)?;
            Ok(())
        }
        Command::ConjugacyTest { input, other } => {
            let a = files::load_automaton(&input)?;
            let b = files::load_automaton(&other)?;
            match a.conjugacy_witness(&b) {
                Some(w) => {
                    println!("conjugate: true");
                    println!("witness: {}", w.display(a.alphabet()));
                }
                None => println!("conjugate: false"),
            }
            Ok(())
        }
        Command::Monoid { input, monoid_cap } => {
            let aut = files::load_automaton(&input)?;
            print!("{}", output::monoid_listing(&aut, monoid_cap)?);
            Ok(())
        }
        Command::Identities { input, variables, identity, monoid_cap } => {
            let aut = files::load_automaton(&input)?;
            let vars = Alphabet::new(variables)?;
            let identities = identity
                .iter()
                .map(|text| Ok(Word::parse(text, &vars)?))
                .collect::<Result<Vec<_>>>()?;
            let distinct: std::collections::BTreeSet<usize> = identities
                .iter()
                .flat_map(|w| w.letters().iter().map(|l| l.generator()))
                .collect();
            if distinct.len() > 3 {
                eprintln!(
                    "stallings: warning: {} variables means |M|^{} assignments; this may be slow",
                    distinct.len(),
                    distinct.len()
                );
            }
            let holds =
                stallings::analysis::satisfies_group_identities(&aut, &identities, monoid_cap)?;
            println!("satisfied: {holds}");
            Ok(())
        }
        Command::IsAutomorphism { alphabet, endo } => {
            let spec = match &endo.endo {
                Some(path) => files::load_endomorphism(path)?,
                None => {
                    if alphabet.is_empty() {
                        return Err(CliError::Parse(
                            "--alphabet is required with --nielsen".into(),
                        ));
                    }
                    let alphabet = Alphabet::new(alphabet.clone())?;
                    endo.build(&alphabet)?
                }
            };
            println!("automorphism: {}", stallings::analysis::is_automorphism(&spec));
            Ok(())
        }
    }
}

/// Analyzes the inputs with a worker pool. Results come back in input
/// order, so output is deterministic regardless of scheduling.
fn analyze_all(
    inputs: &[PathBuf],
    options: &AnalyzeOptions,
    format: &str,
    jobs: usize,
) -> Vec<Result<String>> {
    let analyze_one = |path: &PathBuf| -> Result<String> {
        let aut = files::load_automaton(path)?;
        let report = analyze(&aut, options).map_err(CliError::from)?;
        let name = path.display().to_string();
        Ok(match format {
            "json" => output::report_json(&name, &report),
            _ => output::report_text(&name, &report),
        })
    };
    if jobs == 1 || inputs.len() == 1 {
        return inputs.iter().map(analyze_one).collect();
    }
    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<Result<String>>>> =
        inputs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(inputs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= inputs.len() {
                    break;
                }
                let outcome = analyze_one(&inputs[i]);
                *results[i].lock().unwrap() = Some(outcome);
            });
        }
    });
    results
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("worker filled every slot"))
        .collect()
}
