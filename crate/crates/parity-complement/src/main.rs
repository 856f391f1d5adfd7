//! Thin command-line front end over the library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or format error,
//! 3 state cap exceeded.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use parity_complement::{
    beta_letter, buchi_emptiness, build_complement, complement_correctness_check, default_h,
    enumerate_fnhts, enumerate_mfts, gamma_letter, hard_word, parity_lasso_member,
    parity_to_buchi, tightness_report, Automaton, BuchiAutomaton, EnumOptions, Error,
    FullAutomaton, LassoWord, ParityAutomaton,
};

#[derive(Parser)]
#[command(name = "parity-complement", version, about = "Complementation of transition-based parity automata via flattened nested history trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the complement Büchi automaton of a parity automaton
    Complement {
        /// Input automaton JSON file, `-` for stdin
        #[arg(long)]
        input: String,
        /// Write the result here instead of stdout
        #[arg(long)]
        output: Option<String>,
        /// Abort once this many states are reached
        #[arg(long)]
        cap: Option<usize>,
        /// Print per-phase state counts to stderr
        #[arg(long)]
        stats: bool,
    },
    /// Decide membership of an ultimately periodic word
    Member {
        #[arg(long)]
        input: String,
        /// Comma-separated letter names of the finite prefix
        #[arg(long, default_value = "")]
        prefix: String,
        /// Comma-separated letter names of the repeated period
        #[arg(long)]
        period: String,
    },
    /// Decide language emptiness, printing a witness lasso when non-empty
    Empty {
        #[arg(long)]
        input: String,
    },
    /// Enumerate the trees over a state universe
    Enumerate {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        max_priority: i32,
        /// Enumerate marked trees instead of plain ones
        #[arg(long)]
        marked: bool,
        /// Keep only trees whose root carries the whole universe
        #[arg(long)]
        full_only: bool,
        /// Print only the count
        #[arg(long)]
        count: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Emit a hard input word for a full tree over the given universe
    Hardword {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        max_priority: i32,
        /// Index into the enumeration of full trees
        #[arg(long, default_value_t = 0)]
        tree_index: usize,
        /// Period length; defaults to one more than the number of trees
        #[arg(long)]
        h: Option<usize>,
    },
    /// Verify a complement against the direct membership oracle
    Check {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 2)]
        prefix_bound: usize,
        #[arg(long, default_value_t = 3)]
        period_bound: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Count state-space ingredients and check the 4n+1 bound
    Tightness {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        max_priority: i32,
        #[arg(long)]
        cap: Option<usize>,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_parity(path: &str) -> Result<ParityAutomaton, Error> {
    match Automaton::from_json_str(&read_input(path)?)? {
        Automaton::Parity(p) => Ok(p),
        Automaton::Buchi(_) => Err(Error::Format(
            "expected a parity automaton, got a buchi one".into(),
        )),
    }
}

fn parse_word<A>(a: &A, prefix: &str, period: &str) -> Result<LassoWord, Error>
where
    A: LetterLookup,
{
    let parse = |s: &str| -> Result<Vec<usize>, Error> {
        if s.is_empty() {
            return Ok(Vec::new());
        }
        s.split(',').map(|l| a.lookup(l.trim())).collect()
    };
    LassoWord::new(parse(prefix)?, parse(period)?)
}

trait LetterLookup {
    fn lookup(&self, name: &str) -> Result<usize, Error>;
    fn letter_name(&self, i: usize) -> &str;
}

impl LetterLookup for ParityAutomaton {
    fn lookup(&self, name: &str) -> Result<usize, Error> {
        self.letter_index(name)
    }
    fn letter_name(&self, i: usize) -> &str {
        &self.alphabet()[i]
    }
}

impl LetterLookup for BuchiAutomaton {
    fn lookup(&self, name: &str) -> Result<usize, Error> {
        self.letter_index(name)
    }
    fn letter_name(&self, i: usize) -> &str {
        &self.alphabet()[i]
    }
}

fn render_word<A: LetterLookup>(a: &A, w: &LassoWord) -> String {
    let names = |ls: &[usize]| {
        ls.iter()
            .map(|&l| a.letter_name(l).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("{}({})^w", names(w.prefix()), names(w.period()))
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Complement {
            input,
            output,
            cap,
            stats,
        } => {
            let p = read_parity(&input)?;
            let c = build_complement(&p, cap)?;
            if stats {
                eprintln!(
                    "states: {} ({} subset + {} tree), transitions: {}",
                    c.automaton.num_states(),
                    c.subset_states,
                    c.tree_states,
                    c.automaton.transitions().len()
                );
            }
            let json = Automaton::Buchi(c.automaton).to_json_string();
            match output {
                Some(path) => std::fs::write(path, json + "\n")?,
                None => println!("{json}"),
            }
            Ok(true)
        }
        Command::Member {
            input,
            prefix,
            period,
        } => {
            let member = match Automaton::from_json_str(&read_input(&input)?)? {
                Automaton::Parity(p) => {
                    let w = parse_word(&p, &prefix, &period)?;
                    parity_lasso_member(&p, &w)?
                }
                Automaton::Buchi(b) => {
                    let w = parse_word(&b, &prefix, &period)?;
                    parity_complement::buchi_lasso_member(&b, &w)?
                }
            };
            println!("{}", if member { "member" } else { "not a member" });
            Ok(true)
        }
        Command::Empty { input } => {
            let b = match Automaton::from_json_str(&read_input(&input)?)? {
                Automaton::Parity(p) => parity_to_buchi(&p),
                Automaton::Buchi(b) => b,
            };
            let verdict = buchi_emptiness(&b);
            match verdict.lasso {
                None => println!("empty"),
                Some(w) => println!("non-empty: {}", render_word(&b, &w)),
            }
            Ok(true)
        }
        Command::Enumerate {
            states,
            max_priority,
            marked,
            full_only,
            count,
            cap,
        } => {
            let opts = EnumOptions { full_only, cap };
            let names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
            let docs: Vec<String> = if marked {
                enumerate_mfts(states, max_priority, &opts)?
                    .iter()
                    .map(|m| m.to_json_string(&names))
                    .collect()
            } else {
                enumerate_fnhts(states, max_priority, &opts)?
                    .iter()
                    .map(|t| t.to_json_string(&names))
                    .collect()
            };
            if count {
                println!("{}", docs.len());
            } else {
                println!("[{}]", docs.join(","));
            }
            Ok(true)
        }
        Command::Hardword {
            states,
            max_priority,
            tree_index,
            h,
        } => {
            let full = enumerate_fnhts(
                states,
                max_priority,
                &EnumOptions {
                    full_only: true,
                    cap: None,
                },
            )?;
            let t = full
                .get(tree_index)
                .ok_or_else(|| Error::Format(format!("tree index out of range (have {})", full.len())))?;
            let priorities: Vec<i32> = (1..=max_priority).collect();
            let mut fa = FullAutomaton::new(states, &priorities)?;
            let h = match h {
                Some(h) => h,
                None => default_h(states, max_priority)?,
            };
            let w = hard_word(&mut fa, t, h)?;
            let names = fa.state_names();
            let doc = serde_json::json!({
                "automaton": serde_json::from_str::<serde_json::Value>(
                    &Automaton::Parity(fa.to_parity()).to_json_string()
                ).expect("valid json"),
                "tree": serde_json::from_str::<serde_json::Value>(&t.to_json_string(&names))
                    .expect("valid json"),
                "beta": serde_json::from_str::<serde_json::Value>(
                    &beta_letter(t, &priorities).to_json_string(&names)
                ).expect("valid json"),
                "gamma": serde_json::from_str::<serde_json::Value>(
                    &gamma_letter(t, &priorities).to_json_string(&names)
                ).expect("valid json"),
                "word": {
                    "prefix": [],
                    "period": w.period().iter()
                        .map(|&l| fa.letter_names()[l].clone())
                        .collect::<Vec<_>>(),
                },
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
            Ok(true)
        }
        Command::Check {
            input,
            prefix_bound,
            period_bound,
            cap,
        } => {
            let p = read_parity(&input)?;
            let report = complement_correctness_check(&p, prefix_bound, period_bound, cap)?;
            println!(
                "disjointness: {}",
                if report.disjoint { "ok" } else { "VIOLATED" }
            );
            println!(
                "coverage: {} words, {} counterexamples",
                report.words_checked,
                report.counterexamples.len()
            );
            println!("complement states: {}", report.complement_states);
            Ok(report.pass())
        }
        Command::Tightness {
            states,
            max_priority,
            cap,
            json,
        } => {
            let report = tightness_report(states, max_priority, cap)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("valid json")
                );
            } else {
                print!("{}", report.to_text());
            }
            Ok(report.holds())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::CapExceeded { cap }) => {
            eprintln!("error: state cap {cap} exceeded");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
