use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use dejean::morphisms::{builtins, parse_morphism_file, UniformMorphism};
use dejean::pansiot::{canonical_prefix, decode, encode};
use dejean::search::{default_length, search_convenient_with, SearchOptions};
use dejean::verifier::{kernel_repetitions, tabulated_length, verify, CheckName, VerificationReport, VerifyOptions};
use dejean::words::{max_exponent, BinaryWord, SigmaWord};

#[derive(Parser)]
#[command(
    name = "dejean",
    version,
    about = "Checks and searches uniform morphisms for repetition thresholds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the morphism for one alphabet size, or all of them.
    Verify(VerifyArgs),
    /// Backtracking search for morphisms that pass verification.
    Search(SearchArgs),
    /// Encode a word over {1..n} as a binary codeword.
    Encode {
        #[arg(long)]
        n: usize,
        input: Option<PathBuf>,
    },
    /// Decode a binary codeword into a word over {1..n}.
    Decode {
        #[arg(long)]
        n: usize,
        /// First n-1 letters, default 1 2 … n-1.
        #[arg(long)]
        prefix: Option<String>,
        input: Option<PathBuf>,
    },
    /// Print the largest exponent of any factor, then a witness.
    Exponent { input: Option<PathBuf> },
    /// List repetitions of a binary word whose σ-image is the identity.
    KernelScan {
        #[arg(long)]
        n: usize,
        /// Largest period considered.
        #[arg(long)]
        max_period: Option<usize>,
        input: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Alphabet size, or `all`.
    target: String,
    #[arg(long)]
    json: bool,
    /// Stanza file to take morphisms from instead of the built-in table.
    #[arg(long, env = "DEJEAN_MORPHISMS")]
    morphism_file: Option<PathBuf>,
    /// Scan kernel repetitions of every period.
    #[arg(long)]
    unbounded_kernel_scan: bool,
    /// Leave a check out of the report (repeatable).
    #[arg(long, value_parser = parse_check)]
    skip: Vec<CheckName>,
}

#[derive(Args)]
struct SearchArgs {
    n: usize,
    /// Image length; defaults to 4n-4 (4n for n = 21).
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, default_value_t = 1)]
    limit: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Suppress progress lines.
    #[arg(long, short)]
    quiet: bool,
}

fn parse_check(s: &str) -> Result<CheckName, String> {
    CheckName::parse(s).ok_or_else(|| {
        let names: Vec<&str> = CheckName::ALL.iter().map(|c| c.as_str()).collect();
        format!("unknown check {s:?}; expected one of {}", names.join(", "))
    })
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => text = std::fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
        None => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text.trim().to_string())
}

/// Letters of a generic word: dot-separated integers, or one digit per letter.
fn parse_letters(s: &str) -> Result<Vec<u8>, Failure> {
    if s.is_empty() {
        return Err(Failure("empty input".into()));
    }
    if s.contains('.') {
        s.split('.')
            .enumerate()
            .map(|(k, t)| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|_| Failure(format!("letter {} is not a number: {t:?}", k + 1)))
            })
            .collect()
    } else {
        s.chars()
            .enumerate()
            .map(|(k, c)| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Failure(format!("position {}: unexpected {c:?}", k + 1)))
            })
            .collect()
    }
}

fn parse_binary(s: &str) -> Result<BinaryWord, Failure> {
    if s.is_empty() {
        return Err(Failure("empty input".into()));
    }
    Ok(s.parse::<BinaryWord>()?)
}

fn load_morphisms(file: Option<&Path>) -> Result<Vec<UniformMorphism>, Failure> {
    match file {
        None => Ok(builtins().to_vec()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
            parse_morphism_file(&text).map_err(|e| Failure(format!("{}: {e}", p.display())))
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let from_file = args.morphism_file.is_some();
    let available = load_morphisms(args.morphism_file.as_deref())?;
    let selected: Vec<&UniformMorphism> = if args.target == "all" {
        available.iter().collect()
    } else {
        let n: usize = args
            .target
            .parse()
            .map_err(|_| Failure(format!("expected an alphabet size or `all`, got {:?}", args.target)))?;
        let chosen: Vec<&UniformMorphism> = available.iter().filter(|h| h.n() == n).collect();
        if chosen.is_empty() {
            let hint = if from_file {
                "in the morphism file"
            } else {
                "built in (15..=26); pass --morphism-file"
            };
            return Err(Failure(format!("no morphism for n = {n} {hint}")));
        }
        chosen
    };
    let reports: Vec<VerificationReport> = selected
        .par_iter()
        .map(|h| {
            let exact_length = (!from_file).then(|| tabulated_length(h.n()));
            let options = VerifyOptions {
                skip: args.skip.clone(),
                unbounded_kernel_scan: args.unbounded_kernel_scan,
                exact_length,
            };
            verify(h, &options)
        })
        .collect();
    if args.json {
        let text = if args.target != "all" && reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])?
        } else {
            serde_json::to_string_pretty(&reports)?
        };
        println!("{text}");
    } else {
        for r in &reports {
            print!("{r}");
        }
    }
    Ok(if reports.iter().all(|r| r.overall) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_search(args: &SearchArgs) -> Result<ExitCode, Failure> {
    if args.n < 3 || args.n > 255 {
        return Err(Failure(format!("n must be in 3..=255, got {}", args.n)));
    }
    if args.limit == 0 || args.workers == 0 {
        return Err(Failure("--limit and --workers must be positive".into()));
    }
    let length = args.length.unwrap_or_else(|| default_length(args.n));
    if length < 2 {
        return Err(Failure("--length must be at least 2".into()));
    }
    let quiet = args.quiet;
    let progress = move |p: dejean::search::SearchProgress| {
        if !quiet {
            eprintln!(
                "visited {} words, pools h0={} h1={}, pairs tested {}, verified {}",
                p.visited, p.h0_pool, p.h1_pool, p.pairs_tested, p.verified
            );
        }
    };
    let found = search_convenient_with(
        args.n,
        length,
        args.limit,
        &SearchOptions { workers: args.workers },
        &progress,
    );
    if found.is_empty() {
        eprintln!("no morphism with images of length {length} found for n = {}", args.n);
        return Ok(ExitCode::from(1));
    }
    for (k, h) in found.iter().enumerate() {
        if k > 0 {
            println!();
        }
        print!("{}", dejean::morphisms::emit_morphism_file(std::slice::from_ref(h)));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Verify(args) => cmd_verify(&args),
        Command::Search(args) => cmd_search(&args),
        Command::Encode { n, input } => {
            let text = read_input(input.as_deref())?;
            if text.is_empty() {
                return Err(Failure("empty input".into()));
            }
            let v = SigmaWord::parse(n, &text)?;
            println!("{}", encode(&v)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Decode { n, prefix, input } => {
            let text = read_input(input.as_deref())?;
            let b = parse_binary(&text)?;
            let prefix = match prefix {
                Some(p) => SigmaWord::parse(n, &p)?,
                None => canonical_prefix(n),
            };
            println!("{}", decode(&b, &prefix)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Exponent { input } => {
            let text = read_input(input.as_deref())?;
            let w = parse_letters(&text)?;
            let (e, witness) = max_exponent(&w)?;
            println!("{}/{}", e.numer(), e.denom());
            match witness {
                Some(o) => println!("{o}"),
                None => println!("no repetition"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::KernelScan { n, max_period, input } => {
            if n < 2 {
                return Err(Failure("--n must be at least 2".into()));
            }
            let text = read_input(input.as_deref())?;
            let b = parse_binary(&text)?;
            for o in kernel_repetitions(&b, n, max_period) {
                println!("{o}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
