use std::path::PathBuf;
use std::process::ExitCode;

use cantorlab_cli::*;
use cantorlab_core::rational::parse_rat;
use cantorlab_core::{Error, Params, Rat};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cantorlab", version, about = "Translation codes, uniqueness and self-similarity for homogeneous Cantor sets")]
struct Cli {
    /// Treat an undetermined verdict as failure (exit code 4).
    #[arg(long, global = true)]
    strict: bool,
    /// Step cap for lexicographic uniqueness tests.
    #[arg(long, global = true, env = DEPTH_CAP_ENV, default_value_t = default_depth_cap())]
    depth_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Base {
    #[arg(long = "N")]
    n: u32,
    /// Rational, e.g. `7/25` or `0.28`.
    #[arg(long)]
    beta: String,
}

impl Base {
    fn params(&self) -> Result<Params, Error> {
        Params::new(self.n, parse_rat(&self.beta)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Critical bases and critical translations.
    CriticalPoints {
        #[arg(long, default_value_t = 2)]
        n_from: u32,
        #[arg(long, default_value_t = 10)]
        n_to: u32,
        #[arg(long, default_value = "1e-6")]
        tol: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// SVG of the first levels of Γ and Γ + t.
    Figure {
        #[command(flatten)]
        base: Base,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniqueness of a code `pre|per` over Ω_±N.
    Unique {
        #[command(flatten)]
        base: Base,
        #[arg(long, allow_hyphen_values = true)]
        code: String,
        #[arg(long, default_value_t = 40)]
        depth: usize,
    },
    /// Membership in 𝒮, witness and generating IFS.
    Selfsimilar {
        #[command(flatten)]
        base: Base,
        #[arg(long, allow_hyphen_values = true)]
        code: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Hausdorff and packing dimension of Γ ∩ (Γ + t).
    Dims {
        #[command(flatten)]
        base: Base,
        #[arg(long, allow_hyphen_values = true)]
        code: String,
    },
    /// Prefix tree of codes of t.
    Codes {
        #[command(flatten)]
        base: Base,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        node_cap: usize,
    },
    /// Prefix of the Thue-Morse type sequence over Ω_m.
    Lambda {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 32)]
        len: usize,
    },
    /// Quasi-greedy expansion of x.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 32)]
        len: usize,
    },
    /// Regime of 𝒰 and 𝒮 at (N, β).
    Classify {
        #[command(flatten)]
        base: Base,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
    },
    /// Count words passing the finite uniqueness windows.
    Enumerate {
        #[command(flatten)]
        base: Base,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
}

enum Failure {
    Core(Error),
    Undetermined(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn parse_tol(text: &str) -> Result<Rat, Error> {
    let tol = match text.split_once(['e', 'E']) {
        Some((mant, exp)) => {
            let exp: i32 = exp.parse().map_err(|_| Error::Domain(format!("bad exponent in {text}")))?;
            let ten = Rat::from_integer(10.into());
            let scale = if exp >= 0 {
                cantorlab_core::rational::pow(&ten, exp as usize)
            } else {
                cantorlab_core::rational::pow(&ten, exp.unsigned_abs() as usize).recip()
            };
            parse_rat(mant)? * scale
        }
        None => parse_rat(text)?,
    };
    if tol <= Rat::from_integer(0.into()) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    Ok(tol)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<String, Failure> {
    Ok(match cli.command {
        Command::CriticalPoints { n_from, n_to, tol, format } => {
            let format = match format {
                Format::Table => TableFormat::Table,
                Format::Csv => TableFormat::Csv,
                Format::Json => TableFormat::Json,
            };
            critical_points(n_from, n_to, &parse_tol(&tol)?, format)?
        }
        Command::Figure { base, t, levels, out } => {
            let svg = figure_svg(&base.params()?, &parse_rat(&t)?, levels)?;
            write_atomic(&out, &svg).map_err(Failure::Io)?;
            format!("wrote {}\n", out.display())
        }
        Command::Unique { base, code, depth } => {
            let (report, lex) = unique(&base.params()?, parse_code(base.n, &code)?, depth, cli.depth_cap)?;
            if cli.strict && lex.decided().is_none() {
                return Err(Failure::Undetermined(json(&report)));
            }
            json(&report)
        }
        Command::Selfsimilar { base, code, depth } => {
            json(&selfsimilar(&base.params()?, parse_code(base.n, &code)?, depth)?)
        }
        Command::Dims { base, code } => json(&dimensions(&base.params()?, parse_code(base.n, &code)?)?),
        Command::Codes { base, t, depth, node_cap } => codes(&base.params()?, &parse_rat(&t)?, depth, node_cap)?,
        Command::Lambda { m, len } => lambda(m, len)?,
        Command::Expand { x, beta, m, len } => expand(&parse_rat(&x)?, &parse_rat(&beta)?, m, len)?,
        Command::Classify { base, format } => {
            let report = classify_params(&base.params()?)?;
            match format {
                TextOrJson::Json => json(&report),
                TextOrJson::Text => format!("U: {}\nS: {}\n", report.u, report.s),
            }
        }
        Command::Enumerate { base, depth } => json(&enumerate(&base.params()?, depth)?),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Undetermined(text)) => {
            print!("{text}");
            eprintln!("error: verdict undetermined within the depth cap");
            ExitCode::from(4)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. }
                | Error::AlphabetMismatch(..)
                | Error::DigitOutOfRange { .. }
                | Error::EmptyPeriod
                | Error::InvalidParams(_)
                | Error::Domain(_) => 2,
                Error::Tolerance { .. } => 3,
                _ => 1,
            })
        }
    }
}
