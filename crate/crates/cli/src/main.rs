use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wallis::pte::PTEQuery;
use wallis::Error;
use wallis_cli::commands::{self, Outcome, Settings, DEFAULT_CAP, DEFAULT_PREC, DEFAULT_TOL, EXIT_PARSE};
use wallis_cli::reproduce::cmd_reproduce;
use wallis_cli::specfile::SpecFile;

#[derive(Parser)]
#[command(
    name = "wallis",
    version,
    about = "Certified evaluation of Wallis-type infinite products"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PREC)]
    prec: u32,
    /// Target absolute tolerance for certified values.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Number of explicit product terms before the tail estimate.
    #[arg(long, global = true)]
    terms: Option<u64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Precision escalation stops past this many bits.
    #[arg(long, env = "WALLIS_PREC_CAP", default_value_t = DEFAULT_CAP, hide = true)]
    prec_cap: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report the power-sum constraints of a spec file.
    Check { file: PathBuf },
    /// Evaluate the product with a certified error bound.
    Eval { file: PathBuf },
    /// Print the closed form and its value.
    ClosedForm { file: PathBuf },
    /// Evaluate both routes (and `expect`, if given) and compare.
    Compare { file: PathBuf },
    /// Emit the Type-II analogue of a Type-I spec.
    Analogue { file: PathBuf },
    /// Reduce a Type-II product through its double-product form.
    Double { file: PathBuf },
    /// Emit the spec whose value is 2cos(pi/2^(K+1)).
    Radical { k: u32 },
    /// Emit a spec whose value is P/Q.
    Rational { p: i64, q: i64 },
    /// Search equal-power-sum multiset pairs.
    Pte {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        size: u32,
        #[arg(long)]
        height: u32,
        #[arg(long)]
        limit: Option<usize>,
        /// Print each solution as a spec file.
        #[arg(long)]
        emit_specs: bool,
    },
    /// Check every identity in the built-in table.
    Reproduce {
        /// Perturb the closed-form value of this row (1-based).
        #[arg(long, hide = true)]
        corrupt_row: Option<usize>,
    },
}

fn load(path: &PathBuf) -> Result<SpecFile, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    SpecFile::parse(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn run(cmd: Cmd, s: &Settings) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Check { file } => Ok(commands::cmd_check(&load(&file)?)),
        Cmd::Eval { file } => commands::cmd_eval(&load(&file)?, s),
        Cmd::ClosedForm { file } => commands::cmd_closed_form(&load(&file)?, s),
        Cmd::Compare { file } => commands::cmd_compare(&load(&file)?, s),
        Cmd::Analogue { file } => commands::cmd_analogue(&load(&file)?),
        Cmd::Double { file } => commands::cmd_double(&load(&file)?),
        Cmd::Radical { k } => commands::cmd_radical(k),
        Cmd::Rational { p, q } => commands::cmd_rational(p, q),
        Cmd::Pte {
            order,
            size,
            height,
            limit,
            emit_specs,
        } => {
            let mut q = PTEQuery::new(order, size, height);
            if let Some(l) = limit {
                q = q.with_limit(l);
            }
            commands::cmd_pte(&q, emit_specs)
        }
        Cmd::Reproduce { corrupt_row } => cmd_reproduce(s, corrupt_row),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let g = cli.global;
    let settings = Settings {
        prec: g.prec,
        tol: g.tol,
        terms: g.terms,
        cap: g.prec_cap.max(g.prec),
    };
    let out = run(cli.cmd, &settings).unwrap_or_else(|e| Outcome::from_error(&e));
    let rendered = out.render(g.json);
    if out.code != 0 && !g.json && rendered.starts_with("error:") {
        eprint!("{rendered}");
    } else {
        print!("{rendered}");
    }
    ExitCode::from(out.code as u8)
}
