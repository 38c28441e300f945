//! `qkm`: run relation suites and identity checks from the command line.
//!
//! Exit codes: 0 everything holds, 1 a relation or identity fails,
//! 2 bad input, 3 a cost guard tripped.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qkm::harness::{run_suite, RelationReport, RelationTag, SuiteConfig};
use qkm::identities::{
    diff_lemma_suite, hl_expand, hl_poly, parse_tuple, ser2_expression, ser3_check,
    serre_coefficient_check,
};
use qkm::lattice::CartanData;
use qkm::polyring::MultiPoly;
use qkm::qcoeff::{q_binom_theorem_check, q_binom_vanishing_check};
use qkm::{Error, Verdict};

/// Largest rank accepted on the command line.
const MAX_RANK: usize = 16;

#[derive(Parser)]
#[command(
    name = "qkm",
    version,
    about = "Exact checks for vertex-operator representations of quantum Kac-Moody algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the defining relations on a bounded part of the Fock space.
    Verify {
        /// Cartan matrix file: {"rank": l, "matrix": [[...], ...]}.
        matrix: PathBuf,
        /// Maximal Heisenberg degree of basis vectors.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Lattice coordinates range over [-box, box].
        #[arg(long = "box", default_value_t = 1)]
        lattice_box: u32,
        /// Modes range over [-modes, modes].
        #[arg(long, default_value_t = 2)]
        modes: i64,
        /// Comma-separated relation tags, e.g. r8,serre. Defaults to all.
        #[arg(long, value_delimiter = ',')]
        relations: Option<Vec<String>>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Also run the standalone identities.
        #[arg(long)]
        identities: bool,
        /// Write the JSON report here.
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Check one of the polynomial identities.
    Identity {
        #[arg(long, value_enum)]
        name: IdentityName,
        #[arg(long, default_value_t = 3)]
        m: u32,
    },
    /// Print a Hall-Littlewood polynomial or expand a polynomial in them.
    Hl {
        /// Partition such as 2,1,1.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Number of variables; defaults to the length of lambda.
        #[arg(long)]
        vars: Option<usize>,
        /// File holding a symmetric polynomial in canonical text.
        #[arg(long)]
        expand_file: Option<PathBuf>,
    },
    /// Check the q-difference lemmas up to n-max.
    Diff {
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityName {
    Ser2,
    Ser3,
    Binom,
    SerreCoeff,
}

enum Failure {
    Input(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CostGuard(_) => Failure::Guard(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn read(path: &PathBuf) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn verify(
    matrix: PathBuf,
    degree: u32,
    lattice_box: u32,
    modes: i64,
    relations: Option<Vec<String>>,
    workers: Option<usize>,
    identities: bool,
    json_out: Option<PathBuf>,
) -> Outcome {
    let cartan = CartanData::from_json(&read(&matrix)?)?;
    if cartan.rank() > MAX_RANK {
        return Err(Failure::Input(format!(
            "rank {} exceeds the command-line limit of {MAX_RANK}",
            cartan.rank()
        )));
    }
    let mut cfg = SuiteConfig::new(cartan);
    cfg.degree_cap = degree;
    cfg.lattice_box = lattice_box;
    cfg.mode_range = modes;
    cfg.include_identities = identities;
    if let Some(tags) = relations {
        cfg.relations = tags
            .iter()
            .map(|t| t.parse::<RelationTag>())
            .collect::<qkm::Result<_>>()?;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let report = run_suite(&cfg)?;
    print!("{}", report.render_text());
    if let Some(path) = json_out {
        fs::write(&path, report.to_json())
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(report.all_pass())
}

fn print_verdict(label: &str, v: &Verdict) -> bool {
    match &v.witness {
        None => println!("{label}: holds"),
        Some(w) => println!("{label}: FAILS\n  witness: {w}"),
    }
    v.holds
}

fn identity(name: IdentityName, m: u32) -> Outcome {
    if m == 0 {
        return Err(Failure::Input("--m must be at least 1".into()));
    }
    Ok(match name {
        IdentityName::Ser2 => {
            let e = ser2_expression(m);
            if e.is_zero() {
                println!("ser2 (m={m}): identically zero");
                true
            } else {
                println!("ser2 (m={m}): nonzero\n  witness: {e}");
                false
            }
        }
        IdentityName::Ser3 => print_verdict(&format!("ser3 (m={m})"), &ser3_check(m)),
        IdentityName::SerreCoeff => {
            print_verdict(&format!("serre-coeff (m={m})"), &serre_coefficient_check(m))
        }
        IdentityName::Binom => {
            let a = print_verdict(&format!("binom theorem (n={m})"), &q_binom_theorem_check(m));
            let b = print_verdict(
                &format!("binom vanishing (n={m})"),
                &q_binom_vanishing_check(m),
            );
            a && b
        }
    })
}

fn hl(lambda: Option<String>, vars: Option<usize>, expand_file: Option<PathBuf>) -> Outcome {
    match (lambda, expand_file) {
        (Some(text), None) => {
            let parts = parse_tuple(&text)?;
            if parts.iter().any(|p| *p < 0) || parts.windows(2).any(|w| w[0] < w[1]) {
                return Err(Failure::Input(format!("`{text}` is not a partition")));
            }
            let exps: Vec<i32> = parts.iter().map(|p| *p as i32).collect();
            let m = vars.unwrap_or(exps.len());
            println!("{}", hl_poly(&exps, m)?);
            Ok(true)
        }
        (None, Some(path)) => {
            let m = vars.ok_or_else(|| Failure::Input("--expand-file needs --vars".into()))?;
            let poly = MultiPoly::parse(m, &read(&path)?)?;
            for (lambda, c) in hl_expand(&poly, m)? {
                println!("P[{lambda}]: {c}");
            }
            Ok(true)
        }
        _ => Err(Failure::Input(
            "give exactly one of --lambda and --expand-file".into(),
        )),
    }
}

fn report_lines(r: &RelationReport) -> bool {
    println!(
        "{} {}: {} checks",
        if r.passed() { "PASS" } else { "FAIL" },
        r.relation,
        r.instances_checked
    );
    for w in &r.witnesses {
        println!("  witness: {}: {}", w.word, w.actual);
    }
    r.passed()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify {
            matrix,
            degree,
            lattice_box,
            modes,
            relations,
            workers,
            identities,
            json_out,
        } => verify(
            matrix,
            degree,
            lattice_box,
            modes,
            relations,
            workers,
            identities,
            json_out,
        ),
        Command::Identity { name, m } => identity(name, m),
        Command::Hl {
            lambda,
            vars,
            expand_file,
        } => hl(lambda, vars, expand_file),
        Command::Diff { n_max } => Ok(report_lines(&diff_lemma_suite(n_max))),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
