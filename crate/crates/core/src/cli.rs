//! Command-line front end.
//!
//! Exit codes: 0 for a free verdict or a non-empty result, 1 for a non-free
//! verdict or an empty result, 2 for invalid input or a consistency alarm.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::assoc_order::{free_generator_check, order_data};
use crate::criteria::{
    admissible_residues, converse_search, divisibility_test, freeness, h_c, in_s_q, Method,
};
use crate::digits::{digits, residue, PrimePower};
use crate::extension::{epsilon_threshold, ramification_breaks, validate_params};
use crate::report::{Format, ReportDocument};

/// Default bound on q for the O(q²) commands.
pub const DEFAULT_Q_CAP: u64 = 1 << 20;

/// Environment variable bounding the worker thread count.
pub const THREADS_ENV: &str = "SCAFFOLD_ORDER_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "scaffold-order",
    version,
    about = "Freeness of O_L over its associated order for near one-dimensional elementary abelian extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// table, json or csv
    #[arg(long, default_value = "table")]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lift the default cap of q <= 2^20.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide freeness for the residue class of b.
    Check {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        /// w, miyata, sq or all
        #[arg(long, default_value = "all")]
        method: Method,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List S(q) with divisibility tags and witnesses for excluded classes.
    Sq {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ramification breaks and error-term thresholds of an extension.
    Breaks {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        /// v(Ω_0),...,v(Ω_n), comma separated, starting with 0
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        omega: Vec<i64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The sequences d_j and w_j of the associated order.
    Basis {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        /// Optional Ω valuations; b_max is then the largest break.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        omega: Option<Vec<i64>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Free classes meeting no divisibility condition, for n >= 2.
    SearchConverse {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<i64>,
        #[arg(long)]
        q_max: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Check { output, .. }
            | Command::Sq { output, .. }
            | Command::Breaks { output, .. }
            | Command::Basis { output, .. }
            | Command::SearchConverse { output, .. } => output,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("q = {q} exceeds the cap {cap}; pass --allow-large to proceed")]
    CapExceeded { q: u64, cap: u64 },
    #[error("no q = p^(n+1) <= {q_max} with n >= 2 for p in {primes:?}")]
    NoModuli { primes: Vec<i64>, q_max: u64 },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// A finished report with its exit code.
#[derive(Debug)]
pub struct Outcome {
    pub document: ReportDocument,
    pub exit_code: i32,
    /// Extra line for stderr.
    pub diagnostic: Option<String>,
}

fn check_cap(pp: &PrimePower<i64>, output: &OutputArgs) -> Result<(), CliError> {
    let q = pp.q() as u64;
    if !output.allow_large && q > DEFAULT_Q_CAP {
        return Err(CliError::CapExceeded {
            q,
            cap: DEFAULT_Q_CAP,
        });
    }
    Ok(())
}

fn opt<T: serde::Serialize>(v: Option<T>) -> Value {
    v.map(|x| json!(x)).unwrap_or(Value::Null)
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Check {
            p,
            n,
            b,
            method,
            output,
        } => cmd_check(*p, *n, *b, *method, output),
        Command::Sq { p, n, output } => cmd_sq(*p, *n, output),
        Command::Breaks { p, n, b, omega, .. } => cmd_breaks(*p, *n, *b, omega),
        Command::Basis {
            p,
            n,
            b,
            omega,
            output,
        } => cmd_basis(*p, *n, *b, omega.as_deref(), output),
        Command::SearchConverse { p, q_max, output } => cmd_search_converse(p, *q_max, output),
    }
}

pub fn cmd_check(
    p: i64,
    n: u32,
    b: i64,
    method: Method,
    output: &OutputArgs,
) -> Result<Outcome, CliError> {
    let pp = PrimePower::new(p, n)?;
    crate::extension::check_break(b, &pp)?;
    check_cap(&pp, output)?;
    let c = residue(b, pp.q())?;
    let report = freeness(c, &pp, method)?;
    let verdict = report
        .verdict()
        .expect("freeness only returns consistent reports");

    let mut doc = ReportDocument::new(
        "check",
        vec![
            "c",
            "h_c",
            "verdict_w",
            "verdict_miyata",
            "verdict_sq",
            "divisibility",
            "failing_j",
            "witness_miyata",
            "witness_sq",
        ],
    );
    doc.param("p", p)
        .param("n", n)
        .param("q", pp.q())
        .param("b", b)
        .param("method", method.to_string());
    doc.push_row(vec![
        ("c", json!(report.c)),
        ("h_c", json!(report.h_c)),
        ("verdict_w", opt(report.verdict_w)),
        ("verdict_miyata", opt(report.verdict_miyata)),
        ("verdict_sq", opt(report.verdict_sq)),
        ("divisibility", json!(report.divisibility)),
        ("failing_j", opt(report.failing_j)),
        ("witness_miyata", opt(report.witness_miyata)),
        ("witness_sq", opt(report.witness_sq)),
    ]);
    doc.summarize("free", verdict).summarize("r_b", c);
    Ok(Outcome {
        document: doc,
        exit_code: if verdict { EXIT_OK } else { EXIT_NEGATIVE },
        diagnostic: None,
    })
}

pub fn cmd_sq(p: i64, n: u32, output: &OutputArgs) -> Result<Outcome, CliError> {
    let pp = PrimePower::new(p, n)?;
    check_cap(&pp, output)?;
    let mut doc = ReportDocument::new(
        "sq",
        vec!["c", "h_c", "in_sq", "divisibility", "witness_sq"],
    );
    doc.param("p", p).param("n", n).param("q", pp.q());
    let mut members = Vec::new();
    for c in admissible_residues(&pp) {
        let verdict = in_s_q(c, &pp)?;
        if verdict.holds {
            members.push(c);
        }
        doc.push_row(vec![
            ("c", json!(c)),
            ("h_c", json!(h_c(c, &pp)?)),
            ("in_sq", json!(verdict.holds)),
            ("divisibility", json!(divisibility_test(c, &pp)?)),
            ("witness_sq", opt(verdict.witness)),
        ]);
    }
    doc.summarize("size", members.len())
        .summarize("members", &members);
    Ok(Outcome {
        document: doc,
        exit_code: EXIT_OK,
        diagnostic: None,
    })
}

pub fn cmd_breaks(p: i64, n: u32, b: i64, omega: &[i64]) -> Result<Outcome, CliError> {
    let pp = PrimePower::new(p, n)?;
    let params = validate_params(pp, b, omega.to_vec())?;
    let ram = ramification_breaks(&params)?;
    let mut doc = ReportDocument::new("breaks", vec!["i", "omega", "m", "break", "threshold"]);
    doc.param("p", p)
        .param("n", n)
        .param("q", pp.q())
        .param("b", b)
        .param("omega", omega);
    let mut thresholds = Vec::new();
    for (i, &brk) in ram.breaks.iter().enumerate() {
        let t = epsilon_threshold(&params, i)?.to_string();
        doc.push_row(vec![
            ("i", json!(i)),
            ("omega", json!(omega[i])),
            (
                "m",
                if i == 0 {
                    Value::Null
                } else {
                    json!(params.m(i))
                },
            ),
            ("break", json!(brk)),
            ("threshold", json!(t)),
        ]);
        thresholds.push(t);
    }
    doc.summarize("breaks", &ram.breaks)
        .summarize("distinct_breaks", &ram.distinct_breaks)
        .summarize("b_max", ram.b_max)
        .summarize("r_b", residue(b, pp.q())?)
        .summarize("thresholds", thresholds);
    Ok(Outcome {
        document: doc,
        exit_code: EXIT_OK,
        diagnostic: None,
    })
}

pub fn cmd_basis(
    p: i64,
    n: u32,
    b: i64,
    omega: Option<&[i64]>,
    output: &OutputArgs,
) -> Result<Outcome, CliError> {
    let pp = PrimePower::new(p, n)?;
    let b_max = match omega {
        Some(omega) => ramification_breaks(&validate_params(pp, b, omega.to_vec())?)?.b_max,
        None => {
            crate::extension::check_break(b, &pp)?;
            b
        }
    };
    check_cap(&pp, output)?;
    let order = order_data(b_max, &pp)?;
    let mut doc = ReportDocument::new("basis", vec!["j", "digits", "d_j", "w_j", "d_j_minus_d_0"]);
    doc.param("p", p)
        .param("n", n)
        .param("q", pp.q())
        .param("b", b);
    if let Some(omega) = omega {
        doc.param("omega", omega);
    }
    for (j, (&d, &w)) in order.d.iter().zip(&order.w).enumerate() {
        let j = j as i64;
        doc.push_row(vec![
            ("j", json!(j)),
            ("digits", json!(digits(j, &pp)?.to_string())),
            ("d_j", json!(d)),
            ("w_j", json!(w)),
            ("d_j_minus_d_0", json!(d - order.d[0])),
        ]);
    }
    let generator = free_generator_check(&order);
    doc.summarize("b_max", b_max)
        .summarize("free", order.free)
        .summarize("failing_j", order.failing_j)
        .summarize("w", &order.w)
        .summarize(
            "generator_valuation",
            generator.as_ref().map(|g| g.valuation),
        );
    Ok(Outcome {
        document: doc,
        exit_code: if order.free { EXIT_OK } else { EXIT_NEGATIVE },
        diagnostic: None,
    })
}

pub fn cmd_search_converse(
    primes: &[i64],
    q_max: u64,
    output: &OutputArgs,
) -> Result<Outcome, CliError> {
    if !output.allow_large && q_max > DEFAULT_Q_CAP {
        return Err(CliError::CapExceeded {
            q: q_max,
            cap: DEFAULT_Q_CAP,
        });
    }
    let mut moduli = Vec::new();
    for &p in primes {
        let mut n = 2;
        loop {
            let pp = match PrimePower::new(p, n) {
                Ok(pp) => pp,
                Err(crate::Error::ModulusTooLarge { .. }) => break,
                Err(e) => return Err(e.into()),
            };
            if pp.q() as u64 > q_max {
                break;
            }
            moduli.push(pp);
            n += 1;
        }
    }
    if moduli.is_empty() {
        return Err(CliError::NoModuli {
            primes: primes.to_vec(),
            q_max,
        });
    }
    let witnesses = converse_search(&moduli)?;
    let mut doc = ReportDocument::new("search-converse", vec!["p", "n", "q", "c", "divisibility"]);
    doc.param("p", primes).param("q_max", q_max);
    for w in &witnesses {
        doc.push_row(vec![
            ("p", json!(w.p)),
            ("n", json!(w.n)),
            ("q", json!(w.q)),
            ("c", json!(w.c)),
            ("divisibility", json!("none")),
        ]);
    }
    let searched: Vec<i64> = moduli.iter().map(|pp| pp.q()).collect();
    let smallest = witnesses
        .iter()
        .min_by_key(|w| (w.q, w.c))
        .map(|w| json!({"p": w.p, "n": w.n, "q": w.q, "c": w.c}))
        .unwrap_or_else(|| json!("none in range"));
    doc.summarize("searched_q", searched)
        .summarize("count", witnesses.len())
        .summarize("smallest", smallest);
    let (exit_code, diagnostic) = if witnesses.is_empty() {
        (
            EXIT_NEGATIVE,
            Some(format!(
                "no converse witness found for q <= {q_max}: every free class divides some p^d - 1"
            )),
        )
    } else {
        (EXIT_OK, None)
    };
    Ok(Outcome {
        document: doc,
        exit_code,
        diagnostic,
    })
}
