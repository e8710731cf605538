mod presentation;
mod render;
mod verbs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "kvlie", version, about = "Exact computations in framed Drinfeld-Kohno algebras, Goldman-Turaev operations and KV checks")]
struct Cli {
    /// Report timing_ms as 0 so that output is byte-identical across runs (also KVLIE_STABLE=1).
    #[arg(long, global = true)]
    stable: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Algebra {
    #[arg(long, default_value_t = 0)]
    pub genus: usize,
    /// Strands 1..n.
    #[arg(long, conflicts_with = "labels")]
    pub strands: Option<usize>,
    /// Comma-separated strand labels, e.g. "1,2,*,0".
    #[arg(long)]
    pub labels: Option<String>,
    /// Keep the central t_ii (otherwise they are set to zero).
    #[arg(long)]
    pub framed: bool,
    /// JSON presentation file; replaces the genus/strands description.
    #[arg(long)]
    pub presentation: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Surface {
    #[arg(long, default_value_t = 1)]
    pub genus: usize,
    #[arg(long, default_value_t = 0)]
    pub punctures: usize,
    #[arg(long, default_value_t = 4)]
    pub max_degree: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationArg {
    None,
    Omega,
    Last,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingArg {
    /// The Fox pairing ⊙.
    Diamond,
    /// ρ_{s(ω)}.
    Rho,
    /// E = ⊙ + ρ_{s(ω)}.
    E,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuArg {
    /// N with φ = φ₀.
    N,
    /// The quasi-derivation ξ.
    Xi,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Kv,
    Krv,
    Solkv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenArg {
    A,
    B,
    Both,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Per-weight dimensions of a presented algebra.
    Dims {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Include the presentation as JSON in the result.
        #[arg(long)]
        export: bool,
    },
    /// Normal form of an expression in a presented algebra.
    Nf {
        expr: String,
        #[command(flatten)]
        alg: Algebra,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// log(exp(a_1)⋯exp(a_k)) in the free Lie algebra on the generators used.
    Bch {
        #[arg(required = true)]
        exprs: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Images of the insertion at strand --at by the strands --into, checked against all relators.
    Insert {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long)]
        at: String,
        /// Comma-separated new labels.
        #[arg(long)]
        into: String,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Every relator of t^f_{g,1…n0} acts as zero on every generator of u^f.
    VerifyAction {
        #[command(flatten)]
        surf: Surface,
        #[arg(long, value_enum, default_value_t = MutationArg::None)]
        mutation: MutationArg,
    },
    /// F and G are inverse morphisms between the direct and semidirect presentations.
    VerifySplit {
        #[command(flatten)]
        surf: Surface,
    },
    /// Graded Goldman bracket |mult κ(α, β)| of two group-like elements.
    Goldman {
        a: String,
        b: String,
        #[command(flatten)]
        surf: Surface,
        #[arg(long, value_enum, default_value_t = PairingArg::Diamond)]
        pairing: PairingArg,
    },
    /// Graded Turaev cobracket of a group-like element.
    Turaev {
        a: String,
        #[command(flatten)]
        surf: Surface,
        #[arg(long, value_enum, default_value_t = MuArg::N)]
        mu: MuArg,
    },
    /// Evaluates a Fox pairing on two elements.
    FoxEval {
        a: String,
        b: String,
        #[command(flatten)]
        surf: Surface,
        #[arg(long, value_enum, default_value_t = PairingArg::Diamond)]
        pairing: PairingArg,
    },
    /// KV, KRV or SolKV check of a tangential automorphism read from a JSON file.
    KvCheck {
        #[arg(long)]
        input: String,
        /// "a=…;b=…;c=…" (comma-separated rationals); zero when omitted.
        #[arg(long)]
        framing: Option<String>,
        #[arg(long, value_enum, default_value_t = KindArg::Kv)]
        kind: KindArg,
    },
    /// Vanishing conditions from the doubled handle relation of a generic associator.
    FramingEqs {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        handle: Option<usize>,
        #[arg(long, value_enum, default_value_t = GenArg::A)]
        generator: GenArg,
    },
    /// Coefficients of a named power series (s, r, exp, log1p, bernoulli).
    Series {
        name: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
}

impl Cmd {
    fn verb(&self) -> &'static str {
        match self {
            Cmd::Dims { .. } => "dims",
            Cmd::Nf { .. } => "nf",
            Cmd::Bch { .. } => "bch",
            Cmd::Insert { .. } => "insert",
            Cmd::VerifyAction { .. } => "verify-action",
            Cmd::VerifySplit { .. } => "verify-split",
            Cmd::Goldman { .. } => "goldman",
            Cmd::Turaev { .. } => "turaev",
            Cmd::FoxEval { .. } => "fox-eval",
            Cmd::KvCheck { .. } => "kv-check",
            Cmd::FramingEqs { .. } => "framing-eqs",
            Cmd::Series { .. } => "series",
        }
    }

    fn degree(&self) -> Option<u32> {
        match self {
            Cmd::Dims { max_degree, .. } | Cmd::Nf { max_degree, .. } | Cmd::Bch { max_degree, .. } | Cmd::Insert { max_degree, .. } => Some(*max_degree),
            Cmd::VerifyAction { surf, .. } | Cmd::VerifySplit { surf } | Cmd::Goldman { surf, .. } | Cmd::Turaev { surf, .. } | Cmd::FoxEval { surf, .. } => {
                Some(surf.max_degree)
            }
            Cmd::Series { order, .. } => Some(*order as u32),
            Cmd::KvCheck { .. } | Cmd::FramingEqs { .. } => None,
        }
    }
}

/// A failed command: machine-readable kind plus message.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl ToString) -> Self {
        CliError { kind, message: message.to_string() }
    }
}

/// What a verb produces: its result and the list of failed checks (empty means ok).
pub struct Outcome {
    pub result: Value,
    pub failures: Vec<Value>,
}

pub fn degree_limit() -> u32 {
    std::env::var("KVLIE_MAX_DEGREE").ok().and_then(|s| s.parse().ok()).unwrap_or(8)
}

fn run(cmd: &Cmd) -> Result<Outcome, CliError> {
    if let Some(d) = cmd.degree() {
        let limit = degree_limit();
        if d > limit {
            return Err(CliError::new("limit", format!("degree {d} exceeds the safety limit {limit} (set KVLIE_MAX_DEGREE to raise it)")));
        }
        if d == 0 {
            return Err(CliError::new("usage", "degree must be positive"));
        }
    }
    match cmd {
        Cmd::Dims { alg, max_degree, export } => verbs::dims(alg, *max_degree, *export),
        Cmd::Nf { expr, alg, max_degree } => verbs::nf(expr, alg, *max_degree),
        Cmd::Bch { exprs, max_degree } => verbs::bch(exprs, *max_degree),
        Cmd::Insert { alg, at, into, max_degree } => verbs::insert(alg, at, into, *max_degree),
        Cmd::VerifyAction { surf, mutation } => verbs::verify_action(surf, *mutation),
        Cmd::VerifySplit { surf } => verbs::verify_split(surf),
        Cmd::Goldman { a, b, surf, pairing } => verbs::goldman(a, b, surf, *pairing),
        Cmd::Turaev { a, surf, mu } => verbs::turaev(a, surf, *mu),
        Cmd::FoxEval { a, b, surf, pairing } => verbs::fox_eval(a, b, surf, *pairing),
        Cmd::KvCheck { input, framing, kind } => verbs::kv_check(input, framing.as_deref(), *kind),
        Cmd::FramingEqs { genus, handle, generator } => verbs::framing_eqs(*genus, *handle, *generator),
        Cmd::Series { name, order } => verbs::series(name, *order),
    }
}

fn emit(v: &Value) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            emit(&json!({"ok": false, "verb": null, "error": {"kind": "usage", "message": e.to_string().trim_end()}}));
            return ExitCode::from(2);
        }
    };
    let stable = cli.stable || std::env::var("KVLIE_STABLE").is_ok_and(|v| v == "1");
    let verb = cli.cmd.verb();
    let start = Instant::now();
    let out = run(&cli.cmd);
    let ms = if stable { 0 } else { start.elapsed().as_millis() as u64 };
    match out {
        Ok(Outcome { result, failures }) => {
            let ok = failures.is_empty();
            emit(&json!({"ok": ok, "verb": verb, "result": result, "failures": failures, "timing_ms": ms}));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(&json!({"ok": false, "verb": verb, "error": {"kind": e.kind, "message": e.message}, "timing_ms": ms}));
            ExitCode::from(2)
        }
    }
}
