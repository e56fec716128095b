use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kacdepth::complex::{positivity_certificate, verify_thm41};
use kacdepth::finite_ring::{OElem, DEFAULT_GUARD};
use kacdepth::moment::{
    brute_moment_fiber, stack_e_series, verify_exp_identity, verify_generic_fiber, FiberMode, MomentTarget,
};
use kacdepth::quiver::Quiver;
use kacdepth::rank::{one_vertex_kac, RANK3_TABLE};
use kacdepth::report::{kac_report, Report};
use kacdepth::toric::{asymptotic_A, asymptotic_B, brute_toric_A, cd_simulate, normalized_kac, stratum_contains, wyss_kac};
use kacdepth::{Error, ErrorKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Zero,
    Generic,
}

/// Exact counts of locally free quiver representations over F_p[t]/(t^α).
///
/// Quiver files are JSON objects `{"vertices": n, "arrows": [[s, t], ...]}`.
/// The array order of the arrows is the total order used by the
/// contraction-deletion stratification; it changes the strata but never the
/// resulting polynomial.
#[derive(Debug, Parser)]
#[command(name = "kacdepth", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Largest enumeration size a brute-force oracle may attempt.
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
    /// Seed for randomized checks; output is deterministic given the seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct QuiverArg {
    /// Quiver JSON file.
    #[arg(long)]
    pub quiver: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Toric Kac polynomial by the chain formula and by contraction-deletion, with the stratum census.
    Kac {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        /// Random representations to push through the contraction-deletion algorithm.
        #[arg(long, default_value_t = 0)]
        samples: u32,
        /// Prime used for the sampled representations.
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Limits A_Q and B_{μ_Q} for a 2-connected quiver, with the normalized sequence up to --alpha.
    Asymptotic {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long, default_value_t = 4)]
        alpha: u32,
    },
    /// Identity checks against brute-force counts.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Lexicographic shelling and the positivity certificate of the Hilbert series.
    Shelling {
        #[command(flatten)]
        q: QuiverArg,
    },
    /// Kac polynomials of the g-loop quiver in ranks up to 3, checked against the reference table.
    RankTable {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        alpha: u32,
        #[arg(long, default_value_t = 3)]
        rank: u32,
    },
    /// Termwise comparison of the two E-series expansions at z = ∞.
    ESeries {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, value_enum, default_value_t = Mode::Zero)]
        mode: Mode,
        #[arg(long, default_value_t = 10)]
        order: i64,
    },
    /// Raw brute-force enumerations.
    Oracle {
        #[command(subcommand)]
        oracle: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Fiber counts against the plethystic exponential of the Kac series.
    ExpIdentity {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        /// Rank bound per vertex; defaults to all ones.
        #[arg(long, value_delimiter = ',')]
        bound: Option<Vec<u32>>,
    },
    /// Fiber over a generic scalar value against the Kac polynomial.
    GenericFiber {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_value = "3")]
        p: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        /// Rank vector; defaults to all ones.
        #[arg(long, value_delimiter = ',')]
        rank: Option<Vec<u32>>,
    },
    /// Asymptotic Kac function against the specialized Hilbert series.
    Thm41 {
        #[command(flatten)]
        q: QuiverArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Torus orbits of absolutely indecomposable rank-one representations.
    OrbitCount {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
    },
    /// Points of a moment-map fiber over the zero or a scalar value.
    MomentFiber {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, value_delimiter = ',')]
        rank: Option<Vec<u32>>,
        /// Scalar fiber parameters; the zero fiber when omitted.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda: Option<Vec<i64>>,
    },
}

/// Splits `"1,2,3"` into integers.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {x:?} in list"))))
        .collect()
}

/// Reads and decodes a quiver file.
pub fn load_quiver(path: &std::path::Path) -> Result<Quiver, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    Quiver::from_json_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

impl RunConfig {
    /// Checks flag values that clap cannot express.
    pub fn validate(&self) -> Result<(), Error> {
        let alpha_ok = |a: u32| if a == 0 { Err(Error::OutOfRange("--alpha must be at least 1".into())) } else { Ok(()) };
        let primes_ok = |ps: &[u32]| {
            if ps.is_empty() {
                return Err(Error::Invalid("--p needs at least one prime".into()));
            }
            match ps.iter().find(|&&p| !kacdepth::finite_ring::is_prime(p)) {
                Some(p) => Err(Error::Invalid(format!("{p} is not prime"))),
                None => Ok(()),
            }
        };
        if self.guard == 0 {
            return Err(Error::OutOfRange("--guard must be positive".into()));
        }
        match &self.command {
            Command::Kac { alpha, p, .. } => {
                alpha_ok(*alpha)?;
                primes_ok(&[*p])
            }
            Command::Asymptotic { alpha, .. } | Command::ESeries { alpha, .. } => alpha_ok(*alpha),
            Command::RankTable { alpha, g, rank } => {
                alpha_ok(*alpha)?;
                if *g == 0 {
                    return Err(Error::OutOfRange("--g must be at least 1".into()));
                }
                if !(1..=3).contains(rank) {
                    return Err(Error::RankOutOfRange);
                }
                Ok(())
            }
            Command::Shelling { .. } => Ok(()),
            Command::Verify { check } => match check {
                VerifyCommand::ExpIdentity { p, alpha, .. } | VerifyCommand::GenericFiber { p, alpha, .. } => {
                    alpha_ok(*alpha)?;
                    primes_ok(p)
                }
                VerifyCommand::Thm41 { .. } => Ok(()),
            },
            Command::Oracle { oracle } => match oracle {
                OracleCommand::OrbitCount { p, alpha, .. } | OracleCommand::MomentFiber { p, alpha, .. } => {
                    alpha_ok(*alpha)?;
                    primes_ok(p)
                }
            },
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Input => EXIT_INPUT,
        ErrorKind::Guard => EXIT_GUARD,
        ErrorKind::Math => EXIT_MISMATCH,
    }
}

/// Runs one command. Returns the exit status and the rendered report.
pub fn run(config: &RunConfig) -> (i32, String) {
    let outcome = config.validate().and_then(|_| dispatch(config));
    match outcome {
        Ok(report) => {
            let code = if report.ok { EXIT_OK } else { EXIT_MISMATCH };
            (code, render(config.format, &report))
        }
        Err(e) => {
            let report = Report::new("error", &json!({ "error": e.to_string() })).mismatch(e.to_string());
            (exit_code(&e), render(config.format, &report))
        }
    }
}

fn render(format: Format, report: &Report) -> String {
    match format {
        Format::Json => report.to_json_string() + "\n",
        Format::Text => report.to_text(),
    }
}

fn ones(q: &Quiver) -> Vec<u32> {
    vec![1; q.nvertices()]
}

fn dispatch(config: &RunConfig) -> Result<Report, Error> {
    let guard = config.guard;
    match &config.command {
        Command::Kac { q, alpha, samples, p } => {
            let quiver = load_quiver(&q.quiver)?;
            let k = kac_report(&quiver, *alpha)?;
            let mut report = Report::new("kac", &k).line(format!("A = {}", k.polynomial)).line(format!("strata: {}", k.census.len()));
            if !k.agree {
                report = report.mismatch(format!("chain formula {} vs contraction-deletion {}", k.wyss, k.contraction_deletion));
            }
            if *samples > 0 {
                let s = sample_strata(&quiver, *p, *alpha, *samples, config.seed)?;
                report = report.line(format!("sampled representations: {} in their strata, {} decomposable", s.in_stratum, s.decomposable));
                for x in &s.escaped {
                    report = report.mismatch(format!("representation {x:?} lies outside its stratum"));
                }
                report.result["samples"] = json!({
                    "p": p, "seed": config.seed, "in_stratum": s.in_stratum, "decomposable": s.decomposable, "escaped": s.escaped,
                });
            }
            Ok(report)
        }
        Command::Asymptotic { q, alpha } => {
            let quiver = load_quiver(&q.quiver)?;
            let a = asymptotic_A(&quiver)?;
            let b = asymptotic_B(&quiver)?;
            let seq = (1..=*alpha).map(|k| normalized_kac(&quiver, k).map(|p| p.to_string())).collect::<Result<Vec<_>, _>>()?;
            let result = json!({ "A": a, "B": b, "A_text": a.to_string(), "B_text": b.to_string(), "normalized": seq });
            Ok(Report::new("asymptotic", &result).line(format!("A_Q = {a}")).line(format!("B = {b}")))
        }
        Command::Verify { check } => verify(check, guard),
        Command::Shelling { q } => {
            let quiver = load_quiver(&q.quiver)?;
            let c = positivity_certificate(&quiver)?;
            let mut report = Report::new("shelling", &c)
                .line(format!("shelling terms: {}", c.terms.len()))
                .line(format!("certificate total = {}", c.total));
            if !c.matches_hilbert {
                report = report.mismatch("shelling sum differs from the Hilbert series");
            }
            if !c.single_denominator_matches {
                report = report.mismatch("single-denominator form differs from the Hilbert series");
            }
            Ok(report)
        }
        Command::RankTable { g, alpha, rank } => rank_table(*g, *alpha, *rank),
        Command::ESeries { q, alpha, mode, order } => {
            let quiver = load_quiver(&q.quiver)?;
            let mode = match mode {
                Mode::Zero => FiberMode::Zero,
                Mode::Generic => FiberMode::Generic,
            };
            let r = stack_e_series(&quiver, *alpha, mode, *order)?;
            let mut report = Report::new("e-series", &r).line(format!("counting polynomial = {}", r.counting_polynomial));
            report = if r.equal {
                report.line(format!("expansions agree down to z^{}", r.floor))
            } else {
                let diff: Vec<String> = r.lhs.iter().zip(&r.rhs).filter(|(a, b)| a != b).map(|(a, b)| format!("{a:?} vs {b:?}")).collect();
                report.mismatch(format!("first differing terms: {}", diff.into_iter().take(3).collect::<Vec<_>>().join("; ")))
            };
            Ok(report)
        }
        Command::Oracle { oracle } => run_oracle(oracle, guard),
    }
}

fn verify(check: &VerifyCommand, guard: u64) -> Result<Report, Error> {
    match check {
        VerifyCommand::ExpIdentity { q, p, alpha, bound } => {
            let quiver = load_quiver(&q.quiver)?;
            let bound = bound.clone().unwrap_or_else(|| ones(&quiver));
            let reports = p.iter().map(|&p| verify_exp_identity(&quiver, p, *alpha, &bound, guard)).collect::<Result<Vec<_>, _>>()?;
            let mut report = Report::new("verify exp-identity", &reports);
            for r in &reports {
                for e in &r.entries {
                    let line = format!("p={} rank {:?}: {} {} {}", r.p, e.rank, e.lhs, if e.equal { "=" } else { "!=" }, e.rhs);
                    report = if e.equal { report.line(line) } else { report.mismatch(line) };
                }
            }
            Ok(report)
        }
        VerifyCommand::GenericFiber { q, lambda, p, alpha, rank } => {
            let quiver = load_quiver(&q.quiver)?;
            let rank = rank.clone().unwrap_or_else(|| ones(&quiver));
            let reports = p.iter().map(|&p| verify_generic_fiber(&quiver, &rank, lambda, p, *alpha, guard)).collect::<Result<Vec<_>, _>>()?;
            let mut report = Report::new("verify generic-fiber", &reports);
            for r in &reports {
                let line = format!("p={}: {} {} {}", r.p, r.lhs, if r.equal { "=" } else { "!=" }, r.rhs);
                report = if r.equal { report.line(line) } else { report.mismatch(line) };
            }
            Ok(report)
        }
        VerifyCommand::Thm41 { q } => {
            let quiver = load_quiver(&q.quiver)?;
            let r = verify_thm41(&quiver)?;
            let line = format!("{} {} {}", r.asymptotic, if r.holds { "=" } else { "!=" }, r.hilbert_side);
            let report = Report::new("verify thm41", &r);
            Ok(if r.holds { report.line(line) } else { report.mismatch(line) })
        }
    }
}

fn rank_table(g: u32, alpha: u32, rank: u32) -> Result<Report, Error> {
    let mut rows = Vec::new();
    let mut report = Report::new("rank-table", &());
    for a in 1..=alpha {
        for r in 1..=rank {
            let poly = one_vertex_kac(g, r, a)?;
            let text = poly.to_string();
            let line = format!("A_{{{g},{r},{a}}} = {text}");
            let reference = RANK3_TABLE.iter().find(|&&(tg, ta, _)| r == 3 && tg == g && ta == a).map(|t| t.2);
            report = match reference {
                Some(expected) if expected != text => report.mismatch(format!("{line} but the reference table has {expected}")),
                _ => report.line(line),
            };
            rows.push(json!({ "g": g, "rank": r, "alpha": a, "polynomial": poly, "text": text, "reference": reference }));
        }
    }
    report.result = json!(rows);
    Ok(report)
}

fn run_oracle(oracle: &OracleCommand, guard: u64) -> Result<Report, Error> {
    match oracle {
        OracleCommand::OrbitCount { q, p, alpha } => {
            let quiver = load_quiver(&q.quiver)?;
            let formula = wyss_kac(&quiver, *alpha)?;
            let mut report = Report::new("oracle orbit-count", &());
            let mut rows = Vec::new();
            for &p in p {
                let count = brute_toric_A(&quiver, p, *alpha, guard)?;
                let value = formula.eval_int(p as i64)?;
                let line = format!("p={p}: {count} orbits, formula gives {value}");
                report = if value == kacdepth::algebra::Rat::from_integer(count.into()) { report.line(line) } else { report.mismatch(line) };
                rows.push(json!({ "p": p, "count": count, "formula": value.to_string() }));
            }
            report.result = json!(rows);
            Ok(report)
        }
        OracleCommand::MomentFiber { q, p, alpha, rank, lambda } => {
            let quiver = load_quiver(&q.quiver)?;
            let rank = rank.clone().unwrap_or_else(|| ones(&quiver));
            let mut report = Report::new("oracle moment-fiber", &());
            let mut rows = Vec::new();
            for &p in p {
                let target = match lambda {
                    Some(l) => MomentTarget::scalar(p, *alpha, &rank, l)?,
                    None => MomentTarget::zero(p, *alpha, &rank),
                };
                let count = brute_moment_fiber(&quiver, &rank, p, *alpha, &target, guard)?;
                report = report.line(format!("p={p}: {count} points"));
                rows.push(json!({ "p": p, "count": count }));
            }
            report.result = json!(rows);
            Ok(report)
        }
    }
}

/// Pushes seeded random representations through the contraction-deletion
/// algorithm and checks each lands in the stratum it reports.
fn sample_strata(q: &Quiver, p: u32, alpha: u32, samples: u32, seed: u64) -> Result<Samples, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = (p as u64).checked_pow(alpha).ok_or(Error::EnumerationTooLarge)?;
    let mut out = Samples::default();
    for _ in 0..samples {
        let x: Vec<OElem> = (0..q.narrows()).map(|_| OElem::from_index(p, alpha, rng.gen_range(0..size))).collect();
        match cd_simulate(q, &x) {
            Ok(sim) if stratum_contains(q, &sim.tree, &x)? => out.in_stratum += 1,
            Ok(_) => out.escaped.push(x.iter().map(OElem::index).collect()),
            Err(Error::Decomposable) => out.decomposable += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Default)]
struct Samples {
    in_stratum: u32,
    decomposable: u32,
    /// Representations (as ring-element indices) outside their reported stratum.
    escaped: Vec<Vec<u64>>,
}
