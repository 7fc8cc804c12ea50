mod verify;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ffrank::cache::{self, CacheOutcome};
use ffrank::dirichlet_l::csv_for_modulus;
use ffrank::elliptic_l::{
    l_polynomial_ec, zero_power_sums, CurveRecord, EllipticSurface, FieldCache, LConfig, Place, ReductionDatum,
    ReductionType, DEFAULT_FIELD_BUDGET,
};
use ffrank::fq_poly::field;
use ffrank::characters::DEFAULT_GROUP_CEILING;
use ffrank::rank_survey::{
    default_v, rank_bound_survey, FamilySpec, SurveyMode, Tolerances, DEFAULT_FAMILY_BUDGET, IDENTITY_TERMS,
};
use ffrank::{Error, PolyFq};

#[derive(Debug, Parser)]
#[command(name = "ffrank", version, about = "L-functions over F_q(t) and average-rank surveys")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Prime-table cache directory.
    #[arg(long, global = true, env = "FFRANK_CACHE_DIR", default_value = ".ffrank-cache")]
    pub cache_dir: PathBuf,
    /// Tolerance for exact identities.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Tolerance for root-modulus checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub root_tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Jsonl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the Gauss-sum, Poisson, reciprocity, Dirichlet RH/trace and mixed-sum identity suites.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Ceiling on q^{n+k+2l} for the mixed-sum suite.
        #[arg(long, default_value_t = 1e6)]
        budget: f64,
    },
    /// Conductor, L-polynomial, sign, rank and explicit-formula residuals of y² = x³ + Ax + B.
    Curve {
        #[arg(long)]
        q: u64,
        /// Ascending coefficients of A, comma separated.
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
    },
    /// Average analytic rank and Fejér bound over the family D(d).
    Survey {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        /// Draw this many curves instead of sweeping exhaustively (requires --seed).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Fejér parameter (default ⌊7d/9⌋, at least 1).
        #[arg(long)]
        v: Option<usize>,
        /// Ceiling on the exhaustive box (q−1)²q^{deg A + deg B}.
        #[arg(long, default_value_t = DEFAULT_FAMILY_BUDGET)]
        budget: u64,
        /// Fill the elapsed_ms column (makes rows non-reproducible).
        #[arg(long)]
        timing: bool,
        /// Also write one JSON record per curve to this file.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// Build and persist monic-irreducible tables.
    Cache {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 8)]
        max_deg: usize,
    },
    /// CSV of every non-principal character mod h: conductor, L-coefficients, root moduli.
    Dirichlet {
        #[arg(long)]
        q: u64,
        /// Monic modulus, ascending coefficients.
        #[arg(long)]
        h: String,
    },
}

/// Failure split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invariant(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Invariant(s) => f.write_str(s),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invariant(_) => 1,
        }
    }
}

/// Input and resource problems are usage errors; everything else means a computation disagreed.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidFieldOrder(_)
            | Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::BudgetExceeded { .. }
            | Error::GroupTooLarge { .. }
            | Error::NotMonic(_)
            | Error::ConstantPolynomial(_)
            | Error::DepthExceeded { .. }
            | Error::Io(_) => CliError::Usage(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn field_order(q: u64) -> CliResult<u32> {
    Ok(field::check_field_order(q)?)
}

fn emit(common: &Common, text: &str) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // a closed reader (`| head`) is not an error of ours
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<u8> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if !(cli.common.tol > 0.0 && cli.common.root_tol > 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    let common = &cli.common;
    match &cli.command {
        Command::Verify { q, seed, budget } => verify::run(common, field_order(*q)?, *seed, *budget),
        Command::Curve { q, a, b } => cmd_curve(common, field_order(*q)?, a, b),
        Command::Survey { q, d, sample, seed, v, budget, timing, curves } => {
            let mode = match (sample, seed) {
                (None, _) => SurveyMode::Exhaustive,
                (Some(count), Some(seed)) => SurveyMode::Sample { count: *count, seed: *seed },
                (Some(_), None) => return Err(CliError::Usage("--sample requires --seed".into())),
            };
            cmd_survey(common, field_order(*q)?, *d, mode, *v, *budget, *timing, curves.as_ref())
        }
        Command::Cache { q, max_deg } => cmd_cache(common, field_order(*q)?, *max_deg),
        Command::Dirichlet { q, h } => cmd_dirichlet(common, field_order(*q)?, h),
    }
}

fn tolerances(common: &Common) -> Tolerances {
    Tolerances { identity: common.tol, root_modulus: common.root_tol }
}

/// Euler depth: N + 3 ≤ deg Δ + 1 since deg N_E ≤ deg Δ + 2; never less than the identity range.
fn field_depth(q: u32, a: &PolyFq, b: &PolyFq) -> usize {
    let da = a.degree().unwrap_or(0);
    let db = b.degree().unwrap_or(0);
    let disc = (3 * da).max(2 * db);
    (disc + 1).max(IDENTITY_TERMS).min(FieldCache::default_depth(q, DEFAULT_FIELD_BUDGET))
}

/// Bad places plus every good place of degree one, finite places first.
fn local_data(e: &EllipticSurface) -> CliResult<Vec<ReductionDatum>> {
    let q = e.q;
    let mut out = Vec::new();
    for r in 0..q {
        let p = PolyFq::new(q, vec![r, 1]);
        let datum = match e.finite.iter().find(|d| d.place == Place::Finite(p.clone())) {
            Some(d) => d.clone(),
            None => ReductionDatum {
                place: Place::Finite(p.clone()),
                kind: ReductionType::Good,
                a_p: e.trace_ap(&p)?,
                conductor_exponent: 0,
                minimalization_steps: 0,
            },
        };
        out.push(datum);
    }
    out.extend(e.finite.iter().filter(|d| d.place.degree() > 1 && d.kind != ReductionType::Good).cloned());
    out.push(e.infinity.clone());
    Ok(out)
}

fn cmd_curve(common: &Common, q: u32, a: &str, b: &str) -> CliResult<u8> {
    let a = PolyFq::parse(q, a)?;
    let b = PolyFq::parse(q, b)?;
    let e = match EllipticSurface::new(&a, &b) {
        Ok(e) => e,
        Err(Error::SingularCurve) => return Err(CliError::Invariant("singular curve: 4A^3 + 27B^2 = 0".into())),
        Err(x) => return Err(x.into()),
    };
    let places = local_data(&e)?;
    let cache = FieldCache::new(q, field_depth(q, &a, &b))?;
    let lp = match l_polynomial_ec(&e, &cache, LConfig { max_depth: cache.depth(), min_depth: IDENTITY_TERMS }) {
        Ok(lp) => lp,
        Err(Error::NegativeLDegree(n)) => {
            let record = json!({
                "q": q, "A": a.to_string(), "B": b.to_string(), "degN_E": n, "places": places,
                "L": null, "epsilon": null, "analytic_rank": null,
            });
            emit(common, &(serde_json::to_string_pretty(&record).expect("plain data") + "\n"))?;
            return Err(CliError::Invariant(format!(
                "deg N_E = {n} < 4: L(E, u) is not a polynomial of degree deg N_E - 4 (constant or isotrivial curve)"
            )));
        }
        Err(x) => return Err(x.into()),
    };
    let mut residuals = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 1..=lp.depth.min(IDENTITY_TERMS) {
        let c = zero_power_sums(&lp, n)?;
        worst = worst.max(c.residual());
        residuals.push(json!({
            "n": n,
            "lhs": [c.lhs.re, c.lhs.im],
            "rhs_full": c.rhs_full,
            "rhs_k1_half": c.rhs_k1_half,
            "k2_term": c.k2_term,
            "residual": c.residual(),
        }));
    }
    let mut record = serde_json::to_value(CurveRecord::new(&e, &lp)).expect("plain data");
    let obj = record.as_object_mut().expect("record is an object");
    obj.insert("places".into(), json!(places));
    obj.insert("completion".into(), json!(format!("{:?}", lp.completion).to_lowercase()));
    obj.insert("explicit_formula".into(), json!(residuals));
    let text = serde_json::to_string_pretty(&record).expect("plain data") + "\n";
    emit(common, &text)?;
    if worst > common.tol {
        return Err(CliError::Invariant(format!("explicit-formula residual {worst:e} exceeds {:e}", common.tol)));
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_survey(
    common: &Common,
    q: u32,
    d: usize,
    mode: SurveyMode,
    v: Option<usize>,
    budget: u64,
    timing: bool,
    curves: Option<&PathBuf>,
) -> CliResult<u8> {
    if d < 2 {
        return Err(CliError::Usage(format!("surveys need d >= 2 (got {d}); smaller d gives constant curves")));
    }
    let v = v.unwrap_or_else(|| default_v(d));
    if v == 0 {
        return Err(CliError::Usage("--v must be positive".into()));
    }
    let spec = FamilySpec::new(q, d, mode)?;
    if matches!(mode, SurveyMode::Exhaustive) && spec.box_size().map_or(true, |s| s > budget) {
        return Err(CliError::Usage(format!(
            "exhaustive box for q={q}, d={d} exceeds --budget {budget}; use --sample N --seed S"
        )));
    }
    let probe_a = PolyFq::monomial(q, 1, spec.deg_a());
    let probe_b = PolyFq::monomial(q, 1, spec.deg_b());
    let cache = FieldCache::new(q, field_depth(q, &probe_a, &probe_b))?;
    let report = rank_bound_survey(&spec, v, &cache, budget, tolerances(common))?;
    if let Some(path) = curves {
        let mut text = String::new();
        for c in &report.curves {
            text.push_str(&serde_json::to_string(&c.record).expect("plain data"));
            text.push('\n');
        }
        fs::write(path, text)?;
    }
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => report.to_csv(timing),
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("plain data");
            if !timing {
                value.as_object_mut().expect("object").remove("elapsed_ms");
            }
            serde_json::to_string_pretty(&value).expect("plain data") + "\n"
        }
        Format::Jsonl => report
            .curves
            .iter()
            .map(|c| serde_json::to_string(c).expect("plain data") + "\n")
            .collect(),
    };
    emit(common, &text)?;
    eprintln!(
        "q={q} d={d}: {} curves ({} rejected with deg N_E < 4), avg rank {:.6} <= avg Fejér {:.6} \
         (= {:.6} from l = 0 + {:.6} remainder)",
        report.n_curves,
        report.rejected.len(),
        report.avg_rank,
        report.avg_fejer,
        report.fejer_main,
        report.fejer_remainder
    );
    if !report.is_clean() {
        for (a, b, msg) in report.violations.iter().take(10) {
            eprintln!("violation: A={a} B={b}: {msg}");
        }
        return Err(CliError::Invariant(format!("{} per-curve invariant violations", report.violations.len())));
    }
    Ok(0)
}

fn cmd_cache(common: &Common, q: u32, max_deg: usize) -> CliResult<u8> {
    if max_deg == 0 {
        return Err(CliError::Usage("--max-deg must be positive".into()));
    }
    let (path, table, outcome) = cache::ensure(&common.cache_dir, q, max_deg)?;
    match &outcome {
        CacheOutcome::Rebuilt(why) => eprintln!("warning: rebuilt unreadable cache {} ({why})", path.display()),
        CacheOutcome::Unchanged => eprintln!("{} already current", path.display()),
        CacheOutcome::Written => eprintln!("wrote {}", path.display()),
    }
    let total: usize = (1..=max_deg).map(|n| table.count(n)).sum();
    let expected: u64 = (1..=max_deg).map(|n| ffrank::fq_poly::irreducible_count(q, n)).sum();
    let line = match common.format {
        Some(Format::Json | Format::Jsonl) => {
            json!({ "q": q, "max_deg": max_deg, "primes": total, "path": path.display().to_string() }).to_string()
        }
        _ => format!("q={q} max_deg={max_deg} primes={total}"),
    };
    emit(common, &(line + "\n"))?;
    if total as u64 != expected {
        return Err(CliError::Invariant(format!("table holds {total} primes, necklace count gives {expected}")));
    }
    Ok(0)
}

fn cmd_dirichlet(common: &Common, q: u32, h: &str) -> CliResult<u8> {
    let h = PolyFq::parse(q, h)?;
    if h.degree().unwrap_or(0) == 0 {
        return Err(CliError::Usage("modulus must have positive degree".into()));
    }
    if !h.is_monic() {
        return Err(CliError::Usage(format!("modulus {h} is not monic")));
    }
    let depth = h.degree().unwrap() + 2;
    let table = cache::load(&common.cache_dir, q, depth);
    let text = csv_for_modulus(&h, DEFAULT_GROUP_CEILING, table.as_ref())?;
    emit(common, &text)?;
    Ok(0)
}
