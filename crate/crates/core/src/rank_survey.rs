//! Family sweeps over D(d) = {y² = x³ + Ax + B : deg A = ⌊d/3⌋, deg B = ⌊d/2⌋ exactly, Δ ≠ 0}:
//! averaged prime sums, averaged zero power sums, and the Fejér-kernel rank bound
//! r_E ≤ F_E = Σ_i T(μ_i/q).

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic_l::{
    l_polynomial_ec, satisfies_functional_equation, zero_power_sums, CurveRecord, EllipticSurface, FieldCache,
    LConfig,
};
use crate::error::{Error, Result};
use crate::fq_poly::{field, PolyFq};

/// Largest exhaustive box (q−1)²q^{deg A + deg B} accepted by default.
pub const DEFAULT_FAMILY_BUDGET: u64 = 2_000_000;
/// Power sums are reported for n = 1..=POWER_SUM_TERMS.
pub const POWER_SUM_TERMS: usize = 4;
/// Reporting constant for the prime-sum envelope; nothing is asserted against it.
pub const DELTA: f64 = 0.01;
pub const REF_25_14: f64 = 25.0 / 14.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurveyMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub q: u32,
    pub d: usize,
    pub mode: SurveyMode,
}

impl FamilySpec {
    pub fn new(q: u32, d: usize, mode: SurveyMode) -> Result<Self> {
        field::check_field_order(q as u64)?;
        Ok(FamilySpec { q, d, mode })
    }

    pub fn deg_a(&self) -> usize {
        self.d / 3
    }

    pub fn deg_b(&self) -> usize {
        self.d / 2
    }

    /// Pairs with exact degrees, singular ones included.
    pub fn box_size(&self) -> Option<u64> {
        let q = self.q as u64;
        let side = |deg: usize| (q - 1).checked_mul(q.checked_pow(deg as u32)?);
        side(self.deg_a())?.checked_mul(side(self.deg_b())?)
    }

    fn mode_name(&self) -> &'static str {
        match self.mode {
            SurveyMode::Exhaustive => "exhaustive",
            SurveyMode::Sample { .. } => "sample",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self.mode {
            SurveyMode::Exhaustive => None,
            SurveyMode::Sample { seed, .. } => Some(seed),
        }
    }
}

/// Exact-degree polynomial number `i` among the (q−1)q^deg: low digits first, leading digit last.
fn exact_degree_poly(q: u32, deg: usize, i: u64) -> PolyFq {
    let low = (q as u64).pow(deg as u32);
    let mut c: Vec<u32> = PolyFq::from_index(q, i % low, deg).coeffs().to_vec();
    c.resize(deg, 0);
    c.push(1 + (i / low) as u32);
    PolyFq::new(q, c)
}

fn random_exact_degree(rng: &mut ChaCha8Rng, q: u32, deg: usize) -> PolyFq {
    let mut c: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..q)).collect();
    c.push(rng.gen_range(1..q));
    PolyFq::new(q, c)
}

/// Members of D(d) as (A, B): exhaustive order is A-major, B-minor with singular pairs skipped;
/// sample mode redraws singular pairs from the same seeded stream.
pub fn enumerate_family(spec: &FamilySpec, budget: u64) -> Result<Vec<(PolyFq, PolyFq)>> {
    let q = spec.q;
    let (da, db) = (spec.deg_a(), spec.deg_b());
    let singular = |a: &PolyFq, b: &PolyFq| {
        let lhs = &a.pow(3).scale(4) + &b.pow(2).scale(field::from_i64(27, q));
        lhs.is_zero()
    };
    match spec.mode {
        SurveyMode::Exhaustive => {
            let size = spec.box_size().filter(|&s| s <= budget).ok_or(Error::BudgetExceeded {
                work: (q as f64 - 1.0).powi(2) * (q as f64).powi((da + db) as i32),
                budget: budget as f64,
            })?;
            let nb = (q as u64 - 1) * (q as u64).pow(db as u32);
            let na = size / nb;
            let bs: Vec<PolyFq> = (0..nb).map(|j| exact_degree_poly(q, db, j)).collect();
            let mut out = Vec::new();
            for i in 0..na {
                let a = exact_degree_poly(q, da, i);
                for b in &bs {
                    if !singular(&a, b) {
                        out.push((a.clone(), b.clone()));
                    }
                }
            }
            Ok(out)
        }
        SurveyMode::Sample { count, seed } => {
            if spec.box_size().is_some_and(|s| s <= 1) && count > 0 {
                // only possible for q = 2, excluded by check_field_order
                return Err(Error::InvalidArgument("empty family".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let a = random_exact_degree(&mut rng, q, da);
                let b = random_exact_degree(&mut rng, q, db);
                if !singular(&a, &b) {
                    out.push((a, b));
                }
            }
            Ok(out)
        }
    }
}

/// T(z) = (1/v) Σ_{|ℓ|<v} (1 − |ℓ|/v) z^ℓ on the unit circle.
pub fn fejer_t(z: Complex64, v: usize) -> Result<f64> {
    if v == 0 {
        return Err(Error::InvalidArgument("Fejér parameter v must be positive".into()));
    }
    if (z.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::OffUnitCircle(format!("{z}")));
    }
    let vf = v as f64;
    let mut acc = Complex64::new(1.0, 0.0);
    let (mut up, mut down) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let zinv = z.inv();
    for l in 1..v {
        up *= z;
        down *= zinv;
        acc += (up + down) * (1.0 - l as f64 / vf);
    }
    Ok(acc.re / vf)
}

pub fn default_v(d: usize) -> usize {
    (7 * d / 9).max(1)
}

/// Per-curve invariants and statistics.
#[derive(Clone, Debug, Serialize)]
pub struct CurveSummary {
    pub record: CurveRecord,
    pub l_degree: usize,
    pub rank: usize,
    /// F_E = Σ_i T(μ_i/q).
    pub fejer: f64,
    /// (1/n) Σ (μ_i/q)^n, n = 1..=POWER_SUM_TERMS.
    pub powsum_norm: Vec<Complex64>,
    /// Σ (μ_i/q)^n from the zeros.
    pub powsum_raw: Vec<Complex64>,
    /// The same quantity from prime data: −b_n/q^n.
    pub powsum_euler: Vec<f64>,
    /// q^{−n} Σ_{good P, deg P = n} a_P.
    pub prime_term: Vec<f64>,
    /// Largest explicit-formula residual over n ≤ the checked range.
    pub max_residual: f64,
    pub violations: Vec<String>,
}

/// Tolerances for the per-curve invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub identity: f64,
    pub root_modulus: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { identity: 1e-9, root_modulus: 1e-6 }
    }
}

/// Power sums are checked against prime data for n ≤ this (capped by the cache depth).
pub const IDENTITY_TERMS: usize = 6;

pub fn summarize_curve(
    e: &EllipticSurface,
    cache: &FieldCache,
    v: usize,
    tol: Tolerances,
) -> Result<CurveSummary> {
    let check_terms = IDENTITY_TERMS.min(cache.depth()).max(POWER_SUM_TERMS);
    let lp = l_polynomial_ec(e, cache, LConfig { max_depth: cache.depth(), min_depth: check_terms })?;
    let q = e.q as f64;
    let mut violations = Vec::new();
    if lp.coeffs[0] != 1 {
        violations.push("c0 != 1".to_string());
    }
    if !lp.top_is_unit_scaled() {
        violations.push("|c_N| != q^N".to_string());
    }
    if !satisfies_functional_equation(&lp.coeffs, e.q, lp.epsilon) {
        violations.push("functional equation".to_string());
    }
    if lp.tail_max() != 0 {
        violations.push("series does not terminate".to_string());
    }
    if lp.zeros.iter().any(|mu| (mu.norm() / q - 1.0).abs() > tol.root_modulus) {
        violations.push("zero off the circle |mu| = q".to_string());
    }
    let mut fejer = 0.0;
    for mu in &lp.zeros {
        // rescale onto the circle after the modulus check
        let z = mu / mu.norm();
        fejer += fejer_t(z, v)?;
    }
    let rank = lp.analytic_rank;
    if rank as f64 > fejer + tol.identity {
        violations.push(format!("rank {rank} exceeds Fejér sum {fejer}"));
    }
    let mut max_residual: f64 = 0.0;
    let (mut powsum_norm, mut powsum_raw, mut powsum_euler, mut prime_term) = (vec![], vec![], vec![], vec![]);
    for n in 1..=lp.depth.min(check_terms) {
        let c = zero_power_sums(&lp, n)?;
        max_residual = max_residual.max(c.residual());
        if n <= POWER_SUM_TERMS {
            powsum_norm.push(c.lhs);
            powsum_raw.push(c.lhs * n as f64);
            powsum_euler.push(c.rhs_full * n as f64);
            prime_term.push(c.prime_term);
        }
    }
    if max_residual > tol.identity {
        violations.push(format!("explicit-formula residual {max_residual:e}"));
    }
    Ok(CurveSummary {
        record: CurveRecord::new(e, &lp),
        l_degree: lp.degree(),
        rank,
        fejer,
        powsum_norm,
        powsum_raw,
        powsum_euler,
        prime_term,
        max_residual,
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SurveyReport {
    pub spec: FamilySpec,
    pub v: usize,
    /// Curves in the family (or drawn) before N < 0 rejections.
    pub n_members: usize,
    /// Curves analysed.
    pub n_curves: usize,
    /// Curves with deg N_E < 4, reported and excluded.
    pub rejected: Vec<(String, String)>,
    pub avg_deg_conductor: f64,
    pub avg_rank: f64,
    pub rank_std_err: f64,
    pub avg_fejer: f64,
    /// avg N / v: the ℓ = 0 part of avg F_E.
    pub fejer_main: f64,
    /// avg F_E − avg N / v.
    pub fejer_remainder: f64,
    pub avg_powsum_norm: Vec<f64>,
    pub avg_powsum_raw: Vec<f64>,
    /// Largest |Im| over the averaged power sums.
    pub max_powsum_imag: f64,
    /// Average of −b_n/q^n from prime data, to compare with avg_powsum_raw.
    pub avg_powsum_euler: Vec<f64>,
    /// averaged_prime_sum for n = 1..=POWER_SUM_TERMS.
    pub avg_prime_sum: Vec<f64>,
    /// q^{5d/6 − (δ/2)d}/#D(d) at δ = 0.01, for context.
    pub prime_sum_envelope: f64,
    pub max_residual: f64,
    pub ref_bound: f64,
    pub ref_25_14: f64,
    pub violations: Vec<(String, String, String)>,
    #[serde(skip)]
    pub curves: Vec<CurveSummary>,
    pub elapsed_ms: u128,
}

/// Ten decimals, with a rounded-away negative zero printed as zero.
fn fixed(x: f64) -> String {
    let s = format!("{x:.10}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

impl SurveyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.avg_rank <= self.avg_fejer + 1e-9
    }

    pub fn csv_header() -> String {
        let mut h = String::from("q,d,mode,seed,n_curves,avg_degN,avg_rank,avg_fejer,v");
        for n in 1..=POWER_SUM_TERMS {
            write!(h, ",avg_powsum_norm_n{n}").unwrap();
        }
        for n in 1..=POWER_SUM_TERMS {
            write!(h, ",avg_powsum_raw_n{n}").unwrap();
        }
        h.push_str(",ref_bound,ref_25_14,elapsed_ms");
        h
    }

    /// One CSV row; elapsed_ms stays empty unless `timing` so that rows are reproducible.
    pub fn csv_row(&self, timing: bool) -> String {
        let s = &self.spec;
        let seed = s.seed().map(|x| x.to_string()).unwrap_or_default();
        let mut r = format!(
            "{},{},{},{},{},{},{},{},{}",
            s.q,
            s.d,
            s.mode_name(),
            seed,
            self.n_curves,
            fixed(self.avg_deg_conductor),
            fixed(self.avg_rank),
            fixed(self.avg_fejer),
            self.v
        );
        for &x in self.avg_powsum_norm.iter().chain(&self.avg_powsum_raw) {
            write!(r, ",{}", fixed(x)).unwrap();
        }
        write!(r, ",{},{},", fixed(self.ref_bound), fixed(self.ref_25_14)).unwrap();
        if timing {
            write!(r, "{}", self.elapsed_ms).unwrap();
        }
        r
    }

    pub fn to_csv(&self, timing: bool) -> String {
        format!("{}\n{}\n", Self::csv_header(), self.csv_row(timing))
    }
}

fn mean(xs: impl Iterator<Item = f64>, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    xs.sum::<f64>() / n as f64
}

/// Sweep the family; per-curve work runs in parallel, aggregates are summed in enumeration order.
pub fn rank_bound_survey(
    spec: &FamilySpec,
    v: usize,
    cache: &FieldCache,
    budget: u64,
    tol: Tolerances,
) -> Result<SurveyReport> {
    let start = std::time::Instant::now();
    if spec.d < 2 {
        return Err(Error::InvalidArgument(format!("surveys need d >= 2, got {}", spec.d)));
    }
    if v == 0 {
        return Err(Error::InvalidArgument("Fejér parameter v must be positive".into()));
    }
    if cache.q != spec.q {
        return Err(Error::ModulusMismatch(cache.q, spec.q));
    }
    let members = enumerate_family(spec, budget)?;
    let results: Vec<Result<(EllipticSurface, Option<CurveSummary>)>> = members
        .par_iter()
        .map(|(a, b)| {
            let e = EllipticSurface::new(a, b)?;
            match summarize_curve(&e, cache, v, tol) {
                Ok(s) => Ok((e, Some(s))),
                Err(Error::NegativeLDegree(_)) => Ok((e, None)),
                Err(x) => Err(x),
            }
        })
        .collect();
    let mut curves = Vec::new();
    let mut rejected = Vec::new();
    for r in results {
        let (e, s) = r?;
        match s {
            Some(s) => curves.push(s),
            None => rejected.push((e.a.to_string(), e.b.to_string())),
        }
    }
    let n = curves.len();
    let avg_deg_conductor = mean(curves.iter().map(|c| c.record.deg_conductor as f64), n);
    let avg_rank = mean(curves.iter().map(|c| c.rank as f64), n);
    let rank_var = if n > 1 {
        curves.iter().map(|c| (c.rank as f64 - avg_rank).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let avg_fejer = mean(curves.iter().map(|c| c.fejer), n);
    let avg_l_degree = mean(curves.iter().map(|c| c.l_degree as f64), n);
    let fejer_main = avg_l_degree / v as f64;
    let avg_c = |f: &dyn Fn(&CurveSummary) -> Complex64| -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        curves.iter().map(f).sum::<Complex64>() / n as f64
    };
    let mut avg_powsum_norm = Vec::new();
    let mut avg_powsum_raw = Vec::new();
    let mut avg_powsum_euler = Vec::new();
    let mut avg_prime_sum = Vec::new();
    let mut max_powsum_imag: f64 = 0.0;
    for k in 0..POWER_SUM_TERMS {
        let norm = avg_c(&|c| c.powsum_norm[k]);
        let raw = avg_c(&|c| c.powsum_raw[k]);
        max_powsum_imag = max_powsum_imag.max(norm.im.abs()).max(raw.im.abs());
        avg_powsum_norm.push(norm.re);
        avg_powsum_raw.push(raw.re);
        avg_powsum_euler.push(mean(curves.iter().map(|c| c.powsum_euler[k]), n));
        avg_prime_sum.push(mean(curves.iter().map(|c| c.prime_term[k]), n));
    }
    let violations = curves
        .iter()
        .flat_map(|c| c.violations.iter().map(move |v| (c.record.a.clone(), c.record.b.clone(), v.clone())))
        .collect();
    let d = spec.d as f64;
    let prime_sum_envelope = if members.is_empty() {
        f64::NAN
    } else {
        (spec.q as f64).powf(5.0 * d / 6.0 - DELTA / 2.0 * d) / members.len() as f64
    };
    Ok(SurveyReport {
        spec: *spec,
        v,
        n_members: members.len(),
        n_curves: n,
        rejected,
        avg_deg_conductor,
        avg_rank,
        rank_std_err: (rank_var / n.max(1) as f64).sqrt(),
        avg_fejer,
        fejer_main,
        fejer_remainder: avg_fejer - fejer_main,
        avg_powsum_norm,
        avg_powsum_raw,
        max_powsum_imag,
        avg_powsum_euler,
        avg_prime_sum,
        prime_sum_envelope,
        max_residual: curves.iter().map(|c| c.max_residual).fold(0.0, f64::max),
        ref_bound: avg_l_degree / v as f64 + 0.5,
        ref_25_14: REF_25_14,
        violations,
        curves,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Average over the family of q^{−n} Σ_{good P, deg P = n} a_P.
pub fn averaged_prime_sum(report: &SurveyReport, n: usize) -> Option<f64> {
    n.checked_sub(1).and_then(|i| report.avg_prime_sum.get(i).copied())
}

/// (avg normalized, avg unnormalized) power sums for n ≤ POWER_SUM_TERMS.
pub fn average_power_sum(report: &SurveyReport, n: usize) -> Option<(f64, f64)> {
    let i = n.checked_sub(1)?;
    Some((*report.avg_powsum_norm.get(i)?, *report.avg_powsum_raw.get(i)?))
}
