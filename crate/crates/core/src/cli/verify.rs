//! The identity suite behind `ffrank verify`: each check reports its worst residual and pass/fail.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use ffrank::characters::ResidueRing;
use ffrank::dirichlet_l::{rh_sweep, RhSweepConfig};
use ffrank::fourier_poisson::{
    ec_fourier_brute_table, ec_fourier_closed, elementary_reciprocity, gauss_sum_prime_closed,
    gauss_sums_quadratic_all, mixed_char_sum, poisson_all, poisson_monic, PeriodicFn,
};
use ffrank::fq_poly::{is_irreducible, IrreducibleTable, PolyFq};

use super::{emit, CliError, CliResult, Common};

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    cases: u64,
    worst: f64,
    limit: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<serde_json::Value>,
}

impl Check {
    fn new(name: &str, cases: u64, worst: f64, limit: f64) -> Self {
        Check { name: name.into(), cases, worst, limit, pass: worst <= limit, detail: None }
    }
}

/// Gauss sums are checked for deg P ≤ this.
fn gauss_degree(q: u32) -> usize {
    if q <= 13 {
        2
    } else {
        1
    }
}

/// For q ≡ 1 mod 4: G(V, χ_P) = |P|^{1/2}(V/P) exactly. Otherwise the measured unit ratio
/// G/(|P|^{1/2}(V/P)) is tabulated per degree and must be one root of unity per degree.
fn gauss_check(q: u32, primes: &IrreducibleTable, tol: f64) -> CliResult<Check> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut ratios: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
    for deg in 1..=gauss_degree(q) {
        for p in primes.primes(deg) {
            let ring = ResidueRing::new(&p)?;
            let all = gauss_sums_quadratic_all(&p)?;
            for v in 0..ring.size {
                let vp = ring.to_poly(v);
                let closed = gauss_sum_prime_closed(&vp, &p)?;
                let direct = all[v as usize];
                cases += 1;
                if closed.norm() == 0.0 {
                    worst = worst.max(direct.norm());
                    continue;
                }
                let ratio = direct / closed;
                let seen = ratios.entry(deg).or_default();
                match seen.first() {
                    Some(&r0) => worst = worst.max((direct - closed * r0).norm()),
                    None => seen.push(ratio),
                }
                if q % 4 == 1 {
                    worst = worst.max((direct - closed).norm());
                }
            }
        }
    }
    let mut check = Check::new("gauss_closed_form", cases, worst, tol);
    let table: BTreeMap<String, [f64; 2]> = ratios
        .iter()
        .map(|(d, r)| (format!("deg{d}"), [round(r[0].re), round(r[0].im)]))
        .collect();
    check.detail = Some(json!({ "epsilon_by_degree": table, "closed_form_literal": q % 4 == 1 }));
    Ok(check)
}

fn round(x: f64) -> f64 {
    (x * 1e9).round() / 1e9 + 0.0
}

fn random_monic(rng: &mut ChaCha8Rng, q: u32, deg: usize) -> PolyFq {
    let mut c: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..q)).collect();
    c.push(1);
    PolyFq::new(q, c)
}

/// Poisson sides grow like q^m, so residuals are taken relative to max(1, |lhs|).
fn relative(l: Complex64, r: Complex64) -> f64 {
    (l - r).norm() / l.norm().max(1.0)
}

fn poisson_checks(q: u32, rng: &mut ChaCha8Rng, tol: f64) -> CliResult<[Check; 2]> {
    let (mut wm, mut wa, mut cases) = (0.0f64, 0.0f64, 0);
    let trials = 10;
    for deg in 1..=3 {
        for m in 1..=3 {
            for _ in 0..trials {
                let f = random_monic(rng, q, deg);
                let func = PeriodicFn::random(&f, rng)?;
                let (l, r) = poisson_monic(&func, m)?;
                wm = wm.max(relative(l, r));
                let (l, r) = poisson_all(&func, m)?;
                wa = wa.max(relative(l, r));
                cases += 1;
            }
        }
    }
    Ok([Check::new("poisson_monic", cases, wm, tol), Check::new("poisson_all_leading", cases, wa, tol)])
}

fn ec_fourier_check(q: u32, tol: f64) -> CliResult<Check> {
    let mut places = vec![PolyFq::t(q), PolyFq::new(q, vec![1, 1])];
    let quad = PolyFq::new(q, vec![2, 0, 1]);
    places.push(if is_irreducible(&quad)? {
        quad
    } else {
        IrreducibleTable::build(q, 2)?.primes(2).next().expect("degree-2 primes exist")
    });
    let (mut worst, mut cases) = (0.0f64, 0);
    let mut ratios = BTreeMap::new();
    for p in &places {
        let ring = ResidueRing::new(p)?;
        let brute = ec_fourier_brute_table(p)?;
        // the brute transform carries the Gauss-sum unit ε(P); it is 1 when q ≡ 1 mod 4
        let mut eps = if q % 4 == 1 { Some(Complex64::new(1.0, 0.0)) } else { None };
        for alpha in 0..ring.size {
            for beta in 0..ring.size {
                let closed = ec_fourier_closed(&ring.to_poly(alpha), &ring.to_poly(beta), p)?;
                let direct = brute[(alpha * ring.size + beta) as usize];
                if closed.norm() > 0.0 && eps.is_none() {
                    eps = Some(direct / closed);
                }
                worst = worst.max((closed * eps.unwrap_or(Complex64::new(1.0, 0.0)) - direct).norm());
                cases += 1;
            }
        }
        let r = eps.unwrap_or(Complex64::new(1.0, 0.0));
        ratios.insert(p.to_string(), [round(r.re), round(r.im)]);
    }
    let mut check = Check::new("ec_fourier_closed_form", cases, worst, tol);
    check.detail = Some(json!({ "epsilon_by_place": ratios }));
    Ok(check)
}

fn reciprocity_check(q: u32, rng: &mut ChaCha8Rng) -> CliResult<Check> {
    let (mut failures, mut cases) = (0u64, 0);
    while cases < 200 {
        let (da, db) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_monic(rng, q, da);
        let b = random_monic(rng, q, db);
        if !a.gcd(&b)?.is_one() {
            continue;
        }
        let w = elementary_reciprocity(&a, &b)?;
        let x = PolyFq::new(q, (0..6).map(|_| rng.gen_range(0..q)).collect());
        if !w.certify_exponential(&x)? {
            failures += 1;
        }
        cases += 1;
    }
    Ok(Check::new("elementary_reciprocity", cases, failures as f64, 0.0))
}

fn dirichlet_checks(q: u32, tol: f64, root_tol: f64) -> CliResult<[Check; 2]> {
    let max_degree = if q <= 7 { 3 } else { 2 };
    let r = rh_sweep(RhSweepConfig {
        q,
        max_degree,
        trace_max_degree: 2,
        trace_max_n: 4,
        tail_max_degree: 2,
    })?;
    let mut rh = Check::new("dirichlet_rh", r.primitive, r.max_root_deviation, root_tol);
    rh.detail = Some(serde_json::to_value(&r).expect("plain data"));
    let tail = r.max_tail.unwrap_or(0.0).max(r.max_c0_deviation);
    let trace = Check::new("dirichlet_trace_identity", r.trace_checked, r.max_trace_residual.max(tail), tol);
    Ok([rh, trace])
}

fn mixed_check(q: u32, budget: f64, primes: &IrreducibleTable) -> CliResult<Check> {
    let (mut cases, mut worst_ratio) = (0u64, 0.0f64);
    let qf = q as f64;
    for n in 1..=8 {
        for k in 1..=8 {
            for l in 1..=4 {
                if qf.powi((n + k + 2 * l) as i32) > budget || n > primes.max_degree() {
                    continue;
                }
                for a in [1u32, 2] {
                    let s = mixed_char_sum(q, n, k, l, a, budget, Some(primes))?;
                    worst_ratio = worst_ratio.max(s.value.norm() / s.bound);
                    cases += 1;
                }
            }
        }
    }
    Ok(Check::new("mixed_sum_envelope", cases, worst_ratio, 1.0))
}

pub fn run(common: &Common, q: u32, seed: u64, budget: f64) -> CliResult<u8> {
    if budget.is_nan() || budget <= 0.0 {
        return Err(CliError::Usage("--budget must be positive".into()));
    }
    let tol = common.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = match ffrank::cache::load(&common.cache_dir, q, 4) {
        Some(t) => t,
        None => IrreducibleTable::build(q, 4)?,
    };
    let mut checks = vec![gauss_check(q, &primes, tol)?];
    checks.extend(poisson_checks(q, &mut rng, tol)?);
    checks.push(ec_fourier_check(q, tol)?);
    checks.push(reciprocity_check(q, &mut rng)?);
    checks.extend(dirichlet_checks(q, tol, common.root_tol)?);
    checks.push(mixed_check(q, budget, &primes)?);
    for c in &checks {
        eprintln!(
            "{:<28} {:>8} cases  worst {:<12.3e} limit {:<8.1e} {}",
            c.name,
            c.cases,
            c.worst,
            c.limit,
            if c.pass { "ok" } else { "FAIL" }
        );
    }
    let pass = checks.iter().all(|c| c.pass);
    let report = json!({ "q": q, "seed": seed, "pass": pass, "checks": checks });
    emit(common, &(serde_json::to_string_pretty(&report).expect("plain data") + "\n"))?;
    if pass {
        Ok(0)
    } else {
        Err(CliError::Invariant("identity suite failed".into()))
    }
}
