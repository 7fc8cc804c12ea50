//! L(E, u) = Π_P L_P(E, u^{deg P})^{-1} as an exact integer polynomial.
//!
//! With s_k(P) = α_P^k + ᾱ_P^k at good places (s_k = a s_{k−1} − q^d s_{k−2}) and
//! s_k = a_P^k at bad ones, log L = Σ_n (b_n/n) uⁿ where b_n = Σ_{d|n} d Σ_{deg P=d} s_{n/d}(P),
//! so n c_n = Σ_{i=1}^n b_i c_{n−i}.

use num_complex::Complex64;

use super::{EllipticSurface, FieldCache, ReductionDatum, ReductionType};
use crate::error::{Error, Result};
use crate::roots::poly_roots;

/// Sign of the k = 1 prime term in the exact identity for the normalized zero power sums.
pub const SIGMA: f64 = -1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LConfig {
    /// Euler products are taken through prime degree min(max(N + 3, min_depth), max_depth).
    pub max_depth: usize,
    pub min_depth: usize,
}

impl LConfig {
    pub fn new(max_depth: usize) -> Self {
        LConfig { max_depth, min_depth: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    /// Euler product through N + 3; coefficients past N verified to vanish.
    Full,
    /// Euler product stopped short; the top coefficients come from c_{N−i} = ε q^{N−2i} c_i.
    Functional,
}

/// Σ_{deg P = d} s_k(P) split by good and bad places, k·d ≤ depth.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimePowerSums {
    pub good: Vec<Vec<i128>>,
    pub bad: Vec<Vec<i128>>,
}

impl PrimePowerSums {
    fn new(depth: usize) -> Self {
        let rows = |d: usize| if d == 0 { Vec::new() } else { vec![0; depth / d + 1] };
        PrimePowerSums {
            good: (0..=depth).map(rows).collect(),
            bad: (0..=depth).map(rows).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.good.len() - 1
    }

    fn add_good(&mut self, q: u32, d: usize, a: i64) {
        let qd = (q as i128).pow(d as u32);
        let row = &mut self.good[d];
        let (mut prev, mut cur) = (2i128, a as i128);
        for k in 1..row.len() {
            row[k] += cur;
            let next = a as i128 * cur - qd * prev;
            prev = cur;
            cur = next;
        }
    }

    fn add_bad(&mut self, d: usize, a: i64) {
        let row = &mut self.bad[d];
        let mut pw = 1i128;
        for slot in row.iter_mut().skip(1) {
            pw *= a as i128;
            *slot += pw;
        }
    }

    /// b_n = Σ_{d|n} d·Σ_{deg P=d} s_{n/d}(P).
    pub fn b(&self, n: usize) -> i128 {
        (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| d as i128 * (self.good[d][n / d] + self.bad[d][n / d]))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ECLPolynomial {
    pub q: u32,
    /// c_0..c_N.
    pub coeffs: Vec<i64>,
    /// Euler-product coefficients c_0..c_K as computed (K = `depth`).
    pub series: Vec<i64>,
    pub depth: usize,
    pub completion: Completion,
    pub epsilon: i8,
    pub analytic_rank: usize,
    /// μ_i with L = Π (1 − μ_i u).
    pub zeros: Vec<Complex64>,
    pub prime_sums: PrimePowerSums,
}

impl ECLPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest |c_n| over N < n ≤ K (must be 0).
    pub fn tail_max(&self) -> i64 {
        self.series.iter().skip(self.coeffs.len()).map(|c| c.abs()).max().unwrap_or(0)
    }

    /// |c_N| = q^N.
    pub fn top_is_unit_scaled(&self) -> bool {
        let n = self.degree() as u32;
        self.coeffs[n as usize].unsigned_abs() as u128 == (self.q as u128).pow(n)
    }
}

/// c_{N−i} = ε q^{N−2i} c_i for every i.
pub fn satisfies_functional_equation(coeffs: &[i64], q: u32, epsilon: i8) -> bool {
    let n = coeffs.len() - 1;
    (0..=n).all(|i| {
        let lhs = coeffs[n - i] as i128 * (q as i128).pow(i as u32);
        let rhs = epsilon as i128 * coeffs[i] as i128 * (q as i128).pow((n - i) as u32);
        lhs == rhs
    })
}

/// Largest r with (1 − qu)^r | L, in exact integer arithmetic.
pub fn analytic_rank(coeffs: &[i64], q: u32) -> usize {
    let mut c: Vec<i128> = coeffs.iter().map(|&x| x as i128).collect();
    let mut r = 0;
    while c.len() > 1 {
        // c = (1 − qu)·d: d_0 = c_0, d_k = c_k + q d_{k−1}; exact iff the last step cancels
        let mut d = Vec::with_capacity(c.len() - 1);
        let mut prev = 0i128;
        for &x in &c[..c.len() - 1] {
            prev = x + q as i128 * prev;
            d.push(prev);
        }
        if c[c.len() - 1] + q as i128 * prev != 0 {
            break;
        }
        c = d;
        r += 1;
    }
    r
}

fn datum_sums(sums: &mut PrimePowerSums, q: u32, d: &ReductionDatum) {
    let deg = d.place.degree();
    if deg > sums.depth() {
        return;
    }
    match d.kind {
        ReductionType::Good => sums.add_good(q, deg, d.a_p),
        _ => sums.add_bad(deg, d.a_p),
    }
}

/// Σ s_k(P) through prime degree `depth`, every place of F_q(t) included.
pub fn prime_power_sums(e: &EllipticSurface, cache: &FieldCache, depth: usize) -> Result<PrimePowerSums> {
    if depth > cache.depth() {
        return Err(Error::DepthExceeded { needed: depth, depth: cache.depth() });
    }
    if cache.q != e.q {
        return Err(Error::ModulusMismatch(cache.q, e.q));
    }
    let mut sums = PrimePowerSums::new(depth);
    for d in 1..=depth {
        let table = cache.table(d).expect("depth checked");
        let f = &table.field;
        for &l in &f.roots {
            // places dividing Δ carry precomputed local data
            if f.eval_at_log(&e.disc, l) == 0 {
                continue;
            }
            sums.add_good(e.q, d, table.trace(&e.a, &e.b, l));
        }
    }
    for datum in e.finite.iter().chain(std::iter::once(&e.infinity)) {
        datum_sums(&mut sums, e.q, datum);
    }
    Ok(sums)
}

/// c_0..c_K from the Newton recursion; the division by n is exact.
fn coefficients_from_sums(sums: &PrimePowerSums) -> Result<Vec<i64>> {
    let k = sums.depth();
    let b: Vec<i128> = (0..=k).map(|n| if n == 0 { 0 } else { sums.b(n) }).collect();
    let mut c = vec![1i128];
    for n in 1..=k {
        let s: i128 = (1..=n).map(|i| b[i] * c[n - i]).sum();
        if s % n as i128 != 0 {
            return Err(Error::Inconsistent(format!("Newton step {n} not integral")));
        }
        c.push(s / n as i128);
    }
    c.into_iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::Inconsistent("coefficient overflow".into())))
        .collect()
}

pub fn l_polynomial_ec(e: &EllipticSurface, cache: &FieldCache, cfg: LConfig) -> Result<ECLPolynomial> {
    let n_signed = e.l_degree();
    if n_signed < 0 {
        return Err(Error::NegativeLDegree(e.conductor().degree));
    }
    let n = n_signed as usize;
    let max_depth = cfg.max_depth.min(cache.depth());
    let depth = (n + 3).max(cfg.min_depth).min(max_depth);
    let sums = prime_power_sums(e, cache, depth)?;
    let series = coefficients_from_sums(&sums)?;
    let q = e.q;
    let (coeffs, completion, epsilon) = if depth >= n {
        if series[n + 1..].iter().any(|&c| c != 0) {
            return Err(Error::Inconsistent(format!("L-series does not terminate at degree {n}")));
        }
        let coeffs = series[..=n].to_vec();
        let top = coeffs[n] as i128;
        let qn = (q as i128).pow(n as u32);
        let epsilon = if top == qn {
            1
        } else if top == -qn {
            -1
        } else {
            return Err(Error::Inconsistent(format!("|c_N| = {} ≠ q^N", top.abs())));
        };
        let completion = if depth >= n + 3 { Completion::Full } else { Completion::Functional };
        (coeffs, completion, epsilon)
    } else {
        let (coeffs, epsilon) = complete_functional(&series, n, q)?;
        (coeffs, Completion::Functional, epsilon)
    };
    if !satisfies_functional_equation(&coeffs, q, epsilon) {
        return Err(Error::Inconsistent("functional equation fails".into()));
    }
    let analytic_rank = analytic_rank(&coeffs, q);
    let zeros = zeros_of(&coeffs, q);
    Ok(ECLPolynomial {
        q,
        coeffs,
        series,
        depth,
        completion,
        epsilon,
        analytic_rank,
        zeros,
        prime_sums: sums,
    })
}

/// Fill c_{K+1..N} from the functional equation once ε is pinned by a pair (c_i, c_{N−i}) in range.
fn complete_functional(series: &[i64], n: usize, q: u32) -> Result<(Vec<i64>, i8)> {
    let k = series.len() - 1;
    let consistent = |eps: i8| {
        (n.saturating_sub(k)..=k.min(n)).all(|i| {
            let lhs = series[n - i] as i128 * (q as i128).pow(i as u32);
            let rhs = eps as i128 * series[i] as i128 * (q as i128).pow((n - i) as u32);
            lhs == rhs
        })
    };
    let plus = 2 * k >= n && consistent(1);
    let minus = 2 * k >= n && consistent(-1);
    let epsilon = match (plus, minus) {
        (true, false) => 1,
        (false, true) => -1,
        (false, false) if 2 * k >= n => {
            return Err(Error::Inconsistent("no sign satisfies the functional equation".into()))
        }
        _ => return Err(Error::DepthExceeded { needed: k + 1, depth: k }),
    };
    let mut coeffs = series.to_vec();
    for j in k + 1..=n {
        // c_j = ε q^{2j−N} c_{N−j}
        let v = epsilon as i128 * series[n - j] as i128 * (q as i128).pow((2 * j - n) as u32);
        coeffs.push(i64::try_from(v).map_err(|_| Error::Inconsistent("coefficient overflow".into()))?);
    }
    Ok((coeffs, epsilon))
}

/// μ_i via the unit-circle polynomial Σ c_k q^{−k} w^k = Π (1 − (μ_i/q) w): μ_i/q = conj(w_i).
fn zeros_of(coeffs: &[i64], q: u32) -> Vec<Complex64> {
    let w: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| Complex64::new(c as f64 / (q as f64).powi(k as i32), 0.0))
        .collect();
    poly_roots(&w).into_iter().map(|z| z.conj() * q as f64).collect()
}

/// Normalized zero power sums against the prime side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerSumCheck {
    pub n: usize,
    /// (1/n) Σ (μ_i/q)^n.
    pub lhs: Complex64,
    /// −q^{−n} Σ_{k|n} Σ_{deg P = n/k} s_k(P)/k, all places.
    pub rhs_full: f64,
    /// q^{−n} Σ_{P good, deg P = n} a_P.
    pub prime_term: f64,
    /// −q^{−n} Σ_{P good, deg P = n/2} s_2(P)/2 (0 for odd n).
    pub k2_term: f64,
    /// σ·prime_term + ½·[n even].
    pub rhs_k1_half: f64,
}

impl PowerSumCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs_full).norm()
    }
}

pub fn zero_power_sums(lp: &ECLPolynomial, n: usize) -> Result<PowerSumCheck> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > lp.depth {
        return Err(Error::DepthExceeded { needed: n, depth: lp.depth });
    }
    let q = lp.q as f64;
    let qn = q.powi(n as i32);
    let lhs = lp.zeros.iter().map(|mu| (mu / q).powu(n as u32)).sum::<Complex64>() / n as f64;
    let sums = &lp.prime_sums;
    let rhs_full = -(sums.b(n) as f64) / (n as f64 * qn) + 0.0;
    let prime_term = sums.good[n][1] as f64 / qn;
    let k2_term = if n % 2 == 0 { -(sums.good[n / 2][2] as f64) / (2.0 * qn) } else { 0.0 };
    let half = if n % 2 == 0 { 0.5 } else { 0.0 };
    Ok(PowerSumCheck { n, lhs, rhs_full, prime_term, k2_term, rhs_k1_half: SIGMA * prime_term + half })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq_poly::{IrreducibleTable, PolyFq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(c: &[i64]) -> PolyFq {
        PolyFq::from_i64s(5, c)
    }

    fn cache() -> FieldCache {
        FieldCache::new(5, 6).unwrap()
    }

    #[test]
    fn additive_twice_gives_trivial_l() {
        let e = EllipticSurface::new(&p(&[0, 0, 1]), &p(&[0, 0, 0, 1])).unwrap();
        let lp = l_polynomial_ec(&e, &cache(), LConfig::new(6)).unwrap();
        assert_eq!(lp.coeffs, vec![1]);
        assert_eq!(lp.analytic_rank, 0);
        assert_eq!(lp.completion, Completion::Full);
        for n in 1..=3 {
            let c = zero_power_sums(&lp, n).unwrap();
            assert!(c.lhs.norm() < 1e-12 && c.rhs_full.abs() < 1e-12);
        }
    }

    #[test]
    fn rank_by_exact_division() {
        assert_eq!(analytic_rank(&[1], 5), 0);
        // (1 − 5u)² = 1 − 10u + 25u²
        assert_eq!(analytic_rank(&[1, -10, 25], 5), 2);
        // (1 − 5u)(1 + 5u)
        assert_eq!(analytic_rank(&[1, 0, -25], 5), 1);
        assert_eq!(analytic_rank(&[1, 3, 25], 5), 0);
    }

    #[test]
    fn constant_curve_is_rejected() {
        let e = EllipticSurface::new(&p(&[1]), &p(&[1])).unwrap();
        assert!(matches!(l_polynomial_ec(&e, &cache(), LConfig::new(6)), Err(Error::NegativeLDegree(0))));
    }

    fn random_curve(rng: &mut ChaCha8Rng, da: usize, db: usize) -> EllipticSurface {
        loop {
            let mut draw = |d: usize| {
                let mut c: Vec<u32> = (0..d).map(|_| rng.gen_range(0..5)).collect();
                c.push(rng.gen_range(1..5));
                PolyFq::new(5, c)
            };
            let (a, b) = (draw(da), draw(db));
            if let Ok(e) = EllipticSurface::new(&a, &b) {
                return e;
            }
        }
    }

    /// The fiber-table a_P agree with point counts at every good place of degree ≤ 3.
    #[test]
    fn fiber_traces_match_point_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cache = FieldCache::new(5, 3).unwrap();
        let table = IrreducibleTable::build(5, 3).unwrap();
        for _ in 0..4 {
            let e = random_curve(&mut rng, 2, 3);
            let direct = {
                let mut s = PrimePowerSums::new(3);
                for d in 1..=3 {
                    for pp in table.primes(d) {
                        match e.trace_ap(&pp) {
                            Ok(a) => s.add_good(5, d, a),
                            Err(Error::BadReduction(_)) => {}
                            Err(x) => panic!("{x}"),
                        }
                    }
                }
                // good finite places of Δ were already counted through trace_ap
                for datum in e.finite.iter().filter(|d| d.kind != ReductionType::Good) {
                    datum_sums(&mut s, 5, datum);
                }
                datum_sums(&mut s, 5, &e.infinity);
                s
            };
            assert_eq!(prime_power_sums(&e, &cache, 3).unwrap(), direct);
        }
    }

    #[test]
    fn random_curves_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let cache = cache();
        for _ in 0..20 {
            let e = random_curve(&mut rng, 1, 2);
            let lp = l_polynomial_ec(&e, &cache, LConfig { max_depth: 6, min_depth: 6 }).unwrap();
            assert_eq!(lp.coeffs[0], 1);
            assert_eq!(lp.degree() as i64, e.l_degree());
            assert!(lp.top_is_unit_scaled());
            assert_eq!(lp.tail_max(), 0);
            assert_eq!(analytic_rank(&lp.coeffs, 5) % 2 == 1, lp.epsilon == -1);
            for mu in &lp.zeros {
                assert!((mu.norm() - 5.0).abs() < 1e-6);
            }
            for n in 1..=6 {
                let c = zero_power_sums(&lp, n).unwrap();
                assert!(c.residual() < 1e-9, "n={n} {c:?}");
            }
        }
    }

    /// Flipping the sign of the k = 1 good-prime term breaks the exact identity.
    #[test]
    fn sigma_is_forced() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let cache = cache();
        let mut broken = 0;
        for _ in 0..10 {
            let e = random_curve(&mut rng, 1, 2);
            let lp = l_polynomial_ec(&e, &cache, LConfig::new(6)).unwrap();
            for n in 1..=4 {
                let c = zero_power_sums(&lp, n).unwrap();
                let flipped = c.rhs_full - 2.0 * SIGMA * c.prime_term;
                if (c.lhs.re - flipped).abs() > 1e-6 {
                    broken += 1;
                }
            }
        }
        assert!(broken > 0);
    }

    #[test]
    fn functional_completion_matches_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let cache = cache();
        let mut checked = 0;
        for _ in 0..20 {
            let e = random_curve(&mut rng, 2, 3);
            let full = l_polynomial_ec(&e, &cache, LConfig::new(6)).unwrap();
            let n = full.degree();
            if n < 2 {
                continue;
            }
            let short = LConfig { max_depth: n - 1, min_depth: 0 };
            match l_polynomial_ec(&e, &cache, short) {
                Ok(lp) => {
                    assert_eq!(lp.completion, Completion::Functional);
                    assert_eq!(lp.coeffs, full.coeffs);
                    checked += 1;
                }
                Err(Error::DepthExceeded { .. }) => {}
                Err(x) => panic!("{x}"),
            }
        }
        assert!(checked > 0);
    }
}
