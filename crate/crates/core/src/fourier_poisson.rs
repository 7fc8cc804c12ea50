//! Gauss sums, Fourier transforms of periodic functions mod f, Poisson
//! summation over monic and over all polynomials of a fixed degree, the
//! Fourier transform of the point-count function F(A,B;P), the elementary
//! reciprocity identity, and the mixed prime/character sum bound.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::characters::{
    hayes_e, jacobi_symbol, quadratic_table, unit, unit_table, DirichletCharacter, ResidueRing,
};
use crate::error::{Error, Result};
use crate::fq_poly::{field, is_irreducible, IrreducibleTable, PolyFq};

/// A function on F_q[t] periodic modulo f, tabulated over residue indices.
#[derive(Clone, Debug)]
pub struct PeriodicFn {
    pub modulus: PolyFq,
    ring: ResidueRing,
    pub values: Vec<Complex64>,
}

impl PeriodicFn {
    pub fn new(modulus: &PolyFq, values: Vec<Complex64>) -> Result<Self> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::ConstantPolynomial(modulus.to_string()));
        }
        let ring = ResidueRing::new(&modulus.monic())?;
        if values.len() as u64 != ring.size {
            return Err(Error::InvalidArgument(format!(
                "table has {} entries, modulus needs {}",
                values.len(),
                ring.size
            )));
        }
        Ok(PeriodicFn { modulus: modulus.clone(), ring, values })
    }

    pub fn from_fn(modulus: &PolyFq, f: impl Fn(&PolyFq) -> Complex64) -> Result<Self> {
        let ring = ResidueRing::new(&modulus.monic())?;
        let values = (0..ring.size).map(|r| f(&ring.to_poly(r))).collect();
        Self::new(modulus, values)
    }

    /// Values uniform in the square [−1, 1]².
    pub fn random(modulus: &PolyFq, rng: &mut impl Rng) -> Result<Self> {
        let ring = ResidueRing::new(&modulus.monic())?;
        let values = (0..ring.size)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self::new(modulus, values)
    }

    pub fn from_character(chi: &DirichletCharacter) -> Result<Self> {
        Self::new(chi.modulus(), chi.value_table())
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn eval(&self, g: &PolyFq) -> Complex64 {
        self.values[self.ring.reduce(g) as usize]
    }
}

/// Exponent of e(uV/f) for every residue index V: V ↦ a₁(uV/f) is F_q-linear in V.
pub fn additive_exponents(u: &PolyFq, f: &PolyFq) -> Result<Vec<u32>> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    let q = f.q();
    let w: Vec<u32> = (0..n)
        .map(|j| hayes_e(&u.shift(j), f).map(|e| e.k))
        .collect::<Result<_>>()?;
    let size = (q as usize).pow(n as u32);
    let mut table = vec![0u32; size];
    let mut block = 1usize;
    for &wj in &w {
        for d in 1..q as usize {
            let add = field::mul(d as u32, wj, q);
            for r in 0..block {
                table[d * block + r] = field::add(table[r], add, q);
            }
        }
        block *= q as usize;
    }
    Ok(table)
}

/// F̂(u; f) = Σ_{V mod f} F(V) e(uV/f).
pub fn fourier_transform(f: &PeriodicFn, u: &PolyFq) -> Result<Complex64> {
    let exps = additive_exponents(u, &f.modulus)?;
    let units = unit_table(f.modulus.q() as u64);
    Ok(f.values.iter().zip(&exps).map(|(v, &e)| v * units[e as usize]).sum())
}

/// G(u, χ) = Σ_{V mod h} χ(V) e(uV/h), by direct summation.
pub fn gauss_sum(u: &PolyFq, chi: &DirichletCharacter) -> Result<Complex64> {
    let h = chi.modulus();
    let exps = additive_exponents(u, h)?;
    let q = h.q() as u64;
    let m = chi.order_bound();
    let mut acc = Complex64::new(0.0, 0.0);
    for (v, &e) in exps.iter().enumerate() {
        if let Some(c) = chi.exponent_of_residue(v as u64) {
            // χ(V)e(uV/h) = e^{2πi(c/M + e/q)}, combined over the common denominator Mq
            acc += unit(c * q + e as u64 * m, m * q);
        }
    }
    Ok(acc)
}

/// G(V, χ_P) for the quadratic character, summed exactly as an integer histogram over e(·).
pub fn gauss_sum_quadratic(v: &PolyFq, p: &PolyFq, table: &[i8]) -> Result<Complex64> {
    let exps = additive_exponents(v, p)?;
    let q = p.q() as usize;
    let mut hist = vec![0i64; q];
    for (&e, &s) in exps.iter().zip(table) {
        hist[e as usize] += s as i64;
    }
    Ok(hist
        .iter()
        .enumerate()
        .map(|(k, &c)| unit(k as u64, q as u64) * c as f64)
        .sum())
}

/// G(V, χ_P) for every residue index V at once. With x = Σ x_j t^j, a₁(Vx/P) = Σ_j x_j a₁(V t^j/P),
/// so G(V) = χ̂(φ(V)) where χ̂ is the additive DFT of χ_P over (Z/q)^e and φ(V)_j = Σ_i V_i h_{i+j},
/// h_k = a₁(t^k/P).
pub fn gauss_sums_quadratic_all(p: &PolyFq) -> Result<Vec<Complex64>> {
    require_prime(p)?;
    let q = p.q();
    let e = p.degree().unwrap();
    let ring = ResidueRing::new(p)?;
    let mut chi_hat: Vec<Complex64> =
        quadratic_table(&ring).iter().map(|&s| Complex64::new(s as f64, 0.0)).collect();
    additive_dft(&mut chi_hat, q, e, false);
    let h: Vec<u32> = (0..2 * e)
        .map(|k| hayes_e(&PolyFq::monomial(q, 1, k), p).map(|x| x.k))
        .collect::<Result<_>>()?;
    let mut digits = vec![0u64; e];
    Ok((0..ring.size)
        .map(|v| {
            ring.decode(v, &mut digits);
            let mut w = 0usize;
            let mut place = 1usize;
            for j in 0..e {
                let c = (0..e).fold(0u32, |acc, i| field::add(acc, field::mul(digits[i] as u32, h[i + j], q), q));
                w += c as usize * place;
                place *= q as usize;
            }
            chi_hat[w]
        })
        .collect())
}

/// In-place Σ_r f(r) ζ^{±⟨k, r⟩} over (Z/q)^e, digits of the index as coordinates.
pub fn additive_dft(data: &mut [Complex64], q: u32, e: usize, inverse: bool) {
    let q = q as usize;
    let units = unit_table(q as u64);
    let mut stride = 1usize;
    let mut tmp = vec![Complex64::new(0.0, 0.0); q];
    for _ in 0..e {
        let block = stride * q;
        for start in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (k, t) in tmp.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for r in 0..q {
                        let idx = if inverse { (q - (k * r) % q) % q } else { (k * r) % q };
                        acc += data[start + off + r * stride] * units[idx];
                    }
                    *t = acc;
                }
                for (k, &t) in tmp.iter().enumerate() {
                    data[start + off + k * stride] = t;
                }
            }
        }
        stride = block;
    }
}

fn require_prime(p: &PolyFq) -> Result<()> {
    if !p.is_monic() {
        return Err(Error::NotMonic(p.to_string()));
    }
    if !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    Ok(())
}

/// |P|^{1/2}·(V/P).
pub fn gauss_sum_prime_closed(v: &PolyFq, p: &PolyFq) -> Result<Complex64> {
    require_prime(p)?;
    let s = jacobi_symbol(v, p)?;
    Ok(Complex64::new(p.norm().sqrt() * s as f64, 0.0))
}

/// Unit ratio ε(P) = G_direct / G_closed for V coprime to P (`None` when P | V).
pub fn gauss_unit_ratio(v: &PolyFq, p: &PolyFq) -> Result<Option<Complex64>> {
    let closed = gauss_sum_prime_closed(v, p)?;
    if closed.norm() == 0.0 {
        return Ok(None);
    }
    let ring = ResidueRing::new(p)?;
    let direct = gauss_sum_quadratic(v, p, &quadratic_table(&ring))?;
    Ok(Some(direct / closed))
}

fn residue_sum_over_monics(f: &PeriodicFn, m: usize, scalars: &[u32]) -> Complex64 {
    let q = f.modulus.q();
    let count = (q as u64).pow(m as u32);
    let mut acc = Complex64::new(0.0, 0.0);
    for &a in scalars {
        for i in 0..count {
            let g = PolyFq::monic_from_index(q, i, m).scale(a);
            acc += f.eval(&g);
        }
    }
    acc
}

/// Σ_{g ∈ M_m} F(g) against (q^m/|f|) Σ_{deg V ≤ n−m−1} F̂(V;f) e(−V t^m/f).
pub fn poisson_monic(f: &PeriodicFn, m: usize) -> Result<(Complex64, Complex64)> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let q = f.modulus.q();
    let n = f.modulus.degree().unwrap();
    let lhs = residue_sum_over_monics(f, m, &[1]);
    // V ranges over deg V ≤ n − m − 1, always including V = 0
    let span = n.saturating_sub(m);
    let count = (q as u64).pow(span as u32);
    let units = unit_table(q as u64);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..count {
        let v = PolyFq::from_index(q, i, span);
        let twist = hayes_e(&(-&v.shift(m)), &f.modulus)?;
        acc += fourier_transform(f, &v)? * units[twist.k as usize];
    }
    let rhs = acc * ((q as f64).powi(m as i32) / f.modulus.norm());
    Ok((lhs, rhs))
}

/// Sum over H_m and the all-leading Poisson side; V = 0 carries weight q − 1
/// (deg 0 = −∞ lies below n − m − 1 even when n − m − 1 < 0).
pub fn poisson_all(f: &PeriodicFn, m: usize) -> Result<(Complex64, Complex64)> {
    let q = f.modulus.q() as f64;
    poisson_all_with_zero_weight(f, m, q - 1.0)
}

/// Same as [`poisson_all`] with an explicit weight for the V = 0 term.
pub fn poisson_all_with_zero_weight(
    f: &PeriodicFn,
    m: usize,
    zero_weight: f64,
) -> Result<(Complex64, Complex64)> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let q = f.modulus.q();
    let n = f.modulus.degree().unwrap() as i64;
    let scalars: Vec<u32> = (1..q).collect();
    let lhs = residue_sum_over_monics(f, m, &scalars);
    let top = n - m as i64 - 1;
    let mut acc = f.values.iter().sum::<Complex64>() * zero_weight;
    if top >= 0 {
        let count = (q as u64).pow(top as u32 + 1);
        for i in 1..count {
            let v = PolyFq::from_index(q, i, top as usize + 1);
            let w = if v.degree_i64() == top { -1.0 } else { q as f64 - 1.0 };
            acc += fourier_transform(f, &v)? * w;
        }
    }
    let rhs = acc * ((q as f64).powi(m as i32) / f.modulus.norm());
    Ok((lhs, rhs))
}

/// |P|^{3/2}(β/P) e(−α³β̄²/P), with β̄ = 0 when P | β.
pub fn ec_fourier_closed(alpha: &PolyFq, beta: &PolyFq, p: &PolyFq) -> Result<Complex64> {
    require_prime(p)?;
    let s = jacobi_symbol(beta, p)?;
    if s == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let beta_bar = beta.inverse_mod(p)?;
    let arg = -&(&alpha.pow(3) * &beta_bar.pow(2));
    let e = hayes_e(&arg, p)?;
    Ok(e.value() * (p.norm().powf(1.5) * s as f64))
}

/// F̂(α, β; P) for every (α, β) residue pair, from F(A,B;P) = Σ_x ((x³+Ax+B)/P) by direct summation.
/// Entry `[α·|P| + β]`.
pub fn ec_fourier_brute_table(p: &PolyFq) -> Result<Vec<Complex64>> {
    require_prime(p)?;
    let ring = ResidueRing::new(p)?;
    let size = ring.size as usize;
    let chi = quadratic_table(&ring);
    let add = |a: u64, b: u64| ring.reduce(&(&ring.to_poly(a) + &ring.to_poly(b)));
    // F(A, B) over all residue pairs
    let mut fab = vec![0i64; size * size];
    for x in 0..ring.size {
        let x3 = ring.mul(ring.mul(x, x), x);
        for a in 0..ring.size {
            let base = add(x3, ring.mul(a, x));
            for b in 0..ring.size {
                fab[a as usize * size + b as usize] += chi[add(base, b) as usize] as i64;
            }
        }
    }
    let units = unit_table(p.q() as u64);
    let q = p.q();
    let mut out = Vec::with_capacity(size * size);
    for alpha in 0..ring.size {
        let ea = additive_exponents(&ring.to_poly(alpha), p)?;
        for beta in 0..ring.size {
            let eb = additive_exponents(&ring.to_poly(beta), p)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..size {
                for b in 0..size {
                    let c = fab[a * size + b];
                    if c != 0 {
                        acc += units[field::add(ea[a], eb[b], q) as usize] * c as f64;
                    }
                }
            }
            out.push(acc);
        }
    }
    Ok(out)
}

/// Inverses witnessing αᾱ + ββ̄ ≡ 1 mod αβ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityWitness {
    pub alpha: PolyFq,
    pub beta: PolyFq,
    /// α^{-1} mod β.
    pub alpha_bar: PolyFq,
    /// β^{-1} mod α.
    pub beta_bar: PolyFq,
}

impl ReciprocityWitness {
    /// e(X/(αβ)) = e(Xᾱ/β)·e(Xβ̄/α), checked in exponent arithmetic.
    pub fn certify_exponential(&self, x: &PolyFq) -> Result<bool> {
        let lhs = hayes_e(x, &(&self.alpha * &self.beta))?;
        let rhs = hayes_e(&(x * &self.alpha_bar), &self.beta)?
            .mul(hayes_e(&(x * &self.beta_bar), &self.alpha)?);
        Ok(lhs == rhs)
    }
}

pub fn elementary_reciprocity(alpha: &PolyFq, beta: &PolyFq) -> Result<ReciprocityWitness> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let g = alpha.gcd(beta)?;
    if !g.is_one() {
        return Err(Error::NotCoprime(g.to_string()));
    }
    // every residue mod a unit is 0
    let inv = |x: &PolyFq, m: &PolyFq| {
        if m.is_constant() {
            Ok(PolyFq::zero(x.q()))
        } else {
            x.inverse_mod(m)
        }
    };
    let alpha_bar = inv(alpha, beta)?;
    let beta_bar = inv(beta, alpha)?;
    let check = &(&(alpha * &alpha_bar) + &(beta * &beta_bar)) - &PolyFq::one(alpha.q());
    if !check.rem(&(alpha * beta))?.is_zero() {
        return Err(Error::Inconsistent("αᾱ + ββ̄ ≢ 1 mod αβ".into()));
    }
    Ok(ReciprocityWitness {
        alpha: alpha.clone(),
        beta: beta.clone(),
        alpha_bar,
        beta_bar,
    })
}

/// Result of the mixed sum over primes P ∈ M_n, V ∈ M_k, deg W = l.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedSum {
    pub value: Complex64,
    pub bound: f64,
}

/// Default brute-force ceiling on q^{n+k+2l}.
pub const DEFAULT_MIXED_BUDGET: f64 = 1e8;

/// The envelope q^{εl}(q^{k+2} + 16^l q^{n/2+2+k/2} + 16^l q^{2l+2+k/2}) at ε = 0.01.
pub fn mixed_sum_bound(q: u32, n: usize, k: usize, l: usize) -> f64 {
    let q = q as f64;
    let (n, k, l) = (n as f64, k as f64, l as f64);
    let s = 16f64.powf(l);
    q.powf(0.01 * l)
        * (q.powf(k + 2.0) + s * q.powf(n / 2.0 + 2.0 + k / 2.0) + s * q.powf(2.0 * l + 2.0 + k / 2.0))
}

/// Σ_P |P|^{-1/2} Σ_{V,W} −(W/P) e((aV)³P̄/W²) by direct summation.
pub fn mixed_char_sum(
    q: u32,
    n: usize,
    k: usize,
    l: usize,
    a: u32,
    budget: f64,
    primes: Option<&IrreducibleTable>,
) -> Result<MixedSum> {
    if n == 0 || k == 0 || l == 0 {
        return Err(Error::InvalidArgument("n, k, l must be positive".into()));
    }
    if a % q == 0 {
        return Err(Error::InvalidArgument("a must be a unit".into()));
    }
    let work = (q as f64).powi((n + k + 2 * l) as i32);
    if work > budget {
        return Err(Error::BudgetExceeded { work, budget });
    }
    let owned;
    let table = match primes {
        Some(t) if t.max_degree() >= n && t.q == q => t,
        _ => {
            owned = IrreducibleTable::build(q, n)?;
            &owned
        }
    };
    // X_V = (aV)³ as coefficient vectors, deg ≤ 3k
    let a3 = field::pow(a, 3, q);
    let xs: Vec<Vec<u32>> = (0..(q as u64).pow(k as u32))
        .map(|i| {
            let v = PolyFq::monic_from_index(q, i, k);
            let x = v.pow(3).scale(a3);
            (0..=3 * k).map(|j| x.coeff(j)).collect()
        })
        .collect();
    let ws: Vec<PolyFq> = (1..q)
        .flat_map(|c| {
            (0..(q as u64).pow(l as u32)).map(move |i| PolyFq::monic_from_index(q, i, l).scale(c))
        })
        .collect();
    let primes: Vec<PolyFq> = table.primes(n).collect();
    let units = unit_table(q as u64);
    let scale = (q as f64).powf(-(n as f64) / 2.0);
    let partials: Vec<Complex64> = primes
        .par_chunks(64)
        .map(|chunk| {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in chunk {
                for w in &ws {
                    let s = jacobi_symbol(w, p).expect("monic prime modulus");
                    if s == 0 {
                        continue;
                    }
                    let w2 = w * w;
                    let Ok(pbar) = p.inverse_mod(&w2) else { continue };
                    // functional X ↦ a₁(X·P̄/W²) on coefficients t^0..t^{3k}
                    let d2 = 2 * l;
                    let lead_inv = field::inv(w2.leading(), q).unwrap();
                    let mut r: Vec<u32> = (0..d2).map(|i| pbar.coeff(i)).collect();
                    let mut fun = Vec::with_capacity(3 * k + 1);
                    for _ in 0..=3 * k {
                        fun.push(field::mul(r[d2 - 1], lead_inv, q));
                        // r ← t·r mod W²
                        let top = field::mul(r[d2 - 1], lead_inv, q);
                        for i in (1..d2).rev() {
                            r[i] = field::sub(r[i - 1], field::mul(top, w2.coeff(i), q), q);
                        }
                        r[0] = field::sub(0, field::mul(top, w2.coeff(0), q), q);
                    }
                    let mut inner = Complex64::new(0.0, 0.0);
                    for x in &xs {
                        let e = x
                            .iter()
                            .zip(&fun)
                            .fold(0u64, |acc, (&c, &f)| acc + c as u64 * f as u64)
                            % q as u64;
                        inner += units[e as usize];
                    }
                    acc -= inner * s as f64;
                }
            }
            acc
        })
        .collect();
    let value = partials.into_iter().sum::<Complex64>() * scale;
    Ok(MixedSum { value, bound: mixed_sum_bound(q, n, k, l) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{DirichletGroup, DEFAULT_GROUP_CEILING};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(q: u32, c: &[i64]) -> PolyFq {
        PolyFq::from_i64s(q, c)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn quadratic_gauss(v: &PolyFq, pp: &PolyFq) -> Complex64 {
        let ring = ResidueRing::new(pp).unwrap();
        gauss_sum_quadratic(v, pp, &quadratic_table(&ring)).unwrap()
    }

    #[test]
    fn all_v_transform_matches_per_v_sums() {
        for (q, deg) in [(5u32, 1usize), (5, 2), (7, 2), (3, 3)] {
            let table = IrreducibleTable::build(q, deg).unwrap();
            for pp in table.primes(deg).take(4) {
                let ring = ResidueRing::new(&pp).unwrap();
                let all = gauss_sums_quadratic_all(&pp).unwrap();
                for v in 0..ring.size {
                    assert!(close(all[v as usize], quadratic_gauss(&ring.to_poly(v), &pp), 1e-9), "q={q} P={pp} v={v}");
                }
            }
        }
    }

    #[test]
    fn gauss_examples() {
        let t = PolyFq::t(5);
        let g = quadratic_gauss(&PolyFq::one(5), &t);
        assert!(close(g, Complex64::new(5f64.sqrt(), 0.0), 1e-12));
        let g = quadratic_gauss(&p(5, &[1]), &p(5, &[2, 0, 1]));
        assert!((g.norm() - 5.0).abs() < 1e-9);
        assert!(close(gauss_sum_prime_closed(&p(5, &[2]), &t).unwrap(), Complex64::new(-(5f64.sqrt()), 0.0), 1e-12));
        assert_eq!(gauss_sum_prime_closed(&t, &t).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(gauss_unit_ratio(&t, &t).unwrap(), None);
        // u = 0 with a non-principal character vanishes
        let group = DirichletGroup::new(&p(5, &[1, 1, 1]), DEFAULT_GROUP_CEILING).unwrap();
        for chi in group.characters().skip(1) {
            assert!(gauss_sum(&PolyFq::zero(5), &chi).unwrap().norm() < 1e-9);
        }
    }

    #[test]
    fn generic_and_quadratic_gauss_agree() {
        let pp = p(7, &[3, 1, 1]);
        let group = DirichletGroup::new(&pp, DEFAULT_GROUP_CEILING).unwrap();
        let chi = group
            .characters()
            .find(|c| {
                let m = group.order;
                c.v.iter().all(|&x| (2 * x) % m == 0) && !c.is_principal()
            })
            .unwrap();
        for v in [p(7, &[1]), p(7, &[2, 5]), p(7, &[0, 3])] {
            let a = gauss_sum(&v, &chi).unwrap();
            let b = quadratic_gauss(&v, &pp);
            assert!(close(a, b, 1e-9), "{a} vs {b}");
        }
        // transform of the character table is the Gauss sum
        let f = PeriodicFn::from_character(&chi).unwrap();
        assert!(close(fourier_transform(&f, &p(7, &[2, 5])).unwrap(), gauss_sum(&p(7, &[2, 5]), &chi).unwrap(), 1e-9));
    }

    #[test]
    fn q3_mod_4_unit_ratio_is_i_in_odd_degree() {
        let r = gauss_unit_ratio(&PolyFq::one(7), &PolyFq::t(7)).unwrap().unwrap();
        assert!(close(r, Complex64::new(0.0, 1.0), 1e-9));
        let r = gauss_unit_ratio(&p(7, &[3]), &p(7, &[1, 0, 1])).unwrap().unwrap();
        assert!(close(r, Complex64::new(1.0, 0.0), 1e-9) || close(r, Complex64::new(-1.0, 0.0), 1e-9));
    }

    #[test]
    fn transform_basics_and_parseval() {
        let f = p(5, &[1, 2, 1, 1]);
        let ones = PeriodicFn::from_fn(&f, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(close(fourier_transform(&ones, &PolyFq::zero(5)).unwrap(), Complex64::new(125.0, 0.0), 1e-9));
        assert!(fourier_transform(&ones, &PolyFq::t(5)).unwrap().norm() < 1e-9);
        let delta = PeriodicFn::from_fn(&f, |g| Complex64::new(if g.is_zero() { 1.0 } else { 0.0 }, 0.0)).unwrap();
        assert!(close(fourier_transform(&delta, &p(5, &[3, 1])).unwrap(), Complex64::new(1.0, 0.0), 1e-12));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = PeriodicFn::random(&p(5, &[2, 0, 1]), &mut rng).unwrap();
        let energy: f64 = r.values.iter().map(|v| v.norm_sqr()).sum();
        let spectral: f64 = (0..25)
            .map(|i| fourier_transform(&r, &PolyFq::from_index(5, i, 2)).unwrap().norm_sqr())
            .sum();
        assert!((spectral - 25.0 * energy).abs() < 1e-9 * spectral.max(1.0));
    }

    #[test]
    fn poisson_examples() {
        let f = p(5, &[2, 0, 1]);
        let ones = PeriodicFn::from_fn(&f, |_| Complex64::new(1.0, 0.0)).unwrap();
        for m in 1..=4 {
            let (l, r) = poisson_monic(&ones, m).unwrap();
            assert!(close(l, Complex64::new(5f64.powi(m as i32), 0.0), 1e-9) && close(l, r, 1e-9));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rand_f = PeriodicFn::random(&f, &mut rng).unwrap();
        let (l, r) = poisson_monic(&rand_f, 3).unwrap();
        assert!(close(l, r, 1e-9));
        let group = DirichletGroup::new(&f, DEFAULT_GROUP_CEILING).unwrap();
        let chi_f = PeriodicFn::from_character(&group.character(1)).unwrap();
        let (l, r) = poisson_monic(&chi_f, 1).unwrap();
        assert!(close(l, r, 1e-9));

        let cubic = p(5, &[1, 1, 0, 1]);
        let ones3 = PeriodicFn::from_fn(&cubic, |_| Complex64::new(1.0, 0.0)).unwrap();
        let (l, r) = poisson_all(&ones3, 1).unwrap();
        assert!(close(l, Complex64::new(20.0, 0.0), 1e-9) && close(l, r, 1e-9));
        let rand3 = PeriodicFn::random(&cubic, &mut rng).unwrap();
        let (l, r) = poisson_all(&rand3, 1).unwrap();
        assert!(close(l, r, 1e-9));
    }

    /// With n − m − 1 < 0 only V = 0 survives; the direct side selects weight q − 1, not −1.
    #[test]
    fn all_leading_zero_term_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let f = PeriodicFn::random(&p(5, &[2, 0, 1]), &mut rng).unwrap();
        let (lhs, with_q_minus_1) = poisson_all_with_zero_weight(&f, 2, 4.0).unwrap();
        let (_, with_minus_1) = poisson_all_with_zero_weight(&f, 2, -1.0).unwrap();
        assert!(close(lhs, with_q_minus_1, 1e-9));
        assert!(!close(lhs, with_minus_1, 1e-3));
    }

    #[test]
    fn ec_fourier_examples() {
        let t = PolyFq::t(5);
        assert_eq!(ec_fourier_closed(&PolyFq::one(5), &t, &t).unwrap(), Complex64::new(0.0, 0.0));
        let c = ec_fourier_closed(&PolyFq::zero(5), &PolyFq::one(5), &t).unwrap();
        assert!(close(c, Complex64::new(5f64.powf(1.5), 0.0), 1e-9));
        let c = ec_fourier_closed(&PolyFq::one(5), &PolyFq::one(5), &t).unwrap();
        assert!(close(c, unit(4, 5) * 5f64.powf(1.5), 1e-9));
        let table = ec_fourier_brute_table(&t).unwrap();
        for alpha in 0..5u32 {
            for beta in 0..5u32 {
                let closed = ec_fourier_closed(&PolyFq::constant(5, alpha), &PolyFq::constant(5, beta), &t).unwrap();
                assert!(close(table[(alpha * 5 + beta) as usize], closed, 1e-9));
            }
        }
    }

    #[test]
    fn reciprocity_examples() {
        let w = elementary_reciprocity(&PolyFq::t(5), &p(5, &[1, 1])).unwrap();
        assert_eq!(w.alpha_bar, PolyFq::constant(5, 4));
        assert_eq!(w.beta_bar, PolyFq::one(5));
        let w1 = elementary_reciprocity(&PolyFq::one(5), &p(5, &[3, 1, 2])).unwrap();
        assert_eq!(w1.alpha_bar, PolyFq::one(5));
        assert_eq!(w1.beta_bar, PolyFq::zero(5));
        assert!(matches!(elementary_reciprocity(&PolyFq::t(5), &PolyFq::t(5)), Err(Error::NotCoprime(_))));
        let w2 = elementary_reciprocity(&p(7, &[1, 2, 1, 3]), &p(7, &[1, 0, 1])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let x = PolyFq::new(7, (0..7).map(|_| rng.gen_range(0..7)).collect());
            assert!(w2.certify_exponential(&x).unwrap());
            let y = PolyFq::new(5, (0..5).map(|_| rng.gen_range(0..5)).collect());
            assert!(w.certify_exponential(&y).unwrap());
        }
    }

    #[test]
    fn mixed_sum_examples() {
        let r = mixed_char_sum(5, 1, 1, 1, 1, DEFAULT_MIXED_BUDGET, None).unwrap();
        assert!(r.value.norm() <= r.bound && r.value.norm().is_finite());
        let r = mixed_char_sum(5, 2, 1, 1, 2, DEFAULT_MIXED_BUDGET, None).unwrap();
        assert!(r.value.norm() <= r.bound);
        assert!(matches!(
            mixed_char_sum(5, 6, 5, 3, 1, DEFAULT_MIXED_BUDGET, None),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    /// Naive triple loop with hayes_e per term as an oracle for the functional shortcut.
    #[test]
    fn mixed_sum_matches_naive_loop() {
        let (q, n, k, l, a) = (5u32, 2usize, 1usize, 1usize, 2u32);
        let table = IrreducibleTable::build(q, n).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        for pp in table.primes(n) {
            let mut inner = Complex64::new(0.0, 0.0);
            for vi in 0..q as u64 {
                let v = PolyFq::monic_from_index(q, vi, k);
                for c in 1..q {
                    for wi in 0..q as u64 {
                        let w = PolyFq::monic_from_index(q, wi, l).scale(c);
                        let s = jacobi_symbol(&w, &pp).unwrap();
                        if s == 0 {
                            continue;
                        }
                        let w2 = &w * &w;
                        let pbar = pp.inverse_mod(&w2).unwrap();
                        let x = &v.scale(a).pow(3) * &pbar;
                        inner -= hayes_e(&x, &w2).unwrap().value() * s as f64;
                    }
                }
            }
            acc += inner / pp.norm().sqrt();
        }
        let fast = mixed_char_sum(q, n, k, l, a, DEFAULT_MIXED_BUDGET, Some(&table)).unwrap();
        assert!(close(acc, fast.value, 1e-9));
    }
}
