//! Dirichlet L-polynomials L(u, χ) = Σ_{n < deg h} c_n u^n, the trivial zero at
//! u = 1 for even χ, unitarized zeros, monic character sums and the prime-sum /
//! trace identity.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{unit, DirichletCharacter, DirichletGroup, ResidueRing};
use crate::error::{Error, Result};
use crate::fq_poly::{enumerate, IrreducibleTable, PolyFq, PolyKind};
use crate::roots::{horner, poly_roots};

/// Tolerance for "vanishes" on L-coefficient sums, relative to Σ|c_n|.
const ZERO_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct DirichletLPoly {
    pub chi: DirichletCharacter,
    /// c_0..c_{deg h − 1}.
    pub coeffs: Vec<Complex64>,
    /// 1 for even χ, 0 for odd; structural.
    pub lambda: u8,
    /// Vanishing order of L at u = 1, measured.
    pub observed_order_at_one: usize,
    /// L* = L / (1 − u)^λ.
    pub reduced: Vec<Complex64>,
    /// Roots of L*.
    pub roots: Vec<Complex64>,
    /// θ_j with L* = Π (1 − u√q e^{iθ_j}).
    pub angles: Vec<f64>,
    pub primitive: bool,
    /// Euler-product coefficients of degree deg h ..= deg h + 2 (zero for a polynomial).
    pub tail: Vec<Complex64>,
    /// For imprimitive χ: zeros of Π_{P | h, P ∤ cond} (1 − χ₁(P) u^{deg P}), χ₁ the primitive character inducing χ.
    pub euler_factor_zeros: Vec<Complex64>,
}

impl DirichletLPoly {
    pub fn q(&self) -> u32 {
        self.chi.modulus().q()
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        horner(&self.coeffs, u)
    }

    /// δ = deg L*.
    pub fn delta(&self) -> usize {
        self.roots.len()
    }
}

fn scale(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm()).sum::<f64>().max(1.0)
}

/// Divide by (1 − u) once; `None` when L(1) does not vanish.
fn divide_trivial_zero(c: &[Complex64]) -> Option<Vec<Complex64>> {
    if c.is_empty() {
        return None;
    }
    let total: Complex64 = c.iter().sum();
    if total.norm() > ZERO_TOL * scale(c) {
        return None;
    }
    // c_k = b_k − b_{k−1}, so b is the running sum
    let mut acc = Complex64::new(0.0, 0.0);
    let mut b: Vec<Complex64> = c[..c.len() - 1]
        .iter()
        .map(|&x| {
            acc += x;
            acc
        })
        .collect();
    while b.len() > 1 && b.last().unwrap().norm() <= ZERO_TOL * scale(&b) {
        b.pop();
    }
    Some(b)
}

/// Strip the trivial zero and find the zeros of L*.
/// Returns (L*, roots, observed order at u = 1).
fn split_trivial_zero(
    coeffs: &[Complex64],
    lambda: u8,
) -> Result<(Vec<Complex64>, Vec<Complex64>, usize)> {
    let mut reduced = coeffs.to_vec();
    if lambda == 1 {
        reduced = divide_trivial_zero(&reduced).ok_or_else(|| {
            Error::Inconsistent(format!(
                "even character with L(1) = {} ≠ 0",
                coeffs.iter().sum::<Complex64>()
            ))
        })?;
    }
    let mut order = lambda as usize;
    let mut probe = reduced.clone();
    while let Some(next) = divide_trivial_zero(&probe) {
        order += 1;
        probe = next;
    }
    let roots = poly_roots(&reduced);
    Ok((reduced, roots, order))
}

fn angles_of(roots: &[Complex64]) -> Vec<f64> {
    roots.iter().map(|u| (1.0 / u).arg()).collect()
}

/// Σ over an exponent histogram in Z/M.
fn sum_exponents(hist: &[u64], m: u64) -> Complex64 {
    hist.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| unit(k as u64, m) * c as f64)
        .sum()
}

/// Number of monic f of degree n in each residue class mod h.
pub fn monic_residue_counts(ring: &ResidueRing, n: usize) -> Vec<f64> {
    let q = ring.q as u64;
    let d = ring.degree;
    let mut counts = vec![0.0; ring.size as usize];
    if n < d {
        let base = q.pow(n as u32);
        for lower in 0..base {
            counts[(base + lower) as usize] = 1.0;
        }
        return counts;
    }
    // residue digits of t^i; walk the lower coefficients like an odometer, adding t^i per step
    let t_pow: Vec<Vec<u64>> = (0..=n)
        .map(|i| {
            let mut digits = vec![0u64; d];
            ring.decode(ring.reduce(&PolyFq::monomial(ring.q, 1, i)), &mut digits);
            digits
        })
        .collect();
    let mut res = t_pow[n].clone();
    let mut lower = vec![0u64; n];
    loop {
        counts[ring.encode(&res) as usize] += 1.0;
        let mut i = 0;
        loop {
            if i == n {
                return counts;
            }
            for (r, &x) in res.iter_mut().zip(&t_pow[i]) {
                *r = (*r + x) % q;
            }
            lower[i] += 1;
            if lower[i] == q {
                lower[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Λ(f) summed per residue class over monic f of degree n: each P^k with k·deg P = n weighs deg P.
pub fn von_mangoldt_residue_weights(ring: &ResidueRing, n: usize, primes: &IrreducibleTable) -> Vec<f64> {
    let mut w = vec![0.0; ring.size as usize];
    for d in (1..=n).filter(|d| n % d == 0) {
        let k = n / d;
        for p in primes.primes(d) {
            let r = ring.reduce(&p);
            let mut x = r;
            for _ in 1..k {
                x = ring.mul(x, r);
            }
            w[x as usize] += d as f64;
        }
    }
    w
}

fn require_table(q: u32, depth: usize, primes: Option<&IrreducibleTable>) -> Result<std::borrow::Cow<'_, IrreducibleTable>> {
    match primes {
        Some(t) if t.q == q && t.max_degree() >= depth => Ok(std::borrow::Cow::Borrowed(t)),
        Some(t) if t.q == q => Err(Error::DepthExceeded { needed: depth, depth: t.max_degree() }),
        _ => Ok(std::borrow::Cow::Owned(IrreducibleTable::build(q, depth)?)),
    }
}

/// L(u, χ) by direct summation over monics, cross-checked against the Euler product to deg h + 2.
pub fn l_polynomial_char(chi: &DirichletCharacter, primes: Option<&IrreducibleTable>) -> Result<DirichletLPoly> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let h = chi.modulus();
    let q = h.q();
    let dh = h.degree().unwrap();
    let m = chi.order_bound();
    let mut coeffs = Vec::with_capacity(dh);
    for n in 0..dh {
        let base = (q as u64).pow(n as u32);
        let mut hist = vec![0u64; m as usize];
        for lower in 0..base {
            if let Some(e) = chi.exponent_of_residue(base + lower) {
                hist[e as usize] += 1;
            }
        }
        coeffs.push(sum_exponents(&hist, m));
    }
    // Euler product Π (1 − χ(P)u^{deg P})^{-1} truncated at deg h + 2
    let top = dh + 2;
    let table = require_table(q, top, primes)?;
    let mut series = vec![Complex64::new(0.0, 0.0); top + 1];
    series[0] = Complex64::new(1.0, 0.0);
    for d in 1..=top {
        for p in table.primes(d) {
            let Some(e) = chi.exponent(&p) else { continue };
            let z = unit(e, m);
            // multiply by Σ_k z^k u^{dk}: s_j += z·s_{j−d}, ascending
            for j in d..=top {
                let prev = series[j - d];
                series[j] += z * prev;
            }
        }
    }
    let mismatch = coeffs
        .iter()
        .zip(&series)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if mismatch > 1e-8 * scale(&coeffs) {
        return Err(Error::Inconsistent(format!("Euler product disagrees by {mismatch:e}")));
    }
    let tail = series[dh..].to_vec();
    let lambda = chi.parity();
    let (reduced, roots, observed_order_at_one) = split_trivial_zero(&coeffs, lambda)?;
    let primitive = chi.is_primitive();
    let euler_factor_zeros = if primitive { Vec::new() } else { imprimitive_factor_zeros(chi)? };
    Ok(DirichletLPoly {
        chi: chi.clone(),
        coeffs,
        lambda,
        observed_order_at_one,
        angles: angles_of(&roots),
        reduced,
        roots,
        primitive,
        tail,
        euler_factor_zeros,
    })
}

/// The primitive character χ₁ mod cond(χ) with χ = χ₁ on units mod h.
pub fn primitive_character(chi: &DirichletCharacter) -> Result<DirichletCharacter> {
    let cond = chi.conductor();
    let sub = DirichletGroup::new(&cond, u64::MAX)?;
    let (m, m1) = (chi.order_bound(), sub.order);
    let gens = &chi.group.generators;
    let found = sub.characters().find(|c1| {
        gens.iter().all(|&g| {
            let e = chi.exponent_of_residue(g).unwrap();
            let e1 = c1.exponent(&chi.group.ring.to_poly(g)).unwrap_or(0);
            e as u128 * m1 as u128 == e1 as u128 * m as u128
        })
    });
    found.ok_or_else(|| Error::Inconsistent("no inducing character found".into()))
}

fn imprimitive_factor_zeros(chi: &DirichletCharacter) -> Result<Vec<Complex64>> {
    let chi1 = primitive_character(chi)?;
    let cond = chi1.modulus().clone();
    let mut zeros = Vec::new();
    for (p, _) in &chi.group.factors {
        if cond.degree() != Some(0) && cond.rem(p)?.is_zero() {
            continue;
        }
        // 1 − z u^d = 0 ⇒ u = z^{-1/d}·e^{2πij/d}
        let d = p.degree().unwrap() as u32;
        let z = if cond.degree() == Some(0) {
            Complex64::new(1.0, 0.0)
        } else {
            chi1.value(p)
        };
        let base = Complex64::from_polar(1.0, -z.arg() / d as f64);
        for j in 0..d {
            zeros.push(base * unit(j as u64, d as u64));
        }
    }
    Ok(zeros)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumDomain {
    Monic,
    AllLeading,
}

/// Σ χ(V) over M_k or H_k.
pub fn char_sum_range(chi: &DirichletCharacter, k: usize, domain: SumDomain) -> Complex64 {
    let ring = &chi.group.ring;
    let values = chi.value_table();
    let counts = monic_residue_counts(ring, k);
    let monic: Complex64 = counts.iter().zip(&values).map(|(&c, v)| v * c).sum();
    match domain {
        SumDomain::Monic => monic,
        SumDomain::AllLeading => {
            let q = ring.q;
            let scalars: Complex64 = (1..q).map(|a| chi.value(&PolyFq::constant(q, a))).sum();
            monic * scalars
        }
    }
}

/// 16^l q^{k/2 + 1 + 0.01 l}.
pub fn char_sum_bound(q: u32, k: usize, l: usize) -> f64 {
    let q = q as f64;
    16f64.powi(l as i32) * q.powf(k as f64 / 2.0 + 1.0 + 0.01 * l as f64)
}

/// Σ_{P ∈ M_n prime} χ(P)/|P|^{1/2}; the place at infinity is not included.
pub fn prime_char_sum(chi: &DirichletCharacter, n: usize, primes: Option<&IrreducibleTable>) -> Result<Complex64> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let q = chi.modulus().q();
    let table = require_table(q, n, primes)?;
    let s: Complex64 = table.primes(n).map(|p| chi.value(&p)).sum();
    Ok(s * (q as f64).powf(-(n as f64) / 2.0))
}

/// Reference size deg h / n for the prime sum.
pub fn prime_sum_reference(h_degree: usize, n: usize) -> f64 {
    h_degree as f64 / n as f64
}

/// Σ_{f ∈ M_n} Λ(f)χ(f).
pub fn von_mangoldt_sum(chi: &DirichletCharacter, n: usize, primes: &IrreducibleTable) -> Result<Complex64> {
    if primes.max_degree() < n {
        return Err(Error::DepthExceeded { needed: n, depth: primes.max_degree() });
    }
    let w = von_mangoldt_residue_weights(&chi.group.ring, n, primes);
    Ok(w.iter().zip(chi.value_table()).map(|(&x, v)| v * x).sum())
}

/// (tr Θⁿ, λ q^{−n/2} + q^{−n/2} Σ_{f ∈ M_n} Λ(f)χ(f)); the two satisfy −trace = side.
pub fn theta_traces(lp: &DirichletLPoly, n: usize, primes: Option<&IrreducibleTable>) -> Result<(Complex64, Complex64)> {
    if !lp.primitive {
        return Err(Error::NotPrimitive(format!("character #{} mod {}", lp.chi.index, lp.chi.modulus())));
    }
    let q = lp.q();
    let table = require_table(q, n, primes)?;
    let trace = theta_trace(&lp.roots, q, n);
    let s = von_mangoldt_sum(&lp.chi, n, &table)?;
    let side = (s + lp.lambda as f64) * (q as f64).powf(-(n as f64) / 2.0);
    Ok((trace, side))
}

/// Σ_j e^{inθ_j} where each root u_j of L* equals (√q e^{iθ_j})^{-1}.
fn theta_trace(roots: &[Complex64], q: u32, n: usize) -> Complex64 {
    let sq = (q as f64).sqrt();
    roots.iter().map(|u| (1.0 / (u * sq)).powu(n as u32)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LindelofReport {
    pub max_abs: f64,
    /// (16 q^{0.01})^{deg h}.
    pub bound: f64,
    /// (1 + q^{−1/2})^λ Π_j (1 + q^{−1/2}/|u_j|).
    pub root_product_bound: f64,
}

pub const LINDELOF_SAMPLES: usize = 256;

/// max |L(u, χ)| over equispaced points of |u| = q^{−1/2}.
pub fn lindelof_check(lp: &DirichletLPoly) -> LindelofReport {
    let q = lp.q() as f64;
    let r = q.powf(-0.5);
    let max_abs = (0..LINDELOF_SAMPLES)
        .map(|k| {
            let u = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / LINDELOF_SAMPLES as f64);
            lp.eval(u).norm()
        })
        .fold(0.0, f64::max);
    let dh = lp.chi.modulus().degree().unwrap() as i32;
    let bound = (16.0 * q.powf(0.01)).powi(dh);
    let root_product_bound = (1.0 + r).powi(lp.lambda as i32)
        * lp.roots.iter().map(|u| 1.0 + r / u.norm()).product::<f64>();
    LindelofReport { max_abs, bound, root_product_bound }
}

/// One CSV block for every non-principal character mod h:
/// index,conductor,lambda,coefficients(re:im;…),root_moduli(;…),max_abs_L.
pub fn csv_for_modulus(h: &PolyFq, ceiling: u64, primes: Option<&IrreducibleTable>) -> Result<String> {
    let group = DirichletGroup::new(h, ceiling)?;
    let dh = h.degree().unwrap_or(0);
    let table = require_table(h.q(), dh + 2, primes)?;
    let mut out = String::from("index,conductor,lambda,coefficients,root_moduli,max_abs_L\n");
    for chi in group.characters().skip(1) {
        let lp = l_polynomial_char(&chi, Some(&table))?;
        let coeffs: Vec<String> = lp.coeffs.iter().map(|c| format!("{:.12}:{:.12}", c.re, c.im)).collect();
        let mods: Vec<String> = lp.roots.iter().map(|u| format!("{:.12}", u.norm())).collect();
        let lind = lindelof_check(&lp);
        writeln!(
            out,
            "{},\"{}\",{},{},{},{:.12}",
            chi.index,
            chi.conductor(),
            lp.lambda,
            coeffs.join(";"),
            mods.join(";"),
            lind.max_abs
        )
        .unwrap();
    }
    Ok(out.replace("-0.000000000000", "0.000000000000"))
}

/// Aggregate of the batch RH / trace-identity sweep over every monic modulus of degree 1..=max_degree.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RhSweepReport {
    pub q: u32,
    pub max_degree: usize,
    pub moduli: u64,
    pub characters: u64,
    pub primitive: u64,
    /// max ||u| − q^{−1/2}| over roots of L* for primitive χ.
    pub max_root_deviation: f64,
    pub trace_checked: u64,
    /// max |tr Θⁿ + side| over primitive χ with deg h ≤ trace degree, n ≤ trace n.
    pub max_trace_residual: f64,
    /// max |c_n| for deg h ≤ n ≤ deg h + 2 (when requested).
    pub max_tail: Option<f64>,
    /// Primitive χ whose measured order at u = 1 differs from λ.
    pub lambda_flags: u64,
    /// Largest L-coefficient magnitude deviation from the pinned c₀ = 1.
    pub max_c0_deviation: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct RhSweepConfig {
    pub q: u32,
    pub max_degree: usize,
    pub trace_max_degree: usize,
    pub trace_max_n: usize,
    /// Check the vanishing tail for moduli up to this degree (0 disables).
    pub tail_max_degree: usize,
}

/// Every character of every monic modulus of degree ≤ max_degree, all at once per modulus through
/// the group transform of monic histograms.
pub fn rh_sweep(cfg: RhSweepConfig) -> Result<RhSweepReport> {
    let q = field_order(cfg.q)?;
    let primes = if cfg.trace_max_degree > 0 && cfg.trace_max_n > 0 {
        Some(IrreducibleTable::build(q, cfg.trace_max_n)?)
    } else {
        None
    };
    let mut report = RhSweepReport { q, max_degree: cfg.max_degree, ..Default::default() };
    if cfg.tail_max_degree > 0 {
        report.max_tail = Some(0.0);
    }
    for d in 1..=cfg.max_degree {
        let moduli: Vec<PolyFq> = enumerate(q, d, PolyKind::Monic)?.collect();
        let parts: Vec<Result<RhSweepReport>> = moduli
            .par_iter()
            .map(|h| sweep_modulus(h, &cfg, primes.as_ref()))
            .collect();
        for part in parts {
            merge(&mut report, &part?);
        }
    }
    Ok(report)
}

fn field_order(q: u32) -> Result<u32> {
    crate::fq_poly::field::check_field_order(q as u64)
}

fn merge(into: &mut RhSweepReport, part: &RhSweepReport) {
    into.moduli += part.moduli;
    into.characters += part.characters;
    into.primitive += part.primitive;
    into.max_root_deviation = into.max_root_deviation.max(part.max_root_deviation);
    into.trace_checked += part.trace_checked;
    into.max_trace_residual = into.max_trace_residual.max(part.max_trace_residual);
    if let (Some(a), Some(b)) = (into.max_tail.as_mut(), part.max_tail) {
        *a = a.max(b);
    }
    into.lambda_flags += part.lambda_flags;
    into.max_c0_deviation = into.max_c0_deviation.max(part.max_c0_deviation);
}

fn sweep_modulus(h: &PolyFq, cfg: &RhSweepConfig, primes: Option<&IrreducibleTable>) -> Result<RhSweepReport> {
    let group = DirichletGroup::new(h, u64::MAX)?;
    let ring = &group.ring;
    let q = ring.q;
    let dh = ring.degree;
    let size = group.order as usize;
    let transform_residues = |w: &[f64]| group.transform(&group.weights_from_residues(w));

    let coeffs: Vec<Vec<Complex64>> = (0..dh).map(|n| transform_residues(&monic_residue_counts(ring, n))).collect();
    let mut part = RhSweepReport { moduli: 1, characters: size as u64, ..Default::default() };
    if dh <= cfg.tail_max_degree {
        let mut tail = 0.0f64;
        for n in dh..dh + 3 {
            let t = transform_residues(&monic_residue_counts(ring, n));
            tail = t.iter().skip(1).map(|z| z.norm()).fold(tail, f64::max);
        }
        part.max_tail = Some(tail);
    }

    let mut scalars = vec![0.0; ring.size as usize];
    for a in 1..q as usize {
        scalars[a] = 1.0;
    }
    let parity = transform_residues(&scalars);
    // χ is imprimitive iff trivial on {x ≡ 1 mod h/P} for some P | h
    let kernels: Vec<Vec<Complex64>> = group
        .factors
        .iter()
        .map(|(p, _)| {
            let cof = h.div_exact(p).expect("factor divides h");
            let dp = p.degree().unwrap();
            let mut w = vec![0.0; ring.size as usize];
            for g in 0..(q as u64).pow(dp as u32) {
                let x = &PolyFq::one(q) + &(&cof * &PolyFq::from_index(q, g, dp));
                w[ring.reduce(&x) as usize] = 1.0;
            }
            let size = group.weights_from_residues(&w).iter().map(|z| z.re).sum::<f64>();
            let t = transform_residues(&w);
            t.iter().map(|z| Complex64::new(z.re - size, z.im)).collect()
        })
        .collect();
    let traces = dh <= cfg.trace_max_degree;
    let vm: Vec<Vec<Complex64>> = match (traces, primes) {
        (true, Some(table)) => (1..=cfg.trace_max_n)
            .map(|n| transform_residues(&von_mangoldt_residue_weights(ring, n, table)))
            .collect(),
        _ => Vec::new(),
    };
    let r = (q as f64).powf(-0.5);
    let mut c = vec![Complex64::new(0.0, 0.0); dh];
    for label in 1..size {
        let primitive = kernels.iter().all(|k| k[label].norm() > 0.5);
        if !primitive {
            continue;
        }
        part.primitive += 1;
        let lambda = u8::from((parity[label].re - (q - 1) as f64).abs() < 0.5);
        for (n, cn) in c.iter_mut().enumerate() {
            *cn = coeffs[n][label];
        }
        part.max_c0_deviation = part.max_c0_deviation.max((c[0] - 1.0).norm());
        let (_, roots, order) = split_trivial_zero(&c, lambda)?;
        if order != lambda as usize {
            part.lambda_flags += 1;
        }
        for u in &roots {
            part.max_root_deviation = part.max_root_deviation.max((u.norm() - r).abs());
        }
        for (i, s) in vm.iter().enumerate() {
            let n = i + 1;
            let trace = theta_trace(&roots, q, n);
            let side = (s[label] + lambda as f64) * (q as f64).powf(-(n as f64) / 2.0);
            part.max_trace_residual = part.max_trace_residual.max((trace + side).norm());
            part.trace_checked += 1;
        }
    }
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::DEFAULT_GROUP_CEILING;

    fn p(q: u32, c: &[i64]) -> PolyFq {
        PolyFq::from_i64s(q, c)
    }

    fn chars(h: &PolyFq) -> Vec<DirichletCharacter> {
        let g = DirichletGroup::new(h, DEFAULT_GROUP_CEILING).unwrap();
        g.characters().collect()
    }

    #[test]
    fn legendre_character_mod_t_has_trivial_l() {
        let all = chars(&PolyFq::t(5));
        let quad = all.iter().find(|c| !c.is_principal() && c.v.iter().all(|&x| (2 * x) % 4 == 0)).unwrap();
        let lp = l_polynomial_char(quad, None).unwrap();
        assert_eq!(lp.coeffs.len(), 1);
        assert!((lp.coeffs[0] - 1.0).norm() < 1e-12);
        assert_eq!(lp.delta(), 0);
        assert!(lp.tail.iter().all(|z| z.norm() < 1e-9));
        assert!(char_sum_range(quad, 1, SumDomain::AllLeading).norm() < 1e-9);
        assert!(prime_char_sum(quad, 1, None).unwrap().norm() < 1e-9);
        for n in 1..=3 {
            let (tr, side) = theta_traces(&lp, n, None).unwrap();
            assert!(tr.norm() < 1e-12 && side.norm() < 1e-9, "n={n}");
        }
        let principal = &all[0];
        assert!((char_sum_range(principal, 1, SumDomain::Monic) - 4.0).norm() < 1e-12);
        assert_eq!(l_polynomial_char(principal, None).unwrap_err(), Error::PrincipalCharacter);
    }

    #[test]
    fn degree_two_modulus() {
        let h = p(5, &[2, 0, 1]);
        let table = IrreducibleTable::build(5, 4).unwrap();
        for chi in chars(&h).into_iter().skip(1) {
            let lp = l_polynomial_char(&chi, Some(&table)).unwrap();
            assert!((lp.coeffs[0] - 1.0).norm() < 1e-12);
            assert!(lp.coeffs.len() <= 2);
            assert!(char_sum_range(&chi, 2, SumDomain::Monic).norm() < 1e-9);
            let s = prime_char_sum(&chi, 2, Some(&table)).unwrap();
            assert!(s.norm() <= 2.0 + 1e-9);
            let lind = lindelof_check(&lp);
            assert!(lind.max_abs <= lind.bound && lind.max_abs <= lind.root_product_bound + 1e-9);
            for u in &lp.roots {
                assert!((u.norm() - 5f64.powf(-0.5)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn imprimitive_character_tracks_euler_zeros() {
        // induced from the Legendre character mod t to t(t+1)
        let h = p(5, &[0, 1, 1]);
        let chi = chars(&h)
            .into_iter()
            .find(|c| !c.is_principal() && !c.is_primitive() && c.conductor() == PolyFq::t(5))
            .unwrap();
        let lp = l_polynomial_char(&chi, None).unwrap();
        assert!(!lp.primitive);
        // L = L(χ₁)(1 − χ₁(t+1)u) = 1 − χ₁(1)u = 1 − u
        assert_eq!(lp.euler_factor_zeros.len(), 1);
        assert!((lp.euler_factor_zeros[0] - 1.0).norm() < 1e-12);
        assert!(matches!(theta_traces(&lp, 1, None), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn monic_counts_match_enumeration() {
        let ring = ResidueRing::new(&p(5, &[1, 1, 0, 1])).unwrap();
        for n in 0..6 {
            let fast = monic_residue_counts(&ring, n);
            let mut slow = vec![0.0; ring.size as usize];
            for f in enumerate(5, n, PolyKind::Monic).unwrap() {
                slow[ring.reduce(&f) as usize] += 1.0;
            }
            assert_eq!(fast, slow, "n={n}");
        }
    }

    #[test]
    fn batch_sweep_agrees_with_per_character_path() {
        let cfg = RhSweepConfig { q: 5, max_degree: 3, trace_max_degree: 3, trace_max_n: 4, tail_max_degree: 3 };
        let rep = rh_sweep(cfg).unwrap();
        assert_eq!(rep.moduli, 5 + 25 + 125);
        assert!(rep.max_root_deviation < 1e-9);
        assert!(rep.max_trace_residual < 1e-9);
        assert!(rep.max_tail.unwrap() < 1e-9);
        assert!(rep.max_c0_deviation < 1e-12);
        // recount primitive characters directly
        let mut primitive = 0;
        let table = IrreducibleTable::build(5, 5).unwrap();
        for d in 1..=3 {
            for h in enumerate(5, d, PolyKind::Monic).unwrap() {
                for chi in chars(&h).into_iter().skip(1) {
                    if chi.is_primitive() {
                        primitive += 1;
                        if chi.index % 11 == 0 {
                            let lp = l_polynomial_char(&chi, Some(&table)).unwrap();
                            assert_eq!(lp.observed_order_at_one, lp.lambda as usize);
                            let (tr, side) = theta_traces(&lp, 3, Some(&table)).unwrap();
                            assert!((tr + side).norm() < 1e-9);
                        }
                    }
                }
            }
        }
        assert_eq!(rep.primitive, primitive);
    }

    #[test]
    fn csv_is_deterministic() {
        let a = csv_for_modulus(&p(5, &[2, 0, 1]), DEFAULT_GROUP_CEILING, None).unwrap();
        let b = csv_for_modulus(&p(5, &[2, 0, 1]), DEFAULT_GROUP_CEILING, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 24);
    }
}
