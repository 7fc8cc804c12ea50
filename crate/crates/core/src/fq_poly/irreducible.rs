//! Irreducibility testing and an internal factorization used to locate bad places.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{field, PolyFq};
use crate::error::{Error, Result};

fn require_nonconstant(f: &PolyFq) -> Result<usize> {
    match f.degree() {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(Error::ConstantPolynomial(f.to_string())),
    }
}

/// Frobenius test: t^{q^n} ≡ t mod f and gcd(t^{q^{n/ℓ}} − t, f) = 1 for primes ℓ | n.
pub fn is_irreducible(f: &PolyFq) -> Result<bool> {
    let n = require_nonconstant(f)?;
    if n == 1 {
        return Ok(true);
    }
    let q = f.q();
    let f = f.monic();
    let t = PolyFq::t(q);
    // frob[k] = t^{q^k} mod f
    let mut frob = vec![t.rem(&f)?];
    for k in 1..=n {
        let next = frob[k - 1].powmod(q as u64, &f)?;
        frob.push(next);
    }
    if frob[n] != frob[0] {
        return Ok(false);
    }
    for l in field::prime_factors(n as u64) {
        let g = (&frob[n / l as usize] - &t).gcd(&f)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Oracle: no monic divisor of degree 1..=deg f / 2.
pub fn is_irreducible_trial_division(f: &PolyFq) -> Result<bool> {
    let n = require_nonconstant(f)?;
    let q = f.q();
    for k in 1..=n / 2 {
        let count = (q as u64).pow(k as u32);
        for i in 0..count {
            let g = PolyFq::monic_from_index(q, i, k);
            if f.rem(&g)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Factor into monic irreducibles with multiplicities, sorted by (degree, index).
/// The leading scalar is dropped.
pub fn factor(f: &PolyFq) -> Result<Vec<(PolyFq, u32)>> {
    if f.is_zero() {
        return Err(Error::ConstantPolynomial(f.to_string()));
    }
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    for (part, mult) in squarefree(&f.monic())? {
        for (g, d) in distinct_degree(&part)? {
            for p in equal_degree(&g, d, &mut rng)? {
                out.push((p, mult));
            }
        }
    }
    out.sort_by_key(|(p, _)| (p.degree(), p.monic_index()));
    // merge factors found in more than one squarefree layer
    let mut merged: Vec<(PolyFq, u32)> = Vec::new();
    for (p, m) in out {
        match merged.last_mut() {
            Some((last, lm)) if *last == p => *lm += m,
            _ => merged.push((p, m)),
        }
    }
    Ok(merged)
}

fn pth_root(f: &PolyFq) -> PolyFq {
    let p = f.q() as usize;
    PolyFq::new(f.q(), f.coeffs().iter().step_by(p).copied().collect())
}

/// Squarefree decomposition of a monic polynomial in characteristic p.
fn squarefree(f: &PolyFq) -> Result<Vec<(PolyFq, u32)>> {
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let p = f.q();
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree(&pth_root(f))? {
            out.push((g, m * p));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&df)?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let z = w.div_exact(&y)?;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w)?;
    }
    if !c.is_one() {
        for (g, m) in squarefree(&pth_root(&c))? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// Split a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &PolyFq) -> Result<Vec<(PolyFq, usize)>> {
    let q = f.q();
    let t = PolyFq::t(q);
    let mut rest = f.clone();
    let mut h = t.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().is_some_and(|n| n >= 2 * d) {
        h = h.powmod(q as u64, &rest)?;
        let g = (&h - &t).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(n) = rest.degree().filter(|&n| n >= 1) {
        out.push((rest, n));
    }
    Ok(out)
}

/// Cantor–Zassenhaus splitting of a squarefree product of degree-d irreducibles (q odd).
fn equal_degree(f: &PolyFq, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<PolyFq>> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let q = f.q();
    loop {
        let a = PolyFq::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.is_constant() {
            continue;
        }
        // a^{(q^d−1)/2} = (a^{1+q+…+q^{d−1}})^{(q−1)/2}
        let mut x = a.rem(f)?;
        let mut norm = x.clone();
        for _ in 1..d {
            x = x.powmod(q as u64, f)?;
            norm = norm.mulmod(&x, f)?;
        }
        let b = norm.powmod(((q - 1) / 2) as u64, f)?;
        let g = (&b - &PolyFq::one(q)).gcd(f)?;
        if let Some(k) = g.degree() {
            if k > 0 && k < n {
                let mut out = equal_degree(&g, d, rng)?;
                out.extend(equal_degree(&f.div_exact(&g)?, d, rng)?);
                return Ok(out);
            }
        }
    }
}
