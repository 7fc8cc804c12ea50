//! The fields F_{q^e} with log/antilog tables, one root per monic irreducible of
//! degree e, and the table of S(a, b) = Σ_{x ∈ F_{q^e}} χ(x³ + ax + b).
//!
//! S(a, b) = χ(μ)·S(μ²a, μ³b) for every μ ≠ 0, so with g a generator and ℓ = log:
//! ab ≠ 0: S(a, b) = χ(ab)·T1[3ℓa − 2ℓb], T1[ℓc] = S(c, c);
//! a = 0:  S(0, g^{j+3k}) = (−1)^k T0[j];  b = 0: S(g^{j+2k}, 0) = (−1)^k T2[j].

use num_complex::Complex64;

use crate::characters::ResidueRing;
use crate::error::{Error, Result};
use crate::fourier_poisson::additive_dft;
use crate::fq_poly::{enumerate, field, is_irreducible, PolyFq, PolyKind};

/// Field sizes above this are refused.
pub const FIELD_CEILING: u64 = 1 << 24;

const NO_LOG: u32 = u32::MAX;

/// Stands for the root θ = 0 (the place t) among the degree-one roots.
pub const ZERO_ROOT: u32 = NO_LOG;

/// F_{q^e} = F_q[t]/(m) with t a generator of the multiplicative group.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    pub q: u32,
    pub e: usize,
    pub modulus: PolyFq,
    pub size: u64,
    ring: ResidueRing,
    /// exp[ℓ] = index of g^ℓ, ℓ < Q − 1.
    exp: Vec<u32>,
    /// log[index]; NO_LOG at 0.
    log: Vec<u32>,
    /// Least log in each Frobenius orbit of size exactly e: one root per monic irreducible of degree e
    /// (plus ZERO_ROOT when e = 1).
    pub roots: Vec<u32>,
}

impl ExtensionField {
    pub fn new(q: u32, e: usize) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        let size = (q as u64)
            .checked_pow(e as u32)
            .filter(|&s| s <= FIELD_CEILING)
            .ok_or(Error::BudgetExceeded { work: (q as f64).powi(e as i32), budget: FIELD_CEILING as f64 })?;
        let order = size - 1;
        let primes = field::prime_factors(order);
        let mut found = None;
        for m in enumerate(q, e, PolyKind::Monic)? {
            if !is_irreducible(&m)? {
                continue;
            }
            let ring = ResidueRing::new(&m)?;
            let g = ring.reduce(&PolyFq::t(q));
            if g == 0 {
                continue;
            }
            if primes.iter().all(|&l| pow_index(&ring, g, order / l) != ring.one()) {
                found = Some((m, ring, g));
                break;
            }
        }
        let (modulus, ring, g) = found.ok_or_else(|| Error::Inconsistent("no primitive polynomial".into()))?;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NO_LOG; size as usize];
        let mut x = ring.one();
        for l in 0..order {
            exp.push(x as u32);
            log[x as usize] = l as u32;
            x = ring.mul(x, g);
        }
        let qm = q as u64;
        let roots = (0..order)
            .filter(|&l| {
                let mut y = l;
                for i in 1..=e {
                    y = y * qm % order;
                    if y == l {
                        return i == e;
                    }
                    if y < l {
                        return false;
                    }
                }
                false
            })
            .map(|l| l as u32)
            .chain((e == 1).then_some(ZERO_ROOT))
            .collect();
        Ok(ExtensionField { q, e, modulus, size, ring, exp, log, roots })
    }

    pub fn order(&self) -> u64 {
        self.size - 1
    }

    pub fn exp(&self, l: u64) -> u32 {
        self.exp[(l % self.order()) as usize]
    }

    /// `None` for 0.
    pub fn log(&self, x: u32) -> Option<u32> {
        let l = self.log[x as usize];
        (l != NO_LOG).then_some(l)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match (self.log(a), self.log(b)) {
            (Some(x), Some(y)) => self.exp(x as u64 + y as u64),
            _ => 0,
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let q = self.q;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut w = 1u32;
        for _ in 0..self.e {
            out += field::add(a % q, b % q, q) * w;
            a /= q;
            b /= q;
            w = w.wrapping_mul(q);
        }
        out
    }

    /// a + c for c ∈ F_q: only the constant digit moves.
    #[inline]
    pub fn add_scalar(&self, a: u32, c: u32) -> u32 {
        let d = a % self.q;
        a - d + field::add(d, c, self.q)
    }

    /// f(θ) for θ = g^ℓ, by Horner.
    pub fn eval_at_log(&self, f: &PolyFq, l: u32) -> u32 {
        if l == ZERO_ROOT {
            return f.coeff(0);
        }
        let order = self.order();
        let mut acc = 0u32;
        for &c in f.coeffs().iter().rev() {
            if let Some(la) = self.log(acc) {
                let mut s = la as u64 + l as u64;
                if s >= order {
                    s -= order;
                }
                acc = self.exp[s as usize];
            }
            acc = self.add_scalar(acc, c);
        }
        acc
    }

    /// Quadratic character of a field element.
    pub fn chi(&self, x: u32) -> i32 {
        match self.log(x) {
            None => 0,
            Some(l) => 1 - 2 * (l & 1) as i32,
        }
    }

    pub fn from_poly(&self, f: &PolyFq) -> u32 {
        self.ring.reduce(f) as u32
    }

    /// Π_{i<e} (X − θ^{q^i}) for θ = g^ℓ, with coefficients back in F_q.
    pub fn minimal_polynomial(&self, l: u32) -> PolyFq {
        if l == ZERO_ROOT {
            return PolyFq::t(self.q);
        }
        let order = self.order();
        let mut conj = Vec::new();
        let mut y = l as u64;
        loop {
            conj.push(self.exp(y));
            y = y * self.q as u64 % order;
            if y == l as u64 {
                break;
            }
        }
        // coefficients as field indices, ascending
        let minus_one = self.exp(order / 2);
        let mut poly: Vec<u32> = vec![1];
        for &r in &conj {
            let neg_r = self.mul(r, minus_one);
            let mut next = vec![0u32; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.add(next[i], self.mul(c, neg_r));
            }
            poly = next;
        }
        PolyFq::new(self.q, poly)
    }
}

fn pow_index(ring: &ResidueRing, x: u64, mut e: u64) -> u64 {
    let mut base = x;
    let mut acc = ring.one();
    while e > 0 {
        if e & 1 == 1 {
            acc = ring.mul(acc, base);
        }
        base = ring.mul(base, base);
        e >>= 1;
    }
    acc
}

/// Character sums S(a, b) over one extension field.
#[derive(Clone, Debug)]
pub struct FiberTable {
    pub field: ExtensionField,
    /// T1[ℓ] = S(g^ℓ, g^ℓ).
    t1: Vec<i32>,
    t0: [i32; 3],
    t2: [i32; 2],
}

impl FiberTable {
    pub fn new(field: ExtensionField) -> Result<Self> {
        let t1 = self_correlation_table(&field)?;
        let direct = |a: u32, b: u32| -> i32 {
            (0..field.size as u32)
                .map(|x| {
                    let x3 = field.mul(field.mul(x, x), x);
                    field.chi(field.add(field.add(x3, field.mul(a, x)), b))
                })
                .sum()
        };
        let t0 = [0, 1, 2].map(|j| direct(0, field.exp(j)));
        let t2 = [0, 1].map(|j| direct(field.exp(j), 0));
        Ok(FiberTable { field, t1, t0, t2 })
    }

    /// S(a, b) = Σ_x χ(x³ + ax + b).
    pub fn sum(&self, a: u32, b: u32) -> i32 {
        let f = &self.field;
        let order = f.order();
        match (f.log(a), f.log(b)) {
            (None, None) => 0,
            (None, Some(lb)) => sign(lb / 3) * self.t0[(lb % 3) as usize],
            (Some(la), None) => sign(la / 2) * self.t2[(la % 2) as usize],
            (Some(la), Some(lb)) => {
                let lc = (3 * la as u64 + 2 * (order - lb as u64)) % order;
                sign(la + lb) * self.t1[lc as usize]
            }
        }
    }

    /// a_P = −S(A(θ), B(θ)) for a good place with root θ = g^ℓ.
    pub fn trace(&self, a: &PolyFq, b: &PolyFq, l: u32) -> i64 {
        let f = &self.field;
        -(self.sum(f.eval_at_log(a, l), f.eval_at_log(b, l)) as i64)
    }
}

fn sign(k: u32) -> i32 {
    1 - 2 * (k & 1) as i32
}

/// T1[ℓ] = χ(−1) + Σ_r H[r]χ(r + c), c = g^ℓ, where H[r] = Σ_{x ≠ −1, x³/(x+1) = r} χ(x + 1),
/// evaluated as a correlation over the additive group (Z/q)^e.
fn self_correlation_table(f: &ExtensionField) -> Result<Vec<i32>> {
    let q = f.q;
    let size = f.size as usize;
    let minus_one = q - 1;
    let mut hist = vec![0.0f64; size];
    for x in 0..size as u32 {
        let x1 = f.add_scalar(x, 1);
        if x1 == 0 {
            continue;
        }
        let x3 = f.mul(f.mul(x, x), x);
        let r = match f.log(x3) {
            None => 0,
            Some(l3) => f.exp(l3 as u64 + f.order() - f.log(x1).unwrap() as u64),
        };
        hist[r as usize] += f.chi(x1) as f64;
    }
    let chi: Vec<f64> = (0..size as u32).map(|x| f.chi(x) as f64).collect();
    let mut hh: Vec<Complex64> = hist.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut xx: Vec<Complex64> = chi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    additive_dft(&mut hh, q, f.e, false);
    additive_dft(&mut xx, q, f.e, false);
    let mut g: Vec<Complex64> = xx.iter().zip(&hh).map(|(x, h)| x * h.conj()).collect();
    additive_dft(&mut g, q, f.e, true);
    let chi_m1 = f.chi(minus_one);
    let mut t1 = Vec::with_capacity(f.order() as usize);
    for l in 0..f.order() {
        let c = f.exp(l) as usize;
        let v = g[c].re / size as f64;
        let r = v.round();
        if (v - r).abs() > 1e-6 || g[c].im.abs() / (size as f64) > 1e-6 {
            return Err(Error::Inconsistent(format!("fiber correlation not integral: {v}")));
        }
        t1.push(chi_m1 + r as i32);
    }
    Ok(t1)
}

/// Fiber tables for e = 1..=depth, built once and shared read-only.
#[derive(Clone, Debug)]
pub struct FieldCache {
    pub q: u32,
    tables: Vec<FiberTable>,
}

/// Default bound on q^e for the tables built by `FieldCache::default_depth`.
pub const DEFAULT_FIELD_BUDGET: u64 = 400_000;

impl FieldCache {
    pub fn new(q: u32, depth: usize) -> Result<Self> {
        let tables = (1..=depth)
            .map(|e| ExtensionField::new(q, e).and_then(FiberTable::new))
            .collect::<Result<_>>()?;
        Ok(FieldCache { q, tables })
    }

    /// Largest e with q^e ≤ budget.
    pub fn default_depth(q: u32, budget: u64) -> usize {
        let mut e = 0;
        let mut size = 1u64;
        while size.saturating_mul(q as u64) <= budget {
            size *= q as u64;
            e += 1;
        }
        e
    }

    pub fn depth(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, e: usize) -> Option<&FiberTable> {
        e.checked_sub(1).and_then(|i| self.tables.get(i))
    }
}
