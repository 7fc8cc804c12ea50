//! Local reduction of y² = x³ + Ax + B at finite places and at infinity (q ≥ 5, tame).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::characters::{quadratic_symbol, quadratic_table, ResidueRing};
use crate::error::{Error, Result};
use crate::fq_poly::{field, is_irreducible, PolyFq};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(PolyFq),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionType {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionDatum {
    pub place: Place,
    #[serde(rename = "type")]
    pub kind: ReductionType,
    #[serde(rename = "aP")]
    pub a_p: i64,
    #[serde(rename = "fP")]
    pub conductor_exponent: u8,
    #[serde(skip)]
    pub minimalization_steps: u32,
}

/// −16(4A³ + 27B²); zero is refused.
pub fn discriminant(a: &PolyFq, b: &PolyFq) -> Result<PolyFq> {
    let q = a.q();
    let inner = &a.pow(3).scale(field::from_i64(4, q)) + &b.pow(2).scale(field::from_i64(27, q));
    let d = inner.scale(field::from_i64(-16, q));
    if d.is_zero() {
        return Err(Error::SingularCurve);
    }
    Ok(d)
}

fn val(f: &PolyFq, p: &PolyFq) -> u32 {
    f.valuation(p).unwrap_or(u32::MAX)
}

/// Divide (A, B) by (P⁴, P⁶) while possible.
pub fn minimalize(a: &PolyFq, b: &PolyFq, p: &PolyFq) -> Result<(PolyFq, PolyFq, u32)> {
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut steps = 0;
    let (p4, p6) = (p.pow(4), p.pow(6));
    while val(&a, p) >= 4 && val(&b, p) >= 6 {
        if a.is_zero() && b.is_zero() {
            return Err(Error::SingularCurve);
        }
        a = a.div_exact(&p4)?;
        b = b.div_exact(&p6)?;
        steps += 1;
    }
    Ok((a, b, steps))
}

/// −Σ_{x ∈ F_P} χ(x³ + Ax + B), i.e. |P| + 1 − #E(F_P).
pub fn trace_by_count(a: &PolyFq, b: &PolyFq, p: &PolyFq) -> Result<i64> {
    let ring = ResidueRing::new(p)?;
    let chi = quadratic_table(&ring);
    let (ra, rb) = (ring.reduce(a), ring.reduce(b));
    let add = |x: u64, y: u64| ring.reduce(&(&ring.to_poly(x) + &ring.to_poly(y)));
    let mut s = 0i64;
    for x in 0..ring.size {
        let x3 = ring.mul(ring.mul(x, x), x);
        s += chi[add(add(x3, ring.mul(ra, x)), rb) as usize] as i64;
    }
    Ok(-s)
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

fn classify(a: &PolyFq, b: &PolyFq, p: &PolyFq, place: Place) -> Result<ReductionDatum> {
    require_prime(p)?;
    discriminant(a, b)?;
    let (am, bm, steps) = minimalize(a, b, p)?;
    let disc = discriminant(&am, &bm)?;
    let datum = |kind, a_p, f| ReductionDatum {
        place: place.clone(),
        kind,
        a_p,
        conductor_exponent: f,
        minimalization_steps: steps,
    };
    if val(&disc, p) == 0 {
        return Ok(datum(ReductionType::Good, trace_by_count(&am, &bm, p)?, 0));
    }
    if val(&am, p) == 0 {
        // the reduced cubic is (x − x₀)²(x + 2x₀) with x₀ = −3B/(2A); the node's slopes are ±√(3x₀)
        let q = p.q();
        let two_a_inv = am.scale(2).inverse_mod(p)?;
        let x0 = (&bm.scale(field::from_i64(-3, q)) * &two_a_inv).rem(p)?;
        let s = quadratic_symbol(&x0.scale(3), p)?;
        return Ok(if s == 1 {
            datum(ReductionType::SplitMultiplicative, 1, 1)
        } else {
            datum(ReductionType::NonsplitMultiplicative, -1, 1)
        });
    }
    Ok(datum(ReductionType::Additive, 0, 2))
}

/// Reduction at a finite place P after minimalizing there.
pub fn reduction_type(a: &PolyFq, b: &PolyFq, p: &PolyFq) -> Result<ReductionDatum> {
    classify(a, b, p, Place::Finite(p.clone()))
}

/// (A_∞, B_∞, k) with A_∞(s) = s^{4k}A(1/s), B_∞(s) = s^{6k}B(1/s), k = max(⌈deg A/4⌉, ⌈deg B/6⌉).
pub fn infinity_model(a: &PolyFq, b: &PolyFq) -> (PolyFq, PolyFq, usize) {
    let da = a.degree().unwrap_or(0);
    let db = b.degree().unwrap_or(0);
    let k = da.div_ceil(4).max(db.div_ceil(6));
    let flip = |f: &PolyFq, w: usize| {
        let mut c = vec![0u32; w + 1];
        for (i, &x) in f.coeffs().iter().enumerate() {
            c[w - i] = x;
        }
        PolyFq::new(f.q(), c)
    };
    (flip(a, 4 * k), flip(b, 6 * k), k)
}

pub fn infinity_reduction(a: &PolyFq, b: &PolyFq) -> Result<ReductionDatum> {
    let (ai, bi, _) = infinity_model(a, b);
    classify(&ai, &bi, &PolyFq::t(a.q()), Place::Infinity)
}
