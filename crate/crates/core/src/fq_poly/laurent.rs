//! Expansion of A/H in F_q((1/t)): A/H = Σ_{i ≥ ν} a_i t^{−i}.

use super::{field, PolyFq};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPrefix {
    /// ν = deg H − deg A, or `None` when A = 0.
    pub valuation: Option<i64>,
    pub cutoff: i64,
    /// a_ν, a_{ν+1}, …, a_cutoff (empty if cutoff < ν).
    pub coeffs: Vec<u32>,
}

impl LaurentPrefix {
    /// a_i for i ≤ cutoff; `None` past the cutoff.
    pub fn coeff(&self, i: i64) -> Option<u32> {
        if i > self.cutoff {
            return None;
        }
        match self.valuation {
            Some(v) if i >= v => Some(self.coeffs[(i - v) as usize]),
            _ => Some(0),
        }
    }

    /// Coefficient of 1/t.
    pub fn a1(&self) -> Option<u32> {
        self.coeff(1)
    }
}

/// Long division in s = 1/t: A/H = t^{−ν}·Ã(s)/H̃(s) with Ã, H̃ the reversed polynomials.
pub fn laurent_expand(a: &PolyFq, h: &PolyFq, cutoff: i64) -> Result<LaurentPrefix> {
    if a.q() != h.q() {
        return Err(Error::ModulusMismatch(a.q(), h.q()));
    }
    let dh = h.degree().ok_or(Error::DivisionByZero)?;
    let Some(da) = a.degree() else {
        return Ok(LaurentPrefix { valuation: None, cutoff, coeffs: Vec::new() });
    };
    let q = a.q();
    let nu = dh as i64 - da as i64;
    let len = (cutoff - nu + 1).max(0) as usize;
    let rev_a: Vec<u32> = a.coeffs().iter().rev().copied().collect();
    let rev_h: Vec<u32> = h.coeffs().iter().rev().copied().collect();
    let inv_lead = field::inv(rev_h[0], q).expect("leading coefficient is nonzero");
    let mut rem: Vec<u32> = (0..len).map(|j| rev_a.get(j).copied().unwrap_or(0)).collect();
    let mut out = Vec::with_capacity(len);
    for j in 0..len {
        let b = field::mul(rem[j], inv_lead, q);
        out.push(b);
        if b == 0 {
            continue;
        }
        for (k, &hk) in rev_h.iter().enumerate().skip(1) {
            if j + k >= len {
                break;
            }
            rem[j + k] = field::sub(rem[j + k], field::mul(b, hk, q), q);
        }
    }
    Ok(LaurentPrefix { valuation: Some(nu), cutoff, coeffs: out })
}
