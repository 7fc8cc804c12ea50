//! Elliptic surfaces y² = x³ + A(t)x + B(t) over F_q(t): reduction at every place,
//! conductor, traces a_P and the integer L-polynomial with its zeros.

pub mod fibers;
pub mod lpoly;
pub mod reduction;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fq_poly::{factor, is_irreducible, PolyFq};

pub use fibers::{FieldCache, DEFAULT_FIELD_BUDGET};
pub use lpoly::{
    analytic_rank, l_polynomial_ec, satisfies_functional_equation, zero_power_sums, Completion, ECLPolynomial,
    LConfig, PowerSumCheck, PrimePowerSums, SIGMA,
};
pub use reduction::{
    discriminant, infinity_model, infinity_reduction, minimalize, reduction_type, trace_by_count, Place,
    ReductionDatum, ReductionType,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticSurface {
    pub q: u32,
    pub a: PolyFq,
    pub b: PolyFq,
    pub disc: PolyFq,
    /// Every monic irreducible P | Δ, including places that become good after minimalizing.
    pub finite: Vec<ReductionDatum>,
    pub infinity: ReductionDatum,
}

/// N_E = M_E·A_E² as a list of places with exponents; ∞ counts with degree 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conductor {
    pub places: Vec<(Place, u8)>,
    pub degree: usize,
    pub multiplicative_degree: usize,
    pub additive_degree: usize,
}

impl EllipticSurface {
    pub fn new(a: &PolyFq, b: &PolyFq) -> Result<Self> {
        if a.q() != b.q() {
            return Err(Error::ModulusMismatch(a.q(), b.q()));
        }
        let disc = discriminant(a, b)?;
        let mut finite = Vec::new();
        if !disc.is_constant() {
            for (p, _) in factor(&disc)? {
                finite.push(reduction_type(a, b, &p)?);
            }
        }
        let infinity = infinity_reduction(a, b)?;
        Ok(EllipticSurface { q: a.q(), a: a.clone(), b: b.clone(), disc, finite, infinity })
    }

    /// Bad places, finite ones by (degree, index), then ∞.
    pub fn bad_places(&self) -> impl Iterator<Item = &ReductionDatum> {
        self.finite
            .iter()
            .chain(std::iter::once(&self.infinity))
            .filter(|d| d.kind != ReductionType::Good)
    }

    pub fn conductor(&self) -> Conductor {
        let mut places = Vec::new();
        let (mut m, mut a) = (0, 0);
        for d in self.bad_places() {
            places.push((d.place.clone(), d.conductor_exponent));
            match d.conductor_exponent {
                1 => m += d.place.degree(),
                _ => a += d.place.degree(),
            }
        }
        Conductor { places, degree: m + 2 * a, multiplicative_degree: m, additive_degree: a }
    }

    /// N = deg N_E − 4 (negative values are possible for constant curves).
    pub fn l_degree(&self) -> i64 {
        self.conductor().degree as i64 - 4
    }

    /// a_P at a good place by point count over F_P.
    pub fn trace_ap(&self, p: &PolyFq) -> Result<i64> {
        if !p.is_monic() {
            return Err(Error::NotMonic(p.to_string()));
        }
        if !is_irreducible(p)? {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        if let Some(d) = self.finite.iter().find(|d| d.place == Place::Finite(p.clone())) {
            if d.kind != ReductionType::Good {
                return Err(Error::BadReduction(p.to_string()));
            }
            return Ok(d.a_p);
        }
        trace_by_count(&self.a, &self.b, p)
    }
}

/// Per-curve JSON record.
#[derive(Clone, Debug, Serialize)]
pub struct CurveRecord {
    pub q: u32,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "degN_E")]
    pub deg_conductor: usize,
    pub places: Vec<ReductionDatum>,
    #[serde(rename = "L")]
    pub l: Vec<i64>,
    pub epsilon: i8,
    pub analytic_rank: usize,
}

impl CurveRecord {
    pub fn new(e: &EllipticSurface, lp: &ECLPolynomial) -> Self {
        CurveRecord {
            q: e.q,
            a: e.a.to_string(),
            b: e.b.to_string(),
            deg_conductor: e.conductor().degree,
            places: e.bad_places().cloned().collect(),
            l: lp.coeffs.clone(),
            epsilon: lp.epsilon,
            analytic_rank: lp.analytic_rank,
        }
    }
}
