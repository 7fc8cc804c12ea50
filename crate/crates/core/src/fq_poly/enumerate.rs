//! Deterministic enumeration of M_n, H_n and the monic irreducibles of degree n.
//!
//! Order: coefficient of t^0 varies fastest; for all-leading enumeration the
//! leading coefficient varies slowest.

use super::PolyFq;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyKind {
    Monic,
    AllLeading,
    MonicIrreducible,
}

fn checked_pow(q: u32, n: usize) -> Result<u64> {
    (q as u64)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("q^{n} overflows for q = {q}")))
}

/// Stream the polynomials of degree `n` of the requested kind.
pub fn enumerate(
    q: u32,
    n: usize,
    kind: PolyKind,
) -> Result<Box<dyn Iterator<Item = PolyFq> + Send>> {
    let size = checked_pow(q, n)?;
    Ok(match kind {
        PolyKind::Monic => Box::new((0..size).map(move |i| PolyFq::monic_from_index(q, i, n))),
        PolyKind::AllLeading => Box::new((1..q).flat_map(move |lc| {
            (0..size).map(move |i| PolyFq::monic_from_index(q, i, n).scale(lc))
        })),
        PolyKind::MonicIrreducible => {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "irreducible enumeration needs degree at least 1".into(),
                ));
            }
            let table = IrreducibleTable::build(q, n)?;
            let indices = table.by_degree[n].clone();
            Box::new(
                indices
                    .into_iter()
                    .map(move |i| PolyFq::monic_from_index(q, i, n)),
            )
        }
    })
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of monic irreducibles of degree n: (1/n) Σ_{k|n} μ(k) q^{n/k}.
pub fn irreducible_count(q: u32, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let total: i128 = (1..=n)
        .filter(|k| n % k == 0)
        .map(|k| mobius(k) as i128 * (q as i128).pow((n / k) as u32))
        .sum();
    (total / n as i128) as u64
}

/// Monic irreducibles of every degree up to a bound, stored as monic indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleTable {
    pub q: u32,
    /// `by_degree[n]` holds ascending monic indices; `by_degree[0]` is empty.
    pub by_degree: Vec<Vec<u64>>,
}

/// Monic products with more than ~4·10^7 entries per degree are refused.
const SIEVE_CEILING: u64 = 40_000_000;

impl IrreducibleTable {
    /// Sieve: a monic of degree n is composite iff it is P·g with P irreducible of degree ≤ n/2.
    pub fn build(q: u32, max_degree: usize) -> Result<Self> {
        let mut by_degree: Vec<Vec<u64>> = vec![Vec::new()];
        for n in 1..=max_degree {
            let size = checked_pow(q, n)?;
            if size > SIEVE_CEILING {
                return Err(Error::BudgetExceeded {
                    work: size as f64,
                    budget: SIEVE_CEILING as f64,
                });
            }
            let mut composite = vec![false; size as usize];
            for k in 1..=n / 2 {
                let cofactors = checked_pow(q, n - k)?;
                for &pi in &by_degree[k] {
                    let p = PolyFq::monic_from_index(q, pi, k);
                    for gi in 0..cofactors {
                        let g = PolyFq::monic_from_index(q, gi, n - k);
                        composite[(&p * &g).monic_index() as usize] = true;
                    }
                }
            }
            by_degree.push(
                (0..size)
                    .filter(|&i| !composite[i as usize])
                    .collect(),
            );
        }
        Ok(IrreducibleTable { q, by_degree })
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn primes(&self, n: usize) -> impl Iterator<Item = PolyFq> + '_ {
        let q = self.q;
        self.by_degree
            .get(n)
            .into_iter()
            .flatten()
            .map(move |&i| PolyFq::monic_from_index(q, i, n))
    }

    pub fn count(&self, n: usize) -> usize {
        self.by_degree.get(n).map_or(0, Vec::len)
    }
}
