//! Dense polynomials over a prime field F_q.
//!
//! Coefficients are stored in ascending order with no trailing zeros, so the
//! zero polynomial is the empty vector and its degree is `None` (the −∞
//! convention: `None` compares below every `Some(d)`).

pub mod enumerate;
pub mod field;
pub mod irreducible;
pub mod laurent;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use enumerate::{enumerate, irreducible_count, IrreducibleTable, PolyKind};
pub use irreducible::{factor, is_irreducible, is_irreducible_trial_division};
pub use laurent::{laurent_expand, LaurentPrefix};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFq {
    q: u32,
    coeffs: Vec<u32>,
}

impl PolyFq {
    /// Build from ascending coefficients, reducing mod q and trimming.
    pub fn new(q: u32, coeffs: Vec<u32>) -> Self {
        debug_assert!(q >= 2);
        let mut p = PolyFq {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        p.trim();
        p
    }

    pub fn from_i64s(q: u32, coeffs: &[i64]) -> Self {
        Self::new(q, coeffs.iter().map(|&c| field::from_i64(c, q)).collect())
    }

    pub fn zero(q: u32) -> Self {
        PolyFq { q, coeffs: Vec::new() }
    }

    pub fn one(q: u32) -> Self {
        Self::constant(q, 1)
    }

    pub fn constant(q: u32, c: u32) -> Self {
        Self::new(q, vec![c])
    }

    /// The indeterminate t.
    pub fn t(q: u32) -> Self {
        Self::monomial(q, 1, 1)
    }

    pub fn monomial(q: u32, c: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(q, coeffs)
    }

    /// Decode a residue index `Σ c_i q^i` into a polynomial with `len` digits.
    pub fn from_index(q: u32, mut index: u64, len: usize) -> Self {
        let mut coeffs = Vec::with_capacity(len);
        for _ in 0..len {
            coeffs.push((index % q as u64) as u32);
            index /= q as u64;
        }
        Self::new(q, coeffs)
    }

    /// Monic polynomial of degree `n` whose lower coefficients are the digits of `index`.
    pub fn monic_from_index(q: u32, index: u64, n: usize) -> Self {
        let mut p = Self::from_index(q, index, n);
        p.coeffs.resize(n + 1, 0);
        p.coeffs[n] = 1;
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of t^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` encodes deg 0 = −∞.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with −∞ mapped to −1, for arithmetic on degrees.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// |F| = q^deg F, and |0| = 0.
    pub fn norm(&self) -> f64 {
        match self.degree() {
            None => 0.0,
            Some(d) => (self.q as f64).powi(d as i32),
        }
    }

    /// Index `Σ c_i q^i` of the coefficient vector; injective on residues of bounded degree.
    pub fn to_index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.q as u64 + c as u64)
    }

    /// Index of the lower `n` coefficients of a monic polynomial of degree `n`.
    pub fn monic_index(&self) -> u64 {
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.q as u64 + c as u64)
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field::add(field::mul(acc, x, self.q), c, self.q))
    }

    pub fn scale(&self, c: u32) -> Self {
        Self::new(
            self.q,
            self.coeffs.iter().map(|&a| field::mul(a, c, self.q)).collect(),
        )
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match field::inv(self.leading(), self.q) {
            Some(inv) if !self.is_zero() => self.scale(inv),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let q = self.q;
        Self::new(
            q,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| field::mul(c, (i as u64 % q as u64) as u32, q))
                .collect(),
        )
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        PolyFq { q: self.q, coeffs }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch(self.q, other.q));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let q = self.q;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            q,
            (0..n)
                .map(|i| field::add(self.coeff(i), other.coeff(i), q))
                .collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let q = self.q;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            q,
            (0..n)
                .map(|i| field::sub(self.coeff(i), other.coeff(i), q))
                .collect(),
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.q));
        }
        let q = self.q as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % q;
            }
        }
        Ok(Self::new(self.q, acc.into_iter().map(|c| c as u32).collect()))
    }

    /// Euclidean division: `self = quot * divisor + rem` with `deg rem < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_field(divisor)?;
        let q = self.q;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = field::inv(divisor.leading(), q).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(q), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = field::mul(rem[k + dd], lead_inv, q);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = field::sub(rem[k + j], field::mul(c, b, q), q);
            }
        }
        rem.truncate(dd);
        Ok((Self::new(q, quot), Self::new(q, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (quot, rem) = self.divrem(divisor)?;
        if !rem.is_zero() {
            return Err(Error::Inconsistent(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(quot)
    }

    /// Monic gcd (zero when both inputs vanish).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g` and `g` monic.
    pub fn xgcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        self.same_field(other)?;
        let q = self.q;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(q), Self::zero(q));
        let (mut t0, mut t1) = (Self::zero(q), Self::one(q));
        while !r1.is_zero() {
            let (quot, r2) = r0.divrem(&r1)?;
            let s2 = &s0 - &(&quot * &s1);
            let t2 = &t0 - &(&quot * &t1);
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match field::inv(r0.leading(), q) {
            Some(inv) if !r0.is_zero() => Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv))),
            _ => Ok((r0, s0, t0)),
        }
    }

    /// Inverse of `self` modulo `modulus`, reduced below `deg modulus`.
    pub fn inverse_mod(&self, modulus: &Self) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.xgcd(modulus)?;
        if !g.is_one() {
            return Err(Error::NotInvertible(self.to_string(), modulus.to_string()));
        }
        s.rem(modulus)
    }

    pub fn mulmod(&self, other: &Self, modulus: &Self) -> Result<Self> {
        self.checked_mul(other)?.rem(modulus)
    }

    pub fn powmod(&self, mut exp: u64, modulus: &Self) -> Result<Self> {
        self.same_field(modulus)?;
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut base = self.rem(modulus)?;
        let mut acc = Self::one(self.q).rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mulmod(&base, modulus)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mulmod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.q);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Largest k with `p^k | self`; `None` for the zero polynomial.
    pub fn valuation(&self, p: &Self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (quot, rem) = cur.divrem(p).ok()?;
            if !rem.is_zero() {
                return Some(k);
            }
            cur = quot;
            k += 1;
        }
    }

    /// Parse the canonical text form: ascending base-10 coefficients joined by commas.
    pub fn parse(q: u32, text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::Parse {
                text: text.to_string(),
                reason: "empty".into(),
            });
        }
        let coeffs = trimmed
            .split(',')
            .map(|tok| {
                tok.trim().parse::<i64>().map_err(|e| Error::Parse {
                    text: text.to_string(),
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_i64s(q, &coeffs))
    }
}

/// Canonical text form, e.g. `1,3,1` for 1 + 3t + t². The zero polynomial prints as `0`.
impl fmt::Display for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFq(q={}, [{}])", self.q, self)
    }
}

// Operator forms panic on mismatched fields; use the `checked_*` methods to get an error instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&PolyFq> for &PolyFq {
            type Output = PolyFq;
            fn $method(self, rhs: &PolyFq) -> PolyFq {
                self.$checked(rhs).expect("polynomials over different fields")
            }
        }
        impl $trait<PolyFq> for PolyFq {
            type Output = PolyFq;
            fn $method(self, rhs: PolyFq) -> PolyFq {
                (&self).$checked(&rhs).expect("polynomials over different fields")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &PolyFq {
    type Output = PolyFq;
    fn neg(self) -> PolyFq {
        PolyFq::new(
            self.q,
            self.coeffs.iter().map(|&c| field::neg(c, self.q)).collect(),
        )
    }
}
