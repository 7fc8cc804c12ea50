//! The Hayes exponential, quadratic symbols with reciprocity, and Dirichlet
//! characters modulo a monic polynomial h.
//!
//! The unit group (F_q[t]/h)^× is presented as a tower of subgroups
//! 1 = H_0 < H_1 < … < H_r = G with prime indices p_i; generator g_i has
//! g_i^{p_i} ∈ H_{i−1}. Every unit is uniquely Π g_i^{j_i} with 0 ≤ j_i < p_i.
//! A character is the vector v_i = log χ(g_i) in units of 2π/M, M = |G|.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fq_poly::{factor, field, is_irreducible, PolyFq};

/// e^{2πik/q}, stored as k mod q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnityExponent {
    pub k: u32,
    pub q: u32,
}

impl UnityExponent {
    pub fn new(k: u32, q: u32) -> Self {
        UnityExponent { k: k % q, q }
    }

    pub fn mul(self, other: Self) -> Self {
        UnityExponent { k: field::add(self.k, other.k, self.q), q: self.q }
    }

    pub fn inverse(self) -> Self {
        UnityExponent { k: field::neg(self.k, self.q), q: self.q }
    }

    pub fn value(self) -> Complex64 {
        unit(self.k as u64, self.q as u64)
    }
}

/// e^{2πi k/m}.
pub fn unit(k: u64, m: u64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * (k % m) as f64 / m as f64)
}

/// Table of e^{2πi k/m} for k in 0..m.
pub fn unit_table(m: u64) -> Vec<Complex64> {
    (0..m).map(|k| unit(k, m)).collect()
}

/// e(A/H) = e^{2πi a₁/q}, a₁ the coefficient of 1/t in A/H.
pub fn hayes_e(a: &PolyFq, h: &PolyFq) -> Result<UnityExponent> {
    let n = h.degree().ok_or(Error::DivisionByZero)?;
    let q = h.q();
    if n == 0 {
        return Ok(UnityExponent::new(0, q));
    }
    // only the remainder matters, and deg R < n gives a₁ = r_{n−1}/lc(H)
    let r = a.rem(h)?;
    let inv = field::inv(h.leading(), q).expect("nonzero leading coefficient");
    Ok(UnityExponent::new(field::mul(r.coeff(n - 1), inv, q), q))
}

/// Norm map F_P → F_q: f^{1 + q + … + q^{d−1}} mod P. Input must be reduced mod P.
pub(crate) fn norm_to_base(f: &PolyFq, p: &PolyFq) -> u32 {
    let d = p.degree().unwrap_or(0);
    let q = p.q();
    let mut x = f.clone();
    let mut acc = f.clone();
    for _ in 1..d {
        x = x.powmod(q as u64, p).expect("nonzero modulus");
        acc = acc.mulmod(&x, p).expect("nonzero modulus");
    }
    acc.coeff(0)
}

/// Euler criterion without the monic-irreducible check.
pub(crate) fn quadratic_symbol_unchecked(f: &PolyFq, p: &PolyFq) -> i8 {
    let r = f.rem(p).expect("nonzero modulus");
    if r.is_zero() {
        return 0;
    }
    field::legendre(norm_to_base(&r, p), p.q())
}

/// (f/P) for P monic irreducible.
pub fn quadratic_symbol(f: &PolyFq, p: &PolyFq) -> Result<i8> {
    if f.q() != p.q() {
        return Err(Error::ModulusMismatch(f.q(), p.q()));
    }
    if !p.is_monic() {
        return Err(Error::NotMonic(p.to_string()));
    }
    if !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    Ok(quadratic_symbol_unchecked(f, p))
}

/// Jacobi symbol (f/D) for monic D, by reciprocity descent.
pub fn jacobi_symbol(f: &PolyFq, d: &PolyFq) -> Result<i8> {
    if f.q() != d.q() {
        return Err(Error::ModulusMismatch(f.q(), d.q()));
    }
    if !d.is_monic() {
        return Err(Error::NotMonic(d.to_string()));
    }
    let q = d.q();
    let half = (q - 1) / 2;
    let (mut num, mut den) = (f.clone(), d.clone());
    let mut sign = 1i8;
    loop {
        let dd = den.degree().unwrap_or(0);
        if dd == 0 {
            return Ok(sign);
        }
        num = num.rem(&den)?;
        if num.is_zero() {
            return Ok(0);
        }
        // (c·g/D) = (c/D)(g/D) and (c/D) = (c/q)^{deg D}
        let c = num.leading();
        if dd % 2 == 1 {
            sign *= field::legendre(c, q);
        }
        num = num.monic();
        let dn = num.degree().unwrap_or(0);
        if (half as usize * dn * dd) % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut num, &mut den);
    }
}

/// Oracle: factor D and multiply the quadratic symbols.
pub fn jacobi_symbol_by_factoring(f: &PolyFq, d: &PolyFq) -> Result<i8> {
    if !d.is_monic() {
        return Err(Error::NotMonic(d.to_string()));
    }
    if d.is_one() {
        return Ok(1);
    }
    let mut acc = 1i8;
    for (p, m) in factor(d)? {
        let s = quadratic_symbol_unchecked(f, &p);
        if m % 2 == 1 || s == 0 {
            acc *= s;
        }
    }
    Ok(acc)
}

const MAX_RING_DEGREE: usize = 24;

/// F_q[t]/h with residues encoded by index Σ c_i q^i, deg < deg h.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    pub h: PolyFq,
    pub q: u32,
    pub degree: usize,
    pub size: u64,
}

impl ResidueRing {
    pub fn new(h: &PolyFq) -> Result<Self> {
        if !h.is_monic() {
            return Err(Error::NotMonic(h.to_string()));
        }
        let degree = h.degree().unwrap_or(0);
        if degree > MAX_RING_DEGREE {
            return Err(Error::InvalidArgument(format!("modulus degree {degree} too large")));
        }
        let size = (h.q() as u64)
            .checked_pow(degree as u32)
            .filter(|&s| s < 1 << 40)
            .ok_or_else(|| Error::InvalidArgument(format!("residue ring of {h} too large")))?;
        Ok(ResidueRing { h: h.clone(), q: h.q(), degree, size })
    }

    #[inline]
    pub fn decode(&self, mut idx: u64, out: &mut [u64]) {
        let q = self.q as u64;
        for d in out.iter_mut().take(self.degree) {
            *d = idx % q;
            idx /= q;
        }
    }

    #[inline]
    pub fn encode(&self, digits: &[u64]) -> u64 {
        let q = self.q as u64;
        digits[..self.degree].iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let n = self.degree;
        if n == 0 {
            return 0;
        }
        let q = self.q as u64;
        let mut da = [0u64; MAX_RING_DEGREE];
        let mut db = [0u64; MAX_RING_DEGREE];
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        let mut prod = [0u64; 2 * MAX_RING_DEGREE];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % q;
            }
        }
        self.reduce_digits(&mut prod, 2 * n - 1);
        self.encode(&prod)
    }

    /// Reduce a digit vector of length `len` modulo the monic h in place.
    pub fn reduce_digits(&self, digits: &mut [u64], len: usize) {
        let n = self.degree;
        let q = self.q as u64;
        let h = self.h.coeffs();
        for top in (n..len).rev() {
            let c = digits[top] % q;
            if c == 0 {
                continue;
            }
            digits[top] = 0;
            for (j, &hj) in h.iter().enumerate().take(n) {
                let k = top - n + j;
                digits[k] = (digits[k] + (q - c) * hj as u64) % q;
            }
        }
    }

    pub fn reduce(&self, f: &PolyFq) -> u64 {
        if self.degree == 0 {
            return 0;
        }
        let len = f.coeffs().len().max(self.degree);
        let mut digits = vec![0u64; len];
        for (d, &c) in digits.iter_mut().zip(f.coeffs()) {
            *d = c as u64;
        }
        self.reduce_digits(&mut digits, len);
        self.encode(&digits)
    }

    pub fn to_poly(&self, idx: u64) -> PolyFq {
        PolyFq::from_index(self.q, idx, self.degree)
    }

    pub fn one(&self) -> u64 {
        if self.degree == 0 {
            0
        } else {
            1
        }
    }
}

/// Quadratic character of F_q[t]/P over all residue indices, for P monic irreducible.
pub fn quadratic_table(ring: &ResidueRing) -> Vec<i8> {
    let mut table = vec![-1i8; ring.size as usize];
    table[0] = 0;
    for x in 1..ring.size {
        table[ring.mul(x, x) as usize] = 1;
    }
    table
}

/// Default ceiling on |(F_q[t]/h)^×| for explicit group construction.
pub const DEFAULT_GROUP_CEILING: u64 = 1 << 22;

#[derive(Debug)]
pub struct DirichletGroup {
    pub ring: ResidueRing,
    /// Monic irreducible factors of h with multiplicity.
    pub factors: Vec<(PolyFq, u32)>,
    /// |G| = φ(h); character exponents live in Z/M with M = |G|.
    pub order: u64,
    /// Prime index p_i of H_{i−1} in H_i.
    pub steps: Vec<u32>,
    /// Residue index of g_i.
    pub generators: Vec<u64>,
    /// Tower coordinates of g_i^{p_i} ∈ H_{i−1}.
    pub relations: Vec<Vec<u32>>,
    /// Flattened coordinates per residue index (`u32::MAX` in slot 0 marks a non-unit).
    coords: Vec<u32>,
    /// Weight Π_{l>i} p_l of coordinate i in the mixed-radix position.
    radix: Vec<u64>,
}

impl DirichletGroup {
    pub fn new(h: &PolyFq, ceiling: u64) -> Result<Arc<Self>> {
        let ring = ResidueRing::new(h)?;
        let factors = if ring.degree == 0 { Vec::new() } else { factor(h)? };
        let order: u64 = factors
            .iter()
            .map(|(p, e)| {
                let np = p.norm() as u64;
                np.pow(e - 1) * (np - 1)
            })
            .product();
        if order > ceiling {
            return Err(Error::GroupTooLarge { size: order, ceiling });
        }
        let size = ring.size as usize;
        let mut unit = vec![true; size.max(1)];
        for (p, _) in &factors {
            // mark multiples of P among residues
            let dp = p.degree().unwrap();
            let cof = (ring.q as u64).pow((ring.degree - dp) as u32);
            for g in 0..cof {
                let m = p * &PolyFq::from_index(ring.q, g, ring.degree - dp);
                unit[ring.reduce(&m) as usize] = false;
            }
        }
        let one = ring.one();
        // tower construction; `member` holds coordinates for elements of the current H
        let mut member: HashMap<u64, Vec<u32>> = HashMap::new();
        member.insert(one, Vec::new());
        let mut elements: Vec<u64> = vec![one];
        let mut steps = Vec::new();
        let mut generators = Vec::new();
        let mut relations = Vec::new();
        let mut scan = 0usize;
        while (elements.len() as u64) < order {
            while member.contains_key(&(scan as u64)) || !unit[scan] {
                scan += 1;
            }
            let x = scan as u64;
            // relative order k of x over H, then refine into prime steps
            let mut k = 1u64;
            let mut y = x;
            while !member.contains_key(&y) {
                y = ring.mul(y, x);
                k += 1;
            }
            let mut chain = Vec::new();
            let mut rest = k;
            for p in field::prime_factors(k) {
                while rest % p == 0 {
                    chain.push(p);
                    rest /= p;
                }
            }
            // generators x^{k/p_1}, x^{k/(p_1 p_2)}, …, x
            let mut divisor = 1u64;
            for &p in &chain {
                divisor *= p;
                let g = pow_residue(&ring, x, k / divisor);
                let gp = pow_residue(&ring, g, p);
                let mut rel = member[&gp].clone();
                rel.resize(steps.len(), 0);
                relations.push(rel);
                steps.push(p as u32);
                generators.push(g);
                let base: Vec<u64> = elements.clone();
                let mut power = one;
                for j in 1..p as u32 {
                    power = ring.mul(power, g);
                    for &e in &base {
                        let v = ring.mul(e, power);
                        let mut c = member[&e].clone();
                        c.resize(steps.len() - 1, 0);
                        c.push(j);
                        member.insert(v, c);
                        elements.push(v);
                    }
                }
            }
        }
        let r = steps.len();
        let mut coords = vec![u32::MAX; size.max(1) * r.max(1)];
        for (e, mut c) in member {
            c.resize(r, 0);
            if r > 0 {
                coords[e as usize * r..(e as usize + 1) * r].copy_from_slice(&c);
            } else {
                coords[e as usize] = 0;
            }
        }
        let mut radix = vec![1u64; r];
        for i in (0..r.saturating_sub(1)).rev() {
            radix[i] = radix[i + 1] * steps[i + 1] as u64;
        }
        Ok(Arc::new(DirichletGroup {
            ring,
            factors,
            order,
            steps,
            generators,
            relations,
            coords,
            radix,
        }))
    }

    pub fn modulus(&self) -> &PolyFq {
        &self.ring.h
    }

    pub fn rank(&self) -> usize {
        self.steps.len()
    }

    /// Tower coordinates of a residue, `None` for non-units.
    pub fn coords(&self, residue: u64) -> Option<&[u32]> {
        let r = self.steps.len();
        if r == 0 {
            return (self.coords[residue as usize] == 0).then_some(&[][..]);
        }
        let c = &self.coords[residue as usize * r..(residue as usize + 1) * r];
        (c[0] != u32::MAX).then_some(c)
    }

    pub fn is_unit(&self, residue: u64) -> bool {
        self.coords(residue).is_some()
    }

    /// Position of a unit in the mixed-radix layout (j_1 most significant).
    pub fn position(&self, residue: u64) -> Option<usize> {
        let c = self.coords(residue)?;
        Some(c.iter().zip(&self.radix).map(|(&j, &w)| j as u64 * w).sum::<u64>() as usize)
    }

    /// Exponent vector v of the character with label a (0 ≤ a_i < p_i).
    pub fn exponents_for_label(&self, label: &[u32]) -> Vec<u64> {
        let m = self.order;
        let mut v: Vec<u64> = Vec::with_capacity(label.len());
        for (i, &a) in label.iter().enumerate() {
            let p = self.steps[i] as u64;
            let tau = self.relations[i]
                .iter()
                .zip(&v)
                .fold(0u64, |acc, (&c, &vl)| (acc + c as u64 % m * vl) % m);
            debug_assert_eq!(tau % p, 0);
            v.push((tau / p + a as u64 * (m / p)) % m);
        }
        v
    }

    /// Characters in mixed-radix label order; label 0 is the principal character.
    pub fn characters(self: &Arc<Self>) -> impl Iterator<Item = DirichletCharacter> + '_ {
        let total = self.order;
        (0..total).map(move |idx| self.character(idx))
    }

    /// Character with mixed-radix label index `idx`.
    pub fn character(self: &Arc<Self>, idx: u64) -> DirichletCharacter {
        let mut label = vec![0u32; self.rank()];
        let mut rest = idx;
        for i in (0..self.rank()).rev() {
            label[i] = (rest % self.steps[i] as u64) as u32;
            rest /= self.steps[i] as u64;
        }
        let v = self.exponents_for_label(&label);
        DirichletCharacter { group: Arc::clone(self), index: idx, v }
    }
}

fn pow_residue(ring: &ResidueRing, x: u64, mut e: u64) -> u64 {
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

/// All φ(h) characters modulo h (h monic, deg h ≥ 1).
pub fn dirichlet_group(h: &PolyFq, ceiling: u64) -> Result<Vec<DirichletCharacter>> {
    if h.degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantPolynomial(h.to_string()));
    }
    let g = DirichletGroup::new(h, ceiling)?;
    Ok(g.characters().collect())
}

#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    pub group: Arc<DirichletGroup>,
    /// Mixed-radix label index within the group.
    pub index: u64,
    /// log χ(g_i) in units of 2π/M.
    pub v: Vec<u64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> &PolyFq {
        self.group.modulus()
    }

    /// M: character values are M-th roots of unity.
    pub fn order_bound(&self) -> u64 {
        self.group.order
    }

    pub fn is_principal(&self) -> bool {
        self.v.iter().all(|&x| x == 0)
    }

    /// Exponent of χ(residue) in Z/M, `None` when gcd(residue, h) ≠ 1.
    pub fn exponent_of_residue(&self, residue: u64) -> Option<u64> {
        let m = self.group.order;
        let c = self.group.coords(residue)?;
        Some(c.iter().zip(&self.v).fold(0u64, |acc, (&j, &v)| (acc + j as u64 * v) % m))
    }

    pub fn exponent(&self, g: &PolyFq) -> Option<u64> {
        self.exponent_of_residue(self.group.ring.reduce(g))
    }

    pub fn value(&self, g: &PolyFq) -> Complex64 {
        match self.exponent(g) {
            Some(e) => unit(e, self.group.order),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Exponent table over all residues (`None` off the units).
    pub fn exponent_table(&self) -> Vec<Option<u64>> {
        (0..self.group.ring.size).map(|r| self.exponent_of_residue(r)).collect()
    }

    pub fn value_table(&self) -> Vec<Complex64> {
        let units = unit_table(self.group.order);
        self.exponent_table()
            .into_iter()
            .map(|e| e.map_or(Complex64::new(0.0, 0.0), |e| units[e as usize]))
            .collect()
    }

    /// Even iff trivial on scalars; a primitive root of F_q generates them.
    pub fn is_even(&self) -> bool {
        let q = self.group.ring.q;
        let g = PolyFq::constant(q, field::primitive_root(q));
        self.exponent(&g) == Some(0)
    }

    /// λ = 1 for even, 0 for odd characters.
    pub fn parity(&self) -> u8 {
        u8::from(self.is_even())
    }

    /// χ trivial on the units ≡ 1 mod d (d a monic divisor of h).
    fn trivial_above(&self, d: &PolyFq) -> bool {
        let ring = &self.group.ring;
        let cof = self.modulus().div_exact(d).expect("d divides h");
        let span_deg = cof.degree().unwrap_or(0);
        let count = (ring.q as u64).pow(span_deg as u32);
        (0..count).all(|g| {
            let x = &PolyFq::one(ring.q) + &(d * &PolyFq::from_index(ring.q, g, span_deg));
            self.exponent(&x).map_or(true, |e| e == 0)
        })
    }

    pub fn is_primitive(&self) -> bool {
        let h = self.modulus();
        self.group
            .factors
            .iter()
            .all(|(p, _)| !self.trivial_above(&h.div_exact(p).expect("factor divides h")))
    }

    /// Minimal monic divisor of h inducing χ.
    pub fn conductor(&self) -> PolyFq {
        let q = self.group.ring.q;
        let mut best: Option<PolyFq> = None;
        for d in divisors(&self.group.factors, q) {
            if best.as_ref().is_some_and(|b| d.degree() >= b.degree()) {
                continue;
            }
            if self.trivial_above(&d) {
                best = Some(d);
            }
        }
        best.unwrap_or_else(|| self.modulus().clone())
    }

    /// Product with another character of the same group.
    pub fn mul(&self, other: &DirichletCharacter) -> DirichletCharacter {
        let m = self.group.order;
        let v: Vec<u64> = self.v.iter().zip(&other.v).map(|(a, b)| (a + b) % m).collect();
        DirichletCharacter { group: Arc::clone(&self.group), index: u64::MAX, v }
    }

    pub fn conj(&self) -> DirichletCharacter {
        let m = self.group.order;
        let v = self.v.iter().map(|&a| (m - a) % m).collect();
        DirichletCharacter { group: Arc::clone(&self.group), index: u64::MAX, v }
    }
}

impl DirichletGroup {
    /// Σ_x w(x)·χ_a(x) for every label a at once, with w indexed by `position`.
    /// The exponent vector of χ_a depends only on a_1..a_i in slot i, so the sum
    /// factors stage by stage; cost |G|·Σ p_i.
    pub fn transform(&self, weights: &[Complex64]) -> Vec<Complex64> {
        let size = self.order as usize;
        assert_eq!(weights.len(), size, "weights must be indexed by group position");
        let m = self.order;
        let units = unit_table(m);
        let mut data = weights.to_vec();
        // exponent vectors of the prefix labels processed so far
        let mut prefixes: Vec<Vec<u64>> = vec![Vec::new()];
        let mut buf = Vec::new();
        for (s, &p) in self.steps.iter().enumerate() {
            let p = p as usize;
            let rest: usize = self.steps[s + 1..].iter().map(|&x| x as usize).product();
            let block = p * rest;
            let mut next = Vec::with_capacity(prefixes.len() * p);
            for (b, pre) in prefixes.iter().enumerate() {
                let tau = self.relations[s]
                    .iter()
                    .zip(pre)
                    .fold(0u64, |acc, (&c, &vl)| (acc + c as u64 % m * vl) % m);
                let chunk = &mut data[b * block..(b + 1) * block];
                buf.clear();
                buf.resize(block, Complex64::new(0.0, 0.0));
                for a in 0..p {
                    let vs = (tau / p as u64 + a as u64 * (m / p as u64)) % m;
                    let out = &mut buf[a * rest..(a + 1) * rest];
                    for j in 0..p {
                        let z = units[((j as u64 * vs) % m) as usize];
                        let src = &chunk[j * rest..(j + 1) * rest];
                        for (o, x) in out.iter_mut().zip(src) {
                            *o += z * x;
                        }
                    }
                    let mut v = pre.clone();
                    v.push(vs);
                    next.push(v);
                }
                chunk.copy_from_slice(&buf);
            }
            prefixes = next;
        }
        data
    }

    /// Weights at group positions from a per-residue table (non-units dropped).
    pub fn weights_from_residues(&self, per_residue: &[f64]) -> Vec<Complex64> {
        let mut w = vec![Complex64::new(0.0, 0.0); self.order as usize];
        for (r, &x) in per_residue.iter().enumerate() {
            if x != 0.0 {
                if let Some(pos) = self.position(r as u64) {
                    w[pos] += x;
                }
            }
        }
        w
    }
}

/// All monic divisors of Π P^e.
pub fn divisors(factors: &[(PolyFq, u32)], q: u32) -> Vec<PolyFq> {
    let mut out = vec![PolyFq::one(q)];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*e {
                cur = &cur * p;
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out
}

/// Conductor and parity λ (1 even, 0 odd).
pub fn conductor_and_parity(chi: &DirichletCharacter) -> (PolyFq, u8) {
    (chi.conductor(), chi.parity())
}
