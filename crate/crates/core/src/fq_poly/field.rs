//! Scalar arithmetic in the prime field F_q.

use crate::error::{Error, Result};

#[inline]
pub fn add(a: u32, b: u32, q: u32) -> u32 {
    let s = a as u64 + b as u64;
    let q = q as u64;
    (if s >= q { s - q } else { s }) as u32
}

#[inline]
pub fn sub(a: u32, b: u32, q: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + q as u64 - b as u64) as u32
    }
}

#[inline]
pub fn neg(a: u32, q: u32) -> u32 {
    if a == 0 {
        0
    } else {
        q - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

pub fn pow(mut base: u32, mut exp: u64, q: u32) -> u32 {
    let mut acc = 1u32 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, q);
        }
        base = mul(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse; `None` for zero.
pub fn inv(a: u32, q: u32) -> Option<u32> {
    let a = a % q;
    if a == 0 {
        return None;
    }
    // extended Euclid on i64 avoids the log q multiplications of Fermat
    let (mut r0, mut r1) = (q as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (t0, t1) = (t1, t0 - quot * t1);
    }
    Some(t0.rem_euclid(q as i64) as u32)
}

/// Reduce a signed integer into [0, q).
#[inline]
pub fn from_i64(v: i64, q: u32) -> u32 {
    v.rem_euclid(q as i64) as u32
}

/// Legendre symbol (a/q) for odd prime q.
pub fn legendre(a: u32, q: u32) -> i8 {
    let a = a % q;
    if a == 0 {
        return 0;
    }
    if pow(a, ((q - 1) / 2) as u64, q) == 1 {
        1
    } else {
        -1
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Validate a field size: prime, at least 5, below 2^31.
pub fn check_field_order(q: u64) -> Result<u32> {
    if !(5..(1u64 << 31)).contains(&q) || !is_prime(q) {
        return Err(Error::InvalidFieldOrder(q));
    }
    Ok(q as u32)
}

/// Smallest generator of F_q^×.
pub fn primitive_root(q: u32) -> u32 {
    let factors = prime_factors(q as u64 - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&r| pow(g, (q as u64 - 1) / r, q) != 1))
        .unwrap_or(1)
}
