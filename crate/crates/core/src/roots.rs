//! Complex polynomial roots: companion-matrix eigenvalues, Newton-polished.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

fn eval(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Evaluate Σ c_k z^k.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    eval(coeffs, z).0
}

fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut p, mut dp) = eval(coeffs, z);
    for _ in 0..8 {
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        // near a multiple root p/dp is noise over a tiny slope; only accept improving steps
        let next = z - p / dp;
        let (np, ndp) = eval(coeffs, next);
        if np.norm() >= p.norm() {
            break;
        }
        z = next;
        p = np;
        dp = ndp;
    }
    z
}

/// Roots (with multiplicity) of Σ c_k z^k; trailing near-zero coefficients are dropped.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].norm() <= 1e-14 * scale {
        n -= 1;
    }
    if n <= 1 {
        return Vec::new();
    }
    let c = &coeffs[..n];
    let deg = n - 1;
    let lead = c[deg];
    if deg == 1 {
        return vec![-c[0] / lead];
    }
    if deg == 2 {
        // cancellation-free quadratic formula
        let (a, b, cc) = (lead, c[1], c[0]);
        let disc = (b * b - a * cc * 4.0).sqrt();
        let s = if (b.conj() * disc).re >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
        if s.norm() == 0.0 {
            return vec![Complex64::new(0.0, 0.0); 2];
        }
        return merge_clusters(c, vec![polish(c, s / a), polish(c, cc / s)]);
    }
    let companion = DMatrix::<Complex64>::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let raw: Vec<Complex64> = match Schur::try_new(companion, 4.0 * f64::EPSILON, 200 * deg) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            (0..deg).map(|i| t[(i, i)]).collect()
        }
        None => durand_kerner(c),
    };
    let polished = raw.into_iter().map(|z| polish(c, z)).collect();
    merge_clusters(c, polished)
}

fn derivative(c: &[Complex64]) -> Vec<Complex64> {
    c.iter().enumerate().skip(1).map(|(k, &x)| x * k as f64).collect()
}

/// A root of multiplicity m comes back as m points spread by ~ε^{1/m}; their centroid is
/// accurate to first order and is then refined as a simple root of the (m−1)-th derivative.
fn merge_clusters(c: &[Complex64], roots: Vec<Complex64>) -> Vec<Complex64> {
    let n = roots.len();
    let mut cluster: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() <= 1e-4 * roots[i].norm().max(1e-300) {
                cluster[i] = cluster[j];
                break;
            }
        }
    }
    let mut out = roots.clone();
    for leader in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| cluster[i] == leader).collect();
        if members.len() < 2 {
            continue;
        }
        let m = members.len();
        let centroid = members.iter().map(|&i| roots[i]).sum::<Complex64>() / m as f64;
        let mut d = c.to_vec();
        for _ in 1..m {
            d = derivative(&d);
        }
        let z = polish(&d, centroid);
        let z = if (z - centroid).norm() <= 1e-4 * centroid.norm().max(1e-300) { z } else { centroid };
        for &i in &members {
            out[i] = z;
        }
    }
    out
}

fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    let monic: Vec<Complex64> = c.iter().map(|&x| x / c[deg]).collect();
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let prev = z.clone();
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &zj) in prev.iter().enumerate() {
                if j != i {
                    denom *= z[i] - zj;
                }
            }
            let zi = z[i];
            z[i] = zi - horner(&monic, zi) / denom;
            moved = moved.max((z[i] - zi).norm() / zi.norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn known_roots() {
        // (z − 1)(z − 2)(z + 3) = z³ − 7z + 6
        let mut r = poly_roots(&[c(6.0), c(-7.0), c(0.0), c(1.0)]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - c(want)).norm() < 1e-12);
        }
        // z² + 1
        let r = poly_roots(&[c(1.0), c(0.0), c(1.0)]);
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12));
        assert!(poly_roots(&[c(3.0)]).is_empty());
        assert_eq!(poly_roots(&[c(2.0), c(-1.0), c(0.0)]), vec![c(2.0)]);
        // (z − 1e8)(z − 1e−8): both roots recovered to relative precision
        let mut r = poly_roots(&[c(1.0), c(-1e8 - 1e-8), c(1.0)]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0].re - 1e-8).abs() < 1e-20 && (r[1].re - 1e8).abs() < 1e-4);
    }

    #[test]
    fn repeated_roots_are_merged() {
        // (z − w)²(z − 3) with w off the real axis
        let w = Complex64::new(-0.358, 0.1237);
        let lin = |r: Complex64| [-r, c(1.0)];
        let mul = |a: &[Complex64], b: &[Complex64]| {
            let mut out = vec![c(0.0); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let sq = mul(&lin(w), &lin(w));
        for p in [sq.clone(), mul(&sq, &lin(c(3.0)))] {
            let r = poly_roots(&p);
            assert_eq!(r.iter().filter(|z| (*z - w).norm() < 1e-12).count(), 2, "{r:?}");
        }
    }

    #[test]
    fn fallback_agrees() {
        let p = [c(-6.0), c(11.0), c(-6.0), c(1.0)];
        let mut r = durand_kerner(&p);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - c(want)).norm() < 1e-9);
        }
    }
}
