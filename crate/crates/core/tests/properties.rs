//! Cross-module invariants on random inputs.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use ffrank::characters::{dirichlet_group, jacobi_symbol, jacobi_symbol_by_factoring};
use ffrank::dirichlet_l::l_polynomial_char;
use ffrank::elliptic_l::{
    l_polynomial_ec, satisfies_functional_equation, trace_by_count, EllipticSurface, FieldCache,
    LConfig, ReductionType,
};
use ffrank::fq_poly::{is_irreducible, PolyFq};
use ffrank::rank_survey::fejer_t;

fn cache5() -> &'static FieldCache {
    static C: OnceLock<FieldCache> = OnceLock::new();
    C.get_or_init(|| FieldCache::new(5, 7).unwrap())
}

fn poly(q: u32, max_len: usize) -> impl Strategy<Value = PolyFq> {
    prop::collection::vec(0..q, 0..=max_len).prop_map(move |c| PolyFq::new(q, c))
}

fn monic(q: u32, min_deg: usize, max_deg: usize) -> impl Strategy<Value = PolyFq> {
    prop::collection::vec(0..q, min_deg..=max_deg).prop_map(move |mut c| {
        c.push(1);
        PolyFq::new(q, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_reconstructs(a in poly(7, 9), b in poly(7, 5)) {
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.divrem(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a);
        prop_assert!(rem.degree_i64() < b.degree_i64());
    }

    #[test]
    fn jacobi_routes_agree_and_multiply(f in poly(5, 6), g in poly(5, 6), d in monic(5, 1, 5)) {
        let jf = jacobi_symbol(&f, &d).unwrap();
        prop_assert_eq!(jf, jacobi_symbol_by_factoring(&f, &d).unwrap());
        let jg = jacobi_symbol(&g, &d).unwrap();
        prop_assert_eq!(jacobi_symbol(&(&f * &g), &d).unwrap(), jf * jg);
    }

    /// Exact L-polynomial invariants for random nonsingular surfaces with small conductor.
    #[test]
    fn elliptic_l_is_exact(a in poly(5, 2), b in poly(5, 3)) {
        let e = EllipticSurface::new(&a, &b);
        prop_assume!(e.is_ok());
        let e = e.unwrap();
        let n = e.l_degree();
        prop_assume!(n >= 0 && n + 3 <= 7);
        let lp = l_polynomial_ec(&e, cache5(), LConfig::new(7)).unwrap();
        prop_assert_eq!(lp.coeffs[0], 1);
        prop_assert_eq!(lp.degree() as i64, n);
        prop_assert!(lp.top_is_unit_scaled());
        prop_assert!(satisfies_functional_equation(&lp.coeffs, 5, lp.epsilon));
        prop_assert_eq!(lp.tail_max(), 0);
        for mu in &lp.zeros {
            prop_assert!((mu.norm() - 5.0).abs() < 1e-6);
        }
        // inverted local factors give c_1 = Σ_{deg P = 1} a_P, ∞ included
        let mut c1 = 0i64;
        for x in 0..5 {
            let p = PolyFq::new(5, vec![(5 - x) % 5, 1]);
            match e.finite.iter().find(|d| d.place.to_string() == p.to_string()) {
                Some(d) if d.kind != ReductionType::Good => c1 += d.a_p,
                _ => c1 += trace_by_count(&a, &b, &p).unwrap(),
            }
        }
        c1 += e.infinity.a_p;
        if lp.degree() >= 1 {
            prop_assert_eq!(lp.coeffs[1], c1);
        } else {
            prop_assert_eq!(c1, 0);
        }
    }

    #[test]
    fn fejer_kernel_is_nonnegative(theta in 0.0..TAU, v in 1usize..12) {
        let t = fejer_t(Complex64::from_polar(1.0, theta), v).unwrap();
        prop_assert!(t >= -1e-12);
        prop_assert!((fejer_t(Complex64::new(1.0, 0.0), v).unwrap() - 1.0).abs() < 1e-12);
    }

    /// Every primitive character of a random modulus satisfies RH.
    #[test]
    fn dirichlet_rh(h in monic(5, 1, 3)) {
        for chi in dirichlet_group(&h, 1 << 16).unwrap() {
            if chi.is_principal() {
                continue;
            }
            let lp = l_polynomial_char(&chi, None).unwrap();
            if !lp.primitive {
                continue;
            }
            for r in &lp.roots {
                prop_assert!((r.norm() - 5f64.powf(-0.5)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn irreducible_has_no_roots(p in monic(7, 2, 3)) {
        if is_irreducible(&p).unwrap() {
            prop_assert!((0..7).all(|x| p.eval(x) != 0));
        }
    }
}
