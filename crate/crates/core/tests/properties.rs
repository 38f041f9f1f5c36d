use std::f64::consts::PI;

use g2kit::algebra_core::{Matrix, Rational, ZetaPoly};
use g2kit::cubic_rings::{df_ring, is_ring, content, content_by_form, integral_classes, standard_fmax, BinaryCubic, CubicRingTable, SplittingType};
use g2kit::heis_so7::{det2, gl2_act3, mul2, symplectic, Mat2};
use g2kit::octonion::*;
use g2kit::whittaker::*;
use g2kit::WVector;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn q() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn oct() -> impl Strategy<Value = Octonion> {
    prop::array::uniform8(q()).prop_map(Octonion::from_coords)
}

fn zpoly() -> impl Strategy<Value = ZetaPoly> {
    (-3i64..=3, prop::collection::vec(-6i64..=6, 0..6)).prop_map(|(s, c)| ZetaPoly::from_ints(s, &c))
}

fn wvec() -> impl Strategy<Value = WVector> {
    prop::array::uniform4(q()).prop_map(WVector::from_cubic)
}

fn gl2() -> impl Strategy<Value = Mat2<Rational>> {
    prop::array::uniform4(q())
        .prop_map(|[a, b, c, d]| [[a, b], [c, d]])
        .prop_filter("invertible", |m| det2(m) != Rational::from_integer(0.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rational_field_laws(a in q(), b in q(), c in q()) {
        prop_assert_eq!(&(&a + &b) * &c, &a * &c + &b * &c);
        if b != Rational::from_integer(0.into()) {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn zeta_poly_ring_laws(a in zpoly(), b in zpoly(), c in zpoly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn rank_of_transpose(entries in prop::collection::vec(-3i64..=3, 20)) {
        let m = Matrix::from_fn(4, 5, |i, j| Rational::from_integer(entries[5 * i + j].into()));
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= 4);
    }

    #[test]
    fn octonion_composition(x in oct(), y in oct()) {
        prop_assert_eq!(oct_norm(&oct_mul(&x, &y)), oct_norm(&x) * oct_norm(&y));
        prop_assert_eq!(oct_conj(&oct_conj(&x)), x.clone());
        prop_assert_eq!(oct_mul(&x, &oct_conj(&x)), Octonion::scalar(oct_norm(&x)));
        let sq = &x.scale(&oct_trace(&x)) - &Octonion::scalar(oct_norm(&x));
        prop_assert_eq!(oct_mul(&x, &x), sq);
        prop_assert_eq!(bilinear(&x, &y), oct_norm(&(&x + &y)) - oct_norm(&x) - oct_norm(&y));
        prop_assert_eq!(oct_trace(&oct_mul(&x, &y)), oct_trace(&oct_mul(&y, &x)));
    }

    #[test]
    fn octonion_alternative(x in oct(), y in oct(), z in oct()) {
        prop_assert_eq!(trilinear(&x, &y, &z), oct_trace(&oct_mul(&oct_mul(&x, &y), &z)));
        prop_assert_eq!(trilinear(&x, &y, &z), oct_trace(&oct_mul(&x, &oct_mul(&y, &z))));
        let a = associator(&x, &y, &z);
        prop_assert_eq!(associator(&y, &x, &z), -&a);
        prop_assert_eq!(associator(&x, &z, &y), -&a);
        prop_assert_eq!(associator(&x, &x, &y), Octonion::zero());
    }

    #[test]
    fn octonion_text_round_trip(x in oct()) {
        prop_assert_eq!(x.to_string().parse::<Octonion>().unwrap(), x);
    }

    #[test]
    fn symplectic_form(w in wvec(), w2 in wvec(), m in gl2()) {
        prop_assert_eq!(symplectic(&w, &w2), -symplectic(&w2, &w));
        let lhs = symplectic(&gl2_act3(&m, &w).unwrap(), &gl2_act3(&m, &w2).unwrap());
        prop_assert_eq!(lhs, det2(&m) * symplectic(&w, &w2));
    }

    #[test]
    fn act3_is_an_action(w in wvec(), a in gl2(), b in gl2()) {
        let ab = gl2_act3(&mul2(&a, &b), &w).unwrap();
        prop_assert_eq!(ab, gl2_act3(&a, &gl2_act3(&b, &w).unwrap()).unwrap());
    }

    #[test]
    fn df_ring_associative(c in prop::array::uniform4(-30i64..=30)) {
        let t = df_ring(&BinaryCubic::new(c[0], c[1], c[2], c[3]));
        let e = CubicRingTable::basis();
        for x in &e {
            for y in &e {
                prop_assert_eq!(t.mul(x, y), t.mul(y, x));
                for z in &e {
                    prop_assert_eq!(t.mul(&t.mul(x, y), z), t.mul(x, &t.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn w_nonneg_exact_matches_float(c in prop::array::uniform4(-20i64..=20)) {
        prop_assume!(c.iter().any(|&x| x != 0));
        let w = WVector::from_ints(c);
        let f = c.map(|x| x as f64);
        let disc = cubic_disc_f64(&f);
        prop_assume!(disc.abs() > 1e-6);
        prop_assert_eq!(w_nonneg(&w).unwrap(), w_nonneg_f64(&f).unwrap());
    }

    #[test]
    fn bessel_recurrence(nu in 0.5f64..6.0, x in 0.2f64..30.0) {
        let (a, b, c) = (bessel_k(nu - 1.0, x).unwrap(), bessel_k(nu, x).unwrap(), bessel_k(nu + 1.0, x).unwrap());
        prop_assert!((c - a - 2.0 * nu / x * b).abs() <= 1e-10 * c);
    }

    #[test]
    fn k_rotation_phase(x in -1.0f64..1.0, y in 0.5f64..2.0, s in 0.3f64..1.5, th in 0.0f64..(2.0 * PI), v in -2i32..=2) {
        let w = [0.5, -0.25, -1.0, 0.3];
        let mc = m_coords(x, y, s);
        let (c, sn) = (th.cos(), th.sin());
        let mk = [
            [mc[0][0] * c - mc[0][1] * sn, mc[0][0] * sn + mc[0][1] * c],
            [mc[1][0] * c - mc[1][1] * sn, mc[1][0] * sn + mc[1][1] * c],
        ];
        let a = whittaker_at(2, &w, &mc, v).unwrap();
        let b = whittaker_at(2, &w, &mk, v).unwrap();
        prop_assert!((b - a * C::from_polar(1.0, 3.0 * th * v as f64)).norm() <= 1e-11 * a.norm());
    }

    #[test]
    fn gamma_ratio_forms_agree(s in 3.7f64..12.0, n in 1u32..=4) {
        match arch_gamma_ratio(s, n) {
            Ok(g) => prop_assert!(g.rel_error() < 1e-10, "{g:?}"),
            Err(_) => prop_assert!(gamma_ratio_numerator_args(s, n).iter().any(|&t| near_gamma_pole(t))),
        }
    }
}

#[test]
fn content_at_most_form_valuation() {
    for p in [5u64, 7] {
        for t in SplittingType::ALL {
            let f = standard_fmax(p, t);
            for h in integral_classes(p, 3) {
                if is_ring(&h, &f) {
                    assert!(content(&h, &f) <= content_by_form(&h, &f), "p={p} h={h}");
                }
            }
        }
    }
}
