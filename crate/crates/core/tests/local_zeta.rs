use std::collections::BTreeMap;

use g2kit::algebra_core::{rat, ZetaPoly};
use g2kit::cubic_rings::*;
use g2kit::local_zeta::*;

fn fmaxes(p: u64) -> Vec<(SplittingType, BinaryCubic)> {
    SplittingType::ALL.iter().map(|&t| (t, standard_fmax(p, t))).collect()
}

#[test]
fn crident_holds_for_all_small_ring_classes() {
    for p in [5u64, 7] {
        for (t, f) in fmaxes(p) {
            let checks = crident_sweep(&f, p, 3, 6, PConvention::Zero).unwrap();
            let mut per_content: BTreeMap<i64, usize> = BTreeMap::new();
            for ch in &checks {
                assert!(ch.holds(), "p={p} {t:?} h={} lhs={} rhs={}", ch.class, ch.lhs, ch.rhs);
                *per_content.entry(ch.c).or_default() += 1;
            }
            for c in 0..=3 {
                assert!(per_content.get(&c).copied().unwrap_or(0) > 0, "p={p} {t:?}: no class of content {c}");
            }
        }
    }
}

#[test]
fn crident_examples() {
    let p = 5;
    let split = standard_fmax(p, SplittingType::Split);
    let id = LatticeClass::identity(p);
    let ch = verify_crident(&id, &split, PConvention::Zero).unwrap();
    assert_eq!(ch.rhs, ZetaPoly::from_ints(0, &[1, 2]));
    assert!(ch.holds());
    // (1 + qz)(1 - z)^2 (1 + 2z)
    assert_eq!(ch.numerator, five_case_table(FactorType::L1L2L3, 0, 0, p));

    // cube type: both sides vanish
    let mut found = false;
    for h in integral_classes(p, 4) {
        if !is_ring(&h, &split) {
            continue;
        }
        let ch = verify_crident(&h, &split, PConvention::Zero).unwrap();
        if ch.factor_type == FactorType::Lcube {
            assert!(ch.lhs.is_zero() && ch.rhs.is_zero());
            found = true;
        }
    }
    assert!(found);
}

#[test]
fn extended_convention_breaks_exact_division_at_content_zero() {
    for p in [5u64, 7] {
        for (_, f) in fmaxes(p) {
            let id = LatticeClass::identity(p);
            assert!(matches!(
                verify_crident(&id, &f, PConvention::Extended),
                Err(g2kit::Error::InexactDivision(_))
            ));
            // agreement once no translate has content below -1
            for h in integral_classes(p, 4) {
                if is_ring(&h, &f) && content(&h, &f) >= 1 {
                    assert_eq!(m_h(&h, &f, PConvention::Extended), m_h(&h, &f, PConvention::Zero));
                }
            }
        }
    }
}

#[test]
fn five_case_table_for_content_at_least_two() {
    for p in [5u64, 7] {
        let mut seen = std::collections::BTreeSet::new();
        for (_, f) in fmaxes(p) {
            let primitive: Vec<_> = subring_enum(&f, p, 4).unwrap().into_iter().filter(|r| r.content == 0).collect();
            for (h, c) in primitive.iter().flat_map(|r| [(r.class.scale_p(2), 2), (r.class.scale_p(3), 3)]) {
                assert_eq!(content(&h, &f), c);
                let v = h.val_det();
                let t = factor_type_mod_p(&primitive_form_mod_p(&h, &f), p).unwrap();
                assert_eq!(m_h(&h, &f, PConvention::Zero), m_h_table(t, v, c, p), "p={p} h={h} {t:?}");
                assert_eq!(crident_numerator(&h, &f, PConvention::Zero).unwrap(), five_case_table(t, v, c, p));
                seen.insert(t);
            }
        }
        assert_eq!(seen.len(), 5, "p={p}: factor types seen {seen:?}");
    }
}

#[test]
fn five_case_table_expanded_forms() {
    let q = 5i64;
    let cases = [
        (FactorType::Irred, vec![1, q, 0, -1, -q]),
        (FactorType::LQ, vec![1, q, -1, -q]),
        (FactorType::L1L2L3, vec![1, q, -3, 2 - 3 * q, 2 * q]),
        (FactorType::L1sqL2, vec![1, q - 1, -(q + 1), -(q - 1), q]),
    ];
    for (t, co) in cases {
        assert_eq!(five_case_table(t, 5, 2, q as u64), ZetaPoly::from_ints(3, &co));
    }
    assert!(five_case_table(FactorType::Lcube, 5, 2, 5).is_zero());
}

#[test]
fn p_h_recomputation() {
    for p in [5u64, 7] {
        for (_, f) in fmaxes(p) {
            for r in subring_enum(&f, p, 4).unwrap() {
                let t = CosetTerm::new(&r.class, &f, PConvention::Zero);
                assert_eq!(t.poly, p_poly(r.val_det, r.content));
                assert_eq!(p_h(&r.class, &f).unwrap(), t.poly);
                let mut want = ZetaPoly::zero();
                for k in 0..=r.content {
                    want = &want + &ZetaPoly::z_pow(r.val_det - r.content + k);
                }
                assert_eq!(t.poly.div_exact(&ZetaPoly::from_ints(0, &[1, -1])).unwrap(), want);
            }
        }
    }
    let f = standard_fmax(5, SplittingType::Inert);
    let h = LatticeClass::from_ints(5, [[5, 0], [0, 1]]).unwrap();
    assert!(matches!(p_h(&h, &f), Err(g2kit::Error::NotARing(_))));
}

#[test]
fn hecke_translates() {
    let p = 5;
    let id = LatticeClass::identity(p);
    let tp = hecke_translate(&id, Hecke::Tp);
    assert_eq!(tp.len(), 6);
    assert!(tp.iter().all(|(y, m)| *m == 1 && y.val_det() == 1 && y.is_integral()));
    let cp = hecke_translate(&id, Hecke::CenterP);
    assert_eq!(cp[0].0.val_det(), 2);
    // T(p^-1) of [p] contains the identity once per index-p sublattice it sits in
    let back = hecke_translate(&id.scale_p(1), Hecke::TpInv);
    assert_eq!(back.len(), 6);
    assert!(back.iter().all(|(y, _)| y.val_det() == 1));
    let comp: usize = tp
        .iter()
        .flat_map(|(y, _)| hecke_translate(y, Hecke::TpInv))
        .filter(|(y, _)| *y == id)
        .count();
    assert_eq!(comp, 6);
}

#[test]
fn exp_sum_matches_closed_form() {
    let p = 5;
    for (t, f0) in fmaxes(p) {
        for r in 0..=2u32 {
            let mut forms = vec![f0];
            if let Some(g) = root_translate(&f0, p, r) {
                forms.push(g);
            }
            for f in forms {
                for k in 0..=2u32 {
                    let d = exp_sum_dchi(&f, p, k, r).unwrap();
                    assert!(d.error() < 1e-6, "{t:?} f={f} k={k} r={r}: {:?}", d);
                }
            }
        }
    }
    let split = standard_fmax(p, SplittingType::Split);
    assert_eq!(dchi_closed_form(&split, p, 1, 0).unwrap(), 2);
    assert!(root_translate(&standard_fmax(p, SplittingType::Inert), p, 1).is_none());
}

#[test]
fn exp_sum_r_positive_nontrivial() {
    let p = 5;
    let f = root_translate(&standard_fmax(p, SplittingType::Partial), p, 2).unwrap();
    assert_eq!(f.0[3].rem_euclid(25), 0);
    assert_eq!(dchi_closed_form(&f, p, 1, 2).unwrap(), -1);
    let d = exp_sum_dchi(&f, p, 1, 2).unwrap();
    assert!((d.normalized_re + 1.0).abs() < 1e-9);
}

#[test]
fn local_dirichlet_counts() {
    for p in [5u64, 7] {
        for (t, f) in fmaxes(p) {
            let rows = local_dirichlet(&f, p, 3, |_| rat(1)).unwrap();
            let rings = subring_enum(&f, p, 3).unwrap();
            for v in 0..=3 {
                let n_rows = rows.iter().filter(|r| r.lambda_val == 0 && r.val_det == v).count();
                let n_rings = rings.iter().filter(|r| r.val_det == v).count();
                assert_eq!(n_rows, n_rings);
            }
            let at_p = rows.iter().filter(|r| r.z_exp == 1 && r.lambda_val == 0).count();
            let want = match t {
                SplittingType::Split => 3,
                SplittingType::Partial => 1,
                SplittingType::Inert => 0,
            };
            assert_eq!(at_p, want);
            let zero = local_dirichlet(&f, p, 0, |_| rat(7)).unwrap();
            assert_eq!(zero.len(), 1);
            assert_eq!(zero[0].coeff, rat(7));
        }
    }
}

#[test]
fn local_rows_regroup_to_p_h_over_one_minus_z() {
    for p in [5u64, 7] {
        for (_, f) in fmaxes(p) {
            let max = 5;
            let rows = local_dirichlet(&f, p, max, |_| rat(1)).unwrap();
            let grouped = regroup_by_h(&rows);
            for r in subring_enum(&f, p, max).unwrap() {
                let h = r.class;
                let want = p_h(&h, &f).unwrap().div_exact(&ZetaPoly::from_ints(0, &[1, -1])).unwrap();
                assert_eq!(grouped[&h], want, "h = {h}");
            }
        }
    }
}

#[test]
fn global_rows_assemble_multiplicatively() {
    let f5 = standard_fmax(5, SplittingType::Split);
    let f7 = standard_fmax(7, SplittingType::Split);
    let data = [(5, SplittingType::Split, f5), (7, SplittingType::Split, f7)];
    let one = dirichlet_global_rows(&data, 1, |_, _| rat(1)).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!((one[0].index, one[0].n), (1, 1));

    let five = dirichlet_global_rows(&data[..1], 5, |_, _| rat(1)).unwrap();
    assert_eq!(five.iter().filter(|r| r.index == 5 && r.n == 1).count(), 3);
    assert_eq!(five.iter().filter(|r| r.index == 1 && r.n == 5).count(), 1);
    assert_eq!(five.len(), 5);

    let bound = 35;
    let both = dirichlet_global_rows(&data, bound, |_, _| rat(1)).unwrap();
    let r5 = dirichlet_global_rows(&data[..1], bound, |_, _| rat(1)).unwrap();
    let r7 = dirichlet_global_rows(&data[1..], bound, |_, _| rat(1)).unwrap();
    let mut prod = 0;
    for a in &r5 {
        for b in &r7 {
            if a.index * a.n * b.index * b.n <= bound {
                prod += 1;
                assert!(both.iter().any(|g| g.index == a.index * b.index && g.n == a.n * b.n));
            }
        }
    }
    assert_eq!(both.len(), prod);
    assert!(dirichlet_global_rows(&[data[0].clone(), data[0].clone()], 5, |_, _| rat(1)).is_err());
}
