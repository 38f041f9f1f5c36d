//! Seeded verification suites. Each numbered criterion returns a [`SuiteReport`] listing the
//! cases run and any failures with the values compared.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra_core::{frac, from_rat, gint, rat, Matrix, Rational};
use crate::cubic_rings::*;
use crate::g2_lie::*;
use crate::g2_lie::r as g2r;
use crate::heis_so7::*;
use crate::local_zeta::*;
use crate::octonion::*;
use crate::whittaker::*;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport { suite: suite.into(), cases: 0, failures: Vec::new(), wall_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, case: impl FnOnce() -> String, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure { case: case(), detail: detail() });
        }
    }

    /// Record a numeric comparison `value <= tol`.
    pub fn within(&mut self, case: impl FnOnce() -> String, value: f64, tol: f64) {
        self.check(case, value <= tol, || format!("{value:e} > {tol:e}"));
    }

    pub fn error(&mut self, case: impl Into<String>, e: impl std::fmt::Display) {
        self.cases += 1;
        self.failures.push(Failure { case: case.into(), detail: e.to_string() });
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub expsum: f64,
    pub bessel: f64,
    pub ode: f64,
    pub collapse: f64,
    pub phase: f64,
    pub mellin: f64,
    pub multinomial: f64,
    pub gamma: f64,
    pub ode_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            expsum: 1e-6,
            bessel: 1e-8,
            ode: 1e-5,
            collapse: 1e-6,
            phase: 1e-10,
            mellin: 1e-6,
            multinomial: 1e-8,
            gamma: 1e-8,
            ode_step: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckConfig {
    pub seed: u64,
    pub primes: Vec<u64>,
    pub types: Vec<SplittingType>,
    pub max_content: i64,
    pub max_val: i64,
    pub tol: Tolerances,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            primes: vec![5, 7],
            types: SplittingType::ALL.to_vec(),
            max_content: 3,
            max_val: 6,
            tol: Tolerances::default(),
        }
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "Lie structure"),
    (2, "Cartan data"),
    (3, "sl2-triples and p-basis"),
    (4, "Z/3 model vs wedge model"),
    (5, "SO(7) embeddings"),
    (6, "cubic rings"),
    (7, "exponential sums"),
    (8, "CRident"),
    (9, "Dirichlet assembly"),
    (10, "Whittaker and archimedean"),
];

pub fn criterion(n: u8, cfg: &CheckConfig) -> SuiteReport {
    match n {
        1 => lie_structure(),
        2 => cartan_data(),
        3 => triples_and_p_basis(),
        4 => z3_model(),
        5 => so7_embeddings(cfg),
        6 => cubic_rings_suite(cfg),
        7 => exp_sums(cfg),
        8 => crident(cfg),
        9 => dirichlet(cfg),
        10 => whittaker_suite(cfg),
        _ => {
            let mut r = SuiteReport::new(format!("criterion {n}"));
            r.error("criterion", format!("no criterion {n}"));
            r
        }
    }
}

pub const SUITES: [&str; 7] = ["lie", "octonion", "so7", "cubic", "zeta", "whittaker", "all"];

pub fn suite(name: &str, cfg: &CheckConfig) -> Option<SuiteReport> {
    let crits: &[u8] = match name {
        "lie" => &[1, 2, 3, 4],
        "octonion" => &[],
        "so7" => &[5],
        "cubic" => &[6],
        "zeta" => &[7, 8, 9],
        "whittaker" => &[10],
        "all" => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        _ => return None,
    };
    let mut r = SuiteReport::new(name);
    if name == "octonion" || name == "all" {
        r.merge(octonion_props(cfg));
    }
    for &c in crits {
        r.merge(criterion(c, cfg));
    }
    Some(r)
}

fn rng(cfg: &CheckConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

fn rand_q(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
}

// ---------------------------------------------------------------- octonions

pub fn rand_octonion(rng: &mut ChaCha8Rng) -> Octonion {
    Octonion::from_coords(std::array::from_fn(|_| rand_q(rng)))
}

pub fn octonion_props(cfg: &CheckConfig) -> SuiteReport {
    let mut r = SuiteReport::new("octonion");
    let mut g = rng(cfg, 1);
    let one = Octonion::one();
    for i in 0..200 {
        let (x, y, z) = (rand_octonion(&mut g), rand_octonion(&mut g), rand_octonion(&mut g));
        let xy = oct_mul(&x, &y);
        r.check(|| format!("norm multiplicative #{i}"), oct_norm(&xy) == oct_norm(&x) * oct_norm(&y), || format!("x={x} y={y}"));
        r.check(
            || format!("x x* = N(x) #{i}"),
            oct_mul(&x, &oct_conj(&x)) == Octonion::scalar(oct_norm(&x)),
            || format!("x={x}"),
        );
        let sq = &x.scale(&oct_trace(&x)) - &Octonion::scalar(oct_norm(&x));
        r.check(|| format!("x^2 = tr(x) x - N(x) #{i}"), oct_mul(&x, &x) == sq, || format!("x={x}"));
        r.check(|| format!("conj involution #{i}"), oct_conj(&oct_conj(&x)) == x, || format!("x={x}"));
        let pol = oct_norm(&(&x + &y)) - oct_norm(&x) - oct_norm(&y);
        r.check(|| format!("bilinear polarizes N #{i}"), bilinear(&x, &y) == pol, || format!("x={x} y={y}"));
        r.check(
            || format!("tr(xy) = tr(yx) #{i}"),
            oct_trace(&xy) == oct_trace(&oct_mul(&y, &x)),
            || format!("x={x} y={y}"),
        );
        r.check(
            || format!("trace form associative #{i}"),
            trilinear(&x, &y, &z) == oct_trace(&oct_mul(&x, &oct_mul(&y, &z))),
            || format!("x={x} y={y} z={z}"),
        );
        let a = associator(&x, &y, &z);
        r.check(
            || format!("associator alternates #{i}"),
            associator(&y, &x, &z) == -&a && associator(&x, &z, &y) == -&a && associator(&x, &x, &y) == Octonion::zero(),
            || format!("x={x} y={y} z={z}"),
        );
        r.check(|| format!("unit #{i}"), oct_mul(&one, &x) == x && oct_mul(&x, &one) == x, || format!("x={x}"));
        r.check(
            || format!("text round trip #{i}"),
            x.to_string().parse::<Octonion>().ok() == Some(x.clone()),
            || format!("x={x}"),
        );
    }
    let w = nonassociative_witness();
    r.check(|| "nonassociative witness".into(), associator(&w[0], &w[1], &w[2]) != Octonion::zero(), || "associator vanished".into());
    r
}

/// `(e1, e2, e3)` as octonions: `(e1 e2) e3 != e1 (e2 e3)`.
pub fn nonassociative_witness() -> [Octonion; 3] {
    [0, 1, 2].map(|i| V7Element::basis(i).to_octonion())
}

// ---------------------------------------------------------------- g2

fn g(i: usize) -> G2Element {
    G2Element::basis(i)
}

pub fn lie_structure() -> SuiteReport {
    let mut r = SuiteReport::new("1: Lie structure");
    let p = proj_v7_matrix();
    r.check(|| "proj 21 -> 7 has rank 7".into(), p.rank() == 7, || format!("rank {}", p.rank()));
    let b = basis_matrix();
    r.check(|| "14 basis elements independent".into(), b.rank() == 14, || format!("rank {}", b.rank()));
    r.check(|| "basis lies in the kernel".into(), (&p * &b).is_zero(), || "nonzero image".into());
    r.check(|| "kernel dimension 14".into(), WEDGE_DIM - p.rank() == 14, || "".into());
    let c = |n: i64| gint(n, 0);
    for j in 1..=3i64 {
        let (jm, jj) = (m3(j - 1), m3(j));
        r.check(
            || format!("[delta_{{j-1}}, v_j] = 3E_{{j,j-1}}, j={j}"),
            bracket(&delta(j - 1), &v(j)) == e_kj(jj, jm).scale(&c(3)),
            || "".into(),
        );
        r.check(
            || format!("[v_{{j-1}}, v_j] = 2 delta_{{j+1}}, j={j}"),
            bracket(&v(j - 1), &v(j)) == delta(j + 1).scale(&c(2)),
            || "".into(),
        );
        r.check(
            || format!("[delta_{{j-1}}, delta_j] = 2 v_{{j+1}}, j={j}"),
            bracket(&delta(j - 1), &delta(j)) == v(j + 1).scale(&c(2)),
            || "".into(),
        );
        let mut d = [rat(-1), rat(-1), rat(-1)];
        d[jj - 1] = rat(2);
        r.check(|| format!("[delta_j, v_j] = 3E_jj - 1, j={j}"), bracket(&delta(j), &v(j)) == diag_sl3(d), || "".into());
        r.check(
            || format!("[v_{{j-1}}, delta_j] = -3E_{{j-1,j}}, j={j}"),
            bracket(&v(j - 1), &delta(j)) == e_kj(jm, jj).scale(&c(-3)),
            || "".into(),
        );
    }
    for i in 0..DIM {
        for j in 0..DIM {
            let ok = bracket_via_wedge(&g(i), &g(j)).map(|w| w == bracket(&g(i), &g(j))).unwrap_or(false);
            r.check(|| format!("table vs wedge bracket ({i},{j})"), ok, || "".into());
        }
    }
    let bad: Vec<(usize, usize, usize)> = (0..DIM)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in 0..DIM {
                for k in 0..DIM {
                    let (a, b, cc) = (g(i), g(j), g(k));
                    let s = &(&bracket(&a, &bracket(&b, &cc)) + &bracket(&b, &bracket(&cc, &a)))
                        + &bracket(&cc, &bracket(&a, &b));
                    if !s.is_zero() {
                        out.push((i, j, k));
                    }
                }
            }
            out
        })
        .collect();
    r.cases += DIM * DIM * DIM;
    for (i, j, k) in bad {
        r.failures.push(Failure { case: format!("Jacobi ({i},{j},{k})"), detail: "nonzero".into() });
    }
    r
}

pub fn cartan_data() -> SuiteReport {
    let mut r = SuiteReport::new("2: Cartan data");
    for i in 0..DIM {
        r.check(|| format!("theta^2 = 1 on {}", BASIS_NAMES[i]), cartan_theta(&cartan_theta(&g(i))) == g(i), || "".into());
        for j in 0..DIM {
            r.check(
                || format!("theta is an automorphism ({i},{j})"),
                cartan_theta(&bracket(&g(i), &g(j))) == bracket(&cartan_theta(&g(i)), &cartan_theta(&g(j))),
                || "".into(),
            );
        }
    }
    let gram = b_theta_gram();
    r.check(|| "B_theta symmetric".into(), gram == gram.transpose(), || "".into());
    for (k, m) in gram.leading_minors().into_iter().enumerate() {
        r.check(|| format!("leading minor {}", k + 1), m.is_positive(), || format!("{m}"));
    }
    let p = p_basis();
    let want = [(-3, frac(16, 1)), (-1, frac(16, 3)), (1, frac(16, 3)), (3, frac(16, 1))];
    for (k, w) in want {
        let got = killing_pair(&p.h_k(k).conj(), p.h_k(k));
        r.check(|| format!("<h_{k}*, h_{k}> = {w}"), got == from_rat(w.clone()), || format!("got {got:?}"));
    }
    for (i, hi) in &p.h {
        for (j, hj) in &p.h {
            let mut ok = killing_pair(hi, hj).is_zero() && killing_pair(&hi.conj(), &hj.conj()).is_zero();
            if i != j {
                ok &= killing_pair(&hi.conj(), hj).is_zero();
            }
            r.check(|| format!("Killing zeros ({i},{j})"), ok, || "".into());
        }
    }
    r
}

fn triple_ok(h: &G2Element, e: &G2Element, f: &G2Element) -> bool {
    bracket(h, e) == e.scale(&gint(2, 0)) && bracket(h, f) == f.scale(&gint(-2, 0)) && bracket(e, f) == *h
}

pub fn triples_and_p_basis() -> SuiteReport {
    let mut r = SuiteReport::new("3: sl2-triples and p-basis");
    let t = compact_triples();
    r.check(|| "(h_u, e_u, f_u) is an sl2-triple".into(), triple_ok(&t.h_u, &t.e_u, &t.f_u), || "".into());
    r.check(|| "(h_r, e_r, f_r) is an sl2-triple".into(), triple_ok(&t.h_r, &t.e_r, &t.f_r), || "".into());
    for i in 1..=3 {
        r.check(|| format!("u_{i}, r_{i} theta-fixed"), cartan_theta(&u(i)) == u(i) && cartan_theta(&g2r(i)) == g2r(i), || "".into());
        for j in 1..=3 {
            r.check(|| format!("[u_{i}, r_{j}] = 0"), bracket(&u(i), &g2r(j)).is_zero(), || "".into());
        }
        r.check(|| format!("[u_{i}, u_{{i+1}}] = u_{{i+2}}"), bracket(&u(i), &u(i + 1)) == u(i + 2), || "".into());
        r.check(|| format!("[r_{i}, r_{{i+1}}] = r_{{i+2}}"), bracket(&g2r(i), &g2r(i + 1)) == g2r(i + 2), || "".into());
    }
    let p = p_basis();
    for (k, d) in &p.d {
        let ok = cartan_theta(d) == -d
            && bracket(&t.h_u, d) == d.scale(&gint(-1, 0))
            && bracket(&t.h_r, d) == d.scale(&gint(*k, 0));
        r.check(|| format!("d_{k} eigenvalues (-1, {k})"), ok, || "".into());
    }
    for (k, h) in &p.h {
        let ok = cartan_theta(h) == -h && bracket(&t.h_u, h) == h.clone() && bracket(&t.h_r, h) == h.scale(&gint(*k, 0));
        r.check(|| format!("h_{k} eigenvalues (1, {k})"), ok, || "".into());
    }
    let z = || gint(0, 0);
    let q = |n, d| from_rat(frac(n, d));
    let h3 = iwasawa(p.h_k(3));
    r.check(
        || "Iwasawa h_3".into(),
        h3.cubic == [z(), z(), z(), z()] && h3.m_coeffs == [gint(-2, 0), gint(-2, 0), z()] && h3.k_part == -&(&t.h_u + &t.h_r),
        || format!("{h3:?}"),
    );
    let h1 = iwasawa(p.h_k(1));
    r.check(
        || "Iwasawa h_1".into(),
        h1.cubic == [gint(0, 2), gint(2, 0), gint(0, 2), gint(2, 0)]
            && h1.m_coeffs.iter().all(|x| x.is_zero())
            && h1.k_part == t.f_r.scale(&q(-4, 3)),
        || format!("{h1:?}"),
    );
    let hm1 = iwasawa(p.h_k(-1));
    r.check(
        || "Iwasawa h_-1".into(),
        hm1.cubic == [z(), z(), z(), z()]
            && hm1.m_coeffs == [q(2, 3), q(-2, 3), gint(0, -4) * q(1, 3)]
            && hm1.k_part == (&t.h_u.scale(&gint(3, 0)) - &t.h_r).scale(&q(1, 3)),
        || format!("{hm1:?}"),
    );
    let hm3 = iwasawa(p.h_k(-3));
    r.check(
        || "Iwasawa h_-3".into(),
        hm3.cubic == [gint(0, 2), gint(6, 0), gint(0, -6), gint(-2, 0)]
            && hm3.m_coeffs.iter().all(|x| x.is_zero())
            && hm3.k_part == t.e_u.scale(&gint(-4, 0)),
        || format!("{hm3:?}"),
    );
    for (k, h) in &p.h {
        let parts = iwasawa(h);
        let back = &(&(&n_element(parts.cubic.clone(), parts.mu.clone()) + &gl2_ident(parts.m_matrix.clone()))
            + &parts.k_part)
            - h;
        r.check(|| format!("Iwasawa parts of h_{k} sum back"), back.is_zero(), || "".into());
    }
    r
}

pub fn z3_model() -> SuiteReport {
    let mut r = SuiteReport::new("4: Z/3 model vs wedge model");
    for i in 0..DIM {
        for j in 0..DIM {
            let zb = z3_bracket(&Z3Element::basis(i), &Z3Element::basis(j));
            let ok = model_iso(&zb).map(|x| x == bracket(&g(i), &g(j))).unwrap_or(false);
            r.check(|| format!("structure constant ({}, {})", BASIS_NAMES[i], BASIS_NAMES[j]), ok, || "".into());
        }
    }
    // [gamma, x] = 3 x (x) gamma - (x, gamma) 1 on dual/vector basis pairs
    for a in 0..3 {
        for b in 0..3 {
            let gamma = Z3Element::basis(D1 + a);
            let x = Z3Element::basis(V1 + b);
            let got = z3_bracket(&gamma, &x);
            let mut ok = got.v.iter().all(|t| t.is_zero()) && got.dual.iter().all(|t| t.is_zero());
            for i in 0..3 {
                for j in 0..3 {
                    let mut want = if i == b && j == a { rat(3) } else { rat(0) };
                    if i == j && a == b {
                        want -= rat(1);
                    }
                    ok &= got.sl3[i][j] == want;
                }
            }
            r.check(|| format!("[delta_{}, v_{}] = 3 x (x) gamma - (x, gamma) 1", a + 1, b + 1), ok, || format!("{got:?}"));
        }
    }
    r
}

// ---------------------------------------------------------------- SO(7)

fn rand_gl2(rng: &mut ChaCha8Rng) -> Mat2<Rational> {
    loop {
        let g = [[rand_q(rng), rand_q(rng)], [rand_q(rng), rand_q(rng)]];
        if !det2(&g).is_zero() {
            return g;
        }
    }
}

fn rand_w(rng: &mut ChaCha8Rng) -> WVector {
    WVector::new(rand_q(rng), rand_q(rng), rand_q(rng), rand_q(rng))
}

pub fn so7_embeddings(cfg: &CheckConfig) -> SuiteReport {
    let mut r = SuiteReport::new("5: SO(7) embeddings");
    let mut rng = rng(cfg, 5);
    for i in 0..200 {
        let gm = rand_gl2(&mut rng);
        let ok = m_embed(&gm).map(|m| preserves_gram(&m)).unwrap_or(false);
        r.check(|| format!("m_embed preserves Gram #{i}"), ok, || format!("{gm:?}"));
        let w = rand_w(&mut rng);
        let mu = rand_q(&mut rng);
        let n = n_embed(&w, &mu);
        r.check(
            || format!("n_embed preserves Gram #{i}"),
            preserves_gram(&n) && heisenberg_group_condition(&n),
            || format!("w={w:?} mu={mu}"),
        );
    }
    for i in 0..50 {
        let w = rand_w(&mut rng);
        let mu = rand_q(&mut rng);
        let ok = g2_in_ordered_basis(&w.to_g2(&mu)).map(|m| m == n_lie(&w, &mu)).unwrap_or(false);
        r.check(|| format!("n_lie equals the g2 action on V7 #{i}"), ok, || format!("w={w:?} mu={mu}"));
    }
    for i in 0..50 {
        let gm = rand_gl2(&mut rng);
        let w = rand_w(&mut rng);
        let mu = rand_q(&mut rng);
        let ok = (|| -> crate::Result<bool> {
            let m = m_embed(&gm)?;
            let mi = m.inverse().ok_or(crate::Error::Singular)?;
            let lhs = &(&m * &n_embed(&w, &mu)) * &mi;
            Ok(lhs == n_embed(&gl2_act_cubic(&gm, &w)?, &(det2(&gm) * &mu)))
        })()
        .unwrap_or(false);
        r.check(|| format!("m n m^-1 is the cubic action #{i}"), ok, || format!("g={gm:?}"));
    }
    r
}

// ---------------------------------------------------------------- cubic rings

/// Expected `{content - c: multiplicity}` over the `p + 1` index-`p` sublattices.
pub fn content_lemma_table(t: FactorType, q: i64) -> BTreeMap<i64, i64> {
    let pairs: Vec<(i64, i64)> = match t {
        FactorType::Irred => vec![(-1, q + 1)],
        FactorType::LQ => vec![(0, 1), (-1, q)],
        FactorType::L1L2L3 => vec![(0, 3), (-1, q - 2)],
        FactorType::L1sqL2 => vec![(0, 1), (1, 1), (-1, q - 1)],
        FactorType::Lcube => vec![(2, 1), (-1, q)],
    };
    pairs.into_iter().collect()
}

pub fn cubic_rings_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut r = SuiteReport::new("6: cubic rings");
    let mut rng = rng(cfg, 6);
    let basis = CubicRingTable::basis();
    for i in 0..100 {
        let f = BinaryCubic::new(
            rng.gen_range(-20..=20),
            rng.gen_range(-20..=20),
            rng.gen_range(-20..=20),
            rng.gen_range(-20..=20),
        );
        let t = df_ring(&f);
        let mut ok = true;
        for x in &basis {
            for y in &basis {
                ok &= t.mul(x, y) == t.mul(y, x);
                for z in &basis {
                    ok &= t.mul(&t.mul(x, y), z) == t.mul(x, &t.mul(y, z));
                }
            }
        }
        r.check(|| format!("Delone-Faddeev ring #{i} commutative associative"), ok, || format!("f={f}"));
    }
    for &p in &cfg.primes {
        let mut seen: BTreeSet<(FactorType, i64)> = BTreeSet::new();
        for t in SplittingType::ALL {
            let f = standard_fmax(p, t);
            for h0 in integral_classes(p, 3) {
                if !is_ring(&h0, &f) {
                    continue;
                }
                let c0 = content(&h0, &f);
                let Ok(ft) = factor_type_mod_p(&primitive_form_mod_p(&h0, &f), p) else {
                    r.error(format!("p={p} h={h0}"), "factor type");
                    continue;
                };
                for k in 0..=3 {
                    let c = c0 + k;
                    if c > 3 {
                        continue;
                    }
                    let h = h0.scale_p(k);
                    let mut got: BTreeMap<i64, i64> = BTreeMap::new();
                    for y in h.sublattices_index_p() {
                        *got.entry(content(&y, &f) - c).or_default() += 1;
                    }
                    let want = content_lemma_table(ft, p as i64);
                    r.check(|| format!("content lemma p={p} {t:?} h={h}"), got == want, || format!("{got:?} vs {want:?}"));
                    seen.insert((ft, c));
                }
            }
        }
        for ft in FactorType::ALL {
            for c in 0..=3 {
                r.check(|| format!("content lemma coverage p={p} {ft:?} c={c}"), seen.contains(&(ft, c)), || "no example".into());
            }
        }
    }
    let p = 5;
    for t in SplittingType::ALL {
        let f = standard_fmax(p, t);
        for h in integral_classes(p, 4) {
            if !is_ring(&h, &f) {
                continue;
            }
            let ft = factor_type_mod_p(&primitive_form_mod_p(&h, &f), p);
            let ok = ft.map(|ft| (h.mat_val() == content(&h, &f)) == (ft != FactorType::Lcube)).unwrap_or(false);
            r.check(|| format!("val = content iff not l^3, {t:?} h={h}"), ok, || "".into());
        }
    }
    r
}

// ---------------------------------------------------------------- local zeta

pub fn exp_sums(cfg: &CheckConfig) -> SuiteReport {
    let mut r = SuiteReport::new("7: exponential sums");
    let p = 5;
    for &t in &cfg.types {
        let f0 = standard_fmax(p, t);
        for rr in 0..=2u32 {
            let f = root_translate(&f0, p, rr).unwrap_or(f0);
            for k in 0..=2u32 {
                let case = || format!("D_chi {t:?} f={f} k={k} r={rr}");
                match exp_sum_dchi(&f, p, k, rr) {
                    Ok(d) => {
                        r.within(case, d.error(), cfg.tol.expsum);
                        if k == 2 {
                            let v = d.normalized().norm();
                            r.within(|| format!("D_chi vanishes {t:?} r={rr}"), v, cfg.tol.expsum);
                        }
                    }
                    Err(e) => r.error(case(), e),
                }
            }
        }
    }
    r
}

pub fn crident(cfg: &CheckConfig) -> SuiteReport {
    let mut r = SuiteReport::new("8: CRident");
    for &p in &cfg.primes {
        for &t in &cfg.types {
            let f = standard_fmax(p, t);
            match crident_sweep(&f, p, cfg.max_content, cfg.max_val, PConvention::Zero) {
                Ok(checks) => {
                    let mut contents = BTreeSet::new();
                    for ch in &checks {
                        contents.insert(ch.c);
                        r.check(
                            || format!("CRident p={p} {t:?} h={}", ch.class),
                            ch.holds(),
                            || format!("lhs={} rhs={}", ch.lhs, ch.rhs),
                        );
                    }
                    for c in 0..=1 {
                        r.check(|| format!("boundary content {c} present p={p} {t:?}"), contents.contains(&c), || "".into());
                    }
                }
                Err(e) => r.error(format!("CRident sweep p={p} {t:?}"), e),
            }
            // five-case table at c in {2, 3} from scaled primitive rings
            let Ok(rings) = subring_enum(&f, p, 4) else {
                r.error(format!("subring_enum p={p} {t:?}"), "failed");
                continue;
            };
            for ring in rings.iter().filter(|x| x.content == 0) {
                for c in 2..=3 {
                    let h = ring.class.scale_p(c);
                    let Ok(ft) = factor_type_mod_p(&primitive_form_mod_p(&h, &f), p) else { continue };
                    let ok = crident_numerator(&h, &f, PConvention::Zero)
                        .map(|n| n == five_case_table(ft, h.val_det(), c, p))
                        .unwrap_or(false);
                    r.check(|| format!("five-case table p={p} {ft:?} h={h}"), ok, || "".into());
                }
            }
        }
    }
    r
}

pub fn dirichlet(cfg: &CheckConfig) -> SuiteReport {
    let mut r = SuiteReport::new("9: Dirichlet assembly");
    for &p in &cfg.primes {
        for &t in &cfg.types {
            let f = standard_fmax(p, t);
            let rows = match local_dirichlet(&f, p, 3, |_| rat(1)) {
                Ok(rows) => rows,
                Err(e) => {
                    r.error(format!("local rows p={p} {t:?}"), e);
                    continue;
                }
            };
            for k in 0..=3u32 {
                let n_rows = rows.iter().filter(|x| x.lambda_val == 0 && x.val_det == k as i64).count();
                let brute = brute_force_subring_count(&f, p as i64, k);
                r.check(|| format!("rows of index p^{k} vs brute force, p={p} {t:?}"), n_rows == brute, || format!("{n_rows} vs {brute}"));
            }
            if t == SplittingType::Split {
                let n = rows.iter().filter(|x| x.lambda_val == 0 && x.val_det == 1).count();
                r.check(|| format!("3 subrings of index p={p} when split"), n == 3, || format!("{n}"));
            }
        }
    }
    if cfg.primes.len() >= 2 {
        let (p1, p2) = (cfg.primes[0], cfg.primes[1]);
        let data = [
            (p1, SplittingType::Split, standard_fmax(p1, SplittingType::Split)),
            (p2, SplittingType::Inert, standard_fmax(p2, SplittingType::Inert)),
        ];
        let bound = p1 * p2 * p1;
        let res = (|| -> crate::Result<bool> {
            let both = dirichlet_global_rows(&data, bound, |_, _| rat(1))?;
            let a = dirichlet_global_rows(&data[..1], bound, |_, _| rat(1))?;
            let b = dirichlet_global_rows(&data[1..], bound, |_, _| rat(1))?;
            let mut prod = 0;
            let mut ok = true;
            for x in &a {
                for y in &b {
                    if x.index * x.n * y.index * y.n <= bound {
                        prod += 1;
                        ok &= both.iter().any(|g| g.index == x.index * y.index && g.n == x.n * y.n);
                    }
                }
            }
            Ok(ok && prod == both.len())
        })();
        r.check(|| format!("multiplicative assembly over {p1}, {p2}"), res.unwrap_or(false), || "".into());
    }
    r
}

// ---------------------------------------------------------------- Whittaker

pub fn whittaker_w_choices() -> [[f64; 4]; 3] {
    let s = 2.0 * PI / 3.0;
    [[0.0, s, -s, 0.0], [1.0, 0.0, -1.0, 0.0], [0.5, -0.25, -1.0, 0.3]]
}

pub fn whittaker_suite(cfg: &CheckConfig) -> SuiteReport {
    let tol = cfg.tol;
    let mut r = SuiteReport::new("10: Whittaker and archimedean");
    for nu in [0.0, 1.0, 2.0, 3.0, 0.5, 2.5] {
        for i in 0..12 {
            let x = 0.3 * (20.0f64 / 0.3).powf(i as f64 / 11.0);
            match bessel_identity_residuals(nu, x) {
                Ok(res) => r.within(|| format!("Bessel identities nu={nu} x={x:.4}"), res.iter().fold(0.0, |m: f64, &v| m.max(v)), tol.bessel),
                Err(e) => r.error(format!("Bessel nu={nu} x={x}"), e),
            }
        }
    }
    let mut grid = Vec::new();
    for n in 1..=3u32 {
        for (wi, w) in whittaker_w_choices().into_iter().enumerate() {
            for x in [-0.4, 0.1, 0.6] {
                for y in [0.8, 1.3, 2.0] {
                    for s in [0.4, 0.7, 1.1] {
                        grid.push((n, wi, w, x, y, s));
                    }
                }
            }
        }
    }
    let results: Vec<_> = grid
        .par_iter()
        .map(|&(n, wi, w, x, y, s)| {
            let p = WhittakerParams::new(n, w, x, y, s)?;
            Ok::<_, crate::Error>((n, wi, x, y, s, ode_residuals(&p, tol.ode_step)?.max()))
        })
        .collect();
    for res in results {
        match res {
            Ok((n, wi, x, y, s, m)) => r.within(|| format!("Schmid system n={n} w#{wi} ({x},{y},{s})"), m, tol.ode),
            Err(e) => r.error("Schmid system", e),
        }
    }
    for n in 1..=3u32 {
        for (wi, w) in whittaker_w_choices().into_iter().enumerate() {
            let res = WhittakerParams::new(n, w, 0.3, 0.9, 0.8).and_then(|p| {
                Ok((profile_collapse(&p, &[0.3, 1.7, 4.0])?, phase_recursion_error(&p)?, gk_ode_residuals(&p, tol.ode_step)?.max()))
            });
            match res {
                Ok((c, ph, gk)) => {
                    r.within(|| format!("K_v profile collapse n={n} w#{wi}"), c, tol.collapse);
                    r.within(|| format!("phase recursion n={n} w#{wi}"), ph, tol.phase);
                    r.within(|| format!("G_k system n={n} w#{wi}"), gk, tol.ode);
                }
                Err(e) => r.error(format!("profile n={n} w#{wi}"), e),
            }
        }
    }
    let mellin: Vec<_> = [2.5, 3.5, 5.0]
        .iter()
        .flat_map(|&s| [(0.0, 0.0), (0.5, 0.5), (1.0, 0.3)].map(|(mu, nu)| (s, mu, nu)))
        .chain([(2.0, 0.0, 0.0)])
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(s, mu, nu)| (s, mu, nu, mellin_kk(s, mu, nu)))
        .collect();
    for (s, mu, nu, m) in mellin {
        match m {
            Ok(m) => r.within(|| format!("Mellin-Barnes (s,mu,nu)=({s},{mu},{nu})"), m.rel_error(), tol.mellin),
            Err(e) => r.error(format!("Mellin ({s},{mu},{nu})"), e),
        }
    }
    r.within(|| "Mellin gamma side at (2,0,0) is 1/2".into(), (mellin_gamma_side(2.0, 0.0, 0.0) - 0.5).abs(), 1e-14);
    for order in 0..=5u32 {
        for x in [0.5, 1.5, 4.0] {
            match multinomial_bessel_check(order, 0, x) {
                Ok(m) => r.within(|| format!("multinomial identity order {order} x={x}"), m.rel_error(), tol.multinomial),
                Err(e) => r.error(format!("multinomial {order}"), e),
            }
        }
    }
    for n in 1..=3u32 {
        for s in [4.0, 6.0, 7.5] {
            match arch_gamma_ratio(s, n) {
                Ok(g) => r.within(|| format!("gamma-ratio forms (s,n)=({s},{n})"), g.rel_error(), tol.gamma),
                Err(e) => r.error(format!("gamma ratio ({s},{n})"), e),
            }
        }
    }
    r
}

/// Matrix rank of the exact `21 -> 7` projection, exposed for quick reporting.
pub fn projection_rank() -> usize {
    let m: Matrix<Rational> = proj_v7_matrix();
    m.rank()
}
