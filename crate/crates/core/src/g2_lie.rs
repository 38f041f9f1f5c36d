//! The Lie algebra `g2` inside `wedge^2 V7`.
//!
//! Basis order: `E21, E31, E32, E12, E13, E23, eps1, eps2, v1, v2, v3, d1, d2, d3`
//! with `E_kj = e_j* ^ e_k`, `eps1 = E22 - E33`, `eps2 = E11 - E22`,
//! `v_j = u0 ^ e_j + e_{j+1}* ^ e_{j+2}*`, `d_j = u0 ^ e_j* + e_{j+1} ^ e_{j+2}`.
//! Index arithmetic on `j` wraps inside `{1, 2, 3}`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::LazyLock;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra_core::{frac, from_rat, gint, i_unit, rat, GaussianRational, Matrix, Rational};
use crate::error::{Error, Result};
use crate::octonion::{oct_mul, v7_gram, V7Element};

pub const DIM: usize = 14;
pub const WEDGE_DIM: usize = 21;

pub const E21: usize = 0;
pub const E31: usize = 1;
pub const E32: usize = 2;
pub const E12: usize = 3;
pub const E13: usize = 4;
pub const E23: usize = 5;
pub const EPS1: usize = 6;
pub const EPS2: usize = 7;
pub const V1: usize = 8;
pub const D1: usize = 11;

pub const BASIS_NAMES: [&str; DIM] =
    ["E21", "E31", "E32", "E12", "E13", "E23", "eps1", "eps2", "v1", "v2", "v3", "d1", "d2", "d3"];

/// Wraps `j` into `{1, 2, 3}`.
pub fn m3(j: i64) -> usize {
    ((j - 1).rem_euclid(3) + 1) as usize
}

/// `(i, j)` with `i < j` for each wedge coordinate, lexicographic.
pub fn wedge_pairs() -> &'static [(usize, usize); WEDGE_DIM] {
    static PAIRS: LazyLock<[(usize, usize); WEDGE_DIM]> = LazyLock::new(|| {
        let mut out = [(0, 0); WEDGE_DIM];
        let mut k = 0;
        for i in 0..7 {
            for j in i + 1..7 {
                out[k] = (i, j);
                k += 1;
            }
        }
        out
    });
    &PAIRS
}

fn pair_index(i: usize, j: usize) -> usize {
    wedge_pairs().iter().position(|&p| p == (i, j)).expect("i < j < 7")
}

fn gz() -> GaussianRational {
    GaussianRational::zero()
}

/// Element of `wedge^2 V7` in the basis `b_i ^ b_j`, `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Wedge2(pub [GaussianRational; WEDGE_DIM]);

impl Wedge2 {
    pub fn zero() -> Self {
        Wedge2(std::array::from_fn(|_| gz()))
    }

    /// `w ^ x` for vectors given in the standard `V7` basis.
    pub fn wedge(w: &[GaussianRational; 7], x: &[GaussianRational; 7]) -> Self {
        let mut out = Self::zero();
        for (k, &(i, j)) in wedge_pairs().iter().enumerate() {
            out.0[k] = w[i].clone() * x[j].clone() - w[j].clone() * x[i].clone();
        }
        out
    }

    pub fn basis_pair(i: usize, j: usize) -> Self {
        let mut out = Self::zero();
        if i < j {
            out.0[pair_index(i, j)] = GaussianRational::one();
        } else if j < i {
            out.0[pair_index(j, i)] = -GaussianRational::one();
        }
        out
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Wedge2(self.0.clone().map(|c| c * s.clone()))
    }

    /// Antisymmetric coefficient matrix `A` with `A[i][j]` the coefficient of `b_i ^ b_j`.
    pub fn antisym(&self) -> Matrix<GaussianRational> {
        let mut a = Matrix::zeros(7, 7);
        for (k, &(i, j)) in wedge_pairs().iter().enumerate() {
            a[(i, j)] = self.0[k].clone();
            a[(j, i)] = -self.0[k].clone();
        }
        a
    }

    pub fn from_antisym(a: &Matrix<GaussianRational>) -> Self {
        Wedge2(std::array::from_fn(|k| {
            let (i, j) = wedge_pairs()[k];
            a[(i, j)].clone()
        }))
    }

    /// Matrix of the action `(w ^ x) v = (x, v) w - (w, v) x` on `V7`.
    pub fn action_matrix(&self) -> Matrix<GaussianRational> {
        &self.antisym() * &gram_c()
    }
}

impl Add for &Wedge2 {
    type Output = Wedge2;
    fn add(self, o: &Wedge2) -> Wedge2 {
        Wedge2(std::array::from_fn(|k| self.0[k].clone() + o.0[k].clone()))
    }
}

impl Sub for &Wedge2 {
    type Output = Wedge2;
    fn sub(self, o: &Wedge2) -> Wedge2 {
        Wedge2(std::array::from_fn(|k| self.0[k].clone() - o.0[k].clone()))
    }
}

fn gram_c() -> Matrix<GaussianRational> {
    let g = v7_gram();
    Matrix::from_fn(7, 7, |i, j| gint(g[i][j], 0))
}

fn std_vec(i: usize) -> [GaussianRational; 7] {
    std::array::from_fn(|k| if k == i { GaussianRational::one() } else { gz() })
}

fn to_cvec(t: &V7Element) -> [GaussianRational; 7] {
    std::array::from_fn(|k| from_rat(t.0[k].clone()))
}

pub fn wedge_action(w: &Wedge2, t: &V7Element) -> [GaussianRational; 7] {
    let out = w.action_matrix().mul_vec(&to_cvec(t));
    out.try_into().expect("length 7")
}

/// The map `wedge^2 V7 -> V7`, `w ^ x -> Im(wx)`, in the standard basis.
pub fn proj_v7(x: &Wedge2) -> [GaussianRational; 7] {
    static TABLE: LazyLock<Vec<[Rational; 7]>> = LazyLock::new(|| {
        wedge_pairs()
            .iter()
            .map(|&(i, j)| {
                let p = oct_mul(&V7Element::basis(i).to_octonion(), &V7Element::basis(j).to_octonion());
                V7Element::from_octonion(&p).0
            })
            .collect()
    });
    let mut out: [GaussianRational; 7] = std::array::from_fn(|_| gz());
    for (k, c) in x.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, t) in out.iter_mut().zip(&TABLE[k]) {
            *o = o.clone() + c.clone() * from_rat(t.clone());
        }
    }
    out
}

/// 7 x 21 matrix of `proj_v7`.
pub fn proj_v7_matrix() -> Matrix<Rational> {
    let cols: Vec<[GaussianRational; 7]> =
        (0..WEDGE_DIM).map(|k| {
            let mut w = Wedge2::zero();
            w.0[k] = GaussianRational::one();
            proj_v7(&w)
        })
        .collect();
    Matrix::from_fn(7, WEDGE_DIM, |i, k| cols[k][i].re.clone())
}

/// Wedge-level bracket, the commutator of the actions on `V7`.
pub fn wedge_bracket(x: &Wedge2, y: &Wedge2) -> Wedge2 {
    let g = gram_c();
    let a = x.antisym();
    let b = y.antisym();
    let agb = &(&a * &g) * &b;
    let bga = &(&b * &g) * &a;
    Wedge2::from_antisym(&(&agb - &bga))
}

/// `[w^x, y^z] = (x,y) w^z - (x,z) w^y - (w,y) x^z + (w,z) x^y` on basis wedges.
pub fn wedge_bracket_formula(x: &Wedge2, y: &Wedge2) -> Wedge2 {
    let g = v7_gram();
    let mut out = Wedge2::zero();
    for (k, &(w, xx)) in wedge_pairs().iter().enumerate() {
        if x.0[k].is_zero() {
            continue;
        }
        for (l, &(yy, z)) in wedge_pairs().iter().enumerate() {
            if y.0[l].is_zero() {
                continue;
            }
            let c = x.0[k].clone() * y.0[l].clone();
            let terms = [
                (g[xx][yy], w, z),
                (-g[xx][z], w, yy),
                (-g[w][yy], xx, z),
                (g[w][z], xx, yy),
            ];
            for (s, p, q) in terms {
                if s != 0 {
                    out = &out + &Wedge2::basis_pair(p, q).scale(&(c.clone() * gint(s, 0)));
                }
            }
        }
    }
    out
}

/// `(w^x, y^z) = (w,z)(x,y) - (w,y)(x,z)`, extended bilinearly.
pub fn wedge_pairing(x: &Wedge2, y: &Wedge2) -> GaussianRational {
    let g = v7_gram();
    let mut acc = gz();
    for (k, &(w, xx)) in wedge_pairs().iter().enumerate() {
        if x.0[k].is_zero() {
            continue;
        }
        for (l, &(yy, z)) in wedge_pairs().iter().enumerate() {
            if y.0[l].is_zero() {
                continue;
            }
            let s = g[w][z] * g[xx][yy] - g[w][yy] * g[xx][z];
            if s != 0 {
                acc = acc + x.0[k].clone() * y.0[l].clone() * gint(s, 0);
            }
        }
    }
    acc
}

fn e_vec(k: usize) -> [GaussianRational; 7] {
    std_vec(k - 1)
}
fn es_vec(k: usize) -> [GaussianRational; 7] {
    std_vec(3 + k)
}
fn u0_vec() -> [GaussianRational; 7] {
    std_vec(3)
}

/// `E_kj = e_j* ^ e_k` (1-based indices, diagonal allowed).
pub fn e_kj_wedge(k: usize, j: usize) -> Wedge2 {
    Wedge2::wedge(&es_vec(j), &e_vec(k))
}

fn v_wedge(j: usize) -> Wedge2 {
    let a = Wedge2::wedge(&u0_vec(), &e_vec(j));
    let b = Wedge2::wedge(&es_vec(m3(j as i64 + 1)), &es_vec(m3(j as i64 + 2)));
    &a + &b
}

fn d_wedge(j: usize) -> Wedge2 {
    let a = Wedge2::wedge(&u0_vec(), &es_vec(j));
    let b = Wedge2::wedge(&e_vec(m3(j as i64 + 1)), &e_vec(m3(j as i64 + 2)));
    &a + &b
}

/// The fourteen basis elements of `g2` as wedge vectors.
pub fn basis_wedges() -> &'static [Wedge2] {
    static B: LazyLock<Vec<Wedge2>> = LazyLock::new(|| {
        let e = e_kj_wedge;
        vec![
            e(2, 1),
            e(3, 1),
            e(3, 2),
            e(1, 2),
            e(1, 3),
            e(2, 3),
            &e(2, 2) - &e(3, 3),
            &e(1, 1) - &e(2, 2),
            v_wedge(1),
            v_wedge(2),
            v_wedge(3),
            d_wedge(1),
            d_wedge(2),
            d_wedge(3),
        ]
    });
    &B
}

/// 21 x 14 matrix whose columns are the basis wedges.
pub fn basis_matrix() -> Matrix<Rational> {
    let b = basis_wedges();
    Matrix::from_fn(WEDGE_DIM, DIM, |k, i| b[i].0[k].re.clone())
}

struct Coordinates {
    left_inverse: Matrix<Rational>,
}

fn coordinates() -> &'static Coordinates {
    static C: LazyLock<Coordinates> = LazyLock::new(|| {
        let b = basis_matrix();
        let bt = b.transpose();
        let gram = &bt * &b;
        let inv = gram.inverse().expect("basis wedges are independent");
        Coordinates { left_inverse: &inv * &bt }
    });
    &C
}

/// Element of `g2` in the fixed 14-element basis, over the Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct G2Element(pub [GaussianRational; DIM]);

impl G2Element {
    pub fn zero() -> Self {
        G2Element(std::array::from_fn(|_| gz()))
    }

    pub fn basis(i: usize) -> Self {
        let mut x = Self::zero();
        x.0[i] = GaussianRational::one();
        x
    }

    pub fn from_ints(c: [i64; DIM]) -> Self {
        G2Element(c.map(|v| gint(v, 0)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        G2Element(self.0.clone().map(|c| c * s.clone()))
    }

    pub fn scale_q(&self, s: &Rational) -> Self {
        self.scale(&from_rat(s.clone()))
    }

    /// Complex conjugation of coordinates (the basis is rational).
    pub fn conj(&self) -> Self {
        G2Element(self.0.clone().map(|c| c.conj()))
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|c| c.im.is_zero())
    }

    pub fn to_wedge(&self) -> Wedge2 {
        let b = basis_wedges();
        let mut out = Wedge2::zero();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in 0..WEDGE_DIM {
                if !b[i].0[k].is_zero() {
                    out.0[k] = out.0[k].clone() + c.clone() * b[i].0[k].clone();
                }
            }
        }
        out
    }

    /// Re-expresses a wedge vector in the `g2` basis; fails if it is not in `g2`.
    pub fn from_wedge(w: &Wedge2) -> Result<Self> {
        let l = &coordinates().left_inverse;
        let mut c: [GaussianRational; DIM] = std::array::from_fn(|_| gz());
        for (i, ci) in c.iter_mut().enumerate() {
            for k in 0..WEDGE_DIM {
                if !l[(i, k)].is_zero() && !w.0[k].is_zero() {
                    *ci = ci.clone() + w.0[k].clone() * from_rat(l[(i, k)].clone());
                }
            }
        }
        let x = G2Element(c);
        if x.to_wedge() != *w {
            return Err(Error::Invalid("wedge element is not in g2".into()));
        }
        Ok(x)
    }

    /// Matrix of the action on `V7` (standard basis).
    pub fn action_matrix(&self) -> Matrix<GaussianRational> {
        self.to_wedge().action_matrix()
    }
}

impl Add for &G2Element {
    type Output = G2Element;
    fn add(self, o: &G2Element) -> G2Element {
        G2Element(std::array::from_fn(|k| self.0[k].clone() + o.0[k].clone()))
    }
}

impl Sub for &G2Element {
    type Output = G2Element;
    fn sub(self, o: &G2Element) -> G2Element {
        G2Element(std::array::from_fn(|k| self.0[k].clone() - o.0[k].clone()))
    }
}

impl Neg for &G2Element {
    type Output = G2Element;
    fn neg(self) -> G2Element {
        G2Element(self.0.clone().map(|c| -c))
    }
}

impl Mul<&G2Element> for &GaussianRational {
    type Output = G2Element;
    fn mul(self, x: &G2Element) -> G2Element {
        x.scale(self)
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
    };
}
owned_ops!(G2Element);

/// Structure constants `[b_i, b_j] = sum_k c_ijk b_k`, derived through the wedge model.
pub fn structure_constants() -> &'static Vec<Vec<[Rational; DIM]>> {
    static T: LazyLock<Vec<Vec<[Rational; DIM]>>> = LazyLock::new(|| {
        (0..DIM)
            .into_par_iter()
            .map(|i| {
                (0..DIM)
                    .map(|j| {
                        let w = wedge_bracket(&basis_wedges()[i], &basis_wedges()[j]);
                        let x = G2Element::from_wedge(&w).expect("g2 is closed under the bracket");
                        x.0.map(|c| c.re)
                    })
                    .collect()
            })
            .collect()
    });
    &T
}

pub fn bracket(x: &G2Element, y: &G2Element) -> G2Element {
    let t = structure_constants();
    let mut out = G2Element::zero();
    for (i, xi) in x.0.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.0.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let c = xi.clone() * yj.clone();
            for (k, tk) in t[i][j].iter().enumerate() {
                if !tk.is_zero() {
                    out.0[k] = out.0[k].clone() + c.clone() * from_rat(tk.clone());
                }
            }
        }
    }
    out
}

/// Bracket computed directly in `wedge^2 V7`, without the cached table.
pub fn bracket_via_wedge(x: &G2Element, y: &G2Element) -> Result<G2Element> {
    G2Element::from_wedge(&wedge_bracket(&x.to_wedge(), &y.to_wedge()))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

/// The derived bracket table in the fixture format `{i, j, coeffs[14]}`.
pub fn bracket_table() -> Vec<BracketEntry> {
    let t = structure_constants();
    let mut out = Vec::with_capacity(DIM * DIM);
    for i in 0..DIM {
        for j in 0..DIM {
            out.push(BracketEntry { i, j, coeffs: t[i][j].iter().map(|c| c.to_string()).collect() });
        }
    }
    out
}

fn killing_gram() -> &'static Matrix<Rational> {
    static K: LazyLock<Matrix<Rational>> = LazyLock::new(|| {
        let b = basis_wedges();
        Matrix::from_fn(DIM, DIM, |i, j| wedge_pairing(&b[i], &b[j]).re)
    });
    &K
}

/// The invariant pairing induced by `(w^x, y^z) = (w,z)(x,y) - (w,y)(x,z)`; bilinear.
pub fn killing_pair(x: &G2Element, y: &G2Element) -> GaussianRational {
    let k = killing_gram();
    let mut acc = gz();
    for i in 0..DIM {
        if x.0[i].is_zero() {
            continue;
        }
        for j in 0..DIM {
            if !k[(i, j)].is_zero() && !y.0[j].is_zero() {
                acc = acc + x.0[i].clone() * y.0[j].clone() * from_rat(k[(i, j)].clone());
            }
        }
    }
    acc
}

/// `iota(e_i) = -e_i*`, `iota(e_i*) = -e_i`, `iota(u0) = -u0`.
pub fn iota_matrix() -> Matrix<GaussianRational> {
    let mut j = Matrix::zeros(7, 7);
    for i in 0..3 {
        j[(4 + i, i)] = gint(-1, 0);
        j[(i, 4 + i)] = gint(-1, 0);
    }
    j[(3, 3)] = gint(-1, 0);
    j
}

fn theta_table() -> &'static Vec<G2Element> {
    static T: LazyLock<Vec<G2Element>> = LazyLock::new(|| {
        let j = iota_matrix();
        let jt = j.transpose();
        basis_wedges()
            .iter()
            .map(|w| {
                let a = &(&j * &w.antisym()) * &jt;
                G2Element::from_wedge(&Wedge2::from_antisym(&a)).expect("theta preserves g2")
            })
            .collect()
    });
    &T
}

/// Cartan involution induced by `iota` on `V7`.
pub fn cartan_theta(x: &G2Element) -> G2Element {
    let t = theta_table();
    let mut out = G2Element::zero();
    for (i, c) in x.0.iter().enumerate() {
        if !c.is_zero() {
            out = &out + &t[i].scale(c);
        }
    }
    out
}

/// `B_theta(x, y) = -killing_pair(x, theta(y))`.
pub fn b_theta(x: &G2Element, y: &G2Element) -> GaussianRational {
    -killing_pair(x, &cartan_theta(y))
}

pub fn b_theta_gram() -> Matrix<Rational> {
    Matrix::from_fn(DIM, DIM, |i, j| b_theta(&G2Element::basis(i), &G2Element::basis(j)).re)
}

/// Eigen-decomposition `x = k + p` with `theta(k) = k`, `theta(p) = -p`.
pub fn kp_decompose(x: &G2Element) -> (G2Element, G2Element) {
    let half = from_rat(frac(1, 2));
    let t = cartan_theta(x);
    ((x + &t).scale(&half), (x - &t).scale(&half))
}

// ---- named elements ----

/// `E_kj` for `k != j` (1-based).
pub fn e_kj(k: usize, j: usize) -> G2Element {
    assert!(k != j && (1..=3).contains(&k) && (1..=3).contains(&j));
    let idx = match (k, j) {
        (2, 1) => E21,
        (3, 1) => E31,
        (3, 2) => E32,
        (1, 2) => E12,
        (1, 3) => E13,
        (2, 3) => E23,
        _ => unreachable!(),
    };
    G2Element::basis(idx)
}

/// `v_j`, `j` taken mod 3.
pub fn v(j: i64) -> G2Element {
    G2Element::basis(V1 + m3(j) - 1)
}

/// `delta_j`, `j` taken mod 3.
pub fn delta(j: i64) -> G2Element {
    G2Element::basis(D1 + m3(j) - 1)
}

/// Traceless diagonal `diag(d1, d2, d3)` of `sl3` in terms of `eps1, eps2`.
pub fn diag_sl3(d: [Rational; 3]) -> G2Element {
    let mut x = G2Element::zero();
    x.0[EPS2] = from_rat(d[0].clone());
    x.0[EPS1] = from_rat(&d[0] + &d[1]);
    x
}

/// Image of `[[a, b], [c, d]]` in `gl2`: `d E11 + (a-d) E22 - a E33 + b v2 - c delta2`.
pub fn gl2_ident(m: [[GaussianRational; 2]; 2]) -> G2Element {
    let [[a, b], [c, d]] = m;
    let mut x = G2Element::zero();
    x.0[EPS1] = a;
    x.0[EPS2] = d;
    x.0[V1 + 1] = b;
    x.0[D1 + 1] = -c;
    x
}

fn quarter() -> GaussianRational {
    from_rat(frac(1, 4))
}

/// `u_j = (E_{j+2,j+1} - E_{j+1,j+2} + v_j + delta_j) / 4`.
pub fn u(j: i64) -> G2Element {
    let a = m3(j + 2);
    let b = m3(j + 1);
    let s = &(&(&e_kj(a, b) - &e_kj(b, a)) + &v(j)) + &delta(j);
    s.scale(&quarter())
}

/// `r_j = (3E_{j+2,j+1} - 3E_{j+1,j+2} - v_j - delta_j) / 4`.
pub fn r(j: i64) -> G2Element {
    let a = m3(j + 2);
    let b = m3(j + 1);
    let three = gint(3, 0);
    let s = &(&(&e_kj(a, b) - &e_kj(b, a)).scale(&three) - &v(j)) - &delta(j);
    s.scale(&quarter())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompactTriples {
    pub h_u: G2Element,
    pub e_u: G2Element,
    pub f_u: G2Element,
    pub h_r: G2Element,
    pub e_r: G2Element,
    pub f_r: G2Element,
}

/// The two commuting `sl2`-triples spanning the compact subalgebra.
pub fn compact_triples() -> CompactTriples {
    let i = i_unit();
    let mk = |x: fn(i64) -> G2Element| {
        let h = x(2).scale(&gint(0, 2));
        let e = &x(1) - &x(3).scale(&i);
        let f = &(-&x(1)) - &x(3).scale(&i);
        (h, e, f)
    };
    let (h_u, e_u, f_u) = mk(u);
    let (h_r, e_r, f_r) = mk(r);
    CompactTriples { h_u, e_u, f_u, h_r, e_r, f_r }
}

/// `y_j = v_j - delta_j`.
pub fn y(j: i64) -> G2Element {
    &v(j) - &delta(j)
}

/// `f_j = E_{j+1,j+2} + E_{j+2,j+1}`.
pub fn f(j: i64) -> G2Element {
    let a = m3(j + 1);
    let b = m3(j + 2);
    &e_kj(a, b) + &e_kj(b, a)
}

/// Basis `d_3, d_1, d_-1, d_-3, h_3, h_1, h_-1, h_-3` of the complexified `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PBasis {
    pub d: [(i64, G2Element); 4],
    pub h: [(i64, G2Element); 4],
}

impl PBasis {
    pub fn d_k(&self, k: i64) -> &G2Element {
        &self.d.iter().find(|(kk, _)| *kk == k).expect("k in {3,1,-1,-3}").1
    }
    pub fn h_k(&self, k: i64) -> &G2Element {
        &self.h.iter().find(|(kk, _)| *kk == k).expect("k in {3,1,-1,-3}").1
    }
}

pub fn p_basis() -> PBasis {
    let i = i_unit();
    let q = |n, d| from_rat(frac(n, d));
    let s = |x: &G2Element, c: GaussianRational| x.scale(&c);
    let e11_2e22_e33 = diag_sl3([rat(1), rat(-2), rat(1)]);
    let e33_e11 = diag_sl3([rat(-1), rat(0), rat(1)]);

    let d3 = &(&f(1) - &y(1)) + &s(&(&f(3) + &y(3)), i.clone());
    let h3 = &s(&e33_e11, gint(2, 0)) + &s(&f(2), gint(0, 2));
    let d1 = &s(&e11_2e22_e33, q(-2, 3)) + &s(&y(2), gint(0, 1) * q(2, 3));
    let a1 = s(&(&s(&f(1), gint(3, 0)) + &y(1)), q(1, 3));
    let b1 = s(&(&s(&f(3), gint(3, 0)) - &y(3)), i.clone() * q(1, 3));
    let h1 = &a1 + &b1;
    let dm1 = &(-&a1) + &b1;
    let hm1 = &s(&e11_2e22_e33, q(-2, 3)) - &s(&y(2), gint(0, 1) * q(2, 3));
    let dm3 = &s(&e33_e11, gint(2, 0)) - &s(&f(2), gint(0, 2));
    let hm3 = &(&y(1) - &f(1)) + &s(&(&f(3) + &y(3)), i);
    PBasis { d: [(3, d3), (1, d1), (-1, dm1), (-3, dm3)], h: [(3, h3), (1, h1), (-1, hm1), (-3, hm3)] }
}

/// Result of `X = n + m + k` with `n` in the nilradical, `m` in the Borel of `gl2`, `k` compact.
#[derive(Clone, Debug, PartialEq)]
pub struct IwasawaParts {
    /// Binary cubic `a u^3 + b u^2 v + c u v^2 + d v^3` of the `n`-part.
    pub cubic: [GaussianRational; 4],
    /// Coefficient of `E13`.
    pub mu: GaussianRational,
    /// Coefficients on `eps1, eps2, v2`.
    pub m_coeffs: [GaussianRational; 3],
    /// The `m`-part as an upper triangular `2 x 2` matrix under `gl2_ident`.
    pub m_matrix: [[GaussianRational; 2]; 2],
    pub k_part: G2Element,
}

fn iwasawa_frame() -> Vec<G2Element> {
    let b = G2Element::basis;
    let mut frame = vec![b(E12), v(1), delta(3), b(E23), b(E13), b(EPS1), b(EPS2), v(2)];
    for j in 1..=3 {
        frame.push(u(j));
    }
    for j in 1..=3 {
        frame.push(r(j));
    }
    frame
}

pub fn iwasawa(x: &G2Element) -> IwasawaParts {
    static FRAME_INV: LazyLock<Matrix<GaussianRational>> = LazyLock::new(|| {
        let fr = iwasawa_frame();
        Matrix::from_fn(DIM, DIM, |i, j| fr[j].0[i].clone()).inverse().expect("n + m + k spans g2")
    });
    let c = FRAME_INV.mul_vec(&x.0);
    let three = gint(3, 0);
    let fr = iwasawa_frame();
    let mut k = G2Element::zero();
    for i in 8..DIM {
        k = &k + &fr[i].scale(&c[i]);
    }
    IwasawaParts {
        cubic: [c[0].clone(), c[1].clone() * three.clone(), c[2].clone() * three, c[3].clone()],
        mu: c[4].clone(),
        m_coeffs: [c[5].clone(), c[6].clone(), c[7].clone()],
        m_matrix: [[c[5].clone(), c[7].clone()], [gz(), c[6].clone()]],
        k_part: k,
    }
}

/// Element `a E12 + (b/3) v1 + (c/3) delta3 + d E23 + mu E13` of the nilradical.
pub fn n_element(cubic: [GaussianRational; 4], mu: GaussianRational) -> G2Element {
    let third = from_rat(frac(1, 3));
    let [a, b, c, d] = cubic;
    let mut x = G2Element::zero();
    x.0[E12] = a;
    x.0[V1] = b * third.clone();
    x.0[D1 + 2] = c * third;
    x.0[E23] = d;
    x.0[E13] = mu;
    x
}

// ---- Z/3-graded model ----

/// `sl3 + V3 + V3^*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z3Element {
    pub sl3: [[Rational; 3]; 3],
    pub v: [Rational; 3],
    pub dual: [Rational; 3],
}

fn zq() -> Rational {
    Rational::zero()
}

impl Z3Element {
    pub fn zero() -> Self {
        Z3Element {
            sl3: std::array::from_fn(|_| std::array::from_fn(|_| zq())),
            v: std::array::from_fn(|_| zq()),
            dual: std::array::from_fn(|_| zq()),
        }
    }

    /// Standard basis element matching `G2Element::basis(i)` under `model_iso`.
    pub fn basis(i: usize) -> Self {
        let mut x = Self::zero();
        let one = rat(1);
        match i {
            E21 => x.sl3[1][0] = one,
            E31 => x.sl3[2][0] = one,
            E32 => x.sl3[2][1] = one,
            E12 => x.sl3[0][1] = one,
            E13 => x.sl3[0][2] = one,
            E23 => x.sl3[1][2] = one,
            EPS1 => {
                x.sl3[1][1] = one;
                x.sl3[2][2] = rat(-1);
            }
            EPS2 => {
                x.sl3[0][0] = one;
                x.sl3[1][1] = rat(-1);
            }
            8..=10 => x.v[i - 8] = one,
            11..=13 => x.dual[i - 11] = one,
            _ => panic!("basis index out of range"),
        }
        x
    }

    pub fn trace(&self) -> Rational {
        &self.sl3[0][0] + &self.sl3[1][1] + &self.sl3[2][2]
    }
}

fn cross(x: &[Rational; 3], y: &[Rational; 3]) -> [Rational; 3] {
    [
        &x[1] * &y[2] - &x[2] * &y[1],
        &x[2] * &y[0] - &x[0] * &y[2],
        &x[0] * &y[1] - &x[1] * &y[0],
    ]
}

type M3 = [[Rational; 3]; 3];

fn m3_mul(a: &M3, b: &M3) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()))
}

fn m3_sub(a: &M3, b: &M3) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] - &b[i][j]))
}

fn m3_add(a: &M3, b: &M3) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] + &b[i][j]))
}

fn v3_add(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    std::array::from_fn(|i| &a[i] + &b[i])
}

fn scale3(a: &[Rational; 3], s: &Rational) -> [Rational; 3] {
    std::array::from_fn(|i| &a[i] * s)
}

/// `[gamma, x] = 3 x (x) gamma - (x, gamma) 1`.
fn dual_vec_bracket(gamma: &[Rational; 3], x: &[Rational; 3]) -> M3 {
    let pairing: Rational = (0..3).map(|i| &gamma[i] * &x[i]).sum();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut c = rat(3) * &x[i] * &gamma[j];
            if i == j {
                c -= &pairing;
            }
            c
        })
    })
}

/// Bracket of the `Z/3`-graded model.
pub fn z3_bracket(x: &Z3Element, y: &Z3Element) -> Z3Element {
    let two = rat(2);
    let a = &x.sl3;
    let b = &y.sl3;
    // sl3 part
    let mut sl3 = m3_sub(&m3_mul(a, b), &m3_mul(b, a));
    sl3 = m3_add(&sl3, &dual_vec_bracket(&x.dual, &y.v));
    sl3 = m3_sub(&sl3, &dual_vec_bracket(&y.dual, &x.v));
    // V3 part: A y_v - B x_v + 2 x_dual ^ y_dual
    let av: [Rational; 3] = std::array::from_fn(|i| (0..3).map(|k| &a[i][k] * &y.v[k]).sum());
    let bv: [Rational; 3] = std::array::from_fn(|i| (0..3).map(|k| &b[i][k] * &x.v[k]).sum());
    let vpart = v3_add(
        &std::array::from_fn(|i| &av[i] - &bv[i]),
        &scale3(&cross(&x.dual, &y.dual), &two),
    );
    // V3^* part: -A^t y_dual + B^t x_dual + 2 x_v ^ y_v
    let ad: [Rational; 3] = std::array::from_fn(|j| (0..3).map(|k| &a[k][j] * &y.dual[k]).sum());
    let bd: [Rational; 3] = std::array::from_fn(|j| (0..3).map(|k| &b[k][j] * &x.dual[k]).sum());
    let dpart = v3_add(
        &std::array::from_fn(|i| &bd[i] - &ad[i]),
        &scale3(&cross(&x.v, &y.v), &two),
    );
    Z3Element { sl3, v: vpart, dual: dpart }
}

/// `E_ij -> E_ij`, `e_j -> v_j`, `e_j* -> delta_j`.
pub fn model_iso(x: &Z3Element) -> Result<G2Element> {
    if !x.trace().is_zero() {
        return Err(Error::Invalid("sl3 part must be traceless".into()));
    }
    let s = &x.sl3;
    let mut out = diag_sl3([s[0][0].clone(), s[1][1].clone(), s[2][2].clone()]);
    let off = [(E21, 1, 0), (E31, 2, 0), (E32, 2, 1), (E12, 0, 1), (E13, 0, 2), (E23, 1, 2)];
    for (idx, i, j) in off {
        out.0[idx] = from_rat(s[i][j].clone());
    }
    for j in 0..3 {
        out.0[V1 + j] = from_rat(x.v[j].clone());
        out.0[D1 + j] = from_rat(x.dual[j].clone());
    }
    Ok(out)
}

/// Nilradical of the Heisenberg parabolic: `E12, E13, E23, v1, delta3`.
pub fn heisenberg_nilradical() -> Vec<G2Element> {
    vec![G2Element::basis(E12), G2Element::basis(E13), G2Element::basis(E23), v(1), delta(3)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize) -> G2Element {
        G2Element::basis(i)
    }

    #[test]
    fn wedge_action_examples() {
        let e = |i| V7Element::basis(i);
        let w = Wedge2::basis_pair(0, 1);
        assert!(wedge_action(&w, &e(2)).iter().all(|c| c.is_zero()));
        let w = Wedge2::basis_pair(4, 0);
        let out = wedge_action(&w, &e(0));
        assert_eq!(out[0], gint(1, 0));
        assert!(out[1..].iter().all(|c| c.is_zero()));
        let w = Wedge2::basis_pair(3, 0);
        let out = wedge_action(&w, &e(3));
        assert_eq!(out[0], gint(2, 0));
    }

    #[test]
    fn basis_in_kernel() {
        for w in basis_wedges() {
            assert!(proj_v7(w).iter().all(|c| c.is_zero()));
        }
        let trace = &(&e_kj_wedge(1, 1) + &e_kj_wedge(2, 2)) + &e_kj_wedge(3, 3);
        assert!(proj_v7(&trace).iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn bracket_matches_formula() {
        for a in basis_wedges() {
            for b in basis_wedges() {
                assert_eq!(wedge_bracket(a, b), wedge_bracket_formula(a, b));
            }
        }
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(&delta(2), &v(3)), g(E32).scale(&gint(3, 0)));
        assert_eq!(bracket(&v(1), &v(2)), delta(3).scale(&gint(2, 0)));
        let want = diag_sl3([rat(-1), rat(-1), rat(2)]);
        assert_eq!(bracket(&delta(3), &v(3)), want);
    }

    #[test]
    fn theta_examples() {
        assert_eq!(cartan_theta(&v(2)), delta(2));
        assert_eq!(cartan_theta(&g(E12)), -&g(E21));
        for i in 0..DIM {
            assert_eq!(cartan_theta(&cartan_theta(&g(i))), g(i));
        }
    }

    #[test]
    fn kp_examples() {
        let (k, p) = kp_decompose(&v(1));
        let half = from_rat(frac(1, 2));
        assert_eq!(k, (&v(1) + &delta(1)).scale(&half));
        assert_eq!(p, (&v(1) - &delta(1)).scale(&half));
        let (k, p) = kp_decompose(&g(EPS1));
        assert!(k.is_zero());
        assert_eq!(p, g(EPS1));
        let (k, p) = kp_decompose(&u(1));
        assert_eq!(k, u(1));
        assert!(p.is_zero());
    }

    #[test]
    fn iwasawa_of_e12() {
        let parts = iwasawa(&g(E12));
        assert_eq!(parts.cubic, [gint(1, 0), gint(0, 0), gint(0, 0), gint(0, 0)]);
        assert!(parts.k_part.is_zero());
        assert!(parts.m_coeffs.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn z3_rules() {
        let e1 = Z3Element::basis(8);
        let e1s = Z3Element::basis(11);
        let br = z3_bracket(&e1s, &e1);
        let mut want = Z3Element::zero();
        want.sl3[0][0] = rat(2);
        want.sl3[1][1] = rat(-1);
        want.sl3[2][2] = rat(-1);
        assert_eq!(br, want);
        let br = z3_bracket(&Z3Element::basis(8), &Z3Element::basis(9));
        let mut want = Z3Element::zero();
        want.dual[2] = rat(2);
        assert_eq!(br, want);
    }
}
