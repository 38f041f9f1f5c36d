//! Levi and unipotent radical of the Heisenberg parabolic inside `SO(7)`,
//! the `GL2` actions on binary cubics, and the symplectic form on `W`.
//!
//! Ordered basis: `e1, e3*, e2*, u0, -e2, -e1*, -e3`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra_core::{frac, rat, Field, Matrix, Rational};
use crate::error::{Error, Result};
use crate::g2_lie::{n_element, G2Element};
use crate::octonion::{parse_rational, v7_gram};

pub type SO7Matrix = Matrix<Rational>;
pub type Mat2<T> = [[T; 2]; 2];

/// `w = (a, b/3, c/3, d)` for the cubic `a x^3 + b x^2 y + c x y^2 + d y^3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WVector {
    pub a: Rational,
    pub b3: Rational,
    pub c3: Rational,
    pub d: Rational,
}

impl WVector {
    pub fn new(a: Rational, b3: Rational, c3: Rational, d: Rational) -> Self {
        WVector { a, b3, c3, d }
    }

    pub fn zero() -> Self {
        Self::from_cubic([rat(0), rat(0), rat(0), rat(0)])
    }

    /// From the integer-style cubic coefficients `(a, b, c, d)`.
    pub fn from_cubic(c: [Rational; 4]) -> Self {
        let third = frac(1, 3);
        let [a, b, cc, d] = c;
        WVector { a, b3: b * &third, c3: cc * &third, d }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Self::from_cubic(c.map(rat))
    }

    pub fn cubic(&self) -> [Rational; 4] {
        [self.a.clone(), &self.b3 * rat(3), &self.c3 * rat(3), self.d.clone()]
    }

    /// Whether the cubic coefficients `a, b, c, d` are all integers.
    pub fn is_integral(&self) -> bool {
        self.cubic().iter().all(|x| x.is_integer())
    }

    /// `a E12 + (b/3) v1 + (c/3) delta3 + d E23 + mu E13`.
    pub fn to_g2(&self, mu: &Rational) -> G2Element {
        let c = self.cubic().map(crate::algebra_core::from_rat);
        n_element(c, crate::algebra_core::from_rat(mu.clone()))
    }
}

impl fmt::Display for WVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.cubic();
        write!(f, "{a},{b},{c},{d}")
    }
}

impl FromStr for WVector {
    type Err = Error;
    /// Parses `a,b,c,d`, the cubic coefficients (not the thirds).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("cubic `{s}`: expected a,b,c,d")));
        }
        let q: Vec<Rational> = parts.iter().map(|t| parse_rational(t)).collect::<Result<_>>()?;
        Ok(Self::from_cubic([q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()]))
    }
}

pub fn det2<T: Field>(g: &Mat2<T>) -> T {
    g[0][0].clone() * g[1][1].clone() - g[0][1].clone() * g[1][0].clone()
}

pub fn inv2<T: Field>(g: &Mat2<T>) -> Result<Mat2<T>> {
    let d = det2(g);
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let di = T::one() / d;
    Ok([
        [g[1][1].clone() * di.clone(), -g[0][1].clone() * di.clone()],
        [-g[1][0].clone() * di.clone(), g[0][0].clone() * di],
    ])
}

pub fn mul2<T: Field>(g: &Mat2<T>, h: &Mat2<T>) -> Mat2<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| g[i][0].clone() * h[0][j].clone() + g[i][1].clone() * h[1][j].clone())
    })
}

/// `f(p x + q y, r x + s y)` for `f = (a, b, c, d)` in the monomials `x^3, x^2 y, x y^2, y^3`.
pub fn subst_cubic<T: Field>(f: &[T; 4], l1: [T; 2], l2: [T; 2]) -> [T; 4] {
    let mul = |u: &[T], w: &[T]| -> Vec<T> {
        let mut out = vec![T::zero(); u.len() + w.len() - 1];
        for (i, a) in u.iter().enumerate() {
            for (j, b) in w.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    };
    let mut out: [T; 4] = std::array::from_fn(|_| T::zero());
    for (k, coef) in f.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let mut p = vec![T::one()];
        for _ in 0..3 - k {
            p = mul(&p, &l1);
        }
        for _ in 0..k {
            p = mul(&p, &l2);
        }
        for (o, t) in out.iter_mut().zip(p) {
            *o = o.clone() + coef.clone() * t;
        }
    }
    out
}

/// `det(g)^-1 f((x, y) g)` on cubic coefficients.
pub fn act4_cubic<T: Field>(g: &Mat2<T>, f: &[T; 4]) -> Result<[T; 4]> {
    let d = det2(g);
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let s = subst_cubic(f, [g[0][0].clone(), g[1][0].clone()], [g[0][1].clone(), g[1][1].clone()]);
    let di = T::one() / d;
    Ok(s.map(|c| c * di.clone()))
}

/// `det(m)^2 f(m^-1 (u, v)^t)` on cubic coefficients in `u^3, u^2 v, u v^2, v^3`.
pub fn act3_cubic<T: Field>(m: &Mat2<T>, f: &[T; 4]) -> Result<[T; 4]> {
    let mi = inv2(m)?;
    let d = det2(m);
    let s = subst_cubic(f, mi[0].clone(), mi[1].clone());
    let d2 = d.clone() * d;
    Ok(s.map(|c| c * d2.clone()))
}

/// The action used by the `SO(7)` embedding.
pub fn gl2_act_cubic(g: &Mat2<Rational>, w: &WVector) -> Result<WVector> {
    Ok(WVector::from_cubic(act4_cubic(g, &w.cubic())?))
}

/// The action used in the archimedean computations.
pub fn gl2_act3(m: &Mat2<Rational>, w: &WVector) -> Result<WVector> {
    Ok(WVector::from_cubic(act3_cubic(m, &w.cubic())?))
}

/// Matrix relating the two `GL2` identifications.
pub fn j2<T: Field>() -> Mat2<T> {
    [[T::zero(), T::one()], [-T::one(), T::zero()]]
}

/// `<f, f'> = a d' - b c'/3 + c b'/3 - d a'` on cubic coefficients.
pub fn symplectic_cubic<T: Field>(f: &[T; 4], g: &[T; 4]) -> T {
    let three = T::one() + T::one() + T::one();
    f[0].clone() * g[3].clone() - f[1].clone() * g[2].clone() / three.clone()
        + f[2].clone() * g[1].clone() / three
        - f[3].clone() * g[0].clone()
}

pub fn symplectic(w: &WVector, w2: &WVector) -> Rational {
    &w.a * &w2.d - rat(3) * &w.b3 * &w2.c3 + rat(3) * &w.c3 * &w2.b3 - &w.d * &w2.a
}

/// Gram matrix of `V7` in the ordered basis: `[[0, 0, 1], [0, S, 0], [1, 0, 0]]`.
pub fn so7_gram() -> SO7Matrix {
    let mut g = Matrix::zeros(7, 7);
    g[(0, 5)] = rat(1);
    g[(1, 6)] = rat(1);
    g[(5, 0)] = rat(1);
    g[(6, 1)] = rat(1);
    g[(2, 4)] = rat(1);
    g[(4, 2)] = rat(1);
    g[(3, 3)] = rat(-2);
    g
}

/// Columns are the ordered basis vectors in the standard `V7` basis.
pub fn basis_change() -> SO7Matrix {
    let cols: [(usize, i64); 7] = [(0, 1), (6, 1), (5, 1), (3, 1), (1, -1), (4, -1), (2, -1)];
    let mut p = Matrix::zeros(7, 7);
    for (k, (i, s)) in cols.iter().enumerate() {
        p[(*i, k)] = rat(*s);
    }
    p
}

/// `Ad^0(g)` in the coordinates `e2* -> [[0,-1],[0,0]]`, `u0 -> diag(1,-1)`, `-e2 -> [[0,0],[1,0]]`.
fn ad0(g: &Mat2<Rational>, gi: &Mat2<Rational>) -> [[Rational; 3]; 3] {
    let z = || rat(0);
    let basis: [Mat2<Rational>; 3] = [
        [[z(), rat(-1)], [z(), z()]],
        [[rat(1), z()], [z(), rat(-1)]],
        [[z(), z()], [rat(1), z()]],
    ];
    let coords = |x: &Mat2<Rational>| [-x[0][1].clone(), x[0][0].clone(), x[1][0].clone()];
    let mut out: [[Rational; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| z()));
    for (j, b) in basis.iter().enumerate() {
        let c = coords(&mul2(&mul2(g, b), gi));
        for i in 0..3 {
            out[i][j] = c[i].clone();
        }
    }
    out
}

/// `g -> diag(g, Ad^0(g), g^-t)`.
pub fn m_embed(g: &Mat2<Rational>) -> Result<SO7Matrix> {
    let gi = inv2(g)?;
    let mut m = Matrix::zeros(7, 7);
    let a = ad0(g, &gi);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = g[i][j].clone();
            m[(5 + i, 5 + j)] = gi[j][i].clone();
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            m[(2 + i, 2 + j)] = a[i][j].clone();
        }
    }
    Ok(m)
}

fn s_matrix() -> [[Rational; 3]; 3] {
    let z = || rat(0);
    [[z(), z(), rat(1)], [z(), rat(-2), z()], [rat(1), z(), z()]]
}

/// Lie-algebra image of `mu E13 + (a, b/3, c/3, d)`.
pub fn n_lie(w: &WVector, mu: &Rational) -> SO7Matrix {
    let h = [
        [w.a.clone(), w.b3.clone()],
        [w.b3.clone(), w.c3.clone()],
        [w.c3.clone(), w.d.clone()],
    ];
    let s = s_matrix();
    let mut x = Matrix::zeros(7, 7);
    for i in 0..3 {
        for j in 0..2 {
            x[(2 + i, 5 + j)] = h[i][j].clone();
        }
    }
    // h' = -h^t S
    for i in 0..2 {
        for j in 0..3 {
            let v: Rational = (0..3).map(|k| &h[k][i] * &s[k][j]).sum();
            x[(i, 2 + j)] = -v;
        }
    }
    // -mu J2
    x[(0, 6)] = -mu.clone();
    x[(1, 5)] = mu.clone();
    x
}

/// `exp(n_lie(w, mu)) = 1 + X + X^2/2`.
pub fn n_embed(w: &WVector, mu: &Rational) -> SO7Matrix {
    let x = n_lie(w, mu);
    let x2 = &x * &x;
    &(&Matrix::identity(7) + &x) + &x2.scale(&frac(1, 2))
}

/// Whether `m^t G m = G` for the ordered-basis Gram matrix.
pub fn preserves_gram(m: &SO7Matrix) -> bool {
    let g = so7_gram();
    &(&m.transpose() * &g) * m == g
}

/// Checks `h^t S h + x + x^t = 0` for the blocks of a unipotent element.
pub fn heisenberg_group_condition(n: &SO7Matrix) -> bool {
    let s = s_matrix();
    for i in 0..2 {
        for j in 0..2 {
            let mut v = &n[(i, 5 + j)] + &n[(j, 5 + i)];
            for k in 0..3 {
                for l in 0..3 {
                    v += &n[(2 + k, 5 + i)] * &s[k][l] * &n[(2 + l, 5 + j)];
                }
            }
            if !v.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Action of a rational `g2` element on `V7`, in the ordered basis.
pub fn g2_in_ordered_basis(x: &G2Element) -> Result<SO7Matrix> {
    if !x.is_real() {
        return Err(Error::Invalid("expected a rational element".into()));
    }
    let a = x.action_matrix().map(|c| c.re.clone());
    let p = basis_change();
    let pi = p.inverse().ok_or(Error::Singular)?;
    Ok(&(&pi * &a) * &p)
}

/// Sanity check that the standard Gram matrix becomes `so7_gram` in the ordered basis.
pub fn gram_in_ordered_basis() -> SO7Matrix {
    let g = v7_gram();
    let gm = Matrix::from_fn(7, 7, |i, j| rat(g[i][j]));
    let p = basis_change();
    &(&p.transpose() * &gm) * &p
}

/// Identity of `Mat2`.
pub fn id2<T: Field>() -> Mat2<T> {
    [[T::one(), T::zero()], [T::zero(), T::one()]]
}
