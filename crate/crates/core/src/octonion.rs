//! Split octonions in the Zorn vector-matrix model.
//!
//! An octonion is a block matrix `[[a, v], [phi, d]]` with `a, d` scalars,
//! `v` in `V3` and `phi` in the dual `V3^*`. The identification of
//! `wedge^2 V3` with `V3^*` sends `e1 ^ e2` to `e3*` cyclically.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra_core::{rat, Rational};
use crate::error::Error;

pub type Vec3 = [Rational; 3];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Octonion {
    pub a: Rational,
    pub v: Vec3,
    pub phi: Vec3,
    pub d: Rational,
}

fn zero3() -> Vec3 {
    [Rational::zero(), Rational::zero(), Rational::zero()]
}

fn dot(x: &Vec3, y: &Vec3) -> Rational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `x ^ y` under the fixed orientation; the usual cross product in coordinates.
fn cross(x: &Vec3, y: &Vec3) -> Vec3 {
    [
        &x[1] * &y[2] - &x[2] * &y[1],
        &x[2] * &y[0] - &x[0] * &y[2],
        &x[0] * &y[1] - &x[1] * &y[0],
    ]
}

fn lin(s: &Rational, x: &Vec3, t: &Rational, y: &Vec3) -> Vec3 {
    [s * &x[0] + t * &y[0], s * &x[1] + t * &y[1], s * &x[2] + t * &y[2]]
}

impl Octonion {
    pub fn new(a: Rational, v: Vec3, phi: Vec3, d: Rational) -> Self {
        Octonion { a, v, phi, d }
    }

    pub fn zero() -> Self {
        Self::scalar(Rational::zero())
    }

    pub fn one() -> Self {
        Self::scalar(rat(1))
    }

    pub fn scalar(s: Rational) -> Self {
        Octonion { a: s.clone(), v: zero3(), phi: zero3(), d: s }
    }

    pub fn from_ints(c: [i64; 8]) -> Self {
        Octonion {
            a: rat(c[0]),
            v: [rat(c[1]), rat(c[2]), rat(c[3])],
            phi: [rat(c[4]), rat(c[5]), rat(c[6])],
            d: rat(c[7]),
        }
    }

    /// Coordinates in the order `a, v1, v2, v3, f1, f2, f3, d`.
    pub fn coords(&self) -> [Rational; 8] {
        [
            self.a.clone(),
            self.v[0].clone(),
            self.v[1].clone(),
            self.v[2].clone(),
            self.phi[0].clone(),
            self.phi[1].clone(),
            self.phi[2].clone(),
            self.d.clone(),
        ]
    }

    pub fn from_coords(c: [Rational; 8]) -> Self {
        let [a, v1, v2, v3, f1, f2, f3, d] = c;
        Octonion { a, v: [v1, v2, v3], phi: [f1, f2, f3], d }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Octonion {
            a: &self.a * s,
            v: self.v.clone().map(|x| x * s),
            phi: self.phi.clone().map(|x| x * s),
            d: &self.d * s,
        }
    }

    /// Trace-zero part `(x - x*)/2`.
    pub fn im(&self) -> Self {
        let half = Rational::new(1.into(), 2.into());
        (self - &self.conj()).scale(&half)
    }
}

pub fn oct_mul(x: &Octonion, y: &Octonion) -> Octonion {
    let a = &x.a * &y.a + dot(&y.phi, &x.v);
    let d = dot(&x.phi, &y.v) + &x.d * &y.d;
    let pp = cross(&x.phi, &y.phi);
    let vv = cross(&x.v, &y.v);
    let v0 = lin(&x.a, &y.v, &y.d, &x.v);
    let v = [&v0[0] - &pp[0], &v0[1] - &pp[1], &v0[2] - &pp[2]];
    let f0 = lin(&y.a, &x.phi, &x.d, &y.phi);
    let phi = [&f0[0] + &vv[0], &f0[1] + &vv[1], &f0[2] + &vv[2]];
    Octonion { a, v, phi, d }
}

pub fn oct_norm(x: &Octonion) -> Rational {
    &x.a * &x.d - dot(&x.phi, &x.v)
}

pub fn oct_trace(x: &Octonion) -> Rational {
    &x.a + &x.d
}

pub fn oct_conj(x: &Octonion) -> Octonion {
    Octonion {
        a: x.d.clone(),
        v: x.v.clone().map(|c| -c),
        phi: x.phi.clone().map(|c| -c),
        d: x.a.clone(),
    }
}

impl Octonion {
    pub fn norm(&self) -> Rational {
        oct_norm(self)
    }
    pub fn trace(&self) -> Rational {
        oct_trace(self)
    }
    pub fn conj(&self) -> Octonion {
        oct_conj(self)
    }
}

/// Polarization of the norm: `(x, y) = ad' + a'd - phi(v') - phi'(v)`.
pub fn bilinear(x: &Octonion, y: &Octonion) -> Rational {
    &x.a * &y.d + &y.a * &x.d - dot(&x.phi, &y.v) - dot(&y.phi, &x.v)
}

/// `tr((x1 x2) x3)`.
pub fn trilinear(x1: &Octonion, x2: &Octonion, x3: &Octonion) -> Rational {
    oct_trace(&oct_mul(&oct_mul(x1, x2), x3))
}

/// `(xy)z - x(yz)`.
pub fn associator(x: &Octonion, y: &Octonion, z: &Octonion) -> Octonion {
    &oct_mul(&oct_mul(x, y), z) - &oct_mul(x, &oct_mul(y, z))
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, o: &Octonion) -> Octonion {
        Octonion {
            a: &self.a + &o.a,
            v: lin(&rat(1), &self.v, &rat(1), &o.v),
            phi: lin(&rat(1), &self.phi, &rat(1), &o.phi),
            d: &self.d + &o.d,
        }
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, o: &Octonion) -> Octonion {
        self + &(-o)
    }
}

impl Neg for &Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        self.scale(&rat(-1))
    }
}

impl Mul for &Octonion {
    type Output = Octonion;
    fn mul(self, o: &Octonion) -> Octonion {
        oct_mul(self, o)
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |x: &Vec3| format!("{},{},{}", x[0], x[1], x[2]);
        write!(f, "{};{};{};{}", self.a, j(&self.v), j(&self.phi), self.d)
    }
}

impl FromStr for Octonion {
    type Err = Error;

    /// Parses `a;v1,v2,v3;f1,f2,f3;d` with rational entries like `-3/4`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("octonion `{s}`: expected a;v1,v2,v3;f1,f2,f3;d"));
        let parts: Vec<&str> = s.trim().split(';').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let q = |t: &str| parse_rational(t.trim());
        let tri = |t: &str| -> Result<Vec3, Error> {
            let xs: Vec<&str> = t.split(',').collect();
            if xs.len() != 3 {
                return Err(bad());
            }
            Ok([q(xs[0])?, q(xs[1])?, q(xs[2])?])
        };
        Ok(Octonion { a: q(parts[0])?, v: tri(parts[1])?, phi: tri(parts[2])?, d: q(parts[3])? })
    }
}

pub fn parse_rational(t: &str) -> Result<Rational, Error> {
    t.parse::<Rational>().map_err(|_| Error::Parse(format!("not a rational: `{t}`")))
}

/// Trace-zero octonion in the basis `e1, e2, e3, u0, e1*, e2*, e3*`,
/// where `u0 = diag(1, -1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct V7Element(pub [Rational; 7]);

impl V7Element {
    pub fn basis(i: usize) -> Self {
        let mut c: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
        c[i] = rat(1);
        V7Element(c)
    }

    pub fn to_octonion(&self) -> Octonion {
        let c = &self.0;
        Octonion {
            a: c[3].clone(),
            v: [c[0].clone(), c[1].clone(), c[2].clone()],
            phi: [c[4].clone(), c[5].clone(), c[6].clone()],
            d: -c[3].clone(),
        }
    }

    /// Projects an octonion onto its trace-zero part.
    pub fn from_octonion(x: &Octonion) -> Self {
        let y = x.im();
        V7Element([
            y.v[0].clone(),
            y.v[1].clone(),
            y.v[2].clone(),
            y.a.clone(),
            y.phi[0].clone(),
            y.phi[1].clone(),
            y.phi[2].clone(),
        ])
    }
}

/// Gram matrix of the norm form on `V7` in the standard basis.
pub fn v7_gram() -> [[i64; 7]; 7] {
    let mut g = [[0i64; 7]; 7];
    for i in 0..3 {
        g[i][4 + i] = -1;
        g[4 + i][i] = -1;
    }
    g[3][3] = -2;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_pairing() {
        let e = |i| V7Element::basis(i).to_octonion();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { rat(-1) } else { rat(0) };
                assert_eq!(bilinear(&e(i), &e(4 + j)), want);
            }
        }
        assert_eq!(bilinear(&e(3), &e(3)), rat(-2));
        let g = v7_gram();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(bilinear(&e(i), &e(j)), rat(g[i][j]));
            }
        }
    }

    #[test]
    fn e1_times_dual() {
        let x = Octonion::from_ints([0, 1, 0, 0, 0, 0, 0, 0]);
        let y = Octonion::from_ints([0, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(oct_mul(&x, &y), Octonion::from_ints([1, 0, 0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn diagonal_norm() {
        let x = Octonion::from_ints([3, 0, 0, 0, 0, 0, 0, -5]);
        assert_eq!(oct_norm(&x), rat(-15));
    }

    #[test]
    fn text_round_trip() {
        let x: Octonion = "1/2;0,-3,4;5,6/7,0;-1".parse().unwrap();
        assert_eq!(x.to_string(), "1/2;0,-3,4;5,6/7,0;-1");
        assert_eq!(x.to_string().parse::<Octonion>().unwrap(), x);
        assert!("1;2;3".parse::<Octonion>().is_err());
    }

    #[test]
    fn nonassociative_witness() {
        let e = |i| V7Element::basis(i).to_octonion();
        let w = associator(&e(0), &e(1), &e(4));
        assert!(w != Octonion::zero());
    }
}
