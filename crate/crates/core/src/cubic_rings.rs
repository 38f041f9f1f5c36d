//! Binary cubic forms and cubic rings, `p`-locally.
//!
//! For `x = [[alpha, beta], [gamma, delta]]`, `T(x)` is spanned by `1`,
//! `delta w - beta t` and `-gamma w + alpha t` inside the maximal order
//! with good basis `1, w, t`. Everything is tested with exact rationals and
//! `p`-adic valuations.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra_core::{rat, Rational};
use crate::error::{Error, Result};
use crate::heis_so7::{act4_cubic, det2, Mat2};

/// Integer cubic `a x^3 + b x^2 y + c x y^2 + d y^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BinaryCubic(pub [i64; 4]);

impl BinaryCubic {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        BinaryCubic([a, b, c, d])
    }

    pub fn coeffs(&self) -> [Rational; 4] {
        self.0.map(rat)
    }

    pub fn disc(&self) -> i64 {
        discriminant(&self.0)
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        let [a, b, c, d] = self.0;
        a * x * x * x + b * x * x * y + c * x * y * y + d * y * y * y
    }
}

impl fmt::Display for BinaryCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl FromStr for BinaryCubic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("not an integer: `{t}`"))))
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::Parse(format!("cubic `{s}`: expected a,b,c,d")));
        }
        Ok(BinaryCubic([v[0], v[1], v[2], v[3]]))
    }
}

/// `b^2 c^2 - 4 a c^3 - 4 b^3 d - 27 a^2 d^2 + 18 a b c d`.
pub fn discriminant(f: &[i64; 4]) -> i64 {
    let [a, b, c, d] = *f;
    b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d
}

// ---- valuations ----

pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation; `None` for zero.
pub fn vp(x: &Rational, p: u64) -> Option<i64> {
    Some(vp_int(x.numer(), p)? - vp_int(x.denom(), p)?)
}

pub fn is_p_integral(x: &Rational, p: u64) -> bool {
    vp(x, p).is_none_or(|v| v >= 0)
}

pub fn p_pow(p: u64, k: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

/// Reduction of a `p`-integral rational modulo `p`.
pub fn mod_p(x: &Rational, p: u64) -> Result<u64> {
    if !is_p_integral(x, p) {
        return Err(Error::Invalid(format!("{x} is not {p}-integral")));
    }
    let pb = BigInt::from(p);
    let n = x.numer().mod_floor(&pb).to_u64().expect("small");
    let d = x.denom().mod_floor(&pb).to_u64().expect("small");
    Ok(n * inv_mod(d, p) % p)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

// ---- Delone-Faddeev ----

/// Element `x0 + x1 w + x2 t` of a cubic ring with good basis `1, w, t`.
pub type RingElt = [Rational; 3];

/// Multiplication table for the good basis attached to `(a, b, c, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicRingTable {
    pub form: [Rational; 4],
    /// `w t`, `w^2`, `t^2` in the basis `1, w, t`.
    pub wt: RingElt,
    pub ww: RingElt,
    pub tt: RingElt,
}

pub fn df_ring_q(f: &[Rational; 4]) -> CubicRingTable {
    let [a, b, c, d] = f.clone();
    let z = Rational::zero;
    CubicRingTable {
        wt: [-(&a * &d), z(), z()],
        ww: [-(&a * &c), -b.clone(), a.clone()],
        tt: [-(&b * &d), -d.clone(), c.clone()],
        form: f.clone(),
    }
}

pub fn df_ring(f: &BinaryCubic) -> CubicRingTable {
    df_ring_q(&f.coeffs())
}

impl CubicRingTable {
    pub fn mul(&self, x: &RingElt, y: &RingElt) -> RingElt {
        let mut out = [
            &x[0] * &y[0],
            &x[0] * &y[1] + &x[1] * &y[0],
            &x[0] * &y[2] + &x[2] * &y[0],
        ];
        let terms = [(&x[1] * &y[1], &self.ww), (&x[1] * &y[2] + &x[2] * &y[1], &self.wt), (&x[2] * &y[2], &self.tt)];
        for (s, e) in terms {
            if s.is_zero() {
                continue;
            }
            for k in 0..3 {
                out[k] += &s * &e[k];
            }
        }
        out
    }

    pub fn basis() -> [RingElt; 3] {
        let z = Rational::zero;
        [[rat(1), z(), z()], [z(), rat(1), z()], [z(), z(), rat(1)]]
    }

    /// `1 ^ xi ^ xi^2` for `xi = x w + y t`, in units of `1 ^ w ^ t`.
    pub fn index_form(&self, x: &Rational, y: &Rational) -> Rational {
        let xi = [Rational::zero(), x.clone(), y.clone()];
        let sq = self.mul(&xi, &xi);
        x * &sq[2] - y * &sq[1]
    }
}

// ---- lattice classes ----

/// Coset `h GL2(Z_p)`, stored as `[[p^a, b], [0, p^c]]` with `b` reduced modulo `p^a Z_(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeClass {
    pub p: u64,
    pub a: i64,
    pub c: i64,
    pub b: Rational,
}

/// Canonical representative of `y` in `Q / p^a Z_(p)`: `p^v k` with `0 <= k < p^(a-v)`.
fn reduce_offset(y: &Rational, p: u64, a: i64) -> Rational {
    let Some(v) = vp(y, p) else { return Rational::zero() };
    if v >= a {
        return Rational::zero();
    }
    let unit = y * p_pow(p, -v);
    let m = BigInt::from(p).pow((a - v) as u32);
    let n = unit.numer().mod_floor(&m);
    let d = unit.denom().mod_floor(&m);
    let di = d.modinv(&m).expect("denominator prime to p");
    let k = (n * di).mod_floor(&m);
    Rational::from_integer(k) * p_pow(p, v)
}

impl LatticeClass {
    pub fn identity(p: u64) -> Self {
        LatticeClass { p, a: 0, c: 0, b: Rational::zero() }
    }

    pub fn from_matrix(p: u64, h: &Mat2<Rational>) -> Result<Self> {
        if det2(h).is_zero() {
            return Err(Error::Singular);
        }
        let mut m = h.clone();
        let col_swap = |m: &mut Mat2<Rational>| {
            for row in m.iter_mut() {
                row.swap(0, 1);
            }
        };
        let v0 = vp(&m[1][0], p);
        let v1 = vp(&m[1][1], p);
        let swap = match (v0, v1) {
            (Some(_), None) => true,
            (Some(x), Some(y)) => x < y,
            _ => false,
        };
        if swap {
            col_swap(&mut m);
        }
        let c = vp(&m[1][1], p).expect("nonsingular");
        let s = p_pow(p, c) / &m[1][1];
        for row in m.iter_mut() {
            row[1] = &row[1] * &s;
        }
        let t = &m[1][0] / &m[1][1];
        for row in m.iter_mut() {
            let r1 = row[1].clone();
            row[0] -= &t * r1;
        }
        let a = vp(&m[0][0], p).expect("nonsingular");
        let b = reduce_offset(&m[0][1], p, a);
        Ok(LatticeClass { p, a, c, b })
    }

    pub fn from_ints(p: u64, h: [[i64; 2]; 2]) -> Result<Self> {
        Self::from_matrix(p, &h.map(|r| r.map(rat)))
    }

    pub fn matrix(&self) -> Mat2<Rational> {
        [[p_pow(self.p, self.a), self.b.clone()], [Rational::zero(), p_pow(self.p, self.c)]]
    }

    pub fn val_det(&self) -> i64 {
        self.a + self.c
    }

    /// Largest `n` with `p^-n h` integral.
    pub fn mat_val(&self) -> i64 {
        let vb = vp(&self.b, self.p).unwrap_or(i64::MAX);
        self.a.min(self.c).min(vb)
    }

    pub fn is_integral(&self) -> bool {
        self.mat_val() >= 0
    }

    pub fn scale_p(&self, k: i64) -> Self {
        let m = self.matrix().map(|r| r.map(|x| x * p_pow(self.p, k)));
        Self::from_matrix(self.p, &m).expect("nonsingular")
    }

    pub fn mul_right(&self, y: &Mat2<Rational>) -> Result<Self> {
        let h = self.matrix();
        let prod = crate::heis_so7::mul2(&h, y);
        Self::from_matrix(self.p, &prod)
    }

    /// `h y_i` for the `p + 1` cosets `y_i` of `T(p)`: `[[p, j], [0, 1]]` and `[[1, 0], [0, p]]`.
    pub fn sublattices_index_p(&self) -> Vec<Self> {
        tp_cosets(self.p).iter().map(|y| self.mul_right(y).expect("nonsingular")).collect()
    }

    pub fn hnf_strings(&self) -> [[String; 2]; 2] {
        let m = self.matrix();
        m.map(|r| r.map(|x| x.to_string()))
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.matrix();
        write!(f, "[[{}, {}], [0, {}]]", m[0][0], m[0][1], m[1][1])
    }
}

pub fn tp_cosets(p: u64) -> Vec<Mat2<Rational>> {
    let pr = rat(p as i64);
    let mut out: Vec<Mat2<Rational>> =
        (0..p).map(|j| [[pr.clone(), rat(j as i64)], [rat(0), rat(1)]]).collect();
    out.push([[rat(1), rat(0)], [rat(0), pr]]);
    out
}

/// `adj(h) = [[delta, -beta], [-gamma, alpha]]`.
pub fn adj2(h: &Mat2<Rational>) -> Mat2<Rational> {
    [[h[1][1].clone(), -h[0][1].clone()], [-h[1][0].clone(), h[0][0].clone()]]
}

/// The module `T(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TLattice {
    /// Generators `1, g1, g2` in `O_E` coordinates.
    pub gens: [RingElt; 3],
}

fn t_gens(x: &Mat2<Rational>) -> [RingElt; 3] {
    let adj = adj2(x);
    let z = Rational::zero;
    [
        [rat(1), z(), z()],
        [z(), adj[0][0].clone(), adj[0][1].clone()],
        [z(), adj[1][0].clone(), adj[1][1].clone()],
    ]
}

/// Whether `Z_(p) + Z_(p) g1 + Z_(p) g2` is closed under multiplication.
pub fn is_ring_module(table: &CubicRingTable, g1: &RingElt, g2: &RingElt, p: u64) -> bool {
    let det = &g1[1] * &g2[2] - &g1[2] * &g2[1];
    if det.is_zero() {
        return false;
    }
    for (x, y) in [(g1, g1), (g1, g2), (g2, g2)] {
        let pr = table.mul(x, y);
        if !is_p_integral(&pr[0], p) {
            return false;
        }
        let c1 = (&pr[1] * &g2[2] - &pr[2] * &g2[1]) / &det;
        let c2 = (&g1[1] * &pr[2] - &g1[2] * &pr[1]) / &det;
        if !is_p_integral(&c1, p) || !is_p_integral(&c2, p) {
            return false;
        }
    }
    true
}

pub fn t_lattice(x: &Mat2<Rational>, f_max: &BinaryCubic, p: u64) -> Result<(TLattice, bool)> {
    if det2(x).is_zero() {
        return Err(Error::Singular);
    }
    let gens = t_gens(x);
    let ring = is_ring_module(&df_ring(f_max), &gens[1], &gens[2], p);
    Ok((TLattice { gens }, ring))
}

pub fn is_ring(h: &LatticeClass, f_max: &BinaryCubic) -> bool {
    t_lattice(&h.matrix(), f_max, h.p).expect("nonsingular").1
}

/// Largest `c` with `T(p^-c h)` a ring; may be negative.
pub fn content(h: &LatticeClass, f_max: &BinaryCubic) -> i64 {
    let table = df_ring(f_max);
    let gens = t_gens(&h.matrix());
    let b = h.mat_val();
    let lo = 3 * b - h.val_det();
    let mut c = b;
    loop {
        let s = p_pow(h.p, -c);
        let g1 = gens[1].clone().map(|x| x * &s);
        let g2 = gens[2].clone().map(|x| x * &s);
        if c <= lo || is_ring_module(&table, &g1, &g2, h.p) {
            return c;
        }
        c -= 1;
    }
}

/// Index form of `T(h)`: `det(h)^-1 f_max((x, y) adj(h))`.
pub fn form_of(h: &LatticeClass, f_max: &BinaryCubic) -> [Rational; 4] {
    act4_cubic(&adj2(&h.matrix()), &f_max.coeffs()).expect("nonsingular")
}

/// Content read off the index form: the minimal `p`-adic valuation of its coefficients.
pub fn content_by_form(h: &LatticeClass, f_max: &BinaryCubic) -> i64 {
    form_of(h, f_max).iter().filter_map(|x| vp(x, h.p)).min().expect("nonzero form")
}

/// Primitive part `F_h / p^c`, reduced mod `p`.
pub fn primitive_form_mod_p(h: &LatticeClass, f_max: &BinaryCubic) -> [u64; 4] {
    let c = content_by_form(h, f_max);
    let s = p_pow(h.p, -c);
    form_of(h, f_max).map(|x| mod_p(&(x * &s), h.p).expect("integral after rescaling"))
}

/// `1` if `p^-val(h) h` is invertible over `Z_p`, else `2`.
pub fn epsilon(h: &LatticeClass) -> u32 {
    if h.val_det() == 2 * h.mat_val() {
        1
    } else {
        2
    }
}

// ---- factorization over F_p ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FactorType {
    Irred,
    LQ,
    L1L2L3,
    L1sqL2,
    Lcube,
}

impl FactorType {
    pub const ALL: [FactorType; 5] =
        [FactorType::Irred, FactorType::LQ, FactorType::L1L2L3, FactorType::L1sqL2, FactorType::Lcube];

    pub fn name(&self) -> &'static str {
        match self {
            FactorType::Irred => "IRRED",
            FactorType::LQ => "L_Q",
            FactorType::L1L2L3 => "L1L2L3",
            FactorType::L1sqL2 => "L1SQ_L2",
            FactorType::Lcube => "LCUBE",
        }
    }
}

/// Multiplicities of the zeros of `f` on `P^1(F_p)`.
pub fn root_multiplicities(f: &[u64; 4], p: u64) -> Result<Vec<u32>> {
    if f.iter().all(|&x| x % p == 0) {
        return Err(Error::ZeroModP(p));
    }
    // g(t) = f(t, 1), coefficients from t^0 upward
    let g: Vec<u64> = vec![f[3] % p, f[2] % p, f[1] % p, f[0] % p];
    let deg = (0..4).rev().find(|&i| g[i] != 0).expect("nonzero");
    let mut mults = Vec::new();
    if deg < 3 {
        mults.push((3 - deg) as u32);
    }
    for t in 0..p {
        let mut poly: Vec<u64> = g[..=deg].to_vec();
        let mut m = 0;
        loop {
            // synthetic division by (x - t)
            let n = poly.len();
            if n < 2 {
                break;
            }
            let mut q = vec![0u64; n - 1];
            let mut carry = 0u64;
            for i in (0..n).rev() {
                let v = (poly[i] + carry) % p;
                if i == 0 {
                    carry = v;
                } else {
                    q[i - 1] = v;
                    carry = v * t % p;
                }
            }
            if carry != 0 {
                break;
            }
            m += 1;
            poly = q;
        }
        if m > 0 {
            mults.push(m);
        }
    }
    Ok(mults)
}

pub fn factor_type_mod_p(f: &[u64; 4], p: u64) -> Result<FactorType> {
    let mut m = root_multiplicities(f, p)?;
    m.sort_unstable();
    Ok(match m.as_slice() {
        [] => FactorType::Irred,
        [1] => FactorType::LQ,
        [1, 1, 1] => FactorType::L1L2L3,
        [1, 2] => FactorType::L1sqL2,
        [3] => FactorType::Lcube,
        other => unreachable!("impossible multiplicities {other:?}"),
    })
}

fn reduce_cubic(f: &BinaryCubic, p: u64) -> [u64; 4] {
    f.0.map(|x| x.rem_euclid(p as i64) as u64)
}

pub fn factor_type(f: &BinaryCubic, p: u64) -> Result<FactorType> {
    factor_type_mod_p(&reduce_cubic(f, p), p)
}

pub fn count_p1_zeros(f: &BinaryCubic, p: u64) -> Result<u32> {
    Ok(root_multiplicities(&reduce_cubic(f, p), p)?.len() as u32)
}

/// `N(f_max . h)`: zeros on `P^1(F_p)` of the form of `T(h)`; `p + 1` when it vanishes mod `p`.
pub fn n_of_class(h: &LatticeClass, f_max: &BinaryCubic) -> u64 {
    let f = form_of(h, f_max);
    if f.iter().any(|x| !is_p_integral(x, h.p)) {
        // only used for ring classes
        panic!("form of a non-ring class");
    }
    let red = f.map(|x| mod_p(&x, h.p).expect("integral"));
    match root_multiplicities(&red, h.p) {
        Ok(m) => m.len() as u64,
        Err(_) => h.p + 1,
    }
}

// ---- maximal orders ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum SplittingType {
    Split,
    Partial,
    Inert,
}

impl SplittingType {
    pub const ALL: [SplittingType; 3] = [SplittingType::Split, SplittingType::Partial, SplittingType::Inert];

    pub fn factor_type(&self) -> FactorType {
        match self {
            SplittingType::Split => FactorType::L1L2L3,
            SplittingType::Partial => FactorType::LQ,
            SplittingType::Inert => FactorType::Irred,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SplittingType::Split => "split",
            SplittingType::Partial => "partial",
            SplittingType::Inert => "inert",
        }
    }
}

impl FromStr for SplittingType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "split" => Ok(SplittingType::Split),
            "partial" => Ok(SplittingType::Partial),
            "inert" => Ok(SplittingType::Inert),
            _ => Err(Error::Parse(format!("unknown splitting type `{s}`"))),
        }
    }
}

/// Requires `p` prime, `p > 3`, and `p` not dividing the discriminant.
pub fn validate_fmax(f: &BinaryCubic, p: u64) -> Result<()> {
    if !is_prime(p) || p <= 3 {
        return Err(Error::Invalid(format!("p = {p} must be a prime greater than 3")));
    }
    if f.disc().rem_euclid(p as i64) == 0 {
        return Err(Error::Invalid(format!("{f} is degenerate mod {p}")));
    }
    Ok(())
}

pub fn splitting_type_of(f: &BinaryCubic, p: u64) -> Result<SplittingType> {
    validate_fmax(f, p)?;
    Ok(match factor_type(f, p)? {
        FactorType::L1L2L3 => SplittingType::Split,
        FactorType::LQ => SplittingType::Partial,
        FactorType::Irred => SplittingType::Inert,
        _ => unreachable!("nondegenerate cubic"),
    })
}

/// A small maximal-order form of the given splitting type at `p`.
pub fn standard_fmax(p: u64, t: SplittingType) -> BinaryCubic {
    if t == SplittingType::Split {
        return BinaryCubic::new(0, 1, -1, 0);
    }
    let range = |n: i64| (0..=2 * n).map(move |k| if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) });
    for size in 1..=p as i64 {
        for c in range(size) {
            for d in range(size) {
                let cands = [BinaryCubic::new(1, 0, c, 0), BinaryCubic::new(1, 0, c, d)];
                for f in cands {
                    if splitting_type_of(&f, p).ok() == Some(t) {
                        return f;
                    }
                }
            }
        }
    }
    unreachable!("every type occurs among small forms")
}

// ---- enumeration ----

/// All integral classes `[[p^a, b], [0, p^c]]` with `a + c <= max_val`.
pub fn integral_classes(p: u64, max_val: i64) -> Vec<LatticeClass> {
    let mut out = Vec::new();
    for v in 0..=max_val {
        for a in 0..=v {
            let c = v - a;
            let pa = p.pow(a as u32);
            for b in 0..pa {
                out.push(LatticeClass { p, a, c, b: rat(b as i64) });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RingClass {
    pub hnf: [[String; 2]; 2],
    pub content: i64,
    pub val_det: i64,
    pub is_ring: bool,
    #[serde(skip)]
    pub class: LatticeClass,
}

/// All ring classes of determinant valuation at most `max_val`.
pub fn subring_enum(f_max: &BinaryCubic, p: u64, max_val: i64) -> Result<Vec<RingClass>> {
    validate_fmax(f_max, p)?;
    let mut out: Vec<RingClass> = integral_classes(p, max_val)
        .into_par_iter()
        .filter(|h| is_ring(h, f_max))
        .map(|h| RingClass {
            hnf: h.hnf_strings(),
            content: content(&h, f_max),
            val_det: h.val_det(),
            is_ring: true,
            class: h,
        })
        .collect();
    out.sort_by(|x, y| (x.val_det, &x.class).cmp(&(y.val_det, &y.class)));
    Ok(out)
}

/// Sublattices of `Z^3` of index `p^k`, in row Hermite form, that contain `1` and are rings.
pub fn brute_force_subring_count(f: &BinaryCubic, p: i64, k: u32) -> usize {
    let t = df_ring(f);
    let mut count = 0;
    for e0 in 0..=k {
        for e1 in 0..=k - e0 {
            let e2 = k - e0 - e1;
            let (d0, d1, d2) = (p.pow(e0), p.pow(e1), p.pow(e2));
            // contains 1 = (1, 0, 0) iff d0 == 1
            if d0 != 1 {
                continue;
            }
            for x12 in 0..d2 {
                let rows = [[rat(1), rat(0), rat(0)], [rat(0), rat(d1), rat(x12)], [rat(0), rat(0), rat(d2)]];
                let member = |v: &RingElt| -> bool {
                    // v = c1 r1 + c2 r2 + c0 r0 with integer c
                    let c1 = &v[1] / rat(d1);
                    if !c1.is_integer() {
                        return false;
                    }
                    let rest = &v[2] - &c1 * rat(x12);
                    (rest / rat(d2)).is_integer() && v[0].is_integer()
                };
                let closed = (0..3).all(|i| (i..3).all(|j| member(&t.mul(&rows[i], &rows[j]))));
                if closed {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Change of good basis `w' = g11 w + g12 t + s1`, `t' = g21 w + g22 t + s2`, with `s` fixed by `w't'` in `Z`.
/// Returns the form read off the new table.
pub fn form_after_basis_change(f: &BinaryCubic, g: &Mat2<Rational>) -> Result<[Rational; 4]> {
    let tab = df_ring(f);
    let z = Rational::zero;
    let w0 = [z(), g[0][0].clone(), g[0][1].clone()];
    let t0 = [z(), g[1][0].clone(), g[1][1].clone()];
    // (w0 + s1)(t0 + s2) = w0 t0 + s2 w0 + s1 t0 + s1 s2: kill the w, t parts.
    let prod = tab.mul(&w0, &t0);
    let det = det2(g);
    if det.is_zero() {
        return Err(Error::Singular);
    }
    // s2 w0 + s1 t0 = -(prod_w, prod_t)
    let (pw, pt) = (-prod[1].clone(), -prod[2].clone());
    let s2 = (&pw * &t0[2] - &pt * &t0[1]) / &det;
    let s1 = (&w0[1] * &pt - &w0[2] * &pw) / &det;
    let w = [s1, w0[1].clone(), w0[2].clone()];
    let t = [s2, t0[1].clone(), t0[2].clone()];
    // express products in the new basis
    let to_new = |x: &RingElt| -> RingElt {
        let cw = (&x[1] * &t[2] - &x[2] * &t[1]) / &det;
        let ct = (&w[1] * &x[2] - &w[2] * &x[1]) / &det;
        [&x[0] - &cw * &w[0] - &ct * &t[0], cw, ct]
    };
    let ww = to_new(&tab.mul(&w, &w));
    let tt = to_new(&tab.mul(&t, &t));
    let wt = to_new(&tab.mul(&w, &t));
    let out = [ww[2].clone(), -ww[1].clone(), tt[2].clone(), -tt[1].clone()];
    let check = df_ring_q(&out);
    if check.ww != ww || check.tt != tt || check.wt != wt {
        return Err(Error::Invalid("new basis is not a good basis".into()));
    }
    Ok(out)
}
