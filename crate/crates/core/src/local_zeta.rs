//! Local unramified computation: `P_h`, `B_0`, Hecke translates, `M_h`, the
//! cubic ring identity, the exponential sum `D_chi`, and Dirichlet series rows.
//!
//! Throughout `z = q^-s` with `q = p` a concrete prime.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra_core::{rat, ser_rational, Rational, ZetaPoly};
use crate::cubic_rings::{
    content, count_p1_zeros, epsilon, factor_type_mod_p, integral_classes, is_ring, n_of_class, p_pow,
    primitive_form_mod_p, splitting_type_of, validate_fmax, BinaryCubic, FactorType, LatticeClass, SplittingType,
};
use crate::error::{Error, Result};

/// How `P` is read on translate classes that are not rings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PConvention {
    /// `P = 0` whenever the content is negative.
    Zero,
    /// `P = z^(v-c) (1 - z^(c+1))` at the possibly negative content.
    Extended,
}

impl PConvention {
    pub const ALL: [PConvention; 2] = [PConvention::Zero, PConvention::Extended];
}

/// `z^(v-c) (1 - z^(c+1))`.
pub fn p_poly(v: i64, c: i64) -> ZetaPoly {
    &ZetaPoly::z_pow(v - c) - &ZetaPoly::z_pow(v + 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CosetTerm {
    pub lattice: LatticeClass,
    pub v: i64,
    pub c: i64,
    pub poly: ZetaPoly,
}

impl CosetTerm {
    pub fn new(h: &LatticeClass, f_max: &BinaryCubic, conv: PConvention) -> Self {
        let v = h.val_det();
        let c = content(h, f_max);
        let poly = if c < 0 && conv == PConvention::Zero { ZetaPoly::zero() } else { p_poly(v, c) };
        CosetTerm { lattice: h.clone(), v, c, poly }
    }
}

/// `P_h` for a ring class.
pub fn p_h(h: &LatticeClass, f_max: &BinaryCubic) -> Result<ZetaPoly> {
    let c = content(h, f_max);
    if c < 0 {
        return Err(Error::NotARing(c));
    }
    Ok(p_poly(h.val_det(), c))
}

/// `1 + (q+1) z + q z^2 + (q^2+q) z^3 + q^2 z^4`.
pub fn b0(q: u64) -> ZetaPoly {
    let q = q as i64;
    ZetaPoly::from_ints(0, &[1, q + 1, q, q * q + q, q * q])
}

/// `N_0 = A(z) + B(z) T`, returned as `(A, B)`.
pub fn n0(q: u64) -> (ZetaPoly, ZetaPoly) {
    let qi = Rational::new(1.into(), (q as i64).into());
    let a = ZetaPoly::new(
        0,
        vec![rat(1), &qi + rat(1), qi.clone(), &qi * &qi + &qi, &qi * &qi],
    );
    let b = ZetaPoly::monomial(-qi, 2);
    (a, b)
}

/// Rewrites a polynomial in `z = q^-s` as a polynomial in `q^-(s+k)`: `z -> q^-k z`.
pub fn shift_s(f: &ZetaPoly, q: u64, k: i64) -> ZetaPoly {
    f.subst_scale(&p_pow(q, -k))
}

/// `zeta(a s + b)^-1 = 1 - q^-b z^a`.
pub fn zeta_inv(q: u64, a: i64, b: i64) -> ZetaPoly {
    &ZetaPoly::one() - &ZetaPoly::monomial(p_pow(q, -b), a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hecke {
    Tp,
    TpInv,
    CenterP,
    CenterPInv,
}

/// Coset translates `h y_i` with multiplicities.
pub fn hecke_translate(h: &LatticeClass, which: Hecke) -> Vec<(LatticeClass, i64)> {
    match which {
        Hecke::Tp => h.sublattices_index_p().into_iter().map(|y| (y, 1)).collect(),
        Hecke::TpInv => h.scale_p(-1).sublattices_index_p().into_iter().map(|y| (y, 1)).collect(),
        Hecke::CenterP => vec![(h.scale_p(1), 1)],
        Hecke::CenterPInv => vec![(h.scale_p(-1), 1)],
    }
}

/// Terms of `M_h` as `(weight, term)`.
pub fn m_h_terms(h: &LatticeClass, f_max: &BinaryCubic, conv: PConvention) -> Vec<(Rational, CosetTerm)> {
    let q = rat(h.p as i64);
    let n = rat(n_of_class(h, f_max) as i64);
    let mut out = Vec::new();
    let mut add = |which: Hecke, w: Rational| {
        for (y, m) in hecke_translate(h, which) {
            out.push((&w * rat(m), CosetTerm::new(&y, f_max, conv)));
        }
    };
    add(Hecke::CenterP, &q * &q);
    add(Hecke::Tp, q.clone());
    add(Hecke::TpInv, rat(1));
    add(Hecke::CenterPInv, rat(1));
    out.push((n - rat(1), CosetTerm::new(h, f_max, conv)));
    out
}

/// `q^2 P_hp + q P_{h*T(p)} + P_{h*T(p^-1)} + P_{hp^-1} + (N(f_max . h) - 1) P_h`.
pub fn m_h(h: &LatticeClass, f_max: &BinaryCubic, conv: PConvention) -> ZetaPoly {
    m_h_terms(h, f_max, conv)
        .into_iter()
        .fold(ZetaPoly::zero(), |acc, (w, t)| &acc + &t.poly.scale(&w))
}

/// `L(E, s)^-1` as a polynomial in `z`.
pub fn local_l_e_inv(t: SplittingType) -> ZetaPoly {
    match t {
        SplittingType::Split => ZetaPoly::from_ints(0, &[1, -2, 1]),
        SplittingType::Partial => ZetaPoly::from_ints(0, &[1, 0, -1]),
        SplittingType::Inert => ZetaPoly::from_ints(0, &[1, 1, 1]),
    }
}

/// `B_0 P_h - z^2 M_h`.
pub fn crident_numerator(h: &LatticeClass, f_max: &BinaryCubic, conv: PConvention) -> Result<ZetaPoly> {
    let ph = p_h(h, f_max)?;
    Ok(&(&b0(h.p) * &ph) - &m_h(h, f_max, conv).mul_z_pow(2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CridentCheck {
    pub class: LatticeClass,
    pub v: i64,
    pub c: i64,
    pub val: i64,
    pub factor_type: FactorType,
    pub numerator: ZetaPoly,
    pub lhs: ZetaPoly,
    pub rhs: ZetaPoly,
}

impl CridentCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn row(&self) -> CridentRow {
        CridentRow {
            hnf: self.class.hnf_strings(),
            val_det: self.v,
            content: self.c,
            mat_val: self.val,
            factor_type: self.factor_type,
            numerator: self.numerator.to_string(),
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
            holds: self.holds(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CridentRow {
    pub hnf: [[String; 2]; 2],
    pub val_det: i64,
    pub content: i64,
    pub mat_val: i64,
    pub factor_type: FactorType,
    pub numerator: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// `1[val(h) = c(h)] z^(v-c) (1 + (N(f_max) - eps(h_0)) z)`.
pub fn crident_rhs(h: &LatticeClass, f_max: &BinaryCubic) -> Result<ZetaPoly> {
    let c = content(h, f_max);
    if c < 0 {
        return Err(Error::NotARing(c));
    }
    if h.mat_val() != c {
        return Ok(ZetaPoly::zero());
    }
    let n = count_p1_zeros(f_max, h.p)? as i64;
    let e = epsilon(h) as i64;
    Ok(ZetaPoly::from_ints(h.val_det() - c, &[1, n - e]))
}

/// Both sides of the cubic ring identity; the left side is an exact quotient.
pub fn verify_crident(h: &LatticeClass, f_max: &BinaryCubic, conv: PConvention) -> Result<CridentCheck> {
    let t = splitting_type_of(f_max, h.p)?;
    let numerator = crident_numerator(h, f_max, conv)?;
    let den = &ZetaPoly::from_ints(0, &[1, h.p as i64]) * &local_l_e_inv(t);
    let lhs = numerator
        .div_exact(&den)
        .ok_or_else(|| Error::InexactDivision(format!("{numerator} by {den} at h = {h}")))?;
    let rhs = crident_rhs(h, f_max)?;
    let ft = factor_type_mod_p(&primitive_form_mod_p(h, f_max), h.p)?;
    Ok(CridentCheck { class: h.clone(), v: h.val_det(), c: content(h, f_max), val: h.mat_val(), factor_type: ft, numerator, lhs, rhs })
}

/// All ring classes with content at most `max_content` and determinant valuation at most `max_val`.
pub fn crident_sweep(
    f_max: &BinaryCubic,
    p: u64,
    max_content: i64,
    max_val: i64,
    conv: PConvention,
) -> Result<Vec<CridentCheck>> {
    validate_fmax(f_max, p)?;
    let mut out: Vec<CridentCheck> = integral_classes(p, max_val)
        .into_par_iter()
        .filter(|h| is_ring(h, f_max) && content(h, f_max) <= max_content)
        .map(|h| verify_crident(&h, f_max, conv))
        .collect::<Result<_>>()?;
    out.sort_by(|x, y| (x.v, &x.class).cmp(&(y.v, &y.class)));
    Ok(out)
}

/// The closed form of `B_0 P_h - z^2 M_h` for `c >= 2`, by factor type of `f_0`.
pub fn five_case_table(t: FactorType, v: i64, c: i64, q: u64) -> ZetaPoly {
    let qi = q as i64;
    let lin = ZetaPoly::from_ints(0, &[1, qi]);
    let one_minus = |k: usize| {
        let mut co = vec![0; k + 1];
        co[0] = 1;
        co[k] = -1;
        ZetaPoly::from_ints(0, &co)
    };
    let body = match t {
        FactorType::Irred => &lin * &one_minus(3),
        FactorType::LQ => &lin * &one_minus(2),
        FactorType::L1L2L3 => &(&lin * &one_minus(1)) * &(&one_minus(1) * &ZetaPoly::from_ints(0, &[1, 2])),
        FactorType::L1sqL2 => &(&lin * &one_minus(1)) * &one_minus(2),
        FactorType::Lcube => ZetaPoly::zero(),
    };
    body.mul_z_pow(v - c)
}

/// The expanded `M_h` for `c >= 2`, by factor type of `f_0`.
pub fn m_h_table(t: FactorType, v: i64, c: i64, q: u64) -> ZetaPoly {
    let q = rat(q as i64);
    let pz = |e: i64, k: i64| &ZetaPoly::z_pow(v - c + e) - &ZetaPoly::z_pow(v - c + e + k);
    let g = &(&pz(1, c + 2).scale(&(&q * &q)) + &pz(-1, c)) + &pz(0, c + 1).scale(&q);
    let one = rat(1);
    let terms: Vec<(Rational, ZetaPoly)> = match t {
        FactorType::Irred => vec![(&q * (&q + &one), pz(2, c)), (&q + &one, pz(1, c - 1))],
        FactorType::LQ => vec![
            (q.clone(), pz(1, c + 1)),
            (&q * &q, pz(2, c)),
            (one.clone(), pz(0, c)),
            (q.clone(), pz(1, c - 1)),
        ],
        FactorType::L1L2L3 => vec![
            (&q * rat(3), pz(1, c + 1)),
            (&q * (&q - rat(2)), pz(2, c)),
            (rat(3), pz(0, c)),
            (&q - rat(2), pz(1, c - 1)),
        ],
        FactorType::L1sqL2 => vec![
            (q.clone(), pz(1, c + 1)),
            (q.clone(), pz(0, c + 2)),
            (&q * (&q - &one), pz(2, c)),
            (one.clone(), pz(0, c)),
            (one.clone(), pz(-1, c + 1)),
            (&q - &one, pz(1, c - 1)),
        ],
        FactorType::Lcube => vec![
            (q.clone(), pz(-1, c + 3)),
            (&q * &q, pz(2, c)),
            (one.clone(), pz(-2, c + 2)),
            (q.clone(), pz(1, c - 1)),
        ],
    };
    terms.into_iter().fold(g, |acc, (w, p)| &acc + &p.scale(&w))
}

// ---- exponential sum ----

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DchiResult {
    pub p: u64,
    pub k: u32,
    pub r: u32,
    /// Raw sum over the congruence set.
    pub sum_re: f64,
    pub sum_im: f64,
    /// `sum / q^k`.
    pub normalized_re: f64,
    pub normalized_im: f64,
    pub closed_form: i64,
}

impl DchiResult {
    pub fn normalized(&self) -> Complex64 {
        Complex64::new(self.normalized_re, self.normalized_im)
    }

    pub fn error(&self) -> f64 {
        (self.normalized() - Complex64::new(self.closed_form as f64, 0.0)).norm()
    }
}

/// Closed form for `x = p^k diag(p^r, 1)`: `0` unless `p^r | d`; then `1`, `N(f_max) - eps`, `0` for `k = 0, 1, >= 2`.
pub fn dchi_closed_form(f_max: &BinaryCubic, p: u64, k: u32, r: u32) -> Result<i64> {
    validate_fmax(f_max, p)?;
    let d = f_max.0[3];
    if d.rem_euclid((p as i64).pow(r)) != 0 {
        return Ok(0);
    }
    Ok(match k {
        0 => 1,
        1 => count_p1_zeros(f_max, p)? as i64 - if r == 0 { 1 } else { 2 },
        _ => 0,
    })
}

/// `f(x + t y, y)` for the least `t` with `p^r | f(t, 1)`, if any.
pub fn root_translate(f: &BinaryCubic, p: u64, r: u32) -> Option<BinaryCubic> {
    let m = (p as i64).pow(r);
    let [a, b, c, d] = f.0;
    (0..m).find(|&t| f.eval(t, 1).rem_euclid(m) == 0).map(|t| {
        BinaryCubic::new(a, 3 * a * t + b, 3 * a * t * t + 2 * b * t + c, a * t * t * t + b * t * t + c * t + d)
    })
}

/// Brute force of `sum psi(<omega, (p^-r alpha, beta, gamma, delta)> / p^k)` over
/// `alpha gamma - p^r beta^2`, `alpha delta - p^r beta gamma`, `gamma^2 - beta delta` in `p^k`.
///
/// `alpha` runs over `Z/p^(k+r)` and the total is divided by `p^r`, which agrees with the sum
/// over `Z/p^k` when `p^r | d`.
pub fn exp_sum_dchi(f_max: &BinaryCubic, p: u64, k: u32, r: u32) -> Result<DchiResult> {
    let closed_form = dchi_closed_form(f_max, p, k, r)?;
    let m = p.pow(k) as i64;
    let ma = p.pow(k + r) as i64;
    let pr = p.pow(r) as i64;
    let [a, b, c, d] = f_max.0;
    let roots: Vec<Complex64> = (0..ma).map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / ma as f64)).collect();
    let md = |x: i64, n: i64| x.rem_euclid(n);
    let sum: Complex64 = (0..ma)
        .into_par_iter()
        .map(|alpha| {
            let mut s = Complex64::zero();
            for beta in 0..m {
                for gamma in 0..m {
                    if md(alpha * gamma - pr * beta * beta, m) != 0 {
                        continue;
                    }
                    for delta in 0..m {
                        if md(alpha * delta - pr * beta * gamma, m) != 0 || md(gamma * gamma - beta * delta, m) != 0 {
                            continue;
                        }
                        // <omega, w> = a delta - b gamma + c beta - d alpha, scaled to Z/p^(k+r)
                        let e = pr * md(a * delta - b * gamma + c * beta, m) - md(d * alpha, ma);
                        s += roots[md(e, ma) as usize];
                    }
                }
            }
            s
        })
        .sum::<Complex64>()
        / pr as f64;
    let norm = sum / m as f64;
    Ok(DchiResult {
        p,
        k,
        r,
        sum_re: sum.re,
        sum_im: sum.im,
        normalized_re: norm.re,
        normalized_im: norm.im,
        closed_form,
    })
}

// ---- Dirichlet series ----

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalRow {
    pub hnf: [[String; 2]; 2],
    pub content: i64,
    /// Valuation of `det(x)`: `[O_E : T(x)] = p^val_det`.
    pub val_det: i64,
    pub lambda_val: i64,
    /// Exponent of `z` in `|lambda det(x)|^s`.
    pub z_exp: i64,
    /// `|lambda^2 det(x)|^-2`.
    #[serde(serialize_with = "ser_rational")]
    pub weight: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub coeff: Rational,
    #[serde(skip)]
    pub class: LatticeClass,
}

/// Rows `(x, lambda)` of `sum L(m(lambda x) v) |lambda^2 det x|^-2 |lambda det x|^s` with `z`-exponent at most `max_exp`.
pub fn local_dirichlet<F>(f_max: &BinaryCubic, p: u64, max_exp: i64, oracle: F) -> Result<Vec<LocalRow>>
where
    F: Fn(&LatticeClass) -> Rational,
{
    let rings = crate::cubic_rings::subring_enum(f_max, p, max_exp)?;
    let q = rat(p as i64);
    let mut out = Vec::new();
    for x in &rings {
        for l in 0..=max_exp - x.val_det {
            let h = x.class.scale_p(l);
            out.push(LocalRow {
                hnf: x.hnf.clone(),
                content: x.content,
                val_det: x.val_det,
                lambda_val: l,
                z_exp: l + x.val_det,
                weight: num_traits::pow(q.clone(), (4 * l + 2 * x.val_det) as usize),
                coeff: oracle(&h),
                class: x.class.clone(),
            });
        }
    }
    out.sort_by(|a, b| (a.z_exp, a.lambda_val, &a.class).cmp(&(b.z_exp, b.lambda_val, &b.class)));
    Ok(out)
}

/// Regroups local rows by `h = lambda x` into `sum z^exp`.
pub fn regroup_by_h(rows: &[LocalRow]) -> BTreeMap<LatticeClass, ZetaPoly> {
    let mut out: BTreeMap<LatticeClass, ZetaPoly> = BTreeMap::new();
    for r in rows {
        let h = r.class.scale_p(r.lambda_val);
        let e = out.entry(h).or_insert_with(ZetaPoly::zero);
        *e = &*e + &ZetaPoly::z_pow(r.z_exp);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalPart {
    pub p: u64,
    pub hnf: [[String; 2]; 2],
    pub val_det: i64,
    pub lambda_val: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalRow {
    /// `[O_E : T]`.
    pub index: u64,
    pub n: u64,
    #[serde(serialize_with = "ser_rational")]
    pub coeff: Rational,
    pub parts: Vec<LocalPart>,
}

/// Rows of the global Dirichlet series with `index * n <= bound`, assembled prime by prime.
///
/// The coefficient of a row is the product of the local oracle values.
pub fn dirichlet_global_rows<F>(
    data: &[(u64, SplittingType, BinaryCubic)],
    bound: u64,
    oracle: F,
) -> Result<Vec<GlobalRow>>
where
    F: Fn(u64, &LatticeClass) -> Rational,
{
    let mut seen = std::collections::BTreeSet::new();
    let mut acc = vec![GlobalRow { index: 1, n: 1, coeff: Rational::one(), parts: Vec::new() }];
    for (p, t, f) in data {
        if !seen.insert(*p) {
            return Err(Error::Invalid(format!("prime {p} listed twice")));
        }
        if splitting_type_of(f, *p)? != *t {
            return Err(Error::Invalid(format!("{f} is not of type {} at {p}", t.name())));
        }
        let mut max_exp = 0i64;
        while p.pow(max_exp as u32 + 1) <= bound {
            max_exp += 1;
        }
        let rows = local_dirichlet(f, *p, max_exp, |h| oracle(*p, h))?;
        let mut next = Vec::new();
        for g in &acc {
            for r in &rows {
                let idx = g.index * p.pow(r.val_det as u32);
                let n = g.n * p.pow(r.lambda_val as u32);
                if idx * n > bound {
                    continue;
                }
                let mut parts = g.parts.clone();
                parts.push(LocalPart { p: *p, hnf: r.hnf.clone(), val_det: r.val_det, lambda_val: r.lambda_val });
                next.push(GlobalRow { index: idx, n, coeff: &g.coeff * &r.coeff, parts });
            }
        }
        acc = next;
    }
    acc.sort_by(|a, b| {
        (a.index * a.n, a.index, a.n)
            .cmp(&(b.index * b.n, b.index, b.n))
            .then_with(|| format!("{:?}", a.parts).cmp(&format!("{:?}", b.parts)))
    });
    Ok(acc)
}
