//! K-Bessel functions, the generalized Whittaker function `W_w`, residuals of the
//! differential-difference system it solves, and archimedean integral identities.
//!
//! Cubic forms are coefficient arrays `(a, b, c, d)` of `a x^3 + b x^2 y + c x y^2 + d y^3`;
//! `h_w(z) = a z^3 + b z^2 + c z + d`. The functional `omega` in the residual equations is `-w`,
//! so that `p_chi = h_w`. Any `2 pi` rescaling of `w` is left to the caller.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64 as C;
use num_traits::{One, Zero};
use quadrature::double_exponential::integrate;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::algebra_core::Rational;
use crate::heis_so7::{act3_cubic, symplectic_cubic, Mat2};
use crate::{Error, Result, WVector};

const I: C = C { re: 0.0, im: 1.0 };

// ---------------------------------------------------------------- quadrature

/// Sum of double exponential integrals over consecutive breakpoints, with summed error estimates.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> (f64, f64) {
    breaks.windows(2).fold((0.0, 0.0), |(s, e), w| {
        let o = integrate(&f, w[0], w[1], tol);
        (s + o.integral, e + o.error_estimate)
    })
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

fn geomspace(a: f64, b: f64, ratio: f64) -> Vec<f64> {
    let n = ((b / a).ln() / ratio.ln()).ceil().max(1.0) as usize;
    (0..=n).map(|i| a * (b / a).powf(i as f64 / n as f64)).collect()
}

// ---------------------------------------------------------------- Bessel

fn ln_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn cosh_m1(t: f64) -> f64 {
    let s = (0.5 * t).sinh();
    2.0 * s * s
}

/// `ln ∫_0^∞ cosh(t)^m cosh(nu t) exp(-x (cosh t - 1)) dt`.
fn k_integral_ln(nu: f64, m: u32, x: f64) -> f64 {
    let nu = nu.abs();
    let mf = m as f64;
    let g = |t: f64| -x * cosh_m1(t) + ln_cosh(nu * t) + mf * ln_cosh(t);
    let step = 0.05;
    let mut gmax = g(0.0);
    let mut t = 0.0;
    loop {
        t += step;
        let v = g(t);
        if v > gmax {
            gmax = v;
        } else if v < gmax - 46.0 || t > 740.0 {
            break;
        }
    }
    let pieces = ((t / 0.75).ceil() as usize).clamp(2, 2000);
    let (s, _) = integrate_pieces(|u| (g(u) - gmax).exp(), &linspace(0.0, t, pieces), 1e-16);
    gmax + s.ln()
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Bessel argument must be positive, got {x}")))
    }
}

/// `ln K_nu(x)` for `x > 0`.
pub fn bessel_k_ln(nu: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(k_integral_ln(nu, 0, x) - x)
}

/// `e^x K_nu(x)`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(k_integral_ln(nu, 0, x).exp())
}

/// `K_nu(x) = ∫_0^∞ exp(-x cosh t) cosh(nu t) dt`. Overflow is reported; use [`bessel_k_ln`] there.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let l = bessel_k_ln(nu, x)?;
    if l > 709.0 {
        return Err(Error::Domain(format!("K_{nu}({x}) overflows; ln value {l}")));
    }
    Ok(l.exp())
}

/// `d^m/dx^m K_nu(x) = (-1)^m ∫_0^∞ cosh(t)^m cosh(nu t) exp(-x cosh t) dt`.
pub fn bessel_k_deriv(nu: f64, m: u32, x: f64) -> Result<f64> {
    check_x(x)?;
    let v = (k_integral_ln(nu, m, x) - x).exp();
    Ok(if m % 2 == 0 { v } else { -v })
}

/// `K_n(x)` for integer `n` by upward recurrence from `K_0, K_1`.
pub fn bessel_k_int(n: i32, x: f64) -> Result<f64> {
    let n = n.unsigned_abs();
    let k0 = bessel_k(0.0, x)?;
    if n == 0 {
        return Ok(k0);
    }
    let mut prev = k0;
    let mut cur = bessel_k(1.0, x)?;
    for j in 1..n {
        let next = prev + 2.0 * j as f64 / x * cur;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Closed form of `K_{n + 1/2}(x)`.
pub fn bessel_k_half(n: u32, x: f64) -> Result<f64> {
    check_x(x)?;
    let n = n as i64;
    let mut sum = 0.0;
    let mut term = 1.0;
    // term_k = (n+k)! / (k! (n-k)! (2x)^k)
    for k in 0..=n {
        sum += term;
        term *= ((n + k + 1) * (n - k)) as f64 / ((k + 1) as f64 * 2.0 * x);
    }
    Ok((PI / (2.0 * x)).sqrt() * (-x).exp() * sum)
}

/// `d^m/dx^m K_0` expanded by `K_j' = -(K_{j-1} + K_{j+1})/2` into `(j, coefficient)` pairs.
pub fn k0_derivative_expansion(m: u32) -> Vec<(i32, f64)> {
    let mut cur: std::collections::BTreeMap<i32, f64> = [(0, 1.0)].into();
    for _ in 0..m {
        let mut next = std::collections::BTreeMap::new();
        for (&j, &c) in &cur {
            *next.entry(j - 1).or_insert(0.0) -= c / 2.0;
            *next.entry(j + 1).or_insert(0.0) -= c / 2.0;
        }
        cur = next;
    }
    cur.into_iter().collect()
}

/// Relative residuals of the five Bessel identities at `(nu, x)`, derivatives from their integrals.
///
/// 1. `((x d)^2 - nu^2) K = x^2 K`
/// 2. `-x^-nu d(x^nu K_nu) = K_{nu-1}`
/// 3. `-x^nu d(x^-nu K_nu) = K_{nu+1}`
/// 4. `-(x d - nu) K_nu = x K_{nu+1}`
/// 5. `-(x d + nu) K_nu = x K_{nu-1}`
pub fn bessel_identity_residuals(nu: f64, x: f64) -> Result<[f64; 5]> {
    let k = |t: f64| bessel_k(nu, t);
    let d1 = bessel_k_deriv(nu, 1, x)?;
    let d2 = bessel_k_deriv(nu, 2, x)?;
    let kv = k(x)?;
    let km = bessel_k(nu - 1.0, x)?;
    let kp = bessel_k(nu + 1.0, x)?;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let r1 = rel(x * x * d2 + x * d1 - nu * nu * kv, x * x * kv);
    let r2 = rel(-(d1 + nu / x * kv), km);
    let r3 = rel(-(d1 - nu / x * kv), kp);
    let r4 = rel(-(x * d1 - nu * kv), x * kp);
    let r5 = rel(-(x * d1 + nu * kv), x * km);
    Ok([r1, r2, r3, r4, r5])
}

// ---------------------------------------------------------------- h_w and w >= 0

pub fn h_w_eval(w: &[f64; 4], z: C) -> C {
    ((z * w[0] + w[1]) * z + w[2]) * z + w[3]
}

pub fn h_w_deriv(w: &[f64; 4], z: C) -> C {
    (z * (3.0 * w[0]) + 2.0 * w[1]) * z + w[2]
}

/// Coefficients of `h_w` for a rational `w`.
pub fn h_w_poly(w: &WVector) -> [Rational; 4] {
    w.cubic()
}

pub fn h_w_poly_f64(w: &WVector) -> [f64; 4] {
    w.cubic().map(|c| num_traits::ToPrimitive::to_f64(&c).unwrap_or(f64::NAN))
}

/// `b^2 c^2 - 4 a c^3 - 4 b^3 d - 27 a^2 d^2 + 18 a b c d`.
pub fn cubic_disc_f64(f: &[f64; 4]) -> f64 {
    let [a, b, c, d] = *f;
    b * b * c * c - 4.0 * a * c * c * c - 4.0 * b * b * b * d - 27.0 * a * a * d * d + 18.0 * a * b * c * d
}

/// `w >= 0`: `h_w` has no root in the open upper half-plane. Exact for rational `w`.
pub fn w_nonneg(w: &WVector) -> Result<bool> {
    let c = w.cubic();
    if c.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroCharacter);
    }
    let [a, b, cc, d] = c;
    let disc = &b * &b * &cc * &cc - Rational::from_integer(4.into()) * &a * &cc * &cc * &cc
        - Rational::from_integer(4.into()) * &b * &b * &b * &d
        - Rational::from_integer(27.into()) * &a * &a * &d * &d
        + Rational::from_integer(18.into()) * &a * &b * &cc * &d;
    Ok(disc >= Rational::zero())
}

/// Floating point version of [`w_nonneg`], tolerant to rounding in the discriminant.
pub fn w_nonneg_f64(w: &[f64; 4]) -> Result<bool> {
    let scale = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroCharacter);
    }
    let u = w.map(|x| x / scale);
    Ok(cubic_disc_f64(&u) >= -1e-12)
}

// ---------------------------------------------------------------- W_w

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WhittakerParams {
    pub n: u32,
    pub w: [f64; 4],
    pub x: f64,
    pub y: f64,
    pub scale: f64,
}

impl WhittakerParams {
    pub fn new(n: u32, w: [f64; 4], x: f64, y: f64, scale: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("weight n must be positive".into()));
        }
        if !(y > 0.0 && scale > 0.0) {
            return Err(Error::Invalid("need y > 0 and scale > 0".into()));
        }
        if !w_nonneg_f64(&w)? {
            return Err(Error::Invalid("h_w has a root in the upper half-plane".into()));
        }
        Ok(WhittakerParams { n, w, x, y, scale })
    }

    pub fn m(&self) -> Mat2<f64> {
        m_coords(self.x, self.y, self.scale)
    }

    pub fn z(&self) -> C {
        C::new(self.x, self.y)
    }

    /// `|j(m, i) h_w(m i)| = scale y^{-3/2} |h_w(x + iy)|`.
    pub fn bessel_arg(&self) -> f64 {
        self.scale * self.y.powf(-1.5) * h_w_eval(&self.w, self.z()).norm()
    }

    pub fn with_point(&self, x: f64, y: f64, scale: f64) -> Self {
        WhittakerParams { x, y, scale, ..*self }
    }
}

/// `[[1, x], [0, 1]] diag(y^{1/2}, y^{-1/2}) diag(s, s)`.
pub fn m_coords(x: f64, y: f64, s: f64) -> Mat2<f64> {
    let r = y.sqrt();
    [[s * r, s * x / r], [0.0, s / r]]
}

/// `W_w^v(m) = det^n |det| (|jh|/jh)^v K_v(|jh|)` with `j = (ci+d)^3/det`, `h = h_w((ai+b)/(ci+d))`.
pub fn whittaker_at(n: u32, w: &[f64; 4], m: &Mat2<f64>, v: i32) -> Result<C> {
    if v.unsigned_abs() > n {
        return Err(Error::Invalid(format!("component {v} outside [-{n}, {n}]")));
    }
    if !w_nonneg_f64(w)? {
        return Err(Error::Invalid("h_w has a root in the upper half-plane".into()));
    }
    let [[a, b], [c, d]] = *m;
    let det = a * d - b * c;
    if det == 0.0 {
        return Err(Error::Singular);
    }
    let den = C::new(d, c);
    let z = C::new(b, a) / den;
    let j = den * den * den / det;
    let t = j * h_w_eval(w, z);
    let r = t.norm();
    if r < 1e-300 {
        return Err(Error::AtZero);
    }
    let phase = (C::from(r) / t).powi(v);
    let k = bessel_k(v.abs() as f64, r)?;
    Ok(phase * (det.powi(n as i32) * det.abs() * k))
}

pub fn whittaker_component(p: &WhittakerParams, v: i32) -> Result<C> {
    whittaker_at(p.n, &p.w, &p.m(), v)
}

/// `W^v` for `v = -n..=n`.
pub fn whittaker_components(p: &WhittakerParams) -> Result<Vec<C>> {
    let n = p.n as i32;
    (-n..=n).map(|v| whittaker_component(p, v)).collect()
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Coefficients of `x^{n+v} y^{n-v}`: `W^v / ((n+v)! (n-v)!)`, `v = -n..=n`.
pub fn whittaker_full(p: &WhittakerParams) -> Result<Vec<C>> {
    let n = p.n as i32;
    let comps = whittaker_components(p)?;
    Ok(comps
        .into_iter()
        .zip(-n..=n)
        .map(|(c, v)| c / (factorial((n + v) as u32) * factorial((n - v) as u32)))
        .collect())
}

// ---------------------------------------------------------------- residuals

/// Cubic coefficients of a product of linear forms `alpha u + beta v`.
pub fn linear_product(forms: &[(C, C)]) -> [C; 4] {
    let mut p = vec![C::one()];
    for &(al, be) in forms {
        let mut q = vec![C::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            q[i] += c * al;
            q[i + 1] += c * be;
        }
        p = q;
    }
    let mut out = [C::zero(); 4];
    for (o, c) in out.iter_mut().zip(p) {
        *o = c;
    }
    out
}

fn mat_c(m: &Mat2<f64>) -> Mat2<C> {
    m.map(|r| r.map(C::from))
}

fn real_cubic_c(w: &[f64; 4]) -> [C; 4] {
    w.map(C::from)
}

/// `<omega, m . L1 L2 L3>` with `m` acting by `det^2 f(m^-1 (u, v)^t)`.
pub fn pair_with_translate(omega: &[f64; 4], m: &Mat2<f64>, forms: &[(C, C)]) -> Result<C> {
    let f = act3_cubic(&mat_c(m), &linear_product(forms))?;
    Ok(symplectic_cubic(&real_cubic_c(omega), &f))
}

const V_PLUS_IU: (C, C) = (I, C { re: 1.0, im: 0.0 });
const V_MINUS_IU: (C, C) = (C { re: 0.0, im: -1.0 }, C { re: 1.0, im: 0.0 });

/// Relative residuals per equation family, indexed by `k` in the family's range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    pub eq: [Vec<f64>; 4],
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.eq.iter().flatten().fold(0.0, |m, &x| m.max(x))
    }

    pub fn max_per_family(&self) -> [f64; 4] {
        self.eq.clone().map(|v| v.into_iter().fold(0.0, f64::max))
    }
}

fn rel(e: C, scale: f64) -> f64 {
    if scale == 0.0 {
        e.norm()
    } else {
        e.norm() / scale
    }
}

/// Values and first partials in `x`, `y`, `w` (fourth-order central differences).
struct Stencil {
    val: C,
    dx: C,
    dy: C,
    dw: C,
}

fn stencil<F: Fn(f64, f64, f64) -> C>(f: F, x: f64, y: f64, w: f64, h: f64) -> Stencil {
    let d = |g: &dyn Fn(f64) -> C| (g(-2.0 * h) - g(2.0 * h) + (g(h) - g(-h)) * 8.0) / (12.0 * h);
    Stencil {
        val: f(x, y, w),
        dx: d(&|t| f(x + t, y, w)),
        dy: d(&|t| f(x, y + t, w)),
        dw: d(&|t| f(x, y, w + t)),
    }
}

/// Residuals of the four differential-difference equations for `phi_k(x, y, w)`, `k = -n..n-1`.
///
/// 1. `(w d_w - (2n+2) - k) phi_k + i <omega, m (v+iu)^3> phi_{k+1}`
/// 2. `-(w d_w - (2n+2) + (k+1)) phi_{k+1} + i <omega, m (v-iu)^3> phi_k`
/// 3. `-3i <omega, m (v-iu)^2 (v+iu)> phi_k - (-2y d_y + 2iy d_x + 3(k+1)) phi_{k+1}`
/// 4. `-3i <omega, m (v+iu)^2 (v-iu)> phi_{k+1} + (-2y d_y - 2iy d_x - 3k) phi_k`
///
/// each divided by `|phi_k| + |phi_{k+1}|`.
pub fn schmid_residuals<F>(phi: F, n: u32, w: &[f64; 4], x: f64, y: f64, s: f64, step: f64) -> Result<Residuals>
where
    F: Fn(i32, f64, f64, f64) -> Result<C>,
{
    let ni = n as i32;
    let omega = w.map(|c| -c);
    let m = m_coords(x, y, s);
    let p3p = pair_with_translate(&omega, &m, &[V_PLUS_IU; 3])?;
    let p3m = pair_with_translate(&omega, &m, &[V_MINUS_IU; 3])?;
    let p21 = pair_with_translate(&omega, &m, &[V_MINUS_IU, V_MINUS_IU, V_PLUS_IU])?;
    let p12 = pair_with_translate(&omega, &m, &[V_PLUS_IU, V_PLUS_IU, V_MINUS_IU])?;
    let mut st = Vec::new();
    for k in -ni..=ni {
        phi(k, x, y, s)?;
        st.push(stencil(|a, b, c| phi(k, a, b, c).unwrap_or(C::new(f64::NAN, f64::NAN)), x, y, s, step));
    }
    let at = |k: i32| &st[(k + ni) as usize];
    let wt = (2 * n + 2) as f64;
    let mut eq: [Vec<f64>; 4] = Default::default();
    for k in -ni..ni {
        let (a, b) = (at(k), at(k + 1));
        let kf = k as f64;
        let sc = a.val.norm() + b.val.norm();
        let e1 = a.dw * s - a.val * (wt + kf) + I * p3p * b.val;
        let e2 = -(b.dw * s - b.val * wt + b.val * (kf + 1.0)) + I * p3m * a.val;
        let e3 = -3.0 * I * p21 * a.val - (b.dy * (-2.0 * y) + I * 2.0 * y * b.dx + b.val * (3.0 * (kf + 1.0)));
        let e4 = -3.0 * I * p12 * b.val + (a.dy * (-2.0 * y) - I * 2.0 * y * a.dx - a.val * (3.0 * kf));
        for (v, e) in eq.iter_mut().zip([e1, e2, e3, e4]) {
            v.push(rel(e, sc));
        }
    }
    Ok(Residuals { eq })
}

/// Residuals of the scalar-reduced system for `G_k = phi_k / w^{2n+2}`:
///
/// 1. `(w d_w + k+1) G_{k+1} + w y^{-3/2} p(z*) G_k`, `k = -n..n-1`
/// 2. `(w d_w - k) G_k + w y^{-3/2} p(z) G_{k+1}`, `k = -n..n-1`
/// 3. `(4iy d_z + 3k) G_k + 2iw y^{5/2} D G_{k+1}`, `D = d_z(p(z) y^-3)`, `k = -n..n-1`
/// 4. `(4iy d_z* + 3k) G_k + 2iw y^{5/2} D* G_{k-1}`, `D* = d_z*(p(z*) y^-3)`, `k = -n+1..n`
pub fn gk_residuals<F>(g: F, n: u32, w: &[f64; 4], x: f64, y: f64, s: f64, step: f64) -> Result<Residuals>
where
    F: Fn(i32, f64, f64, f64) -> Result<C>,
{
    let ni = n as i32;
    let z = C::new(x, y);
    let zc = z.conj();
    let (pz, pzc) = (h_w_eval(w, z), h_w_eval(w, zc));
    let dz = h_w_deriv(w, z) * y.powi(-3) + 1.5 * I * pz * y.powi(-4);
    let dzc = h_w_deriv(w, zc) * y.powi(-3) - 1.5 * I * pzc * y.powi(-4);
    let mut st = Vec::new();
    for k in -ni..=ni {
        g(k, x, y, s)?;
        st.push(stencil(|a, b, c| g(k, a, b, c).unwrap_or(C::new(f64::NAN, f64::NAN)), x, y, s, step));
    }
    let at = |k: i32| &st[(k + ni) as usize];
    let c32 = s * y.powf(-1.5);
    let c52 = s * y.powf(2.5);
    let mut eq: [Vec<f64>; 4] = Default::default();
    for k in -ni..ni {
        let (a, b) = (at(k), at(k + 1));
        let kf = k as f64;
        let sc = a.val.norm() + b.val.norm();
        let d_z = (a.dx - I * a.dy) * 0.5;
        let e1 = b.dw * s + b.val * (kf + 1.0) + pzc * c32 * a.val;
        let e2 = a.dw * s - a.val * kf + pz * c32 * b.val;
        let e3 = 4.0 * I * y * d_z + a.val * (3.0 * kf) + 2.0 * I * c52 * dz * b.val;
        eq[0].push(rel(e1, sc));
        eq[1].push(rel(e2, sc));
        eq[2].push(rel(e3, sc));
    }
    for k in -ni + 1..=ni {
        let (a, b) = (at(k), at(k - 1));
        let sc = a.val.norm() + b.val.norm();
        let d_zc = (a.dx + I * a.dy) * 0.5;
        let e4 = 4.0 * I * y * d_zc + a.val * (3.0 * k as f64) + 2.0 * I * c52 * dzc * b.val;
        eq[3].push(rel(e4, sc));
    }
    Ok(Residuals { eq })
}

/// [`schmid_residuals`] applied to `W_w` at the point of `p`.
pub fn ode_residuals(p: &WhittakerParams, step: f64) -> Result<Residuals> {
    let phi = |k: i32, x: f64, y: f64, s: f64| whittaker_component(&p.with_point(x, y, s), k);
    schmid_residuals(phi, p.n, &p.w, p.x, p.y, p.scale, step)
}

/// [`gk_residuals`] applied to `W_w / w^{2n+2}`.
pub fn gk_ode_residuals(p: &WhittakerParams, step: f64) -> Result<Residuals> {
    let wt = (2 * p.n + 2) as i32;
    let g = |k: i32, x: f64, y: f64, s: f64| Ok(whittaker_component(&p.with_point(x, y, s), k)? / s.powi(wt));
    gk_residuals(g, p.n, &p.w, p.x, p.y, p.scale, step)
}

/// `Y_v = G_v / K_v(u)` with `u = w y^{-3/2} |p(z)|`, `K_v` by recurrence.
pub fn y_profile(p: &WhittakerParams) -> Result<Vec<C>> {
    let u = p.bessel_arg();
    let wt = (2 * p.n + 2) as i32;
    let comps = whittaker_components(p)?;
    let n = p.n as i32;
    comps
        .into_iter()
        .zip(-n..=n)
        .map(|(c, v)| Ok(c / p.scale.powi(wt) / bessel_k_int(v, u)?))
        .collect()
}

/// Largest relative spread of `Y_v` across the given `w` scales.
pub fn profile_collapse(p: &WhittakerParams, scales: &[f64]) -> Result<f64> {
    let base = y_profile(p)?;
    let mut dev = 0.0f64;
    for &s in scales {
        let other = y_profile(&p.with_point(p.x, p.y, s))?;
        for (a, b) in base.iter().zip(&other) {
            dev = dev.max((a - b).norm() / a.norm());
        }
    }
    Ok(dev)
}

/// Largest `|Y_{v+1}/Y_v - |p(z)|/p(z)|`.
pub fn phase_recursion_error(p: &WhittakerParams) -> Result<f64> {
    let y = y_profile(p)?;
    let pz = h_w_eval(&p.w, p.z());
    let ph = C::from(pz.norm()) / pz;
    Ok(y.windows(2).map(|w| (w[1] / w[0] - ph).norm()).fold(0.0, f64::max))
}

// ---------------------------------------------------------------- pairing lemma

#[derive(Clone, Debug)]
pub struct PairingCheck {
    pub lhs: [C; 4],
    pub rhs: [C; 4],
}

impl PairingCheck {
    pub fn max_rel_error(&self) -> f64 {
        self.lhs
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

/// Both sides of, with `omega = -w`, `p = h_w`, `m = m(x, y, s)`:
///
/// 1. `<omega, m (-v+iu)^3> = -i s y^{-3/2} p(z*)`
/// 2. `<omega, m (-v-iu)^3> = i s y^{-3/2} p(z)`
/// 3. `3 <omega, m (-v-iu)^2 (-v+iu)> = -2 s y^{5/2} d_z(p(z) y^-3)`
/// 4. `3 <omega, m (-v+iu)^2 (-v-iu)> = -2 s y^{5/2} d_z*(p(z*) y^-3)`
pub fn pairing_lemma_check(w: &[f64; 4], x: f64, y: f64, s: f64) -> Result<PairingCheck> {
    let omega = w.map(|c| -c);
    let m = m_coords(x, y, s);
    let a = (I, C::from(-1.0));
    let b = (-I, C::from(-1.0));
    let lhs = [
        pair_with_translate(&omega, &m, &[a, a, a])?,
        pair_with_translate(&omega, &m, &[b, b, b])?,
        pair_with_translate(&omega, &m, &[b, b, a])? * 3.0,
        pair_with_translate(&omega, &m, &[a, a, b])? * 3.0,
    ];
    let z = C::new(x, y);
    let zc = z.conj();
    let (pz, pzc) = (h_w_eval(w, z), h_w_eval(w, zc));
    let dz = h_w_deriv(w, z) * y.powi(-3) + 1.5 * I * pz * y.powi(-4);
    let dzc = h_w_deriv(w, zc) * y.powi(-3) - 1.5 * I * pzc * y.powi(-4);
    let c = s * y.powf(-1.5);
    let rhs = [-I * c * pzc, I * c * pz, -2.0 * s * y.powf(2.5) * dz, -2.0 * s * y.powf(2.5) * dzc];
    Ok(PairingCheck { lhs, rhs })
}

// ---------------------------------------------------------------- Mellin and Fourier

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MellinCheck {
    pub s: f64,
    pub mu: f64,
    pub nu: f64,
    pub integral: f64,
    pub error_estimate: f64,
    pub gamma_side: f64,
}

impl MellinCheck {
    pub fn rel_error(&self) -> f64 {
        (self.integral - self.gamma_side).abs() / self.gamma_side.abs()
    }
}

/// `2^{s-3} G((s+mu+nu)/2) G((s+mu-nu)/2) G((s-mu+nu)/2) G((s-mu-nu)/2) / G(s)`.
pub fn mellin_gamma_side(s: f64, mu: f64, nu: f64) -> f64 {
    2f64.powf(s - 3.0)
        * gamma((s + mu + nu) / 2.0)
        * gamma((s + mu - nu) / 2.0)
        * gamma((s - mu + nu) / 2.0)
        * gamma((s - mu - nu) / 2.0)
        / gamma(s)
}

/// `∫_0^∞ K_mu(y) K_nu(y) y^{s-1} dy` by quadrature against its gamma-product value.
pub fn mellin_kk(s: f64, mu: f64, nu: f64) -> Result<MellinCheck> {
    let sigma = s - mu.abs() - nu.abs();
    if sigma <= 0.0 {
        return Err(Error::Domain(format!("Mellin integral diverges: s = {s} <= |mu| + |nu|")));
    }
    let f = |y: f64| -> f64 {
        let a = bessel_k_ln(mu, y).unwrap_or(f64::NEG_INFINITY);
        let b = if mu == nu { a } else { bessel_k_ln(nu, y).unwrap_or(f64::NEG_INFINITY) };
        (a + b + (s - 1.0) * y.ln()).exp()
    };
    let lo = 1e-14f64.powf(1.0 / sigma).max(1e-10);
    // integrand ~ e^{-2y} y^{s-2} at infinity
    let mut hi = 2.0f64;
    while -2.0 * hi + (s - 2.0).max(0.0) * hi.ln() > -60.0 {
        hi += 1.0;
    }
    let mut breaks = geomspace(lo, 1.0, 2.0);
    breaks.pop();
    breaks.extend(linspace(1.0, hi, (hi - 1.0).ceil() as usize));
    let (body, err) = integrate_pieces(f, &breaks, 1e-15);
    // power-law tail on (0, lo)
    let (f0, f1) = (f(lo), f(2.0 * lo));
    let beta = (f1 / f0).log2();
    if beta <= -1.0 {
        return Err(Error::Domain("Mellin integrand not integrable at 0".into()));
    }
    let tail = f0 * lo / (beta + 1.0);
    Ok(MellinCheck {
        s,
        mu,
        nu,
        integral: body + tail,
        error_estimate: err + 0.1 * tail.abs(),
        gamma_side: mellin_gamma_side(s, mu, nu),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FourierCheck {
    pub s: f64,
    pub r: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub tail_bound: f64,
}

impl FourierCheck {
    pub fn rel_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs()
    }
}

/// `G(s)/(2 G(1/2)) ∫_R e^{irx} (x^2+y^2)^{-s} dx` against `(r/2y)^{s-1/2} K_{s-1/2}(ry)`.
///
/// The integral runs over whole periods up to `X >= 200`, plus the first integration-by-parts
/// term of the tail.
pub fn fourier_kernel_check(s: f64, r: f64, y: f64) -> Result<FourierCheck> {
    if !(s > 0.5 && r > 0.0 && y > 0.0) {
        return Err(Error::Domain("need s > 1/2, r > 0, y > 0".into()));
    }
    let period = 2.0 * PI / r;
    let n = (200.0 / period).ceil() as usize;
    let x_end = n as f64 * period;
    let breaks = linspace(0.0, x_end, 2 * n);
    let g = |x: f64| (x * x + y * y).powf(-s);
    let (body, _) = integrate_pieces(|x| (r * x).cos() * g(x), &breaks, 1e-17);
    // ∫_X^∞ cos(rx) g(x) dx ≈ -g'(X)/r^2 when rX ∈ 2πZ
    let gp = -2.0 * s * x_end * (x_end * x_end + y * y).powf(-s - 1.0);
    let tail = -gp / (r * r);
    let tail_bound = 2.0 * s * (2.0 * s + 1.0) * x_end.powf(-2.0 * s - 2.0) / (r * r * r);
    let lhs = gamma(s) / (2.0 * PI.sqrt()) * 2.0 * (body + tail);
    let rhs = (r / (2.0 * y)).powf(s - 0.5) * bessel_k(s - 0.5, r * y)?;
    Ok(FourierCheck { s, r, y, lhs, rhs, tail_bound })
}

// ---------------------------------------------------------------- multinomial identity

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultinomialCheck {
    pub order: u32,
    pub x: f64,
    pub lhs: f64,
    pub rhs_integral: f64,
    pub rhs_recurrence: f64,
}

impl MultinomialCheck {
    pub fn rel_error(&self) -> f64 {
        let d = (self.lhs - self.rhs_integral).abs().max((self.lhs - self.rhs_recurrence).abs());
        d / self.lhs.abs()
    }
}

fn binom(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `sum_{j1+j3=N} N!/(j1! j3!) K_{j3-j1}(x)` against `(-2)^N K_0^{(N)}(x)`, `N = n - j2`.
///
/// The derivative is computed both from its integral representation and by the recurrence
/// expansion of [`k0_derivative_expansion`].
pub fn multinomial_bessel_check(n: u32, j2: u32, x: f64) -> Result<MultinomialCheck> {
    if j2 > n {
        return Err(Error::Invalid(format!("j2 = {j2} exceeds n = {n}")));
    }
    check_x(x)?;
    let order = n - j2;
    let mut lhs = 0.0;
    for j1 in 0..=order {
        let j3 = order - j1;
        lhs += binom(order, j1) * bessel_k_int(j3 as i32 - j1 as i32, x)?;
    }
    let m2 = (-2f64).powi(order as i32);
    let rhs_integral = m2 * bessel_k_deriv(0.0, order, x)?;
    let mut rec = 0.0;
    for (j, c) in k0_derivative_expansion(order) {
        rec += c * bessel_k_int(j, x)?;
    }
    Ok(MultinomialCheck { order, x, lhs, rhs_integral, rhs_recurrence: m2 * rec })
}

/// The `K`-pairing of `pr_K(x)^n` with `W`, as the trinomial sum and as the `K_0`-derivative sum:
///
/// `4^-n sum (-1)^{j3-j1} n!/(j1! j2! j3!) (2i beta)^{j2} |alpha|^{n-j2} K_{j3-j1}(|alpha|)`
/// and `2^-n sum_j C(n, j) (i beta)^j |alpha|^{n-j} K_0^{(n-j)}(|alpha|)`, without the `|det m|` factor.
pub fn k_pairing_sums(n: u32, alpha_abs: f64, beta: f64) -> Result<(C, C)> {
    let mut tri = C::zero();
    for j1 in 0..=n {
        for j2 in 0..=n - j1 {
            let j3 = n - j1 - j2;
            let sign = if (j3 + j1) % 2 == 0 { 1.0 } else { -1.0 };
            let coef = factorial(n) / (factorial(j1) * factorial(j2) * factorial(j3));
            tri += (2.0 * I * beta).powi(j2 as i32)
                * (sign * coef * alpha_abs.powi((n - j2) as i32) * bessel_k_int(j3 as i32 - j1 as i32, alpha_abs)?);
        }
    }
    tri /= 4f64.powi(n as i32);
    let mut der = C::zero();
    for j in 0..=n {
        der += (I * beta).powi(j as i32)
            * (binom(n, j) * alpha_abs.powi((n - j) as i32) * bessel_k_deriv(0.0, n - j, alpha_abs)?);
    }
    der /= 2f64.powi(n as i32);
    Ok((tri, der))
}

// ---------------------------------------------------------------- pr_K data

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArchXData {
    /// coefficients of `e_l`, `h_l`, `f_l`
    pub e: C,
    pub h: C,
    pub f: C,
    pub norm_sq: f64,
}

impl ArchXData {
    /// Coefficients of `x^2, xy, y^2` under `e -> x^2`, `h -> -2xy`, `f -> -y^2`.
    pub fn sym2(&self) -> [C; 3] {
        [self.e, -2.0 * self.h, -self.f]
    }
}

/// `pr_K` coefficients `(alpha*/4det, -i beta/4det, -alpha/4det)` and `|det|^-2 (|alpha|^2 + beta^2)`.
pub fn arch_x_data(alpha: C, beta: f64, det_m: f64) -> Result<ArchXData> {
    if det_m == 0.0 {
        return Err(Error::Singular);
    }
    let q = 4.0 * det_m;
    Ok(ArchXData {
        e: alpha.conj() / q,
        h: -I * beta / q,
        f: -alpha / q,
        norm_sq: (alpha.norm_sqr() + beta * beta) / (det_m * det_m),
    })
}

/// `r_0(z) = (1, -z, z^2, -z^3)` as cubic coefficients: `(x - z y)^3`.
pub fn r0(z: C) -> [C; 4] {
    [C::one(), -3.0 * z, 3.0 * z * z, -z * z * z]
}

/// `alpha = <v, m r_0(i)>`; `|alpha| = |j(m, i) h_v(m i)|`.
pub fn alpha_from_pairing(v: &[f64; 4], m: &Mat2<f64>) -> Result<C> {
    let t = act3_cubic(&mat_c(m), &r0(I))?;
    Ok(symplectic_cubic(&real_cubic_c(v), &t))
}

// ---------------------------------------------------------------- J(nu)

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JnuConfig {
    pub x0: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Default for JnuConfig {
    fn default() -> Self {
        JnuConfig { x0: 20.0, y0: 1e-3, y1: 50.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JnuResult {
    pub nu: f64,
    pub value: f64,
    pub coarse: f64,
    pub error_estimate: f64,
    pub tails: f64,
}

/// Real roots of a cubic with positive discriminant.
pub fn real_cubic_roots(p: &[f64; 4]) -> Option<[f64; 3]> {
    let [a, b, c, d] = *p;
    if a == 0.0 || cubic_disc_f64(p) <= 0.0 {
        return None;
    }
    let (b, c, d) = (b / a, c / a, d / a);
    let q = (3.0 * c - b * b) / 9.0;
    let r = (9.0 * b * c - 27.0 * d - 2.0 * b * b * b) / 54.0;
    let th = (r / (-q * q * q).sqrt()).clamp(-1.0, 1.0).acos();
    let s = 2.0 * (-q).sqrt();
    let mut out = [0, 1, 2].map(|k| s * ((th + 2.0 * PI * k as f64) / 3.0).cos() - b / 3.0);
    out.sort_by(f64::total_cmp);
    Some(out)
}

fn j_nu_pass(p: &[f64; 4], roots: &[f64; 3], nu: f64, cfg: &JnuConfig, ratio: f64) -> Result<(f64, f64)> {
    let integrand = |x: f64, y: f64| h_w_eval(p, C::new(x, y)).norm().powf(-2.0 * nu);
    let x0 = cfg.x0;
    let inner = |y: f64| -> f64 {
        let mut br = vec![-x0, x0];
        for &r in roots {
            br.push(r);
            let mut d = y;
            while d < 2.0 * x0 {
                br.push(r - d);
                br.push(r + d);
                d *= ratio * ratio;
            }
        }
        br.retain(|t| t.abs() <= x0);
        br.sort_by(f64::total_cmp);
        br.dedup_by(|a, b| (*a - *b).abs() < 0.1 * y);
        let peak = roots.iter().map(|&r| integrand(r, y)).fold(0.0, f64::max);
        let tol = 1e-13 * peak * y;
        let (mid, _) = integrate_pieces(|x| integrand(x, y), &br, tol);
        // |x| > x0 via x = x0/t
        let far = |t: f64| (integrand(x0 / t, y) + integrand(-x0 / t, y)) * x0 / (t * t);
        let (out, _) = integrate_pieces(far, &[0.0, 0.5, 1.0], tol);
        mid + out
    };
    let outer = |y: f64| inner(y) * y.powf(3.0 * nu - 2.0);
    let br = geomspace(cfg.y0, cfg.y1, ratio);
    let f_lo = outer(cfg.y0);
    let scale = f_lo.max(outer(1.0));
    let (body, _) = integrate_pieces(outer, &br, 1e-12 * scale);
    let b_lo = (outer(2.0 * cfg.y0) / f_lo).log2();
    let f_hi = outer(cfg.y1);
    let b_hi = (f_hi / outer(cfg.y1 / 2.0)).log2();
    if b_lo <= -1.0 || b_hi >= -1.0 {
        return Err(Error::Domain(format!("J({nu}) diverges: tail exponents {b_lo:.3}, {b_hi:.3}")));
    }
    let tails = f_lo * cfg.y0 / (b_lo + 1.0) + f_hi * cfg.y1 / (-b_hi - 1.0);
    Ok((body + tails, tails))
}

/// `J(nu) = ∫_H |p(z)|^{-2nu} y^{3nu} dx dy / y^2` for a real cubic with three distinct real roots.
///
/// The region `y0 <= y <= y1` is integrated at two resolutions; the `y` tails are power-law
/// extrapolations. Divergence or disagreement above `1e-3` is an error.
pub fn j_nu(p: &[f64; 4], nu: f64, cfg: &JnuConfig) -> Result<JnuResult> {
    let roots = real_cubic_roots(p).ok_or_else(|| Error::Invalid("p needs three distinct real roots".into()))?;
    if nu <= 1.0 / 3.0 {
        return Err(Error::Domain(format!("J({nu}) diverges along the real axis")));
    }
    let (coarse, _) = j_nu_pass(p, &roots, nu, cfg, 4.0)?;
    let (fine, tails) = j_nu_pass(p, &roots, nu, cfg, 2.0)?;
    let err = (fine - coarse).abs();
    if err > 1e-3 * fine.abs() {
        return Err(Error::Domain(format!("J({nu}) unstable: {coarse} vs {fine}")));
    }
    Ok(JnuResult { nu, value: fine, coarse, error_estimate: err, tails })
}

/// `G(nu) J(nu) / (G(nu/2 - 1/6) G(nu/2)^2 G(nu/2 + 1/6))`.
pub fn shintani_ratio(j: &JnuResult) -> f64 {
    gamma(j.nu) * j.value / shintani_gammas(j.nu)
}

pub fn shintani_gammas(nu: f64) -> f64 {
    gamma(nu / 2.0 - 1.0 / 6.0) * gamma(nu / 2.0).powi(2) * gamma(nu / 2.0 + 1.0 / 6.0)
}

// ---------------------------------------------------------------- gamma ratios

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaRatio {
    pub s: f64,
    pub n: u32,
    /// `G(s+2n-3) G(s+n-2) G((s+n-3)/2)^2 / (G(s+n-3) G((3s+3n-7)/2))`
    pub part1: f64,
    /// `G(s+2n-3) G(s+n-2) G(s+n-3) / G((s+n-1)/2)`
    pub part2: f64,
    /// `part1 * shintani_gammas(s+n-2) / part2`
    pub factor: f64,
    /// `2 pi^2 2^{4-2nu} 3^{1-3nu/2}`, `nu = s+n-2`
    pub predicted: f64,
}

impl GammaRatio {
    pub fn rel_error(&self) -> f64 {
        (self.factor - self.predicted).abs() / self.predicted.abs()
    }
}

/// Numerator gamma arguments of both forms.
pub fn gamma_ratio_numerator_args(s: f64, n: u32) -> Vec<f64> {
    let n = n as f64;
    vec![s + 2.0 * n - 3.0, s + n - 2.0, (s + n - 3.0) / 2.0, s + n - 3.0]
}

pub fn near_gamma_pole(t: f64) -> bool {
    t <= 0.5 && (t - t.round()).abs() < 1e-9
}

pub fn arch_gamma_ratio(s: f64, n: u32) -> Result<GammaRatio> {
    let nf = n as f64;
    let nu = s + nf - 2.0;
    let args = gamma_ratio_numerator_args(s, n);
    if let Some(t) = args.iter().chain(&[nu / 2.0 - 1.0 / 6.0, nu / 2.0, nu / 2.0 + 1.0 / 6.0]).find(|&&t| near_gamma_pole(t)) {
        return Err(Error::Domain(format!("gamma pole at argument {t}")));
    }
    let common = gamma(s + 2.0 * nf - 3.0) * gamma(nu);
    let part1 = common * gamma((nu - 1.0) / 2.0).powi(2) / (gamma(nu - 1.0) * gamma((3.0 * nu - 1.0) / 2.0));
    let part2 = common * gamma(nu - 1.0) / gamma((nu + 1.0) / 2.0);
    let factor = part1 * shintani_gammas(nu) / part2;
    let predicted = 2.0 * PI * PI * 2f64.powf(4.0 - 2.0 * nu) * 3f64.powf(1.0 - 1.5 * nu);
    if !(factor.is_finite() && part1.is_finite() && part2.is_finite()) {
        return Err(Error::Domain(format!("gamma ratio not finite at s = {s}, n = {n}")));
    }
    Ok(GammaRatio { s, n, part1, part2, factor, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_half_order() {
        let v = bessel_k(0.5, 1.0).unwrap();
        assert!((v - (PI / 2.0).sqrt() * (-1f64).exp()).abs() < 1e-12);
        assert!((v - 0.461068504447895).abs() < 1e-12);
    }

    #[test]
    fn roots_of_z3_minus_z() {
        let r = real_cubic_roots(&[1.0, 0.0, -1.0, 0.0]).unwrap();
        for (a, b) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
