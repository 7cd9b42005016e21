//! The forward map f(w) = sinh(aw)·exp(w), its Jacobian, derivative and
//! critical points.
//!
//! With z = x + iy and w = ξ + iη the map splits into real coordinates
//!   x = ½(e^{(1+a)ξ} cos((1+a)η) − e^{(1−a)ξ} cos((1−a)η)),
//!   y = ½(e^{(1+a)ξ} sin((1+a)η) − e^{(1−a)ξ} sin((1−a)η)).
//! The coordinate form is used throughout so that f(conj w) = conj f(w)
//! holds exactly in floating arithmetic.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::param::Parameter;

/// Re ξ beyond which e^{(1+a)ξ} would leave the f64 range, with margin.
const RANGE_GUARD: f64 = 707.0;

/// |f′| below which the inverse derivative is treated as singular.
pub const SINGULAR_FPRIME: f64 = 1e-8;

/// Critical value of f on the real line:
/// x_a = −a/(1+a) · ((1−a)/(1+a))^{(1−a)/(2a)}.
pub fn x_a(a: &Parameter) -> f64 {
    let av = a.value();
    -av / (1.0 + av) * ((1.0 - av) / (1.0 + av)).powf((1.0 - av) / (2.0 * av))
}

/// Real critical point of f: ξ_a = (1/(2a)) ln((1−a)/(1+a)).
pub fn xi_a(a: &Parameter) -> f64 {
    let av = a.value();
    ((1.0 - av) / (1.0 + av)).ln() / (2.0 * av)
}

fn guard_range(a: &Parameter, w: Complex64, what: &str) -> Result<()> {
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::Domain(format!("{what}: non-finite argument {w}")));
    }
    if w.re.abs() * (1.0 + a.value()) > RANGE_GUARD {
        return Err(Error::Range(format!(
            "{what}: |Re w| = {} exceeds the exp range for a = {}",
            w.re.abs(),
            a.value()
        )));
    }
    Ok(())
}

/// f(w) = sinh(aw)·exp(w), in the exact-conjugate coordinate form.
pub fn eval_f(a: &Parameter, w: Complex64) -> Result<Complex64> {
    guard_range(a, w, "eval_f")?;
    let av = a.value();
    let (xi, eta) = (w.re, w.im);
    let ep = 0.5 * ((1.0 + av) * xi).exp();
    let em = 0.5 * ((1.0 - av) * xi).exp();
    let (sp, cp) = ((1.0 + av) * eta).sin_cos();
    let (sm, cm) = ((1.0 - av) * eta).sin_cos();
    Ok(Complex64::new(ep * cp - em * cm, ep * sp - em * sm))
}

/// Jacobian of f as a map of ℝ²:
/// J = ¼((1+a)² e^{2ξ(1+a)} + (1−a)² e^{2ξ(1−a)} − 2(1−a²) e^{2ξ} cos(2ηa)) ≥ 0.
pub fn jacobian(a: &Parameter, w: Complex64) -> Result<f64> {
    guard_range(a, w, "jacobian")?;
    let av = a.value();
    let (xi, eta) = (w.re, w.im);
    let tp = (1.0 + av) * (1.0 + av) * (2.0 * xi * (1.0 + av)).exp();
    let tm = (1.0 - av) * (1.0 - av) * (2.0 * xi * (1.0 - av)).exp();
    let tc = 2.0 * (1.0 - av * av) * (2.0 * xi).exp() * (2.0 * eta * av).cos();
    Ok(0.25 * (tp + tm - tc))
}

/// f′(w) = e^w (a·cosh(aw) + sinh(aw)); |f′|² equals the Jacobian.
pub fn f_prime(a: &Parameter, w: Complex64) -> Result<Complex64> {
    guard_range(a, w, "f_prime")?;
    let av = a.value();
    let aw = av * w;
    Ok(w.exp() * (av * aw.cosh() + aw.sinh()))
}

/// f″(w) = e^w ((1+a²) sinh(aw) + 2a·cosh(aw)). Used by Halley steps near
/// critical points.
pub fn f_second(a: &Parameter, w: Complex64) -> Result<Complex64> {
    guard_range(a, w, "f_second")?;
    let av = a.value();
    let aw = av * w;
    Ok(w.exp() * ((1.0 + av * av) * aw.sinh() + 2.0 * av * aw.cosh()))
}

/// A critical point w_k of f with its critical value z_k.
#[derive(Debug, Clone, Copy)]
pub struct CriticalPoint {
    pub k: i64,
    pub w: Complex64,
    pub z: Complex64,
}

/// cos/sin of π·num/den, exact at multiples of π/2.
pub(crate) fn trig_pi_frac(num: i64, den: i64) -> (f64, f64) {
    debug_assert!(den > 0);
    let m = num.rem_euclid(2 * den);
    if (2 * m) % den == 0 {
        match (2 * m) / den {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            3 => (0.0, -1.0),
            _ => unreachable!(),
        }
    } else {
        let t = PI * m as f64 / den as f64;
        (t.cos(), t.sin())
    }
}

/// π·num/den reduced to [0, 2π).
pub(crate) fn frac_angle(num: i64, den: i64) -> f64 {
    PI * num.rem_euclid(2 * den) as f64 / den as f64
}

/// Direction of the branch cut ray through z_k: arg(z_k) = π + (a+1)kπ/a,
/// normalized to [0, 2π).
pub(crate) fn cut_direction(a: &Parameter, k: i64) -> f64 {
    match a.exact() {
        Some((p, q)) => frac_angle(k * (p + q) + p, p),
        None => {
            let av = a.value();
            (PI + k as f64 * (1.0 + av) * PI / av).rem_euclid(2.0 * PI)
        }
    }
}

/// Unit phase e^{i(a+1)kπ/a} relating f on Ω_k to f on Ω_0.
pub(crate) fn omega_phase(a: &Parameter, k: i64) -> Complex64 {
    match a.exact() {
        Some((p, q)) => {
            let (c, s) = trig_pi_frac(k * (p + q), p);
            Complex64::new(c, s)
        }
        None => {
            let av = a.value();
            let t = (av + 1.0) * k as f64 * PI / av;
            Complex64::new(t.cos(), t.sin())
        }
    }
}

/// Critical points w_k = ξ_a + ikπ/a and their values z_k = x_a·e^{i(a+1)kπ/a}
/// for k in the inclusive range.
pub fn critical_points(a: &Parameter, k_min: i64, k_max: i64) -> Result<Vec<CriticalPoint>> {
    if k_min > k_max {
        return Err(Error::Domain(format!(
            "critical_points: k_min {k_min} > k_max {k_max}"
        )));
    }
    let xa = x_a(a);
    let xia = xi_a(a);
    let spacing = a.spacing();
    Ok((k_min..=k_max)
        .map(|k| CriticalPoint {
            k,
            w: Complex64::new(xia, k as f64 * spacing),
            z: xa * omega_phase(a, k),
        })
        .collect())
}

/// Branch points of the inverse: the distinct critical values over one period
/// plus 0. For irrational a only {z_0, 0} is reported.
pub fn branch_points(a: &Parameter) -> Vec<Complex64> {
    let xa = x_a(a);
    let mut out: Vec<Complex64> = match a.critical_count() {
        Some(n) => (0..n).map(|k| xa * omega_phase(a, k)).collect(),
        None => vec![Complex64::new(xa, 0.0)],
    };
    out.push(Complex64::new(0.0, 0.0));
    out.sort_by(|u, v| {
        u.re.partial_cmp(&v.re)
            .unwrap()
            .then(u.im.partial_cmp(&v.im).unwrap())
    });
    out
}

/// Derivative of the inverse at z, given a branch value w with f(w) = z:
/// ψ′(z) = 1/f′(w). Not defined at the critical values.
pub fn psi_prime(a: &Parameter, z: Complex64, w: Complex64) -> Result<Complex64> {
    let fw = eval_f(a, w)?;
    let resid = (fw - z).norm();
    if resid > 1e-8 * z.norm().max(1.0) {
        return Err(Error::Domain(format!(
            "psi_prime: w is not a branch value at z (residual {resid:.3e})"
        )));
    }
    let d = f_prime(a, w)?;
    if d.norm() < SINGULAR_FPRIME {
        return Err(Error::Singular(format!(
            "psi_prime: |f'(w)| = {:.3e} at w = {w}; z is at or near a critical value",
            d.norm()
        )));
    }
    Ok(Complex64::new(1.0, 0.0) / d)
}
