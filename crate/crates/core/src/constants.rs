//! Special functions and the per-dimension constant pack.
//!
//! Everything downstream (Weyl volumes, Faber-Krahn bounds, the Pleijel
//! ratio bound) reduces to the gamma function, Bessel J of real order, and
//! the first positive Bessel zero. All three are implemented here rather
//! than pulled in, so the whole chain stays auditable against the closed
//! forms exercised in the tests.

use crate::error::{Error, Result};

/// Gamma function on the real line (poles return NaN).
///
/// Lanczos approximation, g = 7, 9 terms; relative error below 1e-14 on
/// the positive axis. Reflection formula for x < 0.5.
pub fn gamma(x: f64) -> f64 {
    // published coefficients kept at source precision
    #[allow(clippy::excessive_precision)]
    const G: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x <= 0.0 && x == x.floor() {
        // the poles; sin(pi x) below is never exactly zero in floats
        return f64::NAN;
    }
    if x < 0.5 {
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI / (s * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut a = G[0];
    for (i, &c) in G.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + 7.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * a
}

/// Bessel function of the first kind, real order `nu >= 0`, `x >= 0`.
///
/// Ascending series for small and moderate arguments, Miller's backward
/// recurrence with series normalization once cancellation in the series
/// would cost more than ~4 digits. The switch point is tested for
/// continuity in the overlap band.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0, "bessel_j: nu >= 0, x >= 0 required");
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= 18.0 || x <= 2.0 * nu {
        bessel_series(nu, x)
    } else {
        bessel_miller(nu, x)
    }
}

fn bessel_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = (0.5 * x).powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    for k in 0..400 {
        let kf = k as f64;
        term *= -q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() + 1e-300 {
            break;
        }
    }
    sum
}

// Backward recurrence J_{mu-1} = (2 mu / x) J_mu - J_{mu+1} started above
// max(x, nu), normalized by (x/2)^f = sum_k c_k J_{f+2k} with
// c_0 = Gamma(f+1), c_k = (f+2k) Gamma(f+k) / k!  (f = fractional part of nu).
fn bessel_miller(nu: f64, x: f64) -> f64 {
    let n0 = nu.floor() as usize;
    let f = nu - n0 as f64;
    let kmax = x.max(nu).ceil() as usize + 60;
    let mut y = vec![0.0_f64; kmax + 2];
    y[kmax] = 1e-150;
    for k in (0..kmax).rev() {
        let mu = f + (k + 1) as f64;
        y[k] = (2.0 * mu / x) * y[k + 1] - y[k + 2];
        if y[k].abs() > 1e250 {
            for v in y[k..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let mut s = gamma(f + 1.0) * y[0];
    let mut g = gamma(f + 1.0); // Gamma(f+k)/k! at k = 1
    let mut k = 1usize;
    while 2 * k <= kmax {
        s += (f + 2.0 * k as f64) * g * y[2 * k];
        g *= (f + k as f64) / (k as f64 + 1.0);
        k += 1;
    }
    y[n0] * (0.5 * x).powf(f) / s
}

/// First positive zero of J_nu, for 0 <= nu <= 50.
///
/// J_nu is positive on (0, j_nu), so the first sign change of a 0.1-step
/// scan brackets it; bisection then converges unconditionally.
pub fn first_bessel_zero(nu: f64) -> Result<f64> {
    if !(0.0..=50.0).contains(&nu) {
        return Err(Error::domain(format!(
            "first_bessel_zero: nu = {nu} outside [0, 50]"
        )));
    }
    let mut a = if nu < 1.0 { 0.05 } else { nu * (1.0 - 1e-12) + 0.05 };
    let limit = nu + 25.0;
    let mut fa = bessel_j(nu, a);
    let mut b = a;
    let mut fb = fa;
    while fb > 0.0 {
        b += 0.1;
        if b > limit {
            return Err(Error::convergence(format!(
                "first_bessel_zero: no sign change below {limit} for nu = {nu}"
            )));
        }
        fb = bessel_j(nu, b);
        if fb > 0.0 {
            a = b;
            fa = fb;
        }
    }
    debug_assert!(fa > 0.0 && fb <= 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a) < 1e-15 * m {
            break;
        }
        if bessel_j(nu, m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Volume of the unit ball in R^d.
pub fn ball_volume(d: u32) -> f64 {
    let df = f64::from(d);
    std::f64::consts::PI.powf(0.5 * df) / gamma(0.5 * df + 1.0)
}

/// Weyl constant w_d = (2 pi)^{-d} omega_d, the phase-space density of
/// the eigenvalue counting function.
pub fn weyl_constant(d: u32) -> f64 {
    ball_volume(d) / (2.0 * std::f64::consts::PI).powi(d as i32)
}

/// Principal Dirichlet eigenvalue of the unit ball: the square of the
/// first zero of J_{d/2 - 1}.
pub fn ball_principal_eigenvalue(d: u32) -> Result<f64> {
    let j = first_bessel_zero(0.5 * f64::from(d) - 1.0)?;
    Ok(j * j)
}

/// Pleijel bound gamma(d) on limsup mu(phi_n)/n for dimension d in [2, 10].
///
/// Computed as 2^{d-2} d^2 Gamma(d/2)^2 / j^d with j the first zero of
/// J_{d/2-1}, and cross-checked against the phase-space form
/// 1 / (w_d omega_d lambda(B_d)^{d/2}); the two must agree to 1e-12.
pub fn pleijel_constant(d: u32) -> Result<f64> {
    if !(2..=10).contains(&d) {
        return Err(Error::domain(format!("pleijel_constant: d = {d} outside [2, 10]")));
    }
    let df = f64::from(d);
    let j = first_bessel_zero(0.5 * df - 1.0)?;
    let g = gamma(0.5 * df);
    let direct = 2f64.powi(d as i32 - 2) * df * df * g * g / j.powi(d as i32);
    let lam = j * j;
    let phase = 1.0 / (weyl_constant(d) * ball_volume(d) * lam.powf(0.5 * df));
    let rel = (direct / phase - 1.0).abs();
    if rel > 1e-12 {
        return Err(Error::consistency(format!(
            "pleijel_constant: direct {direct} vs phase-space {phase} (rel {rel:.3e})"
        )));
    }
    Ok(direct)
}

/// Dimension of the space of spherical harmonics of degree `ell` on S^{d-1}:
/// C(ell+d-1, d-1) - C(ell+d-3, d-1).
pub fn sh_multiplicity(ell: u32, d: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::domain(format!("sh_multiplicity: d = {d} < 2")));
    }
    let c = |n: i64, k: i64| -> Result<u128> {
        if n < k || n < 0 {
            return Ok(0);
        }
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc
                .checked_mul((n - i) as u128)
                .ok_or_else(|| Error::domain("sh_multiplicity: overflow".to_string()))?;
            acc /= (i + 1) as u128;
        }
        Ok(acc)
    };
    let ell = i64::from(ell);
    let d = i64::from(d);
    let v = c(ell + d - 1, d - 1)? - c(ell + d - 3, d - 1)?;
    u64::try_from(v).map_err(|_| Error::domain("sh_multiplicity: exceeds u64".to_string()))
}

/// Everything about a dimension that the rest of the crate keeps asking for.
#[derive(Debug, Clone, Copy)]
pub struct DimensionalConstants {
    pub d: u32,
    /// Volume of the unit ball.
    pub omega: f64,
    /// Surface area of S^{d-1} (= d * omega).
    pub sphere_area: f64,
    /// Weyl constant w_d.
    pub weyl: f64,
    /// First zero of J_{d/2-1}.
    pub bessel_zero: f64,
    /// Principal Dirichlet eigenvalue of the unit ball (bessel_zero^2).
    pub ball_eigenvalue: f64,
    /// Pleijel ratio bound gamma(d).
    pub pleijel: f64,
}

impl DimensionalConstants {
    pub fn new(d: u32) -> Result<Self> {
        if !(2..=10).contains(&d) {
            return Err(Error::domain(format!(
                "DimensionalConstants: d = {d} outside [2, 10]"
            )));
        }
        let omega = ball_volume(d);
        let bessel_zero = first_bessel_zero(0.5 * f64::from(d) - 1.0)?;
        Ok(DimensionalConstants {
            d,
            omega,
            sphere_area: f64::from(d) * omega,
            weyl: weyl_constant(d),
            bessel_zero,
            ball_eigenvalue: bessel_zero * bessel_zero,
            pleijel: pleijel_constant(d)?,
        })
    }
}
