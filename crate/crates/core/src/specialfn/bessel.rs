use std::f64::consts::PI;

use super::dd::Dd;
use super::gamma::rgamma;
use crate::error::{Error, Result};

/// Above this argument the Hankel expansion is used; its smallest term is
/// far below f64 resolution here.
const HANKEL_SWITCH: f64 = 40.0;
const SERIES_CAP: usize = 10_000;

/// Bessel function of the first kind `J_nu(z)` for `nu >= 0`, `z >= 0`.
///
/// The power series is accumulated in double-double so the alternating
/// cancellation (terms up to ~`e^z`) does not eat the result.
pub fn bessel_j(nu: f64, z: f64) -> f64 {
    if nu < 0.0 || z < 0.0 || nu.is_nan() || z.is_nan() {
        return f64::NAN;
    }
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if z > HANKEL_SWITCH {
        bessel_j_hankel(nu, z)
    } else {
        bessel_j_series(nu, z)
    }
}

fn bessel_j_series(nu: f64, z: f64) -> f64 {
    let half = z / 2.0;
    let prefactor = half.powf(nu) * rgamma(nu + 1.0);
    let q = Dd::new(half) * Dd::new(half);
    let nu_dd = Dd::new(nu);
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    let mut peak: f64 = 1.0;
    for j in 0..SERIES_CAP {
        let jp1 = Dd::new((j + 1) as f64);
        term = -(term * q) / (jp1 * (jp1 + nu_dd));
        sum = sum + term;
        let mag = term.hi.abs();
        peak = peak.max(mag);
        if (j as f64 + 1.0) > half && mag <= 1e-33 * peak {
            break;
        }
    }
    prefactor * sum.to_f64()
}

fn bessel_j_hankel(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = z - (nu / 2.0 + 0.25) * PI;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200usize {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0 * z);
        }
        if a.abs() > last {
            break;
        }
        last = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 * p.abs().max(1e-300) {
            break;
        }
    }
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// The `n`-th positive zero of `J_nu` (`n >= 1`).
///
/// Sign-change scan with step 0.1 starting at `nu + 1`, then bisection.
pub fn bessel_j_zero(nu: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("zero index starts at 1".into()));
    }
    if nu < 0.0 {
        return Err(Error::InvalidParameter(format!("order {nu} must be >= 0")));
    }
    const STEP: f64 = 0.1;
    let reach = (n as f64 + nu / 2.0 + 2.0) * PI + nu + 10.0;
    let max_steps = (reach / STEP).ceil() as usize;
    let mut found = 0;
    let mut a = nu + 1.0;
    let mut fa = bessel_j(nu, a);
    for _ in 0..max_steps {
        let b = a + STEP;
        let fb = bessel_j(nu, b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == n {
                if fa == 0.0 {
                    return Ok(a);
                }
                return Ok(bisect(|x| bessel_j(nu, x), a, b, fa));
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::ConvergenceFailure { context: "bessel_j_zero scan", iterations: max_steps })
}

pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b || (b - a) <= 1e-15 * mid.abs() {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
