use std::f64::consts::PI;

use super::gamma::{ln_gamma, rgamma};
use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

/// Below this modulus the power series is summed directly.
pub const SERIES_SWITCH: f64 = 10.0;
/// Largest tolerated ratio between the biggest series term and the sum.
pub const CANCELLATION_BUDGET: f64 = 1e5;
const REL_TOL: f64 = 1e-14;
const TERM_CAP: usize = 10_000;

/// Parameters of `E_{alpha,mu}(z) = sum_j z^j / Gamma(alpha j + mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MittagLefflerParams {
    pub alpha: f64,
    pub mu: f64,
    pub argument: f64,
}

impl MittagLefflerParams {
    pub fn new(alpha: f64, mu: f64, argument: f64) -> Result<Self> {
        let p = MittagLefflerParams { alpha, mu, argument };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!("alpha {} must lie in (0, 2]", self.alpha)));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu {} must be positive", self.mu)));
        }
        if !self.argument.is_finite() {
            return Err(Error::Domain(format!("argument {} is not finite", self.argument)));
        }
        Ok(())
    }
}

/// Two-parameter Mittag-Leffler function on the real line.
///
/// `|z| <= 10`: compensated power series. Negative arguments whose series
/// would lose more than the cancellation budget, and all `z < -10`, use the
/// branch-cut integral representation (Kummer form when `alpha = 1`).
/// `z > 10`: the series has positive terms and is summed directly.
pub fn mittag_leffler(params: &MittagLefflerParams) -> Result<f64> {
    params.validate()?;
    let MittagLefflerParams { alpha, mu, argument: z } = *params;
    if z == 0.0 {
        return Ok(rgamma(mu));
    }
    if z > 0.0 {
        return series(alpha, mu, z, f64::INFINITY);
    }
    if z >= -SERIES_SWITCH {
        match series(alpha, mu, z, CANCELLATION_BUDGET) {
            Err(Error::PrecisionLoss { .. }) => {}
            other => return other,
        }
    }
    negative_axis(alpha, mu, -z)
}

/// Direct compensated series; errors with `PrecisionLoss` when the largest
/// term exceeds `CANCELLATION_BUDGET` times the result.
pub fn mittag_leffler_series(params: &MittagLefflerParams) -> Result<f64> {
    params.validate()?;
    series(params.alpha, params.mu, params.argument, CANCELLATION_BUDGET)
}

fn term(alpha: f64, mu: f64, z: f64, j: usize) -> Result<f64> {
    let arg = alpha * j as f64 + mu;
    if arg < 170.0 {
        return Ok(z.powi(j as i32) * rgamma(arg));
    }
    let sign = if z < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
    let log = j as f64 * z.abs().ln() - ln_gamma(arg)?;
    Ok(sign * log.exp())
}

fn series(alpha: f64, mu: f64, z: f64, budget: f64) -> Result<f64> {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut peak = 0.0f64;
    let mut prev = f64::INFINITY;
    for j in 0..TERM_CAP {
        let t = term(alpha, mu, z, j)?;
        if !t.is_finite() {
            return Err(Error::Overflow(z));
        }
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
        if !sum.is_finite() {
            return Err(Error::Overflow(z));
        }
        peak = peak.max(t.abs());
        let total = sum + comp;
        let past_peak = alpha * j as f64 + mu > 1.0 && t.abs() <= prev;
        prev = t.abs();
        // terms vanish identically for mu a non-positive integer offset; keep going past those
        if past_peak && j > 0 && t.abs() <= REL_TOL * total.abs() {
            if peak > budget * total.abs() {
                return Err(Error::PrecisionLoss { factor: peak / total.abs(), budget });
            }
            return Ok(total);
        }
        if past_peak && peak > 0.0 && t.abs() < 1e-300 {
            return Ok(total);
        }
    }
    Err(Error::ConvergenceFailure { context: "mittag_leffler series", iterations: TERM_CAP })
}

fn negative_axis(alpha: f64, mu: f64, t: f64) -> Result<f64> {
    if alpha == 1.0 {
        return exponential_family(mu, t);
    }
    mittag_leffler_integral(alpha, mu, -t)
}

/// Integral representation along the negative real axis, `z < 0`.
///
/// Hankel contour collapsed onto the branch cut plus the residues of the
/// pair of poles `t^{1/alpha} e^{+-i pi/alpha}` when `alpha > 1`.
pub(crate) fn mittag_leffler_integral(alpha: f64, mu: f64, z: f64) -> Result<f64> {
    if z >= 0.0 {
        return Err(Error::Domain(format!("integral route needs z < 0, got {z}")));
    }
    if alpha == 1.0 {
        return exponential_family(mu, -z);
    }
    if mu >= alpha + 1.0 {
        // E_{a,mu}(z) = (E_{a,mu-a}(z) - 1/Gamma(mu-a)) / z
        let lower = mittag_leffler_integral(alpha, mu - alpha, z)?;
        return Ok((lower - rgamma(mu - alpha)) / z);
    }
    let t = -z;
    let (sa, ca) = (PI * alpha).sin_cos();
    let sb = (PI * mu).sin();
    let sab = (PI * (alpha - mu)).sin();
    let gamma_exp = alpha - mu;
    let kernel = move |r: f64| {
        let ra = r.powf(alpha);
        let d = (ra + t * ca).powi(2) + (t * sa).powi(2);
        (-r).exp() * (ra * sb + z * sab) / d
    };
    let rp = t.powf(1.0 / alpha);
    // first piece with r = u^{1/(g+1)} to absorb the r^g endpoint behaviour
    let p = 1.0 / (gamma_exp + 1.0);
    let upper_u = rp.powf(gamma_exp + 1.0);
    let first = integrate_adaptive(
        |u: f64| {
            let r = u.powf(p);
            p * kernel(r)
        },
        0.0,
        upper_u,
        1e-13,
        1e-300,
        4000,
    )?;
    let second = integrate_adaptive(
        |r: f64| r.powf(gamma_exp) * kernel(r),
        rp,
        rp + 60.0,
        1e-13,
        1e-300,
        4000,
    )?;
    let mut value = (first + second) / PI;
    if alpha > 1.0 {
        let rho = rp;
        let theta = PI / alpha;
        value += 2.0 / alpha
            * rho.powf(1.0 - mu)
            * (rho * theta.cos()).exp()
            * ((1.0 - mu) * theta + rho * theta.sin()).cos();
    }
    Ok(value)
}

/// `E_{1,mu}(-t)` through Kummer's transformation
/// `E_{1,mu}(-t) = e^{-t}/Gamma(mu) * sum_n (mu-1)/(mu-1+n) t^n/n!`.
fn exponential_family(mu: f64, t: f64) -> Result<f64> {
    if t > 50.0 {
        // algebraic expansion -sum_{r>=1} (-t)^{-r} / Gamma(mu - r)
        let mut sum = 0.0;
        let mut last = f64::INFINITY;
        let mut pow = 1.0;
        for r in 1..200 {
            pow *= -1.0 / t;
            let c = -pow * rgamma(mu - r as f64);
            if c != 0.0 && c.abs() > last {
                break;
            }
            sum += c;
            if c != 0.0 {
                last = c.abs();
            }
            if c.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        if mu == mu.trunc() {
            // terminating expansion: the exponential part is exact
            sum += (-t).exp() * (-t).powi(1 - mu as i32);
        }
        return Ok(sum);
    }
    let lt = t.ln();
    let mut sum = 0.0;
    for n in 0..TERM_CAP {
        let nf = n as f64;
        let w = (nf * lt - t - ln_gamma(nf + 1.0)?).exp();
        let c = if n == 0 { 1.0 } else { (mu - 1.0) / (mu - 1.0 + nf) };
        sum += c * w;
        if nf > t && w < 1e-18 * sum.abs().max(1e-300) {
            return Ok(sum * rgamma(mu));
        }
    }
    Err(Error::ConvergenceFailure { context: "mittag_leffler kummer", iterations: TERM_CAP })
}
