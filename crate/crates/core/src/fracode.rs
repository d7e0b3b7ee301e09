//! Per-mode fractional initial-value problem `D^alpha X + lambda X = 0`
//! with `x^{2-alpha} X -> psi`, `(x^{2-alpha} X)' -> phi` as `x -> 0+`.

use crate::error::{Error, Result};
use crate::specialfn::{gamma, mittag_leffler, rgamma, MittagLefflerParams};

/// `|lambda x^alpha|` below which the Riemann-Liouville derivative of a mode
/// is summed term by term.
const POWER_SERIES_LIMIT: f64 = 10.0;
const TERM_CAP: usize = 10_000;

/// Riemann-Liouville mode `X_n(x)` of the series solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution {
    pub lambda: f64,
    pub alpha: f64,
    pub phi_n: f64,
    pub psi_n: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must satisfy 1 < alpha < 2")));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    Ok(())
}

fn ml(alpha: f64, mu: f64, z: f64) -> Result<f64> {
    mittag_leffler(&MittagLefflerParams::new(alpha, mu, z)?)
}

/// `X_1(x) = x^{alpha-1} E_{alpha,alpha}(-lambda x^alpha)`.
pub fn x1_solution(lambda: f64, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_x(x)?;
    Ok(x.powf(alpha - 1.0) * ml(alpha, alpha, -lambda * x.powf(alpha))?)
}

/// `X_2(x) = x^{alpha-2} E_{alpha,alpha-1}(-lambda x^alpha)`.
pub fn x2_solution(lambda: f64, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_x(x)?;
    Ok(x.powf(alpha - 2.0) * ml(alpha, alpha - 1.0, -lambda * x.powf(alpha))?)
}

impl ModeSolution {
    pub fn new(lambda: f64, alpha: f64, phi_n: f64, psi_n: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} must be non-negative")));
        }
        Ok(ModeSolution { lambda, alpha, phi_n, psi_n })
    }

    fn weights(&self) -> Result<(f64, f64)> {
        Ok((gamma(self.alpha)? * self.phi_n, gamma(self.alpha - 1.0)? * self.psi_n))
    }

    /// `X_n(x)`.
    pub fn value(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(self.scaled_value(x)? * x.powf(self.alpha - 2.0))
    }

    /// `x^{2-alpha} X_n(x) = c_1 x E_{a,a}(w) + c_2 E_{a,a-1}(w)`, `w = -lambda x^a`.
    pub fn scaled_value(&self, x: f64) -> Result<f64> {
        let (c1, c2) = self.weights()?;
        if x == 0.0 {
            return Ok(c2 * rgamma(self.alpha - 1.0));
        }
        check_x(x)?;
        let a = self.alpha;
        let w = -self.lambda * x.powf(a);
        let mut v = 0.0;
        if c1 != 0.0 {
            v += c1 * x * ml(a, a, w)?;
        }
        if c2 != 0.0 {
            v += c2 * ml(a, a - 1.0, w)?;
        }
        Ok(v)
    }

    /// `d/dx [x^{2-alpha} X_n(x)]` in closed form.
    pub fn scaled_derivative(&self, x: f64) -> Result<f64> {
        let (c1, c2) = self.weights()?;
        let a = self.alpha;
        if x == 0.0 {
            return Ok(c1 * (rgamma(a - 1.0) + (2.0 - a) * rgamma(a)));
        }
        check_x(x)?;
        let w = -self.lambda * x.powf(a);
        let mut v = 0.0;
        if c1 != 0.0 {
            v += c1 * (ml(a, a - 1.0, w)? + (2.0 - a) * ml(a, a, w)?);
        }
        if c2 != 0.0 && self.lambda != 0.0 {
            let inner = ml(a, 2.0 * a - 2.0, w)? + (2.0 - a) * ml(a, 2.0 * a - 1.0, w)?;
            v -= c2 * self.lambda * x.powf(a - 1.0) * inner;
        }
        Ok(v)
    }

    /// Power-series form `sum c_j x^{beta_j}` of `X_n`, truncated at `terms` per family.
    pub fn power_terms(&self, terms: usize) -> Result<Vec<(f64, f64)>> {
        let (c1, c2) = self.weights()?;
        let a = self.alpha;
        let mut out = Vec::with_capacity(2 * terms);
        for j in 0..terms {
            let jf = j as f64;
            let p = (-self.lambda).powi(j as i32);
            if c1 != 0.0 {
                out.push((a * jf + a - 1.0, c1 * p * rgamma(a * jf + a)));
            }
            if c2 != 0.0 {
                out.push((a * jf + a - 2.0, c2 * p * rgamma(a * jf + a - 1.0)));
            }
        }
        Ok(out)
    }

    /// `D^alpha X_n(x)`.
    ///
    /// Term-wise power rule while `lambda x^alpha <= 10`; beyond that the
    /// shifted identity `D^a [x^{b-1} E_{a,b}(c x^a)] = x^{b-a-1} E_{a,b-a}(c x^a)`
    /// with `E_{a,0}(w) = w E_{a,a}(w)`, `E_{a,-1}(w) = w E_{a,a-1}(w)`.
    pub fn rl_derivative(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        let z = self.lambda * x.powf(self.alpha);
        if z <= POWER_SERIES_LIMIT {
            let terms = series_length(z, self.alpha);
            return rl_derivative_power_series(&self.power_terms(terms)?, self.alpha, x);
        }
        let (c1, c2) = self.weights()?;
        let a = self.alpha;
        let w = -z;
        let mut v = 0.0;
        if c1 != 0.0 {
            v += c1 * x.powi(-1) * w * ml(a, a, w)?;
        }
        if c2 != 0.0 {
            v += c2 * x.powi(-2) * w * ml(a, a - 1.0, w)?;
        }
        Ok(v)
    }
}

/// Number of series terms after which `z^j / Gamma(a j + a - 1)` is below
/// `1e-18` of its peak.
fn series_length(z: f64, alpha: f64) -> usize {
    let mut peak: f64 = 0.0;
    let mut j = 0usize;
    loop {
        let t = if z == 0.0 && j > 0 { 0.0 } else { z.powi(j as i32) * rgamma(alpha * j as f64 + alpha - 1.0) };
        peak = peak.max(t.abs());
        if (j > 2 && t.abs() < 1e-18 * peak) || j >= TERM_CAP {
            return j + 1;
        }
        j += 1;
    }
}

/// `X_n(x) = Gamma(a) phi x^{a-1} E_{a,a} + Gamma(a-1) psi x^{a-2} E_{a,a-1}`.
pub fn solve_mode_ivp(mode: &ModeSolution, x: f64) -> Result<f64> {
    mode.value(x)
}

/// Riemann-Liouville derivative of `sum c x^beta` by the power rule
/// `Gamma(beta+1)/Gamma(beta+1-alpha) x^{beta-alpha}`, with `1/Gamma` vanishing
/// at the poles so the kernel powers `x^{alpha-1}`, `x^{alpha-2}` map to 0.
pub fn rl_derivative_power_series(coeffs: &[(f64, f64)], alpha: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &(beta, c) in coeffs {
        if !(beta > -1.0) {
            return Err(Error::InvalidParameter(format!("exponent {beta} must exceed -1")));
        }
        if c == 0.0 {
            continue;
        }
        let shifted = beta + 1.0 - alpha;
        let nearest = shifted.round();
        if nearest <= 0.0 && (shifted - nearest).abs() <= 1e-12 * beta.abs().max(1.0) {
            continue;
        }
        let t = c * gamma(beta + 1.0)? * rgamma(shifted) * x.powf(beta - alpha);
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    Ok(sum + comp)
}

/// Mesh and stencil controls for [`rl_derivative_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericRlOptions {
    /// Relative position of the first mesh point.
    pub smallest: f64,
    /// Geometric growth factor of the graded cells.
    pub ratio: f64,
    /// Number of uniform cells covering the rest of the interval.
    pub uniform_cells: usize,
    /// Outer finite-difference step as a fraction of `x`.
    pub step_fraction: f64,
}

impl Default for NumericRlOptions {
    fn default() -> Self {
        NumericRlOptions { smallest: 1e-12, ratio: 1.15, uniform_cells: 2000, step_fraction: 1.0 / 64.0 }
    }
}

impl NumericRlOptions {
    fn mesh(&self) -> Result<Vec<f64>> {
        if !(self.ratio > 1.0 && self.ratio <= 2.0) || !(self.smallest > 0.0 && self.smallest < 1e-3) {
            return Err(Error::Resolution(format!(
                "graded mesh needs 1 < ratio <= 2 and a first point below 1e-3 (ratio {}, first {})",
                self.ratio, self.smallest
            )));
        }
        // the outer stencil must see many cells per step
        if (self.uniform_cells as f64) * self.step_fraction < 16.0 {
            return Err(Error::Resolution(format!(
                "{} uniform cells are too coarse for a step of {} x",
                self.uniform_cells, self.step_fraction
            )));
        }
        let du = 1.0 / self.uniform_cells as f64;
        let mut s = vec![0.0, self.smallest];
        loop {
            let last = *s.last().unwrap_or(&0.0);
            let next = last * self.ratio;
            if next - last >= du {
                break;
            }
            s.push(next);
        }
        let join = *s.last().unwrap_or(&0.0);
        let cells = ((1.0 - join) / du).ceil() as usize;
        for i in 1..=cells {
            s.push(join + (1.0 - join) * i as f64 / cells as f64);
        }
        Ok(s)
    }
}

/// `int_ub^{ub+d} u^{1-a} du` and `int_0^d (ub+v)^{1-a} v dv`.
fn cell_moments(ub: f64, d: f64, alpha: f64) -> (f64, f64) {
    let e = 1.0 - alpha;
    if ub == 0.0 {
        return (d.powf(e + 1.0) / (e + 1.0), d.powf(e + 2.0) / (e + 2.0));
    }
    let r = d / ub;
    if r < 0.1 {
        // binomial series in r
        let mut c = 1.0;
        let mut p0 = 0.0;
        let mut p1 = 0.0;
        let mut rn = 1.0;
        for n in 0..40 {
            let nf = n as f64;
            p0 += c * rn / (nf + 1.0);
            p1 += c * rn / (nf + 2.0);
            c *= (e - nf) / (nf + 1.0);
            rn *= r;
            if (c * rn).abs() < 1e-18 {
                break;
            }
        }
        let base = ub.powf(e);
        return (base * d * p0, base * d * d * p1);
    }
    let ua = ub + d;
    let m0 = (ua.powf(e + 1.0) - ub.powf(e + 1.0)) / (e + 1.0);
    let m1 = (ua.powf(e + 2.0) - ub.powf(e + 2.0)) / (e + 2.0);
    (m0, m1 - ub * m0)
}

/// `(1/Gamma(2-a)) int_0^X f(t) (X-t)^{1-a} dt` with `f` piecewise linear on
/// the mesh scaled to `X`; the first cell uses the leading power `t^beta`.
fn fractional_integral<F: Fn(f64) -> f64>(f: &F, alpha: f64, big_x: f64, beta: f64, mesh: &[f64]) -> Result<f64> {
    let tau: Vec<f64> = mesh.iter().map(|s| s * big_x).collect();
    let vals: Vec<f64> = tau.iter().skip(1).map(|&t| f(t)).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("integrand is not finite on the mesh".into()));
    }
    let t1 = tau[1];
    let mut sum = vals[0] * t1 / (beta + 1.0) * (big_x - 0.5 * t1).powf(1.0 - alpha);
    let mut comp = 0.0;
    for c in 1..tau.len() - 1 {
        let (ta, tb) = (tau[c], tau[c + 1]);
        let (fa, fb) = (vals[c - 1], vals[c]);
        let d = tb - ta;
        let ub = (big_x - tb).max(0.0);
        let slope = (fb - fa) / d;
        let (p0, p1) = cell_moments(ub, d, alpha);
        let t = fb * p0 - slope * p1;
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    Ok((sum + comp) * rgamma(2.0 - alpha))
}

/// Riemann-Liouville derivative `(1/Gamma(2-a)) d^2/dx^2 int_0^x f(t)(x-t)^{1-a} dt`
/// from samples of `f`, independent of any series representation.
///
/// `leading_exponent` is the power `beta` with `f(t) ~ t^beta` as `t -> 0`.
/// The inner integral uses exact product integration of piecewise-linear `f`
/// on a mesh graded toward 0 and scaled with the evaluation point; the outer
/// second derivative is a five-point central difference with step `x/64`.
pub fn rl_derivative_numeric<F: Fn(f64) -> f64>(
    f: F,
    alpha: f64,
    x: f64,
    leading_exponent: f64,
    options: &NumericRlOptions,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_x(x)?;
    if !(leading_exponent > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "leading exponent {leading_exponent} must exceed -1"
        )));
    }
    let mesh = options.mesh()?;
    let h = x * options.step_fraction;
    let mut i = [0.0; 5];
    for (slot, j) in i.iter_mut().zip(-2i32..=2) {
        *slot = fractional_integral(&f, alpha, x + j as f64 * h, leading_exponent, &mesh)?;
    }
    Ok((-i[0] + 16.0 * i[1] - 30.0 * i[2] + 16.0 * i[3] - i[4]) / (12.0 * h * h))
}
