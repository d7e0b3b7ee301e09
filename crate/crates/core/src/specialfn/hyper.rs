use super::gamma::is_nonpositive_integer;
use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-14;
const TERM_CAP: usize = 10_000;

/// Lower parameters and argument of a `0F_q` series.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricParams {
    pub lower: Vec<f64>,
    pub argument: f64,
}

impl HypergeometricParams {
    pub fn new(lower: Vec<f64>, argument: f64) -> Result<Self> {
        let p = HypergeometricParams { lower, argument };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.argument.is_finite() {
            return Err(Error::Domain(format!("argument {} is not finite", self.argument)));
        }
        for &b in &self.lower {
            if !b.is_finite() {
                return Err(Error::InvalidParameter(format!("lower parameter {b} is not finite")));
            }
            if is_nonpositive_integer(b) {
                return Err(Error::ParameterCollision(b));
            }
        }
        Ok(())
    }
}

/// Generalized hypergeometric `0F_q(; b_1..b_q; z)`.
///
/// Stops once the term ratio has fallen below one and the last term is
/// below `1e-14` of the running sum. Hitting the term cap is an error.
pub fn hyp0fq(params: &HypergeometricParams) -> Result<f64> {
    params.validate()?;
    let z = params.argument;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    if z == 0.0 {
        return Ok(1.0);
    }
    for n in 0..TERM_CAP {
        let nf = n as f64;
        let denom = params.lower.iter().fold(nf + 1.0, |acc, &b| acc * (b + nf));
        let ratio = z / denom;
        term *= ratio;
        // Neumaier compensated sum
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if !sum.is_finite() {
            return Err(Error::Overflow(z));
        }
        if ratio.abs() < 1.0 && term.abs() <= REL_TOL * (sum + comp).abs() {
            return Ok(sum + comp);
        }
        if term == 0.0 {
            return Ok(sum + comp);
        }
    }
    Err(Error::ConvergenceFailure { context: "hyp0fq", iterations: TERM_CAP })
}
