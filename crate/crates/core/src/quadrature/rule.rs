use super::gauss::gauss_legendre;
use crate::error::{Error, Result};

/// One Gauss-Legendre panel `[start, end]` owning nodes `offset..offset+len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub start: f64,
    pub end: f64,
    pub offset: usize,
    pub len: usize,
    reference: Vec<f64>,
    bary: Vec<f64>,
}

impl Panel {
    fn new(start: f64, end: f64, offset: usize, len: usize) -> (Self, Vec<f64>, Vec<f64>) {
        let (x, w) = gauss_legendre(len);
        let bary = x
            .iter()
            .zip(&w)
            .enumerate()
            .map(|(j, (x, w))| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                s * ((1.0 - x * x) * w).sqrt()
            })
            .collect();
        let half = 0.5 * (end - start);
        let nodes = x.iter().map(|x| start + half * (x + 1.0)).collect();
        let weights = w.iter().map(|w| w * half).collect();
        (Panel { start, end, offset, len, reference: x, bary }, nodes, weights)
    }

    fn to_reference(&self, t: f64) -> f64 {
        2.0 * (t - self.start) / (self.end - self.start) - 1.0
    }

    /// Barycentric Lagrange weights of the panel nodes at `t`.
    pub fn lagrange_at(&self, t: f64, out: &mut [f64]) {
        let x = self.to_reference(t);
        for (j, &xj) in self.reference.iter().enumerate() {
            if x == xj {
                out.iter_mut().for_each(|o| *o = 0.0);
                out[j] = 1.0;
                return;
            }
        }
        let mut denom = 0.0;
        for j in 0..self.len {
            let r = self.bary[j] / (x - self.reference[j]);
            out[j] = r;
            denom += r;
        }
        out.iter_mut().for_each(|o| *o /= denom);
    }
}

/// Nodes and positive weights on (0, 1), organised in Gauss-Legendre panels.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub panels: Vec<Panel>,
}

/// Single-panel `n`-point Gauss-Legendre rule mapped to (0, 1).
pub fn gauss_rule(n: usize) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("gauss rule needs n >= 2, got {n}")));
    }
    let (panel, nodes, weights) = Panel::new(0.0, 1.0, 0, n);
    Ok(QuadratureRule { nodes, weights, panels: vec![panel] })
}

/// Composite rule whose panel widths grow geometrically by `ratio` away from 0.
pub fn graded_rule(panel_count: usize, ratio: f64, points_per_panel: usize) -> Result<QuadratureRule> {
    if panel_count == 0 || points_per_panel < 2 {
        return Err(Error::InvalidParameter("graded rule needs panels and >= 2 points each".into()));
    }
    if !(ratio >= 1.0) {
        return Err(Error::InvalidParameter(format!("grading ratio {ratio} must be >= 1")));
    }
    let raw: Vec<f64> = (0..panel_count).map(|i| ratio.powi(i as i32)).collect();
    let total: f64 = raw.iter().sum();
    let mut edges = vec![0.0];
    let mut acc = 0.0;
    for w in &raw {
        acc += w / total;
        edges.push(acc);
    }
    edges[panel_count] = 1.0;
    let mut rule = QuadratureRule { nodes: vec![], weights: vec![], panels: vec![] };
    for i in 0..panel_count {
        let (panel, nodes, weights) = Panel::new(edges[i], edges[i + 1], rule.nodes.len(), points_per_panel);
        rule.nodes.extend(nodes);
        rule.weights.extend(weights);
        rule.panels.push(panel);
    }
    Ok(rule)
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {sum}")));
        }
        if self.weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidParameter("weights must be positive".into()));
        }
        if !self.nodes.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::InvalidParameter("nodes must increase strictly".into()));
        }
        if self.nodes.first().is_some_and(|&x| x <= 0.0) || self.nodes.last().is_some_and(|&x| x >= 1.0) {
            return Err(Error::InvalidParameter("nodes must lie inside (0, 1)".into()));
        }
        Ok(())
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&y, &w)| w * f(y)).sum()
    }

    /// Index of the panel containing `t` (closed on the right for the last one).
    pub fn panel_index(&self, t: f64) -> usize {
        self.panels
            .iter()
            .position(|p| t < p.end)
            .unwrap_or(self.panels.len() - 1)
    }

    /// Piecewise-polynomial interpolant of nodal `values` evaluated at `t`.
    pub fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        let p = &self.panels[self.panel_index(t)];
        let mut l = vec![0.0; p.len];
        p.lagrange_at(t, &mut l);
        l.iter().zip(&values[p.offset..p.offset + p.len]).map(|(a, b)| a * b).sum()
    }
}
