use degfrac_core::greens::green;
use degfrac_core::quadrature::gauss_legendre;

/// Coefficients (ascending powers) of [y(1-y)]^p.
fn bubble(p: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for _ in 0..p {
        // multiply by y - y^2
        let mut next = vec![0.0; c.len() + 2];
        for (i, &v) in c.iter().enumerate() {
            next[i + 1] += v;
            next[i + 2] -= v;
        }
        c = next;
    }
    c
}

fn derive(c: &[f64], times: usize) -> Vec<f64> {
    let mut c = c.to_vec();
    for _ in 0..times {
        c = c.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect();
    }
    c
}

fn eval(c: &[f64], y: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * y + v)
}

#[test]
fn green_inverts_even_derivative() {
    let (x, w) = gauss_legendre(100);
    for k in 1..=2 {
        let phi = bubble(k + 1);
        let f = derive(&phi, 2 * k);
        for i in 1..=20 {
            let y = i as f64 / 21.0;
            // split at the kink so each piece is a polynomial integrand
            let mut integral = 0.0;
            for &(a, b) in &[(0.0, y), (y, 1.0)] {
                let h = 0.5 * (b - a);
                for (xj, wj) in x.iter().zip(&w) {
                    let xi = a + h * (xj + 1.0);
                    integral += wj * h * green(y, xi, k) * eval(&f, xi);
                }
            }
            let exact = eval(&phi, y);
            assert!((integral - exact).abs() <= 1e-8 * exact.abs(), "k={k} y={y} {integral} {exact}");
        }
    }
}
