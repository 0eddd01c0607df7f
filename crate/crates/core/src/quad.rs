//! Gauss-Legendre quadrature on an interval.

/// A Gauss-Legendre rule mapped to `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build a `q`-point rule on `[lo, hi]`.
    ///
    /// Nodes are the roots of the Legendre polynomial P_q, found by Newton
    /// iteration from the Chebyshev initial guess; this is accurate to
    /// machine precision for the node counts used here (q <= a few thousand).
    pub fn new(q: usize, lo: f64, hi: f64) -> Self {
        assert!(q >= 1, "quadrature rule needs at least one node");
        assert!(hi > lo, "empty quadrature interval");
        let mut nodes = vec![0.0; q];
        let mut weights = vec![0.0; q];
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        // Roots come in +/- pairs; solve for the upper half.
        let m = (q + 1) / 2;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(q, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = mid - half * x;
            nodes[q - 1 - i] = mid + half * x;
            weights[i] = half * w;
            weights[q - 1 - i] = half * w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Approximate the integral of `f` over the rule's interval.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `sin(x)/x`, by series below `|x| < 1e-4`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x * x * x * x / 120.0
    } else {
        x.sin() / x
    }
}

/// `sin(z)/z` for complex `z`, by series below `|z| < 1e-4`.
pub fn sinc_complex(z: num_complex::Complex64) -> num_complex::Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        num_complex::Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

fn legendre_and_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=q {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
