//! Gauss-Legendre rules and composite rules split at known breakpoints.

use std::f64::consts::PI;

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre integration with a fixed node budget per level.
///
/// An interval is cut at the supplied breakpoints and the `order` nodes are
/// shared among the pieces in proportion to their length, with at least
/// `order / 8` (and at least 4) nodes per piece.
#[derive(Debug, Clone)]
pub struct Composite {
    order: usize,
    rules: Vec<GaussLegendre>,
}

impl Composite {
    pub fn new(order: usize) -> Self {
        assert!(order >= 4, "quadrature order must be at least 4");
        Self {
            order,
            rules: (1..=order).map(GaussLegendre::new).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn rule(&self, n: usize) -> &GaussLegendre {
        &self.rules[n.clamp(1, self.order) - 1]
    }

    /// Writes `(abscissa, weight)` pairs covering `[a, b]` into `out`.
    /// Breakpoints outside the open interval are ignored.
    pub fn nodes_into(&self, a: f64, b: f64, breaks: &[f64], out: &mut Vec<(f64, f64)>) {
        out.clear();
        if !(b > a) {
            return;
        }
        let span = b - a;
        let tol = 1e-12 * span.max(1e-300);
        let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
        cuts.push(a);
        let mut inner: Vec<f64> = breaks
            .iter()
            .copied()
            .filter(|&x| x.is_finite() && x > a + tol && x < b - tol)
            .collect();
        inner.sort_by(f64::total_cmp);
        for x in inner {
            if x - cuts[cuts.len() - 1] > tol {
                cuts.push(x);
            }
        }
        if b - cuts[cuts.len() - 1] <= tol && cuts.len() > 1 {
            cuts.pop();
        }
        cuts.push(b);
        let min_nodes = (self.order / 8).max(4).min(self.order);
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let share = (self.order as f64 * (hi - lo) / span).round() as usize;
            let rule = self.rule(share.max(min_nodes));
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            out.extend(
                rule.nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(|(&x, &wt)| (mid + half * x, wt * half)),
            );
        }
    }

    pub fn integrate(&self, a: f64, b: f64, breaks: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut nodes = Vec::new();
        self.nodes_into(a, b, breaks, &mut nodes);
        nodes.iter().map(|&(x, w)| w * f(x)).sum()
    }
}
