//! Composite Gauss-Legendre rules with a fixed summation order.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use crate::numeric::pairwise_sum;

pub const NODES_PER_PANEL: usize = 16;

#[derive(Debug, Clone)]
pub struct GaussRule {
    /// `(node, weight)` on `[-1, 1]`, sorted by node.
    pairs: Vec<(f64, f64)>,
}

impl GaussRule {
    pub fn legendre(n: usize) -> Self {
        let degree = NonZeroUsize::new(n).expect("rule needs at least one node");
        let mut pairs: Vec<(f64, f64)> = GaussLegendre::new(degree).as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self { pairs }
    }

    /// The shared 16-node rule.
    pub fn standard() -> &'static GaussRule {
        static RULE: OnceLock<GaussRule> = OnceLock::new();
        RULE.get_or_init(|| GaussRule::legendre(NODES_PER_PANEL))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Single panel on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for &(x, w) in &self.pairs {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// `panels` equal panels on `[a, b]`, panel sums combined pairwise.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let sums: Vec<f64> = (0..panels)
            .map(|i| {
                let lo = a + h * i as f64;
                let hi = if i + 1 == panels { b } else { lo + h };
                self.integrate(lo, hi, &mut f)
            })
            .collect();
        pairwise_sum(&sums)
    }

    /// Composite rule over consecutive sub-intervals delimited by `breaks`.
    pub fn over_breaks<F: FnMut(f64) -> f64>(
        &self,
        breaks: &[f64],
        panels: usize,
        mut f: F,
    ) -> f64 {
        let sums: Vec<f64> = breaks
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| self.composite(w[0], w[1], panels, &mut f))
            .collect();
        pairwise_sum(&sums)
    }
}

/// Sorted, deduplicated breakpoints inside `[lo, hi]`, endpoints included.
pub fn breakpoints(lo: f64, hi: f64, interior: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    pts.extend(
        interior
            .into_iter()
            .filter(|t| t.is_finite() && *t > lo && *t < hi),
    );
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
