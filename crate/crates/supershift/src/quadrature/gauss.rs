//! Cached Gauss–Legendre rules on [−1, 1].

use gauss_quad::legendre::GaussLegendre;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

const SIZES: [usize; 8] = [8, 12, 16, 20, 24, 32, 48, 64];

static RULES: [OnceLock<Vec<(f64, f64)>>; 8] = [const { OnceLock::new() }; 8];

/// Node/weight pairs of the n-point rule. Only the sizes in `SIZES` are cached.
pub fn gl_rule(n: usize) -> &'static [(f64, f64)] {
    let slot = SIZES
        .iter()
        .position(|&s| s == n)
        .unwrap_or_else(|| panic!("no cached Gauss-Legendre rule of size {n}"));
    RULES[slot].get_or_init(|| {
        let rule = GaussLegendre::new(NonZeroUsize::new(n).unwrap());
        let mut pairs = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    })
}

/// Uncached n-point rule, for sizes outside the cache.
pub fn gl_nodes(n: usize) -> Vec<(f64, f64)> {
    if let Some(slot) = SIZES.iter().position(|&s| s == n) {
        return gl_rule(SIZES[slot]).to_vec();
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in SIZES {
            let s: f64 = gl_rule(n).iter().map(|p| p.1).sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        let r = gl_rule(12);
        let v: f64 = r.iter().map(|&(x, w)| w * x.powi(22)).sum();
        assert!((v - 2.0 / 23.0).abs() < 1e-15);
    }
}
