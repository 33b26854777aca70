//! Exact tests on error counts.

use statrs::function::factorial::ln_binomial;

/// Two-sided Fisher exact test p-value for `x1 / n1` against `x2 / n2`.
pub fn fisher_exact_two_sided(x1: u64, n1: u64, x2: u64, n2: u64) -> f64 {
    let total = x1 + x2;
    let lo = total.saturating_sub(n2);
    let hi = total.min(n1);
    let denom = ln_binomial(n1 + n2, total);
    let ln_p = |x: u64| ln_binomial(n1, x) + ln_binomial(n2, total - x) - denom;
    let observed = ln_p(x1);
    // Relative slack for floating-point ties.
    let cutoff = observed + 1e-7;
    let p: f64 = (lo..=hi)
        .map(ln_p)
        .filter(|&lp| lp <= cutoff)
        .map(f64::exp)
        .sum();
    p.min(1.0)
}

/// True when `x_after / n_after` is significantly larger than
/// `x_before / n_before` at level `alpha`.
pub fn significant_increase(
    x_before: u64,
    n_before: u64,
    x_after: u64,
    n_after: u64,
    alpha: f64,
) -> bool {
    let before = x_before as f64 / n_before as f64;
    let after = x_after as f64 / n_after as f64;
    after > before && fisher_exact_two_sided(x_before, n_before, x_after, n_after) < alpha
}

/// Indices `i` where point `i + 1` shows a significant increase over point `i`.
pub fn monotonicity_violations(counts: &[(u64, u64)], alpha: f64) -> Vec<usize> {
    counts
        .windows(2)
        .enumerate()
        .filter(|(_, w)| significant_increase(w[0].0, w[0].1, w[1].0, w[1].1, alpha))
        .map(|(i, _)| i)
        .collect()
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(x: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = x as f64 / nf;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * nf)) / (1.0 + z2 / nf);
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / (1.0 + z2 / nf);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fisher_reference_values() {
        // Classic tea-tasting table [[3,1],[1,3]]: two-sided p = 0.4857.
        let p = fisher_exact_two_sided(3, 4, 1, 4);
        assert!((p - 34.0 / 70.0).abs() < 1e-9, "{p}");
        assert!((fisher_exact_two_sided(5, 100, 5, 100) - 1.0).abs() < 1e-9);
        assert!(fisher_exact_two_sided(0, 10_000, 60, 10_000) < 1e-10);
    }

    #[test]
    fn increase_detection() {
        assert!(significant_increase(10, 10_000, 80, 10_000, 0.01));
        assert!(!significant_increase(80, 10_000, 10, 10_000, 0.01));
        assert!(!significant_increase(40, 10_000, 45, 10_000, 0.01));
        assert_eq!(
            monotonicity_violations(&[(500, 1000), (100, 1000), (300, 1000), (0, 1000)], 0.01),
            vec![1]
        );
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 1000, 2.576);
        assert!(lo < 0.03 && 0.03 < hi);
        assert_eq!(wilson_interval(0, 0, 1.0), (0.0, 1.0));
    }
}
