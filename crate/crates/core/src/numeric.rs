//! Stable log-domain accumulation helpers.

/// Log-sum-exp over a slice with the usual max shift.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// Streaming log-sum-exp accumulator: keeps a running maximum and a sum of
/// exponentials rescaled to it, so terms can be folded in one pass.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    pub fn add(&mut self, log_term: f64) {
        if log_term <= self.max {
            self.sum += (log_term - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - log_term).exp() + 1.0;
            self.max = log_term;
        }
    }

    /// Merge another accumulator (associative up to rounding; combine in a
    /// fixed order for reproducibility).
    pub fn merge(&mut self, other: LogSumExp) {
        if other.max <= self.max {
            self.sum += other.sum * (other.max - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - other.max).exp() + other.sum;
            self.max = other.max;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max.is_finite() {
            self.max + self.sum.ln()
        } else {
            self.max
        }
    }
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

/// log |2 sin(pi d / L)| for d = 0..L-1: the chord-length table of the L-th
/// roots of unity. Entry 0 is unused (coincident points) and set to -inf.
pub fn log_chord_table(l: usize) -> Vec<f64> {
    (0..l)
        .map(|d| {
            if d == 0 {
                f64::NEG_INFINITY
            } else {
                (2.0 * (std::f64::consts::PI * d as f64 / l as f64).sin().abs()).ln()
            }
        })
        .collect()
}

/// Sum of log chord lengths over all pairs of 1-based positions on an L-ring.
pub fn log_chord_sum(positions: &[usize], table: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, &a) in positions.iter().enumerate() {
        for &b in &positions[..i] {
            s += table[a.abs_diff(b)];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_matches_naive() {
        let xs = [-1.0, -2.0, -3.0];
        let naive = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((logsumexp(&xs) - naive).abs() < 1e-14);
        let mut acc = LogSumExp::new();
        for &x in &xs {
            acc.add(x);
        }
        assert!((acc.value() - naive).abs() < 1e-14);
    }

    #[test]
    fn lse_survives_large_magnitudes() {
        let xs = [1000.0, 1002.0];
        let expected = 1002.0 + (1.0f64 + (-2.0f64).exp()).ln();
        assert!((logsumexp(&xs) - expected).abs() < 1e-12);
    }

    #[test]
    fn lse_merge_agrees_with_sequential() {
        let xs: Vec<f64> = (0..100).map(|i| -0.37 * i as f64).collect();
        let mut whole = LogSumExp::new();
        for &x in &xs {
            whole.add(x);
        }
        let mut left = LogSumExp::new();
        let mut right = LogSumExp::new();
        for &x in &xs[..41] {
            left.add(x);
        }
        for &x in &xs[41..] {
            right.add(x);
        }
        left.merge(right);
        assert!((left.value() - whole.value()).abs() < 1e-12);
    }

    #[test]
    fn chord_table_square() {
        let t = log_chord_table(4);
        // |1 - i| = sqrt(2), |1 - (-1)| = 2
        assert!((t[1] - 0.5 * 2.0f64.ln()).abs() < 1e-15);
        assert!((t[2] - 2.0f64.ln()).abs() < 1e-15);
        assert_eq!(t[0], f64::NEG_INFINITY);
    }
}
