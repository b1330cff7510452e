use std::ops::AddAssign;
use std::time::Duration;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Error counters accumulated over trials at one operating point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialMetrics {
    pub trials: u64,
    pub bits_total: u64,
    pub bit_errors: u64,
    pub symbols_total: u64,
    pub symbol_errors: u64,
    pub frames: u64,
    pub frame_errors: u64,
    pub amp_iterations_sum: u64,
    pub wall_time: Duration,
}

impl AddAssign<&TrialMetrics> for TrialMetrics {
    fn add_assign(&mut self, o: &TrialMetrics) {
        self.trials += o.trials;
        self.bits_total += o.bits_total;
        self.bit_errors += o.bit_errors;
        self.symbols_total += o.symbols_total;
        self.symbol_errors += o.symbol_errors;
        self.frames += o.frames;
        self.frame_errors += o.frame_errors;
        self.amp_iterations_sum += o.amp_iterations_sum;
        self.wall_time += o.wall_time;
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Normal-approximation 95% interval for a binomial proportion, clipped
/// to [0, 1].
pub fn binomial_ci(successes: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let p = ratio(successes, total);
    let half = Z95 * (p * (1.0 - p) / total as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

impl TrialMetrics {
    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits_total)
    }

    pub fn ber_ci(&self) -> (f64, f64) {
        binomial_ci(self.bit_errors, self.bits_total)
    }

    /// Section (coded symbol) error rate.
    pub fn ser(&self) -> f64 {
        ratio(self.symbol_errors, self.symbols_total)
    }

    pub fn ser_ci(&self) -> (f64, f64) {
        binomial_ci(self.symbol_errors, self.symbols_total)
    }

    /// Per-user codeword error rate.
    pub fn fer(&self) -> f64 {
        ratio(self.frame_errors, self.frames)
    }

    pub fn fer_ci(&self) -> (f64, f64) {
        binomial_ci(self.frame_errors, self.frames)
    }

    pub fn avg_amp_iterations(&self) -> f64 {
        ratio(self.amp_iterations_sum, self.trials)
    }
}
