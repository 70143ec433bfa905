use super::{WeightOutcome, WeightUpdate};

/// Target acceptance rate for the random-walk blocks.
pub const DEFAULT_TARGET_ACCEPTANCE: f64 = 0.4;
/// Iterations per adaptation window.
pub const TUNING_WINDOW: usize = 50;
/// `c` in `β ← β · exp(c · (rate − target))`.
pub const TUNING_GAIN: f64 = 1.0;

/// Windowed stochastic-approximation step-size adaptation.
///
/// Only fed during burn-in; the step is frozen afterwards.
#[derive(Debug, Clone)]
pub struct StepTuner {
    beta: f64,
    target: f64,
    window: usize,
    gain: f64,
    accepted: u64,
    proposed: u64,
    seen: usize,
    history: Vec<f64>,
}

impl StepTuner {
    pub fn new(beta: f64, target: f64) -> Self {
        Self {
            beta,
            target,
            window: TUNING_WINDOW,
            gain: TUNING_GAIN,
            accepted: 0,
            proposed: 0,
            seen: 0,
            history: Vec::new(),
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Step sizes at the end of each completed window.
    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn record(&mut self, accepted: bool) {
        self.record_counts(u64::from(accepted), 1);
    }

    /// Record one iteration that made `proposed` proposals.
    pub fn record_counts(&mut self, accepted: u64, proposed: u64) {
        self.seen += 1;
        self.accepted += accepted;
        self.proposed += proposed;
        if self.seen == self.window {
            if self.proposed > 0 {
                let rate = self.accepted as f64 / self.proposed as f64;
                self.beta *= (self.gain * (rate - self.target)).exp();
            }
            self.history.push(self.beta);
            self.seen = 0;
            self.accepted = 0;
            self.proposed = 0;
        }
    }
}

/// Step sizes for the `log T` block: one shared tuner for joint proposals, one per
/// coordinate for coordinate-wise sweeps.
#[derive(Debug, Clone)]
pub struct WeightTuner {
    tuners: Vec<StepTuner>,
}

impl WeightTuner {
    pub fn new(update: WeightUpdate, dim: usize, beta: f64, target: f64) -> Self {
        let k = match update {
            WeightUpdate::Block => 1,
            WeightUpdate::Coordinate => dim,
        };
        Self {
            tuners: vec![StepTuner::new(beta, target); k],
        }
    }

    pub fn steps(&self) -> Vec<f64> {
        self.tuners.iter().map(StepTuner::beta).collect()
    }

    pub fn record(&mut self, outcome: &WeightOutcome) {
        for (t, a) in self.tuners.iter_mut().zip(&outcome.per_coordinate) {
            t.record(*a);
        }
    }

    /// Median step across tuners.
    pub fn summary(&self) -> f64 {
        let mut s = self.steps();
        s.sort_by(f64::total_cmp);
        super::quantile_sorted(&s, 0.5)
    }
}
