use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::timestep::DtMode;
use crate::error::{HwenoError, Result};
use crate::indicator::{IndicatorMode, KXRCF_EXPONENT};
use crate::reconstruct::{LinearWeights, EPSILON};

/// Which cells get the nonlinear treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeMode {
    /// KXRCF-driven switch between limiting/HWENO and linear.
    #[default]
    Hybrid,
    /// Every cell treated as troubled.
    ForceAll,
    /// No cell treated as troubled.
    LinearOnly,
}

impl SchemeMode {
    pub fn indicator(self, threshold: f64, exponent: f64) -> IndicatorMode {
        match self {
            SchemeMode::Hybrid => IndicatorMode::Kxrcf {
                threshold,
                exponent,
            },
            SchemeMode::ForceAll => IndicatorMode::ForceAll,
            SchemeMode::LinearOnly => IndicatorMode::ForceNone,
        }
    }
}

impl std::str::FromStr for SchemeMode {
    type Err = HwenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hybrid" | "new-hybrid" => Ok(SchemeMode::Hybrid),
            "force-all" | "new-hweno" => Ok(SchemeMode::ForceAll),
            "linear" | "linear-only" => Ok(SchemeMode::LinearOnly),
            _ => Err(HwenoError::config(format!(
                "unknown mode {s:?} (expected new-hybrid, new-hweno or linear)"
            ))),
        }
    }
}

/// Linear-weight policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaChoice {
    /// Each low-degree candidate gets this weight.
    LowDegree(f64),
    Uniform,
    /// Fresh positive weights at every time step from a seeded generator.
    Random {
        seed: u64,
    },
}

impl Default for GammaChoice {
    fn default() -> Self {
        GammaChoice::LowDegree(0.01)
    }
}

/// Linear weights in force during one time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepWeights {
    /// First-moment limiting (1D and both 2D directions).
    pub moment: LinearWeights<3>,
    /// 1D interface reconstruction.
    pub interface_1d: LinearWeights<3>,
    /// 2D interface reconstruction.
    pub interface_2d: LinearWeights<5>,
}

/// Produces the weights for each step.
#[derive(Debug, Clone)]
pub struct WeightSource {
    choice: GammaChoice,
    fixed: Option<StepWeights>,
    rng: ChaCha8Rng,
}

impl WeightSource {
    pub fn new(choice: GammaChoice) -> Result<Self> {
        let fixed = match choice {
            GammaChoice::LowDegree(low) => Some(StepWeights {
                moment: LinearWeights::low_degree(low)?,
                interface_1d: LinearWeights::low_degree(low)?,
                interface_2d: LinearWeights::low_degree(low)?,
            }),
            GammaChoice::Uniform => Some(StepWeights {
                moment: LinearWeights::uniform(),
                interface_1d: LinearWeights::uniform(),
                interface_2d: LinearWeights::uniform(),
            }),
            GammaChoice::Random { .. } => None,
        };
        let seed = match choice {
            GammaChoice::Random { seed } => seed,
            _ => 0,
        };
        Ok(WeightSource {
            choice,
            fixed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn choice(&self) -> GammaChoice {
        self.choice
    }

    pub fn next_step(&mut self) -> StepWeights {
        match self.fixed {
            Some(w) => w,
            None => StepWeights {
                moment: LinearWeights::random(&mut self.rng),
                interface_1d: LinearWeights::random(&mut self.rng),
                interface_2d: LinearWeights::random(&mut self.rng),
            },
        }
    }
}

/// Everything that shapes the discretization apart from the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub mode: SchemeMode,
    pub gamma: GammaChoice,
    pub eps: f64,
    pub cfl: f64,
    pub dt_mode: DtMode,
    /// KXRCF threshold.
    pub threshold: f64,
    /// Power of the cell circumradius in the KXRCF normalization.
    pub exponent: f64,
    /// Re-run the indicator at every RK stage instead of once per step.
    pub reflag_each_stage: bool,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            mode: SchemeMode::Hybrid,
            gamma: GammaChoice::default(),
            eps: EPSILON,
            cfl: 0.6,
            dt_mode: DtMode::Production,
            threshold: 1.0,
            exponent: KXRCF_EXPONENT,
            reflag_each_stage: false,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(HwenoError::config(format!(
                "CFL must be positive, got {}",
                self.cfl
            )));
        }
        if !(self.eps > 0.0) {
            return Err(HwenoError::config("epsilon must be positive"));
        }
        if !(self.threshold > 0.0) {
            return Err(HwenoError::config("indicator threshold must be positive"));
        }
        if !(self.exponent >= 0.0 && self.exponent.is_finite()) {
            return Err(HwenoError::config(
                "indicator exponent must be non-negative",
            ));
        }
        if let DtMode::Accuracy { reference } = self.dt_mode {
            if !(reference > 0.0 && reference.is_finite()) {
                return Err(HwenoError::config(
                    "accuracy-mode reference size must be positive",
                ));
            }
        }
        WeightSource::new(self.gamma).map(|_| ())
    }

    pub fn indicator(&self) -> IndicatorMode {
        self.mode.indicator(self.threshold, self.exponent)
    }
}

/// Extremes seen at the reconstructed quadrature points of one stage, over
/// all points and over the interface points alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageStats {
    pub min_density: f64,
    pub min_pressure: f64,
    pub min_interface_density: f64,
    pub min_interface_pressure: f64,
}

impl Default for StageStats {
    fn default() -> Self {
        StageStats {
            min_density: f64::INFINITY,
            min_pressure: f64::INFINITY,
            min_interface_density: f64::INFINITY,
            min_interface_pressure: f64::INFINITY,
        }
    }
}

impl StageStats {
    pub fn merge(self, o: StageStats) -> StageStats {
        StageStats {
            min_density: self.min_density.min(o.min_density),
            min_pressure: self.min_pressure.min(o.min_pressure),
            min_interface_density: self.min_interface_density.min(o.min_interface_density),
            min_interface_pressure: self.min_interface_pressure.min(o.min_interface_pressure),
        }
    }

    pub fn record(&mut self, rho: f64, p: f64, interface: bool) {
        self.min_density = self.min_density.min(rho);
        self.min_pressure = self.min_pressure.min(p);
        if interface {
            self.min_interface_density = self.min_interface_density.min(rho);
            self.min_interface_pressure = self.min_interface_pressure.min(p);
        }
    }
}

/// Outcome of a run to the final time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunSummary {
    pub steps: usize,
    pub t_final: f64,
    /// Fraction of flagged cells at every step.
    pub flag_history: Vec<f64>,
    pub stats: StageStats,
}

impl RunSummary {
    pub fn mean_flag_fraction(&self) -> f64 {
        if self.flag_history.is_empty() {
            0.0
        } else {
            self.flag_history.iter().sum::<f64>() / self.flag_history.len() as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names() {
        assert_eq!(
            "new-hybrid".parse::<SchemeMode>().unwrap(),
            SchemeMode::Hybrid
        );
        assert_eq!(
            "new-hweno".parse::<SchemeMode>().unwrap(),
            SchemeMode::ForceAll
        );
        assert_eq!(
            "linear".parse::<SchemeMode>().unwrap(),
            SchemeMode::LinearOnly
        );
        assert!("weno".parse::<SchemeMode>().is_err());
    }

    #[test]
    fn random_weights_are_reproducible_and_vary() {
        let mut a = WeightSource::new(GammaChoice::Random { seed: 7 }).unwrap();
        let mut b = WeightSource::new(GammaChoice::Random { seed: 7 }).unwrap();
        let (a1, a2) = (a.next_step(), a.next_step());
        assert_eq!(a1, b.next_step());
        assert_eq!(a2, b.next_step());
        assert_ne!(a1, a2);
    }

    #[test]
    fn config_validation() {
        assert!(SchemeConfig::default().validate().is_ok());
        let bad = SchemeConfig {
            cfl: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SchemeConfig {
            gamma: GammaChoice::LowDegree(0.5),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
