//! Energy efficiency of a single link: `ln(1 + |h|^2 p / sigma^2) / (p + delta)`
//! over `0 <= p <= P`.

use rand::Rng;

use crate::error::{FpError, Result};
use crate::inner::{golden_section_max, GoldenSection};
use crate::problem::{ConstraintSet, Curvature, FPProblem, ProblemKind, RatioSpec};
use crate::scalar::{dinkelbach_solve, unified_qt_solve};
use crate::solver::{Solution, SolverConfig, Transform};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    /// Channel gain `|h|^2`.
    pub gain: f64,
    pub noise: f64,
    /// Circuit power `delta`.
    pub circuit: f64,
    pub power_cap: f64,
}

impl Default for Link {
    fn default() -> Self {
        Self { gain: 1.0, noise: 1.0, circuit: 1.0, power_cap: 10.0 }
    }
}

impl Link {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(self.gain) && ok(self.noise) && ok(self.circuit) && ok(self.power_cap)) {
            return Err(FpError::InvalidProblem("gain, noise, circuit power and cap must be positive".into()));
        }
        Ok(())
    }

    /// Bits per joule in nats.
    pub fn efficiency(&self, p: f64) -> f64 {
        (self.gain * p / self.noise).ln_1p() / (p + self.circuit)
    }

    /// Gains, noise and circuit power drawn log-uniformly over two decades,
    /// cap over one.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut draw = |decades: f64| 10f64.powf(rng.random_range(-decades / 2.0..decades / 2.0));
        Self { gain: draw(2.0), noise: draw(2.0), circuit: draw(2.0), power_cap: 10.0 * draw(1.0) }
    }
}

pub fn ee_problem(link: &Link) -> Result<FPProblem> {
    link.validate()?;
    let Link { gain, noise, circuit, power_cap } = *link;
    let s = gain / noise;
    let r = RatioSpec::new(
        move |x| (s * x[0]).ln_1p(),
        move |x| vec![s / (1.0 + s * x[0])],
        move |x| x[0] + circuit,
        |_| vec![1.0],
        Curvature::ConcaveConvex,
    );
    FPProblem::new(ProblemKind::Single, vec![r], ConstraintSet::uniform_box(1, 0.0, power_cap))
}

/// Global optimum by Dinkelbach with an exact one-dimensional inner search.
pub fn solve_energy_efficiency(link: &Link, config: &SolverConfig) -> Result<Solution> {
    let problem = ee_problem(link)?;
    dinkelbach_solve(&problem, &[link.power_cap], &GoldenSection::default(), config)
}

/// Quadratic-transform iteration on the same ratio.
pub fn solve_energy_efficiency_qt(link: &Link, config: &SolverConfig) -> Result<Solution> {
    let problem = ee_problem(link)?;
    let config = config.clone().with_variant(Transform::Quadratic);
    unified_qt_solve(&problem, &[link.power_cap], &GoldenSection::default(), &config)
}

/// Direct golden-section search on the efficiency, which is unimodal in `p`.
pub fn ee_golden(link: &Link) -> Result<(f64, f64)> {
    link.validate()?;
    let p = golden_section_max(&|p| link.efficiency(p), 0.0, link.power_cap, 1e-13 * link.power_cap.max(1.0));
    Ok((p, link.efficiency(p)))
}
