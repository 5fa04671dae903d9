//! Problem model shared by every transform: ratio terms, outer functions,
//! constraint sets, objective evaluation and a sampling validator.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{FpError, Result};
use crate::rng::seeded;

/// Denominators below this are rejected instead of clamped.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Declared curvature of a ratio's numerator/denominator pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    /// Concave numerator, convex denominator (maximization setting).
    ConcaveConvex,
    /// Convex numerator, concave denominator (minimization setting).
    ConvexConcave,
    Generic,
}

/// One ratio term `A(x) / B(x)` with analytic gradients.
#[derive(Clone)]
pub struct RatioSpec {
    numerator: ScalarFn,
    denominator: ScalarFn,
    grad_numerator: GradFn,
    grad_denominator: GradFn,
    pub curvature: Curvature,
}

impl RatioSpec {
    pub fn new<A, GA, B, GB>(a: A, grad_a: GA, b: B, grad_b: GB, curvature: Curvature) -> Self
    where
        A: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        GA: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        B: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        GB: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            numerator: Arc::new(a),
            denominator: Arc::new(b),
            grad_numerator: Arc::new(grad_a),
            grad_denominator: Arc::new(grad_b),
            curvature,
        }
    }

    /// Builds a ratio whose gradients come from central finite differences.
    /// Meant for tests; real problems should supply analytic gradients.
    pub fn with_finite_differences<A, B>(a: A, b: B, curvature: Curvature) -> Self
    where
        A: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        B: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let a: ScalarFn = Arc::new(a);
        let b: ScalarFn = Arc::new(b);
        let (fa, fb) = (a.clone(), b.clone());
        Self {
            numerator: a,
            denominator: b,
            grad_numerator: Arc::new(move |x| central_difference(&*fa, x)),
            grad_denominator: Arc::new(move |x| central_difference(&*fb, x)),
            curvature,
        }
    }

    #[inline]
    pub fn a(&self, x: &[f64]) -> f64 {
        (self.numerator)(x)
    }

    #[inline]
    pub fn b(&self, x: &[f64]) -> f64 {
        (self.denominator)(x)
    }

    pub fn grad_a(&self, x: &[f64]) -> Vec<f64> {
        (self.grad_numerator)(x)
    }

    pub fn grad_b(&self, x: &[f64]) -> Vec<f64> {
        (self.grad_denominator)(x)
    }
}

impl fmt::Debug for RatioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RatioSpec")
            .field("curvature", &self.curvature)
            .finish_non_exhaustive()
    }
}

/// Central difference with step `1e-6 * (1 + |x_i|)`.
pub fn central_difference(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-6 * (1.0 + x[i].abs());
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterKind {
    Identity,
    Log1p,
    LogOneMinus,
    NegatedIdentity,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
}

/// Monotone scalar function applied to a ratio in sum-of-functions problems.
#[derive(Clone)]
pub struct OuterFunction {
    pub kind: OuterKind,
    pub monotonicity: Monotonicity,
    eval: RealFn,
    deriv: RealFn,
    /// Open interval on which the function is finite.
    domain: (f64, f64),
}

impl OuterFunction {
    pub fn identity() -> Self {
        Self::builtin(OuterKind::Identity, Monotonicity::Nondecreasing, |r| r, |_| 1.0, (f64::NEG_INFINITY, f64::INFINITY))
    }

    /// `ln(1 + r)`.
    pub fn log1p() -> Self {
        Self::builtin(OuterKind::Log1p, Monotonicity::Nondecreasing, f64::ln_1p, |r| 1.0 / (1.0 + r), (-1.0, f64::INFINITY))
    }

    /// `ln(1 - r)`.
    pub fn log_one_minus() -> Self {
        Self::builtin(
            OuterKind::LogOneMinus,
            Monotonicity::Nonincreasing,
            |r| (-r).ln_1p(),
            |r| -1.0 / (1.0 - r),
            (f64::NEG_INFINITY, 1.0),
        )
    }

    pub fn negated_identity() -> Self {
        Self::builtin(OuterKind::NegatedIdentity, Monotonicity::Nonincreasing, |r| -r, |_| -1.0, (f64::NEG_INFINITY, f64::INFINITY))
    }

    pub fn custom<F, D>(eval: F, deriv: D, monotonicity: Monotonicity, domain: (f64, f64)) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { kind: OuterKind::Custom, monotonicity, eval: Arc::new(eval), deriv: Arc::new(deriv), domain }
    }

    fn builtin(
        kind: OuterKind,
        monotonicity: Monotonicity,
        eval: fn(f64) -> f64,
        deriv: fn(f64) -> f64,
        domain: (f64, f64),
    ) -> Self {
        Self { kind, monotonicity, eval: Arc::new(eval), deriv: Arc::new(deriv), domain }
    }

    pub fn in_domain(&self, r: f64) -> bool {
        r > self.domain.0 && r < self.domain.1
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Evaluates the function, returning `None` outside its domain.
    pub fn value(&self, r: f64) -> Option<f64> {
        self.in_domain(r).then(|| (self.eval)(r))
    }

    pub fn derivative(&self, r: f64) -> f64 {
        (self.deriv)(r)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.monotonicity == Monotonicity::Nondecreasing
    }
}

impl fmt::Debug for OuterFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OuterFunction")
            .field("kind", &self.kind)
            .field("monotonicity", &self.monotonicity)
            .field("domain", &self.domain)
            .finish()
    }
}

/// Feasible set for the optimization variable.
///
/// Matrix-valued variables are flattened column-major.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSet {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Euclidean ball centred at the origin.
    Ball { dim: usize, radius: f64 },
    /// Each column of a `rows x cols` matrix lies in a ball of `radius`.
    PerColumnBall { rows: usize, cols: usize, radius: f64 },
    /// Probability simplex.
    Simplex { dim: usize },
    /// `n x k` one-hot rows (each point assigned to exactly one of `k` clusters),
    /// flattened column-major.
    DiscreteAssignment { n: usize, k: usize },
    Unconstrained { dim: usize },
    /// Cartesian product; the variable is the concatenation of the parts.
    Product(Vec<ConstraintSet>),
}

impl ConstraintSet {
    pub fn uniform_box(dim: usize, lower: f64, upper: f64) -> Self {
        Self::Box { lower: vec![lower; dim], upper: vec![upper; dim] }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Box { .. } => "box",
            Self::Ball { .. } => "euclidean-ball",
            Self::PerColumnBall { .. } => "per-column-ball",
            Self::Simplex { .. } => "simplex",
            Self::DiscreteAssignment { .. } => "discrete-assignment",
            Self::Unconstrained { .. } => "unconstrained",
            Self::Product(_) => "product",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Box { lower, .. } => lower.len(),
            Self::Ball { dim, .. } | Self::Simplex { dim } | Self::Unconstrained { dim } => *dim,
            Self::PerColumnBall { rows, cols, .. } => rows * cols,
            Self::DiscreteAssignment { n, k } => n * k,
            Self::Product(parts) => parts.iter().map(Self::dim).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FpError::InvalidProblem(msg));
        match self {
            Self::Box { lower, upper } => {
                if lower.len() != upper.len() {
                    return bad("box bounds have different lengths".into());
                }
                if let Some(i) = lower.iter().zip(upper).position(|(l, u)| !(l <= u)) {
                    return bad(format!("box lower bound exceeds upper bound at {i}"));
                }
                Ok(())
            }
            Self::Ball { radius, .. } | Self::PerColumnBall { radius, .. } if !(*radius > 0.0) => {
                bad(format!("radius must be positive, got {radius}"))
            }
            Self::Product(parts) => parts.iter().try_for_each(Self::validate),
            _ => Ok(()),
        }
    }

    /// Membership test with absolute slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            Self::Box { lower, upper } => {
                x.iter().zip(lower.iter().zip(upper)).all(|(v, (l, u))| *v >= l - tol && *v <= u + tol)
            }
            Self::Ball { radius, .. } => norm(x) <= radius + tol,
            Self::PerColumnBall { rows, radius, .. } => x.chunks(*rows).all(|c| norm(c) <= radius + tol),
            Self::Simplex { .. } => x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol,
            Self::DiscreteAssignment { n, k } => (0..*n).all(|i| {
                let row: Vec<f64> = (0..*k).map(|c| x[c * n + i]).collect();
                row.iter().all(|v| v.abs() <= tol || (v - 1.0).abs() <= tol)
                    && (row.iter().sum::<f64>() - 1.0).abs() <= tol
            }),
            Self::Unconstrained { .. } => x.iter().all(|v| v.is_finite()),
            Self::Product(parts) => {
                let mut offset = 0;
                parts.iter().all(|p| {
                    let d = p.dim();
                    let ok = p.contains(&x[offset..offset + d], tol);
                    offset += d;
                    ok
                })
            }
        }
    }

    /// Draws a random feasible point (used by the validator). Unbounded
    /// coordinates are sampled from a standard normal.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            Self::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(&l, &u)| match (l.is_finite(), u.is_finite()) {
                    (true, true) => l + (u - l) * rng.random::<f64>(),
                    (true, false) => l + rng.sample::<f64, _>(StandardNormal).abs(),
                    (false, true) => u - rng.sample::<f64, _>(StandardNormal).abs(),
                    (false, false) => rng.sample(StandardNormal),
                })
                .collect(),
            Self::Ball { dim, radius } => sample_ball(rng, *dim, *radius),
            Self::PerColumnBall { rows, cols, radius } => {
                (0..*cols).flat_map(|_| sample_ball(rng, *rows, *radius)).collect()
            }
            Self::Simplex { dim } => {
                let e: Vec<f64> = (0..*dim).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
                let s: f64 = e.iter().sum();
                e.into_iter().map(|v| v / s).collect()
            }
            Self::DiscreteAssignment { n, k } => {
                let mut x = vec![0.0; n * k];
                for i in 0..*n {
                    x[rng.random_range(0..*k) * n + i] = 1.0;
                }
                x
            }
            Self::Unconstrained { dim } => (0..*dim).map(|_| rng.sample(StandardNormal)).collect(),
            Self::Product(parts) => parts.iter().flat_map(|p| p.sample(rng)).collect(),
        }
    }
}

fn sample_ball<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let n = norm(&g).max(1e-300);
    let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
    g.into_iter().map(|v| v * r / n).collect()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Problem family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Single,
    MaxMin,
    SumMax,
    SumMin,
    SumOfFunctions,
    LogRatio,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Single => "single",
            Self::MaxMin => "max-min",
            Self::SumMax => "sum-max",
            Self::SumMin => "sum-min",
            Self::SumOfFunctions => "sum-of-functions",
            Self::LogRatio => "log-ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// A fractional program over `x in R^dimension`.
#[derive(Debug, Clone)]
pub struct FPProblem {
    pub kind: ProblemKind,
    pub ratios: Vec<RatioSpec>,
    pub outer: Option<Vec<OuterFunction>>,
    pub weights: Vec<f64>,
    pub constraint: ConstraintSet,
    pub dimension: usize,
}

impl FPProblem {
    /// Unit weights, no outer functions.
    pub fn new(kind: ProblemKind, ratios: Vec<RatioSpec>, constraint: ConstraintSet) -> Result<Self> {
        let weights = vec![1.0; ratios.len()];
        let dimension = constraint.dim();
        let p = Self { kind, ratios, outer: None, weights, constraint, dimension };
        p.check()?;
        Ok(p)
    }

    /// `sum_i w_i f_i(A_i / B_i)` with one outer function per ratio.
    pub fn sum_of_functions(ratios: Vec<RatioSpec>, outer: Vec<OuterFunction>, constraint: ConstraintSet) -> Result<Self> {
        let weights = vec![1.0; ratios.len()];
        let dimension = constraint.dim();
        let p = Self { kind: ProblemKind::SumOfFunctions, ratios, outer: Some(outer), weights, constraint, dimension };
        p.check()?;
        Ok(p)
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        self.weights = weights;
        self.check()?;
        Ok(self)
    }

    pub fn with_outer(mut self, outer: Vec<OuterFunction>) -> Result<Self> {
        self.outer = Some(outer);
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(FpError::InvalidProblem(m));
        if self.ratios.is_empty() {
            return bad("at least one ratio is required".into());
        }
        if self.kind == ProblemKind::Single && self.ratios.len() != 1 {
            return bad(format!("single-ratio problem has {} ratios", self.ratios.len()));
        }
        if self.weights.len() != self.ratios.len() {
            return bad(format!("{} weights for {} ratios", self.weights.len(), self.ratios.len()));
        }
        if let Some(i) = self.weights.iter().position(|w| !(*w > 0.0)) {
            return bad(format!("weight {i} is not strictly positive"));
        }
        match (&self.outer, self.kind) {
            (Some(o), _) if o.len() != self.ratios.len() => {
                return bad(format!("{} outer functions for {} ratios", o.len(), self.ratios.len()));
            }
            (None, ProblemKind::SumOfFunctions) => return bad("sum-of-functions needs outer functions".into()),
            _ => {}
        }
        if self.dimension == 0 {
            return bad("dimension must be positive".into());
        }
        self.constraint.validate()
    }

    pub fn sense(&self) -> Sense {
        match self.kind {
            ProblemKind::SumMin => Sense::Minimize,
            _ => Sense::Maximize,
        }
    }

    /// Numerator and denominator values at `x`, rejecting degenerate denominators.
    pub fn parts(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut a = Vec::with_capacity(self.ratios.len());
        let mut b = Vec::with_capacity(self.ratios.len());
        for (index, r) in self.ratios.iter().enumerate() {
            let bv = r.b(x);
            if !(bv >= DENOMINATOR_FLOOR) {
                return Err(FpError::DegenerateDenominator { index, value: bv });
            }
            a.push(r.a(x));
            b.push(bv);
        }
        Ok((a, b))
    }
}

/// Exact objective of the original (untransformed) problem at `x`.
///
/// Single: `w A/B`; max-min: `min A_i/B_i`; sum-max and sum-min: `sum w_i A_i/B_i`
/// (sum-min is minimized); sum-of-functions: `sum w_i f_i(A_i/B_i)`;
/// log-ratio: `sum w_i ln(1 + A_i/B_i)`.
pub fn evaluate_objective(problem: &FPProblem, x: &[f64]) -> Result<f64> {
    if x.len() != problem.dimension {
        return Err(FpError::ShapeMismatch(format!("x has length {}, expected {}", x.len(), problem.dimension)));
    }
    let ratio = |i: usize| -> Result<f64> {
        let r = &problem.ratios[i];
        let b = r.b(x);
        if !(b >= DENOMINATOR_FLOOR) {
            return Err(FpError::DegenerateDenominator { index: i, value: b });
        }
        Ok(r.a(x) / b)
    };
    let n = problem.ratios.len();
    let w = &problem.weights;
    match problem.kind {
        ProblemKind::Single | ProblemKind::SumMax | ProblemKind::SumMin => {
            let mut s = 0.0;
            for i in 0..n {
                s += w[i] * ratio(i)?;
            }
            Ok(s)
        }
        ProblemKind::MaxMin => {
            let mut m = f64::INFINITY;
            for i in 0..n {
                m = m.min(ratio(i)?);
            }
            Ok(m)
        }
        ProblemKind::LogRatio => {
            let mut s = 0.0;
            for i in 0..n {
                let r = ratio(i)?;
                if r <= -1.0 {
                    return Err(FpError::DomainError { index: i, value: r });
                }
                s += w[i] * r.ln_1p();
            }
            Ok(s)
        }
        ProblemKind::SumOfFunctions => {
            let outer = problem.outer.as_ref().expect("checked at construction");
            let mut s = 0.0;
            for i in 0..n {
                let r = ratio(i)?;
                s += w[i] * outer[i].value(r).ok_or(FpError::DomainError { index: i, value: r })?;
            }
            Ok(s)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Numerator,
    Denominator,
}

/// Findings reported by [`validate_problem`].
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    NegativeNumerator { ratio: usize, x: Vec<f64>, value: f64 },
    NonPositiveDenominator { ratio: usize, x: Vec<f64>, value: f64 },
    CurvatureMismatch { ratio: usize, part: Part },
    NonPositiveWeight { index: usize, value: f64 },
    MonotonicityViolation { outer: usize },
    NonconcaveOuter { outer: usize },
}

/// Samples feasible points and reports violations of the sign, curvature,
/// weight and outer-function assumptions. Curvature is checked by midpoint
/// inequalities on random feasible pairs.
pub fn validate_problem(problem: &FPProblem, samples: usize, seed: u64) -> Vec<Diagnostic> {
    let samples = samples.max(1);
    let mut rng = seeded(seed);
    let mut out = Vec::new();

    for (index, &value) in problem.weights.iter().enumerate() {
        if !(value > 0.0) {
            out.push(Diagnostic::NonPositiveWeight { index, value });
        }
    }

    let points: Vec<Vec<f64>> = (0..samples).map(|_| problem.constraint.sample(&mut rng)).collect();
    let convex_set = !matches!(problem.constraint, ConstraintSet::DiscreteAssignment { .. });

    for (ratio, r) in problem.ratios.iter().enumerate() {
        let mut neg = false;
        let mut nonpos = false;
        for x in &points {
            let (a, b) = (r.a(x), r.b(x));
            if !neg && a < 0.0 && problem.kind != ProblemKind::MaxMin {
                out.push(Diagnostic::NegativeNumerator { ratio, x: x.clone(), value: a });
                neg = true;
            }
            if !nonpos && !(b > 0.0) {
                out.push(Diagnostic::NonPositiveDenominator { ratio, x: x.clone(), value: b });
                nonpos = true;
            }
        }

        let (num_concave, den_convex) = match r.curvature {
            Curvature::ConcaveConvex => (true, true),
            Curvature::ConvexConcave => (false, false),
            Curvature::Generic => continue,
        };
        if !convex_set {
            continue;
        }
        let mut flagged = [false; 2];
        for pair in points.windows(2) {
            let (x, z) = (&pair[0], &pair[1]);
            let mid: Vec<f64> = x.iter().zip(z).map(|(a, b)| 0.5 * (a + b)).collect();
            for (slot, part, f, want_concave) in [
                (0, Part::Numerator, &r.numerator, num_concave),
                (1, Part::Denominator, &r.denominator, !den_convex),
            ] {
                if flagged[slot] {
                    continue;
                }
                let (fx, fz, fm) = (f(x), f(z), f(&mid));
                let chord = 0.5 * (fx + fz);
                let tol = 1e-9 * (1.0 + fx.abs() + fz.abs());
                let violated = if want_concave { fm < chord - tol } else { fm > chord + tol };
                if violated {
                    out.push(Diagnostic::CurvatureMismatch { ratio, part });
                    flagged[slot] = true;
                }
            }
        }
    }

    if let Some(outer) = &problem.outer {
        for (i, f) in outer.iter().enumerate() {
            let (lo, hi) = f.domain();
            let lo = lo.max(0.0);
            let hi = hi.min(10.0);
            let grid: Vec<f64> = (1..200).map(|k| lo + (hi - lo) * k as f64 / 200.0).collect();
            let vals: Vec<f64> = grid.iter().filter_map(|&r| f.value(r)).collect();
            let tol = 1e-12;
            let monotone = vals.windows(2).all(|w| match f.monotonicity {
                Monotonicity::Nondecreasing => w[1] >= w[0] - tol,
                Monotonicity::Nonincreasing => w[1] <= w[0] + tol,
            });
            if !monotone {
                out.push(Diagnostic::MonotonicityViolation { outer: i });
            }
            let concave = vals.windows(3).all(|w| w[0] + w[2] - 2.0 * w[1] <= 1e-10 * (1.0 + w[1].abs()));
            if !concave {
                out.push(Diagnostic::NonconcaveOuter { outer: i });
            }
        }
    }
    out
}
