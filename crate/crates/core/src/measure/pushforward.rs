//! Density of a reparametrized measure on a 1-D grid.
//!
//! For an invertible map `f`, the measure `dy~ = d f(y)` has density
//! `|f'(x)|` with respect to `dx`. With `f(x) = a x` this is the scaling rule
//! `delta(a x) = delta(x) / a` read as a statement about measures.

use std::fmt;
use std::sync::Arc;

use super::density::DensityField;
use super::grid::SampleGrid;
use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Derivative {
    Analytic(ScalarFn),
    /// Central difference with step `step * max(1, |x|)`.
    FiniteDifference {
        step: f64,
    },
}

/// A strictly monotone scalar map on the real line.
#[derive(Clone)]
pub struct MonotoneMap {
    name: String,
    forward: ScalarFn,
    derivative: Derivative,
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneMap")
            .field("name", &self.name)
            .field(
                "derivative",
                &match self.derivative {
                    Derivative::Analytic(_) => "analytic".to_string(),
                    Derivative::FiniteDifference { step } => format!("finite-difference({step})"),
                },
            )
            .finish()
    }
}

impl MonotoneMap {
    /// A map whose derivative is taken by central differences.
    pub fn from_fn(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            forward: Arc::new(f),
            derivative: Derivative::FiniteDifference { step: 1e-6 },
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivative = Derivative::Analytic(Arc::new(df));
        self
    }

    pub fn identity() -> Self {
        Self::from_fn("identity", |x| x).with_derivative(|_| 1.0)
    }

    /// `f(x) = a x`.
    pub fn scaling(a: f64) -> Self {
        Self::from_fn(format!("scale:{a}"), move |x| a * x).with_derivative(move |_| a)
    }

    /// `f(x) = x^3 + x`.
    pub fn cubic() -> Self {
        Self::from_fn("cubic", |x| x * x * x + x).with_derivative(|x| 3.0 * x * x + 1.0)
    }

    pub fn exp() -> Self {
        Self::from_fn("exp", f64::exp).with_derivative(f64::exp)
    }

    /// Parses `identity`, `scale:<a>`, `cubic` or `exp`.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(Self::identity()),
            "cubic" => Ok(Self::cubic()),
            "exp" => Ok(Self::exp()),
            _ => match name.strip_prefix("scale:").map(str::parse::<f64>) {
                Some(Ok(a)) if a.is_finite() && a != 0.0 => Ok(Self::scaling(a)),
                _ => Err(Error::UnknownMap(name.to_string())),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: f64) -> f64 {
        (self.forward)(x)
    }

    pub fn derivative_at(&self, x: f64) -> f64 {
        match &self.derivative {
            Derivative::Analytic(df) => df(x),
            Derivative::FiniteDifference { step } => {
                let h = step * x.abs().max(1.0);
                (self.apply(x + h) - self.apply(x - h)) / (2.0 * h)
            }
        }
    }

    /// Lebesgue measure of the image of `[lo, hi]`.
    pub fn image_measure(&self, lo: f64, hi: f64) -> f64 {
        (self.apply(hi) - self.apply(lo)).abs()
    }
}

/// Direction of a map found strictly monotone on a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Samples the map at every cell edge and center of a 1-D grid, in coordinate
/// order, and checks strict monotonicity.
pub fn check_monotone(grid: &SampleGrid, map: &MonotoneMap) -> Result<Monotonicity> {
    grid.require_1d()?;
    let mut xs = Vec::with_capacity(3 * grid.len());
    for i in 0..grid.len() {
        let (lo, hi) = grid.cell_interval(i)?;
        xs.extend([lo, grid.center(i)[0], hi]);
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let ys: Vec<f64> = xs.iter().map(|&x| map.apply(x)).collect();
    if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
        return Err(Error::NonFinite(format!("map value at x = {}", xs[i])));
    }
    if ys.len() < 2 {
        return Ok(Monotonicity::Increasing);
    }
    let direction = if ys[1] > ys[0] {
        Monotonicity::Increasing
    } else {
        Monotonicity::Decreasing
    };
    for (i, w) in ys.windows(2).enumerate() {
        let ok = match direction {
            Monotonicity::Increasing => w[1] > w[0],
            Monotonicity::Decreasing => w[1] < w[0],
        };
        if !ok {
            return Err(Error::NotMonotone { at: xs[i] });
        }
    }
    Ok(direction)
}

/// The density `r(x) = |f'(x)|` of the pulled-back measure, sampled at cell
/// centers.
pub fn pushforward_density(grid: &Arc<SampleGrid>, map: &MonotoneMap) -> Result<DensityField> {
    check_monotone(grid, map)?;
    let values = (0..grid.len())
        .map(|i| map.derivative_at(grid.center(i)[0]).abs())
        .collect();
    DensityField::new(grid.clone(), values)
}
