use std::sync::Arc;

use crate::error::{domain, Result};

/// Default half-line truncation.
pub const DEFAULT_T_MAX: f64 = 1e4;
/// Default sequence truncation.
pub const DEFAULT_SEQUENCE_LEN: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Lebesgue measure on (0, ∞), truncated to the grid.
    HalfLine,
    /// Lebesgue measure on ℝ, truncated to the grid.
    RealLine,
    /// Lebesgue measure on [0, 1) with addition mod 1.
    Circle,
    /// Counting measure on {1, 2, …, N}.
    Sequence,
}

/// A base measure space discretized as nodes with quadrature weights.
///
/// Line grids carry trapezoid weights. Rearranged functions carry the weights
/// of the cells they were sorted from, so their norms match the source exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSpace {
    kind: SpaceKind,
    points: Arc<[f64]>,
    weights: Arc<[f64]>,
    step: Option<f64>,
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + h * i as f64 })
        .collect()
}

fn trapezoid_weights(points: &[f64]) -> Vec<f64> {
    let n = points.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = 0.5 * (points[i + 1] - points[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

fn detect_step(points: &[f64]) -> Option<f64> {
    let h = points[1] - points[0];
    points
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h)
        .then_some(h)
}

fn check_grid(points: &[f64]) -> Result<()> {
    if points.len() < 2 {
        return Err(domain("a grid needs at least two points"));
    }
    if points.iter().any(|t| !t.is_finite()) {
        return Err(domain("grid points must be finite"));
    }
    if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
        return Err(domain(format!("grid is not strictly increasing at index {}", i + 1)));
    }
    Ok(())
}

impl BaseSpace {
    /// Uniform grid on `[0, t_max]` with `n` points.
    pub fn half_line(t_max: f64, n: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) || n < 2 {
            return Err(domain(format!("half-line needs t_max > 0 and n >= 2, got {t_max}, {n}")));
        }
        Self::half_line_grid(uniform(0.0, t_max, n))
    }

    pub fn half_line_grid(points: Vec<f64>) -> Result<Self> {
        check_grid(&points)?;
        if points[0] < 0.0 {
            return Err(domain("half-line grid points must be >= 0"));
        }
        Ok(Self::line(SpaceKind::HalfLine, points))
    }

    /// Uniform grid on `[-half_width, half_width]`.
    pub fn real_line(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) || n < 2 {
            return Err(domain("real line needs a positive half-width and n >= 2"));
        }
        Self::real_line_grid(uniform(-half_width, half_width, n))
    }

    pub fn real_line_grid(points: Vec<f64>) -> Result<Self> {
        check_grid(&points)?;
        Ok(Self::line(SpaceKind::RealLine, points))
    }

    /// Nodes `i/n` on the circle, each carrying mass `1/n`.
    pub fn circle(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(domain("circle needs n >= 2"));
        }
        let h = 1.0 / n as f64;
        Ok(Self {
            kind: SpaceKind::Circle,
            points: (0..n).map(|i| i as f64 * h).collect(),
            weights: vec![h; n].into(),
            step: Some(h),
        })
    }

    /// `{1, …, n}` with counting measure.
    pub fn sequence(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("sequence needs n >= 1"));
        }
        Ok(Self {
            kind: SpaceKind::Sequence,
            points: (1..=n).map(|i| i as f64).collect(),
            weights: vec![1.0; n].into(),
            step: Some(1.0),
        })
    }

    fn line(kind: SpaceKind, points: Vec<f64>) -> Self {
        let step = detect_step(&points);
        Self {
            kind,
            weights: trapezoid_weights(&points).into(),
            points: points.into(),
            step,
        }
    }

    /// Nodes with explicit nonnegative weights.
    pub(crate) fn weighted(kind: SpaceKind, points: Vec<f64>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(points.len(), weights.len());
        let step = (points.len() > 1).then(|| detect_step(&points)).flatten();
        Self {
            kind,
            points: points.into(),
            weights: weights.into(),
            step,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Grid spacing when the grid is uniform.
    pub fn step(&self) -> Option<f64> {
        self.step
    }

    /// Total measure of the truncated space.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }
}
