//! One-dimensional maximization: log-spaced scan, then golden-section refinement.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Ratios above this are treated as `+∞`.
pub const OVERFLOW_GUARD: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub arg: f64,
    pub value: f64,
    /// Spread of the objective over the final bracket.
    pub spread: f64,
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`, run in `ln x`.
pub fn golden_max<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<Maximum> {
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c.exp())?;
    let mut fd = f(d.exp())?;
    while (b - a) > rel_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d.exp())?;
        }
    }
    let (arg, value) = if fc >= fd { (c.exp(), fc) } else { (d.exp(), fd) };
    Ok(Maximum {
        arg,
        value,
        spread: (fc - fd).abs(),
    })
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (l + (h - l) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Sup of `f` over `[lo, hi]`: scan `nodes` log-spaced points, then refine
/// around the best one. Returns `+∞` as soon as a scanned value overflows.
/// Ties go to the lowest argument.
pub fn scan_then_refine<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    nodes: usize,
) -> Result<Maximum> {
    let grid = log_grid(lo, hi, nodes);
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &p) in grid.iter().enumerate() {
        let v = f(p)?;
        if v.is_infinite() || v > OVERFLOW_GUARD {
            return Ok(Maximum {
                arg: p,
                value: f64::INFINITY,
                spread: 0.0,
            });
        }
        if v > best.1 {
            best = (i, v);
        }
    }
    let (i, scanned) = best;
    let left = grid[i.saturating_sub(1)];
    let right = grid[(i + 1).min(grid.len() - 1)];
    let refined = golden_max(&mut f, left, right, 1e-12)?;
    if refined.value > scanned {
        Ok(refined)
    } else {
        Ok(Maximum {
            arg: grid[i],
            value: scanned,
            spread: refined.spread,
        })
    }
}
