use crate::error::{domain, Result};

/// Number of grid points scanned before golden-section refinement.
pub const DEFAULT_GRID_POINTS: usize = 64;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_GOLDEN_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Grid scan followed by golden-section refinement around the best grid point.
/// `tol` is the absolute width at which the refinement bracket stops shrinking.
pub fn minimize_scalar<G: FnMut(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<Minimum> {
    minimize_scalar_with(g, lo, hi, tol, DEFAULT_GRID_POINTS)
}

/// [`minimize_scalar`] with an explicit grid size (at least 3 points).
/// The grid is logarithmic when `lo > 0`, linear otherwise.
pub fn minimize_scalar_with<G: FnMut(f64) -> f64>(
    mut g: G,
    lo: f64,
    hi: f64,
    tol: f64,
    grid_points: usize,
) -> Result<Minimum> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(domain(format!(
            "minimize_scalar needs finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("minimize_scalar needs tol > 0, got {tol}")));
    }
    let grid_points = grid_points.max(3);
    let log_grid = lo > 0.0;
    let grid: Vec<f64> = (0..grid_points)
        .map(|i| {
            let t = i as f64 / (grid_points - 1) as f64;
            if i + 1 == grid_points {
                hi
            } else if log_grid {
                (lo.ln() + t * (hi.ln() - lo.ln())).exp()
            } else {
                lo + t * (hi - lo)
            }
        })
        .collect();

    let mut evaluations = 0;
    let mut best = (f64::NAN, f64::INFINITY);
    let mut best_index = 0;
    for (i, &x) in grid.iter().enumerate() {
        let v = g(x);
        evaluations += 1;
        // NaN never wins
        if v < best.1 {
            best = (x, v);
            best_index = i;
        }
    }
    if !best.1.is_finite() && best.0.is_nan() {
        best = (grid[0], f64::NAN);
    }

    let mut a = grid[best_index.saturating_sub(1)];
    let mut b = grid[(best_index + 1).min(grid_points - 1)];
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    evaluations += 2;
    for _ in 0..MAX_GOLDEN_STEPS {
        if (b - a).abs() <= tol {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
        evaluations += 1;
        for (x, v) in [(c, gc), (d, gd)] {
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    for (x, v) in [(c, gc), (d, gd)] {
        if v < best.1 {
            best = (x, v);
        }
    }

    Ok(Minimum {
        argmin: best.0,
        value: best.1,
        evaluations,
    })
}
