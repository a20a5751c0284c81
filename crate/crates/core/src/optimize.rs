//! One-dimensional maximization: golden-section search on a bracket, and a
//! dense grid followed by golden refinement for multimodal objectives.
//!
//! Ties are always resolved toward the smaller abscissa.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximize `f` on `[lo, hi]` assuming it is unimodal there. Stops once the
/// bracket is narrower than `tol`, returning the best point evaluated.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Values within this distance of the best are treated as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Evaluate `f` on a grid of spacing at most `grid_step` covering
/// `[lo, hi]`, polish every local maximum of the grid by golden section
/// between its neighbours, and return the best polished point. Among points
/// within [`TIE_TOLERANCE`] of the best value the smallest abscissa wins.
pub fn grid_then_golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid_step: f64, tol: f64) -> (f64, f64) {
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    if hi == lo {
        return (lo, f(lo));
    }
    let intervals = ((hi - lo) / grid_step).ceil().max(1.0) as usize;
    let h = (hi - lo) / intervals as f64;
    let point = |i: usize| if i == intervals { hi } else { lo + i as f64 * h };
    let values: Vec<f64> = (0..=intervals).map(|i| f(point(i))).collect();

    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for i in 0..=intervals {
        let left = if i == 0 { f64::NEG_INFINITY } else { values[i - 1] };
        let right = if i == intervals { f64::NEG_INFINITY } else { values[i + 1] };
        if values[i] < left || values[i] < right {
            continue;
        }
        let a = point(i.saturating_sub(1));
        let b = point((i + 1).min(intervals));
        let (x, v) = golden_section_max(&f, a, b, tol);
        candidates.push(if v > values[i] { (x, v) } else { (point(i), values[i]) });
    }
    let best = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    candidates
        .into_iter()
        .filter(|c| c.1 >= best - TIE_TOLERANCE)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((lo, values[0]))
}
