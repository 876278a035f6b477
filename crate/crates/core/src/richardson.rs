//! Richardson extrapolation for second-order discretizations.

use serde::Serialize;

/// A quantity computed on grids of spacing `h` and `h/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoGrid {
    pub coarse: f64,
    pub fine: f64,
    /// `(4 fine − coarse) / 3`.
    pub extrapolated: f64,
    /// `|fine − coarse|`.
    pub error_estimate: f64,
}

impl TwoGrid {
    pub fn new(coarse: f64, fine: f64) -> Self {
        TwoGrid {
            coarse,
            fine,
            extrapolated: (4.0 * fine - coarse) / 3.0,
            error_estimate: (fine - coarse).abs(),
        }
    }
}

/// Observed order from three grids `h`, `h/2`, `h/4`.
pub fn observed_order(v_h: f64, v_h2: f64, v_h4: f64) -> f64 {
    ((v_h - v_h2) / (v_h2 - v_h4)).abs().log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_quadratic_error() {
        let f = |h: f64| 2.0 + 3.0 * h * h;
        let t = TwoGrid::new(f(0.1), f(0.05));
        assert!((t.extrapolated - 2.0).abs() < 1e-14);
        assert!((observed_order(f(0.1), f(0.05), f(0.025)) - 2.0).abs() < 1e-10);
    }
}
