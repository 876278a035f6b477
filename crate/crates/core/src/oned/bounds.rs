use std::f64::consts::PI;

use serde::Serialize;

use super::{dirichlet_eig1, is_in_class_a, EigenResult1D, Interval, MonotoneProfile, Weight1D};
use crate::error::{GapError, Result};

/// Grid used for the class-𝒜 precondition.
const CLASS_A_GRID: usize = 512;

/// Compact eigenvalue summary for reports.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigenSummary {
    pub value: f64,
    pub extrapolated: f64,
    pub error_estimate: f64,
    pub tol: f64,
}

impl From<&EigenResult1D> for EigenSummary {
    fn from(r: &EigenResult1D) -> Self {
        EigenSummary {
            value: r.value,
            extrapolated: r.extrapolated_value,
            error_estimate: r.error_estimate,
            tol: r.tol(),
        }
    }
}

fn require_class_a(psi: &MonotoneProfile) -> Result<()> {
    let c = is_in_class_a(psi, CLASS_A_GRID);
    if c.member {
        Ok(())
    } else {
        Err(GapError::Precondition(format!(
            "profile not in class A: violation {:.3e} at ({:.4}, {:.4})",
            c.worst_violation, c.worst_pair.0, c.worst_pair.1
        )))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Stima3Report {
    pub lambda: EigenSummary,
    /// `λ₁ − 3` from the extrapolated value.
    pub excess: f64,
    pub pass: bool,
}

/// `λ₁(I_π, ψ′ + ψ²) ≥ 3` for a class-𝒜 profile.
pub fn check_bound_stima3(psi: &MonotoneProfile, n: usize) -> Result<Stima3Report> {
    require_class_a(psi)?;
    let r = dirichlet_eig1(Interval::i_pi(), &psi.potential(), n)?;
    let excess = r.extrapolated_value - 3.0;
    Ok(Stima3Report {
        lambda: (&r).into(),
        excess,
        pass: excess >= -r.tol(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub lambda_q: EigenSummary,
    pub lambda_two_sq: EigenSummary,
    pub lambda_two_derivative: EigenSummary,
    pub pass_two_sq: bool,
    pub pass_two_derivative: bool,
    /// `λ₁(ψ′+ψ²) ≥ ½[λ₁(2ψ′) + λ₁(2ψ²)]`.
    pub pass_separation: bool,
}

impl SplitReport {
    pub fn pass(&self) -> bool {
        self.pass_two_sq && self.pass_two_derivative && self.pass_separation
    }
}

/// The bounds `λ₁(2ψ²) ≥ 2`, `λ₁(2ψ′) ≥ 4` and the concavity split.
pub fn check_split_bounds(psi: &MonotoneProfile, n: usize) -> Result<SplitReport> {
    require_class_a(psi)?;
    let iv = Interval::i_pi();
    let q = dirichlet_eig1(iv, &psi.potential(), n)?;
    let s = dirichlet_eig1(iv, &psi.potential_two_sq(), n)?;
    let d = dirichlet_eig1(iv, &psi.potential_two_derivative(), n)?;
    let sep_tol = q.tol() + 0.5 * (s.tol() + d.tol());
    Ok(SplitReport {
        pass_two_sq: s.extrapolated_value >= 2.0 - s.tol(),
        pass_two_derivative: d.extrapolated_value >= 4.0 - d.tol(),
        pass_separation: q.extrapolated_value
            >= 0.5 * (s.extrapolated_value + d.extrapolated_value) - sep_tol,
        lambda_q: (&q).into(),
        lambda_two_sq: (&s).into(),
        lambda_two_derivative: (&d).into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinedAffineReport {
    pub lambda: EigenSummary,
    /// `λ₁ ≤ 7`; otherwise the implication is vacuous.
    pub hypothesis_met: bool,
    /// `[1 − min{h(a),h(b)} / max{h(a),h(b)}]²`.
    pub ratio_term: f64,
    /// `(λ₁ − 3) m π² / (8 ratio_term)` when the ratio term is positive.
    pub implied_k: Option<f64>,
    pub pass: bool,
    pub note: String,
}

/// Refined bound for `ψ = f + g/2`, `g = −(log h)′`, `h` `(1/m)`-concave and
/// affine on `ab ⊇ I_{π/4}`.
pub fn check_refined_affine(
    f: &MonotoneProfile,
    h: &Weight1D,
    m: f64,
    ab: Interval,
    n: usize,
) -> Result<RefinedAffineReport> {
    require_class_a(f)?;
    let dom = f.dom();
    if !(m > 0.0) {
        return Err(GapError::Precondition("m must be positive".into()));
    }
    if !dom.is_subset_of(&h.dom, 1e-12) {
        return Err(GapError::Precondition("h must be defined on dom f".into()));
    }
    if !(ab.a <= -PI / 8.0 && ab.b >= PI / 8.0) || !ab.is_subset_of(&dom, 1e-12) {
        return Err(GapError::Precondition(
            "[a, b] must satisfy I_{π/4} ⊆ [a, b] ⊆ dom f".into(),
        ));
    }
    let hd = Weight1D::new(dom, h.density.clone());
    if hd.power_concavity_defect(m, 1024) > 1e-9 {
        return Err(GapError::Precondition("h is not (1/m)-concave".into()));
    }
    let (ha, hb) = (h.eval(ab.a), h.eval(ab.b));
    let affine_defect = (0..=64)
        .map(|i| {
            let t = i as f64 / 64.0;
            let x = ab.a + t * ab.len();
            (h.eval(x) - ((1.0 - t) * ha + t * hb)).abs()
        })
        .fold(0.0, f64::max);
    if affine_defect > 1e-9 * ha.abs().max(hb.abs()) {
        return Err(GapError::Precondition(format!(
            "h is not affine on [a, b] (defect {affine_defect:.2e})"
        )));
    }
    let step = 1e-5 * dom.len();
    let (h1, h2) = (h.clone(), h.clone());
    let g_half = move |x: f64| -0.25 * ((h1.eval(x + step)).ln() - (h1.eval(x - step)).ln()) / step;
    let dg_half = move |x: f64| {
        let l = |y: f64| h2.eval(y).ln();
        -0.5 * (l(x + step) - 2.0 * l(x) + l(x - step)) / (step * step)
    };
    let psi = f.plus(g_half, dg_half)?;
    let r = dirichlet_eig1(Interval::i_pi(), &psi.potential(), n)?;
    let lam = r.extrapolated_value;
    let ratio = (1.0 - ha.min(hb) / ha.max(hb)).powi(2);
    let hypothesis_met = lam <= 7.0;
    let (implied_k, pass, note) = if !hypothesis_met {
        (None, true, "hypothesis not met: λ₁ > 7".to_string())
    } else if ratio == 0.0 {
        (
            None,
            lam >= 3.0 - r.tol(),
            "h(a) = h(b): refinement term vanishes".to_string(),
        )
    } else {
        let k = (lam - 3.0) * m * PI * PI / (8.0 * ratio);
        (Some(k), lam - 3.0 > r.tol(), format!("implied K = {k:.6e}"))
    };
    Ok(RefinedAffineReport {
        lambda: (&r).into(),
        hypothesis_met,
        ratio_term: ratio,
        implied_k,
        pass,
        note,
    })
}
