//! Comparison inequalities, bridge seminorms, explicit quantum
//! Gromov–Hausdorff upper bounds and the degenerations of the family.
//!
//! Nothing here computes a true quantum Gromov–Hausdorff distance. Each
//! function evaluates an explicit upper-bound formula or an explicit bridge
//! and pairing, and reports the outcome as a [`BoundReport`](crate::BoundReport).

pub mod bridge;
pub mod comparison;
pub mod degeneration;
pub mod sweep;

pub use bridge::{build_bridge, one_point_bridge_check, BridgeSeminorm, OnePointOutcome};
pub use comparison::{check_lineq, check_metric_sandwich, check_seminorm_sandwich, pooled_sup, SolverCrossCheck};
pub use degeneration::{
    ato0_pairing_check, bto0_limit_distance, collapse_study, dineq_divergence_check, Ato0Bridge, Ato0Outcome,
    Bto0Case, CollapseStudy, DineqOutcome,
};
pub use sweep::{param_space_sweep, SweepConfig, SweepRow, SweepTable};

use crate::error::{Error, Result};
use crate::report::Extended;
use crate::triple::{validate_params, Params};

/// `(max{αβ/γδ, γδ/αβ} − 1 + |1 − β/δ|)·diam` for `p = (α, β)`, `q = (γ, δ)`.
///
/// A zero product against a nonzero one makes the ratio term infinite; both
/// zero counts as ratio one. Parameters must have finite `β`.
pub fn gh_upper_bound_formula(p: Params, q: Params, diam: f64) -> Result<Extended> {
    validate_params(p)?;
    validate_params(q)?;
    if p.beta.is_infinite() || q.beta.is_infinite() {
        return Err(Error::InvalidArgument("the bound needs finite beta on both sides".into()));
    }
    if !(diam >= 0.0) {
        return Err(Error::InvalidArgument(format!("diameter must be nonnegative, got {diam}")));
    }
    if p == q {
        return Ok(Extended::Finite(0.0));
    }
    let (a, b) = (p.product(), q.product());
    let ratio = if a == b {
        1.0
    } else if a == 0.0 || b == 0.0 {
        f64::INFINITY
    } else {
        (a / b).max(b / a)
    };
    let factor = ratio - 1.0 + (1.0 - p.beta / q.beta).abs();
    if factor.is_infinite() {
        return Ok(if diam == 0.0 { Extended::Finite(0.0) } else { Extended::PosInf });
    }
    Ok(Extended::Finite(factor * diam))
}

/// `|1 − 1/t|·diam`, the bound between `L` and `tL` on one space.
pub fn gh_bound_multiplicative(t: f64, diam: f64) -> Result<f64> {
    check_factor(t)?;
    Ok((1.0 - 1.0 / t).abs() * diam)
}

/// `diam/t`, the bound between `(A, tL)` and the one-point space.
pub fn gh_bound_one_point(t: f64, diam: f64) -> Result<f64> {
    check_factor(t)?;
    Ok(diam / t)
}

fn check_factor(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale factor must be positive and finite, got {t}")));
    }
    Ok(())
}

/// `α|x − s| + (1/β)|y − t|` on the unit square. At `β = 0` this is the
/// limit metric: `α|x − s|` on horizontal segments, infinite otherwise.
pub fn toy_square_metric(a: (f64, f64), b: (f64, f64), alpha: f64, beta: f64) -> Result<Extended> {
    for v in [a.0, a.1, b.0, b.1] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidArgument(format!("coordinate {v} outside [0, 1]")));
        }
    }
    if !(alpha >= 0.0 && alpha.is_finite()) || !(beta >= 0.0) {
        return Err(Error::InvalidArgument(format!("need alpha ≥ 0 finite and beta ≥ 0, got ({alpha}, {beta})")));
    }
    let dx = (a.0 - b.0).abs();
    let dy = (a.1 - b.1).abs();
    if beta == 0.0 {
        return Ok(if dy == 0.0 { Extended::Finite(alpha * dx) } else { Extended::PosInf });
    }
    Ok(Extended::Finite(alpha * dx + dy / beta))
}
