//! Inequalities between the seminorms of one family member and another.

use crate::error::{Error, Result};
use crate::report::{BoundReport, Extended};
use crate::states::{connes_distance, ElementBasis, SeminormKind, SeminormSpec, SolverOptions, SplitState};
use crate::triple::{comparison_factors, lip_a, lip_c, lip_ext, require_matrix_params, ExtElement, Params, TruncatedTriple};

/// `L_A(a) ≤ α L_{α,β}(t)` and `L_C(k) ≤ ((1 + αβ)/β) L_{α,β}(t)` for `t = T(a) + k`.
pub fn check_lineq(
    triple: &TruncatedTriple,
    t: &ExtElement,
    p: Params,
    tolerance: f64,
) -> Result<(BoundReport, BoundReport)> {
    require_matrix_params(p)?;
    if !t.is_self_adjoint() {
        return Err(Error::InvalidArgument("element must be self-adjoint".into()));
    }
    let l = lip_ext(triple, t, p)?;
    let la = lip_a(triple, &t.symbol)?;
    let lc = lip_c(triple, &t.compact)?;
    let symbol_side = BoundReport::le("symbol seminorm", "linear estimates", la, p.alpha * l, tolerance)
        .with("alpha", p.alpha)
        .with("beta", p.beta)
        .with("lip_ext", l);
    let compact_side = BoundReport::le(
        "compact seminorm",
        "linear estimates",
        lc,
        (1.0 + p.alpha * p.beta) / p.beta * l,
        tolerance,
    )
    .with("alpha", p.alpha)
    .with("beta", p.beta)
    .with("lip_ext", l);
    Ok((symbol_side, compact_side))
}

/// `s L_q(t) ≤ L_p(t) ≤ r L_q(t)` with `(s, r)` the comparison factors of `p` against `q`.
pub fn check_seminorm_sandwich(
    triple: &TruncatedTriple,
    t: &ExtElement,
    p: Params,
    q: Params,
    tolerance: f64,
) -> Result<(BoundReport, BoundReport)> {
    require_matrix_params(p)?;
    require_matrix_params(q)?;
    let (s, r) = comparison_factors(p, q)?;
    let lp = lip_ext(triple, t, p)?;
    let lq = lip_ext(triple, t, q)?;
    let lower = BoundReport::le("seminorm lower comparison", "seminorm sandwich", s * lq, lp, tolerance);
    let upper = BoundReport::le("seminorm upper comparison", "seminorm sandwich", lp, r * lq, tolerance);
    let tag = |b: BoundReport| {
        b.with("alpha", p.alpha)
            .with("beta", p.beta)
            .with("gamma", q.alpha)
            .with("delta", q.beta)
            .with("s", s)
            .with("r", r)
    };
    Ok((tag(lower), tag(upper)))
}

/// `sup |(φ − ψ)(t)| / L(t)` over a pool; a kernel element with nonzero
/// objective makes the value infinite.
pub fn pooled_sup(
    triple: &TruncatedTriple,
    phi: &SplitState,
    psi: &SplitState,
    kind: &SeminormKind,
    pool: &[ExtElement],
) -> Result<Extended> {
    let spec = SeminormSpec::new(kind.clone(), ElementBasis::new(pool.to_vec(), pool_labels(pool.len()))?);
    let mut best = Extended::Finite(0.0);
    for t in pool {
        let obj = (phi.evaluate(triple, t)? - psi.evaluate(triple, t)?).abs();
        if obj == 0.0 {
            continue;
        }
        let l = spec.evaluate(triple, t)?;
        let v = if l == 0.0 { Extended::PosInf } else { Extended::Finite(obj / l) };
        best = best.max(v);
    }
    Ok(best)
}

fn pool_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("pool{i}")).collect()
}

/// Optional full-solver distances reported next to the pooled ones.
pub struct SolverCrossCheck<'a> {
    pub basis: &'a ElementBasis,
    pub options: &'a SolverOptions,
}

/// `(1/r) d_q ≤ d_p ≤ (1/s) d_q` for distances taken as sups over one shared
/// pool. Each pool element obeys the seminorm sandwich, so the pooled sups do
/// too; solver distances are attached to the context only.
#[allow(clippy::too_many_arguments)]
pub fn check_metric_sandwich(
    triple: &TruncatedTriple,
    phi: &SplitState,
    psi: &SplitState,
    p: Params,
    q: Params,
    pool: &[ExtElement],
    cross_check: Option<SolverCrossCheck<'_>>,
    tolerance: f64,
) -> Result<(BoundReport, BoundReport)> {
    if pool.is_empty() {
        return Err(Error::InvalidArgument("metric sandwich needs a nonempty pool".into()));
    }
    require_matrix_params(p)?;
    require_matrix_params(q)?;
    let (s, r) = comparison_factors(p, q)?;
    let dp = pooled_sup(triple, phi, psi, &SeminormKind::LipExt(p), pool)?;
    let dq = pooled_sup(triple, phi, psi, &SeminormKind::LipExt(q), pool)?;
    let scale = |d: Extended, f: f64| match d {
        Extended::Finite(x) => Extended::Finite(x * f),
        other => other,
    };
    let rel_tol = |d: Extended| tolerance * (1.0 + d.finite().unwrap_or(0.0));
    let mut lower = BoundReport::inequality("distance lower comparison", "metric sandwich", scale(dq, 1.0 / r), dp, rel_tol(dp));
    let mut upper = BoundReport::inequality("distance upper comparison", "metric sandwich", dp, scale(dq, 1.0 / s), rel_tol(dp));
    for b in [&mut lower, &mut upper] {
        b.context.insert("pool_size".into(), pool.len().into());
        b.context.insert("pooled_dist_p".into(), dp.into());
        b.context.insert("pooled_dist_q".into(), dq.into());
        b.context.insert("s".into(), s.into());
        b.context.insert("r".into(), r.into());
    }
    if let Some(cc) = cross_check {
        let solve = |params: Params| -> Result<Extended> {
            let spec = SeminormSpec::new(SeminormKind::LipExt(params), cc.basis.clone());
            Ok(connes_distance(phi, psi, triple, &spec, cc.options)?.value)
        };
        let (sp, sq) = (solve(p)?, solve(q)?);
        for b in [&mut lower, &mut upper] {
            b.context.insert("solver_dist_p".into(), sp.into());
            b.context.insert("solver_dist_q".into(), sq.into());
        }
    }
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::build_circle;
    use crate::random::{gaussian, random_density, seeded};
    use crate::states::BaseFunctional;

    fn random_element(basis: &ElementBasis, seed: u64) -> ExtElement {
        let mut rng = seeded(seed);
        let x: Vec<f64> = (0..basis.len()).map(|_| gaussian(&mut rng)).collect();
        basis.element(&x)
    }

    #[test]
    fn lineq_unit_is_zero_both_sides() {
        let c = build_circle(3).unwrap();
        let (a, b) = check_lineq(&c.triple, &ExtElement::unit(&c.triple), Params::new(0.5, 1.0), 1e-9).unwrap();
        for r in [a, b] {
            assert_eq!(r.lhs, Extended::Finite(0.0));
            assert_eq!(r.rhs, Extended::Finite(0.0));
            assert!(r.pass);
        }
    }

    #[test]
    fn lineq_random_elements() {
        let c = build_circle(4).unwrap();
        let basis = c.extension_basis(4).unwrap();
        for seed in 0..100 {
            let t = random_element(&basis, seed);
            let (a, b) = check_lineq(&c.triple, &t, Params::new(0.5, 1.0), 1e-9).unwrap();
            assert!(a.pass && b.pass, "{a:?} {b:?}");
        }
    }

    #[test]
    fn lineq_pure_compact_has_zero_symbol_side() {
        let c = build_circle(3).unwrap();
        let basis = ElementBasis::compacts(&c.triple).unwrap();
        let t = random_element(&basis, 4);
        let (a, _) = check_lineq(&c.triple, &t, Params::new(0.5, 1.0), 1e-9).unwrap();
        assert_eq!(a.lhs, Extended::Finite(0.0));
        assert!(a.rhs.finite().unwrap() > 0.0);
    }

    #[test]
    fn sandwich_equal_params_is_equality() {
        let c = build_circle(3).unwrap();
        let basis = c.extension_basis(3).unwrap();
        let t = random_element(&basis, 1);
        let p = Params::new(0.7, 1.2);
        let (lo, hi) = check_seminorm_sandwich(&c.triple, &t, p, p, 1e-9).unwrap();
        assert_eq!(lo.lhs, lo.rhs);
        assert_eq!(hi.lhs, hi.rhs);
    }

    #[test]
    fn sandwich_random_elements() {
        let c = build_circle(4).unwrap();
        let basis = c.extension_basis(4).unwrap();
        for seed in 0..50 {
            let t = random_element(&basis, 100 + seed);
            let (lo, hi) = check_seminorm_sandwich(&c.triple, &t, Params::new(1.0, 1.0), Params::new(0.5, 1.0), 1e-9).unwrap();
            assert!(lo.pass && hi.pass);
        }
    }

    #[test]
    fn hyperbola_factors_coincide() {
        // αβ = γδ: both factors equal γ/α = δ/β up to rounding.
        let p = Params::new(0.25, 2.0);
        let q = Params::new(0.5, 1.0);
        let (s, r) = comparison_factors(p, q).unwrap();
        assert!((s - 2.0).abs() < 1e-15 && (r - 2.0).abs() < 1e-15);
        let c = build_circle(3).unwrap();
        let basis = c.extension_basis(3).unwrap();
        let t = random_element(&basis, 9);
        let ratio = lip_ext(&c.triple, &t, p).unwrap() / lip_ext(&c.triple, &t, q).unwrap();
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn metric_sandwich_pooled() {
        let c = build_circle(3).unwrap();
        let basis = c.extension_basis(3).unwrap();
        let pool: Vec<ExtElement> = (0..20).map(|s| random_element(&basis, 200 + s)).collect();
        let mut rng = seeded(5);
        let phi = SplitState::new(&c.triple, 0.3, random_density(3, 2, &mut rng), BaseFunctional::circle_delta(3, 12, 0)).unwrap();
        let psi = SplitState::new(&c.triple, 0.6, random_density(3, 1, &mut rng), BaseFunctional::circle_delta(3, 12, 5)).unwrap();
        let p = Params::new(1.0, 1.0);
        let q = Params::new(0.5, 1.5);
        let (lo, hi) = check_metric_sandwich(&c.triple, &phi, &psi, p, q, &pool, None, 1e-9).unwrap();
        assert!(lo.pass && hi.pass);
        let (lo, hi) = check_metric_sandwich(&c.triple, &phi, &psi, p, p, &pool, None, 1e-9).unwrap();
        assert_eq!(lo.lhs, lo.rhs);
        assert_eq!(hi.lhs, hi.rhs);
        let (lo, _) = check_metric_sandwich(&c.triple, &phi, &phi, p, q, &pool, None, 1e-9).unwrap();
        assert_eq!(lo.lhs, Extended::Finite(0.0));
        assert!(check_metric_sandwich(&c.triple, &phi, &psi, p, q, &[], None, 1e-9).is_err());
    }
}
