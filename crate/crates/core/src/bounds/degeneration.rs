//! The two degenerations of the family: `α → 0`, where the extension
//! collapses onto the unitarized compacts, and `β → 0`, where states with
//! different normal parts drift apart.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::report::{BoundReport, Extended};
use rayon::prelude::*;

use crate::states::{
    connes_distance, diameter_estimate, maximize_linear, trace_product, BaseFunctional, ElementBasis, Pencil, SeminormKind,
    SeminormSpec, SolverOptions, SplitState,
};
use crate::triple::{lip_c, lip_ext, require_matrix_params, ExtElement, Params, TruncatedTriple};

/// Bridge on `A ⊕ C̃` between `(A, L_{α,β})` and the unitarized compacts
/// `(C̃, β L_C)`:
///
/// `L((T(a) + k, h + sI)) = max{L_{α,β}(T(a) + k), β L_C(h), L_A(a)/α,
/// L_C(k − h)/α, M|σ(T(a)) − s|}`.
///
/// Coordinates are `[a (symbols), x_I, k (compacts), h (compacts), s]`,
/// where `x_I` is the coefficient of `T(I)`.
#[derive(Clone, Debug)]
pub struct Ato0Bridge {
    pub triple: TruncatedTriple,
    pub params: Params,
    pub sigma: SplitState,
    pub m: f64,
    pub symbols: ElementBasis,
    pub compacts: ElementBasis,
    pencil: Pencil,
}

/// A certified bridge distance between a state and its paired state, with
/// the witness split into the three terms of the triangle estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Ato0Outcome {
    pub alpha: f64,
    /// Certified lower bound on `ρ_L((φ, 0), (0, ψ))`.
    pub value: Extended,
    pub gap_estimate: f64,
    /// `‖f‖`, the mass of the normal part.
    pub normal_mass: f64,
    /// `(φ − σ)(T(a))` at the witness.
    pub symbol_term: f64,
    /// `σ(T(a)) + x_I − s`.
    pub penalty_term: f64,
    /// `f(k − h)`.
    pub compact_term: f64,
    pub lip_a: f64,
    pub lip_c_diff: f64,
    /// `|symbol_term| / L_A(a)`: a lower bound for the diameter of the symbol states.
    pub ratio_a: f64,
    /// `|compact_term| / (‖f‖ L_C(k − h))`.
    pub ratio_c: f64,
}

impl Ato0Bridge {
    /// `sigma` must vanish on the compacts. The symbols span the `a` part and
    /// should carry no kernel of `L_A` other than multiples of the unit.
    pub fn new(
        triple: &TruncatedTriple,
        symbols: Vec<(String, CMatrix)>,
        params: Params,
        sigma: SplitState,
        m: f64,
    ) -> Result<Self> {
        require_matrix_params(params)?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidArgument(format!("penalty must be positive, got {m}")));
        }
        sigma.validate(triple)?;
        if sigma.weight != 1.0 {
            return Err(Error::State("the base state must vanish on the compacts".into()));
        }
        let ext = ElementBasis::symbols_and_compacts(triple, symbols.clone())?;
        let symbols = ElementBasis::from_symbols(triple, symbols)?;
        let compacts = ElementBasis::compacts(triple)?;
        let (na, nk) = (symbols.len(), compacts.len());
        let dim = na + 1 + 2 * nk + 1;
        let (xi, k0, h0, s_idx) = (na, na + 1, na + 1 + nk, na + 1 + 2 * nk);
        let (alpha, beta) = (params.alpha, params.beta);

        let ext_map: Vec<Vec<(usize, f64)>> = (0..na)
            .map(|j| vec![(j, 1.0)])
            .chain((0..nk).map(|i| vec![(k0 + i, 1.0)]))
            .collect();
        let lip = SeminormSpec::new(SeminormKind::LipExt(params), ext).pencil(triple)?.pullback(dim, &ext_map)?;

        let lip_c_pencil = SeminormSpec::new(SeminormKind::LipC, compacts.clone()).pencil(triple)?;
        let h_map: Vec<Vec<(usize, f64)>> = (0..nk).map(|i| vec![(h0 + i, 1.0)]).collect();
        let compact_side = lip_c_pencil.scaled(beta).pullback(dim, &h_map)?;

        let a_map: Vec<Vec<(usize, f64)>> = (0..na).map(|j| vec![(j, 1.0)]).collect();
        let symbol_term = SeminormSpec::new(SeminormKind::LipA, symbols.clone())
            .pencil(triple)?
            .scaled(1.0 / alpha)
            .pullback(dim, &a_map)?;

        let diff_map: Vec<Vec<(usize, f64)>> = (0..nk).map(|i| vec![(k0 + i, 1.0), (h0 + i, -1.0)]).collect();
        let diff_term = lip_c_pencil.scaled(1.0 / alpha).pullback(dim, &diff_map)?;

        let mut penalty = vec![0.0; dim];
        for (j, g) in symbols.gens.iter().enumerate() {
            penalty[j] = m * sigma.evaluate(triple, g)?;
        }
        penalty[xi] = m;
        penalty[s_idx] = -m;

        let pencil = Pencil::max_of(&[lip, compact_side, symbol_term, diff_term, Pencil::functional(&penalty)])?;
        Ok(Ato0Bridge {
            triple: triple.clone(),
            params,
            sigma,
            m,
            symbols,
            compacts,
            pencil,
        })
    }

    pub fn dim(&self) -> usize {
        self.symbols.len() + 2 + 2 * self.compacts.len()
    }

    /// The bridge seminorm at packed coordinates.
    pub fn evaluate(&self, z: &[f64]) -> f64 {
        self.pencil.evaluate(z)
    }

    fn split<'a>(&self, z: &'a [f64]) -> (&'a [f64], f64, &'a [f64], &'a [f64], f64) {
        let (na, nk) = (self.symbols.len(), self.compacts.len());
        (&z[..na], z[na], &z[na + 1..na + 1 + nk], &z[na + 1 + nk..na + 1 + 2 * nk], z[na + 1 + 2 * nk])
    }

    fn pack(&self, a: &[f64], x_i: f64, k: &[f64], h: &[f64], s: f64) -> Vec<f64> {
        let mut z = Vec::with_capacity(self.dim());
        z.extend_from_slice(a);
        z.push(x_i);
        z.extend_from_slice(k);
        z.extend_from_slice(h);
        z.push(s);
        z
    }

    /// The bridge restricted to `A` is `L_{α,β}`: the pair `h = k/(1 + αβ)`,
    /// `s = σ(T(a))` attains it.
    pub fn induced_on_extension(&self, a: &[f64], k: &[f64], tolerance: f64) -> Result<BoundReport> {
        let t = self.symbols.element(a).add(&self.compacts.element(k));
        let target = lip_ext(&self.triple, &t, self.params)?;
        let s = self.sigma.evaluate(&self.triple, &self.symbols.element(a))?;
        let h: Vec<f64> = k.iter().map(|x| x / (1.0 + self.params.product())).collect();
        let value = self.evaluate(&self.pack(a, 0.0, k, &h, s));
        Ok(BoundReport::identity(
            "bridge restricted to the extension",
            "collapse bridge",
            value,
            target,
            tolerance * (1.0 + target),
        ))
    }

    /// The bridge restricted to `C̃` is `β L_C`: the pair `a = sI`, `k = h` attains it.
    pub fn induced_on_compacts(&self, h: &[f64], s: f64, tolerance: f64) -> Result<BoundReport> {
        let target = self.params.beta * lip_c(&self.triple, &self.compacts.element(h).compact)?;
        let zeros = vec![0.0; self.symbols.len()];
        let value = self.evaluate(&self.pack(&zeros, s, h, h, s));
        Ok(BoundReport::identity(
            "bridge restricted to the compacts",
            "collapse bridge",
            value,
            target,
            tolerance * (1.0 + target),
        ))
    }

    /// `ρ_L((φ, 0), (0, ψ))` for `ψ = f̂ + ‖μ‖σ` on `C̃`, where `f` is the
    /// normal part of `φ`.
    pub fn forward(&self, phi: &SplitState, opts: &SolverOptions) -> Result<Ato0Outcome> {
        phi.validate(&self.triple)?;
        let f = phi.normal_functional();
        let mut c = Vec::with_capacity(self.dim());
        for g in &self.symbols.gens {
            c.push(phi.evaluate(&self.triple, g)?);
        }
        c.push(1.0);
        for g in &self.compacts.gens {
            c.push(trace_product(&f, &g.compact));
        }
        for g in &self.compacts.gens {
            c.push(-trace_product(&f, &g.compact));
        }
        c.push(-1.0);
        let res = maximize_linear(&c, &self.pencil, opts)?;
        let (a, x_i, k, h, s) = self.split(&res.witness);
        let a_el = self.symbols.element(a);
        let diff: Vec<f64> = k.iter().zip(h).map(|(x, y)| x - y).collect();
        let diff_el = self.compacts.element(&diff).compact;
        let sigma_a = self.sigma.evaluate(&self.triple, &a_el)?;
        let symbol_term = phi.evaluate(&self.triple, &a_el)? - sigma_a;
        let penalty_term = sigma_a + x_i - s;
        let compact_term = trace_product(&f, &diff_el);
        let lip_a_val = crate::triple::lip_a(&self.triple, &a_el.symbol)?;
        let lip_c_diff = lip_c(&self.triple, &diff_el)?;
        let mass = phi.normal_mass();
        let ratio = |num: f64, den: f64| if num == 0.0 { 0.0 } else if den == 0.0 { f64::INFINITY } else { num.abs() / den };
        Ok(Ato0Outcome {
            alpha: self.params.alpha,
            value: res.value,
            gap_estimate: res.gap_estimate,
            normal_mass: mass,
            symbol_term,
            penalty_term,
            compact_term,
            lip_a: lip_a_val,
            lip_c_diff,
            ratio_a: ratio(symbol_term, lip_a_val),
            ratio_c: ratio(compact_term, mass * lip_c_diff),
        })
    }

    /// For a state `ψ = f̂ + (1 − ‖f‖)σ` on `C̃`, given by the positive
    /// functional `f` with `‖f‖ ≤ 1`, the paired state on the extension is
    /// `φ = ι_C(f) + (1 − ‖f‖)σ`; the distance is computed as in [`Ato0Bridge::forward`].
    pub fn reverse(&self, f: &CMatrix, opts: &SolverOptions) -> Result<(SplitState, Ato0Outcome)> {
        let mass = f.trace().re;
        if !(-1e-12..=1.0 + 1e-12).contains(&mass) {
            return Err(Error::State(format!("functional norm {mass} outside [0, 1]")));
        }
        let mass = mass.clamp(0.0, 1.0);
        let normal = if mass > 0.0 {
            f.scale_real(1.0 / mass)
        } else {
            let mut e = CMatrix::zeros(self.triple.n_p(), self.triple.n_p());
            e[(0, 0)] = crate::linalg::ONE;
            e
        };
        let phi = SplitState::new(&self.triple, 1.0 - mass, normal, self.sigma.base.clone())?;
        let out = self.forward(&phi, opts)?;
        Ok((phi, out))
    }
}

/// `ρ_L ≤ α(diam_A + diam_C) + 1/M` for one solved pairing. The report also
/// records the per-witness decomposition of the bound.
pub fn ato0_pairing_check(outcome: &Ato0Outcome, m: f64, diam_a: f64, diam_c: f64, tolerance: f64) -> BoundReport {
    let bound = outcome.alpha * (diam_a + diam_c) + 1.0 / m;
    BoundReport::inequality(
        "collapse pairing distance",
        "collapse bound",
        outcome.value,
        Extended::Finite(bound),
        tolerance * (1.0 + bound),
    )
    .with("alpha", outcome.alpha)
    .with("M", m)
    .with("diam_a", diam_a)
    .with("diam_c", diam_c)
    .with("symbol_term", outcome.symbol_term)
    .with("penalty_term", outcome.penalty_term)
    .with("compact_term", outcome.compact_term)
    .with("ratio_a", outcome.ratio_a)
    .with("ratio_c", outcome.ratio_c)
    .with("gap_estimate", outcome.gap_estimate)
}

/// Collapse pairings over a grid of `α` with one pair of diameters.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapseStudy {
    /// Larger of the solver diameter estimate under `L_A` and every `ratio_a`.
    pub diam_a: f64,
    /// Larger of the solver diameter estimate under `L_C` and every `ratio_c`.
    pub diam_c: f64,
    pub alphas: Vec<f64>,
    /// `α(diam_A + diam_C) + 1/M` for each `α`.
    pub bounds: Vec<f64>,
    /// Forward outcomes for every state, then reverse outcomes for every
    /// functional, grouped by `α`.
    pub outcomes: Vec<Vec<Ato0Outcome>>,
    pub reports: Vec<BoundReport>,
}

/// Runs the collapse bridge at each `α` (with fixed `β`) for the states and
/// the positive functionals `f` with `‖f‖ ≤ 1`, then checks every pairing
/// against `α(diam_A + diam_C) + 1/M` and the bounds for linearity in `α`.
#[allow(clippy::too_many_arguments)]
pub fn collapse_study(
    triple: &TruncatedTriple,
    symbols: Vec<(String, CMatrix)>,
    beta: f64,
    sigma: &SplitState,
    m: f64,
    alphas: &[f64],
    states: &[SplitState],
    functionals: &[CMatrix],
    opts: &SolverOptions,
    tolerance: f64,
) -> Result<CollapseStudy> {
    if alphas.is_empty() || states.is_empty() {
        return Err(Error::InvalidArgument("collapse study needs alphas and states".into()));
    }
    let outcomes: Vec<Vec<Ato0Outcome>> = alphas
        .par_iter()
        .map(|&alpha| {
            let bridge = Ato0Bridge::new(triple, symbols.clone(), Params::new(alpha, beta), sigma.clone(), m)?;
            let mut out = Vec::with_capacity(states.len() + functionals.len());
            for phi in states {
                out.push(bridge.forward(phi, opts)?);
            }
            for f in functionals {
                out.push(bridge.reverse(f, opts)?.1);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let symbol_basis = ElementBasis::from_symbols(triple, symbols)?;
    let est_a = diameter_estimate(triple, &SeminormSpec::new(SeminormKind::LipA, symbol_basis), states, opts)?;
    let normal: Vec<SplitState> = states
        .iter()
        .filter(|s| s.weight < 1.0)
        .map(|s| SplitState::normal_state(triple, s.normal.clone(), s.base.clone()))
        .collect::<Result<_>>()?;
    let est_c = if normal.len() >= 2 {
        let compacts = ElementBasis::compacts(triple)?;
        diameter_estimate(triple, &SeminormSpec::new(SeminormKind::LipC, compacts), &normal, opts)?.value
    } else {
        Extended::Finite(0.0)
    };
    let fold = |init: Extended, pick: fn(&Ato0Outcome) -> f64| {
        outcomes.iter().flatten().map(pick).fold(init.to_f64(), f64::max)
    };
    let diam_a = fold(est_a.value, |o| o.ratio_a);
    let diam_c = fold(est_c, |o| o.ratio_c);

    let bounds: Vec<f64> = alphas.iter().map(|a| a * (diam_a + diam_c) + 1.0 / m).collect();
    let mut reports = Vec::new();
    for row in &outcomes {
        for o in row {
            reports.push(ato0_pairing_check(o, m, diam_a, diam_c, tolerance));
        }
    }
    let slopes: Vec<f64> = alphas.iter().zip(&bounds).map(|(a, b)| (b - 1.0 / m) / a).collect();
    let spread = slopes.iter().fold(0.0_f64, |acc, s| acc.max((s - slopes[0]).abs()));
    reports.push(
        BoundReport::deviation(
            "collapse bound linear in alpha",
            "collapse bound",
            spread,
            tolerance * (1.0 + slopes[0].abs()),
        )
        .with("slope", slopes[0])
        .with("alphas", alphas.to_vec())
        .with("bounds", bounds.clone()),
    );
    Ok(CollapseStudy {
        diam_a,
        diam_c,
        alphas: alphas.to_vec(),
        bounds,
        outcomes,
        reports,
    })
}

/// Which case of the `β → 0` limit a pair of states falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bto0Case {
    Equal,
    NormalPartsDiffer,
    SameNormalPart,
}

const NORMAL_TOL: f64 = 1e-10;

/// The limit distance under `L_{1,0}(T(a) + k) = L_A(a)`: zero for equal
/// states, infinite when the normal parts differ, and otherwise `λ` times the
/// base distance between the singular parts. `base_distance` receives the two
/// base functionals.
pub fn bto0_limit_distance(
    phi: &SplitState,
    psi: &SplitState,
    base_distance: impl FnOnce(&BaseFunctional, &BaseFunctional) -> Result<Extended>,
) -> Result<(Bto0Case, Extended)> {
    let f = phi.normal_functional();
    let g = psi.normal_functional();
    if f.rows() != g.rows() || f.cols() != g.cols() {
        return Err(Error::Shape("states live on different triples".into()));
    }
    if f.max_abs_diff(&g) > NORMAL_TOL {
        return Ok((Bto0Case::NormalPartsDiffer, Extended::PosInf));
    }
    let lambda = phi.weight;
    if lambda == 0.0 || phi.base.canonical() == psi.base.canonical() {
        return Ok((Bto0Case::Equal, Extended::Finite(0.0)));
    }
    let d = base_distance(&phi.base, &psi.base)?;
    Ok((
        Bto0Case::SameNormalPart,
        match d {
            Extended::Finite(x) => Extended::Finite(lambda * x),
            other => other,
        },
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DineqOutcome {
    /// `sup |(f − g)(k)|` over compacts with `L_C(k) ≤ 1`, certified from below.
    pub gamma: f64,
    /// The maximising compact `k*`, normalised to `L_C(k*) ≤ 1`.
    pub witness: CMatrix,
    pub reports: Vec<BoundReport>,
    /// Normal parts agree, so `γ = 0` and nothing is checked.
    pub degenerate: bool,
}

/// `dist_{1,β}(φ, ψ) ≥ γ/β` for each `β` in the grid. The distance lower
/// bound is the larger of the solver value on `basis` and the ratio at the
/// feasible element `k*/β`, whose seminorm `L_{1,β}(k*/β) = L_C(k*)` does not
/// depend on `β`.
pub fn dineq_divergence_check(
    triple: &TruncatedTriple,
    phi: &SplitState,
    psi: &SplitState,
    betas: &[f64],
    basis: &ElementBasis,
    opts: &SolverOptions,
    tolerance: f64,
) -> Result<DineqOutcome> {
    if let Some(b) = betas.iter().find(|b| !(**b > 0.0 && **b <= 1.0)) {
        return Err(Error::InvalidArgument(format!("beta {b} outside (0, 1]")));
    }
    let compacts = ElementBasis::compacts(triple)?;
    let res = connes_distance(phi, psi, triple, &SeminormSpec::new(SeminormKind::LipC, compacts.clone()), opts)?;
    let k_star = compacts.element(&res.witness).compact;
    let diff = &phi.normal_functional() - &psi.normal_functional();
    let lc = lip_c(triple, &k_star)?;
    let objective = trace_product(&diff, &k_star).abs();
    if diff.max_abs() <= NORMAL_TOL || objective == 0.0 || lc == 0.0 {
        return Ok(DineqOutcome {
            gamma: 0.0,
            witness: k_star,
            reports: Vec::new(),
            degenerate: true,
        });
    }
    let gamma = objective / lc;
    let mut reports = Vec::with_capacity(betas.len());
    for &beta in betas {
        let p = Params::new(1.0, beta);
        let w = ExtElement::compact_only(triple, k_star.scale_real(1.0 / beta));
        let lw = lip_ext(triple, &w, p)?;
        let ratio = (phi.evaluate(triple, &w)? - psi.evaluate(triple, &w)?).abs() / lw;
        let solver = connes_distance(phi, psi, triple, &SeminormSpec::new(SeminormKind::LipExt(p), basis.clone()), opts)?;
        let lower = solver.value.max(Extended::Finite(ratio));
        let lhs = gamma / beta;
        reports.push(
            BoundReport::inequality(
                "divergence lower bound",
                "divergence as beta shrinks",
                Extended::Finite(lhs),
                lower,
                tolerance * (1.0 + lhs),
            )
            .with("beta", beta)
            .with("gamma", gamma)
            .with("witness_ratio", ratio)
            .with("solver_value", solver.value),
        );
    }
    Ok(DineqOutcome {
        gamma,
        witness: k_star,
        reports,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::build_circle;
    use crate::random::{random_density, seeded};

    fn circle_bridge(alpha: f64, m: f64) -> (crate::instances::CircleInstance, Ato0Bridge) {
        let c = build_circle(3).unwrap();
        let sigma = c.delta_state(12, 0).unwrap();
        let b = Ato0Bridge::new(&c.triple, c.trig_symbols(3), Params::new(alpha, 1.0), sigma, m).unwrap();
        (c, b)
    }

    #[test]
    fn bridge_restricts_to_both_seminorms() {
        let (c, b) = circle_bridge(0.5, 100.0);
        let mut rng = seeded(1);
        for _ in 0..10 {
            let a: Vec<f64> = (0..b.symbols.len()).map(|_| crate::random::gaussian(&mut rng)).collect();
            let k: Vec<f64> = (0..b.compacts.len()).map(|_| crate::random::gaussian(&mut rng)).collect();
            assert!(b.induced_on_extension(&a, &k, 1e-9).unwrap().pass);
            assert!(b.induced_on_compacts(&k, 0.7, 1e-9).unwrap().pass);
        }
        assert_eq!(b.dim(), 6 + 2 + 2 * c.triple.n_p() * c.triple.n_p());
    }

    #[test]
    fn singular_state_pairs_within_the_bound() {
        let (c, b) = circle_bridge(0.5, 1e6);
        let phi = c.delta_state(12, 5).unwrap();
        let out = b.forward(&phi, &SolverOptions::quick(0)).unwrap();
        assert_eq!(out.compact_term, 0.0);
        assert_eq!(out.normal_mass, 0.0);
        let decomposed = out.symbol_term + out.penalty_term + out.compact_term;
        assert!((decomposed - out.value.finite().unwrap()).abs() < 1e-9);
        let r = ato0_pairing_check(&out, 1e6, out.ratio_a, 0.0, 1e-9);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn reverse_pairing_uses_the_base_state() {
        let (c, b) = circle_bridge(0.1, 1e6);
        let mut rng = seeded(2);
        let f = random_density(c.triple.n_p(), 2, &mut rng).scale_real(0.4);
        let (phi, out) = b.reverse(&f, &SolverOptions::quick(0)).unwrap();
        assert!((phi.weight - 0.6).abs() < 1e-12);
        assert_eq!(phi.base, b.sigma.base);
        let r = ato0_pairing_check(&out, 1e6, out.ratio_a, out.ratio_c, 1e-9);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn bto0_cases() {
        let c = build_circle(3).unwrap();
        let mut rng = seeded(3);
        let nu = random_density(3, 2, &mut rng);
        let phi = SplitState::new(&c.triple, 0.5, nu.clone(), c.delta(12, 0)).unwrap();
        let psi = SplitState::new(&c.triple, 0.5, nu.clone(), c.delta(12, 6)).unwrap();
        let other = SplitState::new(&c.triple, 0.5, random_density(3, 1, &mut rng), c.delta(12, 0)).unwrap();
        let two = |_: &BaseFunctional, _: &BaseFunctional| Ok(Extended::Finite(2.0));
        assert_eq!(bto0_limit_distance(&phi, &phi, two).unwrap(), (Bto0Case::Equal, Extended::Finite(0.0)));
        assert_eq!(
            bto0_limit_distance(&phi, &other, two).unwrap(),
            (Bto0Case::NormalPartsDiffer, Extended::PosInf)
        );
        assert_eq!(
            bto0_limit_distance(&phi, &psi, two).unwrap(),
            (Bto0Case::SameNormalPart, Extended::Finite(1.0))
        );
    }

    #[test]
    fn dineq_scales_as_one_over_beta() {
        let c = build_circle(2).unwrap();
        let mut rng = seeded(4);
        let phi = SplitState::new(&c.triple, 0.2, random_density(2, 1, &mut rng), c.delta(12, 0)).unwrap();
        let psi = SplitState::new(&c.triple, 0.2, random_density(2, 1, &mut rng), c.delta(12, 0)).unwrap();
        let basis = ElementBasis::compacts(&c.triple).unwrap();
        let out = dineq_divergence_check(&c.triple, &phi, &psi, &[1.0, 0.5, 0.25], &basis, &SolverOptions::quick(0), 1e-12)
            .unwrap();
        assert!(!out.degenerate && out.gamma > 0.0);
        for r in &out.reports {
            assert!(r.pass, "{r:?}");
        }
        let l0 = out.reports[0].lhs.finite().unwrap();
        let l1 = out.reports[1].lhs.finite().unwrap();
        assert!((l1 - 2.0 * l0).abs() < 1e-12);
        let same = dineq_divergence_check(&c.triple, &phi, &phi, &[1.0], &basis, &SolverOptions::quick(0), 1e-12).unwrap();
        assert!(same.degenerate);
        assert!(dineq_divergence_check(&c.triple, &phi, &psi, &[2.0], &basis, &SolverOptions::quick(0), 1e-12).is_err());
    }

    #[test]
    fn collapse_study_bounds_every_pairing() {
        let c = build_circle(3).unwrap();
        let sigma = c.delta_state(12, 0).unwrap();
        let mut rng = seeded(9);
        let states: Vec<SplitState> = (0..3)
            .map(|j| SplitState::new(&c.triple, 0.5, random_density(3, 1, &mut rng), c.delta(12, 3 * j + 1)).unwrap())
            .collect();
        let fs = vec![random_density(3, 2, &mut rng).scale_real(0.5)];
        let study = collapse_study(
            &c.triple,
            c.trig_symbols(3),
            1.0,
            &sigma,
            1e6,
            &[0.5, 0.1],
            &states,
            &fs,
            &SolverOptions::quick(0),
            1e-9,
        )
        .unwrap();
        assert_eq!(study.outcomes.len(), 2);
        assert_eq!(study.outcomes[0].len(), 4);
        assert!(study.reports.iter().all(|r| r.pass), "{:?}", study.reports);
        assert!(study.bounds[1] < study.bounds[0]);
    }
}
