//! Linear maximisation over a seminorm unit ball.
//!
//! `sup { c·x : L(x) ≤ 1 }` is computed on the quotient by the kernel of
//! `L`. Kernel directions are found from the Frobenius Gram matrix of the
//! pencil; if `c` has a component along the kernel the supremum is infinite.
//! On the complement the coordinates are whitened so that the Frobenius norm
//! of the pencil becomes Euclidean, and the ratio `c·y / L(y)` is increased by
//! first-order steps on the surface `L(y) = 1`. Every reported value is
//! certified: the witness is rescaled with an exactly evaluated seminorm.

use rand::SeedableRng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, C64};
use crate::random::{gaussian, SeededRng};
use crate::report::{BoundReport, Extended};
use crate::triple::{lip_c, TruncatedTriple};

use super::barrier::barrier_maximize;
use super::seminorm::{Pencil, SeminormSpec};
use super::SplitState;

/// Gram eigenvalues below this fraction of the largest are kernel candidates.
const GRAM_RELATIVE_CUTOFF: f64 = 1e-14;

/// Which stages of the solver run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMethod {
    /// Multi-restart supergradient ascent with radial retraction.
    Ascent,
    /// Log-barrier Newton path following.
    Barrier,
    /// Both; the better certified witness wins.
    AscentThenBarrier,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub method: SolverMethod,
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Initial relative step length; step `k` uses `step / √k`.
    pub step: f64,
    /// Power iterations per step for the top singular pair.
    pub power_iters: usize,
    /// Exact re-evaluation cadence (iterations).
    pub checkpoint: usize,
    /// Seminorm threshold for kernel directions.
    pub kernel_tol: f64,
    /// Objective threshold above which a kernel direction makes the distance infinite.
    pub objective_tol: f64,
    /// Extra starting points in coordinates (used before random ones).
    pub starts: Vec<Vec<f64>>,
    /// Relative duality-gap target of the barrier stage.
    pub barrier_tol: f64,
    pub max_newton: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: SolverMethod::AscentThenBarrier,
            iterations: 2000,
            restarts: 8,
            seed: 0,
            step: 0.5,
            power_iters: 40,
            checkpoint: 100,
            kernel_tol: 1e-10,
            objective_tol: 1e-8,
            starts: Vec::new(),
            barrier_tol: 1e-9,
            max_newton: 400,
        }
    }
}

impl SolverOptions {
    /// Fewer iterations and restarts, for pools and informational values.
    pub fn quick(seed: u64) -> Self {
        SolverOptions {
            iterations: 400,
            restarts: 3,
            seed,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_method(mut self, method: SolverMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_starts(mut self, starts: Vec<Vec<f64>>) -> Self {
        self.starts = starts;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceResult {
    /// Certified lower bound on the supremum, or `PosInf`.
    pub value: Extended,
    /// Coordinates of the optimising element. For finite values its seminorm
    /// is at most one; for infinite values it spans a kernel direction.
    pub witness: Vec<f64>,
    pub witness_seminorm: f64,
    /// `c · witness`.
    pub objective: f64,
    pub iterations: usize,
    pub restarts: usize,
    /// How far below the supremum the value may be: the barrier duality gap
    /// when that stage runs, otherwise the spread between restarts.
    pub gap_estimate: f64,
}

impl DistanceResult {
    fn zero(dim: usize) -> Self {
        DistanceResult {
            value: Extended::Finite(0.0),
            witness: vec![0.0; dim],
            witness_seminorm: 0.0,
            objective: 0.0,
            iterations: 0,
            restarts: 0,
            gap_estimate: 0.0,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value == Extended::PosInf
    }
}

/// `sup { c·x : L(x) ≤ 1 }` for the pencil seminorm `L`.
pub fn maximize_linear(c: &[f64], pencil: &Pencil, opts: &SolverOptions) -> Result<DistanceResult> {
    let m = pencil.dim();
    if c.len() != m {
        return Err(Error::Shape(format!(
            "objective has {} coordinates, seminorm acts on {m}",
            c.len()
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("objective is not finite".into()));
    }
    if c.iter().all(|&v| v == 0.0) {
        return Ok(DistanceResult::zero(m));
    }
    // Solve for the sign-canonical objective so that swapping the two states
    // gives bit-identical values.
    let flip = c.iter().find(|&&v| v != 0.0).is_some_and(|&v| v < 0.0);
    let c: Vec<f64> = if flip { c.iter().map(|v| -v).collect() } else { c.to_vec() };

    // Kernel and whitening come from the block-normalised pencil, so that a
    // large penalty block does not hide small but genuine directions.
    let normalized = pencil.block_normalized();
    let gram = normalized.gram();
    let gram_m = CMatrix::from_fn(m, m, |i, j| C64::new(gram[i][j], 0.0));
    let eig = hermitian_eigen(&gram_m)?;
    let lam_max = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let typical = (eig.values.iter().map(|v| v.max(0.0)).sum::<f64>() / m as f64).sqrt();
    let column = |k: usize| -> Vec<f64> { (0..m).map(|i| eig.vectors[(i, k)].re).collect() };

    let mut kernel_component = vec![0.0; m];
    let mut range = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        let v = column(k);
        if lam <= GRAM_RELATIVE_CUTOFF * lam_max && normalized.evaluate(&v) <= opts.kernel_tol * typical.max(1.0) {
            let cv: f64 = dot(&c, &v);
            for (kc, vi) in kernel_component.iter_mut().zip(&v) {
                *kc += cv * vi;
            }
        } else {
            range.push((lam.max(f64::MIN_POSITIVE), v));
        }
    }
    let kernel_norm = dot(&kernel_component, &kernel_component).sqrt();
    if kernel_norm > 0.0 {
        let unit: Vec<f64> = kernel_component.iter().map(|v| v / kernel_norm).collect();
        let objective = dot(&c, &unit);
        let seminorm = pencil.evaluate(&unit);
        if objective > opts.objective_tol && normalized.evaluate(&unit) < opts.kernel_tol * typical.max(1.0) {
            let sign = if flip { -1.0 } else { 1.0 };
            return Ok(DistanceResult {
                value: Extended::PosInf,
                witness: unit.iter().map(|v| v * sign).collect(),
                witness_seminorm: seminorm,
                objective,
                iterations: 0,
                restarts: 0,
                gap_estimate: 0.0,
            });
        }
    }
    if range.is_empty() {
        return Ok(DistanceResult::zero(m));
    }

    // x = W y with W = V Λ^{-1/2}; then the Frobenius norm of the pencil is |y|.
    let r = range.len();
    let w: Vec<Vec<f64>> = range.iter().map(|(lam, v)| v.iter().map(|vi| vi / lam.sqrt()).collect()).collect();
    let to_x = |y: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; m];
        for (yk, wk) in y.iter().zip(&w) {
            for (xi, wi) in x.iter_mut().zip(wk) {
                *xi += yk * wi;
            }
        }
        x
    };
    let to_y_grad = |gx: &[f64]| -> Vec<f64> { w.iter().map(|wk| dot(wk, gx)).collect() };
    let c_y: Vec<f64> = to_y_grad(&c);
    if dot(&c_y, &c_y).sqrt() <= opts.objective_tol * 1e-3 {
        return Ok(DistanceResult::zero(m));
    }

    // Candidates (x, ratio c·x / L(x)) from each stage.
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let mut spread = 0.0;
    let mut iterations = 0;
    let mut restarts_run = 0;
    let mut upper: Option<f64> = None;

    if opts.method != SolverMethod::Barrier {
        let mut starts: Vec<Vec<f64>> = vec![c_y.clone()];
        for s in &opts.starts {
            if s.len() != m {
                return Err(Error::Shape("starting point has the wrong number of coordinates".into()));
            }
            // y = Λ^{1/2} Vᵀ x
            let sx: Vec<f64> = if flip { s.iter().map(|v| -v).collect() } else { s.clone() };
            starts.push(range.iter().map(|(lam, v)| lam.sqrt() * dot(v, &sx)).collect());
        }
        let restarts = opts.restarts.max(1);
        let mut rng = SeededRng::seed_from_u64(opts.seed);
        while starts.len() < restarts {
            starts.push((0..r).map(|_| gaussian(&mut rng)).collect());
        }
        starts.truncate(restarts.max(1 + opts.starts.len()));

        let runs: Vec<(f64, Vec<f64>)> = starts
            .par_iter()
            .map(|y0| ascend(y0, &c_y, pencil, &to_x, &to_y_grad, opts))
            .collect();
        let best = runs.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
        let worst = runs.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        spread = (best - worst).max(0.0);
        iterations += opts.iterations * runs.len();
        restarts_run = runs.len();
        candidates.extend(runs.into_iter().map(|(_, y)| to_x(&y)));
    }
    if opts.method != SolverMethod::Ascent {
        let basis: Vec<Vec<f64>> = range.iter().map(|(_, v)| v.clone()).collect();
        let out = barrier_maximize(&c, pencil, &basis, opts.barrier_tol, opts.max_newton);
        iterations += out.newton_steps;
        if out.gap.is_finite() {
            upper = Some(dot(&c, &out.x) + out.gap);
        }
        candidates.push(out.x);
    }

    // Certify every candidate with an exact seminorm and keep the best.
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for cand in candidates {
        let mut x = cand;
        let mut l = pencil.evaluate(&x);
        if !(l > 0.0) {
            continue;
        }
        for xi in x.iter_mut() {
            *xi /= l;
        }
        l = pencil.evaluate(&x);
        if l > 1.0 {
            // Rounding in the rescale; shrink by the excess.
            for xi in x.iter_mut() {
                *xi /= l;
            }
            l = pencil.evaluate(&x);
        }
        let obj = dot(&c, &x);
        if best.as_ref().is_none_or(|b| obj > b.0) {
            best = Some((obj, x, l));
        }
    }
    let Some((objective, mut x, l)) = best else {
        return Ok(DistanceResult::zero(m));
    };
    let gap_estimate = match upper {
        Some(u) => (u - objective).max(0.0),
        None => spread,
    };
    if flip {
        for xi in x.iter_mut() {
            *xi = -*xi;
        }
    }
    Ok(DistanceResult {
        value: Extended::Finite(objective.max(0.0)),
        witness: x,
        witness_seminorm: l,
        objective: if flip { -objective } else { objective },
        iterations,
        restarts: restarts_run,
        gap_estimate,
    })
}

/// One restart; returns the best certified ratio and its `y`.
fn ascend(
    y0: &[f64],
    c_y: &[f64],
    pencil: &Pencil,
    to_x: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
    to_y_grad: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
    opts: &SolverOptions,
) -> (f64, Vec<f64>) {
    let mut warm: Vec<Vec<C64>> = vec![Vec::new(); pencil.blocks().len()];
    let mut y = y0.to_vec();
    if dot(&y, &y) == 0.0 {
        y = c_y.to_vec();
    }
    let mut cand: Option<(f64, Vec<f64>)> = None;
    let mut best: (f64, Vec<f64>) = (f64::NEG_INFINITY, y.clone());
    let certify = |y: &[f64], best: &mut (f64, Vec<f64>)| {
        let l = pencil.evaluate(&to_x(y));
        if l > 0.0 {
            let ratio = dot(c_y, y) / l;
            if ratio > best.0 {
                *best = (ratio, y.to_vec());
            }
        }
    };
    certify(&y, &mut best);
    for k in 1..=opts.iterations {
        let x = to_x(&y);
        let (sigma, gx) = pencil.value_and_gradient(&x, &mut warm, opts.power_iters);
        if sigma <= 0.0 {
            break;
        }
        for v in y.iter_mut() {
            *v /= sigma;
        }
        let ratio = dot(c_y, &y);
        if cand.as_ref().is_none_or(|c| ratio > c.0) {
            cand = Some((ratio, y.clone()));
        }
        let gl = to_y_grad(&gx);
        let g: Vec<f64> = c_y.iter().zip(&gl).map(|(c, d)| c - ratio * d).collect();
        let gnorm = dot(&g, &g).sqrt();
        if gnorm == 0.0 {
            break;
        }
        let scale = opts.step / (k as f64).sqrt() * dot(&y, &y).sqrt() / gnorm;
        for (v, gi) in y.iter_mut().zip(&g) {
            *v += scale * gi;
        }
        if k % opts.checkpoint.max(1) == 0 || k == opts.iterations {
            if let Some((_, cy)) = cand.take() {
                certify(&cy, &mut best);
            }
            certify(&y, &mut best);
        }
    }
    best
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Connes distance `sup { |(φ − ψ)(t)| : L(t) ≤ 1 }` over the span of the
/// seminorm's element basis.
pub fn connes_distance(
    phi: &SplitState,
    psi: &SplitState,
    triple: &TruncatedTriple,
    spec: &SeminormSpec,
    opts: &SolverOptions,
) -> Result<DistanceResult> {
    phi.validate(triple)?;
    psi.validate(triple)?;
    let c = phi.difference_objective(psi, triple, &spec.basis)?;
    let pencil = spec.pencil(triple)?;
    maximize_linear(&c, &pencil, opts)
}

/// `max_x |c·x| / L(x)` over a fixed pool of elements: every entry is
/// feasible after rescaling, so the value is a lower bound on the supremum.
/// Returns the value and the index of the maximising pool element.
pub fn pooled_distance(c: &[f64], pencil: &Pencil, pool: &[Vec<f64>]) -> Result<(Extended, Option<usize>)> {
    let mut best = (Extended::Finite(0.0), None);
    for (i, x) in pool.iter().enumerate() {
        if x.len() != c.len() {
            return Err(Error::Shape("pool element has the wrong number of coordinates".into()));
        }
        let obj = dot(c, x).abs();
        if obj == 0.0 {
            continue;
        }
        let l = pencil.evaluate(x);
        let v = if l == 0.0 { Extended::PosInf } else { Extended::Finite(obj / l) };
        if v.to_f64() > best.0.to_f64() {
            best = (v, Some(i));
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterEstimate {
    /// Largest pairwise distance found (a lower bound on the diameter).
    pub value: Extended,
    pub pair: Option<(usize, usize)>,
    pub distances: Vec<((usize, usize), DistanceResult)>,
}

impl DiameterEstimate {
    pub fn witnesses(&self) -> Vec<Vec<f64>> {
        self.distances
            .iter()
            .filter(|(_, d)| !d.is_infinite())
            .map(|(_, d)| d.witness.clone())
            .collect()
    }
}

/// Maximum of `connes_distance` over all pairs of a state net.
pub fn diameter_estimate(
    triple: &TruncatedTriple,
    spec: &SeminormSpec,
    net: &[SplitState],
    opts: &SolverOptions,
) -> Result<DiameterEstimate> {
    if net.is_empty() {
        return Err(Error::InvalidArgument("state net is empty".into()));
    }
    let pencil = spec.pencil(triple)?;
    let mut pairs = Vec::new();
    for i in 0..net.len() {
        for j in (i + 1)..net.len() {
            pairs.push((i, j));
        }
    }
    let distances: Result<Vec<_>> = pairs
        .iter()
        .map(|&(i, j)| {
            let c = net[i].difference_objective(&net[j], triple, &spec.basis)?;
            let o = opts.clone().with_seed(opts.seed.wrapping_add((i * net.len() + j) as u64));
            Ok(((i, j), maximize_linear(&c, &pencil, &o)?))
        })
        .collect();
    let distances = distances?;
    let mut value = Extended::Finite(0.0);
    let mut pair = None;
    for (p, d) in &distances {
        if d.value.to_f64() > value.to_f64() {
            value = d.value;
            pair = Some(*p);
        }
    }
    Ok(DiameterEstimate { value, pair, distances })
}

/// Upper estimate `2‖D_p^{-1}‖` for the diameter of the unitarized compacts
/// under `L_C`: a difference of states has norm at most 2 and an element
/// with `‖D_p k‖ ≤ 1` has `‖k‖ ≤ ‖D_p^{-1}‖`.
pub fn diam_c_upper(triple: &TruncatedTriple) -> f64 {
    2.0 / triple.d_p().iter().fold(f64::INFINITY, |m, d| m.min(d.abs()))
}

/// Checks `sup_k |f(k)| ≤ ‖f‖ · diam_C` over sampled compacts normalised to
/// `L_C(k) = 1`, with the upper diameter estimate `2‖D_p^{-1}‖`.
pub fn diamc_inequality_check(
    triple: &TruncatedTriple,
    f: &CMatrix,
    samples: &[CMatrix],
    tolerance: f64,
) -> Result<BoundReport> {
    if f.rows() != triple.n_p() || f.cols() != triple.n_p() {
        return Err(Error::Shape("functional must act on PH".into()));
    }
    if !f.is_hermitian() {
        return Err(Error::InvalidArgument("positive functional must be Hermitian".into()));
    }
    let eig = crate::linalg::hermitian_eigenvalues(&f.hermitian_part())?;
    if eig[0] < -1e-10 * (1.0 + eig.last().copied().unwrap_or(0.0).abs()) {
        return Err(Error::InvalidArgument(format!("functional is not positive (eigenvalue {:e})", eig[0])));
    }
    let norm_f = f.trace().re;
    let mut sup: f64 = 0.0;
    let mut used = 0usize;
    for k in samples {
        let l = lip_c(triple, k)?;
        if l == 0.0 {
            continue;
        }
        used += 1;
        sup = sup.max((super::trace_product(f, k) / l).abs());
    }
    let diam_upper = diam_c_upper(triple);
    Ok(BoundReport::le("compact functional bound", "compact functional bound", sup, norm_f * diam_upper, tolerance)
        .with("norm_f", norm_f)
        .with("diam_c_upper", diam_upper)
        .with("samples", used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_hermitian, seeded};
    use crate::states::{BaseFunctional, ElementBasis, SeminormKind};
    use crate::triple::Params;

    fn triple() -> TruncatedTriple {
        TruncatedTriple::new("t", vec![-1.0, 0.0, 1.0, 2.0], vec![false, false, true, true]).unwrap()
    }

    #[test]
    fn equal_states_have_zero_distance() {
        let t = triple();
        let basis = ElementBasis::symbols_and_compacts(&t, ElementBasis::hermitian_symbols(&t)).unwrap();
        let spec = SeminormSpec::new(SeminormKind::LipExt(Params::new(1.0, 1.0)), basis);
        let s = SplitState::normal_state(&t, CMatrix::unit(2, 0, 0), BaseFunctional::diagonal_delta(0)).unwrap();
        let d = connes_distance(&s, &s, &t, &spec, &SolverOptions::default()).unwrap();
        assert_eq!(d.value, Extended::Finite(0.0));
        assert!(d.witness.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn one_dimensional_problem_is_exact() {
        // L(x) = 2|x|, c = 3: sup = 1.5.
        let p = Pencil::functional(&[2.0]);
        let d = maximize_linear(&[3.0], &p, &SolverOptions::quick(0)).unwrap();
        assert!((d.value.finite().unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn l1_ball_dual_is_max_norm() {
        // L(x) = max(|x0|, |x1|) as two 1x1 blocks: sup c·x = |c0| + |c1|.
        let p = Pencil::max_of(&[Pencil::functional(&[1.0, 0.0]), Pencil::functional(&[0.0, 1.0])]).unwrap();
        let d = maximize_linear(&[1.0, -2.0], &p, &SolverOptions::default()).unwrap();
        assert!((d.value.finite().unwrap() - 3.0).abs() < 1e-3, "{:?}", d.value);
        assert!(d.witness_seminorm <= 1.0 + 1e-8);
    }

    #[test]
    fn kernel_direction_gives_infinity() {
        let t = triple();
        // Under L_A every compact is in the kernel, so different normal parts are infinitely far apart.
        let basis = ElementBasis::symbols_and_compacts(&t, ElementBasis::hermitian_symbols(&t)).unwrap();
        let spec = SeminormSpec::new(SeminormKind::LipA, basis);
        let a = SplitState::normal_state(&t, CMatrix::unit(2, 0, 0), BaseFunctional::diagonal_delta(0)).unwrap();
        let b = SplitState::normal_state(&t, CMatrix::unit(2, 1, 1), BaseFunctional::diagonal_delta(0)).unwrap();
        let d = connes_distance(&a, &b, &t, &spec, &SolverOptions::quick(1)).unwrap();
        assert!(d.is_infinite());
        assert!(d.objective > 1e-8 && d.witness_seminorm < 1e-10);
    }

    #[test]
    fn symmetric_and_feasible() {
        let t = triple();
        // Diagonal symbols commute with a diagonal Dirac operator, so only compacts separate these states.
        let basis = ElementBasis::compacts(&t).unwrap();
        let spec = SeminormSpec::new(SeminormKind::LipExt(Params::new(0.5, 1.0)), basis);
        let mut rng = seeded(7);
        let a = SplitState::new(&t, 0.4, random_density(2, 1, &mut rng), BaseFunctional::diagonal_delta(1)).unwrap();
        let b = SplitState::new(&t, 0.7, random_density(2, 2, &mut rng), BaseFunctional::diagonal_delta(1)).unwrap();
        let opts = SolverOptions::quick(3);
        let ab = connes_distance(&a, &b, &t, &spec, &opts).unwrap();
        let ba = connes_distance(&b, &a, &t, &spec, &opts).unwrap();
        assert_eq!(ab.value, ba.value);
        assert!(ab.witness_seminorm <= 1.0 + 1e-8);
        let e = spec.basis.element(&ab.witness);
        let gap = a.evaluate(&t, &e).unwrap() - b.evaluate(&t, &e).unwrap();
        assert!((gap - ab.value.finite().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn diameter_of_single_state_is_zero() {
        let t = triple();
        let basis = ElementBasis::compacts(&t).unwrap();
        let spec = SeminormSpec::new(SeminormKind::LipC, basis);
        let s = SplitState::normal_state(&t, CMatrix::unit(2, 0, 0), BaseFunctional::diagonal_delta(0)).unwrap();
        let d = diameter_estimate(&t, &spec, &[s], &SolverOptions::quick(0)).unwrap();
        assert_eq!(d.value, Extended::Finite(0.0));
        assert!(diameter_estimate(&t, &spec, &[], &SolverOptions::quick(0)).is_err());
    }

    #[test]
    fn compacts_diameter_at_least_one() {
        let c = TruncatedTriple::with_full_projection("c", vec![1.0, 2.0, 3.0]).unwrap();
        let basis = ElementBasis::compacts(&c).unwrap();
        let spec = SeminormSpec::new(SeminormKind::LipC, basis);
        let vec_state =
            SplitState::normal_state(&c, CMatrix::unit(3, 0, 0), BaseFunctional::diagonal_delta(0)).unwrap();
        let sing = SplitState::singular(&c, BaseFunctional::diagonal_delta(0)).unwrap();
        let d = diameter_estimate(&c, &spec, &[vec_state, sing], &SolverOptions::default()).unwrap();
        assert!(d.value.finite().unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn scaled_seminorm_scales_pooled_distance() {
        let t = triple();
        let basis = ElementBasis::symbols_and_compacts(&t, ElementBasis::hermitian_symbols(&t)).unwrap();
        let base = SeminormSpec::new(SeminormKind::LipExt(Params::new(1.0, 1.0)), basis.clone());
        let scaled = SeminormSpec::new(
            SeminormKind::Scaled {
                factor: 4.0,
                inner: Box::new(SeminormKind::LipExt(Params::new(1.0, 1.0))),
            },
            basis.clone(),
        );
        let mut rng = seeded(2);
        let pool: Vec<Vec<f64>> = (0..5).map(|_| (0..basis.len()).map(|_| gaussian(&mut rng)).collect()).collect();
        let c: Vec<f64> = (0..basis.len()).map(|_| gaussian(&mut rng)).collect();
        let (d1, _) = pooled_distance(&c, &base.pencil(&t).unwrap(), &pool).unwrap();
        let (d4, _) = pooled_distance(&c, &scaled.pencil(&t).unwrap(), &pool).unwrap();
        assert!((d1.finite().unwrap() / 4.0 - d4.finite().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn diamc_check_examples() {
        let c = TruncatedTriple::with_full_projection("c", vec![1.0, 2.0, 3.0]).unwrap();
        let mut rng = seeded(5);
        let samples: Vec<CMatrix> = (0..20).map(|_| random_hermitian(3, &mut rng)).collect();
        let zero = diamc_inequality_check(&c, &CMatrix::zeros(3, 3), &samples, 1e-12).unwrap();
        assert_eq!(zero.lhs.finite(), Some(0.0));
        assert_eq!(zero.rhs.finite(), Some(0.0));
        let f = CMatrix::unit(3, 0, 0);
        let r = diamc_inequality_check(&c, &f, &samples, 1e-12).unwrap();
        assert!(r.pass);
        let r3 = diamc_inequality_check(&c, &f.scale_real(3.0), &samples, 1e-12).unwrap();
        assert!((r3.lhs.finite().unwrap() - 3.0 * r.lhs.finite().unwrap()).abs() < 1e-12);
        assert!((r3.rhs.finite().unwrap() - 3.0 * r.rhs.finite().unwrap()).abs() < 1e-12);
    }
}
