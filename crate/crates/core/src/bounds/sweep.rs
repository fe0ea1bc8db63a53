//! Diameter estimates and neighbour bounds over a grid of parameters.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::report::Extended;
use crate::states::{connes_distance, ElementBasis, SeminormKind, SeminormSpec, SolverOptions, SplitState};
use crate::triple::{lip_a, lip_c, lip_ext, validate_params, ExtElement, Params, TruncatedTriple};

use super::{gh_bound_multiplicative, gh_upper_bound_formula};

/// A rectangular grid `alphas × betas`; points outside the parameter set are
/// rejected one by one. `α = 0` rows are the unitarized compacts with `β L_C`.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    /// Largest pooled distance between net states.
    pub diam_lb: Extended,
    /// Largest explicit bound to a valid grid neighbour; `None` without neighbours.
    pub gh_bound_to_neighbors: Option<Extended>,
    pub ubset_gamma: f64,
    /// `diam_lb ≥ γ/β − tolerance`.
    pub ubset_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub rejected: Vec<(f64, f64, String)>,
    /// `γ` of the most separated pair of normal parts in the net.
    pub gamma: f64,
    pub gamma_pair: Option<(usize, usize)>,
    /// Pooled diameter estimates of the symbol states under `L_A` and of the
    /// unitarized compacts under `L_C`, used for the collapse bound.
    pub diam_a: Extended,
    pub diam_c: Extended,
}

impl SweepTable {
    pub fn csv_header() -> [&'static str; 6] {
        ["alpha", "beta", "diam_lb", "gh_bound_to_neighbors", "ubset_gamma", "ubset_pass"]
    }

    /// CSV fields of each row; infinities are written as `inf`, missing
    /// neighbour bounds as an empty field.
    pub fn csv_records(&self) -> Vec<[String; 6]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    format!("{}", r.alpha),
                    format!("{}", r.beta),
                    fmt_ext(r.diam_lb),
                    r.gh_bound_to_neighbors.map(fmt_ext).unwrap_or_default(),
                    format!("{}", r.ubset_gamma),
                    format!("{}", r.ubset_pass),
                ]
            })
            .collect()
    }
}

fn fmt_ext(x: Extended) -> String {
    match x {
        Extended::Finite(v) => format!("{v}"),
        Extended::PosInf => "inf".into(),
        Extended::NegInf => "-inf".into(),
    }
}

fn ratio(num: f64, den: f64) -> Extended {
    if num == 0.0 {
        Extended::Finite(0.0)
    } else if den == 0.0 {
        Extended::PosInf
    } else {
        Extended::Finite(num.abs() / den)
    }
}

/// Pooled sup of `|(φ_i − φ_j)(t)| / L(t)` over all net pairs.
fn pooled_diameter(
    net: &[SplitState],
    pool: &[ExtElement],
    seminorm: impl Fn(&ExtElement) -> Result<f64>,
    value: impl Fn(&SplitState, &ExtElement) -> Result<f64>,
) -> Result<Extended> {
    let mut best = Extended::Finite(0.0);
    for t in pool {
        let l = seminorm(t)?;
        let vals: Vec<f64> = net.iter().map(|s| value(s, t)).collect::<Result<_>>()?;
        for i in 0..vals.len() {
            for j in (i + 1)..vals.len() {
                best = best.max(ratio(vals[i] - vals[j], l));
            }
        }
    }
    Ok(best)
}

/// One row per valid grid point, sorted by `(α, β)`.
///
/// * `diam_lb` is the pooled diameter of the net; at `α > 0` under
///   `L_{α,β}`, at `α = 0` over the paired states `f̂ + (1 − ‖f‖)σ` of the
///   unitarized compacts under `β L_C`.
/// * Neighbour bounds use the two-parameter formula between points with
///   `α > 0`, the collapse bound `α(diam_A + diam_C)` from `(0, β)` to
///   `(α, β)`, and the rescaling bound `|1 − β/β'| diam_{0,β}` along `α = 0`.
/// * `γ` comes from the compact solver on the net pair with the largest
///   separation, and its witness `k*` joins the pool, so the divergence check
///   `diam_lb ≥ γ/β` holds by construction of the witness.
pub fn param_space_sweep(
    triple: &TruncatedTriple,
    config: &SweepConfig,
    net: &[SplitState],
    pool: &[ExtElement],
    opts: &SolverOptions,
) -> Result<SweepTable> {
    if net.is_empty() {
        return Err(Error::InvalidArgument("state net is empty".into()));
    }
    for s in net {
        s.validate(triple)?;
    }
    for t in pool {
        triple.check_element(t)?;
        if !t.is_self_adjoint() {
            return Err(Error::InvalidArgument("pool elements must be self-adjoint".into()));
        }
    }

    let mut points = Vec::new();
    let mut rejected = Vec::new();
    for (i, &alpha) in config.alphas.iter().enumerate() {
        for (j, &beta) in config.betas.iter().enumerate() {
            match validate_params(Params::new(alpha, beta)) {
                Ok(()) => points.push((i, j, Params::new(alpha, beta))),
                Err(e) => rejected.push((alpha, beta, e.to_string())),
            }
        }
    }

    let (gamma, gamma_pair, k_star) = strongest_divergence(triple, net, opts)?;
    let mut pool: Vec<ExtElement> = pool.to_vec();
    if let Some(k) = &k_star {
        pool.push(ExtElement::compact_only(triple, k.clone()));
    }

    let diam_a = pooled_diameter(
        net,
        &pool,
        |t| lip_a(triple, &t.symbol),
        |s, t| s.evaluate(triple, &ExtElement::new(t.symbol.clone(), CMatrix::zeros(triple.n_p(), triple.n_p()))),
    )?;
    let diam_c = pooled_diameter(net, &pool, |t| lip_c(triple, &t.compact), |s, t| Ok(s.normal_part(&t.compact)))?;

    let diams: Vec<Extended> = points
        .par_iter()
        .map(|&(_, _, p)| point_diameter(triple, p, net, &pool))
        .collect::<Result<_>>()?;

    let index = |i: usize, j: usize| points.iter().position(|&(a, b, _)| a == i && b == j);
    let mut rows = Vec::with_capacity(points.len());
    for (n, &(i, j, p)) in points.iter().enumerate() {
        let mut neighbours = Vec::new();
        if i > 0 {
            neighbours.extend(index(i - 1, j));
        }
        neighbours.extend(index(i + 1, j));
        if j > 0 {
            neighbours.extend(index(i, j - 1));
        }
        neighbours.extend(index(i, j + 1));
        let mut bound: Option<Extended> = None;
        for m in neighbours {
            let q = points[m].2;
            let b = neighbour_bound(p, q, diams[n], diams[m], diam_a, diam_c)?;
            bound = Some(bound.map_or(b, |x| x.max(b)));
        }
        let (ubset_gamma, ubset_pass) = if p.beta.is_finite() {
            let threshold = gamma / p.beta;
            (gamma, diams[n].to_f64() >= threshold - config.tolerance * (1.0 + threshold))
        } else {
            (gamma, true)
        };
        rows.push(SweepRow {
            alpha: p.alpha,
            beta: p.beta,
            diam_lb: diams[n],
            gh_bound_to_neighbors: bound,
            ubset_gamma,
            ubset_pass,
        });
    }
    rows.sort_by(|a, b| a.alpha.total_cmp(&b.alpha).then(a.beta.total_cmp(&b.beta)));
    Ok(SweepTable {
        rows,
        rejected,
        gamma,
        gamma_pair,
        diam_a,
        diam_c,
    })
}

fn point_diameter(
    triple: &TruncatedTriple,
    p: Params,
    net: &[SplitState],
    pool: &[ExtElement],
) -> Result<Extended> {
    if p.beta.is_infinite() {
        return Ok(Extended::Finite(0.0));
    }
    if p.alpha == 0.0 {
        // Paired states on C̃ differ by f − g, which only sees compact parts.
        return pooled_diameter(net, pool, |t| Ok(p.beta * lip_c(triple, &t.compact)?), |s, t| {
            Ok(s.normal_part(&t.compact))
        });
    }
    pooled_diameter(net, pool, |t| lip_ext(triple, t, p), |s, t| s.evaluate(triple, t))
}

fn neighbour_bound(
    p: Params,
    q: Params,
    diam_p: Extended,
    diam_q: Extended,
    diam_a: Extended,
    diam_c: Extended,
) -> Result<Extended> {
    let finite = |d: Extended| d.finite();
    if p.beta.is_infinite() || q.beta.is_infinite() {
        // The one-point space: bound by the other end's diameter.
        let other = if p.beta.is_infinite() { diam_q } else { diam_p };
        return Ok(other);
    }
    match (p.alpha == 0.0, q.alpha == 0.0) {
        (false, false) => match finite(diam_p) {
            Some(d) => gh_upper_bound_formula(p, q, d),
            None => Ok(Extended::PosInf),
        },
        (true, true) => match finite(diam_p) {
            Some(d) => Ok(Extended::Finite(gh_bound_multiplicative(q.beta / p.beta, d)?)),
            None => Ok(Extended::PosInf),
        },
        _ if p.beta == q.beta => {
            let alpha = p.alpha.max(q.alpha);
            match (finite(diam_a), finite(diam_c)) {
                (Some(a), Some(c)) => Ok(Extended::Finite(alpha * (a + c))),
                _ => Ok(Extended::PosInf),
            }
        }
        _ => Ok(Extended::PosInf),
    }
}

/// `γ`, the pair and `k*`.
type Divergence = (f64, Option<(usize, usize)>, Option<CMatrix>);

/// `γ` and `k*` for the net pair whose normal parts are furthest apart.
fn strongest_divergence(
    triple: &TruncatedTriple,
    net: &[SplitState],
    opts: &SolverOptions,
) -> Result<Divergence> {
    let compacts = ElementBasis::compacts(triple)?;
    let spec = SeminormSpec::new(SeminormKind::LipC, compacts.clone());
    let mut best = (0.0, None, None);
    for i in 0..net.len() {
        for j in (i + 1)..net.len() {
            let d = (&net[i].normal_functional() - &net[j].normal_functional()).max_abs();
            if d <= 1e-10 {
                continue;
            }
            let o = opts.clone().with_seed(opts.seed.wrapping_add((i * net.len() + j) as u64));
            let res = connes_distance(&net[i], &net[j], triple, &spec, &o)?;
            let k = compacts.element(&res.witness).compact;
            let l = lip_c(triple, &k)?;
            let obj = (net[i].normal_part(&k) - net[j].normal_part(&k)).abs();
            if l > 0.0 && obj / l > best.0 {
                best = (obj / l, Some((i, j)), Some(k));
            }
        }
    }
    Ok(best)
}
