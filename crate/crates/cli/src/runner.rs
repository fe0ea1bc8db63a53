//! Executes the experiments of a scenario and collects their checks.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use toeplitz_triples::bounds::{
    bto0_limit_distance, build_bridge, check_lineq, check_metric_sandwich, check_seminorm_sandwich, collapse_study,
    dineq_divergence_check, gh_upper_bound_formula, param_space_sweep, pooled_sup, Bto0Case, SweepConfig, SweepTable,
};
use toeplitz_triples::instances::{
    build_circle, build_compacts, build_podles, check_axioms, even_doubling, off_diagonal_criterion, AxiomStatus,
    CircleInstance, CompactsInstance, PodlesInstance,
};
use toeplitz_triples::random::{random_density, random_hermitian, random_matrix, seeded, SeededRng};
use toeplitz_triples::states::BaseFunctional;
use toeplitz_triples::triple::{
    commutator_formula_check, comparison_factors, scaling_identity_check, trace_identity_check,
};
use toeplitz_triples::{
    connes_distance, BoundReport, CMatrix, ElementBasis, Error, ExtElement, Extended, Params, SeminormKind,
    SeminormSpec, SolverOptions, SplitState, Tolerances, TruncatedTriple,
};

use crate::report::{fmt_f64, scenario_hash, Entry, Report, Table};
use crate::scenario::{Experiment, InstanceSpec, Scenario, SeminormChoice};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub tolerance_scale: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            tolerance_scale: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub tables: Vec<Table>,
}

/// A numerical failure while running an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunError {
    pub experiment: String,
    pub error: Error,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "experiment {}: {}", self.experiment, self.error)
    }
}

impl std::error::Error for RunError {}

// Built once per run, so the size spread between variants does not matter.
#[allow(clippy::large_enum_variant)]
enum Instance {
    Circle(CircleInstance),
    Custom(TruncatedTriple),
    Compacts(CompactsInstance),
    Podles(PodlesInstance),
}

impl Instance {
    fn triple(&self) -> Option<&TruncatedTriple> {
        match self {
            Instance::Circle(c) => Some(&c.triple),
            Instance::Custom(t) => Some(t),
            Instance::Podles(p) => Some(&p.triple2),
            Instance::Compacts(_) => None,
        }
    }
}

struct Ctx<'a> {
    scenario: &'a Scenario,
    instance: Instance,
    net: Vec<SplitState>,
    tol: Tolerances,
}

type Produced = (Vec<BoundReport>, Vec<Table>);

/// Runs every experiment of a validated scenario. `raw` is the scenario file
/// as read, hashed into the report.
pub fn run(scenario: &Scenario, raw: &[u8], opts: &RunOptions) -> Result<Outcome, RunError> {
    let setup = |error: Error| RunError {
        experiment: "setup".into(),
        error,
    };
    let instance = build_instance(&scenario.instance).map_err(setup)?;
    let net = build_net(scenario, &instance).map_err(setup)?;
    let ctx = Ctx {
        scenario,
        instance,
        net,
        tol: Tolerances::default().scaled(scenario.tolerance_scale * opts.tolerance_scale),
    };
    let produced: Vec<Result<Produced, RunError>> = scenario
        .experiments
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let seed = opts.seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(i as u64 + 1);
            run_experiment(&ctx, i, e, seed).map_err(|error| RunError {
                experiment: format!("{i} ({})", e.label()),
                error,
            })
        })
        .collect();
    let mut results = Vec::new();
    let mut tables = Vec::new();
    for (i, (p, e)) in produced.into_iter().zip(&scenario.experiments).enumerate() {
        let (reports, t) = p?;
        results.extend(reports.into_iter().map(|r| Entry::from_report(r, e.label(), i)));
        tables.extend(t);
    }
    Ok(Outcome {
        report: Report {
            scenario_hash: scenario_hash(raw),
            seed: opts.seed,
            results,
        },
        tables,
    })
}

fn build_instance(spec: &InstanceSpec) -> Result<Instance, Error> {
    Ok(match spec {
        InstanceSpec::Circle { n_max } => Instance::Circle(build_circle(*n_max)?),
        InstanceSpec::Compacts { t_eigen } => Instance::Compacts(build_compacts(t_eigen.clone())?),
        InstanceSpec::Podles { n_max, level1, level2 } => Instance::Podles(build_podles(*n_max, *level1, *level2)?),
        InstanceSpec::Custom { dirac, p_mask } => {
            Instance::Custom(TruncatedTriple::new("custom", dirac.clone(), p_mask.clone())?)
        }
    })
}

fn build_net(scenario: &Scenario, instance: &Instance) -> Result<Vec<SplitState>, Error> {
    let (triple, circle) = match instance {
        Instance::Circle(c) => (&c.triple, Some(c)),
        Instance::Custom(t) => (t, None),
        _ => return Ok(Vec::new()),
    };
    let grid = scenario.states.grid_size;
    scenario
        .states
        .states
        .iter()
        .map(|s| {
            let base = match circle {
                Some(c) => c.delta(grid, s.delta),
                None => BaseFunctional::diagonal_delta(s.delta),
            };
            match &s.normal {
                None => SplitState::singular(triple, base),
                Some(n) => {
                    let density = random_density(triple.n_p(), n.rank, &mut seeded(n.seed));
                    SplitState::new(triple, n.singular_weight, density, base)
                }
            }
        })
        .collect()
}

fn random_element(triple: &TruncatedTriple, rng: &mut SeededRng) -> ExtElement {
    ExtElement::new(random_hermitian(triple.dim_h(), rng), random_hermitian(triple.n_p(), rng))
}

impl Ctx<'_> {
    fn triple(&self) -> Result<&TruncatedTriple, Error> {
        self.instance
            .triple()
            .ok_or_else(|| Error::InvalidArgument("experiment needs a Toeplitz-type triple".into()))
    }

    fn symbols(&self, degree: Option<usize>) -> Result<Vec<(String, CMatrix)>, Error> {
        match &self.instance {
            Instance::Circle(c) => Ok(c.trig_symbols(degree.unwrap_or(c.n_max).min(c.n_max))),
            Instance::Custom(t) => Ok(ElementBasis::hermitian_symbols(t)),
            _ => Err(Error::InvalidArgument("symbols need a circle or custom instance".into())),
        }
    }

    fn first_singular(&self) -> Result<&SplitState, Error> {
        let i = self.scenario.first_singular().map_err(Error::InvalidArgument)?;
        Ok(&self.net[i])
    }
}

fn run_experiment(ctx: &Ctx<'_>, index: usize, e: &Experiment, seed: u64) -> Result<Produced, Error> {
    let mut rng = seeded(seed);
    let tol = ctx.tol;
    let params = &ctx.scenario.params;
    let mut out = Vec::new();
    let mut tables = Vec::new();
    match e {
        Experiment::Seminorm { samples } => match &ctx.instance {
            Instance::Podles(p) => {
                let n = p.n_plus();
                for _ in 0..*samples {
                    let x = ExtElement::new(random_hermitian(p.circle.dim(), &mut rng), random_hermitian(n, &mut rng));
                    let t = p.pair_element(&x, &random_hermitian(n, &mut rng))?;
                    out.push(commutator_formula_check(&p.triple2, &t, p.level2, tol.identity)?);
                    let (a, b) = p.check_level2_lineq(&t, tol.inequality)?;
                    out.extend([a, b]);
                }
            }
            _ => {
                let triple = ctx.triple()?;
                for &p in params {
                    for _ in 0..*samples {
                        let t = random_element(triple, &mut rng);
                        out.push(commutator_formula_check(triple, &t, p, tol.identity)?);
                        let (a, b) = check_lineq(triple, &t, p, tol.inequality)?;
                        out.extend([a, b]);
                    }
                }
            }
        },
        Experiment::TraceIdentity { exponents } => {
            let triple = ctx.triple()?;
            let list: Vec<Params> = match (&ctx.instance, params.is_empty()) {
                (Instance::Podles(p), true) => vec![p.level2],
                _ => params.clone(),
            };
            for &p in &list {
                for &s in exponents {
                    out.push(trace_identity_check(triple, p, s, tol.identity)?);
                }
            }
            for i in 0..list.len() {
                for j in (i + 1)..list.len() {
                    out.push(scaling_identity_check(triple, list[i], list[j], tol.identity)?);
                }
            }
        }
        Experiment::Distance { seminorm, degree } => {
            let (reports, table) = distances(ctx, index, *seminorm, *degree, seed)?;
            out = reports;
            tables.push(table);
        }
        Experiment::Sandwich { samples } => {
            let triple = ctx.triple()?;
            let pool: Vec<ExtElement> = (0..*samples).map(|_| random_element(triple, &mut rng)).collect();
            for (i, &p) in params.iter().enumerate() {
                for (j, &q) in params.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    for t in &pool {
                        let (a, b) = check_seminorm_sandwich(triple, t, p, q, tol.inequality)?;
                        out.extend([a, b]);
                    }
                    for k in 0..ctx.net.len() - 1 {
                        let (a, b) =
                            check_metric_sandwich(triple, &ctx.net[k], &ctx.net[k + 1], p, q, &pool, None, tol.inequality)?;
                        out.extend([a.with("state_i", k), b.with("state_i", k)]);
                    }
                }
            }
        }
        Experiment::Bridge { samples, m } => {
            let triple = ctx.triple()?;
            let basis = ElementBasis::symbols_and_compacts(triple, ctx.symbols(None)?)?;
            let sigma = ctx.first_singular()?.clone();
            let pool: Vec<ExtElement> = (0..*samples).map(|_| random_element(triple, &mut rng)).collect();
            for (i, &p) in params.iter().enumerate() {
                for (j, &q) in params.iter().enumerate() {
                    let (s, r) = comparison_factors(p, q)?;
                    if i == j || s >= r {
                        continue;
                    }
                    let bridge = build_bridge(
                        triple,
                        SeminormSpec::new(SeminormKind::LipExt(p), basis.clone()),
                        SeminormSpec::new(SeminormKind::LipExt(q), basis.clone()),
                        s,
                        r,
                        sigma.clone(),
                        *m,
                    )?;
                    for t in &pool {
                        out.push(bridge.forward_pairing(t, tol.inequality)?.2);
                        out.push(bridge.reverse_pairing(t, tol.inequality)?.2);
                    }
                }
            }
            for &p in params {
                let mut diam = Extended::Finite(0.0);
                for a in 0..ctx.net.len() {
                    for b in (a + 1)..ctx.net.len() {
                        diam = diam.max(pooled_sup(triple, &ctx.net[a], &ctx.net[b], &SeminormKind::LipExt(p), &pool)?);
                    }
                }
                let d = diam.finite().unwrap_or(0.0);
                let g = gh_upper_bound_formula(p, p, d)?;
                out.push(
                    BoundReport::deviation("explicit bound on the diagonal", "explicit distance bound", g.to_f64(), 0.0)
                        .with("alpha", p.alpha)
                        .with("beta", p.beta)
                        .with("diam", diam),
                );
            }
        }
        Experiment::Degeneration { alphas, betas, m, functionals, degree } => {
            out = degeneration(ctx, alphas, betas, *m, *functionals, *degree, seed)?;
        }
        Experiment::Sweep { pool } => {
            let triple = ctx.triple()?;
            let grid = ctx.scenario.grid.as_ref().ok_or_else(|| Error::InvalidArgument("sweep needs a grid".into()))?;
            let values = |v: &[crate::scenario::GridValue]| v.iter().filter_map(|x| x.value()).collect::<Vec<f64>>();
            let cfg = SweepConfig {
                alphas: values(&grid.alphas),
                betas: values(&grid.betas),
                tolerance: tol.inequality,
            };
            let pool: Vec<ExtElement> = (0..*pool).map(|_| random_element(triple, &mut rng)).collect();
            let table = param_space_sweep(triple, &cfg, &ctx.net, &pool, &SolverOptions::quick(seed))?;
            out = sweep_reports(&table, tol.inequality);
            tables.push(Table {
                file_name: format!("sweep-{index}.csv"),
                header: SweepTable::csv_header().iter().map(|s| s.to_string()).collect(),
                rows: table.csv_records().into_iter().map(|r| r.to_vec()).collect(),
            });
        }
        Experiment::Axioms { samples, truncations } => {
            out = axioms(ctx, *samples, truncations, seed)?;
        }
    }
    Ok((out, tables))
}

fn distances(
    ctx: &Ctx<'_>,
    index: usize,
    choice: SeminormChoice,
    degree: Option<usize>,
    seed: u64,
) -> Result<(Vec<BoundReport>, Table), Error> {
    let triple = ctx.triple()?;
    let symbols = ctx.symbols(degree)?;
    let runs: Vec<(String, Option<Params>, SeminormSpec)> = match choice {
        SeminormChoice::LipA => vec![(
            "lip_a".into(),
            None,
            SeminormSpec::new(SeminormKind::LipA, ElementBasis::from_symbols(triple, symbols.clone())?),
        )],
        SeminormChoice::LipC => vec![(
            "lip_c".into(),
            None,
            SeminormSpec::new(SeminormKind::LipC, ElementBasis::compacts(triple)?),
        )],
        SeminormChoice::LipExt => {
            let basis = ElementBasis::symbols_and_compacts(triple, symbols.clone())?;
            ctx.scenario
                .params
                .iter()
                .map(|&p| ("lip_ext".to_string(), Some(p), SeminormSpec::new(SeminormKind::LipExt(p), basis.clone())))
                .collect()
        }
    };
    let n = ctx.net.len();
    let mut jobs = Vec::new();
    for (r, run) in runs.iter().enumerate() {
        for i in 0..n {
            for j in (i + 1)..n {
                jobs.push((r, run, i, j));
            }
        }
    }
    let solved: Vec<_> = jobs
        .par_iter()
        .map(|&(r, (_, _, spec), i, j)| {
            let mut opts = SolverOptions::default().with_seed(seed.wrapping_add((r * n * n + i * n + j) as u64));
            let angles = circle_angles(ctx, i, j);
            if let (Some((a, b)), SeminormChoice::LipA, Instance::Circle(c)) = (angles, choice, &ctx.instance) {
                opts = opts.with_starts(vec![c.geodesic_start(a, b, symbols.len() / 2)]);
            }
            connes_distance(&ctx.net[i], &ctx.net[j], triple, spec, &opts)
        })
        .collect::<Result<_, Error>>()?;

    let mut reports = Vec::with_capacity(jobs.len());
    let mut rows = Vec::with_capacity(jobs.len());
    for (&(_, (label, p, _), i, j), d) in jobs.iter().zip(&solved) {
        let upper = match d.value {
            Extended::Finite(v) => Extended::Finite(v + d.gap_estimate.max(0.0)),
            other => other,
        };
        let mut rep = BoundReport::inequality("connes distance", "connes distance", d.value, upper, 0.0)
            .with("state_i", i)
            .with("state_j", j)
            .with("seminorm", label.as_str())
            .with("gap_estimate", d.gap_estimate)
            .with("witness_seminorm", d.witness_seminorm);
        let reference = circle_angles(ctx, i, j).map(|(a, b)| toeplitz_triples::instances::arc_distance(a, b));
        if let Some(p) = p {
            rep = rep.with("alpha", p.alpha).with("beta", p.beta);
        }
        if let (Some(arc), SeminormChoice::LipA) = (reference, choice) {
            rep = rep.with("arc_distance", arc);
            if let Some(v) = d.value.finite() {
                rep = rep.with("ratio_to_arc", v / arc);
            }
        }
        reports.push(rep);
        rows.push(vec![
            i.to_string(),
            j.to_string(),
            label.clone(),
            p.map(|p| fmt_f64(p.alpha)).unwrap_or_default(),
            p.map(|p| fmt_f64(p.beta)).unwrap_or_default(),
            fmt_f64(d.value.to_f64()),
            fmt_f64(d.gap_estimate),
            match (reference, choice) {
                (Some(arc), SeminormChoice::LipA) => fmt_f64(arc),
                _ => String::new(),
            },
        ]);
    }
    let table = Table {
        file_name: format!("distances-{index}.csv"),
        header: ["state_i", "state_j", "seminorm", "alpha", "beta", "distance", "gap_estimate", "arc_distance"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
    };
    Ok((reports, table))
}

/// Angles of two circle δ-states without normal parts.
fn circle_angles(ctx: &Ctx<'_>, i: usize, j: usize) -> Option<(f64, f64)> {
    if !matches!(ctx.instance, Instance::Circle(_)) {
        return None;
    }
    let states = &ctx.scenario.states;
    let pure = |k: usize| states.states[k].normal.as_ref().is_none_or(|n| n.singular_weight == 1.0);
    if !(pure(i) && pure(j)) {
        return None;
    }
    let angle = |k: usize| 2.0 * PI * states.states[k].delta as f64 / states.grid_size as f64;
    Some((angle(i), angle(j)))
}

fn degeneration(
    ctx: &Ctx<'_>,
    alphas: &[f64],
    betas: &[f64],
    m: f64,
    functionals: usize,
    degree: Option<usize>,
    seed: u64,
) -> Result<Vec<BoundReport>, Error> {
    let triple = ctx.triple()?;
    let tol = ctx.tol;
    let mut rng = seeded(seed);
    let opts = SolverOptions::quick(seed);
    let sigma = ctx.first_singular()?;
    let n_p = triple.n_p();
    let fs: Vec<CMatrix> = (0..functionals)
        .map(|k| random_density(n_p, 1 + k % n_p, &mut rng).scale_real((k + 1) as f64 / (functionals + 1) as f64))
        .collect();
    let symbols = ctx.symbols(degree)?;
    let study = collapse_study(triple, symbols.clone(), 1.0, sigma, m, alphas, &ctx.net, &fs, &opts, tol.inequality)?;
    let mut out = study.reports;

    let basis = ElementBasis::symbols_and_compacts(triple, symbols.clone())?;
    let symbol_spec = SeminormSpec::new(SeminormKind::LipA, ElementBasis::from_symbols(triple, symbols)?);
    let pool: Vec<ExtElement> = (0..10).map(|_| random_element(triple, &mut rng)).collect();
    let compact_pool: Vec<ExtElement> =
        (0..5).map(|_| ExtElement::compact_only(triple, random_hermitian(n_p, &mut rng))).collect();
    let net = &ctx.net;
    for i in 0..net.len() {
        for j in (i + 1)..net.len() {
            let (phi, psi) = (&net[i], &net[j]);
            if phi.normal_functional().max_abs_diff(&psi.normal_functional()) > 1e-10 {
                let d = dineq_divergence_check(triple, phi, psi, betas, &basis, &opts, tol.inequality)?;
                out.extend(d.reports.into_iter().map(|r| r.with("state_i", i).with("state_j", j)));
            }
            out.push(limit_case_report(triple, phi, psi, &pool, &compact_pool, &symbol_spec, &opts)?.with("state_i", i).with("state_j", j));
        }
    }
    Ok(out)
}

/// Checks the `β → 0` case against predicates evaluated on sample elements:
/// equal states agree everywhere, and states whose normal parts differ
/// disagree on some compact.
pub(crate) fn limit_case_report(
    triple: &TruncatedTriple,
    phi: &SplitState,
    psi: &SplitState,
    pool: &[ExtElement],
    compact_pool: &[ExtElement],
    symbol_spec: &SeminormSpec,
    opts: &SolverOptions,
) -> Result<BoundReport, Error> {
    let gap = |t: &ExtElement| -> Result<f64, Error> { Ok((phi.evaluate(triple, t)? - psi.evaluate(triple, t)?).abs()) };
    let mut equal = true;
    for t in pool.iter().chain(compact_pool) {
        if gap(t)? > 1e-12 {
            equal = false;
        }
    }
    let mut differ = false;
    for t in compact_pool {
        if gap(t)? > 1e-9 {
            differ = true;
        }
    }
    let expected = if equal {
        Bto0Case::Equal
    } else if differ {
        Bto0Case::NormalPartsDiffer
    } else {
        Bto0Case::SameNormalPart
    };
    let (case, dist) = bto0_limit_distance(phi, psi, |a: &BaseFunctional, b: &BaseFunctional| {
        let sa = SplitState::singular(triple, a.clone())?;
        let sb = SplitState::singular(triple, b.clone())?;
        Ok(connes_distance(&sa, &sb, triple, symbol_spec, opts)?.value)
    })?;
    Ok(BoundReport::flag("limit case classification", "limit as beta shrinks", case == expected)
        .with("case", format!("{case:?}"))
        .with("expected", format!("{expected:?}"))
        .with("limit_distance", dist))
}

fn sweep_reports(table: &SweepTable, tolerance: f64) -> Vec<BoundReport> {
    let mut out: Vec<BoundReport> = table
        .rows
        .iter()
        .map(|r| {
            let lhs = if r.beta.is_infinite() { 0.0 } else { r.ubset_gamma / r.beta };
            let mut rep = BoundReport::inequality(
                "divergence along the sweep",
                "divergence as beta shrinks",
                Extended::Finite(lhs),
                r.diam_lb,
                tolerance * (1.0 + lhs),
            )
            .with("alpha", r.alpha)
            .with("beta", r.beta)
            .with("gamma", r.ubset_gamma);
            if let Some(g) = r.gh_bound_to_neighbors {
                rep = rep.with("gh_bound_to_neighbors", g);
            }
            rep
        })
        .collect();
    out.push(
        BoundReport::flag("sweep grid", "parameter sweep", true)
            .with("rows", table.rows.len())
            .with("rejected", table.rejected.len())
            .with(
                "rejected_points",
                table.rejected.iter().map(|(a, b, why)| format!("({a}, {b}): {why}")).collect::<Vec<_>>().join("; "),
            )
            .with("gamma", table.gamma)
            .with("diam_a", table.diam_a)
            .with("diam_c", table.diam_c),
    );
    out
}

fn axioms(ctx: &Ctx<'_>, samples: usize, truncations: &[usize], seed: u64) -> Result<Vec<BoundReport>, Error> {
    let tol = ctx.tol;
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    match &ctx.instance {
        Instance::Compacts(c) => {
            let truncs: Vec<usize> = if truncations.is_empty() {
                [4, 8, 16].into_iter().filter(|&t| t < c.n()).collect()
            } else {
                truncations.to_vec()
            };
            let pairs: Vec<(CMatrix, CMatrix)> =
                (0..samples).map(|_| (c.sample_smooth(&mut rng), c.sample_smooth(&mut rng))).collect();
            let report = check_axioms(c, &pairs, &truncs, seed, tol.reality)?;
            for e in report.entries {
                out.push(
                    BoundReport::flag("axiom status", "axioms checklist", e.status != AxiomStatus::Fails)
                        .with("axiom", e.number as usize)
                        .with("title", e.title.clone())
                        .with("status", format!("{:?}", e.status))
                        .with("notes", e.notes.clone()),
                );
                out.extend(e.reports.into_iter().map(|r| r.with("axiom", e.number as usize)));
            }
        }
        Instance::Podles(p) => {
            let n = p.n_plus();
            for _ in 0..samples {
                let c = random_matrix(2 * n, 2 * n, &mut rng);
                out.push(p.block_products_check(&c, tol.identity)?);
                let x = ExtElement::new(random_hermitian(p.circle.dim(), &mut rng), random_hermitian(n, &mut rng));
                let t = p.pair_element(&x, &random_hermitian(n, &mut rng))?;
                let norm = toeplitz_triples::linalg::operator_norm(&p.commutator(&t)?);
                out.push(BoundReport::flag("diagonal pair commutator", "off-diagonal criterion", norm.is_finite()).with("norm", norm));
            }
            let truncs: Vec<usize> = if truncations.is_empty() { vec![8, 16, 32] } else { truncations.to_vec() };
            let smooth = |n: usize| {
                let d: Vec<f64> = (1..=n).chain(1..=n).map(|k| 1.0 / (k * k) as f64).collect();
                CMatrix::from_real_diag(&d)
            };
            let rough_off = |n: usize| {
                let mut c = CMatrix::zeros(2 * n, 2 * n);
                let v: Vec<f64> = (1..=n).map(|k| 1.0 / (k as f64).sqrt()).collect();
                c.set_block(0, n, &CMatrix::from_real_diag(&v));
                c
            };
            for (label, family, expect) in [
                ("smooth diagonal compact", &smooth as &dyn Fn(usize) -> CMatrix, true),
                ("rough off-diagonal compact", &rough_off as &dyn Fn(usize) -> CMatrix, false),
            ] {
                let m = off_diagonal_criterion(p.level1, &truncs, family)?;
                out.push(
                    BoundReport::flag(label, "off-diagonal criterion", m.in_ttd == expect)
                        .with("diagonal", m.diagonal)
                        .with("differentiable", m.differentiable)
                        .with("product_norms", m.product_norms.clone()),
                );
            }
        }
        _ => {
            let triple = ctx.triple()?;
            for &p in &ctx.scenario.params {
                let d = even_doubling(triple, p)?;
                for _ in 0..samples {
                    let t = random_element(triple, &mut rng);
                    out.extend(d.check(triple, &t, tol.inequality)?);
                }
            }
        }
    }
    Ok(out)
}
