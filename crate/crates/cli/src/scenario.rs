//! Scenario files: which triple to build, which parameters and states to use
//! and which experiments to run.

use std::fmt;

use serde::{Deserialize, Serialize};

use toeplitz_triples::triple::{validate_params, Params};

/// Largest operator dimension built without `--allow-large`.
pub const MAX_DIM: usize = 400;

pub const EXPERIMENTS: [(&str, &str); 8] = [
    ("seminorm", "block formula for [D, π(t)] and the linear estimates on random self-adjoint elements"),
    ("distance", "Connes distances between all pairs of net states"),
    ("sandwich", "seminorm and metric comparison between parameter pairs"),
    ("bridge", "bridge pairings between parameter pairs and the diagonal bound"),
    ("degeneration", "collapse as alpha shrinks, divergence and limit cases as beta shrinks"),
    ("sweep", "diameters and neighbour bounds over the parameter grid (CSV)"),
    ("axioms", "reality/grading checklist, off-diagonal criterion or even doubling, by instance"),
    ("trace-identity", "trace of |D|^-s and the scaling identity"),
];

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub instance: InstanceSpec,
    #[serde(default)]
    pub params: Vec<Params>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub states: StateNet,
    pub experiments: Vec<Experiment>,
    #[serde(default = "one")]
    pub tolerance_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    Circle {
        n_max: usize,
    },
    Compacts {
        t_eigen: Vec<f64>,
    },
    Podles {
        n_max: usize,
        level1: Params,
        level2: Params,
    },
    Custom {
        dirac: Vec<f64>,
        p_mask: Vec<bool>,
    },
}

/// A grid value: a number or the string `"inf"`.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum GridValue {
    Number(f64),
    Text(String),
}

impl GridValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            GridValue::Number(x) => Some(*x),
            GridValue::Text(s) if s == "inf" => Some(f64::INFINITY),
            GridValue::Text(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub alphas: Vec<GridValue>,
    pub betas: Vec<GridValue>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StateNet {
    /// Number of equally spaced angles for circle δ-states.
    #[serde(default = "default_grid")]
    pub grid_size: usize,
    #[serde(default)]
    pub states: Vec<StateSpec>,
}

impl Default for StateNet {
    fn default() -> Self {
        StateNet {
            grid_size: default_grid(),
            states: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    /// Circle: angle index `j` for `θ = 2πj/grid_size`. Other instances:
    /// basis vector of `H`.
    pub delta: usize,
    #[serde(default)]
    pub normal: Option<NormalSpec>,
}

/// A random density matrix on `PH` mixed with the δ-state.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NormalSpec {
    pub seed: u64,
    #[serde(default = "one_usize")]
    pub rank: usize,
    /// Weight of the δ-state; the density gets `1 − singular_weight`.
    pub singular_weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeminormChoice {
    LipA,
    LipC,
    LipExt,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    Seminorm {
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Distance {
        seminorm: SeminormChoice,
        /// Circle symbol degree; defaults to `n_max`.
        #[serde(default)]
        degree: Option<usize>,
    },
    Sandwich {
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Bridge {
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_penalty")]
        m: f64,
    },
    Degeneration {
        alphas: Vec<f64>,
        betas: Vec<f64>,
        #[serde(default = "default_penalty")]
        m: f64,
        /// Random functionals paired in the reverse direction.
        #[serde(default)]
        functionals: usize,
        #[serde(default)]
        degree: Option<usize>,
    },
    Sweep {
        #[serde(default = "default_samples")]
        pool: usize,
    },
    Axioms {
        #[serde(default = "default_axiom_samples")]
        samples: usize,
        #[serde(default)]
        truncations: Vec<usize>,
    },
    TraceIdentity {
        exponents: Vec<f64>,
    },
}

impl Experiment {
    pub fn label(&self) -> &'static str {
        match self {
            Experiment::Seminorm { .. } => "seminorm",
            Experiment::Distance { .. } => "distance",
            Experiment::Sandwich { .. } => "sandwich",
            Experiment::Bridge { .. } => "bridge",
            Experiment::Degeneration { .. } => "degeneration",
            Experiment::Sweep { .. } => "sweep",
            Experiment::Axioms { .. } => "axioms",
            Experiment::TraceIdentity { .. } => "trace-identity",
        }
    }
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

fn default_grid() -> usize {
    720
}

fn default_samples() -> usize {
    20
}

fn default_axiom_samples() -> usize {
    5
}

fn default_penalty() -> f64 {
    1e6
}

/// A schema violation, naming the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub field: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scenario field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for SchemaError {}

pub fn parse(text: &str) -> Result<Scenario, SchemaError> {
    serde_json::from_str(text).map_err(|e| SchemaError::new("<document>", e.to_string()))
}

impl Scenario {
    /// Largest operator dimension any experiment will assemble.
    pub fn max_dim(&self) -> usize {
        match &self.instance {
            InstanceSpec::Circle { n_max } => {
                let h = 2 * n_max + 1;
                // K = PH ⊕ PH ⊕ QH, doubled for the even doubling.
                2 * (h + n_max)
            }
            InstanceSpec::Compacts { t_eigen } => 2 * t_eigen.len(),
            InstanceSpec::Podles { n_max, .. } => {
                // Level 2 acts on QK ⊕ K with QK of dimension 2N.
                (3 * n_max + 1) + 2 * n_max
            }
            InstanceSpec::Custom { dirac, p_mask } => 2 * (dirac.len() + p_mask.iter().filter(|p| **p).count()),
        }
    }

    fn dim_h(&self) -> usize {
        match &self.instance {
            InstanceSpec::Circle { n_max } => 2 * n_max + 1,
            InstanceSpec::Compacts { t_eigen } => t_eigen.len(),
            InstanceSpec::Podles { n_max, .. } => 2 * n_max + 1,
            InstanceSpec::Custom { dirac, .. } => dirac.len(),
        }
    }

    fn n_p(&self) -> usize {
        match &self.instance {
            InstanceSpec::Circle { n_max } | InstanceSpec::Podles { n_max, .. } => *n_max,
            InstanceSpec::Compacts { t_eigen } => t_eigen.len(),
            InstanceSpec::Custom { p_mask, .. } => p_mask.iter().filter(|p| **p).count(),
        }
    }

    /// Checks everything that does not need a numerical run.
    pub fn validate(&self, allow_large: bool) -> Result<(), SchemaError> {
        if self.name.trim().is_empty() {
            return Err(SchemaError::new("name", "must be nonempty"));
        }
        if !(self.tolerance_scale > 0.0 && self.tolerance_scale.is_finite()) {
            return Err(SchemaError::new("tolerance_scale", "must be positive and finite"));
        }
        self.validate_instance()?;
        let dim = self.max_dim();
        if dim > MAX_DIM && !allow_large {
            return Err(SchemaError::new(
                "instance",
                format!("largest operator has dimension {dim} > {MAX_DIM}; pass --allow-large to run it"),
            ));
        }
        for (i, p) in self.params.iter().enumerate() {
            validate_params(*p).map_err(|e| SchemaError::new(format!("params[{i}]"), e.to_string()))?;
            if p.alpha == 0.0 {
                return Err(SchemaError::new(format!("params[{i}]"), "alpha must be positive here; use the grid for alpha = 0"));
            }
        }
        if let Some(g) = &self.grid {
            for (name, list) in [("grid.alphas", &g.alphas), ("grid.betas", &g.betas)] {
                if list.is_empty() {
                    return Err(SchemaError::new(name, "must be nonempty"));
                }
                for (i, v) in list.iter().enumerate() {
                    match v.value() {
                        Some(x) if !x.is_nan() => {}
                        _ => return Err(SchemaError::new(format!("{name}[{i}]"), "expected a number or \"inf\"")),
                    }
                }
            }
        }
        self.validate_states()?;
        if self.experiments.is_empty() {
            return Err(SchemaError::new("experiments", "must be nonempty"));
        }
        for (i, e) in self.experiments.iter().enumerate() {
            self.validate_experiment(e).map_err(|m| SchemaError::new(format!("experiments[{i}] ({})", e.label()), m))?;
        }
        Ok(())
    }

    fn validate_instance(&self) -> Result<(), SchemaError> {
        match &self.instance {
            InstanceSpec::Circle { n_max } if *n_max < 2 => Err(SchemaError::new("instance.n_max", "must be at least 2")),
            InstanceSpec::Compacts { t_eigen } => {
                if t_eigen.is_empty() {
                    return Err(SchemaError::new("instance.t_eigen", "must be nonempty"));
                }
                match t_eigen.iter().position(|t| !(t.is_finite() && *t != 0.0)) {
                    Some(i) => Err(SchemaError::new(format!("instance.t_eigen[{i}]"), "must be finite and nonzero")),
                    None => Ok(()),
                }
            }
            InstanceSpec::Podles { n_max, level1, level2 } => {
                if *n_max < 2 {
                    return Err(SchemaError::new("instance.n_max", "must be at least 2"));
                }
                for (name, p) in [("instance.level1", level1), ("instance.level2", level2)] {
                    validate_params(*p).map_err(|e| SchemaError::new(name, e.to_string()))?;
                    if p.alpha == 0.0 {
                        return Err(SchemaError::new(name, "alpha must be positive"));
                    }
                }
                Ok(())
            }
            InstanceSpec::Custom { dirac, p_mask } => {
                if dirac.is_empty() {
                    return Err(SchemaError::new("instance.dirac", "must be nonempty"));
                }
                if dirac.len() != p_mask.len() {
                    return Err(SchemaError::new(
                        "instance.p_mask",
                        format!("has {} entries but dirac has {}", p_mask.len(), dirac.len()),
                    ));
                }
                if let Some(i) = dirac.iter().position(|d| !d.is_finite()) {
                    return Err(SchemaError::new(format!("instance.dirac[{i}]"), "must be finite"));
                }
                if !p_mask.contains(&true) || !p_mask.contains(&false) {
                    return Err(SchemaError::new("instance.p_mask", "needs at least one true and one false entry"));
                }
                if let Some(i) = (0..dirac.len()).find(|&i| p_mask[i] && dirac[i] == 0.0) {
                    return Err(SchemaError::new(format!("instance.dirac[{i}]"), "zero eigenvalue inside PH"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn validate_states(&self) -> Result<(), SchemaError> {
        let net = &self.states;
        let circle = matches!(self.instance, InstanceSpec::Circle { .. });
        if circle && net.grid_size == 0 {
            return Err(SchemaError::new("states.grid_size", "must be positive"));
        }
        let limit = if circle { net.grid_size } else { self.dim_h() };
        for (i, s) in net.states.iter().enumerate() {
            if s.delta >= limit {
                return Err(SchemaError::new(format!("states.states[{i}].delta"), format!("must be below {limit}")));
            }
            if let Some(n) = &s.normal {
                if !(0.0..=1.0).contains(&n.singular_weight) {
                    return Err(SchemaError::new(format!("states.states[{i}].normal.singular_weight"), "must lie in [0, 1]"));
                }
                if n.rank == 0 || n.rank > self.n_p() {
                    return Err(SchemaError::new(
                        format!("states.states[{i}].normal.rank"),
                        format!("must lie in 1..={}", self.n_p()),
                    ));
                }
            }
        }
        Ok(())
    }

    fn validate_experiment(&self, e: &Experiment) -> Result<(), String> {
        let kind = match &self.instance {
            InstanceSpec::Circle { .. } => "circle",
            InstanceSpec::Compacts { .. } => "compacts",
            InstanceSpec::Podles { .. } => "podles",
            InstanceSpec::Custom { .. } => "custom",
        };
        let supported = match e {
            Experiment::Axioms { .. } => true,
            Experiment::Seminorm { .. } | Experiment::TraceIdentity { .. } => kind != "compacts",
            Experiment::Degeneration { .. } => kind == "circle",
            _ => kind == "circle" || kind == "custom",
        };
        if !supported {
            return Err(format!("not available for the {kind} instance"));
        }
        let states = self.states.states.len();
        let needs_params = !matches!(self.instance, InstanceSpec::Podles { .. } | InstanceSpec::Compacts { .. });
        match e {
            Experiment::Seminorm { samples } | Experiment::Sandwich { samples } | Experiment::Bridge { samples, .. }
                if *samples == 0 =>
            {
                Err("samples must be positive".into())
            }
            Experiment::Seminorm { .. } | Experiment::TraceIdentity { .. } if needs_params && self.params.is_empty() => {
                Err("needs at least one entry in params".into())
            }
            Experiment::TraceIdentity { exponents } => match exponents.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
                Some(s) => Err(format!("exponent {s} must be positive and finite")),
                None if exponents.is_empty() => Err("exponents must be nonempty".into()),
                None => Ok(()),
            },
            Experiment::Distance { seminorm, degree } => {
                if states < 2 {
                    return Err("needs at least two states".into());
                }
                if *seminorm == SeminormChoice::LipExt && self.params.is_empty() {
                    return Err("lip_ext needs at least one entry in params".into());
                }
                self.check_degree(*degree)
            }
            Experiment::Sandwich { .. } if self.params.len() < 2 || states < 2 => {
                Err("needs two params and two states".into())
            }
            Experiment::Bridge { m, .. } => {
                if self.params.len() < 2 {
                    return Err("needs at least two params".into());
                }
                if !(*m > 0.0 && m.is_finite()) {
                    return Err("m must be positive and finite".into());
                }
                self.first_singular().map(|_| ())
            }
            Experiment::Degeneration { alphas, betas, m, degree, .. } => {
                if alphas.is_empty() || alphas.iter().any(|a| !(*a > 0.0 && *a <= 1.0)) {
                    return Err("alphas must be nonempty and lie in (0, 1]".into());
                }
                if betas.is_empty() || betas.iter().any(|b| !(*b > 0.0 && *b <= 1.0)) {
                    return Err("betas must be nonempty and lie in (0, 1]".into());
                }
                if !(*m > 0.0 && m.is_finite()) {
                    return Err("m must be positive and finite".into());
                }
                if states < 2 {
                    return Err("needs at least two states".into());
                }
                self.first_singular()?;
                self.check_degree(*degree)
            }
            Experiment::Sweep { pool } => {
                if self.grid.is_none() {
                    return Err("needs a grid".into());
                }
                if *pool == 0 || states < 2 {
                    return Err("needs a positive pool and at least two states".into());
                }
                Ok(())
            }
            Experiment::Axioms { samples, truncations } => {
                if *samples == 0 {
                    return Err("samples must be positive".into());
                }
                if truncations.windows(2).any(|w| w[0] >= w[1]) {
                    return Err("truncations must be strictly increasing".into());
                }
                match &self.instance {
                    InstanceSpec::Compacts { t_eigen } => {
                        if truncations.last().is_some_and(|t| *t >= t_eigen.len()) {
                            return Err(format!("truncations must stay below {}", t_eigen.len()));
                        }
                        Ok(())
                    }
                    InstanceSpec::Circle { .. } | InstanceSpec::Custom { .. } if self.params.is_empty() => {
                        Err("even doubling needs at least one entry in params".into())
                    }
                    _ => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    fn check_degree(&self, degree: Option<usize>) -> Result<(), String> {
        match (&self.instance, degree) {
            (InstanceSpec::Circle { n_max }, Some(d)) if d == 0 || d > *n_max => {
                Err(format!("degree must lie in 1..={n_max}"))
            }
            _ => Ok(()),
        }
    }

    /// Index of the first net state without a normal part.
    pub fn first_singular(&self) -> Result<usize, String> {
        self.states
            .states
            .iter()
            .position(|s| s.normal.as_ref().is_none_or(|n| n.singular_weight == 1.0))
            .ok_or_else(|| "needs a net state without a normal part (used as the base state)".into())
    }
}
