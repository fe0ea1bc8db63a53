//! States split into a normal part on the compacts and a singular part
//! read off the symbol, and the Connes distance between them.

mod barrier;
pub mod seminorm;
pub mod solver;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix, C64};
use crate::triple::{ExtElement, TruncatedTriple};

pub use seminorm::{ElementBasis, Pencil, SeminormKind, SeminormSpec};
pub use solver::{
    connes_distance, diam_c_upper, diamc_inequality_check, diameter_estimate, maximize_linear, pooled_distance,
    DiameterEstimate,
    DistanceResult, SolverMethod, SolverOptions,
};

const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
const WEIGHT_TOL: f64 = 1e-12;

/// A probability functional on symbols.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseFunctional {
    /// Point masses at the grid angles `2πj/grid_size` of a circle instance;
    /// `μ(a) = Σ w_j f(θ_j)` where `f` is read from the Fourier band of `a`.
    CircleGrid {
        n_max: usize,
        grid_size: usize,
        weights: Vec<(usize, f64)>,
    },
    /// `μ(a) = Σ w_i a_ii`: a mixture of vector states on basis vectors of `H`.
    Diagonal { weights: Vec<(usize, f64)> },
}

impl BaseFunctional {
    pub fn circle_delta(n_max: usize, grid_size: usize, index: usize) -> Self {
        BaseFunctional::CircleGrid {
            n_max,
            grid_size,
            weights: vec![(index, 1.0)],
        }
    }

    pub fn diagonal_delta(index: usize) -> Self {
        BaseFunctional::Diagonal {
            weights: vec![(index, 1.0)],
        }
    }

    pub fn weights(&self) -> &[(usize, f64)] {
        match self {
            BaseFunctional::CircleGrid { weights, .. } | BaseFunctional::Diagonal { weights } => weights,
        }
    }

    /// Sorted, merged, zero-free weights: equal functionals have equal canonical forms.
    pub fn canonical(&self) -> BaseFunctional {
        let mut w: Vec<(usize, f64)> = self.weights().to_vec();
        w.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (i, x) in w {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += x,
                _ => merged.push((i, x)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        match self {
            BaseFunctional::CircleGrid { n_max, grid_size, .. } => BaseFunctional::CircleGrid {
                n_max: *n_max,
                grid_size: *grid_size,
                weights: merged,
            },
            BaseFunctional::Diagonal { .. } => BaseFunctional::Diagonal { weights: merged },
        }
    }

    pub fn validate(&self, triple: &TruncatedTriple) -> Result<()> {
        let w = self.weights();
        if w.is_empty() {
            return Err(Error::State("base functional has no weights".into()));
        }
        if let Some(&(i, x)) = w.iter().find(|e| !(e.1 >= 0.0) || !e.1.is_finite()) {
            return Err(Error::State(format!("base weight at {i} is {x}, must be nonnegative")));
        }
        let total: f64 = w.iter().map(|e| e.1).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::State(format!("base weights sum to {total}, not 1")));
        }
        match self {
            BaseFunctional::CircleGrid {
                n_max,
                grid_size,
                weights,
            } => {
                if triple.dim_h() != 2 * n_max + 1 {
                    return Err(Error::State(format!(
                        "circle grid functional for N = {n_max} used on a triple of dimension {}",
                        triple.dim_h()
                    )));
                }
                if *grid_size <= 2 * n_max {
                    return Err(Error::State(format!(
                        "grid of {grid_size} points aliases Fourier modes up to {n_max}; need more than {}",
                        2 * n_max
                    )));
                }
                if let Some(&(i, _)) = weights.iter().find(|e| e.0 >= *grid_size) {
                    return Err(Error::State(format!("grid index {i} outside a grid of {grid_size}")));
                }
            }
            BaseFunctional::Diagonal { weights } => {
                if let Some(&(i, _)) = weights.iter().find(|e| e.0 >= triple.dim_h()) {
                    return Err(Error::State(format!("basis index {i} outside H")));
                }
            }
        }
        Ok(())
    }

    /// `μ(a)`; the real part for Hermitian `a`.
    pub fn evaluate(&self, a: &CMatrix) -> f64 {
        match self {
            BaseFunctional::CircleGrid {
                n_max,
                grid_size,
                weights,
            } => {
                let n = *n_max as i64;
                let centre = *n_max;
                weights
                    .iter()
                    .map(|&(j, w)| {
                        let theta = 2.0 * PI * j as f64 / *grid_size as f64;
                        let f: C64 = (-n..=n)
                            .map(|m| a[((centre as i64 + m) as usize, centre)] * C64::from_polar(1.0, m as f64 * theta))
                            .sum();
                        w * f.re
                    })
                    .sum()
            }
            BaseFunctional::Diagonal { weights } => weights.iter().map(|&(i, w)| w * a[(i, i)].re).sum(),
        }
    }
}

/// `φ = (1 − λ)·Tr(ν ·) + λ·μ∘ρ`, with `ν` a density matrix on `PH`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitState {
    /// `λ`, the mass of the singular part.
    pub weight: f64,
    /// Trace-one positive matrix on `PH`.
    pub normal: CMatrix,
    pub base: BaseFunctional,
}

impl SplitState {
    pub fn new(triple: &TruncatedTriple, weight: f64, normal: CMatrix, base: BaseFunctional) -> Result<Self> {
        let s = SplitState { weight, normal, base };
        s.validate(triple)?;
        Ok(s)
    }

    /// `λ = 1`: a state that vanishes on every compact.
    pub fn singular(triple: &TruncatedTriple, base: BaseFunctional) -> Result<Self> {
        let mut normal = CMatrix::zeros(triple.n_p(), triple.n_p());
        normal[(0, 0)] = C64::new(1.0, 0.0);
        Self::new(triple, 1.0, normal, base)
    }

    /// `λ = 0` with normal part `ν`.
    pub fn normal_state(triple: &TruncatedTriple, normal: CMatrix, base: BaseFunctional) -> Result<Self> {
        Self::new(triple, 0.0, normal, base)
    }

    pub fn validate(&self, triple: &TruncatedTriple) -> Result<()> {
        if !(0.0..=1.0).contains(&self.weight) {
            return Err(Error::State(format!("weight {} outside [0, 1]", self.weight)));
        }
        let n = triple.n_p();
        if self.normal.rows() != n || self.normal.cols() != n {
            return Err(Error::State(format!("normal part must be {n}x{n}")));
        }
        if !self.normal.is_hermitian() {
            return Err(Error::State("normal part is not Hermitian".into()));
        }
        let tr = self.normal.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::State(format!("normal part has trace {tr}, not 1")));
        }
        let min = hermitian_eigenvalues(&self.normal.hermitian_part())?[0];
        if min < -PSD_TOL {
            return Err(Error::State(format!("normal part has eigenvalue {min:e} < 0")));
        }
        self.base.validate(triple)
    }

    /// `‖f‖ = 1 − λ`, the norm of the normal part as a functional.
    pub fn normal_mass(&self) -> f64 {
        1.0 - self.weight
    }

    /// `f = (1 − λ)ν` as a matrix.
    pub fn normal_functional(&self) -> CMatrix {
        self.normal.scale_real(self.normal_mass())
    }

    /// `f(k) = (1 − λ) Re Tr(ν k)`.
    pub fn normal_part(&self, k: &CMatrix) -> f64 {
        self.normal_mass() * trace_product(&self.normal, k)
    }

    /// `φ(t) = (1 − λ) Re Tr(ν (P a|PH + k)) + λ μ(a)`.
    pub fn evaluate(&self, triple: &TruncatedTriple, t: &ExtElement) -> Result<f64> {
        triple.check_element(t)?;
        if !t.is_self_adjoint() {
            return Err(Error::InvalidArgument("states are evaluated on self-adjoint elements only".into()));
        }
        let upper = &triple.compress(&t.symbol) + &t.compact;
        Ok(self.normal_mass() * trace_product(&self.normal, &upper) + self.weight * self.base.evaluate(&t.symbol))
    }

    /// `(φ − ψ)(g_j)` for each generator.
    pub fn difference_objective(
        &self,
        other: &SplitState,
        triple: &TruncatedTriple,
        basis: &ElementBasis,
    ) -> Result<Vec<f64>> {
        basis
            .gens
            .iter()
            .map(|g| Ok(self.evaluate(triple, g)? - other.evaluate(triple, g)?))
            .collect()
    }
}

/// `Re Tr(a b)`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    s
}
