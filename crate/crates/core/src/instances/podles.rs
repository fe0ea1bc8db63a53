//! The iterated construction over the circle. The level-1 triple for the
//! Toeplitz algebra acts on `K = H_+ ⊕ H_+ ⊕ H_−`; `Q` projects onto the first
//! two summands and commutes with `D_{α,β}`, so `((A_t, K, D_{α,β}), Q)` is
//! again of Toeplitz type. The level-2 algebra is realized on pairs `(x, y)`
//! of Toeplitz elements with equal symbol, acting diagonally on `QK`.

use serde::Serialize;

use super::circle::{build_circle, CircleInstance};
use crate::bounds::check_lineq;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, operator_norm, CMatrix};
use crate::report::BoundReport;
use crate::triple::{commutator_ext, dirac_ext, represent, require_matrix_params, ExtElement, Params, TruncatedTriple};

/// Relations of the quantum sphere, carried as metadata only:
/// `A = A*`, `BA = q²AB`, `B*B = A − A² + cI`, `BB* = q²A − q⁴I + cI`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PodlesRelations {
    pub q: Option<f64>,
    pub c: Option<f64>,
    pub relations: Vec<String>,
}

impl Default for PodlesRelations {
    fn default() -> Self {
        PodlesRelations {
            q: None,
            c: None,
            relations: ["A = A*", "BA = q^2 AB", "B*B = A - A^2 + cI", "BB* = q^2 A - q^4 I + cI"]
                .into_iter()
                .map(String::from)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PodlesInstance {
    pub circle: CircleInstance,
    pub level1: Params,
    pub level2: Params,
    /// `D_{α,β}` of the level-1 triple on `K`.
    pub dirac1: CMatrix,
    /// Columns: eigenvectors of `D_{α,β}`, those spanning `QK` first.
    pub eigvecs: CMatrix,
    /// The level-2 quadruple on `K` written in the eigenbasis `eigvecs`.
    pub triple2: TruncatedTriple,
    pub relations: PodlesRelations,
}

pub fn build_podles(n_max: usize, level1: Params, level2: Params) -> Result<PodlesInstance> {
    require_matrix_params(level1)?;
    require_matrix_params(level2)?;
    let circle = build_circle(n_max)?;
    let t1 = &circle.triple;
    let dirac1 = dirac_ext(t1, level1)?;
    let qdim = 2 * t1.n_p();
    let kdim = t1.dim_k();
    let q_idx: Vec<usize> = (0..qdim).collect();
    let rest: Vec<usize> = (qdim..kdim).collect();
    // D_{α,β} commutes with Q, so the two corners diagonalize separately.
    let upper = hermitian_eigen(&dirac1.submatrix(&q_idx, &q_idx))?;
    let lower = hermitian_eigen(&dirac1.submatrix(&rest, &rest))?;
    let eigvecs = CMatrix::block_diag(&[&upper.vectors, &lower.vectors]);
    let dirac2: Vec<f64> = upper.values.iter().chain(&lower.values).copied().collect();
    let mask: Vec<bool> = (0..kdim).map(|i| i < qdim).collect();
    let triple2 = TruncatedTriple::new(format!("iterated circle N={n_max}"), dirac2, mask).map_err(|e| {
        Error::Triple(format!("D restricted to QK must have trivial kernel: {e}"))
    })?;
    Ok(PodlesInstance {
        circle,
        level1,
        level2,
        dirac1,
        eigvecs,
        triple2,
        relations: PodlesRelations::default(),
    })
}

impl PodlesInstance {
    pub fn with_relations(mut self, q: f64, c: f64) -> Result<Self> {
        if !(q.abs() > 0.0 && q.abs() < 1.0 && c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("need 0 < |q| < 1 and c > 0, got q = {q}, c = {c}")));
        }
        self.relations.q = Some(q);
        self.relations.c = Some(c);
        Ok(self)
    }

    pub fn n_plus(&self) -> usize {
        self.circle.triple.n_p()
    }

    /// `D_{(α,β)Q} = [[0, βD_P], [βD_P, D_P/α]]` on `H_+ ⊕ H_+`.
    pub fn d_q(&self) -> CMatrix {
        let idx: Vec<usize> = (0..2 * self.n_plus()).collect();
        self.dirac1.submatrix(&idx, &idx)
    }

    fn eig_q(&self) -> CMatrix {
        let idx: Vec<usize> = (0..2 * self.n_plus()).collect();
        self.eigvecs.submatrix(&idx, &idx)
    }

    /// The level-2 element of the pair `(x, y)` where `x` is a level-1 element
    /// `T(a) + k_x` and `y = T(a) + k_y`: symbol `π₁(x)` and compact
    /// `diag(0, k_y)` on `QK`, both in the eigenbasis.
    pub fn pair_element(&self, x: &ExtElement, k_y: &CMatrix) -> Result<ExtElement> {
        let n = self.n_plus();
        if k_y.rows() != n || k_y.cols() != n {
            return Err(Error::Shape(format!("second compact must be {n}x{n}")));
        }
        let pi1 = represent(&self.circle.triple, x)?;
        let symbol = &(&self.eigvecs.adjoint() * &pi1) * &self.eigvecs;
        let mut c = CMatrix::zeros(2 * n, 2 * n);
        c.set_block(n, n, k_y);
        Ok(ExtElement::new(symbol, self.compact_to_eigen(&c)))
    }

    /// A level-2 compact given in `H_+ ⊕ H_+` coordinates.
    pub fn compact_element(&self, c: &CMatrix) -> Result<ExtElement> {
        let n = 2 * self.n_plus();
        if c.rows() != n || c.cols() != n {
            return Err(Error::Shape(format!("compact on QK must be {n}x{n}")));
        }
        Ok(ExtElement::compact_only(&self.triple2, self.compact_to_eigen(c)))
    }

    fn compact_to_eigen(&self, c: &CMatrix) -> CMatrix {
        let u = self.eig_q();
        &(&u.adjoint() * c) * &u
    }

    /// `[D_tt, π₂(t)]` at the level-2 parameters.
    pub fn commutator(&self, t: &ExtElement) -> Result<CMatrix> {
        commutator_ext(&self.triple2, t, self.level2)
    }

    pub fn check_level2_lineq(&self, t: &ExtElement, tolerance: f64) -> Result<(BoundReport, BoundReport)> {
        check_lineq(&self.triple2, t, self.level2, tolerance)
    }

    /// `D_{(α,β)Q}C` and `CD_{(α,β)Q}` from the block formulas in `u, v, x, y`.
    pub fn block_products(&self, c: &CMatrix) -> Result<(CMatrix, CMatrix)> {
        block_products(&self.circle.triple.d_p(), self.level1, c)
    }

    /// The block formulas against direct multiplication by `D_{(α,β)Q}`.
    pub fn block_products_check(&self, c: &CMatrix, tolerance: f64) -> Result<BoundReport> {
        let (left, right) = self.block_products(c)?;
        let d = self.d_q();
        let dev = left.max_abs_diff(&(&d * c)).max(right.max_abs_diff(&(c * &d)));
        Ok(BoundReport::deviation("block products", "off-diagonal criterion", dev, tolerance * (1.0 + c.max_abs()))
            .with("n_plus", self.n_plus()))
    }
}

fn block_products(d_p: &[f64], p: Params, c: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = d_p.len();
    if c.rows() != 2 * n || c.cols() != 2 * n {
        return Err(Error::Shape(format!("compact on QK must be {0}x{0}", 2 * n)));
    }
    let (u, v, x, y) = (c.block(0, 0, n, n), c.block(0, n, n, n), c.block(n, 0, n, n), c.block(n, n, n, n));
    let (b, ia) = (p.beta, 1.0 / p.alpha);
    let dl = |m: &CMatrix| m.diag_mul(d_p);
    let dr = |m: &CMatrix| m.mul_diag(d_p);
    let mut left = CMatrix::zeros(2 * n, 2 * n);
    left.set_block(0, 0, &dl(&x).scale_real(b));
    left.set_block(0, n, &dl(&y).scale_real(b));
    left.set_block(n, 0, &(&dl(&u).scale_real(b) + &dl(&x).scale_real(ia)));
    left.set_block(n, n, &(&dl(&v).scale_real(b) + &dl(&y).scale_real(ia)));
    let mut right = CMatrix::zeros(2 * n, 2 * n);
    right.set_block(0, 0, &dr(&v).scale_real(b));
    right.set_block(0, n, &(&dr(&u).scale_real(b) + &dr(&v).scale_real(ia)));
    right.set_block(n, 0, &dr(&y).scale_real(b));
    right.set_block(n, n, &(&dr(&x).scale_real(b) + &dr(&y).scale_real(ia)));
    Ok((left, right))
}

/// Outcome of the off-diagonal criterion for a family of compacts on
/// `H_+ ⊕ H_+` indexed by the truncation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub truncations: Vec<usize>,
    /// `max(‖D_Q C‖, ‖C D_Q‖)` at each truncation.
    pub product_norms: Vec<f64>,
    pub diagonal: bool,
    /// The product norms settle: the last step grows by less than the threshold.
    pub differentiable: bool,
    pub in_ttd: bool,
}

/// Relative growth at which the product norms count as unbounded.
pub const GROWTH_THRESHOLD: f64 = 0.1;

/// Classifies `family(N)` (a `2N×2N` matrix on `H_+ ⊕ H_+` for the circle
/// truncated at `N`) as an element of the diagonal algebra or not.
pub fn off_diagonal_criterion(
    level1: Params,
    truncations: &[usize],
    family: impl Fn(usize) -> CMatrix,
) -> Result<Membership> {
    require_matrix_params(level1)?;
    if truncations.len() < 2 || truncations.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("need at least two strictly increasing truncations".into()));
    }
    let mut norms = Vec::with_capacity(truncations.len());
    let mut diagonal = true;
    for &n in truncations {
        let c = family(n);
        let d_p: Vec<f64> = (1..=n).map(|k| k as f64).collect();
        let (left, right) = block_products(&d_p, level1, &c)?;
        let scale = c.max_abs();
        let off = c.block(0, n, n, n).max_abs().max(c.block(n, 0, n, n).max_abs());
        if off > 1e-14 * scale.max(f64::MIN_POSITIVE) {
            diagonal = false;
        }
        norms.push(operator_norm(&left).max(operator_norm(&right)));
    }
    let k = norms.len();
    let differentiable = norms[k - 1] <= (1.0 + GROWTH_THRESHOLD) * norms[k - 2];
    Ok(Membership {
        truncations: truncations.to_vec(),
        product_norms: norms,
        diagonal,
        differentiable,
        in_ttd: diagonal && differentiable,
    })
}
