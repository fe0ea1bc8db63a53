//! Truncated Toeplitz-type quadruples and the two-parameter extension triple.
//!
//! The Hilbert space `H` is spanned by eigenvectors of `D`, so `D` is the
//! diagonal `dirac` and the projection `P` is the 0/1 mask `p_mask`. The
//! extension acts on `K = PH ⊕ H`; inside `K` the copy of `H` is reordered
//! with the `P`-modes first, giving the three summands `H_p ⊕ H_p ⊕ H_q`
//! on which the Dirac family `D_{α,β}` has its block form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{commutator, hermitian_eigenvalues, operator_norm, CMatrix, C64, ZERO};
use crate::report::BoundReport;

/// Slack allowed on `αβ ≤ 1` before a pair is rejected.
pub const PRODUCT_TOLERANCE: f64 = 1e-12;

/// Relative threshold below which a Dirac eigenvalue counts as zero.
pub const ZERO_MODE_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    /// `f64::INFINITY` only in the pair `(0, ∞)`.
    pub beta: f64,
}

impl Params {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        Params { alpha, beta }
    }

    /// The point `(0, ∞)` of the extended parameter set.
    pub const fn one_point() -> Self {
        Params {
            alpha: 0.0,
            beta: f64::INFINITY,
        }
    }

    pub fn product(&self) -> f64 {
        self.alpha * self.beta
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ParamViolation {
    #[error("alpha and beta must be numbers, got ({alpha}, {beta})")]
    NotANumber { alpha: f64, beta: f64 },
    #[error("alpha must be finite and nonnegative, got {alpha}")]
    Alpha { alpha: f64 },
    #[error("beta must be positive, got {beta}")]
    Beta { beta: f64 },
    #[error("beta = inf is only allowed together with alpha = 0, got alpha = {alpha}")]
    InfiniteBeta { alpha: f64 },
    #[error("alpha*beta = {product} exceeds 1 by {excess:e}")]
    Product { product: f64, excess: f64 },
    #[error("this operation needs alpha > 0, got alpha = {alpha}")]
    AlphaZero { alpha: f64 },
}

/// Accepts `α ≥ 0, β > 0, αβ ≤ 1` and the pair `(0, ∞)`.
pub fn validate_params(p: Params) -> std::result::Result<(), ParamViolation> {
    let Params { alpha, beta } = p;
    if alpha.is_nan() || beta.is_nan() {
        return Err(ParamViolation::NotANumber { alpha, beta });
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(ParamViolation::Alpha { alpha });
    }
    if beta <= 0.0 {
        return Err(ParamViolation::Beta { beta });
    }
    if beta.is_infinite() {
        return if alpha == 0.0 {
            Ok(())
        } else {
            Err(ParamViolation::InfiniteBeta { alpha })
        };
    }
    let product = alpha * beta;
    if product > 1.0 + PRODUCT_TOLERANCE {
        return Err(ParamViolation::Product {
            product,
            excess: product - 1.0,
        });
    }
    Ok(())
}

/// Valid parameters with `α > 0` (hence `β` finite), as needed for a matrix `D_{α,β}`.
pub fn require_matrix_params(p: Params) -> Result<()> {
    validate_params(p)?;
    if p.alpha == 0.0 {
        return Err(ParamViolation::AlphaZero { alpha: p.alpha }.into());
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedTriple {
    label: String,
    dirac: Vec<f64>,
    p_mask: Vec<bool>,
    p_index: Vec<usize>,
    q_index: Vec<usize>,
}

impl TruncatedTriple {
    /// A quadruple with a proper projection: `P` and `I − P` both nonzero.
    pub fn new(label: impl Into<String>, dirac: Vec<f64>, p_mask: Vec<bool>) -> Result<Self> {
        let t = Self::build(label.into(), dirac, p_mask)?;
        if t.q_index.is_empty() {
            return Err(Error::Triple(
                "p_mask must contain at least one false entry (use with_full_projection for P = I)".into(),
            ));
        }
        Ok(t)
    }

    /// `P = I`, as for the unitarized compacts.
    pub fn with_full_projection(label: impl Into<String>, dirac: Vec<f64>) -> Result<Self> {
        let n = dirac.len();
        Self::build(label.into(), dirac, vec![true; n])
    }

    fn build(label: String, dirac: Vec<f64>, p_mask: Vec<bool>) -> Result<Self> {
        if dirac.is_empty() {
            return Err(Error::Triple("dirac must be nonempty".into()));
        }
        if dirac.len() != p_mask.len() {
            return Err(Error::Triple(format!(
                "dirac has {} entries but p_mask has {}",
                dirac.len(),
                p_mask.len()
            )));
        }
        if let Some(i) = dirac.iter().position(|d| !d.is_finite()) {
            return Err(Error::Triple(format!("dirac[{i}] = {} is not finite", dirac[i])));
        }
        let scale = dirac.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        let p_index: Vec<usize> = (0..dirac.len()).filter(|&i| p_mask[i]).collect();
        let q_index: Vec<usize> = (0..dirac.len()).filter(|&i| !p_mask[i]).collect();
        if p_index.is_empty() {
            return Err(Error::Triple("p_mask must contain at least one true entry".into()));
        }
        if let Some(&i) = p_index
            .iter()
            .find(|&&i| dirac[i].abs() <= ZERO_MODE_THRESHOLD * scale || dirac[i] == 0.0)
        {
            return Err(Error::Triple(format!(
                "D restricted to PH must have trivial kernel, but dirac[{i}] = {} lies in PH",
                dirac[i]
            )));
        }
        Ok(TruncatedTriple {
            label,
            dirac,
            p_mask,
            p_index,
            q_index,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim_h(&self) -> usize {
        self.dirac.len()
    }

    pub fn n_p(&self) -> usize {
        self.p_index.len()
    }

    pub fn n_q(&self) -> usize {
        self.q_index.len()
    }

    /// Dimension of `K = PH ⊕ H`.
    pub fn dim_k(&self) -> usize {
        self.n_p() + self.dim_h()
    }

    pub fn dirac(&self) -> &[f64] {
        &self.dirac
    }

    pub fn p_mask(&self) -> &[bool] {
        &self.p_mask
    }

    pub fn p_indices(&self) -> &[usize] {
        &self.p_index
    }

    pub fn q_indices(&self) -> &[usize] {
        &self.q_index
    }

    pub fn d_p(&self) -> Vec<f64> {
        self.p_index.iter().map(|&i| self.dirac[i]).collect()
    }

    pub fn d_q(&self) -> Vec<f64> {
        self.q_index.iter().map(|&i| self.dirac[i]).collect()
    }

    /// Basis of `H` with the `P`-modes first.
    pub fn pq_order(&self) -> Vec<usize> {
        self.p_index.iter().chain(&self.q_index).copied().collect()
    }

    pub fn dirac_matrix(&self) -> CMatrix {
        CMatrix::from_real_diag(&self.dirac)
    }

    pub fn projection(&self) -> CMatrix {
        let d: Vec<f64> = self.p_mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        CMatrix::from_real_diag(&d)
    }

    fn check_symbol(&self, a: &CMatrix) -> Result<()> {
        if a.rows() != self.dim_h() || a.cols() != self.dim_h() {
            return Err(Error::Shape(format!(
                "symbol must be {n}x{n}, got {}x{}",
                a.rows(),
                a.cols(),
                n = self.dim_h()
            )));
        }
        Ok(())
    }

    fn check_compact(&self, k: &CMatrix) -> Result<()> {
        if k.rows() != self.n_p() || k.cols() != self.n_p() {
            return Err(Error::Shape(format!(
                "compact block must be {n}x{n}, got {}x{}",
                k.rows(),
                k.cols(),
                n = self.n_p()
            )));
        }
        Ok(())
    }

    pub fn check_element(&self, t: &ExtElement) -> Result<()> {
        self.check_symbol(&t.symbol)?;
        self.check_compact(&t.compact)
    }

    /// `P a|PH`.
    pub fn compress(&self, a: &CMatrix) -> CMatrix {
        a.submatrix(&self.p_index, &self.p_index)
    }
}

/// An element `T(a) + k` of the extension algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtElement {
    /// The symbol `a`, acting on truncated `H`.
    pub symbol: CMatrix,
    /// The compact part `k`, acting on `PH`.
    pub compact: CMatrix,
}

impl ExtElement {
    pub fn new(symbol: CMatrix, compact: CMatrix) -> Self {
        ExtElement { symbol, compact }
    }

    pub fn unit(triple: &TruncatedTriple) -> Self {
        ExtElement::new(CMatrix::identity(triple.dim_h()), CMatrix::zeros(triple.n_p(), triple.n_p()))
    }

    pub fn zero(triple: &TruncatedTriple) -> Self {
        ExtElement::new(
            CMatrix::zeros(triple.dim_h(), triple.dim_h()),
            CMatrix::zeros(triple.n_p(), triple.n_p()),
        )
    }

    pub fn compact_only(triple: &TruncatedTriple, k: CMatrix) -> Self {
        ExtElement::new(CMatrix::zeros(triple.dim_h(), triple.dim_h()), k)
    }

    /// Self-adjoint in the extension algebra: Hermitian symbol and compact part.
    pub fn is_self_adjoint(&self) -> bool {
        self.symbol.is_hermitian() && self.compact.is_hermitian()
    }

    pub fn add(&self, other: &ExtElement) -> ExtElement {
        ExtElement::new(&self.symbol + &other.symbol, &self.compact + &other.compact)
    }

    pub fn sub(&self, other: &ExtElement) -> ExtElement {
        ExtElement::new(&self.symbol - &other.symbol, &self.compact - &other.compact)
    }

    pub fn scale(&self, c: C64) -> ExtElement {
        ExtElement::new(self.symbol.scale(c), self.compact.scale(c))
    }

    pub fn scale_real(&self, c: f64) -> ExtElement {
        ExtElement::new(self.symbol.scale_real(c), self.compact.scale_real(c))
    }

    pub fn adjoint(&self) -> ExtElement {
        ExtElement::new(self.symbol.adjoint(), self.compact.adjoint())
    }

    /// `Σ x_j g_j`.
    pub fn combination(gens: &[ExtElement], coords: &[f64]) -> ExtElement {
        assert_eq!(gens.len(), coords.len());
        assert!(!gens.is_empty());
        let mut symbol = CMatrix::zeros(gens[0].symbol.rows(), gens[0].symbol.cols());
        let mut compact = CMatrix::zeros(gens[0].compact.rows(), gens[0].compact.cols());
        for (g, &x) in gens.iter().zip(coords) {
            if x != 0.0 {
                symbol = &symbol + &g.symbol.scale_real(x);
                compact = &compact + &g.compact.scale_real(x);
            }
        }
        ExtElement::new(symbol, compact)
    }
}

/// `T(a)`: the element with symbol `a` and no compact part.
pub fn t_map(triple: &TruncatedTriple, a: &CMatrix) -> Result<ExtElement> {
    triple.check_symbol(a)?;
    Ok(ExtElement::new(a.clone(), CMatrix::zeros(triple.n_p(), triple.n_p())))
}

/// `Θ(t) = t − T(ρ(t))`, the compact part.
pub fn theta(t: &ExtElement) -> CMatrix {
    t.compact.clone()
}

/// `ρ(t)`, the symbol.
pub fn rho(t: &ExtElement) -> CMatrix {
    t.symbol.clone()
}

/// `π(t) = diag(P a|PH + k, a)` on `K`, with `a` written in the p-then-q basis.
pub fn represent(triple: &TruncatedTriple, t: &ExtElement) -> Result<CMatrix> {
    triple.check_element(t)?;
    let upper = &triple.compress(&t.symbol) + &t.compact;
    let order = triple.pq_order();
    let lower = t.symbol.submatrix(&order, &order);
    Ok(CMatrix::block_diag(&[&upper, &lower]))
}

/// `D_{α,β} = [[0, βD_p, 0], [βD_p, D_p/α, 0], [0, 0, D_q/α]]`.
pub fn dirac_ext(triple: &TruncatedTriple, p: Params) -> Result<CMatrix> {
    require_matrix_params(p)?;
    Ok(dirac_blocks(triple, p.beta, 1.0 / p.alpha))
}

/// `D_{α,0}`: the `β → 0` endpoint, where only the `1/α` blocks survive.
pub(crate) fn dirac_limit_beta_zero(triple: &TruncatedTriple, alpha: f64) -> Result<CMatrix> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(ParamViolation::AlphaZero { alpha }.into());
    }
    Ok(dirac_blocks(triple, 0.0, 1.0 / alpha))
}

fn dirac_blocks(triple: &TruncatedTriple, beta: f64, inv_alpha: f64) -> CMatrix {
    let np = triple.n_p();
    let dp = triple.d_p();
    let dq = triple.d_q();
    let mut d = CMatrix::zeros(triple.dim_k(), triple.dim_k());
    for (i, &lam) in dp.iter().enumerate() {
        d[(i, np + i)] = C64::new(beta * lam, 0.0);
        d[(np + i, i)] = C64::new(beta * lam, 0.0);
        d[(np + i, np + i)] = C64::new(lam * inv_alpha, 0.0);
    }
    for (j, &lam) in dq.iter().enumerate() {
        d[(2 * np + j, 2 * np + j)] = C64::new(lam * inv_alpha, 0.0);
    }
    d
}

/// `[D_{α,β}, π(t)]` assembled block by block:
///
/// ```text
/// [ 0                       β([D_p,T(a)] − k D_p)   β D_p a_pq ]
/// [ β([D_p,T(a)] + D_p k)                                      ]
/// [ −β a_qp D_p                  (1/α) [D, a]                  ]
/// ```
///
/// where the lower-right 2×2 block is `(1/α)[D, a]` in the p-then-q basis.
pub fn commutator_ext(triple: &TruncatedTriple, t: &ExtElement, p: Params) -> Result<CMatrix> {
    require_matrix_params(p)?;
    triple.check_element(t)?;
    Ok(commutator_blocks(triple, t, p.beta, 1.0 / p.alpha))
}

pub(crate) fn commutator_blocks(triple: &TruncatedTriple, t: &ExtElement, beta: f64, inv_alpha: f64) -> CMatrix {
    let np = triple.n_p();
    let nh = triple.dim_h();
    let dp = triple.d_p();
    let order = triple.pq_order();
    let dirac_pq: Vec<f64> = order.iter().map(|&i| triple.dirac[i]).collect();
    let a = t.symbol.submatrix(&order, &order);
    let k = &t.compact;
    let mut c = CMatrix::zeros(np + nh, np + nh);
    // β-blocks.
    for i in 0..np {
        for j in 0..np {
            let dpt = a[(i, j)] * (dp[i] - dp[j]);
            c[(i, np + j)] = (dpt - k[(i, j)] * dp[j]) * beta;
            c[(np + i, j)] = (dpt + k[(i, j)] * dp[i]) * beta;
        }
        for j in np..nh {
            c[(i, np + j)] = a[(i, j)] * (dp[i] * beta);
            c[(np + j, i)] = -a[(j, i)] * (dp[i] * beta);
        }
    }
    // (1/α)[D, a] on the lower copy of H.
    for i in 0..nh {
        for j in 0..nh {
            let z = a[(i, j)] * ((dirac_pq[i] - dirac_pq[j]) * inv_alpha);
            if z != ZERO {
                c[(np + i, np + j)] += z;
            }
        }
    }
    c
}

/// `L_C(k) = ‖D_p k‖`.
pub fn lip_c(triple: &TruncatedTriple, k: &CMatrix) -> Result<f64> {
    triple.check_compact(k)?;
    Ok(operator_norm(&k.diag_mul(&triple.d_p())))
}

/// `[D, a]` for diagonal `D`.
pub fn dirac_commutator(triple: &TruncatedTriple, a: &CMatrix) -> Result<CMatrix> {
    triple.check_symbol(a)?;
    let d = &triple.dirac;
    Ok(CMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * (d[i] - d[j])))
}

/// `L_A(a) = ‖[D, a]‖`.
pub fn lip_a(triple: &TruncatedTriple, a: &CMatrix) -> Result<f64> {
    Ok(operator_norm(&dirac_commutator(triple, a)?))
}

/// `L_{α,β}(t) = ‖[D_{α,β}, π(t)]‖`.
pub fn lip_ext(triple: &TruncatedTriple, t: &ExtElement, p: Params) -> Result<f64> {
    Ok(operator_norm(&commutator_ext(triple, t, p)?))
}

/// `L_{α,0}(t) = (1/α) L_A(a)`: the seminorm at the `β = 0` endpoint.
pub fn lip_limit_beta_zero(triple: &TruncatedTriple, t: &ExtElement, alpha: f64) -> Result<f64> {
    let d = dirac_limit_beta_zero(triple, alpha)?;
    let pi = represent(triple, t)?;
    Ok(operator_norm(&commutator(&d, &pi)))
}

/// `M(α,β) = [[0, β], [β, 1/α]]` and its eigenvalues `(1 ± √(1+4α²β²))/(2α)`,
/// larger first. Accepts `β = 0`.
pub fn m_matrix(p: Params) -> Result<([[f64; 2]; 2], [f64; 2])> {
    if !(p.alpha.is_finite() && p.alpha > 0.0) {
        return Err(ParamViolation::AlphaZero { alpha: p.alpha }.into());
    }
    if !(p.beta.is_finite() && p.beta >= 0.0) {
        return Err(ParamViolation::Beta { beta: p.beta }.into());
    }
    let root = (1.0 + 4.0 * p.alpha * p.alpha * p.beta * p.beta).sqrt();
    let m = [[0.0, p.beta], [p.beta, 1.0 / p.alpha]];
    Ok((m, [(1.0 + root) / (2.0 * p.alpha), (1.0 - root) / (2.0 * p.alpha)]))
}

/// The block assembly of `[D_{α,β}, π(t)]` against `D π(t) − π(t) D`.
pub fn commutator_formula_check(triple: &TruncatedTriple, t: &ExtElement, p: Params, tolerance: f64) -> Result<BoundReport> {
    let blocks = commutator_ext(triple, t, p)?;
    let direct = commutator(&dirac_ext(triple, p)?, &represent(triple, t)?);
    Ok(
        BoundReport::deviation("commutator block formula", "commutator blocks", blocks.max_abs_diff(&direct), tolerance)
            .with("alpha", p.alpha)
            .with("beta", p.beta)
            .with("scale", direct.max_abs()),
    )
}

/// Compares `Tr|D_{α,β}|^{-s}` (eigensolver) with
/// `Tr|M|^{-s} Tr|D_p|^{-s} + α^s Tr|D_q|^{-s}` (scalar sums).
///
/// Zero modes of `D_q` are dropped from both sides and counted in the context.
pub fn trace_identity_check(triple: &TruncatedTriple, p: Params, s: f64, tolerance: f64) -> Result<BoundReport> {
    require_matrix_params(p)?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("exponent must be positive, got {s}")));
    }
    let d = dirac_ext(triple, p)?;
    let eig = hermitian_eigenvalues(&d)?;
    let scale = eig.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let threshold = ZERO_MODE_THRESHOLD * scale;
    let lhs: f64 = eig
        .iter()
        .filter(|v| v.abs() > threshold)
        .map(|v| v.abs().powf(-s))
        .sum();
    let lhs_zero = eig.iter().filter(|v| v.abs() <= threshold).count();

    let (_, [m1, m2]) = m_matrix(p)?;
    let tr_m = m1.abs().powf(-s) + m2.abs().powf(-s);
    let tr_p: f64 = triple.d_p().iter().map(|v| v.abs().powf(-s)).sum();
    let dq = triple.d_q();
    let dq_scale = dq.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let q_zero = dq.iter().filter(|v| v.abs() <= ZERO_MODE_THRESHOLD * dq_scale).count();
    let tr_q: f64 = dq
        .iter()
        .filter(|v| v.abs() > ZERO_MODE_THRESHOLD * dq_scale)
        .map(|v| v.abs().powf(-s))
        .sum();
    let rhs = tr_m * tr_p + p.alpha.powf(s) * tr_q;
    let rel = tolerance * (1.0 + rhs.abs());
    Ok(BoundReport::identity("trace identity", "trace identity", lhs, rhs, rel)
        .with("alpha", p.alpha)
        .with("beta", p.beta)
        .with("s", s)
        .with("triple", triple.label())
        .with("skipped_q_zero_modes", q_zero)
        .with("zero_eigenvalues_of_dirac", lhs_zero)
        .with("zero_mode_counts_agree", q_zero == lhs_zero))
}

/// The diagonal `S` with `D_{α,β} = S D_{γ,δ} S`: `√(α/γ)(β/δ)` on the first
/// `H_p`, `√(γ/α)` elsewhere.
pub fn scaling_matrix(triple: &TruncatedTriple, p: Params, q: Params) -> Result<Vec<f64>> {
    require_matrix_params(p)?;
    require_matrix_params(q)?;
    let first = (p.alpha / q.alpha).sqrt() * (p.beta / q.beta);
    let rest = (q.alpha / p.alpha).sqrt();
    let np = triple.n_p();
    Ok((0..triple.dim_k()).map(|i| if i < np { first } else { rest }).collect())
}

/// Entrywise comparison of `D_{α,β}` with `S D_{γ,δ} S`.
pub fn scaling_identity_check(triple: &TruncatedTriple, p: Params, q: Params, tolerance: f64) -> Result<BoundReport> {
    let s = scaling_matrix(triple, p, q)?;
    let dp = dirac_ext(triple, p)?;
    let dq = dirac_ext(triple, q)?;
    let conj = dq.diag_mul(&s).mul_diag(&s);
    let dev = dp.max_abs_diff(&conj);
    Ok(BoundReport::deviation("scaling identity", "scaling identity", dev, tolerance * (1.0 + dp.max_abs()))
        .with("alpha", p.alpha)
        .with("beta", p.beta)
        .with("gamma", q.alpha)
        .with("delta", q.beta)
        .with("s_first", s[0])
        .with("s_rest", s[s.len() - 1]))
}

/// `(min, max)` of `{γ/α, αβ²/(γδ²)}` for `p = (α,β)`, `q = (γ,δ)`:
/// `min·L_q ≤ L_p ≤ max·L_q`.
pub fn comparison_factors(p: Params, q: Params) -> Result<(f64, f64)> {
    require_matrix_params(p)?;
    require_matrix_params(q)?;
    let a = q.alpha / p.alpha;
    let b = p.alpha * p.beta * p.beta / (q.alpha * q.beta * q.beta);
    Ok((a.min(b), a.max(b)))
}
