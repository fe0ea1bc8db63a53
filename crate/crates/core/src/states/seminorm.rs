//! Seminorms as operator norms of linear matrix pencils.
//!
//! Every seminorm used here has the form `x ↦ max_b ‖Σ_j x_j G_{b,j}‖` for
//! real coordinates `x` of a self-adjoint element: a commutator norm is a
//! single block, a maximum of seminorms is a block-diagonal stack, and a
//! term `M|σ(a)|` is a 1×1 block.

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, top_singular_triple, CMatrix, C64, ZERO};
use crate::triple::{
    commutator_blocks, commutator_ext, dirac_commutator, ExtElement, Params,
    TruncatedTriple,
};

/// Sparse matrix as a list of nonzero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(u32, u32, C64)>,
}

impl SparseMat {
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m[(i, j)];
                if z != ZERO {
                    entries.push((i as u32, j as u32, z));
                }
            }
        }
        SparseMat {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for &(i, j, z) in &self.entries {
            m[(i as usize, j as usize)] += z;
        }
        m
    }

    fn scaled(&self, s: f64) -> SparseMat {
        SparseMat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&(i, j, z)| (i, j, z * s)).collect(),
        }
    }

    /// `Re(u† G v)`.
    fn bilinear(&self, u: &[C64], v: &[C64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, z)| (u[i as usize].conj() * z * v[j as usize]).re)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PencilBlock {
    pub rows: usize,
    pub cols: usize,
    /// One generator per coordinate.
    pub gens: Vec<SparseMat>,
}

impl PencilBlock {
    pub fn assemble(&self, x: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for (g, &xj) in self.gens.iter().zip(x) {
            if xj == 0.0 {
                continue;
            }
            for &(i, j, z) in &g.entries {
                m[(i as usize, j as usize)] += z * xj;
            }
        }
        m
    }
}

/// `x ↦ max_b ‖Σ_j x_j G_{b,j}‖` on `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    dim: usize,
    blocks: Vec<PencilBlock>,
}

impl Pencil {
    pub fn new(dim: usize, blocks: Vec<PencilBlock>) -> Result<Self> {
        for b in &blocks {
            if b.gens.len() != dim {
                return Err(Error::Shape(format!(
                    "pencil block has {} generators for {dim} coordinates",
                    b.gens.len()
                )));
            }
            if b.gens.iter().any(|g| g.rows != b.rows || g.cols != b.cols) {
                return Err(Error::Shape("generator shape differs from its block".into()));
            }
        }
        if blocks.is_empty() {
            return Err(Error::Shape("pencil needs at least one block".into()));
        }
        Ok(Pencil { dim, blocks })
    }

    /// One block from dense generators.
    pub fn from_dense(gens: &[CMatrix]) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| Error::Shape("pencil needs at least one generator".into()))?;
        let block = PencilBlock {
            rows: first.rows(),
            cols: first.cols(),
            gens: gens.iter().map(SparseMat::from_dense).collect(),
        };
        Pencil::new(gens.len(), vec![block])
    }

    /// The 1×1 block `x ↦ |Σ_j w_j x_j|`.
    pub fn functional(weights: &[f64]) -> Self {
        let gens = weights
            .iter()
            .map(|&w| SparseMat {
                rows: 1,
                cols: 1,
                entries: if w == 0.0 { vec![] } else { vec![(0, 0, C64::new(w, 0.0))] },
            })
            .collect();
        Pencil {
            dim: weights.len(),
            blocks: vec![PencilBlock { rows: 1, cols: 1, gens }],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[PencilBlock] {
        &self.blocks
    }

    pub fn scaled(&self, factor: f64) -> Pencil {
        Pencil {
            dim: self.dim,
            blocks: self
                .blocks
                .iter()
                .map(|b| PencilBlock {
                    rows: b.rows,
                    cols: b.cols,
                    gens: b.gens.iter().map(|g| g.scaled(factor)).collect(),
                })
                .collect(),
        }
    }

    /// Each block rescaled so that its largest generator has unit Frobenius
    /// norm. The kernel is unchanged; blocks of very different size no longer
    /// swamp each other in the Gram matrix.
    pub(crate) fn block_normalized(&self) -> Pencil {
        Pencil {
            dim: self.dim,
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    let scale = b
                        .gens
                        .iter()
                        .map(|g| g.entries.iter().map(|e| e.2.norm_sqr()).sum::<f64>())
                        .fold(0.0, f64::max)
                        .sqrt();
                    let f = if scale > 0.0 { 1.0 / scale } else { 1.0 };
                    PencilBlock {
                        rows: b.rows,
                        cols: b.cols,
                        gens: b.gens.iter().map(|g| g.scaled(f)).collect(),
                    }
                })
                .collect(),
        }
    }

    /// Maximum of several seminorms on the same coordinates.
    pub fn max_of(parts: &[Pencil]) -> Result<Pencil> {
        let dim = parts
            .first()
            .ok_or_else(|| Error::Shape("empty maximum".into()))?
            .dim;
        if parts.iter().any(|p| p.dim != dim) {
            return Err(Error::Shape("seminorms act on different coordinate spaces".into()));
        }
        Pencil::new(dim, parts.iter().flat_map(|p| p.blocks.clone()).collect())
    }

    /// Precomposition with a linear map `new coordinates → old coordinates`:
    /// old coordinate `j` equals `Σ coef · z_k` over `map[j] = [(k, coef), …]`.
    pub fn pullback(&self, new_dim: usize, map: &[Vec<(usize, f64)>]) -> Result<Pencil> {
        if map.len() != self.dim {
            return Err(Error::Shape(format!(
                "pullback map covers {} of {} coordinates",
                map.len(),
                self.dim
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut gens: Vec<Vec<(u32, u32, C64)>> = vec![Vec::new(); new_dim];
                for (j, terms) in map.iter().enumerate() {
                    for &(k, coef) in terms {
                        assert!(k < new_dim, "pullback target out of range");
                        gens[k].extend(b.gens[j].entries.iter().map(|&(r, c, z)| (r, c, z * coef)));
                    }
                }
                PencilBlock {
                    rows: b.rows,
                    cols: b.cols,
                    gens: gens
                        .into_iter()
                        .map(|entries| merge_entries(b.rows, b.cols, entries))
                        .collect(),
                }
            })
            .collect();
        Pencil::new(new_dim, blocks)
    }

    /// Exact value: Jacobi-based operator norm of every block.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "coordinate length");
        self.blocks
            .iter()
            .map(|b| operator_norm(&b.assemble(x)))
            .fold(0.0, f64::max)
    }

    /// Approximate value and gradient `∂‖C(x)‖/∂x_j = Re(u† G_j v)` from the
    /// top singular pair of the dominant block. `warm` holds one right
    /// singular vector per block and is updated in place.
    pub(crate) fn value_and_gradient(
        &self,
        x: &[f64],
        warm: &mut [Vec<C64>],
        power_iters: usize,
    ) -> (f64, Vec<f64>) {
        let mut best = (-1.0, 0usize, Vec::new(), Vec::new());
        for (bi, b) in self.blocks.iter().enumerate() {
            let m = b.assemble(x);
            let (sigma, u, v) = if m.rows() * m.cols() <= 4 || m.rows().min(m.cols()) <= 2 {
                exact_top_pair(&m)
            } else {
                let w = warm.get(bi).filter(|w| !w.is_empty()).map(|w| w.as_slice());
                top_singular_triple(&m, w, power_iters, 1e-12)
            };
            if let Some(slot) = warm.get_mut(bi) {
                slot.clone_from(&v);
            }
            if sigma > best.0 {
                best = (sigma, bi, u, v);
            }
        }
        let (sigma, bi, u, v) = best;
        let grad = if sigma > 0.0 {
            self.blocks[bi].gens.iter().map(|g| g.bilinear(&u, &v)).collect()
        } else {
            vec![0.0; self.dim]
        };
        (sigma.max(0.0), grad)
    }

    /// Real Gram matrix `Re tr(C_j† C_k)` summed over blocks.
    pub(crate) fn gram(&self) -> Vec<Vec<f64>> {
        let mut g = vec![vec![0.0; self.dim]; self.dim];
        for b in &self.blocks {
            let dense: Vec<std::collections::BTreeMap<(u32, u32), C64>> = b
                .gens
                .iter()
                .map(|s| {
                    let mut h = std::collections::BTreeMap::new();
                    for &(i, j, z) in &s.entries {
                        *h.entry((i, j)).or_insert(ZERO) += z;
                    }
                    h
                })
                .collect();
            for j in 0..self.dim {
                for k in j..self.dim {
                    let (small, large) = if dense[j].len() <= dense[k].len() {
                        (&dense[j], &dense[k])
                    } else {
                        (&dense[k], &dense[j])
                    };
                    let s: f64 = small
                        .iter()
                        .filter_map(|(key, a)| large.get(key).map(|b| (a.conj() * b).re))
                        .sum();
                    g[j][k] += s;
                    if j != k {
                        g[k][j] += s;
                    }
                }
            }
        }
        g
    }
}

fn merge_entries(rows: usize, cols: usize, mut entries: Vec<(u32, u32, C64)>) -> SparseMat {
    entries.sort_by_key(|&(i, j, _)| (i, j));
    let mut merged: Vec<(u32, u32, C64)> = Vec::with_capacity(entries.len());
    for (i, j, z) in entries {
        match merged.last_mut() {
            Some(last) if last.0 == i && last.1 == j => last.2 += z,
            _ => merged.push((i, j, z)),
        }
    }
    merged.retain(|e| e.2 != ZERO);
    SparseMat { rows, cols, entries: merged }
}

fn exact_top_pair(m: &CMatrix) -> (f64, Vec<C64>, Vec<C64>) {
    let gram = &m.adjoint() * m;
    let e = crate::linalg::hermitian_eigen(&gram.hermitian_part()).expect("Gram matrix is Hermitian");
    let n = m.cols();
    let v: Vec<C64> = (0..n).map(|i| e.vectors[(i, n - 1)]).collect();
    let mv = m.mul_vec(&v);
    let sigma = crate::linalg::norm(&mv);
    let u = if sigma > 0.0 {
        mv.iter().map(|z| z / sigma).collect()
    } else {
        vec![ZERO; m.rows()]
    };
    (sigma, u, v)
}

/// Real coordinates for self-adjoint elements: `x ↦ Σ x_j g_j`.
///
/// The unit is never a generator; it lies in the kernel of every seminorm
/// and every difference of states vanishes on it.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementBasis {
    pub gens: Vec<ExtElement>,
    pub labels: Vec<String>,
}

impl ElementBasis {
    pub fn new(gens: Vec<ExtElement>, labels: Vec<String>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidArgument("element basis is empty".into()));
        }
        if gens.len() != labels.len() {
            return Err(Error::Shape("one label per generator".into()));
        }
        if let Some(i) = gens.iter().position(|g| !g.is_self_adjoint()) {
            return Err(Error::InvalidArgument(format!("generator {} is not self-adjoint", labels[i])));
        }
        Ok(ElementBasis { gens, labels })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn element(&self, coords: &[f64]) -> ExtElement {
        ExtElement::combination(&self.gens, coords)
    }

    /// `T(a)` for each Hermitian symbol.
    pub fn from_symbols(triple: &TruncatedTriple, symbols: Vec<(String, CMatrix)>) -> Result<Self> {
        let mut gens = Vec::new();
        let mut labels = Vec::new();
        for (l, a) in symbols {
            gens.push(ExtElement::new(a, CMatrix::zeros(triple.n_p(), triple.n_p())));
            labels.push(l);
        }
        Self::new(gens, labels)
    }

    /// Real basis of Hermitian `n_p × n_p` compacts:
    /// `E_ii`, `(E_ij + E_ji)/√2`, `i(E_ij − E_ji)/√2`.
    pub fn compacts(triple: &TruncatedTriple) -> Result<Self> {
        let (gens, labels) = compact_generators(triple);
        Self::new(gens, labels)
    }

    /// Symbols followed by the compact basis.
    pub fn symbols_and_compacts(triple: &TruncatedTriple, symbols: Vec<(String, CMatrix)>) -> Result<Self> {
        let mut basis = if symbols.is_empty() {
            ElementBasis {
                gens: vec![],
                labels: vec![],
            }
        } else {
            Self::from_symbols(triple, symbols)?
        };
        let (gens, labels) = compact_generators(triple);
        basis.gens.extend(gens);
        basis.labels.extend(labels);
        Self::new(basis.gens, basis.labels)
    }

    /// All Hermitian symbols on `H` modulo the unit (for generic triples).
    pub fn hermitian_symbols(triple: &TruncatedTriple) -> Vec<(String, CMatrix)> {
        let n = triple.dim_h();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if i == j {
                    if i + 1 < n {
                        // Traceless diagonal directions; the unit is excluded.
                        let mut m = CMatrix::zeros(n, n);
                        m[(i, i)] = C64::new(1.0, 0.0);
                        out.push((format!("a_E{i}{i}"), m));
                    }
                } else {
                    let s = std::f64::consts::FRAC_1_SQRT_2;
                    let mut re = CMatrix::zeros(n, n);
                    re[(i, j)] = C64::new(s, 0.0);
                    re[(j, i)] = C64::new(s, 0.0);
                    out.push((format!("a_re{i}{j}"), re));
                    let mut im = CMatrix::zeros(n, n);
                    im[(i, j)] = C64::new(0.0, s);
                    im[(j, i)] = C64::new(0.0, -s);
                    out.push((format!("a_im{i}{j}"), im));
                }
            }
        }
        out
    }
}

fn compact_generators(triple: &TruncatedTriple) -> (Vec<ExtElement>, Vec<String>) {
    let n = triple.n_p();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i == j {
                gens.push(ExtElement::compact_only(triple, CMatrix::unit(n, i, i)));
                labels.push(format!("k_E{i}{i}"));
            } else {
                let mut re = CMatrix::zeros(n, n);
                re[(i, j)] = C64::new(s, 0.0);
                re[(j, i)] = C64::new(s, 0.0);
                gens.push(ExtElement::compact_only(triple, re));
                labels.push(format!("k_re{i}{j}"));
                let mut im = CMatrix::zeros(n, n);
                im[(i, j)] = C64::new(0.0, s);
                im[(j, i)] = C64::new(0.0, -s);
                gens.push(ExtElement::compact_only(triple, im));
                labels.push(format!("k_im{i}{j}"));
            }
        }
    }
    (gens, labels)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeminormKind {
    /// `‖[D, a]‖` on the symbol.
    LipA,
    /// `‖D_p k‖` on the compact part.
    LipC,
    /// `‖[D_{α,β}, π(t)]‖`.
    LipExt(Params),
    /// The `β = 0` endpoint `‖[D_{α,0}, π(t)]‖ = (1/α)‖[D, a]‖`.
    LipBetaZero { alpha: f64 },
    /// `factor · inner`.
    Scaled { factor: f64, inner: Box<SeminormKind> },
    /// Maximum of several seminorms.
    Max(Vec<SeminormKind>),
}

/// A seminorm together with the coordinates it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct SeminormSpec {
    pub kind: SeminormKind,
    pub basis: ElementBasis,
}

impl SeminormSpec {
    pub fn new(kind: SeminormKind, basis: ElementBasis) -> Self {
        SeminormSpec { kind, basis }
    }

    pub fn pencil(&self, triple: &TruncatedTriple) -> Result<Pencil> {
        kind_pencil(&self.kind, triple, &self.basis)
    }

    pub fn evaluate(&self, triple: &TruncatedTriple, t: &ExtElement) -> Result<f64> {
        evaluate_kind(&self.kind, triple, t)
    }
}

fn kind_pencil(kind: &SeminormKind, triple: &TruncatedTriple, basis: &ElementBasis) -> Result<Pencil> {
    for g in &basis.gens {
        triple.check_element(g)?;
    }
    match kind {
        SeminormKind::LipA => {
            let gens: Result<Vec<CMatrix>> = basis.gens.iter().map(|g| dirac_commutator(triple, &g.symbol)).collect();
            Pencil::from_dense(&gens?)
        }
        SeminormKind::LipC => {
            let dp = triple.d_p();
            let gens: Vec<CMatrix> = basis.gens.iter().map(|g| g.compact.diag_mul(&dp)).collect();
            Pencil::from_dense(&gens)
        }
        SeminormKind::LipExt(p) => {
            let gens: Result<Vec<CMatrix>> = basis.gens.iter().map(|g| commutator_ext(triple, g, *p)).collect();
            Pencil::from_dense(&gens?)
        }
        SeminormKind::LipBetaZero { alpha } => {
            if !(alpha.is_finite() && *alpha > 0.0) {
                return Err(crate::triple::ParamViolation::AlphaZero { alpha: *alpha }.into());
            }
            let gens: Vec<CMatrix> = basis
                .gens
                .iter()
                .map(|g| commutator_blocks(triple, g, 0.0, 1.0 / alpha))
                .collect();
            Pencil::from_dense(&gens)
        }
        SeminormKind::Scaled { factor, inner } => {
            if !(factor.is_finite() && *factor > 0.0) {
                return Err(Error::InvalidArgument(format!("scale factor must be positive, got {factor}")));
            }
            Ok(kind_pencil(inner, triple, basis)?.scaled(*factor))
        }
        SeminormKind::Max(parts) => {
            let pencils: Result<Vec<Pencil>> = parts.iter().map(|k| kind_pencil(k, triple, basis)).collect();
            Pencil::max_of(&pencils?)
        }
    }
}

fn evaluate_kind(kind: &SeminormKind, triple: &TruncatedTriple, t: &ExtElement) -> Result<f64> {
    use crate::triple::{lip_a, lip_c, lip_ext, lip_limit_beta_zero};
    match kind {
        SeminormKind::LipA => lip_a(triple, &t.symbol),
        SeminormKind::LipC => lip_c(triple, &t.compact),
        SeminormKind::LipExt(p) => lip_ext(triple, t, *p),
        SeminormKind::LipBetaZero { alpha } => lip_limit_beta_zero(triple, t, *alpha),
        SeminormKind::Scaled { factor, inner } => Ok(factor * evaluate_kind(inner, triple, t)?),
        SeminormKind::Max(parts) => parts
            .iter()
            .map(|k| evaluate_kind(k, triple, t))
            .try_fold(0.0_f64, |m, v| v.map(|v| m.max(v))),
    }
}
