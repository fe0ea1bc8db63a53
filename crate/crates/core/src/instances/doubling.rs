//! The even doubling `D̂ = [[0, D], [D, 0]]` on `K ⊕ K` with grading
//! `γ = diag(I, −I)` and representation `π̂ = diag(π, π)`.

use crate::error::Result;
use crate::linalg::{commutator, hermitian_eigenvalues, operator_norm, CMatrix, C64};
use crate::report::BoundReport;
use crate::triple::{commutator_ext, dirac_ext, represent, ExtElement, Params, TruncatedTriple};

#[derive(Clone, Debug, PartialEq)]
pub struct DoubledTriple {
    pub params: Params,
    /// `D_{α,β}` on `K`.
    pub dirac: CMatrix,
    pub dirac_hat: CMatrix,
    pub gamma: CMatrix,
}

pub fn even_doubling(triple: &TruncatedTriple, p: Params) -> Result<DoubledTriple> {
    let dirac = dirac_ext(triple, p)?;
    let n = dirac.rows();
    let mut dirac_hat = CMatrix::zeros(2 * n, 2 * n);
    dirac_hat.set_block(0, n, &dirac);
    dirac_hat.set_block(n, 0, &dirac);
    let diag: Vec<f64> = (0..2 * n).map(|i| if i < n { 1.0 } else { -1.0 }).collect();
    Ok(DoubledTriple {
        params: p,
        dirac,
        dirac_hat,
        gamma: CMatrix::from_real_diag(&diag),
    })
}

impl DoubledTriple {
    pub fn represent(&self, triple: &TruncatedTriple, t: &ExtElement) -> Result<CMatrix> {
        let pi = represent(triple, t)?;
        Ok(CMatrix::block_diag(&[&pi, &pi]))
    }

    /// `γD̂ + D̂γ`, which vanishes entrywise.
    pub fn anticommutator(&self) -> CMatrix {
        &(&self.gamma * &self.dirac_hat) + &(&self.dirac_hat * &self.gamma)
    }

    /// Largest gap between the sorted spectrum of `D̂` and the sorted
    /// multiset `{±λ}` over the eigenvalues `λ` of `D_{α,β}`.
    pub fn spectrum_deviation(&self) -> Result<f64> {
        let hat = hermitian_eigenvalues(&self.dirac_hat)?;
        let base = hermitian_eigenvalues(&self.dirac)?;
        let mut want: Vec<f64> = base.iter().flat_map(|&l| [l, -l]).collect();
        want.sort_by(f64::total_cmp);
        Ok(hat.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Spectrum, grading and seminorm checks for one element.
    pub fn check(&self, triple: &TruncatedTriple, t: &ExtElement, tolerance: f64) -> Result<Vec<BoundReport>> {
        let pi_hat = self.represent(triple, t)?;
        let comm_hat = operator_norm(&commutator(&self.dirac_hat, &pi_hat));
        let comm = operator_norm(&commutator_ext(triple, t, self.params)?);
        let zero = C64::new(0.0, 0.0);
        let exact = |m: &CMatrix| m.data().iter().all(|z| *z == zero);
        Ok(vec![
            BoundReport::deviation("doubled spectrum", "even doubling", self.spectrum_deviation()?, tolerance)
                .with("alpha", self.params.alpha)
                .with("beta", self.params.beta),
            BoundReport::flag("grading anticommutes with the doubled operator", "even doubling", exact(&self.anticommutator())),
            BoundReport::flag(
                "grading commutes with the doubled representation",
                "even doubling",
                exact(&commutator(&self.gamma, &pi_hat)),
            ),
            BoundReport::identity("doubled seminorm", "even doubling", comm_hat, comm, tolerance * (1.0 + comm)),
        ])
    }
}
