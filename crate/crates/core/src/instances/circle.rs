//! The circle with `D = -i d/dθ` on the Fourier modes `e^{inθ}`, `|n| ≤ N`,
//! and `P` the projection onto the positive frequencies.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::states::{BaseFunctional, ElementBasis, SplitState};
use crate::triple::TruncatedTriple;

#[derive(Clone, Debug, PartialEq)]
pub struct CircleInstance {
    pub n_max: usize,
    pub triple: TruncatedTriple,
}

/// Basis index `n + N` holds `e^{inθ}`; `D e_n = n e_n`; `P` keeps `n ≥ 1`.
/// The zero mode stays in `QH`, so `D_p` is invertible.
pub fn build_circle(n_max: usize) -> Result<CircleInstance> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("circle needs N ≥ 2, got {n_max}")));
    }
    let n = n_max as i64;
    let dirac: Vec<f64> = (-n..=n).map(|k| k as f64).collect();
    let p_mask: Vec<bool> = (-n..=n).map(|k| k >= 1).collect();
    let triple = TruncatedTriple::new(format!("circle N={n_max}"), dirac, p_mask)?;
    Ok(CircleInstance { n_max, triple })
}

impl CircleInstance {
    pub fn dim(&self) -> usize {
        2 * self.n_max + 1
    }

    /// Multiplication by `f = Σ c_m e^{imθ}` truncated to the modes:
    /// `(M_f)_{n',n} = c_{n'−n}`.
    pub fn symbol(&self, coeffs: &[(i64, C64)]) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for &(k, c) in coeffs {
            for col in 0..d as i64 {
                let row = col + k;
                if (0..d as i64).contains(&row) {
                    m[(row as usize, col as usize)] += c;
                }
            }
        }
        m
    }

    /// Toeplitz compression `T_f = P M_f|PH`.
    pub fn toeplitz(&self, coeffs: &[(i64, C64)]) -> CMatrix {
        self.triple.compress(&self.symbol(coeffs))
    }

    /// `cos mθ` and `sin mθ` for `1 ≤ m ≤ degree`, in that interleaved order.
    pub fn trig_symbols(&self, degree: usize) -> Vec<(String, CMatrix)> {
        let mut out = Vec::with_capacity(2 * degree);
        for m in 1..=degree as i64 {
            let half = C64::new(0.5, 0.0);
            out.push((format!("cos{m}"), self.symbol(&[(m, half), (-m, half)])));
            out.push((
                format!("sin{m}"),
                self.symbol(&[(m, C64::new(0.0, -0.5)), (-m, C64::new(0.0, 0.5))]),
            ));
        }
        out
    }

    /// Real trigonometric polynomials of the given degree without constant term.
    pub fn symbol_basis(&self, degree: usize) -> Result<ElementBasis> {
        self.check_degree(degree)?;
        ElementBasis::from_symbols(&self.triple, self.trig_symbols(degree))
    }

    /// Trigonometric symbols followed by the Hermitian compacts on `PH`.
    pub fn extension_basis(&self, degree: usize) -> Result<ElementBasis> {
        self.check_degree(degree)?;
        ElementBasis::symbols_and_compacts(&self.triple, self.trig_symbols(degree))
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree == 0 || degree > self.n_max {
            return Err(Error::InvalidArgument(format!(
                "symbol degree {degree} outside 1..={}",
                self.n_max
            )));
        }
        Ok(())
    }

    /// Point evaluation at `2πj/grid_size`.
    pub fn delta(&self, grid_size: usize, index: usize) -> BaseFunctional {
        BaseFunctional::circle_delta(self.n_max, grid_size, index)
    }

    /// The singular state `f ↦ f(2πj/grid_size)`.
    pub fn delta_state(&self, grid_size: usize, index: usize) -> Result<SplitState> {
        SplitState::singular(&self.triple, self.delta(grid_size, index))
    }

    /// Coordinates in [`CircleInstance::symbol_basis`] of a Fejér mean of
    /// `x ↦ (d(x, θ_ψ) − d(x, θ_φ))/2`, a 1-Lipschitz function that separates
    /// the two points by their arc distance.
    pub fn geodesic_start(&self, theta_phi: f64, theta_psi: f64, degree: usize) -> Vec<f64> {
        // d(x, a) = π/2 − (4/π) Σ_{m odd} cos(m(x − a))/m².
        let mut coords = Vec::with_capacity(2 * degree);
        for m in 1..=degree {
            let mf = m as f64;
            let damp = 1.0 - mf / (degree as f64 + 1.0);
            let w = if m % 2 == 1 { -2.0 / (PI * mf * mf) * damp } else { 0.0 };
            // cos m(x − a) = cos mx cos ma + sin mx sin ma
            coords.push(w * ((mf * theta_psi).cos() - (mf * theta_phi).cos()));
            coords.push(w * ((mf * theta_psi).sin() - (mf * theta_phi).sin()));
        }
        coords
    }
}

/// `min(|a − b|, 2π − |a − b|)` after reducing to `[0, 2π)`.
pub fn arc_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator_norm;
    use crate::states::{connes_distance, SeminormKind, SeminormSpec, SolverOptions};
    use crate::triple::{dirac_commutator, lip_a};

    #[test]
    fn dimensions() {
        let c = build_circle(2).unwrap();
        assert_eq!(c.triple.dim_h(), 5);
        assert_eq!(c.triple.n_p(), 2);
        assert_eq!(c.triple.d_p(), vec![1.0, 2.0]);
        assert!(build_circle(1).is_err());
    }

    #[test]
    fn shift_has_unit_lipschitz_constant() {
        for n in [2, 3, 8] {
            let c = build_circle(n).unwrap();
            let shift = c.symbol(&[(1, C64::new(1.0, 0.0))]);
            // [D, M_f] is the band itself for f = e^{iθ}.
            let comm = dirac_commutator(&c.triple, &shift).unwrap();
            assert!(comm.max_abs_diff(&shift) < 1e-15);
            assert!((lip_a(&c.triple, &shift).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn toeplitz_of_shift_is_unilateral_shift() {
        let c = build_circle(4).unwrap();
        let t = c.toeplitz(&[(1, C64::new(1.0, 0.0))]);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j + 1 { 1.0 } else { 0.0 };
                assert_eq!(t[(i, j)], C64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn delta_reads_trig_values() {
        let c = build_circle(5).unwrap();
        let grid = 24;
        let syms = c.trig_symbols(3);
        for j in [0, 5, 17] {
            let x = 2.0 * PI * j as f64 / grid as f64;
            let d = c.delta(grid, j);
            for (k, (_, a)) in syms.iter().enumerate() {
                let m = (k / 2 + 1) as f64;
                let want = if k % 2 == 0 { (m * x).cos() } else { (m * x).sin() };
                assert!((d.evaluate(a) - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn geodesic_start_separates_points() {
        let c = build_circle(16).unwrap();
        let basis = c.symbol_basis(16).unwrap();
        let grid = 40;
        let phi = c.delta_state(grid, 10).unwrap();
        let psi = c.delta_state(grid, 0).unwrap();
        let x = c.geodesic_start(PI / 2.0, 0.0, 16);
        let e = basis.element(&x);
        let gap = phi.evaluate(&c.triple, &e).unwrap() - psi.evaluate(&c.triple, &e).unwrap();
        assert!(gap > 1.0, "{gap}");
        // A Fejér mean of a 1-Lipschitz function is 1-Lipschitz; truncation only lowers the norm.
        let l = operator_norm(&dirac_commutator(&c.triple, &e.symbol).unwrap());
        assert!(l <= 1.0 + 1e-12, "{l}");
    }

    #[test]
    fn quarter_circle_distance_is_close_to_arc() {
        let c = build_circle(8).unwrap();
        let basis = c.symbol_basis(8).unwrap();
        let spec = SeminormSpec::new(SeminormKind::LipA, basis);
        let phi = c.delta_state(40, 10).unwrap();
        let psi = c.delta_state(40, 0).unwrap();
        let opts = SolverOptions::default().with_starts(vec![c.geodesic_start(PI / 2.0, 0.0, 8)]);
        let d = connes_distance(&phi, &psi, &c.triple, &spec, &opts).unwrap();
        let v = d.value.finite().unwrap();
        assert!((v - PI / 2.0).abs() < 0.1 * PI / 2.0, "{v}");
    }
}
