//! Log-barrier path following for `max c·x` subject to `‖C_b(x)‖ ≤ 1`.
//!
//! Each block constraint is written as linear matrix inequalities
//! `I + Σ_j x_j A_j ⪰ 0` with Hermitian `A_j`: a block of skew-Hermitian (or
//! Hermitian) generators `H_j = iG_j` gives the pair `I ∓ Σ x_j H_j`, any
//! other block its Hermitian dilation `[[I, C], [C†, I]]`. Newton steps on
//! `−t c·x − Σ log det F(x)` follow the central path; the iterate stays
//! strictly feasible and `ν/t` bounds its suboptimality at the centre.

use rayon::prelude::*;

use crate::linalg::{cholesky, cholesky_inverse, cholesky_log_det, solve_spd, CMatrix, C64, ONE};

use super::seminorm::Pencil;

/// `I + Σ_j x_j A_j` with sparse Hermitian `A_j`.
#[derive(Clone, Debug)]
pub(crate) struct Lmi {
    size: usize,
    gens: Vec<Vec<(u32, u32, C64)>>,
}

impl Lmi {
    fn assemble(&self, x: &[f64]) -> CMatrix {
        let mut f = CMatrix::identity(self.size);
        for (g, &xj) in self.gens.iter().zip(x) {
            if xj != 0.0 {
                for &(a, b, z) in g {
                    f[(a as usize, b as usize)] += z * xj;
                }
            }
        }
        f
    }
}

fn skew_or_hermitian(m: &CMatrix) -> Option<C64> {
    if !m.is_square() {
        return None;
    }
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    if m.hermitian_defect() <= 1e-14 * scale {
        return Some(ONE);
    }
    let h = m.scale(C64::new(0.0, 1.0));
    if h.hermitian_defect() <= 1e-14 * scale {
        return Some(C64::new(0.0, 1.0));
    }
    None
}

pub(crate) fn lmis_from_pencil(pencil: &Pencil) -> Vec<Lmi> {
    let mut out = Vec::new();
    for b in pencil.blocks() {
        let dense: Vec<CMatrix> = b.gens.iter().map(|g| g.to_dense()).collect();
        let phases: Vec<Option<C64>> = dense.iter().map(skew_or_hermitian).collect();
        let common = phases.first().copied().flatten().filter(|p| phases.iter().all(|q| *q == Some(*p)));
        match common {
            Some(phase) => {
                for sign in [-1.0, 1.0] {
                    let gens = b
                        .gens
                        .iter()
                        .map(|g| g.entries.iter().map(|&(i, j, z)| (i, j, z * phase * sign)).collect())
                        .collect();
                    out.push(Lmi { size: b.rows, gens });
                }
            }
            None => {
                let r = b.rows as u32;
                let gens = b
                    .gens
                    .iter()
                    .map(|g| {
                        let mut e = Vec::with_capacity(2 * g.entries.len());
                        for &(i, j, z) in &g.entries {
                            e.push((i, r + j, z));
                            e.push((r + j, i, z.conj()));
                        }
                        e
                    })
                    .collect();
                out.push(Lmi {
                    size: b.rows + b.cols,
                    gens,
                });
            }
        }
    }
    out
}

/// `−Σ log det F_l(x)`, or `None` outside the interior.
fn barrier_value(lmis: &[Lmi], x: &[f64]) -> Option<f64> {
    let mut v = 0.0;
    for l in lmis {
        let ch = cholesky(&l.assemble(x))?;
        v -= cholesky_log_det(&ch);
    }
    Some(v)
}

/// Gradient and Hessian of the barrier in `x` coordinates.
fn barrier_derivatives(lmis: &[Lmi], x: &[f64]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let m = x.len();
    let mut grad = vec![0.0; m];
    let mut hess = vec![vec![0.0; m]; m];
    for l in lmis {
        let n = l.size;
        let finv = cholesky_inverse(&cholesky(&l.assemble(x))?);
        // M_j = F^{-1} A_j, stored transposed so that tr(M_j M_k) is a flat dot product.
        let mt: Vec<Vec<C64>> = l
            .gens
            .par_iter()
            .map(|g| {
                let mut t = vec![C64::new(0.0, 0.0); n * n];
                for &(a, b, z) in g {
                    let (a, b) = (a as usize, b as usize);
                    for p in 0..n {
                        // M[p][b] += F^{-1}[p][a] z  →  Mᵀ[b][p]
                        t[b * n + p] += finv[(p, a)] * z;
                    }
                }
                t
            })
            .collect();
        for (j, t) in mt.iter().enumerate() {
            grad[j] -= (0..n).map(|p| t[p * n + p].re).sum::<f64>();
        }
        // tr(M_j M_k) = Σ_{p,q} M_j[p][q] M_k[q][p] = Σ_{p,q} Mᵀ_j[q][p] Mᵀ_k[p][q].
        let rows: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|j| {
                let tj = &mt[j];
                let mut row = vec![0.0; m];
                for (k, tk) in mt.iter().enumerate().skip(j) {
                    let mut s = 0.0;
                    for q in 0..n {
                        for p in 0..n {
                            let a = tj[q * n + p];
                            let b = tk[p * n + q];
                            s += a.re * b.re - a.im * b.im;
                        }
                    }
                    row[k] = s;
                }
                row
            })
            .collect();
        for (j, row) in rows.into_iter().enumerate() {
            for k in j..m {
                hess[j][k] += row[k];
                if k != j {
                    hess[k][j] += row[k];
                }
            }
        }
    }
    Some((grad, hess))
}

#[derive(Clone, Debug)]
pub(crate) struct BarrierOutcome {
    pub x: Vec<f64>,
    /// `ν/t` at the last centring.
    pub gap: f64,
    pub newton_steps: usize,
}

/// Maximises `c·x` over `x ∈ span(range)` with `range` orthonormal, from the
/// strictly feasible origin.
pub(crate) fn barrier_maximize(
    c: &[f64],
    pencil: &Pencil,
    range: &[Vec<f64>],
    rel_tol: f64,
    max_newton: usize,
) -> BarrierOutcome {
    let m = c.len();
    let r = range.len();
    let lmis = lmis_from_pencil(pencil);
    let nu: f64 = lmis.iter().map(|l| l.size as f64).sum();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let to_x = |z: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; m];
        for (zk, v) in z.iter().zip(range) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += zk * vi;
            }
        }
        x
    };
    let cz: Vec<f64> = range.iter().map(|v| dot(v, c)).collect();
    let c_norm = dot(&cz, &cz).sqrt();
    let mut x = vec![0.0; m];
    if c_norm == 0.0 || r == 0 {
        return BarrierOutcome {
            x,
            gap: 0.0,
            newton_steps: 0,
        };
    }
    let mut t = 1.0 / c_norm;
    let mu = 16.0;
    let mut steps = 0;
    let mut gap = f64::INFINITY;
    'outer: loop {
        for _ in 0..60 {
            if steps >= max_newton {
                break 'outer;
            }
            steps += 1;
            let Some((g, h)) = barrier_derivatives(&lmis, &x) else {
                break 'outer;
            };
            let gt: Vec<f64> = g.iter().zip(c).map(|(gi, ci)| gi - t * ci).collect();
            let gz: Vec<f64> = range.iter().map(|v| dot(v, &gt)).collect();
            let hv: Vec<Vec<f64>> = range
                .iter()
                .map(|v| (0..m).map(|i| dot(&h[i], v)).collect())
                .collect();
            let mut hz: Vec<Vec<f64>> = (0..r).map(|a| (0..r).map(|b| dot(&range[a], &hv[b])).collect()).collect();
            let neg: Vec<f64> = gz.iter().map(|v| -v).collect();
            let mut dz = solve_spd(&hz, &neg);
            if dz.is_none() {
                let ridge = 1e-12 * (0..r).map(|a| hz[a][a]).sum::<f64>() / r as f64;
                for (a, row) in hz.iter_mut().enumerate() {
                    row[a] += ridge;
                }
                dz = solve_spd(&hz, &neg);
            }
            let Some(dz) = dz else {
                break 'outer;
            };
            let lambda2 = -dot(&gz, &dz);
            if lambda2 / 2.0 <= 1e-10 {
                break;
            }
            let dx = to_x(&dz);
            let f0 = -t * dot(c, &x) + barrier_value(&lmis, &x).unwrap_or(f64::INFINITY);
            let mut s = 1.0;
            let mut moved = false;
            while s > 1e-14 {
                let xn: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + s * b).collect();
                if let Some(b) = barrier_value(&lmis, &xn) {
                    if -t * dot(c, &xn) + b <= f0 - 0.25 * s * lambda2 {
                        x = xn;
                        moved = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !moved {
                break;
            }
        }
        gap = nu / t;
        if gap <= rel_tol * dot(c, &x).abs().max(f64::MIN_POSITIVE) {
            break;
        }
        t *= mu;
    }
    BarrierOutcome {
        x,
        gap,
        newton_steps: steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_of_max_norm() {
        // max(|x0|, |x1|) ≤ 1: sup of x0 − 2 x1 is 3.
        let p = Pencil::max_of(&[Pencil::functional(&[1.0, 0.0]), Pencil::functional(&[0.0, 1.0])]).unwrap();
        let range = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let out = barrier_maximize(&[1.0, -2.0], &p, &range, 1e-10, 500);
        assert!((out.x[0] - 1.0).abs() < 1e-8 && (out.x[1] + 1.0).abs() < 1e-8, "{:?}", out.x);
        assert!(out.gap < 1e-9);
    }

    #[test]
    fn spectral_norm_ball() {
        // C(x) = diag(x0 + x1, x0 − x1): ‖C‖ = |x0| + |x1|, sup of x0 + 0.5 x1 is 1.
        let g0 = CMatrix::from_real_diag(&[1.0, 1.0]);
        let g1 = CMatrix::from_real_diag(&[1.0, -1.0]);
        let p = Pencil::from_dense(&[g0, g1]).unwrap();
        let range = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let out = barrier_maximize(&[1.0, 0.5], &p, &range, 1e-10, 500);
        assert!((out.x[0] + 0.5 * out.x[1] - 1.0).abs() < 1e-8);
        assert!(p.evaluate(&out.x) < 1.0);
    }
}
