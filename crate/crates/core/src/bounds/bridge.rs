//! Bridge seminorms on direct sums, with the explicit pairings that show each
//! summand's seminorm is the quotient of the bridge.

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::report::{BoundReport, Extended};
use crate::states::{connes_distance, maximize_linear, Pencil, SeminormSpec, SolverOptions, SplitState};
use crate::triple::{ExtElement, TruncatedTriple};

/// `L(a, b) = max{L3(a), L2(b), R·L3(a − b), R·L2(a − b), M|σ(a − b)|}` with
/// `L3 = L1/√(rs)` and `R = √s/(√r − √s)`, for seminorms with `s L2 ≤ L1 ≤ r L2`.
#[derive(Clone, Debug)]
pub struct BridgeSeminorm {
    pub triple: TruncatedTriple,
    pub first: SeminormSpec,
    pub second: SeminormSpec,
    pub s: f64,
    pub r: f64,
    pub big_r: f64,
    pub sigma: SplitState,
    pub m: f64,
}

pub fn build_bridge(
    triple: &TruncatedTriple,
    first: SeminormSpec,
    second: SeminormSpec,
    s: f64,
    r: f64,
    sigma: SplitState,
    m: f64,
) -> Result<BridgeSeminorm> {
    if !(s > 0.0 && s.is_finite() && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("bridge factors must be positive and finite, got s = {s}, r = {r}")));
    }
    if s >= r {
        return Err(Error::InvalidArgument(format!("bridge needs s < r, got s = {s}, r = {r}")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidArgument(format!("penalty must be positive, got {m}")));
    }
    sigma.validate(triple)?;
    let big_r = s.sqrt() / (r.sqrt() - s.sqrt());
    Ok(BridgeSeminorm {
        triple: triple.clone(),
        first,
        second,
        s,
        r,
        big_r,
        sigma,
        m,
    })
}

impl BridgeSeminorm {
    pub fn l3(&self, a: &ExtElement) -> Result<f64> {
        Ok(self.first.evaluate(&self.triple, a)? / (self.r * self.s).sqrt())
    }

    pub fn l2(&self, b: &ExtElement) -> Result<f64> {
        self.second.evaluate(&self.triple, b)
    }

    /// The five terms in order, then their maximum.
    pub fn terms(&self, a: &ExtElement, b: &ExtElement) -> Result<[f64; 5]> {
        let d = a.sub(b);
        Ok([
            self.l3(a)?,
            self.l2(b)?,
            self.big_r * self.l3(&d)?,
            self.big_r * self.l2(&d)?,
            self.m * self.sigma.evaluate(&self.triple, &d)?.abs(),
        ])
    }

    pub fn evaluate(&self, a: &ExtElement, b: &ExtElement) -> Result<f64> {
        Ok(self.terms(a, b)?.into_iter().fold(0.0, f64::max))
    }

    /// `x ↦ √(s/r)·x + (1 − √(s/r))·σ(x)·I`.
    fn pair(&self, x: &ExtElement) -> Result<ExtElement> {
        let q = (self.s / self.r).sqrt();
        let shift = (1.0 - q) * self.sigma.evaluate(&self.triple, x)?;
        Ok(x.scale_real(q).add(&ExtElement::unit(&self.triple).scale(C64::new(shift, 0.0))))
    }

    /// Rescales `a` to `L3(a) = 1`, pairs it with `b` and checks `L(a, b) ≤ 1`.
    pub fn forward_pairing(&self, a: &ExtElement, tolerance: f64) -> Result<(ExtElement, ExtElement, BoundReport)> {
        let l = self.l3(a)?;
        let a = if l > 0.0 { a.scale_real(1.0 / l) } else { a.clone() };
        let b = self.pair(&a)?;
        let report = self.pairing_report("bridge forward pairing", &a, &b, tolerance)?;
        Ok((a, b, report))
    }

    /// Rescales `b` to `L2(b) = 1`, pairs it with `a` and checks `L(a, b) ≤ 1`.
    pub fn reverse_pairing(&self, b: &ExtElement, tolerance: f64) -> Result<(ExtElement, ExtElement, BoundReport)> {
        let l = self.l2(b)?;
        let b = if l > 0.0 { b.scale_real(1.0 / l) } else { b.clone() };
        let a = self.pair(&b)?;
        let report = self.pairing_report("bridge reverse pairing", &a, &b, tolerance)?;
        Ok((a, b, report))
    }

    fn pairing_report(&self, name: &str, a: &ExtElement, b: &ExtElement, tolerance: f64) -> Result<BoundReport> {
        let t = self.terms(a, b)?;
        let value = t.iter().copied().fold(0.0, f64::max);
        Ok(BoundReport::le(name, "bridge pairing", value, 1.0, tolerance)
            .with("terms", t.to_vec())
            .with("s", self.s)
            .with("r", self.r)
            .with("R", self.big_r)
            .with("M", self.m))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OnePointOutcome {
    /// One report per net state: `ρ(φ ⊕ 0, 0 ⊕ ev) ≤ d(φ, σ)/t + 1/M`.
    pub reports: Vec<BoundReport>,
    /// Largest certified bridge distance over the net.
    pub sampled: Extended,
    /// `diam/t` with the largest upper estimate of `d(φ, σ)` over the net.
    pub bound: Extended,
}

/// Evaluates the bridge `max{t·L(a), M|σ(a) − x|}` on `A ⊕ R` against the
/// unique state of the one-point space. For every net state the certified
/// bridge distance must stay below `d(φ, σ)/t + 1/M`, where `d(φ, σ)` is the
/// solver's value plus its gap.
#[allow(clippy::too_many_arguments)]
pub fn one_point_bridge_check(
    triple: &TruncatedTriple,
    spec: &SeminormSpec,
    t: f64,
    sigma: &SplitState,
    m: f64,
    net: &[SplitState],
    opts: &SolverOptions,
    tolerance: f64,
) -> Result<OnePointOutcome> {
    if !(t > 0.0 && t.is_finite()) || !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidArgument(format!("need t > 0 and M > 0, got t = {t}, M = {m}")));
    }
    if net.is_empty() {
        return Err(Error::InvalidArgument("state net is empty".into()));
    }
    let n = spec.basis.len();
    let lip = spec.pencil(triple)?;
    let embed: Vec<Vec<(usize, f64)>> = (0..n).map(|j| vec![(j, 1.0)]).collect();
    let scaled = lip.scaled(t).pullback(n + 1, &embed)?;
    let mut penalty: Vec<f64> = spec
        .basis
        .gens
        .iter()
        .map(|g| Ok(m * sigma.evaluate(triple, g)?))
        .collect::<Result<_>>()?;
    penalty.push(-m);
    let pencil = Pencil::max_of(&[scaled, Pencil::functional(&penalty)])?;

    let mut reports = Vec::with_capacity(net.len());
    let mut sampled = Extended::Finite(0.0);
    let mut bound = Extended::Finite(0.0);
    for (i, phi) in net.iter().enumerate() {
        let mut c: Vec<f64> = spec
            .basis
            .gens
            .iter()
            .map(|g| phi.evaluate(triple, g))
            .collect::<Result<_>>()?;
        c.push(-1.0);
        let rho = maximize_linear(&c, &pencil, opts)?;
        let d = connes_distance(phi, sigma, triple, spec, opts)?;
        let d_upper = match d.value {
            Extended::Finite(v) => Extended::Finite(v + d.gap_estimate.max(0.0)),
            other => other,
        };
        let rhs = match d_upper {
            Extended::Finite(v) => Extended::Finite(v / t + 1.0 / m),
            other => other,
        };
        sampled = sampled.max(rho.value);
        bound = bound.max(match d_upper {
            Extended::Finite(v) => Extended::Finite(v / t),
            other => other,
        });
        let tol = tolerance * (1.0 + rhs.finite().unwrap_or(0.0));
        reports.push(
            BoundReport::inequality("one-point bridge distance", "one-point bound", rho.value, rhs, tol)
                .with("state", i)
                .with("t", t)
                .with("M", m)
                .with("dist_to_base", d.value)
                .with("bridge_gap", rho.gap_estimate),
        );
    }
    Ok(OnePointOutcome { reports, sampled, bound })
}
