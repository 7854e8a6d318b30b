//! Numerical verification of the effective-Ising limit.
//!
//! For a chain whose neighbors are mutually detuned by energies of scale
//! `Delta`, the full evolution factors as `U(t) = R(t) exp(-i H_ising t)`
//! with a residual `R` that deviates from the identity by order
//! `delta = J / Delta`. The sweep below measures the phase-aligned deviation
//! `min_phi ||R - e^{i phi} I||_F` across a grid of detunings and fits the
//! log-log slope, which should sit near +1.

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::chain::{ChainSpec, Topology};
use crate::error::{Error, Result};
use crate::evolution::{phase_aligned_distance, propagator_exact};
use crate::spin::ManyBodyOperator;
use crate::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    /// Alternating detuning, `Delta_j = (-1)^j Delta`, `rho_j = (-1)^j`.
    Abab,
    /// Three-site staircase, `Delta_j` running `Delta, Delta, -2 Delta`,
    /// `rho_j` running `1, 1, -1/2`.
    Abcabc,
}

/// A regular detuning pattern with characteristic scale `Delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetuningPattern {
    pub kind: PatternKind,
    /// Base detuning `Delta` (the scale in `delta = J / Delta`).
    pub delta: f64,
}

impl DetuningPattern {
    pub fn new(kind: PatternKind, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidSweep(format!(
                "detuning scale must be positive, got {delta}"
            )));
        }
        Ok(Self { kind, delta })
    }

    /// Site count must close the pattern on a ring.
    fn check_sites(&self, n_sites: usize) -> Result<()> {
        let period = match self.kind {
            PatternKind::Abab => 2,
            PatternKind::Abcabc => 3,
        };
        if n_sites % period != 0 {
            return Err(Error::InvalidSweep(format!(
                "{n_sites} sites does not close a period-{period} pattern on a ring"
            )));
        }
        Ok(())
    }

    /// Zeeman energies realizing the pattern.
    pub fn zeeman(&self, n_sites: usize) -> Result<Vec<f64>> {
        self.check_sites(n_sites)?;
        let out = match self.kind {
            // B_j = (-1)^(j+1) Delta/4 gives Delta_j = 2(B_{j+1}-B_j) = (-1)^j Delta
            PatternKind::Abab => (0..n_sites)
                .map(|j| if j % 2 == 0 { -self.delta / 4.0 } else { self.delta / 4.0 })
                .collect(),
            // B pattern (0, Delta/2, Delta) repeating
            PatternKind::Abcabc => (0..n_sites)
                .map(|j| match j % 3 {
                    0 => 0.0,
                    1 => self.delta / 2.0,
                    _ => self.delta,
                })
                .collect(),
        };
        Ok(out)
    }

    /// Neighbor detunings `Delta_j = 2(B_{j+1} - B_j)` on the ring.
    pub fn neighbor_detunings(&self, n_sites: usize) -> Result<Vec<f64>> {
        let b = self.zeeman(n_sites)?;
        Ok((0..n_sites)
            .map(|j| 2.0 * (b[(j + 1) % n_sites] - b[j]))
            .collect())
    }

    /// Ratios `rho_j = Delta / Delta_j`.
    pub fn rho(&self, n_sites: usize) -> Result<Vec<f64>> {
        Ok(self
            .neighbor_detunings(n_sites)?
            .iter()
            .map(|dj| self.delta / dj)
            .collect())
    }

    /// Ring chain at coupling `j_xy = 1` realizing the pattern.
    pub fn chain(&self, n_sites: usize, alpha: f64) -> Result<ChainSpec> {
        self.chain_with_coupling(n_sites, alpha, 1.0)
    }

    pub fn chain_with_coupling(&self, n_sites: usize, alpha: f64, j_xy: f64) -> Result<ChainSpec> {
        ChainSpec::new(n_sites, Topology::Ring, j_xy, alpha, self.zeeman(n_sites)?)
    }
}

/// `R(t) = U(t) exp(+i H_ising t)`; exactly unitary, and the identity when
/// the flip-flop part vanishes.
pub fn residual_operator(spec: &ChainSpec, t: f64) -> Result<ManyBodyOperator> {
    let full = propagator_exact(&spec.h_total(), t)?;
    let unwind = propagator_exact(&spec.h_ising(), -t)?;
    let r = full.matrix() * unwind.matrix();
    ManyBodyOperator::new(r, spec.n_sites(), false)
}

/// Phase-aligned deviation of `r` from the identity.
pub fn identity_deviation(r: &ManyBodyOperator) -> f64 {
    let d = r.matrix().nrows();
    phase_aligned_distance(r.matrix(), &CMatrix::identity(d, d))
}

/// Sweep output: deviations per detuning value and the fitted log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// Small parameters `delta = J / Delta`, one per sweep point.
    pub deltas: Vec<f64>,
    /// Phase-aligned `||R - I||_F` per sweep point.
    pub norms: Vec<f64>,
    /// Least-squares slope of `log norm` against `log delta`.
    pub fitted_slope: f64,
    /// Evolution time of the sweep.
    pub t: f64,
}

/// Sweeps the residual deviation across detuning scales `Delta` (given as the
/// big energies, e.g. 50, 100, ...) and fits the slope in `delta = J/Delta`.
///
/// Requires at least three points spanning a decade, all with
/// `delta <= 0.1`; the theorem is asymptotic and large-`delta` points would
/// corrupt the fit.
pub fn scaling_sweep(
    kind: PatternKind,
    big_deltas: &[f64],
    t: f64,
    n_sites: usize,
    alpha: f64,
) -> Result<ResidualReport> {
    scaling_sweep_with_coupling(kind, big_deltas, t, n_sites, alpha, 1.0)
}

/// [`scaling_sweep`] with an explicit coupling instead of `j_xy = 1` units.
pub fn scaling_sweep_with_coupling(
    kind: PatternKind,
    big_deltas: &[f64],
    t: f64,
    n_sites: usize,
    alpha: f64,
    j_xy: f64,
) -> Result<ResidualReport> {
    if big_deltas.len() < 3 {
        return Err(Error::InvalidSweep(format!(
            "need at least 3 detuning values, got {}",
            big_deltas.len()
        )));
    }
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &bd in big_deltas {
        if !(bd > 0.0) || !bd.is_finite() {
            return Err(Error::InvalidSweep(format!("detunings must be positive, got {bd}")));
        }
        if j_xy / bd > 0.1 {
            return Err(Error::InvalidSweep(format!(
                "delta = {j_xy}/{bd} exceeds the asymptotic bound 0.1"
            )));
        }
        lo = lo.min(bd);
        hi = hi.max(bd);
    }
    // enough leverage for a meaningful log-log fit; the standard grid
    // 50..400 spans a factor of 8
    if hi / lo < 4.0 {
        return Err(Error::InvalidSweep(
            "detuning values must span at least a factor of 4".into(),
        ));
    }

    let mut deltas = Vec::with_capacity(big_deltas.len());
    let mut norms = Vec::with_capacity(big_deltas.len());
    for &bd in big_deltas {
        let pattern = DetuningPattern::new(kind, bd)?;
        let spec = pattern.chain_with_coupling(n_sites, alpha, j_xy)?;
        let r = residual_operator(&spec, t)?;
        deltas.push(j_xy / bd);
        norms.push(identity_deviation(&r));
    }
    if norms.iter().all(|&n| n < 1e-13) {
        return Err(Error::PrecisionFloor);
    }
    let fitted_slope = log_log_slope(&deltas, &norms);
    Ok(ResidualReport {
        deltas,
        norms,
        fitted_slope,
        t,
    })
}

/// Least-squares slope of `ln y` vs `ln x`.
pub(crate) fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| Float::ln(*v)).collect();
    let ly: Vec<f64> = y.iter().map(|v| Float::ln(*v)).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// The first-order dressing factor `x_j` for the residual integrals:
///
/// `x_j = rho_j (1 - 8 a^2 d^2 (1 + sL sR)) (1 - 2 a d (sR - sL)) / (1 - 16 a^2 d^2)`
///
/// with `a = alpha`, `d = delta_j` and `sL, sR` the sigma^Z eigenvalues of
/// the sites flanking the bond (j-1 and j+2).
pub fn x_factor(rho_j: f64, delta_j: f64, alpha: f64, sz_left: i8, sz_right: i8) -> Result<f64> {
    if !matches!(sz_left, 1 | -1) || !matches!(sz_right, 1 | -1) {
        return Err(Error::InvalidParameter(
            "sigma^Z eigenvalues must be +1 or -1".into(),
        ));
    }
    let ad = alpha * delta_j;
    let denom = 1.0 - 16.0 * ad * ad;
    if Float::abs(denom) < 1e-14 {
        return Err(Error::SingularDenominator);
    }
    let sl = sz_left as f64;
    let sr = sz_right as f64;
    let first = 1.0 - 8.0 * ad * ad * (1.0 + sl * sr);
    let second = 1.0 - 2.0 * ad * (sr - sl);
    Ok(rho_j * first * second / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::propagator_exact;
    use approx::assert_abs_diff_eq;

    #[test]
    fn abab_detunings_alternate() {
        let p = DetuningPattern::new(PatternKind::Abab, 100.0).unwrap();
        let dj = p.neighbor_detunings(6).unwrap();
        for (j, d) in dj.iter().enumerate() {
            assert_abs_diff_eq!(*d, if j % 2 == 0 { 100.0 } else { -100.0 });
        }
        let rho = p.rho(6).unwrap();
        for (j, r) in rho.iter().enumerate() {
            assert_abs_diff_eq!(*r, if j % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn abcabc_rho_sequence() {
        let p = DetuningPattern::new(PatternKind::Abcabc, 90.0).unwrap();
        let rho = p.rho(6).unwrap();
        for (j, r) in rho.iter().enumerate() {
            let want = [1.0, 1.0, -0.5][j % 3];
            assert_abs_diff_eq!(*r, want, epsilon = 1e-12);
        }
        assert!(p.zeeman(4).is_err());
    }

    #[test]
    fn residual_identity_at_zero_coupling() {
        let spec = ChainSpec::new(4, Topology::Ring, 0.0, 1.0, alloc::vec![1.0, -2.0, 3.0, 0.5])
            .unwrap();
        let r = residual_operator(&spec, 2.3).unwrap();
        assert!((r.matrix() - CMatrix::identity(16, 16)).norm() < 1e-12);
    }

    #[test]
    fn residual_for_homogeneous_field_is_flipflop_evolution() {
        // with equal fields nothing detunes; R reduces to exp(-i H_flip_flop t)
        let spec = ChainSpec::new(2, Topology::Open, 1.0, 0.0, alloc::vec![0.7, 0.7]).unwrap();
        let r = residual_operator(&spec, 0.9).unwrap();
        let want = propagator_exact(&spec.h_flip_flop(), 0.9).unwrap();
        assert!((r.matrix() - want.matrix()).norm() < 1e-12);
    }

    #[test]
    fn zero_coupling_sweep_hits_precision_floor() {
        let got = scaling_sweep_with_coupling(
            PatternKind::Abab,
            &[50.0, 100.0, 200.0, 400.0],
            1.0,
            4,
            1.0,
            0.0,
        );
        assert_eq!(got, Err(Error::PrecisionFloor));
    }

    #[test]
    fn residual_is_unitary() {
        let p = DetuningPattern::new(PatternKind::Abab, 50.0).unwrap();
        let spec = p.chain(6, 1.0).unwrap();
        let r = residual_operator(&spec, 1.0).unwrap();
        assert!(crate::evolution::unitarity_residual(r.matrix()) < 1e-10);
    }

    #[test]
    fn deviation_shrinks_linearly_in_delta() {
        // frozen from the dense-diagonalization oracle: ABAB N=6 alpha=1 t=1
        let p100 = DetuningPattern::new(PatternKind::Abab, 100.0).unwrap();
        let p200 = DetuningPattern::new(PatternKind::Abab, 200.0).unwrap();
        let n100 = identity_deviation(&residual_operator(&p100.chain(6, 1.0).unwrap(), 1.0).unwrap());
        let n200 = identity_deviation(&residual_operator(&p200.chain(6, 1.0).unwrap(), 1.0).unwrap());
        assert_abs_diff_eq!(n100, 0.96125, epsilon = 1e-3);
        assert_abs_diff_eq!(n200, 0.48389, epsilon = 1e-3);
        let ratio = n100 / n200;
        assert!((1.8..2.2).contains(&ratio), "expected ~2x shrink, got {ratio}");
    }

    #[test]
    fn sweep_slope_near_one() {
        for alpha in [0.0, 1.0] {
            let rep =
                scaling_sweep(PatternKind::Abab, &[50.0, 100.0, 200.0, 400.0], 1.0, 6, alpha)
                    .unwrap();
            assert!(
                (0.85..=1.15).contains(&rep.fitted_slope),
                "alpha={alpha}: slope {}",
                rep.fitted_slope
            );
            // monotone non-increasing deviation along increasing Delta
            for w in rep.norms.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn sweep_preconditions() {
        assert!(matches!(
            scaling_sweep(PatternKind::Abab, &[50.0], 1.0, 6, 1.0),
            Err(Error::InvalidSweep(_))
        ));
        assert!(matches!(
            scaling_sweep(PatternKind::Abab, &[5.0, 20.0, 80.0], 1.0, 6, 1.0),
            Err(Error::InvalidSweep(_))
        ));
        assert!(matches!(
            scaling_sweep(PatternKind::Abab, &[50.0, 60.0, 70.0], 1.0, 6, 1.0),
            Err(Error::InvalidSweep(_))
        ));
    }

    #[test]
    fn x_factor_values() {
        // alpha = 0 or delta = 0 collapse to rho
        assert_abs_diff_eq!(x_factor(-1.0, 0.05, 0.0, 1, -1).unwrap(), -1.0);
        assert_abs_diff_eq!(x_factor(0.7, 0.0, 1.0, -1, -1).unwrap(), 0.7);
        // frozen from independent evaluation of the printed formula:
        // alpha=1, delta=0.05, rho=1, sL=+1, sR=-1:
        //   (1 - 0)(1 - 0.1(-2)) / (1 - 0.04) = 1.2 / 0.96 = 1.25
        assert_abs_diff_eq!(x_factor(1.0, 0.05, 1.0, 1, -1).unwrap(), 1.25, epsilon = 1e-15);
    }

    #[test]
    fn x_factor_singularity() {
        // 4 alpha delta = 1 -> denominator zero
        assert_eq!(
            x_factor(1.0, 0.25, 1.0, 1, 1),
            Err(Error::SingularDenominator)
        );
    }
}
