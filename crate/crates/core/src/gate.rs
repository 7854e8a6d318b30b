//! Two-qubit gates in the computational basis (|00>, |01>, |10>, |11>),
//! qubit encoding |0> = |down>, |1> = |up>.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

pub type Gate2 = Matrix2<Complex64>;
pub type Gate4 = Matrix4<Complex64>;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Phase convention of a gate matrix.
///
/// `Raw` carries the bare simulation phases, which depend on the absolute
/// Zeeman energies. `PassiveReferenced` has the per-qubit Z frames and the
/// global phase fixed to the published convention (see
/// [`crate::triplet::to_passive_frame`]); moduli and local invariants agree
/// between the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateFrame {
    Raw,
    PassiveReferenced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitGate {
    matrix: Gate4,
    frame: GateFrame,
}

impl TwoQubitGate {
    /// Wraps a matrix, requiring unitarity within 1e-10.
    pub fn new(matrix: Gate4, frame: GateFrame) -> Result<Self> {
        let r = unitarity_residual4(&matrix);
        if r >= 1e-10 {
            return Err(Error::NonUnitary { residual: r });
        }
        Ok(Self { matrix, frame })
    }

    pub(crate) fn new_unchecked(matrix: Gate4, frame: GateFrame) -> Self {
        Self { matrix, frame }
    }

    pub fn matrix(&self) -> &Gate4 {
        &self.matrix
    }

    pub fn frame(&self) -> GateFrame {
        self.frame
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual4(&self.matrix)
    }

    /// Phase-aligned distance `min_phi ||A - e^{i phi} B||_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        phase_aligned_distance4(&self.matrix, &other.matrix)
    }

    /// Largest entrywise difference of |entries|; frame independent.
    pub fn max_modulus_difference(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let d = Float::abs(self.matrix[(i, j)].norm() - other.matrix[(i, j)].norm());
                worst = worst.max(d);
            }
        }
        worst
    }
}

pub fn unitarity_residual4(m: &Gate4) -> f64 {
    let mut g = m.adjoint() * m;
    for i in 0..4 {
        g[(i, i)] -= C_ONE;
    }
    g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Entrywise accumulation after phase alignment, accurate to machine
/// precision even for near-identical gates.
pub fn phase_aligned_distance4(a: &Gate4, b: &Gate4) -> f64 {
    let mut tr = C_ZERO;
    for (x, y) in a.iter().zip(b.iter()) {
        tr += y.conj() * x;
    }
    let phase = if tr.norm() > 0.0 {
        tr / Complex64::new(tr.norm(), 0.0)
    } else {
        C_ONE
    };
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += (x - phase * y).norm_sqr();
    }
    Float::sqrt(acc)
}

/// Closest unitary to `m` (polar factor), via `m (m^dagger m)^{-1/2}`.
pub fn nearest_unitary4(m: &Gate4) -> Gate4 {
    let g = m.adjoint() * m;
    let se = g.symmetric_eigen();
    let mut inv_sqrt = Gate4::zeros();
    for k in 0..4 {
        let lam = Float::sqrt(Float::max(se.eigenvalues[k], 1e-300));
        let col = se.eigenvectors.column(k);
        for i in 0..4 {
            for j in 0..4 {
                inv_sqrt[(i, j)] += col[i] * col[j].conj() / Complex64::new(lam, 0.0);
            }
        }
    }
    m * inv_sqrt
}

/// Kronecker product of two single-qubit gates, first qubit most significant.
pub fn kron2(a: &Gate2, b: &Gate2) -> Gate4 {
    let mut out = Gate4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `Z(theta) = diag(e^{i theta}, e^{-i theta})` on (|0>, |1>).
pub fn rz(theta: f64) -> Gate2 {
    Gate2::new(
        Complex64::from_polar(1.0, theta),
        C_ZERO,
        C_ZERO,
        Complex64::from_polar(1.0, -theta),
    )
}

/// `Y(theta) = [[cos, -sin], [sin, cos]]`.
pub fn ry(theta: f64) -> Gate2 {
    let c = Complex64::new(Float::cos(theta), 0.0);
    let s = Complex64::new(Float::sin(theta), 0.0);
    Gate2::new(c, -s, s, c)
}

pub fn identity_gate() -> Gate4 {
    Gate4::identity()
}

pub fn cnot() -> Gate4 {
    let mut m = Gate4::zeros();
    m[(0, 0)] = C_ONE;
    m[(1, 1)] = C_ONE;
    m[(2, 3)] = C_ONE;
    m[(3, 2)] = C_ONE;
    m
}

pub fn swap() -> Gate4 {
    let mut m = Gate4::zeros();
    m[(0, 0)] = C_ONE;
    m[(1, 2)] = C_ONE;
    m[(2, 1)] = C_ONE;
    m[(3, 3)] = C_ONE;
    m
}

pub fn iswap() -> Gate4 {
    let i = Complex64::new(0.0, 1.0);
    let mut m = Gate4::zeros();
    m[(0, 0)] = C_ONE;
    m[(1, 2)] = i;
    m[(2, 1)] = i;
    m[(3, 3)] = C_ONE;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn distance_identities() {
        let u = cnot();
        assert_abs_diff_eq!(phase_aligned_distance4(&u, &u), 0.0, epsilon = 1e-14);
        let rotated = u * Complex64::from_polar(1.0, core::f64::consts::PI / 7.0);
        assert_abs_diff_eq!(phase_aligned_distance4(&u, &rotated), 0.0, epsilon = 1e-7);
        // tr(CNOT) = 2 -> d(I, CNOT) = sqrt(8 - 2|2|) = 2
        assert_abs_diff_eq!(
            phase_aligned_distance4(&identity_gate(), &cnot()),
            2.0,
            epsilon = 1e-12
        );
        assert!(phase_aligned_distance4(&identity_gate(), &cnot()) > 1.0);
    }

    #[test]
    fn rotations_are_unitary() {
        for theta in [-1.2, 0.0, 0.4, 2.8] {
            let g = kron2(&rz(theta), &ry(theta / 2.0));
            assert!(unitarity_residual4(&g) < 1e-14);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let mut m = Gate4::zeros();
        m[(0, 0)] = C_ONE;
        assert!(matches!(
            TwoQubitGate::new(m, GateFrame::Raw),
            Err(Error::NonUnitary { .. })
        ));
    }
}
