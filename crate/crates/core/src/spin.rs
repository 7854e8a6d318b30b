//! Product-basis conventions, embedded Pauli operators, and spin states.
//!
//! Basis index layout: site 0 occupies the most significant bit, bit value 0
//! means |up> and bit value 1 means |down>, so index 0 is |up up .. up> and
//! `sigma^Z_j = diag(+1, -1)` on its own site. The ladder operators carry the
//! un-halved convention `sigma^+- = sigma^X +- i sigma^Y`; `sigma^+` has a
//! single entry 2 at (up, down).

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::{CMatrix, CVector};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Hilbert-space dimension for `n` sites.
#[inline]
pub fn dim(n_sites: usize) -> usize {
    1usize << n_sites
}

/// True if `site` is |up> in basis state `index` (site 0 most significant).
#[inline]
pub fn site_is_up(index: usize, site: usize, n_sites: usize) -> bool {
    (index >> (n_sites - 1 - site)) & 1 == 0
}

/// sigma^Z eigenvalue (+1 or -1) of `site` in basis state `index`.
#[inline]
pub fn sz_value(index: usize, site: usize, n_sites: usize) -> f64 {
    if site_is_up(index, site, n_sites) {
        1.0
    } else {
        -1.0
    }
}

/// Basis index with the listed sites flipped to |down>, all others |up>.
pub fn basis_index_with_down(down_sites: &[usize], n_sites: usize) -> usize {
    let mut idx = 0usize;
    for &s in down_sites {
        idx |= 1 << (n_sites - 1 - s);
    }
    idx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    /// sigma^X + i sigma^Y (entry 2 at (up, down)).
    Plus,
    /// sigma^X - i sigma^Y (entry 2 at (down, up)).
    Minus,
}

impl PauliAxis {
    /// The single-site 2x2 matrix in the {|up>, |down>} basis.
    pub fn single_site(self) -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        let (a01, a10, d0, d1) = match self {
            PauliAxis::X => (C_ONE, C_ONE, C_ZERO, C_ZERO),
            PauliAxis::Y => (-i, i, C_ZERO, C_ZERO),
            PauliAxis::Z => (C_ZERO, C_ZERO, C_ONE, -C_ONE),
            PauliAxis::Plus => (Complex64::new(2.0, 0.0), C_ZERO, C_ZERO, C_ZERO),
            PauliAxis::Minus => (C_ZERO, Complex64::new(2.0, 0.0), C_ZERO, C_ZERO),
        };
        CMatrix::from_row_slice(2, 2, &[d0, a01, a10, d1])
    }

    fn is_hermitian(self) -> bool {
        matches!(self, PauliAxis::X | PauliAxis::Y | PauliAxis::Z)
    }
}

/// A dense operator on the full `2^n` product space.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyOperator {
    matrix: CMatrix,
    n_sites: usize,
    hermitian: bool,
}

impl ManyBodyOperator {
    /// Wraps a matrix, verifying the dimension and, when flagged, hermiticity
    /// to within 1e-12 in Frobenius norm.
    pub fn new(matrix: CMatrix, n_sites: usize, hermitian: bool) -> Result<Self> {
        let d = dim(n_sites);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::InvalidParameter(alloc::format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                d,
                d
            )));
        }
        let op = Self {
            matrix,
            n_sites,
            hermitian,
        };
        if hermitian {
            let r = op.hermiticity_residual();
            if r >= 1e-12 {
                return Err(Error::NonHermitian { residual: r });
            }
        }
        Ok(op)
    }

    pub fn zeros(n_sites: usize, hermitian: bool) -> Self {
        Self {
            matrix: CMatrix::zeros(dim(n_sites), dim(n_sites)),
            n_sites,
            hermitian,
        }
    }

    pub fn identity(n_sites: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim(n_sites), dim(n_sites)),
            n_sites,
            hermitian: true,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    /// ||M - M^dagger||_F.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                let d = self.matrix[(i, j)] - self.matrix[(j, i)].conj();
                acc += d.norm_sqr();
            }
        }
        num_traits::Float::sqrt(acc)
    }

    /// ||A - B||_F.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            matrix: &self.matrix * factor,
            n_sites: self.n_sites,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n_sites, other.n_sites);
        Self {
            matrix: &self.matrix + &other.matrix,
            n_sites: self.n_sites,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n_sites, other.n_sites);
        Self {
            matrix: &self.matrix - &other.matrix,
            n_sites: self.n_sites,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n_sites, other.n_sites);
        Self {
            matrix: &self.matrix * &other.matrix,
            n_sites: self.n_sites,
            hermitian: false,
        }
    }

    /// Commutator [A, B].
    pub fn commutator(&self, other: &Self) -> Self {
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        Self {
            matrix: ab - ba,
            n_sites: self.n_sites,
            hermitian: false,
        }
    }

    pub fn apply(&self, state: &SpinState) -> SpinState {
        debug_assert_eq!(self.n_sites, state.n_sites());
        SpinState {
            amplitudes: &self.matrix * state.amplitudes(),
            n_sites: self.n_sites,
        }
    }

    /// <psi| M |psi> (real part; meaningful for hermitian operators).
    pub fn expectation(&self, state: &SpinState) -> f64 {
        let v = &self.matrix * state.amplitudes();
        state
            .amplitudes()
            .iter()
            .zip(v.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }
}

/// I x .. x sigma^axis x .. x I with the Pauli at position `site`.
pub fn embed_pauli(axis: PauliAxis, site: usize, n_sites: usize) -> Result<ManyBodyOperator> {
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let single = axis.single_site();
    let d = dim(n_sites);
    // The embedded matrix couples index pairs that differ only in `site`'s
    // bit; build it directly instead of folding Kronecker products.
    let mut m = CMatrix::zeros(d, d);
    let bit = 1usize << (n_sites - 1 - site);
    for col in 0..d {
        let cbit = usize::from(col & bit != 0); // 0 = up, 1 = down
        for rbit in 0..2 {
            let entry = single[(rbit, cbit)];
            if !entry.is_zero() {
                let row = (col & !bit) | if rbit == 1 { bit } else { 0 };
                m[(row, col)] = entry;
            }
        }
    }
    ManyBodyOperator::new(m, n_sites, axis.is_hermitian())
}

/// Sum of sigma^Z over all sites (total magnetization).
pub fn total_sz(n_sites: usize) -> ManyBodyOperator {
    let d = dim(n_sites);
    let mut m = CMatrix::zeros(d, d);
    for idx in 0..d {
        let tot: f64 = (0..n_sites).map(|s| sz_value(idx, s, n_sites)).sum();
        m[(idx, idx)] = Complex64::new(tot, 0.0);
    }
    ManyBodyOperator {
        matrix: m,
        n_sites,
        hermitian: true,
    }
}

/// Normalized state over the `2^n` product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    amplitudes: CVector,
    n_sites: usize,
}

impl SpinState {
    /// Product basis state |index>.
    pub fn basis(index: usize, n_sites: usize) -> Result<Self> {
        let d = dim(n_sites);
        if index >= d {
            return Err(Error::InvalidParameter(alloc::format!(
                "basis index {index} out of range for dimension {d}"
            )));
        }
        let mut v = CVector::zeros(d);
        v[index] = C_ONE;
        Ok(Self {
            amplitudes: v,
            n_sites,
        })
    }

    /// Product state with the listed sites |down> and the rest |up>.
    pub fn product_with_down(down_sites: &[usize], n_sites: usize) -> Result<Self> {
        for &s in down_sites {
            if s >= n_sites {
                return Err(Error::SiteOutOfRange { site: s, n_sites });
            }
        }
        Self::basis(basis_index_with_down(down_sites, n_sites), n_sites)
    }

    /// Wraps an amplitude vector, requiring normalization within 1e-12.
    pub fn from_amplitudes(amplitudes: CVector, n_sites: usize) -> Result<Self> {
        if amplitudes.len() != dim(n_sites) {
            return Err(Error::InvalidParameter(alloc::format!(
                "amplitude vector has length {}, expected {}",
                amplitudes.len(),
                dim(n_sites)
            )));
        }
        let state = Self {
            amplitudes,
            n_sites,
        };
        let n = state.norm();
        if num_traits::Float::abs(n - 1.0) >= 1e-12 {
            return Err(Error::InvalidParameter(alloc::format!(
                "state is not normalized (norm {n})"
            )));
        }
        Ok(state)
    }

    pub(crate) fn from_vector_unchecked(amplitudes: CVector, n_sites: usize) -> Self {
        Self {
            amplitudes,
            n_sites,
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// Probability that `site` is |up>.
    pub fn prob_site_up(&self, site: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(idx, _)| site_is_up(*idx, site, self.n_sites))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// <sigma^Z_site>.
    pub fn sz_expectation(&self, site: usize) -> f64 {
        2.0 * self.prob_site_up(site) - 1.0
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// All basis indices of states having the given sites |up>.
pub fn indices_with_sites_up(sites: &[usize], n_sites: usize) -> Vec<usize> {
    (0..dim(n_sites))
        .filter(|&idx| sites.iter().all(|&s| site_is_up(idx, s, n_sites)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag_re(op: &ManyBodyOperator) -> Vec<f64> {
        (0..op.matrix().nrows()).map(|i| op.matrix()[(i, i)].re).collect()
    }

    #[test]
    fn embedded_z_placement() {
        let z0 = embed_pauli(PauliAxis::Z, 0, 1).unwrap();
        assert_eq!(diag_re(&z0), vec![1.0, -1.0]);
        let z1 = embed_pauli(PauliAxis::Z, 1, 2).unwrap();
        assert_eq!(diag_re(&z1), vec![1.0, -1.0, 1.0, -1.0]);
        let z0 = embed_pauli(PauliAxis::Z, 0, 2).unwrap();
        assert_eq!(diag_re(&z0), vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn sigma_plus_entry_is_two() {
        let p = embed_pauli(PauliAxis::Plus, 0, 1).unwrap();
        // row |up> = 0, col |down> = 1
        assert_eq!(p.matrix()[(0, 1)], Complex64::new(2.0, 0.0));
        assert_eq!(p.matrix()[(1, 0)], Complex64::new(0.0, 0.0));
        let m = embed_pauli(PauliAxis::Minus, 0, 1).unwrap();
        assert_eq!(m.matrix()[(1, 0)], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn embed_matches_kron_of_xy() {
        // spot-check an off-diagonal axis at an interior site
        let y1 = embed_pauli(PauliAxis::Y, 1, 3).unwrap();
        let i2 = CMatrix::identity(2, 2);
        let expected = i2.kronecker(&PauliAxis::Y.single_site()).kronecker(&i2);
        assert!((y1.matrix() - expected).norm() < 1e-15);
    }

    #[test]
    fn site_out_of_range() {
        assert_eq!(
            embed_pauli(PauliAxis::X, 3, 3),
            Err(Error::SiteOutOfRange { site: 3, n_sites: 3 })
        );
    }

    #[test]
    fn distant_paulis_commute() {
        for (a, b) in [(PauliAxis::X, PauliAxis::Y), (PauliAxis::Plus, PauliAxis::Z)] {
            let pa = embed_pauli(a, 0, 3).unwrap();
            let pb = embed_pauli(b, 2, 3).unwrap();
            assert!(pa.commutator(&pb).matrix().norm() < 1e-15);
        }
    }

    #[test]
    fn basis_state_and_sz() {
        // |down up down>: index 5 for 3 sites
        let s = SpinState::product_with_down(&[0, 2], 3).unwrap();
        assert_eq!(s.probability(5), 1.0);
        assert_abs_diff_eq!(s.sz_expectation(0), -1.0);
        assert_abs_diff_eq!(s.sz_expectation(1), 1.0);
        assert_abs_diff_eq!(s.sz_expectation(2), -1.0);
    }

    #[test]
    fn non_normalized_rejected() {
        let v = CVector::from_element(2, Complex64::new(1.0, 0.0));
        assert!(SpinState::from_amplitudes(v, 1).is_err());
    }
}
