//! Chain specification and the XXZ Hamiltonians.
//!
//! `H_single = sum_j B_j Z_j` carries the Zeeman energies and
//! `H_int = J sum_<jk> (X_j X_k + Y_j Y_k + alpha Z_j Z_k)` the exchange. The
//! same content split by diagonality gives `h_ising` (fields plus ZZ, diagonal
//! in the product basis) and `h_flip_flop` (the XY hopping,
//! `(J/2) sum (sigma+ sigma- + sigma- sigma+)` in the un-halved ladder
//! convention); the two splits sum to the same total by construction.

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{dim, sz_value, ManyBodyOperator};
use crate::CMatrix;

/// Default cap on the site count; 2^14 is the largest dense dimension the
/// toolkit is meant to handle.
pub const DEFAULT_SITE_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Ring,
    Open,
}

/// Nearest-neighbor chain with per-site Zeeman energies.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    n_sites: usize,
    topology: Topology,
    j_xy: f64,
    alpha: f64,
    zeeman: Vec<f64>,
}

impl ChainSpec {
    pub fn new(
        n_sites: usize,
        topology: Topology,
        j_xy: f64,
        alpha: f64,
        zeeman: Vec<f64>,
    ) -> Result<Self> {
        Self::with_site_cap(n_sites, topology, j_xy, alpha, zeeman, DEFAULT_SITE_CAP)
    }

    pub fn with_site_cap(
        n_sites: usize,
        topology: Topology,
        j_xy: f64,
        alpha: f64,
        zeeman: Vec<f64>,
        site_cap: usize,
    ) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidChain(format!(
                "need at least 2 sites, got {n_sites}"
            )));
        }
        if n_sites > site_cap {
            return Err(Error::InvalidChain(format!(
                "{n_sites} sites exceeds the cap of {site_cap}"
            )));
        }
        // Zero coupling is admitted so degenerate limits (pure Zeeman
        // evolution, vanishing residual) stay expressible.
        if !(j_xy >= 0.0) || !j_xy.is_finite() {
            return Err(Error::InvalidChain(format!(
                "j_xy must be non-negative, got {j_xy}"
            )));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidChain(format!(
                "alpha must be non-negative, got {alpha}"
            )));
        }
        if zeeman.len() != n_sites {
            return Err(Error::InvalidChain(format!(
                "zeeman list has {} entries for {} sites",
                zeeman.len(),
                n_sites
            )));
        }
        if zeeman.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidChain("zeeman energies must be finite".into()));
        }
        Ok(Self {
            n_sites,
            topology,
            j_xy,
            alpha,
            zeeman,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn j_xy(&self) -> f64 {
        self.j_xy
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn j_z(&self) -> f64 {
        self.alpha * self.j_xy
    }

    pub fn zeeman(&self) -> &[f64] {
        &self.zeeman
    }

    /// Nearest-neighbor bonds; rings wrap modulo N.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        edge_list(self.n_sites, self.topology)
    }

    /// `H_single = sum_j B_j Z_j` (diagonal).
    pub fn h_single(&self) -> ManyBodyOperator {
        let d = dim(self.n_sites);
        let mut m = CMatrix::zeros(d, d);
        for idx in 0..d {
            let e: f64 = self
                .zeeman
                .iter()
                .enumerate()
                .map(|(s, b)| b * sz_value(idx, s, self.n_sites))
                .sum();
            m[(idx, idx)] = Complex64::new(e, 0.0);
        }
        ManyBodyOperator::new(m, self.n_sites, true).expect("diagonal is hermitian")
    }

    /// `H_int = J sum (XX + YY + alpha ZZ)` over the chain bonds.
    pub fn h_int(&self) -> ManyBodyOperator {
        exchange_hamiltonian(self.n_sites, &self.edges(), self.j_xy, self.alpha)
    }

    /// The diagonal part: fields plus Ising coupling,
    /// `sum B_j Z_j + J alpha sum Z_j Z_k`.
    pub fn h_ising(&self) -> ManyBodyOperator {
        let d = dim(self.n_sites);
        let edges = self.edges();
        let mut m = CMatrix::zeros(d, d);
        for idx in 0..d {
            let mut e: f64 = self
                .zeeman
                .iter()
                .enumerate()
                .map(|(s, b)| b * sz_value(idx, s, self.n_sites))
                .sum();
            for &(u, v) in &edges {
                e += self.j_xy
                    * self.alpha
                    * sz_value(idx, u, self.n_sites)
                    * sz_value(idx, v, self.n_sites);
            }
            m[(idx, idx)] = Complex64::new(e, 0.0);
        }
        ManyBodyOperator::new(m, self.n_sites, true).expect("diagonal is hermitian")
    }

    /// The off-diagonal part: `(J/2) sum (sigma+ sigma- + sigma- sigma+)`,
    /// equal to `J sum (XX + YY)`.
    pub fn h_flip_flop(&self) -> ManyBodyOperator {
        exchange_hamiltonian(self.n_sites, &self.edges(), self.j_xy, 0.0)
    }

    /// `H_single + H_int`.
    pub fn h_total(&self) -> ManyBodyOperator {
        self.h_single().add(&self.h_int())
    }
}

/// Bond list for a chain; shared with the graph builders in [`crate::geometry`].
pub fn edge_list(n_sites: usize, topology: Topology) -> Vec<(usize, usize)> {
    let bonds = match topology {
        Topology::Ring => n_sites,
        Topology::Open => n_sites - 1,
    };
    (0..bonds).map(|j| (j, (j + 1) % n_sites)).collect()
}

/// `J sum_edges (XX + YY + alpha ZZ)` on an arbitrary edge list.
///
/// The flip-flop entries connect |..up down..> and |..down up..| with matrix
/// element `2 J`; the ZZ part sits on the diagonal.
pub fn exchange_hamiltonian(
    n_sites: usize,
    edges: &[(usize, usize)],
    j_xy: f64,
    alpha: f64,
) -> ManyBodyOperator {
    let d = dim(n_sites);
    let mut m = CMatrix::zeros(d, d);
    for &(u, v) in edges {
        debug_assert!(u < n_sites && v < n_sites && u != v);
        let bit_u = 1usize << (n_sites - 1 - u);
        let bit_v = 1usize << (n_sites - 1 - v);
        for idx in 0..d {
            let su = sz_value(idx, u, n_sites);
            let sv = sz_value(idx, v, n_sites);
            m[(idx, idx)] += Complex64::new(j_xy * alpha * su * sv, 0.0);
            // XX + YY flips anti-aligned pairs
            if su * sv < 0.0 {
                let other = idx ^ bit_u ^ bit_v;
                m[(other, idx)] += Complex64::new(2.0 * j_xy, 0.0);
            }
        }
    }
    ManyBodyOperator::new(m, n_sites, true).expect("exchange is hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::total_sz;
    use approx::assert_abs_diff_eq;

    fn spec(n: usize, topo: Topology, alpha: f64, zeeman: Vec<f64>) -> ChainSpec {
        ChainSpec::new(n, topo, 1.0, alpha, zeeman).unwrap()
    }

    #[test]
    fn h_single_diagonals() {
        let s = spec(2, Topology::Open, 1.0, alloc::vec![1.0, 2.0]);
        let h = s.h_single();
        let d: Vec<f64> = (0..4).map(|i| h.matrix()[(i, i)].re).collect();
        assert_eq!(d, alloc::vec![3.0, -1.0, 1.0, -3.0]);

        let z = spec(2, Topology::Open, 1.0, alloc::vec![0.0, 0.0]);
        assert_abs_diff_eq!(z.h_single().matrix().norm(), 0.0);
    }

    #[test]
    fn pair_eigenvalues() {
        // isotropic pair: diagonal +-alpha J, off-diagonal 2J -> {1,1,1,-3}
        let s = spec(2, Topology::Open, 1.0, alloc::vec![0.0, 0.0]);
        let mut ev: Vec<f64> = s
            .h_int()
            .matrix()
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        ev.sort_by(f64::total_cmp);
        for (got, want) in ev.iter().zip([-3.0, 1.0, 1.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }

        // XY pair: {-2, 0, 0, 2}
        let s = spec(2, Topology::Open, 0.0, alloc::vec![0.0, 0.0]);
        let mut ev: Vec<f64> = s
            .h_int()
            .matrix()
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        ev.sort_by(f64::total_cmp);
        for (got, want) in ev.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn ring_vs_open_differ_by_wrap_bond() {
        let ring = spec(3, Topology::Ring, 0.7, alloc::vec![0.0; 3]);
        let open = spec(3, Topology::Open, 0.7, alloc::vec![0.0; 3]);
        let diff = ring.h_int().sub(&open.h_int());
        let wrap = exchange_hamiltonian(3, &[(2, 0)], 1.0, 0.7);
        assert!(diff.frobenius_distance(&wrap) < 1e-14);
    }

    #[test]
    fn split_reassembles_total() {
        let s = spec(4, Topology::Ring, 0.7, alloc::vec![0.3, -0.2, 1.1, 0.9]);
        let lhs = s.h_ising().add(&s.h_flip_flop());
        assert!(lhs.frobenius_distance(&s.h_total()) < 1e-12);
    }

    #[test]
    fn flip_flop_elements_are_two_j() {
        let s = spec(2, Topology::Open, 1.0, alloc::vec![0.0, 0.0]);
        let h2 = s.h_flip_flop();
        // |up down> = 1, |down up> = 2
        assert_abs_diff_eq!(h2.matrix()[(2, 1)].re, 2.0);
        assert_abs_diff_eq!(h2.matrix()[(1, 2)].re, 2.0);
        assert_abs_diff_eq!(h2.matrix()[(0, 0)].norm(), 0.0);
    }

    #[test]
    fn h_ising_is_diagonal() {
        let s = spec(3, Topology::Ring, 1.0, alloc::vec![0.5, -0.5, 0.25]);
        let h1 = s.h_ising();
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert_eq!(h1.matrix()[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn magnetization_conserved() {
        let s = spec(4, Topology::Ring, 0.7, alloc::vec![1.0, -0.3, 0.2, 0.9]);
        let c = s.h_int().commutator(&total_sz(4));
        assert!(c.matrix().norm() < 1e-12);
    }

    #[test]
    fn validation_errors() {
        assert!(ChainSpec::new(1, Topology::Open, 1.0, 0.0, alloc::vec![0.0]).is_err());
        assert!(ChainSpec::new(15, Topology::Ring, 1.0, 0.0, alloc::vec![0.0; 15]).is_err());
        assert!(ChainSpec::new(2, Topology::Open, -1.0, 0.0, alloc::vec![0.0; 2]).is_err());
        assert!(ChainSpec::new(2, Topology::Open, 1.0, -0.5, alloc::vec![0.0; 2]).is_err());
        assert!(ChainSpec::new(2, Topology::Open, 1.0, 0.0, alloc::vec![f64::NAN; 2]).is_err());
        assert!(ChainSpec::new(2, Topology::Open, 1.0, 0.0, alloc::vec![0.0; 3]).is_err());
    }
}
