//! The resonant qubit-barrier-qubit segment and its primitive two-qubit gate.
//!
//! Three spins (sites 0, 1, 2 here; the outer two carry qubits, the center is
//! the barrier) interact through two anisotropic exchange bonds while the
//! outer spins' frozen neighbors contribute an Ising shift that is absorbed
//! into the effective Zeeman energy `a` of the qubit spins. On resonance
//! (`a = b`) all computational inputs return the barrier to |up>
//! simultaneously at `t_R = pi (8 J_XY^2 + J_Z^2)^{-1/2}`, completing a gate.
//!
//! The 8x8 Hamiltonian built from [`crate::chain`] is authoritative; the
//! closed-form 3x3 block expressions are kept as cross-checks since the block
//! picture is easy to transcribe wrongly.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use num_traits::Float;

use crate::chain::{ChainSpec, Topology};
use crate::error::{Error, Result};
use crate::evolution::{propagator_exact, Propagator};
use crate::gate::{kron2, phase_aligned_distance4, rz, Gate4, GateFrame, TwoQubitGate};
use crate::spin::ManyBodyOperator;

/// Computational basis states of the triplet as 3-spin product indices:
/// |00> = |down up down>, |01> = |down up up>, |10> = |up up down>,
/// |11> = |up up up>.
pub const COMP_INDICES_3: [usize; 4] = [0b101, 0b100, 0b001, 0b000];

/// 3-spin product indices with the barrier (site 1) in |up>.
pub const BARRIER_UP_INDICES_3: [usize; 4] = [0b000, 0b001, 0b100, 0b101];

/// Up-subspace product indices {|down up up>, |up down up>, |up up down>}.
const UP_BLOCK: [usize; 3] = [0b100, 0b010, 0b001];
/// Down-subspace product indices {|up down down>, |down up down>, |down down up>}.
const DOWN_BLOCK: [usize; 3] = [0b011, 0b101, 0b110];

/// Resonance Zeeman value used when callers do not supply one. The raw gate
/// frame depends on it; the passive-referenced gate does not.
pub const DEFAULT_RESONANCE_ZEEMAN: f64 = 0.3;

/// Parameters of the resonant triplet.
///
/// `a` is the effective Zeeman energy of the qubit spins (bare energy plus
/// `J_Z` from one frozen neighbor each), `b` the barrier Zeeman energy. The
/// derived quantities `p`, `q`, `S_p`, `S_q` are recomputed on read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletParams {
    pub a: f64,
    pub b: f64,
    pub j_xy: f64,
    pub j_z: f64,
}

impl TripletParams {
    pub fn new(a: f64, b: f64, j_xy: f64, j_z: f64) -> Result<Self> {
        if !(j_xy > 0.0) || !j_xy.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!(
                "j_xy must be positive, got {j_xy}"
            )));
        }
        if !(j_z >= 0.0) || !j_z.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!(
                "j_z must be non-negative, got {j_z}"
            )));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter("zeeman energies must be finite".into()));
        }
        Ok(Self { a, b, j_xy, j_z })
    }

    /// On-resonance parameters (`a = b`).
    pub fn resonant(zeeman: f64, j_xy: f64, j_z: f64) -> Result<Self> {
        Self::new(zeeman, zeeman, j_xy, j_z)
    }

    pub fn p(&self) -> f64 {
        (self.a - self.b - self.j_z) / self.j_xy
    }

    pub fn q(&self) -> f64 {
        (self.b - self.a - self.j_z) / self.j_xy
    }

    pub fn s_p(&self) -> f64 {
        Float::sqrt(8.0 + self.p() * self.p())
    }

    pub fn s_q(&self) -> f64 {
        Float::sqrt(8.0 + self.q() * self.q())
    }

    pub fn alpha(&self) -> f64 {
        self.j_z / self.j_xy
    }
}

/// The 8x8 Hamiltonian `a (Z_0 + Z_2) + b Z_1 + exchange(bond 01, bond 12)`.
pub fn triplet_hamiltonian(params: &TripletParams) -> ManyBodyOperator {
    let spec = ChainSpec::new(
        3,
        Topology::Open,
        params.j_xy,
        params.alpha(),
        alloc::vec![params.a, params.b, params.a],
    )
    .expect("triplet params validated on construction");
    spec.h_total()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    /// Total sigma^Z = +1: {|down up up>, |up down up>, |up up down>}.
    Up,
    /// Total sigma^Z = -1: {|up down down>, |down up down>, |down down up>}.
    Down,
}

/// Eigensystem of one 3x3 magnetization block, labeled by structure.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceEigensystem {
    /// The (1, 0, -1)/sqrt(2) mode; its energy equals the edge diagonal.
    pub antisymmetric: (f64, Vector3<Complex64>),
    /// Lower symmetric mode, unnormalized form (1, (x - S)/2, 1).
    pub minus: (f64, Vector3<Complex64>),
    /// Upper symmetric mode, unnormalized form (1, (x + S)/2, 1).
    pub plus: (f64, Vector3<Complex64>),
}

/// Extracts the block of `triplet_hamiltonian` for one subspace.
pub fn subspace_block(params: &TripletParams, which: Subspace) -> Matrix3<Complex64> {
    let h = triplet_hamiltonian(params);
    let idx = match which {
        Subspace::Up => UP_BLOCK,
        Subspace::Down => DOWN_BLOCK,
    };
    Matrix3::from_fn(|r, c| h.matrix()[(idx[r], idx[c])])
}

/// Diagonalizes one magnetization block of the triplet directly.
pub fn subspace_eigensystem(params: &TripletParams, which: Subspace) -> SubspaceEigensystem {
    let block = subspace_block(params, which);
    let se = block.symmetric_eigen();
    // sort ascending by energy
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let pair = |k: usize| -> (f64, Vector3<Complex64>) {
        let mut v = Vector3::from_fn(|i, _| se.eigenvectors[(i, order[k])]);
        // fix the arbitrary eigenvector phase: first component real positive
        let lead = v[0];
        if lead.norm() > 1e-12 {
            v *= lead.conj() / Complex64::new(lead.norm(), 0.0);
        }
        (se.eigenvalues[order[k]], v)
    };
    let (e0, v0) = pair(0);
    let (e1, v1) = pair(1);
    let (e2, v2) = pair(2);
    // the antisymmetric mode is the one with vanishing central component
    let mut modes = [(e0, v0), (e1, v1), (e2, v2)];
    let anti_pos = (0..3)
        .min_by(|&i, &j| modes[i].1[1].norm().total_cmp(&modes[j].1[1].norm()))
        .unwrap();
    let antisymmetric = modes[anti_pos].clone();
    modes[anti_pos].0 = f64::INFINITY;
    let mut rest: alloc::vec::Vec<(f64, Vector3<Complex64>)> = modes
        .iter()
        .filter(|m| m.0.is_finite())
        .cloned()
        .collect();
    rest.sort_by(|x, y| x.0.total_cmp(&y.0));
    SubspaceEigensystem {
        antisymmetric,
        minus: rest[0].clone(),
        plus: rest[1].clone(),
    }
}

/// First simultaneous revival time `t_R = pi (8 J_XY^2 + J_Z^2)^{-1/2}` at
/// resonance.
pub fn revival_time(j_xy: f64, j_z: f64) -> f64 {
    core::f64::consts::PI / Float::sqrt(8.0 * j_xy * j_xy + j_z * j_z)
}

/// Gate phase `phi = (pi/2) J_Z (8 J_XY^2 + J_Z^2)^{-1/2}`.
///
/// Equal to the textbook form `(pi/2)(8 J_XY^2 / J_Z^2 + 1)^{-1/2}` for
/// `J_Z > 0` but regular at `J_Z = 0`.
pub fn gate_phase(j_xy: f64, j_z: f64) -> f64 {
    core::f64::consts::FRAC_PI_2 * j_z / Float::sqrt(8.0 * j_xy * j_xy + j_z * j_z)
}

/// Dressing angle `psi = (pi/4)(1 - J_Z (8 J_XY^2 + J_Z^2)^{-1/2})`, the
/// per-qubit Z rotation that symmetrizes the primitive (regularized like
/// [`gate_phase`]).
pub fn dressing_angle(j_xy: f64, j_z: f64) -> f64 {
    core::f64::consts::FRAC_PI_4 * (1.0 - j_z / Float::sqrt(8.0 * j_xy * j_xy + j_z * j_z))
}

/// The closed-form primitive gate in the published phase convention:
///
/// ```text
/// [ 1    0    0    0 ]
/// [ 0  iQs   Qc    0 ]       Q = -e^{i phi},  s = sin phi,  c = cos phi,
/// [ 0   Qc  iQs    0 ]       W = -e^{-2 i phi}
/// [ 0    0    0    W ]
/// ```
pub fn primitive_gate_analytic(j_xy: f64, j_z: f64) -> TwoQubitGate {
    let phi = gate_phase(j_xy, j_z);
    let q = -Complex64::from_polar(1.0, phi);
    let s = Complex64::new(Float::sin(phi), 0.0);
    let c = Complex64::new(Float::cos(phi), 0.0);
    let w = -Complex64::from_polar(1.0, -2.0 * phi);
    let i = Complex64::new(0.0, 1.0);
    let mut m = Gate4::zeros();
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    m[(1, 1)] = i * q * s;
    m[(1, 2)] = q * c;
    m[(2, 1)] = q * c;
    m[(2, 2)] = i * q * s;
    m[(3, 3)] = w;
    TwoQubitGate::new(m, GateFrame::PassiveReferenced).expect("analytic gate is unitary")
}

/// The XY-limit primitive `U_P` (the `J_Z = 0` special case).
pub fn xy_primitive() -> TwoQubitGate {
    primitive_gate_analytic(1.0, 0.0)
}

/// Single-qubit-dressed primitive `Z_1(psi) Z_2(psi) U`; in the XY limit this
/// is the iSWAP up to a global phase.
pub fn dressed_gate(j_xy: f64, j_z: f64) -> TwoQubitGate {
    let psi = dressing_angle(j_xy, j_z);
    let d = kron2(&rz(psi), &rz(psi));
    let u = primitive_gate_analytic(j_xy, j_z);
    TwoQubitGate::new(d * u.matrix(), GateFrame::PassiveReferenced)
        .expect("dressing preserves unitarity")
}

/// Rewrites a raw simulated gate in the published phase convention.
///
/// The raw frame differs from the published one by the (identical) Z frame of
/// each qubit and a global phase — two free angles. They are fixed by
/// requiring the |00> amplitude to be exactly 1 and the flip-flop amplitude's
/// phase to be `pi + phi` (the phase of `Qc` with `c > 0`). The two remaining
/// phases (middle diagonal and |11>) are untouched, so agreement there is a
/// genuine check of the simulated dynamics, as is every entry modulus.
pub fn to_passive_frame(raw: &Gate4, j_xy: f64, j_z: f64) -> Gate4 {
    let phi = gate_phase(j_xy, j_z);
    let gamma = core::f64::consts::PI + phi - raw[(2, 1)].arg();
    let theta = (raw[(0, 0)].arg() + gamma) / 2.0;
    let dress = kron2(&rz(-theta), &rz(-theta));
    dress * raw * Complex64::from_polar(1.0, gamma)
}

/// Result of simulating the primitive gate protocol on the isolated triplet.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveGateSim {
    /// Gate in the bare simulation frame (depends on the resonance Zeeman).
    pub raw: TwoQubitGate,
    /// Gate rewritten in the published phase convention.
    pub passive_referenced: TwoQubitGate,
    /// Smallest barrier-revival probability over the four inputs at `t_R`.
    pub min_revival_probability: f64,
}

/// Simulates the abrupt gate protocol at resonance with the default Zeeman.
pub fn primitive_gate_numeric(j_xy: f64, j_z: f64) -> Result<PrimitiveGateSim> {
    primitive_gate_numeric_at(j_xy, j_z, DEFAULT_RESONANCE_ZEEMAN)
}

/// Simulates the abrupt gate protocol at resonance Zeeman `a = b = zeeman`.
pub fn primitive_gate_numeric_at(j_xy: f64, j_z: f64, zeeman: f64) -> Result<PrimitiveGateSim> {
    let params = TripletParams::resonant(zeeman, j_xy, j_z)?;
    let h = triplet_hamiltonian(&params);
    let u = propagator_exact(&h, revival_time(j_xy, j_z))?;

    let mut min_revival: f64 = 1.0;
    for &cin in &COMP_INDICES_3 {
        let p_up: f64 = BARRIER_UP_INDICES_3
            .iter()
            .map(|&o| u.amplitude(o, cin).norm_sqr())
            .sum();
        min_revival = min_revival.min(p_up);
    }
    if 1.0 - min_revival > 1e-8 {
        return Err(Error::RevivalFailure {
            leakage: 1.0 - min_revival,
        });
    }

    let raw_m = extract_gate(&u, &COMP_INDICES_3);
    let raw = TwoQubitGate::new(raw_m, GateFrame::Raw)?;
    let passive = TwoQubitGate::new(
        to_passive_frame(&raw_m, j_xy, j_z),
        GateFrame::PassiveReferenced,
    )?;
    Ok(PrimitiveGateSim {
        raw,
        passive_referenced: passive,
        min_revival_probability: min_revival,
    })
}

/// 4x4 block of a propagator over the listed computational indices.
pub fn extract_gate(u: &Propagator, comp: &[usize; 4]) -> Gate4 {
    Gate4::from_fn(|r, c| u.amplitude(comp[r], comp[c]))
}

/// Smallest barrier-revival probability over the computational inputs at
/// time `t` (resonant triplet).
pub fn min_revival_probability(params: &TripletParams, t: f64) -> Result<f64> {
    let h = triplet_hamiltonian(params);
    let u = propagator_exact(&h, t)?;
    let mut min_p: f64 = 1.0;
    for &cin in &COMP_INDICES_3 {
        let p: f64 = BARRIER_UP_INDICES_3
            .iter()
            .map(|&o| u.amplitude(o, cin).norm_sqr())
            .sum();
        min_p = min_p.min(p);
    }
    Ok(min_p)
}

/// Five-spin embedding check: the triplet gate survives inside a chain whose
/// outer spins are detuned by `big_delta` and start in |up>.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenNeighborReport {
    /// Reduced 4x4 gate on the qubit pair, bare frame.
    pub reduced_gate: Gate4,
    /// Phase-aligned distance between the reduced gate and the isolated
    /// 3-spin gate (both bare frame).
    pub distance_to_triplet: f64,
    /// `distance_to_triplet / (J / big_delta)`.
    pub distance_constant: f64,
    /// Smallest barrier-revival probability over the four inputs at `t_R`.
    pub min_barrier_revival: f64,
    /// Worst final `<sigma^Z>` of the two edge spins over the four inputs.
    pub worst_edge_sz: f64,
}

/// Computational indices of the 5-spin chain (qubits at sites 1 and 3;
/// sites 0, 2, 4 in |up>): |00>, |01>, |10>, |11>.
pub const COMP_INDICES_5: [usize; 4] = [0b01010, 0b01000, 0b00010, 0b00000];

pub fn frozen_neighbor_check(j_xy: f64, j_z: f64, big_delta: f64) -> Result<FrozenNeighborReport> {
    frozen_neighbor_check_at(j_xy, j_z, big_delta, DEFAULT_RESONANCE_ZEEMAN)
}

pub fn frozen_neighbor_check_at(
    j_xy: f64,
    j_z: f64,
    big_delta: f64,
    bare_zeeman: f64,
) -> Result<FrozenNeighborReport> {
    if !(big_delta > 0.0) || !big_delta.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "big_delta must be positive, got {big_delta}"
        )));
    }
    let a_bare = bare_zeeman;
    let a_eff = a_bare + j_z; // one frozen neighbor per qubit spin
    let b_res = a_eff;
    let spec = ChainSpec::new(
        5,
        Topology::Open,
        j_xy,
        j_z / j_xy,
        alloc::vec![a_bare + big_delta, a_bare, b_res, a_bare, a_bare + big_delta],
    )?;
    let t_r = revival_time(j_xy, j_z);
    let u = propagator_exact(&spec.h_total(), t_r)?;

    let reduced = extract_gate(&u, &COMP_INDICES_5);
    let triplet = primitive_gate_numeric_at(j_xy, j_z, a_eff)?;
    let distance = phase_aligned_distance4(&reduced, triplet.raw.matrix());

    let n = 5;
    let barrier_up = crate::spin::indices_with_sites_up(&[2], n);
    let mut min_barrier: f64 = 1.0;
    let mut worst_edge: f64 = 1.0;
    for &cin in &COMP_INDICES_5 {
        let p_bar: f64 = barrier_up
            .iter()
            .map(|&o| u.amplitude(o, cin).norm_sqr())
            .sum();
        min_barrier = min_barrier.min(p_bar);
        let state = u.apply(&crate::spin::SpinState::basis(cin, n)?);
        worst_edge = worst_edge.min(state.sz_expectation(0));
        worst_edge = worst_edge.min(state.sz_expectation(4));
    }

    Ok(FrozenNeighborReport {
        reduced_gate: reduced,
        distance_to_triplet: distance,
        distance_constant: distance * big_delta / j_xy,
        min_barrier_revival: min_barrier,
        worst_edge_sz: worst_edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{iswap, phase_aligned_distance4};
    use approx::assert_abs_diff_eq;

    #[test]
    fn uuu_diagonal_energy() {
        // direct-construction oracle: zeeman 2a + b plus two aligned bonds 2 J_Z
        let p = TripletParams::new(0.4, 0.9, 1.0, 0.7).unwrap();
        let h = triplet_hamiltonian(&p);
        assert_abs_diff_eq!(
            h.matrix()[(0, 0)].re,
            2.0 * 0.4 + 0.9 + 2.0 * 0.7,
            epsilon = 1e-12
        );
        // |up up up> and |down down down> are eigenstates
        for idx in [0usize, 7] {
            for row in 0..8 {
                if row != idx {
                    assert_eq!(h.matrix()[(row, idx)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn blocks_do_not_mix() {
        let p = TripletParams::new(0.4, 0.9, 1.0, 0.7).unwrap();
        let h = triplet_hamiltonian(&p);
        for &u in &UP_BLOCK {
            for &d in &DOWN_BLOCK {
                assert_eq!(h.matrix()[(u, d)], Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn up_block_matches_closed_form() {
        // b I + 2 J [[0,1,0],[1,p,1],[0,1,0]]
        let p = TripletParams::new(0.4, 0.9, 1.0, 0.7).unwrap();
        let block = subspace_block(&p, Subspace::Up);
        assert_abs_diff_eq!(block[(0, 0)].re, p.b, epsilon = 1e-12);
        assert_abs_diff_eq!(block[(2, 2)].re, p.b, epsilon = 1e-12);
        assert_abs_diff_eq!(
            block[(1, 1)].re - block[(0, 0)].re,
            2.0 * p.j_xy * p.p(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(block[(0, 1)].re, 2.0 * p.j_xy, epsilon = 1e-12);
        assert_abs_diff_eq!(block[(0, 2)].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn down_block_central_entry() {
        // -b I + 2 J [[0,1,0],[1,q,1],[0,1,0]]; the closed-form energy list
        // in print has a typo, the block itself is unambiguous
        let p = TripletParams::new(0.4, 0.9, 1.0, 0.7).unwrap();
        let block = subspace_block(&p, Subspace::Down);
        assert_abs_diff_eq!(block[(0, 0)].re, -p.b, epsilon = 1e-12);
        assert_abs_diff_eq!(
            block[(1, 1)].re - block[(0, 0)].re,
            2.0 * p.j_xy * p.q(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn eigensystem_structure() {
        let p = TripletParams::resonant(0.3, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(p.p(), 0.0);
        assert_abs_diff_eq!(p.s_p(), Float::sqrt(8.0));
        let es = subspace_eigensystem(&p, Subspace::Up);
        // antisymmetric (1, 0, -1)/sqrt(2) at the edge energy b
        assert_abs_diff_eq!(es.antisymmetric.0, p.b, epsilon = 1e-12);
        assert_abs_diff_eq!(es.antisymmetric.1[1].norm(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            (es.antisymmetric.1[0] + es.antisymmetric.1[2]).norm(),
            0.0,
            epsilon = 1e-10
        );
        // symmetric pair (1, +-sqrt(2), 1)-normalized: central over edge = sqrt(2)
        for mode in [&es.minus, &es.plus] {
            assert_abs_diff_eq!(
                mode.1[1].norm() / mode.1[0].norm(),
                Float::sqrt(2.0),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn eigensystem_gap_at_resonance() {
        let p = TripletParams::resonant(0.3, 1.0, 0.7).unwrap();
        for which in [Subspace::Up, Subspace::Down] {
            let es = subspace_eigensystem(&p, which);
            assert_abs_diff_eq!(
                es.plus.0 - es.minus.0,
                2.0 * Float::sqrt(8.49),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn antisymmetric_energy_is_edge_diagonal_regardless_of_mixing() {
        for (a, b, jz) in [(0.4, 0.9, 0.7), (1.1, -0.3, 1.0), (0.0, 0.0, 0.0)] {
            let p = TripletParams::new(a, b, 1.0, jz).unwrap();
            let block = subspace_block(&p, Subspace::Up);
            let es = subspace_eigensystem(&p, Subspace::Up);
            assert_abs_diff_eq!(es.antisymmetric.0, block[(0, 0)].re, epsilon = 1e-10);
        }
    }

    #[test]
    fn revival_time_values() {
        assert_abs_diff_eq!(
            revival_time(1.0, 0.0),
            core::f64::consts::PI / Float::sqrt(8.0),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(revival_time(1.0, 1.0), core::f64::consts::PI / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            revival_time(1.0, 0.7),
            core::f64::consts::PI / Float::sqrt(8.49),
            epsilon = 1e-15
        );
    }

    #[test]
    fn xy_gate_special_form() {
        let u = primitive_gate_analytic(1.0, 0.0);
        let m = u.matrix();
        assert_abs_diff_eq!((m[(0, 0)] - Complex64::new(1.0, 0.0)).norm(), 0.0);
        assert_abs_diff_eq!((m[(1, 2)] - Complex64::new(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 1)].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((m[(3, 3)] - Complex64::new(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn isotropic_gate_moduli() {
        // J_Z = J_XY: phi = pi/6, |U_01,01| = 1/2, |U_01,10| = sqrt(3)/2
        let u = primitive_gate_analytic(1.0, 1.0);
        assert_abs_diff_eq!(gate_phase(1.0, 1.0), core::f64::consts::PI / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.matrix()[(1, 1)].norm(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            u.matrix()[(1, 2)].norm(),
            Float::sqrt(3.0) / 2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn numeric_matches_analytic_in_passive_frame() {
        for alpha in [0.0, 0.3, 0.7, 1.0] {
            let sim = primitive_gate_numeric(1.0, alpha).unwrap();
            let analytic = primitive_gate_analytic(1.0, alpha);
            assert!(sim.min_revival_probability > 1.0 - 1e-10);
            let d = (sim.passive_referenced.matrix() - analytic.matrix()).norm();
            assert!(d < 1e-9, "alpha={alpha}: entrywise distance {d}");
            assert!(sim.raw.unitarity_residual() < 1e-10);
        }
    }

    #[test]
    fn passive_frame_independent_of_resonance_zeeman() {
        let s1 = primitive_gate_numeric_at(1.0, 0.7, 0.3).unwrap();
        let s2 = primitive_gate_numeric_at(1.0, 0.7, -1.1).unwrap();
        let d = (s1.passive_referenced.matrix() - s2.passive_referenced.matrix()).norm();
        assert!(d < 1e-9, "passive frame drifted with zeeman: {d}");
        // while the raw frames genuinely differ
        assert!(s1.raw.distance(&s2.raw) > 1e-3);
    }

    #[test]
    fn uuu_input_stays_put() {
        let p = TripletParams::resonant(0.3, 1.0, 0.7).unwrap();
        let h = triplet_hamiltonian(&p);
        for t in [0.1, 0.5, 1.0] {
            let u = propagator_exact(&h, t).unwrap();
            assert_abs_diff_eq!(u.amplitude(0, 0).norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn revival_is_first_at_t_r() {
        let p = TripletParams::resonant(0.3, 1.0, 0.7).unwrap();
        let t_r = revival_time(1.0, 0.7);
        for k in 1..=40 {
            let t = 0.95 * t_r * k as f64 / 40.0;
            let min_p = min_revival_probability(&p, t).unwrap();
            assert!(
                min_p < 1.0 - 1e-4,
                "premature revival at t={t}: min_p={min_p}"
            );
        }
    }

    #[test]
    fn dressed_gate_xy_limit_is_iswap() {
        let d = dressed_gate(1.0, 0.0);
        assert!(phase_aligned_distance4(d.matrix(), &iswap()) < 1e-12);
    }

    #[test]
    fn dressed_gate_corner_phases_equal() {
        for alpha in [0.3, 0.7, 1.0] {
            let d = dressed_gate(1.0, alpha);
            let m = d.matrix();
            assert_abs_diff_eq!(m[(0, 0)].arg(), m[(3, 3)].arg(), epsilon = 1e-12);
            assert_abs_diff_eq!(m[(0, 0)].norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn frozen_neighbor_embeds_gate() {
        let rep = frozen_neighbor_check(1.0, 0.0, 100.0).unwrap();
        let rep2 = frozen_neighbor_check(1.0, 0.0, 200.0).unwrap();
        let ratio = rep.distance_to_triplet / rep2.distance_to_triplet;
        assert!(
            (1.5..=2.5).contains(&ratio),
            "distance should halve when the detuning doubles, ratio={ratio}"
        );
        // frozen from the 32x32 oracle
        assert_abs_diff_eq!(rep.distance_to_triplet, 2.48e-2, epsilon = 2e-3);
        assert!(rep.worst_edge_sz > 1.0 - 10.0 * (1.0 / 100.0f64).powi(2));

        // gauge-fixed reduced gate lands near U_P in the XY limit
        let v = to_passive_frame(&rep.reduced_gate, 1.0, 0.0);
        let d = phase_aligned_distance4(&v, xy_primitive().matrix());
        assert!(d < 0.05, "distance to U_P: {d}");
    }
}
