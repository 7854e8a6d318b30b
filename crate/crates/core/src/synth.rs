//! Local-invariant analysis of two-qubit gates and numerical synthesis of
//! CNOT circuits from a primitive gate.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::Matrix4;
use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gate::{cnot, kron2, phase_aligned_distance4, ry, rz, Gate4, TwoQubitGate};

/// Makhlin's local invariants (g1 complex, g2 real); two gates are related by
/// single-qubit operations iff their invariants coincide.
///
/// With `Q_B` the magic-basis transform and `m = (Q_B^† U Q_B)^T (Q_B^† U Q_B)`:
///
/// ```text
/// g1 = tr^2(m) / (16 det U)
/// g2 = (tr^2(m) - tr(m^2)) / (4 det U)
/// ```
///
/// Normalizing by `det U` extends the SU(4) definition to U(4), making both
/// quantities insensitive to the global phase. See Y. Makhlin,
/// Quantum Inf. Process. 1, 243 (2002).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MakhlinInvariants {
    pub g1: Complex64,
    pub g2: f64,
}

impl MakhlinInvariants {
    /// Componentwise distance, useful for tolerance comparisons.
    pub fn distance(&self, other: &Self) -> f64 {
        Float::max((self.g1 - other.g1).norm(), Float::abs(self.g2 - other.g2))
    }

    /// Invariants of the identity class (product gates).
    pub fn identity_class() -> Self {
        Self {
            g1: Complex64::new(1.0, 0.0),
            g2: 3.0,
        }
    }
}

fn magic_basis() -> Gate4 {
    let s = 1.0 / Float::sqrt(2.0);
    let r = |x: f64| Complex64::new(x * s, 0.0);
    let i = |x: f64| Complex64::new(0.0, x * s);
    Matrix4::new(
        r(1.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        i(1.0),
        Complex64::new(0.0, 0.0),
        i(1.0),
        r(1.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        i(1.0),
        r(-1.0),
        Complex64::new(0.0, 0.0),
        r(1.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        i(-1.0),
    )
}

/// Computes the local invariants of a unitary gate.
pub fn makhlin(gate: &TwoQubitGate) -> Result<MakhlinInvariants> {
    makhlin_of(gate.matrix())
}

pub fn makhlin_of(u: &Gate4) -> Result<MakhlinInvariants> {
    let r = crate::gate::unitarity_residual4(u);
    if r >= 1e-9 {
        return Err(Error::NonUnitary { residual: r });
    }
    let qb = magic_basis();
    let m = qb.adjoint() * u * qb;
    let mm = m.transpose() * m;
    let tr = mm.trace();
    let tr2 = mm.trace_of_square();
    let det = u.determinant();
    let g1 = tr * tr / (det * Complex64::new(16.0, 0.0));
    let g2 = (tr * tr - tr2) / (det * Complex64::new(4.0, 0.0));
    Ok(MakhlinInvariants { g1, g2: g2.re })
}

trait TraceOfSquare {
    fn trace_of_square(&self) -> Complex64;
}

impl TraceOfSquare for Gate4 {
    fn trace_of_square(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += self[(i, j)] * self[(j, i)];
            }
        }
        acc
    }
}

/// True iff the gate is not locally equivalent to a product gate, decided at
/// tolerance 1e-9 on the invariants.
pub fn is_entangling(gate: &TwoQubitGate) -> Result<bool> {
    let inv = makhlin(gate)?;
    Ok(inv.distance(&MakhlinInvariants::identity_class()) > 1e-9)
}

/// One single-qubit rotation parameterized as `Z(z1) Y(y) Z(z2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub z1: f64,
    pub y: f64,
    pub z2: f64,
}

impl EulerAngles {
    pub fn matrix(&self) -> crate::gate::Gate2 {
        rz(self.z1) * ry(self.y) * rz(self.z2)
    }
}

/// Circuit layer: either a pair of single-qubit rotations or one application
/// of the primitive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircuitLayer {
    Locals { first: EulerAngles, second: EulerAngles },
    Primitive,
}

/// Alternating sequence `L_n . P . L_{n-1} . ... . P . L_0` acting
/// left-to-right in time (the first list element is applied first).
#[derive(Debug, Clone, PartialEq)]
pub struct GateCircuit {
    pub layers: Vec<CircuitLayer>,
}

impl GateCircuit {
    fn from_angles(angles: &[f64], uses: usize) -> Self {
        debug_assert_eq!(angles.len(), 6 * (uses + 1));
        let mut layers = Vec::with_capacity(2 * uses + 1);
        for k in 0..=uses {
            let a = &angles[6 * k..6 * k + 6];
            layers.push(CircuitLayer::Locals {
                first: EulerAngles {
                    z1: a[0],
                    y: a[1],
                    z2: a[2],
                },
                second: EulerAngles {
                    z1: a[3],
                    y: a[4],
                    z2: a[5],
                },
            });
            if k < uses {
                layers.push(CircuitLayer::Primitive);
            }
        }
        Self { layers }
    }

    /// Number of primitive applications.
    pub fn uses(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| matches!(l, CircuitLayer::Primitive))
            .count()
    }

    /// Composes the circuit into a 4x4 matrix.
    pub fn evaluate(&self, primitive: &Gate4) -> Gate4 {
        let mut acc = Gate4::identity();
        for layer in &self.layers {
            let m = match layer {
                CircuitLayer::Locals { first, second } => {
                    kron2(&first.matrix(), &second.matrix())
                }
                CircuitLayer::Primitive => *primitive,
            };
            acc = m * acc;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub circuit: GateCircuit,
    /// Phase-aligned distance of the composed circuit to CNOT.
    pub distance: f64,
    /// False when the restart budget ran out above the target distance.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisConfig {
    pub restarts: usize,
    /// Distance below which the search stops early.
    pub target: f64,
    pub nelder_mead_iters: usize,
    pub polish_sweeps: usize,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            target: 1e-7,
            nelder_mead_iters: 20_000,
            polish_sweeps: 300,
        }
    }
}

/// Numerically synthesizes a CNOT from `uses` applications of `primitive`
/// interleaved with arbitrary single-qubit rotations.
///
/// Multistart derivative-free search: Nelder-Mead from random angles, then a
/// cyclic coordinate descent with a halving step to polish. Deterministic for
/// a fixed seed.
pub fn synthesize_cnot(
    primitive: &TwoQubitGate,
    uses: usize,
    seed: u64,
) -> Result<SynthesisResult> {
    synthesize_cnot_with(primitive, uses, seed, &SynthesisConfig::default())
}

pub fn synthesize_cnot_with(
    primitive: &TwoQubitGate,
    uses: usize,
    seed: u64,
    config: &SynthesisConfig,
) -> Result<SynthesisResult> {
    if !(1..=4).contains(&uses) {
        return Err(Error::InvalidParameter(alloc::format!(
            "uses must be between 1 and 4, got {uses}"
        )));
    }
    let prim = *primitive.matrix();
    let target = cnot();
    let dim = 6 * (uses + 1);
    let objective = |angles: &[f64]| -> f64 {
        let c = GateCircuit::from_angles(angles, uses).evaluate(&prim);
        phase_aligned_distance4(&c, &target)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_angles: Vec<f64> = vec![0.0; dim];
    let mut best = f64::INFINITY;
    for _ in 0..config.restarts {
        let mut x: Vec<f64> = (0..dim)
            .map(|_| rng.random_range(-core::f64::consts::PI..core::f64::consts::PI))
            .collect();
        let mut fx = nelder_mead(&objective, &mut x, config.nelder_mead_iters);
        fx = coordinate_polish(&objective, &mut x, fx, config.polish_sweeps);
        if fx < best {
            best = fx;
            best_angles.copy_from_slice(&x);
        }
        if best < config.target {
            break;
        }
    }

    Ok(SynthesisResult {
        circuit: GateCircuit::from_angles(&best_angles, uses),
        distance: best,
        converged: best < config.target,
    })
}

/// Standard Nelder-Mead over `x`, returning the best value found and leaving
/// the best point in `x`.
fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x: &mut [f64], max_iters: usize) -> f64 {
    let d = x.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    simplex.push(x.to_vec());
    for i in 0..d {
        let mut p = x.to_vec();
        p[i] += 0.5;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let centroid = |simplex: &[Vec<f64>], skip: usize| -> Vec<f64> {
        let mut c = vec![0.0; d];
        for (k, p) in simplex.iter().enumerate() {
            if k == skip {
                continue;
            }
            for i in 0..d {
                c[i] += p[i];
            }
        }
        for v in &mut c {
            *v /= d as f64;
        }
        c
    };

    for _ in 0..max_iters {
        // order: find best, worst, second-worst
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (bi, si, wi) = (order[0], order[d - 1], order[d]);
        if values[wi] - values[bi] < 1e-14 {
            break;
        }
        let c = centroid(&simplex, wi);
        let reflect: Vec<f64> = (0..d).map(|i| c[i] + (c[i] - simplex[wi][i])).collect();
        let fr = f(&reflect);
        if fr < values[bi] {
            let expand: Vec<f64> = (0..d).map(|i| c[i] + 2.0 * (c[i] - simplex[wi][i])).collect();
            let fe = f(&expand);
            if fe < fr {
                simplex[wi] = expand;
                values[wi] = fe;
            } else {
                simplex[wi] = reflect;
                values[wi] = fr;
            }
        } else if fr < values[si] {
            simplex[wi] = reflect;
            values[wi] = fr;
        } else {
            let contract: Vec<f64> = if fr < values[wi] {
                (0..d).map(|i| c[i] + 0.5 * (reflect[i] - c[i])).collect()
            } else {
                (0..d).map(|i| c[i] + 0.5 * (simplex[wi][i] - c[i])).collect()
            };
            let fc = f(&contract);
            if fc < values[wi].min(fr) {
                simplex[wi] = contract;
                values[wi] = fc;
            } else {
                // shrink toward the best vertex
                let bestp = simplex[bi].clone();
                for k in 0..=d {
                    if k == bi {
                        continue;
                    }
                    for i in 0..d {
                        simplex[k][i] = bestp[i] + 0.5 * (simplex[k][i] - bestp[i]);
                    }
                    values[k] = f(&simplex[k]);
                }
            }
        }
    }

    let mut bi = 0;
    for k in 1..=d {
        if values[k] < values[bi] {
            bi = k;
        }
    }
    x.copy_from_slice(&simplex[bi]);
    values[bi]
}

/// Cyclic coordinate descent with a geometrically shrinking step; converges
/// the last few orders of magnitude that Nelder-Mead leaves on the table.
fn coordinate_polish<F: Fn(&[f64]) -> f64>(
    f: &F,
    x: &mut [f64],
    mut fx: f64,
    max_sweeps: usize,
) -> f64 {
    let mut step = 0.1;
    for _ in 0..max_sweeps {
        let mut improved = false;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let old = x[i];
                x[i] = old + sign * step;
                let ft = f(x);
                if ft < fx {
                    fx = ft;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    fx
}
