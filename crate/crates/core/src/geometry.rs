//! Qubit/barrier array layouts, the qubit-density ratio, and the
//! commensurate-revival search for multi-qubit star gates.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::Ratio;
use num_traits::Float;

use crate::chain::exchange_hamiltonian;
use crate::error::{Error, Result};
use crate::spin::{basis_index_with_down, dim, site_is_up, ManyBodyOperator};
use crate::triplet::revival_time;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    Qubit,
    Barrier,
}

/// Simple undirected graph of spins with qubit/barrier roles.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinGraph {
    roles: Vec<NodeRole>,
    edges: Vec<(usize, usize)>,
}

impl SpinGraph {
    /// Validates: indices in range, no self-loops, no duplicate edges.
    pub fn new(roles: Vec<NodeRole>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = roles.len();
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    key.0, key.1
                )));
            }
        }
        Ok(Self { roles, edges })
    }

    pub fn n_nodes(&self) -> usize {
        self.roles.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.roles
            .iter()
            .filter(|r| matches!(r, NodeRole::Qubit))
            .count()
    }

    pub fn roles(&self) -> &[NodeRole] {
        &self.roles
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| u == node || v == node)
            .count()
    }

    /// True when some edge connects two qubit nodes directly.
    pub fn has_qubit_qubit_edge(&self) -> bool {
        self.edges.iter().any(|&(u, v)| {
            matches!(self.roles[u], NodeRole::Qubit) && matches!(self.roles[v], NodeRole::Qubit)
        })
    }

    /// Qubits stored per spin, as an exact rational.
    pub fn r_q(&self) -> Result<Ratio<u64>> {
        if self.roles.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Ratio::new(self.n_qubits() as u64, self.n_nodes() as u64))
    }

    /// Swaps qubit and barrier roles (the complement layout).
    pub fn role_complement(&self) -> SpinGraph {
        SpinGraph {
            roles: self
                .roles
                .iter()
                .map(|r| match r {
                    NodeRole::Qubit => NodeRole::Barrier,
                    NodeRole::Barrier => NodeRole::Qubit,
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }
}

/// Replaces every edge of an all-qubit graph by a barrier node with two
/// edges. For a k-regular input, the result has `R_Q = 1 / (1 + k/2)`.
pub fn insert_barriers(qubit_graph: &SpinGraph) -> Result<SpinGraph> {
    if qubit_graph
        .roles
        .iter()
        .any(|r| matches!(r, NodeRole::Barrier))
    {
        return Err(Error::InvalidGraph(
            "barrier insertion expects an all-qubit graph".into(),
        ));
    }
    let n = qubit_graph.n_nodes();
    let mut roles = qubit_graph.roles.clone();
    let mut edges = Vec::with_capacity(2 * qubit_graph.edges.len());
    for (k, &(u, v)) in qubit_graph.edges.iter().enumerate() {
        let w = n + k;
        roles.push(NodeRole::Barrier);
        edges.push((u, w));
        edges.push((w, v));
    }
    SpinGraph::new(roles, edges)
}

/// Path of `n` qubit nodes.
pub fn qubit_path(n: usize) -> Result<SpinGraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    SpinGraph::new(
        vec![NodeRole::Qubit; n],
        (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
    )
}

/// One-dimensional chain register: qubits separated by barriers
/// (`R_Q = 1/2` for two or more qubits... the path of n qubits has n-1
/// barriers, so exactly 1/2 only in the ring or infinite-chain sense).
pub fn chain_with_barriers(n_qubits: usize) -> Result<SpinGraph> {
    insert_barriers(&qubit_path(n_qubits)?)
}

/// Ring of `n` qubit nodes (n >= 3).
pub fn qubit_ring(n: usize) -> Result<SpinGraph> {
    if n < 3 {
        return Err(Error::InvalidGraph("a ring needs at least 3 nodes".into()));
    }
    SpinGraph::new(
        vec![NodeRole::Qubit; n],
        (0..n).map(|i| (i, (i + 1) % n)).collect(),
    )
}

/// Ring register with alternating qubit/barrier roles (`R_Q = 1/2` exactly).
pub fn ring_with_barriers(n_qubits: usize) -> Result<SpinGraph> {
    if n_qubits < 3 {
        return Err(Error::InvalidGraph("a ring needs at least 3 qubits".into()));
    }
    insert_barriers(&qubit_ring(n_qubits)?)
}

/// Honeycomb lattice on a torus: `2 lx ly` nodes, 3-regular, all qubits.
/// Sublattice A at even indices, B at odd; A(x, y) couples to B(x, y),
/// B(x-1, y) and B(x, y-1).
pub fn honeycomb_torus(lx: usize, ly: usize) -> Result<SpinGraph> {
    if lx < 2 || ly < 2 {
        return Err(Error::InvalidGraph(
            "honeycomb torus needs lx, ly >= 2 to stay a simple graph".into(),
        ));
    }
    let a = |x: usize, y: usize| 2 * (y * lx + x);
    let b = |x: usize, y: usize| 2 * (y * lx + x) + 1;
    let mut edges = Vec::with_capacity(3 * lx * ly);
    for y in 0..ly {
        for x in 0..lx {
            edges.push((a(x, y), b(x, y)));
            edges.push((a(x, y), b((x + lx - 1) % lx, y)));
            edges.push((a(x, y), b(x, (y + ly - 1) % ly)));
        }
    }
    SpinGraph::new(vec![NodeRole::Qubit; 2 * lx * ly], edges)
}

/// Honeycomb qubit lattice with a unique barrier per bond (`R_Q = 2/5`).
pub fn hex_with_barriers(lx: usize, ly: usize) -> Result<SpinGraph> {
    insert_barriers(&honeycomb_torus(lx, ly)?)
}

/// Role complement of [`hex_with_barriers`]: barriers do double duty and
/// `R_Q = 3/5`.
pub fn hex_complement(lx: usize, ly: usize) -> Result<SpinGraph> {
    Ok(hex_with_barriers(lx, ly)?.role_complement())
}

/// Star of `k` qubits around one central barrier: the resonant cell of a
/// multi-qubit gate. Site 0 is the barrier.
pub fn star_hamiltonian(
    k: usize,
    qubit_zeeman: f64,
    barrier_zeeman: f64,
    j_xy: f64,
    j_z: f64,
) -> ManyBodyOperator {
    let n = k + 1;
    let edges: Vec<(usize, usize)> = (1..=k).map(|q| (0, q)).collect();
    let alpha = if j_xy > 0.0 { j_z / j_xy } else { 0.0 };
    let mut h = exchange_hamiltonian(n, &edges, j_xy, alpha);
    let d = dim(n);
    let mut diag = crate::CMatrix::zeros(d, d);
    for idx in 0..d {
        let mut e = 0.0;
        for site in 0..n {
            let b = if site == 0 { barrier_zeeman } else { qubit_zeeman };
            e += b * crate::spin::sz_value(idx, site, n);
        }
        diag[(idx, idx)] = num_complex::Complex64::new(e, 0.0);
    }
    h = h.add(&ManyBodyOperator::new(diag, n, true).expect("diagonal"));
    h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommensurateConfig {
    /// Revival definition: first return of P(barrier up) above
    /// `1 - tolerance`.
    pub tolerance: f64,
    /// Scan horizon in units of the two-qubit revival time.
    pub horizon_revivals: f64,
    /// Coarse scan step for locating revival peaks.
    pub scan_step: f64,
    /// Largest integer multiple admitted in the commensuration fit.
    pub max_multiple: u32,
    /// Relative mismatch allowed by the rational fit (the candidate is then
    /// verified by direct simulation regardless).
    pub fit_tolerance: f64,
    /// Qubit Zeeman energy of the star.
    pub qubit_zeeman: f64,
}

impl Default for CommensurateConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            horizon_revivals: 12.0,
            scan_step: 5e-3,
            max_multiple: 8,
            fit_tolerance: 1e-4,
            qubit_zeeman: crate::triplet::DEFAULT_RESONANCE_ZEEMAN,
        }
    }
}

/// A detuning at which all input-class revival periods share small integer
/// multiples, verified by direct simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct CommensurateCandidate {
    /// Barrier detuning `a - b`.
    pub detuning: f64,
    /// Revival period per input class (1..k qubits flipped down).
    pub periods: Vec<f64>,
    /// Integer multiples taking each period to the common time.
    pub multiples: Vec<u32>,
    /// First common revival time.
    pub common_time: f64,
    /// Max-over-classes leakage `1 - P(barrier up)` simulated at
    /// `common_time`.
    pub verified_error: f64,
}

/// Spectral data for scanning barrier-revival probabilities of one star.
struct StarScan {
    eigenvalues: Vec<f64>,
    /// weights[class][out][level]
    weights: Vec<Vec<Vec<num_complex::Complex64>>>,
}

impl StarScan {
    fn build(k: usize, detuning: f64, j_xy: f64, j_z: f64, cfg: &CommensurateConfig) -> Self {
        let n = k + 1;
        let a = cfg.qubit_zeeman;
        let b = a - detuning;
        let h = star_hamiltonian(k, a, b, j_xy, j_z);
        let se = h.matrix().clone().symmetric_eigen();
        let d = dim(n);
        let barrier_up: Vec<usize> = (0..d).filter(|&idx| site_is_up(idx, 0, n)).collect();

        // one representative input per class: the first m qubits down
        let mut weights = Vec::with_capacity(k);
        for m in 1..=k {
            let downs: Vec<usize> = (1..=m).collect();
            let input = basis_index_with_down(&downs, n);
            let mut per_out = Vec::with_capacity(barrier_up.len());
            for &o in &barrier_up {
                let w: Vec<num_complex::Complex64> = (0..d)
                    .map(|l| se.eigenvectors[(o, l)] * se.eigenvectors[(input, l)].conj())
                    .collect();
                per_out.push(w);
            }
            weights.push(per_out);
        }
        Self {
            eigenvalues: se.eigenvalues.iter().cloned().collect(),
            weights,
        }
    }

    /// P(barrier up at time t) for input class `m` (1-based).
    fn revival_probability(&self, class_m: usize, t: f64) -> f64 {
        let per_out = &self.weights[class_m - 1];
        per_out
            .iter()
            .map(|w| {
                let mut amp = num_complex::Complex64::new(0.0, 0.0);
                for (l, &wl) in w.iter().enumerate() {
                    amp += wl * num_complex::Complex64::from_polar(1.0, -self.eigenvalues[l] * t);
                }
                amp.norm_sqr()
            })
            .sum()
    }

    /// First `t > 0` where P(barrier up) returns above `1 - tolerance`:
    /// coarse scan for local maxima, golden-section refinement of each.
    fn revival_period(&self, class_m: usize, horizon: f64, cfg: &CommensurateConfig) -> Option<f64> {
        let step = cfg.scan_step;
        let n = (horizon / step) as usize;
        let mut prev2 = self.revival_probability(class_m, 0.0);
        let mut prev = self.revival_probability(class_m, step);
        for i in 2..n {
            let t = i as f64 * step;
            let cur = self.revival_probability(class_m, t);
            if prev >= prev2 && prev >= cur && prev > 0.9 {
                // local maximum near t - step
                let (tm, pm) = golden_max(
                    |x| self.revival_probability(class_m, x),
                    t - 2.0 * step,
                    t,
                    1e-12,
                );
                if pm > 1.0 - cfg.tolerance && tm > step / 2.0 {
                    return Some(tm);
                }
            }
            prev2 = prev;
            prev = cur;
        }
        None
    }

    fn max_leakage_at(&self, k: usize, t: f64) -> f64 {
        (1..=k)
            .map(|m| 1.0 - self.revival_probability(m, t))
            .fold(0.0, f64::max)
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let neg = |x: f64| -f(x);
    let mut lo = a;
    let mut hi = b;
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = neg(c);
    let mut fd = neg(d);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = neg(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = neg(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Examines one detuning value: finds per-class revival periods, fits small
/// integer multiples onto a common time, and verifies the common revival by
/// direct simulation. Returns `None` when any stage fails.
pub fn commensurate_scan_point(
    k: usize,
    j_xy: f64,
    j_z: f64,
    detuning: f64,
    cfg: &CommensurateConfig,
) -> Result<Option<CommensurateCandidate>> {
    if !(2..=4).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "star size k must be 2, 3 or 4, got {k}"
        )));
    }
    if !(j_xy > 0.0) {
        return Err(Error::InvalidParameter("j_xy must be positive".into()));
    }
    let horizon = cfg.horizon_revivals * revival_time(j_xy, j_z);
    let scan = StarScan::build(k, detuning, j_xy, j_z, cfg);

    let mut periods = Vec::with_capacity(k);
    for m in 1..=k {
        match scan.revival_period(m, horizon, cfg) {
            Some(p) => periods.push(p),
            None => return Ok(None),
        }
    }

    // common time = k1 * p1 = k2 * p2 = ... with all multiples <= max
    for k1 in 1..=cfg.max_multiple {
        let t_c = k1 as f64 * periods[0];
        let mut multiples = vec![k1];
        let mut ok = true;
        for &p in &periods[1..] {
            let ratio = t_c / p;
            let km = Float::round(ratio);
            if km < 1.0 || km > cfg.max_multiple as f64 {
                ok = false;
                break;
            }
            if Float::abs(ratio - km) / ratio > cfg.fit_tolerance {
                ok = false;
                break;
            }
            multiples.push(km as u32);
        }
        if !ok {
            continue;
        }
        // verification gate: the rational fit alone admits no candidate
        let (t_best, _) = golden_max(
            |t| -scan.max_leakage_at(k, t),
            t_c - cfg.scan_step,
            t_c + cfg.scan_step,
            1e-12,
        );
        let err = scan.max_leakage_at(k, t_best);
        if err < cfg.tolerance {
            return Ok(Some(CommensurateCandidate {
                detuning,
                periods,
                multiples,
                common_time: t_best,
                verified_error: err,
            }));
        }
    }
    Ok(None)
}

/// Scans a detuning grid and returns every verified candidate.
pub fn commensurate_search(
    k: usize,
    j_xy: f64,
    j_z: f64,
    detunings: &[f64],
    cfg: &CommensurateConfig,
) -> Result<Vec<CommensurateCandidate>> {
    let mut out = Vec::new();
    for &d in detunings {
        if let Some(c) = commensurate_scan_point(k, j_xy, j_z, d, cfg)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Uniform detuning grid `lo, lo + step, ..., <= hi`.
pub fn detuning_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() || hi < lo {
        return Err(Error::InvalidParameter("bad grid bounds".into()));
    }
    let n = ((hi - lo) / step) as usize + 1;
    Ok((0..n).map(|i| lo + i as f64 * step).collect())
}
