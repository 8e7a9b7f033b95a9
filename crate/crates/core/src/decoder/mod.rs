//! Syndrome extraction, matching and logical verdicts for the primal lattice.
//!
//! Lost face qubits merge their two cells into a supercell whose stabilizer
//! is the product of the member cell stabilizers. Defective supercells are
//! paired by exact minimum-weight perfect matching over the periodic taxicab
//! metric, and the residual error is classified by its crossing parity with
//! a loss-free correlation sheet per axis.

pub mod blossom;
mod dsu;

use serde::{Deserialize, Serialize};

use crate::lattice::{CellId, Coord, Lattice, QubitId};
use crate::sampler::ErrorSample;
pub use blossom::{min_weight_perfect_matching, CostMatrix};
use dsu::DisjointSet;

/// Why a trial could not be decoded. Aborted trials count as failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Abort {
    /// Losses merged every cell into a single supercell.
    Percolated,
    /// Losses wrap the torus along this axis, so no loss-free sheet exists.
    NoSheet { axis: usize },
}

/// Supercell partition and defect pattern of one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeGraph {
    /// Supercell index of each cell.
    pub supercell_of: Vec<u32>,
    /// Member cells of each supercell in ascending order. Supercells are
    /// numbered by their smallest member.
    pub members: Vec<Vec<CellId>>,
    pub defect: Vec<bool>,
    /// Defective supercells, ascending.
    pub nodes: Vec<usize>,
}

impl SyndromeGraph {
    pub fn num_supercells(&self) -> usize {
        self.members.len()
    }

    /// Faces incident to exactly one member cell of supercell `s`.
    pub fn boundary_faces(&self, lattice: &Lattice, s: usize) -> Vec<QubitId> {
        let mut faces: Vec<QubitId> = self.members[s]
            .iter()
            .flat_map(|&c| lattice.faces_of(c).iter().copied())
            .filter(|&q| {
                let [a, b] = lattice.cells_of(q);
                self.supercell_of[a.index()] != self.supercell_of[b.index()]
            })
            .collect();
        faces.sort_unstable();
        faces
    }

    /// Supercells left with odd parity by the given set of flipped faces.
    pub fn defects_of(&self, lattice: &Lattice, flips: &[QubitId]) -> Vec<usize> {
        let mut odd = vec![false; self.num_supercells()];
        for &q in flips {
            let [a, b] = lattice.cells_of(q);
            let (sa, sb) = (
                self.supercell_of[a.index()] as usize,
                self.supercell_of[b.index()] as usize,
            );
            if sa != sb {
                odd[sa] ^= true;
                odd[sb] ^= true;
            }
        }
        odd.iter().enumerate().filter(|(_, &o)| o).map(|(i, _)| i).collect()
    }
}

/// Complete graph over the defective supercells.
#[derive(Debug, Clone)]
pub struct MatchingGraph {
    pub nodes: Vec<usize>,
    pub weights: CostMatrix,
    /// Member cells realizing each pairwise distance, row-major.
    closest: Vec<(CellId, CellId)>,
}

impl MatchingGraph {
    /// The member cells (one per node) realizing the distance between `i` and `j`.
    pub fn closest_cells(&self, i: usize, j: usize) -> (CellId, CellId) {
        let n = self.nodes.len();
        let (a, b) = self.closest[i.min(j) * n + i.max(j)];
        if i <= j {
            (a, b)
        } else {
            (b, a)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeResult {
    /// Matched supercell pairs.
    pub matching: Vec<(usize, usize)>,
    /// Z correction on surviving qubits.
    pub correction: Vec<QubitId>,
    /// Logical failure along x, y, z.
    pub logical_failure: [bool; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialOutcome {
    Decoded(DecodeResult),
    Aborted(Abort),
}

impl TrialOutcome {
    pub fn is_failure(&self) -> bool {
        match self {
            TrialOutcome::Decoded(r) => r.logical_failure.iter().any(|&f| f),
            TrialOutcome::Aborted(_) => true,
        }
    }

    pub fn is_abort(&self) -> bool {
        matches!(self, TrialOutcome::Aborted(_))
    }
}

/// Groups cells into supercells along lost faces and marks defects.
pub fn extract_syndrome(lattice: &Lattice, sample: &ErrorSample) -> Result<SyndromeGraph, Abort> {
    let mut sets = DisjointSet::new(lattice.num_cells());
    for &q in &sample.lost {
        let [a, b] = lattice.cells_of(q);
        sets.union(a.index(), b.index());
    }
    if lattice.num_cells() > 1 && sets.size_of(0) == lattice.num_cells() {
        return Err(Abort::Percolated);
    }

    let mut root_index = vec![u32::MAX; lattice.num_cells()];
    let mut supercell_of = vec![0u32; lattice.num_cells()];
    let mut members: Vec<Vec<CellId>> = Vec::new();
    for c in lattice.cells() {
        let r = sets.find(c.index());
        if root_index[r] == u32::MAX {
            root_index[r] = members.len() as u32;
            members.push(Vec::new());
        }
        let s = root_index[r];
        supercell_of[c.index()] = s;
        members[s as usize].push(c);
    }

    let mut graph = SyndromeGraph {
        supercell_of,
        defect: vec![false; members.len()],
        members,
        nodes: Vec::new(),
    };
    graph.nodes = graph.defects_of(lattice, &sample.flips);
    for &s in &graph.nodes {
        graph.defect[s] = true;
    }
    Ok(graph)
}

/// Pairwise distances between defective supercells: the smallest periodic
/// taxicab distance over member-cell pairs, ties going to the lowest ids.
pub fn build_matching_graph(lattice: &Lattice, syndrome: &SyndromeGraph) -> MatchingGraph {
    let nodes = syndrome.nodes.clone();
    let n = nodes.len();
    let mut weights = CostMatrix::new(n);
    let mut closest = vec![(CellId(0), CellId(0)); n * n];
    for i in 0..n {
        let mi = &syndrome.members[nodes[i]];
        for j in i + 1..n {
            let mj = &syndrome.members[nodes[j]];
            let mut best = (u32::MAX, CellId(0), CellId(0));
            for &a in mi {
                for &b in mj {
                    let dist = lattice.cell_distance(a, b);
                    if dist < best.0 {
                        best = (dist, a, b);
                    }
                }
            }
            weights.set(i, j, best.0 as i64);
            closest[i * n + j] = (best.1, best.2);
        }
    }
    MatchingGraph {
        nodes,
        weights,
        closest,
    }
}

/// Faces crossed by the staircase path from cell `a` to cell `b`, walking the
/// shortest way around the torus along x, then y, then z.
pub fn staircase(lattice: &Lattice, a: CellId, b: CellId) -> Vec<QubitId> {
    let disp = lattice.cell_displacement(a, b);
    let mut out = Vec::with_capacity(disp.iter().map(|v| v.unsigned_abs() as usize).sum());
    let mut cur = a;
    for (axis, &delta) in disp.iter().enumerate() {
        let positive = delta > 0;
        for _ in 0..delta.unsigned_abs() {
            out.push(lattice.face_towards(cur, axis, positive));
            cur = lattice.step(cur, axis, positive);
        }
    }
    debug_assert_eq!(cur, b);
    out
}

/// Correction support joining matched nodes `i` and `j` of `graph`.
pub fn correction_chain(lattice: &Lattice, graph: &MatchingGraph, i: usize, j: usize) -> Vec<QubitId> {
    let (a, b) = graph.closest_cells(i, j);
    staircase(lattice, a, b)
}

/// Per-axis crossing parity of `flips ⊕ correction` with a correlation sheet
/// that avoids every lost qubit.
///
/// The flat sheet through `x_a = 1` is deformed across lost-qubit clusters by
/// relabelling whole clusters. That is impossible exactly when some cluster
/// wraps the torus an odd number of times along the axis.
pub fn logical_failure(
    lattice: &Lattice,
    sample: &ErrorSample,
    correction: &[QubitId],
) -> Result<[bool; 3], Abort> {
    let lost = sample.lost_mask(lattice.num_qubits());
    let labels = sheet_labels(lattice, &lost)?;
    let mut residual = vec![false; lattice.num_qubits()];
    for &q in sample.flips.iter().chain(correction) {
        residual[q.index()] ^= true;
    }
    let mut parity = [false; 3];
    for q in lattice.qubits() {
        if !residual[q.index()] || lost[q.index()] {
            continue;
        }
        let [a, b] = lattice.cells_of(q);
        let shift = labels[a.index()] ^ labels[b.index()];
        let on_flat = flat_sheet_bits(lattice, q);
        for (axis, p) in parity.iter_mut().enumerate() {
            *p ^= ((on_flat ^ shift) >> axis) & 1 == 1;
        }
    }
    Ok(parity)
}

fn flat_sheet_bits(lattice: &Lattice, q: QubitId) -> u8 {
    let axis = lattice.qubit_axis(q);
    let origin = lattice.kind() as u32; // primal sheet at 1, dual at 2 = 0 + 2
    let coord = lattice.qubit_coord(q)[axis];
    if coord == 1 + origin {
        1 << axis
    } else {
        0
    }
}

/// Bitmask per cell: bit `a` set when the cell sits on the far side of the
/// deformed sheet for axis `a`.
fn sheet_labels(lattice: &Lattice, lost: &[bool]) -> Result<Vec<u8>, Abort> {
    let n = lattice.num_cells();
    let mut label = vec![0u8; n];
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    let mut broken = 0u8;
    for start in lattice.cells() {
        if seen[start.index()] {
            continue;
        }
        seen[start.index()] = true;
        stack.push(start);
        while let Some(c) = stack.pop() {
            for &q in lattice.faces_of(c) {
                if !lost[q.index()] {
                    continue;
                }
                let [a, b] = lattice.cells_of(q);
                let other = if a == c { b } else { a };
                let want = label[c.index()] ^ flat_sheet_bits(lattice, q);
                if seen[other.index()] {
                    broken |= label[other.index()] ^ want;
                } else {
                    seen[other.index()] = true;
                    label[other.index()] = want;
                    stack.push(other);
                }
            }
        }
    }
    if broken != 0 {
        return Err(Abort::NoSheet {
            axis: broken.trailing_zeros() as usize,
        });
    }
    Ok(label)
}

/// Full decode of one trial.
pub fn decode(lattice: &Lattice, sample: &ErrorSample) -> TrialOutcome {
    match decode_detailed(lattice, sample) {
        Ok(d) => TrialOutcome::Decoded(d.result),
        Err(abort) => TrialOutcome::Aborted(abort),
    }
}

/// Intermediate products of [`decode`], for inspection and debugging.
#[derive(Debug, Clone)]
pub struct DecodeTrace {
    pub syndrome: SyndromeGraph,
    pub graph: MatchingGraph,
    pub result: DecodeResult,
}

pub fn decode_detailed(lattice: &Lattice, sample: &ErrorSample) -> Result<DecodeTrace, Abort> {
    let syndrome = extract_syndrome(lattice, sample)?;
    let graph = build_matching_graph(lattice, &syndrome);
    let pairs = min_weight_perfect_matching(&graph.weights)
        .expect("defect count is even on a closed lattice");

    let lost = sample.lost_mask(lattice.num_qubits());
    let mut toggled = vec![false; lattice.num_qubits()];
    for &(i, j) in &pairs {
        for q in correction_chain(lattice, &graph, i, j) {
            toggled[q.index()] ^= true;
        }
    }
    let correction: Vec<QubitId> = lattice
        .qubits()
        .filter(|q| toggled[q.index()] && !lost[q.index()])
        .collect();
    let logical = logical_failure(lattice, sample, &correction)?;
    let matching = pairs
        .iter()
        .map(|&(i, j)| (graph.nodes[i], graph.nodes[j]))
        .collect();
    Ok(DecodeTrace {
        syndrome,
        graph,
        result: DecodeResult {
            matching,
            correction,
            logical_failure: logical,
        },
    })
}

/// Residual `flips ⊕ correction` on surviving qubits.
pub fn residual(lattice: &Lattice, sample: &ErrorSample, correction: &[QubitId]) -> Vec<QubitId> {
    let lost = sample.lost_mask(lattice.num_qubits());
    let mut r = vec![false; lattice.num_qubits()];
    for &q in sample.flips.iter().chain(correction) {
        r[q.index()] ^= true;
    }
    lattice
        .qubits()
        .filter(|q| r[q.index()] && !lost[q.index()])
        .collect()
}

/// JSON-friendly record of one decoded trial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialDump {
    pub trial: u64,
    pub lost: Vec<Coord>,
    pub flips: Vec<Coord>,
    /// Member cells of each defective supercell.
    pub defects: Vec<Vec<Coord>>,
    /// Indices into `defects`.
    pub matching: Vec<(usize, usize)>,
    pub correction: Vec<Coord>,
    pub logical_failure: [bool; 3],
    pub abort: Option<Abort>,
}

impl TrialDump {
    pub fn new(lattice: &Lattice, trial: u64, sample: &ErrorSample) -> Self {
        let coords = |qs: &[QubitId]| qs.iter().map(|&q| lattice.qubit_coord(q)).collect();
        let mut dump = TrialDump {
            trial,
            lost: coords(&sample.lost),
            flips: coords(&sample.flips),
            defects: Vec::new(),
            matching: Vec::new(),
            correction: Vec::new(),
            logical_failure: [true; 3],
            abort: None,
        };
        match decode_detailed(lattice, sample) {
            Ok(t) => {
                dump.defects = t
                    .graph
                    .nodes
                    .iter()
                    .map(|&s| t.syndrome.members[s].iter().map(|&c| lattice.cell_coord(c)).collect())
                    .collect();
                let pos = |s: usize| t.graph.nodes.binary_search(&s).expect("matched node");
                dump.matching = t.result.matching.iter().map(|&(a, b)| (pos(a), pos(b))).collect();
                dump.correction = coords(&t.result.correction);
                dump.logical_failure = t.result.logical_failure;
            }
            Err(a) => dump.abort = Some(a),
        }
        dump
    }
}
