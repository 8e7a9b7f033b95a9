//! Periodic Raussendorf lattice geometry.
//!
//! Sites live on integer triples modulo `L = 2d`. Under the primal view,
//! cells sit at all-even coordinates and face qubits at sites with exactly one
//! odd coordinate; the dual view swaps parities (cells all-odd, faces with two
//! odd coordinates). Indices are dense and follow lexicographic `(i, j, k)`
//! order within each class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QubitId(pub u32);

impl CellId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Coord = [u32; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    Primal,
    Dual,
}

impl LatticeKind {
    fn cell_parity(self) -> u32 {
        match self {
            LatticeKind::Primal => 0,
            LatticeKind::Dual => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            LatticeKind::Primal => LatticeKind::Dual,
            LatticeKind::Dual => LatticeKind::Primal,
        }
    }
}

/// Immutable lattice with precomputed incidence tables.
#[derive(Debug, Clone)]
pub struct Lattice {
    d: usize,
    kind: LatticeKind,
    cell_coords: Vec<Coord>,
    qubit_coords: Vec<Coord>,
    /// Axis along which each face qubit separates its two cells.
    qubit_axis: Vec<u8>,
    cell_faces: Vec<[QubitId; 6]>,
    qubit_cells: Vec<[CellId; 2]>,
    site_to_cell: Vec<u32>,
    site_to_qubit: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Lattice {
    /// Builds the periodic primal lattice of odd distance `d >= 3`.
    pub fn new(d: usize) -> Result<Self> {
        Self::with_kind(d, LatticeKind::Primal)
    }

    pub fn with_kind(d: usize, kind: LatticeKind) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidDistance(d));
        }
        let side = 2 * d as u32;
        let sites = (side as usize).pow(3);
        let p = kind.cell_parity();

        let mut cell_coords = Vec::with_capacity(d * d * d);
        let mut qubit_coords = Vec::with_capacity(3 * d * d * d);
        let mut qubit_axis = Vec::with_capacity(3 * d * d * d);
        let mut site_to_cell = vec![NONE; sites];
        let mut site_to_qubit = vec![NONE; sites];

        for i in 0..side {
            for j in 0..side {
                for k in 0..side {
                    let c = [i, j, k];
                    let off: Vec<usize> = (0..3).filter(|&a| c[a] % 2 != p).collect();
                    let site = site_index(side, c);
                    match off.len() {
                        0 => {
                            site_to_cell[site] = cell_coords.len() as u32;
                            cell_coords.push(c);
                        }
                        1 => {
                            site_to_qubit[site] = qubit_coords.len() as u32;
                            qubit_coords.push(c);
                            qubit_axis.push(off[0] as u8);
                        }
                        _ => {}
                    }
                }
            }
        }

        let mut lattice = Lattice {
            d,
            kind,
            cell_coords,
            qubit_coords,
            qubit_axis,
            cell_faces: Vec::new(),
            qubit_cells: Vec::new(),
            site_to_cell,
            site_to_qubit,
        };

        lattice.cell_faces = (0..lattice.cell_coords.len())
            .map(|c| {
                let x = lattice.cell_coords[c];
                let mut faces = [QubitId(0); 6];
                for axis in 0..3 {
                    for (s, delta) in [1i64, -1].into_iter().enumerate() {
                        let site = lattice.shift(x, axis, delta);
                        faces[2 * axis + s] = lattice.qubit_at(site).expect("face site");
                    }
                }
                faces
            })
            .collect();
        lattice.qubit_cells = (0..lattice.qubit_coords.len())
            .map(|q| {
                let x = lattice.qubit_coords[q];
                let axis = lattice.qubit_axis[q] as usize;
                let a = lattice.cell_at(lattice.shift(x, axis, -1)).expect("cell site");
                let b = lattice.cell_at(lattice.shift(x, axis, 1)).expect("cell site");
                [a.min(b), a.max(b)]
            })
            .collect();
        Ok(lattice)
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// Coordinate period `2d`.
    pub fn side(&self) -> u32 {
        2 * self.d as u32
    }

    pub fn num_cells(&self) -> usize {
        self.cell_coords.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.qubit_coords.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.num_cells() as u32).map(CellId)
    }

    pub fn qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        (0..self.num_qubits() as u32).map(QubitId)
    }

    pub fn cell_coord(&self, c: CellId) -> Coord {
        self.cell_coords[c.index()]
    }

    pub fn qubit_coord(&self, q: QubitId) -> Coord {
        self.qubit_coords[q.index()]
    }

    /// Axis along which `q`'s coordinate differs in parity from the cells.
    pub fn qubit_axis(&self, q: QubitId) -> usize {
        self.qubit_axis[q.index()] as usize
    }

    pub fn cell_at(&self, site: Coord) -> Option<CellId> {
        let s = self.site_to_cell[site_index(self.side(), self.wrap(site))];
        (s != NONE).then_some(CellId(s))
    }

    pub fn qubit_at(&self, site: Coord) -> Option<QubitId> {
        let s = self.site_to_qubit[site_index(self.side(), self.wrap(site))];
        (s != NONE).then_some(QubitId(s))
    }

    /// The six faces of `c`, ordered `+x, −x, +y, −y, +z, −z`.
    pub fn cell_faces(&self, c: CellId) -> Result<&[QubitId; 6]> {
        self.cell_faces.get(c.index()).ok_or(Error::InvalidId {
            kind: "cell",
            id: c.index(),
            len: self.num_cells(),
        })
    }

    /// The two cells sharing face `q`, smaller id first.
    pub fn qubit_cells(&self, q: QubitId) -> Result<&[CellId; 2]> {
        self.qubit_cells.get(q.index()).ok_or(Error::InvalidId {
            kind: "qubit",
            id: q.index(),
            len: self.num_qubits(),
        })
    }

    #[inline]
    pub(crate) fn faces_of(&self, c: CellId) -> &[QubitId; 6] {
        &self.cell_faces[c.index()]
    }

    #[inline]
    pub(crate) fn cells_of(&self, q: QubitId) -> [CellId; 2] {
        self.qubit_cells[q.index()]
    }

    /// Sites joined to `q` by cluster bonds. They belong to the other
    /// sublattice, one step along each of the two axes orthogonal to
    /// [`Self::qubit_axis`].
    pub fn cluster_links(&self, q: QubitId) -> [Coord; 4] {
        let x = self.qubit_coord(q);
        let axis = self.qubit_axis(q);
        let mut out = [[0; 3]; 4];
        let mut n = 0;
        for b in (0..3).filter(|&b| b != axis) {
            for delta in [1i64, -1] {
                out[n] = self.shift(x, b, delta);
                n += 1;
            }
        }
        out
    }

    /// The face between `c` and its neighbour one cell along `axis`.
    pub fn face_towards(&self, c: CellId, axis: usize, positive: bool) -> QubitId {
        self.faces_of(c)[2 * axis + usize::from(!positive)]
    }

    /// Neighbouring cell one step along `axis`.
    pub fn step(&self, c: CellId, axis: usize, positive: bool) -> CellId {
        let delta = if positive { 2 } else { -2 };
        self.cell_at(self.shift(self.cell_coord(c), axis, delta))
            .expect("cell lattice is closed under unit steps")
    }

    /// Signed shortest displacement from `a` to `b` in cell units per axis.
    pub fn cell_displacement(&self, a: CellId, b: CellId) -> [i64; 3] {
        let (xa, xb) = (self.cell_coord(a), self.cell_coord(b));
        let d = self.d as i64;
        let mut out = [0; 3];
        for axis in 0..3 {
            let mut delta = (xb[axis] as i64 - xa[axis] as i64) / 2;
            delta = delta.rem_euclid(d);
            if delta > d / 2 {
                delta -= d;
            }
            out[axis] = delta;
        }
        out
    }

    /// Periodic taxicab distance between cells, in cell units.
    pub fn cell_distance(&self, a: CellId, b: CellId) -> u32 {
        self.cell_displacement(a, b)
            .iter()
            .map(|v| v.unsigned_abs() as u32)
            .sum()
    }

    /// The same sites with cell and face roles swapped.
    pub fn dual_view(&self) -> Lattice {
        Lattice::with_kind(self.d, self.kind.flipped()).expect("distance already validated")
    }

    /// Maps a site translated by `offset`, modulo the period.
    pub fn translate(&self, site: Coord, offset: [i64; 3]) -> Coord {
        let mut out = site;
        for (axis, &o) in offset.iter().enumerate() {
            out = self.shift(out, axis, o);
        }
        out
    }

    fn shift(&self, x: Coord, axis: usize, delta: i64) -> Coord {
        let mut y = x;
        y[axis] = (x[axis] as i64 + delta).rem_euclid(self.side() as i64) as u32;
        y
    }

    fn wrap(&self, x: Coord) -> Coord {
        let s = self.side();
        [x[0] % s, x[1] % s, x[2] % s]
    }
}

#[inline]
fn site_index(side: u32, c: Coord) -> usize {
    ((c[0] * side + c[1]) * side + c[2]) as usize
}
