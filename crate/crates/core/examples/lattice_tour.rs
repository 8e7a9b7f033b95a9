//! Walks the periodic cell complex: counts, incidence, and the dual view.

use raussim::{Lattice, LatticeKind};

fn main() -> raussim::Result<()> {
    let lat = Lattice::new(3)?;
    println!(
        "d={} side={} cells={} face qubits={}",
        lat.distance(),
        lat.side(),
        lat.num_cells(),
        lat.num_qubits()
    );

    let c = lat.cell_at([2, 2, 2]).expect("cell site");
    println!("cell (2,2,2) faces:");
    for &f in lat.cell_faces(c)? {
        let [a, b] = *lat.qubit_cells(f)?;
        println!(
            "  face {:?} (axis {}) joins {:?} and {:?}",
            lat.qubit_coord(f),
            lat.qubit_axis(f),
            lat.cell_coord(a),
            lat.cell_coord(b)
        );
    }

    let q = lat.qubit_at([1, 0, 0]).expect("face site");
    println!("cluster bonds of face (1,0,0): {:?}", lat.cluster_links(q));

    let far = lat.cell_at([4, 0, 4]).expect("cell site");
    let origin = lat.cell_at([0, 0, 0]).expect("cell site");
    println!("distance (0,0,0)-(4,0,4) on the torus: {}", lat.cell_distance(origin, far));

    let dual = lat.dual_view();
    assert_eq!(dual.kind(), LatticeKind::Dual);
    println!("dual cell sites start at {:?}", dual.cell_coord(dual.cells().next().expect("nonempty")));
    Ok(())
}
