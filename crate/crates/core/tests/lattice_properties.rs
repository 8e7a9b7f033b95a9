use proptest::prelude::*;
use raussim::lattice::{Lattice, LatticeKind};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn translation_by_cell_spacing_preserves_incidence(
        half in 1usize..4,
        shift in (0i64..4, 0i64..4, 0i64..4),
        dual in any::<bool>(),
    ) {
        let d = 2 * half + 1;
        let kind = if dual { LatticeKind::Dual } else { LatticeKind::Primal };
        let lat = Lattice::with_kind(d, kind).unwrap();
        let off = [2 * shift.0, 2 * shift.1, 2 * shift.2];
        for c in lat.cells() {
            let moved = lat.cell_at(lat.translate(lat.cell_coord(c), off)).unwrap();
            let faces = lat.cell_faces(c).unwrap();
            let moved_faces = lat.cell_faces(moved).unwrap();
            for (f, g) in faces.iter().zip(moved_faces) {
                let expect = lat.translate(lat.qubit_coord(*f), off);
                prop_assert_eq!(lat.qubit_coord(*g), expect);
            }
        }
    }

    #[test]
    fn every_face_bounds_exactly_two_cells(half in 1usize..5) {
        let lat = Lattice::new(2 * half + 1).unwrap();
        let mut count = vec![0usize; lat.num_qubits()];
        for c in lat.cells() {
            for f in lat.cell_faces(c).unwrap() {
                count[f.index()] += 1;
            }
        }
        prop_assert!(count.iter().all(|&k| k == 2));
        let total: usize = lat.cells().map(|c| lat.cell_faces(c).unwrap().len()).sum();
        prop_assert_eq!(total, 2 * lat.num_qubits());
    }
}
