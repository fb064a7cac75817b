//! End-to-end facts about the kite-rectangle system derived from the
//! triangle substitution.

use std::sync::OnceLock;

use num_bigint::BigInt;
use tilehull_core::apx::{build_complex, cohomology, induced_maps, torsion_representatives, CWComplex2, CohomologyResult};
use tilehull_core::collar::{census, CollaredSystem};
use tilehull_core::cone::{find_symmetric_centers, orbit_periodicity, CenterKind};
use tilehull_core::intlin::{characteristic_polynomial, integer_roots};
use tilehull_core::tiling::derive_kr_system;

struct Computed {
    cs: CollaredSystem,
    cw: CWComplex2,
    coh: CohomologyResult,
}

fn computed() -> &'static Computed {
    static C: OnceLock<Computed> = OnceLock::new();
    C.get_or_init(|| {
        let cs = census(&derive_kr_system().unwrap()).unwrap();
        let cw = build_complex(&cs).unwrap();
        let coh = cohomology(&cw).unwrap();
        Computed { cs, cw, coh }
    })
}

#[test]
fn census_and_cells() {
    let c = computed();
    assert_eq!(c.cs.family_counts(), vec![31, 26, 26]);
    assert_eq!((c.cw.num_vertices(), c.cw.num_edges(), c.cw.num_faces()), (73, 138, 83));
    assert_eq!(c.cw.euler_characteristic(), 18);
    assert!(c.cw.delta1().mul(c.cw.delta0()).unwrap().is_zero());
}

#[test]
fn cohomology_groups() {
    let c = computed();
    assert_eq!((c.coh.h0.free_rank(), c.coh.h1.free_rank(), c.coh.h2.free_rank()), (1, 1, 18));
    assert!(c.coh.h0.torsion().is_empty() && c.coh.h1.torsion().is_empty());
    assert_eq!(c.coh.h2.torsion(), vec![BigInt::from(2)]);
    assert!(!torsion_representatives(&c.cw, &c.coh).unwrap().is_empty());
}

#[test]
fn induced_maps_and_roots() {
    let c = computed();
    let maps = induced_maps(&c.cs, &c.cw, &c.coh).unwrap();
    assert!(maps.a0.is_identity());
    assert!(maps.a1.is_identity());
    let cp = characteristic_polynomial(maps.a2.matrix()).unwrap();
    let roots = integer_roots(&cp, &maps.a2.matrix().max_abs_row_sum());
    let mult = |r: i64| roots.iter().find(|(x, _)| *x == BigInt::from(r)).map_or(0, |(_, m)| *m);
    assert_eq!((mult(25), mult(3), mult(1), mult(0)), (1, 2, 6, 10));
}

#[test]
fn symmetric_centres() {
    let c = computed();
    let centers = find_symmetric_centers(&c.cs).unwrap();
    assert_eq!(centers.len(), 10);
    let periodic: Vec<_> = centers.iter().filter(|x| x.is_periodic()).collect();
    assert_eq!(periodic.len(), 6);
    let mut periods: Vec<usize> = periodic.iter().map(|x| x.period.unwrap()).collect();
    periods.sort();
    assert_eq!(periods, vec![1, 1, 2, 2, 2, 2]);
    assert_eq!(periodic.iter().filter(|x| x.kind == CenterKind::Vertex).count(), 2);
    assert_eq!(periodic.iter().filter(|x| x.kind == CenterKind::TileInterior).count(), 2);
    for x in centers.iter().filter(|x| !x.is_periodic()) {
        // every other centre falls into a cycle of length two
        assert_eq!(orbit_periodicity(x, &c.cs).unwrap(), (false, 2));
        assert_eq!(x.kind, CenterKind::EdgeInterior);
    }
}
