//! Results that must not depend on how a surface is written down: face
//! order, rigid motions and an OFF round trip.

use std::collections::BTreeSet;

use nalgebra::{Rotation3, Unit};
use polymix::fixtures;
use polymix::partition::{enumerate_admissible, is_monochromatic, Family};
use polymix::{dihedral_angles, parse_off, serialize_off, PolyhedralSurface, Side, Vec3};
use proptest::prelude::*;

fn surface(kind: usize, seed: u64) -> PolyhedralSurface {
    match kind {
        0 => fixtures::cube(),
        1 => fixtures::l_prism(),
        2 => fixtures::square_pyramid(),
        3 => Family::NotchedBox {
            min_notches: 1,
            max_notches: 3,
        }
        .generate(seed, 0),
        _ => Family::ConvexHull {
            min_points: 5,
            max_points: 8,
        }
        .generate(seed, 0),
    }
}

fn permuted(s: &PolyhedralSurface, perm: &[usize]) -> PolyhedralSurface {
    let faces = perm.iter().map(|&f| s.face(f).to_vec()).collect();
    PolyhedralSurface::new(s.vertices().to_vec(), faces).unwrap()
}

/// Neumann face sets of every admissible labeling, with face `i` of the
/// permuted surface renamed to `perm[i]`.
fn neumann_sets(s: &PolyhedralSurface, side: Side, perm: &[usize]) -> BTreeSet<Vec<usize>> {
    enumerate_admissible(s, side)
        .unwrap()
        .partitions()
        .unwrap()
        .map(|p| {
            let mut n: Vec<usize> = p.neumann_faces().into_iter().map(|f| perm[f]).collect();
            n.sort_unstable();
            n
        })
        .collect()
}

fn sorted_angles(s: &PolyhedralSurface) -> Vec<f64> {
    let mut a: Vec<f64> = dihedral_angles(s).unwrap().iter().map(|d| d.interior_angle).collect();
    a.sort_by(f64::total_cmp);
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn face_order_does_not_change_partitions(kind in 0usize..5, seed in 0u64..1000, shuffle in any::<u64>()) {
        let s = surface(kind, seed);
        let mut perm: Vec<usize> = (0..s.face_count()).collect();
        let mut state = shuffle;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let t = permuted(&s, &perm);
        let identity: Vec<usize> = (0..s.face_count()).collect();
        for side in [Side::Interior, Side::Exterior] {
            let a = enumerate_admissible(&s, side).unwrap();
            let b = enumerate_admissible(&t, side).unwrap();
            prop_assert_eq!(a.count, b.count);
            prop_assert_eq!(neumann_sets(&s, side, &identity), neumann_sets(&t, side, &perm));
            prop_assert_eq!(
                is_monochromatic(&s, side).unwrap().monochromatic,
                is_monochromatic(&t, side).unwrap().monochromatic
            );
        }
    }

    #[test]
    fn rigid_motion_keeps_angles_and_counts(
        kind in 0usize..5,
        seed in 0u64..1000,
        axis in (-1.0f64..1.0, -1.0f64..1.0, 0.1f64..1.0),
        angle in 0.0f64..std::f64::consts::TAU,
        shift in (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0),
    ) {
        let s = surface(kind, seed);
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(Vec3::new(axis.0, axis.1, axis.2)), angle);
        let t_vec = Vec3::new(shift.0, shift.1, shift.2);
        let moved: Vec<Vec3> = s.vertices().iter().map(|v| r * v + t_vec).collect();
        let t = PolyhedralSurface::new(moved, s.faces().to_vec()).unwrap();
        for (a, b) in sorted_angles(&s).iter().zip(sorted_angles(&t)) {
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
        for side in [Side::Interior, Side::Exterior] {
            prop_assert_eq!(
                enumerate_admissible(&s, side).unwrap().count,
                enumerate_admissible(&t, side).unwrap().count
            );
        }
    }
}

#[test]
fn off_round_trip_preserves_counts() {
    for name in fixtures::NAMES {
        let s = fixtures::by_name(name).unwrap();
        let t = parse_off(&serialize_off(&s)).unwrap();
        assert_eq!(t.vertices(), s.vertices(), "{name}");
        for side in [Side::Interior, Side::Exterior] {
            assert_eq!(
                enumerate_admissible(&s, side).unwrap().count,
                enumerate_admissible(&t, side).unwrap().count,
                "{name}"
            );
        }
    }
}
