use laminar_core::construct::{
    fano_tower, general_n_lower_bound, nested_uniform, small_construction, small_construction_size,
    three_series_report, ConstructError, TowerOptions,
};
use laminar_core::geometry::{
    affine_plane, circle_geometry, greedy_packing, is_design, is_packing, projective_plane,
};
use laminar_core::rat::Rat;
use laminar_core::search::{max_laminar_exact, SearchOptions};
use laminar_core::setfam::{is_t_laminar, Block, Family};
use num_bigint::BigUint;

#[test]
fn planes_for_small_prime_powers() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let a = affine_plane(q).unwrap();
        assert!(is_design(&a), "affine {q}");
        assert_eq!(a.block_count() as u64, q * q + q);
        let p = projective_plane(q).unwrap();
        assert!(is_design(&p), "projective {q}");
        assert_eq!(p.block_count() as u64, q * q + q + 1);
    }
    assert!(affine_plane(6).is_err());
    assert!(projective_plane(10).is_err());
}

#[test]
fn circle_geometry_rejects_non_prime_powers() {
    assert!(circle_geometry(6).is_err());
    let d = circle_geometry(4).unwrap();
    assert!(is_design(&d));
    assert_eq!(d.block_count(), 4 * 17);
}

#[test]
fn fano_plane_nesting_gives_29() {
    let fano = projective_plane(2).unwrap();
    let inner = small_construction(3).unwrap();
    let mut fam = nested_uniform(&fano, &inner).unwrap();
    fam.insert(Block::full(7)).unwrap();
    assert!(is_t_laminar(&fam, 2));
    assert_eq!(fam.count_at_least(2), 29);

    let tower = fano_tower(0, &TowerOptions::materialized()).unwrap();
    assert_eq!(tower.family.unwrap().count_at_least(2), 29);
}

#[test]
fn non_laminar_replacement_is_refused() {
    let plane = projective_plane(3).unwrap();
    let bad = Family::from_point_lists(4, [vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
    assert!(matches!(nested_uniform(&plane, &bad), Err(ConstructError::NotLaminar { t: 2, .. })));
    let small = Family::from_point_lists(3, [vec![1, 2]]).unwrap();
    assert!(matches!(
        nested_uniform(&plane, &small),
        Err(ConstructError::GroundMismatch { .. })
    ));
}

#[test]
fn general_bound_from_packing() {
    let p = greedy_packing(13, 4, 2, 3).unwrap();
    assert!(is_packing(&p));
    let g4 = Rat::from_integer(small_construction_size(4).0);
    let b = general_n_lower_bound(&p, &g4).unwrap();
    assert_eq!(b, Rat::from_integer(p.block_count() as u64 * 8 + 1));
}

#[test]
fn construction_never_beats_search() {
    for n in 3..=7 {
        let (size, _) = small_construction_size(n);
        let fam = small_construction(n).unwrap();
        assert_eq!(fam.count_at_least(2) as u64, size);
        assert!(is_t_laminar(&fam, 2));
        let s = max_laminar_exact(n, 2, &SearchOptions::default()).unwrap();
        assert!(size <= s.size as u64, "n={n}");
    }
}

#[test]
fn tower_counts_are_big_integers() {
    let r3 = fano_tower(3, &TowerOptions::counts_only()).unwrap();
    assert_eq!(r3.report.n, BigUint::from(7u64).pow(8));
    assert!(r3.family.is_none());
    assert!(fano_tower(2, &TowerOptions::materialized()).is_err());
}

#[test]
fn three_series_reports_both_readings() {
    let r0 = three_series_report(0);
    let (printed, recursive) = r0.pair();
    assert_ne!(printed, recursive);
    assert_eq!(recursive, Rat::from_integer(207));
    assert!(r0.limit_discrepancy());
    let r1 = three_series_report(1);
    assert_eq!(r1.recursive_count_geq_3, BigUint::from(111_439u64));
}
