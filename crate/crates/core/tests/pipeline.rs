use apmagic::ap::kappa_of;
use apmagic::audit::{audit_sum, build_instance, Status};
use apmagic::grid::{chain_decompose, to_ap_structure, verify, Classification};
use apmagic::kappa::alpha_of;
use apmagic::search::{find_square_ap_triples, hunt, near_misses, pairs_for_sum, scan_common_differences};
use apmagic::{Int, Ratio};

#[test]
fn alpha_times_length_squared_is_the_sum() {
    let mut seen = 0;
    for d in 1..=1_000_000u64 {
        for pair in pairs_for_sum(d) {
            let alpha = alpha_of(&kappa_of(&pair)).unwrap();
            let n2 = Ratio::integer(pair.n2());
            assert_eq!(&alpha * &n2.square(), Ratio::integer(d), "d = {d}");
            seen += 1;
        }
    }
    assert!(seen > 1000);
}

#[test]
fn near_misses_are_semi_magic_squares_of_squares() {
    let rec = scan_common_differences(2000, 3).into_iter().next().unwrap();
    assert_eq!(rec.d1, 3360);
    let [a, b, c] = [rec.pairs[0], rec.pairs[1], rec.pairs[2]];
    let misses = near_misses(a, b, c);
    assert!(!misses.is_empty());
    for m in misses {
        let rep = verify(&m.grid);
        assert_eq!(rep.classification, Classification::SemiMagic);
        assert!(rep.all_square && rep.distinct);
        assert_eq!(rep.constants.len(), 2);
        assert_eq!(rep.diag_sums[1], rep.row_sums[0]);
    }
}

#[test]
fn hunt_report_round_trips_through_json() {
    let report = hunt(3000, true);
    assert!(report.accepted.is_empty());
    let text = serde_json::to_string(&report).unwrap();
    let back: apmagic::search::HuntReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

#[test]
fn repeated_triple_chain_has_ap_structure() {
    let grid = apmagic::grid::generate_from_chain(1, 24, -48).unwrap();
    assert!(grid.cells().iter().all(|&v| apmagic::grid::is_square(v)));
    let dec = chain_decompose(&grid).unwrap();
    assert_eq!((dec.d1, dec.d2), (24, -48));
    let s = to_ap_structure(&grid).unwrap();
    assert_eq!(s.d1, Int::from(24));
    assert!(s.primed);
    assert!(!s.distinct_pairs);
}

#[test]
fn audit_over_a_three_triple_difference() {
    let reports = audit_sum(3360);
    assert_eq!(reports.len(), 10);
    for r in &reports {
        let symmetric = r.triples[0] == r.triples[1] && r.triples[1] == r.triples[2];
        if symmetric {
            assert!(r.statuses().iter().all(|s| *s == Status::Holds));
        }
        assert_eq!(r.conclusion.len(), 5);
    }
    let t = find_square_ap_triples(3360);
    let inst = build_instance(t[0], t[1], t[2]).unwrap();
    assert_eq!(inst.d1, Int::from(3360));
}
