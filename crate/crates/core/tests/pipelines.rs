use gaplab_core::census::{nn_census, section5_cloud, PointCloud};
use gaplab_core::extremal::{exact_ap_free, lattice_projection, prop1_build, prop1_forced_subset_check};
use gaplab_core::gaps::{fractional_orbit, greedy_max_distinct, spectrum, theorem1_check, CircularSet, WrapPolicy};
use gaplab_core::generators::{decompose, neighbour_gaps, verify_generation, Side};
use gaplab_core::sampling::{random_torus_set, trial_rng};
use gaplab_core::sumset::{covers_differences, difference_set, minimal_difference_cover, sumset, FiniteExactSet};
use gaplab_core::{Rational, TorusPoint, TorusVector};

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

#[test]
fn lattice_corners_generate_every_difference() {
    let p = lattice_projection(&[r(5, 64), r(17, 64)], &[3, 4]).unwrap();
    assert!(p.covers);
    let rep = verify_generation(&p.b, &p.c).unwrap();
    assert!(rep.pass, "{:?}", rep.failures);
    assert!(rep.r_minus.len() <= p.c.len() && rep.r_plus.len() <= p.c.len());
}

#[test]
fn orbit_greedy_subset_respects_both_bounds() {
    let n = 300;
    let b = fractional_orbit(&r(233, 611), n).unwrap();
    let bb = b.to_exact_set();
    assert_eq!(sumset(&bb, &bb).unwrap().len() as u64, 2 * n - 1);
    let g = greedy_max_distinct(&b).unwrap();
    let d = spectrum(&g.set).unwrap().distinct_count() as u64;
    assert!(d + 1 >= (2.0 * n as f64).sqrt().ceil() as u64);
    assert!(theorem1_check(&g.set, &b).unwrap().pass);
    assert!((d - 1) * (d - 1) <= 8 * n);
}

#[test]
fn forced_subset_lies_in_every_cover() {
    let mut s = exact_ap_free(12).unwrap();
    s.elements.truncate(6);
    let inst = prop1_build(12, &s).unwrap();
    let rep = prop1_forced_subset_check(&inst).unwrap();
    assert!(rep.pass && rep.all_unique);
    let b = FiniteExactSet::integers(inst.b.iter().copied());
    let cover = minimal_difference_cover(&b).unwrap();
    let forced: Vec<i64> = s.elements.iter().map(|e| inst.x - e).collect();
    let c = cover.cover.to_i64().unwrap();
    assert!(forced.iter().all(|f| c.contains(f)), "{c:?} misses {forced:?}");
    // dropping any forced element breaks the cover
    let without: Vec<i64> = c.iter().copied().filter(|x| *x != forced[0]).collect();
    assert!(covers_differences(&b, &FiniteExactSet::integers(without)).unwrap().is_err());
}

#[test]
fn random_sets_decompose_on_both_sides() {
    for t in 0..10 {
        let mut rng = trial_rng(99, t);
        let b = random_torus_set(&mut rng, 12, 97);
        let c = CircularSet::new(minimal_difference_cover(&b.to_exact_set()).unwrap().cover.to_torus_points(), WrapPolicy::IncludeWrap)
            .unwrap();
        let gens = neighbour_gaps(&b, &c).unwrap();
        let diffs = difference_set(&b.to_exact_set(), &b.to_exact_set()).unwrap();
        for d in diffs.elements() {
            for side in [Side::Minus, Side::Plus] {
                let cert = decompose(d, &b, &c, side).unwrap();
                assert!(cert.verify(&gens), "{d} {side:?}");
            }
        }
    }
}

#[test]
fn example_cloud_census_is_symmetric_under_negation() {
    let a = section5_cloud(4).unwrap();
    let left = nn_census(&a).unwrap();
    let right = nn_census(&a.negated()).unwrap();
    assert_eq!(left.size(), right.size());
}

#[test]
fn reports_round_trip_through_json() {
    let b = CircularSet::new([r(0, 1), r(1, 10), r(2, 10), r(3, 10)].map(TorusPoint::new), WrapPolicy::IncludeWrap).unwrap();
    let c = CircularSet::new([r(0, 1), r(3, 10)].map(TorusPoint::new), WrapPolicy::IncludeWrap).unwrap();
    let rep = verify_generation(&b, &c).unwrap();
    let text = serde_json::to_string(&rep).unwrap();
    assert_eq!(serde_json::from_str::<gaplab_core::generators::GenerationReport>(&text).unwrap(), rep);

    let set: FiniteExactSet = serde_json::from_str(&serde_json::to_string(&b.to_exact_set()).unwrap()).unwrap();
    assert_eq!(set, b.to_exact_set());
    let back: CircularSet = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
    assert_eq!(back, b);

    let v = TorusVector::from_rationals([r(3, 4), r(1, 5)]).unwrap();
    let cloud = PointCloud::new(vec![v.clone(), v.neg()]).unwrap();
    let cloud_back: PointCloud = serde_json::from_str(&serde_json::to_string(&cloud).unwrap()).unwrap();
    assert_eq!(cloud_back, cloud);
    assert_eq!(serde_json::to_string(&r(-6, 8)).unwrap(), "\"-3/4\"");
}
