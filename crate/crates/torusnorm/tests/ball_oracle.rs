use torusnorm::ball::UnitBall;
use torusnorm::fixtures;
use torusnorm::oracle::brute_norms;
use torusnorm::HomologyClass;

#[test]
fn norm_matches_brute_force_on_fixtures() {
    for (name, g) in fixtures::small_fixtures() {
        if g.vertex_count() > 12 {
            continue;
        }
        let ball = UnitBall::new(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
        let (brute, _) = brute_norms(&g, ball.basis().coords(), 5);
        for (c, w) in &brute {
            assert_eq!(&ball.norm_eval(*c), w, "{name} at {c}");
        }
        assert!(ball.norm_eval(HomologyClass::ZERO).is_zero());
    }
}

#[test]
fn golden_pair_shapes() {
    let left = UnitBall::new(&fixtures::hexagon_graph()).unwrap();
    let right = UnitBall::new(&fixtures::octagon_graph()).unwrap();
    assert_eq!(left.extremal_points().len(), 6);
    assert_eq!(right.extremal_points().len(), 8);
}

#[test]
fn golden_pair_series() {
    use torusnorm::genfun::*;
    let left = generating_function(&UnitBall::new(&fixtures::hexagon_graph()).unwrap());
    let right = generating_function(&UnitBall::new(&fixtures::octagon_graph()).unwrap());
    let (l, r) = jointly_scaled(&left, &right).unwrap();
    let num = Dense::from_1d(&[1, 0, 3, 4, 3, 0, 1]);
    let den = Dense::from_1d(&[1, 0, -1, 0, -1, 0, 1]);
    println!("{:?} {:?}", l.series(8).unwrap(), r.series(8).unwrap());
    assert!(l.ehrhart_form().equals_quotient(&num, &den));
    assert!(r.ehrhart_form().equals_quotient(&num, &den));
    assert!(unmarked_equal_det(&left, &right, 2).unwrap());
}

#[test]
fn systole_search_matches_oracle() {
    use torusnorm::cover::certified_systole_search;
    use torusnorm::oracle::brute_systole_at;
    for (name, g) in fixtures::small_fixtures() {
        if g.vertex_count() > 12 {
            continue;
        }
        let coords = g.provisional_cocycle();
        for v in 0..g.vertex_count() {
            let s = certified_systole_search(&g, coords, v);
            let (w, _, _) = brute_systole_at(&g, coords, v);
            assert_eq!(s.weight, w, "{name} at vertex {v}");
            assert!(s.boundary_distance.as_ref().is_none_or(|b| *b >= s.weight), "{name}: certificate");
        }
    }
}

fn value_multiset(g: &torusnorm::EmbeddedGraph, k: usize) -> Vec<num_rational::BigRational> {
    use torusnorm::oracle::brute_spectrum;
    let ball = UnitBall::new(g).unwrap();
    let s = brute_spectrum(g, ball.basis().coords(), k);
    let values: Vec<_> = s.items.iter().map(|(w, _)| w.to_rational(g.scale()).unwrap()).collect();
    for w in values.windows(2) {
        assert!(w[0] <= w[1]);
    }
    // the last value may be cut; all earlier ones come in +-pairs
    let last = values.last().unwrap().clone();
    let full: Vec<_> = values.iter().filter(|v| **v != last).cloned().collect();
    let mut counts = std::collections::BTreeMap::new();
    for v in &full {
        *counts.entry(v.clone()).or_insert(0usize) += 1;
    }
    assert!(counts.values().all(|c| c % 2 == 0));
    full
}

#[test]
fn deterministic_comparison_agrees_with_oracle_spectra() {
    use torusnorm::genfun::{generating_function, unmarked_equal_det, DENSE_RANK_CAP};
    let graphs: Vec<_> = fixtures::small_fixtures().into_iter().filter(|(_, g)| g.vertex_count() <= 12).collect();
    let data: Vec<_> = graphs
        .iter()
        .map(|(_, g)| (generating_function(&UnitBall::new(g).unwrap()), value_multiset(g, 24)))
        .collect();
    for i in 0..graphs.len() {
        for j in i..graphs.len() {
            let eq = unmarked_equal_det(&data[i].0, &data[j].0, DENSE_RANK_CAP).unwrap();
            let (a, b) = (&data[i].1, &data[j].1);
            let n = a.len().min(b.len());
            let prefix_equal = a[..n] == b[..n];
            if eq {
                assert!(prefix_equal, "{} vs {}", graphs[i].0, graphs[j].0);
            }
            if !prefix_equal {
                assert!(!eq, "{} vs {}", graphs[i].0, graphs[j].0);
            }
        }
    }
}
