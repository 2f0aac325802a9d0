//! A good short basis `(a, b)` of the first homology and the coordinates it
//! induces.

use crate::cover::{certified_systole_search, check_good_pair, dijkstra, Band, Control, CycleLines, LiftedVertex};
use crate::error::{Error, Result};
use crate::surface::{Cocycle, CycleRep, Dart, EmbeddedGraph, HomologyClass};

/// Two simple tight cycles with `<a, b> = 1` meeting along one subpath;
/// `a` is a systole and `b` is shortest among cycles crossing `a` once.
#[derive(Clone, Debug)]
pub struct GoodBasis {
    pub a: CycleRep,
    pub b: CycleRep,
    coords: Cocycle,
}

impl GoodBasis {
    /// The cocycle giving `(a, b)` coordinates.
    pub fn coords(&self) -> &Cocycle {
        &self.coords
    }

    /// `(<w, b>, <a, w>)` for a closed walk `w`.
    pub fn homology_class(&self, g: &EmbeddedGraph, walk: &[Dart]) -> Result<HomologyClass> {
        g.check_closed(walk)?;
        Ok(self.coords.sum(walk))
    }

    pub fn cycle(&self, g: &EmbeddedGraph, walk: Vec<Dart>) -> Result<CycleRep> {
        CycleRep::new(g, &self.coords, walk)
    }

    /// The same cycles in coordinates `m * old`, for a unimodular `m`.
    pub(crate) fn transformed(&self, g: &EmbeddedGraph, m: [[i64; 2]; 2]) -> GoodBasis {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        debug_assert!(det == 1 || det == -1);
        let coords = self.coords.transformed(m, self.coords.orientation() * det);
        let a = CycleRep::new(g, &coords, self.a.darts.clone()).expect("closed");
        let b = CycleRep::new(g, &coords, self.b.darts.clone()).expect("closed");
        GoodBasis { a, b, coords }
    }

    /// Algebraic intersection number of two closed walks.
    pub fn algebraic_intersection(&self, c: &CycleRep, d: &CycleRep) -> i64 {
        c.class.det(d.class)
    }
}

fn lex_key(c: &CycleRep) -> (&crate::weight::Weight, &[Dart]) {
    (&c.weight, &c.darts)
}

/// A shortest non-trivial closed walk, with its class in the graph's
/// provisional coordinates. Ties are broken by the dart sequence.
pub fn systole_cycle(g: &EmbeddedGraph) -> CycleRep {
    let coords = g.provisional_cocycle();
    let mut best: Option<CycleRep> = None;
    for v in 0..g.vertex_count() {
        let s = certified_systole_search(g, coords, v);
        let c = CycleRep { darts: s.darts, weight: s.weight, class: s.class };
        if best.as_ref().is_none_or(|b| lex_key(&c) < lex_key(b)) {
            best = Some(c);
        }
    }
    let a = best.expect("graph has a vertex");
    assert!(g.is_simple(&a.darts), "a shortest non-trivial closed walk is simple");
    a
}

/// Computes a good short basis and the induced coordinates.
pub fn good_short_basis(g: &EmbeddedGraph) -> Result<GoodBasis> {
    let prov = g.provisional_cocycle();
    let a = systole_cycle(g);
    let la = CycleLines::new(g, prov, &a.darts);
    let band = Band { lines: &la, lo: 0, hi: 2 };
    let mut best: Option<(CycleRep, Vec<LiftedVertex>)> = None;
    for i in 0..la.len() {
        let source = la.at(0, i as i64);
        let u = source.vertex;
        let mut target = None;
        let search = dijkstra(
            g,
            prov,
            &[source],
            |x, d, y| band.admits(x, d, y),
            |x, _| {
                if x.vertex == u && la.level2(x) == 2 {
                    target = Some(x);
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        );
        let target = target.ok_or_else(|| Error::Internal("strip search found no twin".into()))?;
        let darts = search.path_to(target);
        let c = CycleRep { weight: g.walk_weight(&darts), class: prov.sum(&darts), darts };
        if best.as_ref().is_none_or(|(b, _)| lex_key(&c) < lex_key(b)) {
            let (lifts, _) = crate::cover::lift_walk(g, prov, &c.darts, source)?;
            best = Some((c, lifts));
        }
    }
    let (b_raw, lifts) = best.expect("a has a vertex");
    let b = normalize_b(g, &la, &b_raw, &lifts)?;
    let eps = prov.orientation();
    let (aa, bb) = (a.class, b.class);
    if prov.pairing(aa, bb) != 1 {
        return Err(Error::Internal("basis pairing is not +1".into()));
    }
    let m = [[eps * bb.y, -eps * bb.x], [-eps * aa.y, eps * aa.x]];
    let coords = prov.transformed(m, 1);
    let a = CycleRep::new(g, &coords, a.darts)?;
    let b = CycleRep::new(g, &coords, b.darts)?;
    debug_assert_eq!(a.class, HomologyClass::new(1, 0));
    debug_assert_eq!(b.class, HomologyClass::new(0, 1));
    check_good_pair(g, &a.darts, &b.darts).map_err(|e| Error::Internal(format!("basis is not good: {e}")))?;
    Ok(GoodBasis { a, b, coords })
}

/// Replaces the parts of `b` before its last visit of the first line and
/// after its first subsequent visit of the second line by segments of those
/// lines.
fn normalize_b(g: &EmbeddedGraph, la: &CycleLines, b: &CycleRep, lifts: &[LiftedVertex]) -> Result<CycleRep> {
    let i0 = (0..lifts.len()).rev().find(|&i| la.level2(lifts[i]) == 0).expect("starts on the first line");
    let j0 = (i0..lifts.len()).find(|&j| la.level2(lifts[j]) == 2).expect("ends on the second line");
    let (_, p_start) = la.locate(lifts[0]).expect("on a line");
    let (_, p_i0) = la.locate(lifts[i0]).expect("on a line");
    let (_, p_j0) = la.locate(lifts[j0]).expect("on a line");
    let (_, p_end) = la.locate(lifts[lifts.len() - 1]).expect("on a line");
    let mut darts = la.segment(p_start, p_i0);
    darts.extend_from_slice(&b.darts[i0..j0]);
    darts.extend(la.segment(p_j0, p_end));
    let w = g.walk_weight(&darts);
    if w != b.weight {
        return Err(Error::Internal("splicing along the cut changed the weight of b".into()));
    }
    if !g.is_simple(&darts) {
        return Err(Error::Internal("b is not simple after normalization".into()));
    }
    Ok(CycleRep { class: g.provisional_cocycle().sum(&darts), weight: w, darts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::weight::Weight;

    #[test]
    fn bouquet_basis() {
        let g = fixtures::bouquet((1, 1), (1, 1));
        let b = good_short_basis(&g).unwrap();
        assert_eq!(b.a.weight, Weight::int(1));
        assert_eq!(b.b.weight, Weight::int(1));
        assert_eq!(b.algebraic_intersection(&b.a, &b.b), 1);
    }

    #[test]
    fn weighted_bouquet_basis() {
        let g = fixtures::bouquet((5, 1), (2, 1));
        let b = good_short_basis(&g).unwrap();
        assert_eq!(b.a.darts.len(), 1);
        assert_eq!(b.a.darts[0].edge(), 1);
        assert_eq!((b.a.weight.clone(), b.b.weight.clone()), (Weight::int(2), Weight::int(5)));
    }

    #[test]
    fn grid_basis() {
        let g = fixtures::grid(3, 4);
        let b = good_short_basis(&g).unwrap();
        assert_eq!(b.a.weight, Weight::int(3));
        assert_eq!(b.b.weight, Weight::int(4));
        for f in g.faces() {
            assert_eq!(b.homology_class(&g, f).unwrap(), HomologyClass::ZERO);
        }
    }
}

#[cfg(test)]
mod corpus {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;

    #[test]
    fn basis_on_every_fixture() {
        for (name, g) in fixtures::small_fixtures() {
            let b = good_short_basis(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(b.a.weight <= b.b.weight, "{name}");
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for i in 0..200 {
            let g = fixtures::random_embedding(&mut rng, 30);
            good_short_basis(&g).unwrap_or_else(|e| panic!("random {i}: {e}"));
        }
    }
}
