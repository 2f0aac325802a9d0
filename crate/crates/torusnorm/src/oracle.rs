//! Brute-force reference values: shortest closed walks per class by
//! Dijkstra in a finite window of the universal cover.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::surface::{Cocycle, EmbeddedGraph, HomologyClass};
use crate::weight::Weight;

/// Why a brute-force value is exact.
#[derive(Clone, Debug)]
pub struct NormCertificate {
    /// Translations `|x|, |y| <= window` were explored.
    pub window: i64,
    /// Every walk leaving the window passes a vertex at least this far away.
    pub boundary_distance: Weight,
}

struct Window {
    w: i64,
    side: usize,
}

impl Window {
    fn index(&self, v: usize, t: HomologyClass) -> Option<usize> {
        if t.x.abs() > self.w || t.y.abs() > self.w {
            return None;
        }
        let s = self.side;
        Some(v * s * s + (t.x + self.w) as usize * s + (t.y + self.w) as usize)
    }
}

/// Distances from `(v, 0)` to `(v, t)` for every translation of the window,
/// and the distance to the nearest vertex with an edge leaving the window.
fn closed_walk_lengths(g: &EmbeddedGraph, coords: &Cocycle, v: usize, w: i64) -> (Vec<Option<Weight>>, Weight) {
    let win = Window { w, side: (2 * w + 1) as usize };
    let n = g.vertex_count() * win.side * win.side;
    let mut dist: Vec<Option<Weight>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let start = win.index(v, HomologyClass::ZERO).unwrap();
    dist[start] = Some(g.zero_weight());
    heap.push(Reverse((g.zero_weight(), v, HomologyClass::ZERO)));
    let mut boundary: Option<Weight> = None;
    while let Some(Reverse((d, u, t))) = heap.pop() {
        let i = win.index(u, t).unwrap();
        if done[i] {
            continue;
        }
        done[i] = true;
        for &dart in g.rotation(u) {
            let y = g.head(dart);
            let ty = t + coords.of_dart(dart);
            let Some(j) = win.index(y, ty) else {
                if boundary.is_none() {
                    boundary = Some(d.clone());
                }
                continue;
            };
            let nd = &d + g.weight(dart);
            if dist[j].as_ref().is_none_or(|old| nd < *old) {
                dist[j] = Some(nd.clone());
                heap.push(Reverse((nd, y, ty)));
            }
        }
    }
    let mut out = vec![None; win.side * win.side];
    for x in -w..=w {
        for y in -w..=w {
            let t = HomologyClass::new(x, y);
            out[win.index(0, t).unwrap()] = dist[win.index(v, t).unwrap()].clone();
        }
    }
    (out, boundary.expect("the window boundary is reachable"))
}

/// Norms of all non-zero classes with `|x|, |y| <= radius`, each certified
/// against the window boundary; the window doubles until every value is.
pub fn brute_norms(g: &EmbeddedGraph, coords: &Cocycle, radius: i64) -> (BTreeMap<HomologyClass, Weight>, NormCertificate) {
    brute_norms_threaded(g, coords, radius, 1)
}

fn all_closed_walk_lengths(g: &EmbeddedGraph, coords: &Cocycle, w: i64, threads: usize) -> Vec<(Vec<Option<Weight>>, Weight)> {
    let n = g.vertex_count();
    let threads = threads.clamp(1, n);
    if threads == 1 {
        return (0..n).map(|v| closed_walk_lengths(g, coords, v, w)).collect();
    }
    let mut out: Vec<Option<(Vec<Option<Weight>>, Weight)>> = vec![None; n];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|k| s.spawn(move || (k..n).step_by(threads).map(|v| (v, closed_walk_lengths(g, coords, v, w))).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            for (v, r) in h.join().expect("oracle thread") {
                out[v] = Some(r);
            }
        }
    });
    out.into_iter().map(|r| r.expect("every vertex")).collect()
}

/// [`brute_norms`] with the base vertices split over `threads` threads.
pub fn brute_norms_threaded(
    g: &EmbeddedGraph,
    coords: &Cocycle,
    radius: i64,
    threads: usize,
) -> (BTreeMap<HomologyClass, Weight>, NormCertificate) {
    let mut w = radius.max(1) + 1;
    loop {
        let side = (2 * w + 1) as usize;
        let win = Window { w, side };
        let mut best: Vec<Option<Weight>> = vec![None; side * side];
        let mut boundary: Option<Weight> = None;
        for (d, b) in all_closed_walk_lengths(g, coords, w, threads) {
            for (slot, dv) in best.iter_mut().zip(d) {
                if let Some(dv) = dv {
                    if slot.as_ref().is_none_or(|s| dv < *s) {
                        *slot = Some(dv);
                    }
                }
            }
            if boundary.as_ref().is_none_or(|x| b < *x) {
                boundary = Some(b);
            }
        }
        let boundary = boundary.expect("graph has a vertex");
        let mut out = BTreeMap::new();
        let mut certified = true;
        for x in -radius..=radius {
            for y in -radius..=radius {
                let t = HomologyClass::new(x, y);
                if t.is_zero() {
                    continue;
                }
                match &best[win.index(0, t).unwrap()] {
                    Some(d) if *d <= boundary => {
                        out.insert(t, d.clone());
                    }
                    _ => certified = false,
                }
            }
        }
        if certified {
            return (out, NormCertificate { window: w, boundary_distance: boundary });
        }
        w *= 2;
    }
}

/// Distance from `(v, 0)` to `(v, alpha)` in the window, stopping as soon as
/// it is certified against the exit distance.
fn closed_walk_length(g: &EmbeddedGraph, coords: &Cocycle, v: usize, alpha: HomologyClass, w: i64) -> (Option<Weight>, Weight) {
    let win = Window { w, side: (2 * w + 1) as usize };
    let n = g.vertex_count() * win.side * win.side;
    let mut dist: Vec<Option<Weight>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[win.index(v, HomologyClass::ZERO).unwrap()] = Some(g.zero_weight());
    heap.push(Reverse((g.zero_weight(), v, HomologyClass::ZERO)));
    let mut boundary: Option<Weight> = None;
    let mut found: Option<Weight> = None;
    while let Some(Reverse((d, u, t))) = heap.pop() {
        let i = win.index(u, t).unwrap();
        if done[i] {
            continue;
        }
        done[i] = true;
        if u == v && t == alpha {
            found = Some(d.clone());
        }
        for &dart in g.rotation(u) {
            let y = g.head(dart);
            let ty = t + coords.of_dart(dart);
            let Some(j) = win.index(y, ty) else {
                if boundary.is_none() {
                    boundary = Some(d.clone());
                }
                continue;
            };
            let nd = &d + g.weight(dart);
            if dist[j].as_ref().is_none_or(|old| nd < *old) {
                dist[j] = Some(nd.clone());
                heap.push(Reverse((nd, y, ty)));
            }
        }
        if let (Some(_), Some(_)) = (&found, &boundary) {
            break;
        }
    }
    (found, boundary.expect("the window boundary is reachable"))
}

/// Length of a shortest closed walk in class `alpha`, starting from window
/// `window` and expanding it until certified.
pub fn brute_norm(g: &EmbeddedGraph, coords: &Cocycle, alpha: HomologyClass, window: i64) -> Result<(Weight, NormCertificate)> {
    if alpha.is_zero() {
        return Err(Error::ZeroClass);
    }
    let mut w = window.max(alpha.x.abs()).max(alpha.y.abs()).max(1);
    loop {
        let mut best: Option<Weight> = None;
        let mut boundary: Option<Weight> = None;
        for v in 0..g.vertex_count() {
            let (d, b) = closed_walk_length(g, coords, v, alpha, w);
            if let Some(dv) = d {
                if best.as_ref().is_none_or(|s| dv < *s) {
                    best = Some(dv);
                }
            }
            if boundary.as_ref().is_none_or(|x| b < *x) {
                boundary = Some(b);
            }
        }
        let boundary = boundary.expect("graph has a vertex");
        if let Some(b) = best {
            if b <= boundary {
                return Ok((b, NormCertificate { window: w, boundary_distance: boundary }));
            }
        }
        w *= 2;
    }
}

/// The least norm over all non-zero classes with one class attaining it.
pub fn brute_systole(g: &EmbeddedGraph, coords: &Cocycle) -> (Weight, HomologyClass, NormCertificate) {
    systole_through(g, coords, &(0..g.vertex_count()).collect::<Vec<_>>())
}

/// The shortest closed walk through `v` with non-zero class.
pub fn brute_systole_at(g: &EmbeddedGraph, coords: &Cocycle, v: usize) -> (Weight, HomologyClass, NormCertificate) {
    systole_through(g, coords, &[v])
}

fn systole_through(g: &EmbeddedGraph, coords: &Cocycle, bases: &[usize]) -> (Weight, HomologyClass, NormCertificate) {
    let mut w = 1;
    loop {
        let win = Window { w, side: (2 * w + 1) as usize };
        let mut best: Option<(Weight, HomologyClass)> = None;
        let mut boundary: Option<Weight> = None;
        for &v in bases {
            let (d, b) = closed_walk_lengths(g, coords, v, w);
            for x in -w..=w {
                for y in -w..=w {
                    let t = HomologyClass::new(x, y);
                    if t.is_zero() {
                        continue;
                    }
                    let Some(dv) = d[win.index(0, t).unwrap()].clone() else { continue };
                    if best.as_ref().is_none_or(|(s, c)| (&dv, t) < (s, *c)) {
                        best = Some((dv, t));
                    }
                }
            }
            if boundary.as_ref().is_none_or(|x| b < *x) {
                boundary = Some(b);
            }
        }
        let boundary = boundary.expect("at least one base vertex");
        if let Some((b, c)) = best {
            if b <= boundary {
                return (b, c, NormCertificate { window: w, boundary_distance: boundary });
            }
        }
        w *= 2;
    }
}

/// The `k` smallest norms over non-zero classes, sorted by value then class,
/// together with every class whose value equals the last one.
#[derive(Clone, Debug)]
pub struct BruteSpectrum {
    pub items: Vec<(Weight, HomologyClass)>,
    /// All classes with value at most the `k`-th value.
    pub complete: BTreeMap<HomologyClass, Weight>,
}

/// Expands a coordinate window until no class outside it can be among the
/// `k` smallest: a class outside radius `R` has norm at least
/// `min_{|a|=R+1} N(a) - max(N(1,0), N(0,1)) / 2`.
pub fn brute_spectrum(g: &EmbeddedGraph, coords: &Cocycle, k: usize) -> BruteSpectrum {
    brute_spectrum_threaded(g, coords, k, 1)
}

pub fn brute_spectrum_threaded(g: &EmbeddedGraph, coords: &Cocycle, k: usize, threads: usize) -> BruteSpectrum {
    assert!(k >= 1);
    let mut r = 1;
    loop {
        let (norms, _) = brute_norms_threaded(g, coords, r + 1, threads);
        let mut inner: Vec<(Weight, HomologyClass)> = norms
            .iter()
            .filter(|(c, _)| c.x.abs() <= r && c.y.abs() <= r)
            .map(|(c, w)| (w.clone(), *c))
            .collect();
        inner.sort();
        let ring_min = norms.iter().filter(|(c, _)| c.x.abs() == r + 1 || c.y.abs() == r + 1).map(|(_, w)| w).min().unwrap();
        let e = norms[&HomologyClass::new(1, 0)].clone().max(norms[&HomologyClass::new(0, 1)].clone());
        let bound2 = &ring_min.scaled(2) - &e;
        if inner.len() >= k && inner[k - 1].0.scaled(2) < bound2 {
            let last = inner[k - 1].0.clone();
            let complete = inner.iter().filter(|(w, _)| *w <= last).map(|(w, c)| (*c, w.clone())).collect();
            inner.truncate(k);
            return BruteSpectrum { items: inner, complete };
        }
        r *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn bouquet_values() {
        let g = fixtures::bouquet((1, 1), (1, 1));
        let c = g.frame().unwrap();
        assert_eq!(brute_norm(&g, c, HomologyClass::new(1, 0), 1).unwrap().0, Weight::int(1));
        assert_eq!(brute_systole(&g, c).0, Weight::int(1));
        let s = brute_spectrum(&g, c, 4);
        assert_eq!(s.items.iter().map(|x| x.0.clone()).collect::<Vec<_>>(), vec![Weight::int(1); 4]);
        assert!(matches!(brute_norm(&g, c, HomologyClass::ZERO, 1), Err(Error::ZeroClass)));
    }

    #[test]
    fn grid_values() {
        let g = fixtures::grid(3, 4);
        let c = g.frame().unwrap();
        assert_eq!(brute_norm(&g, c, HomologyClass::new(1, 1), 1).unwrap().0, Weight::int(7));
        let g = fixtures::grid(3, 3);
        let s = brute_spectrum(&g, g.frame().unwrap(), 8);
        let v: Vec<i64> = s.items.iter().map(|x| x.0.coeffs()[0]).collect();
        assert_eq!(v, vec![3, 3, 3, 3, 6, 6, 6, 6]);
    }

    #[test]
    fn oracle_norm_axioms() {
        let g = fixtures::staircase(2);
        let c = g.frame().unwrap();
        let (n, _) = brute_norms(&g, c, 4);
        for (a, wa) in &n {
            assert_eq!(&n[&-*a], wa);
            for (b, wb) in &n {
                let s = *a + *b;
                if let Some(ws) = n.get(&s) {
                    assert!(*ws <= wa + wb);
                }
            }
            for k in 2..=3 {
                if let Some(wk) = n.get(&(k * *a)) {
                    assert_eq!(*wk, wa * k);
                }
            }
        }
    }

    #[test]
    fn face_boundaries_are_trivial() {
        let g = fixtures::grid(2, 3);
        let c = g.frame().unwrap();
        for f in g.faces() {
            assert!(brute_norm(&g, c, c.sum(f), 1).is_err());
        }
    }
}
