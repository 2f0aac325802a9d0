//! The list `H` of tight simple cycles and the unit ball of the norm.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::basis::{good_short_basis, GoodBasis};
use crate::cover::{check_good_pair, dijkstra, lift_walk, Band, Control, CycleLines, LiftedVertex};
use crate::error::{Error, Result};
use crate::surface::{Cocycle, CycleRep, Dart, EmbeddedGraph, HomologyClass};
use crate::weight::Weight;

/// One entry of `H`: a primitive class with a tight simple representative.
#[derive(Clone, Debug)]
pub struct HEntry {
    pub class: HomologyClass,
    pub cycle: CycleRep,
    pub weight: Weight,
}

impl HEntry {
    fn from_cycle(cycle: CycleRep) -> Self {
        HEntry { class: cycle.class, weight: cycle.weight.clone(), cycle }
    }

    fn reversed(&self) -> Self {
        HEntry::from_cycle(self.cycle.reversed())
    }
}

/// Which candidate family produced a tight sum.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum SourceCase {
    /// Source on the part of the first cycle not shared with the second.
    OwnPath,
    /// Source on the shared subpath.
    SharedPath,
}

struct Candidate {
    weight: Weight,
    source: LiftedVertex,
    darts: Vec<Dart>,
    #[allow(dead_code)]
    case: SourceCase,
}

/// Tight representative of `alpha + beta` for a good pair with
/// `<alpha, beta> = 1`, normalized so that its lifts meet each nearby line
/// of either cycle in one connected piece. When it is strictly shorter than
/// `c_alpha` and `c_beta` together, it is simple and forms good pairs with both.
pub fn tight_sum(g: &EmbeddedGraph, coords: &Cocycle, ca: &CycleRep, cb: &CycleRep) -> Result<CycleRep> {
    check_good_pair(g, &ca.darts, &cb.darts)?;
    if coords.pairing(ca.class, cb.class) != 1 {
        return Err(Error::NotGood("pairing of the pair must be +1".into()));
    }
    let la = CycleLines::new(g, coords, &ca.darts);
    let lb = CycleLines::new(g, coords, &cb.darts);
    let band_a = Band { lines: &la, lo: 0, hi: 2 };
    let band_b = Band { lines: &lb, lo: -2, hi: 2 };
    let shift = ca.class + cb.class;

    let mut sources: Vec<(SourceCase, LiftedVertex)> = Vec::new();
    for case in [SourceCase::OwnPath, SourceCase::SharedPath] {
        for i in 0..la.len() {
            let base = la.at(0, i as i64);
            let shared = lb.contains_vertex(base.vertex);
            if shared != (case == SourceCase::SharedPath) {
                continue;
            }
            let l = lb.level2(base);
            // beta level of base + m alpha is l - 2m
            let lo = (l - 2).div_euclid(2) + i64::from((l - 2).rem_euclid(2) != 0);
            let hi = l.div_euclid(2);
            for m in lo..=hi {
                sources.push((case, base.translated(m * ca.class)));
            }
        }
    }

    let mut candidates: Vec<Candidate> = Vec::new();
    for &(case, s) in &sources {
        let t = s.translated(shift);
        let mut reached: Option<Weight> = None;
        let search = dijkstra(
            g,
            coords,
            &[s],
            |x, d, y| band_a.admits(x, d, y) && band_b.admits(x, d, y),
            |x, w| {
                if x == t {
                    reached = Some(w.clone());
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        );
        if let Some(w) = reached {
            candidates.push(Candidate { weight: w, source: s, darts: search.path_to(t), case });
        }
    }
    let best = candidates
        .iter()
        .map(|c| &c.weight)
        .min()
        .cloned()
        .ok_or_else(|| Error::Internal("no lift of the sum inside the region".into()))?;
    let lines: [(&CycleLines, i64); 5] = [(&la, 0), (&la, 1), (&lb, -1), (&lb, 1), (&lb, 0)];
    let mut last_err = String::new();
    for c in candidates.iter().filter(|c| c.weight == best) {
        let darts = splice_lines(g, coords, &lines, c.source, c.darts.clone())?;
        let rep = CycleRep::new(g, coords, darts)?;
        debug_assert_eq!(rep.class, shift);
        if rep.weight != best {
            return Err(Error::Internal("splicing along lines changed the weight".into()));
        }
        if best == &ca.weight + &cb.weight {
            return Ok(rep);
        }
        if !g.is_simple(&rep.darts) {
            last_err = "representative is not simple".into();
            continue;
        }
        if let Err(e) = check_good_pair(g, &ca.darts, &rep.darts).and_then(|_| check_good_pair(g, &rep.darts, &cb.darts)) {
            last_err = e.to_string();
            continue;
        }
        return Ok(rep);
    }
    Err(Error::NotGood(format!("no tight representative of {shift} forms good pairs: {last_err}")))
}

/// Replaces the stretch between the first and last visit of each line by the
/// segment of that line, until nothing changes.
fn splice_lines(
    g: &EmbeddedGraph,
    coords: &Cocycle,
    lines: &[(&CycleLines, i64)],
    source: LiftedVertex,
    mut darts: Vec<Dart>,
) -> Result<Vec<Dart>> {
    for _pass in 0..4 * lines.len() {
        let mut changed = false;
        for &(l, k) in lines {
            let (lifts, _) = lift_walk(g, coords, &darts, source)?;
            let hits: Vec<usize> =
                (0..lifts.len()).filter(|&i| l.contains_vertex(lifts[i].vertex) && l.level2(lifts[i]) == 2 * k).collect();
            if hits.len() < 2 {
                continue;
            }
            let (f, e) = (hits[0], hits[hits.len() - 1]);
            let (_, pf) = l.locate(lifts[f]).expect("on line");
            let (_, pe) = l.locate(lifts[e]).expect("on line");
            let seg = l.segment(pf, pe);
            if seg[..] != darts[f..e] {
                let mut next = darts[..f].to_vec();
                next.extend(seg);
                next.extend_from_slice(&darts[e..]);
                darts = next;
                changed = true;
            }
        }
        if !changed {
            return Ok(darts);
        }
    }
    Err(Error::Internal("line splicing did not reach a fixpoint".into()))
}

/// Output of `compute_h`: the classes of `H` with their tight cycles.
#[derive(Clone, Debug)]
pub struct HList {
    /// Angularly sorted from `(1,0)`, both half-planes.
    pub entries: Vec<HEntry>,
    /// Number of sectors examined.
    pub iterations: usize,
}

/// Subdivides sectors by tight sums, keeping a new class only when it is
/// strictly shorter than the sum of the sector's sides; mirrors at the end.
pub fn compute_h(g: &EmbeddedGraph, basis: &GoodBasis) -> Result<HList> {
    let coords = basis.coords();
    let h1 = basis.a.clone();
    let h2 = basis.b.clone();
    let h1_bar = h1.reversed();
    let mut upper: Vec<CycleRep> = vec![h1.clone(), h2.clone()];
    let mut stack: Vec<(CycleRep, CycleRep)> = vec![(h2, h1_bar), (h1, upper[1].clone())];
    let mut iterations = 0;
    while let Some((c, c2)) = stack.pop() {
        iterations += 1;
        let mid = tight_sum(g, coords, &c, &c2)?;
        if mid.weight < &c.weight + &c2.weight {
            upper.push(mid.clone());
            stack.push((mid.clone(), c2));
            stack.push((c, mid));
        }
    }
    upper.sort_by(|x, y| x.class.angle_cmp(y.class));
    let mut entries: Vec<HEntry> = upper.into_iter().map(HEntry::from_cycle).collect();
    let mirrored: Vec<HEntry> = entries.iter().map(HEntry::reversed).collect();
    entries.extend(mirrored);
    Ok(HList { entries, iterations })
}

/// The unit ball of the norm with its generating list `H`.
#[derive(Clone, Debug)]
pub struct UnitBall {
    h: Vec<HEntry>,
    extremal: Vec<usize>,
    iterations: usize,
    basis: GoodBasis,
    scale: u64,
}

/// Sign of the turn at `c1 / w1` between neighbours `c0 / w0` and `c2 / w2`.
fn turn(c0: HomologyClass, w0: &Weight, c1: HomologyClass, w1: &Weight, c2: HomologyClass, w2: &Weight) -> Result<Ordering> {
    let v = &(&(w0 * c1.det(c2)) - &(w1 * c0.det(c2))) + &(w2 * c0.det(c1));
    v.signum()
}

impl UnitBall {
    /// Computes the basis, `H` and the extremal polygon.
    pub fn new(g: &EmbeddedGraph) -> Result<Self> {
        let basis = good_short_basis(g)?;
        Self::with_basis(g, basis)
    }

    pub fn with_basis(g: &EmbeddedGraph, basis: GoodBasis) -> Result<Self> {
        let hl = compute_h(g, &basis)?;
        Self::from_h(g, basis, hl.entries, hl.iterations)
    }

    /// The same ball in the coordinates `m * old`, for `m` with determinant `±1`.
    pub fn transformed(&self, g: &EmbeddedGraph, m: [[i64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det != 1 && det != -1 {
            return Err(Error::Invalid(format!("matrix has determinant {det}")));
        }
        let basis = self.basis.transformed(g, m);
        let mut h: Vec<HEntry> = self
            .h
            .iter()
            .map(|e| HEntry { class: e.class.transform(m), cycle: basis.cycle(g, e.cycle.darts.clone()).expect("closed"), weight: e.weight.clone() })
            .collect();
        h.sort_by(|x, y| x.class.angle_cmp(y.class));
        Self::from_h(g, basis, h, self.iterations)
    }

    fn from_h(g: &EmbeddedGraph, basis: GoodBasis, h: Vec<HEntry>, iterations: usize) -> Result<Self> {
        let t = h.len();
        let mut extremal = Vec::new();
        for i in 0..t {
            let p = &h[(i + t - 1) % t];
            let q = &h[i];
            let r = &h[(i + 1) % t];
            match turn(p.class, &p.weight, q.class, &q.weight, r.class, &r.weight)? {
                Ordering::Greater => extremal.push(i),
                Ordering::Equal => {}
                Ordering::Less => return Err(Error::Internal(format!("H is not convex at {}", q.class))),
            }
        }
        if extremal.len() < 4 {
            return Err(Error::Internal("degenerate hull".into()));
        }
        let bound = 4 * g.vertex_count() + 5;
        if extremal.len() > bound {
            return Err(Error::Internal(format!("{} extremal points exceed 4V+5 = {bound}", extremal.len())));
        }
        let half = t / 2;
        for (k, &i) in extremal.iter().enumerate() {
            let j = extremal[(k + extremal.len() / 2) % extremal.len()];
            if j != (i + half) % t || h[j].class != -h[i].class || h[j].weight != h[i].weight {
                return Err(Error::Internal("extremal polygon is not centrally symmetric".into()));
            }
        }
        Ok(UnitBall { h, extremal, iterations, basis, scale: g.scale() })
    }

    pub fn h(&self) -> &[HEntry] {
        &self.h
    }

    pub fn basis(&self) -> &GoodBasis {
        &self.basis
    }

    /// Sectors examined while building `H`.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Common denominator of the graph's weights.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// Extremal points as (class, weight) pairs in counterclockwise order;
    /// the point is `class / weight`.
    pub fn extremal_points(&self) -> Vec<(HomologyClass, Weight)> {
        self.extremal.iter().map(|&i| (self.h[i].class, self.h[i].weight.clone())).collect()
    }

    pub fn extremal_indices(&self) -> &[usize] {
        &self.extremal
    }

    /// Extremal points with exact rational coordinates in actual weight units,
    /// for single-generator weights.
    pub fn extremal_rational(&self) -> Option<Vec<(BigRational, BigRational)>> {
        self.extremal
            .iter()
            .map(|&i| {
                let w = self.h[i].weight.to_rational(self.scale)?;
                let c = self.h[i].class;
                Some((BigRational::from_integer(BigInt::from(c.x)) / &w, BigRational::from_integer(BigInt::from(c.y)) / &w))
            })
            .collect()
    }

    /// Index `i` of the sector `[c_i, c_{i+1})` containing a non-zero class.
    pub fn sector_of(&self, alpha: HomologyClass) -> usize {
        debug_assert!(!alpha.is_zero());
        let p = self.h.partition_point(|e| e.class.angle_cmp(alpha) != Ordering::Greater);
        p.checked_sub(1).unwrap_or(self.h.len() - 1)
    }

    /// `(u, v)` with `alpha = u c_i + v c_{i+1}`.
    pub fn decompose(&self, alpha: HomologyClass) -> (usize, i64, i64) {
        let i = self.sector_of(alpha);
        let c0 = self.h[i].class;
        let c1 = self.h[(i + 1) % self.h.len()].class;
        (i, alpha.det(c1), c0.det(alpha))
    }

    /// The norm of a class, in scaled weight units.
    pub fn norm_eval(&self, alpha: HomologyClass) -> Weight {
        if alpha.is_zero() {
            return self.h[0].weight.zero_like();
        }
        let (i, u, v) = self.decompose(alpha);
        &(&self.h[i].weight * u) + &(&self.h[(i + 1) % self.h.len()].weight * v)
    }

    /// Length of a shortest closed walk freely homotopic to `walk`.
    pub fn shortest_homotopic_length(&self, g: &EmbeddedGraph, walk: &[Dart]) -> Result<Weight> {
        Ok(self.norm_eval(self.basis.homology_class(g, walk)?))
    }

    /// A tight closed walk in class `alpha`.
    pub fn tight_cycle(&self, g: &EmbeddedGraph, alpha: HomologyClass) -> Result<CycleRep> {
        if alpha.is_zero() {
            return Err(Error::ZeroClass);
        }
        let (i, u, v) = self.decompose(alpha);
        let c0 = &self.h[i].cycle;
        let c1 = &self.h[(i + 1) % self.h.len()].cycle;
        let mut darts = Vec::new();
        if v == 0 {
            for _ in 0..u {
                darts.extend_from_slice(&c0.darts);
            }
        } else if u == 0 {
            for _ in 0..v {
                darts.extend_from_slice(&c1.darts);
            }
        } else {
            let on_c1: std::collections::HashSet<usize> = c1.vertices(g).into_iter().collect();
            let x = c0
                .vertices(g)
                .into_iter()
                .find(|v| on_c1.contains(v))
                .ok_or_else(|| Error::Internal("consecutive cycles of H are disjoint".into()))?;
            let r0 = c0.rooted_at(g, x).expect("x on c0");
            let r1 = c1.rooted_at(g, x).expect("x on c1");
            for _ in 0..u {
                darts.extend_from_slice(&r0.darts);
            }
            for _ in 0..v {
                darts.extend_from_slice(&r1.darts);
            }
        }
        CycleRep::new(g, self.basis.coords(), darts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn classes(ball: &UnitBall) -> Vec<(i64, i64)> {
        ball.h().iter().map(|e| (e.class.x, e.class.y)).collect()
    }

    #[test]
    fn bouquet_ball() {
        let g = fixtures::bouquet((1, 1), (1, 1));
        let ball = UnitBall::new(&g).unwrap();
        assert_eq!(classes(&ball), vec![(1, 0), (0, 1), (-1, 0), (0, -1)]);
        assert_eq!(ball.extremal_points().len(), 4);
        assert_eq!(ball.norm_eval(HomologyClass::new(2, -3)), Weight::int(5));
        let c = ball.tight_cycle(&g, HomologyClass::new(2, 1)).unwrap();
        assert_eq!(c.weight, Weight::int(3));
        assert_eq!(c.class, HomologyClass::new(2, 1));
    }

    #[test]
    fn tight_sum_examples() {
        let g = fixtures::grid(3, 3);
        let basis = good_short_basis(&g).unwrap();
        let s = tight_sum(&g, basis.coords(), &basis.a, &basis.b).unwrap();
        assert_eq!(s.weight, Weight::int(6));
        assert_eq!(s.class, HomologyClass::new(1, 1));
        let g = fixtures::bouquet((1, 1), (10, 1));
        let basis = good_short_basis(&g).unwrap();
        let s = tight_sum(&g, basis.coords(), &basis.a, &basis.b).unwrap();
        assert_eq!(s.weight, Weight::int(11));
    }

    #[test]
    fn grid_norm() {
        let g = fixtures::grid(3, 3);
        let ball = UnitBall::new(&g).unwrap();
        assert_eq!(ball.norm_eval(HomologyClass::new(1, 2)), Weight::int(9));
        assert_eq!(ball.extremal_points().len(), 4);
    }
}
