//! The universal cover: lifted vertices, lines covering a simple cycle,
//! shortest paths in lifted regions, and domains cut along cycles.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::surface::{Cocycle, CycleSides, Dart, EmbeddedGraph, HomologyClass, Side};
use crate::weight::Weight;

/// A vertex of the universal cover: a base vertex in a translated copy of
/// the fundamental domain.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedVertex {
    pub vertex: usize,
    pub translation: HomologyClass,
}

impl LiftedVertex {
    pub fn new(vertex: usize, translation: HomologyClass) -> Self {
        LiftedVertex { vertex, translation }
    }

    pub fn base(vertex: usize) -> Self {
        LiftedVertex { vertex, translation: HomologyClass::ZERO }
    }

    pub fn translated(self, t: HomologyClass) -> Self {
        LiftedVertex { vertex: self.vertex, translation: self.translation + t }
    }

    /// The far end of `d` when leaving this lift.
    pub fn step(self, g: &EmbeddedGraph, coords: &Cocycle, d: Dart) -> LiftedVertex {
        debug_assert_eq!(g.tail(d), self.vertex);
        LiftedVertex { vertex: g.head(d), translation: self.translation + coords.of_dart(d) }
    }
}

/// Lifts a walk starting at `start`; returns the visited lifts (including
/// both ends) and the final lift.
pub fn lift_walk(
    g: &EmbeddedGraph,
    coords: &Cocycle,
    walk: &[Dart],
    start: LiftedVertex,
) -> Result<(Vec<LiftedVertex>, LiftedVertex)> {
    g.check_path(walk)?;
    if let Some(&d) = walk.first() {
        if g.tail(d) != start.vertex {
            return Err(Error::MalformedWalk("walk does not start at the given vertex".into()));
        }
    }
    let mut cur = start;
    let mut out = vec![cur];
    for &d in walk {
        cur = cur.step(g, coords, d);
        out.push(cur);
    }
    Ok((out, cur))
}

/// Result of a region-restricted shortest-path search.
pub(crate) struct Search {
    parent: HashMap<LiftedVertex, (LiftedVertex, Dart)>,
}

impl Search {
    pub fn path_to(&self, target: LiftedVertex) -> Vec<Dart> {
        let mut darts = Vec::new();
        let mut x = target;
        while let Some(&(p, d)) = self.parent.get(&x) {
            darts.push(d);
            x = p;
        }
        darts.reverse();
        darts
    }
}

pub(crate) enum Control {
    Continue,
    Stop,
}

/// Dijkstra over lifted vertices from `sources` (distance zero), following
/// only darts accepted by `admit`. `on_pop` sees vertices in nondecreasing
/// distance order; ties are broken by the lifted vertex order.
pub(crate) fn dijkstra(
    g: &EmbeddedGraph,
    coords: &Cocycle,
    sources: &[LiftedVertex],
    mut admit: impl FnMut(LiftedVertex, Dart, LiftedVertex) -> bool,
    mut on_pop: impl FnMut(LiftedVertex, &Weight) -> Control,
) -> Search {
    let mut dist: HashMap<LiftedVertex, Weight> = HashMap::new();
    let mut parent = HashMap::new();
    let mut done: HashSet<LiftedVertex> = HashSet::new();
    let mut heap = BinaryHeap::new();
    for &s in sources {
        let z = g.zero_weight();
        dist.insert(s, z.clone());
        heap.push(Reverse((z, s)));
    }
    while let Some(Reverse((w, x))) = heap.pop() {
        if !done.insert(x) {
            continue;
        }
        if let Control::Stop = on_pop(x, &w) {
            break;
        }
        for &d in g.rotation(x.vertex) {
            let y = x.step(g, coords, d);
            if done.contains(&y) || !admit(x, d, y) {
                continue;
            }
            let nw = &w + g.weight(d);
            let better = match dist.get(&y) {
                Some(old) => nw < *old,
                None => true,
            };
            if better {
                dist.insert(y, nw.clone());
                parent.insert(y, (x, d));
                heap.push(Reverse((nw, y)));
            }
        }
    }
    Search { parent }
}

/// Solves `pairing(alpha, xi) = 1` for a primitive `alpha`.
pub(crate) fn complement(coords: &Cocycle, alpha: HomologyClass) -> HomologyClass {
    // ext gcd: s*x + t*y = 1, then det(alpha, (-t, s)) = x*s + y*t = 1
    let (g, s, t) = ext_gcd(alpha.x, alpha.y);
    assert_eq!(g.abs(), 1, "class must be primitive");
    let xi = HomologyClass::new(-t * g, s * g);
    debug_assert_eq!(alpha.det(xi), 1);
    if coords.orientation() == 1 {
        xi
    } else {
        -xi
    }
}

pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        // g = s*b + t*(a - q*b)
        let q = (a - a.rem_euclid(b)) / b;
        (g, t, s - q * t)
    }
}

/// The lifts of a simple closed walk: a family of parallel lines in the cover
/// together with a level function that is constant on each line.
#[derive(Clone, Debug)]
pub(crate) struct CycleLines {
    pub darts: Vec<Dart>,
    pub class: HomologyClass,
    xi: HomologyClass,
    index_of: Vec<Option<usize>>,
    vertex_at: Vec<usize>,
    tau0: Vec<HomologyClass>,
    lambda2: Vec<i64>,
    sides: CycleSides,
    orientation: i64,
}

impl CycleLines {
    /// `darts` must be a simple closed walk with a primitive class.
    pub fn new(g: &EmbeddedGraph, coords: &Cocycle, darts: &[Dart]) -> Self {
        debug_assert!(g.is_simple(darts));
        let class = coords.sum(darts);
        let xi = complement(coords, class);
        let mut index_of = vec![None; g.vertex_count()];
        let mut tau0 = Vec::with_capacity(darts.len());
        let mut t = HomologyClass::ZERO;
        for (i, &d) in darts.iter().enumerate() {
            index_of[g.tail(d)] = Some(i);
            tau0.push(t);
            t += coords.of_dart(d);
        }
        let sides = CycleSides::new(g, darts);
        let n = g.vertex_count();
        let mut lambda2 = vec![i64::MIN; n];
        let root = g.tail(darts[0]);
        lambda2[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &d in g.rotation(x) {
                let y = g.head(d);
                if lambda2[y] == i64::MIN {
                    lambda2[y] = lambda2[x] + sides.delta2(d) - 2 * coords.pairing(class, coords.of_dart(d));
                    queue.push_back(y);
                }
            }
        }
        let vertex_at = darts.iter().map(|&d| g.tail(d)).collect();
        CycleLines { darts: darts.to_vec(), class, xi, index_of, vertex_at, tau0, lambda2, sides, orientation: coords.orientation() }
    }

    fn pairing(&self, u: HomologyClass, v: HomologyClass) -> i64 {
        self.orientation * u.det(v)
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    /// Twice the level of a lifted vertex; lines sit at even levels.
    pub fn level2(&self, lv: LiftedVertex) -> i64 {
        self.lambda2[lv.vertex] + 2 * self.pairing(self.class, lv.translation)
    }

    /// Twice the level of the interior of the edge leaving `lv` along `d`.
    pub fn edge_level2(&self, lv: LiftedVertex, d: Dart) -> i64 {
        let base = self.level2(lv);
        match self.sides.side(d) {
            Side::Left => base + 1,
            Side::Right => base - 1,
            _ => base,
        }
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.index_of[v].is_some()
    }

    pub fn side(&self, d: Dart) -> Side {
        self.sides.side(d)
    }

    /// `(line, position)` of a lift lying on one of the lines.
    pub fn locate(&self, lv: LiftedVertex) -> Option<(i64, i64)> {
        let i = self.index_of[lv.vertex]?;
        let l2 = self.level2(lv);
        debug_assert!(l2 % 2 == 0);
        let d = lv.translation - self.tau0[i];
        Some((l2 / 2, i as i64 + self.len() as i64 * self.pairing(d, self.xi)))
    }

    /// The lift at `position` on line `line`.
    pub fn at(&self, line: i64, position: i64) -> LiftedVertex {
        let n = self.len() as i64;
        let i = position.rem_euclid(n);
        let turns = position.div_euclid(n);
        let t = self.tau0[i as usize] + turns * self.class + line * self.xi;
        LiftedVertex::new(self.vertex_at[i as usize], t)
    }

    /// Darts of the line segment between two positions on the same line.
    pub fn segment(&self, from: i64, to: i64) -> Vec<Dart> {
        let n = self.len() as i64;
        if from <= to {
            (from..to).map(|p| self.darts[p.rem_euclid(n) as usize]).collect()
        } else {
            (to..from).rev().map(|p| self.darts[p.rem_euclid(n) as usize].rev()).collect()
        }
    }
}

/// Level bounds (doubled) for a family of lines; vertices and edge
/// interiors must stay within `[lo, hi]`.
pub(crate) struct Band<'a> {
    pub lines: &'a CycleLines,
    pub lo: i64,
    pub hi: i64,
}

impl Band<'_> {
    pub fn admits(&self, x: LiftedVertex, d: Dart, y: LiftedVertex) -> bool {
        let e = self.lines.edge_level2(x, d);
        let l = self.lines.level2(y);
        (self.lo..=self.hi).contains(&e) && (self.lo..=self.hi).contains(&l)
    }
}

/// Outcome of [`certified_systole_search`], with its certificate.
#[derive(Clone, Debug)]
pub struct SystoleSearch {
    /// Closed walk starting and ending at the base vertex.
    pub darts: Vec<Dart>,
    pub weight: Weight,
    /// Class in the coordinates used for the search.
    pub class: HomologyClass,
    /// Half-width of the final window of translations.
    pub window: i64,
    /// Shortest distance from the source to a window-boundary vertex, if the
    /// window has a reachable boundary.
    pub boundary_distance: Option<Weight>,
}

/// Shortest closed walk through `v` with non-zero class, by Dijkstra on an
/// expanding window of translated copies around `(v, 0)`.
pub fn certified_systole_search(g: &EmbeddedGraph, coords: &Cocycle, v: usize) -> SystoleSearch {
    let source = LiftedVertex::base(v);
    let mut window = 1i64;
    loop {
        let inside = |t: HomologyClass| t.x.abs() <= window && t.y.abs() <= window;
        let mut found: Option<(LiftedVertex, Weight)> = None;
        let mut exit_min: Option<Weight> = None;
        let mut boundary: Option<Weight> = None;
        let search = dijkstra(
            g,
            coords,
            &[source],
            |_, _, y| inside(y.translation),
            |x, w| {
                let is_exit = g.rotation(x.vertex).iter().any(|&d| !inside(x.step(g, coords, d).translation));
                if is_exit {
                    if exit_min.is_none() {
                        exit_min = Some(w.clone());
                    }
                    if found.is_some() {
                        boundary = Some(w.clone());
                        return Control::Stop;
                    }
                }
                if found.is_none() && x.vertex == v && !x.translation.is_zero() {
                    found = Some((x, w.clone()));
                    if is_exit {
                        boundary = Some(w.clone());
                        return Control::Stop;
                    }
                }
                Control::Continue
            },
        );
        if let Some((target, w)) = found {
            let certified = exit_min.as_ref().is_none_or(|e| *e >= w);
            if certified {
                return SystoleSearch {
                    darts: search.path_to(target),
                    weight: w,
                    class: target.translation,
                    window,
                    boundary_distance: boundary,
                };
            }
        }
        window *= 2;
    }
}

/// Which copy of a cut cycle a vertex of a [`CutDomain`] belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryLabel {
    Interior,
    /// Copy on the left of the cutting cycle.
    Left,
    /// Copy on the right of the cutting cycle.
    Right,
    /// On the boundary of a disk.
    Boundary,
}

/// Side classes of the boundary of a disk cut along a good pair.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SideKind {
    /// Along a lift of the first cycle only.
    First,
    /// Along a lift of the second cycle only.
    Second,
    /// Along both (the shared subpath).
    Shared,
}

/// A planar graph obtained by cutting the torus, with gluing data.
#[derive(Clone, Debug)]
pub struct CutDomain {
    /// Preimage of each vertex in the torus graph.
    pub preimage: Vec<usize>,
    /// Edges as (tail, head, dart of the torus graph traversed tail to head).
    pub edges: Vec<(usize, usize, Dart)>,
    /// Counterclockwise rotation: indices into `edges` with a side bit
    /// (0 = tail end).
    pub rotation: Vec<Vec<(usize, u8)>>,
    pub labels: Vec<BoundaryLabel>,
    /// For a disk, the boundary sides in cyclic order with their kinds.
    pub sides: Vec<(SideKind, Vec<usize>)>,
}

impl CutDomain {
    pub fn vertex_count(&self) -> usize {
        self.preimage.len()
    }

    fn faces(&self) -> Vec<Vec<(usize, u8)>> {
        let mut pos = HashMap::new();
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                pos.insert(h, (v, i));
            }
        }
        let mut seen = HashSet::new();
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for s in 0..2u8 {
                if seen.contains(&(e, s)) {
                    continue;
                }
                let mut f = Vec::new();
                let mut h = (e, s);
                while seen.insert(h) {
                    f.push(h);
                    let r = (h.0, 1 - h.1);
                    let (v, i) = pos[&r];
                    let rot = &self.rotation[v];
                    h = rot[(i + 1) % rot.len()];
                }
                faces.push(f);
            }
        }
        faces
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// `V - E + F` of the planar graph.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edges.len() as i64 + self.face_count() as i64
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn total_weight(&self, g: &EmbeddedGraph) -> Weight {
        let mut w = g.zero_weight();
        for &(_, _, d) in &self.edges {
            w += g.weight(d);
        }
        w
    }
}

/// What to cut along.
pub enum Cut<'a> {
    Cycle(&'a [Dart]),
    Pair(&'a [Dart], &'a [Dart]),
}

/// Cuts the torus along one simple cycle (giving an annulus) or along a good
/// pair (giving a disk).
pub fn cut_along(g: &EmbeddedGraph, coords: &Cocycle, cut: Cut<'_>) -> Result<CutDomain> {
    match cut {
        Cut::Cycle(c) => cut_annulus(g, c),
        Cut::Pair(a, b) => cut_disk(g, coords, a, b),
    }
}

fn cut_annulus(g: &EmbeddedGraph, c: &[Dart]) -> Result<CutDomain> {
    g.check_closed(c)?;
    if !g.is_simple(c) {
        return Err(Error::MalformedWalk("cut cycle is not simple".into()));
    }
    let sides = CycleSides::new(g, c);
    let n = g.vertex_count();
    let mut on = vec![None; n];
    for (i, &d) in c.iter().enumerate() {
        on[g.tail(d)] = Some(i);
    }
    // vertex ids: off-cycle vertices once, cycle vertices twice
    let mut id = vec![[usize::MAX; 2]; n];
    let mut preimage = Vec::new();
    let mut labels = Vec::new();
    for v in 0..n {
        if on[v].is_some() {
            for (k, lab) in [BoundaryLabel::Left, BoundaryLabel::Right].into_iter().enumerate() {
                id[v][k] = preimage.len();
                preimage.push(v);
                labels.push(lab);
            }
        } else {
            id[v] = [preimage.len(); 2];
            preimage.push(v);
            labels.push(BoundaryLabel::Interior);
        }
    }
    let copy_at = |d: Dart| -> usize {
        let v = g.tail(d);
        match sides.side(d) {
            Side::Right => id[v][1],
            _ => id[v][0],
        }
    };
    let mut edges = Vec::new();
    let mut half_of: HashMap<(Dart, u8), (usize, u8)> = HashMap::new();
    let cycle_edges: HashSet<usize> = c.iter().map(|d| d.edge()).collect();
    for e in 0..g.edge_count() {
        let d = Dart::new(e, 0);
        if cycle_edges.contains(&e) {
            continue;
        }
        let idx = edges.len();
        edges.push((copy_at(d), copy_at(d.rev()), d));
        half_of.insert((d, 0), (idx, 0));
        half_of.insert((d.rev(), 0), (idx, 1));
    }
    for &d in c {
        for copy in 0..2u8 {
            let idx = edges.len();
            let (a, b) = (id[g.tail(d)][copy as usize], id[g.head(d)][copy as usize]);
            edges.push((a, b, d));
            half_of.insert((d, copy), (idx, 0));
            half_of.insert((d.rev(), copy), (idx, 1));
        }
    }
    let mut rotation = vec![Vec::new(); preimage.len()];
    for v in 0..n {
        match on[v] {
            None => {
                rotation[id[v][0]] = g.rotation(v).iter().map(|&d| half_of[&(d, 0)]).collect();
            }
            Some(i) => {
                let out = c[i];
                let inc = c[(i + c.len() - 1) % c.len()].rev();
                let rot = g.rotation(v);
                let k = rot.len();
                let start = g.rotation_index(out);
                let mut left = vec![half_of[&(out, 0)]];
                let mut right = vec![half_of[&(inc, 1)]];
                let mut on_left = true;
                for s in 1..k {
                    let d = rot[(start + s) % k];
                    if d == inc {
                        on_left = false;
                        left.push(half_of[&(inc, 0)]);
                        continue;
                    }
                    if on_left {
                        left.push(half_of[&(d, 0)]);
                    } else {
                        right.push(half_of[&(d, 0)]);
                    }
                }
                right.push(half_of[&(out, 1)]);
                rotation[id[v][0]] = left;
                rotation[id[v][1]] = right;
            }
        }
    }
    Ok(CutDomain { preimage, edges, rotation, labels, sides: Vec::new() })
}

/// Rejects pairs of simple cycles whose intersection is not one connected
/// path (possibly a single vertex).
pub(crate) fn check_good_pair(g: &EmbeddedGraph, a: &[Dart], b: &[Dart]) -> Result<()> {
    if !g.is_simple(a) || !g.is_simple(b) {
        return Err(Error::NotGood("cycles must be simple".into()));
    }
    let va: HashSet<usize> = a.iter().map(|&d| g.tail(d)).collect();
    let ea: HashSet<usize> = a.iter().map(|d| d.edge()).collect();
    let common_v = b.iter().filter(|&&d| va.contains(&g.tail(d))).count();
    let common_e = b.iter().filter(|d| ea.contains(&d.edge())).count();
    if common_v == 0 {
        return Err(Error::NotGood("cycles are disjoint".into()));
    }
    // the common part is a forest inside the cycle a
    if common_v != common_e + 1 {
        return Err(Error::NotGood("intersection is not connected".into()));
    }
    Ok(())
}

fn cut_disk(g: &EmbeddedGraph, coords: &Cocycle, a: &[Dart], b: &[Dart]) -> Result<CutDomain> {
    g.check_closed(a)?;
    g.check_closed(b)?;
    check_good_pair(g, a, b)?;
    let la = CycleLines::new(g, coords, a);
    let lb = CycleLines::new(g, coords, b);
    if coords.pairing(la.class, lb.class).abs() != 1 {
        return Err(Error::NotGood("pairing must be +-1".into()));
    }
    let band_a = Band { lines: &la, lo: 0, hi: 2 };
    let band_b = Band { lines: &lb, lo: 0, hi: 2 };
    // a start vertex: the lift of a shared vertex at levels (0, 0)
    let shared = a.iter().map(|&d| g.tail(d)).find(|&v| lb.contains_vertex(v)).expect("good pair meets");
    let mut start = LiftedVertex::base(shared);
    let (ka, _) = la.locate(start).expect("on a");
    let (kb, _) = lb.locate(start).expect("on b");
    // shift to level (0,0): solve for translation t with pairing(alpha,t) = -ka, pairing(beta,t) = -kb
    let t = solve_levels(coords, la.class, lb.class, -ka, -kb);
    start = start.translated(t);
    debug_assert_eq!(la.level2(start), 0);
    debug_assert_eq!(lb.level2(start), 0);
    let mut index: HashMap<LiftedVertex, usize> = HashMap::new();
    let mut verts = vec![start];
    index.insert(start, 0);
    let mut edges = Vec::new();
    let mut edge_index: HashMap<(LiftedVertex, Dart), (usize, u8)> = HashMap::new();
    let mut head = 0;
    while head < verts.len() {
        let x = verts[head];
        head += 1;
        for &d in g.rotation(x.vertex) {
            let y = x.step(g, coords, d);
            if !band_a.admits(x, d, y) || !band_b.admits(x, d, y) {
                continue;
            }
            if edge_index.contains_key(&(x, d)) {
                continue;
            }
            let yi = *index.entry(y).or_insert_with(|| {
                verts.push(y);
                verts.len() - 1
            });
            let xi = index[&x];
            let ei = edges.len();
            edges.push((xi, yi, d));
            edge_index.insert((x, d), (ei, 0));
            edge_index.insert((y, d.rev()), (ei, 1));
        }
    }
    let rotation: Vec<Vec<(usize, u8)>> = verts
        .iter()
        .map(|&x| g.rotation(x.vertex).iter().filter_map(|&d| edge_index.get(&(x, d)).copied()).collect())
        .collect();
    let preimage: Vec<usize> = verts.iter().map(|v| v.vertex).collect();
    let labels = verts
        .iter()
        .map(|&x| {
            let on_a = la.contains_vertex(x.vertex) && la.level2(x) % 2 == 0;
            let on_b = lb.contains_vertex(x.vertex) && lb.level2(x) % 2 == 0;
            match (on_a, on_b) {
                (false, false) => BoundaryLabel::Interior,
                _ => BoundaryLabel::Boundary,
            }
        })
        .collect();
    let mut dom = CutDomain { preimage, edges, rotation, labels, sides: Vec::new() };
    // the outer face is the only face that is not a lift of a face of g
    let faces = dom.faces();
    let outer = faces
        .iter()
        .max_by_key(|f| {
            let gf = g.face_of(half_dart(dom.edges[f[0].0], f[0].1));
            let is_lift = f.len() == g.faces()[gf].len()
                && f.iter().all(|h| g.face_of(half_dart(dom.edges[h.0], h.1)) == gf);
            (!is_lift, f.len())
        })
        .cloned()
        .unwrap_or_default();
    let kind_of = |h: (usize, u8)| -> SideKind {
        let (xi, _, d) = dom.edges[h.0];
        let x = verts[xi];
        let ea = la.edge_level2(x, d);
        let eb = lb.edge_level2(x, d);
        let on_a = la.side(d) == Side::On && (ea == 0 || ea == 2);
        let on_b = lb.side(d) == Side::On && (eb == 0 || eb == 2);
        match (on_a, on_b) {
            (true, true) => SideKind::Shared,
            (true, false) => SideKind::First,
            _ => SideKind::Second,
        }
    };
    let mut sides: Vec<(SideKind, Vec<usize>)> = Vec::new();
    for &h in &outer {
        let k = kind_of(h);
        match sides.last_mut() {
            Some((last, list)) if *last == k => list.push(h.0),
            _ => sides.push((k, vec![h.0])),
        }
    }
    if sides.len() > 1 && sides[0].0 == sides[sides.len() - 1].0 {
        let (_, tail) = sides.pop().expect("nonempty");
        let mut merged = tail;
        merged.append(&mut sides[0].1);
        sides[0].1 = merged;
    }
    dom.sides = sides;
    Ok(dom)
}

fn half_dart(e: (usize, usize, Dart), side: u8) -> Dart {
    if side == 0 {
        e.2
    } else {
        e.2.rev()
    }
}

/// Translation `t` with `pairing(alpha, t) = p` and `pairing(beta, t) = q`,
/// given `pairing(alpha, beta) = +-1`.
pub(crate) fn solve_levels(
    coords: &Cocycle,
    alpha: HomologyClass,
    beta: HomologyClass,
    p: i64,
    q: i64,
) -> HomologyClass {
    let s = coords.pairing(alpha, beta);
    debug_assert!(s == 1 || s == -1);
    // t = u*alpha + v*beta: pairing(alpha,t) = v*s, pairing(beta,t) = -u*s
    let v = p * s;
    let u = -q * s;
    u * alpha + v * beta
}
