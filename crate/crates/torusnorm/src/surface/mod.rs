//! Weighted graphs cellularly embedded on the oriented torus.
//!
//! An embedding is given combinatorially by a rotation system: the
//! counterclockwise cyclic order of darts around every vertex. Faces are
//! recovered by tracing, and a tree-cotree decomposition yields an integer
//! cocycle computing homology classes of closed walks.

mod homology;
pub mod text;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

pub use homology::{crossing_number, Cocycle, HomologyClass};
pub(crate) use homology::{CycleSides, Side};

use crate::error::{Error, Result};
use crate::weight::{GeneratorSystem, Weight};

/// One end of an edge: side 0 sits at the edge's first endpoint.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(u32);

impl Dart {
    pub fn new(edge: usize, side: u8) -> Self {
        debug_assert!(side < 2);
        Dart((edge as u32) << 1 | side as u32)
    }

    pub fn edge(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn side(self) -> u8 {
        (self.0 & 1) as u8
    }

    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Self {
        Dart(i as u32)
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Weight,
    /// Identifier used in the text format.
    pub label: u64,
}

/// Unvalidated input: everything needed to build an [`EmbeddedGraph`].
#[derive(Clone, Debug)]
pub struct RawGraph {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub rotation: Vec<Vec<Dart>>,
    /// Weights are stored multiplied by this common denominator.
    pub scale: u64,
    pub system: Option<Arc<GeneratorSystem>>,
    /// Optional per-edge displacement in drawing coordinates.
    pub frame: Option<Vec<HomologyClass>>,
}

/// A single violated invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    NoVertices,
    EndpointOutOfRange { edge: u64 },
    Disconnected { components: usize },
    EulerCharacteristic { v: usize, e: usize, f: usize },
    NonPositiveWeight { edge: u64 },
    UnorderableWeight { edge: u64 },
    DartMissing { edge: u64, side: u8 },
    DartDuplicated { edge: u64, side: u8 },
    DartAtWrongVertex { edge: u64, side: u8, vertex: usize },
    RotationCount { expected: usize, found: usize },
    FrameNotClosed { face: usize },
    FrameNotUnimodular,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::NoVertices => write!(f, "graph has no vertices"),
            Issue::EndpointOutOfRange { edge } => write!(f, "edge {edge} has an endpoint out of range"),
            Issue::Disconnected { components } => write!(f, "graph is disconnected ({components} components)"),
            Issue::EulerCharacteristic { v, e, f: faces } => write!(
                f,
                "wrong Euler characteristic: V - E + F = {v} - {e} + {faces} = {} (torus needs 0)",
                *v as i64 - *e as i64 + *faces as i64
            ),
            Issue::NonPositiveWeight { edge } => write!(f, "edge {edge} has nonpositive weight"),
            Issue::UnorderableWeight { edge } => write!(f, "sign of the weight of edge {edge} is undecidable"),
            Issue::DartMissing { edge, side } => write!(f, "dart {edge}.{side} missing from the rotation system"),
            Issue::DartDuplicated { edge, side } => write!(f, "dart {edge}.{side} appears more than once"),
            Issue::DartAtWrongVertex { edge, side, vertex } => {
                write!(f, "dart {edge}.{side} listed at vertex {vertex}, which is not its endpoint")
            }
            Issue::RotationCount { expected, found } => {
                write!(f, "expected {expected} rotation lists, found {found}")
            }
            Issue::FrameNotClosed { face } => write!(f, "frame displacements do not close up around face {face}"),
            Issue::FrameNotUnimodular => write!(f, "frame displacements do not span the lattice"),
        }
    }
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    pub v: usize,
    pub e: usize,
    pub f: Option<usize>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "OK genus=1 V={} E={} F={}", self.v, self.e, self.f.unwrap_or(0));
        }
        write!(f, "INVALID")?;
        for issue in &self.issues {
            write!(f, "\n  {issue}")?;
        }
        Ok(())
    }
}

/// A validated weighted graph cellularly embedded on the torus.
#[derive(Clone, Debug)]
pub struct EmbeddedGraph {
    edges: Vec<Edge>,
    rotation: Vec<Vec<Dart>>,
    /// Position of every dart in the rotation of its tail.
    rot_index: Vec<u32>,
    faces: Vec<Vec<Dart>>,
    face_of: Vec<u32>,
    scale: u64,
    system: Option<Arc<GeneratorSystem>>,
    provisional: Cocycle,
    in_tree: Vec<bool>,
    leftover: [usize; 2],
    frame: Option<Cocycle>,
}

fn dart_tail(edges: &[Edge], d: Dart) -> usize {
    let e = &edges[d.edge()];
    if d.side() == 0 {
        e.u
    } else {
        e.v
    }
}

/// Traces face walks: after arriving along `d`, continue with the dart that
/// follows `rev(d)` counterclockwise.
fn trace_faces(edges: &[Edge], rotation: &[Vec<Dart>], rot_index: &[u32]) -> (Vec<Vec<Dart>>, Vec<u32>) {
    let nd = 2 * edges.len();
    let mut face_of = vec![u32::MAX; nd];
    let mut faces = Vec::new();
    for start in 0..nd {
        if face_of[start] != u32::MAX {
            continue;
        }
        let id = faces.len() as u32;
        let mut walk = Vec::new();
        let mut d = Dart::from_index(start);
        while face_of[d.index()] == u32::MAX {
            face_of[d.index()] = id;
            walk.push(d);
            let r = d.rev();
            let rot = &rotation[dart_tail(edges, r)];
            d = rot[(rot_index[r.index()] as usize + 1) % rot.len()];
        }
        faces.push(walk);
    }
    (faces, face_of)
}

fn check_rotation(raw: &RawGraph, issues: &mut Vec<Issue>) -> Option<Vec<u32>> {
    if raw.rotation.len() != raw.vertices {
        issues.push(Issue::RotationCount { expected: raw.vertices, found: raw.rotation.len() });
        return None;
    }
    let nd = 2 * raw.edges.len();
    let mut rot_index = vec![u32::MAX; nd];
    let mut ok = true;
    for (v, rot) in raw.rotation.iter().enumerate() {
        for (i, &d) in rot.iter().enumerate() {
            if d.index() >= nd {
                ok = false;
                continue;
            }
            let e = &raw.edges[d.edge()];
            if dart_tail(&raw.edges, d) != v {
                issues.push(Issue::DartAtWrongVertex { edge: e.label, side: d.side(), vertex: v });
                ok = false;
            }
            if rot_index[d.index()] != u32::MAX {
                issues.push(Issue::DartDuplicated { edge: e.label, side: d.side() });
                ok = false;
            }
            rot_index[d.index()] = i as u32;
        }
    }
    for i in 0..nd {
        if rot_index[i] == u32::MAX {
            let d = Dart::from_index(i);
            issues.push(Issue::DartMissing { edge: raw.edges[d.edge()].label, side: d.side() });
            ok = false;
        }
    }
    ok.then_some(rot_index)
}

fn components(n: usize, edges: &[Edge]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

/// Checks every invariant of a cellular torus embedding and lists the violations.
pub fn validate(raw: &RawGraph) -> ValidationReport {
    validate_inner(raw).0
}

type Derived = (Vec<u32>, Vec<Vec<Dart>>, Vec<u32>);

fn validate_inner(raw: &RawGraph) -> (ValidationReport, Option<Derived>) {
    let mut issues = Vec::new();
    let mut report = ValidationReport { issues: Vec::new(), v: raw.vertices, e: raw.edges.len(), f: None };
    if raw.vertices == 0 {
        issues.push(Issue::NoVertices);
        report.issues = issues;
        return (report, None);
    }
    for e in &raw.edges {
        if e.u >= raw.vertices || e.v >= raw.vertices {
            issues.push(Issue::EndpointOutOfRange { edge: e.label });
        }
    }
    if !issues.is_empty() {
        report.issues = issues;
        return (report, None);
    }
    for e in &raw.edges {
        match e.weight.signum() {
            Ok(std::cmp::Ordering::Greater) => {}
            Ok(_) => issues.push(Issue::NonPositiveWeight { edge: e.label }),
            Err(_) => issues.push(Issue::UnorderableWeight { edge: e.label }),
        }
    }
    let comps = components(raw.vertices, &raw.edges);
    if comps != 1 {
        issues.push(Issue::Disconnected { components: comps });
    }
    let mut derived = None;
    if let Some(rot_index) = check_rotation(raw, &mut issues) {
        let (faces, face_of) = trace_faces(&raw.edges, &raw.rotation, &rot_index);
        report.f = Some(faces.len());
        let chi = raw.vertices as i64 - raw.edges.len() as i64 + faces.len() as i64;
        if chi != 0 {
            issues.push(Issue::EulerCharacteristic { v: raw.vertices, e: raw.edges.len(), f: faces.len() });
        }
        if let Some(frame) = &raw.frame {
            for (i, face) in faces.iter().enumerate() {
                let mut s = HomologyClass::ZERO;
                for &d in face {
                    let t = frame[d.edge()];
                    s += if d.side() == 0 { t } else { -t };
                }
                if !s.is_zero() {
                    issues.push(Issue::FrameNotClosed { face: i });
                }
            }
        }
        derived = Some((rot_index, faces, face_of));
    }
    report.issues = issues;
    (report, derived)
}

impl EmbeddedGraph {
    /// Validates and builds the graph, computing faces and homology data.
    pub fn new(raw: RawGraph) -> std::result::Result<Self, ValidationReport> {
        let (mut report, derived) = validate_inner(&raw);
        if !report.is_ok() {
            return Err(report);
        }
        let (rot_index, faces, face_of) = derived.expect("valid input has derived data");
        let mut g = EmbeddedGraph {
            edges: raw.edges,
            rotation: raw.rotation,
            rot_index,
            faces,
            face_of,
            scale: raw.scale.max(1),
            system: raw.system,
            provisional: Cocycle::new(Vec::new(), 1),
            in_tree: Vec::new(),
            leftover: [0, 0],
            frame: None,
        };
        g.tree_cotree();
        if let Some(frame) = raw.frame {
            match g.frame_cocycle(frame) {
                Some(c) => g.frame = Some(c),
                None => {
                    report.issues.push(Issue::FrameNotUnimodular);
                    return Err(report);
                }
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d.index()] as usize
    }

    /// Common denominator of the input weights.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn system(&self) -> Option<&Arc<GeneratorSystem>> {
        self.system.as_ref()
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn rotation_index(&self, d: Dart) -> usize {
        self.rot_index[d.index()] as usize
    }

    pub fn tail(&self, d: Dart) -> usize {
        dart_tail(&self.edges, d)
    }

    pub fn head(&self, d: Dart) -> usize {
        dart_tail(&self.edges, d.rev())
    }

    pub fn weight(&self, d: Dart) -> &Weight {
        &self.edges[d.edge()].weight
    }

    pub fn zero_weight(&self) -> Weight {
        self.edges[0].weight.zero_like()
    }

    /// The dart following `d` counterclockwise around its tail.
    pub fn next_ccw(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.tail(d)];
        rot[(self.rotation_index(d) + 1) % rot.len()]
    }

    pub fn dart_label(&self, d: Dart) -> String {
        format!("{}.{}", self.edges[d.edge()].label, d.side())
    }

    /// Cocycle from the tree-cotree decomposition, in coordinates where the
    /// two leftover edges carry `(1,0)` and `(0,1)`.
    pub fn provisional_cocycle(&self) -> &Cocycle {
        &self.provisional
    }

    /// Drawing coordinates, when the input supplied them.
    pub fn frame(&self) -> Option<&Cocycle> {
        self.frame.as_ref()
    }

    pub fn walk_weight(&self, darts: &[Dart]) -> Weight {
        let mut w = self.zero_weight();
        for &d in darts {
            w += self.weight(d);
        }
        w
    }

    /// Checks that consecutive darts are incident and the walk returns to its start.
    pub fn check_closed(&self, darts: &[Dart]) -> Result<()> {
        if darts.is_empty() {
            return Err(Error::NotClosed);
        }
        self.check_path(darts)?;
        if self.head(darts[darts.len() - 1]) != self.tail(darts[0]) {
            return Err(Error::NotClosed);
        }
        Ok(())
    }

    pub fn check_path(&self, darts: &[Dart]) -> Result<()> {
        for &d in darts {
            if d.edge() >= self.edges.len() {
                return Err(Error::MalformedWalk(format!("dart index {} out of range", d.index())));
            }
        }
        for w in darts.windows(2) {
            if self.head(w[0]) != self.tail(w[1]) {
                return Err(Error::MalformedWalk(format!(
                    "darts {} and {} are not consecutive",
                    self.dart_label(w[0]),
                    self.dart_label(w[1])
                )));
            }
        }
        Ok(())
    }

    /// A closed walk is simple when it visits no vertex and no edge twice.
    pub fn is_simple(&self, darts: &[Dart]) -> bool {
        if darts.is_empty() {
            return false;
        }
        let mut seen_v = std::collections::HashSet::new();
        let mut seen_e = std::collections::HashSet::new();
        darts.iter().all(|&d| seen_v.insert(self.tail(d)) && seen_e.insert(d.edge()))
    }

    fn tree_cotree(&mut self) {
        let n = self.vertex_count();
        let m = self.edge_count();
        let mut in_tree = vec![false; m];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &d in &self.rotation[x] {
                let y = self.head(d);
                if !seen[y] {
                    seen[y] = true;
                    in_tree[d.edge()] = true;
                    queue.push_back(y);
                }
            }
        }
        // spanning tree of the dual avoiding the primal tree
        let nf = self.face_count();
        let mut parent_dart: Vec<Option<Dart>> = vec![None; nf];
        let mut in_cotree = vec![false; m];
        let mut seen_f = vec![false; nf];
        let mut order = vec![0usize];
        seen_f[0] = true;
        let mut head = 0;
        while head < order.len() {
            let f = order[head];
            head += 1;
            for &d in &self.faces[f] {
                if in_tree[d.edge()] {
                    continue;
                }
                let g = self.face_of(d.rev());
                if !seen_f[g] {
                    seen_f[g] = true;
                    in_cotree[d.edge()] = true;
                    parent_dart[g] = Some(d.rev());
                    order.push(g);
                }
            }
        }
        let leftover: Vec<usize> = (0..m).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
        assert_eq!(leftover.len(), 2, "a torus embedding leaves exactly two edges");
        let mut theta = vec![HomologyClass::ZERO; m];
        theta[leftover[0]] = HomologyClass::new(1, 0);
        theta[leftover[1]] = HomologyClass::new(0, 1);
        let dart_val = |theta: &[HomologyClass], d: Dart| {
            let t = theta[d.edge()];
            if d.side() == 0 {
                t
            } else {
                -t
            }
        };
        for &f in order.iter().skip(1).rev() {
            let pd = parent_dart[f].expect("non-root face has a parent");
            let mut rest = HomologyClass::ZERO;
            for &d in &self.faces[f] {
                if d != pd {
                    rest += dart_val(&theta, d);
                }
            }
            theta[pd.edge()] = if pd.side() == 0 { -rest } else { rest };
        }
        // orientation from the crossing of the two fundamental cycles
        let z1 = self.fundamental_cycle(&in_tree, leftover[0]);
        let z2 = self.fundamental_cycle(&in_tree, leftover[1]);
        let eps = CycleSides::new(self, &z1).crossing(&z2);
        assert!(eps == 1 || eps == -1, "fundamental cycles must cross once");
        self.provisional = Cocycle::new(theta, eps);
        self.in_tree = in_tree;
        self.leftover = [leftover[0], leftover[1]];
    }

    /// The edge `e` closed up by the tree path from its head back to its tail.
    fn fundamental_cycle(&self, in_tree: &[bool], e: usize) -> Vec<Dart> {
        let n = self.vertex_count();
        let mut parent: Vec<Option<Dart>> = vec![None; n];
        let root = self.edges[e].v;
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &d in &self.rotation[x] {
                if !in_tree[d.edge()] {
                    continue;
                }
                let y = self.head(d);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(d);
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut x = self.edges[e].u;
        while x != root {
            let d = parent[x].expect("tree spans the graph");
            path.push(d);
            x = self.tail(d);
        }
        path.reverse();
        let mut cycle = vec![Dart::new(e, 0)];
        cycle.extend(path);
        cycle
    }

    fn frame_cocycle(&self, frame: Vec<HomologyClass>) -> Option<Cocycle> {
        let class = |e: usize| {
            let mut s = HomologyClass::ZERO;
            for d in self.fundamental_cycle(&self.in_tree, e) {
                let t = frame[d.edge()];
                s += if d.side() == 0 { t } else { -t };
            }
            s
        };
        let det = class(self.leftover[0]).det(class(self.leftover[1]));
        if det.abs() != 1 {
            return None;
        }
        Some(Cocycle::new(frame, self.provisional.orientation() * det))
    }
}

/// A closed walk with its cached weight and homology class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRep {
    pub darts: Vec<Dart>,
    pub weight: Weight,
    pub class: HomologyClass,
}

impl CycleRep {
    pub fn new(g: &EmbeddedGraph, coords: &Cocycle, darts: Vec<Dart>) -> Result<Self> {
        g.check_closed(&darts)?;
        let weight = g.walk_weight(&darts);
        let class = coords.sum(&darts);
        Ok(CycleRep { darts, weight, class })
    }

    pub fn reversed(&self) -> CycleRep {
        CycleRep {
            darts: self.darts.iter().rev().map(|d| d.rev()).collect(),
            weight: self.weight.clone(),
            class: -self.class,
        }
    }

    /// Rotates the closed walk so that it starts at vertex `v`, if it visits it.
    pub fn rooted_at(&self, g: &EmbeddedGraph, v: usize) -> Option<CycleRep> {
        let i = self.darts.iter().position(|&d| g.tail(d) == v)?;
        let mut darts = self.darts[i..].to_vec();
        darts.extend_from_slice(&self.darts[..i]);
        Some(CycleRep { darts, weight: self.weight.clone(), class: self.class })
    }

    pub fn vertices(&self, g: &EmbeddedGraph) -> Vec<usize> {
        self.darts.iter().map(|&d| g.tail(d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bouquet_raw(order: [(usize, u8); 4]) -> RawGraph {
        RawGraph {
            vertices: 1,
            edges: vec![
                Edge { u: 0, v: 0, weight: Weight::int(1), label: 0 },
                Edge { u: 0, v: 0, weight: Weight::int(1), label: 1 },
            ],
            rotation: vec![order.iter().map(|&(e, s)| Dart::new(e, s)).collect()],
            scale: 1,
            system: None,
            frame: None,
        }
    }

    #[test]
    fn bouquet_faces() {
        let r = validate(&bouquet_raw([(0, 0), (1, 0), (0, 1), (1, 1)]));
        assert!(r.is_ok(), "{r}");
        assert_eq!(r.f, Some(1));
        assert_eq!(r.to_string(), "OK genus=1 V=1 E=2 F=1");
        let r = validate(&bouquet_raw([(0, 0), (0, 1), (1, 0), (1, 1)]));
        assert_eq!(r.f, Some(3));
        assert_eq!(r.issues, vec![Issue::EulerCharacteristic { v: 1, e: 2, f: 3 }]);
    }

    #[test]
    fn bouquet_pairing_sign() {
        let g = EmbeddedGraph::new(bouquet_raw([(0, 0), (1, 0), (0, 1), (1, 1)])).unwrap();
        let a = [Dart::new(0, 0)];
        let b = [Dart::new(1, 0)];
        assert_eq!(crossing_number(&g, &a, &b).unwrap(), 1);
        assert_eq!(crossing_number(&g, &b, &a).unwrap(), -1);
        let p = g.provisional_cocycle();
        assert_eq!(p.pairing(p.sum(&a), p.sum(&b)), 1);
        for f in g.faces() {
            assert!(p.sum(f).is_zero());
        }
    }

    #[test]
    fn duplicated_and_missing_darts() {
        let r = validate(&bouquet_raw([(0, 0), (1, 0), (0, 0), (1, 1)]));
        assert!(r.issues.contains(&Issue::DartDuplicated { edge: 0, side: 0 }));
        assert!(r.issues.contains(&Issue::DartMissing { edge: 0, side: 1 }));
    }
}
