//! Standard instances: bouquets, grid tori, staircases, periodic tilings and
//! random cellular embeddings.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::reconstruct::{arrangement, graph_from_norm, Geodesic, NormSpec};
use crate::surface::{text, Dart, Edge, EmbeddedGraph, HomologyClass, RawGraph};
use crate::weight::Weight;

/// One vertex with loops `a` (edge 0) and `b` (edge 1) of weights `p/q`.
pub fn bouquet_raw(a: (i64, i64), b: (i64, i64)) -> RawGraph {
    let t = format!(
        "vertices 1\nedge 0 0 0 {}/{}\nedge 1 0 0 {}/{}\nrotation 0 0.0 1.0 0.1 1.1\nframe 0 1 0\nframe 1 0 1\n",
        a.0, a.1, b.0, b.1
    );
    text::parse(&t).expect("well-formed bouquet")
}

pub fn bouquet(a: (i64, i64), b: (i64, i64)) -> EmbeddedGraph {
    EmbeddedGraph::new(bouquet_raw(a, b)).expect("bouquet is a torus")
}

/// The product of cycles `C_m x C_n`, unit weights. Horizontal cycles have
/// length `m` and class `(1,0)` in the frame.
pub fn grid_raw(m: usize, n: usize) -> RawGraph {
    let id = |i: usize, j: usize| j * m + i;
    let mut edges = Vec::new();
    let mut frame = Vec::new();
    // edge 2*id(i,j) is horizontal, 2*id(i,j)+1 vertical
    for j in 0..n {
        for i in 0..m {
            edges.push(Edge { u: id(i, j), v: id((i + 1) % m, j), weight: Weight::int(1), label: 0 });
            frame.push(HomologyClass::new(if i + 1 == m { 1 } else { 0 }, 0));
            edges.push(Edge { u: id(i, j), v: id(i, (j + 1) % n), weight: Weight::int(1), label: 0 });
            frame.push(HomologyClass::new(0, if j + 1 == n { 1 } else { 0 }));
        }
    }
    for (k, e) in edges.iter_mut().enumerate() {
        e.label = k as u64;
    }
    let mut rotation = Vec::new();
    for j in 0..n {
        for i in 0..m {
            let h = 2 * id(i, j);
            let v = h + 1;
            let west = 2 * id((i + m - 1) % m, j);
            let south = 2 * id(i, (j + n - 1) % n) + 1;
            rotation.push(vec![Dart::new(h, 0), Dart::new(v, 0), Dart::new(west, 1), Dart::new(south, 1)]);
        }
    }
    RawGraph { vertices: m * n, edges, rotation, scale: 1, system: None, frame: Some(frame) }
}

pub fn grid(m: usize, n: usize) -> EmbeddedGraph {
    EmbeddedGraph::new(grid_raw(m, n)).expect("grid is a torus")
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// A horizontal closed geodesic at height 1/2 and one of slope `(1, k)`
/// through the origin, unit weight per arc: `k` vertices.
pub fn staircase_raw(k: i64) -> RawGraph {
    let zero = BigRational::from_integer(0.into());
    let lines = [
        Geodesic { direction: HomologyClass::new(1, 0), offset: (zero.clone(), half()) },
        Geodesic { direction: HomologyClass::new(1, k), offset: (zero.clone(), zero) },
    ];
    arrangement(&lines, |_, _| BigRational::from_integer(1.into())).expect("generic arrangement")
}

pub fn staircase(k: i64) -> EmbeddedGraph {
    EmbeddedGraph::new(staircase_raw(k)).expect("staircase is a torus")
}

/// A doubly periodic straight-line planar graph: vertex positions in units
/// of `1/scale` of the period lattice `Z^2`, and edges `(i, j, offset)`
/// joining vertex `i` of a cell to vertex `j` of the cell shifted by `offset`.
pub struct PeriodicGraph {
    pub scale: i64,
    pub positions: Vec<(i64, i64)>,
    pub edges: Vec<(usize, usize, (i64, i64))>,
    /// Weight of every edge, as `p/q`.
    pub weight: (i64, i64),
}

impl PeriodicGraph {
    /// The quotient by the sublattice spanned by `a` and `b`, embedded on
    /// the torus `R^2 / <a, b>`. The frame uses the basis `(a, b)`.
    pub fn quotient(&self, a: (i64, i64), b: (i64, i64)) -> RawGraph {
        let det = a.0 * b.1 - a.1 * b.0;
        assert!(det != 0, "sublattice must have full rank");
        // coordinates of c in basis (a, b), as floor parts and canonical rep
        let reduce = |c: (i64, i64)| -> ((i64, i64), (i64, i64)) {
            let s_num = c.0 * b.1 - c.1 * b.0;
            let t_num = a.0 * c.1 - a.1 * c.0;
            let (fs, ft) = (s_num.div_euclid(det), t_num.div_euclid(det));
            let (fs, ft) = if det > 0 { (fs, ft) } else { ((-s_num).div_euclid(-det), (-t_num).div_euclid(-det)) };
            let rep = (c.0 - fs * a.0 - ft * b.0, c.1 - fs * a.1 - ft * b.1);
            (rep, (fs, ft))
        };
        let mut cells: Vec<(i64, i64)> = Vec::new();
        let r = a.0.abs() + a.1.abs() + b.0.abs() + b.1.abs();
        for x in -r..=r {
            for y in -r..=r {
                let (rep, _) = reduce((x, y));
                if !cells.contains(&rep) {
                    cells.push(rep);
                }
            }
        }
        cells.sort();
        assert_eq!(cells.len() as i64, det.abs());
        let k = self.positions.len();
        let vid = |cell: (i64, i64), i: usize| cells.iter().position(|&c| c == cell).expect("canonical cell") * k + i;
        let (p, q) = self.weight;
        let mut text_edges = Vec::new();
        let mut frame = Vec::new();
        let mut darts_at: Vec<Vec<((i64, i64), Dart)>> = vec![Vec::new(); cells.len() * k];
        for &cell in &cells {
            for &(i, j, off) in &self.edges {
                let (rep, fl) = reduce((cell.0 + off.0, cell.1 + off.1));
                let id = text_edges.len();
                let (u, v) = (vid(cell, i), vid(rep, j));
                text_edges.push((u, v));
                frame.push(HomologyClass::new(fl.0, fl.1));
                let dir = (
                    self.positions[j].0 + self.scale * off.0 - self.positions[i].0,
                    self.positions[j].1 + self.scale * off.1 - self.positions[i].1,
                );
                darts_at[u].push((dir, Dart::new(id, 0)));
                darts_at[v].push(((-dir.0, -dir.1), Dart::new(id, 1)));
            }
        }
        let mut rotation = Vec::new();
        for list in &mut darts_at {
            list.sort_by(|x, y| HomologyClass::new(x.0 .0, x.0 .1).angle_cmp(HomologyClass::new(y.0 .0, y.0 .1)));
            rotation.push(list.iter().map(|&(_, d)| d).collect());
        }
        let mut s = format!("vertices {}\n", cells.len() * k);
        for (id, (u, v)) in text_edges.iter().enumerate() {
            s += &format!("edge {id} {u} {v} {p}/{q}\n");
        }
        let mut raw = text::parse(&s).expect("well-formed quotient");
        raw.rotation = rotation;
        raw.frame = Some(frame);
        raw
    }
}

/// The hexagonal tiling with unit-length translations.
pub fn honeycomb() -> PeriodicGraph {
    PeriodicGraph {
        scale: 3,
        positions: vec![(0, 0), (1, 1)],
        edges: vec![(0, 1, (0, 0)), (0, 1, (-1, 0)), (0, 1, (0, -1))],
        weight: (1, 2),
    }
}

/// Bipartite honeycomb quotient with eight vertices and all weights 1/2;
/// its unit ball is a hexagon.
pub fn hexagon_graph_raw() -> RawGraph {
    honeycomb().quotient((-1, 2), (2, 0))
}

pub fn hexagon_graph() -> EmbeddedGraph {
    EmbeddedGraph::new(hexagon_graph_raw()).expect("honeycomb quotient is a torus")
}

/// Octagonal norm with the same lattice-point counts as the hexagon above.
pub fn octagon_spec() -> NormSpec {
    let r = |n: i64| BigRational::from_integer(n.into());
    NormSpec::new(vec![
        (HomologyClass::new(1, 0), r(2)),
        (HomologyClass::new(1, 2), r(4)),
        (HomologyClass::new(0, 1), r(2)),
        (HomologyClass::new(-2, 1), r(4)),
    ])
    .expect("convex octagon")
}

pub fn octagon_graph() -> EmbeddedGraph {
    graph_from_norm(&octagon_spec()).expect("octagon is realizable")
}

/// Rebuilds a raw graph with labels equal to edge indices.
fn relabel(mut raw: RawGraph) -> RawGraph {
    for (k, e) in raw.edges.iter_mut().enumerate() {
        e.label = k as u64;
    }
    raw
}

fn faces_of(raw: &RawGraph) -> (Vec<Vec<Dart>>, Vec<usize>) {
    let g = EmbeddedGraph::new(raw.clone()).expect("mutations preserve validity");
    let faces = g.faces().to_vec();
    let mut face_of = vec![0; 2 * raw.edges.len()];
    for (i, f) in faces.iter().enumerate() {
        for d in f {
            face_of[d.index()] = i;
        }
    }
    (faces, face_of)
}

fn insert_before(rot: &mut Vec<Dart>, before: Dart, new: Dart) {
    let i = rot.iter().position(|&d| d == before).expect("dart in rotation");
    rot.insert(i, new);
}

fn tail_of(raw: &RawGraph, d: Dart) -> usize {
    let e = &raw.edges[d.edge()];
    if d.side() == 0 {
        e.u
    } else {
        e.v
    }
}

/// A random cellular embedding with at most `max_v` vertices, obtained from
/// a grid torus by random chord insertions, edge deletions and subdivisions,
/// with random integer weights in `1..=9`.
pub fn random_embedding<R: Rng>(rng: &mut R, max_v: usize) -> EmbeddedGraph {
    EmbeddedGraph::new(random_embedding_raw(rng, max_v)).expect("mutations preserve validity")
}

pub fn random_embedding_raw<R: Rng>(rng: &mut R, max_v: usize) -> RawGraph {
    let m = rng.gen_range(1..=4usize);
    let n = rng.gen_range(1..=(max_v / m).clamp(1, 5));
    let mut raw = grid_raw(m, n);
    raw.frame = None;
    let steps = rng.gen_range(0..3 * (m * n) + 3);
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 => {
                let (faces, _) = faces_of(&raw);
                let f = &faces[rng.gen_range(0..faces.len())];
                if f.len() < 2 {
                    continue;
                }
                let i = rng.gen_range(0..f.len());
                let mut j = rng.gen_range(0..f.len() - 1);
                if j >= i {
                    j += 1;
                }
                let (di, dj) = (f[i], f[j]);
                let (x, y) = (tail_of(&raw, di), tail_of(&raw, dj));
                let id = raw.edges.len();
                raw.edges.push(Edge { u: x, v: y, weight: Weight::int(1), label: id as u64 });
                insert_before(&mut raw.rotation[x], di, Dart::new(id, 0));
                insert_before(&mut raw.rotation[y], dj, Dart::new(id, 1));
            }
            1 => {
                let (_, face_of) = faces_of(&raw);
                let cands: Vec<usize> =
                    (0..raw.edges.len()).filter(|&e| face_of[2 * e] != face_of[2 * e + 1]).collect();
                if cands.is_empty() || raw.edges.len() <= 2 {
                    continue;
                }
                let e = cands[rng.gen_range(0..cands.len())];
                let last = raw.edges.len() - 1;
                for rot in &mut raw.rotation {
                    rot.retain(|d| d.edge() != e);
                    for d in rot.iter_mut() {
                        if d.edge() == last {
                            *d = Dart::new(e, d.side());
                        }
                    }
                }
                raw.edges.swap_remove(e);
            }
            _ => {
                if raw.vertices >= max_v {
                    continue;
                }
                let e = rng.gen_range(0..raw.edges.len());
                let w = raw.vertices;
                raw.vertices += 1;
                let v = raw.edges[e].v;
                raw.edges[e].v = w;
                let id = raw.edges.len();
                raw.edges.push(Edge { u: w, v, weight: Weight::int(1), label: id as u64 });
                for d in raw.rotation[v].iter_mut() {
                    if *d == Dart::new(e, 1) {
                        *d = Dart::new(id, 1);
                        break;
                    }
                }
                raw.rotation.push(vec![Dart::new(e, 1), Dart::new(id, 0)]);
            }
        }
    }
    for e in raw.edges.iter_mut() {
        e.weight = Weight::int(rng.gen_range(1..=9));
    }
    relabel(raw)
}

/// A random valid norm with at most `max_pairs` direction pairs, entries
/// bounded by `max_coord` and values with denominators up to 6.
pub fn random_norm_spec<R: Rng>(rng: &mut R, max_pairs: usize, max_coord: i64) -> NormSpec {
    loop {
        let n = rng.gen_range(2..=max_pairs.max(2));
        let mut dirs: Vec<HomologyClass> = Vec::new();
        while dirs.len() < n {
            let c = HomologyClass::new(rng.gen_range(-max_coord..=max_coord), rng.gen_range(0..=max_coord));
            if c.is_zero() || !c.is_primitive() || (c.y == 0 && c.x < 0) {
                continue;
            }
            if dirs.iter().any(|d| d.det(c) == 0) {
                continue;
            }
            dirs.push(c);
        }
        // near the Euclidean length, so the points lie close to a circle
        let entries = dirs
            .into_iter()
            .map(|c| {
                let len = ((c.x * c.x + c.y * c.y) as f64).sqrt() * rng.gen_range(0.9..1.1);
                let den = rng.gen_range(1..=6i64);
                let num = ((len * den as f64).round() as i64).max(1);
                (c, BigRational::new(BigInt::from(num), BigInt::from(den)))
            })
            .collect();
        if let Ok(spec) = NormSpec::new(entries) {
            return spec;
        }
    }
}

/// A random integral matrix with determinant `+-1` and entries bounded by
/// `bound` in absolute value.
pub fn random_unimodular<R: Rng>(rng: &mut R, bound: i64) -> [[i64; 2]; 2] {
    loop {
        let mut m = if rng.gen_bool(0.5) { [[1, 0], [0, 1]] } else { [[0, 1], [1, 0]] };
        for _ in 0..rng.gen_range(0..8) {
            let k = rng.gen_range(-3..=3i64);
            let (r, s) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
            for c in 0..2 {
                m[r][c] += k * m[s][c];
            }
        }
        if rng.gen_bool(0.5) {
            m[0] = [-m[0][0], -m[0][1]];
        }
        if m.iter().flatten().all(|v| v.abs() <= bound) {
            return m;
        }
    }
}

/// Named fixtures with at most twelve vertices.
pub fn small_fixtures() -> Vec<(String, EmbeddedGraph)> {
    let mut out = vec![
        ("bouquet".to_string(), bouquet((1, 1), (1, 1))),
        ("bouquet-5-2".to_string(), bouquet((5, 1), (2, 1))),
        ("bouquet-5/2-1/10".to_string(), bouquet((5, 2), (1, 10))),
        ("bouquet-1-10".to_string(), bouquet((1, 1), (10, 1))),
    ];
    for m in 1..=4 {
        for n in 1..=4 {
            out.push((format!("c{m}xc{n}"), grid(m, n)));
        }
    }
    for k in 1..=5 {
        out.push((format!("staircase-{k}"), staircase(k)));
    }
    out.push(("hexagon".to_string(), hexagon_graph()));
    out.push(("octagon".to_string(), octagon_graph()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn fixture_shapes() {
        let g = grid(3, 3);
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (9, 18, 9));
        let s = staircase(4);
        assert_eq!((s.vertex_count(), s.edge_count()), (4, 8));
        let h = hexagon_graph();
        assert_eq!((h.vertex_count(), h.edge_count(), h.face_count()), (8, 12, 4));
        let o = octagon_graph();
        assert_eq!(o.vertex_count(), 12);
        assert!(o.frame().is_some());
    }

    #[test]
    fn random_embeddings_validate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_embedding(&mut rng, 30);
            assert!(g.vertex_count() <= 30);
        }
    }

    #[test]
    fn random_specs_and_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_norm_spec(&mut rng, 5, 4);
            assert!(s.pairs() >= 2 && s.pairs() <= 5);
            let m = random_unimodular(&mut rng, 10);
            assert_eq!((m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs(), 1);
        }
    }
}
