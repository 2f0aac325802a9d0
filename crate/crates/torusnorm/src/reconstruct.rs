//! Weighted 4-valent torus graphs realizing a prescribed polyhedral norm,
//! built from arrangements of closed geodesics.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cover::ext_gcd;
use crate::error::{Error, Result};
use crate::surface::{Dart, Edge, EmbeddedGraph, HomologyClass, RawGraph};
use crate::weight::Weight;

/// A polyhedral norm with rational-slope extremal directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormSpec {
    /// Angularly sorted, closed under negation.
    points: Vec<(HomologyClass, BigRational)>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl NormSpec {
    /// Builds a spec from extremal directions and their norms. Directions
    /// whose negation is missing are completed by symmetry.
    pub fn new(entries: Vec<(HomologyClass, BigRational)>) -> Result<Self> {
        let mut map: HashMap<HomologyClass, BigRational> = HashMap::new();
        for (c, v) in entries {
            if !c.is_primitive() {
                return Err(Error::Spec(format!("direction {c} is not primitive")));
            }
            if !v.is_positive() {
                return Err(Error::Spec(format!("value for {c} must be positive")));
            }
            for (k, val) in [(c, v.clone()), (-c, v)] {
                if let Some(old) = map.get(&k) {
                    if *old != val {
                        return Err(Error::Spec(format!("conflicting values for {k}")));
                    }
                }
                map.insert(k, val);
            }
        }
        let mut points: Vec<(HomologyClass, BigRational)> = map.into_iter().collect();
        points.sort_by(|a, b| a.0.angle_cmp(b.0));
        if points.len() < 4 {
            return Err(Error::Spec("need at least two directions".into()));
        }
        let t = points.len();
        for i in 0..t {
            let (c0, w0) = &points[i];
            let (c1, w1) = &points[(i + 1) % t];
            let (c2, w2) = &points[(i + 2) % t];
            if c0.det(*c1) <= 0 {
                return Err(Error::Spec("directions must be pairwise non-collinear and span the plane".into()));
            }
            // strict convexity at c1 / w1
            if turn(*c0, w0, *c1, w1, *c2, w2) != Ordering::Greater {
                return Err(Error::Spec(format!("{c1} is not an extremal direction")));
            }
        }
        Ok(NormSpec { points })
    }

    pub fn points(&self) -> &[(HomologyClass, BigRational)] {
        &self.points
    }

    /// Number of direction pairs.
    pub fn pairs(&self) -> usize {
        self.points.len() / 2
    }

    /// The representatives in the upper half-plane.
    pub fn directions(&self) -> &[(HomologyClass, BigRational)] {
        &self.points[..self.pairs()]
    }

    /// The piecewise-linear extension at an integer vector.
    pub fn eval(&self, v: HomologyClass) -> BigRational {
        if v.is_zero() {
            return BigRational::zero();
        }
        let t = self.points.len();
        for i in 0..t {
            let (c0, w0) = &self.points[i];
            let (c1, w1) = &self.points[(i + 1) % t];
            // v = a c0 + b c1 with a >= 0, b > 0 or v on ray c0
            let d = c0.det(*c1);
            let a = BigRational::new(BigInt::from(v.det(*c1)), BigInt::from(d));
            let b = BigRational::new(BigInt::from(c0.det(v)), BigInt::from(d));
            if !a.is_negative() && !b.is_negative() {
                return a * w0 + b * w1;
            }
        }
        unreachable!("the cones cover the plane")
    }

    /// The vertex count of the arrangement realizing this norm.
    pub fn expected_vertices(&self) -> u64 {
        let ds = self.directions();
        let mut s = 0u64;
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                s += ds[i].0.det(ds[j].0).unsigned_abs();
            }
        }
        s
    }
}

/// Sign of the turn `p0 -> p1 -> p2` for points `c_k / w_k`.
fn turn(
    c0: HomologyClass,
    w0: &BigRational,
    c1: HomologyClass,
    w1: &BigRational,
    c2: HomologyClass,
    w2: &BigRational,
) -> Ordering {
    // det(p1 - p0, p2 - p0) scaled by w0 w1 w2 > 0
    let v = rat(c1.det(c2)) * w0 - rat(c0.det(c2)) * w1 + rat(c0.det(c1)) * w2;
    v.cmp(&BigRational::zero())
}

/// One closed geodesic `o + t d` on the flat torus `R^2 / Z^2`.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub direction: HomologyClass,
    pub offset: (BigRational, BigRational),
}

fn frac(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

fn rdet(a: (&BigRational, &BigRational), b: HomologyClass) -> BigRational {
    a.0 * rat(b.y) - a.1 * rat(b.x)
}

/// A crossing of geodesics `i` and `j` at parameters `t` on `i` and `s` on `j`.
struct Crossing {
    lines: [usize; 2],
    params: [BigRational; 2],
    point: (BigRational, BigRational),
}

/// Builds the arrangement graph of a family of closed geodesics. Edges are
/// the arcs between consecutive crossings; `weight(line, dt)` gives the
/// weight of an arc spanning parameter length `dt` on `line`. The returned
/// graph carries drawing coordinates as its frame.
pub fn arrangement(
    lines: &[Geodesic],
    weight: impl Fn(usize, &BigRational) -> BigRational,
) -> Result<RawGraph> {
    for g in lines {
        if !g.direction.is_primitive() {
            return Err(Error::Spec(format!("direction {} is not primitive", g.direction)));
        }
    }
    let mut crossings: Vec<Crossing> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (di, dj) = (lines[i].direction, lines[j].direction);
            let det = di.det(dj);
            let diff = (&lines[j].offset.0 - &lines[i].offset.0, &lines[j].offset.1 - &lines[i].offset.1);
            if det == 0 {
                // parallel: must not coincide
                if rdet((&diff.0, &diff.1), di).is_integer() {
                    return Err(Error::Spec("two geodesics coincide".into()));
                }
                continue;
            }
            let c = rdet((&diff.0, &diff.1), dj);
            let (_, u, v) = ext_gcd(dj.x, dj.y);
            for m in 0..det.abs() {
                let t = frac(&((&c + rat(m)) / rat(det)));
                let px = &lines[i].offset.0 + &t * rat(di.x);
                let py = &lines[i].offset.1 + &t * rat(di.y);
                let point = (frac(&px), frac(&py));
                let s = frac(&((&px - &lines[j].offset.0) * rat(u) + (&py - &lines[j].offset.1) * rat(v)));
                crossings.push(Crossing { lines: [i, j], params: [t, s], point });
            }
        }
    }
    // per line, crossings sorted by parameter
    let mut on_line: Vec<Vec<(BigRational, usize)>> = vec![Vec::new(); lines.len()];
    for (k, c) in crossings.iter().enumerate() {
        for s in 0..2 {
            on_line[c.lines[s]].push((c.params[s].clone(), k));
        }
    }
    for (i, list) in on_line.iter_mut().enumerate() {
        if list.is_empty() {
            return Err(Error::Spec(format!("geodesic {i} crosses no other geodesic")));
        }
        list.sort();
        if list.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Spec("degenerate arrangement: more than two geodesics meet".into()));
        }
    }
    // edges: arc k on line i from crossing list[k] to list[k+1]
    let mut edges = Vec::new();
    let mut frame = Vec::new();
    let mut arc_id: Vec<Vec<usize>> = Vec::with_capacity(lines.len());
    let mut rational_weights = Vec::new();
    for (i, list) in on_line.iter().enumerate() {
        let mut ids = Vec::with_capacity(list.len());
        for k in 0..list.len() {
            let (t0, a) = &list[k];
            let (t1, b) = &list[(k + 1) % list.len()];
            let mut dt = t1 - t0;
            if !dt.is_positive() {
                dt += BigRational::one();
            }
            let d = lines[i].direction;
            let pa = &crossings[*a].point;
            let pb = &crossings[*b].point;
            let mx = &pa.0 + &dt * rat(d.x) - &pb.0;
            let my = &pa.1 + &dt * rat(d.y) - &pb.1;
            debug_assert!(mx.is_integer() && my.is_integer());
            frame.push(HomologyClass::new(
                mx.to_integer().to_i64().expect("small"),
                my.to_integer().to_i64().expect("small"),
            ));
            rational_weights.push(weight(i, &dt));
            ids.push(edges.len());
            edges.push((*a, *b));
        }
        arc_id.push(ids);
    }
    let mut scale = BigInt::one();
    for w in &rational_weights {
        if !w.is_positive() {
            return Err(Error::Spec("arc weights must be positive".into()));
        }
        scale = scale.lcm(w.denom());
    }
    let scale_u = scale.to_u64().ok_or_else(|| Error::Spec("weight denominators too large".into()))?;
    let out_edges: Vec<Edge> = edges
        .iter()
        .zip(&rational_weights)
        .enumerate()
        .map(|(id, (&(a, b), w))| {
            let c = (w * BigRational::from_integer(scale.clone())).to_integer();
            Edge { u: a, v: b, weight: Weight::int(c.to_i64().expect("weight fits")), label: id as u64 }
        })
        .collect();
    // rotation at each crossing from the local geometry
    let mut rotation = vec![Vec::new(); crossings.len()];
    let position: HashMap<(usize, usize), usize> = on_line
        .iter()
        .enumerate()
        .flat_map(|(i, list)| list.iter().enumerate().map(move |(k, &(_, c))| ((i, c), k)))
        .collect();
    for (v, c) in crossings.iter().enumerate() {
        let [i, j] = c.lines;
        let dart_pair = |line: usize| {
            let k = position[&(line, v)];
            let n = on_line[line].len();
            let out = Dart::new(arc_id[line][k], 0);
            let inc = Dart::new(arc_id[line][(k + n - 1) % n], 1);
            (out, inc)
        };
        let (oi, ii) = dart_pair(i);
        let (oj, ij) = dart_pair(j);
        rotation[v] = if lines[i].direction.det(lines[j].direction) > 0 {
            vec![oi, oj, ii, ij]
        } else {
            vec![oi, ij, ii, oj]
        };
    }
    Ok(RawGraph {
        vertices: crossings.len(),
        edges: out_edges,
        rotation,
        scale: scale_u,
        system: None,
        frame: Some(frame),
    })
}

const PRIMES: [i64; 12] = [97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151];

/// Offsets for attempt `a`: `((i+1)(a+1) mod p) / p` and
/// `((i+1)^2 (a+3) mod p) / p` with `p` the `a`-th prime of the schedule.
fn offsets(n: usize, attempt: usize) -> Vec<(BigRational, BigRational)> {
    let p = PRIMES[attempt % PRIMES.len()];
    let a = attempt as i64;
    (0..n as i64)
        .map(|i| {
            let x = ((i + 1) * (a + 1)).rem_euclid(p);
            let y = ((i + 1) * (i + 1) * (a + 3)).rem_euclid(p);
            (BigRational::new(x.into(), p.into()), BigRational::new(y.into(), p.into()))
        })
        .collect()
}

/// Builds a weighted 4-valent torus graph whose norm is `spec`.
pub fn graph_from_norm(spec: &NormSpec) -> Result<EmbeddedGraph> {
    EmbeddedGraph::new(raw_from_norm(spec)?).map_err(|r| Error::Internal(r.to_string()))
}

/// The arrangement behind [`graph_from_norm`], before validation.
pub fn raw_from_norm(spec: &NormSpec) -> Result<RawGraph> {
    let dirs = spec.directions();
    let mut last = Error::Spec("no attempt made".into());
    for attempt in 0..2 * PRIMES.len() {
        let lines: Vec<Geodesic> = dirs
            .iter()
            .zip(offsets(dirs.len(), attempt))
            .map(|((d, _), o)| Geodesic { direction: *d, offset: o })
            .collect();
        match arrangement(&lines, |i, dt| dt * &dirs[i].1) {
            Ok(raw) => {
                assert_eq!(raw.vertices as u64, spec.expected_vertices(), "vertex count of the arrangement");
                return Ok(raw);
            }
            Err(e) => last = e,
        }
    }
    Err(Error::Spec(format!("offsets stayed degenerate after all retries: {last}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[((i64, i64), (i64, i64))]) -> NormSpec {
        NormSpec::new(
            v.iter()
                .map(|&((x, y), (p, q))| (HomologyClass::new(x, y), BigRational::new(p.into(), q.into())))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(NormSpec::new(vec![(HomologyClass::new(1, 0), rat(1))]).is_err());
        let bad = NormSpec::new(vec![
            (HomologyClass::new(1, 0), rat(1)),
            (HomologyClass::new(0, 1), rat(1)),
            (HomologyClass::new(1, 1), rat(2)),
        ]);
        assert!(bad.is_err(), "(1,1) with value 2 is not extremal");
        let s = spec(&[((1, 0), (1, 1)), ((0, 1), (1, 1)), ((1, 1), (3, 2))]);
        assert_eq!(s.pairs(), 3);
        assert_eq!(s.expected_vertices(), 3);
        assert_eq!(s.eval(HomologyClass::new(2, 1)), BigRational::new(5.into(), 2.into()));
        assert_eq!(s.eval(HomologyClass::new(1, -1)), rat(2));
    }

    #[test]
    fn unit_case_vertex_count() {
        let s = spec(&[((1, 0), (1, 1)), ((0, 1), (1, 1))]);
        let g = graph_from_norm(&s).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn three_directions() {
        let s = spec(&[((1, 0), (1, 1)), ((0, 1), (1, 1)), ((1, 1), (3, 2))]);
        let g = graph_from_norm(&s).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!((0..3).all(|v| g.rotation(v).len() == 4));
    }

    #[test]
    fn ext_gcd_bezout() {
        for &(a, b) in &[(3, 4), (-2, 5), (1, 0), (0, -1), (4, -3), (-1, -1)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(g, 1);
            assert_eq!(s * a + t * b, 1);
        }
    }
}
