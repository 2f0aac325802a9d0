//! Line-oriented text format.
//!
//! ```text
//! vertices 1
//! edge 0 0 0 1
//! edge 1 0 0 5/2
//! rotation 0 0.0 1.0 0.1 1.1
//! ```
//!
//! `generators <r>` followed by `gen <i> <decimal> <digits>` lines switches to
//! integer coefficient vectors over `r` real generators. An optional
//! `frame <edge-id> <dx> <dy>` line per edge records drawing coordinates.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_integer::Integer;

use super::{Dart, Edge, HomologyClass, RawGraph};
use crate::error::{Error, Result};
use crate::weight::{Generator, GeneratorSystem, Weight};

enum Coeffs {
    Rational(i64, i64),
    Vector(Vec<i64>),
}

struct PendingEdge {
    label: u64,
    u: usize,
    v: usize,
    coeffs: Coeffs,
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("bad {what} `{tok}`")))
}

fn parse_rational(line: usize, tok: &str) -> Result<(i64, i64)> {
    let (p, q): (i64, i64) = match tok.split_once('/') {
        Some((p, q)) => (num(line, Some(p), "numerator")?, num(line, Some(q), "denominator")?),
        None => (num(line, Some(tok), "weight")?, 1i64),
    };
    if q <= 0 {
        return Err(err(line, "denominator must be positive"));
    }
    let g = p.gcd(&q);
    Ok((p / g, q / g))
}

/// Parses the text format into an unvalidated graph.
pub fn parse(input: &str) -> Result<RawGraph> {
    let mut vertices: Option<usize> = None;
    let mut gen_count: Option<usize> = None;
    let mut gens: Vec<Option<Generator>> = Vec::new();
    let mut edges: Vec<PendingEdge> = Vec::new();
    let mut rotation_lines: Vec<(usize, usize, Vec<String>)> = Vec::new();
    let mut frames: Vec<(usize, u64, HomologyClass)> = Vec::new();

    for (idx, raw_line) in input.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(kw) = toks.next() else { continue };
        match kw {
            "vertices" => {
                if vertices.is_some() {
                    return Err(err(line, "duplicate `vertices`"));
                }
                vertices = Some(num(line, toks.next(), "vertex count")?);
            }
            "generators" => {
                if gen_count.is_some() || !edges.is_empty() {
                    return Err(err(line, "`generators` must appear once, before edges"));
                }
                let r: usize = num(line, toks.next(), "generator count")?;
                if r == 0 {
                    return Err(err(line, "need at least one generator"));
                }
                gen_count = Some(r);
                gens = vec![None; r];
            }
            "gen" => {
                let r = gen_count.ok_or_else(|| err(line, "`gen` before `generators`"))?;
                let i: usize = num(line, toks.next(), "generator index")?;
                if i == 0 || i > r {
                    return Err(err(line, format!("generator index {i} out of range 1..={r}")));
                }
                let dec = toks.next().ok_or_else(|| err(line, "missing decimal"))?;
                let prec: u32 = num(line, toks.next(), "precision")?;
                if gens[i - 1].is_some() {
                    return Err(err(line, format!("generator {i} given twice")));
                }
                gens[i - 1] = Some(Generator::parse(dec, prec).map_err(|e| err(line, e))?);
            }
            "edge" => {
                let label: u64 = num(line, toks.next(), "edge id")?;
                let u: usize = num(line, toks.next(), "endpoint")?;
                let v: usize = num(line, toks.next(), "endpoint")?;
                let rest: Vec<&str> = toks.by_ref().collect();
                let coeffs = match gen_count {
                    None => {
                        if rest.len() != 1 {
                            return Err(err(line, "expected one weight"));
                        }
                        let (p, q) = parse_rational(line, rest[0])?;
                        Coeffs::Rational(p, q)
                    }
                    Some(r) => {
                        if rest.len() != r {
                            return Err(err(line, format!("expected {r} coefficients")));
                        }
                        let mut c = Vec::with_capacity(r);
                        for t in rest {
                            c.push(num(line, Some(t), "coefficient")?);
                        }
                        Coeffs::Vector(c)
                    }
                };
                edges.push(PendingEdge { label, u, v, coeffs });
            }
            "rotation" => {
                let v: usize = num(line, toks.next(), "vertex")?;
                rotation_lines.push((line, v, toks.map(String::from).collect()));
            }
            "frame" => {
                let label: u64 = num(line, toks.next(), "edge id")?;
                let x: i64 = num(line, toks.next(), "displacement")?;
                let y: i64 = num(line, toks.next(), "displacement")?;
                frames.push((line, label, HomologyClass::new(x, y)));
            }
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }

    let vertices = vertices.ok_or_else(|| Error::Parse("missing `vertices` line".into()))?;
    let system = match gen_count {
        None => None,
        Some(_) => {
            let mut list = Vec::new();
            for (i, g) in gens.into_iter().enumerate() {
                list.push(g.ok_or_else(|| Error::Parse(format!("generator {} not given", i + 1)))?);
            }
            Some(Arc::new(GeneratorSystem::new(list)?))
        }
    };

    let mut index_of: HashMap<u64, usize> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        if index_of.insert(e.label, i).is_some() {
            return Err(Error::Parse(format!("edge id {} used twice", e.label)));
        }
    }

    let mut scale: i64 = 1;
    for e in &edges {
        if let Coeffs::Rational(_, q) = e.coeffs {
            scale = scale.lcm(&q);
        }
    }
    let mut out_edges = Vec::with_capacity(edges.len());
    for e in &edges {
        let weight = match &e.coeffs {
            Coeffs::Rational(p, q) => {
                let c = p
                    .checked_mul(scale / q)
                    .ok_or_else(|| Error::Parse(format!("weight of edge {} overflows", e.label)))?;
                Weight::int(c)
            }
            Coeffs::Vector(c) => Weight::from_coeffs(c, system.clone()),
        };
        out_edges.push(Edge { u: e.u, v: e.v, weight, label: e.label });
    }

    let mut rotation: Vec<Option<Vec<Dart>>> = vec![None; vertices];
    for (line, v, darts) in rotation_lines {
        if v >= vertices {
            return Err(err(line, format!("vertex {v} out of range")));
        }
        if rotation[v].is_some() {
            return Err(err(line, format!("rotation of vertex {v} given twice")));
        }
        let mut list = Vec::with_capacity(darts.len());
        for tok in darts {
            let (l, s) = tok.split_once('.').ok_or_else(|| err(line, format!("bad dart `{tok}`")))?;
            let label: u64 = num(line, Some(l), "edge id")?;
            let side: u8 = num(line, Some(s), "dart side")?;
            if side > 1 {
                return Err(err(line, format!("dart side must be 0 or 1 in `{tok}`")));
            }
            let e = *index_of.get(&label).ok_or_else(|| err(line, format!("unknown edge {label}")))?;
            list.push(Dart::new(e, side));
        }
        rotation[v] = Some(list);
    }
    let rotation: Vec<Vec<Dart>> = rotation.into_iter().map(|r| r.unwrap_or_default()).collect();

    let frame = if frames.is_empty() {
        None
    } else {
        let mut f: Vec<Option<HomologyClass>> = vec![None; out_edges.len()];
        for (line, label, c) in frames {
            let e = *index_of.get(&label).ok_or_else(|| err(line, format!("unknown edge {label}")))?;
            if f[e].replace(c).is_some() {
                return Err(err(line, format!("frame of edge {label} given twice")));
            }
        }
        let mut out = Vec::with_capacity(f.len());
        for (i, c) in f.into_iter().enumerate() {
            out.push(c.ok_or_else(|| Error::Parse(format!("frame missing for edge {}", out_edges[i].label)))?);
        }
        Some(out)
    };

    Ok(RawGraph { vertices, edges: out_edges, rotation, scale: scale as u64, system, frame })
}

/// Writes a graph in the text format; parsing the result gives back the same graph.
pub fn write(raw: &RawGraph) -> String {
    let mut s = String::new();
    writeln!(s, "vertices {}", raw.vertices).unwrap();
    if let Some(sys) = &raw.system {
        writeln!(s, "generators {}", sys.rank()).unwrap();
        for (i, g) in sys.generators().iter().enumerate() {
            writeln!(s, "gen {} {} {}", i + 1, g.decimal(), g.precision()).unwrap();
        }
    }
    for e in &raw.edges {
        write!(s, "edge {} {} {}", e.label, e.u, e.v).unwrap();
        if raw.system.is_some() {
            for c in e.weight.coeffs() {
                write!(s, " {c}").unwrap();
            }
        } else {
            let c = e.weight.coeffs()[0];
            let d = raw.scale as i64;
            let g = c.gcd(&d);
            if d / g == 1 {
                write!(s, " {}", c / g).unwrap();
            } else {
                write!(s, " {}/{}", c / g, d / g).unwrap();
            }
        }
        s.push('\n');
    }
    for (v, rot) in raw.rotation.iter().enumerate() {
        write!(s, "rotation {v}").unwrap();
        for d in rot {
            write!(s, " {}.{}", raw.edges[d.edge()].label, d.side()).unwrap();
        }
        s.push('\n');
    }
    if let Some(frame) = &raw.frame {
        for (e, c) in raw.edges.iter().zip(frame) {
            writeln!(s, "frame {} {} {}", e.label, c.x, c.y).unwrap();
        }
    }
    s
}

/// Parses and validates in one step.
pub fn read_graph(input: &str) -> Result<super::EmbeddedGraph> {
    let raw = parse(input)?;
    super::EmbeddedGraph::new(raw).map_err(|r| Error::Invalid(r.to_string()))
}

/// A walk written as dart tokens `label.side` separated by spaces or commas.
pub fn parse_walk(g: &super::EmbeddedGraph, input: &str) -> Result<Vec<Dart>> {
    let by_label: HashMap<u64, usize> = g.edges().iter().enumerate().map(|(i, e)| (e.label, i)).collect();
    let mut darts = Vec::new();
    for tok in input.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let (l, side) = tok.split_once('.').ok_or_else(|| Error::Parse(format!("bad dart `{tok}`")))?;
        let l: u64 = l.parse().map_err(|_| Error::Parse(format!("bad dart `{tok}`")))?;
        let side: u8 = match side {
            "0" => 0,
            "1" => 1,
            _ => return Err(Error::Parse(format!("bad dart `{tok}`"))),
        };
        let e = *by_label.get(&l).ok_or_else(|| Error::Parse(format!("no edge {l}")))?;
        darts.push(Dart::new(e, side));
    }
    Ok(darts)
}
