//! The unmarked length spectrum by sweeping the unimodular cones of `H`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use crate::ball::UnitBall;
use crate::error::{Error, Result};
use crate::surface::HomologyClass;
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumItem {
    /// In scaled weight units (see [`UnitBall::scale`]).
    pub value: Weight,
    pub class: HomologyClass,
}

/// Sweep state of one cone `{x c_i + y c_{i+1} : x >= 0, y > 0}`.
#[derive(Clone, Debug)]
pub struct SweepFront {
    /// Swept points whose `+c_i` neighbour may be unswept.
    pub horizontal: VecDeque<(i64, i64)>,
    /// Swept points (or the origin) whose `+c_{i+1}` neighbour may be unswept.
    pub vertical: VecDeque<(i64, i64)>,
    swept: HashSet<(i64, i64)>,
}

impl SweepFront {
    fn new() -> Self {
        SweepFront { horizontal: VecDeque::new(), vertical: VecDeque::from([(0, 0)]), swept: HashSet::new() }
    }

    fn trim(&mut self) {
        while let Some(&(x, y)) = self.horizontal.front() {
            if !self.swept.contains(&(x + 1, y)) {
                break;
            }
            self.horizontal.pop_front();
        }
        while let Some(&(x, y)) = self.vertical.front() {
            if !self.swept.contains(&(x, y + 1)) {
                break;
            }
            self.vertical.pop_front();
        }
    }

    /// Cheapest unswept point of the cone.
    fn next(&self, w0: &Weight, w1: &Weight) -> (Weight, (i64, i64)) {
        let value = |(x, y): (i64, i64)| &(w0 * x) + &(w1 * y);
        let v = self.vertical.front().map(|&(x, y)| (x, y + 1)).expect("vertical front is never empty");
        match self.horizontal.front().map(|&(x, y)| (x + 1, y)) {
            Some(h) => {
                let (vh, vv) = (value(h), value(v));
                if (&vh, h) < (&vv, v) {
                    (vh, h)
                } else {
                    (vv, v)
                }
            }
            None => (value(v), v),
        }
    }

    fn sweep(&mut self, p: (i64, i64)) {
        self.swept.insert(p);
        self.horizontal.push_back(p);
        self.vertical.push_back(p);
        self.trim();
    }
}

/// Iterator over the spectrum in nondecreasing order with classes.
pub struct Sweep<'a> {
    ball: &'a UnitBall,
    fronts: Vec<SweepFront>,
    heap: BinaryHeap<Reverse<(Weight, usize, (i64, i64))>>,
}

impl<'a> Sweep<'a> {
    pub fn new(ball: &'a UnitBall) -> Self {
        let t = ball.h().len();
        let mut s = Sweep { ball, fronts: (0..t).map(|_| SweepFront::new()).collect(), heap: BinaryHeap::new() };
        for i in 0..t {
            s.schedule(i);
        }
        s
    }

    fn cone(&self, i: usize) -> (&Weight, &Weight, HomologyClass, HomologyClass) {
        let h = self.ball.h();
        let (a, b) = (&h[i], &h[(i + 1) % h.len()]);
        (&a.weight, &b.weight, a.class, b.class)
    }

    fn schedule(&mut self, i: usize) {
        let (w0, w1, _, _) = self.cone(i);
        let (v, p) = self.fronts[i].next(w0, w1);
        self.heap.push(Reverse((v, i, p)));
    }
}

impl Iterator for Sweep<'_> {
    type Item = SpectrumItem;

    fn next(&mut self) -> Option<SpectrumItem> {
        let Reverse((value, i, (x, y))) = self.heap.pop()?;
        let (_, _, c0, c1) = self.cone(i);
        let class = x * c0 + y * c1;
        self.fronts[i].sweep((x, y));
        self.schedule(i);
        Some(SpectrumItem { value, class })
    }
}

/// The first `k` values of the length spectrum with their classes.
pub fn spectrum(ball: &UnitBall, k: usize) -> Result<Vec<SpectrumItem>> {
    if k < 1 {
        return Err(Error::EmptyRequest);
    }
    Ok(Sweep::new(ball).take(k).collect())
}

/// A group of equal consecutive values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicity {
    pub value: Weight,
    pub count: usize,
    /// The group may continue past the `k` items requested.
    pub truncated: bool,
}

pub fn spectrum_multiset(ball: &UnitBall, k: usize) -> Result<Vec<Multiplicity>> {
    let mut sweep = Sweep::new(ball);
    if k < 1 {
        return Err(Error::EmptyRequest);
    }
    let mut out: Vec<Multiplicity> = Vec::new();
    for item in sweep.by_ref().take(k) {
        match out.last_mut() {
            Some(m) if m.value == item.value => m.count += 1,
            _ => out.push(Multiplicity { value: item.value, count: 1, truncated: false }),
        }
    }
    if let (Some(m), Some(next)) = (out.last_mut(), sweep.next()) {
        m.truncated = next.value == m.value;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn values(g: &crate::EmbeddedGraph, k: usize) -> Vec<i64> {
        let ball = UnitBall::new(g).unwrap();
        spectrum(&ball, k).unwrap().iter().map(|s| s.value.coeffs()[0]).collect()
    }

    #[test]
    fn bouquet_spectrum() {
        let g = fixtures::bouquet((1, 1), (1, 1));
        assert_eq!(values(&g, 12), vec![1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2]);
        let ball = UnitBall::new(&g).unwrap();
        let m = spectrum_multiset(&ball, 12).unwrap();
        assert_eq!(m.iter().map(|m| (m.value.coeffs()[0], m.count)).collect::<Vec<_>>(), vec![(1, 4), (2, 8)]);
        assert!(!m[1].truncated);
        assert!(spectrum_multiset(&ball, 11).unwrap()[1].truncated);
    }

    #[test]
    fn grid_spectrum() {
        assert_eq!(values(&fixtures::grid(3, 3), 8), vec![3, 3, 3, 3, 6, 6, 6, 6]);
        assert_eq!(values(&fixtures::grid(3, 4), 8), vec![3, 3, 4, 4, 6, 6, 7, 7]);
    }

    #[test]
    fn classes_are_distinct_and_nonzero() {
        let g = fixtures::staircase(3);
        let ball = UnitBall::new(&g).unwrap();
        let items = spectrum(&ball, 200).unwrap();
        let set: HashSet<_> = items.iter().map(|s| s.class).collect();
        assert_eq!(set.len(), items.len());
        assert!(!set.contains(&HomologyClass::ZERO));
        for w in items.windows(2) {
            assert!(w[0].value <= w[1].value);
        }
        for s in &items {
            assert_eq!(ball.norm_eval(s.class), s.value);
        }
    }

    #[test]
    fn empty_request() {
        let ball = UnitBall::new(&fixtures::bouquet((1, 1), (1, 1))).unwrap();
        assert!(spectrum(&ball, 0).is_err());
    }
}
