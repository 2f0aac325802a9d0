use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer;

use super::{Dart, EmbeddedGraph};
use crate::error::{Error, Result};

/// An element of `H_1(T; Z) = Z^2`, also used for covering translations.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyClass {
    pub x: i64,
    pub y: i64,
}

impl HomologyClass {
    pub const ZERO: HomologyClass = HomologyClass { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        HomologyClass { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// `x * o.y - y * o.x`.
    pub fn det(self, o: HomologyClass) -> i64 {
        self.x * o.y - self.y * o.x
    }

    pub fn gcd(self) -> i64 {
        self.x.gcd(&self.y)
    }

    pub fn is_primitive(self) -> bool {
        self.gcd() == 1
    }

    /// 0 for the half-plane starting at the positive x-axis, 1 for the other.
    fn half(self) -> u8 {
        if self.y > 0 || (self.y == 0 && self.x > 0) {
            0
        } else {
            1
        }
    }

    /// Counterclockwise angular order starting at the positive x-axis.
    /// Collinear vectors with the same direction compare equal.
    pub fn angle_cmp(self, o: HomologyClass) -> Ordering {
        debug_assert!(!self.is_zero() && !o.is_zero());
        self.half().cmp(&o.half()).then_with(|| 0.cmp(&self.det(o)))
    }

    /// Maps the class by the integer matrix `[[a, b], [c, d]]`.
    pub fn transform(self, m: [[i64; 2]; 2]) -> HomologyClass {
        HomologyClass::new(m[0][0] * self.x + m[0][1] * self.y, m[1][0] * self.x + m[1][1] * self.y)
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for HomologyClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        HomologyClass::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for HomologyClass {
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for HomologyClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        HomologyClass::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for HomologyClass {
    type Output = Self;
    fn neg(self) -> Self {
        HomologyClass::new(-self.x, -self.y)
    }
}

impl Mul<HomologyClass> for i64 {
    type Output = HomologyClass;
    fn mul(self, c: HomologyClass) -> HomologyClass {
        HomologyClass::new(self * c.x, self * c.y)
    }
}

/// An integer 1-cocycle: one class per edge (for its side-0 dart) whose sum
/// around every face vanishes, together with the orientation sign relating
/// the coordinate determinant to the intersection pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    per_edge: Vec<HomologyClass>,
    orientation: i64,
}

impl Cocycle {
    pub(crate) fn new(per_edge: Vec<HomologyClass>, orientation: i64) -> Self {
        debug_assert!(orientation == 1 || orientation == -1);
        Cocycle { per_edge, orientation }
    }

    pub fn of_dart(&self, d: Dart) -> HomologyClass {
        let t = self.per_edge[d.edge()];
        if d.side() == 0 {
            t
        } else {
            -t
        }
    }

    pub fn per_edge(&self) -> &[HomologyClass] {
        &self.per_edge
    }

    /// `+1` when the coordinates are positively oriented.
    pub fn orientation(&self) -> i64 {
        self.orientation
    }

    /// Sum of the cocycle along a walk (open or closed).
    pub fn sum(&self, darts: &[Dart]) -> HomologyClass {
        let mut acc = HomologyClass::ZERO;
        for &d in darts {
            acc += self.of_dart(d);
        }
        acc
    }

    /// Intersection pairing of two classes expressed in these coordinates.
    pub fn pairing(&self, u: HomologyClass, v: HomologyClass) -> i64 {
        self.orientation * u.det(v)
    }

    /// Re-expresses the cocycle in the coordinates given by the integer matrix
    /// `m` (new = m * old).
    pub(crate) fn transformed(&self, m: [[i64; 2]; 2], orientation: i64) -> Cocycle {
        Cocycle { per_edge: self.per_edge.iter().map(|c| c.transform(m)).collect(), orientation }
    }
}

/// Doubled signed side of a dart relative to a simple cycle at the dart's tail.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    Off,
    On,
    Left,
    Right,
}

/// Per-dart data of a simple closed walk: for each dart, its side at its tail.
#[derive(Clone, Debug)]
pub(crate) struct CycleSides {
    side: Vec<Side>,
}

impl CycleSides {
    /// Requires `cycle` to be a simple closed walk.
    pub(crate) fn new(g: &EmbeddedGraph, cycle: &[Dart]) -> Self {
        let mut side = vec![Side::Off; 2 * g.edge_count()];
        let n = cycle.len();
        for i in 0..n {
            let out = cycle[i];
            let inc = cycle[(i + n - 1) % n].rev();
            let x = g.tail(out);
            debug_assert_eq!(x, g.tail(inc));
            let rot = g.rotation(x);
            let k = rot.len();
            let start = g.rotation_index(out);
            side[out.index()] = Side::On;
            side[inc.index()] = Side::On;
            let mut left = true;
            for s in 1..k {
                let d = rot[(start + s) % k];
                if d == inc {
                    left = false;
                    continue;
                }
                if d == out {
                    continue;
                }
                side[d.index()] = if left { Side::Left } else { Side::Right };
            }
        }
        CycleSides { side }
    }

    pub(crate) fn side(&self, d: Dart) -> Side {
        self.side[d.index()]
    }

    /// Twice the signed crossing contribution of one dart.
    pub(crate) fn delta2(&self, d: Dart) -> i64 {
        let leave = match self.side(d) {
            Side::Left => 1,
            Side::Right => -1,
            _ => 0,
        };
        let arrive = match self.side(d.rev()) {
            Side::Left => -1,
            Side::Right => 1,
            _ => 0,
        };
        leave + arrive
    }

    /// Intersection number of the cycle with a closed walk.
    pub(crate) fn crossing(&self, walk: &[Dart]) -> i64 {
        let s: i64 = walk.iter().map(|&d| self.delta2(d)).sum();
        debug_assert!(s % 2 == 0);
        s / 2
    }
}

/// Algebraic intersection number of a simple closed walk with any closed walk,
/// read directly from the rotation system.
pub fn crossing_number(g: &EmbeddedGraph, simple: &[Dart], walk: &[Dart]) -> Result<i64> {
    g.check_closed(simple)?;
    g.check_closed(walk)?;
    if !g.is_simple(simple) {
        return Err(Error::MalformedWalk("first walk must be simple".into()));
    }
    Ok(CycleSides::new(g, simple).crossing(walk))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_order() {
        let mut v = vec![
            HomologyClass::new(0, -1),
            HomologyClass::new(-1, 0),
            HomologyClass::new(1, 1),
            HomologyClass::new(1, 0),
            HomologyClass::new(-1, -3),
            HomologyClass::new(0, 1),
        ];
        v.sort_by(|a, b| a.angle_cmp(*b));
        let want = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -3), (0, -1)];
        assert_eq!(v, want.iter().map(|&(x, y)| HomologyClass::new(x, y)).collect::<Vec<_>>());
    }

    #[test]
    fn primitive() {
        assert!(HomologyClass::new(0, 1).is_primitive());
        assert!(HomologyClass::new(-3, 2).is_primitive());
        assert!(!HomologyClass::new(2, 0).is_primitive());
        assert!(!HomologyClass::ZERO.is_primitive());
    }
}
