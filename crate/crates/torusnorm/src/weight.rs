//! Exact edge weights over a system of real generators.
//!
//! A [`Weight`] is an integer coefficient vector `(c_1, ..., c_r)` standing for
//! the real number `c_1 o_1 + ... + c_r o_r`. The generators `o_i` are assumed
//! linearly independent over the rationals, so two weights are equal exactly
//! when their coefficient vectors are. Ordering needs the actual reals; it is
//! decided by interval arithmetic on decimal approximations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use smallvec::SmallVec;

use crate::error::Error;

/// One real generator given by a decimal approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    negative: bool,
    int_part: String,
    frac_digits: String,
    precision: u32,
}

impl Generator {
    /// Parses a decimal such as `1.41421356` that is accurate to `precision`
    /// digits after the point.
    pub fn parse(decimal: &str, precision: u32) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("bad generator decimal `{decimal}`"));
        let (negative, body) = match decimal.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, decimal.strip_prefix('+').unwrap_or(decimal)),
        };
        let (int_part, frac) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if precision == 0 {
            return Err(Error::Parse("generator precision must be at least 1".into()));
        }
        Ok(Generator {
            negative,
            int_part: if int_part.is_empty() { "0".into() } else { int_part.into() },
            frac_digits: frac.into(),
            precision,
        })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The decimal exactly as stored.
    pub fn decimal(&self) -> String {
        let sign = if self.negative { "-" } else { "" };
        if self.frac_digits.is_empty() {
            format!("{sign}{}", self.int_part)
        } else {
            format!("{sign}{}.{}", self.int_part, self.frac_digits)
        }
    }

    /// Truncation to `k` fractional digits, as an integer scaled by `10^k`.
    fn truncated(&self, k: u32) -> BigInt {
        let mut digits = self.int_part.clone();
        for i in 0..k as usize {
            digits.push(self.frac_digits.as_bytes().get(i).map_or('0', |&b| b as char));
        }
        let v: BigInt = digits.parse().expect("validated digits");
        if self.negative {
            -v
        } else {
            v
        }
    }
}

/// The generators `o_1, ..., o_r` shared by every weight of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSystem {
    gens: Vec<Generator>,
    cap: u32,
}

impl GeneratorSystem {
    pub fn new(gens: Vec<Generator>) -> Result<Self, Error> {
        if gens.is_empty() {
            return Err(Error::Parse("at least one generator is required".into()));
        }
        let cap = gens.iter().map(|g| g.precision).max().unwrap_or(1);
        Ok(GeneratorSystem { gens, cap })
    }

    /// Lowers the largest number of digits used before giving up on a comparison.
    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap.max(1);
        self
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// Sign of `sum d_i o_i`, escalating precision until the enclosing interval
    /// excludes zero.
    fn sign_of(&self, d: &[i64]) -> Result<Ordering, Error> {
        if d.iter().all(|&c| c == 0) {
            return Ok(Ordering::Equal);
        }
        let mut level = 4u32;
        loop {
            let ks: Vec<u32> = self.gens.iter().map(|g| level.min(g.precision).min(self.cap)).collect();
            let big_k = *ks.iter().max().expect("nonempty");
            let ten = BigInt::from(10);
            let mut centre = BigInt::zero();
            let mut radius = BigInt::zero();
            for ((g, &k), &c) in self.gens.iter().zip(&ks).zip(d) {
                if c == 0 {
                    continue;
                }
                let shift = num_traits::pow(ten.clone(), (big_k - k) as usize);
                centre += BigInt::from(c) * g.truncated(k) * &shift;
                // truncation error plus the declared accuracy, both below 10^-k
                radius += BigInt::from(c).abs() * 2 * &shift;
            }
            if centre.abs() > radius {
                return Ok(if centre.is_positive() { Ordering::Greater } else { Ordering::Less });
            }
            let exhausted = self.gens.iter().zip(&ks).all(|(g, &k)| k >= g.precision.min(self.cap));
            if exhausted {
                return Err(Error::Precision(format!(
                    "cannot order weights at {big_k} digits; supply more precise generators"
                )));
            }
            level = level.saturating_mul(2);
        }
    }

    /// Lower and upper bounds for `sum c_i o_i` as rationals.
    pub fn enclose(&self, c: &[i64]) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (g, &ci) in self.gens.iter().zip(c) {
            let k = g.precision.min(self.cap);
            let den = num_traits::pow(BigInt::from(10), k as usize);
            let mid = BigRational::new(g.truncated(k) * ci, den.clone());
            let err = BigRational::new(BigInt::from(ci).abs() * 2, den);
            lo += &mid - &err;
            hi += &mid + &err;
        }
        (lo, hi)
    }
}

/// An exact weight. `system == None` is the usual single generator `o_1 = 1`.
#[derive(Clone, Debug)]
pub struct Weight {
    coeffs: SmallVec<[i64; 2]>,
    system: Option<Arc<GeneratorSystem>>,
}

impl Weight {
    /// An integer weight over the trivial generator system.
    pub fn int(v: i64) -> Self {
        Weight { coeffs: SmallVec::from_slice(&[v]), system: None }
    }

    pub fn from_coeffs(coeffs: &[i64], system: Option<Arc<GeneratorSystem>>) -> Self {
        if let Some(s) = &system {
            assert_eq!(s.rank(), coeffs.len(), "coefficient count must match the generator system");
        } else {
            assert_eq!(coeffs.len(), 1, "weights without generators have one coefficient");
        }
        Weight { coeffs: SmallVec::from_slice(coeffs), system }
    }

    /// The zero weight compatible with `self`.
    pub fn zero_like(&self) -> Self {
        Weight { coeffs: SmallVec::from_elem(0, self.coeffs.len()), system: self.system.clone() }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn system(&self) -> Option<&Arc<GeneratorSystem>> {
        self.system.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Whether comparisons reduce to comparing the single coefficient.
    fn is_scalar(&self) -> bool {
        self.coeffs.len() == 1
            && self.system.as_ref().is_none_or(|s| s.gens[0].truncated(s.gens[0].precision).is_positive())
    }

    /// Exact comparison; fails only when the generator decimals are too coarse.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, Error> {
        self.check_compatible(other);
        if self.is_scalar() {
            return Ok(self.coeffs[0].cmp(&other.coeffs[0]));
        }
        let d: Vec<i64> = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        match &self.system {
            Some(s) => s.sign_of(&d),
            None => Ok(d[0].cmp(&0)),
        }
    }

    /// Sign of the represented real.
    pub fn signum(&self) -> Result<Ordering, Error> {
        self.try_cmp(&self.zero_like())
    }

    /// The value `c_1 / scale` for single-generator weights.
    pub fn to_rational(&self, scale: u64) -> Option<BigRational> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let base = BigRational::new(BigInt::from(self.coeffs[0]), BigInt::from(scale));
        match &self.system {
            None => Some(base),
            Some(s) => {
                let g = &s.gens[0];
                let k = g.precision.min(s.cap);
                let dec = BigRational::new(g.truncated(k), num_traits::pow(BigInt::from(10), k as usize));
                if dec == BigRational::from_integer(BigInt::from(1)) && g.frac_digits.trim_end_matches('0').is_empty() {
                    Some(base)
                } else {
                    None
                }
            }
        }
    }

    /// A floating approximation, for plotting only.
    pub fn approx(&self, scale: u64) -> f64 {
        let vals: Vec<f64> = match &self.system {
            None => vec![1.0],
            Some(s) => s.gens.iter().map(|g| g.decimal().parse::<f64>().unwrap_or(0.0)).collect(),
        };
        self.coeffs.iter().zip(vals).map(|(&c, o)| c as f64 * o).sum::<f64>() / scale as f64
    }

    pub fn scaled(&self, k: i64) -> Self {
        Weight {
            coeffs: self.coeffs.iter().map(|&c| c.checked_mul(k).expect("weight overflow")).collect(),
            system: self.system.clone(),
        }
    }

    fn check_compatible(&self, other: &Self) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len(), "mixing weight systems");
        debug_assert!(
            match (&self.system, &other.system) {
                (None, None) => true,
                (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
                _ => false,
            },
            "mixing weight systems"
        );
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Weight {}

impl std::hash::Hash for Weight {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    /// Panics when the generator approximations cannot separate the two values.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.try_cmp(other) {
            Ok(o) => o,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        self.check_compatible(rhs);
        Weight {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.checked_add(*b).expect("weight overflow"))
                .collect(),
            system: self.system.clone(),
        }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        self.check_compatible(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = a.checked_add(*b).expect("weight overflow");
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self + &(-rhs)
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scaled(-1)
    }
}

impl Mul<i64> for &Weight {
    type Output = Weight;
    fn mul(self, k: i64) -> Weight {
        self.scaled(k)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 && self.system.is_none() {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(decimals: &[(&str, u32)]) -> Arc<GeneratorSystem> {
        Arc::new(
            GeneratorSystem::new(decimals.iter().map(|(d, p)| Generator::parse(d, *p).unwrap()).collect()).unwrap(),
        )
    }

    #[test]
    fn scalar_order() {
        assert!(Weight::int(3) < Weight::int(4));
        assert_eq!(&Weight::int(3) + &Weight::int(4), Weight::int(7));
    }

    #[test]
    fn two_generators_order() {
        let s = sys(&[("1", 10), ("1.4142135623", 10)]);
        let w = |a, b| Weight::from_coeffs(&[a, b], Some(s.clone()));
        // 7 vs 5 sqrt 2 = 7.07
        assert!(w(7, 0) < w(0, 5));
        // 41 vs 29 sqrt 2 = 41.012
        assert!(w(41, 0) < w(0, 29));
        assert!(w(3, 1) > w(4, 0));
        assert_eq!(w(2, 2).cmp(&w(2, 2)), Ordering::Equal);
    }

    #[test]
    fn precision_exhaustion_is_an_error() {
        let s = sys(&[("1", 2), ("1.41", 2)]);
        let a = Weight::from_coeffs(&[1393, 0], Some(s.clone()));
        let b = Weight::from_coeffs(&[0, 985], Some(s));
        assert!(matches!(a.try_cmp(&b), Err(Error::Precision(_))));
    }

    #[test]
    fn generator_parsing() {
        assert!(Generator::parse("abc", 3).is_err());
        assert_eq!(Generator::parse("-.5", 3).unwrap().decimal(), "-0.5");
        assert_eq!(Generator::parse("2", 1).unwrap().truncated(2), BigInt::from(200));
    }
}
