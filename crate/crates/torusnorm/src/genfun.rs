//! Comparing length spectra: marked equality by matching unit balls under
//! `GL_2(Z)`, unmarked equality through the rational generating function
//! `F(z) = sum_i z^{l_{i+1}} / ((1 - z^{l_i}) (1 - z^{l_{i+1}}))`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::UnitBall;
use crate::error::{Error, Result};
use crate::surface::HomologyClass;
use crate::weight::{GeneratorSystem, Weight};

/// Same real value, for weights of two instances with their scales.
fn same_value(w1: &Weight, s1: u64, w2: &Weight, s2: u64) -> bool {
    if w1.system().map(|s| &**s) != w2.system().map(|s| &**s) || w1.rank() != w2.rank() {
        return false;
    }
    w1.coeffs()
        .iter()
        .zip(w2.coeffs())
        .all(|(&a, &b)| i128::from(a) * i128::from(s2) == i128::from(b) * i128::from(s1))
}

/// A matrix `M` with `det M = +-1` and `M B_1 = B_2`, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl2Match {
    pub matrix: Option<[[i64; 2]; 2]>,
}

impl Gl2Match {
    pub fn is_present(&self) -> bool {
        self.matrix.is_some()
    }
}

fn solve_map(c0: HomologyClass, c1: HomologyClass, d0: HomologyClass, d1: HomologyClass) -> Option<[[i64; 2]; 2]> {
    // M [c0 c1] = [d0 d1]
    let det = c0.det(c1);
    if det == 0 {
        return None;
    }
    let inv = [[c1.y, -c1.x], [-c0.y, c0.x]];
    let d = [[d0.x, d1.x], [d0.y, d1.y]];
    let mut m = [[0i64; 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let v = d[i][0] * inv[0][j] + d[i][1] * inv[1][j];
            if v % det != 0 {
                return None;
            }
            *cell = v / det;
        }
    }
    let dm = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    (dm == 1 || dm == -1).then_some(m)
}

/// Decides whether two balls are linearly equivalent by an integral
/// unimodular matrix, i.e. whether the marked length spectra agree.
pub fn marked_equal(b1: &UnitBall, b2: &UnitBall) -> Gl2Match {
    let e1 = b1.extremal_points();
    let e2 = b2.extremal_points();
    if e1.len() != e2.len() {
        return Gl2Match { matrix: None };
    }
    let target: HashMap<HomologyClass, &Weight> = e2.iter().map(|(c, w)| (*c, w)).collect();
    let t = e1.len();
    let (v0, v1) = (&e1[0], &e1[1]);
    for j in 0..t {
        let a = &e2[j];
        let b = &e2[(j + 1) % t];
        for (p0, p1) in [(a, b), (b, a)] {
            // a primitive image of a primitive class forces equal weights
            if !same_value(&v0.1, b1.scale(), &p0.1, b2.scale()) || !same_value(&v1.1, b1.scale(), &p1.1, b2.scale()) {
                continue;
            }
            let Some(m) = solve_map(v0.0, v1.0, p0.0, p1.0) else { continue };
            let maps_all = e1.iter().all(|(c, w)| match target.get(&c.transform(m)) {
                Some(w2) => same_value(w, b1.scale(), w2, b2.scale()),
                None => false,
            });
            if maps_all {
                return Gl2Match { matrix: Some(m) };
            }
        }
    }
    Gl2Match { matrix: None }
}

/// The generating function of the unmarked spectrum in factored form: one
/// exponent vector per entry of `H`, cyclically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFun {
    /// `l_i` for the full list `H`.
    pub exponents: Vec<Vec<i64>>,
    /// Exponents are values times `scale`.
    pub scale: u64,
    pub system: Option<GeneratorSystem>,
}

pub fn generating_function(ball: &UnitBall) -> GenFun {
    let exponents: Vec<Vec<i64>> = ball.h().iter().map(|e| e.weight.coeffs().to_vec()).collect();
    let system = ball.h()[0].weight.system().map(|s| (**s).clone());
    GenFun { exponents, scale: ball.scale(), system }.reduced()
}

impl GenFun {
    pub fn rank(&self) -> usize {
        self.exponents[0].len()
    }

    pub fn terms(&self) -> usize {
        self.exponents.len()
    }

    /// Divides exponents and scale by their common factor.
    pub fn reduced(mut self) -> GenFun {
        let mut g = self.scale as i64;
        for e in &self.exponents {
            for &c in e {
                g = g.gcd(&c);
            }
        }
        let g = g.max(1);
        for e in &mut self.exponents {
            for c in e.iter_mut() {
                *c /= g;
            }
        }
        self.scale /= g as u64;
        self
    }

    pub fn rescaled(&self, scale: u64) -> GenFun {
        assert_eq!(scale % self.scale, 0);
        let k = (scale / self.scale) as i64;
        GenFun {
            exponents: self.exponents.iter().map(|e| e.iter().map(|&c| c * k).collect()).collect(),
            scale,
            system: self.system.clone(),
        }
    }

    /// `sum_i |l_i|_1`, a bound on the total degrees in the cleared form.
    pub fn degree_bound(&self) -> u64 {
        self.exponents.iter().flat_map(|e| e.iter()).map(|c| c.unsigned_abs()).sum()
    }

    /// Numerator and denominator with non-negative exponents, keeping the
    /// denominator as a product of binomials `z^{l^-} - z^{l^+}`.
    pub fn cleared(&self) -> ClearedForm {
        let r = self.rank();
        let t = self.terms();
        let (plus, minus): (Vec<Vec<i64>>, Vec<Vec<i64>>) = self
            .exponents
            .iter()
            .map(|e| (e.iter().map(|&c| c.max(0)).collect(), e.iter().map(|&c| (-c).max(0)).collect()))
            .unzip();
        let mut den = Dense::one(r);
        for i in 0..t {
            den = den.mul_binomial(&minus[i], &plus[i]);
        }
        let mut num = Dense::zero(r);
        for i in 0..t {
            let n = (i + 1) % t;
            let lead: Vec<i64> = (0..r).map(|j| plus[n][j] + minus[i][j]).collect();
            let mut p = Dense::monomial(&lead);
            for j in 0..t {
                if j != i && j != n {
                    p = p.mul_binomial(&minus[j], &plus[j]);
                }
            }
            num = num.add(&p);
        }
        ClearedForm { num, den, binomials: minus.into_iter().zip(plus).collect() }
    }

    /// `1 + F` as a quotient of polynomials.
    pub fn ehrhart_form(&self) -> ClearedForm {
        let mut c = self.cleared();
        c.num = c.num.add(&c.den);
        c
    }

    /// Value of `F` at an integer point, or `None` if a factor `1 - v^l`
    /// vanishes or a negative power of zero occurs.
    pub fn eval(&self, v: &[BigInt]) -> Option<BigRational> {
        let pw: Vec<BigRational> = self.exponents.iter().map(|e| power(v, e)).collect::<Option<_>>()?;
        let one = BigRational::one();
        let t = self.terms();
        let mut acc = BigRational::zero();
        for i in 0..t {
            let n = (i + 1) % t;
            let d = (&one - &pw[i]) * (&one - &pw[n]);
            if d.is_zero() {
                return None;
            }
            acc += &pw[n] / d;
        }
        Some(acc)
    }

    /// Coefficients of `z^0 .. z^{k-1}` of `1 + F` for a single positive
    /// generator, by power-series division of the cleared form.
    pub fn series(&self, k: usize) -> Result<Vec<BigInt>> {
        if self.rank() != 1 || self.exponents.iter().any(|e| e[0] <= 0) {
            return Err(Error::Unsupported("series needs one generator and positive exponents".into()));
        }
        let c = self.ehrhart_form();
        let num = c.num.coefficients_1d();
        let den = c.den.coefficients_1d();
        let d0 = den[0].clone();
        debug_assert!(d0.is_one() || (-&d0).is_one());
        let mut s: Vec<BigInt> = Vec::with_capacity(k);
        for n in 0..k {
            let mut v = num.get(n).cloned().unwrap_or_default();
            for j in 1..=n.min(den.len().saturating_sub(1)) {
                v -= &den[j] * &s[n - j];
            }
            s.push(v / &d0);
        }
        Ok(s)
    }
}

/// `v^e` with integer exponents (negative powers allowed for non-zero `v_j`).
fn power(v: &[BigInt], e: &[i64]) -> Option<BigRational> {
    let mut acc = BigRational::one();
    for (x, &k) in v.iter().zip(e) {
        if k < 0 && x.is_zero() {
            return None;
        }
        let p = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            acc *= BigRational::from_integer(p);
        } else {
            acc /= BigRational::from_integer(p);
        }
    }
    Some(acc)
}

/// Brings two generating functions to one exponent scale.
pub fn jointly_scaled(f1: &GenFun, f2: &GenFun) -> Result<(GenFun, GenFun)> {
    if f1.system != f2.system || f1.rank() != f2.rank() {
        return Err(Error::Invalid("generating functions use different generator systems".into()));
    }
    let (a, b) = (f1.clone().reduced(), f2.clone().reduced());
    let l = a.scale.lcm(&b.scale);
    Ok((a.rescaled(l), b.rescaled(l)))
}

/// Dense polynomial with non-negative exponents in `r` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    /// Degree bound plus one, per variable.
    dims: Vec<usize>,
    coeffs: Vec<BigInt>,
}

impl Dense {
    fn zero(r: usize) -> Self {
        Dense { dims: vec![1; r], coeffs: vec![BigInt::zero()] }
    }

    fn one(r: usize) -> Self {
        Dense { dims: vec![1; r], coeffs: vec![BigInt::one()] }
    }

    fn monomial(e: &[i64]) -> Self {
        let dims: Vec<usize> = e.iter().map(|&k| k as usize + 1).collect();
        let mut p = Dense { coeffs: vec![BigInt::zero(); dims.iter().product()], dims };
        let i = p.index(&e.iter().map(|&k| k as usize).collect::<Vec<_>>());
        p.coeffs[i] = BigInt::one();
        p
    }

    fn index(&self, e: &[usize]) -> usize {
        e.iter().zip(&self.dims).fold(0, |acc, (&k, &d)| acc * d + k)
    }

    fn exponent(&self, mut i: usize) -> Vec<usize> {
        let mut e = vec![0; self.dims.len()];
        for j in (0..self.dims.len()).rev() {
            e[j] = i % self.dims[j];
            i /= self.dims[j];
        }
        e
    }

    fn resized(&self, dims: &[usize]) -> Dense {
        let mut out = Dense { dims: dims.to_vec(), coeffs: vec![BigInt::zero(); dims.iter().product()] };
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let j = out.index(&self.exponent(i));
                out.coeffs[j] = c.clone();
            }
        }
        out
    }

    /// `self * (z^a - z^b)`.
    fn mul_binomial(&self, a: &[i64], b: &[i64]) -> Dense {
        let dims: Vec<usize> = (0..self.dims.len()).map(|j| self.dims[j] + a[j].max(b[j]) as usize).collect();
        let mut out = Dense { dims, coeffs: Vec::new() };
        out.coeffs = vec![BigInt::zero(); out.dims.iter().product()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.exponent(i);
            let ea: Vec<usize> = e.iter().zip(a).map(|(&x, &y)| x + y as usize).collect();
            let eb: Vec<usize> = e.iter().zip(b).map(|(&x, &y)| x + y as usize).collect();
            let (ia, ib) = (out.index(&ea), out.index(&eb));
            out.coeffs[ia] += c;
            out.coeffs[ib] -= c;
        }
        out
    }

    fn add(&self, o: &Dense) -> Dense {
        let dims: Vec<usize> = self.dims.iter().zip(&o.dims).map(|(&x, &y)| x.max(y)).collect();
        let mut out = self.resized(&dims);
        for (i, c) in o.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let j = out.index(&o.exponent(i));
                out.coeffs[j] += c;
            }
        }
        out
    }

    fn neg(&self) -> Dense {
        Dense { dims: self.dims.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `(exponent, coefficient)` pairs of the non-zero terms.
    pub fn terms(&self) -> Vec<(Vec<usize>, BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.exponent(i), c.clone())).collect()
    }

    pub fn eval(&self, v: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in self.terms() {
            let mut m = c;
            for (x, k) in v.iter().zip(e) {
                m *= num_traits::pow(x.clone(), k);
            }
            acc += m;
        }
        acc
    }

    /// Coefficients by degree, for one variable.
    pub fn coefficients_1d(&self) -> Vec<BigInt> {
        assert_eq!(self.dims.len(), 1);
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        c
    }

    /// From coefficients by degree, for one variable.
    pub fn from_1d(c: &[i64]) -> Dense {
        Dense { dims: vec![c.len().max(1)], coeffs: c.iter().map(|&x| BigInt::from(x)).collect() }
    }

    fn mul(&self, o: &Dense) -> Dense {
        let dims: Vec<usize> = self.dims.iter().zip(&o.dims).map(|(&x, &y)| x + y - 1).collect();
        let mut out = Dense { dims, coeffs: vec![] };
        out.coeffs = vec![BigInt::zero(); out.dims.iter().product()];
        let ot = o.terms();
        for (e, c) in self.terms() {
            for (f, d) in &ot {
                let g: Vec<usize> = e.iter().zip(f).map(|(x, y)| x + y).collect();
                let i = out.index(&g);
                out.coeffs[i] += &c * d;
            }
        }
        out
    }
}

/// `num / den` with `den` the product of `binomials` (`(a, b)` for `z^a - z^b`).
#[derive(Clone, Debug)]
pub struct ClearedForm {
    pub num: Dense,
    pub den: Dense,
    binomials: Vec<(Vec<i64>, Vec<i64>)>,
}

impl ClearedForm {
    fn times_den_of(&self, o: &ClearedForm) -> Dense {
        let mut p = self.num.clone();
        for (a, b) in &o.binomials {
            p = p.mul_binomial(a, b);
        }
        p
    }

    /// `num * o.den - o.num * den`, zero exactly when the functions agree.
    pub fn difference(&self, o: &ClearedForm) -> Dense {
        self.times_den_of(o).add(&o.times_den_of(self).neg())
    }

    /// Equality with an explicit quotient of polynomials.
    pub fn equals_quotient(&self, num: &Dense, den: &Dense) -> bool {
        self.num.mul(den).add(&num.mul(&self.den).neg()).is_zero()
    }
}

/// Default cap on the number of generators for dense expansion.
pub const DENSE_RANK_CAP: usize = 2;

/// Exact comparison of `F_1` and `F_2` by dense expansion of the
/// cross-multiplied cleared forms.
pub fn unmarked_equal_det(f1: &GenFun, f2: &GenFun, rank_cap: usize) -> Result<bool> {
    let (a, b) = jointly_scaled(f1, f2)?;
    if a.rank() > rank_cap {
        return Err(Error::Unsupported(format!(
            "{} generators exceed the dense expansion cap of {rank_cap}; use the randomized test",
            a.rank()
        )));
    }
    Ok(a.cleared().difference(&b.cleared()).is_zero())
}

/// Outcome of the randomized identity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomizedVerdict {
    pub different: bool,
    /// A point where the two functions differ.
    pub witness: Option<Vec<BigInt>>,
    pub trials: u32,
    pub seed: u64,
    /// Total degree bound `d`; samples are drawn from `{-d+1, ..., d}`.
    pub degree_bound: u64,
}

impl RandomizedVerdict {
    /// Probability that "probably equal" is wrong.
    pub fn error_bound(&self) -> String {
        if self.different {
            "0".into()
        } else {
            format!("2^-{}", self.trials)
        }
    }
}

fn trial(a: &GenFun, b: &GenFun, d: u64, seed: u64, index: u32) -> Option<Vec<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(index));
    let lo = -(d as i64) + 1;
    let hi = d as i64;
    loop {
        let v: Vec<BigInt> = (0..a.rank()).map(|_| BigInt::from(rng.gen_range(lo..=hi))).collect();
        let (Some(x), Some(y)) = (a.eval(&v), b.eval(&v)) else { continue };
        return (x != y).then_some(v);
    }
}

/// Randomized comparison by evaluation at random integer points. A
/// difference is certain; agreement is wrong with probability at most
/// `2^-trials`. Trial `j` uses stream `j` of the seeded generator, so the
/// verdict does not depend on `threads`.
pub fn unmarked_equal_rand(f1: &GenFun, f2: &GenFun, trials: u32, seed: u64, threads: usize) -> Result<RandomizedVerdict> {
    if trials < 1 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let (a, b) = jointly_scaled(f1, f2)?;
    let d = (a.degree_bound() + b.degree_bound()).max(1);
    let threads = threads.clamp(1, trials as usize);
    let mut found: Vec<(u32, Vec<BigInt>)> = Vec::new();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let (a, b) = (&a, &b);
                s.spawn(move || {
                    (0..trials)
                        .filter(|j| *j as usize % threads == k)
                        .filter_map(|j| trial(a, b, d, seed, j).map(|w| (j, w)))
                        .next()
                })
            })
            .collect();
        for h in handles {
            if let Some(x) = h.join().expect("trial thread") {
                found.push(x);
            }
        }
    });
    found.sort();
    let witness = found.into_iter().next().map(|(_, w)| w);
    Ok(RandomizedVerdict { different: witness.is_some(), witness, trials, seed, degree_bound: d })
}

/// Re-checks a witness: the cleared difference is non-zero there.
pub fn verify_witness(f1: &GenFun, f2: &GenFun, v: &[BigInt]) -> Result<bool> {
    let (a, b) = jointly_scaled(f1, f2)?;
    Ok(!a.cleared().difference(&b.cleared()).eval(v).is_zero())
}

/// Unit of the exponents as a real value `1 / scale`.
pub fn exponent_unit(f: &GenFun) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(f.scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn gf(g: &crate::EmbeddedGraph) -> GenFun {
        generating_function(&UnitBall::new(g).unwrap())
    }

    #[test]
    fn bouquet_form() {
        let f = gf(&fixtures::bouquet((1, 1), (1, 1)));
        assert_eq!(f.terms(), 4);
        // (1+z)^2 / (1-z)^2
        let e = f.ehrhart_form();
        assert!(e.equals_quotient(&Dense::from_1d(&[1, 2, 1]), &Dense::from_1d(&[1, -2, 1])));
        let s: Vec<i64> = f.series(5).unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(s, vec![1, 4, 8, 12, 16]);
    }

    #[test]
    fn single_cone_series() {
        let f = GenFun { exponents: vec![vec![1], vec![1]], scale: 1, system: None };
        // two cones, each z + 2z^2 + 3z^3 + ...
        let s: Vec<i64> = f.series(5).unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(s, vec![1, 2, 4, 6, 8]);
    }

    #[test]
    fn grids_differ() {
        let (a, b) = (gf(&fixtures::grid(3, 3)), gf(&fixtures::grid(3, 4)));
        assert!(unmarked_equal_det(&a, &a, 2).unwrap());
        assert!(!unmarked_equal_det(&a, &b, 2).unwrap());
        let v = unmarked_equal_rand(&a, &b, 20, 7, 2).unwrap();
        assert!(v.different);
        assert!(verify_witness(&a, &b, v.witness.as_ref().unwrap()).unwrap());
        let same = unmarked_equal_rand(&a, &a, 5, 7, 1).unwrap();
        assert!(!same.different);
        assert_eq!(same.error_bound(), "2^-5");
    }

    #[test]
    fn marked_identity_and_transform() {
        let g = fixtures::staircase(3);
        let ball = UnitBall::new(&g).unwrap();
        assert_eq!(marked_equal(&ball, &ball).matrix, Some([[1, 0], [0, 1]]));
        let m0 = [[2, 1], [1, 1]];
        let moved = ball.transformed(&g, m0).unwrap();
        let m = marked_equal(&ball, &moved).matrix.unwrap();
        for (c, _) in ball.extremal_points() {
            assert!(moved.extremal_points().iter().any(|(d, _)| *d == c.transform(m)));
        }
        let other = UnitBall::new(&fixtures::grid(3, 4)).unwrap();
        assert!(!marked_equal(&ball, &other).is_present());
    }

    #[test]
    fn rank_cap() {
        let f = GenFun { exponents: vec![vec![1, 0, 0]; 4], scale: 1, system: None };
        assert!(matches!(unmarked_equal_det(&f, &f, 2), Err(Error::Unsupported(_))));
    }
}
