//! Gaussian rationals, truncated power series in the deformation parameters,
//! and monomial ideals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussRat::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    /// `re_num/re_den + (im_num/im_den)·i`.
    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussRat::new(BigRational::new(re_num.into(), re_den.into()), BigRational::new(im_num.into(), im_den.into()))
    }

    pub fn zero() -> Self {
        GaussRat::int(0)
    }

    pub fn one() -> Self {
        GaussRat::int(1)
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussRat::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        GaussRat::new(&self.re * &k, &self.im * &k)
    }

    /// True when the number is a negative real; used to print `a - b` instead of `a + -b`.
    pub(crate) fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }

    /// Renders without parentheses. Both parts present gives `a/b+c/d*i`.
    fn render_bare(&self) -> String {
        let re = (!self.re.is_zero()).then(|| self.re.to_string());
        let im = if self.im.is_zero() {
            None
        } else if self.im.is_one() {
            Some("i".to_string())
        } else if (-self.im.clone()).is_one() {
            Some("-i".to_string())
        } else {
            Some(format!("{}*i", self.im))
        };
        match (re, im) {
            (None, None) => "0".to_string(),
            (Some(r), None) => r,
            (None, Some(i)) => i,
            (Some(r), Some(i)) => {
                if i.starts_with('-') {
                    format!("{r}{i}")
                } else {
                    format!("{r}+{i}")
                }
            }
        }
    }

    /// Rendering as a multiplicative factor: parenthesized when both parts are present.
    pub(crate) fn render_factor(&self) -> String {
        if !self.re.is_zero() && !self.im.is_zero() {
            format!("({})", self.render_bare())
        } else {
            self.render_bare()
        }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_bare())
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::int(n)
    }
}

impl From<GaussInt> for GaussRat {
    fn from(z: GaussInt) -> Self {
        GaussRat::new(BigRational::from_integer(z.re.into()), BigRational::from_integer(z.im.into()))
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn div(self, o: &GaussRat) -> GaussRat {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRat {
            type Output = GaussRat;
            fn $m(self, o: GaussRat) -> GaussRat {
                (&self).$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, o: &GaussRat) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, o: &GaussRat) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

/// Gaussian integer `re + im·i`; torus frequencies live here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };

    pub fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |q: i64| match q {
            1 => "i".to_string(),
            -1 => "-i".to_string(),
            q => format!("{q}i"),
        };
        match (self.re, self.im) {
            (p, 0) => write!(f, "{p}"),
            (0, q) => f.write_str(&imag(q)),
            (p, q) if q > 0 => write!(f, "{p}+{}", imag(q)),
            (p, q) => write!(f, "{p}{}", imag(q)),
        }
    }
}

/// Exponent vector of a monomial in `t₁..t_m`, ordered graded-lexicographically
/// (total degree first, then larger powers of earlier parameters first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TMono(pub Vec<u32>);

impl TMono {
    pub fn one(m: usize) -> Self {
        TMono(vec![0; m])
    }

    /// `t_j` for 1-based `j`.
    pub fn var(m: usize, j: usize) -> Self {
        let mut e = vec![0; m];
        e[j - 1] = 1;
        TMono(e)
    }

    pub fn power(m: usize, j: usize, k: u32) -> Self {
        let mut e = vec![0; m];
        e[j - 1] = k;
        TMono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &TMono) -> TMono {
        TMono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &TMono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub(crate) fn render(&self) -> String {
        let m = self.0.len();
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                let name = if m == 1 { "t".to_string() } else { format!("t{}", j + 1) };
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for TMono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| o.0.cmp(&self.0))
    }
}

impl PartialOrd for TMono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for TMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Truncated power series in `t₁..t_m`; terms of total degree above `order` are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    m: usize,
    order: u32,
    terms: BTreeMap<TMono, GaussRat>,
}

impl TSeries {
    pub fn zero(m: usize, order: u32) -> Self {
        TSeries { m, order, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, order: u32, c: GaussRat) -> Self {
        TSeries::monomial(m, order, TMono::one(m), c)
    }

    pub fn monomial(m: usize, order: u32, mono: TMono, c: GaussRat) -> Self {
        let mut s = TSeries::zero(m, order);
        s.add_term(mono, c);
        s
    }

    pub fn from_terms(m: usize, order: u32, terms: impl IntoIterator<Item = (TMono, GaussRat)>) -> Self {
        let mut s = TSeries::zero(m, order);
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<TMono, GaussRat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &TMono) -> GaussRat {
        self.terms.get(mono).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn add_term(&mut self, mono: TMono, c: GaussRat) {
        assert_eq!(mono.0.len(), self.m, "parameter count mismatch");
        if mono.degree() > self.order || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono.clone()).or_insert_with(GaussRat::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    fn check_compatible(&self, o: &TSeries) -> Result<()> {
        if self.m != o.m || self.order != o.order {
            return Err(Error::ParamMismatch { left: (self.m, self.order), right: (o.m, o.order) });
        }
        Ok(())
    }

    pub fn add(&self, o: &TSeries) -> Result<TSeries> {
        self.check_compatible(o)?;
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn scale(&self, c: &GaussRat) -> TSeries {
        TSeries::from_terms(self.m, self.order, self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    /// Exact truncated product.
    pub fn mul(&self, o: &TSeries) -> Result<TSeries> {
        self.check_compatible(o)?;
        let mut r = TSeries::zero(self.m, self.order);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                if ka.degree() + kb.degree() <= self.order {
                    r.add_term(ka.mul(kb), ca * cb);
                }
            }
        }
        Ok(r)
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_sum(self.terms.iter().map(|(k, c)| (c, k.render()))))
    }
}

/// Joins `scalar·body` terms, printing `a - b` for negative real scalars.
pub(crate) fn render_sum<'a>(terms: impl Iterator<Item = (&'a GaussRat, String)>) -> String {
    let mut out = String::new();
    for (idx, (c, body)) in terms.enumerate() {
        let (neg, c) = if c.is_negative_real() { (true, -c) } else { (false, c.clone()) };
        let piece = if body == "1" {
            c.render_factor()
        } else if c.is_one() {
            body
        } else {
            format!("{}*{}", c.render_factor(), body)
        };
        match (idx, neg) {
            (0, false) => out.push_str(&piece),
            (0, true) => {
                out.push('-');
                out.push_str(&piece);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&piece);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&piece);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `series_mul` with the error contract spelled out.
pub fn series_mul(a: &TSeries, b: &TSeries) -> Result<TSeries> {
    a.mul(b)
}

/// Monomial ideal in `C[[t₁..t_m]]` kept as a minimal generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    m: usize,
    gens: Vec<TMono>,
}

impl MonomialIdeal {
    pub fn new(m: usize, gens: impl IntoIterator<Item = TMono>) -> Self {
        let mut all: Vec<TMono> = gens.into_iter().collect();
        for g in &all {
            assert_eq!(g.0.len(), m, "generator has wrong parameter count");
        }
        all.sort();
        all.dedup();
        let mut minimal: Vec<TMono> = Vec::new();
        // sorted by degree, so any divisor of g is already in `minimal`
        for g in all {
            if !minimal.iter().any(|h| h.divides(&g)) {
                minimal.push(g);
            }
        }
        MonomialIdeal { m, gens: minimal }
    }

    /// The zero ideal: congruence modulo it is equality.
    pub fn zero(m: usize) -> Self {
        MonomialIdeal { m, gens: Vec::new() }
    }

    /// `𝔪 = ⟨t₁, …, t_m⟩`.
    pub fn maximal(m: usize) -> Self {
        MonomialIdeal::new(m, (1..=m).map(|j| TMono::var(m, j)))
    }

    /// `𝔪^k`, generated by all monomials of degree `k`.
    pub fn maximal_power(m: usize, k: u32) -> Self {
        let mut gens = Vec::new();
        monomials_of_degree(m, k, &mut vec![0; m], 0, &mut gens);
        MonomialIdeal::new(m, gens)
    }

    pub fn principal(mono: TMono) -> Self {
        let m = mono.0.len();
        MonomialIdeal::new(m, [mono])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> &[TMono] {
        &self.gens
    }

    pub fn contains(&self, mono: &TMono) -> bool {
        self.gens.iter().any(|g| g.divides(mono))
    }

    /// `𝔪·A`.
    pub fn times_maximal(&self) -> MonomialIdeal {
        let gens = self.gens.iter().flat_map(|g| (1..=self.m).map(move |j| g.mul(&TMono::var(self.m, j))));
        MonomialIdeal::new(self.m, gens)
    }

    /// Monomials spanning `A/𝔪A`: exactly the minimal generators.
    pub fn quotient_basis(&self) -> Result<Vec<TMono>> {
        if self.gens.iter().any(TMono::is_one) {
            return Err(Error::NotInMaximalIdeal);
        }
        Ok(self.gens.clone())
    }

    pub fn reduce(&self, a: &TSeries) -> TSeries {
        assert_eq!(a.m(), self.m, "parameter count mismatch");
        TSeries::from_terms(
            a.m(),
            a.order(),
            a.terms().iter().filter(|(k, _)| !self.contains(k)).map(|(k, c)| (k.clone(), c.clone())),
        )
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(TMono::render).collect();
        write!(f, "<{}>", g.join(", "))
    }
}

fn monomials_of_degree(m: usize, k: u32, cur: &mut Vec<u32>, pos: usize, out: &mut Vec<TMono>) {
    if pos + 1 == m {
        cur[pos] = k;
        out.push(TMono(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in 0..=k {
        cur[pos] = e;
        monomials_of_degree(m, k - e, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

/// Drops every term whose monomial lies in `ideal`.
pub fn ideal_reduce(a: &TSeries, ideal: &MonomialIdeal) -> TSeries {
    ideal.reduce(a)
}

pub fn ideal_quotient_basis(ideal: &MonomialIdeal) -> Result<Vec<TMono>> {
    ideal.quotient_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: u32) -> TMono {
        TMono(vec![k])
    }

    fn s1(order: u32, terms: &[(u32, GaussRat)]) -> TSeries {
        TSeries::from_terms(1, order, terms.iter().map(|(k, c)| (t(*k), c.clone())))
    }

    #[test]
    fn telescoping_product() {
        let a = s1(3, &[(0, 1.into()), (1, 1.into())]);
        let b = s1(3, &[(0, 1.into()), (1, (-1).into())]);
        assert_eq!(series_mul(&a, &b).unwrap(), s1(3, &[(0, 1.into()), (2, (-1).into())]));
    }

    #[test]
    fn truncation_kills_high_degree() {
        let a = s1(3, &[(2, 1.into())]);
        assert!(series_mul(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn gaussian_product() {
        // (1+it)(1-it) = 1 + t²
        let a = s1(4, &[(0, 1.into()), (1, GaussRat::i())]);
        let b = s1(4, &[(0, 1.into()), (1, -GaussRat::i())]);
        assert_eq!(series_mul(&a, &b).unwrap(), s1(4, &[(0, 1.into()), (2, 1.into())]));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = TSeries::zero(1, 3);
        let b = TSeries::zero(1, 4);
        assert!(matches!(series_mul(&a, &b), Err(Error::ParamMismatch { .. })));
    }

    #[test]
    fn reduce_examples() {
        let sq = MonomialIdeal::principal(t(2));
        let x = s1(4, &[(0, 1.into()), (1, 1.into()), (2, 1.into())]);
        assert_eq!(ideal_reduce(&x, &sq), s1(4, &[(0, 1.into()), (1, 1.into())]));

        let two = MonomialIdeal::new(2, [TMono(vec![2, 0]), TMono(vec![0, 2])]);
        let x = TSeries::monomial(2, 4, TMono(vec![1, 1]), 1.into());
        assert_eq!(ideal_reduce(&x, &two), x);

        let cube = MonomialIdeal::principal(t(3));
        let x = s1(4, &[(3, 3.into()), (4, 1.into())]);
        assert!(ideal_reduce(&x, &cube).is_zero());
    }

    #[test]
    fn quotient_basis_examples() {
        assert_eq!(MonomialIdeal::principal(t(4)).quotient_basis().unwrap(), vec![t(4)]);
        let m2 = MonomialIdeal::maximal(2);
        assert_eq!(m2.quotient_basis().unwrap(), vec![TMono(vec![1, 0]), TMono(vec![0, 1])]);
        let a = MonomialIdeal::new(2, [TMono(vec![2, 0]), TMono(vec![1, 1])]);
        assert_eq!(a.quotient_basis().unwrap(), vec![TMono(vec![2, 0]), TMono(vec![1, 1])]);
        let unit = MonomialIdeal::principal(TMono::one(1));
        assert!(matches!(unit.quotient_basis(), Err(Error::NotInMaximalIdeal)));
    }

    #[test]
    fn quotient_basis_matches_enumeration() {
        // monomials of degree ≤ 3 lying in A but not in 𝔪A
        let a = MonomialIdeal::new(2, [TMono(vec![2, 0]), TMono(vec![1, 1])]);
        let ma = a.times_maximal();
        let mut found = Vec::new();
        for d in 0..=3u32 {
            for i in 0..=d {
                let mono = TMono(vec![i, d - i]);
                if a.contains(&mono) && !ma.contains(&mono) {
                    found.push(mono);
                }
            }
        }
        found.sort();
        assert_eq!(found, a.quotient_basis().unwrap());
    }

    #[test]
    fn minimality() {
        let a = MonomialIdeal::new(1, [t(3), t(2), t(5)]);
        assert_eq!(a.generators(), &[t(2)]);
        assert_eq!(MonomialIdeal::maximal_power(2, 2).generators().len(), 3);
    }

    #[test]
    fn rendering() {
        assert_eq!(GaussRat::complex(1, 2, 3, 4).to_string(), "1/2+3/4*i");
        assert_eq!(GaussRat::complex(0, 1, -3, 4).to_string(), "-3/4*i");
        assert_eq!(GaussRat::complex(2, 1, -1, 1).to_string(), "2-i");
        assert_eq!(GaussRat::zero().to_string(), "0");
        let a = s1(4, &[(0, 1.into()), (2, (-1).into()), (1, GaussRat::complex(1, 1, 1, 2))]);
        assert_eq!(a.to_string(), "1 + (1+1/2*i)*t - t^2");
        assert_eq!(GaussInt::new(1, -1).to_string(), "1-i");
        assert_eq!(GaussInt::new(0, 2).to_string(), "2i");
        let m = TSeries::monomial(2, 3, TMono(vec![2, 1]), GaussRat::ratio(-1, 3));
        assert_eq!(m.to_string(), "-1/3*t1^2*t2");
    }
}
