//! `(p,q)`-forms with values in the trivial holomorphic frame `∂/∂v_a`, with
//! series coefficients. `dv` factors always precede `dv̄` factors in a stored term,
//! and all signs are computed in the single exterior algebra on
//! `dv₁..dv_n, dv̄₁..dv̄_n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::coef::Coef;
use crate::error::{Error, Result};
use crate::funring::{Basis, RingKind};
use crate::scalars::{GaussRat, MonomialIdeal, TMono};

/// Model geometry: ring kind, complex dimension `n`, parameter count `m`, truncation order `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Geometry {
    pub kind: RingKind,
    pub n: usize,
    pub m: usize,
    pub order: u32,
}

impl Geometry {
    pub fn chart(n: usize, m: usize, order: u32) -> Self {
        Geometry { kind: RingKind::Chart, n, m, order }
    }

    pub fn torus(n: usize, m: usize, order: u32) -> Self {
        Geometry { kind: RingKind::Torus, n, m, order }
    }

    /// Polydisk chart, `n = 1`, `m = 1`, `N = 3`.
    pub fn fix_ch() -> Self {
        Geometry::chart(1, 1, 3)
    }

    /// Flat 2-torus, `m = 1`, `N = 4`.
    pub fn fix_t2() -> Self {
        Geometry::torus(2, 1, 4)
    }

    pub fn with_order(self, order: u32) -> Self {
        Geometry { order, ..self }
    }

    pub fn unit_basis(&self) -> Basis {
        Basis::unit(self.kind, self.n)
    }
}

/// Index data of a term: `dv^I ∧ dv̄^J ⊗ ∂/∂v_a`, with `I`, `J` as bitmasks
/// (bit `j` is coordinate `j+1`) and `a` 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FormKey {
    pub hol: u32,
    pub anti: u32,
    pub vec: Option<u8>,
}

impl FormKey {
    pub fn new(hol: u32, anti: u32, vec: Option<u8>) -> Self {
        FormKey { hol, anti, vec }
    }

    pub fn p(&self) -> u32 {
        self.hol.count_ones()
    }

    pub fn q(&self) -> u32 {
        self.anti.count_ones()
    }

    pub fn degree(&self) -> u32 {
        self.p() + self.q()
    }

    pub fn hol_indices(&self) -> Vec<usize> {
        bits(self.hol)
    }

    pub fn anti_indices(&self) -> Vec<usize> {
        bits(self.anti)
    }

    pub fn scalar(&self) -> FormKey {
        FormKey { vec: None, ..*self }
    }
}

/// Lexicographic order on equal-size index sets, read off the lowest differing bit.
fn cmp_sets(a: u32, b: u32) -> Ordering {
    let x = a ^ b;
    if x == 0 {
        return Ordering::Equal;
    }
    let low = x & x.wrapping_neg();
    if a & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl Ord for FormKey {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.p(), self.q())
            .cmp(&(o.p(), o.q()))
            .then_with(|| cmp_sets(self.hol, o.hol))
            .then_with(|| cmp_sets(self.anti, o.anti))
            .then_with(|| self.vec.cmp(&o.vec))
    }
}

impl PartialOrd for FormKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub(crate) fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|j| mask & (1 << j) != 0).collect()
}

/// Number of pairs `(x ∈ a, y ∈ b)` with `x > y`.
pub(crate) fn inversions(a: u32, b: u32) -> u32 {
    let mut count = 0;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if y >= 31 { 0 } else { a & !((1u32 << (y + 1)) - 1) };
        count += above.count_ones();
    }
    count
}

/// `(dv^I₁ dv̄^J₁) ∧ (dv^I₂ dv̄^J₂)` as `(negate?, key)`; `None` when it vanishes.
/// Vector values are merged by the caller.
pub(crate) fn wedge_scalar_keys(a: FormKey, b: FormKey) -> Option<(bool, u32, u32)> {
    if a.hol & b.hol != 0 || a.anti & b.anti != 0 {
        return None;
    }
    let swaps = a.q() * b.p() + inversions(a.hol, b.hol) + inversions(a.anti, b.anti);
    Some((swaps % 2 == 1, a.hol | b.hol, a.anti | b.anti))
}

/// Un-normalized term used as input to [`canonicalize`]: `coef·dv^{hol}∧dv̄^{anti}⊗∂/∂v_{vec}`
/// with 1-based indices in the listed order.
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub coef: Coef,
    pub hol: Vec<usize>,
    pub anti: Vec<usize>,
    pub vec: Option<usize>,
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
fn sort_sign(idx: &[usize]) -> Option<(bool, u32)> {
    let mut mask = 0u32;
    let mut neg = false;
    for (pos, &i) in idx.iter().enumerate() {
        assert!(i >= 1 && i <= 32, "index out of range");
        let bit = 1u32 << (i - 1);
        if mask & bit != 0 {
            return None;
        }
        mask |= bit;
        // earlier entries larger than i are inversions
        let larger = idx[..pos].iter().filter(|&&x| x > i).count();
        neg ^= larger % 2 == 1;
    }
    Some((neg, mask))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VForm {
    geom: Geometry,
    terms: BTreeMap<FormKey, Coef>,
}

impl VForm {
    pub fn zero(geom: Geometry) -> Self {
        VForm { geom, terms: BTreeMap::new() }
    }

    pub fn geom(&self) -> Geometry {
        self.geom
    }

    pub fn terms(&self) -> &BTreeMap<FormKey, Coef> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Adds `coef` at `key`, dropping anything above the truncation order.
    pub fn add_term(&mut self, key: FormKey, coef: Coef) {
        let order = self.geom.order;
        let coef = if coef.terms().keys().any(|k| k.t.degree() > order) {
            coef.filter(|k| k.t.degree() <= order)
        } else {
            coef
        };
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(slot) => {
                slot.add_assign(&coef);
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coef);
            }
        }
    }

    pub fn from_coef(geom: Geometry, key: FormKey, coef: Coef) -> Self {
        let mut r = VForm::zero(geom);
        r.add_term(key, coef);
        r
    }

    /// The constant function `c`.
    pub fn constant(geom: Geometry, c: GaussRat) -> Self {
        VForm::from_coef(geom, FormKey::default(), Coef::term(TMono::one(geom.m), geom.unit_basis(), c))
    }

    pub fn one(geom: Geometry) -> Self {
        VForm::constant(geom, GaussRat::one())
    }

    /// A single basis function times a t-monomial.
    pub fn function(geom: Geometry, f: Basis, t: TMono, c: GaussRat) -> Self {
        assert_eq!(f.kind(), geom.kind, "basis from another ring");
        VForm::from_coef(geom, FormKey::default(), Coef::term(t, f, c))
    }

    /// `t_j`, 1-based.
    pub fn t(geom: Geometry, j: usize) -> Self {
        VForm::function(geom, geom.unit_basis(), TMono::var(geom.m, j), GaussRat::one())
    }

    /// `dv_j`, 1-based.
    pub fn dv(geom: Geometry, j: usize) -> Self {
        assert!(j >= 1 && j <= geom.n, "index out of range");
        VForm::from_coef(
            geom,
            FormKey::new(1 << (j - 1), 0, None),
            Coef::term(TMono::one(geom.m), geom.unit_basis(), GaussRat::one()),
        )
    }

    /// `dv̄_j`, 1-based.
    pub fn dvb(geom: Geometry, j: usize) -> Self {
        assert!(j >= 1 && j <= geom.n, "index out of range");
        VForm::from_coef(
            geom,
            FormKey::new(0, 1 << (j - 1), None),
            Coef::term(TMono::one(geom.m), geom.unit_basis(), GaussRat::one()),
        )
    }

    /// Chart coordinate `v_j`.
    pub fn v(geom: Geometry, j: usize) -> Self {
        assert_eq!(geom.kind, RingKind::Chart, "coordinates exist on the chart only");
        let mut hol = vec![0; geom.n];
        hol[j - 1] = 1;
        VForm::function(geom, Basis::Chart { hol, anti: vec![0; geom.n] }, TMono::one(geom.m), GaussRat::one())
    }

    /// Chart coordinate `v̄_j`.
    pub fn vb(geom: Geometry, j: usize) -> Self {
        assert_eq!(geom.kind, RingKind::Chart, "coordinates exist on the chart only");
        let mut anti = vec![0; geom.n];
        anti[j - 1] = 1;
        VForm::function(geom, Basis::Chart { hol: vec![0; geom.n], anti }, TMono::one(geom.m), GaussRat::one())
    }

    /// Attaches the value `∂/∂v_a` (1-based) to every term.
    pub fn with_value(&self, a: usize) -> Result<VForm> {
        if a == 0 || a > self.geom.n {
            return Err(Error::InvalidInput(format!("vector index {a} out of range")));
        }
        if self.is_vector_valued() {
            return Err(Error::DegreeMismatch);
        }
        let mut r = VForm::zero(self.geom);
        for (k, c) in &self.terms {
            r.add_term(FormKey { vec: Some((a - 1) as u8), ..*k }, c.clone());
        }
        Ok(r)
    }

    pub fn is_vector_valued(&self) -> bool {
        self.terms.keys().any(|k| k.vec.is_some())
    }

    pub fn is_scalar_valued(&self) -> bool {
        self.terms.keys().all(|k| k.vec.is_none())
    }

    /// True when every term is `A^{p,q}`.
    pub fn is_bidegree(&self, p: u32, q: u32) -> bool {
        self.terms.keys().all(|k| k.p() == p && k.q() == q)
    }

    /// Distinct total form degrees present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(FormKey::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn degree_part(&self, deg: u32) -> VForm {
        self.filter_keys(|k| k.degree() == deg)
    }

    pub fn filter_keys(&self, mut keep: impl FnMut(&FormKey) -> bool) -> VForm {
        VForm {
            geom: self.geom,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn map_coefs(&self, mut f: impl FnMut(&Coef) -> Coef) -> VForm {
        let mut r = VForm::zero(self.geom);
        for (k, c) in &self.terms {
            r.add_term(*k, f(c));
        }
        r
    }

    fn check(&self, o: &VForm) {
        assert_eq!(self.geom, o.geom, "forms live on different geometries");
    }

    pub fn add(&self, o: &VForm) -> VForm {
        self.check(o);
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &VForm) -> VForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> VForm {
        self.scale(&GaussRat::int(-1))
    }

    pub fn scale(&self, s: &GaussRat) -> VForm {
        self.map_coefs(|c| c.scale(s))
    }

    /// Multiplication by a 0-form coefficient.
    pub fn mul_coef(&self, c: &Coef) -> VForm {
        let order = self.geom.order;
        self.map_coefs(|x| x.mul(c, order))
    }

    /// Graded-commutative product; at most one factor may be vector-valued.
    pub fn wedge(&self, o: &VForm) -> Result<VForm> {
        if self.geom != o.geom {
            return Err(Error::GeometryMismatch);
        }
        if self.is_vector_valued() && o.is_vector_valued() {
            return Err(Error::DegreeMismatch);
        }
        let order = self.geom.order;
        let mut r = VForm::zero(self.geom);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let Some((neg, hol, anti)) = wedge_scalar_keys(*ka, *kb) else { continue };
                let c = ca.mul(cb, order);
                let c = if neg { c.scale(&GaussRat::int(-1)) } else { c };
                r.add_term(FormKey::new(hol, anti, ka.vec.or(kb.vec)), c);
            }
        }
        Ok(r)
    }

    /// `A^{p,q}` component.
    pub fn type_project(&self, p: u32, q: u32) -> VForm {
        self.filter_keys(|k| k.p() == p && k.q() == q)
    }

    /// Restriction to the coordinate subtorus `{v_j = 0 : j ∉ S}` (1-based `S`).
    /// Indexing stays ambient: restricted forms are the ambient forms with no normal
    /// differentials and no dependence on normal coordinates. Vector values are kept.
    pub fn restrict_subtorus(&self, s: &[usize]) -> VForm {
        let tangent = mask_of(s);
        let zero: Vec<bool> = (0..self.geom.n).map(|j| tangent & (1 << j) == 0).collect();
        let mut r = VForm::zero(self.geom);
        for (k, c) in &self.terms {
            if (k.hol | k.anti) & !tangent != 0 {
                continue;
            }
            r.add_term(*k, c.map_basis(|b| b.zero_out(&zero)));
        }
        r
    }

    /// Splits by value index: `(tangential a ∈ S, normal a ∉ S, scalar-valued)`.
    pub fn split_values(&self, s: &[usize]) -> (VForm, VForm, VForm) {
        let tangent = mask_of(s);
        let tan = self.filter_keys(|k| matches!(k.vec, Some(a) if tangent & (1 << a) != 0));
        let nor = self.filter_keys(|k| matches!(k.vec, Some(a) if tangent & (1 << a) == 0));
        let sca = self.filter_keys(|k| k.vec.is_none());
        (tan, nor, sca)
    }

    /// Drops every term whose t-monomial lies in `ideal`.
    pub fn reduce(&self, ideal: &MonomialIdeal) -> VForm {
        self.map_coefs(|c| c.reduce(ideal))
    }

    /// True when every t-monomial present lies in `ideal`.
    pub fn in_ideal(&self, ideal: &MonomialIdeal) -> bool {
        self.reduce(ideal).is_zero()
    }

    /// Part of total t-degree `d`.
    pub fn t_degree_part(&self, d: u32) -> VForm {
        self.map_coefs(|c| c.filter(|k| k.t.degree() == d))
    }

    /// Part with t-monomial exactly `mono`.
    pub fn t_monomial_part(&self, mono: &TMono) -> VForm {
        self.map_coefs(|c| c.filter(|k| &k.t == mono))
    }

    /// Distinct t-monomials present.
    pub fn t_monomials(&self) -> Vec<TMono> {
        let mut v: Vec<TMono> = self.terms.values().flat_map(|c| c.terms().keys().map(|k| k.t.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// True when no term is constant in t.
    pub fn in_maximal_ideal(&self) -> bool {
        self.terms.values().all(|c| c.terms().keys().all(|k| !k.t.is_one()))
    }

    /// `∂/∂t_k` applied to coefficients, 1-based `k`.
    pub fn t_derivative(&self, k: usize) -> VForm {
        self.map_coefs(|c| c.t_derivative(k - 1))
    }

    /// Re-homes the form on a geometry with the same ring, `n` and `m` (e.g. a new order).
    pub fn with_geometry(&self, geom: Geometry) -> VForm {
        assert_eq!((geom.kind, geom.n, geom.m), (self.geom.kind, self.geom.n, self.geom.m));
        let mut r = VForm::zero(geom);
        for (k, c) in &self.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut factors: Vec<String> = bits(k.hol).iter().map(|j| format!("dv{}", j + 1)).collect();
                factors.extend(bits(k.anti).iter().map(|j| format!("dvb{}", j + 1)));
                let mut s = c.render_factor();
                if !factors.is_empty() {
                    s.push('*');
                    s.push_str(&factors.join("^"));
                }
                if let Some(a) = k.vec {
                    s.push_str(&format!("⊗d/dv{}", a + 1));
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for VForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub(crate) fn mask_of(s: &[usize]) -> u32 {
    s.iter().fold(0, |m, &j| {
        assert!(j >= 1 && j <= 32, "index out of range");
        m | 1 << (j - 1)
    })
}

/// Sorts indices (extracting permutation signs), merges duplicates, drops zeros.
pub fn canonicalize(geom: Geometry, raw: impl IntoIterator<Item = RawTerm>) -> VForm {
    let mut r = VForm::zero(geom);
    for t in raw {
        let Some((n1, hol)) = sort_sign(&t.hol) else { continue };
        let Some((n2, anti)) = sort_sign(&t.anti) else { continue };
        let vec = t.vec.map(|a| {
            assert!(a >= 1 && a <= geom.n, "vector index out of range");
            (a - 1) as u8
        });
        let coef = if n1 ^ n2 { t.coef.scale(&GaussRat::int(-1)) } else { t.coef };
        r.add_term(FormKey::new(hol, anti, vec), coef);
    }
    r
}

pub fn wedge(a: &VForm, b: &VForm) -> Result<VForm> {
    a.wedge(b)
}

pub fn type_project(w: &VForm, p: u32, q: u32) -> VForm {
    w.type_project(p, q)
}

pub fn restrict_subtorus(w: &VForm, s: &[usize]) -> VForm {
    w.restrict_subtorus(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> Geometry {
        Geometry::fix_t2()
    }

    fn w(a: &VForm, b: &VForm) -> VForm {
        a.wedge(b).unwrap()
    }

    #[test]
    fn antisymmetry() {
        let g = g2();
        assert_eq!(w(&VForm::dv(g, 1), &VForm::dv(g, 2)), w(&VForm::dv(g, 2), &VForm::dv(g, 1)).neg());
        assert!(w(&VForm::dvb(g, 1), &VForm::dvb(g, 1)).is_zero());
    }

    #[test]
    fn wedge_with_vector_value() {
        let g = g2();
        let e = Basis::character_kl(&[1, 0], &[0, 1]);
        let f = VForm::function(g, e.clone(), TMono::one(1), 1.into()).wedge(&VForm::dv(g, 1)).unwrap();
        let gval = VForm::function(g, e.clone(), TMono::var(1, 1), 1.into())
            .wedge(&VForm::dvb(g, 1))
            .unwrap()
            .with_value(2)
            .unwrap();
        let prod = w(&f, &gval);
        let want = canonicalize(
            g,
            [RawTerm {
                coef: Coef::term(TMono::var(1, 1), e.mul(&e), 1.into()),
                hol: vec![1],
                anti: vec![1],
                vec: Some(2),
            }],
        );
        assert_eq!(prod, want);
        assert!(matches!(gval.wedge(&gval), Err(Error::DegreeMismatch)));
    }

    #[test]
    fn mixed_wedge_sign() {
        // dv̄₁ ∧ dv₂ = −dv₂ ∧ dv̄₁
        let g = g2();
        let a = w(&VForm::dvb(g, 1), &VForm::dv(g, 2));
        let b = w(&VForm::dv(g, 2), &VForm::dvb(g, 1));
        assert_eq!(a, b.neg());
    }

    #[test]
    fn canonicalize_examples() {
        let g = g2();
        let one = Coef::term(TMono::one(1), g.unit_basis(), 1.into());
        let swapped = canonicalize(g, [RawTerm { coef: one.clone(), hol: vec![2, 1], anti: vec![], vec: None }]);
        assert_eq!(swapped, w(&VForm::dv(g, 1), &VForm::dv(g, 2)).neg());
        let cancel = canonicalize(
            g,
            [
                RawTerm { coef: one.clone(), hol: vec![1], anti: vec![], vec: None },
                RawTerm { coef: one.scale(&(-1).into()), hol: vec![1], anti: vec![], vec: None },
            ],
        );
        assert!(cancel.is_zero());
    }

    #[test]
    fn projection_and_render() {
        let g = g2();
        let x = VForm::dv(g, 1).add(&VForm::dvb(g, 1));
        assert_eq!(x.type_project(1, 0), VForm::dv(g, 1));
        let std = w(&VForm::dv(g, 1), &VForm::dv(g, 2));
        assert_eq!(std.to_string(), "1*dv1^dv2");
        let xi = VForm::t(g, 1).wedge(&VForm::dvb(g, 1)).unwrap().with_value(2).unwrap();
        assert_eq!(xi.to_string(), "t*dvb1⊗d/dv2");
    }

    #[test]
    fn subtorus_restriction() {
        let g = g2();
        let xi = VForm::t(g, 1).wedge(&VForm::dvb(g, 1)).unwrap().with_value(2).unwrap();
        let r = xi.restrict_subtorus(&[1]);
        assert_eq!(r, xi);
        let (tan, nor, _) = r.split_values(&[1]);
        assert!(tan.is_zero());
        assert_eq!(nor, xi);
        assert!(w(&VForm::dv(g, 2), &VForm::dvb(g, 2)).restrict_subtorus(&[1]).is_zero());
        let e = Basis::character_kl(&[1, 1], &[1, 0]);
        let f = VForm::function(g, e, TMono::one(1), 1.into()).wedge(&VForm::dv(g, 1)).unwrap();
        let want = VForm::function(g, Basis::character_kl(&[1, 0], &[1, 0]), TMono::one(1), 1.into())
            .wedge(&VForm::dv(g, 1))
            .unwrap();
        assert_eq!(f.restrict_subtorus(&[1]), want);
    }

    #[test]
    fn key_order() {
        assert_eq!(cmp_sets(0b011, 0b110), Ordering::Less);
        assert_eq!(cmp_sets(0b1001, 0b0011), Ordering::Greater);
        assert_eq!(inversions(0b100, 0b011), 2);
    }
}
