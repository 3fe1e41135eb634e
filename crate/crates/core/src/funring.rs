//! Coefficient rings standing in for smooth functions: polynomials in `v, v̄`
//! on a polydisk chart, and lattice characters `E[α;β]` on a flat torus.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{render_sum, GaussInt, GaussRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Chart,
    Torus,
}

impl RingKind {
    pub fn name(self) -> &'static str {
        match self {
            RingKind::Chart => "chart",
            RingKind::Torus => "torus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerivKind {
    /// `∂/∂v_j`
    Holo,
    /// `∂/∂v̄_j`
    Anti,
}

/// A basis function: a chart monomial `v^a v̄^b` or a torus character `E[α;β]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Chart { hol: Vec<u32>, anti: Vec<u32> },
    Torus { alpha: Vec<GaussInt>, beta: Vec<GaussInt> },
}

impl Basis {
    pub fn unit(kind: RingKind, n: usize) -> Basis {
        match kind {
            RingKind::Chart => Basis::Chart { hol: vec![0; n], anti: vec![0; n] },
            RingKind::Torus => Basis::Torus { alpha: vec![GaussInt::ZERO; n], beta: vec![GaussInt::ZERO; n] },
        }
    }

    /// Checks `α+β ∈ 2iZⁿ` and `α−β ∈ 2Zⁿ`, i.e. `α = ik+l`, `β = ik−l`.
    pub fn character(alpha: Vec<GaussInt>, beta: Vec<GaussInt>) -> Result<Basis> {
        if alpha.len() != beta.len() {
            return Err(Error::LatticeViolation("α and β have different lengths".into()));
        }
        for (j, (a, b)) in alpha.iter().zip(&beta).enumerate() {
            let s = *a + *b;
            let d = *a - *b;
            if s.re != 0 || s.im % 2 != 0 || d.im != 0 || d.re % 2 != 0 {
                return Err(Error::LatticeViolation(format!("component {} has α={a}, β={b}", j + 1)));
            }
        }
        Ok(Basis::Torus { alpha, beta })
    }

    /// Character with `α = i·k + l`, `β = i·k − l`.
    pub fn character_kl(k: &[i64], l: &[i64]) -> Basis {
        let alpha = k.iter().zip(l).map(|(&k, &l)| GaussInt::new(l, k)).collect();
        let beta = k.iter().zip(l).map(|(&k, &l)| GaussInt::new(-l, k)).collect();
        Basis::Torus { alpha, beta }
    }

    pub fn kind(&self) -> RingKind {
        match self {
            Basis::Chart { .. } => RingKind::Chart,
            Basis::Torus { .. } => RingKind::Torus,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Chart { hol, .. } => hol.len(),
            Basis::Torus { alpha, .. } => alpha.len(),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Basis::Chart { hol, anti } => hol.iter().chain(anti).all(|&e| e == 0),
            Basis::Torus { alpha, beta } => alpha.iter().chain(beta).all(|z| z.is_zero()),
        }
    }

    pub fn mul(&self, o: &Basis) -> Basis {
        match (self, o) {
            (Basis::Chart { hol: h1, anti: a1 }, Basis::Chart { hol: h2, anti: a2 }) => Basis::Chart {
                hol: h1.iter().zip(h2).map(|(x, y)| x + y).collect(),
                anti: a1.iter().zip(a2).map(|(x, y)| x + y).collect(),
            },
            (Basis::Torus { alpha: x1, beta: y1 }, Basis::Torus { alpha: x2, beta: y2 }) => Basis::Torus {
                alpha: x1.iter().zip(x2).map(|(x, y)| *x + *y).collect(),
                beta: y1.iter().zip(y2).map(|(x, y)| *x + *y).collect(),
            },
            _ => panic!("mixed ring kinds"),
        }
    }

    /// `∂/∂v_j` or `∂/∂v̄_j` (0-based `j`) as `factor·basis`, `None` when zero.
    pub fn derivative(&self, j: usize, kind: DerivKind) -> Option<(GaussRat, Basis)> {
        match self {
            Basis::Chart { hol, anti } => {
                let mut hol = hol.clone();
                let mut anti = anti.clone();
                let e = match kind {
                    DerivKind::Holo => &mut hol[j],
                    DerivKind::Anti => &mut anti[j],
                };
                if *e == 0 {
                    return None;
                }
                let f = GaussRat::int(i64::from(*e));
                *e -= 1;
                Some((f, Basis::Chart { hol, anti }))
            }
            Basis::Torus { alpha, beta } => {
                let z = match kind {
                    DerivKind::Holo => alpha[j],
                    DerivKind::Anti => beta[j],
                };
                (!z.is_zero()).then(|| (GaussRat::from(z), self.clone()))
            }
        }
    }

    /// Sets the coordinates with `zero[j]` to zero. Chart monomials involving them
    /// vanish; characters lose the frequency component (a character is 1 at 0).
    /// Dimension is kept.
    pub fn zero_out(&self, zero: &[bool]) -> Option<Basis> {
        match self {
            Basis::Chart { hol, anti } => {
                let hit = zero.iter().enumerate().any(|(j, &z)| z && (hol[j] > 0 || anti[j] > 0));
                (!hit).then(|| self.clone())
            }
            Basis::Torus { alpha, beta } => {
                let mask =
                    |v: &Vec<GaussInt>| v.iter().zip(zero).map(|(z, &k)| if k { GaussInt::ZERO } else { *z }).collect();
                Some(Basis::Torus { alpha: mask(alpha), beta: mask(beta) })
            }
        }
    }

    fn sort_key(&self) -> (i64, Vec<i64>) {
        match self {
            Basis::Chart { hol, anti } => {
                let total = hol.iter().chain(anti).map(|&e| i64::from(e)).sum();
                // larger powers of earlier variables first
                (total, hol.iter().chain(anti).map(|&e| -i64::from(e)).collect())
            }
            Basis::Torus { alpha, beta } => {
                let total = alpha.iter().chain(beta).map(|z| z.norm()).sum();
                (total, alpha.iter().chain(beta).flat_map(|z| [z.re, z.im]).collect())
            }
        }
    }

    pub(crate) fn render(&self) -> String {
        match self {
            Basis::Chart { hol, anti } => {
                let mut parts = Vec::new();
                for (name, exps) in [("v", hol), ("vb", anti)] {
                    for (j, &e) in exps.iter().enumerate() {
                        match e {
                            0 => {}
                            1 => parts.push(format!("{name}{}", j + 1)),
                            e => parts.push(format!("{name}{}^{e}", j + 1)),
                        }
                    }
                }
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("*")
                }
            }
            Basis::Torus { alpha, beta } => {
                if self.is_unit() {
                    return "1".into();
                }
                let a: Vec<String> = alpha.iter().map(ToString::to_string).collect();
                let b: Vec<String> = beta.iter().map(ToString::to_string).collect();
                format!("E[{};{}]", a.join(","), b.join(","))
            }
        }
    }
}

impl Ord for Basis {
    fn cmp(&self, o: &Self) -> Ordering {
        self.kind().cmp(&o.kind()).then_with(|| self.sort_key().cmp(&o.sort_key()))
    }
}

impl PartialOrd for Basis {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Element of the chart ring or the torus ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionElement {
    kind: RingKind,
    dim: usize,
    terms: BTreeMap<Basis, GaussRat>,
}

impl FunctionElement {
    pub fn zero(kind: RingKind, dim: usize) -> Self {
        FunctionElement { kind, dim, terms: BTreeMap::new() }
    }

    pub fn constant(kind: RingKind, dim: usize, c: GaussRat) -> Self {
        FunctionElement::from_basis(kind, dim, Basis::unit(kind, dim), c)
    }

    pub fn from_basis(kind: RingKind, dim: usize, b: Basis, c: GaussRat) -> Self {
        let mut f = FunctionElement::zero(kind, dim);
        f.add_term(b, c);
        f
    }

    /// Coordinate function `v_j` (chart, 1-based `j`).
    pub fn v(dim: usize, j: usize) -> Self {
        let mut hol = vec![0; dim];
        hol[j - 1] = 1;
        FunctionElement::from_basis(RingKind::Chart, dim, Basis::Chart { hol, anti: vec![0; dim] }, GaussRat::one())
    }

    /// Conjugate coordinate `v̄_j` (chart, 1-based `j`).
    pub fn vb(dim: usize, j: usize) -> Self {
        let mut anti = vec![0; dim];
        anti[j - 1] = 1;
        FunctionElement::from_basis(RingKind::Chart, dim, Basis::Chart { hol: vec![0; dim], anti }, GaussRat::one())
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Basis, GaussRat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: Basis, c: GaussRat) {
        assert_eq!(b.kind(), self.kind, "basis from another ring");
        assert_eq!(b.dim(), self.dim, "basis of another dimension");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b.clone()).or_insert_with(GaussRat::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, o: &FunctionElement) -> Result<FunctionElement> {
        self.check(o)?;
        let mut r = self.clone();
        for (b, c) in &o.terms {
            r.add_term(b.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn scale(&self, c: &GaussRat) -> FunctionElement {
        let mut r = FunctionElement::zero(self.kind, self.dim);
        for (b, x) in &self.terms {
            r.add_term(b.clone(), x * c);
        }
        r
    }

    fn check(&self, o: &FunctionElement) -> Result<()> {
        if self.kind != o.kind || self.dim != o.dim {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, o: &FunctionElement) -> Result<FunctionElement> {
        self.check(o)?;
        let mut r = FunctionElement::zero(self.kind, self.dim);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &o.terms {
                r.add_term(b1.mul(b2), c1 * c2);
            }
        }
        Ok(r)
    }

    /// Partial derivative in `v_j` or `v̄_j`, 1-based `j`.
    pub fn derivative(&self, j: usize, kind: DerivKind) -> FunctionElement {
        assert!(j >= 1 && j <= self.dim, "index out of range");
        let mut r = FunctionElement::zero(self.kind, self.dim);
        for (b, c) in &self.terms {
            if let Some((f, nb)) = b.derivative(j - 1, kind) {
                r.add_term(nb, c * &f);
            }
        }
        r
    }

    /// Coefficient of the constant character `E[0;0]`.
    pub fn torus_zero_freq(&self) -> Result<GaussRat> {
        if self.kind != RingKind::Torus {
            return Err(Error::WrongGeometry("torus"));
        }
        Ok(self.terms.get(&Basis::unit(self.kind, self.dim)).cloned().unwrap_or_else(GaussRat::zero))
    }

    /// Restriction to `{v_j = 0 : j ∈ zero_set}` (1-based indices). Chart elements
    /// are substituted; torus elements become functions on the complementary subtorus.
    pub fn restrict_chart(&self, zero_set: &[usize]) -> Result<FunctionElement> {
        let mut zero = vec![false; self.dim];
        for &j in zero_set {
            if j == 0 || j > self.dim {
                return Err(Error::InvalidInput(format!("coordinate {j} out of range")));
            }
            zero[j - 1] = true;
        }
        match self.kind {
            RingKind::Chart => {
                let mut r = FunctionElement::zero(self.kind, self.dim);
                for (b, c) in &self.terms {
                    if let Some(nb) = b.zero_out(&zero) {
                        r.add_term(nb, c.clone());
                    }
                }
                Ok(r)
            }
            RingKind::Torus => {
                let keep: Vec<usize> = (0..self.dim).filter(|&j| !zero[j]).collect();
                let mut r = FunctionElement::zero(self.kind, keep.len());
                for (b, c) in &self.terms {
                    let Basis::Torus { alpha, beta } = b else { unreachable!() };
                    let nb = Basis::character(
                        keep.iter().map(|&j| alpha[j]).collect(),
                        keep.iter().map(|&j| beta[j]).collect(),
                    )?;
                    r.add_term(nb, c.clone());
                }
                Ok(r)
            }
        }
    }
}

impl fmt::Display for FunctionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_sum(self.terms.iter().map(|(b, c)| (c, b.render()))))
    }
}

pub fn fn_mul(f: &FunctionElement, g: &FunctionElement) -> Result<FunctionElement> {
    f.mul(g)
}

pub fn derivative(f: &FunctionElement, j: usize, kind: DerivKind) -> FunctionElement {
    f.derivative(j, kind)
}

pub fn torus_zero_freq(f: &FunctionElement) -> Result<GaussRat> {
    f.torus_zero_freq()
}

pub fn restrict_chart(f: &FunctionElement, zero_set: &[usize]) -> Result<FunctionElement> {
    f.restrict_chart(zero_set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(k: &[i64], l: &[i64]) -> FunctionElement {
        FunctionElement::from_basis(RingKind::Torus, k.len(), Basis::character_kl(k, l), GaussRat::one())
    }

    #[test]
    fn inverse_character() {
        let e = ch(&[1, -1], &[2, 0]);
        let f = ch(&[-1, 1], &[-2, 0]);
        assert_eq!(fn_mul(&e, &f).unwrap(), FunctionElement::constant(RingKind::Torus, 2, GaussRat::one()));
    }

    #[test]
    fn chart_products() {
        let v = FunctionElement::v(1, 1);
        let vb = FunctionElement::vb(1, 1);
        assert_eq!(fn_mul(&v, &vb).unwrap().to_string(), "v1*vb1");
        let s = v.add(&vb).unwrap();
        // (v + v̄)² = v² + 2vv̄ + v̄², checked against hand expansion
        let sq = fn_mul(&s, &s).unwrap();
        let mut want = FunctionElement::zero(RingKind::Chart, 1);
        want.add_term(Basis::Chart { hol: vec![2], anti: vec![0] }, 1.into());
        want.add_term(Basis::Chart { hol: vec![1], anti: vec![1] }, 2.into());
        want.add_term(Basis::Chart { hol: vec![0], anti: vec![2] }, 1.into());
        assert_eq!(sq, want);
        assert_eq!(sq.to_string(), "v1^2 + 2*v1*vb1 + vb1^2");
    }

    #[test]
    fn ring_mismatch() {
        let a = FunctionElement::v(1, 1);
        let b = ch(&[1], &[0]);
        assert!(matches!(fn_mul(&a, &b), Err(Error::RingMismatch)));
    }

    #[test]
    fn derivatives() {
        let e = ch(&[1, 0], &[1, 1]);
        let Basis::Torus { beta, .. } = Basis::character_kl(&[1, 0], &[1, 1]) else { unreachable!() };
        assert_eq!(derivative(&e, 2, DerivKind::Anti), e.scale(&beta[1].into()));
        let f = FunctionElement::from_basis(RingKind::Chart, 1, Basis::Chart { hol: vec![2], anti: vec![1] }, 1.into());
        let want =
            FunctionElement::from_basis(RingKind::Chart, 1, Basis::Chart { hol: vec![1], anti: vec![1] }, 2.into());
        assert_eq!(derivative(&f, 1, DerivKind::Holo), want);
    }

    #[test]
    fn zero_frequency() {
        let three = FunctionElement::constant(RingKind::Torus, 1, 3.into());
        assert_eq!(torus_zero_freq(&three.add(&ch(&[1], &[1])).unwrap()).unwrap(), 3.into());
        assert_eq!(torus_zero_freq(&fn_mul(&ch(&[1], &[1]), &ch(&[-1], &[-1])).unwrap()).unwrap(), 1.into());
        assert!(torus_zero_freq(&fn_mul(&ch(&[1], &[1]), &ch(&[1], &[0])).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn lattice_rule() {
        let i = GaussInt::new(0, 1);
        assert!(Basis::character(vec![i, GaussInt::ZERO], vec![i, GaussInt::ZERO]).is_ok());
        assert!(Basis::character(vec![i], vec![GaussInt::ZERO]).is_err());
        assert!(Basis::character(vec![GaussInt::new(1, 0)], vec![GaussInt::new(1, 0)]).is_err());
    }

    #[test]
    fn restrictions() {
        let s = FunctionElement::v(2, 1).add(&FunctionElement::v(2, 2)).unwrap();
        assert_eq!(restrict_chart(&s, &[2]).unwrap(), FunctionElement::v(2, 1));
        let m = fn_mul(&FunctionElement::v(2, 1), &FunctionElement::vb(2, 2)).unwrap();
        assert!(restrict_chart(&m, &[2]).unwrap().is_zero());
        let e = ch(&[1, 2], &[0, 1]);
        assert_eq!(restrict_chart(&e, &[2]).unwrap(), ch(&[1], &[0]));
    }
}
