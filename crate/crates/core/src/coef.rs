//! Form coefficients: elements of `FunctionElement ⊗ TSeries`, stored as a sparse
//! map on (t-monomial, basis function) pairs.

use std::collections::BTreeMap;

use crate::funring::{Basis, DerivKind, FunctionElement};
use crate::scalars::{render_sum, GaussRat, MonomialIdeal, TMono, TSeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CKey {
    pub t: TMono,
    pub f: Basis,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Coef {
    terms: BTreeMap<CKey, GaussRat>,
}

impl Coef {
    pub fn zero() -> Self {
        Coef::default()
    }

    pub fn term(t: TMono, f: Basis, c: GaussRat) -> Self {
        let mut r = Coef::zero();
        r.add_term(CKey { t, f }, c);
        r
    }

    pub fn from_parts(f: &FunctionElement, s: &TSeries) -> Self {
        let mut r = Coef::zero();
        for (b, c) in f.terms() {
            for (t, x) in s.terms() {
                r.add_term(CKey { t: t.clone(), f: b.clone() }, c * x);
            }
        }
        r
    }

    pub fn terms(&self) -> &BTreeMap<CKey, GaussRat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, k: CKey, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(slot) => {
                *slot += &c;
                if slot.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_assign(&mut self, o: &Coef) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, o: &Coef, s: &GaussRat) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c * s);
        }
    }

    pub fn scale(&self, s: &GaussRat) -> Coef {
        let mut r = Coef::zero();
        r.add_scaled(self, s);
        r
    }

    /// Product truncated at total t-degree `order`.
    pub fn mul(&self, o: &Coef, order: u32) -> Coef {
        let mut r = Coef::zero();
        for (k1, c1) in &self.terms {
            let d1 = k1.t.degree();
            for (k2, c2) in &o.terms {
                if d1 + k2.t.degree() > order {
                    continue;
                }
                r.add_term(CKey { t: k1.t.mul(&k2.t), f: k1.f.mul(&k2.f) }, c1 * c2);
            }
        }
        r
    }

    /// Derivative in `v_j`/`v̄_j`, 0-based `j`.
    pub fn derivative(&self, j: usize, kind: DerivKind) -> Coef {
        let mut r = Coef::zero();
        for (k, c) in &self.terms {
            if let Some((f, nb)) = k.f.derivative(j, kind) {
                r.add_term(CKey { t: k.t.clone(), f: nb }, c * &f);
            }
        }
        r
    }

    /// `∂/∂t_k`, 0-based `k`.
    pub fn t_derivative(&self, k: usize) -> Coef {
        let mut r = Coef::zero();
        for (key, c) in &self.terms {
            let e = key.t.0[k];
            if e == 0 {
                continue;
            }
            let mut t = key.t.clone();
            t.0[k] -= 1;
            r.add_term(CKey { t, f: key.f.clone() }, c.scale_int(i64::from(e)));
        }
        r
    }

    pub fn filter(&self, mut keep: impl FnMut(&CKey) -> bool) -> Coef {
        Coef { terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    pub fn map_basis(&self, mut f: impl FnMut(&Basis) -> Option<Basis>) -> Coef {
        let mut r = Coef::zero();
        for (k, c) in &self.terms {
            if let Some(nb) = f(&k.f) {
                r.add_term(CKey { t: k.t.clone(), f: nb }, c.clone());
            }
        }
        r
    }

    pub fn reduce(&self, ideal: &MonomialIdeal) -> Coef {
        self.filter(|k| !ideal.contains(&k.t))
    }

    /// Smallest total t-degree present.
    pub fn min_t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.t.degree()).min()
    }

    pub(crate) fn render(&self) -> String {
        render_sum(self.terms.iter().map(|(k, c)| {
            let body = match (k.f.is_unit(), k.t.is_one()) {
                (true, true) => "1".to_string(),
                (true, false) => k.t.render(),
                (false, true) => k.f.render(),
                (false, false) => format!("{}*{}", k.t.render(), k.f.render()),
            };
            (c, body)
        }))
    }

    /// Rendering as a factor in a form term.
    pub(crate) fn render_factor(&self) -> String {
        if self.terms.len() > 1 {
            format!("({})", self.render())
        } else {
            self.render()
        }
    }
}
