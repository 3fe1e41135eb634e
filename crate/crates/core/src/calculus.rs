//! Exterior derivatives, contraction, Lie derivatives, the bracket of vector-valued
//! forms, the operator exponentials, and the standard identity suite.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{wedge_scalar_keys, FormKey, VForm};
use crate::funring::DerivKind;
use crate::scalars::GaussRat;

/// Which exterior derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exterior {
    D,
    Del,
    Delbar,
}

/// Which part of a Lie derivative: `full` uses `d`, `holo` uses `∂`, `anti` uses `∂̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Full,
    Holo,
    Anti,
}

fn sign(neg: bool) -> GaussRat {
    GaussRat::int(if neg { -1 } else { 1 })
}

fn one_sided(w: &VForm, kind: DerivKind) -> VForm {
    let geom = w.geom();
    let mut r = VForm::zero(geom);
    for (k, c) in w.terms() {
        for j in 0..geom.n {
            let e = match kind {
                DerivKind::Holo => FormKey::new(1 << j, 0, None),
                DerivKind::Anti => FormKey::new(0, 1 << j, None),
            };
            let Some((neg, hol, anti)) = wedge_scalar_keys(e, *k) else { continue };
            let dc = c.derivative(j, kind);
            if dc.is_zero() {
                continue;
            }
            r.add_term(FormKey::new(hol, anti, k.vec), dc.scale(&sign(neg)));
        }
    }
    r
}

/// `d`, `∂` or `∂̄`; vector-valued forms are differentiated componentwise in the frame `∂/∂v_a`.
pub fn exterior(w: &VForm, kind: Exterior) -> VForm {
    match kind {
        Exterior::D => one_sided(w, DerivKind::Holo).add(&one_sided(w, DerivKind::Anti)),
        Exterior::Del => one_sided(w, DerivKind::Holo),
        Exterior::Delbar => one_sided(w, DerivKind::Anti),
    }
}

pub fn d(w: &VForm) -> VForm {
    exterior(w, Exterior::D)
}

pub fn del(w: &VForm) -> VForm {
    exterior(w, Exterior::Del)
}

pub fn dbar(w: &VForm) -> VForm {
    exterior(w, Exterior::Delbar)
}

fn part_exterior(part: Part) -> Exterior {
    match part {
        Part::Full => Exterior::D,
        Part::Holo => Exterior::Del,
        Part::Anti => Exterior::Delbar,
    }
}

/// `⟨ξ|ω⟩`: a term `η̄⊗∂_a` of `ξ` acts as `η̄ ∧ ι_{∂_a}`. A value carried by `ω` is kept.
///
/// Panics if `ξ` has a scalar-valued term.
pub fn contract(xi: &VForm, w: &VForm) -> VForm {
    assert_eq!(xi.geom(), w.geom(), "forms live on different geometries");
    let mut r = VForm::zero(w.geom());
    for (kx, cx) in xi.terms() {
        let a = kx.vec.expect("contraction needs a vector-valued form") as u32;
        let bit = 1u32 << a;
        for (kw, cw) in w.terms() {
            if kw.hol & bit == 0 {
                continue;
            }
            let pos = (kw.hol & (bit - 1)).count_ones();
            let inner = FormKey::new(kw.hol ^ bit, kw.anti, None);
            let Some((neg, hol, anti)) = wedge_scalar_keys(kx.scalar(), inner) else { continue };
            let c = cx.mul(cw, w.geom().order).scale(&sign(neg ^ (pos % 2 == 1)));
            r.add_term(FormKey::new(hol, anti, kw.vec), c);
        }
    }
    r
}

fn pm(k: u32) -> GaussRat {
    sign(k % 2 == 1)
}

/// `L_ξ = ⟨ξ|⟩∘d + (−1)^k d∘⟨ξ|⟩`, summed over the homogeneous degrees `k` of `ξ`.
pub fn lie(xi: &VForm, w: &VForm, part: Part) -> VForm {
    let ext = part_exterior(part);
    let mut r = VForm::zero(w.geom());
    for k in xi.degrees() {
        let xk = xi.degree_part(k);
        let a = contract(&xk, &exterior(w, ext));
        let b = exterior(&contract(&xk, w), ext).scale(&pm(k));
        r = r.add(&a).add(&b);
    }
    r
}

/// Bracket of vector-valued forms:
/// `[η̄⊗f∂_a, θ̄⊗g∂_b] = η̄∧θ̄ ⊗ (f·∂g/∂v_a ∂_b − g·∂f/∂v_b ∂_a)`.
///
/// Panics if either argument has a scalar-valued term.
pub fn bracket(x: &VForm, y: &VForm) -> VForm {
    assert_eq!(x.geom(), y.geom(), "forms live on different geometries");
    let geom = x.geom();
    let mut r = VForm::zero(geom);
    for (kx, f) in x.terms() {
        let a = kx.vec.expect("bracket needs vector-valued forms");
        for (ky, g) in y.terms() {
            let b = ky.vec.expect("bracket needs vector-valued forms");
            let Some((neg, hol, anti)) = wedge_scalar_keys(kx.scalar(), ky.scalar()) else { continue };
            let s = sign(neg);
            let first = f.mul(&g.derivative(a as usize, DerivKind::Holo), geom.order);
            r.add_term(FormKey::new(hol, anti, Some(b)), first.scale(&s));
            let second = g.mul(&f.derivative(b as usize, DerivKind::Holo), geom.order);
            r.add_term(FormKey::new(hol, anti, Some(a)), second.scale(&-s));
        }
    }
    r
}

/// `e^{⟨ξ|⟩}ω = Σ ⟨ξ|⟩^i ω / i!`. Terminates because each step lowers the holomorphic degree.
///
/// Panics unless every term of `ξ` has type `(0,k)`.
pub fn exp_contract(xi: &VForm, w: &VForm) -> VForm {
    assert!(xi.terms().keys().all(|k| k.hol == 0), "exp_contract needs a (0,k) form");
    let mut sum = w.clone();
    let mut term = w.clone();
    let mut i = 1;
    while !term.is_zero() {
        term = contract(xi, &term).scale(&GaussRat::ratio(1, i));
        sum = sum.add(&term);
        i += 1;
    }
    sum
}

fn check_nilpotent(v: &VForm) -> Result<()> {
    if v.in_maximal_ideal() {
        Ok(())
    } else {
        Err(Error::NotNilpotent)
    }
}

/// Sums `op^i(x)/i!` until a term vanishes; `op` must raise the t-order.
fn exp_series(x: &VForm, mut op: impl FnMut(&VForm) -> VForm) -> VForm {
    let mut sum = x.clone();
    let mut term = x.clone();
    let mut i = 1;
    while !term.is_zero() {
        term = op(&term).scale(&GaussRat::ratio(1, i));
        sum = sum.add(&term);
        i += 1;
    }
    sum
}

/// `e^{L_β}(x)` for a vector field `β` with no t-constant term.
pub fn exp_lie(beta: &VForm, x: &VForm) -> Result<VForm> {
    check_nilpotent(beta)?;
    Ok(exp_series(x, |y| lie(beta, y, Part::Full)))
}

/// `e^{−L_β}(x)`.
pub fn exp_neg_lie(beta: &VForm, x: &VForm) -> Result<VForm> {
    exp_lie(&beta.neg(), x)
}

/// Polynomial in a formal parameter `s` with form coefficients, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPoly {
    pub coeffs: Vec<VForm>,
}

impl SPoly {
    pub fn constant(w: VForm) -> Self {
        SPoly { coeffs: vec![w] }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(VForm::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeff(&self, k: usize) -> Option<&VForm> {
        self.coeffs.get(k)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn add(&self, o: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let geom = self.coeffs[0].geom();
        let coeffs = (0..n)
            .map(|k| {
                let z = VForm::zero(geom);
                self.coeffs.get(k).unwrap_or(&z).add(o.coeffs.get(k).unwrap_or(&z))
            })
            .collect();
        SPoly { coeffs }.trim()
    }

    pub fn sub(&self, o: &SPoly) -> SPoly {
        self.add(&o.map(VForm::neg))
    }

    pub fn map(&self, f: impl FnMut(&VForm) -> VForm) -> SPoly {
        SPoly { coeffs: self.coeffs.iter().map(f).collect() }.trim()
    }

    /// `d/ds`.
    pub fn derivative(&self) -> SPoly {
        let geom = self.coeffs[0].geom();
        if self.coeffs.len() == 1 {
            return SPoly::constant(VForm::zero(geom));
        }
        SPoly {
            coeffs: self.coeffs[1..].iter().enumerate().map(|(k, c)| c.scale(&GaussRat::int(k as i64 + 1))).collect(),
        }
        .trim()
    }

    pub fn eval(&self, s: &GaussRat) -> VForm {
        let mut acc = VForm::zero(self.coeffs[0].geom());
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(s).add(c);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(VForm::is_zero)
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("[{c}]"),
                1 => format!("s*[{c}]"),
                k => format!("s^{k}*[{c}]"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Powers `ad_α^k(y)` until they vanish.
fn ad_powers(alpha: &VForm, y: &VForm) -> Result<Vec<VForm>> {
    check_nilpotent(alpha)?;
    let mut out = vec![y.clone()];
    loop {
        let next = bracket(alpha, out.last().expect("nonempty"));
        if next.is_zero() {
            return Ok(out);
        }
        out.push(next);
    }
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// `exp([sα, ])(y) = Σ s^k ad_α^k(y)/k!`.
pub fn exp_ad(alpha: &VForm, y: &VForm) -> Result<SPoly> {
    let pw = ad_powers(alpha, y)?;
    Ok(SPoly { coeffs: pw.iter().enumerate().map(|(k, c)| c.scale(&GaussRat::ratio(1, factorial(k)))).collect() }
        .trim())
}

/// `((exp([sα, ]) − 1)/[sα, ])(y) = Σ s^k ad_α^k(y)/(k+1)!`.
pub fn exp_ad_shifted(alpha: &VForm, y: &VForm) -> Result<SPoly> {
    let pw = ad_powers(alpha, y)?;
    Ok(SPoly { coeffs: pw.iter().enumerate().map(|(k, c)| c.scale(&GaussRat::ratio(1, factorial(k + 1)))).collect() }
        .trim())
}

/// Names of the identity suite, in report order.
pub const IDENTITY_NAMES: [&str; 10] =
    ["I-2.7.00", "I-2.7.3", "I-2.7.4", "I-2.7.5", "I-2.7.6", "I-2.7.7", "I-2.7.8", "I-2.7.9", "I-48.5", "I-kodd"];

/// Inputs for an identity check; each identity reads the slots it needs.
#[derive(Clone, Debug)]
pub struct IdentityInputs {
    pub xi: VForm,
    pub xi2: VForm,
    pub omega: VForm,
    pub eta: VForm,
}

impl IdentityInputs {
    pub fn new(xi: VForm, xi2: VForm, omega: VForm, eta: VForm) -> Self {
        IdentityInputs { xi, xi2, omega, eta }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub lhs: VForm,
    pub rhs: VForm,
    /// `lhs − rhs`; zero iff the identity holds.
    pub difference: VForm,
}

fn need_vector_0k(w: &VForm, role: &str) -> Result<()> {
    if w.terms().keys().all(|k| k.hol == 0 && k.vec.is_some()) {
        Ok(())
    } else {
        Err(Error::Type { expected: format!("{role}: vector-valued (0,k) form"), actual: describe(w) })
    }
}

fn need_degree_one(w: &VForm, role: &str) -> Result<()> {
    need_vector_0k(w, role)?;
    if w.is_bidegree(0, 1) {
        Ok(())
    } else {
        Err(Error::Type { expected: format!("{role}: vector-valued (0,1) form"), actual: describe(w) })
    }
}

fn need_scalar(w: &VForm, role: &str) -> Result<()> {
    if w.is_scalar_valued() {
        Ok(())
    } else {
        Err(Error::Type { expected: format!("{role}: scalar-valued form"), actual: describe(w) })
    }
}

/// Short type description: bidegrees present and whether values are attached.
pub fn describe(w: &VForm) -> String {
    let mut bi: Vec<(u32, u32)> = w.terms().keys().map(|k| (k.p(), k.q())).collect();
    bi.sort_unstable();
    bi.dedup();
    let bi: Vec<String> = bi.iter().map(|(p, q)| format!("({p},{q})")).collect();
    let val = if w.is_zero() {
        "zero"
    } else if w.is_vector_valued() && w.is_scalar_valued() {
        "mixed-valued"
    } else if w.is_vector_valued() {
        if w.terms().keys().all(|k| k.vec.is_some()) {
            "vector-valued"
        } else {
            "mixed-valued"
        }
    } else {
        "scalar-valued"
    };
    if bi.is_empty() {
        val.to_string()
    } else {
        format!("{val} {}", bi.join("+"))
    }
}

/// Both sides of a named identity.
pub fn identity_sides(name: &str, inp: &IdentityInputs) -> Result<(&'static str, VForm, VForm)> {
    let Some(&id) = IDENTITY_NAMES.iter().find(|n| **n == name) else {
        return Err(Error::UnknownIdentity(name.to_string()));
    };
    let (xi, xi2, w) = (&inp.xi, &inp.xi2, &inp.omega);
    let (lhs, rhs) = match id {
        "I-2.7.00" => {
            need_degree_one(xi, "xi")?;
            need_degree_one(xi2, "xi2")?;
            need_scalar(w, "omega")?;
            (contract(xi, &contract(xi2, w)), contract(xi2, &contract(xi, w)))
        }
        "I-2.7.3" => {
            need_degree_one(xi, "xi")?;
            need_scalar(w, "omega")?;
            need_scalar(&inp.eta, "eta")?;
            let eta = &inp.eta;
            let lhs = lie(xi, &w.wedge(eta)?, Part::Full);
            let mut rhs = lie(xi, w, Part::Full).wedge(eta)?;
            for k in w.degrees() {
                let wk = w.degree_part(k);
                rhs = rhs.add(&wk.wedge(&lie(xi, eta, Part::Full))?.scale(&pm(k)));
            }
            (lhs, rhs)
        }
        "I-2.7.4" => {
            need_vector_0k(xi, "xi")?;
            need_vector_0k(xi2, "xi2")?;
            let lhs = dbar(&bracket(xi, xi2));
            let mut rhs = bracket(&dbar(xi), xi2);
            for k in xi.degrees() {
                rhs = rhs.add(&bracket(&xi.degree_part(k), &dbar(xi2)).scale(&pm(k)));
            }
            (lhs, rhs)
        }
        "I-2.7.5" => {
            need_vector_0k(xi, "xi")?;
            need_scalar(w, "omega")?;
            let lhs = lie(xi, &d(w), Part::Full);
            let mut rhs = VForm::zero(w.geom());
            for k in xi.degrees() {
                rhs = rhs.add(&d(&lie(&xi.degree_part(k), w, Part::Full)).scale(&pm(k)));
            }
            (lhs, rhs)
        }
        "I-2.7.6" => {
            need_vector_0k(xi, "xi")?;
            need_scalar(w, "omega")?;
            let lhs = dbar(&contract(xi, w));
            let mut rhs = contract(&dbar(xi), w);
            for k in xi.degrees() {
                rhs = rhs.sub(&contract(&xi.degree_part(k), &dbar(w)).scale(&pm(k)));
            }
            (lhs, rhs)
        }
        "I-2.7.7" => {
            need_vector_0k(xi, "xi")?;
            need_vector_0k(xi2, "xi2")?;
            need_scalar(w, "omega")?;
            let mut lhs = VForm::zero(w.geom());
            for k in xi.degrees() {
                let x = xi.degree_part(k);
                for k2 in xi2.degrees() {
                    let y = xi2.degree_part(k2);
                    let a = contract(&x, &lie(&y, w, Part::Full)).scale(&pm(k2));
                    let b = lie(&y, &contract(&x, w), Part::Full).scale(&pm(k * k2));
                    lhs = lhs.add(&a).sub(&b);
                }
            }
            (lhs, contract(&bracket(xi, xi2), w))
        }
        "I-2.7.8" | "I-2.7.9" => {
            need_degree_one(xi, "xi")?;
            need_scalar(w, "omega")?;
            let part = if id == "I-2.7.8" { Part::Full } else { Part::Holo };
            let lhs = lie(xi, &contract(xi, w), part).sub(&contract(xi, &lie(xi, w, part)));
            (lhs, contract(&bracket(xi, xi), w))
        }
        "I-48.5" => {
            need_vector_0k(xi, "xi")?;
            need_vector_0k(xi2, "xi2")?;
            need_scalar(w, "omega")?;
            let mut lhs = VForm::zero(w.geom());
            for k in xi.degrees() {
                let x = xi.degree_part(k);
                for k2 in xi2.degrees() {
                    let y = xi2.degree_part(k2);
                    let a = lie(&x, &lie(&y, w, Part::Full), Part::Full);
                    let b = lie(&y, &lie(&x, w, Part::Full), Part::Full).scale(&pm(k * k2));
                    lhs = lhs.add(&a).sub(&b);
                }
            }
            (lhs, lie(&bracket(xi, xi2), w, Part::Full))
        }
        "I-kodd" => {
            need_vector_0k(xi, "xi")?;
            need_scalar(w, "omega")?;
            let mut lhs = VForm::zero(w.geom());
            for k in xi.degrees() {
                let x = xi.degree_part(k);
                let a = dbar(&lie(&x, w, Part::Full));
                let b = lie(&x, &dbar(w), Part::Full).scale(&pm(k));
                lhs = lhs.add(&a).sub(&b);
            }
            (lhs, lie(&dbar(xi), w, Part::Full))
        }
        _ => unreachable!("name list and dispatch agree"),
    };
    Ok((id, lhs, rhs))
}

/// Evaluates a named identity; `holds` iff both sides agree term by term.
pub fn check_identity(name: &str, inp: &IdentityInputs) -> Result<IdentityCheck> {
    let (name, lhs, rhs) = identity_sides(name, inp)?;
    let difference = lhs.sub(&rhs);
    Ok(IdentityCheck { name, holds: difference.is_zero(), lhs, rhs, difference })
}
