//! Coordinate subtori `Y₀ = {v_j = 0 : j ∉ S}` of a flat torus: tangential/normal
//! splitting of Kuranishi data, the submanifold obstruction, the semiregularity
//! certificate and the pair-obstruction cocycle.
//!
//! Forms on `Y₀` keep ambient indexing: a restricted form is an ambient form with no
//! normal differentials and no dependence on normal coordinates. This makes the pullback
//! along the product projection `M₀ → Y₀` the identity on such forms.

use serde_json::{json, Value};

use crate::calculus::{bracket, contract, dbar, del, exp_contract, lie, Part};
use crate::coef::Coef;
use crate::error::{Error, Result};
use crate::forms::{mask_of, FormKey, Geometry, VForm};
use crate::funring::RingKind;
use crate::hodge::harmonic_projection;
use crate::kuranishi::{class_report, extend_class, mc_residual, need_harmonic_class, ObstructionReport};
use crate::scalars::{GaussRat, MonomialIdeal, TMono};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subtorus {
    geom: Geometry,
    tangential: Vec<usize>,
}

impl Subtorus {
    /// `tangential` holds 1-based indices.
    pub fn new(geom: Geometry, tangential: &[usize]) -> Result<Self> {
        if geom.kind != RingKind::Torus {
            return Err(Error::WrongGeometry("torus"));
        }
        let mut s = tangential.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.iter().any(|&j| j == 0 || j > geom.n) {
            return Err(Error::InvalidInput(format!("subtorus indices {tangential:?} out of range 1..={}", geom.n)));
        }
        Ok(Subtorus { geom, tangential: s })
    }

    pub fn geom(&self) -> Geometry {
        self.geom
    }

    pub fn tangential(&self) -> &[usize] {
        &self.tangential
    }

    pub fn restrict(&self, w: &VForm) -> VForm {
        w.restrict_subtorus(&self.tangential)
    }

    /// Normal-valued part of the restriction.
    pub fn normal_part(&self, w: &VForm) -> VForm {
        self.restrict(w).split_values(&self.tangential).1
    }

    fn check(&self, w: &VForm) -> Result<()> {
        if w.geom() != self.geom {
            return Err(Error::GeometryMismatch);
        }
        Ok(())
    }
}

/// `ξ|_{Y₀} = ξ′ + ξ″` with `ξ′` tangentially and `ξ″` normally valued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitKuranishi {
    pub tangential: VForm,
    pub normal: VForm,
    pub ideal: MonomialIdeal,
}

pub fn split_tangent_normal(xi: &VForm, y: &Subtorus, a: &MonomialIdeal) -> Result<SplitKuranishi> {
    y.check(xi)?;
    let (tan, nor, sca) = y.restrict(xi).split_values(y.tangential());
    if !sca.is_zero() {
        return Err(Error::Type { expected: "vector-valued form".into(), actual: crate::calculus::describe(xi) });
    }
    if !tan.in_maximal_ideal() {
        return Err(Error::InvalidInput("tangential part has a t-constant term".into()));
    }
    let outside = nor.reduce(a);
    if !outside.is_zero() {
        return Err(Error::NotSubmanifoldDeformation(Box::new(outside)));
    }
    Ok(SplitKuranishi { tangential: tan, normal: nor, ideal: a.clone() })
}

fn need_integrable(xi: &VForm, ideal: &MonomialIdeal) -> Result<()> {
    let res = mc_residual(xi).reduce(ideal);
    if res.is_zero() {
        Ok(())
    } else {
        Err(Error::NotIntegrableMod(Box::new(res)))
    }
}

/// Class of `ξ″` in `H^{0,1}(N)⊗A/𝔪A`.
pub fn submanifold_obstruction(xi: &VForm, y: &Subtorus, a: &MonomialIdeal) -> Result<ObstructionReport> {
    let split = split_tangent_normal(xi, y, a)?;
    let ma = a.times_maximal();
    need_integrable(xi, &ma)?;
    let closed = dbar(&split.normal).reduce(&ma);
    if !closed.is_zero() {
        return Err(Error::CocycleViolation(Box::new(closed)));
    }
    Ok(class_report(&harmonic_projection(&split.normal)?, a))
}

/// Constant monomial forms of degree `r` whose restriction to `Y₀` vanishes: a basis of
/// `K₀^r = ker(H^r(M₀) → H^r(Y₀))`.
pub fn kernel_basis(y: &Subtorus, r: u32) -> Vec<VForm> {
    let n = y.geom.n as u32;
    let tangent = mask_of(y.tangential());
    let mut out = Vec::new();
    for hol in 0u32..(1 << n) {
        for anti in 0u32..(1 << n) {
            if hol.count_ones() + anti.count_ones() != r || (hol | anti) & !tangent == 0 {
                continue;
            }
            let one = Coef::term(TMono::one(y.geom.m), y.geom.unit_basis(), GaussRat::one());
            out.push(VForm::from_coef(y.geom, FormKey::new(hol, anti, None), one));
        }
    }
    out.sort_by(|a, b| a.terms().keys().next().cmp(&b.terms().keys().next()));
    out
}

#[derive(Clone, Debug)]
pub struct Theorem43Certificate {
    pub hypothesis_holds: bool,
    pub pairing_class: VForm,
    /// Per basis element of `K₀^r`: why the hypothesis fails, if it does.
    pub witnesses: Vec<String>,
}

impl Theorem43Certificate {
    /// The semiregularity contract: the hypothesis forces a zero pairing.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_holds || self.pairing_class.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "hypothesisHolds": self.hypothesis_holds,
            "pairingClass": self.pairing_class.render(),
            "witnesses": self.witnesses,
        })
    }
}

/// Checks whether `K₀^r` deforms (each basis element has a flat extension whose restriction
/// to `Y₀` is cohomologous to zero modulo `𝔪A`) and returns the class of `⟨ξ″|ω₀⟩|_{Y₀}`
/// modulo `𝔪A`.
pub fn theorem43_certificate(xi: &VForm, y: &Subtorus, w0: &VForm, a: &MonomialIdeal) -> Result<Theorem43Certificate> {
    y.check(w0)?;
    need_harmonic_class(w0)?;
    if !y.restrict(w0).is_zero() {
        return Err(Error::PreconditionFailed("ω₀ does not restrict to zero on Y₀".into()));
    }
    let split = split_tangent_normal(xi, y, a)?;
    let ma = a.times_maximal();
    let r = w0.degrees().first().copied().unwrap_or(0);
    let mut witnesses = Vec::new();
    for kappa in kernel_basis(y, r) {
        match extend_class(xi, &kappa, &ma) {
            Ok(w) => {
                let h = harmonic_projection(&y.restrict(&exp_contract(xi, &w)))?.reduce(&ma);
                if !h.is_zero() {
                    witnesses.push(format!("{kappa}: restricted flat extension has harmonic part {h}"));
                }
            }
            Err(e) => witnesses.push(format!("{kappa}: {e}")),
        }
    }
    let pairing_class = harmonic_projection(&y.restrict(&contract(&split.normal, w0)))?.reduce(&ma);
    Ok(Theorem43Certificate { hypothesis_holds: witnesses.is_empty(), pairing_class, witnesses })
}

/// Cochains of the pair complex: `ξ″` and the ambient residual, both modulo `𝔪A`, together
/// with `ε` (the pullback of `ξ″`) and `∂̄(ξ − ε) − ½[ξ,ξ]` modulo `𝔪A`.
#[derive(Clone, Debug)]
pub struct PairCocycle {
    pub pair_first: VForm,
    pub pair_second: VForm,
    pub epsilon: VForm,
    pub combined: VForm,
}

impl PairCocycle {
    pub fn to_json(&self) -> Value {
        json!({
            "pairFirst": self.pair_first.render(),
            "pairSecond": self.pair_second.render(),
            "epsilon": self.epsilon.render(),
            "combined": self.combined.render(),
        })
    }
}

pub fn pair_obstruction_cocycle(xi: &VForm, y: &Subtorus, a: &MonomialIdeal) -> Result<PairCocycle> {
    let split = split_tangent_normal(xi, y, a)?;
    need_integrable(xi, a)?;
    let ma = a.times_maximal();
    let epsilon = split.normal.clone();
    let combined = dbar(&xi.sub(&epsilon)).sub(&bracket(xi, xi).scale(&GaussRat::ratio(1, 2))).reduce(&ma);
    let stray = y.normal_part(&combined);
    if !stray.is_zero() {
        return Err(Error::PreconditionFailed(format!("combined cochain has normal values on Y₀: {stray}")));
    }
    Ok(PairCocycle {
        pair_first: split.normal.reduce(&ma),
        pair_second: mc_residual(xi).reduce(&ma),
        epsilon,
        combined,
    })
}

/// `δ(α, β) = (−∂̄α + β|_{Y₀}^{normal}, ∂̄β)`.
pub fn pair_coboundary(y: &Subtorus, alpha: &VForm, beta: &VForm) -> (VForm, VForm) {
    (dbar(alpha).neg().add(&y.normal_part(beta)), dbar(beta))
}

#[derive(Clone, Debug)]
pub struct Theorem52Check {
    pub bracket_difference: VForm,
    pub lhs: VForm,
    pub rhs: VForm,
    /// `½∂⟨ξ′|⟨ξ′|ω − ω₀⟩⟩ mod 𝔪A`, as for the ambient certificate.
    pub restatement_gap: VForm,
}

impl Theorem52Check {
    pub fn holds(&self) -> bool {
        self.bracket_difference.is_zero() && self.lhs == self.rhs
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds(),
            "bracketDifference": self.bracket_difference.render(),
            "lhs": self.lhs.render(),
            "rhs": self.rhs.render(),
            "difference": self.lhs.sub(&self.rhs).render(),
            "restatementGap": self.restatement_gap.render(),
        })
    }
}

/// With `ξ′ = ξ − ε`, checks `[ξ′,ξ′] ≡ [ξ,ξ]` and
/// `∂̄⟨ξ′|ω⟩ + ½∂⟨ξ′|⟨ξ′|ω⟩⟩ ≡ ∂̄⟨ξ′|ω₀⟩ − ½⟨[ξ,ξ]|ω₀⟩`, both modulo `𝔪A`.
pub fn theorem52_cochain_check(
    xi: &VForm,
    epsilon: &VForm,
    w0: &VForm,
    w: &VForm,
    y: &Subtorus,
    a: &MonomialIdeal,
) -> Result<Theorem52Check> {
    for f in [xi, epsilon, w0, w] {
        y.check(f)?;
    }
    if !del(w).is_zero() {
        return Err(Error::PreconditionFailed("∂ω ≠ 0".into()));
    }
    if w.t_degree_part(0) != *w0 {
        return Err(Error::PreconditionFailed("ω does not reduce to ω₀ at t = 0".into()));
    }
    if !y.restrict(w).in_ideal(a) {
        return Err(Error::PreconditionFailed("ω does not vanish on Y₀ modulo A".into()));
    }
    if !dbar(w).sub(&lie(xi, w, Part::Holo)).in_ideal(a) {
        return Err(Error::PreconditionFailed("(∂̄ − L^{1,0}_ξ)ω ≢ 0 modulo A".into()));
    }
    if !epsilon.in_ideal(a) {
        return Err(Error::PreconditionFailed("ε does not lie in A".into()));
    }
    let ma = a.times_maximal();
    let half = GaussRat::ratio(1, 2);
    let xp = xi.sub(epsilon);
    let xx = bracket(xi, xi);
    let bracket_difference = bracket(&xp, &xp).sub(&xx).reduce(&ma);
    let lhs = dbar(&contract(&xp, w)).add(&del(&contract(&xp, &contract(&xp, w))).scale(&half)).reduce(&ma);
    let rhs = dbar(&contract(&xp, w0)).sub(&contract(&xx, w0).scale(&half)).reduce(&ma);
    let restatement_gap = del(&contract(&xp, &contract(&xp, &w.sub(w0)))).scale(&half).reduce(&ma);
    Ok(Theorem52Check { bracket_difference, lhs, rhs, restatement_gap })
}
