//! Flat-torus Hodge theory, one Fourier mode at a time.
//!
//! On the mode `E[α;β]`, `∂̄` is `Σ β_j dv̄_j∧` and `G = N(β)⁻¹ Σ conj(β_j) ι_{∂/∂v̄_j}`,
//! so `∂̄G + G∂̄ = 1` off the zero mode and `H` keeps the zero mode.

use crate::calculus::dbar;
use crate::coef::{CKey, Coef};
use crate::error::{Error, Result};
use crate::forms::{FormKey, VForm};
use crate::funring::{Basis, DerivKind, RingKind};
use crate::scalars::GaussRat;

fn need_torus(w: &VForm) -> Result<()> {
    if w.geom().kind == RingKind::Torus {
        Ok(())
    } else {
        Err(Error::WrongGeometry("torus"))
    }
}

/// Zero-frequency part.
pub fn harmonic_projection(w: &VForm) -> Result<VForm> {
    need_torus(w)?;
    Ok(w.map_coefs(|c| c.filter(|k| k.f.is_unit())))
}

fn homotopy(w: &VForm, kind: DerivKind) -> Result<VForm> {
    need_torus(w)?;
    let mut r = VForm::zero(w.geom());
    for (k, c) in w.terms() {
        let (mask, offset) = match kind {
            DerivKind::Holo => (k.hol, 0),
            DerivKind::Anti => (k.anti, k.p()),
        };
        for (pos, j) in crate::forms::bits(mask).into_iter().enumerate() {
            let key = match kind {
                DerivKind::Holo => FormKey::new(k.hol ^ (1 << j), k.anti, k.vec),
                DerivKind::Anti => FormKey::new(k.hol, k.anti ^ (1 << j), k.vec),
            };
            let neg = (offset as usize + pos) % 2 == 1;
            let mut out = Coef::zero();
            for (ck, x) in c.terms() {
                let Basis::Torus { alpha, beta } = &ck.f else { unreachable!("torus geometry") };
                let freq = match kind {
                    DerivKind::Holo => alpha,
                    DerivKind::Anti => beta,
                };
                let norm: i64 = freq.iter().map(|z| z.norm()).sum();
                if norm == 0 || freq[j].is_zero() {
                    continue;
                }
                let mut f = GaussRat::from(freq[j].conj()) * GaussRat::ratio(1, norm);
                if neg {
                    f = -f;
                }
                out.add_term(CKey { t: ck.t.clone(), f: ck.f.clone() }, x * &f);
            }
            r.add_term(key, out);
        }
    }
    Ok(r)
}

/// Green operator `G` for `∂̄`: `∂̄G + G∂̄ + H = id`.
pub fn dbar_homotopy(w: &VForm) -> Result<VForm> {
    homotopy(w, DerivKind::Anti)
}

/// Green operator `G_∂` for `∂`: `∂G_∂ + G_∂∂ + H = id`.
pub fn partial_homotopy(w: &VForm) -> Result<VForm> {
    homotopy(w, DerivKind::Holo)
}

/// `x = G(y)` with `∂̄x = y`.
pub fn solve_dbar(y: &VForm) -> Result<VForm> {
    need_torus(y)?;
    let dy = dbar(y);
    if !dy.is_zero() {
        return Err(Error::NotClosed(Box::new(dy)));
    }
    let h = harmonic_projection(y)?;
    if !h.is_zero() {
        return Err(Error::Obstructed(Box::new(h)));
    }
    dbar_homotopy(y)
}

/// `ω = harmonic + ∂̄(potential) + remainder`, with `potential = G(ω)` and `remainder = G(∂̄ω)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDecomposition {
    pub harmonic: VForm,
    pub potential: VForm,
    pub remainder: VForm,
}

impl HodgeDecomposition {
    pub fn reconstruct(&self) -> VForm {
        self.harmonic.add(&dbar(&self.potential)).add(&self.remainder)
    }
}

pub fn decompose(w: &VForm) -> Result<HodgeDecomposition> {
    Ok(HodgeDecomposition {
        harmonic: harmonic_projection(w)?,
        potential: dbar_homotopy(w)?,
        remainder: dbar_homotopy(&dbar(w))?,
    })
}

/// Dolbeault class comparison of two `∂̄`-closed forms.
pub fn cohomologous(a: &VForm, b: &VForm) -> Result<bool> {
    for x in [a, b] {
        let dx = dbar(x);
        if !dx.is_zero() {
            return Err(Error::NotClosed(Box::new(dx)));
        }
    }
    Ok(harmonic_projection(a)? == harmonic_projection(b)?)
}
