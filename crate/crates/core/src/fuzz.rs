//! Seeded random inputs and the identity fuzzer.
//!
//! Case `i` of a run with seed `s` draws from ChaCha8 stream `i` of seed `s`, so reports
//! do not depend on evaluation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::calculus::{dbar, identity_sides, IdentityInputs, IDENTITY_NAMES};
use crate::coef::Coef;
use crate::error::Result;
use crate::forms::{FormKey, Geometry, VForm};
use crate::funring::{Basis, RingKind};
use crate::parse::{parse_expression, Env};
use crate::scalars::{GaussRat, TMono};

/// Size limits for generated inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzBounds {
    pub max_n: usize,
    pub max_order: u32,
    pub max_terms: usize,
    pub max_freq: i64,
}

impl Default for FuzzBounds {
    fn default() -> Self {
        FuzzBounds { max_n: 3, max_order: 4, max_terms: 5, max_freq: 2 }
    }
}

/// Deliberate harness faults, used to check that failures are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Negates the right-hand side of I-2.7.7.
    SignFlip,
}

pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Nonzero Gaussian rational with small numerators and denominators 1 or 2.
pub fn random_scalar(rng: &mut impl Rng) -> GaussRat {
    loop {
        let re = rng.gen_range(-3..=3);
        let im = rng.gen_range(-2..=2);
        let den = rng.gen_range(1..=2);
        let z = GaussRat::complex(re, den, im, den);
        if !z.is_zero() {
            return z;
        }
    }
}

pub fn random_basis(rng: &mut impl Rng, geom: Geometry, bounds: &FuzzBounds) -> Basis {
    let n = geom.n;
    match geom.kind {
        RingKind::Chart => Basis::Chart {
            hol: (0..n).map(|_| rng.gen_range(0..=2)).collect(),
            anti: (0..n).map(|_| rng.gen_range(0..=2)).collect(),
        },
        RingKind::Torus => {
            let f = bounds.max_freq;
            let k: Vec<i64> = (0..n).map(|_| rng.gen_range(-f..=f)).collect();
            let l: Vec<i64> = (0..n).map(|_| rng.gen_range(-f..=f)).collect();
            Basis::character_kl(&k, &l)
        }
    }
}

pub fn random_tmono(rng: &mut impl Rng, m: usize, degree: u32) -> TMono {
    let mut e = vec![0; m];
    for _ in 0..degree {
        e[rng.gen_range(0..m)] += 1;
    }
    TMono(e)
}

fn random_subset(rng: &mut impl Rng, n: usize, size: usize) -> u32 {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx[..size].iter().fold(0, |m, &j| m | 1 << j)
}

/// Shape of a generated form.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub p: usize,
    pub q: usize,
    pub vector: bool,
    pub min_t: u32,
    pub max_t: u32,
}

pub fn random_form(rng: &mut impl Rng, geom: Geometry, shape: Shape, bounds: &FuzzBounds) -> VForm {
    assert!(shape.p <= geom.n && shape.q <= geom.n, "bidegree exceeds dimension");
    let terms = rng.gen_range(1..=bounds.max_terms);
    let mut w = VForm::zero(geom);
    for _ in 0..terms {
        let hol = random_subset(rng, geom.n, shape.p);
        let anti = random_subset(rng, geom.n, shape.q);
        let vec = shape.vector.then(|| rng.gen_range(0..geom.n) as u8);
        let deg = rng.gen_range(shape.min_t..=shape.max_t.min(geom.order));
        let t = random_tmono(rng, geom.m, deg);
        let f = random_basis(rng, geom, bounds);
        w.add_term(FormKey::new(hol, anti, vec), Coef::term(t, f, random_scalar(rng)));
    }
    w
}

pub fn random_geometry(rng: &mut impl Rng, kind: RingKind, bounds: &FuzzBounds) -> Geometry {
    let n = rng.gen_range(bounds.max_n.min(2)..=bounds.max_n);
    let m = rng.gen_range(1..=2);
    let order = rng.gen_range(bounds.max_order.min(2)..=bounds.max_order);
    Geometry { kind, n, m, order }
}

/// Vector-valued `(0,q)` form.
pub fn random_vector_form(
    rng: &mut impl Rng,
    geom: Geometry,
    q: usize,
    min_t: u32,
    max_t: u32,
    bounds: &FuzzBounds,
) -> VForm {
    random_form(rng, geom, Shape { p: 0, q, vector: true, min_t, max_t }, bounds)
}

/// Scalar form of a random bidegree.
pub fn random_scalar_form(rng: &mut impl Rng, geom: Geometry, bounds: &FuzzBounds) -> VForm {
    let p = rng.gen_range(0..=geom.n);
    let q = rng.gen_range(0..=geom.n);
    random_form(rng, geom, Shape { p, q, vector: false, min_t: 0, max_t: 1 }, bounds)
}

/// t-free first-order torus datum: constant (harmonic) part plus a `∂̄`-exact perturbation.
pub fn random_torus_cocycle(rng: &mut impl Rng, geom: Geometry, bounds: &FuzzBounds) -> VForm {
    assert_eq!(geom.kind, RingKind::Torus);
    let mut h = VForm::zero(geom);
    for _ in 0..rng.gen_range(1..=2) {
        let j = rng.gen_range(1..=geom.n);
        let a = rng.gen_range(1..=geom.n);
        h = h.add(&VForm::dvb(geom, j).with_value(a).expect("scalar").scale(&random_scalar(rng)));
    }
    let mut b = VForm::zero(geom);
    for _ in 0..rng.gen_range(1..=2) {
        let f = random_basis(rng, geom, bounds);
        let a = rng.gen_range(1..=geom.n);
        b = b.add(&VForm::function(geom, f, TMono::one(geom.m), random_scalar(rng)).with_value(a).expect("scalar"));
    }
    h.add(&dbar(&b))
}

/// Identity inputs appropriate for `name`.
pub fn random_identity_inputs(rng: &mut impl Rng, name: &str, geom: Geometry, bounds: &FuzzBounds) -> IdentityInputs {
    let qmax = geom.n.min(2);
    let degree_one = matches!(name, "I-2.7.00" | "I-2.7.3" | "I-2.7.8" | "I-2.7.9");
    let pick_q = |rng: &mut dyn rand::RngCore| {
        if degree_one {
            1
        } else {
            rng.gen_range(if name == "I-kodd" { 1 } else { 0 }..=qmax)
        }
    };
    let q1 = pick_q(rng);
    let q2 = pick_q(rng);
    let xi = random_vector_form(rng, geom, q1, 0, 1, bounds);
    let xi2 = random_vector_form(rng, geom, q2, 0, 1, bounds);
    let omega = if name == "I-kodd" && q1 % 2 == 0 {
        let q = rng.gen_range(0..=geom.n);
        random_form(rng, geom, Shape { p: 0, q, vector: false, min_t: 0, max_t: 1 }, bounds)
    } else {
        // contractions need holomorphic degree
        let p = rng.gen_range(1..=geom.n);
        let q = rng.gen_range(0..=geom.n);
        random_form(rng, geom, Shape { p, q, vector: false, min_t: 0, max_t: 1 }, bounds)
    };
    let eta = random_scalar_form(rng, geom, bounds);
    IdentityInputs::new(xi, xi2, omega, eta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

/// A failing case, with inputs in canonical text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub identity: &'static str,
    pub case: u64,
    pub geometry: Geometry,
    pub xi: String,
    pub xi2: String,
    pub omega: String,
    pub eta: String,
    pub difference: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub seed: u64,
    pub count: u64,
    pub tallies: Vec<Tally>,
    pub counterexamples: Vec<Counterexample>,
}

impl FuzzReport {
    pub fn all_passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "count": self.count,
            "identities": self.tallies.iter().map(|t| json!({"name": t.name, "passed": t.passed, "failed": t.failed})).collect::<Vec<_>>(),
            "counterexamples": self.counterexamples.iter().map(|c| json!({
                "identity": c.identity,
                "case": c.case,
                "geometry": geometry_json(&c.geometry),
                "inputs": {"xi": c.xi, "xi2": c.xi2, "omega": c.omega, "eta": c.eta},
                "difference": c.difference,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn geometry_json(g: &Geometry) -> Value {
    json!({"kind": g.kind.name(), "n": g.n, "m": g.m, "order": g.order})
}

fn evaluate(name: &str, inp: &IdentityInputs, mutation: Mutation) -> Result<(&'static str, VForm)> {
    let (id, lhs, rhs) = identity_sides(name, inp)?;
    let rhs = if mutation == Mutation::SignFlip && id == "I-2.7.7" { rhs.neg() } else { rhs };
    Ok((id, lhs.sub(&rhs)))
}

/// Runs every identity on `count` cases per geometry kind (chart on even cases, torus on odd).
pub fn fuzz_identities(seed: u64, count: u64, bounds: FuzzBounds, mutation: Mutation) -> Result<FuzzReport> {
    let mut tallies: Vec<Tally> = IDENTITY_NAMES.iter().map(|&name| Tally { name, passed: 0, failed: 0 }).collect();
    let mut counterexamples = Vec::new();
    for case in 0..count {
        let mut rng = case_rng(seed, case);
        let kind = if case % 2 == 0 { RingKind::Chart } else { RingKind::Torus };
        let geom = random_geometry(&mut rng, kind, &bounds);
        for tally in tallies.iter_mut() {
            let inp = random_identity_inputs(&mut rng, tally.name, geom, &bounds);
            let (id, diff) = evaluate(tally.name, &inp, mutation)?;
            if diff.is_zero() {
                tally.passed += 1;
            } else {
                tally.failed += 1;
                counterexamples.push(Counterexample {
                    identity: id,
                    case,
                    geometry: geom,
                    xi: inp.xi.render(),
                    xi2: inp.xi2.render(),
                    omega: inp.omega.render(),
                    eta: inp.eta.render(),
                    difference: diff.render(),
                });
            }
        }
    }
    Ok(FuzzReport { seed, count, tallies, counterexamples })
}

/// Re-parses a counterexample and evaluates it again; `true` when it still fails.
pub fn recheck(c: &Counterexample, mutation: Mutation) -> Result<bool> {
    let env = Env::new();
    let p = |s: &str| parse_expression(s, c.geometry, &env);
    let inp = IdentityInputs::new(p(&c.xi)?, p(&c.xi2)?, p(&c.omega)?, p(&c.eta)?);
    Ok(!evaluate(c.identity, &inp, mutation)?.1.is_zero())
}
