//! Scenario files and command dispatch for the `kuranishi` binary.
//!
//! A scenario fixes a geometry, a list of named definitions in the expression language,
//! one command and its inputs. Running it yields a JSON report whose keys are sorted, so
//! the same scenario always serializes to the same bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;
use serde_json::{json, Value};

use kuranishi_core::calculus::dbar;
use kuranishi_core::calculus::{exp_neg_lie, SPoly};
use kuranishi_core::fuzz::{fuzz_identities, geometry_json, FuzzBounds, Mutation};
use kuranishi_core::hodge::harmonic_projection;
use kuranishi_core::kuranishi::{
    dbar_xi_operator, extend_class, gauge_flow_defect, gauge_transform, gauss_manin, local_gauge_to_kuranishi,
    mc_residual, mc_solve, obstruction_class, theorem41_certificate,
};
use kuranishi_core::parse::{parse_expression, parse_ideal, Env};
use kuranishi_core::submanifold::{pair_obstruction_cocycle, theorem43_certificate, Subtorus};
use kuranishi_core::{GaussRat, Geometry, MonomialIdeal, RingKind, VForm};

/// The verbs understood by the runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Identities,
    McSolve,
    Obstruction,
    Gauge,
    Pairing41,
    Pairing43,
    PairCocycle,
    Gm,
    Extend,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Identities,
        Command::McSolve,
        Command::Obstruction,
        Command::Gauge,
        Command::Pairing41,
        Command::Pairing43,
        Command::PairCocycle,
        Command::Gm,
        Command::Extend,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Identities => "identities",
            Command::McSolve => "mc-solve",
            Command::Obstruction => "obstruction",
            Command::Gauge => "gauge",
            Command::Pairing41 => "pairing41",
            Command::Pairing43 => "pairing43",
            Command::PairCocycle => "pair-cocycle",
            Command::Gm => "gm",
            Command::Extend => "extend",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Scenario(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryKind {
    Chart,
    #[default]
    Torus,
}

/// One named form, parsed in order so later definitions may use earlier ones.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Definition {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub geometry: GeometryKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default)]
    pub definitions: Vec<Definition>,
    pub command: Option<Command>,
    pub ideal: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub count: Option<u64>,
    /// Role name to expression, e.g. `"xi": "t*dvb1@d(2)"`.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    pub subtorus: Option<Vec<usize>>,
    /// 1-based parameter index for `gm`.
    pub parameter: Option<usize>,
    /// Harness fault for `identities`: `"sign-flip"`.
    pub mutation: Option<String>,
}

fn default_n() -> usize {
    2
}

fn default_m() -> usize {
    1
}

fn default_order() -> u32 {
    4
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            geometry: GeometryKind::Torus,
            n: default_n(),
            m: default_m(),
            order: default_order(),
            definitions: Vec::new(),
            command: None,
            ideal: None,
            seed: 0,
            count: None,
            inputs: BTreeMap::new(),
            subtorus: None,
            parameter: None,
            mutation: None,
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Scenario(e.to_string()))
    }

    pub fn geom(&self) -> Geometry {
        match self.geometry {
            GeometryKind::Chart => Geometry::chart(self.n, self.m, self.order),
            GeometryKind::Torus => Geometry::torus(self.n, self.m, self.order),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error(transparent)]
    Engine(#[from] kuranishi_core::Error),
}

impl CliError {
    /// 2 for malformed input, 3 for failures inside the engine.
    pub fn exit_code(&self) -> i32 {
        use kuranishi_core::Error as E;
        match self {
            CliError::Scenario(_) => 2,
            CliError::Engine(E::Parse { .. } | E::Type { .. } | E::InvalidInput(_) | E::UnknownIdentity(_)) => 2,
            CliError::Engine(_) => 3,
        }
    }
}

/// A finished run: the JSON report and whether its certificate held.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    /// Pretty-printed report with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

struct Context<'a> {
    scenario: &'a Scenario,
    geom: Geometry,
    env: Env,
}

impl Context<'_> {
    fn input(&self, role: &str) -> Result<VForm, CliError> {
        let text =
            self.scenario.inputs.get(role).ok_or_else(|| CliError::Scenario(format!("missing input `{role}`")))?;
        parse_expression(text, self.geom, &self.env).map_err(|e| match e {
            kuranishi_core::Error::Parse { line, col, msg } => {
                CliError::Scenario(format!("input `{role}`, line {line}, column {col}: {msg}"))
            }
            other => other.into(),
        })
    }

    fn ideal(&self) -> Result<MonomialIdeal, CliError> {
        let text = self.scenario.ideal.as_deref().ok_or_else(|| CliError::Scenario("missing ideal".into()))?;
        Ok(parse_ideal(text, self.geom.m)?)
    }

    fn subtorus(&self) -> Result<Subtorus, CliError> {
        let s = self.scenario.subtorus.as_ref().ok_or_else(|| CliError::Scenario("missing subtorus".into()))?;
        Ok(Subtorus::new(self.geom, s)?)
    }
}

fn spoly_json(p: &SPoly) -> Value {
    Value::Array(p.coeffs.iter().map(|c| Value::String(c.render())).collect())
}

/// Runs a scenario; `command` overrides the scenario's own command field.
pub fn run_scenario(scenario: &Scenario, command: Option<Command>) -> Result<Outcome, CliError> {
    let command = command.or(scenario.command).ok_or_else(|| CliError::Scenario("no command given".into()))?;
    if scenario.n == 0 || scenario.m == 0 {
        return Err(CliError::Scenario("n and m must be positive".into()));
    }
    let geom = scenario.geom();
    let mut env = Env::new();
    for def in &scenario.definitions {
        let value = parse_expression(&def.expr, geom, &env).map_err(|e| match e {
            kuranishi_core::Error::Parse { line, col, msg } => {
                CliError::Scenario(format!("definition `{}`, line {line}, column {col}: {msg}", def.name))
            }
            other => other.into(),
        })?;
        env.insert(def.name.clone(), value);
    }
    let ctx = Context { scenario, geom, env };
    let (result, passed) = dispatch(command, &ctx)?;
    let report = json!({
        "command": command.name(),
        "geometry": geometry_json(&geom),
        "passed": passed,
        "result": result,
    });
    Ok(Outcome { report, passed })
}

fn dispatch(command: Command, ctx: &Context<'_>) -> Result<(Value, bool), CliError> {
    let geom = ctx.geom;
    match command {
        Command::Identities => {
            let mutation = match ctx.scenario.mutation.as_deref() {
                None | Some("none") => Mutation::None,
                Some("sign-flip") => Mutation::SignFlip,
                Some(other) => return Err(CliError::Scenario(format!("unknown mutation `{other}`"))),
            };
            let bounds = FuzzBounds { max_n: geom.n, max_order: geom.order, ..FuzzBounds::default() };
            let report = fuzz_identities(ctx.scenario.seed, ctx.scenario.count.unwrap_or(200), bounds, mutation)?;
            Ok((report.to_json(), report.all_passed()))
        }
        Command::McSolve => {
            let (xi, report) = mc_solve(&ctx.input("xi1")?)?;
            let residual = mc_residual(xi.xi());
            let passed = report.is_zero() && residual.is_zero();
            Ok((
                json!({"xi": xi.xi().render(), "residual": residual.render(), "obstructions": report.to_json()}),
                passed,
            ))
        }
        Command::Obstruction => {
            let report = obstruction_class(&ctx.input("xi")?, &ctx.ideal()?)?;
            Ok((report.to_json(), true))
        }
        Command::Gauge => gauge(ctx),
        Command::Pairing41 => {
            let cert = theorem41_certificate(&ctx.input("xi")?, &ctx.input("omega0")?, &ctx.ideal()?)?;
            Ok((cert.to_json(), cert.holds()))
        }
        Command::Pairing43 => {
            let cert =
                theorem43_certificate(&ctx.input("xi")?, &ctx.subtorus()?, &ctx.input("omega0")?, &ctx.ideal()?)?;
            Ok((cert.to_json(), cert.consistent()))
        }
        Command::PairCocycle => {
            let y = ctx.subtorus()?;
            let cocycle = pair_obstruction_cocycle(&ctx.input("xi")?, &y, &ctx.ideal()?)?;
            let tangential = y.normal_part(&cocycle.combined).is_zero();
            let mut report = cocycle.to_json();
            report["combinedTangential"] = json!(tangential);
            Ok((report, tangential))
        }
        Command::Gm => {
            let k = ctx.scenario.parameter.unwrap_or(1);
            let (first, second) = gauss_manin(&ctx.input("xi")?, &ctx.input("omega")?, k)?;
            Ok((json!({"parameter": k, "derivative": first.render(), "contraction": second.render()}), true))
        }
        Command::Extend => {
            let w = extend_class(&ctx.input("xi")?, &ctx.input("omega0")?, &ctx.ideal()?)?;
            let del_closed = kuranishi_core::calculus::del(&w).is_zero();
            let harmonic = if geom.kind == RingKind::Torus { harmonic_projection(&w)?.render() } else { String::new() };
            Ok((json!({"omega": w.render(), "delClosed": del_closed, "harmonic": harmonic}), del_closed))
        }
    }
}

/// With input `beta` on a chart: the Kuranishi data of `e^{L_β}`. Otherwise the gauge family
/// of `xi` under `alpha`, as a polynomial in `s`.
fn gauge(ctx: &Context<'_>) -> Result<(Value, bool), CliError> {
    let geom = ctx.geom;
    if ctx.scenario.inputs.contains_key("beta") {
        let beta = ctx.input("beta")?;
        let xi = local_gauge_to_kuranishi(&beta)?.into_inner();
        let residual = mc_residual(&xi);
        let mut annihilated = Vec::new();
        for l in 1..=geom.n {
            let f = exp_neg_lie(&beta, &VForm::v(geom, l))?;
            annihilated.push(dbar_xi_operator(&xi, &f).is_zero());
        }
        let passed = residual.is_zero() && annihilated.iter().all(|&b| b);
        return Ok((
            json!({"xi": xi.render(), "residual": residual.render(), "coordinatesAnnihilated": annihilated}),
            passed,
        ));
    }
    let xi = ctx.input("xi")?;
    let alpha = ctx.input("alpha")?;
    let family = gauge_transform(&xi, &alpha)?;
    let defect = gauge_flow_defect(&family, &alpha);
    let at_one = family.eval(&GaussRat::one());
    let mut report = json!({
        "family": spoly_json(&family),
        "flowDefect": spoly_json(&defect),
        "atOne": at_one.render(),
        "dbarAlpha": dbar(&alpha).render(),
    });
    let mut passed = defect.is_zero();
    if ctx.scenario.ideal.is_some() {
        let a = ctx.ideal()?;
        let before = mc_residual(&xi).in_ideal(&a);
        let after = mc_residual(&at_one).in_ideal(&a);
        report["integrableBefore"] = json!(before);
        report["integrableAfter"] = json!(after);
        passed &= !before || after;
    }
    Ok((report, passed))
}
