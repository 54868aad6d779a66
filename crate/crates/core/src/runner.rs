//! Verification suites behind the `hypplane` binary, with JSON reports.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{CyclotomicSeven, QuadraticField};
use crate::cusps::{self, CuspContext, CuspGroup, CuspVerdict};
use crate::cycalg::{standard, CyclicAlgebra};
use crate::example7;
use crate::exactfield::{FieldElement, TowerMap};
use crate::hermplane::{GroupMatrix, HyperbolicPlane, Membership, Order, PlaneVector};
use crate::linalg;
use crate::moduli::{self, LatticeSpec, TCase};
use crate::sampling::{self, Rng64};
use crate::tubedomain::{self, Realization, ResidualReport};

pub const CONFIG_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Internal(_) => 3,
        }
    }
}

fn internal<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Internal(e.to_string())
}

/// Optional JSON config document; command-line flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: Option<u32>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub samples: BTreeMap<String, usize>,
}

/// Sample-count keys with their defaults.
pub const SAMPLE_DEFAULTS: &[(&str, usize)] = &[
    ("relations", 100),
    ("matrix_rep", 500),
    ("involution", 300),
    ("unitary", 500),
    ("determinant", 300),
    ("sl2", 200),
    ("completion", 200),
    ("domain", 100),
    ("subdomain", 200),
    ("alternating", 200),
    ("phi", 200),
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerance: f64,
    pub samples: BTreeMap<String, usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: DEFAULT_SEED, tolerance: tubedomain::DEFAULT_TOLERANCE, samples: BTreeMap::new() }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<(Self, ConfigFile), RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        let file: ConfigFile = serde_json::from_str(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        if let Some(v) = file.version {
            if v != CONFIG_VERSION {
                return Err(RunError::Config(format!("unsupported config version {v}")));
            }
        }
        let mut cfg = RunConfig::default();
        if let Some(s) = file.seed {
            cfg.seed = s;
        }
        if let Some(t) = file.tolerance {
            cfg.tolerance = t;
        }
        cfg.samples = file.samples.clone();
        Ok((cfg, file))
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(RunError::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        for (k, &n) in &self.samples {
            if !SAMPLE_DEFAULTS.iter().any(|(name, _)| name == k) {
                return Err(RunError::Config(format!("unknown sample key {k:?}")));
            }
            if n == 0 {
                return Err(RunError::Config(format!("sample count for {k:?} must be positive")));
            }
        }
        Ok(())
    }

    pub fn samples(&self, key: &str) -> usize {
        self.samples
            .get(key)
            .copied()
            .or_else(|| SAMPLE_DEFAULTS.iter().find(|(k, _)| *k == key).map(|(_, n)| *n))
            .unwrap_or(1)
    }

    fn rng(&self, stream: u64) -> Rng64 {
        sampling::rng(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream))
    }
}

/// How a check relates to the mathematics it verifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    /// A stated result; failure means the statement does not hold as computed.
    Claim,
    /// Agreement with an independent computation or a tabulated value.
    Oracle,
    /// A structural contract of the implementation.
    Contract,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: Anchor,
    pub status: Status,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: Anchor, pass: bool, detail: Value) -> Self {
        Check { name: name.into(), anchor, status: if pass { Status::Pass } else { Status::Fail }, detail }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn attempt(name: &str, anchor: Anchor, f: impl FnOnce() -> Result<(bool, Value), String>) -> Check {
    match f() {
        Ok((pass, detail)) => Check::new(name, anchor, pass, detail),
        Err(e) => Check::new(name, anchor, false, json!({ "error": e })),
    }
}

fn decimal(x: f64) -> String {
    format!("{x:.3e}")
}

fn residual(r: &ResidualReport) -> Value {
    json!({
        "check": r.check,
        "samples": r.samples,
        "max_residual": decimal(r.max_residual),
        "tolerance": decimal(r.tolerance),
        "pass": r.pass,
    })
}

fn residual_check(name: &str, r: ResidualReport) -> Check {
    Check::new(name, Anchor::Claim, r.pass, residual(&r))
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config_version: u32,
    pub library_version: String,
    pub seed: u64,
    pub tolerance: String,
    pub checks: Vec<Check>,
    pub result: Value,
    pub pass: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example7Mode {
    Verify,
    Probe { bound: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuliCommand {
    Suite,
    Gram { case: TCase, disc: Option<i64>, quaternion: (i64, i64) },
    Split { case: TCase, quaternion: (i64, i64) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Algebra,
    Unitary,
    Cusps { disc: Option<i64> },
    Domains,
    Example7(Example7Mode),
    Moduli(ModuliCommand),
    All,
}

impl Command {
    /// Suite names accepted by `run --suite`.
    pub fn from_suite(name: &str) -> Result<Self, RunError> {
        Ok(match name {
            "algebra" => Command::Algebra,
            "unitary" => Command::Unitary,
            "cusps" => Command::Cusps { disc: None },
            "domains" => Command::Domains,
            "example7" => Command::Example7(Example7Mode::Verify),
            "moduli" => Command::Moduli(ModuliCommand::Suite),
            "all" => Command::All,
            other => return Err(RunError::Config(format!("unknown suite {other:?}"))),
        })
    }

    pub fn echo(&self) -> String {
        match self {
            Command::Algebra => "algebra".into(),
            Command::Unitary => "unitary".into(),
            Command::Cusps { disc: None } => "cusps".into(),
            Command::Cusps { disc: Some(d) } => format!("cusps --disc {d}"),
            Command::Domains => "domains".into(),
            Command::Example7(Example7Mode::Verify) => "example7 verify".into(),
            Command::Example7(Example7Mode::Probe { bound }) => format!("example7 probe --bound {bound}"),
            Command::Moduli(ModuliCommand::Suite) => "moduli".into(),
            Command::Moduli(ModuliCommand::Gram { case, disc, quaternion }) => {
                let mut s = format!("moduli gram --case {}", case_name(*case));
                match (case, disc) {
                    (TCase::D1, Some(d)) => s.push_str(&format!(" --disc {d}")),
                    (TCase::D2a | TCase::D2b, _) => s.push_str(&format!(" --a {} --b {}", quaternion.0, quaternion.1)),
                    _ => {}
                }
                s
            }
            Command::Moduli(ModuliCommand::Split { case, quaternion }) => {
                let mut s = format!("moduli split --case {}", case_name(*case));
                if matches!(case, TCase::D2a | TCase::D2b) {
                    s.push_str(&format!(" --a {} --b {}", quaternion.0, quaternion.1));
                }
                s
            }
            Command::All => "all".into(),
        }
    }
}

fn case_name(c: TCase) -> &'static str {
    match c {
        TCase::D1 => "d1",
        TCase::D2a => "d2a",
        TCase::D2b => "d2b",
        TCase::D3 => "d3",
    }
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Report, RunError> {
    cfg.validate()?;
    let (checks, result) = match command {
        Command::Algebra => (algebra_suite(cfg)?, Value::Null),
        Command::Unitary => (unitary_suite(cfg)?, Value::Null),
        Command::Cusps { disc: None } => (cusps_suite(cfg)?, Value::Null),
        Command::Cusps { disc: Some(d) } => cusps_for_disc(*d)?,
        Command::Domains => (domains_suite(cfg)?, Value::Null),
        Command::Example7(Example7Mode::Verify) => example7_verify()?,
        Command::Example7(Example7Mode::Probe { bound }) => example7_probe(*bound)?,
        Command::Moduli(ModuliCommand::Suite) => (moduli_suite(cfg)?, Value::Null),
        Command::Moduli(ModuliCommand::Gram { case, disc, quaternion }) => moduli_gram(*case, *disc, *quaternion)?,
        Command::Moduli(ModuliCommand::Split { case, quaternion }) => moduli_split(*case, *quaternion)?,
        Command::All => {
            let mut checks = Vec::new();
            checks.extend(algebra_suite(cfg)?);
            checks.extend(unitary_suite(cfg)?);
            checks.extend(cusps_suite(cfg)?);
            checks.extend(domains_suite(cfg)?);
            checks.extend(example7_verify()?.0);
            checks.extend(moduli_suite(cfg)?);
            (checks, Value::Null)
        }
    };
    let pass = checks.iter().all(Check::passed);
    Ok(Report {
        command: command.echo(),
        config_version: CONFIG_VERSION,
        library_version: env!("CARGO_PKG_VERSION").into(),
        seed: cfg.seed,
        tolerance: decimal(cfg.tolerance),
        checks,
        result,
        pass,
    })
}

/// The standard test planes and algebras used by the suites.
pub struct Catalog {
    pub seven: CyclotomicSeven,
    pub d7: Arc<CyclicAlgebra>,
    pub k7: HyperbolicPlane,
    pub k20: HyperbolicPlane,
    pub quat: HyperbolicPlane,
    pub d7c: HyperbolicPlane,
}

impl Catalog {
    pub fn new() -> Result<Self, RunError> {
        let seven = CyclotomicSeven::new();
        let quadratic = |d: i64| -> Result<HyperbolicPlane, RunError> {
            HyperbolicPlane::new(standard::quadratic(&QuadraticField::new(d).map_err(internal)?)).map_err(internal)
        };
        Ok(Catalog {
            d7: standard::seventh_algebra(&seven),
            k7: quadratic(-7)?,
            k20: quadratic(-20)?,
            quat: HyperbolicPlane::new(standard::quaternion(2, 3).map_err(internal)?).map_err(internal)?,
            d7c: HyperbolicPlane::new(standard::seventh_companion(&seven)).map_err(internal)?,
            seven,
        })
    }

    pub fn planes(&self) -> [&HyperbolicPlane; 4] {
        [&self.k7, &self.k20, &self.quat, &self.d7c]
    }
}

fn count_failures(n: usize, mut ok: impl FnMut() -> bool) -> usize {
    (0..n).filter(|_| !ok()).count()
}

fn sample_detail(samples: usize, failures: usize) -> Value {
    json!({ "samples": samples, "failures": failures })
}

pub fn algebra_suite(cfg: &RunConfig) -> Result<Vec<Check>, RunError> {
    let cat = Catalog::new()?;
    let mut rng = cfg.rng(1);
    let mut out = Vec::new();
    for a in [&cat.d7, cat.quat.algebra()] {
        let d = a.degree() as u32;
        let e = a.e();
        out.push(Check::new(
            format!("e^d = gamma in {}", a.label()),
            Anchor::Claim,
            e.pow(d) == a.from_k(a.gamma()),
            json!({ "e^d": e.pow(d).to_string(), "gamma": a.gamma().to_string() }),
        ));
        let n = cfg.samples("relations");
        let bad = count_failures(n, || {
            let z = sampling::field_element(&mut rng, a.l(), 9, 5);
            &e * &a.from_l(&z) == &a.from_l(&a.sigma().apply(&z)) * &e
        });
        out.push(Check::new(format!("e z = sigma(z) e in {}", a.label()), Anchor::Claim, bad == 0, sample_detail(n, bad)));
        let n = cfg.samples("matrix_rep");
        let bad = count_failures(n, || {
            let x = sampling::algebra_element(&mut rng, a, 5, 3);
            let y = sampling::algebra_element(&mut rng, a, 5, 3);
            a.matrix_rep(&(&x * &y)) == linalg::matmul(&a.matrix_rep(&x), &a.matrix_rep(&y))
                && a.from_matrix(&a.matrix_rep(&x)).ok().as_ref() == Some(&x)
        });
        out.push(Check::new(format!("matrix_rep is a homomorphism on {}", a.label()), Anchor::Claim, bad == 0, sample_detail(n, bad)));
    }
    for p in [&cat.d7c, &cat.quat, &cat.k7] {
        let a = p.algebra();
        let inv = a.involution().ok_or_else(|| internal("missing involution"))?;
        let n = cfg.samples("involution");
        let bad = count_failures(n, || {
            let x = sampling::algebra_element(&mut rng, a, 5, 3);
            let y = sampling::algebra_element(&mut rng, a, 5, 3);
            let z = sampling::field_element(&mut rng, a.l(), 5, 3);
            x.bar().bar() == x && (&x * &y).bar() == &y.bar() * &x.bar() && a.from_l(&z).bar() == a.from_l(&inv.rho.apply(&z))
        });
        out.push(Check::new(format!("involution axioms on {}", a.label()), Anchor::Claim, bad == 0, sample_detail(n, bad)));
    }
    let a = cat.quat.algebra();
    let n = cfg.samples("involution");
    let bad = count_failures(n, || {
        let x = sampling::algebra_element(&mut rng, a, 5, 3);
        let (Ok(t), Ok(nm)) = (x.reduced_trace(), x.reduced_norm()) else { return false };
        &x + &x.bar() == a.from_k(&t) && &x * &x.bar() == a.from_k(&nm)
    });
    out.push(Check::new("quaternion x + J(x) = Tr(x) and x J(x) = N(x)", Anchor::Claim, bad == 0, sample_detail(n, bad)));
    for p in [&cat.k7, &cat.d7c] {
        let d = p.algebra().degree();
        out.push(attempt(&format!("A = A+ + qA+ with dim A+ = dim qA+ = d^2 in {}", p.algebra().label()), Anchor::Claim, || {
            let s = p.algebra().plus_minus_split().map_err(|e| e.to_string())?;
            let pass = s.dim_plus == d * d && s.dim_minus == d * d && s.direct_sum && s.q_squared_central;
            Ok((pass, json!({ "dim_plus": s.dim_plus, "dim_minus": s.dim_minus, "direct_sum": s.direct_sum, "d": d })))
        }));
    }
    Ok(out)
}

fn perturb(g: &GroupMatrix, z: crate::cycalg::AlgebraElement, slot: usize) -> GroupMatrix {
    let mut h = g.clone();
    match slot {
        0 => h.a = &h.a + &z,
        1 => h.b = &h.b + &z,
        2 => h.c = &h.c + &z,
        _ => h.d = &h.d + &z,
    }
    h
}

fn integral_special_unitary(p: &HyperbolicPlane, rng: &mut Rng64, steps: usize) -> GroupMatrix {
    use rand::Rng;
    let a = p.algebra();
    let mut g = GroupMatrix::identity(a);
    for _ in 0..steps {
        let x = sampling::integral_algebra_element(rng, a, 2);
        let s = &x - &x.bar();
        let f = if rng.gen_bool(0.5) { p.upper_unipotent(&s) } else { p.lower_unipotent(&s) };
        g = g.mul(&f);
    }
    g
}

/// Outcome of completing integral isotropic vectors over ℚ(√−7).
#[derive(Clone, Debug, Default, Serialize)]
pub struct CompletionSummary {
    pub samples: usize,
    pub missing_bezout: usize,
    pub errors: usize,
    pub unitary: usize,
    pub integral: usize,
    pub bottom_row: usize,
    pub special: usize,
    /// Vectors (1, 0)·g whose completions have determinant −1.
    pub determinant_minus_one: usize,
    /// Vectors (0, 1)·g that are not special.
    pub principal_orbit_not_special: usize,
}

/// Completes ξ = (0, 1)·g and ξ = (1, 0)·g for random integral g in SU, alternately.
pub fn completion_summary(p: &HyperbolicPlane, n: usize, rng: &mut Rng64) -> Result<CompletionSummary, RunError> {
    let ctx = CuspContext::new(p).map_err(internal)?;
    let a = p.algebra();
    let order = Order::natural(a);
    let minus_one = FieldElement::from_int(a.k_map().source(), -1);
    let mut s = CompletionSummary { samples: n, ..Default::default() };
    for i in 0..n {
        let g = integral_special_unitary(p, rng, 4);
        let start = if i % 2 == 0 { PlaneVector::new(a.zero(), a.one()) } else { PlaneVector::new(a.one(), a.zero()) };
        let xi = start.times(&g);
        let Some((x, y)) = ctx.bezout(&xi) else {
            s.missing_bezout += 1;
            continue;
        };
        let Ok(m) = p.integral_complete(&xi, (&x, &y), &order) else {
            s.errors += 1;
            continue;
        };
        s.unitary += p.is_unitary(&m) as usize;
        s.integral += (p.gamma_membership(&m, &order) == Membership::GammaOL) as usize;
        s.bottom_row += (m.rows()[1] == xi) as usize;
        let special = p.is_special(&m).map_err(internal)?;
        s.special += special as usize;
        if i % 2 == 0 {
            s.principal_orbit_not_special += (!special) as usize;
        } else if p.block_det(&m).map_err(internal)? == minus_one {
            s.determinant_minus_one += 1;
        }
    }
    Ok(s)
}

pub fn unitary_suite(cfg: &RunConfig) -> Result<Vec<Check>, RunError> {
    let cat = Catalog::new()?;
    let mut rng = cfg.rng(2);
    let mut out = Vec::new();
    let planes = cat.planes();
    let n = cfg.samples("unitary");
    let (mut pos_ok, mut neg_ok, mut skipped) = (0usize, 0usize, 0usize);
    for i in 0..n {
        let p = planes[i % planes.len()];
        let g = p.random_unitary(&mut rng, 3);
        let rel = p.unitary_relations(&g).iter().all(|&b| b);
        pos_ok += (p.is_unitary(&g) && rel) as usize;
        // skew perturbations of b or c can stay inside the group
        let h = loop {
            let z = sampling::nonzero_algebra_element(&mut rng, p.algebra(), 2, 2);
            let h = perturb(&g, z, i % 4);
            if !p.is_unitary(&h) {
                break h;
            }
            skipped += 1;
        };
        neg_ok += (!p.unitary_relations(&h).iter().all(|&b| b)) as usize;
    }
    out.push(Check::new(
        "unitary relations iff gHg* = H",
        Anchor::Claim,
        pos_ok == n && neg_ok == n,
        json!({ "positive_samples": n, "positive_ok": pos_ok, "negative_samples": n, "negative_ok": neg_ok, "perturbations_still_unitary": skipped }),
    ));
    let n = cfg.samples("determinant");
    let mut tested = 0;
    let bad = count_failures(n, || {
        let p = planes[tested % planes.len()];
        tested += 1;
        let a = p.algebra();
        let g = GroupMatrix::new(
            sampling::nonzero_algebra_element(&mut rng, a, 3, 2),
            sampling::algebra_element(&mut rng, a, 3, 2),
            sampling::algebra_element(&mut rng, a, 3, 2),
            sampling::algebra_element(&mut rng, a, 3, 2),
        );
        matches!((p.block_det(&g), p.dieudonne_det(&g)), (Ok(x), Ok(y)) if x == y)
    });
    out.push(Check::new("Dieudonne determinant equals block determinant", Anchor::Claim, bad == 0, sample_detail(n, bad)));
    let n = cfg.samples("sl2");
    for p in [&cat.k7, &cat.k20] {
        let bad = count_failures(n, || {
            let m1 = sampling::sl2_rational(&mut rng, 3, 4, 3);
            let m2 = sampling::sl2_rational(&mut rng, 3, 4, 3);
            let (Ok(g1), Ok(g2), Ok(g12)) = (p.sl2_to_su(&m1), p.sl2_to_su(&m2), p.sl2_to_su(&sampling::mat2_mul(&m1, &m2))) else {
                return false;
            };
            p.is_unitary(&g1) && p.is_special(&g1).unwrap_or(false) && g12 == g1.mul(&g2) && p.su_to_sl2(&g1).ok() == Some(m1)
        });
        out.push(Check::new(format!("SL2 -> SU isomorphism over {}", p.algebra().label()), Anchor::Claim, bad == 0, sample_detail(n, bad)));
    }
    let s = completion_summary(&cat.k7, cfg.samples("completion"), &mut rng)?;
    let n = s.samples;
    out.push(Check::new(
        "integral completion is unitary, integral, with prescribed bottom row",
        Anchor::Claim,
        s.missing_bezout == 0 && s.errors == 0 && s.unitary == n && s.integral == n && s.bottom_row == n,
        serde_json::to_value(&s).map_err(internal)?,
    ));
    out.push(Check::new(
        "integral completion is special",
        Anchor::Claim,
        s.special == n,
        json!({
            "samples": n,
            "special": s.special,
            "principal_orbit_not_special": s.principal_orbit_not_special,
            "determinant_minus_one": s.determinant_minus_one,
            "note": "the bottom row fixes the determinant; completions of (1,0)g have determinant -1",
        }),
    ));
    for (p, want) in [(&cat.k7, Some(1)), (&cat.d7c, Some(9)), (&cat.quat, None)] {
        let d = p.algebra().degree();
        out.push(attempt(&format!("unipotent radical dimension in {}", p.algebra().label()), if want.is_some() { Anchor::Claim } else { Anchor::Oracle }, || {
            let dim = p.unipotent_dimension().map_err(|e| e.to_string())?;
            // first-kind quaternion case: skew elements are the pure quaternions
            let expect = want.unwrap_or(3);
            Ok((dim == expect && (want.is_none() || dim == d * d), json!({ "dimension": dim, "expected": expect, "d": d })))
        }));
    }
    Ok(out)
}

fn quadratic_plane(disc: i64) -> Result<HyperbolicPlane, String> {
    let f = QuadraticField::new(disc).map_err(|e| e.to_string())?;
    HyperbolicPlane::new(standard::quadratic(&f)).map_err(|e| e.to_string())
}

fn qint_vector(ctx: &CuspContext, v: (cusps::QInt, cusps::QInt)) -> PlaneVector {
    let a = ctx.plane().algebra();
    let f = ctx.field();
    PlaneVector::new(a.from_l(&f.elt(v.0 .0, v.0 .1)), a.from_l(&f.elt(v.1 .0, v.1 .1)))
}

/// Brute-force orbit classes and whether the exact certificates separate them.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitComparison {
    pub disc: i64,
    pub height: i64,
    pub special: bool,
    pub vectors: usize,
    pub classes: usize,
    pub ideal_classes: usize,
    pub certificate_classes: usize,
    pub certificates_separate_orbits: bool,
}

pub fn orbit_comparison(disc: i64, height: i64, entry_bound: i64, special: bool) -> Result<OrbitComparison, String> {
    let ctx = CuspContext::new(&quadratic_plane(disc)?).map_err(|e| e.to_string())?;
    let bf = cusps::brute_force_cusps(disc, height, entry_bound, special);
    let mut by_component: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    let mut by_cert: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    let mut ideal_classes = BTreeSet::new();
    for (v, &c) in bf.vector_list.iter().zip(&bf.component) {
        let cert = ctx.certificate(&qint_vector(&ctx, *v)).map_err(|e| e.to_string())?;
        ideal_classes.insert(cert.ideal_class);
        let key = if special { format!("{cert:?}") } else { format!("{:?}", cert.ideal_class) };
        by_component.entry(c).or_default().insert(key.clone());
        by_cert.entry(key).or_default().insert(c);
    }
    Ok(OrbitComparison {
        disc,
        height,
        special,
        vectors: bf.vectors,
        classes: bf.classes,
        ideal_classes: ideal_classes.len(),
        certificate_classes: by_cert.len(),
        certificates_separate_orbits: by_component.values().all(|s| s.len() == 1) && by_cert.values().all(|s| s.len() == 1),
    })
}

pub fn cusps_suite(cfg: &RunConfig) -> Result<Vec<Check>, RunError> {
    let _ = cfg;
    let cat = Catalog::new()?;
    let mut out = Vec::new();
    for (disc, want, anchor) in [(-7, 1, Anchor::Claim), (-23, 3, Anchor::Oracle), (-20, 2, Anchor::Oracle), (-163, 1, Anchor::Oracle)] {
        out.push(attempt(&format!("class number of disc {disc}"), anchor, || {
            let h = cusps::class_number(disc).map_err(|e| e.to_string())?;
            Ok((h == want, json!({ "class_number": h, "expected": want })))
        }));
    }
    for p in [&cat.k7, &cat.quat, &cat.d7c] {
        out.push(attempt(&format!("cusp count of {}", p.algebra().label()), Anchor::Claim, || {
            let c = cusps::cusp_count(p).map_err(|e| e.to_string())?;
            Ok((c.count == 1, serde_json::to_value(&c).map_err(|e| e.to_string())?))
        }));
    }
    let su = orbit_comparison(-20, 5, 4, true);
    let u = orbit_comparison(-20, 5, 4, false);
    out.push(attempt("brute-force isotropic classes over Q(sqrt(-5)) at height 5", Anchor::Claim, || {
        let su = su.clone()?;
        Ok((su.classes == 2, serde_json::to_value(&su).map_err(|e| e.to_string())?))
    }));
    out.push(attempt("exact certificates separate brute-force orbits over Q(sqrt(-5))", Anchor::Oracle, || {
        let (su, u) = (su.clone()?, u.clone()?);
        Ok((su.certificates_separate_orbits && u.certificates_separate_orbits, json!({ "special": su, "unitary": u })))
    }));
    out.push(attempt("brute-force classes over Q(sqrt(-5)) match ideal classes", Anchor::Claim, || {
        let (su, u) = (su.clone()?, u.clone()?);
        Ok((
            su.classes == su.ideal_classes && u.classes == u.ideal_classes,
            json!({
                "special_group_classes": su.classes,
                "unitary_group_classes": u.classes,
                "ideal_classes": su.ideal_classes,
                "note": "special-group orbits are also separated by the completion determinant",
            }),
        ))
    }));
    Ok(out)
}

fn qint_json(v: (cusps::QInt, cusps::QInt)) -> Value {
    json!([[v.0 .0, v.0 .1], [v.1 .0, v.1 .1]])
}

/// Class number, reduced forms and verdicts between brute-force orbit representatives.
pub fn cusps_for_disc(disc: i64) -> Result<(Vec<Check>, Value), RunError> {
    let forms = cusps::reduced_forms(disc).map_err(|e| RunError::Config(e.to_string()))?;
    let h = cusps::class_number(disc).map_err(|e| RunError::Config(e.to_string()))?;
    let mut checks = vec![Check::new(
        "class number equals the number of reduced forms",
        Anchor::Contract,
        disc > 0 || h == forms.len(),
        json!({ "class_number": h, "reduced_forms": forms.len() }),
    )];
    let mut pairs = Vec::new();
    if disc < 0 {
        let ctx = quadratic_plane(disc).and_then(|p| CuspContext::new(&p).map_err(|e| e.to_string())).map_err(RunError::Config)?;
        let bf = cusps::brute_force_cusps(disc, 3, 2, true);
        let mut reps = BTreeMap::new();
        for (v, &c) in bf.vector_list.iter().zip(&bf.component) {
            reps.entry(c).or_insert(*v);
        }
        let reps: Vec<_> = reps.into_values().collect();
        let mut consistent = true;
        if let Some(&first) = reps.first() {
            let xi = qint_vector(&ctx, first);
            let cx = ctx.certificate(&xi).map_err(internal)?;
            for &other in &reps {
                let eta = qint_vector(&ctx, other);
                let ce = ctx.certificate(&eta).map_err(internal)?;
                let verdict = ctx.cusp_equivalent(&xi, &eta, CuspGroup::Special).map_err(internal)?;
                let mut entry = json!({ "xi": qint_json(first), "eta": qint_json(other) });
                match &verdict {
                    CuspVerdict::Equivalent { .. } => {
                        consistent &= cx == ce;
                        entry["verdict"] = json!("equivalent");
                        entry["witness"] = serde_json::to_value(&verdict).map_err(internal)?;
                    }
                    v => {
                        consistent &= cx != ce || matches!(v, CuspVerdict::Undetermined { .. });
                        entry["verdict"] = json!(match v {
                            CuspVerdict::DifferentIdealClasses { .. } => "different_ideal_classes",
                            CuspVerdict::DifferentDeterminants { .. } => "different_determinants",
                            _ => "undetermined",
                        });
                        entry["certificates"] = serde_json::to_value([&cx, &ce]).map_err(internal)?;
                    }
                }
                pairs.push(entry);
            }
        }
        checks.push(Check::new(
            "verdicts agree with certificates",
            Anchor::Contract,
            consistent,
            json!({ "orbit_representatives": reps.len(), "height": 3 }),
        ));
    }
    let result = json!({
        "disc": disc,
        "class_number": h,
        "representatives": forms.iter().map(|f| format!("({}, {}, {})", f.a, f.b, f.c)).collect::<Vec<_>>(),
        "pairs": pairs,
    });
    Ok((checks, result))
}

fn rationals_into(p: &HyperbolicPlane) -> TowerMap {
    TowerMap::from_rationals(p.algebra().l())
}

pub fn domains_suite(cfg: &RunConfig) -> Result<Vec<Check>, RunError> {
    let cat = Catalog::new()?;
    let mut rng = cfg.rng(4);
    let tol = cfg.tolerance;
    let n = cfg.samples("domain");
    let mut out = Vec::new();
    for p in cat.planes() {
        let d = p.algebra().degree();
        out.push(attempt(&format!("signature (d,d) of the form for {}", p.algebra().label()), Anchor::Claim, || {
            let sig = tubedomain::signature_of_form(p).map_err(|e| e.to_string())?;
            Ok((sig.iter().all(|&s| s == (d, d)), json!({ "signatures": sig, "d": d })))
        }));
    }
    for p in [&cat.k7, &cat.quat, &cat.d7c] {
        let label = p.algebra().label().to_string();
        let r = Realization::new(p).map_err(internal)?;
        out.push(residual_check(&format!("group action on {label}"), tubedomain::action_check(&r, n, &mut rng, tol)));
        out.push(residual_check(&format!("domain preservation on {label}"), tubedomain::domain_preservation_check(&r, n, &mut rng, tol)));
        let into = if p.algebra().degree() >= 3 { cat.seven.ell_in_l.clone() } else { rationals_into(p) };
        out.push(residual_check(&format!("formula agrees with Moebius action on {label}"), tubedomain::formula_check(&r, &into, n, &mut rng, tol)));
        if p.algebra().degree() >= 2 {
            let m = cfg.samples("subdomain");
            out.push(match tubedomain::subdomain_preserved(&r, &into, m, &mut rng, tol) {
                Ok(rep) => residual_check(&format!("subdomain preservation on {label}"), rep),
                Err(e) => Check::new(format!("subdomain preservation on {label}"), Anchor::Claim, false, json!({ "error": e.to_string() })),
            });
        }
        if p.algebra().degree() == 2 {
            out.push(match tubedomain::symplectic_conjugation_check(&r, 2 * n, &mut rng, tol) {
                Ok(rep) => residual_check(&format!("symplectic conjugation on {label}"), rep),
                Err(e) => Check::new(format!("symplectic conjugation on {label}"), Anchor::Claim, false, json!({ "error": e.to_string() })),
            });
        } else {
            out.push(match tubedomain::stabilizer_check(&r, n, &mut rng, tol) {
                Ok(rep) => residual_check(&format!("compact stabilizer fixes the base point on {label}"), rep),
                Err(e) => Check::new(format!("compact stabilizer on {label}"), Anchor::Claim, false, json!({ "error": e.to_string() })),
            });
        }
    }
    Ok(out)
}

/// Every certificate assertion becomes a check; the conclusions are checked against the stated ones.
pub fn example7_verify() -> Result<(Vec<Check>, Value), RunError> {
    let (ex, cert) = example7::full_certificate().map_err(internal)?;
    let mut checks: Vec<Check> = cert
        .all_assertions()
        .map(|a| Check::new(a.name.clone(), Anchor::Claim, a.holds, json!(a.detail)))
        .collect();
    let c = &cert.conclusions;
    checks.push(Check::new("D is a division algebra", Anchor::Claim, c.is_division_algebra == Some(true), json!(c.is_division_algebra)));
    checks.push(Check::new(
        "an involution of the second kind exists",
        Anchor::Claim,
        c.landherr_involution_exists == Some(true),
        json!({ "computed": c.landherr_involution_exists, "invariant_sum": cert.invariant_sum().to_string() }),
    ));
    checks.push(Check::new("the arithmetic quotient has 1 cusp", Anchor::Claim, c.cusp_count == Some(1), json!(c.cusp_count)));
    checks.push(Check::new("certificate re-verifies", Anchor::Contract, cert.reverify(), Value::Null));
    let cusp = example7::example_cusp_report(&ex).map_err(internal)?;
    let mut result = serde_json::to_value(&cert).map_err(internal)?;
    result["cusp_report"] = serde_json::to_value(&cusp).map_err(internal)?;
    Ok((checks, result))
}

pub fn example7_probe(bound: i64) -> Result<(Vec<Check>, Value), RunError> {
    if bound < 0 {
        return Err(RunError::Config(format!("probe bound must be nonnegative, got {bound}")));
    }
    let (ex, _) = example7::build_example();
    let probe = example7::norm_equation_probe(&ex, bound);
    let checks = vec![Check::new(
        "norm probe outcome is consistent with the 2-adic obstruction",
        Anchor::Contract,
        probe.witness.is_none() || !probe.two_inert_in_l,
        json!({ "outcome": probe.outcome, "two_inert_in_l": probe.two_inert_in_l }),
    )];
    Ok((checks, serde_json::to_value(&probe).map_err(internal)?))
}

fn plane_for_case(case: TCase, disc: Option<i64>, quaternion: (i64, i64)) -> Result<HyperbolicPlane, RunError> {
    match case {
        TCase::D1 => {
            let disc = disc.ok_or_else(|| RunError::Config("case d1 needs --disc".into()))?;
            quadratic_plane(disc).map_err(RunError::Config)
        }
        TCase::D2a | TCase::D2b => {
            let alg = standard::quaternion(quaternion.0, quaternion.1).map_err(|e| RunError::Config(e.to_string()))?;
            HyperbolicPlane::new(alg).map_err(|e| RunError::Config(e.to_string()))
        }
        TCase::D3 => HyperbolicPlane::new(standard::seventh_companion(&CyclotomicSeven::new())).map_err(internal),
    }
}

pub fn moduli_gram(case: TCase, disc: Option<i64>, quaternion: (i64, i64)) -> Result<(Vec<Check>, Value), RunError> {
    let p = plane_for_case(case, disc, quaternion)?;
    let t = moduli::make_t(&p, case).map_err(|e| RunError::Config(e.to_string()))?;
    let lat = LatticeSpec::natural(&p).map_err(internal)?;
    let rep = moduli::polarization_type(&lat, &t).map_err(internal)?;
    let mut checks = vec![Check::new("Gram matrix of E is alternating", Anchor::Claim, rep.antisymmetric, Value::Null)];
    if case == TCase::D1 && disc == Some(-7) {
        checks.push(Check::new(
            "principal polarization on O_K^2",
            Anchor::Claim,
            rep.principal,
            json!({ "elementary_divisors": rep.elementary_divisors.iter().map(|x| x.to_string()).collect::<Vec<_>>() }),
        ));
    }
    Ok((checks, serde_json::to_value(&rep).map_err(internal)?))
}

fn split_checks(alg: &Arc<CyclicAlgebra>, t: Option<&moduli::SkewHermitianT>) -> Result<(Vec<Check>, Value), String> {
    let x1 = PlaneVector::new(alg.one(), alg.zero());
    let x2 = PlaneVector::new(alg.zero(), alg.one());
    let r = moduli::lattice_splitting(alg, (&x1, &x2), t).map_err(|e| e.to_string())?;
    let d = alg.degree();
    let checks = vec![
        Check::new(
            format!("lattice splits into d stable summands in {}", alg.label()),
            Anchor::Claim,
            r.summands == d && r.direct_sum && r.stable.iter().all(|&s| s) && r.order_stable,
            json!({ "summands": r.summands, "ranks": r.summand_ranks, "direct_sum": r.direct_sum }),
        ),
    ];
    Ok((checks, serde_json::to_value(&r).map_err(|e| e.to_string())?))
}

pub fn moduli_split(case: TCase, quaternion: (i64, i64)) -> Result<(Vec<Check>, Value), RunError> {
    if case == TCase::D1 {
        return Err(RunError::Config("splitting is defined for d >= 2".into()));
    }
    let p = plane_for_case(case, None, quaternion)?;
    let t = moduli::make_t(&p, case).map_err(|e| RunError::Config(e.to_string()))?;
    let (mut checks, mut result) = split_checks(p.algebra(), Some(&t)).map_err(internal)?;
    if case == TCase::D3 {
        let d7 = standard::seventh_algebra(&CyclotomicSeven::new());
        let (c, r) = split_checks(&d7, None).map_err(internal)?;
        checks.extend(c);
        result = json!({ "companion": result, "algebra": r });
    } else {
        let s = moduli::split_quaternion_basis(&p).map_err(internal)?;
        result = json!({ "splitting": result, "quaternion_basis": s });
    }
    Ok((checks, result))
}

pub fn moduli_suite(cfg: &RunConfig) -> Result<Vec<Check>, RunError> {
    let cat = Catalog::new()?;
    let mut rng = cfg.rng(6);
    let tol = cfg.tolerance;
    let mut out = Vec::new();
    let cases = [(&cat.k7, TCase::D1), (&cat.k20, TCase::D1), (&cat.quat, TCase::D2a), (&cat.quat, TCase::D2b), (&cat.d7c, TCase::D3)];
    for (p, case) in cases {
        let label = format!("{} ({})", p.algebra().label(), case_name(case));
        let t = match moduli::make_t(p, case) {
            Ok(t) => t,
            Err(e) => {
                out.push(Check::new(format!("skew-hermitian T for {label}"), Anchor::Contract, false, json!({ "error": e.to_string() })));
                continue;
            }
        };
        let a = p.algebra();
        let n = if a.degree() >= 3 { cfg.samples("alternating").min(40) } else { cfg.samples("alternating") };
        let bad = count_failures(n, || {
            let v = |rng: &mut Rng64| PlaneVector::new(sampling::algebra_element(rng, a, 3, 2), sampling::algebra_element(rng, a, 3, 2));
            let (x, y) = (v(&mut rng), v(&mut rng));
            matches!(moduli::riemann_form(&x, &x, &t), Ok(z) if z.is_zero())
                && matches!((moduli::riemann_form(&x, &y, &t), moduli::riemann_form(&y, &x, &t)), (Ok(u), Ok(w)) if u == -w.clone())
        });
        out.push(Check::new(format!("E is alternating for {label}"), Anchor::Claim, bad == 0, sample_detail(n, bad)));
    }
    out.push(attempt("E((1,0),(0,gamma)) = 7 over Q(sqrt(-7))", Anchor::Oracle, || {
        let a = cat.k7.algebra();
        let kf = QuadraticField::new(-7).map_err(|e| e.to_string())?;
        let t = moduli::make_t(&cat.k7, TCase::D1).map_err(|e| e.to_string())?;
        let gamma = a.from_l(&kf.elt(-1, 1));
        let e = moduli::riemann_form(&PlaneVector::new(a.one(), a.zero()), &PlaneVector::new(a.zero(), gamma), &t).map_err(|e| e.to_string())?;
        Ok((e == BigRational::from_integer(7.into()), json!(e.to_string())))
    }));
    let (mut c, _) = moduli_gram(TCase::D1, Some(-7), (2, 3))?;
    out.append(&mut c);
    let n = cfg.samples("phi");
    for a in [cat.k7.algebra(), cat.quat.algebra(), cat.d7c.algebra(), &cat.d7] {
        let m = if a.degree() >= 3 { n.min(60) } else { n };
        let mut worst = 0.0f64;
        for _ in 0..m {
            let x = sampling::algebra_element(&mut rng, a, 3, 2);
            let y = sampling::algebra_element(&mut rng, a, 3, 2);
            let rhs = moduli::phi_numeric(&x) * moduli::phi_numeric(&y);
            let r = (moduli::phi_numeric(&(&x * &y)) - &rhs).norm() / rhs.norm().max(1.0);
            worst = worst.max(r);
        }
        let dim = moduli::phi_numeric(&a.one()).nrows();
        out.push(Check::new(
            format!("phi is multiplicative on {}", a.label()),
            Anchor::Claim,
            worst < tol && dim == a.rational_dim(),
            json!({ "samples": m, "max_residual": decimal(worst), "tolerance": decimal(tol), "dimension": dim }),
        ));
    }
    out.push(attempt("quaternion basis splits with (ec)^2 = -ab", Anchor::Claim, || {
        let s = moduli::split_quaternion_basis(&cat.quat).map_err(|e| e.to_string())?;
        Ok((s.relation_holds && s.direct_sum && s.ec_squared == BigRational::from_integer((-6).into()), serde_json::to_value(&s).map_err(|e| e.to_string())?))
    }));
    for (c, _) in [moduli_split(TCase::D2b, (2, 3))?, moduli_split(TCase::D3, (2, 3))?] {
        out.extend(c);
    }
    Ok(out)
}
