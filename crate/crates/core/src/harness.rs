//! Verification suites: load an algebra and a triple, build the module
//! registry, run the selected checks and assemble a deterministic report.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{builtin, Algebra, AlgebraSpec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{
    classify_map, factor_cofib_trivfib, factor_trivcofib_fib, ho_hom, homotopic,
    is_weak_equivalence, solve_lifting, stable_equivalent, upgrade_factorization, StableSide,
    StableVerdict, Structure, STABLE_BUDGET,
};
use crate::module::{
    hom_space, presentation, quotient, submodule_generated, Module,
    ModuleMap, ShortExactSeq,
};
use crate::registry::Registry;
use crate::relative::{corestriction_onto, restriction_onto, Relative, Side};
use crate::resolution::{inj_dim, is_injective, is_projective, proj_dim, Bounded};
use crate::triple::{
    extend_through_right_approx, find_extension_failure, find_lift_failure,
    lift_through_left_approx, CotorsionTriple, TripleSpec,
};

pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSource {
    Builtin { name: String, p: u32 },
    Path(PathBuf),
}

impl AlgebraSource {
    /// `builtin:NAME` or a path to an algebra JSON file.
    pub fn parse(s: &str, p: u32) -> AlgebraSource {
        match s.strip_prefix("builtin:") {
            Some(name) => AlgebraSource::Builtin {
                name: name.to_string(),
                p,
            },
            None => AlgebraSource::Path(PathBuf::from(s)),
        }
    }

    fn label(&self) -> String {
        match self {
            AlgebraSource::Builtin { name, .. } => format!("builtin:{name}"),
            AlgebraSource::Path(p) => p.display().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleSource {
    Trivial,
    Gorenstein,
    Path(PathBuf),
}

impl TripleSource {
    pub fn parse(s: &str) -> TripleSource {
        match s {
            "trivial" => TripleSource::Trivial,
            "gorenstein" => TripleSource::Gorenstein,
            other => TripleSource::Path(PathBuf::from(other)),
        }
    }
}

/// Per-check sample counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Samples {
    pub ses: usize,
    pub lifts: usize,
    pub maps: usize,
    pub factorizations: usize,
    pub xy_maps: usize,
    pub les: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples {
            ses: 200,
            lifts: 50,
            maps: 200,
            factorizations: 100,
            xy_maps: 100,
            les: 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    Prop21,
    Prop22,
    Prop25,
    Prop27,
    Thm31Classification,
    Lemma32Agreement,
    Prop33Formulas,
    Prop34Stability,
    Prop42,
    Def43Balance,
    Prop44,
    Prop45Les,
    Thm46,
    Thm47,
    Cor48,
    Cor49,
}

impl CheckId {
    pub const ALL: [CheckId; 16] = [
        CheckId::Prop21,
        CheckId::Prop22,
        CheckId::Prop25,
        CheckId::Prop27,
        CheckId::Thm31Classification,
        CheckId::Lemma32Agreement,
        CheckId::Prop33Formulas,
        CheckId::Prop34Stability,
        CheckId::Prop42,
        CheckId::Def43Balance,
        CheckId::Prop44,
        CheckId::Prop45Les,
        CheckId::Thm46,
        CheckId::Thm47,
        CheckId::Cor48,
        CheckId::Cor49,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CheckId::Prop21 => "prop_2_1",
            CheckId::Prop22 => "prop_2_2",
            CheckId::Prop25 => "prop_2_5",
            CheckId::Prop27 => "prop_2_7",
            CheckId::Thm31Classification => "thm_3_1_classification",
            CheckId::Lemma32Agreement => "lemma_3_2_agreement",
            CheckId::Prop33Formulas => "prop_3_3_formulas",
            CheckId::Prop34Stability => "prop_3_4_stability",
            CheckId::Prop42 => "prop_4_2",
            CheckId::Def43Balance => "def_4_3_balance",
            CheckId::Prop44 => "prop_4_4",
            CheckId::Prop45Les => "prop_4_5_les",
            CheckId::Thm46 => "thm_4_6",
            CheckId::Thm47 => "thm_4_7",
            CheckId::Cor48 => "cor_4_8",
            CheckId::Cor49 => "cor_4_9",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            CheckId::Prop21 => "Prop 2.1",
            CheckId::Prop22 => "Prop 2.2",
            CheckId::Prop25 => "Prop 2.5",
            CheckId::Prop27 => "Prop 2.7",
            CheckId::Thm31Classification => "Thm 3.1",
            CheckId::Lemma32Agreement => "Lemma 3.2",
            CheckId::Prop33Formulas => "Prop 3.3",
            CheckId::Prop34Stability => "Prop 3.4",
            CheckId::Prop42 => "Prop 4.2",
            CheckId::Def43Balance => "Def 4.3",
            CheckId::Prop44 => "Prop 4.4",
            CheckId::Prop45Les => "Prop 4.5",
            CheckId::Thm46 => "Thm 4.6",
            CheckId::Thm47 => "Thm 4.7",
            CheckId::Cor48 => "Cor 4.8",
            CheckId::Cor49 => "Cor 4.9",
        }
    }

    pub fn from_id(s: &str) -> Option<CheckId> {
        CheckId::ALL.into_iter().find(|c| c.id() == s)
    }

    /// `all` or a comma-separated list of ids.
    pub fn parse_list(s: &str) -> Result<Vec<CheckId>> {
        if s == "all" {
            return Ok(CheckId::ALL.to_vec());
        }
        s.split(',')
            .map(|part| {
                CheckId::from_id(part.trim())
                    .ok_or_else(|| Error::Config(format!("unknown check id {part:?}")))
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub algebra: AlgebraSource,
    pub triple: TripleSource,
    pub seed: u64,
    pub imax: usize,
    pub bound: usize,
    pub samples: Samples,
    pub checks: Vec<CheckId>,
    pub jobs: usize,
    pub timestamps: bool,
}

impl SuiteConfig {
    pub fn new(algebra: AlgebraSource, triple: TripleSource) -> SuiteConfig {
        SuiteConfig {
            algebra,
            triple,
            seed: 42,
            imax: 4,
            bound: crate::resolution::DEFAULT_BOUND,
            samples: Samples::default(),
            checks: CheckId::ALL.to_vec(),
            jobs: 1,
            timestamps: true,
        }
    }

    pub fn builtin(name: &str, p: u32, triple: TripleSource) -> SuiteConfig {
        SuiteConfig::new(
            AlgebraSource::Builtin {
                name: name.into(),
                p,
            },
            triple,
        )
    }
}

fn config_error(what: &str, e: Error) -> Error {
    match e {
        Error::Config(msg) => Error::Config(format!("{what}: {msg}")),
        other => Error::Config(format!("{what}: {other}")),
    }
}

pub fn load_algebra(source: &AlgebraSource) -> Result<Arc<Algebra>> {
    match source {
        AlgebraSource::Builtin { name, p } => {
            builtin(name, *p).map_err(|e| config_error(&format!("builtin:{name}"), e))
        }
        AlgebraSource::Path(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let spec: AlgebraSpec = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            Algebra::from_spec(&spec).map_err(|e| config_error(&path.display().to_string(), e))
        }
    }
}

pub fn load_triple(
    alg: &Arc<Algebra>,
    source: &TripleSource,
    registry: &Registry,
    bound: usize,
) -> Result<CotorsionTriple> {
    match source {
        TripleSource::Trivial => Ok(CotorsionTriple::trivial(alg)),
        TripleSource::Gorenstein => CotorsionTriple::gorenstein(alg, bound)
            .map_err(|e| config_error("gorenstein triple", e)),
        TripleSource::Path(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let spec: TripleSpec = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            CotorsionTriple::from_spec(alg, &spec, &|n| registry.get(n).cloned(), bound)
                .map_err(|e| config_error(&path.display().to_string(), e))
        }
    }
}

/// Everything a check needs, loaded once per run.
pub struct Context {
    pub config: SuiteConfig,
    pub algebra: Arc<Algebra>,
    pub triple: CotorsionTriple,
    pub registry: Registry,
    pub relative: Relative,
    pub x: Vec<Module>,
    pub z: Vec<Module>,
    pub y: Vec<Module>,
}

impl Context {
    pub fn load(config: &SuiteConfig) -> Result<Context> {
        let algebra = load_algebra(&config.algebra)?;
        let registry = Registry::build(&algebra)?;
        let triple = load_triple(&algebra, &config.triple, &registry, config.bound)?;
        let mut x = Vec::new();
        let mut z = Vec::new();
        let mut y = Vec::new();
        for m in registry.modules() {
            if triple.in_x(&m)? {
                x.push(m.clone());
            }
            if triple.in_z(&m)? {
                z.push(m.clone());
            }
            if triple.in_y(&m)? {
                y.push(m);
            }
        }
        Ok(Context {
            config: config.clone(),
            relative: Relative::new(&triple),
            algebra,
            triple,
            registry,
            x,
            z,
            y,
        })
    }

    fn module_json(&self, m: &Module) -> Value {
        json!({
            "name": self.registry.name_of(m),
            "dim": m.dim(),
            "action": m.actions().iter().map(matrix_json).collect::<Vec<_>>(),
        })
    }

    fn map_json(&self, f: &ModuleMap) -> Value {
        json!({
            "source": self.module_json(f.source()),
            "target": self.module_json(f.target()),
            "matrix": matrix_json(f.matrix()),
        })
    }

    fn ses_json(&self, s: &ShortExactSeq) -> Value {
        json!({ "left": self.map_json(&s.left), "right": self.map_json(&s.right) })
    }
}

/// Finite values as numbers, the rest as `"ExceedsBound(n)"`.
fn bounded(v: Bounded, bound: usize) -> Value {
    match v {
        Bounded::Finite(n) => json!(n),
        Bounded::ExceedsBound => json!(format!("ExceedsBound({bound})")),
    }
}

fn matrix_json(m: &Matrix) -> Value {
    Value::from((0..m.rows()).map(|r| m.row(r).to_vec()).collect::<Vec<_>>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub samples: usize,
    pub summary: String,
    pub details: Value,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Env {
    pub tool: String,
    pub version: String,
    pub algebra: String,
    pub p: u32,
    pub dim: usize,
    pub triple: String,
    pub seed: u64,
    pub imax: usize,
    pub bound: usize,
    pub registry: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub env: Env,
    pub notes: Vec<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn record(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn any_fail(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn any_unknown(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Unknown)
    }

    /// 0 all pass, 1 any failure, 3 unknowns under `strict_unknown`.
    pub fn exit_code(&self, strict_unknown: bool) -> i32 {
        if self.any_fail() {
            1
        } else if strict_unknown && self.any_unknown() {
            3
        } else {
            0
        }
    }

    /// Pretty JSON, validated against [`REPORT_SCHEMA`].
    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self).map_err(|e| Error::Config(e.to_string()))?;
        validate_report(&value)?;
        let mut s = serde_json::to_string_pretty(&value).map_err(|e| Error::Config(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

pub fn validate_report(value: &Value) -> Result<()> {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).expect("bundled schema parses");
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("bundled schema compiles");
    if let Err(errors) = compiled.validate(value) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        return Err(Error::Config(format!("report violates schema: {}", msgs.join("; "))));
    }
    Ok(())
}

fn env_block(ctx: &Context) -> Env {
    Env {
        tool: "ctl".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        algebra: ctx.config.algebra.label(),
        p: ctx.algebra.p(),
        dim: ctx.algebra.dim(),
        triple: ctx.triple.name().to_string(),
        seed: ctx.config.seed,
        imax: ctx.config.imax,
        bound: ctx.config.bound,
        registry: ctx.registry.names().into_iter().map(str::to_string).collect(),
        timestamp: ctx.config.timestamps.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        }),
    }
}

/// Result of one check before it is stamped with id and timing.
struct Outcome {
    status: Status,
    samples: usize,
    summary: String,
    details: Value,
    witnesses: Vec<Value>,
}

impl Outcome {
    fn new(samples: usize, summary: String, details: Value, witnesses: Vec<Value>) -> Outcome {
        let status = if witnesses.is_empty() { Status::Pass } else { Status::Fail };
        Outcome {
            status,
            samples,
            summary,
            details,
            witnesses,
        }
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let ctx = Context::load(config)?;
    Ok(run_with(&ctx))
}

/// Runs the configured checks against an already loaded context.
pub fn run_with(ctx: &Context) -> Report {
    let mut checks = ctx.config.checks.clone();
    checks.sort();
    checks.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.config.jobs.max(1))
        .build()
        .expect("thread pool");
    let mut records: Vec<Record> = pool.install(|| checks.par_iter().map(|&c| run_check(ctx, c)).collect());
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Report {
        env: env_block(ctx),
        notes: notes(ctx),
        records,
    }
}

fn notes(ctx: &Context) -> Vec<String> {
    let mut out = vec![format!(
        "suites quantify over the {} registered modules: {}",
        ctx.registry.len(),
        ctx.registry.names().join(", ")
    )];
    if ctx.config.triple == TripleSource::Gorenstein {
        let trivial = CotorsionTriple::trivial(&ctx.algebra);
        let same = ctx.registry.modules().iter().all(|m| {
            let a = (ctx.triple.in_x(m), ctx.triple.in_z(m), ctx.triple.in_y(m));
            let b = (trivial.in_x(m), trivial.in_z(m), trivial.in_y(m));
            matches!((a, b), ((Ok(p), Ok(q), Ok(r)), (Ok(s), Ok(t), Ok(u))) if (p, q, r) == (s, t, u))
        });
        if same {
            out.push("triple coincides with trivial triple on registry".into());
        }
    }
    out
}

fn check_seed(seed: u64, id: &str) -> u64 {
    // FNV-1a over the id keeps per-check streams independent of order
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

fn run_check(ctx: &Context, c: CheckId) -> Record {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(check_seed(ctx.config.seed, c.id()));
    let outcome = match c {
        CheckId::Prop21 => thickness(ctx, &mut rng),
        CheckId::Prop22 => pinching(ctx),
        CheckId::Prop25 => lifting(ctx, &mut rng),
        CheckId::Prop27 => extension(ctx, &mut rng),
        CheckId::Thm31Classification => classification(ctx, &mut rng),
        CheckId::Lemma32Agreement => agreement(ctx, &mut rng),
        CheckId::Prop33Formulas => ho_formulas(ctx, &mut rng),
        CheckId::Prop34Stability => stability(ctx),
        CheckId::Prop42 => dichotomy(ctx),
        CheckId::Def43Balance => balance(ctx),
        CheckId::Prop44 => comparison(ctx),
        CheckId::Prop45Les => long_exact(ctx, &mut rng),
        CheckId::Thm46 => relative_dims(ctx, true),
        CheckId::Thm47 => relative_dims(ctx, false),
        CheckId::Cor48 => global_equality(ctx),
        CheckId::Cor49 => global_characterization(ctx),
    };
    let outcome = outcome.unwrap_or_else(|e| Outcome {
        status: Status::Fail,
        samples: 0,
        summary: format!("check aborted: {e}"),
        details: json!({}),
        witnesses: vec![json!({ "error": e.to_string() })],
    });
    Record {
        id: c.id().into(),
        anchor: c.anchor().into(),
        status: outcome.status,
        samples: outcome.samples,
        summary: outcome.summary,
        details: outcome.details,
        witnesses: outcome.witnesses,
        timing_ms: ctx
            .config
            .timestamps
            .then(|| start.elapsed().as_millis() as u64),
    }
}

// ---- sampling -------------------------------------------------------------

fn pick<'a, R: Rng>(rng: &mut R, v: &'a [Module]) -> &'a Module {
    &v[rng.gen_range(0..v.len())]
}

fn random_module<R: Rng>(ctx: &Context, rng: &mut R) -> Module {
    let all = ctx.registry.modules();
    let a = pick(rng, &all).clone();
    if rng.gen_bool(0.25) {
        a.direct_sum(pick(rng, &all))
    } else {
        a
    }
}

fn random_vector<R: Rng>(rng: &mut R, p: u32, d: usize) -> Vec<u32> {
    (0..d).map(|_| rng.gen_range(0..p)).collect()
}

/// `0 → K → E → E/K → 0` for a random `E` and `K` generated by one or two
/// random vectors.
fn random_ses<R: Rng>(ctx: &Context, rng: &mut R) -> Result<ShortExactSeq> {
    let e = random_module(ctx, rng);
    let count = rng.gen_range(1..=2);
    let vs: Vec<Vec<u32>> = (0..count).map(|_| random_vector(rng, e.p(), e.dim())).collect();
    let k = submodule_generated(&e, &vs);
    let q = quotient(&e, k.inclusion.matrix())?;
    ShortExactSeq::new(k.inclusion, q.projection)
}

fn random_hom<R: Rng>(rng: &mut R, a: &Module, b: &Module) -> Result<ModuleMap> {
    Ok(hom_space(a, b)?.random(rng))
}

/// A map drawn from a mix of random homomorphisms and structural maps.
fn sample_map<R: Rng>(ctx: &Context, rng: &mut R) -> Result<ModuleMap> {
    let t = &ctx.triple;
    let m = random_module(ctx, rng);
    Ok(match rng.gen_range(0..9) {
        0 | 1 => {
            let n = random_module(ctx, rng);
            random_hom(rng, &m, &n)?
        }
        2 => t.right_x_approx(&m)?.seq.right,
        3 => t.right_x_approx(&m)?.seq.left,
        4 => t.left_y_approx(&m)?.seq.left,
        5 => t.left_y_approx(&m)?.seq.right,
        6 => random_ses(ctx, rng)?.left,
        7 => random_ses(ctx, rng)?.right,
        _ => presentation(&m).seq.right.clone(),
    })
}

/// A map out of `b`.
fn sample_map_from<R: Rng>(ctx: &Context, rng: &mut R, b: &Module) -> Result<ModuleMap> {
    Ok(match rng.gen_range(0..5) {
        0 | 1 => {
            let n = random_module(ctx, rng);
            random_hom(rng, b, &n)?
        }
        2 => ModuleMap::identity(b),
        3 => ctx.triple.left_y_approx(b)?.seq.left,
        _ => {
            let v = random_vector(rng, b.p(), b.dim());
            let k = submodule_generated(b, &[v]);
            quotient(b, k.inclusion.matrix())?.projection
        }
    })
}

// ---- checks ---------------------------------------------------------------

fn thickness(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = &ctx.triple;
    let n = ctx.config.samples.ses;
    let mut informative = 0;
    let mut witnesses = Vec::new();
    for _ in 0..n {
        let s = random_ses(ctx, rng)?;
        let flags = [t.in_z(s.sub())?, t.in_z(s.mid())?, t.in_z(s.quot())?];
        let count = flags.iter().filter(|&&b| b).count();
        if count >= 2 {
            informative += 1;
        }
        if count == 2 && witnesses.len() < 3 {
            witnesses.push(json!({ "ses": ctx.ses_json(&s), "in_z": flags }));
        }
    }
    Ok(Outcome::new(
        n,
        format!("{n} random short exact sequences, {informative} with at least two terms in Z"),
        json!({ "informative": informative }),
        witnesses,
    ))
}

fn pinching(ctx: &Context) -> Result<Outcome> {
    let t = &ctx.triple;
    let mut table = BTreeMap::new();
    let mut witnesses = Vec::new();
    for e in ctx.registry.entries() {
        let m = &e.module;
        let (x, z, y) = (t.in_x(m)?, t.in_z(m)?, t.in_y(m)?);
        let (pr, inj) = (is_projective(m)?, is_injective(m)?);
        table.insert(e.name.clone(), json!({ "x": x, "z": z, "y": y, "projective": pr, "injective": inj }));
        if (x && z) != pr || (z && y) != inj {
            witnesses.push(json!({ "module": ctx.module_json(m), "x": x, "z": z, "y": y, "projective": pr, "injective": inj }));
        }
    }
    let n = ctx.registry.len();
    Ok(Outcome::new(
        n,
        format!("X∩Z = projectives and Z∩Y = injectives on {n} registered modules"),
        json!({ "memberships": table }),
        witnesses,
    ))
}

fn lifting(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = &ctx.triple;
    let per = ctx.config.samples.lifts;
    let mut witnesses = Vec::new();
    let mut samples = 0;
    let mut nonzero = 0;
    for m in &ctx.x {
        for _ in 0..per {
            let approx = t.left_y_approx(&random_module(ctx, rng))?;
            let alpha = random_hom(rng, m, approx.seq.quot())?;
            samples += 1;
            if !alpha.is_zero() {
                nonzero += 1;
            }
            if lift_through_left_approx(&approx, &alpha)?.is_none() && witnesses.len() < 3 {
                witnesses.push(json!({
                    "module": ctx.module_json(m),
                    "approximation": ctx.ses_json(&approx.seq),
                    "alpha": ctx.map_json(&alpha),
                }));
            }
        }
    }
    let all = ctx.registry.modules();
    let mut converse = BTreeMap::new();
    let mut missing = 0;
    for e in ctx.registry.entries() {
        if t.in_x(&e.module)? {
            continue;
        }
        let w = find_lift_failure(t, &e.module, &all)?;
        if w.is_none() {
            missing += 1;
        }
        converse.insert(
            e.name.clone(),
            w.map_or(Value::Null, |w| {
                json!({ "approximation": ctx.ses_json(&w.approx.seq), "alpha": ctx.map_json(&w.alpha) })
            }),
        );
    }
    let mut out = Outcome::new(
        samples,
        format!(
            "{samples} lifting problems for {} X-members ({nonzero} nonzero); {} non-X modules, {missing} without a registry witness",
            ctx.x.len(),
            converse.len()
        ),
        json!({ "x_members": ctx.x.len(), "nonzero": nonzero, "failing_lifts": converse }),
        witnesses,
    );
    if out.status == Status::Pass && missing > 0 {
        out.status = Status::Unknown;
    }
    Ok(out)
}

fn extension(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = &ctx.triple;
    let per = ctx.config.samples.lifts;
    let mut witnesses = Vec::new();
    let mut samples = 0;
    let mut nonzero = 0;
    for m in &ctx.y {
        for _ in 0..per {
            let approx = t.right_x_approx(&random_module(ctx, rng))?;
            let alpha = random_hom(rng, approx.seq.sub(), m)?;
            samples += 1;
            if !alpha.is_zero() {
                nonzero += 1;
            }
            if extend_through_right_approx(&approx, &alpha)?.is_none() && witnesses.len() < 3 {
                witnesses.push(json!({
                    "module": ctx.module_json(m),
                    "approximation": ctx.ses_json(&approx.seq),
                    "alpha": ctx.map_json(&alpha),
                }));
            }
        }
    }
    let all = ctx.registry.modules();
    let mut converse = BTreeMap::new();
    let mut missing = 0;
    for e in ctx.registry.entries() {
        if t.in_y(&e.module)? {
            continue;
        }
        let w = find_extension_failure(t, &e.module, &all)?;
        if w.is_none() {
            missing += 1;
        }
        converse.insert(
            e.name.clone(),
            w.map_or(Value::Null, |w| {
                json!({ "approximation": ctx.ses_json(&w.approx.seq), "alpha": ctx.map_json(&w.alpha) })
            }),
        );
    }
    let mut out = Outcome::new(
        samples,
        format!(
            "{samples} extension problems for {} Y-members ({nonzero} nonzero); {} non-Y modules, {missing} without a registry witness",
            ctx.y.len(),
            converse.len()
        ),
        json!({ "y_members": ctx.y.len(), "nonzero": nonzero, "failing_extensions": converse }),
        witnesses,
    );
    if out.status == Status::Pass && missing > 0 {
        out.status = Status::Unknown;
    }
    Ok(out)
}

fn classification(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = &ctx.triple;
    let n = ctx.config.samples.maps;
    let mut witnesses = Vec::new();
    let mut we_agree = 0;
    let mut we_counts = [0usize; 2];
    for _ in 0..n {
        let f = sample_map(ctx, rng)?;
        let mut we = [false; 2];
        for (k, s) in Structure::BOTH.into_iter().enumerate() {
            let c = classify_map(t, &f, s)?;
            we[k] = c.flags.weak_equivalence;
            if !c.is_coherent() && witnesses.len() < 3 {
                witnesses.push(json!({
                    "kind": "incoherent flags",
                    "structure": s,
                    "map": ctx.map_json(&f),
                    "flags": c.flags,
                }));
            }
        }
        we_counts[0] += we[0] as usize;
        we_counts[1] += we[1] as usize;
        we_agree += (we[0] == we[1]) as usize;
    }

    let mut two_of_three = 0;
    for _ in 0..n {
        let f = sample_map(ctx, rng)?;
        let g = sample_map_from(ctx, rng, f.target())?;
        let h = g.compose(&f);
        for s in Structure::BOTH {
            let w = [
                is_weak_equivalence(t, &f, s)?.holds,
                is_weak_equivalence(t, &g, s)?.holds,
                is_weak_equivalence(t, &h, s)?.holds,
            ];
            let count = w.iter().filter(|&&b| b).count();
            if count >= 2 {
                two_of_three += 1;
            }
            if count == 2 && witnesses.len() < 6 {
                witnesses.push(json!({
                    "kind": "two-of-three",
                    "structure": s,
                    "f": ctx.map_json(&f),
                    "g": ctx.map_json(&g),
                    "weak_equivalences": w,
                }));
            }
        }
    }

    let nf = ctx.config.samples.factorizations;
    let mut lifts = 0;
    for _ in 0..nf {
        let f = sample_map(ctx, rng)?;
        for s in Structure::BOTH {
            let a = factor_trivcofib_fib(t, &f, s);
            let b = factor_cofib_trivfib(t, &f, s);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    // a.i is a trivial cofibration, b.p a trivial fibration
                    match solve_lifting(t, &a.i, &b.p, &b.i, &a.p, s) {
                        Ok(_) => lifts += 1,
                        Err(e) => witnesses.push(json!({
                            "kind": "lifting",
                            "structure": s,
                            "map": ctx.map_json(&f),
                            "error": e.to_string(),
                        })),
                    }
                }
                (a, b) => {
                    let e = a.err().or(b.err()).expect("one side failed");
                    witnesses.push(json!({
                        "kind": "factorization",
                        "structure": s,
                        "map": ctx.map_json(&f),
                        "error": e.to_string(),
                    }));
                }
            }
        }
    }

    let mut replacements = 0;
    for m in ctx.registry.modules() {
        let q = t.right_x_approx(&m)?.seq.right;
        let r = t.left_y_approx(&m)?.seq.left;
        let cq = classify_map(t, &q, Structure::Projective)?;
        let cr = classify_map(t, &r, Structure::Injective)?;
        replacements += 1;
        if !cq.flags.trivial_fibration || !cr.flags.trivial_cofibration {
            witnesses.push(json!({
                "kind": "replacement",
                "module": ctx.module_json(&m),
                "cofibrant_replacement_trivial_fibration": cq.flags.trivial_fibration,
                "fibrant_replacement_trivial_cofibration": cr.flags.trivial_cofibration,
            }));
        }
    }
    Ok(Outcome::new(
        2 * n + nf,
        format!(
            "{n} maps classified in both structures, {n} composable pairs ({two_of_three} informative), {nf} maps factored both ways with {lifts} lifts"
        ),
        json!({
            "maps": n,
            "weak_equivalences": { "projective": we_counts[0], "injective": we_counts[1] },
            "structures_agree_on_arbitrary_maps": we_agree,
            "two_of_three_informative": two_of_three,
            "factorizations": nf,
            "lifts": lifts,
            "replacements": replacements,
        }),
        witnesses,
    ))
}

fn agreement(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = &ctx.triple;
    let n = ctx.config.samples.xy_maps;
    let mut witnesses = Vec::new();
    let mut we = 0;
    let mut upgraded = 0;
    if ctx.x.is_empty() || ctx.y.is_empty() {
        return Ok(Outcome::new(0, "no X- or Y-members registered".into(), json!({}), vec![]));
    }
    for _ in 0..n {
        let f = match rng.gen_range(0..3) {
            0 => {
                let a = pick(rng, &ctx.x).clone();
                let b = pick(rng, &ctx.y).clone();
                random_hom(rng, &a, &b)?
            }
            1 => t.left_y_approx(pick(rng, &ctx.x))?.seq.left,
            _ => t.right_x_approx(pick(rng, &ctx.y))?.seq.right,
        };
        let wp = is_weak_equivalence(t, &f, Structure::Projective)?.holds;
        let wi = is_weak_equivalence(t, &f, Structure::Injective)?.holds;
        if wp != wi {
            witnesses.push(json!({ "map": ctx.map_json(&f), "projective": wp, "injective": wi }));
            continue;
        }
        if wp {
            we += 1;
            match upgrade_factorization(t, &f) {
                Ok(_) => upgraded += 1,
                Err(e) => witnesses.push(json!({ "map": ctx.map_json(&f), "error": e.to_string() })),
            }
        }
    }
    Ok(Outcome::new(
        n,
        format!("{n} maps X → Y, {we} weak equivalences, {upgraded} upgraded factorizations certified"),
        json!({ "weak_equivalences": we, "upgraded": upgraded }),
        witnesses,
    ))
}

fn ho_formulas(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = &ctx.triple;
    let mut witnesses = Vec::new();
    let mut table = BTreeMap::new();
    let mut pairs = 0;
    for a in ctx.registry.entries() {
        let za = t.in_z(&a.module)?;
        let mut row = BTreeMap::new();
        for b in ctx.registry.entries() {
            pairs += 1;
            match ho_hom(t, &a.module, &b.module) {
                Ok(h) => {
                    row.insert(b.name.clone(), h.via_injective);
                    if (za || t.in_z(&b.module)?) && h.via_injective != 0 {
                        witnesses.push(json!({
                            "kind": "trivial object with nonzero hom",
                            "m": ctx.module_json(&a.module),
                            "n": ctx.module_json(&b.module),
                            "dim": h.via_injective,
                        }));
                    }
                }
                Err(e) => witnesses.push(json!({
                    "kind": "formulas",
                    "m": ctx.module_json(&a.module),
                    "n": ctx.module_json(&b.module),
                    "error": e.to_string(),
                })),
            }
        }
        table.insert(a.name.clone(), row);
    }
    // homotopy relation on random pairs of maps into Y-members
    let mut homotopies = 0;
    for _ in 0..ctx.registry.len().min(20) {
        if ctx.y.is_empty() {
            break;
        }
        let m = random_module(ctx, rng);
        let y = pick(rng, &ctx.y).clone();
        let h = hom_space(&m, &y)?;
        let (f, g) = (h.random(rng), h.random(rng));
        if let Err(e) = homotopic(t, &f, &g) {
            witnesses.push(json!({ "kind": "homotopy", "f": ctx.map_json(&f), "g": ctx.map_json(&g), "error": e.to_string() }));
        }
        homotopies += 1;
    }
    Ok(Outcome::new(
        pairs,
        format!("both homotopy hom formulas agree on {pairs} registered pairs; {homotopies} homotopy tests"),
        json!({ "ho_hom": table, "homotopy_tests": homotopies }),
        witnesses,
    ))
}

fn stability(ctx: &Context) -> Result<Outcome> {
    let t = &ctx.triple;
    let mut witnesses = Vec::new();
    let mut verdicts = BTreeMap::new();
    let mut unknown = 0;
    let mut samples = 0;
    let regular = Module::regular(&ctx.algebra);
    let entries = ctx.registry.entries();
    let ho_row = |m: &Module| -> Result<Vec<usize>> {
        entries.iter().map(|e| Ok(ho_hom(t, m, &e.module)?.via_injective)).collect()
    };
    let mut check = |name: String, m: &Module, n: &Module, expect_yes: bool| -> Result<()> {
        let mut labels = Vec::new();
        for side in [StableSide::XSide, StableSide::YSide] {
            samples += 1;
            let v = stable_equivalent(t, m, n, side, STABLE_BUDGET)?;
            labels.push(v.label());
            match &v {
                StableVerdict::Yes(c) => {
                    if !c.replay()? {
                        witnesses.push(json!({ "kind": "replay", "pair": name }));
                    }
                    if ho_row(m)? != ho_row(n)? {
                        witnesses.push(json!({ "kind": "invariance", "pair": name }));
                    }
                }
                StableVerdict::No(reason) if expect_yes => {
                    witnesses.push(json!({ "kind": "padding", "pair": name, "reason": reason }));
                }
                StableVerdict::Unknown { .. } => unknown += 1,
                StableVerdict::No(_) => {}
            }
        }
        if labels[0] != labels[1] && !labels.contains(&"unknown") {
            witnesses.push(json!({ "kind": "sides disagree", "pair": name, "verdicts": labels }));
        }
        verdicts.insert(name, labels.join("/"));
        Ok(())
    };
    for e in entries {
        let padded = e.module.direct_sum(&regular);
        check(format!("{} ~ {}+A", e.name, e.name), &e.module, &padded, true)?;
    }
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            check(format!("{} ~ {}", a.name, b.name), &a.module, &b.module, false)?;
        }
    }
    let mut out = Outcome::new(
        samples,
        format!("{samples} stable-equivalence decisions (X-side and Y-side), {unknown} unknown past budget {STABLE_BUDGET}"),
        json!({ "verdicts": verdicts, "budget": STABLE_BUDGET, "unknown": unknown }),
        witnesses,
    );
    if out.status == Status::Pass && unknown > 0 {
        out.status = Status::Unknown;
    }
    Ok(out)
}

fn dichotomy(ctx: &Context) -> Result<Outcome> {
    let rel = &ctx.relative;
    let (xs, ys) = rel.degenerate_test_sets(&ctx.x, &ctx.y, 4)?;
    let mut horns = BTreeMap::new();
    let mut witnesses = Vec::new();
    for e in ctx.registry.entries() {
        match rel.degenerate_dims(&e.module, &xs, &ys, ctx.config.bound) {
            Ok(d) => {
                horns.insert(e.name.clone(), json!({ "x_id": d.x_id, "y_pd": d.y_pd }));
            }
            Err(err) => witnesses.push(json!({ "module": ctx.module_json(&e.module), "error": err.to_string() })),
        }
    }
    Ok(Outcome::new(
        ctx.registry.len(),
        format!(
            "X-id and Y-pd are 0 or ∞ within bound {} for {} registered modules ({} X-tests, {} Y-tests)",
            ctx.config.bound,
            ctx.registry.len(),
            xs.len(),
            ys.len()
        ),
        json!({ "horns": horns, "x_tests": xs.len(), "y_tests": ys.len() }),
        witnesses,
    ))
}

fn balance(ctx: &Context) -> Result<Outcome> {
    let rel = &ctx.relative;
    let imax = ctx.config.imax;
    let mut witnesses = Vec::new();
    let mut pairs = 0;
    let mut nonzero = 0;
    for a in ctx.registry.entries() {
        for b in ctx.registry.entries() {
            pairs += 1;
            let t = rel.ext_table(&a.module, &b.module, imax)?;
            nonzero += t.rows[1..].iter().filter(|r| r.via_x != 0).count();
            if let Some(i) = t.imbalance() {
                witnesses.push(json!({
                    "m": ctx.module_json(&a.module),
                    "n": ctx.module_json(&b.module),
                    "degree": i,
                    "table": t,
                }));
            }
        }
    }
    // proper resolutions stay exact under Hom(X', −) and Hom(−, Y')
    let mut steps = 0;
    for e in ctx.registry.entries() {
        let xr = rel.x_resolution(&e.module, imax + 2)?;
        let yr = rel.y_coresolution(&e.module, imax + 2)?;
        for s in xr.steps.iter().chain(&yr.steps) {
            steps += 1;
            let ok = ctx.x.iter().try_for_each(|x| corestriction_onto(s, x))
                .and_then(|_| ctx.y.iter().try_for_each(|y| restriction_onto(s, y)));
            if let Err(err) = ok {
                witnesses.push(json!({ "module": ctx.module_json(&e.module), "step": ctx.ses_json(s), "error": err.to_string() }));
            }
        }
    }
    Ok(Outcome::new(
        pairs,
        format!("Ext_XY balanced on {pairs} pairs for degrees 0..={imax}; {steps} resolution steps both-sided exact"),
        json!({ "pairs": pairs, "nonzero_positive_entries": nonzero, "resolution_steps": steps }),
        witnesses,
    ))
}

fn comparison(ctx: &Context) -> Result<Outcome> {
    let rel = &ctx.relative;
    let t = &ctx.triple;
    let imax = ctx.config.imax;
    let mut witnesses = Vec::new();
    let mut pairs = 0;
    let mut differ = 0;
    for a in ctx.registry.entries() {
        for b in ctx.registry.entries() {
            let table = rel.ext_table(&a.module, &b.module, imax)?;
            let in_z = t.in_z(&a.module)? || t.in_z(&b.module)?;
            let agree = table.rows[1..].iter().all(|r| r.via_x == r.absolute);
            if in_z {
                pairs += 1;
                if !agree {
                    witnesses.push(json!({
                        "m": ctx.module_json(&a.module),
                        "n": ctx.module_json(&b.module),
                        "table": table,
                    }));
                }
            } else if !agree {
                differ += 1;
            }
        }
    }
    Ok(Outcome::new(
        pairs,
        format!("relative and absolute Ext agree in degrees 1..={imax} on {pairs} pairs with a Z argument; {differ} other pairs differ"),
        json!({ "pairs_with_z": pairs, "other_pairs_differing": differ }),
        witnesses,
    ))
}

/// Proper short exact sequences from approximations, split sums and
/// pullbacks/pushouts of approximations along random maps.
fn proper_candidates(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Vec<ShortExactSeq>> {
    let t = &ctx.triple;
    let mut out = Vec::new();
    for m in ctx.registry.modules() {
        out.push(t.right_x_approx(&m)?.seq);
        out.push(t.left_y_approx(&m)?.seq);
    }
    for _ in 0..ctx.config.samples.les {
        let a = random_module(ctx, rng);
        let b = random_module(ctx, rng);
        out.push(ShortExactSeq::split(&a, &b));
        let approx = t.right_x_approx(&a)?.seq;
        let h = random_hom(rng, &b, approx.quot())?;
        let pb = crate::module::pullback(&approx.right, &h)?;
        let into = pb.induce(&approx.left, &ModuleMap::zero(approx.sub(), &b))?;
        out.push(ShortExactSeq::new(into, pb.to_second.clone())?);
        let approx = t.left_y_approx(&a)?.seq;
        let h = random_hom(rng, approx.sub(), &b)?;
        let po = crate::module::pushout(&approx.left, &h)?;
        let onto = po.induce(&approx.right, &ModuleMap::zero(&b, approx.quot()))?;
        out.push(ShortExactSeq::new(po.from_second.clone(), onto)?);
    }
    Ok(out)
}

fn long_exact(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let rel = &ctx.relative;
    let imax = ctx.config.imax;
    let candidates = proper_candidates(ctx, rng)?;
    let mut witnesses = Vec::new();
    let mut proper = 0;
    let mut improper = 0;
    let mut nodes = 0;
    let mut connecting = 0;
    for ses in &candidates {
        let fixed = random_module(ctx, rng);
        let mut was_proper = true;
        for side in [Side::First, Side::Second] {
            match rel.les_check(ses, &fixed, side, imax, &ctx.x, &ctx.y) {
                Ok(r) => {
                    nodes += r.nodes;
                    connecting += r.connecting_ranks.iter().filter(|&&x| x > 0).count();
                }
                Err(Error::ProperNessViolation(_)) => {
                    was_proper = false;
                    break;
                }
                Err(e) => witnesses.push(json!({
                    "ses": ctx.ses_json(ses),
                    "fixed": ctx.module_json(&fixed),
                    "side": side,
                    "error": e.to_string(),
                })),
            }
        }
        if was_proper {
            proper += 1;
        } else {
            improper += 1;
        }
    }
    if proper < ctx.config.samples.les {
        witnesses.push(json!({ "kind": "too few proper sequences", "proper": proper }));
    }
    Ok(Outcome::new(
        proper,
        format!(
            "{proper} proper sequences, both variants exact at {nodes} nodes through degree {imax}; {improper} candidates rejected as improper"
        ),
        json!({ "proper": proper, "rejected": improper, "nodes": nodes, "nonzero_connecting_maps": connecting }),
        witnesses,
    ))
}

fn relative_dims(ctx: &Context, projective_side: bool) -> Result<Outcome> {
    let rel = &ctx.relative;
    let bound = ctx.config.bound;
    let mut values = BTreeMap::new();
    let mut witnesses = Vec::new();
    for e in ctx.registry.entries() {
        let r = if projective_side {
            rel.z_pd_checked(&e.module, &ctx.z, bound)
        } else {
            rel.z_id_checked(&e.module, &ctx.z, bound)
        };
        match r {
            Ok(v) => {
                values.insert(e.name.clone(), bounded(v, bound));
            }
            Err(err) => witnesses.push(json!({ "module": ctx.module_json(&e.module), "error": err.to_string() })),
        }
    }
    let what = if projective_side { "Z-pd" } else { "Z-id" };
    Ok(Outcome::new(
        ctx.registry.len(),
        format!(
            "{what} by proper (co)resolution agrees with Ext vanishing against {} Z-members for {} modules",
            ctx.z.len(),
            ctx.registry.len()
        ),
        json!({ "values": values, "bound": bound }),
        witnesses,
    ))
}

fn global_equality(ctx: &Context) -> Result<Outcome> {
    let g = ctx.relative.global_dims(&ctx.registry.modules(), ctx.config.bound)?;
    let mut witnesses = Vec::new();
    if g.z_pd_sup != g.z_id_sup {
        witnesses.push(json!({ "z_pd_sup": bounded(g.z_pd_sup, ctx.config.bound), "z_id_sup": bounded(g.z_id_sup, ctx.config.bound) }));
    }
    Ok(Outcome::new(
        ctx.registry.len(),
        format!("sup Z-pd = {} and sup Z-id = {} over the registry", g.z_pd_sup, g.z_id_sup),
        json!({ "z_pd_sup": bounded(g.z_pd_sup, ctx.config.bound), "z_id_sup": bounded(g.z_id_sup, ctx.config.bound) }),
        witnesses,
    ))
}

fn global_characterization(ctx: &Context) -> Result<Outcome> {
    let bound = ctx.config.bound;
    let g = ctx.relative.global_dims(&ctx.registry.modules(), bound)?;
    let mut pd_sup = Bounded::Finite(0);
    let mut id_sup = Bounded::Finite(0);
    for z in &ctx.z {
        pd_sup = pd_sup.max(proj_dim(z, bound)?);
        id_sup = id_sup.max(inj_dim(z, bound)?);
    }
    let mut witnesses = Vec::new();
    let mut rows = Vec::new();
    for n in 0..=bound {
        let row = [g.z_pd_sup.at_most(n), pd_sup.at_most(n), id_sup.at_most(n)];
        if row[0] != row[1] || row[1] != row[2] {
            witnesses.push(json!({ "n": n, "sup_at_most": row[0], "pd_at_most": row[1], "id_at_most": row[2] }));
        }
        rows.push(row);
    }
    Ok(Outcome::new(
        bound + 1,
        format!(
            "sup Z-pd ≤ n ⇔ pd(Z) ≤ n ⇔ id(Z) ≤ n for n ≤ {bound}; sup = {}, pd sup = {pd_sup}, id sup = {id_sup}",
            g.z_pd_sup
        ),
        json!({
            "z_pd_sup": bounded(g.z_pd_sup, ctx.config.bound),
            "pd_sup_over_z": bounded(pd_sup, ctx.config.bound),
            "id_sup_over_z": bounded(id_sup, ctx.config.bound),
            "z_members": ctx.z.len(),
        }),
        witnesses,
    ))
}

// ---- single computations --------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Computation {
    ExtTable { m: String, n: String },
    ZPd { m: String },
    ZId { m: String },
    HoHom { m: String, n: String },
    StableEq { m: String, n: String },
}

/// One computation, wrapped as a single-record report.
pub fn compute(config: &SuiteConfig, what: &Computation) -> Result<Report> {
    let ctx = Context::load(config)?;
    let reg = &ctx.registry;
    let (id, anchor, summary, details) = match what {
        Computation::ExtTable { m, n } => {
            let t = ctx.relative.ext_xy(reg.get(m)?, reg.get(n)?, config.imax)?;
            ("ext_table", "Def 4.3", format!("Ext_XY({m}, {n}) for degrees 0..={}", config.imax), json!({ "rows": t.rows }))
        }
        Computation::ZPd { m } => {
            let v = ctx.relative.z_pd_checked(reg.get(m)?, &ctx.z, config.bound)?;
            ("z_pd", "Thm 4.6", format!("Z-pd({m}) = {v}"), json!({ "value": bounded(v, config.bound) }))
        }
        Computation::ZId { m } => {
            let v = ctx.relative.z_id_checked(reg.get(m)?, &ctx.z, config.bound)?;
            ("z_id", "Thm 4.7", format!("Z-id({m}) = {v}"), json!({ "value": bounded(v, config.bound) }))
        }
        Computation::HoHom { m, n } => {
            let h = ho_hom(&ctx.triple, reg.get(m)?, reg.get(n)?)?;
            (
                "ho_hom",
                "Prop 3.3",
                format!("dim Hom_Ho({m}, {n}) = {}", h.via_injective),
                json!({ "via_injective": h.via_injective, "via_projective": h.via_projective }),
            )
        }
        Computation::StableEq { m, n } => {
            let mut verdicts = BTreeMap::new();
            for side in [StableSide::XSide, StableSide::YSide] {
                let v = stable_equivalent(&ctx.triple, reg.get(m)?, reg.get(n)?, side, STABLE_BUDGET)?;
                let key = if side == StableSide::XSide { "x_side" } else { "y_side" };
                let entry = match &v {
                    StableVerdict::Yes(c) => json!({ "verdict": "yes", "replays": c.replay()? }),
                    StableVerdict::No(reason) => json!({ "verdict": "no", "reason": reason }),
                    StableVerdict::Unknown { searched } => json!({ "verdict": "unknown", "searched": searched }),
                };
                verdicts.insert(key, entry);
            }
            ("stable_eq", "Prop 3.4", format!("stable equivalence of {m} and {n}"), json!(verdicts))
        }
    };
    let status = match &details {
        v if v.get("x_side").and_then(|s| s.get("verdict")) == Some(&json!("unknown")) => Status::Unknown,
        _ => Status::Pass,
    };
    Ok(Report {
        env: env_block(&ctx),
        notes: vec![],
        records: vec![Record {
            id: id.into(),
            anchor: anchor.into(),
            status,
            samples: 1,
            summary,
            details,
            witnesses: vec![],
            timing_ms: None,
        }],
    })
}

/// Registered module names with dimensions and memberships.
pub fn list_modules(config: &SuiteConfig) -> Result<Value> {
    let ctx = Context::load(config)?;
    let t = &ctx.triple;
    let mut out = Vec::new();
    for e in ctx.registry.entries() {
        out.push(json!({
            "name": e.name,
            "dim": e.module.dim(),
            "x": t.in_x(&e.module)?,
            "z": t.in_z(&e.module)?,
            "y": t.in_y(&e.module)?,
        }));
    }
    Ok(json!({ "algebra": ctx.config.algebra.label(), "triple": t.name(), "modules": out }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(status: Status, witnesses: Vec<Value>) -> Record {
        Record {
            id: "prop_2_2".into(),
            anchor: "Prop 2.2".into(),
            status,
            samples: 1,
            summary: String::new(),
            details: json!({}),
            witnesses,
            timing_ms: None,
        }
    }

    fn report(records: Vec<Record>) -> Report {
        let ctx = Context::load(&SuiteConfig::builtin("A1", 2, TripleSource::Trivial)).unwrap();
        Report {
            env: env_block(&ctx),
            notes: vec![],
            records,
        }
    }

    #[test]
    fn check_ids_and_anchors_are_distinct() {
        let mut ids: Vec<_> = CheckId::ALL.iter().map(|c| c.id()).collect();
        ids.dedup();
        assert_eq!(ids.len(), 16);
        for c in CheckId::ALL {
            assert_eq!(CheckId::from_id(c.id()), Some(c));
        }
        assert_eq!(CheckId::parse_list("all").unwrap().len(), 16);
        assert_eq!(
            CheckId::parse_list("prop_4_2, cor_4_9").unwrap(),
            vec![CheckId::Prop42, CheckId::Cor49]
        );
        assert!(matches!(CheckId::parse_list("prop_1_1"), Err(Error::Config(_))));
    }

    #[test]
    fn failing_records_need_witnesses() {
        assert!(report(vec![record(Status::Fail, vec![])]).to_json().is_err());
        let ok = report(vec![record(Status::Fail, vec![json!({ "m": 1 })])]);
        assert!(ok.to_json().is_ok());
        assert_eq!(ok.exit_code(false), 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(report(vec![record(Status::Pass, vec![])]).exit_code(true), 0);
        let unknown = report(vec![record(Status::Unknown, vec![])]);
        assert_eq!(unknown.exit_code(false), 0);
        assert_eq!(unknown.exit_code(true), 3);
    }

    #[test]
    fn per_check_seeds_differ() {
        assert_ne!(check_seed(1, "prop_2_1"), check_seed(1, "prop_2_2"));
        assert_eq!(check_seed(5, "x"), check_seed(5, "x"));
    }

    #[test]
    fn algebra_source_parsing() {
        assert_eq!(
            AlgebraSource::parse("builtin:A2", 5),
            AlgebraSource::Builtin { name: "A2".into(), p: 5 }
        );
        assert_eq!(AlgebraSource::parse("a.json", 5), AlgebraSource::Path("a.json".into()));
        assert_eq!(TripleSource::parse("trivial"), TripleSource::Trivial);
    }
}
