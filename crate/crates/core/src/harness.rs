//! Property suites, the improper-mixture demonstration and the separable
//! volume estimator.
//!
//! Trial `t` of a run with root seed `s` uses the seed `mix64(s, t)` and
//! nothing else, so a failing trial replays from its recorded seed and the
//! thread schedule never changes a result.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bipartite::{
    bell_state_for, generate_sublattice, im_psi_separability_report, interior_state, is_closed,
    psi_fixed_slot_report, some_state, tau_morphism_report, werner_state, BipartiteContext,
};
use crate::error::{Error, Result};
use crate::herm::{hs_inner, partial_trace, tensor, DensityOp, HermOp, SpaceShape, Tolerances};
use crate::io::{ElementJson, MatrixJson, VNJson};
use crate::lattice::{Lattice, LatticeElement};
use crate::random::{haar_vector, mix64, random_density, random_density_from, rng};
use crate::separability::{
    convex_tensor_membership, is_separable, ppt_is_exact, ppt_status, MembershipStatus, SeparabilityStatus,
    SeparabilityWitness, DECOMPOSITION_TOLERANCE,
};
use crate::subspace::HermSubspace;
use crate::vn::{compare_ops, vn_join, VNElement};

/// Largest total Hilbert dimension the suites accept.
pub const MAX_SUITE_DIM: usize = 9;

pub const SUITES: [&str; 10] = [
    "modularity",
    "atoms",
    "negation",
    "vn-embedding",
    "psi-tau",
    "separability",
    "convex-tensor",
    "sublattice",
    "improper-demo",
    "volume",
];

fn is_bipartite_suite(name: &str) -> bool {
    matches!(name, "psi-tau" | "separability" | "convex-tensor" | "sublattice" | "improper-demo" | "volume")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub shape: SpaceShape,
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerances,
    pub budget: usize,
}

impl SuiteConfig {
    /// Default dimensions and trial counts for `suite`.
    pub fn new(suite: &str) -> Result<Self> {
        if !SUITES.contains(&suite) {
            return Err(Error::UnknownSuite(suite.into()));
        }
        let shape = if is_bipartite_suite(suite) { SpaceShape::bipartite(2, 2) } else { SpaceShape::simple(2) };
        let trials = match suite {
            "modularity" => 200,
            "atoms" | "negation" | "psi-tau" => 100,
            "vn-embedding" => 50,
            "separability" | "convex-tensor" => 30,
            "sublattice" => 10,
            "improper-demo" => 20,
            _ => 10_000,
        };
        Ok(SuiteConfig { suite: suite.into(), shape, trials, seed: 0, tol: Tolerances::default(), budget: crate::convex::DEFAULT_BUDGET })
    }

    pub fn with_shape(mut self, shape: SpaceShape) -> Self {
        self.shape = shape;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.tol, self.budget)
    }

    pub fn validate(&self) -> Result<()> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(Error::UnknownSuite(self.suite.clone()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        let total = self.shape.total();
        if total > MAX_SUITE_DIM {
            return Err(Error::UnsupportedDims(format!("total dimension {total} exceeds {MAX_SUITE_DIM}")));
        }
        let f = self.shape.factors();
        if is_bipartite_suite(&self.suite) {
            if f.len() != 2 || f.iter().any(|&n| n < 2) {
                return Err(Error::UnsupportedDims(format!("suite {} needs two factors of dimension at least 2, got {f:?}", self.suite)));
            }
        } else if f.len() != 1 || total < 2 {
            return Err(Error::UnsupportedDims(format!("suite {} needs a single space of dimension at least 2, got {f:?}", self.suite)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub seed: u64,
    pub operands: Vec<Value>,
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    pub failures: usize,
    /// Trials that ended in an undecided feasibility question.
    pub undecided: usize,
    pub counterexamples: Vec<Counterexample>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: SuiteConfig,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
    /// Suite-specific measurements (demo outcomes, volume estimates).
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
    pub wall_time_s: f64,
}

impl Report {
    /// 0 when every property passed, 2 when the only problems are undecided
    /// trials, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else if self.properties.iter().all(|p| p.passed || p.failures == 0) {
            2
        } else {
            1
        }
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "suite {} shape {:?} trials {} seed {}: {} ({:.2} s)\n",
            self.suite,
            self.config.shape.factors(),
            self.config.trials,
            self.config.seed,
            if self.passed { "PASS" } else { "FAIL" },
            self.wall_time_s
        );
        for p in &self.properties {
            out += &format!(
                "  [{}] {} ({} trials, {} failed, {} undecided)",
                if p.passed { "pass" } else { "FAIL" },
                p.name,
                p.trials,
                p.failures,
                p.undecided
            );
            if !p.detail.is_empty() {
                out += &format!(": {}", p.detail);
            }
            out.push('\n');
            for c in &p.counterexamples {
                out += &format!("      counterexample trial {} seed {}: {}\n", c.trial, c.seed, c.note);
            }
        }
        if !self.data.is_null() {
            out += &format!("  data: {}\n", self.data);
        }
        out
    }
}

/// Outcome of one randomized trial: named checks plus the operands needed to
/// replay it.
#[derive(Debug, Clone, Default)]
pub struct Trial {
    pub checks: Vec<(&'static str, bool)>,
    pub operands: Vec<Value>,
    pub note: String,
}

impl Trial {
    fn check(&mut self, name: &'static str, ok: bool) {
        self.checks.push((name, ok));
    }

    fn operand(&mut self, a: &LatticeElement) {
        self.operands.push(element_value(a));
    }
}

fn element_value(a: &LatticeElement) -> Value {
    serde_json::to_value(ElementJson::from_element(a)).unwrap_or(Value::Null)
}

fn matrix_value(op: &HermOp) -> Value {
    serde_json::to_value(MatrixJson::from_op(op)).unwrap_or(Value::Null)
}

/// Records at most this many counterexamples per property.
const MAX_COUNTEREXAMPLES: usize = 5;

struct Collector {
    properties: Vec<PropertyResult>,
}

impl Collector {
    fn new() -> Self {
        Collector { properties: Vec::new() }
    }

    fn entry(&mut self, name: &str) -> &mut PropertyResult {
        if let Some(i) = self.properties.iter().position(|p| p.name == name) {
            return &mut self.properties[i];
        }
        self.properties.push(PropertyResult {
            name: name.into(),
            passed: true,
            trials: 0,
            failures: 0,
            undecided: 0,
            counterexamples: Vec::new(),
            detail: String::new(),
        });
        self.properties.last_mut().unwrap()
    }

    fn trials(&mut self, seed: u64, results: Vec<Result<Trial>>) {
        for (t, r) in results.into_iter().enumerate() {
            let s = mix64(seed, t as u64);
            match r {
                Ok(trial) => {
                    for (name, ok) in &trial.checks {
                        let e = self.entry(name);
                        e.trials += 1;
                        if !ok {
                            e.failures += 1;
                            e.passed = false;
                            if e.counterexamples.len() < MAX_COUNTEREXAMPLES {
                                e.counterexamples.push(Counterexample {
                                    trial: t,
                                    seed: s,
                                    operands: trial.operands.clone(),
                                    note: trial.note.clone(),
                                });
                            }
                        }
                    }
                }
                Err(err) => {
                    let e = self.entry("trial completes");
                    e.trials += 1;
                    e.passed = false;
                    if matches!(err, Error::Undecided { .. } | Error::NonConvergence { .. } | Error::OracleInconclusive(_)) {
                        e.undecided += 1;
                    } else {
                        e.failures += 1;
                    }
                    if e.counterexamples.len() < MAX_COUNTEREXAMPLES {
                        e.counterexamples.push(Counterexample { trial: t, seed: s, operands: Vec::new(), note: err.to_string() });
                    }
                }
            }
        }
    }

    fn fixed(&mut self, name: &str, ok: bool, detail: String) {
        let e = self.entry(name);
        e.trials += 1;
        if !ok {
            e.failures += 1;
            e.passed = false;
        }
        e.detail = detail;
    }

    fn fixed_result(&mut self, name: &str, r: Result<(bool, String)>) {
        match r {
            Ok((ok, detail)) => self.fixed(name, ok, detail),
            Err(err) => {
                let undecided = matches!(err, Error::Undecided { .. } | Error::NonConvergence { .. });
                let e = self.entry(name);
                e.trials += 1;
                e.passed = false;
                if undecided {
                    e.undecided += 1;
                } else {
                    e.failures += 1;
                }
                e.detail = err.to_string();
            }
        }
    }
}

fn run_trials<F>(trials: usize, seed: u64, f: F) -> Vec<Result<Trial>>
where
    F: Fn(u64) -> Result<Trial> + Sync,
{
    (0..trials).into_par_iter().map(|t| f(mix64(seed, t as u64))).collect()
}

/// Span of `k` random densities of random ranks: good by construction since
/// every generator is a state.
pub fn random_element(n: usize, k: usize, seed: u64) -> Result<LatticeElement> {
    random_element_in(SpaceShape::simple(n), k, seed)
}

pub fn random_element_in(shape: SpaceShape, k: usize, seed: u64) -> Result<LatticeElement> {
    let n = shape.total();
    if k == 0 || k > n * n {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={}", n * n)));
    }
    let mut r = rng(seed);
    let tol = Tolerances::default();
    let gens = (0..k)
        .map(|_| {
            let rank = r.random_range(1..=n);
            random_density_from(&mut r, n, rank).map(DensityOp::into_op)
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = HermSubspace::span(n, &gens, &tol)?;
    Ok(LatticeElement::from_good(rep, shape))
}

/// Projector onto the span of `rank` Haar-random vectors.
pub fn random_projector(n: usize, rank: usize, seed: u64) -> Result<VNElement> {
    if rank > n {
        return Err(Error::InvalidRank { rank, dim: n });
    }
    let mut r = rng(seed);
    let mut v = crate::herm::CMatrix::zeros(n, rank);
    for j in 0..rank {
        v.set_column(j, &haar_vector(&mut r, n));
    }
    Ok(VNElement::from_columns(&v, &Tolerances::default()))
}

/// Random element with a random number of generators in `1..=max_k`.
fn element_with_random_k(shape: &SpaceShape, max_k: usize, seed: u64) -> Result<LatticeElement> {
    let n = shape.total();
    let k = rng(mix64(seed, 0xA5)).random_range(1..=max_k.min(n * n));
    random_element_in(shape.clone(), k, seed)
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let mut c = Collector::new();
    let mut data = Value::Null;
    match cfg.suite.as_str() {
        "modularity" => modularity(cfg, &mut c),
        "atoms" => atoms(cfg, &mut c),
        "negation" => negation(cfg, &mut c),
        "vn-embedding" => vn_embedding(cfg, &mut c),
        "psi-tau" => psi_tau(cfg, &mut c)?,
        "separability" => data = separability(cfg, &mut c)?,
        "convex-tensor" => convex_tensor(cfg, &mut c)?,
        "sublattice" => sublattice(cfg, &mut c)?,
        "improper-demo" => data = improper_demo(cfg, &mut c),
        "volume" => data = volume(cfg, &mut c)?,
        other => return Err(Error::UnknownSuite(other.into())),
    }
    let passed = c.properties.iter().all(|p| p.passed);
    Ok(Report {
        suite: cfg.suite.clone(),
        config: cfg.clone(),
        passed,
        properties: c.properties,
        data,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn modularity(cfg: &SuiteConfig, c: &mut Collector) {
    let lat = cfg.lattice();
    let shape = cfg.shape.clone();
    let results = run_trials(cfg.trials, cfg.seed, |s| {
        let a = element_with_random_k(&shape, 3, mix64(s, 1))?;
        let d = element_with_random_k(&shape, 3, mix64(s, 2))?;
        let b = element_with_random_k(&shape, 4, mix64(s, 3))?;
        let cc = lat.join(&a, &d)?;
        let mut t = Trial::default();
        for x in [&a, &b, &cc] {
            t.operand(x);
        }
        let r = lat.check_modular(&a, &b, &cc)?;
        t.note = format!("dims a={} b={} c={} lhs={} rhs={}", a.dim(), b.dim(), cc.dim(), r.lhs.dim(), r.rhs.dim());
        t.check("modular law", r.holds);
        t.check("modular inequality a∨(b∧c) ≤ (a∨b)∧c", lat.leq(&r.lhs, &r.rhs)?);
        // When b ∩ c is already good the usual subspace argument goes through.
        if lat.is_good(&b.rep().intersect(cc.rep(), &lat.tol)?)? {
            t.check("modular law when b ∩ c needs no closure", r.holds);
        }
        Ok(t)
    });
    c.trials(cfg.seed, results);
    if cfg.shape.total() == 2 {
        c.fixed_result(
            "chord counterexample breaks the modular law",
            modular_counterexample(&lat).and_then(|(a, b, cc)| {
                let r = lat.check_modular(&a, &b, &cc)?;
                let detail = format!("lhs dim {} rhs dim {}", r.lhs.dim(), r.rhs.dim());
                Ok((!r.holds && lat.leq(&r.lhs, &r.rhs)?, detail))
            }),
        );
    }
}

/// `(I + xσx + yσy + zσz)/2`.
pub fn bloch_state(x: f64, y: f64, z: f64) -> Result<DensityOp> {
    use crate::herm::pauli;
    let op = &(&(&HermOp::identity(2) + &pauli::x().scale(x)) + &pauli::y().scale(y)) + &pauli::z().scale(z);
    DensityOp::new(op.scale(0.5), &Tolerances::default())
}

/// A qubit triple `a ≤ c` with `a∨(b∧c) ≠ (a∨b)∧c`.
///
/// `a = {I/2}` and `c` is the equatorial disk. `b` is spanned by two states
/// whose line meets the equatorial plane outside the Bloch ball, so `b ∩ c`
/// holds no state and `b∧c = 𝟎`, leaving `a` on the left. On the right,
/// `a∨b` contains σx and σz, and its meet with `c` is the chord `span{I, σx}`.
pub fn modular_counterexample(lat: &Lattice) -> Result<(LatticeElement, LatticeElement, LatticeElement)> {
    let shape = SpaceShape::simple(2);
    let a = lat.atom(&DensityOp::maximally_mixed(2))?;
    let b_gens = [bloch_state(0.0, 0.0, 0.5)?.into_op(), bloch_state(0.3, 0.0, 0.4)?.into_op()];
    let c_gens = [bloch_state(1.0, 0.0, 0.0)?.into_op(), bloch_state(-1.0, 0.0, 0.0)?.into_op(), bloch_state(0.0, 1.0, 0.0)?.into_op()];
    let b = lat.close(&HermSubspace::span(2, &b_gens, &lat.tol)?, shape.clone())?;
    let c = lat.close(&HermSubspace::span(2, &c_gens, &lat.tol)?, shape)?;
    Ok((a, b, c))
}

fn atoms(cfg: &SuiteConfig, c: &mut Collector) {
    let lat = cfg.lattice();
    let shape = cfg.shape.clone();
    let n = shape.total();
    let results = run_trials(cfg.trials, cfg.seed, |s| {
        let mut r = rng(s);
        let rank = r.random_range(1..=n);
        let rho = random_density_from(&mut r, n, rank)?;
        let atom = lat.atom_in(&rho, shape.clone())?;
        let b = element_with_random_k(&shape, 4, mix64(s, 1))?;
        let mut t = Trial::default();
        t.operands.push(matrix_value(rho.op()));
        t.operand(&b);
        t.note = format!("rank {rank}");
        t.check("atom is a one-dimensional good fixpoint", atom.dim() == 1 && lat.is_good(atom.rep())?);
        // Anything below an atom is the atom or 𝟎.
        for below in [lat.meet(&atom, &b)?, lat.meet(&atom, &lat.neg(&b)?)?] {
            let ok = !lat.leq(&below, &atom)? || below.is_zero() || lat.eq(&below, &atom)?;
            t.check("nothing strictly between 𝟎 and an atom", ok);
        }
        // Some state of b gives an atom below b.
        let ok = match some_state(&lat, &b)? {
            Some(x) => lat.leq(&lat.atom_in(&x, shape.clone())?, &b)?,
            None => false,
        };
        t.check("every nonzero element lies above an atom", ok);
        Ok(t)
    });
    c.trials(cfg.seed, results);
}

fn negation(cfg: &SuiteConfig, c: &mut Collector) {
    let lat = cfg.lattice();
    let shape = cfg.shape.clone();
    let n = shape.total();
    let results = run_trials(cfg.trials, cfg.seed, |s| {
        let a = element_with_random_k(&shape, 4, mix64(s, 1))?;
        let d = element_with_random_k(&shape, 3, mix64(s, 2))?;
        let b = lat.join(&a, &d)?;
        let mut t = Trial::default();
        t.operand(&a);
        t.operand(&b);
        let na = lat.neg(&a)?;
        t.check("non-contradiction", lat.meet(&a, &na)?.is_zero());
        t.check("contraposition", lat.leq(&lat.neg(&b)?, &na)?);
        t.check("weak double negation", lat.leq(&a, &lat.neg(&na)?)?);
        Ok(t)
    });
    c.trials(cfg.seed, results);
    let mixed = lat.atom_in(&DensityOp::maximally_mixed(n), shape.clone());
    c.fixed_result(
        "double negation of the maximally mixed atom is 𝟏",
        mixed.and_then(|m| {
            let nn = lat.neg(&lat.neg(&m)?)?;
            let ok = nn.is_one() && !lat.eq(&nn, &m)?;
            Ok((ok, format!("¬¬{{I/{n}}} has dimension {} (atom has 1)", nn.dim())))
        }),
    );
}

fn vn_embedding(cfg: &SuiteConfig, c: &mut Collector) {
    let lat = cfg.lattice();
    let n = cfg.shape.total();
    let results = run_trials(cfg.trials, cfg.seed, |s| {
        let mut r = rng(s);
        let p = random_projector(n, r.random_range(0..=n), mix64(s, 1))?;
        // Every fourth pair is nested so that the equal-join case is exercised.
        let q = if r.random_range(0..4) == 0 {
            vn_join(&p, &random_projector(n, r.random_range(0..=n), mix64(s, 2))?, &lat.tol)?
        } else {
            random_projector(n, r.random_range(0..=n), mix64(s, 2))?
        };
        let report = compare_ops(&lat, &p, &q)?;
        let mut t = Trial::default();
        t.operands.push(serde_json::to_value(VNJson::from_vn(&p)).unwrap_or(Value::Null));
        t.operands.push(serde_json::to_value(VNJson::from_vn(&q)).unwrap_or(Value::Null));
        t.note = format!("ranks {} {}", p.rank(), q.rank());
        t.check("meet preserved", report.meet_preserved);
        t.check("join inequality", report.join_below);
        t.check("negation inequality", report.neg_below);
        t.check("nested joins agree", report.nested_joins_agree.unwrap_or(true));
        Ok(t)
    });
    c.trials(cfg.seed, results);
    c.fixed_result(
        "orthogonal rank-one pair has a strict join",
        (|| {
            let t = lat.tol;
            let p = VNElement::new(HermOp::ket_bra(n, 0), &t)?;
            let q = VNElement::new(HermOp::ket_bra(n, 1), &t)?;
            let r = compare_ops(&lat, &p, &q)?;
            let ok = r.join_strict && r.lattice_join_dim == 2 && r.face_join_dim == 4;
            Ok((ok, format!("𝓛 join dim {}, face join dim {}", r.lattice_join_dim, r.face_join_dim)))
        })(),
    );
}

fn psi_tau(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = BipartiteContext::from_shape(&cfg.shape, cfg.lattice())?;
    let lat = *ctx.lattice();
    let (s1, s2) = (ctx.factor_shape(1), ctx.factor_shape(2));
    let results = run_trials(cfg.trials, cfg.seed, |s| {
        let a = element_with_random_k(&s1, 4, mix64(s, 1))?;
        let b = element_with_random_k(&s2, 4, mix64(s, 2))?;
        let a2 = lat.join(&a, &element_with_random_k(&s1, 2, mix64(s, 3))?)?;
        let mut t = Trial::default();
        t.operand(&a);
        t.operand(&b);
        t.operand(&a2);
        let up = ctx.psi(&a, &b)?;
        t.check("tau1 after psi is the identity", lat.eq(&ctx.tau(&up, 1)?, &a)?);
        t.check("tau2 after psi is the identity", lat.eq(&ctx.tau(&up, 2)?, &b)?);
        t.check("psi is monotone", lat.leq(&up, &ctx.psi(&a2, &b)?)?);
        Ok(t)
    });
    c.trials(cfg.seed, results);

    c.fixed_result(
        "psi after tau differs from the identity on the entangled atom",
        (|| {
            let bell = ctx.atom(&bell_state_for(&ctx))?;
            let back = ctx.psi(&ctx.tau(&bell, 1)?, &ctx.tau(&bell, 2)?)?;
            Ok((!lat.eq(&back, &bell)?, format!("recomposed dimension {}", back.dim())))
        })(),
    );

    let small = cfg.trials.min(30);
    let sample = (0..=small)
        .map(|i| element_with_random_k(&s1, 4, mix64(cfg.seed, 10_000 + i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let fixed = element_with_random_k(&s2, 3, mix64(cfg.seed, 20_000))?;
    let rho2 = random_density(ctx.n2(), ctx.n2(), mix64(cfg.seed, 20_001))?;
    c.fixed_result(
        "psi with a fixed slot preserves meet and join, is injective, weakens negation",
        psi_fixed_slot_report(&sample, &fixed, &rho2, &ctx, mix64(cfg.seed, 20_002)).map(|r| {
            (r.all_hold(), serde_json::to_string(&r).unwrap_or_default())
        }),
    );

    let pairs = (0..small)
        .map(|i| {
            let s = mix64(cfg.seed, 30_000 + i as u64);
            Ok((element_with_random_k(ctx.shape(), 4, mix64(s, 1))?, element_with_random_k(ctx.shape(), 4, mix64(s, 2))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let targets = (0..small.min(10))
        .map(|i| element_with_random_k(&s1, 4, mix64(cfg.seed, 40_000 + i as u64)))
        .collect::<Result<Vec<_>>>()?;
    c.fixed_result(
        "tau preserves joins, weakens meets, is surjective and not injective",
        tau_morphism_report(&pairs, &targets, &ctx, mix64(cfg.seed, 40_100))
            .map(|r| (r.all_hold(), serde_json::to_string(&r).unwrap_or_default())),
    );
    Ok(())
}

/// Werner parameters `0.00, 0.01, …, 1.00` with their verdicts; returns the
/// last separable and first entangled parameter.
pub fn werner_sweep(ctx: &BipartiteContext, budget: usize, seed: u64) -> Result<WernerSweep> {
    let mut sweep = WernerSweep::default();
    for i in 0..=100 {
        let w = i as f64 / 100.0;
        let v = is_separable(&werner_state(w), ctx, budget, mix64(seed, i))?;
        match v.status {
            SeparabilityStatus::Separable => {
                sweep.last_separable = Some(w);
                let residual = match &v.witness {
                    Some(SeparabilityWitness::Decomposition(d)) => d.residual,
                    _ => f64::INFINITY,
                };
                sweep.worst_residual = sweep.worst_residual.max(residual);
            }
            SeparabilityStatus::Entangled => {
                if sweep.first_entangled.is_none() {
                    sweep.first_entangled = Some(w);
                }
            }
            SeparabilityStatus::Inconclusive => sweep.inconclusive.push(w),
        }
    }
    Ok(sweep)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct WernerSweep {
    pub last_separable: Option<f64>,
    pub first_entangled: Option<f64>,
    pub inconclusive: Vec<f64>,
    /// Largest reconstruction residual among the separable verdicts.
    pub worst_residual: f64,
}

impl WernerSweep {
    pub fn threshold(&self) -> Option<f64> {
        Some((self.last_separable? + self.first_entangled?) / 2.0)
    }
}

fn separability(cfg: &SuiteConfig, c: &mut Collector) -> Result<Value> {
    let ctx = BipartiteContext::from_shape(&cfg.shape, cfg.lattice())?;
    let budget = cfg.budget.min(200);
    let (n1, n2) = (ctx.n1(), ctx.n2());
    let total = ctx.shape().total();
    let results = run_trials(cfg.trials, cfg.seed, |s| {
        let mut r = rng(s);
        let rank = r.random_range(1..=total);
        let rho = random_density_from(&mut r, total, rank)?;
        let v = is_separable(&rho, &ctx, budget, mix64(s, 1))?;
        let mut t = Trial::default();
        t.operands.push(matrix_value(rho.op()));
        t.note = format!("rank {rank}, {:?}: {}", v.status, v.note);
        let ok = match (&v.status, &v.witness) {
            (SeparabilityStatus::Separable, Some(SeparabilityWitness::Decomposition(d))) => {
                d.residual <= DECOMPOSITION_TOLERANCE && d.terms.iter().all(|x| x.weight >= 0.0)
            }
            (SeparabilityStatus::Entangled, Some(SeparabilityWitness::PartialTranspose { eigenvalue, .. })) => {
                *eigenvalue < -ctx.lattice().tol.psd
            }
            (SeparabilityStatus::Inconclusive, None) => true,
            _ => false,
        };
        t.check("verdicts carry valid witnesses", ok);
        // A product of two random states is always separable.
        let x = random_density(n1, r.random_range(1..=n1), mix64(s, 2))?;
        let y = random_density(n2, r.random_range(1..=n2), mix64(s, 3))?;
        let p = DensityOp::from_op_unchecked(tensor(x.op(), y.op()));
        t.check("products are separable", is_separable(&p, &ctx, budget, mix64(s, 4))?.status == SeparabilityStatus::Separable);
        Ok(t)
    });
    c.trials(cfg.seed, results);

    c.fixed_result(
        "maximally entangled state violates PPT",
        is_separable(&bell_state_for(&ctx), &ctx, budget, cfg.seed).map(|v| {
            let expected = -0.5;
            let ok = v.status == SeparabilityStatus::Entangled
                && (n1 != n2 || n1 != 2 || (v.ppt_min_eigenvalue - expected).abs() <= 1e-9);
            (ok, format!("PPT eigenvalue {:.12}", v.ppt_min_eigenvalue))
        }),
    );
    let mut data = serde_json::Map::new();
    if n1 == 2 && n2 == 2 {
        match werner_sweep(&ctx, budget, cfg.seed) {
            Ok(sweep) => {
                let th = sweep.threshold();
                let ok = th.is_some_and(|x| x > 0.32 && x < 0.35)
                    && sweep.inconclusive.is_empty()
                    && sweep.worst_residual <= DECOMPOSITION_TOLERANCE;
                c.fixed("Werner threshold", ok, format!("threshold {:?}, worst residual {:.2e}", th, sweep.worst_residual));
                data.insert("werner".into(), serde_json::to_value(&sweep).unwrap_or(Value::Null));
            }
            Err(e) => c.fixed_result("Werner threshold", Err(e)),
        }
    }
    let small = cfg.trials.min(30);
    let pairs = (0..small)
        .map(|i| {
            let s = mix64(cfg.seed, 50_000 + i as u64);
            Ok((
                element_with_random_k(&ctx.factor_shape(1), 4, mix64(s, 1))?,
                element_with_random_k(&ctx.factor_shape(2), 4, mix64(s, 2))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    c.fixed_result(
        "image of psi and separable states",
        im_psi_separability_report(&pairs, small, &ctx, mix64(cfg.seed, 60_000)).map(|r| {
            let detail = serde_json::to_string(&r).unwrap_or_default();
            (r.all_hold(), detail)
        }),
    );
    Ok(Value::Object(data))
}

fn convex_tensor(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = BipartiteContext::from_shape(&cfg.shape, cfg.lattice())?;
    let lat = *ctx.lattice();
    let budget = cfg.budget.min(200);
    let (s1, s2) = (ctx.factor_shape(1), ctx.factor_shape(2));
    let results = run_trials(cfg.trials, cfg.seed, |s| {
        let a = element_with_random_k(&s1, 3, mix64(s, 1))?;
        let b = element_with_random_k(&s2, 3, mix64(s, 2))?;
        let mut t = Trial::default();
        t.operand(&a);
        t.operand(&b);
        let (Some(x), Some(y)) = (interior_state(&lat, &a)?, interior_state(&lat, &b)?) else {
            t.check("random elements are nonzero", false);
            return Ok(t);
        };
        let (x2, y2) = (some_state(&lat, &a)?.unwrap_or(x.clone()), some_state(&lat, &b)?.unwrap_or(y.clone()));
        let product = DensityOp::from_op_unchecked(tensor(x.op(), y.op()));
        let v = convex_tensor_membership(&product, &a, &b, &ctx, budget, mix64(s, 3))?;
        t.note = v.note.clone();
        t.check("products of members are members", v.status == MembershipStatus::Member);
        let mix = &tensor(x.op(), y.op()).scale(0.3) + &tensor(x2.op(), y2.op()).scale(0.7);
        t.check("members lie in the span of the tensor product", ctx.psi(&a, &b)?.rep().contains_op(&mix, &lat.tol)?);
        let mixed = DensityOp::from_op_unchecked(mix);
        let v = convex_tensor_membership(&mixed, &a, &b, &ctx, budget, mix64(s, 4))?;
        t.check("convex combinations of products are members", v.status != MembershipStatus::Outside);
        if let Some(d) = &v.decomposition {
            if v.status == MembershipStatus::Member {
                t.check("member decompositions reconstruct", d.residual <= DECOMPOSITION_TOLERANCE);
            }
        }
        Ok(t)
    });
    c.trials(cfg.seed, results);

    c.fixed_result(
        "maximally entangled state is certified outside",
        (|| {
            let bell = bell_state_for(&ctx);
            let v = convex_tensor_membership(
                &bell,
                &LatticeElement::one(ctx.factor_shape(1)),
                &LatticeElement::one(ctx.factor_shape(2)),
                &ctx,
                budget,
                cfg.seed,
            )?;
            let Some(w) = v.functional.clone() else { return Ok((false, "no functional".into())) };
            // W must be nonnegative on product states.
            let mut r = rng(cfg.seed);
            let mut worst = f64::INFINITY;
            for _ in 0..200 {
                let x = HermOp::projector_onto(&haar_vector(&mut r, ctx.n1()));
                let y = HermOp::projector_onto(&haar_vector(&mut r, ctx.n2()));
                worst = worst.min(hs_inner(&w, &tensor(&x, &y))?);
            }
            let ok = v.status == MembershipStatus::Outside && hs_inner(&w, bell.op())? < 0.0 && worst >= -1e-12;
            Ok((ok, format!("functional value {:.3e}, least value on products {:.3e}", v.functional_value, worst)))
        })(),
    );
    Ok(())
}

fn sublattice(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = BipartiteContext::from_shape(&cfg.shape, cfg.lattice())?;
    let lat = *ctx.lattice();
    let (s1, s2) = (ctx.factor_shape(1), ctx.factor_shape(2));
    let results = run_trials(cfg.trials, cfg.seed, |s| {
        let mut seeds = Vec::new();
        let mut t = Trial::default();
        let firsts = (0..2).map(|i| element_with_random_k(&s1, 2, mix64(s, i))).collect::<Result<Vec<_>>>()?;
        let seconds = (0..2).map(|i| element_with_random_k(&s2, 2, mix64(s, 10 + i))).collect::<Result<Vec<_>>>()?;
        for a in &firsts {
            t.operand(a);
            for b in &seconds {
                seeds.push(ctx.psi(a, b)?);
            }
        }
        for b in &seconds {
            t.operand(b);
        }
        let gen = generate_sublattice(&lat, &seeds, 200)?;
        t.note = format!("{} elements, truncated {}", gen.elements.len(), gen.truncated);
        t.check("generation finishes under the cap", !gen.truncated);
        let mut contains = true;
        for x in &seeds {
            contains &= gen.elements.iter().any(|e| lat.eq(e, x).unwrap_or(false));
        }
        t.check("generated sublattice contains the image", contains);
        t.check("generated sublattice is closed", gen.truncated || is_closed(&lat, &gen.elements)?);
        Ok(t)
    });
    c.trials(cfg.seed, results);

    let n = ctx.shape().total();
    c.fixed_result(
        "bounds generate themselves",
        (|| {
            let g = generate_sublattice(&lat, &[LatticeElement::zero(ctx.shape().clone()), LatticeElement::one(ctx.shape().clone())], 10)?;
            Ok((g.elements.len() == 2 && !g.truncated, format!("{} elements", g.elements.len())))
        })(),
    );
    c.fixed_result(
        "two atoms generate four elements",
        (|| {
            let x = lat.atom_in(&random_density(n, n, mix64(cfg.seed, 1))?, ctx.shape().clone())?;
            let y = lat.atom_in(&random_density(n, 1, mix64(cfg.seed, 2))?, ctx.shape().clone())?;
            let g = generate_sublattice(&lat, &[x, y], 10)?;
            Ok((g.elements.len() == 4 && !g.truncated, format!("{} elements", g.elements.len())))
        })(),
    );
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoOutcome {
    pub seed: u64,
    pub entangled: bool,
    /// `tr₂ ρ` of the sampled pure state.
    pub reduced_state: MatrixJson,
    /// The meet of all projectors with `tr(ρ₁P) = 1`: the support of `ρ₁`.
    pub vn_conjunction: MatrixJson,
    pub vn_rank: usize,
    /// Dimension of the good representative of `{ρ₁}`.
    pub atom_dim: usize,
    pub atom_is_atom: bool,
    /// `{ρ₁}` equals the meet of sampled elements containing it.
    pub atom_is_meet: bool,
}

/// Draws a pure state on `n₁ ⊗ n₂` (entangled unless `product`) and sets the
/// vN conjunction of the actual properties of `ρ₁ = tr₂ρ` beside the 𝓛 atom.
pub fn improper_mixture_demo(n1: usize, n2: usize, seed: u64, product: bool) -> Result<DemoOutcome> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::UnsupportedDims(format!("demo needs factors of dimension at least 2, got {n1}x{n2}")));
    }
    let lat = Lattice::default();
    let tol = lat.tol;
    let shape = SpaceShape::bipartite(n1, n2);
    let mut r = rng(seed);
    let mut rho1 = None;
    for _ in 0..100 {
        let v = if product {
            let (a, b) = (haar_vector(&mut r, n1), haar_vector(&mut r, n2));
            a.kronecker(&b)
        } else {
            haar_vector(&mut r, n1 * n2)
        };
        let state = DensityOp::pure(&v);
        let reduced = partial_trace(state.op(), &shape, 1)?;
        let purity = hs_inner(&reduced, &reduced)?;
        if product || purity < 1.0 - 1e-6 {
            rho1 = Some(DensityOp::from_op_unchecked(reduced));
            break;
        }
    }
    let rho1 = rho1.ok_or_else(|| Error::Precondition("no entangled state drawn; re-seed".into()))?;
    let (values, vectors) = rho1.op().eigh();
    let cols: Vec<_> = values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > tol.rank.max(1e-12))
        .map(|(i, _)| vectors.column(i).into_owned())
        .collect();
    let support = VNElement::from_columns(&crate::herm::CMatrix::from_columns(&cols), &tol);
    let atom = lat.atom(&rho1)?;
    let mut meet = LatticeElement::one(SpaceShape::simple(n1));
    for k in 0..3u64 {
        let other = random_density(n1, n1, mix64(seed, 100 + k))?;
        let holder = lat.join(&atom, &lat.atom(&other)?)?;
        meet = lat.meet(&meet, &holder)?;
    }
    Ok(DemoOutcome {
        seed,
        entangled: support.rank() > 1,
        reduced_state: MatrixJson::from_op(rho1.op()),
        vn_conjunction: MatrixJson::from_op(support.projector()),
        vn_rank: support.rank(),
        atom_dim: atom.dim(),
        atom_is_atom: lat.is_atom(&atom) && lat.is_good(atom.rep())?,
        atom_is_meet: lat.eq(&meet, &atom)?,
    })
}

fn improper_demo(cfg: &SuiteConfig, c: &mut Collector) -> Value {
    let f = cfg.shape.factors();
    let (n1, n2) = (f[0], f[1]);
    let mut outcomes = Vec::new();
    let results: Vec<Result<Trial>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let s = mix64(cfg.seed, t as u64);
            let e = improper_mixture_demo(n1, n2, s, false)?;
            let p = improper_mixture_demo(n1, n2, mix64(s, 1), true)?;
            let mut trial = Trial {
                note: format!("vN rank {} (control {}), atom dim {}", e.vn_rank, p.vn_rank, e.atom_dim),
                ..Trial::default()
            };
            trial.check("vN conjunction is not an atom", e.vn_rank == n1.min(n2));
            trial.check("reduced state is an atom of 𝓛", e.atom_dim == 1 && e.atom_is_atom);
            trial.check("atom is the meet of elements containing it", e.atom_is_meet);
            trial.check("product control has a rank-one conjunction", p.vn_rank == 1 && p.atom_dim == 1);
            trial.operands.push(serde_json::to_value(&e).unwrap_or(Value::Null));
            Ok(trial)
        })
        .collect();
    for r in results.iter().flatten().take(3) {
        outcomes.extend(r.operands.iter().cloned());
    }
    c.trials(cfg.seed, results);
    Value::Array(outcomes)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub fraction: f64,
    /// Binomial 95% half-width.
    pub ci_halfwidth: f64,
    pub samples: usize,
    /// Whether the classification decides separability (PPT-exact dimensions);
    /// otherwise the fraction is that of PPT states.
    pub exact: bool,
}

/// Fraction of separable states under the Hilbert–Schmidt measure
/// (full-rank Ginibre densities), sample `i` drawn from `mix64(seed, i)`.
pub fn separable_volume(shape: &SpaceShape, samples: usize, seed: u64) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let ctx = BipartiteContext::from_shape(shape, Lattice::default())?;
    let tol = Tolerances::default();
    let n = shape.total();
    let hits = (0..samples)
        .into_par_iter()
        .map(|i| {
            let rho = random_density(n, n, mix64(seed, i as u64))?;
            Ok(ppt_status(rho.op(), &ctx, &tol)? != SeparabilityStatus::Entangled)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    let p = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        fraction: p,
        ci_halfwidth: 1.96 * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        exact: ppt_is_exact(ctx.n1(), ctx.n2()),
    })
}

fn volume(cfg: &SuiteConfig, c: &mut Collector) -> Result<Value> {
    let a = separable_volume(&cfg.shape, cfg.trials, cfg.seed)?;
    let b = separable_volume(&cfg.shape, cfg.trials, mix64(cfg.seed, u64::MAX))?;
    let again = separable_volume(&cfg.shape, cfg.trials, cfg.seed)?;
    let combined = (a.ci_halfwidth.powi(2) + b.ci_halfwidth.powi(2)).sqrt();
    c.fixed("same seed gives the same fraction", a.fraction == again.fraction, format!("{}", a.fraction));
    c.fixed(
        "disjoint seeds agree",
        (a.fraction - b.fraction).abs() < 3.0 * combined,
        format!("{:.4} vs {:.4}, 3x combined half-width {:.4}", a.fraction, b.fraction, 3.0 * combined),
    );
    c.fixed("both classes occur", a.fraction > 0.0 && a.fraction < 1.0, format!("{:.4}", a.fraction));
    let mut data = serde_json::json!({ "first": a, "second": b });
    if !a.exact {
        data["warning"] = "PPT does not decide separability at these dimensions; fractions are PPT fractions".into();
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_element_examples() {
        let lat = Lattice::default();
        assert_eq!(random_element(3, 1, 5).unwrap().dim(), 1);
        for seed in 0..20 {
            let e = random_element(2, 3, seed).unwrap();
            assert!((1..=3).contains(&e.dim()));
            assert!(lat.is_good(e.rep()).unwrap());
        }
        assert!(random_element(2, 0, 1).is_err());
        assert!(random_element(2, 5, 1).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::new("nope").is_err());
        let cfg = SuiteConfig::new("psi-tau").unwrap().with_shape(SpaceShape::simple(4));
        assert!(matches!(cfg.validate(), Err(Error::UnsupportedDims(_))));
        let cfg = SuiteConfig::new("modularity").unwrap().with_shape(SpaceShape::simple(10));
        assert!(cfg.validate().is_err());
        assert!(SuiteConfig::new("modularity").unwrap().with_shape(SpaceShape::simple(3)).validate().is_ok());
        assert!(SuiteConfig::new("negation").unwrap().with_trials(0).validate().is_err());
    }

    #[test]
    fn demo_examples() {
        let e = improper_mixture_demo(2, 2, 7, false).unwrap();
        assert_eq!((e.vn_rank, e.atom_dim), (2, 1));
        assert!(e.atom_is_meet);
        let p = improper_mixture_demo(2, 2, 7, true).unwrap();
        assert_eq!(p.vn_rank, 1);
        let e = improper_mixture_demo(2, 3, 9, false).unwrap();
        assert_eq!(e.vn_rank, 2);
    }
}
