//! JSON experiment configs, deterministic reports and the canned
//! reproduction runs behind the `horodisc` binary.
//!
//! A report is a pure function of its config: keys are sorted, numbers are
//! printed by `serde_json`, and every parallel reduction in the library
//! breaks ties by index. The SHA-256 of the canonical config JSON is embedded
//! so that a report can be matched to the run that produced it.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analytic::{zeta_serde, MapExpr};
use crate::distortion::{
    condition_i_estimate, condition_ii_integral, default_ladder, growth_bound_check, Envelope, IntegralStatus,
};
use crate::error::{Error, Result};
use crate::geometry::Region;
use crate::harmonic::{
    harmonic_becker_verdict, harmonic_pre_schwarzian, harmonic_schwarzian, max_modulus, omega_map_check,
    separation_bound_at_gap, separation_hypothesis, HarmonicConfig, HarmonicMap,
};
use crate::operators::{
    bloch_norm, nehari_quantity, norm_inequality_report_with, normal_norm, pre_schwarzian, pre_schwarzian_norm,
    schwarzian, SupNormOptions,
};
use crate::sampling::seeded_rng;
use crate::univalence::{
    becker_unweighted_verdict, becker_verdict_with, converse_bound_check, horodisc_constant,
    horodisc_transform_check, hv_verdict_with, injectivity_sample, lemma41_max, local_becker_limsup,
    nehari_verdict, ConverseMode,
};
use crate::valence::{
    counting_bound_profile, critical_c, family_curve_is_simple, is_simple_refined, preimages, sign_change_report,
    trace_boundary, valence_from_trace, valence_slope, winding_number_circle, ChordTol, ValenceLocation,
    ValenceOptions, DEFAULT_SEEDS, LIMIT_RADIUS,
};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seed used by the canned runs that sample.
pub const REPRODUCE_SEED: u64 = 20_240_601;

/// Ids accepted by [`reproduce`].
pub const EXPERIMENT_IDS: [&str; 8] = [
    "sharp-bounds",
    "koebe-extremal",
    "critical-C",
    "valence-sweep",
    "horodisc",
    "distortion-envelopes",
    "harmonic-reduction",
    "carleson-profile",
];

/// Criterion ids accepted by the `criteria` command.
pub const CRITERION_IDS: [&str; 8] = [
    "becker",
    "becker-z",
    "nehari",
    "hv",
    "th2-bound",
    "th3-bound",
    "injectivity",
    "limsup",
];

pub const NORM_IDS: [&str; 4] = ["pre_schwarzian", "schwarzian", "bloch", "normal"];

/// Boundary direction, written as `"1"`, `"-1"`, `"i"`, `"-i"` or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Zeta(#[serde(with = "zeta_serde")] pub Complex64);

impl Default for Zeta {
    fn default() -> Self {
        Zeta(Complex64::new(1.0, 0.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub c: f64,
    pub zeta: Zeta,
    pub tol: f64,
    /// Mandatory for commands that sample randomly.
    pub seed: Option<u64>,
    /// Disc grid resolution for verdicts and sup estimates.
    pub grid: usize,
    /// Points per side of the image-plane valence grid.
    pub image_grid: usize,
    pub criteria: Vec<String>,
    pub norms: Vec<String>,
    pub envelope: Option<Envelope>,
    pub theta: Vec<f64>,
    /// Horodisc parameter for `th2-bound`; defaults to 0.
    pub a: Option<f64>,
    pub n_pairs: usize,
    pub targets: Vec<Complex64>,
    pub r_ladder: Vec<f64>,
    pub chord_tol: f64,
    pub c_list: Vec<f64>,
    pub rho: f64,
    pub delta0: f64,
    pub schwarzian_exponent: f64,
}

impl Default for Params {
    fn default() -> Self {
        let h = HarmonicConfig::default();
        Self {
            c: 1.0,
            zeta: Zeta::default(),
            tol: 1e-9,
            seed: None,
            grid: 48,
            image_grid: 96,
            criteria: vec!["becker".into()],
            norms: NORM_IDS.iter().map(|s| s.to_string()).collect(),
            envelope: None,
            theta: vec![0.0],
            a: None,
            n_pairs: 10_000,
            targets: Vec::new(),
            r_ladder: Vec::new(),
            chord_tol: 1e-3,
            c_list: Vec::new(),
            rho: 0.0,
            delta0: h.delta0,
            schwarzian_exponent: h.schwarzian_exponent,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    /// Directory receiving `<command>.json` (and `trace.csv`/`trace.svg`
    /// when no explicit paths are given).
    pub dir: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub map: Option<MapExpr>,
    #[serde(default)]
    pub harmonic: Option<HarmonicMap>,
    #[serde(default)]
    pub region: Region,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            map: None,
            harmonic: None,
            region: Region::UnitDisc,
            params: Params::default(),
            output: OutputPaths::default(),
        }
    }

    pub fn with_map(mut self, map: MapExpr) -> Self {
        self.map = Some(map);
        self
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// SHA-256 of the compact JSON serialization with the output paths
    /// cleared, hex encoded. Where a report is written does not change it.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputPaths::default();
        let bytes = serde_json::to_vec(&canonical).expect("configs serialize");
        hex::encode(Sha256::digest(bytes))
    }

    fn map(&self) -> Result<&MapExpr> {
        self.map.as_ref().ok_or_else(|| config_error("missing field `map`"))
    }

    fn harmonic(&self) -> Result<&HarmonicMap> {
        self.harmonic.as_ref().ok_or_else(|| config_error("missing field `harmonic`"))
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub c: Option<f64>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        let p = &mut cfg.params;
        if let Some(c) = self.c {
            p.c = c;
        }
        if let Some(s) = self.seed {
            p.seed = Some(s);
        }
        if let Some(g) = self.grid {
            p.grid = g;
        }
        if let Some(t) = self.tol {
            p.tol = t;
        }
        let o = &mut cfg.output;
        if self.out_dir.is_some() {
            o.dir = self.out_dir.clone();
        }
        if self.csv.is_some() {
            o.csv = self.csv.clone();
        }
        if self.svg.is_some() {
            o.svg = self.svg.clone();
        }
    }
}

pub fn config_error(message: impl Into<String>) -> Error {
    Error::Config {
        message: message.into(),
        line: 0,
        column: 0,
    }
}

/// Whether an error comes from the configuration rather than the run.
pub fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::Config { .. } | Error::UnknownExperiment(_))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Norms,
    Criteria,
    Valence,
    Distortion,
    Harmonic,
    Trace,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norms => "norms",
            Command::Criteria => "criteria",
            Command::Valence => "valence",
            Command::Distortion => "distortion",
            Command::Harmonic => "harmonic",
            Command::Trace => "trace",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One named numeric check of a canned run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub expected: String,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: impl Serialize, expected: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value: to_json(&value),
            expected: expected.into(),
            pass,
        }
    }
}

/// Text outputs that accompany a report (not part of its JSON).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Artifacts {
    pub csv: Option<String>,
    pub svg: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub toolkit_version: String,
    pub command: String,
    pub experiment: String,
    pub config_hash: String,
    pub passed: bool,
    pub result: Value,
    #[serde(skip)]
    pub artifacts: Artifacts,
}

impl Report {
    fn new(command: &str, cfg: &ExperimentConfig, passed: bool, result: Value) -> Self {
        Self {
            toolkit_version: TOOLKIT_VERSION.to_string(),
            command: command.to_string(),
            experiment: cfg.experiment.clone(),
            config_hash: cfg.hash(),
            passed,
            result,
            artifacts: Artifacts::default(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// Checks of a canned run, empty for other commands.
    pub fn checks(&self) -> Vec<Check> {
        self.result
            .get("checks")
            .and_then(|c| serde_json::from_value(c.clone()).ok())
            .unwrap_or_default()
    }
}

fn to_json<T: Serialize + ?Sized>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

/// Runs one command on a validated config.
pub fn run(cmd: Command, cfg: &ExperimentConfig) -> Result<Report> {
    match cmd {
        Command::Norms => cmd_norms(cfg),
        Command::Criteria => cmd_criteria(cfg),
        Command::Valence => cmd_valence(cfg),
        Command::Distortion => cmd_distortion(cfg),
        Command::Harmonic => cmd_harmonic(cfg),
        Command::Trace => cmd_trace(cfg),
    }
}

/// Writes the report and its artifacts; returns the paths written.
/// Nothing is written when the config names no output location.
pub fn write_outputs(report: &Report, out: &OutputPaths) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let in_dir = |name: &str| out.dir.as_ref().map(|d| d.join(name));
    if let Some(d) = &out.dir {
        std::fs::create_dir_all(d)?;
    }
    let name = format!("{}.json", report.command.replace(' ', "-"));
    if let Some(p) = out.report.clone().or_else(|| in_dir(&name)) {
        std::fs::write(&p, report.to_json_pretty())?;
        written.push(p);
    }
    let extra = [
        (&report.artifacts.csv, out.csv.clone().or_else(|| in_dir("trace.csv"))),
        (&report.artifacts.svg, out.svg.clone().or_else(|| in_dir("trace.svg"))),
    ];
    for (content, path) in extra {
        if let (Some(text), Some(p)) = (content, path) {
            std::fs::write(&p, text)?;
            written.push(p);
        }
    }
    Ok(written)
}

pub fn cmd_norms(cfg: &ExperimentConfig) -> Result<Report> {
    let map = cfg.map()?;
    for n in &cfg.params.norms {
        if !NORM_IDS.contains(&n.as_str()) {
            return Err(config_error(format!("unknown norm `{n}` (expected one of {NORM_IDS:?})")));
        }
    }
    let opts = SupNormOptions::default();
    let inequalities = norm_inequality_report_with(map, opts)?;
    let mut norms = serde_json::Map::new();
    for n in &cfg.params.norms {
        let est = match n.as_str() {
            "pre_schwarzian" => inequalities.pre_schwarzian.clone(),
            "schwarzian" => inequalities.schwarzian.clone(),
            "bloch" => bloch_norm(map, opts)?,
            _ => normal_norm(map, opts)?,
        };
        norms.insert(n.clone(), to_json(&est));
    }
    let passed = inequalities.schwarzian_from_pre.holds && inequalities.pre_from_schwarzian.holds;
    let result = json!({ "norms": norms, "inequalities": inequalities });
    Ok(Report::new("norms", cfg, passed, result))
}

pub fn cmd_criteria(cfg: &ExperimentConfig) -> Result<Report> {
    let map = cfg.map()?;
    let p = &cfg.params;
    let mut results = serde_json::Map::new();
    let mut passed = true;
    for id in &p.criteria {
        let (ok, value) = match id.as_str() {
            "becker" => verdict_value(becker_verdict_with(map, cfg.region, p.tol, p.grid)?),
            "becker-z" => verdict_value(becker_unweighted_verdict(map, cfg.region, p.tol, p.grid)?),
            "nehari" => verdict_value(nehari_verdict(map, cfg.region, p.tol, p.grid)?),
            "hv" => hv_value(map, p)?,
            "th2-bound" => verdict_value(converse_bound_check(
                map,
                ConverseMode::Th2 { a: p.a.unwrap_or(0.0) },
                p.grid,
                p.tol,
            )?),
            "th3-bound" => verdict_value(converse_bound_check(map, ConverseMode::Th3 { c: p.c }, p.grid, p.tol)?),
            "injectivity" => {
                let seed = p
                    .seed
                    .ok_or_else(|| config_error("criterion `injectivity` samples randomly and needs `params.seed`"))?;
                let r = injectivity_sample(map, cfg.region, p.n_pairs, seed, p.tol.max(1e-12))?;
                (!r.found, to_json(&r))
            }
            "limsup" => (true, to_json(&local_becker_limsup(map, p.zeta.0, 30)?)),
            other => {
                return Err(config_error(format!(
                    "unknown criterion `{other}` (expected one of {CRITERION_IDS:?})"
                )))
            }
        };
        passed &= ok;
        results.insert(id.clone(), value);
    }
    Ok(Report::new("criteria", cfg, passed, Value::Object(results)))
}

fn verdict_value(r: crate::univalence::CriterionReport) -> (bool, Value) {
    (r.holds, to_json(&r))
}

fn hv_value(map: &MapExpr, p: &Params) -> Result<(bool, Value)> {
    let a = horodisc_constant(p.c);
    let lemma = lemma41_max(p.c, 2000);
    let verdict = match hv_verdict_with(map, p.c, p.tol, p.grid) {
        Ok(v) => v,
        Err(Error::ConditionViolated { z, margin, .. }) => {
            let value = json!({
                "c": p.c,
                "a": a,
                "holds": false,
                "violation": { "z": z, "margin": margin },
                "lemma41_max": lemma,
            });
            return Ok((false, value));
        }
        Err(e) => return Err(e),
    };
    let transforms = p
        .theta
        .iter()
        .map(|&t| horodisc_transform_check(map, p.c, t, p.grid))
        .collect::<Result<Vec<_>>>()?;
    let ok = transforms.iter().all(|t| t.holds) && lemma <= 1.0 + 1e-9;
    let value = json!({
        "c": p.c,
        "a": a,
        "holds": true,
        "verdict": verdict,
        "transform_checks": transforms,
        "lemma41_max": lemma,
    });
    Ok((ok, value))
}

pub fn cmd_trace(cfg: &ExperimentConfig) -> Result<Report> {
    let map = cfg.map()?;
    let trace = trace_boundary(map, ChordTol::Relative(cfg.params.chord_tol))?;
    let simplicity = is_simple_refined(map, &trace)?;
    let (lo, hi) = trace.bounding_box();
    let result = json!({
        "points": trace.len(),
        "complete": trace.complete,
        "chord_tol": trace.chord_tol,
        "excluded": trace.excluded,
        "bounding_box": [lo, hi],
        "simplicity": simplicity,
    });
    let mut report = Report::new("trace", cfg, true, result);
    report.artifacts = Artifacts {
        csv: Some(trace.to_csv()),
        svg: Some(trace.to_svg()),
    };
    Ok(report)
}

pub fn cmd_valence(cfg: &ExperimentConfig) -> Result<Report> {
    let map = cfg.map()?;
    let p = &cfg.params;
    let trace = trace_boundary(map, ChordTol::Relative(p.chord_tol))?;
    let simplicity = is_simple_refined(map, &trace)?;
    let opts = ValenceOptions {
        grid: p.image_grid,
        chord_tol: p.chord_tol,
        ..ValenceOptions::default()
    };
    let valence = valence_from_trace(map, &trace, opts)?;
    let half = sign_change_report(map, 0.0, PI)?;
    let full = sign_change_report(map, -PI - 1.0, PI)?;

    let mut targets = p.targets.clone();
    if targets.is_empty() {
        if let ValenceLocation::Point { w } = valence.estimate.at {
            targets.push(w);
        }
    }
    let mut consistent = valence.estimate.cross_checked;
    let mut per_target = Vec::new();
    for &w in &targets {
        let pre = preimages(map, w, &cfg.region, DEFAULT_SEEDS, p.tol.max(1e-12))?;
        let winding = match winding_number_circle(map, w, Complex64::new(0.0, 0.0), LIMIT_RADIUS) {
            Ok(r) => Some(r),
            Err(Error::NonConvergence { .. } | Error::ContourThroughTarget { .. }) => None,
            Err(e) => return Err(e),
        };
        if pre.winding_count.is_some() {
            consistent &= pre.cross_checked;
        }
        per_target.push(json!({ "target": w, "preimages": pre, "winding_at_limit": winding }));
    }
    let result = json!({
        "trace_points": trace.len(),
        "simplicity": simplicity,
        "valence": valence,
        "sign_changes_half": half,
        "sign_changes_full": full,
        "targets": per_target,
    });
    let mut report = Report::new("valence", cfg, consistent, result);
    report.artifacts = Artifacts {
        csv: Some(trace.to_csv()),
        svg: Some(trace.to_svg()),
    };
    Ok(report)
}

pub fn cmd_distortion(cfg: &ExperimentConfig) -> Result<Report> {
    let p = &cfg.params;
    let env = p
        .envelope
        .as_ref()
        .ok_or_else(|| config_error("missing field `params.envelope`"))?;
    let env = &Envelope::new(env.kind.clone(), env.start).map_err(|e| config_error(format!("params.envelope: {e}")))?;
    let ladder = if p.r_ladder.is_empty() {
        default_ladder(env.start)
    } else {
        p.r_ladder.clone()
    };
    let cond_i = condition_i_estimate(env, &ladder)?;
    let cond_ii = condition_ii_integral(env, p.tol.max(1e-12))?;
    let hypothesis = cond_i.finite || cond_ii.status == IntegralStatus::Convergent;
    let mut result = json!({ "condition_i": cond_i, "condition_ii": cond_ii, "hypothesis_holds": hypothesis });
    let mut passed = hypothesis;
    if let Some(map) = &cfg.map {
        let rho = p.rho.max(env.start);
        let r_list: Vec<f64> = ladder.iter().copied().filter(|&r| r >= rho && r < 1.0).collect();
        let growth = match growth_bound_check(map, env, p.zeta.0, rho, &r_list) {
            Ok(g) => to_json(&g),
            Err(Error::ConditionViolated { z, margin, .. }) => {
                passed = false;
                json!({ "hypothesis_violated_at": z, "margin": margin })
            }
            Err(e) => return Err(e),
        };
        if let Some(h) = growth.get("holds").and_then(Value::as_bool) {
            passed &= h;
        }
        result["growth"] = growth;
    }
    Ok(Report::new("distortion", cfg, passed, result))
}

pub fn cmd_harmonic(cfg: &ExperimentConfig) -> Result<Report> {
    let map = cfg.harmonic()?;
    let p = &cfg.params;
    let hcfg = HarmonicConfig {
        delta0: p.delta0,
        schwarzian_exponent: p.schwarzian_exponent,
    };
    let becker = harmonic_becker_verdict(map, cfg.region, p.tol, p.grid)?;
    let hypothesis = separation_hypothesis(map, p.c, hcfg, p.grid)?;
    let samples = cfg.region.grid(p.grid);
    let omega = omega_map_check(map, Complex64::new(0.0, 0.0), &samples)?;
    let radii = [0.9, 0.99, 0.999];
    let moduli = radii
        .iter()
        .map(|&r| Ok((r, max_modulus(map, r, 4 * p.grid)?)))
        .collect::<Result<Vec<_>>>()?;
    let result = json!({
        "harmonic_becker": becker,
        "separation_hypothesis": hypothesis,
        "omega": omega,
        "max_modulus": moduli,
    });
    Ok(Report::new("harmonic", cfg, becker.holds, result))
}

/// Runs a canned experiment and reports one check per claim.
pub fn reproduce(id: &str) -> Result<Report> {
    let checks = match id {
        "sharp-bounds" => sharp_bounds()?,
        "koebe-extremal" => koebe_extremal()?,
        "critical-C" => critical_c_run()?,
        "valence-sweep" => valence_sweep()?,
        "horodisc" => horodisc_run()?,
        "distortion-envelopes" => distortion_envelopes()?,
        "harmonic-reduction" => harmonic_reduction()?,
        "carleson-profile" => carleson_profile()?,
        other => return Err(Error::UnknownExperiment(other.to_string())),
    };
    let mut cfg = ExperimentConfig::new(id);
    cfg.params.seed = Some(REPRODUCE_SEED);
    let passed = checks.iter().all(|c| c.pass);
    Ok(Report::new(&format!("reproduce {id}"), &cfg, passed, json!({ "checks": checks })))
}

fn within(v: f64, lo: f64, hi: f64) -> bool {
    v >= lo && v <= hi
}

fn sharp_bounds() -> Result<Vec<Check>> {
    let opts = SupNormOptions::default();
    let mut checks = Vec::new();
    for n in 1..=3u32 {
        let v = pre_schwarzian_norm(&MapExpr::odd_poly(n), opts)?.value;
        let t = 4.0 * n as f64;
        checks.push(Check::new(
            format!("odd-poly n={n}"),
            v,
            format!("[{}, {} + 1e-9]", t - 0.05, t),
            within(v, t - 0.05, t + 1e-9),
        ));
    }
    for p in [1.0, 3.0] {
        let v = pre_schwarzian_norm(&MapExpr::neg_power(p), opts)?.value;
        let t = 2.0 * (p + 1.0);
        checks.push(Check::new(
            format!("neg-power p={p}"),
            v,
            format!("[{}, {} + 1e-9]", t - 0.05, t),
            within(v, t - 0.05, t + 1e-9),
        ));
    }
    Ok(checks)
}

fn koebe_extremal() -> Result<Vec<Check>> {
    let k = MapExpr::Koebe;
    let mut rng = seeded_rng(REPRODUCE_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let x: f64 = rng.gen_range(-0.999..0.999);
        worst = worst.max((nehari_quantity(&k, Complex64::new(x, 0.0))? - 6.0).abs());
    }
    let grid = nehari_verdict(&k, Region::UnitDisc, 1e-9, 64)?;
    let ineq = norm_inequality_report_with(&k, SupNormOptions::default())?;
    let p = ineq.pre_schwarzian.value;
    let gap = ineq.pre_from_schwarzian.gap;
    Ok(vec![
        Check::new("nehari on real axis, max |q − 6|", worst, "≤ 1e-10", worst <= 1e-10),
        Check::new("nehari grid sup", grid.max_quantity, "≤ 6 + 1e-9", grid.max_quantity <= 6.0 + 1e-9),
        Check::new("‖P(k)‖", p, "6 ± 1e-2", (p - 6.0).abs() <= 1e-2),
        Check::new(
            "converse inequality gap",
            gap,
            "holds with gap < 1e-2",
            ineq.pre_from_schwarzian.holds && gap < 1e-2,
        ),
    ])
}

fn critical_c_run() -> Result<Vec<Check>> {
    let mi = Complex64::new(0.0, -1.0);
    let one = Complex64::new(1.0, 0.0);
    let chord = 2e-3;
    let crit = critical_c(mi, 0.01)?;
    let s1 = family_curve_is_simple(1.0, mi, chord)?;
    let s25 = family_curve_is_simple(2.5, mi, chord)?;
    let s65 = family_curve_is_simple(6.5, one, chord)?;
    Ok(vec![
        Check::new("critical C, ζ = −i", &crit, "estimate in [2.16, 2.26]", within(crit.estimate, 2.16, 2.26)),
        Check::new("simple at C = 1, ζ = −i", s1, "true", s1),
        Check::new("simple at C = 2.5, ζ = −i", s25, "false", !s25),
        Check::new("simple at C = 6.5, ζ = 1", s65, "false", !s65),
    ])
}

/// Values of `C` in the valence sweep.
pub const SWEEP_C: [f64; 6] = [1.0, 2.5, 5.0, 10.0, 20.0, 30.0];

fn valence_sweep() -> Result<Vec<Check>> {
    let r = valence_slope(Complex64::new(0.0, -1.0), &SWEEP_C, ValenceOptions::default())?;
    let v = |c: f64| r.per_c.iter().find(|p| p.c == c).map(|p| p.valence).unwrap_or(0);
    let vals: Vec<(f64, u32)> = r.per_c.iter().map(|p| (p.c, p.valence)).collect();
    Ok(vec![
        Check::new("valence at C = 1", v(1.0), "1", v(1.0) == 1),
        Check::new("valence at C = 2.5", v(2.5), "≥ 2", v(2.5) >= 2),
        Check::new("valence non-decreasing in C", &vals, "monotone", r.monotone),
        Check::new(
            "least-squares slope (informational)",
            json!({ "slope": r.slope, "reference": r.reference_slope }),
            "logged only",
            true,
        ),
    ])
}

fn horodisc_run() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for c in [1.5, 2.0, 3.0, 5.0, 10.0, 50.0] {
        let m = lemma41_max(c, 2000);
        checks.push(Check::new(format!("lemma max, C = {c}"), m, "≤ 1 + 1e-9", m <= 1.0 + 1e-9));
    }
    let f = MapExpr::example_family(3.0, Complex64::new(0.0, -1.0));
    let a = horodisc_constant(3.0);
    for theta in [0.0, PI / 2.0, PI] {
        let t = horodisc_transform_check(&f, 3.0, theta, 64)?;
        checks.push(Check::new(
            format!("transformed Becker max, θ = {theta:.4}"),
            t.max_quantity,
            "≤ 1 + 1e-6",
            t.max_quantity <= 1.0 + 1e-6,
        ));
        let region = Region::Disc {
            center: Complex64::from_polar(a, theta),
            radius: 1.0 - a,
        };
        let col = injectivity_sample(&f, region, 10_000, REPRODUCE_SEED, 1e-10)?;
        checks.push(Check::new(
            format!("no collision in horodisc, θ = {theta:.4}"),
            &col,
            "found = false",
            !col.found,
        ));
    }
    Ok(checks)
}

fn distortion_envelopes() -> Result<Vec<Check>> {
    let r2 = Envelope::rational(2.0);
    let ci = condition_i_estimate(&r2, &default_ladder(r2.start))?;
    let status = |env: &Envelope| condition_ii_integral(env, 1e-6).map(|r| r.status);
    let ii2 = status(&r2)?;
    let ii1 = status(&Envelope::rational(1.0))?;
    let psi = status(&Envelope::psi(1.0, 1.0, 0.5))?;
    Ok(vec![
        Check::new(
            "condition (i) tail, rational B = 2",
            ci.limsup_estimate,
            "2 ± 1e-3 and finite",
            ci.finite && (ci.limsup_estimate - 2.0).abs() <= 1e-3,
        ),
        Check::new("condition (ii), rational B = 2", ii2, "divergent", ii2 == IntegralStatus::Divergent),
        Check::new("condition (ii), rational B = 1", ii1, "convergent", ii1 == IntegralStatus::Convergent),
        Check::new("condition (ii), ψ(1, 1, 0.5)", psi, "convergent", psi == IntegralStatus::Convergent),
    ])
}

fn harmonic_reduction() -> Result<Vec<Check>> {
    let mut rng = seeded_rng(REPRODUCE_SEED);
    let pts: Vec<Complex64> = (0..100)
        .map(|_| Complex64::from_polar(0.95 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI)))
        .collect();
    let hs = [
        MapExpr::Koebe,
        MapExpr::example_family(2.0, Complex64::new(1.0, 0.0)),
        MapExpr::polynomial(vec![0.0.into(), 1.0.into(), Complex64::new(0.2, 0.1), 0.05.into()]),
    ];
    let mut zero_g: f64 = 0.0;
    let mut constant_exact = true;
    for h in &hs {
        let analytic = HarmonicMap::analytic(h.clone());
        let sheared = HarmonicMap::new(h.clone(), MapExpr::scale(Complex64::new(0.3, -0.2), h.clone()))?;
        for &z in &pts {
            let (p, s) = (pre_schwarzian(h, z)?, schwarzian(h, z)?);
            let dp = (harmonic_pre_schwarzian(&analytic, z)? - p).norm() / p.norm().max(1.0);
            let ds = (harmonic_schwarzian(&analytic, z)? - s).norm() / s.norm().max(1.0);
            zero_g = zero_g.max(dp).max(ds);
            constant_exact &=
                harmonic_pre_schwarzian(&sheared, z)? == p && harmonic_schwarzian(&sheared, z)? == s;
        }
    }
    let mut sep: f64 = 0.0;
    for c in [0.5, 1.0, 2.5, 10.0] {
        sep = sep.max((separation_bound_at_gap(c, 0.25 / c)? - 3f64.ln()).abs());
        sep = sep.max((separation_bound_at_gap(c, 1.0 / (9.0 * c))? - 5f64.ln()).abs());
    }
    Ok(vec![
        Check::new("g ≡ 0: harmonic P, S vs analytic", zero_g, "≤ 1e-12", zero_g <= 1e-12),
        Check::new("constant dilatation: P, S exact", constant_exact, "true", constant_exact),
        Check::new("separation bound at 1/(4C), 1/(9C)", sep, "log 3, log 5 within 1e-12", sep <= 1e-12),
    ])
}

/// Radii of the counting profile.
pub const COUNTING_LADDER: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// `K(r) = max_{r' ≤ r} n(f, r', w) √(1 − r')` along a ladder of
/// `(r, scaled count)` pairs.
pub fn running_bound(scaled: &[f64]) -> Vec<f64> {
    scaled
        .iter()
        .scan(f64::NEG_INFINITY, |m, &v| {
            *m = m.max(v);
            Some(*m)
        })
        .collect()
}

/// Target used by the counting profile: the image-grid sample of largest
/// winding number for the family member `(30, −i)`.
pub fn spiral_target() -> Result<Complex64> {
    let f = MapExpr::example_family(30.0, Complex64::new(0.0, -1.0));
    let v = crate::valence::valence_estimate(&f, ValenceOptions::default())?;
    match v.estimate.at {
        ValenceLocation::Point { w } => Ok(w),
        ValenceLocation::Arc { .. } => Err(Error::Inapplicable("valence estimate has no sample point".into())),
    }
}

fn carleson_profile() -> Result<Vec<Check>> {
    let f = MapExpr::example_family(30.0, Complex64::new(0.0, -1.0));
    let w = spiral_target()?;
    let profile = counting_bound_profile(&f, w, &COUNTING_LADDER)?;
    let scaled: Vec<f64> = profile.iter().map(|p| p.scaled).collect();
    let k = running_bound(&scaled);
    let ratio = |v: &[f64]| {
        let (a, b) = (v[v.len() - 2], v[v.len() - 1]);
        a.max(b) / a.min(b)
    };
    let running = ratio(&k);
    let literal = ratio(&scaled);
    Ok(vec![
        Check::new(
            "running bound max/min over the last two radii",
            json!({ "target": w, "profile": profile, "running": k, "ratio": running }),
            "< 2",
            running < 2.0,
        ),
        Check::new(
            "pointwise n·√(1 − r) ratio over the last two radii (informational)",
            literal,
            "logged only",
            true,
        ),
    ])
}
