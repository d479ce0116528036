use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::StoppingRule;
use crate::error::{Error, Result};

pub const CONFIG_SCHEMA: &str = "aamkit/v1";

/// A scenario file: which problem to run, its parameters, the set
/// schedule, the mandatory seed, and output paths. Unknown fields are
/// rejected, and validation reports every finding at once.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Versioned schema tag; must equal `aamkit/v1`.
    pub schema: String,
    pub kind: ScenarioKind,
    /// Seed for every random draw in the scenario. Mandatory: there is no
    /// ambient randomness.
    pub seed: u64,
    #[serde(default)]
    pub stop: StopConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Reference optimum for reporting and diagnostics, when known.
    #[serde(default)]
    pub oracle: Option<OracleConfig>,
    #[serde(default)]
    pub divergence: Option<DivergenceConfig>,
    #[serde(default)]
    pub hilbert: Option<HilbertConfig>,
    #[serde(default)]
    pub portfolio: Option<PortfolioConfig>,
    #[serde(default)]
    pub schedule: Option<ScheduleConfig>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Fixed sets: classical alternation on one instantiation.
    Classical,
    /// Divergence instantiation with time-varying coupling sets.
    AamDivergence,
    /// Product-space instantiation with a drifting set schedule.
    AamHilbert,
    /// Log-optimal portfolio weights from a return matrix.
    Portfolio,
}

impl ScenarioKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::Classical => "classical",
            ScenarioKind::AamDivergence => "aam-divergence",
            ScenarioKind::AamHilbert => "aam-hilbert",
            ScenarioKind::Portfolio => "portfolio",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct StopConfig {
    pub max_iter: usize,
    pub tol: f64,
    pub window: usize,
}

impl Default for StopConfig {
    fn default() -> Self {
        let d = StoppingRule::default();
        StopConfig {
            max_iter: d.max_iter,
            tol: d.tol,
            window: d.window,
        }
    }
}

impl StopConfig {
    pub fn rule(&self) -> StoppingRule {
        StoppingRule::new(self.max_iter, self.tol, self.window)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Trace file path; no trace is written when absent.
    pub trace: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// Reference optimal cost over the limit sets.
    pub cost: f64,
}

/// Parameters of the divergence instantiation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DivergenceConfig {
    pub outcomes: Vec<String>,
    /// One row per component, one entry per outcome.
    pub components: Vec<Vec<f64>>,
    pub weight_floor: f64,
    /// Inline sample sequence; exclusive with `generate` and
    /// `limit_marginal`.
    #[serde(default)]
    pub samples: Option<Vec<String>>,
    /// Seeded sample generation from declared true weights.
    #[serde(default)]
    pub generate: Option<GenerateConfig>,
    /// Empirical estimation mode for sample-driven scenarios.
    #[serde(default)]
    pub mode: Option<DivergenceMode>,
    /// New samples revealed per iteration in adaptive mode.
    #[serde(default)]
    pub batch_size: Option<usize>,
    /// Synthetic drift: the limit coupling marginal...
    #[serde(default)]
    pub limit_marginal: Option<Vec<f64>>,
    /// ...and the unit drift direction added to it, scaled by the
    /// schedule's rate (entries sum to zero, largest magnitude one).
    #[serde(default)]
    pub drift_direction: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceMode {
    Batch,
    Adaptive,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    pub true_weights: Vec<f64>,
    pub count: usize,
}

/// Parameters of the product-space instantiation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HilbertConfig {
    pub block_dim: usize,
    pub weights: Vec<f64>,
    /// Initial point, one block per weight.
    pub q0: Vec<Vec<f64>>,
    /// First-argument set: the diagonal, or a finite list of product
    /// points for the non-convex fixture.
    pub p_set: PSetSpec,
    /// Second-argument block sets (the limits, under a drifting schedule).
    pub q_blocks: Vec<BlockSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PSetSpec {
    /// All-blocks-equal subspace (its sampling box is derived from the
    /// scheduled sets).
    Diagonal,
    /// Finite list of product points; deliberately non-convex with two or
    /// more distinct entries.
    Finite { points: Vec<Vec<Vec<f64>>> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BlockSpec {
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Affine {
        anchor: Vec<f64>,
        directions: Vec<Vec<f64>>,
        extents: Vec<f64>,
    },
    Point {
        at: Vec<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PortfolioConfig {
    /// One row per scenario, one positive return per asset.
    pub returns: Vec<Vec<f64>>,
    pub weight_floor: f64,
}

/// Drift rate law for the revealed sets.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub law: ScheduleLaw,
    /// Ratio for the geometric law.
    #[serde(default)]
    pub rho: Option<f64>,
    /// Explicit drift magnitudes for the custom law; must cover
    /// `stop.max_iter` iterations.
    #[serde(default)]
    pub eps: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleLaw {
    Constant,
    /// `eps_n = 1/n`.
    Harmonic,
    /// `eps_n = rho^n`.
    Geometric,
    /// `eps_n` read from an explicit list.
    Custom,
}

impl ScenarioConfig {
    /// Canonical serialization used for hashing and reproducibility.
    pub fn canonical_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// All semantic findings, empty when the config is runnable.
    pub fn validation_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.schema != CONFIG_SCHEMA {
            errs.push(format!(
                "schema tag `{}` is not the supported `{CONFIG_SCHEMA}`",
                self.schema
            ));
        }
        if self.stop.max_iter == 0 {
            errs.push("stop.max_iter must be at least 1".into());
        }
        if !(self.stop.tol >= 0.0) {
            errs.push("stop.tol must be nonnegative".into());
        }

        match self.kind {
            ScenarioKind::Classical => {
                match (&self.divergence, &self.hilbert) {
                    (Some(_), Some(_)) => errs.push(
                        "classical scenarios take exactly one of [divergence] or [hilbert], not both"
                            .into(),
                    ),
                    (None, None) => errs.push(
                        "classical scenarios need a [divergence] or [hilbert] table".into(),
                    ),
                    _ => {}
                }
                if self.schedule.is_some() {
                    errs.push("classical scenarios take no [schedule]".into());
                }
                if let Some(d) = &self.divergence {
                    self.check_divergence(d, false, &mut errs);
                }
                if let Some(h) = &self.hilbert {
                    self.check_hilbert(h, false, &mut errs);
                }
            }
            ScenarioKind::AamDivergence => {
                match &self.divergence {
                    None => errs.push("aam-divergence scenarios need a [divergence] table".into()),
                    Some(d) => self.check_divergence(d, true, &mut errs),
                }
                if self.hilbert.is_some() || self.portfolio.is_some() {
                    errs.push("aam-divergence scenarios take only a [divergence] table".into());
                }
            }
            ScenarioKind::AamHilbert => {
                match &self.hilbert {
                    None => errs.push("aam-hilbert scenarios need a [hilbert] table".into()),
                    Some(h) => self.check_hilbert(h, true, &mut errs),
                }
                match &self.schedule {
                    None => errs.push("aam-hilbert scenarios need a [schedule] table".into()),
                    Some(s) => self.check_schedule(s, &mut errs),
                }
                if self.divergence.is_some() || self.portfolio.is_some() {
                    errs.push("aam-hilbert scenarios take only a [hilbert] table".into());
                }
            }
            ScenarioKind::Portfolio => {
                match &self.portfolio {
                    None => errs.push("portfolio scenarios need a [portfolio] table".into()),
                    Some(p) => {
                        let assets = p.returns.first().map(Vec::len).unwrap_or(0);
                        if p.returns.is_empty() || assets == 0 {
                            errs.push("portfolio returns matrix is empty".into());
                        }
                        for (l, row) in p.returns.iter().enumerate() {
                            if row.len() != assets {
                                errs.push(format!(
                                    "portfolio return row {l} has {} entries, expected {assets}",
                                    row.len()
                                ));
                            }
                            if row.iter().any(|&r| !(r > 0.0)) {
                                errs.push(format!("portfolio return row {l} has a nonpositive entry"));
                            }
                        }
                        if !(p.weight_floor > 0.0) {
                            errs.push("portfolio weight_floor must be positive".into());
                        } else if assets as f64 * p.weight_floor > 1.0 {
                            errs.push(format!(
                                "infeasible weight floor: {assets} assets with floor {}",
                                p.weight_floor
                            ));
                        }
                    }
                }
                if self.divergence.is_some() || self.hilbert.is_some() || self.schedule.is_some() {
                    errs.push("portfolio scenarios take only a [portfolio] table".into());
                }
            }
        }
        errs
    }

    fn check_divergence(&self, d: &DivergenceConfig, adaptive_kind: bool, errs: &mut Vec<String>) {
        let m = d.outcomes.len();
        if m == 0 {
            errs.push("divergence outcomes list is empty".into());
        }
        if d.outcomes
            .iter()
            .any(|s| s.is_empty() || s.chars().any(char::is_whitespace))
        {
            errs.push("divergence outcome symbols must be nonempty and whitespace-free".into());
        }
        if d.components.is_empty() {
            errs.push("divergence needs at least one component".into());
        }
        for (i, row) in d.components.iter().enumerate() {
            if row.len() != m {
                errs.push(format!(
                    "component {i} has {} entries for {m} outcomes",
                    row.len()
                ));
            }
            if row.iter().any(|&v| !(v > 0.0)) {
                errs.push(format!("component {i} has a nonpositive entry"));
            } else if (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                errs.push(format!("component {i} does not sum to 1"));
            }
        }
        let count = d.components.len();
        if !(d.weight_floor > 0.0) {
            errs.push("weight_floor must be positive".into());
        } else if count as f64 * d.weight_floor > 1.0 {
            errs.push(format!(
                "infeasible weight floor: {count} components with floor {}",
                d.weight_floor
            ));
        }

        let data_sources = usize::from(d.samples.is_some())
            + usize::from(d.generate.is_some())
            + usize::from(d.limit_marginal.is_some());
        if data_sources != 1 {
            errs.push(
                "divergence needs exactly one of `samples`, `generate`, or `limit_marginal`"
                    .into(),
            );
        }
        if let Some(samples) = &d.samples {
            if samples.is_empty() {
                errs.push("inline sample list is empty".into());
            }
            for s in samples {
                if !d.outcomes.contains(s) {
                    errs.push(format!("sample symbol `{s}` is outside the outcomes"));
                    break;
                }
            }
        }
        if let Some(g) = &d.generate {
            if g.true_weights.len() != count {
                errs.push("generate.true_weights length must match the component count".into());
            } else {
                let total: f64 = g.true_weights.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    errs.push("generate.true_weights must sum to 1".into());
                }
                if g.true_weights.iter().any(|&w| w < d.weight_floor - 1e-12) {
                    errs.push("generate.true_weights must respect the weight floor".into());
                }
            }
            if g.count == 0 {
                errs.push("generate.count must be positive".into());
            }
        }
        if let Some(marginal) = &d.limit_marginal {
            if !adaptive_kind {
                errs.push("limit_marginal drift needs kind = \"aam-divergence\"".into());
            }
            if marginal.len() != m {
                errs.push("limit_marginal length must match the outcomes".into());
            } else if (marginal.iter().sum::<f64>() - 1.0).abs() > 1e-9
                || marginal.iter().any(|&v| v < 0.0)
            {
                errs.push("limit_marginal must be a distribution".into());
            }
            match &d.drift_direction {
                None => errs.push("limit_marginal drift needs drift_direction".into()),
                Some(dir) => {
                    if dir.len() != m {
                        errs.push("drift_direction length must match the outcomes".into());
                    } else {
                        if dir.iter().sum::<f64>().abs() > 1e-9 {
                            errs.push("drift_direction entries must sum to zero".into());
                        }
                        let max = dir.iter().map(|v| v.abs()).fold(0.0, f64::max);
                        if (max - 1.0).abs() > 1e-9 {
                            errs.push("drift_direction largest magnitude must be 1".into());
                        }
                    }
                }
            }
            match &self.schedule {
                None => errs.push("limit_marginal drift needs a [schedule] table".into()),
                Some(s) => self.check_schedule(s, errs),
            }
            if d.mode.is_some() || d.batch_size.is_some() {
                errs.push("limit_marginal drift takes neither mode nor batch_size".into());
            }
        } else {
            if adaptive_kind && self.schedule.is_some() {
                errs.push("sample-driven divergence scenarios take no [schedule] (the coupling sets come from sample prefixes)".into());
            }
            if !adaptive_kind && d.mode == Some(DivergenceMode::Adaptive) {
                errs.push("adaptive mode needs kind = \"aam-divergence\"".into());
            }
            if d.mode != Some(DivergenceMode::Adaptive) && d.batch_size.is_some() {
                errs.push("batch_size applies only to adaptive mode".into());
            }
            if d.batch_size == Some(0) {
                errs.push("batch_size must be at least 1".into());
            }
        }
    }

    fn check_hilbert(&self, h: &HilbertConfig, _adaptive: bool, errs: &mut Vec<String>) {
        let k = h.block_dim;
        if k == 0 {
            errs.push("block_dim must be positive".into());
        }
        let count = h.weights.len();
        if count == 0 {
            errs.push("hilbert weights list is empty".into());
        }
        if h.weights.iter().any(|&w| !(w > 0.0)) {
            errs.push("hilbert weights must be positive".into());
        } else if count > 0 && (h.weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            errs.push("hilbert weights must sum to 1".into());
        }
        if h.q0.len() != count {
            errs.push(format!(
                "q0 has {} blocks for {count} weights",
                h.q0.len()
            ));
        }
        if h.q0.iter().any(|b| b.len() != k) {
            errs.push(format!("every q0 block must have dimension {k}"));
        }
        if h.q_blocks.len() != count {
            errs.push(format!(
                "q_blocks lists {} sets for {count} blocks",
                h.q_blocks.len()
            ));
        }
        for (i, spec) in h.q_blocks.iter().enumerate() {
            if let Err(e) = spec.build() {
                errs.push(format!("q_blocks[{i}]: {e}"));
            } else if spec.dim() != k {
                errs.push(format!(
                    "q_blocks[{i}] has dimension {}, expected {k}",
                    spec.dim()
                ));
            }
        }
        if let PSetSpec::Finite { points } = &h.p_set {
            if points.is_empty() {
                errs.push("finite first-argument set has no points".into());
            }
            for (j, point) in points.iter().enumerate() {
                if point.len() != count || point.iter().any(|b| b.len() != k) {
                    errs.push(format!("finite point {j} does not match the space shape"));
                }
            }
        }
    }

    fn check_schedule(&self, s: &ScheduleConfig, errs: &mut Vec<String>) {
        match s.law {
            ScheduleLaw::Geometric => match s.rho {
                None => errs.push("geometric law needs rho".into()),
                Some(r) if !(r > 0.0 && r < 1.0) => {
                    errs.push(format!("geometric rho must lie in (0, 1), got {r}"))
                }
                _ => {}
            },
            ScheduleLaw::Custom => match &s.eps {
                None => errs.push("custom law needs an eps list".into()),
                Some(eps) => {
                    if eps.len() < self.stop.max_iter {
                        errs.push(format!(
                            "custom eps list has {} entries but stop.max_iter is {}",
                            eps.len(),
                            self.stop.max_iter
                        ));
                    }
                    if eps.iter().any(|&e| !(e >= 0.0)) {
                        errs.push("custom eps entries must be nonnegative".into());
                    }
                }
            },
            ScheduleLaw::Constant | ScheduleLaw::Harmonic => {}
        }
        if s.law != ScheduleLaw::Geometric && s.rho.is_some() {
            errs.push("rho applies only to the geometric law".into());
        }
        if s.law != ScheduleLaw::Custom && s.eps.is_some() {
            errs.push("eps applies only to the custom law".into());
        }
    }
}

impl BlockSpec {
    pub fn dim(&self) -> usize {
        match self {
            BlockSpec::Box { lo, .. } => lo.len(),
            BlockSpec::Ball { center, .. } => center.len(),
            BlockSpec::Halfspace { normal, .. } => normal.len(),
            BlockSpec::Affine { anchor, .. } => anchor.len(),
            BlockSpec::Point { at } => at.len(),
        }
    }

    pub fn build(&self) -> Result<crate::hilbert::BlockSet> {
        use crate::hilbert::BlockSet;
        match self {
            BlockSpec::Box { lo, hi } => BlockSet::axis_box(lo.clone(), hi.clone()),
            BlockSpec::Ball { center, radius } => BlockSet::ball(center.clone(), *radius),
            BlockSpec::Halfspace {
                normal,
                offset,
                lo,
                hi,
            } => BlockSet::halfspace(normal.clone(), *offset, lo.clone(), hi.clone()),
            BlockSpec::Affine {
                anchor,
                directions,
                extents,
            } => BlockSet::affine_patch(anchor.clone(), directions.clone(), extents.clone()),
            BlockSpec::Point { at } => BlockSet::point(at.clone()),
        }
    }
}

/// Parse and validate a scenario file. Parse failures carry the TOML
/// position; semantic failures list every finding.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_scenario(&text)
}

/// Parse and validate scenario text.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let config: ScenarioConfig = toml::from_str(text)
        .map_err(|e| Error::InvalidConfig(vec![format!("parse error: {e}")]))?;
    let errs = config.validation_errors();
    if errs.is_empty() {
        Ok(config)
    } else {
        Err(Error::InvalidConfig(errs))
    }
}
