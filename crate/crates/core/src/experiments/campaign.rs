//! Campaign runner: seeded end-to-end trials with incremental JSON-lines
//! persistence, deterministic aggregation, and parameter sweeps.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::colourings::{colour_edges, ColouringStrategy};
use super::targets::{generate_target, TargetClass};
use super::verify::independent_verify;
use super::ExperimentError;
use crate::embedder::{embed_monochromatic, ConstantsPack, EmbedMode, PipelineConfig};
use crate::ensemble::{sample_gnp, EnsembleSpec};
use crate::regularity::parse_rational;
use crate::rng::derive_seed;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Host vertex count and edge probability.
    pub host_n: usize,
    pub host_p: f64,
    pub target: TargetClass,
    pub strategy: ColouringStrategy,
    pub colours: usize,
    /// Practical constants pack in its JSON shape.
    pub constants: serde_json::Value,
    pub mode: EmbedMode,
    pub trials: usize,
    pub audit: bool,
    pub master_seed: u64,
    /// Pipeline knobs; defaults fill anything omitted.
    #[serde(default)]
    pub attempts: Option<usize>,
    #[serde(default)]
    pub k0: Option<usize>,
    #[serde(default)]
    pub eps: Option<String>,
    #[serde(default)]
    pub fine_eps: Option<String>,
    #[serde(default)]
    pub use_fraction: Option<String>,
}

impl ExperimentConfig {
    pub fn pipeline_config(&self, trial_seed: u64) -> Result<PipelineConfig, ExperimentError> {
        let mut config = PipelineConfig { audit: self.audit, seed: trial_seed, ..Default::default() };
        if let Some(a) = self.attempts {
            config.attempts = a;
        }
        if let Some(k0) = self.k0 {
            config.k0 = k0;
        }
        if let Some(eps) = &self.eps {
            config.eps = parse_rational(eps).map_err(|e| ExperimentError::Config(e.to_string()))?;
        }
        if let Some(f) = &self.fine_eps {
            config.fine_eps =
                parse_rational(f).map_err(|e| ExperimentError::Config(e.to_string()))?;
        }
        if let Some(u) = &self.use_fraction {
            config.select.use_fraction =
                parse_rational(u).map_err(|e| ExperimentError::Config(e.to_string()))?;
        }
        Ok(config)
    }

    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex_digest(&bytes)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub failure_stage: Option<String>,
    pub colour: Option<usize>,
    pub attempts_used: usize,
    pub millis: u128,
    pub embedding_hash: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignResult {
    pub schema_version: u32,
    pub config_hash: String,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Wilson score interval at 95%.
    pub confidence_interval: (f64, f64),
    pub records: Vec<TrialRecord>,
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96f64;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = phat + z * z / (2.0 * n);
    let spread = z * ((phat * (1.0 - phat) + z * z / (4.0 * n)) / n).sqrt();
    (((centre - spread) / denom).max(0.0), ((centre + spread) / denom).min(1.0))
}

/// Runs one seeded trial end to end: sample the host, colour it, generate
/// the target, embed, and re-verify with the independent checker.
pub fn run_trial(config: &ExperimentConfig, trial: usize) -> TrialRecord {
    let seed = derive_seed(config.master_seed, 0x7472_6961, trial as u64);
    let start = std::time::Instant::now();
    let mut record = TrialRecord {
        trial,
        seed,
        success: false,
        failure_stage: None,
        colour: None,
        attempts_used: 0,
        millis: 0,
    embedding_hash: None,
    };
    let outcome = (|| -> Result<(), (String, String)> {
        let spec = EnsembleSpec::new(config.host_n, config.host_p, derive_seed(seed, 1, 0))
            .map_err(|e| ("host".into(), e.to_string()))?;
        let gamma = sample_gnp(&spec);
        let colouring =
            colour_edges(&gamma, config.strategy, config.colours, derive_seed(seed, 2, 0))
                .map_err(|e| ("colouring".into(), e.to_string()))?;
        let target = generate_target(&config.target, derive_seed(seed, 3, 0))
            .map_err(|e| ("target".into(), e.to_string()))?;
        let cp = ConstantsPack::from_json(&config.constants)
            .map_err(|e| ("constants".into(), e.to_string()))?;
        let pipeline = config
            .pipeline_config(seed)
            .map_err(|e| ("pipeline-config".into(), e.to_string()))?;
        let report = embed_monochromatic(&target, &gamma, &colouring, &cp, config.mode, &pipeline)
            .map_err(|e| ("embed".into(), e.to_string()))?;
        if !report.success {
            return Err((
                "embed".into(),
                report.trajectory.failures.last().cloned().unwrap_or_else(|| "no attempt succeeded".into()),
            ));
        }
        // Independent re-verification.
        let pattern_edges: Vec<(usize, usize)> = target.graph().edges().collect();
        let host_edges: Vec<(usize, usize, usize)> = gamma
            .edges()
            .map(|(u, v)| (u, v, colouring.colour(u, v).expect("total colouring")))
            .collect();
        independent_verify(
            target.n(),
            &pattern_edges,
            &host_edges,
            &report.embedding,
            report.colour,
        )
        .map_err(|e| ("verify".into(), e))?;
        record.colour = Some(report.colour);
        record.attempts_used = report.attempts_used;
        record.embedding_hash =
            Some(hex_digest(&serde_json::to_vec(&report.embedding).expect("serializes")));
        Ok(())
    })();
    match outcome {
        Ok(()) => record.success = true,
        Err((stage, message)) => record.failure_stage = Some(format!("{stage}: {message}")),
    }
    record.millis = start.elapsed().as_millis();
    record
}

/// Runs a campaign, resuming from an existing JSON-lines file when present.
/// Trials run in parallel (capped by RAMSEY_THREADS); records land in trial
/// order regardless of scheduling.
pub fn run_campaign(
    config: &ExperimentConfig,
    out_path: Option<&Path>,
) -> Result<CampaignResult, ExperimentError> {
    if config.schema_version != SCHEMA_VERSION {
        return Err(ExperimentError::Config(format!(
            "schema version {} unsupported (expected {SCHEMA_VERSION})",
            config.schema_version
        )));
    }
    let mut done: Vec<Option<TrialRecord>> = vec![None; config.trials];
    if let Some(path) = out_path {
        if path.exists() {
            let file = std::fs::File::open(path)?;
            for line in BufReader::new(file).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: TrialRecord = serde_json::from_str(&line)?;
                let trial = record.trial;
                if trial < config.trials {
                    done[trial] = Some(record);
                }
            }
        }
    }
    let pending: Vec<usize> =
        (0..config.trials).filter(|&t| done[t].is_none()).collect();

    let pool = thread_pool()?;
    let fresh: Vec<TrialRecord> = pool.install(|| {
        pending.par_iter().map(|&t| run_trial(config, t)).collect()
    });

    if let Some(path) = out_path {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        for record in &fresh {
            writeln!(file, "{}", serde_json::to_string(record)?)?;
        }
    }
    for record in fresh {
        let t = record.trial;
        done[t] = Some(record);
    }
    let records: Vec<TrialRecord> = done.into_iter().map(|r| r.expect("all trials ran")).collect();
    let successes = records.iter().filter(|r| r.success).count();
    Ok(CampaignResult {
        schema_version: SCHEMA_VERSION,
        config_hash: config.content_hash(),
        trials: config.trials,
        successes,
        success_rate: if config.trials == 0 {
            0.0
        } else {
            successes as f64 / config.trials as f64
        },
        confidence_interval: wilson_interval(successes, config.trials),
        records,
    })
}

fn thread_pool() -> Result<rayon::ThreadPool, ExperimentError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(cap) = std::env::var("RAMSEY_THREADS") {
        if let Ok(threads) = cap.parse::<usize>() {
            builder = builder.num_threads(threads.max(1));
        }
    }
    builder.build().map_err(|e| ExperimentError::Config(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    P,
    N,
    R,
    Mu,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub value: f64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub failure_stages: std::collections::BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub param: SweepParam,
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,trials,successes,success_rate\n");
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{},{}\n",
                cell.value, cell.trials, cell.successes, cell.success_rate
            ));
        }
        out
    }
}

/// Runs the base campaign across a parameter grid. Cells share the master
/// seed so paired comparisons see the same randomness where shapes allow.
pub fn sweep(
    param: SweepParam,
    grid: &[f64],
    base: &ExperimentConfig,
) -> Result<SweepTable, ExperimentError> {
    if grid.is_empty() {
        return Err(ExperimentError::Config("sweep grid is empty".into()));
    }
    let mut cells = Vec::with_capacity(grid.len());
    for &value in grid {
        let mut config = base.clone();
        match param {
            SweepParam::P => config.host_p = value,
            SweepParam::N => config.host_n = value as usize,
            SweepParam::R => config.colours = value as usize,
            SweepParam::Mu => {
                let mu = format!("{value}");
                if let Some(obj) = config.constants.as_object_mut() {
                    obj.insert("mu".into(), serde_json::Value::String(mu));
                }
            }
        }
        let result = run_campaign(&config, None)?;
        let mut failure_stages = std::collections::BTreeMap::new();
        for record in &result.records {
            if let Some(stage) = &record.failure_stage {
                let key = stage.split(':').next().unwrap_or("unknown").to_string();
                *failure_stages.entry(key).or_insert(0) += 1;
            }
        }
        cells.push(SweepCell {
            value,
            trials: result.trials,
            successes: result.successes,
            success_rate: result.success_rate,
            failure_stages,
        });
    }
    Ok(SweepTable { param, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        let constants = serde_json::json!({
            "degeneracy": 1,
            "max_degree": 2,
            "colours": 1,
            "mu": "1/2",
            "h0": 4,
            "ell1": 1,
            "h1": 3,
            "kappa": "1/10",
            "rho": "1/1000",
            "k": "4",
        });
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            host_n: 600,
            host_p: 0.3,
            target: TargetClass::Path { n: 8 },
            strategy: ColouringStrategy::Random,
            colours: 1,
            constants,
            mode: EmbedMode::Degenerate,
            trials: 2,
            audit: false,
            master_seed: 7,
            attempts: Some(2),
            k0: Some(3),
            // Small-host smoke test: keep epsilon well above sampling noise.
            eps: Some("3/4".into()),
            fine_eps: Some("3/8".into()),
            use_fraction: Some("1".into()),
        }
    }

    #[test]
    fn empty_campaign_is_valid() {
        let mut config = tiny_config();
        config.trials = 0;
        let result = run_campaign(&config, None).unwrap();
        assert_eq!(result.trials, 0);
        assert!(result.records.is_empty());
    }

    #[test]
    fn campaign_runs_and_is_deterministic() {
        let config = tiny_config();
        let a = run_campaign(&config, None).unwrap();
        let b = run_campaign(&config, None).unwrap();
        assert_eq!(a.successes, b.successes);
        let ha: Vec<_> = a.records.iter().map(|r| r.embedding_hash.clone()).collect();
        let hb: Vec<_> = b.records.iter().map(|r| r.embedding_hash.clone()).collect();
        assert_eq!(ha, hb);
        assert!(a.successes >= 1, "records: {:?}", a.records);
    }

    #[test]
    fn campaign_resumes_from_file() {
        let config = tiny_config();
        let dir = std::env::temp_dir().join(format!("campaign-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("records.jsonl");
        let _ = std::fs::remove_file(&path);
        let first = run_campaign(&config, Some(&path)).unwrap();
        let resumed = run_campaign(&config, Some(&path)).unwrap();
        assert_eq!(first.successes, resumed.successes);
        // The file was not extended on resume.
        let lines = std::fs::read_to_string(&path).unwrap().lines().count();
        assert_eq!(lines, config.trials);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn single_cell_sweep_matches_campaign() {
        let config = tiny_config();
        let table = sweep(SweepParam::P, &[0.3], &config).unwrap();
        let direct = run_campaign(&config, None).unwrap();
        assert_eq!(table.cells[0].successes, direct.successes);
    }
}
