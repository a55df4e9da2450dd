//! Flat key-value experiment configuration.
//!
//! The format is dotted keys, one `key=value` per line, `#` comments:
//!
//! ```text
//! sim.N=500
//! sim.L=50
//! fitness.form=quadratic
//! fitness.kappa=15
//! recomb.kind=single
//! recomb.rho=500
//! ```
//!
//! Unknown keys are rejected so typos fail loudly, with the offending key
//! named.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use polygene::forward::{InitialCondition, SimConfig, StatOptions};
use polygene::meanfield::{InitialLaw, MeanFieldConfig, Resolution};
use polygene::recomb::{RecombinationModel, TabulatedDensity};
use polygene::{FitnessSpec, MutationRates};

/// Parsed key-value map plus bookkeeping about which keys were consumed.
#[derive(Debug, Clone)]
pub struct FlatConfig {
    values: BTreeMap<String, String>,
    base_dir: PathBuf,
}

impl FlatConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected key=value, got `{raw}`", lineno + 1);
            };
            let key = key.trim().to_string();
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                bail!("config line {}: duplicate key `{key}`", lineno + 1);
            }
        }
        Ok(FlatConfig {
            values,
            base_dir: base_dir.to_path_buf(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .with_context(|| format!("config key `{key}` is required"))
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| v.parse::<f64>().with_context(|| format!("key `{key}`: bad number `{v}`")))
            .transpose()
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.require(key)?
            .parse()
            .with_context(|| format!("key `{key}`: bad number"))
    }

    pub fn require_usize(&self, key: &str) -> Result<usize> {
        self.require(key)?
            .parse()
            .with_context(|| format!("key `{key}`: bad integer"))
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().with_context(|| format!("key `{key}`: bad integer")),
        }
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().with_context(|| format!("key `{key}`: bad integer")),
        }
    }

    pub fn get_bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(v) => bail!("key `{key}`: expected true/false, got `{v}`"),
        }
    }

    /// Echo as a sorted JSON object (the canonical form run checksums are
    /// computed over).
    pub fn echo_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.values
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect(),
        )
    }

    pub fn check_no_unknown_keys(&self, known: &[&str]) -> Result<()> {
        for key in self.values.keys() {
            if !known.contains(&key.as_str()) {
                bail!("unknown config key `{key}`");
            }
        }
        Ok(())
    }

    // ── Section builders ─────────────────────────────────────────────

    pub fn fitness(&self) -> Result<FitnessSpec> {
        let form = self.get("fitness.form").unwrap_or("quadratic");
        match form {
            "linear" => Ok(FitnessSpec::Linear {
                beta: self.require_f64("fitness.beta")?,
            }),
            "quadratic" => Ok(FitnessSpec::Quadratic {
                kappa: self.get_f64("fitness.kappa")?.unwrap_or(0.0),
                z_star: self.get_f64("fitness.zstar")?.unwrap_or(0.0),
            }),
            other => bail!("fitness.form must be linear or quadratic, got `{other}`"),
        }
    }

    pub fn mutation(&self) -> Result<MutationRates> {
        MutationRates::new(
            self.get_f64("mutation.theta_plus")?.unwrap_or(0.0),
            self.get_f64("mutation.theta_minus")?.unwrap_or(0.0),
        )
        .map_err(anyhow::Error::from)
    }

    pub fn recomb_model(&self, loci: usize) -> Result<RecombinationModel> {
        let kind = self.get("recomb.kind").unwrap_or("free");
        let density = match self.get("recomb.density_file") {
            None => None,
            Some(rel) => {
                let path = self.base_dir.join(rel);
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading density table {}", path.display()))?;
                let mut points = Vec::new();
                for (lineno, raw) in text.lines().enumerate() {
                    let line = raw.split('#').next().unwrap_or("").trim();
                    if line.is_empty() {
                        continue;
                    }
                    let mut cols = line.split_whitespace();
                    let (Some(x), Some(y)) = (cols.next(), cols.next()) else {
                        bail!("density table line {}: need two columns", lineno + 1);
                    };
                    points.push((x.parse::<f64>()?, y.parse::<f64>()?));
                }
                Some(TabulatedDensity::from_points(&points)?)
            }
        };
        let model = match kind {
            "free" => RecombinationModel::free(loci)?,
            "single" => match density {
                Some(d) => RecombinationModel::single_crossover(loci, d)?,
                None => RecombinationModel::single_uniform(loci)?,
            },
            "poisson" => {
                let lambda = self.require_f64("recomb.lambda")?;
                match density {
                    Some(d) => RecombinationModel::poisson_crossover(loci, d, lambda)?,
                    None => RecombinationModel::poisson_uniform(loci, lambda)?,
                }
            }
            other => bail!("recomb.kind must be free, single or poisson, got `{other}`"),
        };
        Ok(model)
    }

    pub fn sim_config(&self, seed: u64) -> Result<SimConfig> {
        let loci = self.require_usize("sim.L")?;
        let init = match self.get("sim.init").unwrap_or("neutral_equilibrium") {
            "all_plus" => InitialCondition::AllPlus,
            "all_minus" => InitialCondition::AllMinus,
            "neutral_equilibrium" => InitialCondition::NeutralEquilibrium,
            "explicit" => {
                let list = self.require("sim.init_freqs")?;
                let freqs: std::result::Result<Vec<f64>, _> =
                    list.split(',').map(|v| v.trim().parse::<f64>()).collect();
                InitialCondition::ExplicitFrequencies(freqs.context("sim.init_freqs")?)
            }
            other => bail!("sim.init: unknown initial condition `{other}`"),
        };
        let cfg = SimConfig {
            n: self.require_usize("sim.N")?,
            loci,
            generations: self.require_usize("sim.generations")?,
            fitness: self.fitness()?,
            mutation: self.mutation()?,
            recomb: self.recomb_model(loci)?,
            rho: self.require_f64("recomb.rho")?,
            init,
            seed,
            record_stride: self.get_usize("sim.stride", 1)?,
            stats: StatOptions {
                histogram_bins: self.get_usize("stats.bins", 50)?,
                ld_pairs: self.get_usize("stats.ld_pairs", 200)?,
                le_triples: self.get_usize("stats.le_triples", 100)?,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn meanfield_config(&self, seed: u64) -> Result<MeanFieldConfig> {
        let resolution = match self.get("meanfield.kind").unwrap_or("particles") {
            "particles" => Resolution::Particles(self.get_usize("meanfield.M", 100_000)?),
            "grid" => Resolution::Grid(self.get_usize("meanfield.K", 400)?),
            other => bail!("meanfield.kind must be particles or grid, got `{other}`"),
        };
        let init = match self.get("meanfield.init").unwrap_or("pi_y") {
            "pi_y" => InitialLaw::PiY {
                y: self.get_f64("meanfield.init_y")?.unwrap_or(0.0),
            },
            "point" => InitialLaw::Point {
                x: self.require_f64("meanfield.init_x")?,
            },
            "uniform" => InitialLaw::Uniform,
            other => bail!("meanfield.init: unknown initial law `{other}`"),
        };
        let default_dt = match resolution {
            Resolution::Particles(_) => 1e-3,
            Resolution::Grid(_) => 1e-4,
        };
        let cfg = MeanFieldConfig {
            fitness: self.fitness()?,
            mutation: self.mutation()?,
            dt: self.get_f64("meanfield.dt")?.unwrap_or(default_dt),
            horizon: self.require_f64("meanfield.T")?,
            resolution,
            init,
            seed,
            record_stride: self.get_usize("meanfield.stride", 100)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub const SIM_KEYS: &[&str] = &[
    "mode",
    "seed",
    "replicates",
    "sim.N",
    "sim.L",
    "sim.generations",
    "sim.stride",
    "sim.init",
    "sim.init_freqs",
    "fitness.form",
    "fitness.beta",
    "fitness.kappa",
    "fitness.zstar",
    "mutation.theta_plus",
    "mutation.theta_minus",
    "recomb.kind",
    "recomb.rho",
    "recomb.lambda",
    "recomb.density_file",
    "stats.bins",
    "stats.ld_pairs",
    "stats.le_triples",
];

pub const MEANFIELD_KEYS: &[&str] = &[
    "mode",
    "seed",
    "replicates",
    "fitness.form",
    "fitness.beta",
    "fitness.kappa",
    "fitness.zstar",
    "mutation.theta_plus",
    "mutation.theta_minus",
    "meanfield.kind",
    "meanfield.M",
    "meanfield.K",
    "meanfield.dt",
    "meanfield.T",
    "meanfield.stride",
    "meanfield.init",
    "meanfield.init_y",
    "meanfield.init_x",
    "meanfield.snapshots",
];
