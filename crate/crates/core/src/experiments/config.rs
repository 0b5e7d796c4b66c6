use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bump::BumpPreset;
use crate::error::{Error, Result};
use crate::field::GridSpec;
use crate::riesz::{MaximalGrid, RieszParams};
use crate::spectral::SpectralParams;

/// The runners, one per CLI subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Experiment {
    Plancherel,
    Converge,
    SquareScaling,
    KernelDecay,
    Decomp,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Self::Plancherel,
        Self::Converge,
        Self::SquareScaling,
        Self::KernelDecay,
        Self::Decomp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Plancherel => "plancherel",
            Self::Converge => "converge",
            Self::SquareScaling => "square-scaling",
            Self::KernelDecay => "kernel-decay",
            Self::Decomp => "decomp",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))
    }
}

/// Everything a runner reads. Loaded from TOML on top of the defaults for
/// its experiment, so a file only needs the keys it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub spectral: SpectralParams,
    pub riesz: RieszParams,
    pub maximal: MaximalGrid,
    pub bump: BumpPreset,
    pub seed: u64,
    /// Upper bound on the bytes one spectral cache may take.
    pub memory_cap: usize,
    pub output_path: String,
    pub sweep: BTreeMap<String, Vec<f64>>,
    pub tolerances: BTreeMap<String, f64>,
}

fn sweep(entries: &[(&str, &[f64])]) -> BTreeMap<String, Vec<f64>> {
    entries.iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect()
}

fn tolerances(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

const GIB: usize = 1 << 30;

impl ExperimentConfig {
    /// Defaults sized to finish on a single desktop core.
    pub fn default_for(kind: Experiment) -> Self {
        let riesz = RieszParams {
            n: 1,
            alpha: 3.5,
            r: 1.0,
            delta: 0.25,
            kappa: 2.0,
            b: 1.1,
            p1: 4.0,
            p2: 4.0,
        };
        let base = Self {
            grid: GridSpec {
                n: 1,
                extent_z: 6.0,
                extent_t: 6.0,
                m_z: 32,
                m_t: 32,
            },
            spectral: SpectralParams {
                k_max: 32,
                lambda_min: 0.05,
                lambda_max: 24.0,
                panels: 8,
                order: 8,
            },
            riesz,
            maximal: MaximalGrid::default(),
            bump: BumpPreset::default(),
            seed: 20240601,
            memory_cap: 2 * GIB,
            output_path: format!("{kind}.csv"),
            sweep: BTreeMap::new(),
            tolerances: BTreeMap::new(),
        };
        match kind {
            Experiment::Plancherel => Self {
                grid: GridSpec {
                    m_z: 64,
                    m_t: 64,
                    ..base.grid
                },
                spectral: SpectralParams {
                    lambda_max: 8.0,
                    panels: 1,
                    order: 48,
                    ..base.spectral
                },
                sweep: sweep(&[("k_values", &[16.0, 32.0]), ("resolutions", &[24.0, 48.0]), ("eigen_k", &[0.0, 1.0, 2.0]), ("eigen_lambda", &[0.5, 1.0, 2.0])]),
                tolerances: tolerances(&[
                    ("plancherel_rel", 2e-2),
                    ("halving_ratio", 2.0),
                    ("eigen_ratio", 3.0),
                    ("interior_fraction", 0.8),
                ]),
                ..base
            },
            Experiment::Converge => Self {
                sweep: sweep(&[("r_exponents", &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0]), ("alpha_control", &[0.0])]),
                tolerances: tolerances(&[("monotone_steps", 4.0), ("family_spread", 10.0)]),
                ..base
            },
            Experiment::SquareScaling => Self {
                spectral: SpectralParams {
                    lambda_max: 8.0,
                    panels: 16,
                    ..base.spectral
                },
                maximal: MaximalGrid {
                    k_min: -2,
                    k_max: 6,
                    r_samples: 16,
                },
                sweep: sweep(&[
                    ("delta_exponents", &[2.0, 3.0, 4.0, 5.0, 6.0]),
                    ("p_values", &[2.0, f64::INFINITY]),
                    ("dilation_t", &[0.5, 2.0]),
                    ("dilation_r", &[0.5, 1.0, 2.0]),
                ]),
                tolerances: tolerances(&[
                    ("l2_slope_min", 0.4),
                    ("slope_slack", 0.5),
                    ("dilation_rel", 1e-2),
                    ("continuum_factor", 2.0),
                ]),
                ..base
            },
            Experiment::KernelDecay => Self {
                sweep: sweep(&[
                    ("far_r", &[4.0, 5.04, 6.35, 8.0, 10.08, 12.7, 16.0]),
                    ("ray_angles", &[0.0, 0.4, 0.8, 1.2, std::f64::consts::FRAC_PI_2]),
                    ("prefactor_lambda", &[0.5, 1.0, 2.0, 4.0]),
                    ("identity_t", &[0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0]),
                ]),
                tolerances: tolerances(&[
                    ("slope_slack", 0.5),
                    ("prefactor_slack", 0.5),
                    ("identity_rel", 1e-3),
                    ("kernel_k_max", 256.0),
                    ("identity_k_max", 64.0),
                ]),
                ..base
            },
            Experiment::Decomp => Self {
                sweep: sweep(&[("alphas", &[1.0, 2.0, 5.0]), ("taylor_orders", &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0])]),
                tolerances: tolerances(&[
                    ("partition", 1e-10),
                    ("splitting_depth", 12.0),
                    ("sigma_samples", 1e5),
                    ("taylor_delta", 1.0 / 16.0),
                    ("taylor_points", 200.0),
                ]),
                ..base
            },
        }
    }

    /// Parses `text` as TOML and overlays it on the defaults for `kind`.
    pub fn from_toml(kind: Experiment, text: &str) -> Result<Self> {
        let overlay: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::with_overlay(kind, overlay)
    }

    pub fn with_overlay(kind: Experiment, overlay: toml::Table) -> Result<Self> {
        let mut base = toml::Table::try_from(Self::default_for(kind)).map_err(|e| Error::Config(e.to_string()))?;
        // sweep and tolerances are open maps, so their names are checked here
        for section in ["sweep", "tolerances"] {
            if let (Some(toml::Value::Table(o)), Some(toml::Value::Table(b))) = (overlay.get(section), base.get(section)) {
                if let Some(key) = o.keys().find(|k| !b.contains_key(*k)) {
                    return Err(Error::Config(format!("unknown key {section}.{key} for {kind}")));
                }
            }
        }
        merge(&mut base, overlay);
        let cfg: Self = toml::Value::Table(base)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads the `[<experiment name>]` table of a multi-experiment file;
    /// a missing table means all defaults. Top-level keys other than
    /// experiment names are rejected.
    pub fn from_toml_section(kind: Experiment, text: &str) -> Result<Self> {
        let mut all: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(key) = all.keys().find(|k| k.parse::<Experiment>().is_err()) {
            return Err(Error::Config(format!("unknown experiment section [{key}]")));
        }
        match all.remove(kind.name()) {
            Some(toml::Value::Table(t)) => Self::with_overlay(kind, t),
            Some(_) => Err(Error::Config(format!("[{kind}] must be a table"))),
            None => Self::with_overlay(kind, toml::Table::new()),
        }
    }

    pub fn load(kind: Experiment, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(kind, &text)
    }

    pub fn load_section(kind: Experiment, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_section(kind, &text)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.spectral.build(self.grid.n)?;
        self.riesz.validate()?;
        self.maximal.validate()?;
        if self.riesz.n != self.grid.n {
            return Err(Error::Config(format!(
                "riesz.n = {} but grid.n = {}",
                self.riesz.n, self.grid.n
            )));
        }
        for (name, list) in &self.sweep {
            if list.is_empty() {
                return Err(Error::Config(format!("sweep list {name:?} is empty")));
            }
        }
        for (name, &tol) in &self.tolerances {
            if !(tol > 0.0) {
                return Err(Error::Config(format!("tolerance {name:?} must be positive, got {tol}")));
            }
        }
        Ok(())
    }

    pub fn sweep_list(&self, name: &str) -> Result<&[f64]> {
        self.sweep
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Config(format!("missing sweep list {name:?}")))
    }

    pub fn tolerance(&self, name: &str) -> Result<f64> {
        self.tolerances
            .get(name)
            .copied()
            .ok_or_else(|| Error::Config(format!("missing tolerance {name:?}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form, in hex.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn merge(base: &mut toml::Table, overlay: toml::Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}
