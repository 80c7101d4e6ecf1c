//! Run configuration read from TOML.
//!
//! Every section is optional and falls back to the library defaults, so a
//! config file only needs the keys it changes. Dotted keys such as
//! `vans.beta = 100.0` are plain TOML and work as well as tables.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vans_core::circuit::{build_hea, build_product_ansatz, read_circuit, BlockTemplate, Circuit};
use vans_core::insertion::{InsertionPolicy, PositionMode};
use vans_core::simplification::{CandidateOrder, CandidateSelector, SimplifyConfig};
use vans_core::vans::{AdamConfig, CostAwareStage, VansConfig};

use crate::error::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    pub initial: InitialSection,
    pub vans: VansSection,
    pub insertion: InsertionSection,
    pub simplification: SimplificationSection,
    pub optimizer: OptimizerSection,
    pub autoencoder: AutoencoderSection,
    pub compile: CompileSection,
    pub baseline: BaselineSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    #[default]
    Tfim,
    Xxz,
    PauliFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSection {
    pub kind: ProblemKind,
    pub n: usize,
    pub j: f64,
    pub g: f64,
    pub delta: f64,
    pub file: Option<PathBuf>,
}

impl Default for ProblemSection {
    fn default() -> Self {
        ProblemSection {
            kind: ProblemKind::Tfim,
            n: 4,
            j: 1.0,
            g: 1.0,
            delta: 0.5,
            file: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialKind {
    #[default]
    Product,
    Hea,
    File,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    pub kind: InitialKind,
    pub layers: usize,
    pub file: Option<PathBuf>,
}

impl Default for InitialSection {
    fn default() -> Self {
        InitialSection {
            kind: InitialKind::Product,
            layers: 2,
            file: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageName {
    #[default]
    PostOptimization,
    Both,
    Never,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VansSection {
    pub max_outer_iters: usize,
    pub beta: f64,
    pub accept_equal: bool,
    pub insertions_per_iter: usize,
    pub cost_aware_stage: StageName,
    pub randomize_initial: bool,
}

impl Default for VansSection {
    fn default() -> Self {
        let d = VansConfig::default();
        VansSection {
            max_outer_iters: d.max_outer_iters,
            beta: d.beta,
            accept_equal: d.accept_equal,
            insertions_per_iter: d.insertions_per_iter,
            cost_aware_stage: StageName::PostOptimization,
            randomize_initial: d.randomize_initial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockName {
    Rotation,
    Entangler,
    Kak,
}

impl From<BlockName> for BlockTemplate {
    fn from(b: BlockName) -> Self {
        match b {
            BlockName::Rotation => BlockTemplate::Rotation,
            BlockName::Entangler => BlockTemplate::Entangler,
            BlockName::Kak => BlockTemplate::Kak,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositionName {
    #[default]
    End,
    Anywhere,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InsertionSection {
    pub epsilon_init: f64,
    /// Empty means the default for the subcommand.
    pub dictionary: Vec<BlockName>,
    /// Empty means uniform.
    pub block_weights: Vec<f64>,
    pub connectivity_bias: f64,
    pub position: PositionName,
}

impl Default for InsertionSection {
    fn default() -> Self {
        let d = InsertionPolicy::default();
        InsertionSection {
            epsilon_init: d.epsilon_init,
            dictionary: Vec::new(),
            block_weights: Vec::new(),
            connectivity_bias: d.connectivity_bias,
            position: PositionName::End,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderName {
    #[default]
    Gradient,
    Sequential,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimplificationSection {
    pub threshold: f64,
    pub cost_aware: bool,
    pub candidate_order: OrderName,
    pub max_candidates: Option<usize>,
}

impl Default for SimplificationSection {
    fn default() -> Self {
        let d = SimplifyConfig::default();
        SimplificationSection {
            threshold: d.threshold,
            cost_aware: d.cost_aware,
            candidate_order: OrderName::Gradient,
            max_candidates: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSection {
    pub learning_rate: f64,
    pub max_steps: usize,
    pub convergence_tol: f64,
    pub patience: usize,
    pub restarts: usize,
    pub restart_lr_factor: f64,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let d = AdamConfig::default();
        OptimizerSection {
            learning_rate: d.learning_rate,
            max_steps: d.max_steps,
            convergence_tol: d.convergence_tol,
            patience: d.patience,
            restarts: d.restarts,
            restart_lr_factor: d.restart_lr_factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantName {
    #[default]
    Local,
    Global,
}

/// Each entry is a `.pauli` Hamiltonian, whose ground state is used, or a
/// state file contributing all of its states.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AutoencoderSection {
    pub train: Vec<PathBuf>,
    pub test: Vec<PathBuf>,
    pub n_trash: usize,
    pub variant: VariantName,
}

impl Default for AutoencoderSection {
    fn default() -> Self {
        AutoencoderSection {
            train: Vec::new(),
            test: Vec::new(),
            n_trash: 2,
            variant: VariantName::Local,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompileSection {
    /// `qft` or `file`.
    pub target: String,
    pub n: usize,
    pub training_size: usize,
    pub unitary_file: Option<PathBuf>,
}

impl Default for CompileSection {
    fn default() -> Self {
        CompileSection {
            target: "qft".into(),
            n: 3,
            training_size: 8,
            unitary_file: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineSection {
    pub layers: Vec<usize>,
    /// Train on the autoencoder section instead of the problem section.
    pub autoencoder: bool,
}

impl Default for BaselineSection {
    fn default() -> Self {
        BaselineSection {
            layers: vec![2, 5],
            autoencoder: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub seeds: Vec<u64>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: None,
            seeds: vec![0, 1, 2],
        }
    }
}

impl RunConfig {
    /// Reads a config file; relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [&mut self.problem.file, &mut self.initial.file, &mut self.compile.unitary_file]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
        self.autoencoder.train.iter_mut().for_each(fix);
        self.autoencoder.test.iter_mut().for_each(fix);
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Library configuration for one seed. `dictionary` is used when the
    /// config leaves the dictionary empty.
    pub fn vans_config(&self, seed: u64, dictionary: &[BlockTemplate]) -> Result<VansConfig, CliError> {
        let ins = &self.insertion;
        let blocks: Vec<BlockTemplate> = if ins.dictionary.is_empty() {
            dictionary.to_vec()
        } else {
            ins.dictionary.iter().map(|&b| b.into()).collect()
        };
        let mut insertion = InsertionPolicy::with_dictionary(blocks);
        if !ins.block_weights.is_empty() {
            insertion.block_weights = ins.block_weights.clone();
        }
        insertion.epsilon_init = ins.epsilon_init;
        insertion.connectivity_bias = ins.connectivity_bias;
        insertion.position_mode = match ins.position {
            PositionName::End => PositionMode::End,
            PositionName::Anywhere => PositionMode::Anywhere,
        };
        let s = &self.simplification;
        let v = &self.vans;
        let config = VansConfig {
            max_outer_iters: v.max_outer_iters,
            beta: v.beta,
            accept_equal: v.accept_equal,
            insertion,
            insertions_per_iter: v.insertions_per_iter,
            simplification: SimplifyConfig {
                threshold: s.threshold,
                selector: CandidateSelector {
                    order: match s.candidate_order {
                        OrderName::Gradient => CandidateOrder::Gradient,
                        OrderName::Sequential => CandidateOrder::Sequential,
                    },
                    max_candidates: s.max_candidates,
                },
                cost_aware: s.cost_aware,
            },
            cost_aware_stage: match v.cost_aware_stage {
                StageName::PostOptimization => CostAwareStage::PostOptimization,
                StageName::Both => CostAwareStage::Both,
                StageName::Never => CostAwareStage::Never,
            },
            optimizer: self.adam(),
            randomize_initial: v.randomize_initial,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn adam(&self) -> AdamConfig {
        let o = &self.optimizer;
        AdamConfig {
            learning_rate: o.learning_rate,
            max_steps: o.max_steps,
            convergence_tol: o.convergence_tol,
            patience: o.patience,
            restarts: o.restarts,
            restart_lr_factor: o.restart_lr_factor,
        }
    }

    pub fn initial_circuit(&self, n: usize) -> Result<Circuit, CliError> {
        let c = match self.initial.kind {
            InitialKind::Product => build_product_ansatz(n),
            InitialKind::Hea => {
                if n < 2 {
                    return Err(CliError::Config("an HEA initial circuit needs at least two qubits".into()));
                }
                build_hea(n, self.initial.layers)
            }
            InitialKind::File => {
                let path = self
                    .initial
                    .file
                    .as_ref()
                    .ok_or_else(|| CliError::Config("initial.kind = \"file\" needs initial.file".into()))?;
                read_circuit(path)?
            }
        };
        if c.n_qubits() != n {
            return Err(CliError::Config(format!(
                "initial circuit has {} qubits, the problem has {n}",
                c.n_qubits()
            )));
        }
        Ok(c)
    }
}

/// Seeds from the flag, then `VANS_SEED`, then the config.
pub fn resolve_seeds(flag: Option<&str>, env: Option<&str>, config: &[u64]) -> Result<Vec<u64>, CliError> {
    let seeds = match flag.or(env) {
        Some(list) => parse_seed_list(list)?,
        None => config.to_vec(),
    };
    if seeds.is_empty() {
        return Err(CliError::Config("seed list is empty".into()));
    }
    Ok(seeds)
}

pub fn parse_seed_list(list: &str) -> Result<Vec<u64>, CliError> {
    list.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| CliError::Config(format!("bad seed `{s}`")))
        })
        .collect()
}
