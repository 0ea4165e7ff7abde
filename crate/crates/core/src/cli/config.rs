//! JSON run configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{EstimatorOptions, Strategy, DEFAULT_BUDGET, DEFAULT_N_MAX};
use crate::potential::Potential;
use crate::symbolic::{Chain, Digit, DigitSystem, LabeledGraph};
use crate::variational::OptimizerOptions;
use crate::weights::{exponents_from_bases, Exponents};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SystemSpec {
    Sponge {
        bases: Vec<u32>,
        digits: Vec<Digit>,
    },
    Sofic {
        bases: Vec<u32>,
        vertices: Vec<String>,
        /// `[source, target, label]`.
        edges: Vec<(String, String, Digit)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExponentKeyword {
    #[serde(rename = "from-bases")]
    FromBases,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentSpec {
    Keyword(ExponentKeyword),
    Explicit(Vec<f64>),
}

impl Default for ExponentSpec {
    fn default() -> Self {
        Self::Keyword(ExponentKeyword::FromBases)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub word: Vec<Digit>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    #[serde(default = "one")]
    pub window: usize,
    #[serde(default)]
    pub table: Vec<TableEntry>,
    #[serde(default)]
    pub default: Option<f64>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSpec {
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_n_max() -> usize {
    DEFAULT_N_MAX
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

impl Default for EstimatorSpec {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_max_iters() -> usize {
    OptimizerOptions::default().max_iters
}

fn default_tolerance() -> f64 {
    OptimizerOptions::default().tolerance
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        Self {
            max_iters: default_max_iters(),
            tolerance: default_tolerance(),
        }
    }
}

/// The document as written, with defaults filled in. Serializing it gives a
/// config that reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub system: SystemSpec,
    #[serde(default)]
    pub exponents: ExponentSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub estimator: EstimatorSpec,
    #[serde(default)]
    pub optimizer: OptimizerSpec,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub document: ConfigDocument,
    pub chain: Chain,
    pub exponents: Exponents,
    pub potential: Option<Potential>,
    pub n_max: usize,
    pub estimator: EstimatorOptions,
    pub optimizer: OptimizerOptions,
}

impl RunConfig {
    pub fn from_document(document: ConfigDocument) -> Result<Self> {
        let chain = match &document.system {
            SystemSpec::Sponge { bases, digits } => Chain::sponge(DigitSystem::new(bases.clone(), digits.clone())?),
            SystemSpec::Sofic {
                bases,
                vertices,
                edges,
            } => {
                let graph = LabeledGraph::from_named(vertices.clone(), edges.iter().cloned())?;
                Chain::sofic(bases.clone(), graph)?
            }
        };
        let exponents = match &document.exponents {
            ExponentSpec::Keyword(ExponentKeyword::FromBases) => exponents_from_bases(chain.system().bases())?,
            ExponentSpec::Explicit(a) => {
                let a = Exponents::new(a.clone())?;
                a.check_rank(chain.rank())?;
                a
            }
        };
        let potential = document
            .potential
            .as_ref()
            .map(|p| {
                let f = Potential::new(p.window, p.table.iter().map(|e| (e.word.clone(), e.value)), p.default)?;
                // surface missing table values now rather than mid-run
                f.compile(&chain)?;
                Ok::<_, Error>(f)
            })
            .transpose()?;
        let EstimatorSpec { n_max, budget } = document.estimator;
        if n_max == 0 {
            return Err(Error::Validation("estimator.n_max must be at least 1".into()));
        }
        let OptimizerSpec { max_iters, tolerance } = document.optimizer;
        if max_iters == 0 || !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Validation(
                "optimizer needs max_iters >= 1 and a positive finite tolerance".into(),
            ));
        }
        Ok(Self {
            chain,
            exponents,
            potential,
            n_max,
            estimator: EstimatorOptions {
                budget,
                strategy: Strategy::Auto,
            },
            optimizer: OptimizerOptions { max_iters, tolerance },
            document,
        })
    }

    pub fn is_sofic(&self) -> bool {
        matches!(self.document.system, SystemSpec::Sofic { .. })
    }

    pub fn with_n_max(mut self, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Validation("--n-max must be at least 1".into()));
        }
        self.n_max = n_max;
        self.document.estimator.n_max = n_max;
        Ok(self)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.estimator.budget = budget;
        self.document.estimator.budget = budget;
        self
    }
}

/// Parses and validates a JSON document; `path` only labels parse errors.
pub fn parse_config(text: &str, path: &str) -> Result<RunConfig> {
    let document: ConfigDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    RunConfig::from_document(document)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CARPET: &str = r#"{"system": {"sponge": {"bases": [2, 3], "digits": [[0,0],[1,1],[0,2]]}}}"#;

    #[test]
    fn carpet_with_defaults() {
        let c = parse_config(CARPET, "carpet.json").unwrap();
        assert_eq!(c.n_max, 12);
        assert_eq!(c.estimator.budget, 10_000_000);
        assert_eq!(c.optimizer.tolerance, 1e-12);
        assert_eq!(c.exponents.len(), 1);
        assert!(!c.is_sofic());
    }

    #[test]
    fn explicit_exponents_must_match_rank() {
        let text = r#"{"system": {"sponge": {"bases": [2, 3], "digits": [[0,0]]}}, "exponents": [0.5, 0.5]}"#;
        assert!(matches!(
            parse_config(text, "x"),
            Err(Error::ExponentLengthMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn parse_errors_carry_the_path() {
        match parse_config("{", "broken.json") {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "broken.json"),
            other => panic!("{other:?}"),
        }
        let two = r#"{"system": {"sponge": {"bases": [2], "digits": []}, "sofic": {}}}"#;
        assert!(matches!(parse_config(two, "x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn validation_errors_come_from_the_modules() {
        let text = r#"{"system": {"sponge": {"bases": [3, 2], "digits": [[0,0]]}}}"#;
        assert_eq!(parse_config(text, "x").unwrap_err(), Error::BasesNotSorted);
        let text = r#"{"system": {"sponge": {"bases": [2, 3], "digits": [[0,0]]}},
                       "potential": {"window": 1, "table": [{"word": [[1,1]], "value": 1.0}]}}"#;
        assert!(matches!(parse_config(text, "x"), Err(Error::InvalidPotential(_))));
    }

    #[test]
    fn sofic_document() {
        let text = r#"{"system": {"sofic": {"bases": [2, 2], "vertices": ["a", "b"],
                        "edges": [["a", "b", [0, 1]], ["b", "a", [1, 0]], ["a", "a", [0, 0]]]}},
                       "exponents": [0.5]}"#;
        let c = parse_config(text, "x").unwrap();
        assert!(c.is_sofic());
        assert_eq!(c.chain.graph().unwrap().vertex_count(), 2);
    }

    #[test]
    fn document_round_trips() {
        let c = parse_config(CARPET, "x").unwrap();
        let echo = serde_json::to_string(&c.document).unwrap();
        let again = parse_config(&echo, "echo").unwrap();
        assert_eq!(again.document, c.document);
    }
}
