//! Configuration, commands and reports behind the `wtp` binary.

mod check;
pub mod config;
pub mod report;

use std::fmt;
use std::str::FromStr;

pub use check::{ratio_extremes, run_checks, RatioWitness};
pub use config::{parse_config, ConfigDocument, RunConfig};
pub use report::{to_json_string, Report};

use crate::error::{Error, Result};
use crate::estimator::entropy_estimate;
use crate::sofic::{sofic_bracket, sofic_dimension_report, NOT_RIGHT_RESOLVING_WARNING};
use crate::sponge::{hausdorff_dimension, kp_recursion, minkowski_dimension};
use crate::variational::maximize_bernoulli;
use crate::weights::exponents_from_bases;
use report::{ClosedFormReport, DigitProbability, SeriesReport, VariationalReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Entropy,
    Dimension,
    Estimate,
    Variational,
    Check,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Entropy,
        Command::Dimension,
        Command::Estimate,
        Command::Variational,
        Command::Check,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Entropy => "entropy",
            Command::Dimension => "dimension",
            Command::Estimate => "estimate",
            Command::Variational => "variational",
            Command::Check => "check",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown command {s:?}")))
    }
}

/// Runs `command`; the report is validated before it is returned.
pub fn run(cfg: &RunConfig, command: Command) -> Result<Report> {
    let mut report = Report::new(command.name(), &cfg.document);
    match command {
        Command::Entropy => entropy(cfg, &mut report)?,
        Command::Dimension => dimension(cfg, &mut report)?,
        Command::Estimate => estimate(cfg, &mut report)?,
        Command::Variational => variational(cfg, &mut report)?,
        Command::Check => report.checks = run_checks(cfg),
    }
    report.validate()?;
    Ok(report)
}

fn graph_warnings(cfg: &RunConfig, report: &mut Report) {
    if cfg.chain.graph().is_some_and(|g| !g.is_right_resolving()) {
        report.warnings.push(NOT_RIGHT_RESOLVING_WARNING.to_string());
    }
}

fn estimator_fallback(cfg: &RunConfig, report: &mut Report, reason: String) -> Result<()> {
    report
        .warnings
        .push(format!("closed form unavailable ({reason}); reporting the estimator series"));
    let series = entropy_estimate(&cfg.chain, &cfg.exponents, cfg.potential.as_ref(), cfg.n_max, &cfg.estimator)?;
    report.estimate_series = Some(SeriesReport::from(&series));
    Ok(())
}

fn entropy(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let chain = &cfg.chain;
    let pot = cfg.potential.as_ref();
    if chain.is_full_shift() {
        if let Some(f) = pot.filter(|f| f.window() > 1) {
            return estimator_fallback(cfg, report, format!("potential window {} > 1", f.window()));
        }
        let z0 = kp_recursion(chain.system(), &cfg.exponents, pot)?.z0();
        report.closed_form = Some(ClosedFormReport {
            h_a_nats: z0.ln(),
            z0: Some(z0),
            ..Default::default()
        });
        return Ok(());
    }
    graph_warnings(cfg, report);
    if pot.is_some() {
        return estimator_fallback(cfg, report, "potential on a sofic chain".into());
    }
    match sofic_bracket(chain, &cfg.exponents) {
        Ok(bracket) => {
            let h = bracket.ln();
            let mut closed = ClosedFormReport {
                h_a_nats: h,
                bracket_value: Some(bracket),
                ..Default::default()
            };
            if exponents_from_bases(chain.system().bases())? == cfg.exponents {
                closed.h_over_log_m1 = Some(h / (chain.system().bases()[0] as f64).ln());
                report.warnings.insert(0, crate::sofic::DIMENSION_AMBIGUITY_WARNING.to_string());
            }
            report.closed_form = Some(closed);
            Ok(())
        }
        Err(e @ (Error::NotAligned | Error::UpperLevelsNotFullShift)) => estimator_fallback(cfg, report, e.to_string()),
        Err(e) => Err(e),
    }
}

fn dimension(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let chain = &cfg.chain;
    let base_a = exponents_from_bases(chain.system().bases())?;
    if base_a != cfg.exponents {
        report
            .warnings
            .push("dimension uses exponents derived from the bases; the configured exponents are ignored".into());
    }
    if cfg.potential.is_some() {
        report
            .warnings
            .push("dimension ignores the configured potential".into());
    }
    if chain.is_full_shift() {
        let sys = chain.system();
        let z0 = kp_recursion(sys, &base_a, None)?.z0();
        report.closed_form = Some(ClosedFormReport {
            h_a_nats: z0.ln(),
            hausdorff_dimension: Some(hausdorff_dimension(sys)?),
            minkowski_dimension: Some(minkowski_dimension(sys)),
            z0: Some(z0),
            ..Default::default()
        });
        return Ok(());
    }
    match sofic_dimension_report(chain) {
        Ok(r) => {
            report.closed_form = Some(ClosedFormReport {
                h_a_nats: r.h_a_nats,
                bracket_value: Some(r.bracket_value),
                h_over_log_m1: Some(r.h_over_log_m1),
                ..Default::default()
            });
            report.warnings.extend(r.warnings);
            Ok(())
        }
        Err(e @ (Error::NotAligned | Error::UpperLevelsNotFullShift)) => {
            graph_warnings(cfg, report);
            report
                .warnings
                .push(format!("closed form unavailable ({e}); reporting the estimator series at base exponents"));
            let series = entropy_estimate(chain, &base_a, None, cfg.n_max, &cfg.estimator)?;
            report.estimate_series = Some(SeriesReport::from(&series));
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn estimate(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    graph_warnings(cfg, report);
    let series = entropy_estimate(&cfg.chain, &cfg.exponents, cfg.potential.as_ref(), cfg.n_max, &cfg.estimator)?;
    if series.closed_form.is_none() {
        report
            .warnings
            .push("no closed form is available for comparison".into());
    }
    report.estimate_series = Some(SeriesReport::from(&series));
    Ok(())
}

fn variational(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    if cfg.is_sofic() {
        return Err(Error::UnsupportedCombination(
            "the variational command needs a sponge system; Bernoulli entropies of sofic chains have no closed form"
                .into(),
        ));
    }
    if let Some(f) = cfg.potential.as_ref().filter(|f| f.window() > 1) {
        return Err(Error::UnsupportedCombination(format!(
            "the variational command needs a window-1 potential, got window {}",
            f.window()
        )));
    }
    let sys = cfg.chain.system();
    let pot = cfg.potential.as_ref();
    let closed = kp_recursion(sys, &cfg.exponents, pot)?.z0().ln();
    let (p, value) = maximize_bernoulli(sys, &cfg.exponents, pot, &cfg.optimizer)?;
    report.variational = Some(VariationalReport {
        value: value.value,
        closed_form: closed,
        gap_to_closed_form: closed - value.value,
        entropy_terms: value.entropy_terms,
        potential_term: value.potential_term,
        distribution: sys
            .digits()
            .iter()
            .zip(p.probabilities())
            .map(|(d, &probability)| DigitProbability {
                digit: d.clone(),
                probability,
            })
            .collect(),
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CARPET: &str = r#"{"system": {"sponge": {"bases": [2, 3], "digits": [[0,0],[1,1],[0,2]]}}}"#;

    fn carpet() -> RunConfig {
        parse_config(CARPET, "carpet.json").unwrap()
    }

    #[test]
    fn commands_parse() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("plot".parse::<Command>().is_err());
    }

    #[test]
    fn carpet_dimension() {
        let r = run(&carpet(), Command::Dimension).unwrap();
        let c = r.closed_form.unwrap();
        assert!((c.hausdorff_dimension.unwrap() - 1.3497).abs() < 1e-4);
        assert!((c.minkowski_dimension.unwrap() - 1.3691).abs() < 1e-4);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn carpet_check_passes() {
        let r = run(&carpet(), Command::Check).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(r.checks.len() >= 10);
    }

    #[test]
    fn rerunning_the_echo_is_bit_identical() {
        for cmd in [Command::Entropy, Command::Estimate, Command::Variational] {
            let first = run(&carpet(), cmd).unwrap().to_json();
            let echo = to_json_string(&carpet().document);
            let second = run(&parse_config(&echo, "echo").unwrap(), cmd).unwrap().to_json();
            assert_eq!(first, second);
        }
    }

    #[test]
    fn window_two_potential_falls_back_to_the_estimator() {
        let text = r#"{"system": {"sponge": {"bases": [2, 3], "digits": [[0,0],[1,1],[0,2]]}},
                       "potential": {"window": 2, "default": 0.25}, "estimator": {"n_max": 4}}"#;
        let cfg = parse_config(text, "x").unwrap();
        let r = run(&cfg, Command::Entropy).unwrap();
        assert!(r.closed_form.is_none());
        assert_eq!(r.estimate_series.unwrap().entries.len(), 3);
        assert!(matches!(
            run(&cfg, Command::Variational),
            Err(Error::UnsupportedCombination(_))
        ));
    }
}
