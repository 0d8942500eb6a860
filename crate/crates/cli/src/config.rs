//! Run configuration: a scenario preset, parameter overrides and engine settings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use hqh::cos::bermudan::BermudanSettings;
use hqh::cos::CosSettings;
use hqh::models::{Scenario, ScenarioConfig};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub cos: CosSettings,
    pub bermudan: BermudanSettings,
    /// Monte Carlo paths and Euler steps per year.
    pub mc_paths: usize,
    pub mc_steps_per_year: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            cos: CosSettings::default(),
            bermudan: BermudanSettings::default(),
            mc_paths: 100_000,
            mc_steps_per_year: hqh::montecarlo::STEPS_PER_YEAR,
        }
    }
}

/// Everything a run depends on besides the command-line arguments of the subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub model: ScenarioConfig,
    pub engine: EngineConfig,
}

/// Accepted file layout; every table and field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    scenario: Option<Scenario>,
    model: Option<toml::Table>,
    #[serde(default)]
    engine: EngineConfig,
}

fn merge(base: &ScenarioConfig, overrides: Option<toml::Table>) -> Result<ScenarioConfig, CliError> {
    let mut table = toml::Table::try_from(base).map_err(|e| CliError::Config(e.to_string()))?;
    for (k, v) in overrides.unwrap_or_default() {
        if !table.contains_key(&k) {
            return Err(CliError::Config(format!("unknown model field `{k}`")));
        }
        table.insert(k, v);
    }
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))
}

impl RunConfig {
    /// Preset of `scenario`, overridden by the file at `path` when given. A JSON sidecar
    /// written by an earlier run is accepted and reproduces that run's configuration.
    pub fn load(scenario: Option<Scenario>, path: Option<&Path>) -> Result<Self, CliError> {
        let file = match path {
            None => FileConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                if p.extension().is_some_and(|e| e == "json") {
                    let v: serde_json::Value =
                        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                    let resolved = v.get("resolved_config").cloned().unwrap_or(v);
                    let rc: RunConfig =
                        serde_json::from_value(resolved).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                    return Ok(match scenario {
                        Some(s) if s != rc.scenario => RunConfig { scenario: s, ..rc },
                        _ => rc,
                    });
                }
                toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
        };
        let scenario = scenario.or(file.scenario).unwrap_or(Scenario::A);
        let model = merge(&scenario.config(), file.model)?;
        // validate early so bad parameters are reported as configuration errors
        model.jump_params().map_err(CliError::from_config)?;
        model.jump_dist().map_err(CliError::from_config)?;
        model.heston().map_err(CliError::from_config)?;
        Ok(Self {
            scenario,
            model,
            engine: file.engine,
        })
    }
}
