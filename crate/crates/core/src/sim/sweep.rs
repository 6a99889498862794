//! One-parameter sweeps over an analytic scenario. Each series applies its
//! own overrides to the base scenario before the swept value is set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::table::{Cell, Table};
use crate::error::{Error, Result};
use crate::scenarios::ScenarioConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub name: String,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub scenario: ScenarioConfig,
    /// Field of the scenario to vary, e.g. `v_kmh`.
    pub param: String,
    pub grid: Vec<f64>,
    /// Empty means one series called `cs` with no overrides.
    #[serde(default)]
    pub series: Vec<SeriesSpec>,
}

fn set_field(base: &ScenarioConfig, field: &str, value: f64) -> Result<ScenarioConfig> {
    let mut v = serde_json::to_value(base)?;
    let obj = v.as_object_mut().expect("scenario serializes to an object");
    match obj.get_mut(field) {
        Some(slot) if field != "kind" => *slot = Value::from(value),
        _ => {
            return Err(Error::Config(format!(
                "parameter {field:?} does not apply to scenario {:?}",
                base.kind()
            )))
        }
    }
    Ok(serde_json::from_value(v)?)
}

impl SweepSpec {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.grid.is_empty() {
            out.push("grid: must not be empty".to_string());
        }
        if self.grid.iter().any(|x| !x.is_finite()) {
            out.push("grid: values must be finite".to_string());
        }
        let up = self.grid.windows(2).all(|w| w[1] > w[0]);
        let down = self.grid.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            out.push("grid: must be strictly monotone".to_string());
        }
        if let Some(&x) = self.grid.first() {
            if let Err(e) = set_field(&self.scenario, &self.param, x) {
                out.push(e.to_string());
            }
        }
        for s in &self.series {
            for key in s.overrides.keys() {
                if set_field(&self.scenario, key, 0.0).is_err() {
                    out.push(format!("series {:?}: override {key:?} does not apply to {:?}", s.name, self.scenario.kind()));
                }
            }
        }
        out
    }

    fn series(&self) -> Vec<SeriesSpec> {
        if self.series.is_empty() {
            vec![SeriesSpec { name: "cs".into(), overrides: BTreeMap::new() }]
        } else {
            self.series.clone()
        }
    }
}

/// Table `param, <series...>`; one row per grid value.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    let errs = spec.violations();
    if !errs.is_empty() {
        return Err(Error::Config(errs.join("; ")));
    }
    let series = spec.series();
    let mut bases = Vec::with_capacity(series.len());
    for s in &series {
        let mut cfg = spec.scenario.clone();
        for (k, &v) in &s.overrides {
            cfg = set_field(&cfg, k, v)?;
        }
        bases.push(cfg);
    }
    let mut table = Table::new(std::iter::once(spec.param.clone()).chain(series.iter().map(|s| s.name.clone())));
    for &x in &spec.grid {
        let mut row = vec![Cell::Num(x)];
        for base in &bases {
            row.push(Cell::Num(set_field(base, &spec.param, x)?.resolve()?.secrecy()?));
        }
        table.push(row)?;
    }
    Ok(table)
}
