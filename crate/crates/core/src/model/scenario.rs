use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Demands and tariffs for one dispatch period.
///
/// Energies are kWh delivered over the period; prices are currency per kWh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodInput {
    pub duration_h: f64,
    pub demand_e: f64,
    pub demand_c: f64,
    pub demand_h: f64,
    pub price_el: f64,
    pub price_gas: f64,
}

impl PeriodInput {
    /// Thermal energy that must reach the cooling and heating components,
    /// i.e. `Q_c,d / eta_cool + Q_h,d / eta_heat`.
    pub fn thermal_requirement(&self, params: &SystemParams) -> f64 {
        self.demand_c / params.eta_cool + self.demand_h / params.eta_heat
    }
}

/// Conversion, efficiency and emission constants of the plant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Fuel per kWh of PGU electricity (slope of `F = a * E + b`).
    pub a: f64,
    /// Fuel intercept of the PGU; below this input the PGU is off.
    pub b: f64,
    pub eta_pgu_th: f64,
    pub eta_boiler: f64,
    pub eta_cool: f64,
    pub eta_heat: f64,
    /// Site-to-primary factor for grid electricity.
    pub ecf_pec: f64,
    /// Site-to-primary factor for natural gas.
    pub fcf_pec_gas: f64,
    /// Grid CO2 intensity, g/kWh.
    pub ecf_cde: f64,
    /// Natural gas CO2 intensity, g/kWh.
    pub fcf_cde_gas: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            a: 2.67,
            b: 11.43,
            eta_pgu_th: 0.51,
            eta_boiler: 0.9,
            eta_cool: 0.7,
            eta_heat: 0.85,
            ecf_pec: 3.336,
            fcf_pec_gas: 1.047,
            ecf_cde: 203.74,
            fcf_cde_gas: 200.0,
        }
    }
}

/// Which supply units may run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatingCase {
    /// Case 1: grid, PGU and boiler.
    #[default]
    FullSystem,
    /// Case 2: the PGU is shut down.
    PguOff,
    /// Case 3: the boiler is shut down.
    BoilerOff,
}

impl OperatingCase {
    pub fn number(self) -> u8 {
        match self {
            OperatingCase::FullSystem => 1,
            OperatingCase::PguOff => 2,
            OperatingCase::BoilerOff => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(OperatingCase::FullSystem),
            2 => Some(OperatingCase::PguOff),
            3 => Some(OperatingCase::BoilerOff),
            _ => None,
        }
    }

    pub fn pgu_enabled(self) -> bool {
        self != OperatingCase::PguOff
    }

    pub fn boiler_enabled(self) -> bool {
        self != OperatingCase::BoilerOff
    }
}

impl fmt::Display for OperatingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {}", self.number())
    }
}

/// How the PGU term enters the cost and emission objectives.
///
/// `Literal` prices PGU electric output with the gas tariff and gas emission
/// factor; `FuelBased` applies both to the fuel burned. Primary energy is
/// fuel based in either mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpretation {
    #[default]
    Literal,
    FuelBased,
}

impl FromStr for Interpretation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "literal" => Ok(Interpretation::Literal),
            "fuel_based" | "fuel" => Ok(Interpretation::FuelBased),
            other => Err(format!("unknown interpretation `{other}`")),
        }
    }
}

/// Settings of the no-CCHP reference system.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSystem {
    /// Efficiency of the gas heater in front of the cooling and heating
    /// components. `None` uses the plant boiler efficiency.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heater_efficiency: Option<f64>,
}

fn default_headroom() -> f64 {
    1.5
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub case: OperatingCase,
    #[serde(default)]
    pub interpretation: Interpretation,
    #[serde(default = "default_headroom")]
    pub bound_headroom: f64,
    #[serde(default)]
    pub params: SystemParams,
    #[serde(default)]
    pub reference: ReferenceSystem,
    pub periods: Vec<PeriodInput>,
}

impl Scenario {
    pub fn new(periods: Vec<PeriodInput>) -> Self {
        Self {
            name: String::new(),
            case: OperatingCase::default(),
            interpretation: Interpretation::default(),
            bound_headroom: default_headroom(),
            params: SystemParams::default(),
            reference: ReferenceSystem::default(),
            periods,
        }
    }

    pub fn with_case(mut self, case: OperatingCase) -> Self {
        self.case = case;
        self
    }

    pub fn with_interpretation(mut self, interpretation: Interpretation) -> Self {
        self.interpretation = interpretation;
        self
    }

    pub fn num_periods(&self) -> usize {
        self.periods.len()
    }

    /// Number of decision variables, three per period.
    pub fn dimension(&self) -> usize {
        3 * self.periods.len()
    }

    pub fn reference_heater_efficiency(&self) -> f64 {
        self.reference
            .heater_efficiency
            .unwrap_or(self.params.eta_boiler)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| Error::ScenarioParse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        fn bad(field: impl Into<String>, reason: impl Into<String>) -> Error {
            Error::InvalidScenario {
                field: field.into(),
                reason: reason.into(),
            }
        }
        fn finite(field: &str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(bad(field, format!("must be finite, got {v}")))
            }
        }

        if self.periods.is_empty() {
            return Err(bad("periods", "at least one period is required"));
        }
        finite("bound_headroom", self.bound_headroom)?;
        if self.bound_headroom < 1.0 {
            return Err(bad("bound_headroom", "must be >= 1"));
        }

        let p = &self.params;
        for (name, v) in [
            ("params.a", p.a),
            ("params.ecf_pec", p.ecf_pec),
            ("params.fcf_pec_gas", p.fcf_pec_gas),
            ("params.ecf_cde", p.ecf_cde),
            ("params.fcf_cde_gas", p.fcf_cde_gas),
        ] {
            finite(name, v)?;
            if v <= 0.0 {
                return Err(bad(name, format!("must be > 0, got {v}")));
            }
        }
        finite("params.b", p.b)?;
        if p.b < 0.0 {
            return Err(bad("params.b", format!("must be >= 0, got {}", p.b)));
        }
        for (name, v) in [
            ("params.eta_pgu_th", p.eta_pgu_th),
            ("params.eta_boiler", p.eta_boiler),
            ("params.eta_cool", p.eta_cool),
            ("params.eta_heat", p.eta_heat),
        ] {
            finite(name, v)?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(bad(name, format!("must lie in (0, 1], got {v}")));
            }
        }
        // Electric plus recovered output may not exceed the fuel burned.
        if p.eta_pgu_th + 1.0 / p.a > 1.0 + 1e-12 {
            return Err(bad(
                "params.a",
                format!(
                    "PGU outputs exceed fuel input: eta_pgu_th + 1/a = {:.4} > 1",
                    p.eta_pgu_th + 1.0 / p.a
                ),
            ));
        }
        if let Some(h) = self.reference.heater_efficiency {
            finite("reference.heater_efficiency", h)?;
            if !(h > 0.0 && h <= 1.0) {
                return Err(bad(
                    "reference.heater_efficiency",
                    format!("must lie in (0, 1], got {h}"),
                ));
            }
        }

        for (t, period) in self.periods.iter().enumerate() {
            let field = |name: &str| format!("periods[{t}].{name}");
            for (name, v) in [
                ("duration_h", period.duration_h),
                ("demand_e", period.demand_e),
                ("demand_c", period.demand_c),
                ("demand_h", period.demand_h),
                ("price_el", period.price_el),
                ("price_gas", period.price_gas),
            ] {
                finite(&field(name), v)?;
            }
            if period.duration_h <= 0.0 {
                return Err(bad(field("duration_h"), "must be > 0"));
            }
            for (name, v) in [
                ("demand_e", period.demand_e),
                ("demand_c", period.demand_c),
                ("demand_h", period.demand_h),
            ] {
                if v < 0.0 {
                    return Err(bad(field(name), format!("must be >= 0, got {v}")));
                }
            }
            for (name, v) in [("price_el", period.price_el), ("price_gas", period.price_gas)] {
                if v <= 0.0 {
                    return Err(bad(field(name), format!("must be > 0, got {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Flattened decision vector: `(x1, x2, x3)` per period, i.e. grid purchase,
/// PGU fuel and boiler fuel in kWh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DispatchDecision(pub Vec<f64>);

impl DispatchDecision {
    pub fn zeros(periods: usize) -> Self {
        Self(vec![0.0; 3 * periods])
    }

    pub fn from_triples(triples: &[[f64; 3]]) -> Self {
        Self(triples.iter().flatten().copied().collect())
    }

    pub fn num_periods(&self) -> usize {
        self.0.len() / 3
    }

    pub fn triples(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        triples(&self.0)
    }
}

impl std::ops::Deref for DispatchDecision {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn triples(x: &[f64]) -> impl Iterator<Item = [f64; 3]> + '_ {
    x.chunks_exact(3).map(|c| [c[0], c[1], c[2]])
}
