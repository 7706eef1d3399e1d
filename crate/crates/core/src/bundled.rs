//! Scenarios shipped with the crate.
//!
//! The 24-hour transitional-season profiles are synthesized from building
//! peak loads with fixed hourly shapes; the committed JSON files are the
//! output of [`synthesize`] and a test keeps the two in sync.

use crate::model::{PeriodInput, Scenario};
use crate::{Error, Result};

pub const NAMES: [&str; 5] = ["hotel", "office", "residential", "rated_residential_t1", "zero_demand"];

const SOURCES: [(&str, &str); 5] = [
    ("hotel", include_str!("../scenarios/hotel.json")),
    ("office", include_str!("../scenarios/office.json")),
    ("residential", include_str!("../scenarios/residential.json")),
    ("rated_residential_t1", include_str!("../scenarios/rated_residential_t1.json")),
    ("zero_demand", include_str!("../scenarios/zero_demand.json")),
];

/// Parses a bundled scenario by name.
pub fn load(name: &str) -> Result<Scenario> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownBundle(name.to_string()))?;
    Scenario::from_json_str(text)
}

/// Peak electric, cooling and heating loads in kW.
#[derive(Debug, Clone, Copy)]
pub struct PeakLoads {
    pub electric: f64,
    pub cooling: f64,
    pub heating: f64,
}

pub const HOTEL_PEAK: PeakLoads = PeakLoads { electric: 3070.0, cooling: 5400.0, heating: 7657.0 };
pub const OFFICE_PEAK: PeakLoads = PeakLoads { electric: 3198.0, cooling: 7056.0, heating: 7050.0 };
pub const RESIDENTIAL_PEAK: PeakLoads = PeakLoads { electric: 4166.0, cooling: 6145.0, heating: 7080.0 };

/// Electricity prices for the average, peak and low-load tariff bands.
#[derive(Debug, Clone, Copy)]
pub struct Tariff {
    pub average: f64,
    pub peak: f64,
    pub low: f64,
}

pub const RESIDENTIAL_TARIFF: Tariff = Tariff { average: 0.5, peak: 0.65, low: 0.45 };
pub const COMMERCIAL_TARIFF: Tariff = Tariff { average: 0.87, peak: 1.305, low: 0.435 };
pub const GAS_PRICE: f64 = 0.22;

/// Transitional-season fraction of the peak for each load.
pub const SEASON_SCALE: [f64; 3] = [1.0, 0.4, 0.4];

impl Tariff {
    /// Peak 08–10 and 18–22, low 23–06, average otherwise.
    pub fn price_at(&self, hour: usize) -> f64 {
        match hour {
            8..=10 | 18..=22 => self.peak,
            23 | 0..=6 => self.low,
            _ => self.average,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Building {
    Hotel,
    Office,
    Residential,
}

impl Building {
    /// Hourly load as a fraction of the daily peak, in `(0, 1]`.
    pub fn shape(self, hour: usize) -> f64 {
        match self {
            Building::Hotel => {
                let phase = 2.0 * std::f64::consts::PI * (hour as f64 - 6.0) / 24.0;
                0.85 + 0.075 * (1.0 - phase.cos())
            }
            Building::Office => match hour {
                9..=17 => 0.95 + 0.05 * (1.0 - (hour as f64 - 13.0).abs() / 4.0),
                7 | 8 | 18 | 19 => 0.5,
                _ => 0.15,
            },
            Building::Residential => match hour {
                7 | 8 => 0.9,
                18..=21 => 1.0,
                23 | 0..=5 => 0.35,
                _ => 0.55,
            },
        }
    }

    fn peak(self) -> PeakLoads {
        match self {
            Building::Hotel => HOTEL_PEAK,
            Building::Office => OFFICE_PEAK,
            Building::Residential => RESIDENTIAL_PEAK,
        }
    }

    fn tariff(self) -> Tariff {
        match self {
            Building::Residential => RESIDENTIAL_TARIFF,
            _ => COMMERCIAL_TARIFF,
        }
    }
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// A 24-period transitional-season day for `building`.
pub fn transitional_day(building: Building) -> Scenario {
    let peak = building.peak();
    let tariff = building.tariff();
    let periods = (0..24)
        .map(|hour| {
            let s = building.shape(hour);
            PeriodInput {
                duration_h: 1.0,
                demand_e: round2(peak.electric * SEASON_SCALE[0] * s),
                demand_c: round2(peak.cooling * SEASON_SCALE[1] * s),
                demand_h: round2(peak.heating * SEASON_SCALE[2] * s),
                price_el: tariff.price_at(hour),
                price_gas: GAS_PRICE,
            }
        })
        .collect();
    Scenario::new(periods)
}

fn single_period(name: &str, e: f64, c: f64, h: f64, price_el: f64) -> Scenario {
    let mut s = Scenario::new(vec![PeriodInput {
        duration_h: 1.0,
        demand_e: e,
        demand_c: c,
        demand_h: h,
        price_el,
        price_gas: GAS_PRICE,
    }]);
    s.name = name.to_string();
    s
}

/// Builds a bundled scenario from its generator.
pub fn synthesize(name: &str) -> Option<Scenario> {
    let building = match name {
        "hotel" => Building::Hotel,
        "office" => Building::Office,
        "residential" => Building::Residential,
        "rated_residential_t1" => {
            let p = RESIDENTIAL_PEAK;
            return Some(single_period(name, p.electric, p.cooling, p.heating, RESIDENTIAL_TARIFF.peak));
        }
        "zero_demand" => return Some(single_period(name, 0.0, 0.0, 0.0, RESIDENTIAL_TARIFF.average)),
        _ => return None,
    };
    let mut s = transitional_day(building);
    s.name = name.to_string();
    Some(s)
}
