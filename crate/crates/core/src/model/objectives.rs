use serde::{Deserialize, Serialize};

use super::scenario::triples;
use super::state::pgu_electric;
use super::{Interpretation, OperatingCase, PeriodInput, Scenario};
use crate::{Bounds, Error, Result};

/// Cost (currency), primary energy (kWh) and CO2 emissions (g).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub cost: f64,
    pub pec: f64,
    pub cde: f64,
}

impl ObjectiveVector {
    pub const fn new(cost: f64, pec: f64, cde: f64) -> Self {
        Self { cost, pec, cde }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.cost, self.pec, self.cde]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    fn add(&mut self, other: ObjectiveVector) {
        self.cost += other.cost;
        self.pec += other.pec;
        self.cde += other.cde;
    }
}

/// Unmet demand in kWh, summed over periods.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ViolationMeasure {
    pub electric_deficit: f64,
    pub heat_deficit: f64,
    pub total: f64,
}

impl ViolationMeasure {
    pub fn new(electric_deficit: f64, heat_deficit: f64) -> Self {
        Self {
            electric_deficit,
            heat_deficit,
            total: electric_deficit + heat_deficit,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.total == 0.0
    }
}

fn check_dimension(decision: &[f64], scenario: &Scenario) -> Result<()> {
    if decision.len() != scenario.dimension() {
        return Err(Error::DimensionMismatch {
            expected: scenario.dimension(),
            got: decision.len(),
        });
    }
    Ok(())
}

fn period_objectives(
    [x1, x2, x3]: [f64; 3],
    period: &PeriodInput,
    scenario: &Scenario,
) -> ObjectiveVector {
    let p = &scenario.params;
    let e_pgu = pgu_electric(x2, p);
    let pgu_on = x2 >= p.b;
    // Boiler fuel, i.e. Q_boiler / eta_boiler.
    let boiler_fuel = x3;

    let (pgu_cost_base, pgu_cde_base) = match scenario.interpretation {
        Interpretation::Literal => (e_pgu, e_pgu),
        Interpretation::FuelBased => (x2, x2),
    };
    let pgu_pec_fuel = if pgu_on { p.a * e_pgu + p.b } else { 0.0 };

    ObjectiveVector {
        cost: period.price_el * x1
            + period.price_gas * pgu_cost_base
            + period.price_gas * boiler_fuel,
        pec: p.ecf_pec * x1 + p.fcf_pec_gas * pgu_pec_fuel + p.fcf_pec_gas * boiler_fuel,
        cde: p.ecf_cde * x1 + p.fcf_cde_gas * pgu_cde_base + p.fcf_cde_gas * boiler_fuel,
    }
}

fn period_violation([x1, x2, x3]: [f64; 3], period: &PeriodInput, scenario: &Scenario) -> (f64, f64) {
    let p = &scenario.params;
    let e_supply = x1 + pgu_electric(x2, p);
    let heat_pool = p.eta_pgu_th * x2 + p.eta_boiler * x3;
    (
        (period.demand_e - e_supply).max(0.0),
        (period.thermal_requirement(p) - heat_pool).max(0.0),
    )
}

/// Total cost, primary energy and emissions of a dispatch over all periods.
pub fn eval_objectives(decision: &[f64], scenario: &Scenario) -> Result<ObjectiveVector> {
    check_dimension(decision, scenario)?;
    Ok(objectives_unchecked(decision, scenario))
}

/// Electric and thermal demand shortfall of a dispatch.
pub fn violation(decision: &[f64], scenario: &Scenario) -> Result<ViolationMeasure> {
    check_dimension(decision, scenario)?;
    Ok(violation_unchecked(decision, scenario))
}

pub(crate) fn objectives_unchecked(decision: &[f64], scenario: &Scenario) -> ObjectiveVector {
    let mut total = ObjectiveVector::default();
    for (x, period) in triples(decision).zip(&scenario.periods) {
        total.add(period_objectives(x, period, scenario));
    }
    total
}

pub(crate) fn violation_unchecked(decision: &[f64], scenario: &Scenario) -> ViolationMeasure {
    let (mut e, mut h) = (0.0, 0.0);
    for (x, period) in triples(decision).zip(&scenario.periods) {
        let (de, dh) = period_violation(x, period, scenario);
        e += de;
        h += dh;
    }
    ViolationMeasure::new(e, h)
}

/// Objectives of the no-CCHP reference system: all electricity from the grid,
/// cooling and heating from gas through a heater and the components.
pub fn reference_objectives(scenario: &Scenario) -> ObjectiveVector {
    let p = &scenario.params;
    let heater = scenario.reference_heater_efficiency();
    let mut total = ObjectiveVector::default();
    for period in &scenario.periods {
        let gas = period.demand_c / (heater * p.eta_cool) + period.demand_h / (heater * p.eta_heat);
        let e = period.demand_e;
        total.add(ObjectiveVector {
            cost: period.price_el * e + period.price_gas * gas,
            pec: p.ecf_pec * e + p.fcf_pec_gas * gas,
            cde: p.ecf_cde * e + p.fcf_cde_gas * gas,
        });
    }
    total
}

/// Gas burned by the reference system in one period.
pub fn reference_gas(period: &PeriodInput, scenario: &Scenario) -> f64 {
    let p = &scenario.params;
    let heater = scenario.reference_heater_efficiency();
    period.demand_c / (heater * p.eta_cool) + period.demand_h / (heater * p.eta_heat)
}

/// Percentage reductions relative to a reference, per objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImprovementRates {
    pub cost: f64,
    pub pec: f64,
    pub cde: f64,
}

impl ImprovementRates {
    pub fn as_array(&self) -> [f64; 3] {
        [self.cost, self.pec, self.cde]
    }
}

pub fn improvement_rate(reference: &ObjectiveVector, value: &ObjectiveVector) -> Result<ImprovementRates> {
    let rate = |r: f64, v: f64, objective| {
        if r == 0.0 {
            Err(Error::ZeroReference { objective })
        } else {
            Ok(100.0 * (r - v) / r)
        }
    };
    Ok(ImprovementRates {
        cost: rate(reference.cost, value.cost, "cost")?,
        pec: rate(reference.pec, value.pec, "pec")?,
        cde: rate(reference.cde, value.cde, "cde")?,
    })
}

/// Per-variable box for the scenario: demand-implied maxima times the
/// headroom factor, with case-disabled units pinned to zero.
pub fn bounds(scenario: &Scenario) -> Bounds {
    let p = &scenario.params;
    let h = scenario.bound_headroom;
    let mut upper = Vec::with_capacity(scenario.dimension());
    for period in &scenario.periods {
        let thermal = period.thermal_requirement(p);
        let hi_x1 = h * period.demand_e;
        let hi_x2 = if scenario.case.pgu_enabled() {
            h * (p.a * period.demand_e + p.b + thermal / p.eta_pgu_th)
        } else {
            0.0
        };
        let hi_x3 = if scenario.case.boiler_enabled() {
            h * thermal / p.eta_boiler
        } else {
            0.0
        };
        upper.extend([hi_x1, hi_x2, hi_x3]);
    }
    Bounds::new(vec![0.0; upper.len()], upper)
}

/// Zeroes the variables of units disabled by the operating case.
pub fn apply_case(decision: &mut [f64], case: OperatingCase) {
    for x in decision.chunks_exact_mut(3) {
        if !case.pgu_enabled() {
            x[1] = 0.0;
        }
        if !case.boiler_enabled() {
            x[2] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemParams;

    fn period(e: f64, c: f64, h: f64, price_el: f64) -> PeriodInput {
        PeriodInput {
            duration_h: 1.0,
            demand_e: e,
            demand_c: c,
            demand_h: h,
            price_el,
            price_gas: 0.22,
        }
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn literal_objectives_hand_example() {
        let s = Scenario::new(vec![period(4166.0, 6145.0, 7080.0, 0.65)]);
        let o = eval_objectives(&[1000.0, 278.43, 100.0], &s).unwrap();
        assert!(close(o.cost, 694.0, 1e-12), "{o:?}");
        assert!(close(o.pec, 3336.0 + 1.047 * 278.43 + 104.7, 1e-12), "{o:?}");
        assert!((o.pec - 3732.2).abs() < 0.05);
        assert!(close(o.cde, 243_740.0, 1e-12), "{o:?}");
    }

    #[test]
    fn fuel_based_charges_pgu_fuel() {
        let s = Scenario::new(vec![period(1.0, 1.0, 1.0, 0.65)])
            .with_interpretation(Interpretation::FuelBased);
        let o = eval_objectives(&[1000.0, 278.43, 100.0], &s).unwrap();
        assert!(close(o.cost, 650.0 + 0.22 * 278.43 + 22.0, 1e-12));
        assert!(close(o.cde, 203_740.0 + 200.0 * 278.43 + 20_000.0, 1e-12));
    }

    #[test]
    fn all_zero_decision_has_zero_objectives() {
        let s = Scenario::new(vec![period(5.0, 1.0, 2.0, 0.5); 4]);
        let o = eval_objectives(&[0.0; 12], &s).unwrap();
        assert_eq!(o, ObjectiveVector::default());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = Scenario::new(vec![period(5.0, 1.0, 2.0, 0.5); 2]);
        assert!(matches!(
            eval_objectives(&[0.0; 3], &s),
            Err(Error::DimensionMismatch { expected: 6, got: 3 })
        ));
        assert!(violation(&[0.0; 7], &s).is_err());
    }

    #[test]
    fn violation_examples() {
        let s = Scenario::new(vec![period(100.0, 0.0, 0.0, 0.5)]);
        let v = violation(&[0.0, 0.0, 0.0], &s).unwrap();
        assert_eq!(v.electric_deficit, 100.0);
        assert_eq!(v.heat_deficit, 0.0);

        let s = Scenario::new(vec![period(0.0, 70.0, 0.0, 0.5)]);
        let v = violation(&[0.0, 0.0, 100.0], &s).unwrap();
        assert!((v.heat_deficit - 10.0).abs() < 1e-9, "{v:?}");
        assert!((v.total - 10.0).abs() < 1e-9);
    }

    #[test]
    fn exact_cover_is_feasible() {
        let s = Scenario::new(vec![period(100.0, 63.0, 0.0, 0.5)]);
        // cooling need 90 -> boiler fuel 100
        let v = violation(&[100.0, 0.0, 100.0], &s).unwrap();
        assert!(v.is_feasible(), "{v:?}");
    }

    #[test]
    fn reference_residential_peak_gas() {
        let s = Scenario::new(vec![period(4166.0, 6145.0, 7080.0, 0.65)]);
        let gas = reference_gas(&s.periods[0], &s);
        assert!((gas - 19_008.9).abs() < 0.05, "{gas}");
        let r = reference_objectives(&s);
        assert!(close(r.cost, 0.65 * 4166.0 + 0.22 * gas, 1e-12));
    }

    #[test]
    fn reference_electricity_cost_average_tariff() {
        let s = Scenario::new(vec![period(4166.0, 0.0, 0.0, 0.5)]);
        let r = reference_objectives(&s);
        assert!(close(r.cost, 2083.0, 1e-12));
    }

    #[test]
    fn reference_zero_demand() {
        let s = Scenario::new(vec![period(0.0, 0.0, 0.0, 0.5)]);
        assert_eq!(reference_objectives(&s), ObjectiveVector::default());
    }

    #[test]
    fn reference_heater_is_configurable() {
        let mut s = Scenario::new(vec![period(0.0, 70.0, 0.0, 0.5)]);
        s.reference.heater_efficiency = Some(0.5);
        assert!(close(reference_gas(&s.periods[0], &s), 200.0, 1e-12));
    }

    #[test]
    fn improvement_examples() {
        let r = ObjectiveVector::new(100.0, 100.0, 100.0);
        let i = improvement_rate(&r, &r).unwrap();
        assert_eq!(i.as_array(), [0.0; 3]);
        let i = improvement_rate(&r, &ObjectiveVector::new(72.0, 64.0, 48.0)).unwrap();
        assert_eq!(i.as_array(), [28.0, 36.0, 52.0]);
        let i = improvement_rate(&r, &ObjectiveVector::default()).unwrap();
        assert_eq!(i.as_array(), [100.0; 3]);
        assert!(matches!(
            improvement_rate(&ObjectiveVector::new(1.0, 0.0, 1.0), &r),
            Err(Error::ZeroReference { objective: "pec" })
        ));
    }

    #[test]
    fn bounds_examples() {
        let s = Scenario::new(vec![period(0.0, 0.0, 0.0, 0.5)]);
        let b = bounds(&s);
        assert_eq!(b.lower, vec![0.0; 3]);
        assert_eq!(b.upper, vec![0.0, 1.5 * SystemParams::default().b, 0.0]);

        let s = Scenario::new(vec![period(100.0, 10.0, 10.0, 0.5)]);
        assert_eq!(bounds(&s).upper[0], 150.0);

        let s = Scenario::new(vec![period(100.0, 10.0, 10.0, 0.5); 3]).with_case(OperatingCase::PguOff);
        let b = bounds(&s);
        assert!((0..3).all(|t| b.upper[3 * t + 1] == 0.0 && b.upper[3 * t + 2] > 0.0));

        let s = Scenario::new(vec![period(100.0, 10.0, 10.0, 0.5); 3]).with_case(OperatingCase::BoilerOff);
        let b = bounds(&s);
        assert!((0..3).all(|t| b.upper[3 * t + 2] == 0.0 && b.upper[3 * t + 1] > 0.0));
    }

    #[test]
    fn upper_bounds_cover_demand() {
        // Each unit alone at its upper bound must be able to meet its demand.
        let s = Scenario::new(vec![period(100.0, 60.0, 40.0, 0.5)]);
        let b = bounds(&s);
        let u = &b.upper;
        assert!(violation(&[u[0], 0.0, u[2]], &s).unwrap().is_feasible());
        assert!(violation(&[0.0, u[1], 0.0], &s).unwrap().is_feasible());
    }
}
