use super::{PeriodInput, SystemParams};

/// Energy flows through the plant network for one period, all in kWh.
///
/// Supply side: the PGU splits its fuel into electricity, recovered heat and
/// loss; the boiler splits its fuel into heat and loss. Demand side: the
/// electric bus serves the facility and spills any excess; the heat pool feeds
/// the cooling and heating components. Surplus heat is vented through the
/// heating branch and booked as heating-component loss. When heat is short,
/// the pool is shared between the branches in proportion to their needs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PeriodState {
    pub e_pgu: f64,
    pub q_rcv: f64,
    pub q_boiler: f64,
    pub heat_pool: f64,
    pub e_supply: f64,
    pub e_facility: f64,
    pub e_excess: f64,
    pub q_th_cool: f64,
    pub q_th_heat: f64,
    pub q_cool: f64,
    pub q_heat: f64,
    pub loss_pgu: f64,
    pub loss_boiler: f64,
    pub loss_cool: f64,
    pub loss_heat: f64,
    pub loss_total: f64,
}

/// PGU electric output for a given fuel input. Fuel below the intercept `b`
/// means the unit is off.
pub fn pgu_electric(x2: f64, params: &SystemParams) -> f64 {
    if x2 >= params.b {
        (x2 - params.b) / params.a
    } else {
        0.0
    }
}

/// Derives every flow of the period from the three decision variables.
///
/// `x1` is grid purchase, `x2` PGU fuel and `x3` boiler fuel; all must be
/// non-negative.
pub fn derive_state(
    x1: f64,
    x2: f64,
    x3: f64,
    period: &PeriodInput,
    params: &SystemParams,
) -> PeriodState {
    debug_assert!(x1 >= 0.0 && x2 >= 0.0 && x3 >= 0.0);

    let e_pgu = pgu_electric(x2, params);
    let q_rcv = params.eta_pgu_th * x2;
    let loss_pgu = x2 - e_pgu - q_rcv;
    let q_boiler = params.eta_boiler * x3;
    let loss_boiler = x3 - q_boiler;

    let heat_pool = q_rcv + q_boiler;
    let e_supply = x1 + e_pgu;
    let e_facility = e_supply.min(period.demand_e);
    let e_excess = e_supply - e_facility;

    let need_cool = period.demand_c / params.eta_cool;
    let need_heat = period.demand_h / params.eta_heat;
    let need = need_cool + need_heat;

    let (q_th_cool, q_cool, q_heat_out);
    if heat_pool >= need {
        q_th_cool = need_cool;
        q_cool = period.demand_c;
        q_heat_out = period.demand_h;
    } else {
        // need > heat_pool >= 0, so need > 0
        q_th_cool = heat_pool * (need_cool / need);
        q_cool = params.eta_cool * q_th_cool;
        q_heat_out = params.eta_heat * (heat_pool - q_th_cool);
    }
    let q_th_heat = heat_pool - q_th_cool;
    let loss_cool = q_th_cool - q_cool;
    let loss_heat = q_th_heat - q_heat_out;

    PeriodState {
        e_pgu,
        q_rcv,
        q_boiler,
        heat_pool,
        e_supply,
        e_facility,
        e_excess,
        q_th_cool,
        q_th_heat,
        q_cool,
        q_heat: q_heat_out,
        loss_pgu,
        loss_boiler,
        loss_cool,
        loss_heat,
        loss_total: loss_pgu + loss_boiler + loss_cool + loss_heat,
    }
}

/// Residuals of the node conservation equations for one period.
///
/// Each entry is `(residual, scale)`; a balance holds when
/// `|residual| <= tol * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeResiduals {
    /// PGU: `E_pgu + Q_rcv + loss_pgu - F_pgu`.
    pub pgu: (f64, f64),
    /// Boiler: `Q_boiler + loss_boiler - F_boiler`.
    pub boiler: (f64, f64),
    /// Electric bus: `E_excess + E_facility - E_grid - E_pgu`.
    pub electric_bus: (f64, f64),
    /// Heat pool: `Q_th_cool + Q_th_heat - Q_rcv - Q_boiler`.
    pub heat_pool: (f64, f64),
    /// Cooling component: `Q_cool + loss_c - Q_th_cool`.
    pub cooling: (f64, f64),
    /// Heating component: `Q_heat + loss_h - Q_th_heat`.
    pub heating: (f64, f64),
    /// Loss aggregation: `loss_total - loss_pgu - loss_boiler - loss_c - loss_h`.
    pub loss_total: (f64, f64),
    /// Whole plant: inputs minus delivered energy, excess and losses.
    pub plant: (f64, f64),
}

impl NodeResiduals {
    pub fn of(state: &PeriodState, x1: f64, x2: f64, x3: f64) -> Self {
        let s = state;
        let sc = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0_f64, f64::max);
        Self {
            pgu: (
                s.e_pgu + s.q_rcv + s.loss_pgu - x2,
                sc(&[s.e_pgu, s.q_rcv, s.loss_pgu, x2]),
            ),
            boiler: (
                s.q_boiler + s.loss_boiler - x3,
                sc(&[s.q_boiler, s.loss_boiler, x3]),
            ),
            electric_bus: (
                s.e_excess + s.e_facility - x1 - s.e_pgu,
                sc(&[s.e_excess, s.e_facility, x1, s.e_pgu]),
            ),
            heat_pool: (
                s.q_th_cool + s.q_th_heat - s.q_rcv - s.q_boiler,
                sc(&[s.q_th_cool, s.q_th_heat, s.q_rcv, s.q_boiler]),
            ),
            cooling: (
                s.q_cool + s.loss_cool - s.q_th_cool,
                sc(&[s.q_cool, s.loss_cool, s.q_th_cool]),
            ),
            heating: (
                s.q_heat + s.loss_heat - s.q_th_heat,
                sc(&[s.q_heat, s.loss_heat, s.q_th_heat]),
            ),
            loss_total: (
                s.loss_total - s.loss_pgu - s.loss_boiler - s.loss_cool - s.loss_heat,
                sc(&[s.loss_total, s.loss_pgu, s.loss_boiler, s.loss_cool, s.loss_heat]),
            ),
            plant: (
                x1 + x2 + x3 - s.e_facility - s.e_excess - s.q_cool - s.q_heat - s.loss_total,
                sc(&[x1, x2, x3, s.loss_total]),
            ),
        }
    }

    pub fn all(&self) -> [(&'static str, (f64, f64)); 8] {
        [
            ("pgu", self.pgu),
            ("boiler", self.boiler),
            ("electric_bus", self.electric_bus),
            ("heat_pool", self.heat_pool),
            ("cooling", self.cooling),
            ("heating", self.heating),
            ("loss_total", self.loss_total),
            ("plant", self.plant),
        ]
    }

    /// Largest relative residual across all balances.
    pub fn max_relative(&self) -> f64 {
        self.all()
            .iter()
            .map(|(_, (r, s))| if *s > 0.0 { r.abs() / s } else { r.abs() })
            .fold(0.0, f64::max)
    }
}
