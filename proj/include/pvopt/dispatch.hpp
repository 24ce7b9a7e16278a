#pragma once

#include <array>
#include <string>
#include <vector>

#include "pvopt/lp.hpp"
#include "pvopt/model.hpp"

namespace pvopt {

// Annualized per-unit cost coefficients on the capacity columns. For a
// fixed-capacity dispatch they only shift the objective by a constant; when
// capacities are left free they make the LP minimize the full annual cost.
struct CapacityObjective {
    double pv_cost_per_kw_yr = 0;
    double battery_cost_per_kwh_yr = 0;
    double inverter_cost_per_kw_yr = 0;  // used only with free_inverter_sizing
};

struct DispatchOptions {
    Policy policy = Policy::Rd244;
    // equal bounds pin a capacity; unequal bounds let the LP size it
    double pv_kw_min = 0;
    double pv_kw_max = 0;
    const BatteryTechnology* battery = nullptr;  // null: no storage columns at all
    double battery_kwh_min = 0;
    double battery_kwh_max = 0;
    CapacityObjective capacity_cost;
    bool allow_grid_to_battery = false;  // exploration flags, default off
    bool allow_battery_to_grid = false;
    bool free_inverter_sizing = false;   // decouple inverter kW from the DC/AC ratio
    double inverter_kw_max = lp::kInf;   // only with free_inverter_sizing
    lp::Options lp;
};

struct HourFlows {
    double load = 0;
    double pv_ac_available = 0;  // AC energy offered by the PV+inverter chain
    double pv_clipped = 0;       // AC-equivalent energy lost to the DC/AC ratio cap
    double pv_to_load = 0;
    double pv_to_battery = 0;
    double export_comp = 0;      // remunerated under the monthly value cap
    double export_uncomp = 0;    // beyond the cap, earns nothing
    double curtailed = 0;
    double battery_to_load = 0;
    double grid_import = 0;
    double grid_to_battery = 0;  // nonzero only with the exploration flags
    double battery_to_grid = 0;
    double soc = 0;              // stored energy at the start of the hour, kWh
    double import_price = 0;
    double export_price = 0;
};

struct DayDispatch {
    int month = 1;
    DayKind kind = DayKind::Weekday;
    double weight_days = 0;
    std::array<HourFlows, 24> hours{};
};

struct MonthLedger {
    int month = 1;
    double import_cost = 0;   // weighted EUR
    double export_value = 0;  // weighted EUR, compensated exports only
    double import_kwh = 0;
    double export_comp_kwh = 0;
    double export_uncomp_kwh = 0;
};

struct DispatchSolution {
    lp::Status status = lp::Status::Numerical;
    double pv_kw = 0;
    double battery_kwh = 0;
    double inverter_kw = 0;
    std::string battery_name;  // empty when no battery technology was active

    double objective = 0;       // LP objective (capacity coefficients included)
    double import_cost = 0;     // annual EUR recomputed from flows and prices
    double export_revenue = 0;  // annual EUR, compensated exports only

    double load_kwh = 0;
    double pv_ac_kwh = 0;
    double pv_clipped_kwh = 0;
    double pv_to_load_kwh = 0;
    double pv_to_battery_kwh = 0;
    double battery_to_load_kwh = 0;
    double grid_import_kwh = 0;
    double export_comp_kwh = 0;
    double export_uncomp_kwh = 0;
    double curtailed_kwh = 0;
    double grid_to_battery_kwh = 0;
    double battery_to_grid_kwh = 0;

    std::vector<DayDispatch> days;
    std::vector<MonthLedger> months;  // ascending month number, months present

    int lp_iterations = 0;
    double lp_duality_gap = 0;
};

// One LP over all representative days: load balance, PV split with inverter
// clipping, cyclic SOC recursion, rate and SOC-window limits, the annual
// ageing budget, and the monthly export-value cap (policies with
// remuneration). Ties among equal-cost dispatches are broken toward
// pv_to_load > pv_to_battery > export > curtailment by epsilon costs; under
// the no-remuneration policy the export columns are pinned to zero, which
// realizes the curtailment tie-break exactly.
DispatchSolution optimal_dispatch(const BuildingScenario& scenario,
                                  const InverterTechnology& inverter,
                                  const ControllerTechnology& controller,
                                  const DispatchOptions& options);

// Fixed capacities under default flags. battery may be null or battery_kwh
// zero for a PV-only system.
DispatchSolution dispatch_fixed(const BuildingScenario& scenario, const TechnologyCatalog& catalog,
                                double pv_kw, const BatteryTechnology* battery, double battery_kwh,
                                Policy policy, const lp::Options& lp_options = {});

struct DispatchTotals {
    double import_cost = 0;
    double export_revenue = 0;
    double energy_imported = 0;
    double energy_exported = 0;  // compensated plus uncompensated
};

// Recomputed from the hourly flows and prices, independently of the solution
// fields, so accounting can be cross-checked.
DispatchTotals dispatch_totals(const DispatchSolution& sol);

}  // namespace pvopt
