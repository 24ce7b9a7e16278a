#pragma once

#include <array>
#include <string>
#include <vector>

#include "pvopt/dispatch.hpp"
#include "pvopt/economics.hpp"
#include "pvopt/model.hpp"

namespace pvopt {

struct SizingOptions {
    // restrict the search to one chemistry by name; empty tries every
    // catalog battery plus the battery-free configuration
    std::string battery_name;
    bool force_no_battery = false;
    bool allow_grid_to_battery = false;
    bool allow_battery_to_grid = false;
    bool free_inverter_sizing = false;
    double pv_kw_cap = lp::kInf;  // additional cap on top of the roof-area limit
    lp::Options lp;
};

struct OptimizationResult {
    Policy policy = Policy::Rd244;
    lp::Status status = lp::Status::Numerical;

    double pv_kw = 0;
    double battery_kwh = 0;
    double inverter_kw = 0;
    double controller_kw = 0;
    std::string battery_name;  // empty for a battery-free optimum

    double eac = 0;        // EUR/yr of the chosen configuration
    double eac_no_pv = 0;  // EUR/yr baseline: all load imported
    double asr = 0;        // percent saving vs the baseline
    economics::EacBreakdown breakdown;
    DispatchSolution dispatch;

    // practitioner report: capacities rounded to the nearest 0.1 kW / kWh
    double pv_kw_rounded = 0;
    double battery_kwh_rounded = 0;
};

// Annualized objective coefficients for the capacity columns, consistent
// with the EAC assembly below. The inverter share rides on the PV column
// through the DC/AC ratio unless free inverter sizing is requested.
CapacityObjective annualized_capacity_costs(const TechnologyCatalog& catalog,
                                            const EconomicParams& econ,
                                            const BatteryTechnology* battery,
                                            bool free_inverter_sizing = false);

// Full EAC of a solved dispatch: capital annuities for PV, inverter, battery
// and controller (fixed part included whenever battery_kwh > 0), OM, energy
// imports minus compensated exports.
economics::EacBreakdown system_eac(const TechnologyCatalog& catalog, const EconomicParams& econ,
                        const DispatchSolution& sol);

// Baseline cost with no installation: every load kWh imported at the hourly
// import price.
double eac_without_pv(const BuildingScenario& scenario);

// Minimizes EAC over PV and battery capacity jointly with dispatch: one LP
// without storage, then one joint LP per candidate battery technology; the
// controller's fixed cost is added after solving (it applies exactly when
// battery_kwh > 0) and the cheapest configuration wins. Ties prefer the
// battery-free candidate, then catalog order.
OptimizationResult optimize_installation(const BuildingScenario& scenario,
                                         const TechnologyCatalog& catalog, Policy policy,
                                         const EconomicParams& econ,
                                         const SizingOptions& options = {});

// One optimization per remuneration policy on shared inputs.
std::array<OptimizationResult, 3> compare_policies(const BuildingScenario& scenario,
                                                   const TechnologyCatalog& catalog,
                                                   const EconomicParams& econ,
                                                   const SizingOptions& options = {});

}  // namespace pvopt
