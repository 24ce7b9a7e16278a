#include "pvopt/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvopt/economics.hpp"
#include "pvopt/tariff.hpp"

namespace pvopt {

namespace {

constexpr double kCapacitySnap = 1e-7;  // kW / kWh below this count as zero

double round_tenth(double v) { return std::round(v * 10.0) / 10.0; }

double controller_rating_per_kwh(const BatteryTechnology& b) {
    return std::max(b.charge_rate_max_per_hr, b.discharge_rate_max_per_hr);
}

}  // namespace

CapacityObjective annualized_capacity_costs(const TechnologyCatalog& catalog,
                                            const EconomicParams& econ,
                                            const BatteryTechnology* battery,
                                            bool free_inverter_sizing) {
    const double r = econ.discount_rate;
    CapacityObjective c;
    c.pv_cost_per_kw_yr =
        (catalog.pv.panel_cost_per_kw + catalog.pv.bos_labour_cost_per_kw) *
            economics::annuity_factor(r, catalog.pv.lifetime_yr) +
        catalog.pv.om_cost_per_kw_yr;
    const double inv_per_kw_yr =
        catalog.inverter.cost_per_kw * economics::annuity_factor(r, catalog.inverter.lifetime_yr) +
        catalog.inverter.om_cost_per_kw_yr;
    if (free_inverter_sizing)
        c.inverter_cost_per_kw_yr = inv_per_kw_yr;
    else
        c.pv_cost_per_kw_yr += inv_per_kw_yr / catalog.inverter.dc_ac_ratio;
    if (battery) {
        c.battery_cost_per_kwh_yr =
            battery->cost_per_kwh * economics::annuity_factor(r, battery->lifetime_yr) +
            battery->om_cost_per_kwh_yr +
            controller_rating_per_kwh(*battery) *
                (catalog.controller.cost_per_kw *
                     economics::annuity_factor(r, catalog.controller.lifetime_yr) +
                 catalog.controller.om_cost_per_kw_yr);
    }
    return c;
}

economics::EacBreakdown system_eac(const TechnologyCatalog& catalog, const EconomicParams& econ,
                        const DispatchSolution& sol) {
    std::vector<economics::CapitalItem> items;
    items.push_back({"pv_panels", sol.pv_kw, catalog.pv.panel_cost_per_kw, 0.0,
                     catalog.pv.lifetime_yr, catalog.pv.om_cost_per_kw_yr});
    items.push_back({"pv_bos_labour", sol.pv_kw, catalog.pv.bos_labour_cost_per_kw, 0.0,
                     catalog.pv.lifetime_yr, 0.0});
    items.push_back({"inverter", sol.inverter_kw, catalog.inverter.cost_per_kw, 0.0,
                     catalog.inverter.lifetime_yr, catalog.inverter.om_cost_per_kw_yr});
    if (sol.battery_kwh > 0) {
        const BatteryTechnology* b = catalog.find_battery(sol.battery_name);
        if (!b) throw std::invalid_argument("system_eac: unknown battery '" + sol.battery_name + "'");
        items.push_back({"battery", sol.battery_kwh, b->cost_per_kwh, 0.0, b->lifetime_yr,
                         b->om_cost_per_kwh_yr});
        items.push_back({"controller", controller_rating_per_kwh(*b) * sol.battery_kwh,
                         catalog.controller.cost_per_kw, catalog.controller.fixed_cost,
                         catalog.controller.lifetime_yr, catalog.controller.om_cost_per_kw_yr});
    }
    return economics::assemble_eac(items, sol.import_cost, sol.export_revenue, econ.discount_rate);
}

double eac_without_pv(const BuildingScenario& scenario) {
    double cost = 0;
    for (const RepresentativeDay& d : scenario.days)
        for (int t = 0; t < 24; ++t)
            cost += d.weight_days * d.load_kwh[t] * tariff::import_price(d.prices[t]);
    return cost;
}

namespace {

struct Candidate {
    DispatchSolution sol;
    economics::EacBreakdown breakdown;
    double eac = 0;
    bool ok = false;
};

Candidate run_candidate(const BuildingScenario& scenario, const TechnologyCatalog& catalog,
                        Policy policy, const EconomicParams& econ, const SizingOptions& o,
                        const BatteryTechnology* battery) {
    DispatchOptions d;
    d.policy = policy;
    d.pv_kw_min = 0;
    const double roof_cap = catalog.pv.roof_occupation_m2_per_kw > 0
                                ? scenario.roof_area_m2 / catalog.pv.roof_occupation_m2_per_kw
                                : lp::kInf;
    d.pv_kw_max = std::min(roof_cap, o.pv_kw_cap);
    d.battery = battery;
    if (battery) {
        d.battery_kwh_min = 0;
        d.battery_kwh_max = lp::kInf;
        d.allow_grid_to_battery = o.allow_grid_to_battery;
        d.allow_battery_to_grid = o.allow_battery_to_grid;
    }
    d.free_inverter_sizing = o.free_inverter_sizing;
    d.capacity_cost = annualized_capacity_costs(catalog, econ, battery, o.free_inverter_sizing);
    d.lp = o.lp;

    Candidate c;
    c.sol = optimal_dispatch(scenario, catalog.inverter, catalog.controller, d);
    if (c.sol.status != lp::Status::Optimal) return c;

    if (c.sol.pv_kw < kCapacitySnap) c.sol.pv_kw = 0;
    if (c.sol.battery_kwh < kCapacitySnap) {
        // vanishing storage: the battery-free candidate covers this point,
        // and keeping it would charge the controller's fixed cost for nothing
        c.sol.battery_kwh = 0;
        c.sol.battery_name.clear();
    }
    if (!o.free_inverter_sizing)
        c.sol.inverter_kw = c.sol.pv_kw / catalog.inverter.dc_ac_ratio;
    c.breakdown = system_eac(catalog, econ, c.sol);
    c.eac = c.breakdown.total;
    c.ok = true;
    return c;
}

}  // namespace

OptimizationResult optimize_installation(const BuildingScenario& scenario,
                                         const TechnologyCatalog& catalog, Policy policy,
                                         const EconomicParams& econ,
                                         const SizingOptions& options) {
    catalog.check();
    if (!options.battery_name.empty() && !catalog.find_battery(options.battery_name))
        throw std::invalid_argument("optimize_installation: unknown battery '" +
                                    options.battery_name + "'");

    std::vector<const BatteryTechnology*> batteries;
    batteries.push_back(nullptr);  // battery-free first: preferred on ties
    if (!options.force_no_battery) {
        for (const BatteryTechnology& b : catalog.batteries) {
            if (options.battery_name.empty() || b.name == options.battery_name)
                batteries.push_back(&b);
        }
    }

    Candidate best;
    lp::Status first_status = lp::Status::Numerical;
    for (size_t i = 0; i < batteries.size(); ++i) {
        Candidate c = run_candidate(scenario, catalog, policy, econ, options, batteries[i]);
        if (i == 0) first_status = c.sol.status;
        if (!c.ok) continue;
        if (!best.ok || c.eac < best.eac - 1e-9 * (1.0 + std::fabs(best.eac))) best = std::move(c);
    }

    OptimizationResult res;
    res.policy = policy;
    if (!best.ok) {
        res.status = first_status;
        return res;
    }
    res.status = lp::Status::Optimal;
    res.pv_kw = best.sol.pv_kw;
    res.battery_kwh = best.sol.battery_kwh;
    res.inverter_kw = best.sol.inverter_kw;
    res.battery_name = best.sol.battery_name;
    if (res.battery_kwh > 0) {
        const BatteryTechnology* b = catalog.find_battery(res.battery_name);
        res.controller_kw = controller_rating_per_kwh(*b) * res.battery_kwh;
    }
    res.eac = best.eac;
    res.eac_no_pv = eac_without_pv(scenario);
    res.asr = res.eac_no_pv > 0 ? economics::annual_saving_ratio(res.eac_no_pv, res.eac) : 0.0;
    res.breakdown = std::move(best.breakdown);
    res.dispatch = std::move(best.sol);
    res.pv_kw_rounded = round_tenth(res.pv_kw);
    res.battery_kwh_rounded = round_tenth(res.battery_kwh);
    return res;
}

std::array<OptimizationResult, 3> compare_policies(const BuildingScenario& scenario,
                                                   const TechnologyCatalog& catalog,
                                                   const EconomicParams& econ,
                                                   const SizingOptions& options) {
    return {optimize_installation(scenario, catalog, Policy::NoRemuneration, econ, options),
            optimize_installation(scenario, catalog, Policy::Rd244, econ, options),
            optimize_installation(scenario, catalog, Policy::Rd244WithLosses, econ, options)};
}

}  // namespace pvopt
