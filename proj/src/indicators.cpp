#include "pvopt/indicators.hpp"

namespace pvopt {

namespace {
double pct(double num, double den) { return den > 0 ? 100.0 * num / den : 0.0; }
}  // namespace

double ssr(const DispatchSolution& sol) {
    return pct(sol.pv_to_load_kwh + sol.battery_to_load_kwh, sol.load_kwh);
}

double scr(const DispatchSolution& sol) {
    const double delivered = sol.pv_to_load_kwh + sol.pv_to_battery_kwh + sol.export_comp_kwh +
                             sol.export_uncomp_kwh - sol.battery_to_grid_kwh;
    return pct(sol.pv_to_load_kwh + sol.battery_to_load_kwh, delivered);
}

double eir(const DispatchSolution& sol) {
    return pct(sol.export_comp_kwh + sol.export_uncomp_kwh, sol.grid_import_kwh);
}

double export_import_value_ratio(const DispatchSolution& sol) {
    return pct(sol.export_revenue, sol.import_cost);
}

double rooftop_fraction(double pv_kw, double roof_occupation_m2_per_kw, double roof_area_m2) {
    return pct(pv_kw * roof_occupation_m2_per_kw, roof_area_m2);
}

IndicatorSet compute_indicators(const DispatchSolution& sol, const BuildingScenario& scenario,
                                const PvTechnology& pv) {
    IndicatorSet ind;
    ind.ssr = ssr(sol);
    ind.scr = scr(sol);
    ind.eir = eir(sol);
    ind.export_import_value_ratio = export_import_value_ratio(sol);
    ind.rooftop_fraction =
        rooftop_fraction(sol.pv_kw, pv.roof_occupation_m2_per_kw, scenario.roof_area_m2);
    ind.pv_kw_per_household = scenario.households > 0 ? sol.pv_kw / scenario.households : 0.0;
    return ind;
}

}  // namespace pvopt
