#pragma once

// shared fixtures and checkers for the test binaries; include after doctest.h

#include <array>
#include <cmath>
#include <vector>

#include "pvopt/dispatch.hpp"
#include "pvopt/model.hpp"
#include "pvopt/tariff.hpp"

namespace testsup {

using namespace pvopt;

inline PriceDecomposition mk_price(double pmh, double teu, double sah = 0.0, double oc = 0.0,
                                   double perd_fraction = 0.0) {
    PriceDecomposition p;
    p.pmh = pmh;
    p.sah = sah;
    p.oc = oc;
    p.perd_fraction = perd_fraction;
    p.teu = teu;
    return p;
}

inline TechnologyCatalog small_catalog() {
    TechnologyCatalog c;
    c.pv = {360.0, 360.0, 20.0, 10.0, 0.0};
    c.inverter = {360.0, 0.93, 10.0, 1.2, 0.0};
    c.controller = {50.0, 60.0, 0.95, 10.0, 0.0};
    BatteryTechnology b;
    b.name = "cell-a";
    b.cost_per_kwh = 394.0;
    b.ageing_cycles_per_yr = 250.0;
    b.lifetime_yr = 8.0;
    b.soc_min_fraction = 0.05;
    b.charge_rate_max_per_hr = 0.5;
    b.discharge_rate_max_per_hr = 0.5;
    b.eff_charge = 0.95;
    b.eff_discharge = 0.95;
    b.om_cost_per_kwh_yr = 0.0;
    c.batteries.push_back(b);
    return c;
}

// single representative day carrying the whole year's weight
inline BuildingScenario one_day_scenario(const std::array<double, 24>& load,
                                         const std::array<double, 24>& cf,
                                         const std::array<PriceDecomposition, 24>& prices,
                                         double weight = 365.0) {
    BuildingScenario s;
    s.region = "crafted";
    s.households = 1;
    s.roof_area_m2 = 1000.0;
    s.synthetic = true;
    RepresentativeDay d;
    d.month = 1;
    d.kind = DayKind::Weekday;
    d.weight_days = weight;
    d.load_kwh = load;
    d.solar_cf = cf;
    d.prices = prices;
    s.days.push_back(d);
    double annual = 0;
    for (double v : load) annual += weight * v;
    s.annual_consumption_kwh_per_household = annual;
    return s;
}

inline std::array<PriceDecomposition, 24> constant_prices(const PriceDecomposition& p) {
    std::array<PriceDecomposition, 24> a;
    a.fill(p);
    return a;
}

// structural checks every optimal dispatch must satisfy
inline void check_dispatch_invariants(const BuildingScenario& scenario,
                                      const TechnologyCatalog& catalog,
                                      const BatteryTechnology* battery,
                                      const DispatchSolution& sol,
                                      Policy policy) {
    REQUIRE(sol.status == lp::Status::Optimal);
    REQUIRE(sol.days.size() == scenario.days.size());
    const double eta_ctrl = catalog.controller.efficiency;
    const double E = sol.battery_kwh;
    double age_throughput = 0;
    double tot_import_cost = 0, tot_export_rev = 0;
    for (size_t di = 0; di < sol.days.size(); ++di) {
        const DayDispatch& dd = sol.days[di];
        const RepresentativeDay& day = scenario.days[di];
        CHECK(dd.weight_days == day.weight_days);
        for (int t = 0; t < 24; ++t) {
            const HourFlows& f = dd.hours[t];
            CHECK(f.pv_to_load >= -1e-12);
            CHECK(f.pv_to_battery >= -1e-12);
            CHECK(f.export_comp >= -1e-12);
            CHECK(f.export_uncomp >= -1e-12);
            CHECK(f.curtailed >= -1e-12);
            CHECK(f.battery_to_load >= -1e-12);
            CHECK(f.grid_import >= -1e-12);
            // load balance
            CHECK(std::fabs(f.pv_to_load + f.battery_to_load + f.grid_import - f.load) <= 1e-9);
            // PV split against AC availability
            double split = f.pv_to_load + f.pv_to_battery + f.export_comp + f.export_uncomp +
                           f.curtailed - f.battery_to_grid;
            CHECK(std::fabs(split - f.pv_ac_available) <= 1e-8);
            if (battery && E > 0) {
                CHECK(f.soc >= battery->soc_min_fraction * E - 1e-9);
                CHECK(f.soc <= E + 1e-9);
                const HourFlows& fn = dd.hours[(t + 1) % 24];
                double rise = battery->eff_charge * eta_ctrl * (f.pv_to_battery + f.grid_to_battery);
                double drop = (f.battery_to_load + f.battery_to_grid) /
                              (battery->eff_discharge * eta_ctrl);
                CHECK(std::fabs(fn.soc - f.soc - rise + drop) <= 1e-9);
                CHECK(rise <= battery->charge_rate_max_per_hr * E + 1e-9);
                CHECK(drop <= battery->discharge_rate_max_per_hr * E + 1e-9);
                age_throughput += dd.weight_days * drop;
            } else {
                CHECK(f.battery_to_load <= 1e-9);
                CHECK(f.soc <= 1e-9);
            }
            tot_import_cost += dd.weight_days * f.import_price * f.grid_import;
            tot_export_rev += dd.weight_days * f.export_price * f.export_comp;
        }
    }
    if (battery && E > 0)
        CHECK(age_throughput <= battery->ageing_cycles_per_yr * E + 1e-6);
    CHECK(sol.import_cost == doctest::Approx(tot_import_cost).epsilon(1e-9));
    CHECK(sol.export_revenue == doctest::Approx(tot_export_rev).epsilon(1e-9));
    if (policy != Policy::NoRemuneration) {
        for (const MonthLedger& m : sol.months) CHECK(m.export_value <= m.import_cost + 1e-6);
    } else {
        CHECK(sol.export_comp_kwh <= 1e-9);
        CHECK(sol.export_uncomp_kwh <= 1e-9);
    }
    DispatchTotals tt = dispatch_totals(sol);
    CHECK(tt.import_cost == doctest::Approx(sol.import_cost).epsilon(1e-9));
    CHECK(tt.export_revenue == doctest::Approx(sol.export_revenue).epsilon(1e-9));
    CHECK(tt.energy_imported == doctest::Approx(sol.grid_import_kwh).epsilon(1e-9));
}

}  // namespace testsup
