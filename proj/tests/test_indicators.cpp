#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "pvopt/dispatch.hpp"
#include "pvopt/indicators.hpp"
#include "pvopt/model.hpp"
#include "support.hpp"

using namespace pvopt;
using testsup::constant_prices;
using testsup::mk_price;
using testsup::one_day_scenario;
using testsup::small_catalog;

namespace {

BuildingScenario evening_peak_scenario() {
    std::array<double, 24> load{}, cf{};
    for (int t = 0; t < 24; ++t) load[t] = (t >= 18 && t < 23) ? 1.2 : 0.4;
    for (int t = 8; t < 18; ++t) cf[t] = 0.45;
    auto prices = constant_prices(mk_price(0.0572, 0.0661, 0.0, 0.0, 0.17));
    BuildingScenario sc = one_day_scenario(load, cf, prices);
    sc.households = 4;
    sc.roof_area_m2 = 200.0;
    sc.annual_consumption_kwh_per_household = sc.annual_load_kwh() / sc.households;
    return sc;
}

}  // namespace

TEST_CASE("indicators recompute from the flow totals") {
    TechnologyCatalog cat = small_catalog();
    BatteryTechnology bt = cat.batteries[0];
    BuildingScenario sc = evening_peak_scenario();
    DispatchSolution sol = dispatch_fixed(sc, cat, 3.0, &bt, 2.0, Policy::Rd244);
    REQUIRE(sol.status == lp::Status::Optimal);

    double self = sol.pv_to_load_kwh + sol.battery_to_load_kwh;
    CHECK(ssr(sol) == doctest::Approx(100.0 * self / sol.load_kwh).epsilon(1e-12));
    double sunk = sol.pv_to_load_kwh + sol.pv_to_battery_kwh + sol.export_comp_kwh +
                  sol.export_uncomp_kwh - sol.battery_to_grid_kwh;
    CHECK(scr(sol) == doctest::Approx(100.0 * self / sunk).epsilon(1e-12));
    CHECK(eir(sol) == doctest::Approx(100.0 * (sol.export_comp_kwh + sol.export_uncomp_kwh) /
                                      sol.grid_import_kwh)
                          .epsilon(1e-12));
    CHECK(export_import_value_ratio(sol) ==
          doctest::Approx(100.0 * sol.export_revenue / sol.import_cost).epsilon(1e-12));

    IndicatorSet set = compute_indicators(sol, sc, cat.pv);
    CHECK(set.ssr == ssr(sol));
    CHECK(set.scr == scr(sol));
    CHECK(set.eir == eir(sol));
    CHECK(set.export_import_value_ratio == export_import_value_ratio(sol));
    CHECK(set.rooftop_fraction == doctest::Approx(100.0 * 3.0 * 10.0 / 200.0).epsilon(1e-12));
    CHECK(set.pv_kw_per_household == doctest::Approx(3.0 / 4.0).epsilon(1e-12));

    // complement of the self-sufficiency share is the imported share
    CHECK(100.0 - set.ssr ==
          doctest::Approx(100.0 * sol.grid_import_kwh / sol.load_kwh).epsilon(1e-9));
    CHECK(set.ssr >= 0.0);
    CHECK(set.ssr <= 100.0 + 1e-9);
    CHECK(set.scr >= 0.0);
    CHECK(set.scr <= 100.0 + 1e-9);
    CHECK(set.eir >= 0.0);
    CHECK(set.export_import_value_ratio <= 100.0 + 1e-6);  // settlement cap
}

TEST_CASE("a battery-free system that exports nothing consumes all pv on site") {
    TechnologyCatalog cat = small_catalog();
    BuildingScenario sc = evening_peak_scenario();
    DispatchSolution sol = dispatch_fixed(sc, cat, 3.0, nullptr, 0.0, Policy::NoRemuneration);
    REQUIRE(sol.status == lp::Status::Optimal);
    REQUIRE(sol.pv_to_load_kwh > 1.0);

    CHECK(scr(sol) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(eir(sol) == 0.0);
    CHECK(export_import_value_ratio(sol) == 0.0);
    // curtailment must not dilute the on-site share
    CHECK(sol.curtailed_kwh > 0.0);
}

TEST_CASE("battery losses price the stored share of on-site consumption") {
    // with storage in the loop the on-site share counts battery output, so
    // the round-trip loss keeps the ratio strictly below 100 even without
    // any exports
    TechnologyCatalog cat = small_catalog();
    BatteryTechnology bt = cat.batteries[0];
    std::array<double, 24> load{}, cf{};
    load[19] = 1.0;
    load[20] = 1.0;
    cf[12] = 0.5;
    auto prices = constant_prices(mk_price(0.0572, 0.0661));
    BuildingScenario sc = one_day_scenario(load, cf, prices);
    const double pv = 1.0 / (0.93 * 0.5);

    DispatchSolution sol = dispatch_fixed(sc, cat, pv, &bt, 2.0, Policy::NoRemuneration);
    REQUIRE(sol.status == lp::Status::Optimal);
    REQUIRE(sol.pv_to_battery_kwh > 0.5);
    CHECK(sol.export_comp_kwh == 0.0);
    double chain = 0.95 * 0.95 * 0.95 * 0.95;
    CHECK(scr(sol) == doctest::Approx(100.0 * chain).epsilon(1e-9));
    CHECK(ssr(sol) == doctest::Approx(100.0 * chain / 2.0).epsilon(1e-9));
}

TEST_CASE("indicators of an empty system are zero") {
    TechnologyCatalog cat = small_catalog();
    BuildingScenario sc = evening_peak_scenario();
    DispatchSolution sol = dispatch_fixed(sc, cat, 0.0, nullptr, 0.0, Policy::Rd244);
    REQUIRE(sol.status == lp::Status::Optimal);
    IndicatorSet set = compute_indicators(sol, sc, cat.pv);
    CHECK(set.ssr == 0.0);
    CHECK(set.scr == 0.0);  // nothing delivered, ratio pinned to zero
    CHECK(set.eir == 0.0);
    CHECK(set.rooftop_fraction == 0.0);
    CHECK(set.pv_kw_per_household == 0.0);
}

TEST_CASE("rooftop fraction scales with capacity and occupation") {
    CHECK(rooftop_fraction(2.0, 10.0, 200.0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(rooftop_fraction(16.38, 10.0, 163.8) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(rooftop_fraction(1.0, 10.0, 0.0) == 0.0);
}
