#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "pvopt/dispatch.hpp"
#include "pvopt/model.hpp"
#include "pvopt/tariff.hpp"
#include "support.hpp"

using namespace pvopt;
using testsup::check_dispatch_invariants;
using testsup::constant_prices;
using testsup::mk_price;
using testsup::one_day_scenario;
using testsup::small_catalog;

namespace {

double operating_cost(const DispatchSolution& s) { return s.import_cost - s.export_revenue; }

double import_price_of(const PriceDecomposition& p) {
    double cp = p.pmh + p.sah + p.oc;
    return cp * (1.0 + p.perd_fraction) + p.teu;
}

double export_price_of(const PriceDecomposition& p, Policy pol) {
    if (pol == Policy::NoRemuneration) return 0.0;
    double cp = p.pmh + p.sah + p.oc;
    return pol == Policy::Rd244 ? p.pmh : p.pmh + p.perd_fraction * cp;
}

// Day-cycle dispatch optimum over a discretized state-of-charge grid with
// K levels spanning the usable band. Actions move the state an integer
// number of levels per hour; charging draws from PV only, discharging
// serves load only, never both at once. Every grid policy is feasible for
// the continuous problem, so the grid optimum can only be costlier. The
// discretization penalty is at most one level of misplaced energy per
// hour, bounded by 2 * 24 * level * max_import_price per day.
double grid_dispatch_cost(const RepresentativeDay& day, double pv_kw,
                          const InverterTechnology& inv, const ControllerTechnology& ctrl,
                          const BatteryTechnology* bt, double E, Policy pol, int K) {
    std::array<double, 24> avail{}, pim{}, pex{};
    const double cf_cap = 1.0 / inv.dc_ac_ratio;
    for (int t = 0; t < 24; ++t) {
        avail[t] = inv.efficiency * std::min(day.solar_cf[t], cf_cap) * pv_kw;
        pim[t] = import_price_of(day.prices[t]);
        pex[t] = export_price_of(day.prices[t], pol);
    }
    if (!bt || E <= 0) {
        double c = 0;
        for (int t = 0; t < 24; ++t) {
            double pv2l = std::min(avail[t], day.load_kwh[t]);
            c += pim[t] * (day.load_kwh[t] - pv2l) - pex[t] * (avail[t] - pv2l);
        }
        return c * day.weight_days;
    }
    const double usable = (1.0 - bt->soc_min_fraction) * E;
    const int K1 = K - 1;
    const double unit = usable / K1;
    const double eta_in = bt->eff_charge * ctrl.efficiency;
    const double eta_out = bt->eff_discharge * ctrl.efficiency;
    const int max_up =
        std::min(K1, static_cast<int>(std::floor(bt->charge_rate_max_per_hr * E / unit + 1e-9)));
    const int max_dn = std::min(
        K1, static_cast<int>(std::floor(bt->discharge_rate_max_per_hr * E / unit + 1e-9)));
    const double kInfCost = 1e300;
    double best = kInfCost;
    std::vector<double> val(K), nxt(K);
    for (int s0 = 0; s0 <= K1; ++s0) {
        std::fill(val.begin(), val.end(), kInfCost);
        val[s0] = 0;
        for (int t = 0; t < 24; ++t) {
            std::fill(nxt.begin(), nxt.end(), kInfCost);
            const double load = day.load_kwh[t];
            const double pv2l0 = std::min(avail[t], load);
            const double exp0 = avail[t] - pv2l0;
            for (int s = 0; s <= K1; ++s) {
                if (val[s] >= kInfCost) continue;
                const int up = std::min(max_up, K1 - s);
                for (int d = 0; d <= up; ++d) {
                    double pv2b = d * unit / eta_in;
                    if (pv2b > avail[t] + 1e-12) break;
                    double rem = avail[t] - pv2b;
                    double pv2l = std::min(rem, load);
                    double c = val[s] + pim[t] * (load - pv2l) - pex[t] * (rem - pv2l);
                    if (c < nxt[s + d]) nxt[s + d] = c;
                }
                const int dn = std::min(max_dn, s);
                for (int d = 1; d <= dn; ++d) {
                    double delivered = d * unit * eta_out;
                    if (delivered > load - pv2l0 + 1e-12) break;
                    double c = val[s] + pim[t] * (load - pv2l0 - delivered) - pex[t] * exp0;
                    if (c < nxt[s - d]) nxt[s - d] = c;
                }
            }
            val.swap(nxt);
        }
        if (val[s0] < best) best = val[s0];
    }
    return best * day.weight_days;
}

BatteryTechnology fast_battery(double cycles = 2000.0) {
    BatteryTechnology b = small_catalog().batteries[0];
    b.charge_rate_max_per_hr = 1.0;
    b.discharge_rate_max_per_hr = 1.0;
    b.ageing_cycles_per_yr = cycles;
    return b;
}

}  // namespace

TEST_CASE("no pv and no battery imports the whole load") {
    TechnologyCatalog cat = small_catalog();
    std::array<double, 24> load{}, cf{};
    for (int t = 0; t < 24; ++t) load[t] = 0.3 + 0.05 * t;
    cf[12] = 0.2;  // keeps the scenario's capacity factor positive
    auto prices = constant_prices(mk_price(0.0572, 0.0661));
    BuildingScenario sc = one_day_scenario(load, cf, prices);

    DispatchSolution sol = dispatch_fixed(sc, cat, 0.0, nullptr, 0.0, Policy::Rd244);
    check_dispatch_invariants(sc, cat, nullptr, sol, Policy::Rd244);
    double expect = 0;
    for (int t = 0; t < 24; ++t) {
        CHECK(sol.days[0].hours[t].grid_import == doctest::Approx(load[t]).epsilon(1e-9));
        expect += 365.0 * load[t] * 0.1233;
    }
    CHECK(operating_cost(sol) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(sol.export_comp_kwh == 0.0);
    CHECK(sol.pv_ac_kwh == 0.0);
}

TEST_CASE("surplus is curtailed when exports earn nothing") {
    TechnologyCatalog cat = small_catalog();
    std::array<double, 24> load{}, cf{};
    load.fill(1.0);
    for (int t = 8; t < 18; ++t) cf[t] = 0.5;
    auto prices = constant_prices(mk_price(0.0572, 0.0661));
    BuildingScenario sc = one_day_scenario(load, cf, prices);
    const double pv = 2.0 / (0.93 * 0.5);  // two AC kWh available per sunny hour

    DispatchSolution sol = dispatch_fixed(sc, cat, pv, nullptr, 0.0, Policy::NoRemuneration);
    check_dispatch_invariants(sc, cat, nullptr, sol, Policy::NoRemuneration);
    for (int t = 8; t < 18; ++t) {
        const HourFlows& f = sol.days[0].hours[t];
        CHECK(f.pv_to_load == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(f.curtailed == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(f.grid_import <= 1e-9);
    }
    CHECK(sol.export_comp_kwh == 0.0);
    CHECK(sol.export_uncomp_kwh == 0.0);
    CHECK(operating_cost(sol) == doctest::Approx(365.0 * 14.0 * 0.1233).epsilon(1e-9));
}

TEST_CASE("dc power above the inverter rating is clipped") {
    TechnologyCatalog cat = small_catalog();
    std::array<double, 24> load{}, cf{};
    load.fill(0.1);
    for (int t = 11; t < 14; ++t) cf[t] = 1.0;
    auto prices = constant_prices(mk_price(0.0572, 0.0661));
    BuildingScenario sc = one_day_scenario(load, cf, prices);

    DispatchSolution sol = dispatch_fixed(sc, cat, 1.0, nullptr, 0.0, Policy::Rd244);
    check_dispatch_invariants(sc, cat, nullptr, sol, Policy::Rd244);
    for (int t = 11; t < 14; ++t) {
        const HourFlows& f = sol.days[0].hours[t];
        CHECK(f.pv_ac_available == doctest::Approx(0.93 / 1.2).epsilon(1e-12));
        CHECK(f.pv_clipped == doctest::Approx(0.93 * (1.0 - 1.0 / 1.2)).epsilon(1e-9));
        CHECK(f.export_comp == doctest::Approx(0.93 / 1.2 - 0.1).epsilon(1e-8));
    }
    CHECK(sol.inverter_kw == doctest::Approx(1.0 / 1.2).epsilon(1e-12));
}

TEST_CASE("stored noon surplus displaces evening imports at the round-trip rate") {
    // lossless controller isolates the battery round trip: a stored kWh
    // comes back worth 0.95 * 0.95 = 0.9 of an imported one, while the
    // compensated route pays only the energy-cost share of the import
    // price, about 0.46 of it
    TechnologyCatalog cat = small_catalog();
    cat.controller.efficiency = 1.0;
    BatteryTechnology bt = fast_battery();
    std::array<double, 24> load{}, cf{};
    load[19] = 1.0;
    cf[12] = 0.5;
    auto prices = constant_prices(mk_price(0.0572, 0.0661));
    BuildingScenario sc = one_day_scenario(load, cf, prices);
    const double pv = 1.0 / (0.93 * 0.5);
    const double p_im = 0.1233, p_ex = 0.0572;
    CHECK(p_ex / p_im == doctest::Approx(0.46391).epsilon(1e-4));

    DispatchSolution with = dispatch_fixed(sc, cat, pv, &bt, 1.0, Policy::Rd244);
    DispatchSolution without = dispatch_fixed(sc, cat, pv, nullptr, 0.0, Policy::Rd244);
    check_dispatch_invariants(sc, cat, &bt, with, Policy::Rd244);
    check_dispatch_invariants(sc, cat, nullptr, without, Policy::Rd244);

    const HourFlows& noon = with.days[0].hours[12];
    CHECK(noon.pv_to_battery == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(noon.export_comp <= 1e-7);
    const double rt = 0.95 * 0.95;
    CHECK(with.days[0].hours[19].battery_to_load == doctest::Approx(rt).epsilon(1e-7));
    double gain = operating_cost(without) - operating_cost(with);
    CHECK(gain == doctest::Approx(365.0 * (rt * p_im - p_ex)).epsilon(1e-6));
}

TEST_CASE("dispatch matches an exhaustive state-grid optimum") {
    TechnologyCatalog cat = small_catalog();
    BatteryTechnology bt = fast_battery();

    SUBCASE("analytic single-cycle day lands on the grid") {
        std::array<double, 24> load{}, cf{};
        load[19] = 1.0;
        cf[12] = 0.5;
        auto prices = constant_prices(mk_price(0.0572, 0.0661));
        BuildingScenario sc = one_day_scenario(load, cf, prices);
        const double pv = 1.0 / (0.93 * 0.5);

        DispatchSolution sol = dispatch_fixed(sc, cat, pv, &bt, 1.0, Policy::Rd244);
        check_dispatch_invariants(sc, cat, &bt, sol, Policy::Rd244);
        // full chain: 1 AC kWh -> 0.9025 stored -> 0.81450625 AC back
        const double chain = 0.95 * 0.95 * 0.95 * 0.95;
        double expect = 365.0 * 0.1233 * (1.0 - chain);
        CHECK(operating_cost(sol) == doctest::Approx(expect).epsilon(1e-9));
        // 0.9025 stored is exactly 19 levels of a 21-level grid
        double dp = grid_dispatch_cost(sc.days[0], pv, cat.inverter, cat.controller, &bt, 1.0,
                                       Policy::Rd244, 21);
        CHECK(dp == doctest::Approx(expect).epsilon(1e-9));
    }

    SUBCASE("random days stay between the grid optimum and its envelope") {
        std::mt19937 rng(20260816u);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int inst = 0; inst < 8; ++inst) {
            std::array<double, 24> load{}, cf{};
            std::array<PriceDecomposition, 24> prices;
            for (int t = 0; t < 24; ++t) {
                load[t] = 0.2 + 1.3 * u(rng);
                if (t >= 8 && t < 18) cf[t] = 0.1 + 0.45 * u(rng);
                prices[t] = mk_price(0.03 + 0.06 * u(rng), 0.044, 0.0, 0.0, 0.17);
            }
            BuildingScenario sc = one_day_scenario(load, cf, prices);
            const double pv = 0.5 + u(rng);
            const double E = (inst % 3 == 0) ? 0.0 : (inst % 3 == 1 ? 0.8 : 1.6);
            const Policy pol = (inst % 2 == 0) ? Policy::NoRemuneration : Policy::Rd244;
            CAPTURE(inst);

            DispatchSolution sol =
                dispatch_fixed(sc, cat, pv, E > 0 ? &bt : nullptr, E, pol);
            check_dispatch_invariants(sc, cat, E > 0 ? &bt : nullptr, sol, pol);
            for (int t = 0; t < 24; ++t)
                CHECK(std::fabs(sol.days[0].hours[t].import_price - import_price_of(prices[t])) <=
                      1e-12);
            if (pol == Policy::Rd244)
                CHECK(sol.months[0].export_value <= sol.months[0].import_cost - 1.0);

            double op = operating_cost(sol);
            if (E <= 0) {
                double dp = grid_dispatch_cost(sc.days[0], pv, cat.inverter, cat.controller,
                                               nullptr, 0.0, pol, 2);
                CHECK(op == doctest::Approx(dp).epsilon(1e-9));
                continue;
            }
            double dp41 = grid_dispatch_cost(sc.days[0], pv, cat.inverter, cat.controller, &bt, E,
                                             pol, 41);
            double dp21 = grid_dispatch_cost(sc.days[0], pv, cat.inverter, cat.controller, &bt, E,
                                             pol, 21);
            CHECK(dp41 <= dp21 + 1e-9);  // refining the grid can only help
            CHECK(op <= dp41 + 1e-5);
            double pmax = 0;
            for (int t = 0; t < 24; ++t) pmax = std::max(pmax, import_price_of(prices[t]));
            double unit = (1.0 - bt.soc_min_fraction) * E / 40.0;
            CHECK(dp41 - op <= 2.0 * 24.0 * unit * pmax * 365.0);
        }
    }
}

TEST_CASE("compensation stops at the monthly import bill") {
    TechnologyCatalog cat = small_catalog();
    std::array<double, 24> load{}, cf{};
    load.fill(0.2);
    for (int t = 8; t < 18; ++t) cf[t] = 0.5;
    auto prices = constant_prices(mk_price(0.0572, 0.0661));
    BuildingScenario sc = one_day_scenario(load, cf, prices);

    for (Policy pol : {Policy::Rd244, Policy::Rd244WithLosses}) {
        CAPTURE(to_string(pol));
        DispatchSolution sol = dispatch_fixed(sc, cat, 5.0, nullptr, 0.0, pol);
        check_dispatch_invariants(sc, cat, nullptr, sol, pol);
        REQUIRE(sol.months.size() == 1);
        CHECK(sol.months[0].export_value ==
              doctest::Approx(sol.months[0].import_cost).epsilon(1e-6));
        CHECK(sol.export_uncomp_kwh > 1.0);
    }

    DispatchSolution p1 = dispatch_fixed(sc, cat, 5.0, nullptr, 0.0, Policy::NoRemuneration);
    check_dispatch_invariants(sc, cat, nullptr, p1, Policy::NoRemuneration);
    CHECK(p1.curtailed_kwh > 1.0);
    CHECK(p1.export_comp_kwh == 0.0);
}

TEST_CASE("ageing budget caps annual cycling") {
    TechnologyCatalog cat = small_catalog();
    std::array<double, 24> load{}, cf{};
    for (int t = 19; t < 21; ++t) load[t] = 1.0;
    for (int t = 11; t < 14; ++t) cf[t] = 0.5;
    auto prices = constant_prices(mk_price(0.0572, 0.0661));
    BuildingScenario sc = one_day_scenario(load, cf, prices);
    const double pv = 3.0 / (0.93 * 0.5);  // one spare AC kWh each sunny hour

    auto throughput = [](const DispatchSolution& s) {
        double sum = 0;
        for (const DayDispatch& d : s.days)
            for (const HourFlows& f : d.hours)
                sum += d.weight_days * (f.battery_to_load + f.battery_to_grid) /
                       (0.95 * 0.95);
        return sum;
    };

    BatteryTechnology tight = fast_battery(100.0);
    DispatchSolution sol = dispatch_fixed(sc, cat, pv, &tight, 1.0, Policy::NoRemuneration);
    check_dispatch_invariants(sc, cat, &tight, sol, Policy::NoRemuneration);
    CHECK(throughput(sol) == doctest::Approx(100.0).epsilon(1e-5));

    BatteryTechnology loose = fast_battery(5000.0);
    DispatchSolution free_sol = dispatch_fixed(sc, cat, pv, &loose, 1.0, Policy::NoRemuneration);
    check_dispatch_invariants(sc, cat, &loose, free_sol, Policy::NoRemuneration);
    CHECK(throughput(free_sol) > 300.0);
    CHECK(operating_cost(free_sol) < operating_cost(sol) - 1.0);
}

TEST_CASE("objective responds monotonically to export price and load") {
    TechnologyCatalog cat = small_catalog();
    BatteryTechnology bt = fast_battery();
    std::array<double, 24> load{}, cf{};
    for (int t = 0; t < 24; ++t) load[t] = (t >= 18 && t < 23) ? 1.2 : 0.4;
    for (int t = 8; t < 18; ++t) cf[t] = 0.45;
    auto prices = constant_prices(mk_price(0.05, 0.044, 0.0, 0.0, 0.17));
    BuildingScenario sc = one_day_scenario(load, cf, prices);

    DispatchSolution p1 = dispatch_fixed(sc, cat, 2.0, &bt, 1.0, Policy::NoRemuneration);
    DispatchSolution p2 = dispatch_fixed(sc, cat, 2.0, &bt, 1.0, Policy::Rd244);
    DispatchSolution p3 = dispatch_fixed(sc, cat, 2.0, &bt, 1.0, Policy::Rd244WithLosses);
    check_dispatch_invariants(sc, cat, &bt, p1, Policy::NoRemuneration);
    check_dispatch_invariants(sc, cat, &bt, p2, Policy::Rd244);
    check_dispatch_invariants(sc, cat, &bt, p3, Policy::Rd244WithLosses);
    CHECK(operating_cost(p1) >= operating_cost(p2) - 1e-4);
    CHECK(operating_cost(p2) >= operating_cost(p3) - 1e-4);

    std::array<double, 24> heavier = load;
    for (double& v : heavier) v *= 1.25;
    BuildingScenario sc2 = one_day_scenario(heavier, cf, prices);
    DispatchSolution p2h = dispatch_fixed(sc2, cat, 2.0, &bt, 1.0, Policy::Rd244);
    CHECK(operating_cost(p2h) >= operating_cost(p2) - 1e-6);
}

TEST_CASE("night imports can charge the battery only when enabled") {
    TechnologyCatalog cat = small_catalog();
    BatteryTechnology bt = fast_battery();
    std::array<double, 24> load{}, cf{};
    for (int t = 0; t < 6; ++t) load[t] = 0.5;
    for (int t = 18; t < 22; ++t) load[t] = 1.0;
    cf[12] = 0.1;
    std::array<PriceDecomposition, 24> prices;
    for (int t = 0; t < 24; ++t)
        prices[t] = mk_price(t < 6 ? 0.005 : 0.12, 0.044, 0.0, 0.0, 0.17);
    BuildingScenario sc = one_day_scenario(load, cf, prices);

    DispatchOptions base;
    base.policy = Policy::NoRemuneration;
    base.pv_kw_min = base.pv_kw_max = 0.0;
    base.battery = &bt;
    base.battery_kwh_min = base.battery_kwh_max = 2.0;

    DispatchSolution idle = optimal_dispatch(sc, cat.inverter, cat.controller, base);
    check_dispatch_invariants(sc, cat, &bt, idle, Policy::NoRemuneration);
    CHECK(idle.grid_to_battery_kwh == 0.0);
    CHECK(idle.battery_to_load_kwh <= 1e-9);

    DispatchOptions arb = base;
    arb.allow_grid_to_battery = true;
    DispatchSolution charged = optimal_dispatch(sc, cat.inverter, cat.controller, arb);
    check_dispatch_invariants(sc, cat, &bt, charged, Policy::NoRemuneration);
    CHECK(charged.grid_to_battery_kwh > 1.0);
    CHECK(operating_cost(charged) < operating_cost(idle) - 30.0);
}

TEST_CASE("battery exports need their own flag") {
    TechnologyCatalog cat = small_catalog();
    BatteryTechnology bt = fast_battery();
    std::array<double, 24> load{}, cf{};
    for (int t = 0; t < 7; ++t) load[t] = 0.7;
    for (int t = 10; t < 15; ++t) cf[t] = 0.4;
    std::array<PriceDecomposition, 24> prices;
    for (int t = 0; t < 24; ++t) {
        double pmh = 0.02;
        if (t >= 19 && t < 22) pmh = 0.13;
        prices[t] = mk_price(pmh, 0.044, 0.0, 0.0, 0.17);
    }
    BuildingScenario sc = one_day_scenario(load, cf, prices);

    DispatchOptions base;
    base.policy = Policy::Rd244;
    base.pv_kw_min = base.pv_kw_max = 2.0;
    base.battery = &bt;
    base.battery_kwh_min = base.battery_kwh_max = 2.0;

    DispatchSolution off = optimal_dispatch(sc, cat.inverter, cat.controller, base);
    check_dispatch_invariants(sc, cat, &bt, off, Policy::Rd244);
    CHECK(off.battery_to_grid_kwh == 0.0);

    DispatchOptions on = base;
    on.allow_battery_to_grid = true;
    DispatchSolution sol = optimal_dispatch(sc, cat.inverter, cat.controller, on);
    check_dispatch_invariants(sc, cat, &bt, sol, Policy::Rd244);
    CHECK(sol.battery_to_grid_kwh > 1e-3);
    CHECK(operating_cost(sol) < operating_cost(off) - 1e-3);
}

TEST_CASE("a free inverter rating trades clipping against import savings") {
    TechnologyCatalog cat = small_catalog();
    std::array<double, 24> load{}, cf{};
    for (int t = 9; t < 15; ++t) load[t] = 2.0;
    cf[12] = 0.9;
    for (int t : {10, 11, 13, 14}) cf[t] = 0.3;
    auto prices = constant_prices(mk_price(0.0572, 0.0661));
    BuildingScenario sc = one_day_scenario(load, cf, prices);

    DispatchOptions opt;
    opt.policy = Policy::NoRemuneration;
    opt.pv_kw_min = opt.pv_kw_max = 2.0;
    opt.free_inverter_sizing = true;

    // serving the noon peak is worth eta * p_im * 365 = 41.86 EUR per kW
    // and a year, so the rating follows the peak only while it costs less
    opt.capacity_cost.inverter_cost_per_kw_yr = 41.0;
    DispatchSolution worth = optimal_dispatch(sc, cat.inverter, cat.controller, opt);
    check_dispatch_invariants(sc, cat, nullptr, worth, Policy::NoRemuneration);
    CHECK(worth.inverter_kw == doctest::Approx(1.8).epsilon(1e-6));
    CHECK(worth.days[0].hours[12].curtailed <= 1e-7);

    opt.capacity_cost.inverter_cost_per_kw_yr = 45.0;
    DispatchSolution spare = optimal_dispatch(sc, cat.inverter, cat.controller, opt);
    check_dispatch_invariants(sc, cat, nullptr, spare, Policy::NoRemuneration);
    CHECK(spare.inverter_kw == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(spare.days[0].hours[12].curtailed == doctest::Approx(1.674 - 0.558).epsilon(1e-6));

    DispatchSolution fixed = dispatch_fixed(sc, cat, 2.0, nullptr, 0.0, Policy::NoRemuneration);
    CHECK(fixed.inverter_kw == doctest::Approx(2.0 / 1.2).epsilon(1e-12));
    CHECK(fixed.days[0].hours[12].pv_clipped > 0.1);
}

TEST_CASE("multi-day scenarios keep per-month compensation ledgers") {
    TechnologyCatalog cat = small_catalog();
    BatteryTechnology bt = fast_battery();
    std::array<double, 24> wd{}, we{}, cf{};
    for (int t = 0; t < 24; ++t) {
        wd[t] = (t >= 18 && t < 23) ? 1.0 : 0.3;
        we[t] = 0.5;
    }
    for (int t = 8; t < 18; ++t) cf[t] = 0.4;
    auto pr = constant_prices(mk_price(0.0572, 0.0661, 0.0, 0.0, 0.17));

    BuildingScenario sc;
    sc.region = "crafted";
    sc.households = 1;
    sc.roof_area_m2 = 500;
    struct Spec { int m; DayKind k; double w; const std::array<double, 24>* l; };
    std::array<double, 24> cf_low = cf;
    for (double& v : cf_low) v *= 0.5;
    for (auto [m, k, w, l] : {Spec{1, DayKind::Weekday, 100, &wd}, Spec{1, DayKind::Weekend, 50, &we},
                              Spec{7, DayKind::Weekday, 150, &wd}, Spec{7, DayKind::Weekend, 65, &we}}) {
        RepresentativeDay d;
        d.month = m;
        d.kind = k;
        d.weight_days = w;
        d.load_kwh = *l;
        d.solar_cf = (m == 1) ? cf_low : cf;
        d.prices = pr;
        sc.days.push_back(d);
    }
    sc.annual_consumption_kwh_per_household = sc.annual_load_kwh();

    DispatchSolution sol = dispatch_fixed(sc, cat, 3.0, &bt, 2.0, Policy::Rd244);
    check_dispatch_invariants(sc, cat, &bt, sol, Policy::Rd244);
    REQUIRE(sol.months.size() == 2);
    CHECK(sol.months[0].month == 1);
    CHECK(sol.months[1].month == 7);
    double imp = 0, exp_c = 0;
    for (const MonthLedger& m : sol.months) {
        imp += m.import_kwh;
        exp_c += m.export_comp_kwh;
    }
    CHECK(imp == doctest::Approx(sol.grid_import_kwh).epsilon(1e-9));
    CHECK(exp_c == doctest::Approx(sol.export_comp_kwh).epsilon(1e-9));
}

TEST_CASE("dispatch is deterministic") {
    TechnologyCatalog cat = small_catalog();
    BatteryTechnology bt = fast_battery();
    std::array<double, 24> load{}, cf{};
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::array<PriceDecomposition, 24> prices;
    for (int t = 0; t < 24; ++t) {
        load[t] = 0.2 + u(rng);
        if (t >= 8 && t < 18) cf[t] = 0.1 + 0.4 * u(rng);
        prices[t] = mk_price(0.03 + 0.05 * u(rng), 0.044, 0.0, 0.0, 0.17);
    }
    BuildingScenario sc = one_day_scenario(load, cf, prices);

    DispatchSolution a = dispatch_fixed(sc, cat, 1.5, &bt, 1.0, Policy::Rd244);
    DispatchSolution b = dispatch_fixed(sc, cat, 1.5, &bt, 1.0, Policy::Rd244);
    REQUIRE(a.status == lp::Status::Optimal);
    CHECK(a.objective == b.objective);
    CHECK(a.import_cost == b.import_cost);
    for (int t = 0; t < 24; ++t) {
        CHECK(a.days[0].hours[t].grid_import == b.days[0].hours[t].grid_import);
        CHECK(a.days[0].hours[t].soc == b.days[0].hours[t].soc);
    }
}
