#include "pvopt/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "pvopt/tariff.hpp"

namespace pvopt {

namespace {

constexpr double kTieEps = 1e-10;  // lexicographic tie-break perturbation

struct HourVars {
    int grid = -1;
    int pv2l = -1, pv2b = -1, expc = -1, expu = -1, curt = -1;
    int b2l = -1, soc = -1;
    int g2b = -1, b2g_c = -1, b2g_u = -1;
};

}  // namespace

DispatchSolution optimal_dispatch(const BuildingScenario& scenario,
                                  const InverterTechnology& inverter,
                                  const ControllerTechnology& controller,
                                  const DispatchOptions& opt) {
    {
        std::vector<std::string> errs = validate_scenario(scenario);
        if (!errs.empty())
            throw std::invalid_argument("optimal_dispatch: invalid scenario: " + errs.front());
    }
    inverter.check();
    controller.check();
    if (opt.battery) opt.battery->check();
    if (opt.pv_kw_min < 0 || opt.pv_kw_max < opt.pv_kw_min)
        throw std::invalid_argument("optimal_dispatch: bad pv capacity bounds");
    const bool batt = opt.battery != nullptr;
    if (batt && (opt.battery_kwh_min < 0 || opt.battery_kwh_max < opt.battery_kwh_min))
        throw std::invalid_argument("optimal_dispatch: bad battery capacity bounds");
    if ((opt.allow_grid_to_battery || opt.allow_battery_to_grid) && !batt)
        throw std::invalid_argument("optimal_dispatch: battery flows enabled without a battery");

    const int D = static_cast<int>(scenario.days.size());
    const double eta_inv = inverter.efficiency;
    const double cf_cap = 1.0 / inverter.dc_ac_ratio;
    const double eta_c = batt ? opt.battery->eff_charge * controller.efficiency : 0;
    const double eta_d_inv = batt ? 1.0 / (opt.battery->eff_discharge * controller.efficiency) : 0;

    lp::Problem p;
    const int vpv = p.add_variable(opt.capacity_cost.pv_cost_per_kw_yr, opt.pv_kw_min,
                                   opt.pv_kw_max);
    const int vbatt = batt ? p.add_variable(opt.capacity_cost.battery_cost_per_kwh_yr,
                                            opt.battery_kwh_min, opt.battery_kwh_max)
                           : -1;
    const int vinv = opt.free_inverter_sizing
                         ? p.add_variable(opt.capacity_cost.inverter_cost_per_kw_yr, 0.0,
                                          opt.inverter_kw_max)
                         : -1;

    const bool remunerated = opt.policy != Policy::NoRemuneration;
    std::vector<std::array<HourVars, 24>> vars(D);
    std::vector<std::array<double, 2>> price(D * 24);  // import, export per day-hour

    for (int d = 0; d < D; ++d) {
        const RepresentativeDay& day = scenario.days[d];
        const double w = day.weight_days;
        for (int t = 0; t < 24; ++t) {
            const double p_im = tariff::import_price(day.prices[t]);
            const double p_ex = tariff::export_price(day.prices[t], opt.policy);
            price[d * 24 + t] = {p_im, p_ex};
            const bool sunny = day.solar_cf[t] > 0;
            HourVars& h = vars[d][t];
            h.grid = p.add_variable(w * p_im, 0.0, lp::kInf);
            if (sunny) {
                h.pv2l = p.add_variable(0.0, 0.0, lp::kInf);
                if (batt) h.pv2b = p.add_variable(kTieEps, 0.0, lp::kInf);
                // worthless exports are pinned to zero: the curtailment
                // tie-break under no-remuneration, by construction
                const double exp_hi = remunerated ? lp::kInf : 0.0;
                h.expc = p.add_variable(-w * p_ex + 2 * kTieEps, 0.0, exp_hi);
                h.expu = p.add_variable(2 * kTieEps, 0.0, exp_hi);
                h.curt = p.add_variable(3 * kTieEps, 0.0, lp::kInf);
            }
            if (batt) {
                h.b2l = p.add_variable(0.0, 0.0, lp::kInf);
                h.soc = p.add_variable(0.0, 0.0, lp::kInf);
                if (opt.allow_grid_to_battery)
                    h.g2b = p.add_variable(w * p_im + kTieEps, 0.0, lp::kInf);
                if (opt.allow_battery_to_grid) {
                    const double b2g_hi = remunerated ? lp::kInf : 0.0;
                    h.b2g_c = p.add_variable(-w * p_ex + 2 * kTieEps, 0.0, b2g_hi);
                    h.b2g_u = p.add_variable(2 * kTieEps, 0.0, b2g_hi);
                }
            }
        }
    }

    for (int d = 0; d < D; ++d) {
        const RepresentativeDay& day = scenario.days[d];
        for (int t = 0; t < 24; ++t) {
            const HourVars& h = vars[d][t];
            const double cf = day.solar_cf[t];

            int bal = p.add_row(lp::Sense::EQ, day.load_kwh[t]);
            p.add_entry(bal, h.grid, 1.0);
            if (h.pv2l >= 0) p.add_entry(bal, h.pv2l, 1.0);
            if (h.b2l >= 0) p.add_entry(bal, h.b2l, 1.0);

            if (cf > 0) {
                const double gencoef =
                    eta_inv * (opt.free_inverter_sizing ? cf : std::min(cf, cf_cap));
                int split = p.add_row(lp::Sense::EQ, 0.0);
                p.add_entry(split, h.pv2l, 1.0);
                if (h.pv2b >= 0) p.add_entry(split, h.pv2b, 1.0);
                p.add_entry(split, h.expc, 1.0);
                p.add_entry(split, h.expu, 1.0);
                p.add_entry(split, h.curt, 1.0);
                p.add_entry(split, vpv, -gencoef);
                if (opt.free_inverter_sizing) {
                    int clip = p.add_row(lp::Sense::LE, 0.0);
                    p.add_entry(clip, h.pv2l, 1.0);
                    if (h.pv2b >= 0) p.add_entry(clip, h.pv2b, 1.0);
                    p.add_entry(clip, h.expc, 1.0);
                    p.add_entry(clip, h.expu, 1.0);
                    p.add_entry(clip, vinv, -eta_inv);
                }
            }

            if (batt) {
                const BatteryTechnology& bt = *opt.battery;
                const HourVars& hn = vars[d][(t + 1) % 24];
                // soc columns hold the charge above the reserve floor, so the
                // lower bound is plain zero and the window is one row
                int rec = p.add_row(lp::Sense::EQ, 0.0);
                p.add_entry(rec, hn.soc, 1.0);
                p.add_entry(rec, h.soc, -1.0);
                if (h.pv2b >= 0) p.add_entry(rec, h.pv2b, -eta_c);
                if (h.g2b >= 0) p.add_entry(rec, h.g2b, -eta_c);
                p.add_entry(rec, h.b2l, eta_d_inv);
                if (h.b2g_c >= 0) p.add_entry(rec, h.b2g_c, eta_d_inv);
                if (h.b2g_u >= 0) p.add_entry(rec, h.b2g_u, eta_d_inv);

                int cap = p.add_row(lp::Sense::LE, 0.0);
                p.add_entry(cap, h.soc, 1.0);
                p.add_entry(cap, vbatt, -(1.0 - bt.soc_min_fraction));

                if (h.pv2b >= 0 || h.g2b >= 0) {
                    int cr = p.add_row(lp::Sense::LE, 0.0);
                    if (h.pv2b >= 0) p.add_entry(cr, h.pv2b, eta_c);
                    if (h.g2b >= 0) p.add_entry(cr, h.g2b, eta_c);
                    p.add_entry(cr, vbatt, -bt.charge_rate_max_per_hr);
                }
                int dr = p.add_row(lp::Sense::LE, 0.0);
                p.add_entry(dr, h.b2l, eta_d_inv);
                if (h.b2g_c >= 0) p.add_entry(dr, h.b2g_c, eta_d_inv);
                if (h.b2g_u >= 0) p.add_entry(dr, h.b2g_u, eta_d_inv);
                p.add_entry(dr, vbatt, -bt.discharge_rate_max_per_hr);
            }
        }
    }

    if (batt) {
        int age = p.add_row(lp::Sense::LE, 0.0);
        for (int d = 0; d < D; ++d) {
            const double w = scenario.days[d].weight_days;
            for (int t = 0; t < 24; ++t) {
                const HourVars& h = vars[d][t];
                p.add_entry(age, h.b2l, w * eta_d_inv);
                if (h.b2g_c >= 0) p.add_entry(age, h.b2g_c, w * eta_d_inv);
                if (h.b2g_u >= 0) p.add_entry(age, h.b2g_u, w * eta_d_inv);
            }
        }
        p.add_entry(age, vbatt, -opt.battery->ageing_cycles_per_yr);
    }

    if (remunerated) {
        std::map<int, int> month_row;
        for (int d = 0; d < D; ++d) {
            int m = scenario.days[d].month;
            if (!month_row.count(m)) month_row[m] = p.add_row(lp::Sense::LE, 0.0);
        }
        for (int d = 0; d < D; ++d) {
            const double w = scenario.days[d].weight_days;
            int row = month_row[scenario.days[d].month];
            for (int t = 0; t < 24; ++t) {
                const HourVars& h = vars[d][t];
                const auto [p_im, p_ex] = price[d * 24 + t];
                if (h.expc >= 0 && p_ex > 0) p.add_entry(row, h.expc, w * p_ex);
                if (h.b2g_c >= 0 && p_ex > 0) p.add_entry(row, h.b2g_c, w * p_ex);
                p.add_entry(row, h.grid, -w * p_im);
            }
        }
    }

    lp::Result r = lp::solve(p, opt.lp);

    DispatchSolution sol;
    sol.status = r.status;
    sol.lp_iterations = r.iterations;
    sol.lp_duality_gap = r.duality_gap;
    sol.objective = r.objective;
    if (batt) sol.battery_name = opt.battery->name;
    if (r.status != lp::Status::Optimal) return sol;

    sol.pv_kw = r.x[vpv];
    sol.battery_kwh = batt ? r.x[vbatt] : 0.0;
    sol.inverter_kw = opt.free_inverter_sizing ? r.x[vinv] : sol.pv_kw / inverter.dc_ac_ratio;

    const double soc_floor = batt ? opt.battery->soc_min_fraction * sol.battery_kwh : 0.0;
    std::map<int, MonthLedger> months;
    sol.days.resize(D);
    for (int d = 0; d < D; ++d) {
        const RepresentativeDay& day = scenario.days[d];
        const double w = day.weight_days;
        DayDispatch& dd = sol.days[d];
        dd.month = day.month;
        dd.kind = day.kind;
        dd.weight_days = w;
        MonthLedger& ml = months[day.month];
        ml.month = day.month;
        for (int t = 0; t < 24; ++t) {
            const HourVars& hv = vars[d][t];
            HourFlows& f = dd.hours[t];
            const auto [p_im, p_ex] = price[d * 24 + t];
            f.load = day.load_kwh[t];
            f.import_price = p_im;
            f.export_price = p_ex;
            f.grid_import = r.x[hv.grid];
            const double cf = day.solar_cf[t];
            if (cf > 0) {
                const double usable_cf = opt.free_inverter_sizing ? cf : std::min(cf, cf_cap);
                f.pv_ac_available = eta_inv * usable_cf * sol.pv_kw;
                f.pv_clipped = eta_inv * (cf - usable_cf) * sol.pv_kw;
                f.pv_to_load = r.x[hv.pv2l];
                if (hv.pv2b >= 0) f.pv_to_battery = r.x[hv.pv2b];
                f.export_comp = r.x[hv.expc];
                f.export_uncomp = r.x[hv.expu];
                f.curtailed = r.x[hv.curt];
            }
            if (batt) {
                f.battery_to_load = r.x[hv.b2l];
                f.soc = r.x[hv.soc] + soc_floor;
                if (hv.g2b >= 0) f.grid_to_battery = r.x[hv.g2b];
                if (hv.b2g_c >= 0) f.battery_to_grid = r.x[hv.b2g_c] + r.x[hv.b2g_u];
                if (hv.b2g_c >= 0) {
                    f.export_comp += r.x[hv.b2g_c];
                    f.export_uncomp += r.x[hv.b2g_u];
                }
            }

            sol.load_kwh += w * f.load;
            sol.pv_ac_kwh += w * f.pv_ac_available;
            sol.pv_clipped_kwh += w * f.pv_clipped;
            sol.pv_to_load_kwh += w * f.pv_to_load;
            sol.pv_to_battery_kwh += w * f.pv_to_battery;
            sol.battery_to_load_kwh += w * f.battery_to_load;
            sol.grid_import_kwh += w * f.grid_import;
            sol.export_comp_kwh += w * f.export_comp;
            sol.export_uncomp_kwh += w * f.export_uncomp;
            sol.curtailed_kwh += w * f.curtailed;
            sol.grid_to_battery_kwh += w * f.grid_to_battery;
            sol.battery_to_grid_kwh += w * f.battery_to_grid;

            const double imp_cost = w * p_im * f.grid_import;
            const double exp_val = w * p_ex * f.export_comp;
            sol.import_cost += imp_cost;
            sol.export_revenue += exp_val;
            ml.import_cost += imp_cost;
            ml.export_value += exp_val;
            ml.import_kwh += w * f.grid_import;
            ml.export_comp_kwh += w * f.export_comp;
            ml.export_uncomp_kwh += w * f.export_uncomp;
        }
    }
    sol.months.reserve(months.size());
    for (auto& [m, ledger] : months) sol.months.push_back(ledger);
    return sol;
}

DispatchSolution dispatch_fixed(const BuildingScenario& scenario, const TechnologyCatalog& catalog,
                                double pv_kw, const BatteryTechnology* battery, double battery_kwh,
                                Policy policy, const lp::Options& lp_options) {
    if (pv_kw < 0 || battery_kwh < 0)
        throw std::invalid_argument("dispatch_fixed: negative capacity");
    if (battery_kwh > 0 && !battery)
        throw std::invalid_argument("dispatch_fixed: battery capacity without a technology");
    DispatchOptions opt;
    opt.policy = policy;
    opt.pv_kw_min = opt.pv_kw_max = pv_kw;
    if (battery_kwh > 0) {
        opt.battery = battery;
        opt.battery_kwh_min = opt.battery_kwh_max = battery_kwh;
    }
    opt.lp = lp_options;
    return optimal_dispatch(scenario, catalog.inverter, catalog.controller, opt);
}

DispatchTotals dispatch_totals(const DispatchSolution& sol) {
    DispatchTotals t;
    for (const DayDispatch& d : sol.days) {
        for (const HourFlows& f : d.hours) {
            t.import_cost += d.weight_days * f.import_price * f.grid_import;
            t.export_revenue += d.weight_days * f.export_price * f.export_comp;
            t.energy_imported += d.weight_days * f.grid_import;
            t.energy_exported += d.weight_days * (f.export_comp + f.export_uncomp);
        }
    }
    return t;
}

}  // namespace pvopt
