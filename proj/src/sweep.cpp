#include "pvopt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pvopt/csvio.hpp"
#include "pvopt/economics.hpp"

namespace pvopt::sweep {

std::vector<double> Axis::values() const {
    if (!(step > 0) || !std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step))
        throw std::invalid_argument("axis: step must be > 0 and bounds finite");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        double v = lo + k * step;
        if (v > hi + step / 2) break;
        out.push_back(v);
    }
    return out;
}

const char* to_string(ConfigClass c) {
    switch (c) {
        case ConfigClass::None: return "none";
        case ConfigClass::PvOnly: return "pv-only";
        case ConfigClass::PvPlusBattery: return "pv-plus-battery";
    }
    return "?";
}

ConfigClass classify_configuration(const OptimizationResult& r) {
    if (r.battery_kwh > 1e-9) return ConfigClass::PvPlusBattery;
    if (r.pv_kw > 1e-9) return ConfigClass::PvOnly;
    return ConfigClass::None;
}

const CostSweepPoint& CostSweepGrid::at(size_t pv_index, size_t battery_index) const {
    if (pv_index >= pv_costs.size() || battery_index >= battery_costs.size())
        throw std::out_of_range("cost sweep grid index");
    return points.at(battery_index * pv_costs.size() + pv_index);
}

CostSweepGrid cost_sweep(const BuildingScenario& scenario, const TechnologyCatalog& catalog,
                         Policy policy, const EconomicParams& econ, const Axis& pv_cost_per_kw,
                         const Axis& battery_cost_per_kwh, const std::string& battery_name,
                         int workers, const SizingOptions& options) {
    CostSweepGrid grid;
    grid.pv_costs = pv_cost_per_kw.values();
    grid.battery_costs = battery_cost_per_kwh.values();
    grid.households = scenario.households;
    if (grid.pv_costs.size() < 2 || grid.battery_costs.size() < 2)
        throw std::invalid_argument("cost sweep needs at least 2 values per axis");
    for (double v : grid.pv_costs)
        if (!(v > 0)) throw std::invalid_argument("pv cost axis must be positive");
    for (double v : grid.battery_costs)
        if (!(v >= 0)) throw std::invalid_argument("battery cost axis must be >= 0");
    size_t cell = 0;
    for (; cell < catalog.batteries.size(); ++cell)
        if (catalog.batteries[cell].name == battery_name) break;
    if (cell == catalog.batteries.size())
        throw std::invalid_argument("cost sweep: unknown battery '" + battery_name + "'");

    const size_t n_pv = grid.pv_costs.size();
    const size_t n = n_pv * grid.battery_costs.size();
    grid.points.resize(n);

    std::atomic<size_t> cursor{0};
    auto run = [&] {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            CostSweepPoint& pt = grid.points[i];
            pt.pv_cost_per_kw = grid.pv_costs[i % n_pv];
            pt.battery_cost_per_kwh = grid.battery_costs[i / n_pv];
            TechnologyCatalog c = catalog;
            c.pv.panel_cost_per_kw = pt.pv_cost_per_kw / 3.0;
            c.pv.bos_labour_cost_per_kw = pt.pv_cost_per_kw / 3.0;
            c.inverter.cost_per_kw = pt.pv_cost_per_kw / 3.0;
            c.batteries[cell].cost_per_kwh = pt.battery_cost_per_kwh;
            SizingOptions o = options;
            o.battery_name = battery_name;
            try {
                pt.result = optimize_installation(scenario, c, policy, econ, o);
                if (pt.result.status != lp::Status::Optimal) {
                    pt.failed = true;
                    pt.error = std::string("solver status ") + lp::to_string(pt.result.status);
                } else {
                    pt.indicators = compute_indicators(pt.result.dispatch, scenario, c.pv);
                }
            } catch (const std::exception& e) {
                pt.failed = true;
                pt.error = e.what();
            }
        }
    };

    int pool = std::clamp<int>(workers, 1, static_cast<int>(n));
    if (pool == 1) {
        run();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (int t = 0; t < pool; ++t) threads.emplace_back(run);
        for (auto& t : threads) t.join();
    }
    return grid;
}

std::string cost_sweep_to_csv(const CostSweepGrid& grid) {
    std::ostringstream out;
    out << "pv_cost,battery_cost,config_class,pv_kw_per_hh,battery_kwh_per_hh,"
           "asr,ssr,scr,eir\n";
    const double hh = grid.households > 0 ? grid.households : 1.0;
    for (size_t bi = 0; bi < grid.battery_costs.size(); ++bi) {
        for (size_t pi = 0; pi < grid.pv_costs.size(); ++pi) {
            const CostSweepPoint& pt = grid.at(pi, bi);
            out << format_double(pt.pv_cost_per_kw) << ','
                << format_double(pt.battery_cost_per_kwh) << ',';
            if (pt.failed) {
                std::string reason = pt.error;
                std::replace(reason.begin(), reason.end(), ',', ';');
                std::replace(reason.begin(), reason.end(), '\n', ' ');
                out << "failed:" << reason << ",,,,,,\n";
                continue;
            }
            out << to_string(classify_configuration(pt.result)) << ','
                << format_double(pt.result.pv_kw / hh) << ','
                << format_double(pt.result.battery_kwh / hh) << ','
                << format_double(pt.result.asr) << ',' << format_double(pt.indicators.ssr)
                << ',' << format_double(pt.indicators.scr) << ','
                << format_double(pt.indicators.eir) << "\n";
        }
    }
    return out.str();
}

namespace {

double rel_delta(double a, double b) {
    double scale = std::max({std::fabs(a), std::fabs(b), 1e-9});
    return std::fabs(a - b) / scale;
}

EquivalencePoint compare_runs(double parameter, OptimizationResult direct,
                              OptimizationResult transformed) {
    EquivalencePoint p;
    p.parameter = parameter;
    p.capacity_delta_rel = std::max({rel_delta(direct.pv_kw, transformed.pv_kw),
                                     rel_delta(direct.battery_kwh, transformed.battery_kwh),
                                     rel_delta(direct.inverter_kw, transformed.inverter_kw)});
    p.eac_delta_rel = rel_delta(direct.eac, transformed.eac);
    p.direct = std::move(direct);
    p.transformed = std::move(transformed);
    return p;
}

TechnologyCatalog rate_equivalent_catalog(const TechnologyCatalog& catalog, double r0, double r) {
    using economics::equivalent_capital_cost_rate;
    TechnologyCatalog c = catalog;
    c.pv.panel_cost_per_kw =
        equivalent_capital_cost_rate(c.pv.panel_cost_per_kw, r0, r, c.pv.lifetime_yr);
    c.pv.bos_labour_cost_per_kw =
        equivalent_capital_cost_rate(c.pv.bos_labour_cost_per_kw, r0, r, c.pv.lifetime_yr);
    c.inverter.cost_per_kw =
        equivalent_capital_cost_rate(c.inverter.cost_per_kw, r0, r, c.inverter.lifetime_yr);
    c.controller.fixed_cost =
        equivalent_capital_cost_rate(c.controller.fixed_cost, r0, r, c.controller.lifetime_yr);
    c.controller.cost_per_kw =
        equivalent_capital_cost_rate(c.controller.cost_per_kw, r0, r, c.controller.lifetime_yr);
    for (auto& b : c.batteries)
        b.cost_per_kwh = equivalent_capital_cost_rate(b.cost_per_kwh, r0, r, b.lifetime_yr);
    return c;
}

}  // namespace

std::vector<EquivalencePoint> rate_sweep(const BuildingScenario& scenario,
                                         const TechnologyCatalog& catalog, Policy policy,
                                         const EconomicParams& econ,
                                         const std::vector<double>& rates,
                                         const SizingOptions& options) {
    std::vector<EquivalencePoint> out;
    out.reserve(rates.size());
    for (double r : rates) {
        EconomicParams at_rate = econ;
        at_rate.discount_rate = r;
        OptimizationResult direct = optimize_installation(scenario, catalog, policy, at_rate, options);
        TechnologyCatalog equivalent = rate_equivalent_catalog(catalog, econ.discount_rate, r);
        OptimizationResult transformed =
            optimize_installation(scenario, equivalent, policy, econ, options);
        out.push_back(compare_runs(r, std::move(direct), std::move(transformed)));
    }
    return out;
}

std::vector<EquivalencePoint> lifetime_sweep(const BuildingScenario& scenario,
                                             const TechnologyCatalog& catalog, Policy policy,
                                             const EconomicParams& econ,
                                             const std::vector<double>& lifetimes_yr,
                                             const SizingOptions& options) {
    using economics::equivalent_capital_cost_lifetime;
    std::vector<EquivalencePoint> out;
    out.reserve(lifetimes_yr.size());
    const double l0 = catalog.pv.lifetime_yr;
    for (double l : lifetimes_yr) {
        TechnologyCatalog direct_cat = catalog;
        direct_cat.pv.lifetime_yr = l;
        OptimizationResult direct =
            optimize_installation(scenario, direct_cat, policy, econ, options);

        TechnologyCatalog equivalent = catalog;  // lifetime stays l0
        equivalent.pv.panel_cost_per_kw = equivalent_capital_cost_lifetime(
            catalog.pv.panel_cost_per_kw, econ.discount_rate, l0, l);
        equivalent.pv.bos_labour_cost_per_kw = equivalent_capital_cost_lifetime(
            catalog.pv.bos_labour_cost_per_kw, econ.discount_rate, l0, l);
        OptimizationResult transformed =
            optimize_installation(scenario, equivalent, policy, econ, options);
        out.push_back(compare_runs(l, std::move(direct), std::move(transformed)));
    }
    return out;
}

std::string equivalence_sweep_to_csv(const std::vector<EquivalencePoint>& points) {
    std::ostringstream out;
    out << "parameter,eac_direct,eac_transformed,pv_kw,battery_kwh,asr,"
           "capacity_delta_rel,eac_delta_rel\n";
    for (const EquivalencePoint& p : points) {
        out << format_double(p.parameter) << ',' << format_double(p.direct.eac) << ','
            << format_double(p.transformed.eac) << ',' << format_double(p.direct.pv_kw) << ','
            << format_double(p.direct.battery_kwh) << ',' << format_double(p.direct.asr) << ','
            << format_double(p.capacity_delta_rel) << ',' << format_double(p.eac_delta_rel)
            << "\n";
    }
    return out.str();
}

namespace {

struct EdgePoint {
    double x, y;
};

EdgePoint lerp(double xa, double ya, double va, double xb, double yb, double vb, double level) {
    double t = va == vb ? 0.5 : (level - va) / (vb - va);
    t = std::clamp(t, 0.0, 1.0);
    return {xa + t * (xb - xa), ya + t * (yb - ya)};
}

}  // namespace

std::vector<IsoSegment> marching_squares(const std::vector<double>& xs,
                                         const std::vector<double>& ys,
                                         const std::vector<double>& f, double level) {
    const size_t nx = xs.size(), ny = ys.size();
    if (nx < 2 || ny < 2) throw std::invalid_argument("marching squares needs a 2x2 grid");
    if (f.size() != nx * ny)
        throw std::invalid_argument("marching squares: field size does not match the grid");

    std::vector<IsoSegment> out;
    for (size_t yi = 0; yi + 1 < ny; ++yi) {
        for (size_t xi = 0; xi + 1 < nx; ++xi) {
            const double x0 = xs[xi], x1 = xs[xi + 1], y0 = ys[yi], y1 = ys[yi + 1];
            const double a = f[yi * nx + xi];            // bottom left
            const double b = f[yi * nx + xi + 1];        // bottom right
            const double c = f[(yi + 1) * nx + xi + 1];  // top right
            const double d = f[(yi + 1) * nx + xi];      // top left
            int mask = (a >= level) | ((b >= level) << 1) | ((c >= level) << 2) |
                       ((d >= level) << 3);
            if (mask == 0 || mask == 15) continue;

            auto bottom = [&] { return lerp(x0, y0, a, x1, y0, b, level); };
            auto right = [&] { return lerp(x1, y0, b, x1, y1, c, level); };
            auto top = [&] { return lerp(x0, y1, d, x1, y1, c, level); };
            auto left = [&] { return lerp(x0, y0, a, x0, y1, d, level); };
            auto emit = [&](EdgePoint p, EdgePoint q) {
                out.push_back({p.x, p.y, q.x, q.y});
            };

            switch (mask) {
                case 1: case 14: emit(left(), bottom()); break;
                case 2: case 13: emit(bottom(), right()); break;
                case 3: case 12: emit(left(), right()); break;
                case 4: case 11: emit(top(), right()); break;
                case 6: case 9: emit(bottom(), top()); break;
                case 7: case 8: emit(left(), top()); break;
                case 5:   // bottom-left and top-right above the level
                case 10:  // bottom-right and top-left above the level
                {
                    bool center_above = (a + b + c + d) / 4.0 >= level;
                    bool join_bl_tr = (mask == 5) == center_above;
                    if (join_bl_tr) {
                        emit(left(), top());
                        emit(bottom(), right());
                    } else {
                        emit(left(), bottom());
                        emit(top(), right());
                    }
                    break;
                }
                default: break;
            }
        }
    }
    return out;
}

std::string iso_lines_to_csv(const std::vector<IsoSegment>& segments, double level) {
    std::ostringstream out;
    out << "level,x0,y0,x1,y1\n";
    for (const IsoSegment& s : segments)
        out << format_double(level) << ',' << format_double(s.x0) << ',' << format_double(s.y0)
            << ',' << format_double(s.x1) << ',' << format_double(s.y1) << "\n";
    return out.str();
}

}  // namespace pvopt::sweep
