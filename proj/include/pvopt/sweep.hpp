#pragma once

#include <string>
#include <vector>

#include "pvopt/indicators.hpp"
#include "pvopt/sizing.hpp"

namespace pvopt::sweep {

// inclusive numeric axis lo, lo+step, ... up to hi (half a step of slack
// absorbs accumulation error, so 600:1450:50 really ends on 1450)
struct Axis {
    double lo = 0;
    double hi = 0;
    double step = 1;
    std::vector<double> values() const;
};

enum class ConfigClass { None, PvOnly, PvPlusBattery };
const char* to_string(ConfigClass c);
ConfigClass classify_configuration(const OptimizationResult& r);

struct CostSweepPoint {
    double pv_cost_per_kw = 0;  // whole generator: panels + BOS + inverter
    double battery_cost_per_kwh = 0;
    bool failed = false;
    std::string error;
    OptimizationResult result;
    IndicatorSet indicators;
};

struct CostSweepGrid {
    std::vector<double> pv_costs;
    std::vector<double> battery_costs;
    double households = 1;               // for the per-household CSV columns
    std::vector<CostSweepPoint> points;  // battery-major: [bi * n_pv + pi]

    const CostSweepPoint& at(size_t pv_index, size_t battery_index) const;
};

// One full optimization per (PV system cost, battery cost) grid point. The
// PV axis value is split in equal thirds over panels, BOS/labour and the
// inverter, matching the reference 1080 = 360 + 360 + 360; the battery axis
// rewrites the cost of the named catalog chemistry and the search is
// restricted to that chemistry versus battery-free. Points are solved by a
// pool of `workers` threads and gathered by grid index, so the result is
// identical for any worker count. A point that throws is recorded as failed
// and the sweep continues.
CostSweepGrid cost_sweep(const BuildingScenario& scenario, const TechnologyCatalog& catalog,
                         Policy policy, const EconomicParams& econ, const Axis& pv_cost_per_kw,
                         const Axis& battery_cost_per_kwh, const std::string& battery_name = "nca",
                         int workers = 1, const SizingOptions& options = {});

// grid CSV: pv_cost,battery_cost,config_class,pv_kw_per_hh,battery_kwh_per_hh,
// asr,ssr,scr,eir (failed points carry the error instead of numbers)
std::string cost_sweep_to_csv(const CostSweepGrid& grid);

// One sweep step solved twice: directly at the swept parameter, and at the
// reference parameter with every capital cost replaced by its equal-annuity
// equivalent. The two solutions agree up to solver tolerance; the deltas
// make the comparison auditable.
struct EquivalencePoint {
    double parameter = 0;  // discount rate, or generator lifetime in years
    OptimizationResult direct;
    OptimizationResult transformed;
    double capacity_delta_rel = 0;  // max over pv/battery/inverter capacities
    double eac_delta_rel = 0;
};

// Discount-rate sweep against econ.discount_rate as the reference rate.
// Every capital cost (panels, BOS, inverter, battery, controller fixed and
// per-kW parts) is transformed, so the objectives are identical term by term.
std::vector<EquivalencePoint> rate_sweep(const BuildingScenario& scenario,
                                         const TechnologyCatalog& catalog, Policy policy,
                                         const EconomicParams& econ,
                                         const std::vector<double>& rates,
                                         const SizingOptions& options = {});

// Generator-lifetime sweep: panels and BOS move to the swept lifetime, the
// transformed run brings their cost back to the catalog lifetime. Inverter,
// battery and controller lifetimes are untouched.
std::vector<EquivalencePoint> lifetime_sweep(const BuildingScenario& scenario,
                                             const TechnologyCatalog& catalog, Policy policy,
                                             const EconomicParams& econ,
                                             const std::vector<double>& lifetimes_yr,
                                             const SizingOptions& options = {});

// CSV: parameter,eac_direct,eac_transformed,pv_kw,battery_kwh,asr,
// capacity_delta_rel,eac_delta_rel
std::string equivalence_sweep_to_csv(const std::vector<EquivalencePoint>& points);

// Level-set segments of a scalar field sampled on a rectilinear grid,
// f[yi * xs.size() + xi], by marching squares with linear interpolation.
// Cell corners exactly at the level count as above it; ambiguous saddle
// cells are resolved by the cell-center average.
struct IsoSegment {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};
std::vector<IsoSegment> marching_squares(const std::vector<double>& xs,
                                         const std::vector<double>& ys,
                                         const std::vector<double>& f, double level);

// iso-line CSV: level,x0,y0,x1,y1
std::string iso_lines_to_csv(const std::vector<IsoSegment>& segments, double level);

}  // namespace pvopt::sweep
