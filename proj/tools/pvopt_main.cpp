// pvopt: sizes and dispatches rooftop PV plus storage for multi-household
// buildings under the Spanish self-consumption compensation rules, then
// reports costs and coverage indicators as CSV or JSON lines.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pvopt/csvio.hpp"
#include "pvopt/dispatch.hpp"
#include "pvopt/economics.hpp"
#include "pvopt/indicators.hpp"
#include "pvopt/ingestion.hpp"
#include "pvopt/model.hpp"
#include "pvopt/sizing.hpp"
#include "pvopt/sweep.hpp"

namespace {

using Row = nlohmann::ordered_json;
using namespace pvopt;

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 success, 2 bad input or data, 3 solver failure
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Cli {
    std::string cmd;

    // data selection
    std::string catalog_path;  // "builtin" or a catalog CSV path
    std::string regions_path;  // "builtin" or a regions CSV path
    std::string region;
    bool all_regions = false;
    std::string scenario_meta;
    std::string scenario_days;
    std::uint64_t seed = 1;
    double synthetic_cf = 0;  // 0 keeps the region's own value

    // economics and search
    std::string policy_str = "rd244";
    double discount_rate = 0.02;
    std::string battery_name;
    bool no_battery = false;
    bool grid_charging = false;
    bool battery_export = false;
    bool free_inverter = false;
    double pv_cap_kw = 0;  // 0 means no extra cap
    int lp_max_iters = 0;  // 0 keeps the solver default

    // output
    std::string out;
    std::string format = "csv";

    // sweep
    std::string pv_cost_axis = "600:1450:50";
    std::string battery_cost_axis = "80:530:50";
    std::string sweep_battery = "nca";
    int workers = 1;
    double iso_level = 0;
    bool iso_level_set = false;
    std::string iso_field = "battery_kwh_per_hh";
    std::string iso_out;

    // equivalence sweeps
    std::string rates_axis = "0:0.05:0.01";
    std::string lifetimes_axis = "15:35:5";

    // dispatch-dump
    int month = 1;
    std::string day_str = "weekday";
    double fixed_pv_kw = 0;
    bool fixed_pv_set = false;
    double fixed_battery_kwh = 0;
};

std::string resolve_path(const std::string& p) {
    if (p.empty() || p.front() == '/') return p;
    const char* dir = std::getenv("PVOPT_DATA_DIR");
    if (dir == nullptr || *dir == '\0') return p;
    return std::string(dir) + "/" + p;
}

bool is_builtin_token(const std::string& s) { return s.empty() || s == "builtin" || s == "reference"; }

Policy parse_policy(const std::string& s) {
    Policy p;
    if (!policy_from_string(s, p)) throw InputError("unknown policy '" + s + "' (use p1, p2, p3, no-remuneration, rd244 or rd244-with-losses)");
    return p;
}

sweep::Axis parse_axis(const std::string& s, const std::string& flag) {
    sweep::Axis axis;
    double* parts[3] = {&axis.lo, &axis.hi, &axis.step};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t next = s.find(':', pos);
        bool last = i == 2;
        if (last != (next == std::string::npos))
            throw InputError(flag + ": expected lo:hi:step, got '" + s + "'");
        std::string tok = s.substr(pos, last ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            *parts[i] = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InputError(flag + ": bad number '" + tok + "' in '" + s + "'");
        }
        pos = next + 1;
    }
    return axis;
}

TechnologyCatalog load_catalog(const Cli& cli) {
    if (is_builtin_token(cli.catalog_path)) return ingestion::builtin_catalog();
    return ingestion::load_catalog_csv(resolve_path(cli.catalog_path));
}

std::vector<RegionRecord> load_regions(const Cli& cli) {
    if (is_builtin_token(cli.regions_path)) return ingestion::builtin_regions();
    return ingestion::load_regions_csv(resolve_path(cli.regions_path));
}

BuildingScenario scenario_for(const RegionRecord& record, const Cli& cli) {
    RegionRecord r = record;
    if (cli.synthetic_cf > 0) r.solar_annual_cf = cli.synthetic_cf;
    return ingestion::synthesize_profiles(r, cli.seed);
}

void require_valid(const BuildingScenario& s, const std::string& label) {
    std::vector<std::string> problems = validate_scenario(s);
    if (problems.empty()) return;
    std::string msg = "scenario " + label + " is invalid:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw InputError(msg);
}

// one scenario per selected region, or the single file-backed scenario
std::vector<BuildingScenario> make_scenarios(const Cli& cli, bool allow_all) {
    std::vector<BuildingScenario> out;
    if (!cli.scenario_meta.empty() || !cli.scenario_days.empty()) {
        if (cli.scenario_meta.empty() || cli.scenario_days.empty())
            throw InputError("--scenario-meta and --scenario-days must be given together");
        BuildingScenario s = ingestion::load_scenario(resolve_path(cli.scenario_meta),
                                                      resolve_path(cli.scenario_days));
        require_valid(s, "'" + cli.scenario_meta + "'");
        out.push_back(std::move(s));
        return out;
    }
    std::vector<RegionRecord> regions = load_regions(cli);
    if (cli.all_regions) {
        if (!allow_all) throw InputError("--all-regions is only supported by 'optimize'");
        for (const RegionRecord& r : regions) out.push_back(scenario_for(r, cli));
        return out;
    }
    if (cli.region.empty())
        throw InputError("select a scenario: --region NAME, --all-regions, or --scenario-meta/--scenario-days");
    const RegionRecord* r = ingestion::find_region(regions, cli.region);
    if (r == nullptr) throw InputError("unknown region '" + cli.region + "' (check the regions CSV or the builtin list)");
    out.push_back(scenario_for(*r, cli));
    return out;
}

SizingOptions sizing_options(const Cli& cli) {
    SizingOptions o;
    o.battery_name = cli.battery_name;
    o.force_no_battery = cli.no_battery;
    o.allow_grid_to_battery = cli.grid_charging;
    o.allow_battery_to_grid = cli.battery_export;
    o.free_inverter_sizing = cli.free_inverter;
    if (cli.pv_cap_kw > 0) o.pv_kw_cap = cli.pv_cap_kw;
    if (cli.lp_max_iters > 0) o.lp.max_iterations = cli.lp_max_iters;
    return o;
}

EconomicParams economics_params(const Cli& cli) {
    EconomicParams e;
    e.discount_rate = cli.discount_rate;
    return e;
}

std::string cell_text(const Row& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

std::string render_rows(const std::vector<Row>& rows, const std::string& format) {
    std::string out;
    if (format == "json-lines") {
        for (const Row& r : rows) {
            out += r.dump();
            out += '\n';
        }
        return out;
    }
    if (rows.empty()) return out;
    bool first = true;
    for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
        if (!first) out += ',';
        out += it.key();
        first = false;
    }
    out += '\n';
    for (const Row& r : rows) {
        first = true;
        for (auto it = r.begin(); it != r.end(); ++it) {
            if (!first) out += ',';
            out += cell_text(it.value());
            first = false;
        }
        out += '\n';
    }
    return out;
}

void emit(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::fputs(payload.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open output file '" + path + "'");
    f << payload;
    if (!f.good()) throw InputError("failed writing output file '" + path + "'");
}

Row result_row(const std::string& region_label, const OptimizationResult& res,
               const BuildingScenario& scenario, const TechnologyCatalog& catalog) {
    IndicatorSet ind = compute_indicators(res.dispatch, scenario, catalog.pv);
    Row r;
    r["region"] = region_label;
    r["policy"] = to_string(res.policy);
    r["status"] = lp::to_string(res.status);
    r["battery"] = res.battery_name.empty() ? "none" : res.battery_name;
    r["pv_kw"] = res.pv_kw;
    r["battery_kwh"] = res.battery_kwh;
    r["inverter_kw"] = res.inverter_kw;
    r["pv_kw_rounded"] = res.pv_kw_rounded;
    r["battery_kwh_rounded"] = res.battery_kwh_rounded;
    r["eac_eur_yr"] = res.eac;
    r["eac_no_pv_eur_yr"] = res.eac_no_pv;
    r["asr_pct"] = res.asr;
    r["pv_kw_per_hh"] = ind.pv_kw_per_household;
    r["rooftop_pct"] = ind.rooftop_fraction;
    r["ssr_pct"] = ind.ssr;
    r["scr_pct"] = ind.scr;
    r["eir_pct"] = ind.eir;
    r["import_kwh_yr"] = res.dispatch.grid_import_kwh;
    r["export_kwh_yr"] = res.dispatch.export_comp_kwh + res.dispatch.export_uncomp_kwh;
    return r;
}

void require_optimal(const OptimizationResult& res, const std::string& label) {
    if (res.status != lp::Status::Optimal)
        throw SolveError("optimization for " + label + " ended with solver status '" +
                         std::string(lp::to_string(res.status)) + "'");
}

int run_optimize(const Cli& cli) {
    TechnologyCatalog catalog = load_catalog(cli);
    Policy policy = parse_policy(cli.policy_str);
    EconomicParams econ = economics_params(cli);
    SizingOptions options = sizing_options(cli);
    std::vector<Row> rows;
    for (const BuildingScenario& s : make_scenarios(cli, true)) {
        OptimizationResult res = optimize_installation(s, catalog, policy, econ, options);
        require_optimal(res, "region '" + s.region + "'");
        rows.push_back(result_row(s.region, res, s, catalog));
    }
    emit(cli.out, render_rows(rows, cli.format));
    return 0;
}

int run_compare_policies(const Cli& cli) {
    TechnologyCatalog catalog = load_catalog(cli);
    EconomicParams econ = economics_params(cli);
    SizingOptions options = sizing_options(cli);
    BuildingScenario s = make_scenarios(cli, false).front();
    std::array<OptimizationResult, 3> results = compare_policies(s, catalog, econ, options);
    std::vector<Row> rows;
    for (const OptimizationResult& res : results) {
        require_optimal(res, std::string("policy '") + to_string(res.policy) + "'");
        rows.push_back(result_row(s.region, res, s, catalog));
    }
    emit(cli.out, render_rows(rows, cli.format));
    return 0;
}

std::vector<Row> grid_rows(const sweep::CostSweepGrid& grid) {
    std::vector<Row> rows;
    for (std::size_t bi = 0; bi < grid.battery_costs.size(); ++bi) {
        for (std::size_t pi = 0; pi < grid.pv_costs.size(); ++pi) {
            const sweep::CostSweepPoint& pt = grid.at(pi, bi);
            Row r;
            r["pv_cost"] = pt.pv_cost_per_kw;
            r["battery_cost"] = pt.battery_cost_per_kwh;
            if (pt.failed) {
                r["config_class"] = "failed:" + pt.error;
                r["pv_kw_per_hh"] = nullptr;
                r["battery_kwh_per_hh"] = nullptr;
                r["asr"] = nullptr;
                r["ssr"] = nullptr;
                r["scr"] = nullptr;
                r["eir"] = nullptr;
            } else {
                r["config_class"] = sweep::to_string(sweep::classify_configuration(pt.result));
                r["pv_kw_per_hh"] = pt.result.pv_kw / grid.households;
                r["battery_kwh_per_hh"] = pt.result.battery_kwh / grid.households;
                r["asr"] = pt.result.asr;
                r["ssr"] = pt.indicators.ssr;
                r["scr"] = pt.indicators.scr;
                r["eir"] = pt.indicators.eir;
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

int run_sweep(const Cli& cli) {
    TechnologyCatalog catalog = load_catalog(cli);
    Policy policy = parse_policy(cli.policy_str);
    EconomicParams econ = economics_params(cli);
    SizingOptions options = sizing_options(cli);
    BuildingScenario s = make_scenarios(cli, false).front();
    sweep::Axis pv_axis = parse_axis(cli.pv_cost_axis, "--pv-cost-eur-per-kw");
    sweep::Axis battery_axis = parse_axis(cli.battery_cost_axis, "--battery-cost-eur-per-kwh");
    sweep::CostSweepGrid grid = sweep::cost_sweep(s, catalog, policy, econ, pv_axis, battery_axis,
                                                  cli.sweep_battery, cli.workers, options);
    if (cli.format == "json-lines")
        emit(cli.out, render_rows(grid_rows(grid), cli.format));
    else
        emit(cli.out, sweep::cost_sweep_to_csv(grid));

    if (cli.iso_level_set) {
        std::vector<double> field(grid.points.size(), 0.0);
        for (std::size_t bi = 0; bi < grid.battery_costs.size(); ++bi) {
            for (std::size_t pi = 0; pi < grid.pv_costs.size(); ++pi) {
                const sweep::CostSweepPoint& pt = grid.at(pi, bi);
                if (pt.failed) throw SolveError("iso-lines need every grid point solved; point pv_cost=" + format_double(pt.pv_cost_per_kw) + " battery_cost=" + format_double(pt.battery_cost_per_kwh) + " failed: " + pt.error);
                double v = 0;
                if (cli.iso_field == "battery_kwh_per_hh") v = pt.result.battery_kwh / grid.households;
                else if (cli.iso_field == "pv_kw_per_hh") v = pt.result.pv_kw / grid.households;
                else if (cli.iso_field == "asr") v = pt.result.asr;
                else throw InputError("unknown --iso-field '" + cli.iso_field + "'");
                field[bi * grid.pv_costs.size() + pi] = v;
            }
        }
        std::vector<sweep::IsoSegment> segments =
            sweep::marching_squares(grid.pv_costs, grid.battery_costs, field, cli.iso_level);
        emit(cli.iso_out, sweep::iso_lines_to_csv(segments, cli.iso_level));
    }

    std::size_t failed = 0;
    for (const sweep::CostSweepPoint& pt : grid.points) failed += pt.failed ? 1 : 0;
    if (failed == grid.points.size() && !grid.points.empty())
        throw SolveError("every sweep point failed; first error: " + grid.points.front().error);
    if (failed > 0)
        std::fprintf(stderr, "warning: %zu of %zu sweep points failed and are recorded as such\n",
                     failed, grid.points.size());
    return 0;
}

std::vector<Row> equivalence_rows(const std::vector<sweep::EquivalencePoint>& points) {
    std::vector<Row> rows;
    for (const sweep::EquivalencePoint& p : points) {
        Row r;
        r["parameter"] = p.parameter;
        r["eac_direct"] = p.direct.eac;
        r["eac_transformed"] = p.transformed.eac;
        r["pv_kw"] = p.direct.pv_kw;
        r["battery_kwh"] = p.direct.battery_kwh;
        r["asr"] = p.direct.asr;
        r["capacity_delta_rel"] = p.capacity_delta_rel;
        r["eac_delta_rel"] = p.eac_delta_rel;
        rows.push_back(std::move(r));
    }
    return rows;
}

int run_equivalence(const Cli& cli, bool rates) {
    TechnologyCatalog catalog = load_catalog(cli);
    Policy policy = parse_policy(cli.policy_str);
    EconomicParams econ = economics_params(cli);
    SizingOptions options = sizing_options(cli);
    BuildingScenario s = make_scenarios(cli, false).front();
    sweep::Axis axis = parse_axis(rates ? cli.rates_axis : cli.lifetimes_axis,
                                  rates ? "--rates" : "--lifetimes-yr");
    std::vector<sweep::EquivalencePoint> points =
        rates ? sweep::rate_sweep(s, catalog, policy, econ, axis.values(), options)
              : sweep::lifetime_sweep(s, catalog, policy, econ, axis.values(), options);
    for (const sweep::EquivalencePoint& p : points) {
        require_optimal(p.direct, "parameter " + format_double(p.parameter) + " (direct)");
        require_optimal(p.transformed, "parameter " + format_double(p.parameter) + " (transformed)");
    }
    if (cli.format == "json-lines")
        emit(cli.out, render_rows(equivalence_rows(points), cli.format));
    else
        emit(cli.out, sweep::equivalence_sweep_to_csv(points));
    return 0;
}

int run_dispatch_dump(const Cli& cli) {
    TechnologyCatalog catalog = load_catalog(cli);
    Policy policy = parse_policy(cli.policy_str);
    EconomicParams econ = economics_params(cli);
    SizingOptions options = sizing_options(cli);
    BuildingScenario s = make_scenarios(cli, false).front();
    DayKind kind;
    if (!day_kind_from_string(cli.day_str, kind))
        throw InputError("unknown day kind '" + cli.day_str + "' (use weekday/wd or weekend/we)");

    DispatchSolution sol;
    if (cli.fixed_pv_set) {
        const BatteryTechnology* battery = nullptr;
        if (cli.fixed_battery_kwh > 0) {
            std::string name = cli.battery_name.empty() ? "nca" : cli.battery_name;
            battery = catalog.find_battery(name);
            if (battery == nullptr) throw InputError("unknown battery '" + name + "'");
        }
        lp::Options lp_options;
        if (cli.lp_max_iters > 0) lp_options.max_iterations = cli.lp_max_iters;
        sol = dispatch_fixed(s, catalog, cli.fixed_pv_kw, battery, cli.fixed_battery_kwh, policy,
                             lp_options);
        if (sol.status != lp::Status::Optimal)
            throw SolveError(std::string("dispatch ended with solver status '") +
                             lp::to_string(sol.status) + "'");
    } else {
        OptimizationResult res = optimize_installation(s, catalog, policy, econ, options);
        require_optimal(res, "region '" + s.region + "'");
        sol = std::move(res.dispatch);
    }

    const DayDispatch* day = nullptr;
    for (const DayDispatch& d : sol.days)
        if (d.month == cli.month && d.kind == kind) day = &d;
    if (day == nullptr)
        throw InputError("scenario has no " + std::string(to_string(kind)) + " day in month " +
                         std::to_string(cli.month));

    std::vector<Row> rows;
    for (int h = 0; h < 24; ++h) {
        const HourFlows& f = day->hours[static_cast<std::size_t>(h)];
        Row r;
        r["hour"] = h;
        r["load_kwh"] = f.load;
        r["pv_available_kwh"] = f.pv_ac_available;
        r["pv_clipped_kwh"] = f.pv_clipped;
        r["pv_to_load_kwh"] = f.pv_to_load;
        r["pv_to_battery_kwh"] = f.pv_to_battery;
        r["battery_to_load_kwh"] = f.battery_to_load;
        r["grid_import_kwh"] = f.grid_import;
        r["grid_to_battery_kwh"] = f.grid_to_battery;
        r["battery_to_grid_kwh"] = f.battery_to_grid;
        r["export_comp_kwh"] = f.export_comp;
        r["export_uncomp_kwh"] = f.export_uncomp;
        r["curtailed_kwh"] = f.curtailed;
        r["soc_kwh"] = f.soc;
        r["import_price_eur_kwh"] = f.import_price;
        r["export_price_eur_kwh"] = f.export_price;
        rows.push_back(std::move(r));
    }
    emit(cli.out, render_rows(rows, cli.format));
    return 0;
}

void add_data_options(CLI::App* sub, Cli& cli, bool with_all_regions) {
    sub->add_option("--catalog", cli.catalog_path,
                    "technology catalog CSV ('builtin' keeps the compiled-in one)");
    sub->add_option("--regions", cli.regions_path,
                    "regions CSV ('builtin' keeps the compiled-in one)");
    CLI::Option* region = sub->add_option("--region", cli.region, "region name, case-insensitive");
    if (with_all_regions)
        sub->add_flag("--all-regions", cli.all_regions, "one result row per region")
            ->excludes(region);
    sub->add_option("--scenario-meta", cli.scenario_meta,
                    "scenario meta file (overrides --region; needs --scenario-days)");
    sub->add_option("--scenario-days", cli.scenario_days, "scenario days CSV");
    sub->add_option("--seed", cli.seed, "synthetic profile seed")->capture_default_str();
    sub->add_option("--synthetic-cf", cli.synthetic_cf,
                    "override the region's annual solar capacity factor")
        ->check(CLI::Range(1e-6, 0.25));
}

void add_solve_options(CLI::App* sub, Cli& cli, bool with_policy, bool with_battery_select = true) {
    if (with_policy)
        sub->add_option("--policy", cli.policy_str,
                        "remuneration policy: p1/no-remuneration, p2/rd244, p3/rd244-with-losses")
            ->capture_default_str();
    sub->add_option("--discount-rate", cli.discount_rate, "annual discount rate as a fraction")
        ->capture_default_str();
    if (with_battery_select)
        sub->add_option("--battery", cli.battery_name,
                        "restrict the battery search to one catalog chemistry");
    sub->add_flag("--no-battery", cli.no_battery, "search PV-only configurations");
    sub->add_flag("--grid-charging", cli.grid_charging, "allow charging the battery from the grid");
    sub->add_flag("--battery-export", cli.battery_export, "allow discharging the battery to the grid");
    sub->add_flag("--free-inverter", cli.free_inverter,
                  "size the inverter independently of the DC/AC ratio");
    sub->add_option("--pv-cap-kw", cli.pv_cap_kw, "extra PV capacity cap on top of the roof limit");
    sub->add_option("--lp-max-iters", cli.lp_max_iters, "simplex iteration budget")->group("");
}

void add_output_options(CLI::App* sub, Cli& cli) {
    sub->add_option("--out", cli.out, "output file (default: stdout)");
    sub->add_option("--format", cli.format, "output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json-lines"}));
}

}  // namespace

int main(int argc, char** argv) {
    Cli cli;
    CLI::App app{"sizes and dispatches rooftop PV plus storage for multi-household buildings"};
    app.set_version_flag("--version",
                         std::string("pvopt ") + kVersion + " " + ingestion::builtin_fingerprint());
    app.require_subcommand(1);

    CLI::App* optimize = app.add_subcommand(
        "optimize", "minimize the equivalent annual cost over PV and battery capacity");
    add_data_options(optimize, cli, true);
    add_solve_options(optimize, cli, true);
    add_output_options(optimize, cli);
    optimize->callback([&cli] { cli.cmd = "optimize"; });

    CLI::App* compare = app.add_subcommand(
        "compare-policies", "optimize the same building under all three remuneration policies");
    add_data_options(compare, cli, false);
    add_solve_options(compare, cli, false);
    add_output_options(compare, cli);
    compare->callback([&cli] { cli.cmd = "compare-policies"; });

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "optimize over a grid of PV system and battery capital costs");
    add_data_options(sweep_cmd, cli, false);
    add_solve_options(sweep_cmd, cli, true, false);
    add_output_options(sweep_cmd, cli);
    sweep_cmd->add_option("--pv-cost-eur-per-kw,--pv-cost,--pv", cli.pv_cost_axis,
                          "PV system cost axis, EUR/kW as lo:hi:step")
        ->capture_default_str();
    sweep_cmd->add_option("--battery-cost-eur-per-kwh,--battery-cost,--battery",
                          cli.battery_cost_axis, "battery cost axis, EUR/kWh as lo:hi:step")
        ->capture_default_str();
    sweep_cmd->add_option("--sweep-battery", cli.sweep_battery,
                          "catalog chemistry whose cost the battery axis rewrites")
        ->capture_default_str();
    sweep_cmd->add_option("--workers", cli.workers, "solver threads")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    sweep_cmd->add_option("--iso-level", cli.iso_level, "emit iso-lines of --iso-field at this level")
        ->trigger_on_parse()
        ->each([&cli](const std::string&) { cli.iso_level_set = true; });
    sweep_cmd->add_option("--iso-field", cli.iso_field,
                          "field for --iso-level: battery_kwh_per_hh, pv_kw_per_hh or asr")
        ->capture_default_str();
    sweep_cmd->add_option("--iso-out", cli.iso_out, "iso-line output file (default: stdout)");
    sweep_cmd->callback([&cli] { cli.cmd = "sweep"; });

    CLI::App* rate = app.add_subcommand(
        "rate-sweep", "check discount-rate equivalence against transformed capital costs");
    add_data_options(rate, cli, false);
    add_solve_options(rate, cli, true);
    add_output_options(rate, cli);
    rate->add_option("--rates", cli.rates_axis, "discount rate axis as lo:hi:step")
        ->capture_default_str();
    rate->callback([&cli] { cli.cmd = "rate-sweep"; });

    CLI::App* lifetime = app.add_subcommand(
        "lifetime-sweep", "check generator-lifetime equivalence against transformed capital costs");
    add_data_options(lifetime, cli, false);
    add_solve_options(lifetime, cli, true);
    add_output_options(lifetime, cli);
    lifetime->add_option("--lifetimes-yr", cli.lifetimes_axis, "generator lifetime axis as lo:hi:step")
        ->capture_default_str();
    lifetime->callback([&cli] { cli.cmd = "lifetime-sweep"; });

    CLI::App* dump = app.add_subcommand(
        "dispatch-dump", "print the 24 hourly energy flows of one representative day");
    add_data_options(dump, cli, false);
    add_solve_options(dump, cli, true);
    add_output_options(dump, cli);
    dump->add_option("--month", cli.month, "calendar month of the representative day")
        ->required()
        ->check(CLI::Range(1, 12));
    dump->add_option("--day", cli.day_str, "weekday/wd or weekend/we")->capture_default_str();
    dump->add_option("--pv-kw", cli.fixed_pv_kw, "skip sizing and dispatch this PV capacity")
        ->trigger_on_parse()
        ->each([&cli](const std::string&) { cli.fixed_pv_set = true; });
    dump->add_option("--battery-kwh", cli.fixed_battery_kwh,
                     "battery capacity for --pv-kw (chemistry from --battery, default nca)");
    dump->callback([&cli] { cli.cmd = "dispatch-dump"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (cli.cmd == "optimize") return run_optimize(cli);
        if (cli.cmd == "compare-policies") return run_compare_policies(cli);
        if (cli.cmd == "sweep") return run_sweep(cli);
        if (cli.cmd == "rate-sweep") return run_equivalence(cli, true);
        if (cli.cmd == "lifetime-sweep") return run_equivalence(cli, false);
        if (cli.cmd == "dispatch-dump") return run_dispatch_dump(cli);
        std::fprintf(stderr, "error: no command selected\n");
        return 2;
    } catch (const SolveError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
