#pragma once

#include <array>
#include <string>
#include <vector>

namespace pvopt {

// Remuneration rules for surplus PV energy pushed to the grid.
//   NoRemuneration      exports earn nothing (pre-compensation regime)
//   Rd244               simplified compensation: surplus paid at the hourly
//                       market price, compensated value capped month by month
//                       at the value of imported energy
//   Rd244WithLosses     as Rd244, but the surplus price also includes the
//                       loss component charged on imports
enum class Policy { NoRemuneration, Rd244, Rd244WithLosses };

enum class DayKind { Weekday, Weekend };

const char* to_string(Policy p);
const char* to_string(DayKind k);
bool policy_from_string(const std::string& s, Policy& out);
bool day_kind_from_string(const std::string& s, DayKind& out);

// Hourly retail price split into its regulated components, all EUR/kWh.
//   pmh  hourly wholesale market price
//   sah  system adjustment services
//   oc   other costs (capacity payments, operator fees)
//   perd loss charge, modeled as a fraction of cp = pmh + sah + oc
//   teu  access toll (energy term)
// Energy cost of an imported kWh is tcu + teu where tcu = cp + perd.
struct PriceDecomposition {
    double pmh = 0;
    double sah = 0;
    double oc = 0;
    double perd_fraction = 0;
    double teu = 0;

    double cp() const { return pmh + sah + oc; }
    double perd() const { return perd_fraction * cp(); }
    double tcu() const { return cp() + perd(); }
};

// One representative day: a weekday or weekend profile for one calendar
// month, weighted by how many real days it stands for.
struct RepresentativeDay {
    int month = 1;  // 1..12
    DayKind kind = DayKind::Weekday;
    double weight_days = 0;
    std::array<double, 24> load_kwh{};
    std::array<double, 24> solar_cf{};
    std::array<PriceDecomposition, 24> prices{};
};

// A multi-household building with a shared rooftop installation.
// Loads are building totals (all households behind one meter).
struct BuildingScenario {
    std::string region;
    double households = 1;
    double annual_consumption_kwh_per_household = 0;
    double roof_area_m2 = 0;
    bool synthetic = false;
    std::vector<RepresentativeDay> days;

    double annual_load_kwh() const;
    double annual_capacity_factor() const;
    double total_weight_days() const;
};

// Returns human-readable invariant violations; empty means valid.
// Callers decide whether a violation is fatal.
std::vector<std::string> validate_scenario(const BuildingScenario& s);

struct PvTechnology {
    double panel_cost_per_kw = 0;       // EUR/kW
    double bos_labour_cost_per_kw = 0;  // EUR/kW, balance of system minus inverter
    double lifetime_yr = 0;
    double roof_occupation_m2_per_kw = 0;
    double om_cost_per_kw_yr = 0;
    void check() const;  // throws std::invalid_argument naming the field
};

struct InverterTechnology {
    double cost_per_kw = 0;  // EUR per kW of AC rating
    double efficiency = 1;
    double lifetime_yr = 0;
    double dc_ac_ratio = 1;  // installed PV kW (DC) per inverter kW (AC)
    double om_cost_per_kw_yr = 0;
    void check() const;
};

struct BatteryTechnology {
    std::string name;
    double cost_per_kwh = 0;  // EUR/kWh of capacity
    double ageing_cycles_per_yr = 0;  // annual full-cycle-equivalent budget
    double lifetime_yr = 0;
    double soc_min_fraction = 0;          // lower state-of-charge bound, share of capacity
    double charge_rate_max_per_hr = 0;    // max SOC rise per hour, share of capacity
    double discharge_rate_max_per_hr = 0; // max SOC drop per hour, share of capacity
    double eff_charge = 1;
    double eff_discharge = 1;
    double om_cost_per_kwh_yr = 0;
    void check() const;
};

struct ControllerTechnology {
    double fixed_cost = 0;    // EUR, incurred only when a battery is installed
    double cost_per_kw = 0;   // EUR per kW of battery power rating
    double efficiency = 1;    // applies on both charge and discharge paths
    double lifetime_yr = 0;
    double om_cost_per_kw_yr = 0;
    void check() const;
};

struct TechnologyCatalog {
    PvTechnology pv;
    InverterTechnology inverter;
    ControllerTechnology controller;
    std::vector<BatteryTechnology> batteries;
    void check() const;
    const BatteryTechnology* find_battery(const std::string& name) const;
};

struct EconomicParams {
    double discount_rate = 0.02;
    std::string currency = "EUR";
};

// Regional statistics driving the synthetic scenarios. roof_area_m2 and
// solar_annual_cf are derived/approximate auxiliary values, see the
// regions CSV documentation.
struct RegionRecord {
    std::string name;
    double dwelling_floor_area_m2 = 0;
    double households_per_building = 0;
    double annual_consumption_kwh_per_household = 0;
    double roof_area_m2 = 0;
    double solar_annual_cf = 0;
};

}  // namespace pvopt
