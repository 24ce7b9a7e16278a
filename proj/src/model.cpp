#include "pvopt/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pvopt {

const char* to_string(Policy p) {
    switch (p) {
        case Policy::NoRemuneration: return "no-remuneration";
        case Policy::Rd244: return "rd244";
        case Policy::Rd244WithLosses: return "rd244-with-losses";
    }
    return "?";
}

const char* to_string(DayKind k) {
    return k == DayKind::Weekday ? "weekday" : "weekend";
}

bool policy_from_string(const std::string& s, Policy& out) {
    if (s == "p1" || s == "no-remuneration") { out = Policy::NoRemuneration; return true; }
    if (s == "p2" || s == "rd244") { out = Policy::Rd244; return true; }
    if (s == "p3" || s == "rd244-with-losses") { out = Policy::Rd244WithLosses; return true; }
    return false;
}

bool day_kind_from_string(const std::string& s, DayKind& out) {
    if (s == "weekday" || s == "wd") { out = DayKind::Weekday; return true; }
    if (s == "weekend" || s == "we") { out = DayKind::Weekend; return true; }
    return false;
}

double BuildingScenario::annual_load_kwh() const {
    double sum = 0;
    for (const auto& d : days) {
        double day = 0;
        for (double v : d.load_kwh) day += v;
        sum += d.weight_days * day;
    }
    return sum;
}

double BuildingScenario::total_weight_days() const {
    double w = 0;
    for (const auto& d : days) w += d.weight_days;
    return w;
}

double BuildingScenario::annual_capacity_factor() const {
    double w = total_weight_days();
    if (w <= 0) return 0;
    double sum = 0;
    for (const auto& d : days) {
        double day = 0;
        for (double v : d.solar_cf) day += v;
        sum += d.weight_days * day;
    }
    return sum / (w * 24.0);
}

static bool bad(double v) { return !std::isfinite(v); }

std::vector<std::string> validate_scenario(const BuildingScenario& s) {
    std::vector<std::string> out;
    auto fail = [&out](const std::string& msg) { out.push_back(msg); };

    if (s.households <= 0 || bad(s.households))
        fail("households must be > 0");
    if (s.annual_consumption_kwh_per_household < 0 || bad(s.annual_consumption_kwh_per_household))
        fail("annual_consumption_kwh_per_household must be >= 0");
    if (s.roof_area_m2 < 0 || bad(s.roof_area_m2))
        fail("roof_area_m2 must be >= 0");
    if (s.days.empty())
        fail("scenario has no representative days");

    for (size_t i = 0; i < s.days.size(); ++i) {
        const auto& d = s.days[i];
        std::string where = "day " + std::to_string(i) + " (month " + std::to_string(d.month) +
                            ", " + to_string(d.kind) + ")";
        if (d.month < 1 || d.month > 12)
            fail(where + ": month out of range 1..12");
        if (d.weight_days < 0 || bad(d.weight_days))
            fail(where + ": weight_days must be >= 0");
        for (int t = 0; t < 24; ++t) {
            if (d.load_kwh[t] < 0 || bad(d.load_kwh[t]))
                fail(where + " hour " + std::to_string(t) + ": load_kwh must be >= 0 and finite");
            if (d.solar_cf[t] < 0 || d.solar_cf[t] > 1 || bad(d.solar_cf[t]))
                fail(where + " hour " + std::to_string(t) + ": solar_cf must be in [0,1]");
            const auto& p = d.prices[t];
            if (p.pmh < 0 || p.sah < 0 || p.oc < 0 || p.teu < 0 || p.perd_fraction < 0 ||
                bad(p.pmh) || bad(p.sah) || bad(p.oc) || bad(p.teu) || bad(p.perd_fraction))
                fail(where + " hour " + std::to_string(t) + ": price components must be >= 0 and finite");
        }
    }

    double w = s.total_weight_days();
    if (std::fabs(w - 365.0) > 1e-6)
        fail("representative-day weights sum to " + std::to_string(w) + ", expected 365");

    double cf = s.annual_capacity_factor();
    if (!(cf > 0) || cf > 0.25)
        fail("annual capacity factor " + std::to_string(cf) + " outside (0, 0.25]");

    double expected = s.households * s.annual_consumption_kwh_per_household;
    double actual = s.annual_load_kwh();
    if (expected > 0 && std::fabs(actual - expected) > 1e-3 * expected)
        fail("annual load " + std::to_string(actual) + " kWh deviates more than 0.1% from households*consumption = " +
             std::to_string(expected));

    return out;
}

static void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void PvTechnology::check() const {
    require(std::isfinite(panel_cost_per_kw) && panel_cost_per_kw >= 0, "pv.panel_cost_per_kw must be >= 0");
    require(std::isfinite(bos_labour_cost_per_kw) && bos_labour_cost_per_kw >= 0, "pv.bos_labour_cost_per_kw must be >= 0");
    require(std::isfinite(lifetime_yr) && lifetime_yr > 0, "pv.lifetime_yr must be > 0");
    require(std::isfinite(roof_occupation_m2_per_kw) && roof_occupation_m2_per_kw > 0, "pv.roof_occupation_m2_per_kw must be > 0");
    require(std::isfinite(om_cost_per_kw_yr) && om_cost_per_kw_yr >= 0, "pv.om_cost_per_kw_yr must be >= 0");
}

void InverterTechnology::check() const {
    require(std::isfinite(cost_per_kw) && cost_per_kw >= 0, "inverter.cost_per_kw must be >= 0");
    require(std::isfinite(efficiency) && efficiency > 0 && efficiency <= 1, "inverter.efficiency must be in (0,1]");
    require(std::isfinite(lifetime_yr) && lifetime_yr > 0, "inverter.lifetime_yr must be > 0");
    require(std::isfinite(dc_ac_ratio) && dc_ac_ratio > 0, "inverter.dc_ac_ratio must be > 0");
    require(std::isfinite(om_cost_per_kw_yr) && om_cost_per_kw_yr >= 0, "inverter.om_cost_per_kw_yr must be >= 0");
}

void BatteryTechnology::check() const {
    require(!name.empty(), "battery.name must not be empty");
    require(std::isfinite(cost_per_kwh) && cost_per_kwh >= 0, "battery.cost_per_kwh must be >= 0");
    require(std::isfinite(ageing_cycles_per_yr) && ageing_cycles_per_yr > 0, "battery.ageing_cycles_per_yr must be > 0");
    require(std::isfinite(lifetime_yr) && lifetime_yr > 0, "battery.lifetime_yr must be > 0");
    require(std::isfinite(soc_min_fraction) && soc_min_fraction >= 0 && soc_min_fraction < 1,
            "battery.soc_min_fraction must be in [0,1)");
    require(std::isfinite(charge_rate_max_per_hr) && charge_rate_max_per_hr > 0, "battery.charge_rate_max_per_hr must be > 0");
    require(std::isfinite(discharge_rate_max_per_hr) && discharge_rate_max_per_hr > 0, "battery.discharge_rate_max_per_hr must be > 0");
    require(std::isfinite(eff_charge) && eff_charge > 0 && eff_charge <= 1, "battery.eff_charge must be in (0,1]");
    require(std::isfinite(eff_discharge) && eff_discharge > 0 && eff_discharge <= 1, "battery.eff_discharge must be in (0,1]");
    require(std::isfinite(om_cost_per_kwh_yr) && om_cost_per_kwh_yr >= 0, "battery.om_cost_per_kwh_yr must be >= 0");
}

void ControllerTechnology::check() const {
    require(std::isfinite(fixed_cost) && fixed_cost >= 0, "controller.fixed_cost must be >= 0");
    require(std::isfinite(cost_per_kw) && cost_per_kw >= 0, "controller.cost_per_kw must be >= 0");
    require(std::isfinite(efficiency) && efficiency > 0 && efficiency <= 1, "controller.efficiency must be in (0,1]");
    require(std::isfinite(lifetime_yr) && lifetime_yr > 0, "controller.lifetime_yr must be > 0");
    require(std::isfinite(om_cost_per_kw_yr) && om_cost_per_kw_yr >= 0, "controller.om_cost_per_kw_yr must be >= 0");
}

void TechnologyCatalog::check() const {
    pv.check();
    inverter.check();
    controller.check();
    for (const auto& b : batteries) b.check();
    for (size_t i = 0; i < batteries.size(); ++i)
        for (size_t j = i + 1; j < batteries.size(); ++j)
            require(batteries[i].name != batteries[j].name, "battery names must be unique");
}

const BatteryTechnology* TechnologyCatalog::find_battery(const std::string& name) const {
    for (const auto& b : batteries)
        if (b.name == name) return &b;
    return nullptr;
}

}  // namespace pvopt
