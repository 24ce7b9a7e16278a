#include "pvopt/ingestion.hpp"

#include <cctype>

#include "pvopt/csvio.hpp"

namespace pvopt::ingestion {

namespace {

TechnologyCatalog make_catalog() {
    TechnologyCatalog c;
    // rooftop PV at 1080 EUR/kW installed: a third for the modules, a third
    // for the inverter, a third for structure, wiring and labour
    c.pv = {360.0, 360.0, 20.0, 10.0, 0.0};
    c.inverter = {360.0, 0.93, 10.0, 1.2, 0.0};
    c.controller = {50.0, 60.0, 0.95, 10.0, 0.0};
    auto cell = [](const char* name, double cost, double cycles) {
        BatteryTechnology b;
        b.name = name;
        b.cost_per_kwh = cost;
        b.ageing_cycles_per_yr = cycles;
        b.lifetime_yr = 8.0;
        b.soc_min_fraction = 0.05;
        b.charge_rate_max_per_hr = 0.5;
        b.discharge_rate_max_per_hr = 0.5;
        b.eff_charge = 0.95;
        b.eff_discharge = 0.95;
        b.om_cost_per_kwh_yr = 0.0;
        return b;
    };
    c.batteries = {
        cell("lfp", 408.0, 562.0),  // lithium iron phosphate
        cell("lto", 668.0, 844.0),  // lithium titanate
        cell("lmo", 335.0, 131.0),  // lithium manganese oxide
        cell("nca", 384.0, 394.0),  // lithium nickel cobalt aluminium
        cell("nmc", 392.0, 225.0),  // lithium nickel manganese cobalt
    };
    return c;
}

// floor area, households and consumption from the building and consumer
// statistics; roof areas back-solved from published installation studies;
// capacity factors read off the reanalysis resource map, so approximate
std::vector<RegionRecord> make_regions() {
    return {
        {"National", 112.9, 2.7, 3487.0, 163.8, 0.172},
        {"Galicia", 98.8, 2.1, 4208.0, 139.6, 0.150},
        {"Asturias", 193.6, 3.3, 5637.0, 280.4, 0.145},
        {"Cantabria", 197.0, 3.2, 3922.0, 285.2, 0.142},
        {"Basque Country", 162.6, 6.8, 5080.0, 232.2, 0.140},
        {"Navarra", 128.0, 2.7, 5332.0, 182.5, 0.156},
        {"Rioja", 151.0, 3.2, 3279.0, 213.6, 0.161},
        {"Aragon", 132.6, 2.7, 4551.0, 189.9, 0.171},
        {"Catalonia", 120.2, 3.4, 4074.0, 173.9, 0.168},
        {"Castilla y Leon", 92.6, 2.0, 3246.0, 133.5, 0.166},
        {"Madrid", 167.8, 5.3, 2933.0, 242.0, 0.177},
        {"Extremadura", 128.1, 1.6, 2938.0, 187.6, 0.178},
        {"Castilla la Mancha", 116.2, 1.6, 3080.0, 164.9, 0.176},
        {"Valencia", 131.2, 3.1, 2756.0, 188.7, 0.175},
        {"Balearic Islands", 114.3, 2.4, 3203.0, 166.3, 0.167},
        {"Andalusia", 102.8, 2.2, 3030.0, 147.1, 0.182},
        {"Murcia", 153.7, 2.1, 3425.0, 224.7, 0.181},
        {"Canary Islands", 119.5, 2.4, 2889.0, 167.7, 0.198},
    };
}

std::string fold_name(const std::string& s) {
    std::string out;
    for (char ch : s) {
        unsigned char u = static_cast<unsigned char>(ch);
        if (u == ' ' || u == '-' || u == '_') continue;
        out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out;
}

}  // namespace

const TechnologyCatalog& builtin_catalog() {
    static const TechnologyCatalog c = make_catalog();
    return c;
}

const std::vector<RegionRecord>& builtin_regions() {
    static const std::vector<RegionRecord> r = make_regions();
    return r;
}

const RegionRecord* find_region(const std::vector<RegionRecord>& regions,
                                const std::string& name) {
    const std::string key = fold_name(name);
    if (key.empty()) return nullptr;
    for (const RegionRecord& r : regions)
        if (fold_name(r.name) == key) return &r;
    return nullptr;
}

std::string builtin_fingerprint() {
    return "catalog:" + hex16(fnv1a64(catalog_to_csv(builtin_catalog()))) +
           " regions:" + hex16(fnv1a64(regions_to_csv(builtin_regions())));
}

}  // namespace pvopt::ingestion
