#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvopt/model.hpp"

namespace pvopt::ingestion {

// Compiled-in reference datasets: the component catalog and the regional
// building statistics. Regional roof areas and annual capacity factors are
// derived or approximate companions to the published floor-area, household
// and consumption statistics; treat them as defaults, not measurements.
const TechnologyCatalog& builtin_catalog();
const std::vector<RegionRecord>& builtin_regions();

// Case-insensitive lookup, also accepting '-' or '_' for spaces
// ("basque-country"). Returns nullptr when no region matches.
const RegionRecord* find_region(const std::vector<RegionRecord>& regions,
                                const std::string& name);

// Fingerprints of the builtin datasets in their canonical CSV serialization,
// e.g. "catalog:0123456789abcdef regions:..". Reported by the CLI so result
// files can be traced to the data they were computed from.
std::string builtin_fingerprint();

// catalog CSV: component,field,value triplets; batteries as "battery:<name>"
TechnologyCatalog load_catalog_csv(const std::string& path);
void save_catalog_csv(const TechnologyCatalog& catalog, const std::string& path);
std::string catalog_to_csv(const TechnologyCatalog& catalog);

// regions CSV: one row per region
std::vector<RegionRecord> load_regions_csv(const std::string& path);
void save_regions_csv(const std::vector<RegionRecord>& regions, const std::string& path);
std::string regions_to_csv(const std::vector<RegionRecord>& regions);

// scenario: a key=value meta file plus a long-format days CSV with one row
// per (representative day, hour)
BuildingScenario load_scenario(const std::string& meta_path, const std::string& days_path);
void save_scenario(const BuildingScenario& scenario, const std::string& meta_path,
                   const std::string& days_path);

// key=value file with '#' comments and blank lines; later keys override
std::map<std::string, std::string> load_config(const std::string& path);

// Deterministic synthetic year for one region: 24 representative days
// (weekday and weekend per month) with calendar-faithful weights, a
// double-peak household load, a clear-sky generation shape and a PVPC-like
// price series blended over the flat, two-period and three-period access
// tariffs. The same seed always yields the same scenario; any seed keeps
// the calibrated aggregates exact: annual load equals households times
// consumption, the annual capacity factor matches the region, and the
// weighted price means hit the 2018 references (market price 57.2, energy
// production cost 79.3, access toll 44.0 EUR/MWh).
BuildingScenario synthesize_profiles(const RegionRecord& region, std::uint64_t seed);

}  // namespace pvopt::ingestion
