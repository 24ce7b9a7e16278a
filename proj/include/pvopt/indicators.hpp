#pragma once

#include "pvopt/dispatch.hpp"
#include "pvopt/model.hpp"

namespace pvopt {

// Share of annual load served by PV directly or through the battery, percent.
// 100 - ssr is the imported share of the load.
double ssr(const DispatchSolution& sol);

// Share of delivered PV consumed on-site, percent. The numerator credits the
// battery on its output side (after round-trip losses); the denominator is PV
// energy delivered to any sink (load, battery, grid). Curtailed AC energy and
// DC energy clipped by the inverter rating never enter either side, so a
// system that exports nothing scores 100 when battery losses are zero or no
// battery is installed.
double scr(const DispatchSolution& sol);

// Exported over imported annual energy, percent. Counts compensated and
// uncompensated exports alike.
double eir(const DispatchSolution& sol);

// Diagnostic companion to eir: compensated export value over import cost,
// percent. The monthly settlement cap keeps this at or below 100.
double export_import_value_ratio(const DispatchSolution& sol);

// Share of the roof taken by the panels, percent.
double rooftop_fraction(double pv_kw, double roof_occupation_m2_per_kw, double roof_area_m2);

struct IndicatorSet {
    double ssr = 0;
    double scr = 0;
    double eir = 0;
    double export_import_value_ratio = 0;
    double rooftop_fraction = 0;
    double pv_kw_per_household = 0;
};

IndicatorSet compute_indicators(const DispatchSolution& sol, const BuildingScenario& scenario,
                                const PvTechnology& pv);

}  // namespace pvopt
