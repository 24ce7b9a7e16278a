#pragma once

#include <string>
#include <vector>

#include "pvopt/model.hpp"

namespace pvopt::economics {

// Annuity factor r / (1 - (1+r)^-L): converts a capital cost into the
// constant annual payment over lifetime L at discount rate r.
// Exact limit 1/L at r = 0. Requires r > -1, L > 0, both finite.
double annuity_factor(double rate, double lifetime_yr);

// Capital cost at rate r0 that produces the same annual payment as
// capital_cost does at rate r (component lifetime unchanged).
double equivalent_capital_cost_rate(double capital_cost, double r0, double r,
                                    double lifetime_yr);

// Capital cost at lifetime l0 that produces the same annual payment as
// capital_cost does with lifetime l (discount rate unchanged).
double equivalent_capital_cost_lifetime(double capital_cost, double rate,
                                        double l0, double l);

// One annuitized capital line of an installation.
struct CapitalItem {
    std::string label;
    double quantity = 0;        // kW, kWh, or 1 for lump sums
    double unit_cost = 0;       // EUR per unit
    double fixed_cost = 0;      // EUR, annuitized together with the units
    double lifetime_yr = 1;
    double om_cost_per_unit_yr = 0;
};

struct EacBreakdown {
    double total = 0;            // EUR/yr
    double capital_annuities = 0;
    double om = 0;
    double import_cost = 0;
    double export_revenue = 0;
    std::vector<std::pair<std::string, double>> per_item;  // label -> EUR/yr
};

// Equivalent annual cost: sum of annuitized capital + O&M + energy import
// cost - export revenue.
EacBreakdown assemble_eac(const std::vector<CapitalItem>& items,
                          double annual_import_cost, double annual_export_revenue,
                          double discount_rate);

// Annual-saving ratio in percent relative to buying everything from the
// grid. Throws std::domain_error when eac_without_pv <= 0.
double annual_saving_ratio(double eac_without_pv, double eac_with_pv);

}  // namespace pvopt::economics
