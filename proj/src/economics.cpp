#include "pvopt/economics.hpp"

#include <cmath>
#include <stdexcept>

namespace pvopt::economics {

double annuity_factor(double rate, double lifetime_yr) {
    if (!std::isfinite(rate) || !std::isfinite(lifetime_yr))
        throw std::invalid_argument("annuity_factor: arguments must be finite");
    if (lifetime_yr <= 0)
        throw std::invalid_argument("annuity_factor: lifetime must be > 0");
    if (rate <= -1)
        throw std::invalid_argument("annuity_factor: rate must be > -1");
    if (rate == 0) return 1.0 / lifetime_yr;
    // expm1/log1p keep tiny rates from cancelling in 1 - (1+r)^-L
    return rate / -std::expm1(-lifetime_yr * std::log1p(rate));
}

double equivalent_capital_cost_rate(double capital_cost, double r0, double r,
                                    double lifetime_yr) {
    // Same annual payment: cc_eq * af(r0, L) == cc * af(r, L).
    return capital_cost * annuity_factor(r, lifetime_yr) / annuity_factor(r0, lifetime_yr);
}

double equivalent_capital_cost_lifetime(double capital_cost, double rate,
                                        double l0, double l) {
    // Same annual payment: cc_eq * af(r, l0) == cc * af(r, l).
    return capital_cost * annuity_factor(rate, l) / annuity_factor(rate, l0);
}

EacBreakdown assemble_eac(const std::vector<CapitalItem>& items,
                          double annual_import_cost, double annual_export_revenue,
                          double discount_rate) {
    EacBreakdown out;
    for (const auto& it : items) {
        double af = annuity_factor(discount_rate, it.lifetime_yr);
        double annuity = (it.quantity * it.unit_cost + it.fixed_cost) * af;
        double om = it.quantity * it.om_cost_per_unit_yr;
        out.capital_annuities += annuity;
        out.om += om;
        out.per_item.emplace_back(it.label, annuity + om);
    }
    out.import_cost = annual_import_cost;
    out.export_revenue = annual_export_revenue;
    out.total = out.capital_annuities + out.om + annual_import_cost - annual_export_revenue;
    return out;
}

double annual_saving_ratio(double eac_without_pv, double eac_with_pv) {
    if (!(eac_without_pv > 0))
        throw std::domain_error("annual_saving_ratio: reference cost must be > 0");
    return 100.0 * (eac_without_pv - eac_with_pv) / eac_without_pv;
}

}  // namespace pvopt::economics
