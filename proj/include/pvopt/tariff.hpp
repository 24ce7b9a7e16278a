#pragma once

#include <vector>

#include "pvopt/model.hpp"

namespace pvopt::tariff {

// Cost of one imported kWh: energy charges plus access toll.
double import_price(const PriceDecomposition& p);

// Value of one exported (surplus) kWh under the given policy, before the
// monthly compensation cap is applied.
double export_price(const PriceDecomposition& p, Policy policy);

// export_price / import_price. Throws std::domain_error when the import
// price is zero.
double compensation_ratio(const PriceDecomposition& p, Policy policy);

// Contract shares of the three domestic access tariffs used to blend an
// average-building price series (flat, two-period, three-period).
struct TariffShares {
    double flat = 0.7474;
    double two_period = 0.2519;
    double three_period = 0.0007;
    void check() const;  // shares >= 0 and summing to 1 within 1e-9
};

// Hour-wise convex combination of three price series, component by
// component. All series must have equal length.
std::vector<PriceDecomposition> blend_average_building(
    const std::vector<PriceDecomposition>& flat,
    const std::vector<PriceDecomposition>& two_period,
    const std::vector<PriceDecomposition>& three_period,
    const TariffShares& shares = {});

}  // namespace pvopt::tariff
