#include "pvopt/tariff.hpp"

#include <cmath>
#include <stdexcept>

namespace pvopt::tariff {

double import_price(const PriceDecomposition& p) {
    return p.tcu() + p.teu;
}

double export_price(const PriceDecomposition& p, Policy policy) {
    switch (policy) {
        case Policy::NoRemuneration: return 0.0;
        case Policy::Rd244: return p.pmh;
        case Policy::Rd244WithLosses: return p.pmh + p.perd();
    }
    return 0.0;
}

double compensation_ratio(const PriceDecomposition& p, Policy policy) {
    double imp = import_price(p);
    if (!(imp > 0)) throw std::domain_error("compensation_ratio: import price must be > 0");
    return export_price(p, policy) / imp;
}

void TariffShares::check() const {
    if (!(flat >= 0) || !(two_period >= 0) || !(three_period >= 0))
        throw std::invalid_argument("tariff shares must be >= 0");
    if (std::fabs(flat + two_period + three_period - 1.0) > 1e-9)
        throw std::invalid_argument("tariff shares must sum to 1");
}

std::vector<PriceDecomposition> blend_average_building(
    const std::vector<PriceDecomposition>& flat,
    const std::vector<PriceDecomposition>& two_period,
    const std::vector<PriceDecomposition>& three_period,
    const TariffShares& shares) {
    shares.check();
    if (flat.size() != two_period.size() || flat.size() != three_period.size())
        throw std::invalid_argument("blend_average_building: series lengths differ");
    std::vector<PriceDecomposition> out(flat.size());
    for (size_t i = 0; i < flat.size(); ++i) {
        auto mix = [&](double a, double b, double c) {
            return shares.flat * a + shares.two_period * b + shares.three_period * c;
        };
        out[i].pmh = mix(flat[i].pmh, two_period[i].pmh, three_period[i].pmh);
        out[i].sah = mix(flat[i].sah, two_period[i].sah, three_period[i].sah);
        out[i].oc = mix(flat[i].oc, two_period[i].oc, three_period[i].oc);
        out[i].perd_fraction = mix(flat[i].perd_fraction, two_period[i].perd_fraction,
                                   three_period[i].perd_fraction);
        out[i].teu = mix(flat[i].teu, two_period[i].teu, three_period[i].teu);
    }
    return out;
}

}  // namespace pvopt::tariff
