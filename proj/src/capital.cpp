#include "capital.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace ccva {

namespace {
const boost::math::normal_distribution<double> n01;
}

double k_ccp(const std::vector<double>& eads, const CapitalParams& p) {
    double s = 0.0;
    for (double e : eads) s += e;
    return p.rw * p.cap_ratio * s;
}

double k_cm(double dfc, double equity, double dfc_all, double kccp, const CapitalParams& p) {
    double floor = p.cap_ratio * p.floor_rate * dfc;
    if (kccp == 0.0) return floor;
    double denom = equity + dfc_all;
    if (denom <= 0.0) throw std::invalid_argument("k_cm: equity plus default fund is zero");
    return std::max(kccp * dfc / denom, floor);
}

double irb_correlation(double dp) {
    double x = (1.0 - std::exp(-50.0 * dp)) / (1.0 - std::exp(-50.0));
    return 0.12 * x + 0.24 * (1.0 - x);
}

double irb_weight(double dp, double recovery, double maturity) {
    if (!(dp > 0.0 && dp < 1.0)) throw std::invalid_argument("irb_weight: dp must be in (0,1)");
    double corr = irb_correlation(dp);
    double b = std::pow(0.11852 - 0.05478 * std::log(dp), 2);
    double stressed = boost::math::cdf(n01, boost::math::quantile(n01, dp) / std::sqrt(1.0 - corr) +
                                                std::sqrt(corr / (1.0 - corr)) * boost::math::quantile(n01, 0.999));
    return (1.0 - recovery) * (stressed - dp) * (1.0 + (maturity - 2.5) * b) / (1.0 - 1.5 * b);
}

double k_ccr(const std::vector<CcrInput>& cps, const CapitalParams& p) {
    double rwa = 0.0;
    for (const auto& c : cps) {
        if (c.ead == 0.0) continue;
        rwa += 12.5 * irb_weight(c.dp, c.recovery, c.maturity) * p.ccr_multiplier * c.ead;
    }
    return p.cap_ratio * rwa;
}

double rating_weight(double dp, const CapitalParams& p) {
    double w = p.rating_weights.front();
    for (std::size_t k = 0; k < p.dp_thresholds.size(); ++k)
        if (dp >= p.dp_thresholds[k]) w = p.rating_weights[k];
    return w;
}

double cva_discount(double m) {
    if (m <= 0.0) return 1.0;
    return (1.0 - std::exp(-0.05 * m)) / (0.05 * m);
}

double k_cva(const std::vector<CcrInput>& cps, const CapitalParams& p) {
    double s = 0.0;
    for (const auto& c : cps) s += rating_weight(c.dp, p) * c.maturity * cva_discount(c.maturity) * c.ead;
    return 2.33 / 2.0 * s;
}

double k_cva_exact(const std::vector<CcrInput>& cps, const CapitalParams& p) {
    double lin = 0.0, sq = 0.0;
    for (const auto& c : cps) {
        double x = rating_weight(c.dp, p) * c.maturity * cva_discount(c.maturity) * c.ead;
        lin += x;
        sq += x * x;
    }
    return 2.33 * std::sqrt(0.25 * lin * lin + 0.75 * sq);
}

double kva_constant(double k0, double hurdle_k, double r, double horizon) {
    double rate = r + hurdle_k;
    return hurdle_k * k0 * (1.0 - std::exp(-rate * horizon)) / rate;
}

}  // namespace ccva
