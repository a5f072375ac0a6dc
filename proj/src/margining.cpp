#include "margining.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace ccva {

namespace {

double ncdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ninv(double p) {
    static const boost::math::normal_distribution<double> n01;
    return boost::math::quantile(n01, p);
}

void check_level(double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("quantile level must be in (0,1)");
}

}  // namespace

double im_shift_up(const SwapSpec& spec, double a, double dp) {
    check_level(a);
    return std::exp(spec.sigma * std::sqrt(dp) * ninv(a) + (spec.kappa - 0.5 * spec.sigma * spec.sigma) * dp);
}

double im_shift_down(const SwapSpec& spec, double a, double dp) {
    check_level(a);
    return std::exp(spec.sigma * std::sqrt(dp) * ninv(1.0 - a) +
                    (spec.kappa - 0.5 * spec.sigma * spec.sigma) * dp);
}

double initial_margin_proxy(const SwapPricer& pricer, double omega, double t, double s, double a, double dp) {
    const auto& spec = pricer.spec();
    double im;
    if (omega >= 0.0)
        im = omega * (pricer.clean_value(t, s) - pricer.clean_value(t, s * im_shift_up(spec, a, dp)));
    else
        im = -omega * (pricer.clean_value(t, s * im_shift_down(spec, a, dp)) - pricer.clean_value(t, s));
    return std::max(im, 0.0);
}

double residual_up(double a, double s) {
    // E[(e^{sZ} - e^{s z_a})^+]
    double za = ninv(a);
    return std::exp(0.5 * s * s) * ncdf(s - za) - (1.0 - a) * std::exp(s * za);
}

double residual_down(double a, double s) {
    // E[(e^{-s z_a} - e^{sZ})^+]
    double za = ninv(a);
    return (1.0 - a) * std::exp(-s * za) - std::exp(0.5 * s * s) * ncdf(-za - s);
}

EadFactors ead_factors(const SwapPricer& pricer, double v, double a, double dp) {
    check_level(a);
    const auto& spec = pricer.spec();
    if (v + dp > spec.maturity() + 1e-12) throw std::invalid_argument("ead_factors: v + delta' beyond maturity");
    double s = spec.sigma * std::sqrt(dp);
    double k = pricer.forward_annuity(v) * std::exp((spec.r - 0.5 * spec.sigma * spec.sigma) * dp);
    return {k * residual_up(a, s) / (1.0 - a), k * residual_down(a, s) / (1.0 - a)};
}

double ead_coefficient(const SwapPricer& pricer, double t, double a, double dp, bool up, double eps) {
    check_level(a);
    const auto& spec = pricer.spec();
    double T = spec.maturity();
    if (t >= T) return 0.0;
    double horizon = std::min(1.0, T - t);
    double s = spec.sigma * std::sqrt(dp);
    double shape = up ? residual_up(a, s) : residual_down(a, s);
    double scale = std::exp((spec.r - 0.5 * spec.sigma * spec.sigma) * dp) * shape;
    double eee = 0.0, sum = 0.0;
    for (int p = 0; eps * p < horizon - 1e-12; ++p) {
        double v = t + eps * p;
        double ee = v + dp <= T ? pricer.forward_annuity(v) * scale : 0.0;
        eee = std::max(eee, ee);
        sum += eee;
    }
    return 1.4 * eps * sum;
}

double regulatory_ead(const SwapPricer& pricer, double omega, double t, double s, double a, double dp,
                      double eps) {
    if (omega == 0.0) return 0.0;
    const auto& spec = pricer.spec();
    return std::abs(omega) * std::exp(-spec.kappa * t) * s * ead_coefficient(pricer, t, a, dp, omega > 0.0, eps);
}

double compensated_sum(const std::vector<double>& xs) {
    // Neumaier
    double sum = 0.0, c = 0.0;
    for (double x : xs) {
        double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

double default_fund_total(const std::vector<double>& eads) {
    if (eads.empty()) return 0.0;
    double first = 0.0, second = 0.0;
    for (double e : eads) {
        if (e > first) {
            second = first;
            first = e;
        } else if (e > second) {
            second = e;
        }
    }
    return first + second;
}

std::vector<double> allocate_default_fund(double total, const std::vector<double>& ims) {
    std::vector<double> out(ims.size(), 0.0);
    if (ims.empty()) return out;
    double sum = 0.0;
    for (double m : ims) sum += m;
    if (sum <= 0.0) {
        std::fill(out.begin(), out.end(), total / static_cast<double>(ims.size()));
        return out;
    }
    for (std::size_t i = 0; i < ims.size(); ++i) out[i] = total * ims[i] / sum;
    // push the residue onto the smallest positive share (finest spacing) so the
    // compensated sum hits total
    auto pick = out.end();
    for (auto it = out.begin(); it != out.end(); ++it)
        if (*it > 0.0 && (pick == out.end() || *it < *pick)) pick = it;
    if (pick == out.end()) return out;
    for (int pass = 0; pass < 64; ++pass) {
        double acc = compensated_sum(out);
        if (acc == total) break;
        *pick = pass == 0 ? *pick + (total - acc) : std::nextafter(*pick, acc < total ? total + 1.0 : -1.0);
    }
    return out;
}

BreachExposure member_breach_exposure(double q, double collateral, double recovery) {
    BreachExposure b;
    b.raw = std::max(q - collateral, 0.0);
    b.breach = (1.0 - recovery) * b.raw;
    b.closeout = b.raw == 0.0 ? -q : -(collateral + recovery * b.raw);
    return b;
}

WaterfallResult waterfall_apply(double equity, double breach, const std::vector<double>& dfc) {
    if (breach < 0.0) throw std::invalid_argument("waterfall_apply: negative breach");
    WaterfallResult w;
    w.burned = std::min(breach, equity);
    w.equity = equity - w.burned;
    double residual = breach - w.burned;
    w.refills.assign(dfc.size(), 0.0);
    if (residual <= 0.0) return w;
    double sum = 0.0;
    for (double d : dfc) sum += d;
    if (sum <= 0.0) {
        w.uncovered = true;
        if (dfc.empty()) return w;
        std::fill(w.refills.begin(), w.refills.end(), residual / static_cast<double>(dfc.size()));
        return w;
    }
    for (std::size_t i = 0; i < dfc.size(); ++i) w.refills[i] = residual * dfc[i] / sum;
    return w;
}

double unfunded_contribution(double refills, double dfc_start) {
    if (refills < 0.0) throw std::invalid_argument("unfunded_contribution: negative refills");
    return std::max(refills - dfc_start, 0.0);
}

}  // namespace ccva
