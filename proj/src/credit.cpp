#include "credit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

namespace ccva {

double PiecewiseIntensity::at(double t) const {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
    return levels[static_cast<std::size_t>(it - breaks.begin())];
}

double PiecewiseIntensity::cumulative(double t) const {
    if (t <= 0.0) return 0.0;
    double acc = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        if (t <= breaks[k]) return acc + levels[k] * (t - prev);
        acc += levels[k] * (breaks[k] - prev);
        prev = breaks[k];
    }
    return acc + levels.back() * (t - prev);
}

double PiecewiseIntensity::invert(double e) const {
    double acc = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        double seg = levels[k] * (breaks[k] - prev);
        if (acc + seg > e) return prev + (e - acc) / levels[k];
        acc += seg;
        prev = breaks[k];
    }
    if (levels.back() <= 0.0) return kNever;
    return prev + (e - acc) / levels.back();
}

PiecewiseIntensity flat_intensity(double level) { return PiecewiseIntensity{{}, {level}}; }

namespace {

// premium and protection legs of a CDS with continuous premium
std::pair<double, double> cds_legs(const PiecewiseIntensity& h, double T, double recovery, double r) {
    double prem = 0.0, prot = 0.0;
    std::vector<double> pts{0.0};
    for (double b : h.breaks)
        if (b < T) pts.push_back(b);
    pts.push_back(T);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        double a = pts[k], b = pts[k + 1];
        double lam = h.at(0.5 * (a + b));
        double sa = std::exp(-h.cumulative(a) - r * a);
        double rate = lam + r;
        double annuity = rate > 0.0 ? sa * (1.0 - std::exp(-rate * (b - a))) / rate : sa * (b - a);
        prem += annuity;
        prot += (1.0 - recovery) * lam * annuity;
    }
    return {prem, prot};
}

}  // namespace

double cds_par_spread(const PiecewiseIntensity& h, double T, double recovery, double r) {
    auto [prem, prot] = cds_legs(h, T, recovery, r);
    return 1e4 * prot / prem;
}

PiecewiseIntensity bootstrap_marginal_intensity(double s3, double s5, double recovery, double r) {
    if (s3 <= 0.0 || s5 <= 0.0) throw std::invalid_argument("bootstrap: spreads must be positive");
    if (recovery < 0.0 || recovery >= 1.0) throw std::invalid_argument("bootstrap: recovery must be in [0,1)");
    double l1 = s3 * 1e-4 / (1.0 - recovery);
    if (s3 == s5) return PiecewiseIntensity{{3.0}, {l1, l1}};
    auto gap = [&](double l2) { return cds_par_spread(PiecewiseIntensity{{3.0}, {l1, l2}}, 5.0, recovery, r) - s5; };
    if (gap(0.0) > 0.0) throw std::invalid_argument("bootstrap: 5y spread too low for the 3y pillar");
    double hi = 2.0 * s5 * 1e-4 / (1.0 - recovery) + l1;
    while (gap(hi) < 0.0) hi *= 2.0;
    std::uintmax_t iters = 200;
    auto root = boost::math::tools::toms748_solve(gap, 0.0, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    return PiecewiseIntensity{{3.0}, {l1, 0.5 * (root.first + root.second)}};
}

ShockModel::ShockModel(int n, std::vector<ShockSpec> shocks) : n_(n), shocks_(std::move(shocks)) {
    member_of_.assign(shocks_.size(), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (std::size_t k = 0; k < shocks_.size(); ++k) {
        if (shocks_[k].members.empty()) throw std::invalid_argument("shock with no members");
        for (int m : shocks_[k].members) {
            if (m < 0 || m >= n) throw std::invalid_argument("shock member out of range");
            member_of_[k][static_cast<std::size_t>(m)] = 1;
        }
        for (double l : shocks_[k].intensity.levels)
            if (l < 0.0) throw std::invalid_argument("negative shock intensity");
    }
    for (int i = 0; i < n; ++i) {
        bool found = false;
        for (std::size_t k = 0; k < shocks_.size(); ++k) found = found || member_of_[k][static_cast<std::size_t>(i)];
        if (!found) throw std::invalid_argument("member " + std::to_string(i) + " is in no shock");
    }
}

bool ShockModel::contains(std::size_t k, int m) const { return member_of_[k][static_cast<std::size_t>(m)] != 0; }

double ShockModel::member_total_intensity(int i, double t) const {
    if (i < 0 || i >= n_) throw std::out_of_range("unknown member");
    double s = 0.0;
    for (std::size_t k = 0; k < shocks_.size(); ++k)
        if (contains(k, i)) s += shocks_[k].intensity.at(t);
    return s;
}

ShockModel build_shock_model(const std::vector<PiecewiseIntensity>& marginals,
                             const std::vector<CommonShockInput>& common) {
    int n = static_cast<int>(marginals.size());
    std::vector<ShockSpec> shocks;
    for (int i = 0; i < n; ++i) {
        const auto& m = marginals[static_cast<std::size_t>(i)];
        PiecewiseIntensity idio = m;
        for (std::size_t k = 0; k < idio.levels.size(); ++k) {
            double t = k == 0 ? 0.0 : idio.breaks[k - 1];
            double used = 0.0;
            for (const auto& c : common)
                if (std::find(c.members.begin(), c.members.end(), i) != c.members.end()) used += c.intensity.at(t);
            idio.levels[k] -= used;
            if (idio.levels[k] < -1e-15) {
                std::ostringstream os;
                os << "common shocks exceed marginal intensity of member " << i << " on segment " << k;
                throw std::invalid_argument(os.str());
            }
            idio.levels[k] = std::max(idio.levels[k], 0.0);
        }
        shocks.push_back(ShockSpec{{i}, idio});
    }
    for (const auto& c : common) {
        for (double b : c.intensity.breaks)
            for (const auto& m : marginals)
                if (std::find(m.breaks.begin(), m.breaks.end(), b) == m.breaks.end())
                    throw std::invalid_argument("common shock breakpoints must match the marginal segments");
        shocks.push_back(ShockSpec{c.members, c.intensity});
    }
    return ShockModel(n, std::move(shocks));
}

DefaultDraw sample_default_times(const ShockModel& model, std::mt19937_64& g) {
    std::exponential_distribution<double> ex(1.0);
    DefaultDraw d;
    const auto& shocks = model.shocks();
    d.shock_times.resize(shocks.size());
    for (std::size_t k = 0; k < shocks.size(); ++k) d.shock_times[k] = shocks[k].intensity.invert(ex(g));
    d.member_times.assign(static_cast<std::size_t>(model.n_members()), kNever);
    d.first_shock.assign(static_cast<std::size_t>(model.n_members()), -1);
    for (std::size_t k = 0; k < shocks.size(); ++k)
        for (int m : shocks[k].members) {
            auto mi = static_cast<std::size_t>(m);
            if (d.shock_times[k] < d.member_times[mi]) {
                d.member_times[mi] = d.shock_times[k];
                d.first_shock[mi] = static_cast<int>(k);
            }
        }
    return d;
}

GroupIntensities group_intensities(const ShockModel& model, int b, int c, double t) {
    if (b == c) throw std::invalid_argument("group_intensities: bank and counterparty coincide");
    GroupIntensities out;
    for (std::size_t k = 0; k < model.shocks().size(); ++k) {
        double g = model.shocks()[k].intensity.at(t);
        bool inb = model.contains(k, b), inc = model.contains(k, c);
        if (inc) out.cpty += g;
        if (inb) out.bank += g;
        if (inb && !inc) out.bank_not_cpty += g;
        if (inc && !inb) out.cpty_not_bank += g;
    }
    return out;
}

}  // namespace ccva
