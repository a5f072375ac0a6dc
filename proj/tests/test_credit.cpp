#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "credit.hpp"
#include "rng.hpp"

using namespace ccva;

namespace {

// par spread by brute-force quadrature of both legs (midpoint rule)
double cds_spread_quadrature(const PiecewiseIntensity& h, double T, double R, double r) {
    const int n = 200000;
    double dt = T / n, prem = 0.0, prot = 0.0, cum = 0.0;
    for (int k = 0; k < n; ++k) {
        double t = (k + 0.5) * dt;
        double lam = h.at(t);
        double q = std::exp(-(cum + 0.5 * lam * dt) - r * t);
        prem += q * dt;
        prot += (1.0 - R) * lam * q * dt;
        cum += lam * dt;
    }
    return 1e4 * prot / prem;
}

}  // namespace

TEST_CASE("piecewise intensity: cumulative and inverse") {
    PiecewiseIntensity h{{3.0}, {0.01, 0.03}};
    CHECK(h.cumulative(2.0) == doctest::Approx(0.02));
    CHECK(h.cumulative(4.0) == doctest::Approx(0.06));
    CHECK(h.invert(0.06) == doctest::Approx(4.0));
    CHECK(h.invert(0.015) == doctest::Approx(1.5));
    CHECK(PiecewiseIntensity{{}, {0.0}}.invert(1.0) == kNever);
}

TEST_CASE("bootstrap: flat curve is the credit triangle") {
    auto h = bootstrap_marginal_intensity(61.0, 61.0, 0.4);
    CHECK(h.at(1.0) == doctest::Approx(0.0061 / 0.6));
    CHECK(h.at(4.0) == doctest::Approx(0.0061 / 0.6));
    auto z = bootstrap_marginal_intensity(45.0, 45.0, 0.0);
    CHECK(z.at(0.5) == doctest::Approx(0.0045));
}

TEST_CASE("bootstrap: upward curve reprices both pillars") {
    for (auto [s3, s5] : {std::pair{40.0, 60.0}, std::pair{100.0, 180.0}, std::pair{300.0, 420.0}}) {
        for (double r : {0.0, 0.02}) {
            auto h = bootstrap_marginal_intensity(s3, s5, 0.4, r);
            CHECK(std::abs(cds_spread_quadrature(h, 3.0, 0.4, r) - s3) < 0.1);
            CHECK(std::abs(cds_spread_quadrature(h, 5.0, 0.4, r) - s5) < 0.1);
            CHECK(h.levels[1] > h.levels[0]);
        }
    }
}

TEST_CASE("bootstrap: bad inputs") {
    CHECK_THROWS(bootstrap_marginal_intensity(0.0, 50.0, 0.4));
    CHECK_THROWS(bootstrap_marginal_intensity(50.0, 50.0, 1.0));
    CHECK_THROWS(bootstrap_marginal_intensity(500.0, 10.0, 0.4));
}

TEST_CASE("shock model: idiosyncratic shocks restore the marginals") {
    std::vector<PiecewiseIntensity> marg{flat_intensity(0.02), flat_intensity(0.03), flat_intensity(0.05)};
    ShockModel m = build_shock_model(marg, {{{0, 1, 2}, flat_intensity(0.01)}, {{1, 2}, flat_intensity(0.015)}});
    CHECK(m.shocks().size() == 5);
    for (int i = 0; i < 3; ++i)
        CHECK(m.member_total_intensity(i, 1.0) == doctest::Approx(marg[static_cast<std::size_t>(i)].at(1.0)));
    CHECK_THROWS(build_shock_model(marg, {{{0, 1}, flat_intensity(0.025)}}));
    CHECK_THROWS(build_shock_model(marg, {{{0, 7}, flat_intensity(0.001)}}));
    CHECK_THROWS(ShockModel(2, {ShockSpec{{0}, flat_intensity(0.01)}}));
}

TEST_CASE("sampled default times: marginal law (Kolmogorov-Smirnov)") {
    std::vector<PiecewiseIntensity> marg{PiecewiseIntensity{{3.0}, {0.10, 0.20}}, PiecewiseIntensity{{3.0}, {0.15, 0.15}}};
    ShockModel m = build_shock_model(marg, {{{0, 1}, PiecewiseIntensity{{3.0}, {0.05, 0.08}}}});
    const int n = 20000;
    std::vector<double> t0;
    auto g = substream(99, 0, Stream::aux);
    for (int k = 0; k < n; ++k) t0.push_back(sample_default_times(m, g).member_times[0]);
    std::sort(t0.begin(), t0.end());
    double d = 0.0;
    for (int k = 0; k < n; ++k) {
        double f = 1.0 - std::exp(-marg[0].cumulative(t0[static_cast<std::size_t>(k)]));
        d = std::max({d, std::abs(f - static_cast<double>(k) / n), std::abs(f - static_cast<double>(k + 1) / n)});
    }
    // 1% critical value
    CHECK(d < 1.63 / std::sqrt(n));
}

TEST_CASE("sampled default times: joint survival and simultaneous defaults") {
    std::vector<PiecewiseIntensity> marg{flat_intensity(0.2), flat_intensity(0.3), flat_intensity(0.25)};
    ShockModel m = build_shock_model(marg, {{{0, 1}, flat_intensity(0.1)}, {{0, 1, 2}, flat_intensity(0.05)}});
    const int n = 40000;
    const double t = 2.0;
    int both_alive = 0, together = 0;
    auto g = substream(5, 0, Stream::aux);
    for (int k = 0; k < n; ++k) {
        auto d = sample_default_times(m, g);
        if (d.member_times[0] > t && d.member_times[1] > t) ++both_alive;
        if (d.member_times[0] <= t && d.member_times[0] == d.member_times[1]) ++together;
        for (int i = 0; i < 3; ++i) {
            int f = d.first_shock[static_cast<std::size_t>(i)];
            CHECK(d.member_times[static_cast<std::size_t>(i)] == d.shock_times[static_cast<std::size_t>(f)]);
        }
    }
    // union of shocks touching 0 or 1: idio 0.05 + 0.15, common 0.1 + 0.05
    double p_alive = std::exp(-(0.05 + 0.15 + 0.1 + 0.05) * t);
    double se = std::sqrt(p_alive * (1 - p_alive) / n);
    CHECK(std::abs(both_alive / double(n) - p_alive) < 4 * se);
    // first event among the shocks of 0 or 1 is common, and happens before t
    double lam_all = 0.35, lam_common = 0.15;
    double p_tog = lam_common / lam_all * (1.0 - std::exp(-lam_all * t));
    double se2 = std::sqrt(p_tog * (1 - p_tog) / n);
    CHECK(std::abs(together / double(n) - p_tog) < 4 * se2);
}

TEST_CASE("group intensities") {
    std::vector<PiecewiseIntensity> marg{flat_intensity(0.2), flat_intensity(0.3), flat_intensity(0.25)};
    ShockModel m = build_shock_model(marg, {{{0, 1}, flat_intensity(0.1)}, {{1, 2}, flat_intensity(0.05)}});
    auto g = group_intensities(m, 0, 1, 1.0);
    CHECK(g.bank == doctest::Approx(0.2));
    CHECK(g.cpty == doctest::Approx(0.3));
    CHECK(g.bank_not_cpty == doctest::Approx(0.1));
    CHECK(g.cpty_not_bank == doctest::Approx(0.2));
    CHECK_THROWS(group_intensities(m, 1, 1, 0.0));
}
