// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Always exits 0 once every check has been evaluated; the verdict is in the
// printed lines.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "engine.hpp"
#include "experiments.hpp"
#include "rng.hpp"

using namespace ccva;

namespace {

struct Verdict {
    bool ok = true;
    std::vector<std::string> notes;

    void check(bool cond, const std::string& what) {
        ok = ok && cond;
        notes.push_back(fmt::format("{} {}", cond ? "ok  " : "MISS", what));
    }
};

void print(int id, const std::string& title, const Verdict& v) {
    fmt::print("{} criterion {}: {}\n", v.ok ? "PASS" : "FAIL", id, title);
    for (const auto& n : v.notes) fmt::print("    {}\n", n);
    std::fflush(stdout);
}

bool within(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

std::string comp(const XvaReport& r) {
    const auto& v = r.value;
    return fmt::format("cva {:.2f} dva {:.2f} mva {:.2f} mla {:.2f} kva {:.2f} total {:.2f}", v.cva, v.dva, v.mva,
                       v.mla, v.kva, r.total);
}

XvaReport run(Scenario s, Setup setup, const RunOptions& o) {
    s.setup = setup;
    return setup == Setup::ccp ? ccva_estimate(s, o) : bva_estimate(s, o);
}

MarginConfig& margin_of(Scenario& s, Setup setup) { return setup == Setup::ccp ? s.ccp.margin : s.csa.margin; }

using Field = double Components::*;
const std::vector<std::pair<const char*, Field>> kFields{{"cva", &Components::cva}, {"dva", &Components::dva},
                                                          {"mva", &Components::mva}, {"mla", &Components::mla},
                                                          {"kva", &Components::kva}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    long paths = 10000;
    std::uint64_t seed = 20160101;
    long inner = 1000000;
    app.add_option("--paths", paths, "outer Monte Carlo paths per estimate");
    app.add_option("--seed", seed);
    app.add_option("--inner", inner, "inner draws of the exposure oracle");
    CLI11_PARSE(app, argc, argv);

    const Scenario base = default_scenario();
    const RunOptions o{paths, seed, 1};
    const int safe = 3, risky = 7;
    Scenario safe_s = base, risky_s = base;
    safe_s.reference = safe;
    risky_s.reference = risky;

    // 1. CCP block, safe member
    auto t0 = std::chrono::steady_clock::now();
    XvaReport ccp = run(safe_s, Setup::ccp, o);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
        Verdict v;
        v.notes.push_back(comp(ccp));
        v.check(within(ccp.value.cva, 11.60, 0.15), fmt::format("cva {:.2f} vs 11.60 within 15%", ccp.value.cva));
        v.check(within(ccp.value.mva, 1.86, 0.15), fmt::format("mva {:.2f} vs 1.86 within 15%", ccp.value.mva));
        v.check(within(ccp.value.mla, 1.22, 0.15), fmt::format("mla {:.2f} vs 1.22 within 15%", ccp.value.mla));
        v.check(within(ccp.value.kva, 11.58, 0.15), fmt::format("kva {:.2f} vs 11.58 within 15%", ccp.value.kva));
        v.check(within(ccp.total, 26.26, 0.10), fmt::format("ccva {:.2f} vs 26.26 within 10%", ccp.total));
        v.check(secs <= 60.0, fmt::format("runtime {:.1f}s <= 60s", secs));
        print(1, "CCP XVA of the safe member", v);
    }

    // 2. CSA block, same member
    XvaReport csa = run(safe_s, Setup::csa, o);
    {
        Verdict v;
        v.notes.push_back(comp(csa));
        v.check(within(csa.total, 664.57, 0.10), fmt::format("bva {:.2f} vs 664.57 within 10%", csa.total));
        double per = csa.total / csa.nu0;
        v.check(within(per, 12.54, 0.10), fmt::format("bva/nu0 {:.2f} vs 12.54 within 10%", per));
        v.check(within(csa.value.cva, 238.22, 0.15), fmt::format("cva {:.2f} vs 238.22 within 15%", csa.value.cva));
        v.check(within(csa.value.mva, 204.72, 0.15), fmt::format("mva {:.2f} vs 204.72 within 15%", csa.value.mva));
        v.check(within(csa.value.kva, 221.63, 0.15), fmt::format("kva {:.2f} vs 221.63 within 15%", csa.value.kva));
        const auto& c = csa.value;
        v.check(c.mva >= c.cva && c.mva >= c.kva, "mva is the largest csa component");
        std::vector<double> parts{ccp.value.cva, ccp.value.mva, ccp.value.mla, ccp.value.kva};
        std::sort(parts.rbegin(), parts.rend());
        v.check(ccp.value.kva >= parts[1], "kva is the largest or second largest ccp component");
        print(2, "CSA XVA of the safe member", v);
    }

    // 3. standard errors
    {
        Verdict v;
        struct Ref {
            const char* name;
            const XvaReport* r;
            double cva, mva, kva;
        };
        for (const Ref& x : {Ref{"ccp", &ccp, 2.91, 0.95, 0.59}, Ref{"csa", &csa, 2.90, 0.84, 0.54}}) {
            double c = 100 * x.r->rel_se(x.r->value.cva, x.r->se.cva);
            double m = 100 * x.r->rel_se(x.r->value.mva, x.r->se.mva);
            double k = 100 * x.r->rel_se(x.r->value.kva, x.r->se.kva);
            v.check(c < 6.0 && c <= 2 * x.cva && c >= x.cva / 2, fmt::format("{} cva {:.2f}% (paper {:.2f}%)", x.name, c, x.cva));
            v.check(m < 2.0 && m <= 2 * x.mva && m >= x.mva / 2, fmt::format("{} mva {:.2f}% (paper {:.2f}%)", x.name, m, x.mva));
            v.check(k < 2.0 && k <= 2 * x.kva && k >= x.kva / 2, fmt::format("{} kva {:.2f}% (paper {:.2f}%)", x.name, k, x.kva));
        }
        print(3, "relative standard errors", v);
    }

    // 4. liquidation period 5d -> 15d
    {
        Verdict v;
        const double lo = 1.3, hi = 2.2;
        for (const Scenario* s : {&safe_s, &risky_s})
            for (Setup setup : {Setup::ccp, Setup::csa}) {
                Scenario a = *s, b = *s;
                margin_of(a, setup).delta_days = 5.0;
                margin_of(b, setup).delta_days = 15.0;
                XvaReport ra = run(a, setup, o), rb = run(b, setup, o);
                for (auto [name, f] : kFields) {
                    double x = ra.value.*f, y = rb.value.*f;
                    if (x == 0.0 && y == 0.0) continue;
                    double ratio = y / x;
                    v.check(std::abs(y) > std::abs(x) && ratio >= lo && ratio <= hi,
                            fmt::format("ref {} {} {} {:.2f} -> {:.2f} ratio {:.2f}", s->members[s->reference].label,
                                        setup_name(setup), name, x, y, ratio));
                }
            }
        print(4, "liquidation period effect", v);
    }

    // 5. quantile level
    {
        Verdict v;
        for (const Scenario* s : {&safe_s, &risky_s})
            for (Setup setup : {Setup::ccp, Setup::csa}) {
                std::vector<double> grid = setup == Setup::ccp ? std::vector<double>{0.70, 0.80, 0.95}
                                                               : std::vector<double>{0.80, 0.90, 0.99};
                Scenario c = *s;
                c.setup = setup;
                auto pts = sweep_quantile(c, grid, o);
                bool cva_dn = true, mva_up = true;
                std::string trace;
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    trace += fmt::format(" [{:g}: cva {:.2f} mva {:.2f}]", pts[k].a, pts[k].report.value.cva,
                                         pts[k].report.value.mva);
                    if (k == 0) continue;
                    cva_dn = cva_dn && pts[k].report.value.cva < pts[k - 1].report.value.cva;
                    mva_up = mva_up && pts[k].report.value.mva > pts[k - 1].report.value.mva;
                }
                v.check(cva_dn && mva_up, fmt::format("ref {} {} cva down, mva up:{}", s->members[s->reference].label,
                                                      setup_name(setup), trace));
            }
        auto grid = sweep_grid(0.55, 0.995, 10);
        Scenario c = safe_s;
        c.setup = Setup::ccp;
        auto pts = sweep_quantile(c, grid, o);
        std::string trace;
        std::size_t arg = 0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            trace += fmt::format(" {:.2f}", pts[k].report.total);
            if (pts[k].report.total < pts[arg].report.total) arg = k;
        }
        v.check(arg > 0 && arg + 1 < pts.size(), "ccp safe total has an interior minimum:" + trace);
        c = risky_s;
        c.setup = Setup::csa;
        pts = sweep_quantile(c, grid, o);
        trace.clear();
        bool mono = true;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            trace += fmt::format(" {:.2f}", pts[k].report.total);
            if (k > 0) mono = mono && pts[k].report.total > pts[k - 1].report.total;
        }
        v.check(mono, "csa risky total increasing:" + trace);
        print(5, "quantile level effect", v);
    }

    // 6. closed-form expected exposures against nested Monte Carlo
    {
        Verdict v;
        SwapSpec sw = scenario_swap(base);
        SwapPricer p(sw);
        std::mt19937_64 g(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const boost::math::normal_distribution<double> n01;
        int done = 0;
        while (done < 10) {
            double a = 0.55 + 0.44 * u(g);
            double dp = (1.0 + 20.0 * u(g)) / 250.0;
            // horizons after the last fixing carry no exposure at all
            double last_fixing = sw.fixing_date(sw.schedule.size() - 1);
            double v0 = (last_fixing - dp) * u(g);
            // keep windows free of fixing dates, where the closed form is exact
            bool crosses = false;
            for (double tf : sw.schedule)
                if (tf > v0 && tf <= v0 + dp) crosses = true;
            if (crosses) continue;
            ++done;
            double uu = v0 + dp;
            double sv = sw.s0 * std::exp(sw.kappa * v0);
            double sd = sw.sigma * std::sqrt(dp), drift = (sw.kappa - 0.5 * sw.sigma * sw.sigma) * dp;
            double b = p.coef_b(uu) * sv;
            double q_up = b * std::exp(drift + sd * boost::math::quantile(n01, a));
            double q_dn = -b * std::exp(drift + sd * boost::math::quantile(n01, 1.0 - a));
            auto gi = substream(seed, static_cast<std::uint64_t>(done), Stream::aux);
            std::normal_distribution<double> nd;
            double su = 0, squ = 0, sdn = 0, sqd = 0;
            for (long k = 0; k < inner; ++k) {
                double x = b * std::exp(drift + sd * nd(gi));
                double eu = std::max(x - q_up, 0.0), ed = std::max(-x - q_dn, 0.0);
                su += eu;
                squ += eu * eu;
                sdn += ed;
                sqd += ed * ed;
            }
            double n = static_cast<double>(inner);
            double mu_ = su / n, md = sdn / n;
            double seu = std::sqrt((squ / n - mu_ * mu_) / n), sed = std::sqrt((sqd / n - md * md) / n);
            auto f = ead_factors(p, v0, a, dp);
            double scale = (1.0 - a) * std::exp(-sw.kappa * v0) * sv;
            double zu = (f.up * scale - mu_) / seu, zd = (f.down * scale - md) / sed;
            v.check(std::abs(zu) < 3.0 && std::abs(zd) < 3.0,
                    fmt::format("v {:.3f} a {:.3f} delta' {:.4f}: z up {:+.2f} down {:+.2f}", v0, a, dp, zu, zd));
        }
        print(6, "closed-form exposures vs nested Monte Carlo", v);
    }

    // 7. exact properties
    {
        Verdict v;
        RunOptions small{std::min(paths, 2000L), seed, 1};
        std::vector<Components> xs;
        XvaReport r = ccva_estimate(safe_s, small, &xs);
        v.check(r.diag.max_conservation_error < 1e-12,
                fmt::format("waterfall conservation over {} events, max error {:.1e}", r.diag.liquidations,
                            r.diag.max_conservation_error));
        v.check(r.diag.max_clearing_error <= 1e-10, fmt::format("clearing max |sum P| {:.1e}", r.diag.max_clearing_error));

        Scenario full = safe_s;
        full.ccp.recovery = 1.0;
        full.csa.recovery_bank = 1.0;
        bool zero = true;
        ccva_estimate(full, small, &xs);
        for (const auto& x : xs) zero = zero && x.dva == 0.0;
        bva_estimate(full, small, &xs);
        for (const auto& x : xs) zero = zero && x.dva == 0.0;
        v.check(zero, "dva is zero on every path at full recovery");

        Scenario nofund = safe_s;
        nofund.funding.lambda_bar_spread_multiple = 0.0;
        nofund.funding.lambda = 0.0;
        nofund.ccp.margin.fee_c = 0.0;
        nofund.csa.margin.fee_c = 0.0;
        zero = true;
        ccva_estimate(nofund, small, &xs);
        for (const auto& x : xs) zero = zero && x.mva == 0.0 && x.mla == 0.0;
        bva_estimate(nofund, small, &xs);
        for (const auto& x : xs) zero = zero && x.mva == 0.0 && x.mla == 0.0;
        v.check(zero, "mva and mla are zero on every path without funding spread and fees");

        std::mt19937_64 g(seed);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        bool covered = true, prop = true;
        for (int k = 0; k < 10000; ++k) {
            double q = u(g), c = q + u(g);
            auto b = member_breach_exposure(q, c, 0.0);
            covered = covered && b.raw == 0.0 && b.breach == 0.0;
            std::vector<double> dfc{u(g), u(g), u(g)};
            auto w = waterfall_apply(u(g) / 5.0, u(g), dfc);
            for (std::size_t i = 1; i < dfc.size(); ++i)
                prop = prop && std::abs(w.refills[i] * dfc[0] - w.refills[0] * dfc[i]) <= 1e-12 * (1 + w.refills[0] * dfc[i]);
        }
        v.check(covered, "no breach when collateral covers the exposure");
        v.check(prop, "refill shares proportional to default fund contributions");

        const double K0 = 0.05, k = base.capital.hurdle_k, rr = base.swap.r, T = scenario_swap(base).maturity();
        double mu = base.funding.mu_factor / T;
        double sum = 0, sq = 0;
        for (long p = 0; p < paths; ++p) {
            auto gz = substream(seed, static_cast<std::uint64_t>(p), Stream::zeta);
            double x = capital_cost_sample(draw_randomization(mu, gz), k, rr, T, K0);
            sum += x;
            sq += x * x;
        }
        double n = static_cast<double>(paths), m = sum / n, se = std::sqrt((sq / n - m * m) / n);
        double cf = kva_constant(K0, k, rr, T);
        v.check(std::abs(m - cf) < 3.0 * se, fmt::format("constant-capital kva {:.6f} vs closed form {:.6f} (se {:.1e})", m, cf, se));
        print(7, "exact properties", v);
    }

    // 8. determinism across worker counts
    {
        Verdict v;
        for (Setup setup : {Setup::ccp, Setup::csa}) {
            Scenario s = safe_s;
            s.setup = setup;
            std::string ref;
            bool same = true;
            for (int w : {1, 4, 16}) {
                RunOptions ow{paths, seed, w};
                std::string csv = report_csv(run(s, setup, ow), s);
                if (ref.empty()) ref = csv;
                same = same && csv == ref;
            }
            v.check(same, fmt::format("{} csv identical under 1, 4, 16 workers", setup_name(setup)));
        }
        print(8, "determinism", v);
    }
    return 0;
}
