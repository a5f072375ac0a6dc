#include "engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rng.hpp"

namespace ccva {

namespace {

constexpr double kBp = 1e4;

struct Model {
    Scenario sc;
    SwapSpec swap;
    SwapPricer pricer;
    ShockModel shocks;
    std::vector<PiecewiseIntensity> marginals;
    Positions pos;
    MarginConfig margin;
    std::vector<double> grid;
    double maturity = 0.0;
    double mu = 0.0;
    double lambda_bar = 0.0;
    double im_up = 0.0;  // IM per |omega| B(t) s, driver up move
    double im_dn = 0.0;
    std::vector<double> ead_up;  // EAD coefficient at each DF reset date
    std::vector<double> ead_dn;

    Model(const Scenario& s, const MarginConfig& m)
        : sc(s), swap(scenario_swap(s)), pricer(swap), shocks(scenario_shock_model(s)),
          marginals(scenario_marginals(s)), margin(m) {
        std::vector<double> alphas;
        for (const auto& mp : s.members) alphas.push_back(mp.alpha);
        pos = positions_from_alphas(alphas, s.reference);
        maturity = swap.maturity();
        grid = base_grid(swap, m.steps_per_year, m.df_resets_per_year);
        mu = s.funding.mu_factor / maturity;
        const auto& ref = s.members[static_cast<std::size_t>(s.reference)];
        lambda_bar = s.funding.lambda_bar_spread_multiple * 0.5 * (ref.spread_3y + ref.spread_5y) * 1e-4;
        double dp = m.delta_prime();
        im_up = std::max(im_shift_up(swap, m.quantile_a, dp) - 1.0, 0.0);
        im_dn = std::max(1.0 - im_shift_down(swap, m.quantile_a, dp), 0.0);
        int nres = static_cast<int>(std::floor(maturity * m.df_resets_per_year + 1e-9));
        for (int k = 0; k <= nres; ++k) {
            double t = static_cast<double>(k) / m.df_resets_per_year;
            ead_up.push_back(ead_coefficient(pricer, t, m.quantile_a, dp, true));
            ead_dn.push_back(ead_coefficient(pricer, t, m.quantile_a, dp, false));
        }
    }

    double omega(int i) const { return pos.omega[static_cast<std::size_t>(i)]; }
    int n() const { return static_cast<int>(pos.omega.size()); }
    double beta(double t) const { return std::exp(-swap.r * t); }

    // IM posted by a holder of a short omega position, evaluated at (t, s)
    double im(double w, double t, double s) const {
        if (w == 0.0) return 0.0;
        return std::abs(w) * pricer.coef_b(t) * s * (w > 0.0 ? im_up : im_dn);
    }
    double grid_floor(double t) const {
        return std::floor(t * margin.steps_per_year + 1e-9) / margin.steps_per_year;
    }
    int reset_index(double t) const {
        return std::min(static_cast<int>(std::floor(t * margin.df_resets_per_year + 1e-9)),
                        static_cast<int>(ead_up.size()) - 1);
    }
};

struct ResetState {
    bool ready = false;
    double kccp = 0.0;
    double sum_dfc = 0.0;
    std::vector<double> dfc;
};

struct PathWorld {
    DriverPath path;
    DefaultDraw draw;
    Randomization rz;
};

PathWorld simulate_world(const Model& m, std::uint64_t seed, std::uint64_t p, double delta, bool all_defaults) {
    PathWorld w;
    auto gd = substream(seed, p, Stream::driver);
    DriverPath base = simulate_driver(m.swap, m.grid, normals(gd, m.grid.size() - 1));
    auto gc = substream(seed, p, Stream::defaults);
    w.draw = sample_default_times(m.shocks, gc);
    auto gz = substream(seed, p, Stream::zeta);
    w.rz = draw_randomization(m.mu, gz);

    std::vector<double> extra;
    double T = m.maturity;
    if (w.rz.zeta < T) {
        extra.push_back(w.rz.zeta);
        extra.push_back(std::min(w.rz.zeta + delta, T));
    }
    if (all_defaults)
        for (double t : w.draw.member_times)
            if (t + delta < T) extra.push_back(t + delta);
    auto gb = substream(seed, p, Stream::bridge);
    w.path = insert_times(m.swap, base, extra, normals(gb, extra.size()));
    return w;
}

class CcpPath {
public:
    CcpPath(const Model& m, const PathWorld& w, Diagnostics& d) : m_(m), w_(w), d_(d) {
        states_.resize(m.ead_up.size());
    }

    Components run() {
        Components c;
        const int ref = m_.sc.reference;
        const double T = m_.maturity;
        const double delta = m_.margin.delta();
        const auto& tau = w_.draw.member_times;
        const double tau_bar = std::min(tau[static_cast<std::size_t>(ref)], T);

        // liquidation events completed before tau_bar, in time order
        std::vector<double> starts;
        for (int i = 0; i < m_.n(); ++i) {
            double t = tau[static_cast<std::size_t>(i)];
            if (i != ref && t + delta < tau_bar && std::find(starts.begin(), starts.end(), t) == starts.end())
                starts.push_back(t);
        }
        std::sort(starts.begin(), starts.end());

        const double zeta = w_.rz.zeta;
        const bool sample_zeta = zeta < tau_bar;
        int year = -1;
        double equity = 0.0;
        double equity_at_zeta = -1.0;
        auto roll_equity = [&](double t) {
            int y = static_cast<int>(std::floor(t / m_.margin.equity_reset + 1e-12));
            if (y != year) {
                year = y;
                equity = m_.margin.equity_fraction * state(y * m_.margin.equity_reset).kccp;
            }
        };

        for (double t0 : starts) {
            double t1 = t0 + delta;
            if (sample_zeta && equity_at_zeta < 0.0 && zeta < t1) {
                roll_equity(zeta);
                equity_at_zeta = equity;
            }
            roll_equity(t1);
            double breach = 0.0;
            std::vector<int> z;
            for (int i = 0; i < m_.n(); ++i)
                if (tau[static_cast<std::size_t>(i)] == t0) z.push_back(i);
            for (int i : z) breach += member_breach(i, t0, t1).breach;
            const ResetState& st = state(t1);
            std::vector<double> surv_dfc;
            int ref_slot = -1;
            for (int j = 0; j < m_.n(); ++j) {
                if (tau[static_cast<std::size_t>(j)] <= t1) continue;
                if (j == ref) ref_slot = static_cast<int>(surv_dfc.size());
                surv_dfc.push_back(st.dfc[static_cast<std::size_t>(j)]);
            }
            WaterfallResult wf = waterfall_apply(equity, breach, surv_dfc);
            equity = wf.equity;
            double refilled = 0.0;
            for (double r : wf.refills) refilled += r;
            d_.max_conservation_error = std::max(d_.max_conservation_error, std::abs(wf.burned + refilled - breach));
            d_.liquidations += 1;
            if (wf.uncovered) d_.uncovered += 1;
            if (ref_slot >= 0) c.cva += m_.beta(t1) * wf.refills[static_cast<std::size_t>(ref_slot)];
        }

        if (!sample_zeta) return c;
        if (equity_at_zeta < 0.0) {
            roll_equity(zeta);
            equity_at_zeta = equity;
        }
        const double wgt = w_.rz.weight;
        const double q0 = -m_.omega(ref);
        const double s = w_.path.at(zeta);
        const double unit = swap_mtm(m_.pricer, zeta, w_.path);
        const double p_z = q0 * unit;
        const double vm = q0 * swap_mtm(m_.pricer, m_.grid_floor(zeta), w_.path);
        const double im0 = m_.im(m_.omega(ref), zeta, s);
        const ResetState& st = state(zeta);
        const double dfc0 = st.dfc[static_cast<std::size_t>(ref)];
        const double cstar = vm + im0;
        const double coll = cstar + dfc0;

        double clearing = 0.0;
        for (int i = 0; i < m_.n(); ++i) clearing += -m_.omega(i) * unit;
        d_.max_clearing_error = std::max(d_.max_clearing_error, std::abs(clearing));

        const double gamma0 = m_.shocks.member_total_intensity(ref, zeta);
        const double lt = m_.lambda_bar - (1.0 - m_.sc.funding.r_bar) * gamma0;
        const double gap = cstar - p_z;
        c.mva = wgt * m_.beta(zeta) * (lt * std::max(gap, 0.0) - m_.sc.funding.lambda * std::max(-gap, 0.0));
        c.mla = wgt * m_.beta(zeta) * m_.margin.fee_c * (coll - p_z);

        const double zd = std::min(zeta + m_.margin.delta(), m_.maturity);
        const double q = q0 * swap_mtm(m_.pricer, zd, w_.path) + unpaid_dividends(m_.pricer, zeta, zd, w_.path, q0);
        const double rec = m_.sc.ccp.recovery;
        c.dva = -wgt * m_.beta(zd) * gamma0 * (1.0 - rec) * std::max(q - coll, 0.0);

        const double kcm = k_cm(dfc0, equity_at_zeta, st.sum_dfc, st.kccp, m_.sc.capital);
        c.kva = capital_cost_sample(w_.rz, m_.sc.capital.hurdle_k, m_.swap.r, m_.maturity, dfc0 + kcm);
        return c;
    }

private:
    const Model& m_;
    const PathWorld& w_;
    Diagnostics& d_;
    std::vector<ResetState> states_;

    const ResetState& state(double t) {
        int k = m_.reset_index(t);
        ResetState& st = states_[static_cast<std::size_t>(k)];
        if (st.ready) return st;
        double tr = static_cast<double>(k) / m_.margin.df_resets_per_year;
        double s = w_.path.at(tr);
        double scale = std::exp(-m_.swap.kappa * tr) * s;
        std::vector<double> eads, ims;
        std::vector<int> live;
        for (int j = 0; j < m_.n(); ++j) {
            if (w_.draw.member_times[static_cast<std::size_t>(j)] <= tr) continue;
            double w = m_.omega(j);
            double coef = w > 0.0 ? m_.ead_up[static_cast<std::size_t>(k)] : m_.ead_dn[static_cast<std::size_t>(k)];
            live.push_back(j);
            eads.push_back(std::abs(w) * scale * coef);
            ims.push_back(m_.im(w, tr, s));
        }
        std::vector<double> dfc = allocate_default_fund(default_fund_total(eads), ims);
        st.dfc.assign(static_cast<std::size_t>(m_.n()), 0.0);
        for (std::size_t x = 0; x < live.size(); ++x) {
            st.dfc[static_cast<std::size_t>(live[x])] = dfc[x];
            st.sum_dfc += dfc[x];
        }
        st.kccp = k_ccp(eads, m_.sc.capital);
        st.ready = true;
        return st;
    }

    BreachExposure member_breach(int i, double t0, double t1) {
        double q = -m_.omega(i);
        double th = m_.grid_floor(t0);
        if (th >= t0) th -= 1.0 / m_.margin.steps_per_year;
        th = std::max(th, 0.0);
        double vm = q * swap_mtm(m_.pricer, th, w_.path);
        double im = m_.im(m_.omega(i), th, w_.path.at(th));
        double dfc = state(th).dfc[static_cast<std::size_t>(i)];
        double qv = q * swap_mtm(m_.pricer, t1, w_.path) + unpaid_dividends(m_.pricer, t0, t1, w_.path, q);
        return member_breach_exposure(qv, vm + im + dfc, m_.sc.ccp.recovery);
    }
};

Components csa_path(const Model& m, const PathWorld& w) {
    Components c;
    const int b = m.sc.reference;
    const double T = m.maturity;
    const double zeta = w.rz.zeta;
    const auto& tau = w.draw.member_times;
    const double tb = tau[static_cast<std::size_t>(b)];
    if (!(zeta < std::min(tb, T))) return c;
    const double wgt = w.rz.weight;
    const double s = w.path.at(zeta);
    const double zd = std::min(zeta + m.margin.delta(), T);
    const double unit_z = swap_mtm(m.pricer, zeta, w.path);
    const double unit_vm = swap_mtm(m.pricer, m.grid_floor(zeta), w.path);
    const double unit_q = swap_mtm(m.pricer, zd, w.path) + unpaid_dividends(m.pricer, zeta, zd, w.path, 1.0);
    const double dp_csa = m.margin.delta_prime();
    const double gamma_b = m.shocks.member_total_intensity(b, zeta);
    const double lt = m.lambda_bar - (1.0 - m.sc.funding.r_bar) * gamma_b;
    const double rb = m.sc.csa.recovery_bank, rc = m.sc.csa.recovery_cpty;
    const double mat = T - zeta;
    for (int i = 0; i < m.n(); ++i) {
        if (i == b) continue;
        double wi = m.omega(i);
        if (wi == 0.0) continue;
        double tc = tau[static_cast<std::size_t>(i)];
        if (!(zeta < tc)) continue;
        double p = wi * unit_z;
        double vm = wi * unit_vm;
        double q = wi * unit_q;
        double ib = m.im(-wi, zeta, s);
        double ic = -m.im(wi, zeta, s);
        GroupIntensities g = group_intensities(m.shocks, b, i, zeta);
        double gc = g.cpty + (tc <= zd ? g.bank_not_cpty : 0.0);
        double gb = g.bank + (tb <= zd ? g.cpty_not_bank : 0.0);
        c.cva += wgt * m.beta(zd) * gc * (1.0 - rc) * std::max(-(q - (vm + ic)), 0.0);
        c.dva += -wgt * m.beta(zd) * gb * (1.0 - rb) * std::max(q - (vm + ib), 0.0);
        double gap = vm + ib - p;
        c.mva += wgt * m.beta(zeta) * (lt * std::max(gap, 0.0) - m.sc.funding.lambda * std::max(-gap, 0.0));
        c.mla += wgt * m.beta(zeta) * m.margin.fee_c * std::max(gap, 0.0);

        double ead = regulatory_ead(m.pricer, wi, zeta, s, m.margin.quantile_a, dp_csa);
        const auto& h = m.marginals[static_cast<std::size_t>(i)];
        double dp = 1.0 - std::exp(-h.integral(zeta, zeta + 1.0));
        CcrInput in{dp, rc, mat, ead};
        double kcap = k_ccr({in}, m.sc.capital) + k_cva({in}, m.sc.capital);
        c.kva += capital_cost_sample(w.rz, m.sc.capital.hurdle_k, m.swap.r, T, kcap);
    }
    return c;
}

template <class PathFn>
std::vector<Components> run_paths(const RunOptions& o, Diagnostics& diag, PathFn fn) {
    std::vector<Components> out(static_cast<std::size_t>(o.n_paths));
    int workers = std::max(1, o.workers);
    std::vector<Diagnostics> local(static_cast<std::size_t>(workers));
    std::atomic<long> next{0};
    constexpr long kBlock = 64;
    auto work = [&](int id) {
        for (;;) {
            long start = next.fetch_add(kBlock);
            if (start >= o.n_paths) break;
            long end = std::min(start + kBlock, o.n_paths);
            for (long p = start; p < end; ++p)
                out[static_cast<std::size_t>(p)] = fn(static_cast<std::uint64_t>(p), local[static_cast<std::size_t>(id)]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> th;
        for (int id = 0; id < workers; ++id) th.emplace_back(work, id);
        for (auto& t : th) t.join();
    }
    for (const auto& d : local) {
        diag.liquidations += d.liquidations;
        diag.uncovered += d.uncovered;
        diag.max_conservation_error = std::max(diag.max_conservation_error, d.max_conservation_error);
        diag.max_clearing_error = std::max(diag.max_clearing_error, d.max_clearing_error);
    }
    return out;
}

}  // namespace

RunOptions options_from(const Scenario& s) { return RunOptions{s.n_paths, s.seed, s.workers}; }

Randomization draw_randomization(double mu, std::mt19937_64& g) {
    if (!(mu > 0.0)) throw std::invalid_argument("draw_randomization: mu must be > 0");
    std::exponential_distribution<double> ex(mu);
    Randomization r;
    r.zeta = ex(g);
    r.weight = std::exp(mu * r.zeta) / mu;
    return r;
}

double capital_cost_sample(const Randomization& rz, double k, double r, double horizon, double capital) {
    if (!(rz.zeta < horizon)) return 0.0;
    return rz.weight * k * std::exp(-(r + k) * rz.zeta) * capital;
}

Components mean_of(const std::vector<Components>& xs) {
    Components m;
    for (const auto& x : xs) {
        m.cva += x.cva;
        m.dva += x.dva;
        m.mva += x.mva;
        m.mla += x.mla;
        m.kva += x.kva;
    }
    double n = static_cast<double>(xs.size());
    m.cva /= n;
    m.dva /= n;
    m.mva /= n;
    m.mla /= n;
    m.kva /= n;
    return m;
}

double standard_error(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("standard_error: need at least two samples");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double var = ss / static_cast<double>(xs.size() - 1);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

Components standard_error(const std::vector<Components>& xs) {
    auto col = [&](double Components::*f) {
        std::vector<double> v;
        v.reserve(xs.size());
        for (const auto& x : xs) v.push_back(x.*f);
        return standard_error(v);
    };
    return Components{col(&Components::cva), col(&Components::dva), col(&Components::mva), col(&Components::mla),
                      col(&Components::kva)};
}

XvaReport assemble_report(Setup setup, int reference, double nu0, const std::vector<Components>& samples) {
    XvaReport r;
    r.setup = setup;
    r.reference = reference;
    r.nu0 = nu0;
    r.n_paths = static_cast<long>(samples.size());
    Components m = mean_of(samples);
    Components se = standard_error(samples);
    std::vector<double> tot;
    tot.reserve(samples.size());
    for (const auto& x : samples) tot.push_back(x.total());
    r.value = Components{m.cva * kBp, m.dva * kBp, m.mva * kBp, m.mla * kBp, m.kva * kBp};
    r.se = Components{se.cva * kBp, se.dva * kBp, se.mva * kBp, se.mla * kBp, se.kva * kBp};
    r.total = r.value.total();
    r.total_se = standard_error(tot) * kBp;
    return r;
}

XvaReport ccva_estimate(const Scenario& s, const RunOptions& o, std::vector<Components>* samples) {
    validate_scenario(s);
    Model m(s, s.ccp.margin);
    Diagnostics diag;
    auto out = run_paths(o, diag, [&](std::uint64_t p, Diagnostics& d) {
        PathWorld w = simulate_world(m, o.seed, p, m.margin.delta(), true);
        CcpPath cp(m, w, d);
        return cp.run();
    });
    XvaReport r = assemble_report(Setup::ccp, s.reference, m.pos.nu0, out);
    r.diag = diag;
    if (samples) *samples = std::move(out);
    return r;
}

XvaReport bva_estimate(const Scenario& s, const RunOptions& o, std::vector<Components>* samples) {
    validate_scenario(s);
    Model m(s, s.csa.margin);
    Diagnostics diag;
    auto out = run_paths(o, diag, [&](std::uint64_t p, Diagnostics& d) {
        PathWorld w = simulate_world(m, o.seed, p, m.margin.delta(), false);
        (void)d;
        return csa_path(m, w);
    });
    XvaReport r = assemble_report(Setup::csa, s.reference, m.pos.nu0, out);
    r.diag = diag;
    if (samples) *samples = std::move(out);
    return r;
}

XvaReport estimate(const Scenario& s, std::vector<Components>* samples) {
    return s.setup == Setup::ccp ? ccva_estimate(s, options_from(s), samples) : bva_estimate(s, options_from(s), samples);
}

}  // namespace ccva
