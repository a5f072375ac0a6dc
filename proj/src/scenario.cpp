#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace ccva {

using nlohmann::json;

namespace {

const std::vector<double> kSpreads{45, 52, 56, 61, 73, 108, 176, 367, 1053};
const std::vector<double> kAlphas{-0.46, 0.09, 0.23, -0.05, 0.34, -0.04, 0.69, -0.44, -0.36};

json margin_json(const MarginConfig& m) {
    return json{{"margin_calls_per_year", m.steps_per_year},
                {"df_resets_per_year", m.df_resets_per_year},
                {"equity_reset_years", m.equity_reset},
                {"liquidation_days", m.delta_days},
                {"quantile", m.quantile_a},
                {"fee_c", m.fee_c},
                {"equity_fraction", m.equity_fraction}};
}

MarginConfig margin_from(const json& j, MarginConfig m) {
    m.steps_per_year = j.value("margin_calls_per_year", m.steps_per_year);
    m.df_resets_per_year = j.value("df_resets_per_year", m.df_resets_per_year);
    m.equity_reset = j.value("equity_reset_years", m.equity_reset);
    m.delta_days = j.value("liquidation_days", m.delta_days);
    m.quantile_a = j.value("quantile", m.quantile_a);
    m.fee_c = j.value("fee_c", m.fee_c);
    m.equity_fraction = j.value("equity_fraction", m.equity_fraction);
    return m;
}

template <class T>
T req(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

const char* setup_name(Setup s) { return s == Setup::ccp ? "ccp" : "csa"; }

Setup parse_setup(const std::string& s) {
    if (s == "ccp") return Setup::ccp;
    if (s == "csa") return Setup::csa;
    throw ConfigError("unknown setup '" + s + "'");
}

Scenario default_scenario() {
    Scenario s;
    s.swap.s0 = 100.0;
    s.swap.kappa = 0.12;
    s.swap.sigma = 0.20;
    s.swap.r = 0.02;
    for (std::size_t i = 0; i < kSpreads.size(); ++i)
        s.members.push_back({"m" + std::to_string(static_cast<int>(kSpreads[i])), kSpreads[i], kSpreads[i], kAlphas[i]});
    s.reference = 3;
    return s;
}

std::string serialize_scenario(const Scenario& s) {
    json j;
    j["version"] = s.version;
    j["name"] = s.name;
    j["swap"] = {{"s0", s.swap.s0}, {"kappa", s.swap.kappa}, {"sigma", s.swap.sigma},
                 {"r", s.swap.r}, {"payment_step", s.payment_step}, {"n_periods", s.n_periods}};
    json mem = json::array();
    for (const auto& m : s.members)
        mem.push_back({{"label", m.label}, {"spread_3y_bp", m.spread_3y}, {"spread_5y_bp", m.spread_5y}, {"alpha", m.alpha}});
    j["members"] = mem;
    j["cds_recovery"] = s.cds_recovery;
    json sh{{"construction", s.shocks.construction}, {"nested_sizes", s.shocks.nested_sizes},
            {"fraction", s.shocks.fraction}};
    json common = json::array();
    for (const auto& c : s.shocks.common) common.push_back({{"members", c.members}, {"levels", c.levels}});
    sh["common"] = common;
    j["shocks"] = sh;
    j["funding"] = {{"lambda_bar_spread_multiple", s.funding.lambda_bar_spread_multiple},
                    {"lambda", s.funding.lambda},
                    {"r_bar", s.funding.r_bar},
                    {"mu_factor", s.funding.mu_factor}};
    j["ccp"] = {{"margin", margin_json(s.ccp.margin)}, {"recovery", s.ccp.recovery}};
    j["csa"] = {{"margin", margin_json(s.csa.margin)},
                {"recovery_bank", s.csa.recovery_bank},
                {"recovery_cpty", s.csa.recovery_cpty}};
    j["capital"] = {{"rw", s.capital.rw},
                    {"cap_ratio", s.capital.cap_ratio},
                    {"hurdle_k", s.capital.hurdle_k},
                    {"floor_rate", s.capital.floor_rate},
                    {"ccr_multiplier", s.capital.ccr_multiplier},
                    {"dp_thresholds", s.capital.dp_thresholds},
                    {"rating_weights", s.capital.rating_weights}};
    j["run"] = {{"reference", s.reference}, {"setup", setup_name(s.setup)}, {"paths", s.n_paths},
                {"seed", s.seed}, {"workers", s.workers}};
    return j.dump(2) + "\n";
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed scenario: ") + e.what());
    }
    try {
        Scenario s;
        s.version = req<int>(j, "version");
        if (s.version != kScenarioVersion)
            throw ConfigError("unsupported scenario version " + std::to_string(s.version));
        s.name = j.value("name", s.name);
        const auto& sw = req<json>(j, "swap");
        s.swap.s0 = req<double>(sw, "s0");
        s.swap.kappa = req<double>(sw, "kappa");
        s.swap.sigma = req<double>(sw, "sigma");
        s.swap.r = req<double>(sw, "r");
        s.payment_step = sw.value("payment_step", s.payment_step);
        s.n_periods = sw.value("n_periods", s.n_periods);
        for (const auto& m : req<json>(j, "members")) {
            MemberProfile p;
            p.label = m.value("label", std::string());
            p.spread_3y = req<double>(m, "spread_3y_bp");
            p.spread_5y = m.value("spread_5y_bp", p.spread_3y);
            p.alpha = req<double>(m, "alpha");
            s.members.push_back(p);
        }
        s.cds_recovery = j.value("cds_recovery", s.cds_recovery);
        if (j.contains("shocks")) {
            const auto& sh = j.at("shocks");
            s.shocks.construction = sh.value("construction", s.shocks.construction);
            s.shocks.nested_sizes = sh.value("nested_sizes", s.shocks.nested_sizes);
            s.shocks.fraction = sh.value("fraction", s.shocks.fraction);
            if (sh.contains("common"))
                for (const auto& c : sh.at("common"))
                    s.shocks.common.push_back({req<std::vector<int>>(c, "members"), req<std::vector<double>>(c, "levels")});
        }
        if (j.contains("funding")) {
            const auto& f = j.at("funding");
            s.funding.lambda_bar_spread_multiple = f.value("lambda_bar_spread_multiple", s.funding.lambda_bar_spread_multiple);
            s.funding.lambda = f.value("lambda", s.funding.lambda);
            s.funding.r_bar = f.value("r_bar", s.funding.r_bar);
            s.funding.mu_factor = f.value("mu_factor", s.funding.mu_factor);
        }
        if (j.contains("ccp")) {
            const auto& c = j.at("ccp");
            if (c.contains("margin")) s.ccp.margin = margin_from(c.at("margin"), s.ccp.margin);
            s.ccp.recovery = c.value("recovery", s.ccp.recovery);
        }
        if (j.contains("csa")) {
            const auto& c = j.at("csa");
            if (c.contains("margin")) s.csa.margin = margin_from(c.at("margin"), s.csa.margin);
            s.csa.recovery_bank = c.value("recovery_bank", s.csa.recovery_bank);
            s.csa.recovery_cpty = c.value("recovery_cpty", s.csa.recovery_cpty);
        }
        if (j.contains("capital")) {
            const auto& c = j.at("capital");
            s.capital.rw = c.value("rw", s.capital.rw);
            s.capital.cap_ratio = c.value("cap_ratio", s.capital.cap_ratio);
            s.capital.hurdle_k = c.value("hurdle_k", s.capital.hurdle_k);
            s.capital.floor_rate = c.value("floor_rate", s.capital.floor_rate);
            s.capital.ccr_multiplier = c.value("ccr_multiplier", s.capital.ccr_multiplier);
            s.capital.dp_thresholds = c.value("dp_thresholds", s.capital.dp_thresholds);
            s.capital.rating_weights = c.value("rating_weights", s.capital.rating_weights);
        }
        if (j.contains("run")) {
            const auto& r = j.at("run");
            s.reference = r.value("reference", s.reference);
            s.setup = parse_setup(r.value("setup", std::string(setup_name(s.setup))));
            s.n_paths = r.value("paths", s.n_paths);
            s.seed = r.value("seed", s.seed);
            s.workers = r.value("workers", s.workers);
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad scenario field: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << serialize_scenario(s);
}

Positions positions_from_alphas(const std::vector<double>& alphas, int ref) {
    if (ref < 0 || static_cast<std::size_t>(ref) >= alphas.size())
        throw ConfigError("reference member out of range");
    double a0 = alphas[static_cast<std::size_t>(ref)];
    if (a0 == 0.0) throw ConfigError("reference member has alpha = 0");
    Positions p;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        double w = static_cast<int>(i) == ref ? -1.0 : -alphas[i] / a0;
        p.omega.push_back(w);
        if (static_cast<int>(i) != ref) p.nu0 += std::abs(w);
    }
    return p;
}

void validate_scenario(const Scenario& s) {
    if (s.members.size() < 2) throw ConfigError("at least two members are required");
    double sum = 0.0, scale = 0.0;
    for (const auto& m : s.members) {
        if (m.spread_3y <= 0.0 || m.spread_5y <= 0.0) throw ConfigError("member '" + m.label + "' has a nonpositive spread");
        sum += m.alpha;
        scale += std::abs(m.alpha);
    }
    if (std::abs(sum) > 1e-9 * std::max(1.0, scale))
        throw ConfigError("clearing consistency violated: sum of alphas is " + std::to_string(sum) + ", not 0");
    if (s.reference < 0 || static_cast<std::size_t>(s.reference) >= s.members.size())
        throw ConfigError("reference member out of range");
    if (s.members[static_cast<std::size_t>(s.reference)].alpha == 0.0) throw ConfigError("reference member has alpha = 0");
    if (s.swap.s0 <= 0.0 || s.swap.sigma < 0.0) throw ConfigError("swap: s0 must be > 0 and sigma >= 0");
    if (s.n_periods <= 0 || s.payment_step <= 0.0) throw ConfigError("swap: empty schedule");
    if (s.cds_recovery < 0.0 || s.cds_recovery >= 1.0) throw ConfigError("cds_recovery must be in [0,1)");
    for (const auto* m : {&s.ccp.margin, &s.csa.margin}) {
        if (!(m->quantile_a > 0.0 && m->quantile_a < 1.0)) throw ConfigError("margin quantile must be in (0,1)");
        if (m->fee_c < 0.0) throw ConfigError("margin fee must be >= 0");
        if (m->delta_days < 0.0 || m->steps_per_year <= 0) throw ConfigError("bad liquidation period or margin step");
    }
    if (s.funding.mu_factor <= 0.0) throw ConfigError("randomization rate must be > 0");
    if (s.capital.hurdle_k <= 0.0) throw ConfigError("hurdle rate must be > 0");
    if (s.capital.cap_ratio < 0.08) throw ConfigError("capital ratio must be >= 8%");
    if (s.capital.dp_thresholds.size() != s.capital.rating_weights.size())
        throw ConfigError("rating table sizes differ");
    if (s.n_paths < 2) throw ConfigError("at least two paths are required");
    if (s.workers < 1) throw ConfigError("workers must be >= 1");
    if (s.shocks.construction != "nested" && s.shocks.construction != "explicit" && s.shocks.construction != "none")
        throw ConfigError("unknown shock construction '" + s.shocks.construction + "'");
    try {
        scenario_shock_model(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SwapSpec scenario_swap(const Scenario& s) {
    SwapSpec sp = s.swap;
    sp.schedule = regular_schedule(s.payment_step, s.n_periods);
    calibrate_swap(sp);
    return sp;
}

std::vector<PiecewiseIntensity> scenario_marginals(const Scenario& s) {
    std::vector<PiecewiseIntensity> out;
    for (const auto& m : s.members) out.push_back(bootstrap_marginal_intensity(m.spread_3y, m.spread_5y, s.cds_recovery));
    return out;
}

ShockModel scenario_shock_model(const Scenario& s) {
    auto marg = scenario_marginals(s);
    std::vector<CommonShockInput> common;
    if (s.shocks.construction == "nested") {
        std::vector<int> order(s.members.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const auto& ma = s.members[static_cast<std::size_t>(a)];
            const auto& mb = s.members[static_cast<std::size_t>(b)];
            return ma.spread_3y + ma.spread_5y > mb.spread_3y + mb.spread_5y;
        });
        for (int k : s.shocks.nested_sizes) {
            if (k < 2 || static_cast<std::size_t>(k) > order.size())
                throw std::invalid_argument("nested shock size out of range");
            CommonShockInput c;
            c.members.assign(order.begin(), order.begin() + k);
            std::sort(c.members.begin(), c.members.end());
            c.intensity = marg[0];
            for (std::size_t seg = 0; seg < c.intensity.levels.size(); ++seg) {
                double lo = kNever;
                for (int m : c.members) lo = std::min(lo, marg[static_cast<std::size_t>(m)].levels[seg]);
                c.intensity.levels[seg] = s.shocks.fraction * lo;
            }
            common.push_back(c);
        }
    } else if (s.shocks.construction == "explicit") {
        for (const auto& e : s.shocks.common) {
            CommonShockInput c;
            c.members = e.members;
            c.intensity = marg[0];
            if (e.levels.size() != c.intensity.levels.size())
                throw std::invalid_argument("explicit shock needs one level per segment");
            c.intensity.levels = e.levels;
            common.push_back(c);
        }
    }
    return build_shock_model(marg, common);
}

}  // namespace ccva
