#include "ccva.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "experiments.hpp"

struct ccva_scenario {
    ccva::Scenario s;
};

struct ccva_result {
    ccva::Scenario s;
    ccva::XvaReport r;
};

namespace {

thread_local std::string g_error;

int fail(int code, const char* what) {
    g_error = what;
    return code;
}

template <class F>
int guarded(F&& f) {
    try {
        g_error.clear();
        f();
        return CCVA_OK;
    } catch (const ccva::ConfigError& e) {
        return fail(CCVA_CONFIG_ERROR, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CCVA_CONFIG_ERROR, e.what());
    } catch (const std::exception& e) {
        return fail(CCVA_RUNTIME_ERROR, e.what());
    } catch (...) {
        return fail(CCVA_RUNTIME_ERROR, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

ccva_components to_c(const ccva::Components& c, double total) {
    return ccva_components{c.cva, c.dva, c.mva, c.mla, c.kva, total};
}

#define CCVA_REQUIRE(cond, msg) \
    if (!(cond)) return fail(CCVA_CONFIG_ERROR, msg)

}  // namespace

extern "C" {

const char* ccva_last_error(void) { return g_error.c_str(); }

int ccva_scenario_default(ccva_scenario** out) {
    CCVA_REQUIRE(out, "null output pointer");
    return guarded([&] { *out = new ccva_scenario{ccva::default_scenario()}; });
}

int ccva_scenario_load(const char* path, ccva_scenario** out) {
    CCVA_REQUIRE(path && out, "null argument");
    return guarded([&] { *out = new ccva_scenario{ccva::load_scenario(path)}; });
}

int ccva_scenario_parse(const char* json_text, ccva_scenario** out) {
    CCVA_REQUIRE(json_text && out, "null argument");
    return guarded([&] { *out = new ccva_scenario{ccva::parse_scenario(json_text)}; });
}

void ccva_scenario_free(ccva_scenario* s) { delete s; }

int ccva_scenario_validate(const ccva_scenario* s) {
    CCVA_REQUIRE(s, "null scenario");
    return guarded([&] { ccva::validate_scenario(s->s); });
}

int ccva_scenario_to_json(const ccva_scenario* s, char** out) {
    CCVA_REQUIRE(s && out, "null argument");
    return guarded([&] { *out = dup(ccva::serialize_scenario(s->s)); });
}

int ccva_scenario_set_setup(ccva_scenario* s, const char* setup) {
    CCVA_REQUIRE(s && setup, "null argument");
    return guarded([&] { s->s.setup = ccva::parse_setup(setup); });
}

int ccva_scenario_set_reference(ccva_scenario* s, int index) {
    CCVA_REQUIRE(s, "null scenario");
    CCVA_REQUIRE(index >= 0 && static_cast<std::size_t>(index) < s->s.members.size(), "reference member out of range");
    s->s.reference = index;
    return CCVA_OK;
}

int ccva_scenario_set_paths(ccva_scenario* s, long paths) {
    CCVA_REQUIRE(s, "null scenario");
    CCVA_REQUIRE(paths >= 2, "paths must be at least 2");
    s->s.n_paths = paths;
    return CCVA_OK;
}

int ccva_scenario_set_seed(ccva_scenario* s, uint64_t seed) {
    CCVA_REQUIRE(s, "null scenario");
    s->s.seed = seed;
    return CCVA_OK;
}

int ccva_scenario_set_workers(ccva_scenario* s, int workers) {
    CCVA_REQUIRE(s, "null scenario");
    CCVA_REQUIRE(workers >= 1, "workers must be at least 1");
    s->s.workers = workers;
    return CCVA_OK;
}

int ccva_scenario_set_margin(ccva_scenario* s, const char* setup, double delta_days, double quantile) {
    CCVA_REQUIRE(s && setup, "null argument");
    CCVA_REQUIRE(delta_days >= 0.0, "liquidation period must be nonnegative");
    CCVA_REQUIRE(quantile > 0.0 && quantile < 1.0, "quantile must lie in (0,1)");
    return guarded([&] {
        auto& m = ccva::parse_setup(setup) == ccva::Setup::ccp ? s->s.ccp.margin : s->s.csa.margin;
        m.delta_days = delta_days;
        m.quantile_a = quantile;
    });
}

int ccva_run(const ccva_scenario* s, ccva_result** out) {
    CCVA_REQUIRE(s && out, "null argument");
    return guarded([&] { *out = new ccva_result{s->s, ccva::estimate(s->s)}; });
}

int ccva_result_values(const ccva_result* r, ccva_components* value, ccva_components* se) {
    CCVA_REQUIRE(r, "null result");
    if (value) *value = to_c(r->r.value, r->r.total);
    if (se) *se = to_c(r->r.se, r->r.total_se);
    return CCVA_OK;
}

int ccva_result_diagnostics(const ccva_result* r, ccva_diagnostics* d) {
    CCVA_REQUIRE(r && d, "null argument");
    const auto& g = r->r.diag;
    *d = ccva_diagnostics{g.liquidations, g.uncovered, g.max_conservation_error, g.max_clearing_error};
    return CCVA_OK;
}

double ccva_result_nu0(const ccva_result* r) { return r ? r->r.nu0 : 0.0; }

int ccva_result_csv(const ccva_result* r, char** out) {
    CCVA_REQUIRE(r && out, "null argument");
    return guarded([&] { *out = dup(ccva::report_csv(r->r, r->s)); });
}

void ccva_result_free(ccva_result* r) { delete r; }

int ccva_table_csv(const ccva_scenario* s, const char* table_id, char** out) {
    CCVA_REQUIRE(s && table_id && out, "null argument");
    return guarded([&] {
        auto id = ccva::parse_table_id(table_id);
        ccva::validate_scenario(s->s);
        *out = dup(ccva::table_csv(ccva::run_table(id, s->s, ccva::options_from(s->s))));
    });
}

int ccva_sweep_csv(const ccva_scenario* s, double a_min, double a_max, int steps, char** out) {
    CCVA_REQUIRE(s && out, "null argument");
    return guarded([&] {
        ccva::validate_scenario(s->s);
        auto grid = ccva::sweep_grid(a_min, a_max, steps);
        *out = dup(ccva::sweep_csv(ccva::sweep_quantile(s->s, grid, ccva::options_from(s->s))));
    });
}

void ccva_string_free(char* p) { std::free(p); }

}  // extern "C"
