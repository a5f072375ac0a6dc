#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ccva.h"

namespace {

struct Scenario {
    ccva_scenario* p = nullptr;
    ~Scenario() { ccva_scenario_free(p); }
};

struct Failure {
    int code;
};

void check(int rc) {
    if (rc == CCVA_OK) return;
    std::cerr << "error: " << ccva_last_error() << "\n";
    throw Failure{rc == CCVA_CONFIG_ERROR ? 1 : 2};
}

void emit(char* text, const std::string& out) {
    std::string s(text);
    ccva_string_free(text);
    if (out.empty() || out == "-") {
        std::cout << s;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f || !(f << s)) {
        std::cerr << "error: cannot write '" << out << "'\n";
        throw Failure{2};
    }
}

struct Common {
    std::string scenario;
    std::optional<std::string> setup;
    std::optional<int> reference;
    std::optional<long> paths;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;

    void add(CLI::App* c, bool need_scenario) {
        auto* o = c->add_option("--scenario", scenario, "scenario JSON file (default: built-in base case)");
        if (need_scenario) o->required();
        c->add_option("--setup", setup, "ccp or csa");
        c->add_option("--reference", reference, "reference member index");
        c->add_option("--paths", paths, "Monte Carlo paths");
        c->add_option("--seed", seed, "random seed");
        c->add_option("--workers", workers, "worker threads");
    }

    void load(Scenario& s) const {
        if (scenario.empty())
            check(ccva_scenario_default(&s.p));
        else
            check(ccva_scenario_load(scenario.c_str(), &s.p));
        if (setup) check(ccva_scenario_set_setup(s.p, setup->c_str()));
        if (reference) check(ccva_scenario_set_reference(s.p, *reference));
        if (paths) check(ccva_scenario_set_paths(s.p, *paths));
        if (seed) check(ccva_scenario_set_seed(s.p, *seed));
        if (workers) check(ccva_scenario_set_workers(s.p, *workers));
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Central clearing and bilateral XVA by randomized Monte Carlo"};
    app.require_subcommand(1);

    Common run_opts, table_opts, sweep_opts;
    std::string run_out, table_out, sweep_out, table_id;
    double a_min = 0.55, a_max = 0.995;
    int steps = 10;
    std::string validate_path;

    auto* run = app.add_subcommand("run", "estimate one XVA report");
    run_opts.add(run, false);
    run->add_option("--out", run_out, "output CSV (default stdout)");

    auto* table = app.add_subcommand("table", "reproduce a results table");
    table_opts.add(table, false);
    table->add_option("--id", table_id, "t0, t0bis, days or quantiles")->required();
    table->add_option("--out", table_out, "output directory (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "IM quantile sweep");
    sweep_opts.add(sweep, false);
    sweep->add_option("--a-min", a_min, "lowest quantile level");
    sweep->add_option("--a-max", a_max, "highest quantile level");
    sweep->add_option("--steps", steps, "grid points");
    sweep->add_option("--out", sweep_out, "output CSV (default stdout)");

    auto* validate = app.add_subcommand("validate", "check scenario invariants");
    validate->add_option("--scenario", validate_path, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        Scenario s;
        if (*run) {
            run_opts.load(s);
            check(ccva_scenario_validate(s.p));
            ccva_result* r = nullptr;
            check(ccva_run(s.p, &r));
            char* csv = nullptr;
            int rc = ccva_result_csv(r, &csv);
            ccva_result_free(r);
            check(rc);
            emit(csv, run_out);
        } else if (*table) {
            table_opts.load(s);
            char* csv = nullptr;
            check(ccva_table_csv(s.p, table_id.c_str(), &csv));
            std::string out = table_out;
            if (!out.empty()) {
                std::error_code ec;
                std::filesystem::create_directories(out, ec);
                if (ec) {
                    std::cerr << "error: cannot create '" << out << "': " << ec.message() << "\n";
                    ccva_string_free(csv);
                    return 2;
                }
                out = (std::filesystem::path(out) / (table_id + ".csv")).string();
            }
            emit(csv, out);
        } else if (*sweep) {
            sweep_opts.load(s);
            char* csv = nullptr;
            check(ccva_sweep_csv(s.p, a_min, a_max, steps, &csv));
            emit(csv, sweep_out);
        } else if (*validate) {
            check(ccva_scenario_load(validate_path.c_str(), &s.p));
            check(ccva_scenario_validate(s.p));
            std::cout << "ok\n";
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return 0;
}
