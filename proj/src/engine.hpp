#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "scenario.hpp"

namespace ccva {

struct Components {
    double cva = 0.0;
    double dva = 0.0;
    double mva = 0.0;
    double mla = 0.0;
    double kva = 0.0;

    // entry-price aggregate, DVA excluded
    double total() const { return cva + mva + mla + kva; }
};

struct Diagnostics {
    long liquidations = 0;
    long uncovered = 0;
    double max_conservation_error = 0.0;
    double max_clearing_error = 0.0;
};

struct XvaReport {
    Setup setup = Setup::ccp;
    int reference = 0;
    double nu0 = 0.0;
    long n_paths = 0;
    Components value;  // bp
    Components se;     // bp
    double total = 0.0;
    double total_se = 0.0;
    Diagnostics diag;

    double rel_se(double v, double s) const { return v != 0.0 ? std::abs(s / v) : 0.0; }
};

struct RunOptions {
    long n_paths = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
};

RunOptions options_from(const Scenario& s);

// Randomised time: zeta ~ Exp(mu) and importance weight e^{mu zeta}/mu.
struct Randomization {
    double zeta = 0.0;
    double weight = 0.0;
};
Randomization draw_randomization(double mu, std::mt19937_64& g);

// One randomised sample of k int_0^T e^{-(r+k)s} K_s ds, given K at zeta.
double capital_cost_sample(const Randomization& rz, double hurdle_k, double r, double horizon, double capital);

XvaReport ccva_estimate(const Scenario& s, const RunOptions& o, std::vector<Components>* samples = nullptr);
XvaReport bva_estimate(const Scenario& s, const RunOptions& o, std::vector<Components>* samples = nullptr);
XvaReport estimate(const Scenario& s, std::vector<Components>* samples = nullptr);

Components mean_of(const std::vector<Components>& xs);
Components standard_error(const std::vector<Components>& xs);
double standard_error(const std::vector<double>& xs);

XvaReport assemble_report(Setup setup, int reference, double nu0, const std::vector<Components>& samples);

}  // namespace ccva
