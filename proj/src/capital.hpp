#pragma once

#include <vector>

namespace ccva {

struct CapitalParams {
    double rw = 0.20;
    double cap_ratio = 0.08;
    double hurdle_k = 0.10;
    double floor_rate = 0.02;  // K^cm floor: cap_ratio * 2% of DFC
    double ccr_multiplier = 1.4;
    // rating table: default-probability thresholds and CVA weights
    std::vector<double> dp_thresholds{0.0, 0.0002, 0.0006, 0.0017, 0.0106, 0.0371, 0.1281};
    std::vector<double> rating_weights{0.007, 0.007, 0.008, 0.010, 0.020, 0.030, 0.100};
};

double k_ccp(const std::vector<double>& eads, const CapitalParams& p);

double k_cm(double dfc, double equity, double dfc_all, double k_ccp_value, const CapitalParams& p);

// Basel IRB capital weight.
double irb_weight(double dp, double recovery, double maturity);
double irb_correlation(double dp);

struct CcrInput {
    double dp = 0.0;
    double recovery = 0.0;
    double maturity = 0.0;
    double ead = 0.0;
};

double k_ccr(const std::vector<CcrInput>& cps, const CapitalParams& p);

double rating_weight(double dp, const CapitalParams& p);

// Supervisory discount factor (1 - e^{-0.05 T}) / (0.05 T).
double cva_discount(double maturity);

// Approximate standardised CVA charge (2.33/2) sum w T EAD~.
double k_cva(const std::vector<CcrInput>& cps, const CapitalParams& p);
// Unapproximated two-term square-root form.
double k_cva_exact(const std::vector<CcrInput>& cps, const CapitalParams& p);

// k * int_0^T e^{-(r+k)s} K0 ds for a constant capital profile.
double kva_constant(double k0, double hurdle_k, double r, double horizon);

}  // namespace ccva
