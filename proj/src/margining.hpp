#pragma once

#include <vector>

#include "market.hpp"

namespace ccva {

struct MarginConfig {
    int steps_per_year = 250;     // margin calls, h = 1 day
    int df_resets_per_year = 12;  // T = 1 month
    double equity_reset = 1.0;    // Y = 1 year
    double delta_days = 5.0;
    double quantile_a = 0.70;
    double fee_c = 0.0030;
    double equity_fraction = 0.25;

    double h() const { return 1.0 / steps_per_year; }
    double delta() const { return delta_days / steps_per_year; }
    double delta_prime() const { return delta() + h(); }
};

struct MemberAccounts {
    double vm = 0.0;
    double im = 0.0;
    double dfc = 0.0;
    bool alive = true;

    double collateral() const { return vm + im + dfc; }
};

// Shocked driver multipliers used by the IM proxy.
double im_shift_up(const SwapSpec& spec, double a, double delta_prime);
double im_shift_down(const SwapSpec& spec, double a, double delta_prime);

double initial_margin_proxy(const SwapPricer& pricer, double omega, double t, double s, double a,
                            double delta_prime);

// Closed-form expected residual exposures beyond a VaR-level IM over [v, v+delta'].
// up: the member loses when the driver rises (omega >= 0), down: omega <= 0.
// Expected residual at horizon v seen from t equals factor * (1-a) * e^{-kappa t} S_t.
struct EadFactors {
    double up = 0.0;
    double down = 0.0;
};
EadFactors ead_factors(const SwapPricer& pricer, double v, double a, double delta_prime);

// Per-unit expected shortfall terms of a standard lognormal move, exact.
double residual_up(double a, double s);
double residual_down(double a, double s);

// 1.4 * eps * sum of effective expected exposures, per |omega| and per unit
// of e^{-kappa t} S_t; the member's EAD is |omega| e^{-kappa t} S_t times this.
double ead_coefficient(const SwapPricer& pricer, double t, double a, double delta_prime, bool up,
                       double eps = 1.0 / 12.0);

double regulatory_ead(const SwapPricer& pricer, double omega, double t, double s, double a,
                      double delta_prime, double eps = 1.0 / 12.0);

// Fixed-order compensated summation.
double compensated_sum(const std::vector<double>& xs);

double default_fund_total(const std::vector<double>& eads);

std::vector<double> allocate_default_fund(double total, const std::vector<double>& ims);

struct BreachExposure {
    double raw = 0.0;       // epsilon_i
    double breach = 0.0;    // xi_i
    double closeout = 0.0;  // chi_i
};

BreachExposure member_breach_exposure(double q, double collateral, double recovery);

struct WaterfallResult {
    double equity = 0.0;
    double burned = 0.0;
    std::vector<double> refills;
    bool uncovered = false;
};

WaterfallResult waterfall_apply(double equity, double breach, const std::vector<double>& survivor_dfc);

double unfunded_contribution(double period_refills, double dfc_start);

}  // namespace ccva
