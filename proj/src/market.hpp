#pragma once

#include <cstdint>
#include <vector>

namespace ccva {

constexpr double kDaysPerYear = 250.0;

struct SwapSpec {
    double s0 = 100.0;
    double kappa = 0.12;
    double sigma = 0.20;
    double r = 0.02;
    std::vector<double> schedule;  // T_1..T_d, T_0 = 0 implied
    double notional = 0.0;
    double strike = 0.0;

    double maturity() const { return schedule.empty() ? 0.0 : schedule.back(); }
    double accrual(std::size_t l) const { return schedule[l] - (l == 0 ? 0.0 : schedule[l - 1]); }
    double fixing_date(std::size_t l) const { return l == 0 ? 0.0 : schedule[l - 1]; }
};

double discount_factor(double r, double t);

// Quarterly (or any) regular schedule of n periods of length step.
std::vector<double> regular_schedule(double step, int n);

// Fills notional and strike so that both legs are worth one at t=0.
void calibrate_swap(SwapSpec& spec);

// Leg values at t=0 (fixed, floating), used to check the calibration.
std::pair<double, double> leg_values(const SwapSpec& spec);

// Precomputed annuity suffix sums; all pricing goes through this.
class SwapPricer {
public:
    explicit SwapPricer(const SwapSpec& spec);

    const SwapSpec& spec() const { return spec_; }

    // index of the smallest T_l > t (== d when t >= T_d)
    std::size_t next_payment(double t) const;

    // P*(t,s) = A(t) - B(t) s, Nom included
    double clean_value(double t, double s) const;
    double coef_a(double t) const;
    double coef_b(double t) const;

    // full value with accrual of the running period fixed at s_fix
    double mtm(double t, double s, double s_fix) const;

    // Nom * e^{rt} * sum over periods with fixing date > v of beta_{T_l} h_l e^{kappa T_{l-1}}
    double forward_annuity(double v) const;

    // coupon paid at T_l (0-based l), per unit position
    double coupon(std::size_t l, double s_fix) const;

private:
    SwapSpec spec_;
    std::vector<double> fixed_suffix_;  // sum_{m>=l} beta_{T_m} h_m
    std::vector<double> float_suffix_;  // sum_{m>=l} beta_{T_m} h_m e^{kappa T_{m-1}}
};

// Simulated driver, stored as log-levels on a sorted grid.
class DriverPath {
public:
    DriverPath() = default;
    DriverPath(std::vector<double> times, std::vector<double> values);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

    // exact lookup; throws if t is not a grid time
    double at(double t) const;
    bool has(double t) const;
    // value at the last grid time <= t
    double before(double t) const;

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::size_t locate(double t) const;
};

// Exact GBM sampling on an arbitrary sorted grid, normals from `normals`.
DriverPath simulate_driver(const SwapSpec& spec, const std::vector<double>& grid,
                           const std::vector<double>& normals);
DriverPath simulate_driver(const SwapSpec& spec, const std::vector<double>& grid, std::uint64_t seed,
                           std::uint64_t path_index);

// Inserts extra times into a path by exact Brownian-bridge sampling.
DriverPath insert_times(const SwapSpec& spec, const DriverPath& path, std::vector<double> extra,
                        const std::vector<double>& normals);

// Full mark-to-market of one unit of the receive-fixed swap along a path.
double swap_mtm(const SwapPricer& pricer, double t, const DriverPath& path);

// Capitalised coupons with payment date in [tau, t], times `position`.
double unpaid_dividends(const SwapPricer& pricer, double tau, double t, const DriverPath& path,
                        double position);

// Base grid: daily steps, payment dates, monthly reset dates.
std::vector<double> base_grid(const SwapSpec& spec, int steps_per_year, int resets_per_year);

}  // namespace ccva
