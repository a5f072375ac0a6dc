#include "market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace ccva {

namespace {
constexpr double kTimeTol = 1e-12;
}

double discount_factor(double r, double t) {
    if (t < 0.0) throw std::invalid_argument("discount_factor: negative time");
    return std::exp(-r * t);
}

std::vector<double> regular_schedule(double step, int n) {
    std::vector<double> s;
    for (int l = 1; l <= n; ++l) s.push_back(step * l);
    return s;
}

std::pair<double, double> leg_values(const SwapSpec& spec) {
    double fixed = 0.0, floating = 0.0;
    for (std::size_t l = 0; l < spec.schedule.size(); ++l) {
        double b = discount_factor(spec.r, spec.schedule[l]) * spec.accrual(l);
        fixed += b;
        floating += b * std::exp(spec.kappa * spec.fixing_date(l));
    }
    return {spec.notional * spec.strike * fixed, spec.notional * spec.s0 * floating};
}

void calibrate_swap(SwapSpec& spec) {
    if (spec.schedule.empty()) throw std::invalid_argument("calibrate_swap: empty schedule");
    for (std::size_t l = 0; l < spec.schedule.size(); ++l)
        if (spec.accrual(l) <= 0.0) throw std::invalid_argument("calibrate_swap: schedule not increasing");
    double fixed = 0.0, floating = 0.0;
    for (std::size_t l = 0; l < spec.schedule.size(); ++l) {
        double b = discount_factor(spec.r, spec.schedule[l]) * spec.accrual(l);
        fixed += b;
        floating += b * std::exp(spec.kappa * spec.fixing_date(l));
    }
    if (fixed <= 0.0 || floating <= 0.0 || spec.s0 <= 0.0)
        throw std::invalid_argument("calibrate_swap: degenerate annuity");
    spec.notional = 1.0 / (spec.s0 * floating);
    spec.strike = 1.0 / (spec.notional * fixed);
}

SwapPricer::SwapPricer(const SwapSpec& spec) : spec_(spec) {
    std::size_t d = spec.schedule.size();
    fixed_suffix_.assign(d + 1, 0.0);
    float_suffix_.assign(d + 1, 0.0);
    for (std::size_t l = d; l-- > 0;) {
        double b = discount_factor(spec.r, spec.schedule[l]) * spec.accrual(l);
        fixed_suffix_[l] = fixed_suffix_[l + 1] + b;
        float_suffix_[l] = float_suffix_[l + 1] + b * std::exp(spec.kappa * spec.fixing_date(l));
    }
}

std::size_t SwapPricer::next_payment(double t) const {
    auto it = std::upper_bound(spec_.schedule.begin(), spec_.schedule.end(), t + kTimeTol);
    return static_cast<std::size_t>(it - spec_.schedule.begin());
}

double SwapPricer::coef_a(double t) const {
    std::size_t l = next_payment(t);
    if (l >= spec_.schedule.size()) return 0.0;
    return spec_.notional * std::exp(spec_.r * t) * spec_.strike * fixed_suffix_[l + 1];
}

double SwapPricer::coef_b(double t) const {
    std::size_t l = next_payment(t);
    if (l >= spec_.schedule.size()) return 0.0;
    return spec_.notional * std::exp((spec_.r - spec_.kappa) * t) * float_suffix_[l + 1];
}

double SwapPricer::clean_value(double t, double s) const {
    if (t > spec_.maturity() + kTimeTol) throw std::invalid_argument("clean_value: t beyond maturity");
    return coef_a(t) - coef_b(t) * s;
}

double SwapPricer::mtm(double t, double s, double s_fix) const {
    std::size_t l = next_payment(t);
    if (l >= spec_.schedule.size()) return 0.0;
    double acc = spec_.notional * std::exp(-spec_.r * (spec_.schedule[l] - t)) * spec_.accrual(l) *
                 (spec_.strike - s_fix);
    return acc + clean_value(t, s);
}

double SwapPricer::forward_annuity(double v) const {
    auto it = std::upper_bound(spec_.schedule.begin(), spec_.schedule.end(), v + kTimeTol);
    std::size_t first = static_cast<std::size_t>(it - spec_.schedule.begin());
    // periods whose fixing date T_{l-1} > v start at l = first + 1
    if (first + 1 > spec_.schedule.size()) return 0.0;
    return spec_.notional * std::exp(spec_.r * v) * float_suffix_[first + 1];
}

double SwapPricer::coupon(std::size_t l, double s_fix) const {
    return spec_.notional * spec_.accrual(l) * (spec_.strike - s_fix);
}

DriverPath::DriverPath(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size()) throw std::invalid_argument("DriverPath: size mismatch");
    if (!std::is_sorted(times_.begin(), times_.end())) throw std::invalid_argument("DriverPath: unsorted grid");
}

std::size_t DriverPath::locate(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t - kTimeTol);
    return static_cast<std::size_t>(it - times_.begin());
}

bool DriverPath::has(double t) const {
    std::size_t j = locate(t);
    return j < times_.size() && std::abs(times_[j] - t) <= kTimeTol;
}

double DriverPath::at(double t) const {
    std::size_t j = locate(t);
    if (j >= times_.size() || std::abs(times_[j] - t) > kTimeTol)
        throw std::out_of_range("DriverPath: time not on grid");
    return values_[j];
}

double DriverPath::before(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t + kTimeTol);
    if (it == times_.begin()) throw std::out_of_range("DriverPath: time before grid start");
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

DriverPath simulate_driver(const SwapSpec& spec, const std::vector<double>& grid,
                           const std::vector<double>& z) {
    if (grid.empty() || grid.front() != 0.0) throw std::invalid_argument("simulate_driver: grid must start at 0");
    if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("simulate_driver: unsorted grid");
    if (z.size() + 1 < grid.size()) throw std::invalid_argument("simulate_driver: not enough normals");
    std::vector<double> v(grid.size());
    double x = std::log(spec.s0);
    v[0] = spec.s0;
    double drift = spec.kappa - 0.5 * spec.sigma * spec.sigma;
    for (std::size_t j = 1; j < grid.size(); ++j) {
        double dt = grid[j] - grid[j - 1];
        x += drift * dt + spec.sigma * std::sqrt(dt) * z[j - 1];
        v[j] = std::exp(x);
    }
    return DriverPath(grid, std::move(v));
}

DriverPath simulate_driver(const SwapSpec& spec, const std::vector<double>& grid, std::uint64_t seed,
                           std::uint64_t path_index) {
    auto g = substream(seed, path_index, Stream::driver);
    return simulate_driver(spec, grid, normals(g, grid.empty() ? 0 : grid.size() - 1));
}

DriverPath insert_times(const SwapSpec& spec, const DriverPath& path, std::vector<double> extra,
                        const std::vector<double>& z) {
    std::sort(extra.begin(), extra.end());
    std::vector<double> t = path.times();
    std::vector<double> v = path.values();
    std::size_t used = 0;
    for (double e : extra) {
        auto it = std::lower_bound(t.begin(), t.end(), e - kTimeTol);
        if (it != t.end() && std::abs(*it - e) <= kTimeTol) continue;
        if (it == t.end()) throw std::out_of_range("insert_times: time beyond path");
        std::size_t j = static_cast<std::size_t>(it - t.begin());
        double t0 = t[j - 1], t1 = t[j];
        double x0 = std::log(v[j - 1]), x1 = std::log(v[j]);
        double w = (e - t0) / (t1 - t0);
        double sd = spec.sigma * std::sqrt((e - t0) * (t1 - e) / (t1 - t0));
        if (used >= z.size()) throw std::invalid_argument("insert_times: not enough normals");
        double x = x0 + w * (x1 - x0) + sd * z[used++];
        t.insert(t.begin() + static_cast<std::ptrdiff_t>(j), e);
        v.insert(v.begin() + static_cast<std::ptrdiff_t>(j), std::exp(x));
    }
    return DriverPath(std::move(t), std::move(v));
}

double swap_mtm(const SwapPricer& pricer, double t, const DriverPath& path) {
    std::size_t l = pricer.next_payment(t);
    const auto& spec = pricer.spec();
    if (l >= spec.schedule.size()) return 0.0;
    double fix_date = spec.fixing_date(l);
    if (!path.has(fix_date)) throw std::out_of_range("swap_mtm: missing fixing");
    return pricer.mtm(t, path.at(t), path.at(fix_date));
}

double unpaid_dividends(const SwapPricer& pricer, double tau, double t, const DriverPath& path,
                        double position) {
    if (t < tau) throw std::invalid_argument("unpaid_dividends: t < tau");
    const auto& spec = pricer.spec();
    double acc = 0.0;
    for (std::size_t l = 0; l < spec.schedule.size(); ++l) {
        double tl = spec.schedule[l];
        if (tl < tau - kTimeTol || tl > t + kTimeTol) continue;
        double fix = spec.fixing_date(l);
        if (!path.has(fix)) throw std::out_of_range("unpaid_dividends: missing fixing");
        acc += std::exp(spec.r * (t - tl)) * position * pricer.coupon(l, path.at(fix));
    }
    return acc;
}

std::vector<double> base_grid(const SwapSpec& spec, int steps_per_year, int resets_per_year) {
    double T = spec.maturity();
    std::vector<double> g;
    long n = std::lround(T * steps_per_year);
    for (long j = 0; j <= n; ++j) g.push_back(static_cast<double>(j) / steps_per_year);
    g.insert(g.end(), spec.schedule.begin(), spec.schedule.end());
    if (resets_per_year > 0) {
        long m = static_cast<long>(std::floor(T * resets_per_year + 1e-9));
        for (long j = 0; j <= m; ++j) g.push_back(static_cast<double>(j) / resets_per_year);
    }
    std::sort(g.begin(), g.end());
    std::vector<double> out;
    for (double t : g) {
        if (t > T + kTimeTol) continue;
        if (!out.empty() && std::abs(t - out.back()) <= kTimeTol) continue;
        out.push_back(t);
    }
    return out;
}

}  // namespace ccva
