#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace ccva {

constexpr double kNever = std::numeric_limits<double>::infinity();

// Piecewise-constant intensity; levels[k] applies on [breaks[k-1], breaks[k]),
// the last level extends to infinity.
struct PiecewiseIntensity {
    std::vector<double> breaks;  // interior breakpoints, increasing
    std::vector<double> levels;  // breaks.size() + 1 levels

    double at(double t) const;
    double cumulative(double t) const;
    double integral(double a, double b) const { return cumulative(b) - cumulative(a); }
    // inf { t : cumulative(t) > e }
    double invert(double e) const;
};

PiecewiseIntensity flat_intensity(double level);

// Credit-triangle bootstrap from the 3y and 5y pillars (spreads in bp).
PiecewiseIntensity bootstrap_marginal_intensity(double spread3y_bp, double spread5y_bp, double recovery,
                                                double r = 0.0);

// Par spread (bp) of a CDS of maturity T under a hazard, continuous premium.
double cds_par_spread(const PiecewiseIntensity& h, double T, double recovery, double r);

struct ShockSpec {
    std::vector<int> members;
    PiecewiseIntensity intensity;
};

struct CommonShockInput {
    std::vector<int> members;
    PiecewiseIntensity intensity;
};

class ShockModel {
public:
    ShockModel() = default;
    ShockModel(int n_members, std::vector<ShockSpec> shocks);

    int n_members() const { return n_; }
    const std::vector<ShockSpec>& shocks() const { return shocks_; }
    double member_total_intensity(int i, double t) const;
    bool contains(std::size_t shock, int member) const;

private:
    int n_ = 0;
    std::vector<ShockSpec> shocks_;
    std::vector<std::vector<char>> member_of_;
};

// Adds idiosyncratic singletons so that each member keeps its marginal.
ShockModel build_shock_model(const std::vector<PiecewiseIntensity>& marginals,
                             const std::vector<CommonShockInput>& common);

struct DefaultDraw {
    std::vector<double> shock_times;
    std::vector<double> member_times;
    std::vector<int> first_shock;
};

DefaultDraw sample_default_times(const ShockModel& model, std::mt19937_64& g);

struct GroupIntensities {
    double cpty = 0.0;          // sum over shocks containing c
    double bank_not_cpty = 0.0; // containing b but not c
    double bank = 0.0;          // containing b
    double cpty_not_bank = 0.0; // containing c but not b
};

GroupIntensities group_intensities(const ShockModel& model, int bank, int cpty, double t);

}  // namespace ccva
