#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "capital.hpp"
#include "credit.hpp"
#include "margining.hpp"
#include "market.hpp"

namespace ccva {

constexpr int kScenarioVersion = 1;

enum class Setup { ccp, csa };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MemberProfile {
    std::string label;
    double spread_3y = 0.0;  // bp
    double spread_5y = 0.0;  // bp
    double alpha = 0.0;
};

struct ExplicitShock {
    std::vector<int> members;
    std::vector<double> levels;  // one per marginal segment
};

struct ShockConfig {
    // "nested": sets of the k riskiest members for k in nested_sizes, each with
    // intensity fraction * (smallest marginal in the set); "explicit": `common`.
    std::string construction = "nested";
    std::vector<int> nested_sizes{2, 4, 6, 8, 9};
    double fraction = 0.10;
    std::vector<ExplicitShock> common;
};

struct FundingConfig {
    double lambda_bar_spread_multiple = 0.5;  // lambda_bar = multiple * reference spread
    double lambda = 0.0;
    double r_bar = 1.0;
    double mu_factor = 2.0;  // mu = mu_factor / maturity
};

struct CcpConfig {
    MarginConfig margin{};
    double recovery = 0.0;  // R of every member to the CCP
};

struct CsaConfig {
    MarginConfig margin{250, 12, 1.0, 15.0, 0.80, 0.0, 0.25};
    double recovery_bank = 0.40;
    double recovery_cpty = 0.40;
};

struct Scenario {
    int version = kScenarioVersion;
    std::string name = "base";
    SwapSpec swap;
    double payment_step = 0.25;
    int n_periods = 20;
    std::vector<MemberProfile> members;
    double cds_recovery = 0.40;
    ShockConfig shocks;
    FundingConfig funding;
    CcpConfig ccp;
    CsaConfig csa;
    CapitalParams capital;
    int reference = 0;
    Setup setup = Setup::ccp;
    long n_paths = 10000;
    std::uint64_t seed = 20160101;
    int workers = 1;
};

Scenario default_scenario();

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

// Throws ConfigError naming the violated invariant.
void validate_scenario(const Scenario& s);

struct Positions {
    std::vector<double> omega;
    double nu0 = 0.0;
};
Positions positions_from_alphas(const std::vector<double>& alphas, int reference);

// Calibrated swap for a scenario (schedule built, notional and strike set).
SwapSpec scenario_swap(const Scenario& s);

std::vector<PiecewiseIntensity> scenario_marginals(const Scenario& s);
ShockModel scenario_shock_model(const Scenario& s);

const char* setup_name(Setup s);
Setup parse_setup(const std::string& s);

}  // namespace ccva
