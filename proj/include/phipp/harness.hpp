#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "phipp/copulas.hpp"
#include "phipp/gof.hpp"

namespace phipp {

/// Everything a command run needs; serialised into the report for
/// reproducibility.
struct RunConfig {
    std::string divergence = "chi2";
    double alpha = 0.9;
    QAlphaMode q_mode = QAlphaMode::PaperLiteral;
    std::optional<double> nu;
    OptimizerConfig annealing;
    std::uint64_t seed = 1;
    TestMode mode = TestMode::Elliptical;
    bool grid = false;
    int grid_resolution = 50;
    int sim_n = 50;

    PhiSpec phi() const { return PhiSpec::parse(divergence); }
    PursuitSettings settings() const { return {alpha, q_mode, nu, annealing}; }
    void validate() const;
};

/// Quantile functions of the simulation margins.
/// Gumbel is location/scale in the maximum convention; the exponential
/// parameter is a rate.
double gumbel_quantile(double u, double location, double scale);
double exponential_quantile(double u, double rate);

/// n observations with a Gaussian-copula(rho = 0.5) dependence and
/// Gumbel(-1, 1) x Exponential(2) margins.
Eigen::MatrixXd simulate_coupled_margins(int n, math::Rng& rng);

/// n observations from the plain product Gumbel(-1, 1) x Exponential(2).
Eigen::MatrixXd simulate_independent_margins(int n, math::Rng& rng);

struct CommandResult {
    std::string report_json;
    std::vector<std::pair<std::string, std::string>> grids;  // (name, csv)
};

/// Runs the configured test on a data matrix and renders the JSON report.
CommandResult cmd_test(const Eigen::MatrixXd& data, const RunConfig& config);
CommandResult cmd_test_csv(const std::string& csv_text, const RunConfig& config);

/// Reproduces one of the two synthetic studies end to end.
CommandResult cmd_sim(const std::string& which, RunConfig config);

/// Runs the elliptical pipeline with KL divergence on the log prices of the
/// embedded stock dataset and emits copula grids in the canonical and the
/// discovered bases.
CommandResult cmd_realdata(RunConfig config);

}  // namespace phipp
