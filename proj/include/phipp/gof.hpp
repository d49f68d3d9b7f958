#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phipp/errors.hpp"
#include "phipp/pursuit.hpp"

namespace phipp {

enum class TestMode { Elliptical, Independence };
enum class QAlphaMode { PaperLiteral, Strict };

std::string to_string(TestMode mode);
std::string to_string(QAlphaMode mode);

/// Per-step outcome of the pursuit: the discovered direction, the divergence
/// estimate and the ellipsoid test of H0 "this step's divergence is zero".
struct TestReport {
    int step_index = 0;
    Eigen::VectorXd direction;           // original coordinates, unit, sign canon
    Eigen::VectorXd direction_whitened;  // search coordinates
    double divergence_estimate = 0.0;    // B1 - B2 at the direction
    double statistic = 0.0;              // Var^{-1/2} P_n M, the threshold scale
    double zscore = 0.0;                 // sqrt(n)-normalised, ~N(0,1) under H0
    double threshold = 0.0;              // q_alpha / sqrt(n)
    bool accepted = false;
    double p_value = 0.0;
    TestMode mode = TestMode::Elliptical;
    int n_used = 0;
    bool optimizer_degraded = false;
};

struct StatisticValue {
    double statistic = 0.0;  // sqrt(n) Var^{-1/2} P_n M(b, b)
    double variance = 0.0;   // sample variance of the M values
    double mean = 0.0;       // P_n M(b, b)
    int n = 0;
};

/// sqrt(n)-normalised statistic of P_n M(b,b) over the f sample; its limit
/// law under H0 is standard normal.
StatisticValue test_statistic(const PursuitState& state, const Eigen::VectorXd& b);

/// q_alpha / sqrt(n), the acceptance bound of the confidence ellipsoid.
double ellipsoid_threshold(double alpha, std::size_t n, double q_alpha);

/// The paper-literal quantile 0.2533 at alpha = 0.9, or the standard normal
/// upper-alpha quantile in strict mode.
double resolve_q_alpha(double alpha, QAlphaMode mode);

inline bool ellipsoid_member(double statistic, double threshold) {
    if (!(threshold > 0.0)) throw DomainError("ellipsoid_member: threshold must be positive");
    return statistic <= threshold;
}

/// Two-sided tail probability under the standard normal limit law.
double p_value(double statistic);

struct PursuitSettings {
    double alpha = 0.9;
    QAlphaMode q_mode = QAlphaMode::PaperLiteral;
    std::optional<double> nu;  // truncation exponent, defaults to 1/(2(4+d))
    OptimizerConfig optimizer;
};

struct PursuitOutcome {
    std::vector<TestReport> reports;
    bool verdict = false;
    WhitenTransform transform;
    PursuitState state;  // final g^(d) state, whitened coordinates
};

/// Whitens (full covariance in elliptical mode, per-coordinate in
/// independence mode), truncates, then alternates direction search,
/// ellipsoid test and state update for exactly d steps.
PursuitOutcome run_pursuit(const Eigen::MatrixXd& data, TestMode mode, const PhiSpec& spec,
                           const PursuitSettings& settings, math::Rng& rng);

struct GofResult {
    std::vector<TestReport> reports;
    bool verdict = false;
    WhitenTransform transform;
};

/// H0: the copula of the data equals the copula of the fitted Gaussian in
/// the discovered basis.
GofResult elliptical_copula_test(const Eigen::MatrixXd& data, const PhiSpec& spec,
                                 const PursuitSettings& settings, math::Rng& rng);

/// H0: the data density is the product of its margins in the discovered
/// basis.
GofResult independence_test(const Eigen::MatrixXd& data, const PhiSpec& spec,
                            const PursuitSettings& settings, math::Rng& rng);

/// Block decomposition of the copula density implied by the accepted steps:
/// the index range {1..d} splits after every accepted step (the final step
/// is always a boundary). flat is true when every step accepted, in which
/// case the copula density is identically 1 in the discovered basis.
struct CopulaFactorization {
    std::vector<std::pair<int, int>> blocks;  // 1-based inclusive ranges
    bool flat = false;
};

CopulaFactorization copula_factorization(const std::vector<TestReport>& reports);

}  // namespace phipp
