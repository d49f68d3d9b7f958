#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "phipp/densities.hpp"
#include "phipp/divergence.hpp"

namespace phipp {

/// Lower density threshold theta_m = m^{-nu} below which sample points are
/// discarded so the kernel plug-ins stay bounded away from zero.
struct TruncationRule {
    double nu;

    double theta(std::size_t m) const { return std::pow(static_cast<double>(m), -nu); }
    /// Midpoint of the admissible range (0, 1/(4+d)).
    static double default_nu(int d) { return 1.0 / (2.0 * (4.0 + d)); }
    static TruncationRule for_dim(int d) { return {default_nu(d)}; }
    void validate(int d) const;
};

struct OptimizerConfig {
    int annealing_proposals = 500;
    double cooling = 0.95;
    double proposal_step = 0.3;
    int temperature_probes = 20;
    int nelder_mead_iters = 100;
};

/// Discards X_i with f_m(X_i) < theta_m and Y_i with g(Y_i) < theta_m, where
/// f_m is a KDE over sample_f and g is the instrumental law (fitted to
/// sample_g when not supplied). The longer survivor list is trimmed to the
/// shorter, keeping original order.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> truncate(
    const Eigen::MatrixXd& sample_f, const Eigen::MatrixXd& sample_g, const TruncationRule& rule,
    const EllipticalDensity* instrumental = nullptr);

/// One accepted pursuit step: the direction and the 1-D kernel estimate of
/// the data projected on it. In whitened coordinates with orthonormal
/// directions the matching denominator is exactly N(0,1).
struct PursuitStep {
    Eigen::VectorXd direction;
    KernelDensity numerator;
};

/// The current instrumental density g^(k): a standard Gaussian base in
/// whitened coordinates deformed by k projection ratio factors, together
/// with the truncated data sample and a fresh sample of g^(k) itself.
///
/// The update factors and the sampler use the exact N(0,1) projection of
/// the base (valid for orthonormal directions in whitened coordinates);
/// the dual criterion works entirely with kernel plug-ins over the two
/// stored samples, evaluated leave-one-out at their own fitting points.
class PursuitState {
public:
    /// theta is the truncation level m^{-nu}; plug-in cutoffs are theta
    /// times the self-term floor of the matching kernel estimate.
    PursuitState(PhiSpec spec, Eigen::MatrixXd data_f, Eigen::MatrixXd data_g, double theta);

    int dim() const { return static_cast<int>(data_f_.cols()); }
    int step_count() const { return static_cast<int>(steps_.size()); }
    const std::vector<PursuitStep>& steps() const { return steps_; }
    const Eigen::MatrixXd& data_f() const { return data_f_; }
    const Eigen::MatrixXd& data_g() const { return data_g_; }
    const PhiSpec& phi() const { return spec_; }
    const KernelDensity& f_kde() const { return f_kde_; }
    const KernelDensity& g_kde() const { return g_kde_; }
    const EllipticalDensity& base() const { return base_; }
    double theta() const { return theta_; }
    double plugin_cutoff() const { return theta_ * f_kde_.self_term_floor(); }

    /// g^(k)(x) = g(x) prod_j f_hat_j(a_j'x) / phi(a_j'x).
    double pdf(const Eigen::VectorXd& x) const;

    /// Exact draw from pdf(): replace the components of a standard normal
    /// vector along each step direction by numerator draws.
    Eigen::VectorXd sample(math::Rng& rng) const;

    // plug-in caches over the stored samples (leave-one-out at own points)
    const Eigen::VectorXd& f_at_x() const { return f_at_x_; }
    const Eigen::VectorXd& f_at_y() const { return f_at_y_; }
    const Eigen::VectorXd& g_at_x() const { return g_at_x_; }
    const Eigen::VectorXd& g_at_y() const { return g_at_y_; }

    double cached_integral_term(const Eigen::VectorXd& b, const Eigen::VectorXd& a) const;

private:
    friend PursuitState update_state(const PursuitState& state, const Eigen::VectorXd& a,
                                     math::Rng& rng);

    void refresh_caches();

    PhiSpec spec_;
    Eigen::MatrixXd data_f_;
    Eigen::MatrixXd data_g_;
    double theta_;
    EllipticalDensity base_;
    KernelDensity f_kde_;
    KernelDensity g_kde_;
    std::vector<PursuitStep> steps_;
    Eigen::VectorXd f_at_x_, f_at_y_, g_at_x_, g_at_y_;
    using CacheKey = std::pair<std::vector<double>, std::vector<double>>;
    mutable std::map<CacheKey, double> integral_cache_;
};

/// Both Monte-Carlo halves of the empirical dual criterion
/// P_n M(b, a) = B1(b, a) - B2(b).
struct CriterionValue {
    double b1 = 0.0;
    double b2 = 0.0;
    int kept_x = 0;
    int kept_y = 0;
    double value() const { return b1 - b2; }
};

/// b drives the density ratio inside phi', a drives the projection factor.
/// Points whose d-dimensional plug-in falls below the truncation cutoff are
/// removed from the sums for this evaluation only.
CriterionValue evaluate_criterion(const PursuitState& state, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& a);

/// M(b, a, x): the (cached) integral term minus phi*(phi'(ratio_b(x))).
double m_term(const PursuitState& state, const Eigen::VectorXd& b, const Eigen::VectorXd& a,
              const Eigen::VectorXd& x);

/// B1(n,a) - B2(n,a): estimates D_phi(g^(k-1) f_a / g^(k-1)_a, f). The input
/// direction is unit-normalised and sign-canonicalised first, which makes the
/// estimate exactly invariant under rescaling of a.
double empirical_divergence(const PursuitState& state, const Eigen::VectorXd& a);

struct DirectionSearch {
    Eigen::VectorXd direction;
    double value = 0.0;
    bool degraded = false;
};

/// Inner maximiser of c -> P_n M(c, a) over the unit half-sphere orthogonal
/// to the prior steps; a itself is always probed, so the returned value
/// dominates the diagonal point.
DirectionSearch criterion_sup_inf(const PursuitState& state, const Eigen::VectorXd& a,
                                  const OptimizerConfig& opt, math::Rng& rng);

/// Minimises the empirical divergence over the unit half-sphere orthogonal
/// to the prior steps: simulated annealing with geometric cooling and a
/// Gaussian proposal, then Nelder-Mead refinement.
DirectionSearch find_direction(const PursuitState& state, const OptimizerConfig& opt,
                               math::Rng& rng);

/// Appends a step along a (projected onto the orthogonal complement of the
/// prior steps and renormalised) and regenerates the g^(k) sample so the
/// next step's Monte-Carlo sums target the updated instrumental density.
PursuitState update_state(const PursuitState& state, const Eigen::VectorXd& a, math::Rng& rng);

/// Rejection-draws n rows from the state's current pdf, keeping only draws
/// with pdf >= the plug-in cutoff.
Eigen::MatrixXd draw_truncated_sample(const PursuitState& state, Eigen::Index n, math::Rng& rng);

}  // namespace phipp
