#pragma once

#include <functional>
#include <string>

#include "phipp/math.hpp"

namespace phipp {

enum class DivergenceFamily { KullbackLeibler, ChiSquare, Hellinger, Power, L1 };

/// A divergence kernel phi: convex, phi(1) = 0, together with its derivative
/// and the conjugate composition x -> phi*(phi'(x)) used by the dual criterion.
class PhiSpec {
public:
    /// Power family needs gamma in {-1} union [2, 8]; other families ignore it.
    explicit PhiSpec(DivergenceFamily family, double gamma = 2.0);

    static PhiSpec kullback_leibler() { return PhiSpec(DivergenceFamily::KullbackLeibler); }
    static PhiSpec chi_square() { return PhiSpec(DivergenceFamily::ChiSquare); }
    static PhiSpec hellinger() { return PhiSpec(DivergenceFamily::Hellinger); }
    static PhiSpec power(double gamma) { return PhiSpec(DivergenceFamily::Power, gamma); }
    static PhiSpec l1() { return PhiSpec(DivergenceFamily::L1); }

    /// Parses "kl", "chi2", "hellinger", "power:G" or "l1".
    static PhiSpec parse(const std::string& name);

    DivergenceFamily family() const { return family_; }
    double gamma() const { return gamma_; }
    std::string name() const;

    /// phi(x) for x >= 0 (x = 0 returns the limit value).
    double phi(double x) const;
    /// phi'(x) for x > 0; undefined for L1 at x = 1.
    double phi_prime(double x) const;
    /// phi*(phi'(x)) = x phi'(x) - phi(x); not available for L1.
    double phi_star_of_prime(double x) const;
    /// Second derivative at 1 (curvature scale, used by Pinsker-type bounds).
    double curvature_at_one() const;

    bool differentiable() const { return family_ != DivergenceFamily::L1; }

private:
    DivergenceFamily family_;
    double gamma_;
};

using DensityFn = std::function<double(const Eigen::VectorXd&)>;

/// Direct numerical integration of D_phi(Q,P) = integral phi(q/p) p over a
/// midpoint grid. This is the oracle the sample-based dual estimator is
/// validated against; it is not a production path.
///
/// Throws AbsoluteContinuityError if p vanishes at a node where q does not,
/// and DomainError if the grid captures less than 1 - 1e-4 of p's mass.
double divergence_numeric(const PhiSpec& spec, const DensityFn& q, const DensityFn& p,
                          const math::GridSpec& grid);

}  // namespace phipp
