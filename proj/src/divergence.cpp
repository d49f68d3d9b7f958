#include "phipp/divergence.hpp"

#include <cmath>
#include <limits>

#include "phipp/errors.hpp"

namespace phipp {

PhiSpec::PhiSpec(DivergenceFamily family, double gamma) : family_(family), gamma_(gamma) {
    if (family_ == DivergenceFamily::Power) {
        const bool admissible = gamma_ == -1.0 || (gamma_ >= 2.0 && gamma_ <= 8.0);
        if (!admissible)
            throw DomainError("PhiSpec: power exponent must be -1 or in [2, 8], got " +
                              std::to_string(gamma_));
    }
}

PhiSpec PhiSpec::parse(const std::string& name) {
    if (name == "kl") return kullback_leibler();
    if (name == "chi2") return chi_square();
    if (name == "hellinger") return hellinger();
    if (name == "l1") return l1();
    if (name.rfind("power:", 0) == 0) return power(std::stod(name.substr(6)));
    throw DomainError("PhiSpec: unknown divergence '" + name + "'");
}

std::string PhiSpec::name() const {
    switch (family_) {
        case DivergenceFamily::KullbackLeibler: return "kl";
        case DivergenceFamily::ChiSquare: return "chi2";
        case DivergenceFamily::Hellinger: return "hellinger";
        case DivergenceFamily::Power: return "power:" + std::to_string(gamma_);
        case DivergenceFamily::L1: return "l1";
    }
    return "?";
}

double PhiSpec::phi(double x) const {
    if (x < 0.0) throw DomainError("phi: argument must be nonnegative");
    switch (family_) {
        case DivergenceFamily::KullbackLeibler:
            if (x == 0.0) return 1.0;
            return x * std::log(x) - x + 1.0;
        case DivergenceFamily::ChiSquare:
            return 0.5 * (x - 1.0) * (x - 1.0);
        case DivergenceFamily::Hellinger: {
            const double s = std::sqrt(x) - 1.0;
            return 2.0 * s * s;
        }
        case DivergenceFamily::Power: {
            if (x == 0.0)
                return gamma_ > 0 ? 1.0 / gamma_ : std::numeric_limits<double>::infinity();
            return (std::pow(x, gamma_) - gamma_ * x + gamma_ - 1.0) / (gamma_ * (gamma_ - 1.0));
        }
        case DivergenceFamily::L1:
            return std::abs(x - 1.0);
    }
    return 0.0;
}

double PhiSpec::phi_prime(double x) const {
    if (x < 0.0) throw DomainError("phi_prime: argument must be nonnegative");
    switch (family_) {
        case DivergenceFamily::KullbackLeibler:
            if (x == 0.0) return -std::numeric_limits<double>::infinity();
            return std::log(x);
        case DivergenceFamily::ChiSquare:
            return x - 1.0;
        case DivergenceFamily::Hellinger:
            if (x == 0.0) return -std::numeric_limits<double>::infinity();
            return 2.0 * (1.0 - 1.0 / std::sqrt(x));
        case DivergenceFamily::Power:
            if (x == 0.0 && gamma_ < 1.0) return -std::numeric_limits<double>::infinity();
            return (std::pow(x, gamma_ - 1.0) - 1.0) / (gamma_ - 1.0);
        case DivergenceFamily::L1:
            if (x == 1.0) throw DomainError("phi_prime: L1 kernel is not differentiable at 1");
            return x > 1.0 ? 1.0 : -1.0;
    }
    return 0.0;
}

double PhiSpec::phi_star_of_prime(double x) const {
    if (x < 0.0) throw DomainError("phi_star_of_prime: argument must be nonnegative");
    if (family_ == DivergenceFamily::L1)
        throw UnsupportedDivergenceError(
            "phi_star_of_prime: the dual criterion needs a differentiable kernel, L1 is not");
    switch (family_) {
        case DivergenceFamily::KullbackLeibler:
            return x - 1.0;
        case DivergenceFamily::ChiSquare:
            return 0.5 * (x * x - 1.0);
        case DivergenceFamily::Hellinger:
            return 2.0 * (std::sqrt(x) - 1.0);
        case DivergenceFamily::Power:
            return (std::pow(x, gamma_) - 1.0) / gamma_;
        default:
            break;
    }
    return 0.0;
}

double PhiSpec::curvature_at_one() const {
    // phi''(1) = 1 for every shipped family in these normalisations.
    return 1.0;
}

double divergence_numeric(const PhiSpec& spec, const DensityFn& q, const DensityFn& p,
                          const math::GridSpec& grid) {
    const double dv = grid.cell_volume();
    const std::size_t n = grid.size();
    double mass = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::VectorXd x = grid.node(i);
        const double pv = p(x);
        const double qv = q(x);
        if (pv <= 0.0) {
            if (qv > 1e-300)
                throw AbsoluteContinuityError(
                    "divergence_numeric: q > 0 where p = 0, Q is not absolutely continuous "
                    "w.r.t. P on this grid");
            continue;
        }
        mass += pv;
        total += spec.phi(qv / pv) * pv;
    }
    mass *= dv;
    if (mass < 1.0 - 1e-4)
        throw DomainError("divergence_numeric: grid captures only " + std::to_string(mass) +
                          " of p's mass; enlarge the domain");
    return total * dv;
}

}  // namespace phipp
