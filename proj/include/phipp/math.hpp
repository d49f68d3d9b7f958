#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace phipp::math {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double inv_sqrt_2pi = 0.3989422804014326779;

using Rng = std::mt19937_64;

/// Standard normal density.
inline double normal_pdf(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }

inline double normal_pdf(double x, double mean, double var) {
    const double z = x - mean;
    return inv_sqrt_2pi / std::sqrt(var) * std::exp(-0.5 * z * z / var);
}

/// Standard normal cumulative distribution function.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Inverse of normal_cdf, accurate to machine precision.
double normal_quantile(double p);

/// Standard bivariate normal cdf P(X <= h, Y <= k) with correlation rho.
double bivariate_normal_cdf(double h, double k, double rho);

/// Mixes a base seed with a stream index; used to derive replicate seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Midpoint-rule quadrature grid over an axis-aligned rectangle.
/// Node i along axis j sits at lo[j] + (i + 1/2) * (hi[j] - lo[j]) / n[j].
struct GridSpec {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    std::vector<int> counts;

    int dim() const { return static_cast<int>(counts.size()); }
    double cell_volume() const;
    std::size_t size() const;
    Eigen::VectorXd node(std::size_t flat_index) const;

    /// 1-D grid spanning mean +/- 8 sd with a 1e-3 relative step.
    static GridSpec gaussian_1d(double mean, double sd);
    /// 2-D grid, 400x400 nodes spanning mean +/- 8 sd per axis.
    static GridSpec gaussian_2d(const Eigen::Vector2d& mean, const Eigen::Vector2d& sd);
};

/// Simpson integral of f over [a, b] with n (even) subintervals.
double simpson(const std::function<double(double)>& f, double a, double b, int n);

/// Kolmogorov-Smirnov distance between a sample and a continuous cdf.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

inline Eigen::VectorXd canonical_sign(Eigen::VectorXd v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12) {
            if (v[i] < 0) v = -v;
            break;
        }
    }
    return v;
}

inline double angle_between(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const double c = std::abs(u.dot(v)) / (u.norm() * v.norm());
    return std::acos(std::min(1.0, c));
}

}  // namespace phipp::math
