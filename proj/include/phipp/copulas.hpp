#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phipp/math.hpp"

namespace phipp {

enum class CopulaKind { Gaussian, Clayton, Gumbel, Frank, Periodic, Independent };

/// A reference bivariate copula family used for data generation and
/// validation of the goodness-of-fit pipeline.
class CopulaFamily {
public:
    static CopulaFamily gaussian(double rho);
    static CopulaFamily clayton(double theta);
    static CopulaFamily gumbel(double alpha);
    static CopulaFamily frank(double alpha);
    /// h must be 1-periodic, nonnegative, with unit integral over [0,1].
    static CopulaFamily periodic(std::function<double(double)> h);
    static CopulaFamily periodic_flat() {
        return periodic([](double) { return 1.0; });
    }
    static CopulaFamily independent();

    CopulaKind kind() const { return kind_; }
    double param() const { return param_; }

    /// C(u, v); boundary arguments are handled exactly.
    double cdf(double u, double v) const;
    /// Conditional cdf P(V <= v | U = u), used for sampling.
    double conditional_cdf(double u, double v) const;
    /// n pairs of uniforms with this dependence structure.
    Eigen::MatrixXd sample(int n, math::Rng& rng) const;

private:
    CopulaFamily(CopulaKind kind, double param) : kind_(kind), param_(param) {}

    CopulaKind kind_;
    double param_ = 0.0;
    // periodic family: prefix integrals of h on a fine grid
    std::vector<double> h1_;  // H1(t) = int_0^t h
    std::vector<double> h2_;  // H(t)  = int_0^t H1
    double h1_at(double t) const;
    double h2_at(double t) const;
};

/// Density of the bivariate Gaussian copula at an interior point.
double gaussian_copula_density(double rho, double u, double v);

/// Fréchet–Hoeffding bounds (W(u), M(u)) for a point of the unit cube.
std::pair<double, double> frechet_bounds(const Eigen::VectorXd& u);

/// Regular lattice of copula-density values on (0,1)^d, row-major with the
/// last coordinate fastest; nodes at (i + 1/2) / resolution.
struct CopulaGrid {
    int dim = 0;
    int resolution = 0;
    std::vector<double> values;

    double at(const std::vector<int>& idx) const;
    double node(int i) const { return (i + 0.5) / resolution; }
};

/// Empirical copula density of the sample expressed in the given basis
/// (y = A'x), estimated by a boundary-reflected KDE on the pseudo
/// observations rank/(n+1).
CopulaGrid empirical_copula_density_grid(const Eigen::MatrixXd& sample,
                                         const Eigen::MatrixXd& basis, int resolution);

/// CSV with header u1,...,ud,density in the grid's row-major order.
std::string copula_grid_csv(const CopulaGrid& grid);
CopulaGrid copula_grid_from_csv(const std::string& csv);

}  // namespace phipp
