#pragma once

#include <functional>
#include <optional>

#include "phipp/math.hpp"

namespace phipp {

/// A univariate Gaussian, the exact projection of a Gaussian instrumental law.
struct Gaussian1D {
    double mean = 0.0;
    double var = 1.0;

    double pdf(double x) const { return math::normal_pdf(x, mean, var); }
    double cdf(double x) const { return math::normal_cdf((x - mean) / std::sqrt(var)); }
};

/// Generator-based elliptical density
///   f(x) = alpha_d / |Sigma|^(1/2) * xi_d( (x-mu)' Sigma^{-1} (x-mu) / 2 ).
/// The Gaussian case xi(t) = exp(-t) has alpha_d = (2 pi)^{-d/2} in closed
/// form; arbitrary generators get alpha_d from the radial normalisation
/// integral.
class EllipticalDensity {
public:
    using Generator = std::function<double(double)>;

    /// Gaussian member of the family.
    static EllipticalDensity gaussian(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma);
    static EllipticalDensity standard_gaussian(int dim);

    /// Arbitrary generator; alpha_d computed numerically unless supplied.
    EllipticalDensity(Eigen::VectorXd mu, Eigen::MatrixXd sigma, Generator generator,
                      std::optional<double> alpha_d = std::nullopt);

    double pdf(const Eigen::VectorXd& x) const;
    Eigen::VectorXd sample(math::Rng& rng) const;

    int dim() const { return static_cast<int>(mu_.size()); }
    const Eigen::VectorXd& mu() const { return mu_; }
    const Eigen::MatrixXd& sigma() const { return sigma_; }
    double alpha_d() const { return alpha_; }
    bool is_gaussian() const { return gaussian_; }
    const Generator& generator() const { return generator_; }

private:
    Eigen::VectorXd mu_;
    Eigen::MatrixXd sigma_;
    Generator generator_;
    double alpha_;
    double sqrt_det_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    bool gaussian_ = false;
};

/// Gaussian product-kernel density estimate on n points in d' dimensions
/// (d' is the data dimension or 1 for projections).
class KernelDensity {
public:
    /// Explicit points (rows) and per-coordinate bandwidths.
    KernelDensity(Eigen::MatrixXd points, Eigen::VectorXd bandwidths);

    double pdf(const Eigen::VectorXd& x) const;
    double pdf1d(double x) const;
    Eigen::VectorXd pdf_rows(const Eigen::MatrixXd& xs) const;

    /// Smoothed-bootstrap draw; distributed exactly per the estimate.
    Eigen::VectorXd sample(math::Rng& rng) const;

    int dim() const { return static_cast<int>(points_.cols()); }
    Eigen::Index size() const { return points_.rows(); }
    const Eigen::MatrixXd& points() const { return points_; }
    const Eigen::VectorXd& bandwidths() const { return bandwidths_; }

    /// Smallest value the estimate can take at one of its own points:
    /// the self kernel term 1 / (n (2 pi)^{d/2} prod_j h_j).
    double self_term_floor() const;

    /// Converts a full evaluation at one of the fitting points into the
    /// leave-one-out value (the self kernel removed and renormalised).
    double loo_at_fitting_point(double full_value) const;

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd bandwidths_;
    double kernel_norm_;  // (2 pi)^{-d/2} / prod h_j
};

/// Scale-equivariant bandwidth rule: h_j = sd_j * n^{-1/(4+d)}.
Eigen::VectorXd bandwidth_rule(const Eigen::MatrixXd& points);

/// Fits a KDE with the bandwidth rule above. Needs n >= 2 and positive
/// variance in every coordinate.
KernelDensity kde_fit(const Eigen::MatrixXd& points);

/// Gaussian density with the sample mean and (unbiased) sample covariance;
/// diagonal_only keeps only the variances, for the independence instrumental.
EllipticalDensity gaussian_fit(const Eigen::MatrixXd& sample, bool diagonal_only = false);

/// Exact 1-D law of a'X when X is Gaussian: N(a'mu, a'Sigma a).
Gaussian1D gaussian_projection(const EllipticalDensity& e, const Eigen::VectorXd& a);

/// Affine map y = F (x - mean) with F the inverse Cholesky factor of the
/// sample covariance; kept invertible so directions can be mapped back.
struct WhitenTransform {
    Eigen::VectorXd mean;
    Eigen::MatrixXd forward;   // F
    Eigen::MatrixXd backward;  // F^{-1}

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return forward * (x - mean); }
    Eigen::VectorXd invert(const Eigen::VectorXd& y) const { return backward * y + mean; }
    Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& xs) const;
    /// Projection functional b'y = a'x maps back as a = F' b.
    Eigen::VectorXd covector_to_original(const Eigen::VectorXd& b) const {
        return forward.transpose() * b;
    }
};

struct WhitenResult {
    WhitenTransform transform;
    Eigen::MatrixXd data;
};

/// Full whitening: output has zero mean and identity covariance.
WhitenResult whiten(const Eigen::MatrixXd& sample);

/// Per-coordinate standardisation (diagonal whitening).
WhitenResult standardize(const Eigen::MatrixXd& sample);

}  // namespace phipp
