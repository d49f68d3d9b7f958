#include "phipp/densities.hpp"

#include <cmath>

#include "phipp/errors.hpp"

namespace phipp {

namespace {

// Radial normalisation integral I = int_0^inf t^{d/2-1} xi(t) dt via the
// substitution t = s/(1-s) on (0,1).
double radial_integral(const EllipticalDensity::Generator& xi, int d) {
    auto f = [&](double s) {
        if (s <= 0.0 || s >= 1.0) return 0.0;
        const double t = s / (1.0 - s);
        const double jac = 1.0 / ((1.0 - s) * (1.0 - s));
        return std::pow(t, 0.5 * d - 1.0) * xi(t) * jac;
    };
    return math::simpson(f, 1e-12, 1.0 - 1e-12, 200000);
}

Eigen::VectorXd column_sd(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd sd(m.cols());
    const Eigen::RowVectorXd mean = m.colwise().mean();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double ss = (m.col(j).array() - mean[j]).square().sum();
        sd[j] = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return sd;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    const Eigen::RowVectorXd mean = m.colwise().mean();
    const Eigen::MatrixXd centered = m.rowwise() - mean;
    return centered.transpose() * centered / static_cast<double>(n - 1);
}

}  // namespace

EllipticalDensity::EllipticalDensity(Eigen::VectorXd mu, Eigen::MatrixXd sigma,
                                     Generator generator, std::optional<double> alpha_d)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), generator_(std::move(generator)) {
    if (sigma_.rows() != sigma_.cols() || sigma_.rows() != mu_.size())
        throw DomainError("EllipticalDensity: dimension mismatch between mu and sigma");
    llt_.compute(sigma_);
    const Eigen::VectorXd pivots = llt_.matrixL().toDenseMatrix().diagonal();
    if (llt_.info() != Eigen::Success ||
        pivots.minCoeff() <= 1e-12 * std::max(pivots.maxCoeff(), 1e-300))
        throw DegenerateSampleError(
            "EllipticalDensity: sigma is not symmetric positive-definite");
    sqrt_det_ = pivots.prod();
    if (alpha_d) {
        alpha_ = *alpha_d;
    } else {
        const int d = dim();
        const double I = radial_integral(generator_, d);
        if (!(I > 0.0) || !std::isfinite(I))
            throw DomainError("EllipticalDensity: generator has no finite radial integral");
        alpha_ = std::tgamma(0.5 * d) / std::pow(2.0 * math::pi, 0.5 * d) / I;
    }
}

EllipticalDensity EllipticalDensity::gaussian(const Eigen::VectorXd& mu,
                                              const Eigen::MatrixXd& sigma) {
    const int d = static_cast<int>(mu.size());
    EllipticalDensity e(mu, sigma, [](double t) { return std::exp(-t); },
                        std::pow(2.0 * math::pi, -0.5 * d));
    e.gaussian_ = true;
    return e;
}

EllipticalDensity EllipticalDensity::standard_gaussian(int dim) {
    return gaussian(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim));
}

double EllipticalDensity::pdf(const Eigen::VectorXd& x) const {
    if (x.size() != mu_.size()) throw DomainError("EllipticalDensity::pdf: dimension mismatch");
    const Eigen::VectorXd z = llt_.matrixL().solve(x - mu_);
    return alpha_ / sqrt_det_ * generator_(0.5 * z.squaredNorm());
}

Eigen::VectorXd EllipticalDensity::sample(math::Rng& rng) const {
    if (!gaussian_)
        throw UnsupportedDivergenceError(
            "EllipticalDensity::sample: only the Gaussian generator is sampled");
    std::normal_distribution<double> nd;
    Eigen::VectorXd z(dim());
    for (int i = 0; i < dim(); ++i) z[i] = nd(rng);
    return mu_ + llt_.matrixL() * z;
}

KernelDensity::KernelDensity(Eigen::MatrixXd points, Eigen::VectorXd bandwidths)
    : points_(std::move(points)), bandwidths_(std::move(bandwidths)) {
    if (points_.rows() == 0) throw DomainError("KernelDensity: no points");
    if (points_.cols() != bandwidths_.size())
        throw DomainError("KernelDensity: bandwidth dimension mismatch");
    if ((bandwidths_.array() <= 0.0).any())
        throw DomainError("KernelDensity: bandwidths must be positive");
    kernel_norm_ = std::pow(2.0 * math::pi, -0.5 * dim()) / bandwidths_.prod();
}

double KernelDensity::pdf(const Eigen::VectorXd& x) const {
    if (x.size() != points_.cols()) throw DomainError("KernelDensity::pdf: dimension mismatch");
    const Eigen::ArrayXd inv_h = bandwidths_.array().inverse();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
        const Eigen::ArrayXd z = (x - points_.row(i).transpose()).array() * inv_h;
        acc += std::exp(-0.5 * z.square().sum());
    }
    return acc * kernel_norm_ / static_cast<double>(points_.rows());
}

double KernelDensity::pdf1d(double x) const {
    const double inv_h = 1.0 / bandwidths_[0];
    double acc = 0.0;
    const double* p = points_.data();
    const Eigen::Index n = points_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double z = (x - p[i]) * inv_h;
        acc += std::exp(-0.5 * z * z);
    }
    return acc * kernel_norm_ / static_cast<double>(n);
}

Eigen::VectorXd KernelDensity::pdf_rows(const Eigen::MatrixXd& xs) const {
    Eigen::VectorXd out(xs.rows());
    for (Eigen::Index i = 0; i < xs.rows(); ++i) out[i] = pdf(xs.row(i).transpose());
    return out;
}

Eigen::VectorXd KernelDensity::sample(math::Rng& rng) const {
    std::uniform_int_distribution<Eigen::Index> pick(0, points_.rows() - 1);
    std::normal_distribution<double> nd;
    const Eigen::Index i = pick(rng);
    Eigen::VectorXd x = points_.row(i).transpose();
    for (int j = 0; j < dim(); ++j) x[j] += bandwidths_[j] * nd(rng);
    return x;
}

double KernelDensity::self_term_floor() const {
    return kernel_norm_ / static_cast<double>(points_.rows());
}

double KernelDensity::loo_at_fitting_point(double full_value) const {
    const double n = static_cast<double>(points_.rows());
    if (n < 2.0) return full_value;
    return std::max((n * full_value - kernel_norm_) / (n - 1.0), 0.0);
}

Eigen::VectorXd bandwidth_rule(const Eigen::MatrixXd& points) {
    const Eigen::Index n = points.rows();
    const int d = static_cast<int>(points.cols());
    const Eigen::VectorXd sd = column_sd(points);
    return sd * std::pow(static_cast<double>(n), -1.0 / (4.0 + d));
}

KernelDensity kde_fit(const Eigen::MatrixXd& points) {
    if (points.rows() < 2) throw DomainError("kde_fit: need at least two points");
    const Eigen::VectorXd h = bandwidth_rule(points);
    for (Eigen::Index j = 0; j < h.size(); ++j)
        if (!(h[j] > 0.0))
            throw DegenerateSampleError("kde_fit: coordinate " + std::to_string(j) +
                                        " has zero variance");
    return KernelDensity(points, h);
}

EllipticalDensity gaussian_fit(const Eigen::MatrixXd& sample, bool diagonal_only) {
    const Eigen::Index n = sample.rows();
    const Eigen::Index d = sample.cols();
    if (n < d + 1) throw DegenerateSampleError("gaussian_fit: need at least d+1 observations");
    const Eigen::VectorXd mu = sample.colwise().mean().transpose();
    Eigen::MatrixXd cov = sample_covariance(sample);
    if (diagonal_only) {
        const Eigen::VectorXd variances = cov.diagonal();
        cov = variances.asDiagonal();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw DegenerateSampleError("gaussian_fit: sample covariance is rank deficient");
    return EllipticalDensity::gaussian(mu, cov);
}

Gaussian1D gaussian_projection(const EllipticalDensity& e, const Eigen::VectorXd& a) {
    if (a.size() != e.dim()) throw DomainError("gaussian_projection: dimension mismatch");
    if (a.norm() == 0.0) throw DomainError("gaussian_projection: direction must be nonzero");
    return Gaussian1D{a.dot(e.mu()), a.dot(e.sigma() * a)};
}

Eigen::MatrixXd WhitenTransform::apply_rows(const Eigen::MatrixXd& xs) const {
    return (xs.rowwise() - mean.transpose()) * forward.transpose();
}

WhitenResult whiten(const Eigen::MatrixXd& sample) {
    const Eigen::MatrixXd cov = sample_covariance(sample);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    const Eigen::MatrixXd L = llt.matrixL();
    if (llt.info() != Eigen::Success ||
        L.diagonal().minCoeff() <= 1e-12 * std::max(L.diagonal().maxCoeff(), 1e-300))
        throw DegenerateSampleError("whiten: sample covariance is rank deficient");
    WhitenTransform t;
    t.mean = sample.colwise().mean().transpose();
    t.backward = L;
    t.forward = L.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(sample.cols(), sample.cols()));
    return {t, t.apply_rows(sample)};
}

WhitenResult standardize(const Eigen::MatrixXd& sample) {
    const Eigen::VectorXd sd = column_sd(sample);
    for (Eigen::Index j = 0; j < sd.size(); ++j)
        if (!(sd[j] > 0.0))
            throw DegenerateSampleError("standardize: coordinate " + std::to_string(j) +
                                        " has zero variance");
    WhitenTransform t;
    t.mean = sample.colwise().mean().transpose();
    t.forward = sd.array().inverse().matrix().asDiagonal();
    t.backward = sd.asDiagonal();
    return {t, t.apply_rows(sample)};
}

}  // namespace phipp
