#include "phipp/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "phipp/densities.hpp"
#include "phipp/errors.hpp"

namespace phipp {

namespace {

constexpr int kPeriodicGrid = 4096;

// Bisection for the conditional quantile: smallest v with F(v) >= w.
double invert_monotone(const std::function<double(double)>& F, double w, double tol = 1e-10) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) < w ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CopulaFamily CopulaFamily::gaussian(double rho) {
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("gaussian copula: |rho| must be < 1");
    return CopulaFamily(CopulaKind::Gaussian, rho);
}

CopulaFamily CopulaFamily::clayton(double theta) {
    if (!(theta > 0.0)) throw DomainError("clayton copula: theta must be positive");
    return CopulaFamily(CopulaKind::Clayton, theta);
}

CopulaFamily CopulaFamily::gumbel(double alpha) {
    if (!(alpha >= 1.0)) throw DomainError("gumbel copula: alpha must be >= 1");
    return CopulaFamily(CopulaKind::Gumbel, alpha);
}

CopulaFamily CopulaFamily::frank(double alpha) {
    if (alpha == 0.0) throw DomainError("frank copula: alpha must be nonzero");
    return CopulaFamily(CopulaKind::Frank, alpha);
}

CopulaFamily CopulaFamily::periodic(std::function<double(double)> h) {
    CopulaFamily fam(CopulaKind::Periodic, 0.0);
    // prefix integrals on [0,1]: trapezoid on a fine grid, exact for the
    // constant generator
    const int n = kPeriodicGrid;
    fam.h1_.resize(n + 1, 0.0);
    fam.h2_.resize(n + 1, 0.0);
    double prev = h(0.0);
    if (prev < 0.0) throw DomainError("periodic copula: h must be nonnegative");
    for (int i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double cur = h(t);
        if (cur < 0.0) throw DomainError("periodic copula: h must be nonnegative");
        fam.h1_[i] = fam.h1_[i - 1] + 0.5 * (prev + cur) / n;
        prev = cur;
    }
    if (std::abs(fam.h1_[n] - 1.0) > 1e-6)
        throw DomainError("periodic copula: h must integrate to 1 over [0,1], got " +
                          std::to_string(fam.h1_[n]));
    if (std::abs(h(0.0) - h(1.0)) > 1e-9)
        throw DomainError("periodic copula: h must be 1-periodic");
    for (int i = 1; i <= n; ++i)
        fam.h2_[i] = fam.h2_[i - 1] + 0.5 * (fam.h1_[i - 1] + fam.h1_[i]) / n;
    return fam;
}

CopulaFamily CopulaFamily::independent() { return CopulaFamily(CopulaKind::Independent, 0.0); }

double CopulaFamily::h1_at(double t) const {
    // H1(1 + s) = 1 + H1(s); u + v <= 2 so a single unwrap suffices
    if (t > 1.0) return 1.0 + h1_at(t - 1.0);
    const double pos = t * kPeriodicGrid;
    const int i = std::min(static_cast<int>(pos), kPeriodicGrid - 1);
    const double frac = pos - i;
    return h1_[i] + frac * (h1_[i + 1] - h1_[i]);
}

double CopulaFamily::h2_at(double t) const {
    // H(1 + s) = H(1) + s + H(s)
    if (t > 1.0) return h2_[kPeriodicGrid] + (t - 1.0) + h2_at(t - 1.0);
    const double pos = t * kPeriodicGrid;
    const int i = std::min(static_cast<int>(pos), kPeriodicGrid - 1);
    const double frac = pos - i;
    // partial-cell trapezoid of the piecewise-linear H1; exact when h is
    // constant on the cell
    const double h1_here = h1_[i] + frac * (h1_[i + 1] - h1_[i]);
    return h2_[i] + frac / kPeriodicGrid * 0.5 * (h1_[i] + h1_here);
}

double CopulaFamily::cdf(double u, double v) const {
    if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0)
        throw DomainError("copula cdf: arguments must lie in [0,1]");
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;
    switch (kind_) {
        case CopulaKind::Gaussian:
            return math::bivariate_normal_cdf(math::normal_quantile(u), math::normal_quantile(v),
                                              param_);
        case CopulaKind::Clayton:
            return std::pow(std::pow(u, -param_) + std::pow(v, -param_) - 1.0, -1.0 / param_);
        case CopulaKind::Gumbel: {
            const double a = param_;
            const double s = std::pow(-std::log(u), a) + std::pow(-std::log(v), a);
            return std::exp(-std::pow(s, 1.0 / a));
        }
        case CopulaKind::Frank: {
            const double a = param_;
            if (std::abs(a) < 1e-9) return u * v;
            const double num = std::expm1(a * u) * std::expm1(a * v);
            return std::log1p(num / std::expm1(a)) / a;
        }
        case CopulaKind::Periodic:
            return h2_at(u + v) - h2_at(u) - h2_at(v);
        case CopulaKind::Independent:
            return u * v;
    }
    return 0.0;
}

double CopulaFamily::conditional_cdf(double u, double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    switch (kind_) {
        case CopulaKind::Gaussian: {
            const double x = math::normal_quantile(u);
            const double y = math::normal_quantile(v);
            return math::normal_cdf((y - param_ * x) / std::sqrt(1.0 - param_ * param_));
        }
        case CopulaKind::Clayton: {
            const double t = param_;
            const double s = std::pow(u, -t) + std::pow(v, -t) - 1.0;
            return std::pow(u, -t - 1.0) * std::pow(s, -1.0 / t - 1.0);
        }
        case CopulaKind::Gumbel: {
            const double a = param_;
            const double lu = -std::log(u);
            const double s = std::pow(lu, a) + std::pow(-std::log(v), a);
            const double C = std::exp(-std::pow(s, 1.0 / a));
            return C / u * std::pow(lu, a - 1.0) * std::pow(s, 1.0 / a - 1.0);
        }
        case CopulaKind::Frank: {
            const double a = param_;
            if (std::abs(a) < 1e-9) return v;
            const double eau = std::exp(a * u);
            return eau * std::expm1(a * v) /
                   (std::expm1(a) + std::expm1(a * u) * std::expm1(a * v));
        }
        case CopulaKind::Periodic:
            return h1_at(u + v) - h1_at(u);
        case CopulaKind::Independent:
            return v;
    }
    return v;
}

Eigen::MatrixXd CopulaFamily::sample(int n, math::Rng& rng) const {
    if (n < 1) throw DomainError("copula sample: n must be >= 1");
    Eigen::MatrixXd out(n, 2);
    std::uniform_real_distribution<double> unif(std::nextafter(0.0, 1.0), 1.0);
    if (kind_ == CopulaKind::Gaussian) {
        std::normal_distribution<double> nd;
        const double rho = param_;
        for (int i = 0; i < n; ++i) {
            const double z1 = nd(rng);
            const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * nd(rng);
            out(i, 0) = math::normal_cdf(z1);
            out(i, 1) = math::normal_cdf(z2);
        }
        return out;
    }
    for (int i = 0; i < n; ++i) {
        const double u = unif(rng);
        const double w = unif(rng);
        double v;
        if (kind_ == CopulaKind::Independent) {
            v = w;
        } else {
            v = invert_monotone([&](double t) { return conditional_cdf(u, t); }, w);
        }
        out(i, 0) = u;
        out(i, 1) = v;
    }
    return out;
}

double gaussian_copula_density(double rho, double u, double v) {
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("gaussian_copula_density: |rho| < 1");
    if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
        throw DomainError("gaussian_copula_density: arguments must lie strictly inside (0,1)");
    const double x = math::normal_quantile(u);
    const double y = math::normal_quantile(v);
    const double r2 = 1.0 - rho * rho;
    const double joint =
        std::exp(-(x * x + y * y - 2.0 * rho * x * y) / (2.0 * r2)) / (2.0 * math::pi * std::sqrt(r2));
    return joint / (math::normal_pdf(x) * math::normal_pdf(y));
}

std::pair<double, double> frechet_bounds(const Eigen::VectorXd& u) {
    const double d = static_cast<double>(u.size());
    const double lower = std::max(1.0 - d + u.sum(), 0.0);
    return {lower, u.minCoeff()};
}

double CopulaGrid::at(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int j = 0; j < dim; ++j) flat = flat * resolution + idx[j];
    return values[flat];
}

CopulaGrid empirical_copula_density_grid(const Eigen::MatrixXd& sample,
                                         const Eigen::MatrixXd& basis, int resolution) {
    const Eigen::Index n = sample.rows();
    const int d = static_cast<int>(sample.cols());
    if (n < 20) throw DomainError("empirical_copula_density_grid: need at least 20 rows");
    if (basis.rows() != d || basis.cols() != d ||
        std::abs(basis.determinant()) < 1e-12)
        throw DomainError("empirical_copula_density_grid: basis must be d x d invertible");

    const Eigen::MatrixXd y = sample * basis;  // rows y_i = A' x_i

    // pseudo-observations rank/(n+1), ties broken by index
    Eigen::MatrixXd pseudo(n, d);
    std::vector<int> order(n);
    for (int j = 0; j < d; ++j) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return y(a, j) < y(b, j); });
        for (Eigen::Index r = 0; r < n; ++r)
            pseudo(order[r], j) = static_cast<double>(r + 1) / static_cast<double>(n + 1);
    }

    const KernelDensity kde = kde_fit(pseudo);

    // mirror reflection at both faces of every axis: evaluate the plain
    // estimate at the 3^d reflected images of the query point
    CopulaGrid grid;
    grid.dim = d;
    grid.resolution = resolution;
    grid.values.resize(static_cast<std::size_t>(std::pow(resolution, d)));
    const int reflections = static_cast<int>(std::pow(3, d));
    for (std::size_t flat = 0; flat < grid.values.size(); ++flat) {
        Eigen::VectorXd u(d);
        {
            std::size_t rem = flat;
            for (int j = d - 1; j >= 0; --j) {
                u[j] = grid.node(static_cast<int>(rem % resolution));
                rem /= resolution;
            }
        }
        double total = 0.0;
        for (int r = 0; r < reflections; ++r) {
            Eigen::VectorXd q = u;
            int code = r;
            for (int j = 0; j < d; ++j) {
                const int c = code % 3;
                code /= 3;
                if (c == 1) q[j] = -u[j];
                else if (c == 2) q[j] = 2.0 - u[j];
            }
            total += kde.pdf(q);
        }
        grid.values[flat] = total;
    }
    return grid;
}

std::string copula_grid_csv(const CopulaGrid& grid) {
    std::ostringstream os;
    os.precision(17);
    for (int j = 0; j < grid.dim; ++j) os << "u" << (j + 1) << ",";
    os << "density\n";
    for (std::size_t flat = 0; flat < grid.values.size(); ++flat) {
        std::size_t rem = flat;
        std::vector<double> coords(grid.dim);
        for (int j = grid.dim - 1; j >= 0; --j) {
            coords[j] = grid.node(static_cast<int>(rem % grid.resolution));
            rem /= grid.resolution;
        }
        for (double c : coords) os << c << ",";
        os << grid.values[flat] << "\n";
    }
    return os.str();
}

CopulaGrid copula_grid_from_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line)) throw IngestError("copula grid csv: empty input");
    const int d = static_cast<int>(std::count(line.begin(), line.end(), ','));
    CopulaGrid grid;
    grid.dim = d;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto last = line.rfind(',');
        grid.values.push_back(std::stod(line.substr(last + 1)));
    }
    grid.resolution = static_cast<int>(std::llround(std::pow(
        static_cast<double>(grid.values.size()), 1.0 / d)));
    return grid;
}

}  // namespace phipp
