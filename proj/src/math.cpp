#include "phipp/math.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "phipp/errors.hpp"

namespace phipp::math {

namespace {

// Acklam's rational approximation, then one Halley step to clean it up.
double quantile_seed(double p) {
    static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                                -2.759285104469687e+02, 1.383577518672690e+02,
                                                -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                                -1.556989798598866e+02, 6.680131188771972e+01,
                                                -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                                -2.400758277161838e+00, -2.549732539343734e+00,
                                                4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must be in (0,1)");
    double x = quantile_seed(p);
    // Halley refinement
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(x) - p;
        const double u = e / normal_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double bivariate_normal_cdf(double h, double k, double rho) {
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("bivariate_normal_cdf: |rho| must be < 1");
    // Phi2(h,k;rho) = Phi(h)Phi(k) + (1/2pi) int_0^asin(rho) exp(-(h^2+k^2-2hk sin t)/(2cos^2 t)) dt
    static constexpr std::array<double, 10> nodes = {
        -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
        -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
        0.8650633666889845,  0.9739065285171717};
    static constexpr std::array<double, 10> weights = {
        0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
        0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
        0.1494513491505806, 0.0666713443086881};

    const double upper = std::asin(rho);
    double integral = 0.0;
    // split in 4 panels for accuracy near |rho| -> 1
    constexpr int panels = 4;
    for (int p = 0; p < panels; ++p) {
        const double a = upper * p / panels;
        const double b = upper * (p + 1) / panels;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double t = mid + half * nodes[i];
            const double s = std::sin(t);
            const double c2 = 1.0 - s * s;
            integral += weights[i] * half *
                        std::exp(-(h * h + k * k - 2.0 * h * k * s) / (2.0 * c2));
        }
    }
    return normal_cdf(h) * normal_cdf(k) + integral / (2.0 * pi);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int j = 0; j < dim(); ++j) v *= (hi[j] - lo[j]) / counts[j];
    return v;
}

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (int c : counts) n *= static_cast<std::size_t>(c);
    return n;
}

Eigen::VectorXd GridSpec::node(std::size_t flat_index) const {
    Eigen::VectorXd x(dim());
    for (int j = dim() - 1; j >= 0; --j) {
        const std::size_t nj = static_cast<std::size_t>(counts[j]);
        const std::size_t ij = flat_index % nj;
        flat_index /= nj;
        x[j] = lo[j] + (static_cast<double>(ij) + 0.5) * (hi[j] - lo[j]) / counts[j];
    }
    return x;
}

GridSpec GridSpec::gaussian_1d(double mean, double sd) {
    GridSpec g;
    g.lo = Eigen::VectorXd::Constant(1, mean - 8.0 * sd);
    g.hi = Eigen::VectorXd::Constant(1, mean + 8.0 * sd);
    g.counts = {16000};
    return g;
}

GridSpec GridSpec::gaussian_2d(const Eigen::Vector2d& mean, const Eigen::Vector2d& sd) {
    GridSpec g;
    g.lo = mean - 8.0 * sd;
    g.hi = mean + 8.0 * sd;
    g.counts = {400, 400};
    return g;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    return s * h / 3.0;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = cdf(sample[i]);
        d = std::max(d, std::abs(F - static_cast<double>(i) / n));
        d = std::max(d, std::abs(F - static_cast<double>(i + 1) / n));
    }
    return d;
}

}  // namespace phipp::math
