#include "phipp/gof.hpp"

#include <cmath>

#include "phipp/errors.hpp"

namespace phipp {

std::string to_string(TestMode mode) {
    return mode == TestMode::Elliptical ? "elliptical" : "independence";
}

std::string to_string(QAlphaMode mode) {
    return mode == QAlphaMode::PaperLiteral ? "paper" : "strict";
}

StatisticValue test_statistic(const PursuitState& state, const Eigen::VectorXd& b) {
    Eigen::VectorXd bn = b / b.norm();
    bn = math::canonical_sign(bn);

    const Eigen::MatrixXd& X = state.data_f();
    const PhiSpec& phi = state.phi();
    const double cutoff = state.plugin_cutoff();
    if (X.rows() < 20) throw DomainError("test_statistic: need at least 20 observations");

    const CriterionValue cv = evaluate_criterion(state, bn, bn);
    const double integral = cv.b1;

    const Eigen::VectorXd proj = X * bn;
    const KernelDensity f_b = kde_fit(proj);
    const KernelDensity g_b = kde_fit(Eigen::MatrixXd(state.data_g() * bn));
    const double cut_gb = state.theta() * g_b.self_term_floor();
    std::vector<double> m_values;
    m_values.reserve(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double fn = state.f_at_x()[i];
        const double gb = g_b.pdf1d(proj[i]);
        if (fn < cutoff || gb < cut_gb) continue;
        const double fb = f_b.loo_at_fitting_point(f_b.pdf1d(proj[i]));
        const double rb = std::max(state.g_at_x()[i] * fb / (gb * fn), 1e-12);
        m_values.push_back(integral - phi.phi_star_of_prime(rb));
    }
    const int n = static_cast<int>(m_values.size());
    double mean = 0.0;
    for (double v : m_values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : m_values) var += (v - mean) * (v - mean);
    var /= (n - 1);
    if (!(var > 0.0))
        throw DegenerateVarianceError("test_statistic: the M values have zero variance");
    return {std::sqrt(static_cast<double>(n)) * mean / std::sqrt(var), var, mean, n};
}

double ellipsoid_threshold(double alpha, std::size_t n, double q_alpha) {
    if (n < 1) throw DomainError("ellipsoid_threshold: n must be positive");
    (void)alpha;  // carried for the record; q_alpha is already resolved
    return q_alpha / std::sqrt(static_cast<double>(n));
}

double resolve_q_alpha(double alpha, QAlphaMode mode) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    if (mode == QAlphaMode::PaperLiteral && std::abs(alpha - 0.9) < 1e-12) return 0.2533;
    return math::normal_quantile(alpha);
}

double p_value(double statistic) {
    return std::erfc(std::abs(statistic) / std::sqrt(2.0));
}

PursuitOutcome run_pursuit(const Eigen::MatrixXd& data, TestMode mode, const PhiSpec& spec,
                           const PursuitSettings& settings, math::Rng& rng) {
    const Eigen::Index m = data.rows();
    const int d = static_cast<int>(data.cols());
    if (d < 1 || m <= d) throw DomainError("run_pursuit: need m > d >= 1");
    if (m < 20) throw DomainError("run_pursuit: need at least 20 observations");

    WhitenResult white =
        mode == TestMode::Elliptical ? whiten(data) : standardize(data);

    TruncationRule rule =
        settings.nu ? TruncationRule{*settings.nu} : TruncationRule::for_dim(d);
    rule.validate(d);

    // The absolute threshold m^{-nu} is scaled by the kernel estimate's own
    // self-term floor, so an admissible nu never empties the data sample;
    // instrumental draws below the cutoff are rejected and redrawn.
    const KernelDensity f_m = kde_fit(white.data);
    const double cutoff = rule.theta(static_cast<std::size_t>(m)) * f_m.self_term_floor();

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < m; ++i)
        if (f_m.pdf(white.data.row(i).transpose()) >= cutoff) keep.push_back(i);
    if (keep.size() < 10)
        throw OverTruncationError("run_pursuit: truncation keeps fewer than 10 points");
    Eigen::MatrixXd data_f(keep.size(), d);
    for (std::size_t i = 0; i < keep.size(); ++i) data_f.row(i) = white.data.row(keep[i]);

    const EllipticalDensity base = EllipticalDensity::standard_gaussian(d);
    Eigen::MatrixXd data_g(keep.size(), d);
    {
        Eigen::Index filled = 0;
        std::size_t attempts = 0;
        const std::size_t max_attempts = 1000 * keep.size() + 100000;
        while (filled < data_g.rows()) {
            if (++attempts > max_attempts)
                throw OverTruncationError("run_pursuit: instrumental rejection rate too high");
            const Eigen::VectorXd y = base.sample(rng);
            if (base.pdf(y) >= cutoff) data_g.row(filled++) = y.transpose();
        }
    }
    PursuitState state(spec, data_f, data_g, rule.theta(static_cast<std::size_t>(m)));

    const double q_alpha = resolve_q_alpha(settings.alpha, settings.q_mode);

    std::vector<TestReport> reports;
    for (int k = 0; k < d; ++k) {
        const DirectionSearch found = find_direction(state, settings.optimizer, rng);
        const StatisticValue sv = test_statistic(state, found.direction);

        TestReport rep;
        rep.step_index = k;
        rep.direction_whitened = found.direction;
        rep.direction = math::canonical_sign(
            white.transform.covector_to_original(found.direction).normalized());
        rep.divergence_estimate = found.value;
        rep.zscore = sv.statistic;
        rep.statistic = sv.statistic / std::sqrt(static_cast<double>(sv.n));
        rep.threshold = ellipsoid_threshold(settings.alpha, static_cast<std::size_t>(sv.n),
                                            q_alpha);
        rep.accepted = ellipsoid_member(rep.statistic, rep.threshold);
        rep.p_value = p_value(sv.statistic);
        rep.mode = mode;
        rep.n_used = sv.n;
        rep.optimizer_degraded = found.degraded;
        reports.push_back(rep);

        state = update_state(state, found.direction, rng);
    }

    const bool verdict = !reports.empty() && reports.back().accepted;
    return {std::move(reports), verdict, white.transform, std::move(state)};
}

GofResult elliptical_copula_test(const Eigen::MatrixXd& data, const PhiSpec& spec,
                                 const PursuitSettings& settings, math::Rng& rng) {
    PursuitOutcome out = run_pursuit(data, TestMode::Elliptical, spec, settings, rng);
    return {std::move(out.reports), out.verdict, std::move(out.transform)};
}

GofResult independence_test(const Eigen::MatrixXd& data, const PhiSpec& spec,
                            const PursuitSettings& settings, math::Rng& rng) {
    PursuitOutcome out = run_pursuit(data, TestMode::Independence, spec, settings, rng);
    return {std::move(out.reports), out.verdict, std::move(out.transform)};
}

CopulaFactorization copula_factorization(const std::vector<TestReport>& reports) {
    CopulaFactorization fac;
    const int d = static_cast<int>(reports.size());
    if (d == 0) return fac;
    fac.flat = true;
    int start = 1;
    for (int k = 1; k <= d; ++k) {
        const bool accepted = reports[k - 1].accepted;
        if (!accepted) fac.flat = false;
        if (accepted || k == d) {  // the final step is a forced boundary
            fac.blocks.emplace_back(start, k);
            start = k + 1;
        }
    }
    return fac;
}

}  // namespace phipp
