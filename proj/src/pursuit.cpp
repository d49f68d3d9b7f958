#include "phipp/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phipp/errors.hpp"

namespace phipp {

namespace {

constexpr double kRatioFloor = 1e-12;

// Orthonormal basis of the complement of the step directions.
Eigen::MatrixXd orthogonal_complement(const PursuitState& state) {
    const int d = state.dim();
    const int k = state.step_count();
    if (k == 0) return Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd A(d, k);
    for (int j = 0; j < k; ++j) A.col(j) = state.steps()[j].direction;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    const Eigen::MatrixXd Q = qr.householderQ();
    return Q.rightCols(d - k);
}

Eigen::VectorXd random_unit(int dim, math::Rng& rng) {
    std::normal_distribution<double> nd;
    Eigen::VectorXd u(dim);
    do {
        for (int i = 0; i < dim; ++i) u[i] = nd(rng);
    } while (u.norm() < 1e-12);
    return u / u.norm();
}

struct SphereOptimum {
    Eigen::VectorXd u;
    double value;
    bool degraded;
};

// Nelder-Mead on the sphere: the objective normalises its argument, the
// simplex lives in the ambient coordinates.
void nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd& best,
                 double& best_val, int iters) {
    const int n = static_cast<int>(best.size());
    std::vector<std::pair<double, Eigen::VectorXd>> simplex;
    simplex.reserve(n + 1);
    simplex.emplace_back(best_val, best);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v = best;
        v[i] += 0.1;
        v.normalize();
        simplex.emplace_back(f(v), v);
    }
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    };
    order();
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += simplex[i].second;
        centroid /= n;
        const auto& worst = simplex[n];
        Eigen::VectorXd xr = (centroid + (centroid - worst.second)).normalized();
        const double fr = f(xr);
        if (fr < simplex[0].first) {
            Eigen::VectorXd xe = (centroid + 2.0 * (centroid - worst.second)).normalized();
            const double fe = f(xe);
            simplex[n] = fe < fr ? std::make_pair(fe, xe) : std::make_pair(fr, xr);
        } else if (fr < simplex[n - 1].first) {
            simplex[n] = {fr, xr};
        } else {
            Eigen::VectorXd xc = (centroid + 0.5 * (worst.second - centroid)).normalized();
            const double fc = f(xc);
            if (fc < worst.first) {
                simplex[n] = {fc, xc};
            } else {
                for (int i = 1; i <= n; ++i) {
                    simplex[i].second =
                        (simplex[0].second + 0.5 * (simplex[i].second - simplex[0].second))
                            .normalized();
                    simplex[i].first = f(simplex[i].second);
                }
            }
        }
        order();
    }
    if (simplex[0].first < best_val) {
        best_val = simplex[0].first;
        best = simplex[0].second;
    }
}

SphereOptimum optimize_on_sphere(const std::function<double(const Eigen::VectorXd&)>& objective,
                                 int dim, const OptimizerConfig& opt, math::Rng& rng,
                                 const Eigen::VectorXd* extra_probe = nullptr) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> nd;

    Eigen::VectorXd best;
    double best_val = std::numeric_limits<double>::infinity();
    double probe_lo = best_val, probe_hi = -best_val;
    auto consider_probe = [&](const Eigen::VectorXd& u) {
        const double v = objective(u);
        probe_lo = std::min(probe_lo, v);
        probe_hi = std::max(probe_hi, v);
        if (v < best_val) {
            best_val = v;
            best = u;
        }
    };
    if (extra_probe) consider_probe(*extra_probe);
    for (int i = 0; i < opt.temperature_probes; ++i) consider_probe(random_unit(dim, rng));

    const double initial_best = best_val;
    double temperature = std::max(probe_hi - probe_lo, 1e-12);

    Eigen::VectorXd current = best;
    double current_val = best_val;
    for (int i = 0; i < opt.annealing_proposals; ++i) {
        Eigen::VectorXd prop = current;
        for (int j = 0; j < dim; ++j) prop[j] += opt.proposal_step * nd(rng);
        if (prop.norm() < 1e-12) continue;
        prop.normalize();
        const double v = objective(prop);
        const double delta = v - current_val;
        if (delta < 0.0 || unif(rng) < std::exp(-delta / temperature)) {
            current = prop;
            current_val = v;
            if (v < best_val) {
                best_val = v;
                best = prop;
            }
        }
        temperature *= opt.cooling;
    }
    if (dim >= 2 && opt.nelder_mead_iters > 0)
        nelder_mead(objective, best, best_val, opt.nelder_mead_iters);

    const bool improved = best_val < initial_best - 1e-15;
    return {best, best_val, !improved};
}

Eigen::VectorXd normalize_direction(const Eigen::VectorXd& a) {
    const double n = a.norm();
    if (n < 1e-12) throw DomainError("direction must be a nonzero vector");
    return math::canonical_sign(a / n);
}

}  // namespace

void TruncationRule::validate(int d) const {
    if (!(nu > 0.0 && nu < 1.0 / (4.0 + d)))
        throw DomainError("TruncationRule: nu must lie in (0, 1/(4+d)) for d = " +
                          std::to_string(d));
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> truncate(const Eigen::MatrixXd& sample_f,
                                                     const Eigen::MatrixXd& sample_g,
                                                     const TruncationRule& rule,
                                                     const EllipticalDensity* instrumental) {
    const Eigen::Index m = sample_f.rows();
    if (m < 20 || sample_g.rows() < 20) throw DomainError("truncate: need at least 20 rows");
    const double theta = rule.theta(static_cast<std::size_t>(m));

    const KernelDensity f_m = kde_fit(sample_f);
    std::optional<EllipticalDensity> fitted;
    const EllipticalDensity* g = instrumental;
    if (!g) {
        fitted = gaussian_fit(sample_g);
        g = &*fitted;
    }

    std::vector<Eigen::Index> keep_f, keep_g;
    for (Eigen::Index i = 0; i < m; ++i)
        if (f_m.pdf(sample_f.row(i).transpose()) >= theta) keep_f.push_back(i);
    for (Eigen::Index i = 0; i < sample_g.rows(); ++i)
        if (g->pdf(sample_g.row(i).transpose()) >= theta) keep_g.push_back(i);

    const std::size_t n = std::min(keep_f.size(), keep_g.size());
    if (n < 10)
        throw OverTruncationError("truncate: only " + std::to_string(n) +
                                  " points survive, nu is too large for this sample size");
    keep_f.resize(n);
    keep_g.resize(n);

    Eigen::MatrixXd out_f(n, sample_f.cols()), out_g(n, sample_g.cols());
    for (std::size_t i = 0; i < n; ++i) {
        out_f.row(i) = sample_f.row(keep_f[i]);
        out_g.row(i) = sample_g.row(keep_g[i]);
    }
    return {out_f, out_g};
}

PursuitState::PursuitState(PhiSpec spec, Eigen::MatrixXd data_f, Eigen::MatrixXd data_g,
                           double theta)
    : spec_(std::move(spec)),
      data_f_(std::move(data_f)),
      data_g_(std::move(data_g)),
      theta_(theta),
      base_(EllipticalDensity::standard_gaussian(static_cast<int>(data_f_.cols()))),
      f_kde_(kde_fit(data_f_)),
      g_kde_(kde_fit(data_g_)) {
    if (data_f_.rows() != data_g_.rows())
        throw DomainError("PursuitState: f and g samples must have equal length");
    if (!(theta_ > 0.0 && theta_ < 1.0))
        throw DomainError("PursuitState: theta must lie in (0,1)");
    refresh_caches();
}

void PursuitState::refresh_caches() {
    // Plug-ins evaluated at their own fitting points are leave-one-out; the
    // self kernel would otherwise bias the two Monte-Carlo sums apart under
    // the null.
    f_at_x_ = f_kde_.pdf_rows(data_f_);
    for (Eigen::Index i = 0; i < f_at_x_.size(); ++i)
        f_at_x_[i] = f_kde_.loo_at_fitting_point(f_at_x_[i]);
    f_at_y_ = f_kde_.pdf_rows(data_g_);
    g_at_x_ = g_kde_.pdf_rows(data_f_);
    g_at_y_ = g_kde_.pdf_rows(data_g_);
    for (Eigen::Index i = 0; i < g_at_y_.size(); ++i)
        g_at_y_[i] = g_kde_.loo_at_fitting_point(g_at_y_[i]);
    integral_cache_.clear();
}

double PursuitState::pdf(const Eigen::VectorXd& x) const {
    double v = base_.pdf(x);
    for (const auto& step : steps_) {
        const double t = step.direction.dot(x);
        v *= step.numerator.pdf1d(t) / math::normal_pdf(t);
    }
    return v;
}

Eigen::VectorXd PursuitState::sample(math::Rng& rng) const {
    std::normal_distribution<double> nd;
    Eigen::VectorXd x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = nd(rng);
    for (const auto& step : steps_) {
        const double s = step.numerator.sample(rng)[0];
        x += step.direction * (s - step.direction.dot(x));
    }
    return x;
}

double PursuitState::cached_integral_term(const Eigen::VectorXd& b,
                                          const Eigen::VectorXd& a) const {
    CacheKey key{{b.data(), b.data() + b.size()}, {a.data(), a.data() + a.size()}};
    auto it = integral_cache_.find(key);
    if (it != integral_cache_.end()) return it->second;
    const CriterionValue cv = evaluate_criterion(*this, b, a);
    integral_cache_.emplace(std::move(key), cv.b1);
    return cv.b1;
}

CriterionValue evaluate_criterion(const PursuitState& state, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& a) {
    const Eigen::MatrixXd& X = state.data_f();
    const Eigen::MatrixXd& Y = state.data_g();
    const PhiSpec& phi = state.phi();
    const double theta = state.theta();
    const double cut_d = theta * std::min(state.f_kde().self_term_floor(),
                                          state.g_kde().self_term_floor());

    const Eigen::VectorXd proj_xb = X * b;
    const Eigen::VectorXd proj_yb = Y * b;
    const KernelDensity f_b = kde_fit(proj_xb);
    const KernelDensity g_b = kde_fit(proj_yb);
    const bool same = (&a == &b) || (a.size() == b.size() && (a.array() == b.array()).all());
    const KernelDensity f_a = same ? f_b : kde_fit(Eigen::MatrixXd(X * a));
    const KernelDensity g_a = same ? g_b : kde_fit(Eigen::MatrixXd(Y * a));
    const Eigen::VectorXd proj_ya = same ? proj_yb : Eigen::VectorXd(Y * a);
    const Eigen::VectorXd proj_xa = same ? proj_xb : Eigen::VectorXd(X * a);
    const double cut_gb = theta * g_b.self_term_floor();
    const double cut_ga = theta * g_a.self_term_floor();

    CriterionValue cv;
    // B1: averages phi'(ratio) * f_{a,n} / g_{a,n} over the g^(k-1) sample
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
        const double fn = state.f_at_y()[i];
        const double gb = g_b.loo_at_fitting_point(g_b.pdf1d(proj_yb[i]));
        const double ga = same ? gb : g_a.loo_at_fitting_point(g_a.pdf1d(proj_ya[i]));
        if (fn < cut_d || gb < cut_gb || ga < cut_ga) continue;
        const double rb =
            std::max(state.g_at_y()[i] * f_b.pdf1d(proj_yb[i]) / (gb * fn), kRatioFloor);
        cv.b1 += phi.phi_prime(rb) * f_a.pdf1d(proj_ya[i]) / ga;
        ++cv.kept_y;
    }
    // B2: averages phi*(phi'(ratio)) over the f sample
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double fn = state.f_at_x()[i];
        const double gb = g_b.pdf1d(proj_xb[i]);
        if (fn < cut_d || gb < cut_gb) continue;
        const double fb = f_b.loo_at_fitting_point(f_b.pdf1d(proj_xb[i]));
        const double rb = std::max(state.g_at_x()[i] * fb / (gb * fn), kRatioFloor);
        cv.b2 += phi.phi_star_of_prime(rb);
        ++cv.kept_x;
    }
    (void)proj_xa;
    if (cv.kept_x < 10 || cv.kept_y < 10)
        throw OverTruncationError("evaluate_criterion: fewer than 10 points survive the "
                                  "plug-in cutoff");
    cv.b1 /= cv.kept_y;
    cv.b2 /= cv.kept_x;
    return cv;
}

double m_term(const PursuitState& state, const Eigen::VectorXd& b, const Eigen::VectorXd& a,
              const Eigen::VectorXd& x) {
    const Eigen::VectorXd bn = normalize_direction(b);
    const Eigen::VectorXd an = normalize_direction(a);
    const double integral = state.cached_integral_term(bn, an);

    const double fn = state.f_kde().pdf(x);
    const KernelDensity f_b = kde_fit(Eigen::MatrixXd(state.data_f() * bn));
    const KernelDensity g_b = kde_fit(Eigen::MatrixXd(state.data_g() * bn));
    const double t = bn.dot(x);
    const double gb = g_b.pdf1d(t);
    if (fn < 0.5 * state.plugin_cutoff() ||
        gb < 0.5 * state.theta() * g_b.self_term_floor())
        throw TruncationViolationError(
            "m_term: plug-in density below theta/2 at the evaluation point");
    const double rb = std::max(state.g_kde().pdf(x) * f_b.pdf1d(t) / (gb * fn), kRatioFloor);
    return integral - state.phi().phi_star_of_prime(rb);
}

double empirical_divergence(const PursuitState& state, const Eigen::VectorXd& a) {
    const Eigen::VectorXd an = normalize_direction(a);
    return evaluate_criterion(state, an, an).value();
}

DirectionSearch criterion_sup_inf(const PursuitState& state, const Eigen::VectorXd& a,
                                  const OptimizerConfig& opt, math::Rng& rng) {
    const Eigen::VectorXd an = normalize_direction(a);
    const Eigen::MatrixXd basis = orthogonal_complement(state);
    const int sub = static_cast<int>(basis.cols());
    auto objective = [&](const Eigen::VectorXd& u) {
        return -evaluate_criterion(state, basis * u, an).value();
    };
    if (sub == 1) {
        const Eigen::VectorXd c = math::canonical_sign(basis.col(0));
        return {c, -objective(basis.transpose() * c), false};
    }
    Eigen::VectorXd a_in_sub = basis.transpose() * an;
    const bool a_in_space = a_in_sub.norm() > 1e-6;
    if (a_in_space) a_in_sub.normalize();
    const SphereOptimum best =
        optimize_on_sphere(objective, sub, opt, rng, a_in_space ? &a_in_sub : nullptr);
    return {math::canonical_sign(basis * best.u), -best.value, best.degraded};
}

DirectionSearch find_direction(const PursuitState& state, const OptimizerConfig& opt,
                               math::Rng& rng) {
    if (state.step_count() >= state.dim())
        throw ConstraintError("find_direction: the state already has d steps");
    const Eigen::MatrixXd basis = orthogonal_complement(state);
    const int sub = static_cast<int>(basis.cols());
    auto objective = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd b = basis * u;
        return evaluate_criterion(state, b, b).value();
    };
    if (sub == 1) {
        const Eigen::VectorXd b = math::canonical_sign(basis.col(0));
        return {b, empirical_divergence(state, b), false};
    }
    const SphereOptimum best = optimize_on_sphere(objective, sub, opt, rng);
    return {math::canonical_sign(basis * best.u), best.value, best.degraded};
}

Eigen::MatrixXd draw_truncated_sample(const PursuitState& state, Eigen::Index n, math::Rng& rng) {
    Eigen::MatrixXd out(n, state.dim());
    const double cutoff = state.plugin_cutoff();
    Eigen::Index filled = 0;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * static_cast<std::size_t>(n) + 100000;
    while (filled < n) {
        if (++attempts > max_attempts)
            throw OverTruncationError(
                "draw_truncated_sample: rejection rate too high, cutoff excludes nearly all "
                "the instrumental mass");
        const Eigen::VectorXd y = state.sample(rng);
        if (state.pdf(y) >= cutoff) out.row(filled++) = y.transpose();
    }
    return out;
}

PursuitState update_state(const PursuitState& state, const Eigen::VectorXd& a, math::Rng& rng) {
    Eigen::VectorXd dir = a / a.norm();
    for (const auto& step : state.steps()) {
        if (std::abs(step.direction.dot(dir)) > 1e-8)
            throw ConstraintError("update_state: direction is not orthogonal to prior steps");
        dir -= step.direction.dot(dir) * step.direction;
    }
    const double norm = dir.norm();
    if (norm < 1e-8)
        throw ConstraintError("update_state: direction lies in the span of prior steps");
    dir = math::canonical_sign(dir / norm);

    PursuitState next(state);
    next.steps_.push_back({dir, kde_fit(Eigen::MatrixXd(state.data_f() * dir))});
    next.data_g_ = draw_truncated_sample(next, state.data_g().rows(), rng);
    next.g_kde_ = kde_fit(next.data_g_);
    next.refresh_caches();
    return next;
}

}  // namespace phipp
