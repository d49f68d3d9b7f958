// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. The exit code is the number
// of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "phipp/datasets.hpp"
#include "phipp/divergence.hpp"
#include "phipp/gof.hpp"
#include "phipp/harness.hpp"

using namespace phipp;
using json = nlohmann::json;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, title.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

DensityFn gauss1(double mean, double var) {
    return [=](const Eigen::VectorXd& x) { return math::normal_pdf(x[0], mean, var); };
}

math::GridSpec grid1(double lo, double hi, int n = 16000) {
    math::GridSpec g;
    g.lo = Eigen::VectorXd::Constant(1, lo);
    g.hi = Eigen::VectorXd::Constant(1, hi);
    g.counts = {n};
    return g;
}

Eigen::MatrixXd gaussian_rows(int n, int d, math::Rng& rng) {
    const EllipticalDensity g = EllipticalDensity::standard_gaussian(d);
    Eigen::MatrixXd out(n, d);
    for (int i = 0; i < n; ++i) out.row(i) = g.sample(rng).transpose();
    return out;
}

PursuitState sampled_state(const PhiSpec& phi, const Eigen::MatrixXd& data_f, unsigned seed,
                           double theta) {
    math::Rng rng(math::mix_seed(0xACCE97, seed));
    Eigen::MatrixXd data_g = gaussian_rows(static_cast<int>(data_f.rows()),
                                           static_cast<int>(data_f.cols()), rng);
    return PursuitState(phi, data_f, data_g, theta);
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

char buf[512];

// 1. Threshold arithmetic.
void criterion1() {
    const double t50 = ellipsoid_threshold(0.9, 50, 0.2533);
    const double t140 = ellipsoid_threshold(0.9, 140, 0.2533);
    const bool pass = std::abs(t50 - 0.03582) <= 5e-6 && std::abs(t140 - 0.02140776) <= 5e-8;
    std::snprintf(buf, sizeof buf, "q/sqrt(50) = %.7f, q/sqrt(140) = %.9f", t50, t140);
    report(1, pass, "threshold arithmetic", buf);
}

// 2. Simulation 1 reproduction over 20 seeds.
void criterion2() {
    int angles_ok = 0, decisions_ok = 0;
    for (unsigned s = 1; s <= 20; ++s) {
        RunConfig c;
        c.seed = s;
        const json j = json::parse(cmd_sim("sim1", c).report_json);
        const auto dir = [&](int k) {
            return vec2(j["steps"][k]["direction"][0], j["steps"][k]["direction"][1]);
        };
        const double a0 = math::angle_between(dir(0), vec2(1, 0)) * 180.0 / math::pi;
        const double a1 = math::angle_between(dir(1), vec2(0, 1)) * 180.0 / math::pi;
        if (a0 <= 10.0 && a1 <= 10.0) ++angles_ok;
        const bool rej0 = !j["steps"][0]["accepted"].get<bool>();
        const bool acc1 = j["steps"][1]["accepted"].get<bool>();
        if (rej0 && acc1) ++decisions_ok;
    }
    const bool pass = angles_ok >= 16 && decisions_ok >= 14;
    std::snprintf(buf, sizeof buf,
                  "directions within 10 degrees of (e1, e2): %d/20 (need 16), decision "
                  "sequence (reject, accept): %d/20 (need 14)",
                  angles_ok, decisions_ok);
    report(2, pass, "simulation 1 reproduction", buf);
}

// 3. Simulation 2 reproduction over 20 seeds.
void criterion3() {
    int verdicts = 0;
    for (unsigned s = 1; s <= 20; ++s) {
        RunConfig c;
        c.seed = s;
        const json j = json::parse(cmd_sim("sim2", c).report_json);
        if (j["verdict"].get<bool>()) ++verdicts;
    }
    const bool pass = verdicts >= 14;
    std::snprintf(buf, sizeof buf, "independence verdict in %d/20 seeds (need 14)", verdicts);
    report(3, pass, "simulation 2 reproduction", buf);
}

// 4. Real-data study: decisions and grid flatness.
void criterion4() {
    int both_accept_flat = 0;
    for (unsigned s = 1; s <= 10; ++s) {
        RunConfig c;
        c.seed = s;
        c.grid_resolution = 2;  // grids recomputed once below
        const json j = json::parse(cmd_realdata(c).report_json);
        const bool ok = j["steps"][0]["accepted"].get<bool>() &&
                        j["steps"][1]["accepted"].get<bool>() &&
                        j["flat_copula"].get<bool>();
        if (ok) ++both_accept_flat;
    }
    RunConfig c;
    c.seed = 1;
    c.grid_resolution = 50;
    const CommandResult r = cmd_realdata(c);
    const CopulaGrid grid = copula_grid_from_csv(r.grids[1].second);
    double acc = 0.0;
    int cnt = 0;
    for (int i = 0; i < grid.resolution; ++i) {
        for (int j2 = 0; j2 < grid.resolution; ++j2) {
            const double u = grid.node(i), v = grid.node(j2);
            if (u < 0.2 || u > 0.8 || v < 0.2 || v > 0.8) continue;
            acc += std::abs(grid.at({i, j2}) - 1.0);
            ++cnt;
        }
    }
    const double flatness = acc / cnt;
    const bool pass = both_accept_flat >= 7 && flatness < 0.3;
    std::snprintf(buf, sizeof buf,
                  "two accepted steps with flat copula in %d/10 seeds (need 7), mean "
                  "|density-1| on the central region %.4f (need < 0.3)",
                  both_accept_flat, flatness);
    report(4, pass, "real-data study", buf);
}

// 5. Dual-estimator oracle equivalence at n = 5000.
void criterion5() {
    const double theta = std::pow(5000.0, -1.0 / 12.0);
    const double tol = 0.05;
    bool pass = true;
    std::string detail;

    // (a) shift along the tested direction: candidate equals f, so D = 0
    math::Rng r1(271);
    const EllipticalDensity f1 =
        EllipticalDensity::gaussian(vec2(1, 0), Eigen::Matrix2d::Identity());
    Eigen::MatrixXd X1(5000, 2);
    for (int i = 0; i < 5000; ++i) X1.row(i) = f1.sample(r1).transpose();
    PursuitState s1 = sampled_state(PhiSpec::kullback_leibler(), X1, 1, theta);
    const double d1 = empirical_divergence(s1, vec2(1, 0));
    pass = pass && std::abs(d1 - 0.0) <= tol;
    detail += "KL(a=e1): " + std::to_string(d1) + " vs 0";

    // (b) shift orthogonal to the tested direction: candidate equals g
    const double d2 = empirical_divergence(s1, vec2(0, 1));
    const double oracle2 = divergence_numeric(PhiSpec::kullback_leibler(), gauss1(0, 1),
                                              gauss1(1, 1), grid1(-8.0, 9.0));
    pass = pass && std::abs(d2 - oracle2) <= tol;
    detail += ", KL(a=e2): " + std::to_string(d2) + " vs " + std::to_string(oracle2);

    // (c) diagonal direction under chi-square, oracle by 2-D quadrature
    math::Rng r2(272);
    const Eigen::VectorXd mu = vec2(0.6, 0.0);
    const EllipticalDensity f2 = EllipticalDensity::gaussian(mu, Eigen::Matrix2d::Identity());
    Eigen::MatrixXd X2(5000, 2);
    for (int i = 0; i < 5000; ++i) X2.row(i) = f2.sample(r2).transpose();
    PursuitState s2 = sampled_state(PhiSpec::chi_square(), X2, 2, theta);
    const Eigen::VectorXd a = vec2(1, 1).normalized();
    const double d3 = empirical_divergence(s2, a);
    DensityFn qf = [&](const Eigen::VectorXd& x) {
        const double t = a.dot(x);
        return EllipticalDensity::standard_gaussian(2).pdf(x) *
               math::normal_pdf(t, a.dot(mu), 1.0) / math::normal_pdf(t);
    };
    DensityFn pf = [&](const Eigen::VectorXd& x) { return f2.pdf(x); };
    math::GridSpec g2;
    g2.lo = Eigen::VectorXd::Constant(2, -8.5);
    g2.hi = Eigen::VectorXd::Constant(2, 9.2);
    g2.counts = {400, 400};
    const double oracle3 = divergence_numeric(PhiSpec::chi_square(), qf, pf, g2);
    pass = pass && std::abs(d3 - oracle3) <= tol;
    detail += ", chi2(diag): " + std::to_string(d3) + " vs " + std::to_string(oracle3);

    report(5, pass, "dual-estimator oracle equivalence", detail);
}

// 6. Closed-form divergence checks.
void criterion6() {
    const double kl = divergence_numeric(PhiSpec::kullback_leibler(), gauss1(1, 1),
                                         gauss1(0, 1), grid1(-8.0, 9.0));
    const double chi2 =
        divergence_numeric(PhiSpec::chi_square(), gauss1(1, 1), gauss1(0, 1), grid1(-8.0, 9.0));
    bool pass = std::abs(kl - 0.5) <= 1e-3 && std::abs(chi2 - 0.85914) <= 1e-3;
    double worst_self = 0.0;
    for (const PhiSpec& phi :
         {PhiSpec::kullback_leibler(), PhiSpec::chi_square(), PhiSpec::hellinger(),
          PhiSpec::power(3.0), PhiSpec::power(8.0), PhiSpec::power(-1.0), PhiSpec::l1()}) {
        const double self =
            divergence_numeric(phi, gauss1(0, 1), gauss1(0, 1), grid1(-8.0, 8.0));
        worst_self = std::max(worst_self, std::abs(self));
    }
    pass = pass && worst_self <= 1e-9;
    std::snprintf(buf, sizeof buf, "KL = %.5f, chi2 = %.5f, max |D(p,p)| = %.2e", kl, chi2,
                  worst_self);
    report(6, pass, "closed-form divergence checks", buf);
}

// 7. CLT calibration of the normalized statistic under the null.
void criterion7() {
    const int reps = 200, n = 1000;
    std::vector<double> stats;
    const Eigen::VectorXd b = vec2(1, 0);
    for (int r = 0; r < reps; ++r) {
        math::Rng rng(math::mix_seed(777, r));
        const Eigen::MatrixXd X = gaussian_rows(n, 2, rng);
        const Eigen::MatrixXd Y = gaussian_rows(n, 2, rng);
        PursuitState st(PhiSpec::chi_square(), X, Y, std::pow(n, -1.0 / 12.0));
        stats.push_back(test_statistic(st, b).statistic);
    }
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= reps;
    const double ks = math::ks_distance(stats, [](double x) { return math::normal_cdf(x); });
    const bool pass = ks < 0.15;
    std::snprintf(buf, sizeof buf,
                  "KS distance to N(0,1) over %d replicates: %.3f (need < 0.15; replicate "
                  "mean %.2f)",
                  reps, ks, mean);
    report(7, pass, "CLT calibration of the null statistic", buf);
}

// 8. Property suites.
void criterion8() {
    bool pass = true;
    std::string detail;

    // phi kernel properties: convexity, Pinsker-type L1 domination,
    // conjugate identity
    {
        bool phi_ok = true;
        math::Rng rng(88);
        std::uniform_real_distribution<double> ux(1e-6, 10.0), ut(1e-3, 1.0 - 1e-3);
        const auto specs = {PhiSpec::kullback_leibler(), PhiSpec::chi_square(),
                            PhiSpec::hellinger(),        PhiSpec::power(3.0),
                            PhiSpec::power(8.0),         PhiSpec::l1()};
        for (const PhiSpec& spec : specs) {
            for (int i = 0; i < 500; ++i) {
                const double x = ux(rng), y = ux(rng), t = ut(rng);
                if (spec.phi(t * x + (1 - t) * y) >
                    t * spec.phi(x) + (1 - t) * spec.phi(y) + 1e-12 * (1 + spec.phi(x)))
                    phi_ok = false;
            }
            if (spec.differentiable()) {
                for (double lx = -3.0; lx <= 3.0; lx += 0.2) {
                    const double x = std::pow(10.0, lx);
                    const double lhs = spec.phi_star_of_prime(x);
                    const double rhs = x * spec.phi_prime(x) - spec.phi(x);
                    if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(rhs))) phi_ok = false;
                }
            }
            const double d = divergence_numeric(spec, gauss1(0.5, 1.0), gauss1(0, 1),
                                                grid1(-9.0, 9.0));
            double l1 = 0.0;
            const auto g = grid1(-9.0, 9.0);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const Eigen::VectorXd x = g.node(i);
                l1 += std::abs(math::normal_pdf(x[0], 0.5, 1.0) - math::normal_pdf(x[0]));
            }
            l1 *= g.cell_volume();
            if (d < 0.5 * spec.curvature_at_one() * l1 * l1 - 1e-9) phi_ok = false;
        }
        pass = pass && phi_ok;
        detail += std::string("phi properties ") + (phi_ok ? "ok" : "FAILED");
    }

    // Frechet bounds for every copula family
    {
        bool fh_ok = true;
        for (const CopulaFamily& fam :
             {CopulaFamily::gaussian(0.5), CopulaFamily::gaussian(-0.7),
              CopulaFamily::clayton(2.0), CopulaFamily::gumbel(2.5), CopulaFamily::frank(3.0),
              CopulaFamily::periodic_flat(), CopulaFamily::independent()}) {
            for (double u = 0.05; u <= 0.96; u += 0.1) {
                for (double v = 0.05; v <= 0.96; v += 0.1) {
                    const double c = fam.cdf(u, v);
                    const auto [w, m] = frechet_bounds(Eigen::Vector2d(u, v));
                    if (c < w - 1e-9 || c > m + 1e-9) fh_ok = false;
                }
            }
        }
        pass = pass && fh_ok;
        detail += std::string(", frechet bounds ") + (fh_ok ? "ok" : "FAILED");
    }

    // flat periodic generator equals the independent copula
    {
        bool per_ok = true;
        const CopulaFamily flat = CopulaFamily::periodic_flat();
        for (double u = 0.05; u <= 0.96; u += 0.07)
            for (double v = 0.05; v <= 0.96; v += 0.07)
                if (std::abs(flat.cdf(u, v) - u * v) > 1e-9) per_ok = false;
        pass = pass && per_ok;
        detail += std::string(", periodic h=1 ") + (per_ok ? "ok" : "FAILED");
    }

    // scale and sign invariance of the criterion
    {
        math::Rng rng(89);
        const Eigen::MatrixXd data = gaussian_rows(300, 2, rng);
        PursuitState st = sampled_state(PhiSpec::chi_square(), data, 3, 0.5);
        const Eigen::VectorXd a = vec2(0.6, 0.8);
        const double ref = empirical_divergence(st, a);
        const bool inv_ok = empirical_divergence(st, -a) == ref &&
                            empirical_divergence(st, 0.5 * a) == ref &&
                            std::abs(empirical_divergence(st, 3.0 * a) - ref) <= 1e-12;
        pass = pass && inv_ok;
        detail += std::string(", scale/sign invariance ") + (inv_ok ? "ok" : "FAILED");
    }

    // orthogonality of returned directions and state normalisation
    {
        math::Rng rng(90);
        const Eigen::MatrixXd data = simulate_coupled_margins(200, rng);
        math::Rng rp(91);
        RunConfig c;
        const PursuitOutcome out = run_pursuit(data, TestMode::Elliptical,
                                               PhiSpec::chi_square(), c.settings(), rp);
        const double dot = std::abs(out.reports[0].direction_whitened.dot(
            out.reports[1].direction_whitened));
        bool orth_ok = dot <= 1e-8;
        double mass = 0.0;
        const int nn = 300;
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j)
                mass += out.state.pdf(
                    vec2(-8.0 + (i + 0.5) * 16.0 / nn, -8.0 + (j + 0.5) * 16.0 / nn));
        mass *= (16.0 / nn) * (16.0 / nn);
        const bool mass_ok = std::abs(mass - 1.0) <= 1e-2;
        pass = pass && orth_ok && mass_ok;
        std::snprintf(buf, sizeof buf, ", orthogonality %.1e, state mass %.4f", dot, mass);
        detail += buf;
        pass = pass && orth_ok && mass_ok;
    }

    // monotone non-increase of step divergences (tolerance 0.1)
    {
        bool mono_ok = true;
        for (unsigned s = 1; s <= 5; ++s) {
            math::Rng rng(math::mix_seed(92, s));
            const Eigen::MatrixXd data = simulate_coupled_margins(500, rng);
            math::Rng rp(math::mix_seed(93, s));
            RunConfig c;
            const PursuitOutcome out = run_pursuit(data, TestMode::Elliptical,
                                                   PhiSpec::chi_square(), c.settings(), rp);
            if (out.reports[1].divergence_estimate >
                out.reports[0].divergence_estimate + 0.1)
                mono_ok = false;
        }
        pass = pass && mono_ok;
        detail += std::string(", monotone steps ") + (mono_ok ? "ok" : "FAILED");
    }

    report(8, pass, "property suites", detail);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    std::printf("================\n%d of 8 criteria failed\n", failures);
    return failures;
}
