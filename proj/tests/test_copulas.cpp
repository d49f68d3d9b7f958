#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "phipp/copulas.hpp"
#include "phipp/errors.hpp"

using namespace phipp;

namespace {

std::vector<CopulaFamily> reference_families() {
    return {CopulaFamily::gaussian(0.5),  CopulaFamily::gaussian(-0.7),
            CopulaFamily::clayton(2.0),   CopulaFamily::gumbel(2.5),
            CopulaFamily::frank(3.0),     CopulaFamily::frank(-2.0),
            CopulaFamily::periodic_flat(), CopulaFamily::independent()};
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double mx = x.mean(), my = y.mean();
    const Eigen::ArrayXd cx = x.array() - mx, cy = y.array() - my;
    return (cx * cy).sum() / std::sqrt(cx.square().sum() * cy.square().sum());
}

}  // namespace

TEST_CASE("gaussian copula density") {
    for (double u = 0.1; u < 1.0; u += 0.2)
        for (double v = 0.1; v < 1.0; v += 0.2)
            CHECK(gaussian_copula_density(0.0, u, v) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(gaussian_copula_density(0.5, 0.5, 0.5) ==
          doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-12));
    CHECK(gaussian_copula_density(0.5, 0.8413, 0.8413) ==
          doctest::Approx(1.6116).epsilon(1e-3));

    CHECK_THROWS_AS(gaussian_copula_density(0.5, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(gaussian_copula_density(0.5, 0.5, 1.0), DomainError);
}

TEST_CASE("copula cdf closed-form anchors") {
    CHECK(CopulaFamily::gumbel(1.0).cdf(0.3, 0.8) == doctest::Approx(0.24).epsilon(1e-12));
    CHECK(CopulaFamily::clayton(2.0).cdf(0.5, 0.5) ==
          doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
    // the flat periodic generator is the independent copula
    const CopulaFamily flat = CopulaFamily::periodic_flat();
    for (double u = 0.05; u < 1.0; u += 0.13)
        for (double v = 0.05; v < 1.0; v += 0.13)
            CHECK(std::abs(flat.cdf(u, v) - u * v) < 1e-9);
    // Frank tends to independence as alpha -> 0
    CHECK(CopulaFamily::frank(1e-4).cdf(0.3, 0.7) == doctest::Approx(0.21).epsilon(1e-3));

    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(CopulaFamily::gaussian(1.0), DomainError);
        CHECK_THROWS_AS(CopulaFamily::clayton(0.0), DomainError);
        CHECK_THROWS_AS(CopulaFamily::gumbel(0.5), DomainError);
        CHECK_THROWS_AS(CopulaFamily::frank(0.0), DomainError);
        CHECK_THROWS_AS(CopulaFamily::periodic([](double) { return 2.0; }), DomainError);
    }
}

TEST_CASE("frechet bounds") {
    const auto [lo1, hi1] = frechet_bounds(Eigen::Vector2d(0.3, 0.4));
    CHECK(lo1 == 0.0);
    CHECK(hi1 == doctest::Approx(0.3));
    const auto [lo2, hi2] = frechet_bounds(Eigen::Vector2d(0.6, 1.0));
    CHECK(lo2 == doctest::Approx(0.6));
    CHECK(hi2 == doctest::Approx(0.6));
    const auto [lo3, hi3] = frechet_bounds(Eigen::Vector3d(1.0, 1.0, 1.0));
    CHECK(lo3 == doctest::Approx(1.0));
    CHECK(hi3 == doctest::Approx(1.0));
}

TEST_CASE("every family respects the copula axioms on a grid") {
    for (const CopulaFamily& fam : reference_families()) {
        for (double u = 0.05; u <= 0.96; u += 0.1) {
            CHECK(std::abs(fam.cdf(u, 1.0) - u) < 1e-9);
            CHECK(std::abs(fam.cdf(1.0, u) - u) < 1e-9);
            CHECK(fam.cdf(u, 0.0) == 0.0);
            for (double v = 0.05; v <= 0.96; v += 0.1) {
                const double c = fam.cdf(u, v);
                const auto [w, m] = frechet_bounds(Eigen::Vector2d(u, v));
                CHECK(c >= w - 1e-9);
                CHECK(c <= m + 1e-9);
            }
        }
    }
}

TEST_CASE("mixed differences integrate to one") {
    // telescoping: the sum of all mixed second differences of C over a
    // partition equals C(1,1)
    for (const CopulaFamily& fam : reference_families()) {
        const int n = 64;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double u0 = static_cast<double>(i) / n, u1 = (i + 1.0) / n;
                const double v0 = static_cast<double>(j) / n, v1 = (j + 1.0) / n;
                const double mass =
                    fam.cdf(u1, v1) - fam.cdf(u0, v1) - fam.cdf(u1, v0) + fam.cdf(u0, v0);
                CHECK(mass >= -1e-9);  // 2-increasing
                total += mass;
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-2));
    }
}

TEST_CASE("copula sampling") {
    SUBCASE("independent pairs are uncorrelated") {
        math::Rng rng(3);
        const Eigen::MatrixXd s = CopulaFamily::independent().sample(100000, rng);
        CHECK(std::abs(pearson(s.col(0), s.col(1))) < 0.01);
    }
    SUBCASE("gaussian dependence is recovered on the normal scale") {
        math::Rng rng(4);
        const Eigen::MatrixXd s = CopulaFamily::gaussian(0.5).sample(100000, rng);
        Eigen::VectorXd zx(s.rows()), zy(s.rows());
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            zx[i] = math::normal_quantile(s(i, 0));
            zy[i] = math::normal_quantile(s(i, 1));
        }
        CHECK(pearson(zx, zy) == doctest::Approx(0.5).epsilon(0.02));
    }
    SUBCASE("margins are uniform for every family") {
        const double critical = 1.63 / std::sqrt(10000.0);  // KS, 1% level
        int idx = 0;
        for (const CopulaFamily& fam : reference_families()) {
            math::Rng rng(100 + idx++);
            const Eigen::MatrixXd s = fam.sample(10000, rng);
            for (int j = 0; j < 2; ++j) {
                std::vector<double> col(s.col(j).data(), s.col(j).data() + s.rows());
                const double ks = math::ks_distance(col, [](double t) { return t; });
                CHECK(ks < critical);
            }
        }
    }
    SUBCASE("conditional inversion hits the requested quantile") {
        const CopulaFamily clayton = CopulaFamily::clayton(3.0);
        math::Rng rng(5);
        const Eigen::MatrixXd s = clayton.sample(200, rng);
        // C_u(u, v) must be increasing in v and the sampler inverts it
        for (int i = 0; i < 10; ++i) {
            const double u = s(i, 0), v = s(i, 1);
            const double w = clayton.conditional_cdf(u, v);
            CHECK(w >= 0.0);
            CHECK(w <= 1.0);
        }
    }
}

TEST_CASE("empirical copula density grid") {
    const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();

    SUBCASE("independent uniforms give a flat grid in the centre") {
        math::Rng rng(6);
        const Eigen::MatrixXd s = CopulaFamily::independent().sample(10000, rng);
        const CopulaGrid grid = empirical_copula_density_grid(s, eye, 25);
        for (int i = 0; i < 25; ++i) {
            for (int j = 0; j < 25; ++j) {
                const double u = grid.node(i), v = grid.node(j);
                if (u < 0.2 || u > 0.8 || v < 0.2 || v > 0.8) continue;
                CHECK(grid.at({i, j}) == doctest::Approx(1.0).epsilon(0.2));
            }
        }
    }
    SUBCASE("gaussian copula centre value") {
        math::Rng rng(7);
        const Eigen::MatrixXd s = CopulaFamily::gaussian(0.5).sample(10000, rng);
        const CopulaGrid grid = empirical_copula_density_grid(s, eye, 25);
        const int mid = 12;  // node(12) = 0.5
        CHECK(grid.node(mid) == doctest::Approx(0.5));
        CHECK(std::abs(grid.at({mid, mid}) - 1.1547) < 0.15);
    }
    SUBCASE("grids are invariant under pre-transformed samples") {
        math::Rng rng(8);
        const Eigen::MatrixXd s = CopulaFamily::gaussian(0.3).sample(500, rng);
        Eigen::Matrix2d basis;
        basis << 0.8, -0.6, 0.6, 0.8;
        const CopulaGrid g1 = empirical_copula_density_grid(s, basis, 10);
        const CopulaGrid g2 = empirical_copula_density_grid(s * basis, eye, 10);
        for (std::size_t k = 0; k < g1.values.size(); ++k)
            CHECK(g1.values[k] == g2.values[k]);
    }
    SUBCASE("singular basis rejected") {
        math::Rng rng(9);
        const Eigen::MatrixXd s = CopulaFamily::independent().sample(100, rng);
        Eigen::Matrix2d bad;
        bad << 1, 2, 2, 4;
        CHECK_THROWS_AS(empirical_copula_density_grid(s, bad, 10), DomainError);
    }
}

TEST_CASE("grid csv round trip is bit exact") {
    math::Rng rng(10);
    const Eigen::MatrixXd s = CopulaFamily::gaussian(0.4).sample(300, rng);
    const CopulaGrid grid =
        empirical_copula_density_grid(s, Eigen::Matrix2d::Identity(), 12);
    const std::string csv = copula_grid_csv(grid);
    const CopulaGrid back = copula_grid_from_csv(csv);
    REQUIRE(back.values.size() == grid.values.size());
    CHECK(back.resolution == grid.resolution);
    for (std::size_t k = 0; k < grid.values.size(); ++k)
        CHECK(back.values[k] == grid.values[k]);
}
