#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "relimp/importance_binary.hpp"
#include "relimp/importance_continuous.hpp"
#include "relimp/lifetime.hpp"
#include "relimp/oracle.hpp"
#include "relimp/rng.hpp"
#include "relimp/structure.hpp"

using namespace relimp;

namespace {

LifetimeModel series_exp(double rate1, double rate2) {
    return LifetimeModel(StructureFunction::from_expression("series(1,2)"),
                         {LifetimeDistribution::exponential(rate1),
                          LifetimeDistribution::exponential(rate2)});
}

LifetimeModel single_exp(double rate) {
    return LifetimeModel(StructureFunction::from_table(1, {false, true}),
                         {LifetimeDistribution::exponential(rate)});
}

LifetimeDistribution random_dist(Rng& rng) {
    switch (rng.below(5)) {
        case 0:
        case 1:
            return LifetimeDistribution::exponential(rng.uniform(0.3, 3.0));
        case 2:
        case 3:
            return LifetimeDistribution::weibull(rng.uniform(0.8, 2.5), rng.uniform(0.3, 3.0));
        default: {
            std::vector<double> xs;
            const int k = rng.uniform_int(2, 6);
            for (int i = 0; i < k; ++i) xs.push_back(rng.uniform(0.1, 3.0));
            return LifetimeDistribution::empirical(std::move(xs));
        }
    }
}

LifetimeModel random_model(Rng& rng, int n_max) {
    const int n = rng.uniform_int(2, n_max);
    std::vector<int> comps(n);
    std::iota(comps.begin(), comps.end(), 1);
    auto sf = StructureFunction::from_expr(oracle::random_read_once_expr(rng, comps));
    std::vector<LifetimeDistribution> dists;
    for (int i = 0; i < n; ++i) dists.push_back(random_dist(rng));
    return LifetimeModel(std::move(sf), std::move(dists));
}

}  // namespace

TEST_CASE("covariance surface") {
    auto m = series_exp(1.0, 1.0);
    const double ln2 = std::log(2.0);
    CHECK(cov_surface(m, 1, 0.0, 1.0) == doctest::Approx(0.0));
    CHECK(cov_surface(m, 1, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(cov_surface(m, 1, ln2, ln2) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(cov_surface(m, 2, ln2, ln2) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK_THROWS_AS(cov_surface(m, 1, -0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cov_surface(m, 3, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("diagonal covariance equals the binary covariance importance at p(t)") {
    Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_model(rng, 5);
        const double t = rng.uniform(0.05, 2.0);
        std::vector<double> p(static_cast<std::size_t>(m.n()));
        for (int j = 1; j <= m.n(); ++j) p[j - 1] = m.distribution(j).survival(t);
        const auto cov = covariance_importance(m.structure(), p);
        for (int i = 1; i <= m.n(); ++i) {
            CHECK(cov_surface(m, i, t, t) == doctest::Approx(cov.values[i - 1]).epsilon(1e-11));
            CHECK(diagonal_covariance(m, i, t) ==
                  doctest::Approx(cov.values[i - 1]).epsilon(1e-11));
        }
    }
}

TEST_CASE("covariance surface is nonnegative for coherent systems") {
    Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = random_model(rng, 5);
        const double t_max = m.horizon(1e-6);
        for (int i = 1; i <= m.n(); ++i)
            for (int a = 0; a <= 12; ++a)
                for (int b = 0; b <= 12; ++b)
                    CHECK(cov_surface(m, i, t_max * a / 12.0, t_max * b / 12.0) >= -1e-12);
    }
}

TEST_CASE("diagonal dominance of the covariance surface") {
    Rng rng(79);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = random_model(rng, 5);
        const double t_max = m.horizon(1e-6);
        std::vector<double> grid;
        for (int k = 0; k < 48; ++k) grid.push_back(t_max * k / 47.0);
        for (int i = 1; i <= m.n(); ++i) {
            double rect = 0.0, diag = 0.0;
            for (double s : grid)
                for (double t : grid) rect = std::max(rect, cov_surface(m, i, s, t));
            for (double t : grid) diag = std::max(diag, cov_surface(m, i, t, t));
            CHECK(rect <= diag + 1e-3);
        }
    }
}

TEST_CASE("covariance curve") {
    auto m = series_exp(1.0, 1.0);
    const double t_max = m.horizon(1e-9);
    std::vector<double> grid{0.0, std::log(2.0), t_max};
    auto curve = covariance_curve(m, 1, grid);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].second == doctest::Approx(0.0));
    CHECK(curve[1].second == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(curve[2].second <= 1e-5);  // beyond every relevant quantile
    CHECK_THROWS_AS(covariance_curve(m, 1, std::vector<double>{1.0, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(covariance_curve(m, 1, std::vector<double>{-1.0, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("L1 covariance importance") {
    SUBCASE("equal-rate series") {
        auto rep = l1_covariance_importance(series_exp(1.0, 1.0));
        CHECK(rep.values[0] == doctest::Approx(0.25).epsilon(1e-6));
        CHECK(rep.values[1] == doctest::Approx(0.25).epsilon(1e-6));
    }
    SUBCASE("unequal rates still tie") {
        auto rep = l1_covariance_importance(series_exp(2.0, 1.0));
        CHECK(rep.values[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-6));
        CHECK(rep.values[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-6));
        CHECK(std::abs(rep.values[0] - rep.values[1]) < 1e-6);
    }
    SUBCASE("single component gives the variance") {
        auto rep = l1_covariance_importance(single_exp(1.0));
        CHECK(rep.values[0] == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("empirical step distributions integrate exactly") {
        // single component: cov(T,T) = var(T) = 1/4 for atoms {1,2}
        auto m = LifetimeModel(StructureFunction::from_table(1, {false, true}),
                               {LifetimeDistribution::empirical({1.0, 2.0})});
        auto rep = l1_covariance_importance(m);
        CHECK(rep.values[0] == doctest::Approx(0.25).epsilon(1e-7));
    }
    SUBCASE("mixed exponential/empirical agrees with Monte Carlo") {
        // the empirical component confines the integrand far inside the
        // exponential horizon; the panel splitting must still find the mass
        auto m = LifetimeModel(StructureFunction::from_expression("series(1,2)"),
                               {LifetimeDistribution::exponential(1.0),
                                LifetimeDistribution::empirical({0.5, 1.5})});
        auto rep = l1_covariance_importance(m);
        oracle::McConfig cfg;
        cfg.seed = 9;
        cfg.samples = 400000;
        cfg.streams = 64;
        cfg.grid_points = 0;
        auto mc = oracle::mc_lifetime_covariance(m, cfg);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(rep.values[i] - mc.lifetime_cov[i].value) <=
                  4.0 * mc.lifetime_cov[i].std_error);
    }
    SUBCASE("Cauchy-Schwarz bound") {
        auto m = series_exp(2.0, 1.0);
        auto rep = l1_covariance_importance(m);
        const auto moments = system_lifetime_moments(m);
        for (int i = 1; i <= m.n(); ++i) {
            const double bound =
                std::sqrt(m.distribution(i).variance() * moments.variance);
            CHECK(rep.values[i - 1] >= -1e-9);
            CHECK(rep.values[i - 1] <= bound + 1e-6);
        }
    }
}

TEST_CASE("exponential series closed form") {
    CHECK(exponential_l1_series(std::vector<double>{1.0, 1.0}, 1) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(exponential_l1_series(std::vector<double>{2.0, 1.0}, 1) ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(exponential_l1_series(std::vector<double>{2.0, 1.0}, 2) ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-14));

    SUBCASE("n = 3 components all tie and match quadrature") {
        const std::vector<double> rates{1.0, 1.0, 1.0};
        const double closed = exponential_l1_series(rates, 1);
        CHECK(exponential_l1_series(rates, 2) == doctest::Approx(closed).epsilon(1e-14));
        CHECK(exponential_l1_series(rates, 3) == doctest::Approx(closed).epsilon(1e-14));
        auto m = LifetimeModel(StructureFunction::from_expression("series(1,2,3)"),
                               {LifetimeDistribution::exponential(1.0),
                                LifetimeDistribution::exponential(1.0),
                                LifetimeDistribution::exponential(1.0)});
        auto rep = l1_covariance_importance(m);
        for (double v : rep.values) CHECK(v == doctest::Approx(closed).epsilon(1e-6));
    }
    SUBCASE("mixed rates, every component ties") {
        const std::vector<double> rates{2.0, 0.7, 1.3};
        const double first = exponential_l1_series(rates, 1);
        for (int i = 2; i <= 3; ++i)
            CHECK(exponential_l1_series(rates, i) == doctest::Approx(first).epsilon(1e-13));
    }
    SUBCASE("single component") {
        CHECK(exponential_l1_series(std::vector<double>{2.0}, 1) == doctest::Approx(0.25));
    }
    CHECK_THROWS_AS(exponential_l1_series(std::vector<double>{1.0, -1.0}, 1),
                    std::invalid_argument);
}

TEST_CASE("L-infinity covariance importance") {
    SUBCASE("equal-rate series: 4/27 at t = ln(3/2)/lambda") {
        for (double lambda : {1.0, 2.5}) {
            auto rep = linf_covariance_importance(series_exp(lambda, lambda));
            for (int i = 0; i < 2; ++i) {
                CHECK(rep.values[i] == doctest::Approx(4.0 / 27.0).epsilon(1e-10));
                CHECK(rep.maximizers[i] ==
                      doctest::Approx(std::log(1.5) / lambda).epsilon(1e-5));
            }
        }
    }
    SUBCASE("rates (2,1) distinguish the components") {
        auto rep = linf_covariance_importance(series_exp(2.0, 1.0));
        CHECK(rep.values[0] ==
              doctest::Approx(linf_exponential_two_series(2.0, 1.0)).epsilon(1e-10));
        CHECK(rep.values[1] == doctest::Approx(0.10546875).epsilon(1e-10));
        CHECK(rep.ranking == std::vector<int>{1, 2});
        CHECK(rep.maximizers[0] ==
              doctest::Approx(linf_exponential_two_series_tstar(2.0, 1.0)).epsilon(1e-5));
    }
    SUBCASE("single component peaks at the median") {
        auto rep = linf_covariance_importance(single_exp(2.0));
        CHECK(rep.values[0] == doctest::Approx(0.25).epsilon(1e-10));
        CHECK(rep.maximizers[0] == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-5));
    }
    SUBCASE("values stay within [0, 1/4]") {
        Rng rng(83);
        for (int trial = 0; trial < 8; ++trial) {
            auto rep = linf_covariance_importance(random_model(rng, 5));
            for (double v : rep.values) {
                CHECK(v >= 0.0);
                CHECK(v <= 0.25 + 1e-12);
            }
        }
    }
    SUBCASE("empirical step distributions search the jump points") {
        auto m = LifetimeModel(StructureFunction::from_expression("series(1,2)"),
                               {LifetimeDistribution::empirical({1.0, 2.0}),
                                LifetimeDistribution::empirical({1.5, 3.0})});
        auto rep = linf_covariance_importance(m);
        // component 1 at t in [1,1.5): F1 = 1/2, Fbar1 = 1/2, Fbar2 = 1 -> cov 1/4
        CHECK(rep.values[0] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(rep.maximizers[0] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("closed-form two-component L-infinity values") {
    CHECK(linf_exponential_two_series(1.0, 1.0) == doctest::Approx(4.0 / 27.0).epsilon(1e-14));
    CHECK(linf_exponential_two_series_tstar(1.0, 1.0) ==
          doctest::Approx(std::log(1.5)).epsilon(1e-14));
    // alpha = 2: I2 = (3/4)^3 - (3/4)^4 exactly
    CHECK(linf_exponential_two_series(1.0, 2.0) == doctest::Approx(0.10546875).epsilon(1e-14));
    CHECK_THROWS_AS(linf_exponential_two_series(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("dual L-infinity importance") {
    SUBCASE("dual of a series is the parallel system") {
        auto primal = series_exp(1.0, 1.0);
        auto dual_direct = LifetimeModel(dual(primal.structure()), primal.distributions());
        auto via_substitution = linf_dual(primal);
        auto direct = linf_covariance_importance(dual_direct);
        for (int i = 0; i < 2; ++i)
            CHECK(via_substitution.values[i] == doctest::Approx(direct.values[i]).epsilon(1e-10));
    }
    SUBCASE("self-dual 2-out-of-3 with identical lifetimes") {
        auto m = LifetimeModel(StructureFunction::from_expression("koutofn(2;1,2,3)"),
                               {LifetimeDistribution::exponential(1.0),
                                LifetimeDistribution::exponential(1.0),
                                LifetimeDistribution::exponential(1.0)});
        auto primal = linf_covariance_importance(m);
        auto dualized = linf_dual(m);
        for (int i = 0; i < 3; ++i)
            CHECK(dualized.values[i] == doctest::Approx(primal.values[i]).epsilon(1e-9));
    }
    SUBCASE("single component unchanged") {
        auto rep = linf_dual(single_exp(1.0));
        CHECK(rep.values[0] == doctest::Approx(0.25).epsilon(1e-10));
    }
    SUBCASE("matches direct computation on random models") {
        Rng rng(89);
        for (int trial = 0; trial < 6; ++trial) {
            auto m = random_model(rng, 4);
            auto via_substitution = linf_dual(m);
            auto direct = linf_covariance_importance(
                LifetimeModel(dual(m.structure()), m.distributions()));
            for (int i = 0; i < m.n(); ++i)
                CHECK(via_substitution.values[i] ==
                      doctest::Approx(direct.values[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("Natvig importance for exponential models") {
    auto rep = natvig_exponential(series_exp(2.0, 1.0));
    CHECK(rep.values[0] == doctest::Approx(2.0 / 9.0).epsilon(1e-6));
    CHECK(rep.values[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-6));
    CHECK(rep.ranking == std::vector<int>{1, 2});

    auto equal = natvig_exponential(series_exp(1.0, 1.0));
    CHECK(equal.values[0] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(equal.values[1] == doctest::Approx(0.25).epsilon(1e-6));

    // single component: lambda * var(T) = 1/lambda
    auto single = natvig_exponential(single_exp(2.0));
    CHECK(single.values[0] == doctest::Approx(0.5).epsilon(1e-6));

    SUBCASE("non-exponential lifetimes rejected") {
        auto m = LifetimeModel(StructureFunction::from_expression("series(1,2)"),
                               {LifetimeDistribution::exponential(1.0),
                                LifetimeDistribution::weibull(2.0, 1.0)});
        CHECK_THROWS_AS(natvig_exponential(m), UnsupportedMeasureError);
    }
}

TEST_CASE("stochastic-order instances of the module ordering for L-infinity") {
    // Exponential rates lambda_i >= lambda_j give T_i <= T_j in the usual
    // stochastic order; series-with-module instances must then rank i first.
    Rng rng(97);
    for (int trial = 0; trial < 12; ++trial) {
        const bool parallel_case = rng.below(2) == 1;
        auto inst = oracle::random_module_instance(rng, rng.uniform_int(3, 5), parallel_case);
        std::vector<double> rates(static_cast<std::size_t>(inst.sf.n()));
        for (double& r : rates) r = rng.uniform(0.4, 2.5);
        // series: T_i smaller (rate_i >= rate_j); parallel: T_i larger
        if (parallel_case ? rates[inst.i - 1] > rates[inst.j - 1]
                          : rates[inst.i - 1] < rates[inst.j - 1])
            std::swap(rates[inst.i - 1], rates[inst.j - 1]);
        std::vector<LifetimeDistribution> dists;
        for (double r : rates) dists.push_back(LifetimeDistribution::exponential(r));
        LifetimeModel m(inst.sf, std::move(dists));
        // verify the stochastic-order hypothesis on a grid
        const double t_max = m.horizon(1e-6);
        for (int k = 1; k <= 8; ++k) {
            const double t = t_max * k / 8.0;
            if (parallel_case)
                CHECK(m.distribution(inst.i).survival(t) >=
                      m.distribution(inst.j).survival(t) - 1e-12);
            else
                CHECK(m.distribution(inst.i).survival(t) <=
                      m.distribution(inst.j).survival(t) + 1e-12);
        }
        auto rep = linf_covariance_importance(m);
        CHECK(rep.values[inst.i - 1] >= rep.values[inst.j - 1] - 1e-9);
    }
}
