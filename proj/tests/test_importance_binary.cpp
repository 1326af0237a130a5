#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "relimp/importance_binary.hpp"
#include "relimp/oracle.hpp"
#include "relimp/rng.hpp"
#include "relimp/structure.hpp"

using namespace relimp;

namespace {

std::vector<double> random_p(Rng& rng, int n) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (double& v : p) v = rng.uniform(0.02, 0.98);
    return p;
}

const StructureFunction& two_of_three() {
    static const auto sf = StructureFunction::from_expression("koutofn(2;1,2,3)");
    return sf;
}

// phi(x1, x2) = x1: component 2 is irrelevant
const StructureFunction& projection() {
    static const auto sf = StructureFunction::from_table(2, {false, true, false, true});
    return sf;
}

}  // namespace

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-14));
    CHECK_THROWS_AS(binary_entropy(1.2), std::invalid_argument);
}

TEST_CASE("mutual information of binary pairs") {
    // independent pair
    BinaryJoint indep{{{0.25, 0.25}, {0.25, 0.25}}};
    CHECK(binary_mutual_information(indep) == doctest::Approx(0.0).epsilon(1e-15));
    // identical fair bits
    BinaryJoint same{{{0.5, 0.0}, {0.0, 0.5}}};
    CHECK(binary_mutual_information(same) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_conditional_entropy(same) == doctest::Approx(0.0));
    // symmetry and nonnegativity on random joints
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        double a = rng.uniform01(), b = rng.uniform01(), c = rng.uniform01(),
               d = rng.uniform01();
        const double total = a + b + c + d;
        BinaryJoint j{{{a / total, b / total}, {c / total, d / total}}};
        BinaryJoint jt{{{j[0][0], j[1][0]}, {j[0][1], j[1][1]}}};
        CHECK(binary_mutual_information(j) >= -1e-12);
        CHECK(binary_mutual_information(j) ==
              doctest::Approx(binary_mutual_information(jt)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(binary_mutual_information(BinaryJoint{{{0.5, 0.5}, {0.5, 0.5}}}),
                    std::invalid_argument);
}

TEST_CASE("birnbaum importance") {
    const std::vector<double> p{0.1, 0.2, 0.3};
    auto rep = birnbaum(two_of_three(), p);
    CHECK(rep.values[0] == doctest::Approx(0.38).epsilon(1e-12));
    CHECK(rep.values[1] == doctest::Approx(0.34).epsilon(1e-12));
    CHECK(rep.values[2] == doctest::Approx(0.26).epsilon(1e-12));

    auto series = birnbaum(StructureFunction::from_expression("series(1,2)"),
                           std::vector<double>{0.9, 0.8});
    CHECK(series.values[0] == doctest::Approx(0.8));
    CHECK(series.values[1] == doctest::Approx(0.9));

    CHECK(birnbaum(projection(), std::vector<double>{0.4, 0.7}).values[1] == 0.0);
}

TEST_CASE("birnbaum does not depend on p_i") {
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        auto sf = oracle::random_coherent_structure(rng, rng.uniform_int(2, 10));
        auto p = random_p(rng, sf.n());
        const auto base = birnbaum(sf, p);
        for (int i = 0; i < sf.n(); ++i) {
            auto q = p;
            q[i] = rng.uniform01();
            CHECK(std::abs(birnbaum(sf, q).values[i] - base.values[i]) < 1e-12);
        }
    }
}

TEST_CASE("risk achievement and risk reduction") {
    auto series12 = StructureFunction::from_expression("series(1,2)");
    const std::vector<double> p{0.9, 0.8};
    auto ra = risk_achievement(series12, p);
    CHECK(ra.values[0] == doctest::Approx(0.72).epsilon(1e-12));
    CHECK(ra.values[1] == doctest::Approx(0.72).epsilon(1e-12));
    auto rr = risk_reduction(series12, p);
    CHECK(rr.values[0] == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(rr.values[1] == doctest::Approx(0.18).epsilon(1e-12));

    auto par = risk_achievement(StructureFunction::from_expression("parallel(1,2)"),
                                std::vector<double>{0.5, 0.5});
    CHECK(par.values[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(par.values[1] == doctest::Approx(0.25).epsilon(1e-12));

    const std::vector<double> pp{0.4, 0.7};
    CHECK(risk_achievement(projection(), pp).values[1] == 0.0);
    CHECK(risk_reduction(projection(), pp).values[1] == 0.0);
}

TEST_CASE("covariance importance") {
    auto rep = covariance_importance(two_of_three(), std::vector<double>{0.1, 0.2, 0.3});
    CHECK(rep.values[0] == doctest::Approx(0.0342).epsilon(1e-12));
    CHECK(rep.values[1] == doctest::Approx(0.0544).epsilon(1e-12));
    CHECK(rep.values[2] == doctest::Approx(0.0546).epsilon(1e-12));
    CHECK(rep.ranking == std::vector<int>{3, 2, 1});

    // flipping to high reliabilities reverses the induced ordering
    auto flipped = covariance_importance(two_of_three(), std::vector<double>{0.7, 0.8, 0.9});
    CHECK(flipped.values[0] == doctest::Approx(0.0546).epsilon(1e-12));
    CHECK(flipped.values[2] == doctest::Approx(0.0342).epsilon(1e-12));
    CHECK(flipped.ranking == std::vector<int>{1, 2, 3});

    CHECK(covariance_importance(projection(), std::vector<double>{0.4, 0.7}).values[1] == 0.0);
}

TEST_CASE("normalized covariance importance of a series system") {
    // closed form: pbar_i / sum of pbar_j
    auto rep = covariance_importance_normalized(StructureFunction::from_expression("series(1,2)"),
                                                std::vector<double>{0.9, 0.8});
    CHECK(rep.values[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(rep.values[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    Rng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(2, 8);
        std::string expr = "series(1";
        for (int i = 2; i <= n; ++i) expr += "," + std::to_string(i);
        expr += ")";
        auto sf = StructureFunction::from_expression(expr);
        const auto p = random_p(rng, n);
        double denom = 0.0;
        for (double v : p) denom += 1.0 - v;
        const auto norm = covariance_importance_normalized(sf, p);
        for (int i = 0; i < n; ++i)
            CHECK(norm.values[i] == doctest::Approx((1.0 - p[i]) / denom).epsilon(1e-11));
    }
}

TEST_CASE("relation chain I^c = pbar ra = p rr = p pbar I^B") {
    Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        auto sf = oracle::random_coherent_structure(rng, rng.uniform_int(2, 12));
        const auto p = random_p(rng, sf.n());
        const auto cov = covariance_importance(sf, p);
        const auto ra = risk_achievement(sf, p);
        const auto rr = risk_reduction(sf, p);
        const auto birn = birnbaum(sf, p);
        for (int i = 0; i < sf.n(); ++i) {
            CHECK(std::abs(cov.values[i] - (1.0 - p[i]) * ra.values[i]) < 1e-12);
            CHECK(std::abs(cov.values[i] - p[i] * rr.values[i]) < 1e-12);
            CHECK(std::abs(cov.values[i] - p[i] * (1.0 - p[i]) * birn.values[i]) < 1e-12);
        }
    }
}

TEST_CASE("bounds for coherent structures") {
    Rng rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        auto sf = oracle::random_coherent_structure(rng, rng.uniform_int(2, 12));
        const auto p = random_p(rng, sf.n());
        const auto cov = covariance_importance(sf, p);
        const auto info = information_importance(sf, p);
        const auto birn = birnbaum(sf, p);
        for (int i = 0; i < sf.n(); ++i) {
            CHECK(cov.values[i] >= -1e-12);
            CHECK(cov.values[i] <= 0.25 + 1e-12);
            CHECK(info.values[i] >= -1e-12);
            CHECK(info.values[i] <= 1.0 + 1e-12);
            CHECK(birn.values[i] >= cov.values[i] - 1e-12);
        }
    }
}

TEST_CASE("duality of covariance and information importance") {
    Rng rng(47);
    for (int trial = 0; trial < 40; ++trial) {
        auto sf = oracle::random_coherent_structure(rng, rng.uniform_int(2, 10));
        const auto p = random_p(rng, sf.n());
        std::vector<double> q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) q[i] = 1.0 - p[i];
        auto dual_sf = dual(sf);
        const auto cov_dual = covariance_importance(dual_sf, p);
        const auto cov_flip = covariance_importance(sf, q);
        const auto info_dual = information_importance(dual_sf, p);
        const auto info_flip = information_importance(sf, q);
        for (int i = 0; i < sf.n(); ++i) {
            CHECK(std::abs(cov_dual.values[i] - cov_flip.values[i]) < 1e-12);
            CHECK(std::abs(info_dual.values[i] - info_flip.values[i]) < 1e-12);
        }
    }
}

TEST_CASE("information importance") {
    // single component, identity structure, p = 1/2: X_i = X and I = 1
    auto identity = StructureFunction::from_table(1, {false, true});
    CHECK(information_importance(identity, std::vector<double>{0.5}).values[0] ==
          doctest::Approx(1.0).epsilon(1e-14));

    // series(1,2) at p = (1/2,1/2): H(1/4) - 1/2 H(1/2)
    auto series12 = StructureFunction::from_expression("series(1,2)");
    CHECK(information_importance(series12, std::vector<double>{0.5, 0.5}).values[0] ==
          doctest::Approx(0.8112781244591328 - 0.5).epsilon(1e-13));

    CHECK(information_importance(projection(), std::vector<double>{0.4, 0.7}).values[1] ==
          doctest::Approx(0.0).epsilon(1e-14));

    SUBCASE("degenerate p gives zero importance") {
        CHECK(information_importance(series12, std::vector<double>{1.0, 0.7}).values[0] == 0.0);
        CHECK(information_importance(series12, std::vector<double>{0.0, 0.7}).values[0] == 0.0);
        auto cov = covariance_importance(series12, std::vector<double>{1.0, 0.7});
        CHECK(cov.values[0] == 0.0);
    }
}

TEST_CASE("series information importance matches the coproduct closed form") {
    Rng rng(53);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = rng.uniform_int(2, 8);
        std::string expr = "series(1";
        for (int i = 2; i <= n; ++i) expr += "," + std::to_string(i);
        expr += ")";
        auto sf = StructureFunction::from_expression(expr);
        const auto p = random_p(rng, n);
        const auto info = information_importance(sf, p);
        for (int i = 1; i <= n; ++i)
            CHECK(std::abs(info.values[i - 1] -
                           oracle::series_information_importance_closed_form(p, i)) < 1e-12);
    }
}

TEST_CASE("entropy scaling lemma: H(alpha p)/p is nonincreasing") {
    for (int ai = 1; ai <= 10; ++ai) {
        const double alpha = ai / 10.0;
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 1000; ++k) {
            const double p = k / 1000.0;
            const double value = binary_entropy(alpha * p) / p;
            CHECK(value <= prev + 1e-12);
            prev = value;
        }
    }
}

TEST_CASE("series/parallel module orderings for covariance importance") {
    Rng rng(59);
    for (int trial = 0; trial < 150; ++trial) {
        const bool parallel_case = rng.below(2) == 1;
        auto inst = oracle::random_module_instance(rng, rng.uniform_int(3, 9), parallel_case);
        auto p = random_p(rng, inst.sf.n());
        const bool swap_needed = parallel_case ? p[inst.i - 1] < p[inst.j - 1]
                                               : p[inst.i - 1] > p[inst.j - 1];
        if (swap_needed) std::swap(p[inst.i - 1], p[inst.j - 1]);
        const auto cov = covariance_importance(inst.sf, p);
        CHECK(cov.values[inst.i - 1] >= cov.values[inst.j - 1] - 1e-10);
    }
}

TEST_CASE("pure series/parallel orderings for information importance") {
    Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 9);
        const bool parallel_case = rng.below(2) == 1;
        std::vector<ExprPtr> leaves;
        for (int i = 1; i <= n; ++i) leaves.push_back(Expr::component(i));
        auto sf = StructureFunction::from_expr(parallel_case ? Expr::parallel(leaves)
                                                             : Expr::series(leaves));
        const auto p = random_p(rng, n);
        const auto info = information_importance(sf, p);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                const bool hyp = parallel_case ? p[i - 1] >= p[j - 1] : p[i - 1] <= p[j - 1];
                if (hyp) CHECK(info.values[i - 1] >= info.values[j - 1] - 1e-10);
            }
    }
}

TEST_CASE("ordering certificates") {
    SUBCASE("series chain via module annotations") {
        auto sf = StructureFunction::from_expression("series(1,2,3)");
        const std::vector<double> p{0.2, 0.5, 0.7};
        const std::vector<ModuleAnnotation> ann{
            {ModuleAnnotation::Relation::series, 1, {2, 3}},
            {ModuleAnnotation::Relation::series, 2, {3}},
        };
        const auto certs = ordering_certificates(sf, p, ann);
        int module_pairs = 0;
        for (const auto& c : certs) {
            CHECK(c.holds);
            if (c.theorem == "series-module-ordering") ++module_pairs;
        }
        CHECK(module_pairs == 3);  // (1,2), (1,3), (2,3)
    }
    SUBCASE("pure parallel corollary is auto-detected") {
        auto sf = StructureFunction::from_expression("parallel(1,2)");
        const std::vector<double> p{0.9, 0.4};
        const auto certs = ordering_certificates(sf, p, {});
        bool found = false;
        for (const auto& c : certs)
            if (c.theorem == "pure-parallel-ordering" && c.i == 1 && c.j == 2) {
                CHECK(c.holds);
                found = true;
            }
        CHECK(found);
    }
    SUBCASE("symmetric components tie for every measure") {
        auto sf = StructureFunction::from_expression("series(1,2)");
        const std::vector<double> p{0.3, 0.3};
        const std::vector<ModuleAnnotation> ann{
            {ModuleAnnotation::Relation::series, 1, {2}},
            {ModuleAnnotation::Relation::series, 2, {1}},
        };
        for (const auto& c : ordering_certificates(sf, p, ann)) CHECK(c.holds);
        const auto cov = covariance_importance(sf, p);
        const auto info = information_importance(sf, p);
        const auto birn = birnbaum(sf, p);
        CHECK(cov.values[0] == doctest::Approx(cov.values[1]).epsilon(1e-14));
        CHECK(info.values[0] == doctest::Approx(info.values[1]).epsilon(1e-14));
        CHECK(birn.values[0] == doctest::Approx(birn.values[1]).epsilon(1e-14));
    }
    SUBCASE("malformed annotations rejected") {
        auto sf = StructureFunction::from_expression("series(1,2)");
        const std::vector<double> p{0.3, 0.4};
        CHECK_THROWS_AS(
            ordering_certificates(sf, p,
                                  std::vector<ModuleAnnotation>{
                                      {ModuleAnnotation::Relation::series, 5, {2}}}),
            std::invalid_argument);
        CHECK_THROWS_AS(
            ordering_certificates(sf, p,
                                  std::vector<ModuleAnnotation>{
                                      {ModuleAnnotation::Relation::series, 1, {1}}}),
            std::invalid_argument);
    }
}

TEST_CASE("ranking ties break by ascending component id") {
    auto sf = StructureFunction::from_expression("series(1,2,3)");
    auto rep = birnbaum(sf, std::vector<double>{0.5, 0.5, 0.5});
    CHECK(rep.ranking == std::vector<int>{1, 2, 3});
}
