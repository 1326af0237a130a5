#pragma once

// Invariant suite shared by the CLI `verify` subcommand: identity chains,
// bounds, duality, oracle agreement and ordering theorems, either on a user
// model or on randomized systems.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relimp/importance_binary.hpp"
#include "relimp/importance_continuous.hpp"
#include "relimp/lifetime.hpp"
#include "relimp/oracle.hpp"
#include "relimp/reliability.hpp"
#include "relimp/structure.hpp"

namespace relimp::verify {

enum class Status { pass, fail, skip };

struct CheckResult {
    std::string name;
    Status status = Status::pass;
    std::string detail;
};

inline bool all_passed(std::span<const CheckResult> results) {
    for (const auto& r : results)
        if (r.status == Status::fail) return false;
    return true;
}

namespace detail {

inline std::string dev_string(double dev) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", dev);
    return buf;
}

inline CheckResult from_deviation(const std::string& name, double max_dev, double tol,
                                  const std::string& context) {
    CheckResult r{name, max_dev <= tol ? Status::pass : Status::fail,
                  context + ", max|dev|=" + dev_string(max_dev) + ", tol=" + dev_string(tol)};
    return r;
}

// max over components of the identity-chain deviations between the covariance
// importance and its risk-achievement / risk-reduction / Birnbaum forms.
inline double relation_chain_deviation(const StructureFunction& sf, std::span<const double> p) {
    const auto cov = covariance_importance(sf, p);
    const auto ra = risk_achievement(sf, p);
    const auto rr = risk_reduction(sf, p);
    const auto birn = birnbaum(sf, p);
    double dev = 0.0;
    for (int i = 0; i < sf.n(); ++i) {
        const double pi = p[i], qi = 1.0 - p[i];
        dev = std::max(dev, std::abs(cov.values[i] - qi * ra.values[i]));
        dev = std::max(dev, std::abs(cov.values[i] - pi * rr.values[i]));
        dev = std::max(dev, std::abs(cov.values[i] - pi * qi * birn.values[i]));
    }
    return dev;
}

inline double bounds_deviation(const StructureFunction& sf, std::span<const double> p) {
    const auto cov = covariance_importance(sf, p);
    const auto info = information_importance(sf, p);
    const auto birn = birnbaum(sf, p);
    double dev = 0.0;
    for (int i = 0; i < sf.n(); ++i) {
        dev = std::max(dev, -cov.values[i]);
        dev = std::max(dev, cov.values[i] - 0.25);
        dev = std::max(dev, -info.values[i]);
        dev = std::max(dev, info.values[i] - 1.0);
        dev = std::max(dev, cov.values[i] - birn.values[i]);
    }
    return std::max(dev, 0.0);
}

inline double duality_deviation(const StructureFunction& sf, std::span<const double> p) {
    const StructureFunction dual_sf = dual(sf);
    std::vector<double> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = 1.0 - p[i];
    const auto cov_dual = covariance_importance(dual_sf, p);
    const auto cov_flip = covariance_importance(sf, q);
    const auto info_dual = information_importance(dual_sf, p);
    const auto info_flip = information_importance(sf, q);
    double dev = 0.0;
    for (int i = 0; i < sf.n(); ++i) {
        dev = std::max(dev, std::abs(cov_dual.values[i] - cov_flip.values[i]));
        dev = std::max(dev, std::abs(info_dual.values[i] - info_flip.values[i]));
    }
    return dev;
}

inline double oracle_covariance_deviation(const StructureFunction& sf,
                                          std::span<const double> p) {
    const auto cov = covariance_importance(sf, p);
    double dev = 0.0;
    for (int i = 1; i <= sf.n(); ++i)
        dev = std::max(dev,
                       std::abs(cov.values[i - 1] - oracle::exact_binary_covariance(sf, p, i)));
    return dev;
}

inline double oracle_information_deviation(const StructureFunction& sf,
                                           std::span<const double> p) {
    const auto info = information_importance(sf, p);
    double dev = 0.0;
    for (int i = 1; i <= sf.n(); ++i)
        dev = std::max(dev, std::abs(info.values[i - 1] -
                                     oracle::exact_binary_mutual_information(sf, p, i)));
    return dev;
}

inline double birnbaum_independence_deviation(const StructureFunction& sf,
                                              std::span<const double> p, Rng& rng) {
    const auto base = birnbaum(sf, p);
    std::vector<double> perturbed(p.begin(), p.end());
    double dev = 0.0;
    for (int i = 0; i < sf.n(); ++i) {
        const double saved = perturbed[i];
        perturbed[i] = rng.uniform01();
        const auto moved = birnbaum(sf, perturbed);
        dev = std::max(dev, std::abs(moved.values[i] - base.values[i]));
        perturbed[i] = saved;
    }
    return dev;
}

inline std::vector<double> random_probabilities(Rng& rng, int n) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (double& v : p) v = rng.uniform(0.02, 0.98);
    return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Model-file suites
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verify_binary(const StructureFunction& sf,
                                              std::span<const double> p) {
    std::vector<CheckResult> results;
    const auto mono = check_monotone(sf);
    if (!mono.monotone) {
        results.push_back({"monotone", Status::fail,
                           "phi decreases in component " + std::to_string(mono.component) +
                               " at state mask " + std::to_string(mono.state)});
        results.push_back({"relation-chain", Status::skip, "requires a monotone structure"});
        results.push_back({"bounds", Status::skip, "requires a monotone structure"});
        results.push_back({"duality", Status::skip, "requires a monotone structure"});
        results.push_back({"oracle-agreement", Status::skip, "requires a monotone structure"});
        return results;
    }
    results.push_back({"monotone", Status::pass, "nondecreasing in every component"});

    results.push_back(
        detail::from_deviation("relation-chain", detail::relation_chain_deviation(sf, p), 1e-12,
                               "covariance vs ra/rr/birnbaum forms"));
    if (is_coherent(sf)) {
        results.push_back(detail::from_deviation("bounds", detail::bounds_deviation(sf, p),
                                                 1e-12, "0<=I^c<=1/4, 0<=I^inf<=1, I^B>=I^c"));
    } else {
        results.push_back(
            {"bounds", Status::skip, "structure has irrelevant components (not coherent)"});
    }
    results.push_back(detail::from_deviation("duality", detail::duality_deviation(sf, p), 1e-12,
                                             "dual structure at p vs primal at 1-p"));
    if (sf.n() <= oracle::max_oracle_components) {
        results.push_back(detail::from_deviation("oracle-covariance",
                                                 detail::oracle_covariance_deviation(sf, p),
                                                 1e-12, "engine vs exact enumeration"));
        results.push_back(detail::from_deviation("oracle-information",
                                                 detail::oracle_information_deviation(sf, p),
                                                 1e-12, "engine vs exact enumeration"));
    } else {
        results.push_back({"oracle-covariance", Status::skip, "n too large for enumeration"});
        results.push_back({"oracle-information", Status::skip, "n too large for enumeration"});
    }
    Rng rng(0x9d2c5680u);
    results.push_back(detail::from_deviation(
        "birnbaum-independence", detail::birnbaum_independence_deviation(sf, p, rng), 1e-12,
        "I^B(i) unchanged under p_i perturbation"));
    {
        // Pure series/parallel corollary pairs apply without annotations.
        const auto certs = ordering_certificates(sf, p, {});
        if (certs.empty()) {
            results.push_back(
                {"ordering-certificates", Status::skip, "no applicable hypothesis"});
        } else {
            std::size_t failed = 0;
            for (const auto& c : certs)
                if (!c.holds) ++failed;
            results.push_back({"ordering-certificates",
                               failed == 0 ? Status::pass : Status::fail,
                               std::to_string(certs.size()) + " applicable pairs, " +
                                   std::to_string(failed) + " violations"});
        }
    }
    return results;
}

inline std::vector<CheckResult> verify_lifetime(const LifetimeModel& m) {
    std::vector<CheckResult> results;
    const double t_max = m.horizon(1e-6);

    auto grid_at = [&](int points) {
        std::vector<double> g;
        for (int k = 0; k < points; ++k)
            g.push_back(t_max * static_cast<double>(k) / static_cast<double>(points - 1));
        return g;
    };

    {
        const auto grid = grid_at(32);
        double min_cov = 0.0;
        for (int i = 1; i <= m.n(); ++i)
            for (double s : grid)
                for (double t : grid) min_cov = std::min(min_cov, cov_surface(m, i, s, t));
        results.push_back(detail::from_deviation("covsurface-nonnegative",
                                                 std::max(0.0, -min_cov), 1e-12,
                                                 "association on a 32x32 grid"));
    }
    {
        const auto grid = grid_at(64);
        double worst = 0.0;
        for (int i = 1; i <= m.n(); ++i) {
            double rect = 0.0, diag = 0.0;
            for (double s : grid)
                for (double t : grid) rect = std::max(rect, cov_surface(m, i, s, t));
            for (double t : grid) diag = std::max(diag, cov_surface(m, i, t, t));
            worst = std::max(worst, rect - diag);
        }
        results.push_back(detail::from_deviation("diagonal-sup", worst, 1e-3,
                                                 "sup over (s,t) vs sup over the diagonal"));
    }
    {
        const auto linf = linf_covariance_importance(m);
        double dev = 0.0;
        for (double v : linf.values) {
            dev = std::max(dev, v - 0.25);
            dev = std::max(dev, -v);
        }
        results.push_back(
            detail::from_deviation("linf-bound", std::max(dev, 0.0), 1e-12, "0<=I^cinf<=1/4"));
    }
    try {
        const auto l1 = l1_covariance_importance(m);
        oracle::McConfig cfg;
        cfg.seed = 0xC0FFEEull;
        cfg.samples = 20000;
        cfg.streams = 32;
        cfg.grid_points = 0;
        const auto mc = oracle::mc_lifetime_covariance(m, cfg);
        double worst = 0.0;
        for (int i = 0; i < m.n(); ++i) {
            const double se = std::max(mc.lifetime_cov[i].std_error, 1e-12);
            worst = std::max(worst,
                             std::abs(l1.values[i] - mc.lifetime_cov[i].value) / se - 4.0);
        }
        results.push_back(detail::from_deviation("l1-mc-agreement", std::max(worst, 0.0), 0.0,
                                                 "quadrature within 4 SE of Monte Carlo"));
    } catch (const ConvergenceError& e) {
        results.push_back({"l1-mc-agreement", Status::skip,
                           std::string("quadrature did not converge: ") + e.what()});
    }
    return results;
}

// ---------------------------------------------------------------------------
// Randomized suite
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verify_random(std::size_t trials, std::uint64_t seed) {
    Rng rng(seed);
    double relation_dev = 0.0, bounds_dev = 0.0, duality_dev = 0.0;
    double oracle_cov_dev = 0.0, oracle_info_dev = 0.0, birnbaum_dev = 0.0;
    for (std::size_t k = 0; k < trials; ++k) {
        const int n = rng.uniform_int(2, 10);
        const StructureFunction sf = oracle::random_coherent_structure(rng, n);
        const auto p = detail::random_probabilities(rng, n);
        relation_dev = std::max(relation_dev, detail::relation_chain_deviation(sf, p));
        bounds_dev = std::max(bounds_dev, detail::bounds_deviation(sf, p));
        duality_dev = std::max(duality_dev, detail::duality_deviation(sf, p));
        oracle_cov_dev = std::max(oracle_cov_dev, detail::oracle_covariance_deviation(sf, p));
        oracle_info_dev =
            std::max(oracle_info_dev, detail::oracle_information_deviation(sf, p));
        birnbaum_dev =
            std::max(birnbaum_dev, detail::birnbaum_independence_deviation(sf, p, rng));
    }
    const std::string ctx = "trials=" + std::to_string(trials);
    std::vector<CheckResult> results;
    results.push_back(detail::from_deviation("relation-chain", relation_dev, 1e-12, ctx));
    results.push_back(detail::from_deviation("bounds", bounds_dev, 1e-12, ctx));
    results.push_back(detail::from_deviation("duality", duality_dev, 1e-12, ctx));
    results.push_back(detail::from_deviation("oracle-covariance", oracle_cov_dev, 1e-12, ctx));
    results.push_back(
        detail::from_deviation("oracle-information", oracle_info_dev, 1e-12, ctx));
    results.push_back(
        detail::from_deviation("birnbaum-independence", birnbaum_dev, 1e-12, ctx));

    // Series/parallel module orderings for covariance importance.
    {
        std::size_t violations = 0;
        for (std::size_t k = 0; k < trials; ++k) {
            const bool parallel_case = rng.below(2) == 1;
            const auto inst =
                oracle::random_module_instance(rng, rng.uniform_int(3, 9), parallel_case);
            auto p = detail::random_probabilities(rng, inst.sf.n());
            const bool swap_needed = parallel_case ? p[inst.i - 1] < p[inst.j - 1]
                                                   : p[inst.i - 1] > p[inst.j - 1];
            if (swap_needed) std::swap(p[inst.i - 1], p[inst.j - 1]);
            const auto cov = covariance_importance(inst.sf, p);
            if (cov.values[inst.i - 1] < cov.values[inst.j - 1] - 1e-10) ++violations;
        }
        results.push_back({"module-orderings", violations == 0 ? Status::pass : Status::fail,
                           ctx + ", violations=" + std::to_string(violations)});
    }
    // Pure series/parallel orderings for information importance.
    {
        std::size_t violations = 0;
        for (std::size_t k = 0; k < trials; ++k) {
            const int n = rng.uniform_int(2, 9);
            const bool parallel_case = rng.below(2) == 1;
            std::vector<ExprPtr> leaves;
            for (int i = 1; i <= n; ++i) leaves.push_back(Expr::component(i));
            const auto sf = StructureFunction::from_expr(
                parallel_case ? Expr::parallel(leaves) : Expr::series(leaves));
            const auto p = detail::random_probabilities(rng, n);
            const auto info = information_importance(sf, p);
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    if (i == j) continue;
                    const bool hyp =
                        parallel_case ? p[i - 1] >= p[j - 1] : p[i - 1] <= p[j - 1];
                    if (hyp && info.values[i - 1] < info.values[j - 1] - 1e-10) ++violations;
                }
        }
        results.push_back({"pure-system-orderings", violations == 0 ? Status::pass : Status::fail,
                           ctx + ", violations=" + std::to_string(violations)});
    }
    // Multilinear identity of the signed domination.
    {
        double dev = 0.0;
        for (std::size_t k = 0; k < std::min<std::size_t>(trials, 50); ++k) {
            const int n = rng.uniform_int(2, 10);
            const StructureFunction sf = oracle::random_coherent_structure(rng, n);
            const auto dom = signed_domination(sf);
            for (std::uint32_t r = 0; r < sf.state_count(); ++r) {
                std::int64_t total = 0;
                for (const auto& [mask, b] : dom.coeffs)
                    if ((r & mask) == mask) total += b;
                dev = std::max(dev, std::abs(static_cast<double>(total) - (sf(r) ? 1.0 : 0.0)));
            }
        }
        results.push_back(detail::from_deviation("multilinear-identity", dev, 0.0, ctx));
    }
    return results;
}

}  // namespace relimp::verify
