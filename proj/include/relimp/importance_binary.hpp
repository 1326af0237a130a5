#pragma once

// Time-dependent importance measures for binary systems: Birnbaum, risk
// achievement/reduction, covariance importance and its normalization, and the
// mutual-information based information importance. All logarithms are base 2.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relimp/reliability.hpp"
#include "relimp/report.hpp"
#include "relimp/structure.hpp"

namespace relimp {

// ---------------------------------------------------------------------------
// Entropy and mutual information for binary variables
// ---------------------------------------------------------------------------

/// Binary entropy H(p) in bits, with the convention 0 log 0 = 0.
inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("entropy argument " + std::to_string(p) +
                                    " is outside [0,1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

using BinaryJoint = std::array<std::array<double, 2>, 2>;  // joint[u][v] = P{U=u, V=v}

inline void validate_joint(const BinaryJoint& joint) {
    double total = 0.0;
    for (const auto& row : joint)
        for (double q : row) {
            if (!(q >= 0.0 && q <= 1.0))
                throw std::invalid_argument("joint probability outside [0,1]");
            total += q;
        }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("joint probabilities sum to " + std::to_string(total));
}

/// H(V | U) for a binary pair given its joint law.
inline double binary_conditional_entropy(const BinaryJoint& joint) {
    validate_joint(joint);
    double h = 0.0;
    for (int u = 0; u < 2; ++u) {
        const double pu = joint[u][0] + joint[u][1];
        for (int v = 0; v < 2; ++v) {
            const double puv = joint[u][v];
            if (puv > 0.0) h -= puv * std::log2(puv / pu);
        }
    }
    return h;
}

/// I(U | V) = H(U) + H(V) - H(U,V); symmetric and nonnegative.
inline double binary_mutual_information(const BinaryJoint& joint) {
    validate_joint(joint);
    const double pu = joint[1][0] + joint[1][1];
    const double pv = joint[0][1] + joint[1][1];
    double joint_entropy = 0.0;
    for (const auto& row : joint)
        for (double q : row)
            if (q > 0.0) joint_entropy -= q * std::log2(q);
    return binary_entropy(pu) + binary_entropy(pv) - joint_entropy;
}

// ---------------------------------------------------------------------------
// Importance measures
// ---------------------------------------------------------------------------

/// I^B(i) = h(p,1_i) - h(p,0_i); independent of p_i.
inline ImportanceReport birnbaum(const StructureFunction& sf, std::span<const double> p) {
    validate_probabilities(sf, p);
    std::vector<double> values(sf.n());
    for (int i = 1; i <= sf.n(); ++i)
        values[i - 1] =
            reliability_conditional(sf, p, i, 1) - reliability_conditional(sf, p, i, 0);
    return ImportanceReport::make(Measure::birnbaum, std::move(values));
}

/// I^ra(i) = h(p) - h(p,0_i).
inline ImportanceReport risk_achievement(const StructureFunction& sf, std::span<const double> p) {
    validate_probabilities(sf, p);
    const double h = reliability(sf, p);
    std::vector<double> values(sf.n());
    for (int i = 1; i <= sf.n(); ++i) values[i - 1] = h - reliability_conditional(sf, p, i, 0);
    return ImportanceReport::make(Measure::risk_achievement, std::move(values));
}

/// I^rr(i) = h(p,1_i) - h(p); also known as improvement potential.
inline ImportanceReport risk_reduction(const StructureFunction& sf, std::span<const double> p) {
    validate_probabilities(sf, p);
    const double h = reliability(sf, p);
    std::vector<double> values(sf.n());
    for (int i = 1; i <= sf.n(); ++i) values[i - 1] = reliability_conditional(sf, p, i, 1) - h;
    return ImportanceReport::make(Measure::risk_reduction, std::move(values));
}

/// I^c(i) = cov(X_i, phi(X)) = p_i (h(p,1_i) - h(p)). Valid for any structure
/// function, coherent or not.
inline ImportanceReport covariance_importance(const StructureFunction& sf,
                                              std::span<const double> p) {
    validate_probabilities(sf, p);
    const double h = reliability(sf, p);
    std::vector<double> values(sf.n());
    for (int i = 1; i <= sf.n(); ++i)
        values[i - 1] = p[i - 1] * (reliability_conditional(sf, p, i, 1) - h);
    return ImportanceReport::make(Measure::covariance, std::move(values));
}

/// Covariance importance scaled to sum to one. All-zero inputs (every
/// component uncorrelated with the system) normalize to all zeros.
inline ImportanceReport covariance_importance_normalized(const StructureFunction& sf,
                                                         std::span<const double> p) {
    ImportanceReport base = covariance_importance(sf, p);
    double total = 0.0;
    for (double v : base.values) total += v;
    std::vector<double> values(base.values);
    if (total != 0.0)
        for (double& v : values) v /= total;
    return ImportanceReport::make(Measure::covariance_normalized, std::move(values));
}

/// I^inf(i) = I(X_i | X), evaluated from the reliability function via the
/// conditional law P{X=x | X_i=y} = h(p,y_i)^x (1-h(p,y_i))^{1-x}.
inline ImportanceReport information_importance(const StructureFunction& sf,
                                               std::span<const double> p) {
    validate_probabilities(sf, p);
    const double h = reliability(sf, p);
    std::vector<double> values(sf.n());
    for (int i = 1; i <= sf.n(); ++i) {
        double total = 0.0;
        for (int y = 0; y < 2; ++y) {
            const double py = y ? p[i - 1] : 1.0 - p[i - 1];
            if (py == 0.0) continue;
            const double hy = reliability_conditional(sf, p, i, y);
            for (int x = 0; x < 2; ++x) {
                const double cond = x ? hy : 1.0 - hy;
                const double marginal = x ? h : 1.0 - h;
                if (cond > 0.0) total += py * cond * std::log2(cond / marginal);
            }
        }
        values[i - 1] = total;
    }
    return ImportanceReport::make(Measure::information, std::move(values));
}

// ---------------------------------------------------------------------------
// Ordering certificates
// ---------------------------------------------------------------------------

// Caller-supplied structural annotation: `component` is in series (or
// parallel) with a coherent module made of `module` components.
struct ModuleAnnotation {
    enum class Relation { series, parallel };
    Relation relation = Relation::series;
    int component = 0;
    std::vector<int> module;
};

struct OrderingCertificate {
    std::string theorem;  // which ordering statement was evaluated
    int i = 0;
    int j = 0;
    bool holds = false;
};

namespace detail {

constexpr double ordering_tolerance = 1e-12;

inline bool is_single_full_set(const std::vector<std::uint32_t>& sets, std::uint32_t full) {
    return sets.size() == 1 && sets.front() == full;
}

}  // namespace detail

// Evaluates the component-ordering statements that apply to the given system:
// module hypotheses for covariance importance, the pure series/parallel
// corollary for information importance, and the conditional-entropy identity
// behind the information-ordering criterion. Pairs whose hypotheses fail are
// omitted; this is a test-harness surface, not a prover.
inline std::vector<OrderingCertificate> ordering_certificates(
    const StructureFunction& sf, std::span<const double> p,
    std::span<const ModuleAnnotation> annotations) {
    validate_probabilities(sf, p);
    const ImportanceReport cov = covariance_importance(sf, p);
    const ImportanceReport info = information_importance(sf, p);
    std::vector<OrderingCertificate> out;

    auto check_pair = [&](const std::string& theorem, const std::vector<double>& values, int i,
                          int j) {
        out.push_back(
            {theorem, i, j, values[i - 1] >= values[j - 1] - detail::ordering_tolerance});
    };

    for (const auto& a : annotations) {
        if (a.component < 1 || a.component > sf.n())
            throw std::invalid_argument("module annotation names component " +
                                        std::to_string(a.component) + " out of range");
        const bool series = a.relation == ModuleAnnotation::Relation::series;
        for (int j : a.module) {
            if (j < 1 || j > sf.n() || j == a.component)
                throw std::invalid_argument("module annotation contains invalid component " +
                                            std::to_string(j));
            const int i = a.component;
            const bool hypothesis = series ? p[i - 1] <= p[j - 1] : p[i - 1] >= p[j - 1];
            if (!hypothesis) continue;
            check_pair(series ? "series-module-ordering" : "parallel-module-ordering", cov.values, i, j);
            // The information-ordering criterion: I^inf(i) - I^inf(j) equals the
            // difference of the conditional entropies H(X|X_j) - H(X|X_i).
            auto cond_entropy = [&](int c) {
                return p[c - 1] * binary_entropy(reliability_conditional(sf, p, c, 1)) +
                       (1.0 - p[c - 1]) * binary_entropy(reliability_conditional(sf, p, c, 0));
            };
            const double lhs = info.values[i - 1] - info.values[j - 1];
            const double rhs = cond_entropy(j) - cond_entropy(i);
            out.push_back({"conditional-entropy-identity", i, j, std::abs(lhs - rhs) <= 1e-11});
        }
    }

    // Pure series / pure parallel corollary for information importance.
    if (is_coherent(sf)) {
        const auto sets = minimal_path_cut_sets(sf);
        const std::uint32_t full = sf.state_count() - 1;
        const bool pure_series = detail::is_single_full_set(sets.paths, full);
        const bool pure_parallel = detail::is_single_full_set(sets.cuts, full);
        if (pure_series || pure_parallel) {
            for (int i = 1; i <= sf.n(); ++i)
                for (int j = 1; j <= sf.n(); ++j) {
                    if (i == j) continue;
                    const bool hypothesis =
                        pure_series ? p[i - 1] <= p[j - 1] : p[i - 1] >= p[j - 1];
                    if (!hypothesis) continue;
                    check_pair(pure_series ? "pure-series-ordering" : "pure-parallel-ordering",
                               info.values, i, j);
                }
        }
    }
    return out;
}

}  // namespace relimp
