#pragma once

// Exact evaluation of the reliability polynomial h_phi(p) by truth-table
// contraction, plus the direct k-out-of-n (Poisson binomial) form used as an
// independent cross-check.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relimp/structure.hpp"

namespace relimp {

using ProbabilityVector = std::vector<double>;

inline void validate_probabilities(const StructureFunction& sf, std::span<const double> p) {
    if (static_cast<int>(p.size()) != sf.n())
        throw std::invalid_argument("probability vector has " + std::to_string(p.size()) +
                                    " entries, structure has " + std::to_string(sf.n()) +
                                    " components");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!(p[i] >= 0.0 && p[i] <= 1.0))
            throw std::invalid_argument("p_" + std::to_string(i + 1) + " = " +
                                        std::to_string(p[i]) + " is outside [0,1]");
}

namespace detail {

// Contracts component k (bit k-1) by pivotal decomposition; visits every table
// entry exactly once.
inline double reliability_rec(const std::vector<bool>& table, std::span<const double> p, int k,
                              std::uint32_t base) {
    if (k == 0) return table[base] ? 1.0 : 0.0;
    const double pk = p[k - 1];
    const double low = reliability_rec(table, p, k - 1, base);
    const double high = reliability_rec(table, p, k - 1, base | (std::uint32_t{1} << (k - 1)));
    return (1.0 - pk) * low + pk * high;
}

}  // namespace detail

/// h_phi(p) = P{phi(X) = 1} for independent components with P{X_i = 1} = p_i.
inline double reliability(const StructureFunction& sf, std::span<const double> p) {
    validate_probabilities(sf, p);
    return detail::reliability_rec(sf.table(), p, sf.n(), 0);
}

/// h_phi(p, y_i): reliability with p_i pinned to y in {0,1}.
inline double reliability_conditional(const StructureFunction& sf, std::span<const double> p,
                                      int component, int y) {
    validate_probabilities(sf, p);
    if (component < 1 || component > sf.n())
        throw std::invalid_argument("component index " + std::to_string(component) +
                                    " out of range");
    if (y != 0 && y != 1) throw std::invalid_argument("pinned state must be 0 or 1");
    std::vector<double> pinned(p.begin(), p.end());
    pinned[component - 1] = static_cast<double>(y);
    return detail::reliability_rec(sf.table(), pinned, sf.n(), 0);
}

/// Direct k-out-of-n reliability: P{at least k of n independent components work},
/// computed as the Poisson-binomial tail without any structure-function table.
inline double koutofn_reliability(int n, int k, std::span<const double> p) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (k < 1 || k > n)
        throw std::invalid_argument("k must satisfy 1 <= k <= n, got k=" + std::to_string(k));
    if (static_cast<int>(p.size()) != n)
        throw std::invalid_argument("probability vector has wrong length");
    for (int i = 0; i < n; ++i)
        if (!(p[i] >= 0.0 && p[i] <= 1.0))
            throw std::invalid_argument("p_" + std::to_string(i + 1) + " is outside [0,1]");

    // count[j] = P{exactly j of the first m components work}
    std::vector<double> count(static_cast<std::size_t>(n) + 1, 0.0);
    count[0] = 1.0;
    for (int m = 0; m < n; ++m) {
        const double pm = p[m];
        for (int j = m + 1; j >= 1; --j) count[j] = count[j] * (1.0 - pm) + count[j - 1] * pm;
        count[0] *= 1.0 - pm;
    }
    double tail = 0.0;
    for (int j = n; j >= k; --j) tail += count[j];
    return tail;
}

}  // namespace relimp
