#pragma once

// Lifetime-based importance measures: the time-indexed covariance surface
// cov(X_i(s), X(t)), its L1 norm cov(T_i, T) via 2-D quadrature, the L-infinity
// norm via grid search plus golden-section refinement, the exponential series
// closed forms, and Natvig's measure for all-exponential models.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relimp/golden_section.hpp"
#include "relimp/lifetime.hpp"
#include "relimp/quadrature.hpp"
#include "relimp/report.hpp"
#include "relimp/structure.hpp"

namespace relimp {

class UnsupportedMeasureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ContinuousOptions {
    double quad_abs_tol = 1e-7;  // absolute tolerance of the L1 double integral
    double tail_mass = 1e-9;     // per-component survival mass ignored beyond the horizon
    int grid_points = 512;       // log-spaced candidates for the sup search
    double t_tol = 1e-10;        // golden-section bracket width in t
};

namespace detail {

// Sum over subsets S containing i of b(S) * prod_{j in S, j != i} sbar_j, where
// sbar holds per-component survival values at the reference time.
inline double domination_sum(const SignedDomination& dom, int component,
                             std::span<const double> sbar) {
    const std::uint32_t bit = component_bit(component);
    double total = 0.0;
    for (const auto& [mask, b] : dom.coeffs) {
        if (!(mask & bit)) continue;
        double prod = static_cast<double>(b);
        for (std::uint32_t m = mask & ~bit; m != 0; m &= m - 1)
            prod *= sbar[std::countr_zero(m)];
        total += prod;
    }
    return total;
}

inline std::vector<double> survivals_at(const LifetimeModel& m, double t) {
    std::vector<double> sbar(static_cast<std::size_t>(m.n()));
    for (int j = 1; j <= m.n(); ++j) sbar[j - 1] = m.distribution(j).survival(t);
    return sbar;
}

inline void validate_component(const LifetimeModel& m, int component) {
    if (component < 1 || component > m.n())
        throw std::invalid_argument("component index " + std::to_string(component) +
                                    " out of range");
}

}  // namespace detail

/// cov(X_i(s), X(t)) via the signed-domination representation.
inline double cov_surface(const LifetimeModel& m, int component, double s, double t) {
    detail::validate_component(m, component);
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("times must be nonnegative");
    const auto& dist = m.distribution(component);
    const double sbar_max = dist.survival(std::max(s, t));
    const double factor = sbar_max - dist.survival(s) * dist.survival(t);
    if (factor == 0.0) return 0.0;
    const auto sbar = detail::survivals_at(m, t);
    return factor * detail::domination_sum(m.domination(), component, sbar);
}

/// Diagonal covariance cov(X_i(t), X(t)); equals the binary covariance
/// importance of component i at p_j = survival_j(t).
inline double diagonal_covariance(const LifetimeModel& m, int component, double t) {
    detail::validate_component(m, component);
    if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
    const auto sbar = detail::survivals_at(m, t);
    // F_i(t) * sum over S containing i of b(S) prod_{j in S} Fbar_j(t); the
    // j = i factor sbar_i sits outside domination_sum.
    const double sbar_i = sbar[component - 1];
    return (1.0 - sbar_i) * sbar_i *
           detail::domination_sum(m.domination(), component, sbar);
}

inline std::vector<std::pair<double, double>> covariance_curve(const LifetimeModel& m,
                                                               int component,
                                                               std::span<const double> t_grid) {
    detail::validate_component(m, component);
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (t_grid[k] < 0.0) throw std::invalid_argument("grid times must be nonnegative");
        if (k > 0 && t_grid[k] < t_grid[k - 1])
            throw std::invalid_argument("grid must be sorted ascending");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.emplace_back(t, diagonal_covariance(m, component, t));
    return out;
}

// ---------------------------------------------------------------------------
// L1-covariance importance
// ---------------------------------------------------------------------------

namespace detail {

// Panel boundaries for one axis: the distributions' step-CDF jumps (the
// integrand is discontinuous there) plus quantile landmarks of every involved
// distribution, so that localized mass is always sampled even when the
// truncation horizon is dominated by a much slower component.
inline std::vector<double> axis_panels(const LifetimeModel& m, double t_max,
                                       int only_component = 0) {
    std::vector<double> pts{0.0, t_max};
    auto add_component = [&](int j) {
        const auto& d = m.distribution(j);
        for (double jump : d.jump_points())
            if (jump > 0.0 && jump < t_max) pts.push_back(jump);
        for (double q : {0.05, 0.25, 0.5, 0.75, 0.95, 0.999}) {
            const double t = d.quantile(q);
            if (t > 0.0 && t < t_max) pts.push_back(t);
        }
    };
    if (only_component > 0) {
        add_component(only_component);
    } else {
        for (int j = 1; j <= m.n(); ++j) add_component(j);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Adaptive integration over a pre-split panel list with an equal share of the
// tolerance per panel. Panel endpoints are nudged one ulp inward so that a
// step integrand is sampled on the correct side of each jump (the panels are
// split exactly at the jump points).
template <class F>
QuadResult integrate_panels(F&& f, const std::vector<double>& pts, double tol, int max_depth) {
    QuadResult total;
    const double per_panel = tol / static_cast<double>(pts.size() - 1);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double lo = std::nextafter(pts[k], pts[k + 1]);
        const double hi = std::nextafter(pts[k + 1], pts[k]);
        QuadResult part = adaptive_simpson(f, lo, hi, per_panel, max_depth);
        total.value += part.value;
        total.error += part.error;
        total.evals += part.evals;
        if (!part.converged) total.converged = false;
    }
    return total;
}

}  // namespace detail

/// I^{c1}(i) = cov(T_i, T) = double integral of cov(X_i(s), X(t)) over s,t >= 0
/// (Hoeffding). Integrates the nonnegative integrand over [0, t_max]^2 where
/// the truncated tail carries at most `tail_mass` survival probability per
/// component; throws ConvergenceError when the requested tolerance is not met.
inline ImportanceReport l1_covariance_importance(const LifetimeModel& m,
                                                 const ContinuousOptions& opts = {}) {
    const double t_max = m.horizon(opts.tail_mass);
    const auto outer_pts = detail::axis_panels(m, t_max);
    std::vector<double> values(static_cast<std::size_t>(m.n()));
    for (int i = 1; i <= m.n(); ++i) {
        // Only component i's survival varies along s; split the inner axis at
        // its jumps/quantiles and at the s = t kink.
        auto inner_pts = detail::axis_panels(m, t_max, i);
        const double inner_tol = 0.125 * opts.quad_abs_tol / std::max(t_max, 1e-300);
        double worst_inner_error = 0.0;
        auto inner = [&](double t) {
            auto pts = inner_pts;
            if (t > 0.0 && t < t_max) {
                pts.insert(std::upper_bound(pts.begin(), pts.end(), t), t);
                pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            }
            QuadResult q = detail::integrate_panels(
                [&](double s) { return cov_surface(m, i, s, t); }, pts, inner_tol, 24);
            worst_inner_error = std::max(worst_inner_error, q.error);
            return q.value;
        };
        QuadResult outer =
            detail::integrate_panels(inner, outer_pts, 0.75 * opts.quad_abs_tol, 24);
        const double total_error = outer.error + worst_inner_error * t_max;
        // Depth-exhausted panels are fine as long as their accumulated defect
        // stays inside the requested budget.
        if (total_error > opts.quad_abs_tol) {
            char msg[160];
            std::snprintf(msg, sizeof(msg),
                          "L1 quadrature for component %d did not reach tolerance %.3e; "
                          "achieved about %.3e",
                          i, opts.quad_abs_tol, total_error);
            throw ConvergenceError(msg, total_error);
        }
        values[i - 1] = outer.value;
    }
    return ImportanceReport::make(Measure::l1_covariance, std::move(values));
}

/// Closed-form cov(T_i, T) for a series system with exponential lifetimes.
/// All components of such a system share the same value.
inline double exponential_l1_series(std::span<const double> rates, int component) {
    if (rates.empty()) throw std::invalid_argument("rate vector is empty");
    if (component < 1 || component > static_cast<int>(rates.size()))
        throw std::invalid_argument("component index out of range");
    for (double r : rates)
        if (!(r > 0.0)) throw std::invalid_argument("rates must be positive");
    if (rates.size() == 1) {
        const double l = rates[0];
        return 1.0 / (l * l);  // cov(T, T) = var(T)
    }
    const double l1 = rates[component - 1];
    double l2 = 0.0;
    for (int j = 0; j < static_cast<int>(rates.size()); ++j)
        if (j != component - 1) l2 += rates[j];
    const double sum = l1 + l2;
    const double twice = 2.0 * l1 + l2;
    return 1.0 / (sum * sum) - 2.0 / (l1 * sum) - 1.0 / (l2 * sum) + 1.0 / (l1 * twice) +
           1.0 / (sum * twice) + 1.0 / (l1 * l2);
}

// ---------------------------------------------------------------------------
// L-infinity covariance importance
// ---------------------------------------------------------------------------

namespace detail {

// Candidate times: log-spaced grid over (0, t_max] plus every step-CDF jump.
inline std::vector<double> sup_candidates(const LifetimeModel& m, double t_max,
                                          int grid_points) {
    std::vector<double> cand;
    if (!(t_max > 0.0)) return {0.0};
    cand.reserve(static_cast<std::size_t>(grid_points) + 8);
    const double t_lo = t_max * 1e-9;
    for (int k = 0; k < grid_points; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(grid_points - 1);
        cand.push_back(t_lo * std::pow(t_max / t_lo, frac));
    }
    for (int j = 1; j <= m.n(); ++j)
        for (double jump : m.distribution(j).jump_points())
            if (jump > 0.0 && jump <= t_max) cand.push_back(jump);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    return cand;
}

template <class Objective>
ImportanceReport sup_search(const LifetimeModel& m, Measure measure, Objective&& objective,
                            const ContinuousOptions& opts) {
    const double t_max = m.horizon(opts.tail_mass);
    const auto cand = sup_candidates(m, t_max, opts.grid_points);
    std::vector<double> values(static_cast<std::size_t>(m.n()));
    std::vector<double> maximizers(static_cast<std::size_t>(m.n()));
    for (int i = 1; i <= m.n(); ++i) {
        std::size_t best = 0;
        double best_val = -1.0;
        for (std::size_t k = 0; k < cand.size(); ++k) {
            const double v = objective(i, cand[k]);
            if (v > best_val) {
                best_val = v;
                best = k;
            }
        }
        const double lo = best > 0 ? cand[best - 1] : 0.0;
        const double hi = best + 1 < cand.size() ? cand[best + 1] : t_max;
        MaximizeResult refined = golden_section_maximize(
            [&](double t) { return objective(i, t); }, lo, hi, opts.t_tol);
        if (refined.value > best_val) {
            values[i - 1] = refined.value;
            maximizers[i - 1] = refined.x;
        } else {
            values[i - 1] = best_val;
            maximizers[i - 1] = cand[best];
        }
        if (values[i - 1] <= 0.0) {
            values[i - 1] = 0.0;
            maximizers[i - 1] = 0.0;
        }
    }
    return ImportanceReport::make(measure, std::move(values), std::move(maximizers));
}

}  // namespace detail

/// I^{c-inf}(i) = sup_{t >= 0} cov(X_i(t), X(t)), with the maximizing time
/// reported per component.
inline ImportanceReport linf_covariance_importance(const LifetimeModel& m,
                                                   const ContinuousOptions& opts = {}) {
    return detail::sup_search(
        m, Measure::linf_covariance,
        [&](int i, double t) { return diagonal_covariance(m, i, t); }, opts);
}

/// I^{c-inf} of the dual structure, computed from the primal signed domination
/// by swapping each survival function with its CDF.
inline ImportanceReport linf_dual(const LifetimeModel& m, const ContinuousOptions& opts = {}) {
    return detail::sup_search(
        m, Measure::linf_covariance,
        [&](int i, double t) {
            std::vector<double> cdf(static_cast<std::size_t>(m.n()));
            for (int j = 1; j <= m.n(); ++j) cdf[j - 1] = m.distribution(j).cdf(t);
            // cdf_i supplies the j = i factor of the product over S.
            const double survival_i = 1.0 - cdf[i - 1];
            return survival_i * cdf[i - 1] * detail::domination_sum(m.domination(), i, cdf);
        },
        opts);
}

/// Natvig's measure for all-exponential models: I^N(i) = lambda_i * cov(T_i, T).
inline ImportanceReport natvig_exponential(const LifetimeModel& m,
                                           const ContinuousOptions& opts = {}) {
    for (int i = 1; i <= m.n(); ++i)
        if (!m.distribution(i).is_exponential())
            throw UnsupportedMeasureError(
                "natvig requires exponential lifetimes for every component; component " +
                std::to_string(i) + " is " + m.distribution(i).describe());
    ImportanceReport l1 = l1_covariance_importance(m, opts);
    std::vector<double> values(l1.values);
    for (int i = 1; i <= m.n(); ++i) values[i - 1] *= m.distribution(i).exponential_rate();
    return ImportanceReport::make(Measure::natvig, std::move(values));
}

// ---------------------------------------------------------------------------
// Two-component exponential series closed forms
// ---------------------------------------------------------------------------

/// Maximizing time of t -> F_1(t) Fbar_1(t) Fbar_2(t) for exponential rates.
inline double linf_exponential_two_series_tstar(double lambda1, double lambda2) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw std::invalid_argument("rates must be positive");
    return std::log((2.0 * lambda1 + lambda2) / (lambda1 + lambda2)) / lambda1;
}

/// Component-1 L-infinity covariance importance of a two-component exponential
/// series system; swap the rates for component 2.
inline double linf_exponential_two_series(double lambda1, double lambda2) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw std::invalid_argument("rates must be positive");
    const double r = (2.0 * lambda1 + lambda2) / (lambda1 + lambda2);
    return std::pow(r, -(lambda1 + lambda2) / lambda1) -
           std::pow(r, -(2.0 * lambda1 + lambda2) / lambda1);
}

// ---------------------------------------------------------------------------
// System lifetime moments (1-D quadrature of the survival function)
// ---------------------------------------------------------------------------

struct LifetimeMoments {
    double mean = 0.0;
    double variance = 0.0;
};

inline LifetimeMoments system_lifetime_moments(const LifetimeModel& m,
                                               const ContinuousOptions& opts = {}) {
    const double t_max = m.horizon(opts.tail_mass);
    const auto pts = detail::axis_panels(m, t_max);
    QuadResult first = detail::integrate_panels([&](double t) { return m.system_survival(t); },
                                                pts, opts.quad_abs_tol, 24);
    QuadResult second = detail::integrate_panels(
        [&](double t) { return 2.0 * t * m.system_survival(t); }, pts, opts.quad_abs_tol, 24);
    LifetimeMoments out;
    out.mean = first.value;
    out.variance = second.value - first.value * first.value;
    return out;
}

}  // namespace relimp
