#pragma once

// Adaptive Simpson quadrature in one and two dimensions with an explicit
// error estimate, so callers can report achieved accuracy when the requested
// tolerance is not met.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace relimp {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // accumulated error estimate
    std::size_t evals = 0;
    bool converged = true;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const { return achieved_error_; }

private:
    double achieved_error_;
};

namespace detail {

template <class F>
void adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth, QuadResult& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    out.evals += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        out.value += left + right + delta / 15.0;
        if (depth <= 0 && std::abs(delta) > 15.0 * tol) {
            // Depth exhausted: charge the full defect, not the Richardson share.
            out.error += std::abs(delta);
            out.converged = false;
        } else {
            out.error += std::abs(delta) / 15.0;
        }
        return;
    }
    adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
    adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Integrates f over [a,b] to absolute tolerance `tol`.
template <class F>
QuadResult adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 30) {
    QuadResult out;
    if (!(b > a)) return out;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    out.evals = 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, out);
    return out;
}

/// Integrates f(x,y) over [ax,bx] x [ay,by] to absolute tolerance `tol` by
/// nesting adaptive rules: the inner tolerance is scaled so that inner errors
/// integrated over the outer axis stay within a quarter of the budget.
template <class F>
QuadResult adaptive_simpson_2d(F&& f, double ax, double bx, double ay, double by, double tol,
                               int max_depth = 30) {
    QuadResult out;
    if (!(bx > ax) || !(by > ay)) return out;
    const double inner_tol = 0.25 * tol / (bx - ax);
    double worst_inner_error = 0.0;
    bool inner_converged = true;
    std::size_t inner_evals = 0;

    auto outer_integrand = [&](double x) {
        QuadResult inner = adaptive_simpson([&](double y) { return f(x, y); }, ay, by,
                                            inner_tol, max_depth);
        inner_evals += inner.evals;
        worst_inner_error = std::max(worst_inner_error, inner.error);
        if (!inner.converged) inner_converged = false;
        return inner.value;
    };

    QuadResult outer = adaptive_simpson(outer_integrand, ax, bx, 0.75 * tol, max_depth);
    out.value = outer.value;
    out.error = outer.error + worst_inner_error * (bx - ax);
    out.evals = inner_evals;
    out.converged = outer.converged && inner_converged;
    return out;
}

}  // namespace relimp
