#pragma once

// Golden-section maximization of a univariate function on a bracket.

#include <cmath>

namespace relimp {

struct MaximizeResult {
    double x = 0.0;
    double value = 0.0;
};

template <class F>
MaximizeResult golden_section_maximize(F&& f, double a, double b, double x_tol,
                                       int max_iter = 200) {
    constexpr double inv_phi = 0.6180339887498948482;  // 1/phi
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace relimp
