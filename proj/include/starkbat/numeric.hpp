// numeric.hpp — Small shared numeric utilities

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace starkbat {

inline std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2) throw std::invalid_argument("linspace: need at least 2 points");
    std::vector<double> out(static_cast<std::size_t>(count));
    const double step = (hi - lo) / double(count - 1);
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
    out.back() = hi;
    return out;
}

// Golden-section maximization of a unimodal function on [lo, hi] to relative
// interval tolerance rel_tol. Returns (argmax, max).
inline std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                                    double lo, double hi,
                                                    double rel_tol = 1e-8,
                                                    int max_iter = 200) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > rel_tol * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (f1 >= f2 && f1 >= fm) return {x1, f1};
    if (f2 >= f1 && f2 >= fm) return {x2, f2};
    return {xm, fm};
}

// Rational approximation p/q of `ratio` with q <= max_den and relative error
// <= rel_tol; nullopt when no such fraction exists.
inline std::optional<std::pair<long, long>> small_rational(double ratio, long max_den = 64,
                                                           double rel_tol = 1e-9) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) return std::nullopt;
    for (long q = 1; q <= max_den; ++q) {
        const long p = std::lround(ratio * double(q));
        if (p < 1) continue;
        if (std::abs(ratio - double(p) / double(q)) <= rel_tol * ratio) {
            const long g = std::gcd(p, q);
            return std::make_pair(p / g, q / g);
        }
    }
    return std::nullopt;
}

// Trace norm ||A||_1 of a Hermitian matrix (sum of absolute eigenvalues).
inline double trace_norm_hermitian(const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

// Shortest-rounding style formatting with 17 significant digits; doubles
// round-trip losslessly through this representation.
inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace starkbat
