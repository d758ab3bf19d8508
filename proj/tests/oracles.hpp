/*
   Copyright 2026 The mcvd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library's numerical routines.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double absorbing_rate(double t, double d, double r, double D)
{
    if (t <= 0.0)
        return 0.0;
    return r / (d + r) * d / std::sqrt(4.0 * std::numbers::pi * D * t * t * t) * std::exp(-d * d / (4.0 * D * t));
}

inline double passive_rate(double t, double d, double r, double D)
{
    if (t <= 0.0)
        return 0.0;
    const double V = 4.0 / 3.0 * std::numbers::pi * r * r * r;
    return V / std::pow(4.0 * std::numbers::pi * D * t, 1.5) * std::exp(-(d + r) * (d + r) / (4.0 * D * t));
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

} // namespace detail

/// Adaptive Simpson with Richardson correction.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13)
{
    if (a == b)
        return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

/// Piecewise adaptive Simpson over n equal pieces (helps sharp peaks).
inline double integrate_pieces(const std::function<double(double)>& f, double a, double b, int n, double tol = 1e-13)
{
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += integrate(f, a + (b - a) * i / n, a + (b - a) * (i + 1) / n, tol / n);
    return s;
}

/// Golden-section maximizer of a unimodal function.
inline double golden_max(const std::function<double(double)>& f, double a, double b, double tol)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Plain bisection for a decreasing sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    while (hi - lo > tol) {
        const double m = 0.5 * (lo + hi);
        (f(m) > 0.0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

/// Gaussian-mixture OOK BER by recursive enumeration of past bits.
inline double mixture_ber(const std::vector<double>& mean, const std::vector<double>& var, double q, double xi)
{
    const int taps = static_cast<int>(mean.size());
    double total = 0.0;
    const long count = 1L << taps;
    for (long pattern = 0; pattern < count; ++pattern) {
        double m = 0.0, v = 0.0;
        for (int i = 0; i < taps; ++i)
            if ((pattern >> i) & 1) {
                m += q * mean[i];
                v += q * var[i];
            }
        const bool one = pattern & 1;
        double p_above;
        if (v <= 0.0)
            p_above = m >= xi ? 1.0 : 0.0;
        else
            p_above = 0.5 * std::erfc((xi - m) / std::sqrt(2.0 * v));
        total += one ? 1.0 - p_above : p_above;
    }
    return total / static_cast<double>(count);
}

} // namespace oracle
