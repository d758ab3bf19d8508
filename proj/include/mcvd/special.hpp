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

#include <cmath>
#include <limits>
#include <numbers>

namespace mcvd {

/// Upper tail of the standard normal, Pr(Z >= z).
inline double normal_tail(double z)
{
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

/// log Pr(Z >= z), finite far beyond the point where normal_tail underflows.
inline double log_normal_tail(double z)
{
    if (z < 30.0)
        return std::log(normal_tail(z));
    // Asymptotic expansion of the Mills ratio; the truncation error at z = 30
    // is below 1e-12 relative.
    const double w = 1.0 / (z * z);
    const double series = 1.0 - w * (1.0 - 3.0 * w * (1.0 - 5.0 * w * (1.0 - 7.0 * w)));
    return -0.5 * z * z - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

/// log(exp(a) + exp(b)) without overflow; tolerates -inf operands.
inline double log_add(double a, double b)
{
    if (a == -std::numeric_limits<double>::infinity())
        return b;
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

} // namespace mcvd
