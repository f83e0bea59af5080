#pragma once
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace qrl {

struct MeanStats {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0; // normal-approximation 95% interval
    double ci_hi = 0.0;
    size_t n = 0;
};

inline MeanStats mean_stats(std::span<const double> xs) {
    MeanStats s;
    s.n = xs.size();
    if (xs.empty()) return s;
    double total = 0.0;
    for (double x : xs) total += x;
    s.mean = total / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        const double var = ss / static_cast<double>(xs.size() - 1);
        s.std_error = std::sqrt(var / static_cast<double>(xs.size()));
    }
    s.ci_lo = s.mean - 1.96 * s.std_error;
    s.ci_hi = s.mean + 1.96 * s.std_error;
    return s;
}

} // namespace qrl
