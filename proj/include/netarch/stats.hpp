#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace netarch {

struct interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval for a binomial proportion (default 95%, z = 1.96).
inline interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                double z = 1.96) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    if (successes > trials)
        throw std::invalid_argument("wilson_interval: successes exceed trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Standard error of a binomial proportion at the given point estimate.
inline double proportion_se(double phat, std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("proportion_se: trials must be >= 1");
    return std::sqrt(std::max(0.0, phat * (1.0 - phat)) / static_cast<double>(trials));
}

struct sample_summary {
    std::uint64_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;   // sample standard deviation (n - 1 denominator)
    double se_mean = 0.0;
};

inline sample_summary summarize(const std::vector<double>& values) {
    sample_summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
        s.se_mean = s.stddev / std::sqrt(static_cast<double>(values.size()));
    }
    return s;
}

} // namespace netarch
