// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#include "wirecons/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "wirecons/error.hpp"

namespace wirecons {

double gini(const ParticipationLedger& ledger)
{
    const std::size_t n = ledger.size();
    if (n == 0) {
        throw ArgumentError("gini: empty ledger");
    }
    std::vector<std::uint64_t> x = ledger.counts;
    std::sort(x.begin(), x.end());

    // sum_i sum_j |x_i - x_j| = 2 * sum_i (2i - n + 1) x_(i) over ascending
    // order statistics (0-based i). Accumulate in 128 bits to stay exact.
    __int128 weighted = 0;
    unsigned __int128 total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto w = static_cast<__int128>(2 * i) - static_cast<__int128>(n) + 1;
        weighted += w * static_cast<__int128>(x[i]);
        total += x[i];
    }
    if (total == 0) {
        return 0.0;
    }
    // G = 2 * weighted / (2 n * total). When both fit in a double mantissa a
    // single double division is correctly rounded for the exact ratio.
    const unsigned __int128 denom_exact = static_cast<unsigned __int128>(n) * total;
    constexpr unsigned __int128 mantissa_limit = static_cast<unsigned __int128>(1) << 53;
    if (weighted >= 0 && static_cast<unsigned __int128>(weighted) < mantissa_limit &&
        denom_exact < mantissa_limit) {
        return static_cast<double>(weighted) / static_cast<double>(denom_exact);
    }
    const auto numerator = static_cast<long double>(weighted);
    const auto denominator = static_cast<long double>(n) * static_cast<long double>(total);
    return static_cast<double>(numerator / denominator);
}

double throughput(const ThroughputSample& sample)
{
    if (sample.n_tx < 1) {
        throw ArgumentError("throughput: n_tx must be at least 1");
    }
    if (sample.t_c_values.empty()) {
        throw UndefinedThroughputError("throughput: no successful rounds");
    }
    const double sum = std::accumulate(sample.t_c_values.begin(), sample.t_c_values.end(), 0.0);
    const double mean = sum / static_cast<double>(sample.t_c_values.size());
    if (!(mean > 0.0)) {
        throw ArgumentError("throughput: mean round duration must be positive");
    }
    return static_cast<double>(sample.n_tx) / mean;
}

double usl(std::uint64_t n, const UslParams& params)
{
    if (n < 1) {
        throw ArgumentError("usl: n must be at least 1");
    }
    const auto nd = static_cast<double>(n);
    return nd / (1.0 + params.alpha * (nd - 1.0) + params.beta * nd * (nd - 1.0));
}

std::uint64_t usl_argmax(std::uint64_t n_max, const UslParams& params)
{
    if (n_max < 1) {
        throw ArgumentError("usl_argmax: n_max must be at least 1");
    }
    std::uint64_t best = 1;
    double best_s = usl(1, params);
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        const double s = usl(n, params);
        if (s > best_s) {
            best = n;
            best_s = s;
        }
    }
    return best;
}

std::vector<std::string> decentralization_order(const std::map<std::string, double>& ginis)
{
    std::vector<std::pair<std::string, double>> entries(ginis.begin(), ginis.end());
    // std::map iteration is already name-ordered, so a stable sort on G
    // leaves ties in lexicographic order.
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::string> order;
    order.reserve(entries.size());
    for (auto& e : entries) {
        order.push_back(std::move(e.first));
    }
    return order;
}

} // namespace wirecons
