#include "repair/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace repair {

ShrinkageGroups ShrinkageGroups::single(int K) {
    ShrinkageGroups g;
    g.group_of.assign(K, 0);
    g.n_groups = 1;
    return g;
}

ShrinkageGroups ShrinkageGroups::by_frequency(const ClassStats& stats, int n) {
    if (n < 1) throw Error("shrinkage groups: n must be >= 1");
    const int K = stats.K;
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (stats.counts[a] != stats.counts[b]) return stats.counts[a] < stats.counts[b];
        return a < b;
    });
    ShrinkageGroups g;
    g.group_of.assign(K, 0);
    g.n_groups = std::min(n, K);
    for (int i = 0; i < K; ++i)
        g.group_of[order[i]] = std::min(static_cast<int>(static_cast<std::int64_t>(i) * g.n_groups / K),
                                        g.n_groups - 1);
    return g;
}

VarianceEstimates estimate_variances(std::span<const double> a_hat,
                                     std::span<const std::int64_t> covered_counts,
                                     const ShrinkageGroups& groups) {
    const int K = static_cast<int>(a_hat.size());
    if (static_cast<int>(covered_counts.size()) != K ||
        static_cast<int>(groups.group_of.size()) != K)
        throw DimensionMismatch();
    for (auto c : covered_counts)
        if (c < 0) throw Error("negative covered count");

    VarianceEstimates est;
    est.sigma2.resize(K);
    for (int y = 0; y < K; ++y) est.sigma2[y] = 1.0 / (static_cast<double>(covered_counts[y]) + 1.0);

    const int B = groups.n_groups;
    std::vector<double> wsum(B, 0.0), wmean(B, 0.0), sum(B, 0.0), sumsq(B, 0.0), s2sum(B, 0.0);
    std::vector<std::int64_t> size(B, 0);
    for (int y = 0; y < K; ++y) {
        const int b = groups.group_of[y];
        const double w = static_cast<double>(covered_counts[y]);
        wsum[b] += w;
        wmean[b] += w * a_hat[y];
        sum[b] += a_hat[y];
        sumsq[b] += a_hat[y] * a_hat[y];
        s2sum[b] += est.sigma2[y];
        ++size[b];
    }
    est.mu.resize(B);
    est.nu2.resize(B);
    for (int b = 0; b < B; ++b) {
        if (size[b] == 0) throw EmptyGroup();
        const double n = static_cast<double>(size[b]);
        // weighted mean; unweighted fallback when no class in b has covered examples
        est.mu[b] = wsum[b] > 0.0 ? wmean[b] / wsum[b] : sum[b] / n;
        const double mean = sum[b] / n;
        const double var = std::max(sumsq[b] / n - mean * mean, 0.0);
        est.nu2[b] = std::max(var - s2sum[b] / n, kNu2Floor);
    }
    return est;
}

std::vector<double> shrink(std::span<const double> a_hat, const VarianceEstimates& est,
                           const ShrinkageGroups& groups) {
    const int K = static_cast<int>(a_hat.size());
    std::vector<double> out(K);
    for (int y = 0; y < K; ++y) {
        const int b = groups.group_of[y];
        const double s2 = est.sigma2[y];
        const double n2 = est.nu2[b];
        if (!(s2 > 0.0) || !(n2 > 0.0)) throw NonPositiveVariance();
        const double lam = s2 / (s2 + n2);
        out[y] = (1.0 - lam) * a_hat[y] + lam * est.mu[b];
    }
    return out;
}

std::vector<double> apply_shrinkage(std::span<const double> a_hat,
                                    std::span<const std::int64_t> covered_counts,
                                    const ShrinkageGroups& groups) {
    return shrink(a_hat, estimate_variances(a_hat, covered_counts, groups), groups);
}

}  // namespace repair
