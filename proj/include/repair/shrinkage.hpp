#pragma once

#include <span>
#include <vector>

#include "repair/types.hpp"

namespace repair {

// Assignment of classes to frequency groups. The default is one group for
// all classes; by_frequency splits classes into n equal-mass bands by count
// (ties by ascending id), band 0 holding the rarest classes.
struct ShrinkageGroups {
    std::vector<int> group_of;
    int n_groups = 1;

    static ShrinkageGroups single(int K);
    static ShrinkageGroups by_frequency(const ClassStats& stats, int n);
};

struct VarianceEstimates {
    std::vector<double> sigma2;  // per class
    std::vector<double> mu;      // per group, covered-count-weighted mean of a_hat
    std::vector<double> nu2;     // per group, floored between-class variance
};

inline constexpr double kNu2Floor = 1e-6;

// sigma2_y = 1/(covered_count_y + 1); mu_b weighted by covered counts;
// nu2_b = max(population var of a_hat within b - mean sigma2_y, 1e-6).
VarianceEstimates estimate_variances(std::span<const double> a_hat,
                                     std::span<const std::int64_t> covered_counts,
                                     const ShrinkageGroups& groups);

// Posterior-mean pull toward the group mean: a*_y = (1-l_y) a_hat_y + l_y mu_b,
// l_y = sigma2_y / (sigma2_y + nu2_b).
std::vector<double> shrink(std::span<const double> a_hat, const VarianceEstimates& est,
                           const ShrinkageGroups& groups);

// Convenience: estimate + shrink in one step.
std::vector<double> apply_shrinkage(std::span<const double> a_hat,
                                    std::span<const std::int64_t> covered_counts,
                                    const ShrinkageGroups& groups);

}  // namespace repair
