#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repair/types.hpp"

namespace repair {

struct FeatureConfig {
    bool use_similarity = false;
    double freq_smoothing = 1.0;
};

// [score_gap, rank_gap, log_prob_ratio, log_freq_ratio] (+ similarity)
std::vector<std::string> feature_layout(const FeatureConfig& cfg);
FeatureConfig config_for_layout(const std::vector<std::string>& layout);

// g_y(x) - g_j(x); the negative of the pair's base-score threshold.
double score_gap(const ShortlistContext& ctx, ClassId y, ClassId j);

// rank(j) - rank(y), ranks 1-based in shortlist order.
double rank_gap(const ShortlistContext& ctx, ClassId y, ClassId j);

// log((n_y + smoothing) / (n_j + smoothing)).
double log_freq_ratio(const ClassStats& stats, ClassId y, ClassId j, double smoothing);

// log P(y|S) - log P(j|S) under the shortlist-restricted softmax of the
// base scores; collapses to the score gap after shared-max stabilization.
double log_prob_ratio(const ShortlistContext& ctx, ClassId y, ClassId j);

FeatureVector feature_vector(const ShortlistContext& ctx, ClassId y, ClassId j,
                             const ClassStats& stats, const SimilarityMatrix* sim,
                             const FeatureConfig& cfg);

// Rival-mean features (1/(k-1)) sum_j phi(x,y,j) for every shortlisted y,
// row-major k x d, without standardization. This is all Eq.-11-style
// corrections ever need from the full pairwise tensor.
std::vector<double> rival_mean_features(const ShortlistContext& ctx, const ClassStats& stats,
                                        const SimilarityMatrix* sim, const FeatureConfig& cfg);

// Pair-level mean/std per dimension over all ordered pairs of the given
// (covered) contexts. Std floored at 1e-8.
FeatureTransform compute_transform(std::span<const ShortlistContext> contexts,
                                   const ClassStats& stats, const SimilarityMatrix* sim,
                                   const FeatureConfig& cfg);

}  // namespace repair
