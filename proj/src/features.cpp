#include "repair/features.hpp"

#include <cmath>

namespace repair {

std::vector<std::string> feature_layout(const FeatureConfig& cfg) {
    std::vector<std::string> names = {"score_gap", "rank_gap", "log_prob_ratio", "log_freq_ratio"};
    if (cfg.use_similarity) names.push_back("similarity");
    return names;
}

FeatureConfig config_for_layout(const std::vector<std::string>& layout) {
    FeatureConfig cfg;
    cfg.use_similarity = layout.size() == 5;
    if (layout != feature_layout(cfg)) throw Error("unrecognized feature layout");
    return cfg;
}

namespace {

int require_position(const ShortlistContext& ctx, ClassId y) {
    const int p = ctx.position_of(y);
    if (p < 0) throw NotInShortlist();
    return p;
}

// Features for the shortlist positions (py, pj), py != pj.
void pair_features_at(const ShortlistContext& ctx, int py, int pj, const ClassStats& stats,
                      const SimilarityMatrix* sim, const FeatureConfig& cfg, double* out) {
    const ClassId y = ctx.shortlist[py];
    const ClassId j = ctx.shortlist[pj];
    out[0] = ctx.base_scores[py] - ctx.base_scores[pj];
    out[1] = static_cast<double>(pj - py);  // 1-based ranks cancel the offset
    out[2] = out[0];                        // softmax log-ratio collapses to the score gap
    const double s = cfg.freq_smoothing;
    const double ny = static_cast<double>(stats.counts[y]) + s;
    const double nj = static_cast<double>(stats.counts[j]) + s;
    if (nj <= 0.0) throw DivisionByZero();
    out[3] = std::log(ny / nj);
    if (cfg.use_similarity) out[4] = sim ? sim->at(y, j) : 0.0;
}

}  // namespace

double score_gap(const ShortlistContext& ctx, ClassId y, ClassId j) {
    if (y == j) throw SamePair();
    const int py = require_position(ctx, y);
    const int pj = require_position(ctx, j);
    return ctx.base_scores[py] - ctx.base_scores[pj];
}

double rank_gap(const ShortlistContext& ctx, ClassId y, ClassId j) {
    const int py = require_position(ctx, y);
    const int pj = require_position(ctx, j);
    return static_cast<double>(pj - py);
}

double log_freq_ratio(const ClassStats& stats, ClassId y, ClassId j, double smoothing) {
    if (y < 0 || y >= stats.K || j < 0 || j >= stats.K) throw InvalidLabel();
    const double ny = static_cast<double>(stats.counts[y]) + smoothing;
    const double nj = static_cast<double>(stats.counts[j]) + smoothing;
    if (nj <= 0.0) throw DivisionByZero();
    return std::log(ny / nj);
}

double log_prob_ratio(const ShortlistContext& ctx, ClassId y, ClassId j) {
    const int py = require_position(ctx, y);
    const int pj = require_position(ctx, j);
    return ctx.base_scores[py] - ctx.base_scores[pj];
}

FeatureVector feature_vector(const ShortlistContext& ctx, ClassId y, ClassId j,
                             const ClassStats& stats, const SimilarityMatrix* sim,
                             const FeatureConfig& cfg) {
    if (y == j) throw SamePair();
    if (cfg.use_similarity && sim == nullptr) throw SimilarityRequired();
    const int py = require_position(ctx, y);
    const int pj = require_position(ctx, j);
    FeatureVector f;
    f.layout = feature_layout(cfg);
    f.values.resize(f.layout.size());
    pair_features_at(ctx, py, pj, stats, sim, cfg, f.values.data());
    return f;
}

std::vector<double> rival_mean_features(const ShortlistContext& ctx, const ClassStats& stats,
                                        const SimilarityMatrix* sim, const FeatureConfig& cfg) {
    if (cfg.use_similarity && sim == nullptr) throw SimilarityRequired();
    const int k = ctx.k();
    if (k < 2) throw SingletonShortlist();
    const int d = cfg.use_similarity ? 5 : 4;
    std::vector<double> out(static_cast<size_t>(k) * d, 0.0);
    double buf[5];
    for (int py = 0; py < k; ++py) {
        double* row = out.data() + static_cast<size_t>(py) * d;
        for (int pj = 0; pj < k; ++pj) {
            if (pj == py) continue;
            pair_features_at(ctx, py, pj, stats, sim, cfg, buf);
            for (int t = 0; t < d; ++t) row[t] += buf[t];
        }
        for (int t = 0; t < d; ++t) row[t] /= static_cast<double>(k - 1);
    }
    return out;
}

FeatureTransform compute_transform(std::span<const ShortlistContext> contexts,
                                   const ClassStats& stats, const SimilarityMatrix* sim,
                                   const FeatureConfig& cfg) {
    if (cfg.use_similarity && sim == nullptr) throw SimilarityRequired();
    const int d = cfg.use_similarity ? 5 : 4;
    std::vector<double> sum(d, 0.0), sumsq(d, 0.0);
    std::int64_t n = 0;
    double buf[5];
    for (const auto& ctx : contexts) {
        const int k = ctx.k();
        for (int py = 0; py < k; ++py)
            for (int pj = 0; pj < k; ++pj) {
                if (pj == py) continue;
                pair_features_at(ctx, py, pj, stats, sim, cfg, buf);
                for (int t = 0; t < d; ++t) {
                    sum[t] += buf[t];
                    sumsq[t] += buf[t] * buf[t];
                }
                ++n;
            }
    }
    FeatureTransform tr;
    tr.mean.assign(d, 0.0);
    tr.stdev.assign(d, 1.0);
    if (n > 0) {
        for (int t = 0; t < d; ++t) {
            tr.mean[t] = sum[t] / static_cast<double>(n);
            const double var = sumsq[t] / static_cast<double>(n) - tr.mean[t] * tr.mean[t];
            tr.stdev[t] = std::sqrt(std::max(var, 0.0));
            if (tr.stdev[t] < 1e-8) tr.stdev[t] = 1e-8;
        }
    }
    return tr;
}

}  // namespace repair
