#include "repair/metrics.hpp"

#include <cmath>

#include "repair/baselines.hpp"

namespace repair {

Scorer base_scorer() {
    return [](const ShortlistContext& ctx) { return ctx.base_scores; };
}

Scorer logit_adjust_scorer(const ClassStats& stats, double tau) {
    return [stats, tau](const ShortlistContext& ctx) { return logit_adjust(ctx, stats, tau); };
}

Scorer tau_norm_scorer(const ClassStats& stats, double tau) {
    return [stats, tau](const ShortlistContext& ctx) { return tau_norm(ctx, stats, tau); };
}

Scorer model_scorer(const ModelParams& params, const ClassStats& stats,
                    const SimilarityMatrix* sim) {
    const FeatureConfig cfg = config_for_layout(params.feature_layout);
    if (cfg.use_similarity && sim == nullptr) throw SimilarityRequired();
    return [params, stats, sim, cfg](const ShortlistContext& ctx) {
        return rerank_scores(prepare_example(ctx, stats, sim, cfg, params.transform), params);
    };
}

Scorer oracle_scorer() {
    return [](const ShortlistContext& ctx) {
        std::vector<double> s(ctx.k(), 0.0);
        const int t = ctx.true_position();
        if (t >= 0) s[t] = 1.0;
        return s;
    };
}

int rank_of_truth(std::span<const double> reranked, const ShortlistContext& ctx) {
    const int t = ctx.true_position();
    if (t < 0) throw Uncovered();
    int rank = 1;
    for (int p = 0; p < static_cast<int>(reranked.size()); ++p) {
        if (p == t) continue;
        if (reranked[p] > reranked[t] ||
            (reranked[p] == reranked[t] && ctx.shortlist[p] < ctx.shortlist[t]))
            ++rank;
    }
    return rank;
}

namespace {

bool base_hit(const ShortlistContext& ctx) {
    // base scores are shortlist-ordered, so the hardest rival is the first
    // non-truth entry and the base argmax is position 0
    return ctx.true_position() == 0;
}

}  // namespace

EvalReport evaluate(std::span<const ShortlistContext> contexts, const Scorer& scorer,
                    const ClassStats& stats) {
    EvalReport rep;
    std::int64_t n_all = 0, n_cov = 0;
    std::int64_t hit1 = 0, hit3 = 0, rare_hit = 0, rare_tot = 0, freq_hit = 0, freq_tot = 0;
    std::int64_t base_hit1 = 0, base_err = 0, flips = 0;
    double mrr_sum = 0.0;

    for (const auto& ctx : contexts) {
        ++n_all;
        if (!ctx.covered) continue;
        ++n_cov;
        const auto scores = scorer(ctx);
        const int rank = rank_of_truth(scores, ctx);
        const bool hit = rank == 1;
        hit1 += hit;
        hit3 += rank <= 3;
        mrr_sum += 1.0 / rank;
        auto& pc = rep.per_class[ctx.true_label];
        ++pc.total;
        pc.hits += hit;
        if (stats.is_rare(ctx.true_label)) {
            ++rare_tot;
            rare_hit += hit;
        } else {
            ++freq_tot;
            freq_hit += hit;
        }
        if (base_hit(ctx)) {
            ++base_hit1;
        } else {
            ++base_err;
            // hardest rival: top-scoring wrong shortlist class under base
            const int tp = ctx.true_position();
            const int h = tp == 0 ? 1 : 0;
            if (scores[tp] > scores[h]) ++flips;
        }
    }
    if (n_cov == 0) throw NoCoveredExamples();

    rep.n_covered = n_cov;
    rep.n_base_errors = base_err;
    rep.hit1 = static_cast<double>(hit1) / n_cov;
    rep.hit3 = static_cast<double>(hit3) / n_cov;
    rep.mrr = mrr_sum / n_cov;
    rep.rare_hit1 = rare_tot > 0 ? static_cast<double>(rare_hit) / rare_tot : nan_value();
    rep.freq_hit1 = freq_tot > 0 ? static_cast<double>(freq_hit) / freq_tot : nan_value();
    rep.hfr = base_err > 0 ? static_cast<double>(flips) / base_err : nan_value();
    rep.recall_at_k = n_all > 0 ? static_cast<double>(n_cov) / n_all : 0.0;
    const double bh = static_cast<double>(base_hit1) / n_cov;
    rep.rho_k = bh < 1.0 ? (rep.hit1 - bh) / (1.0 - bh) : nan_value();
    return rep;
}

double hfr(std::span<const ShortlistContext> contexts, const Scorer& scorer_base,
           const Scorer& scorer_method) {
    std::int64_t base_err = 0, flips = 0;
    for (const auto& ctx : contexts) {
        if (!ctx.covered) continue;
        const auto bs = scorer_base(ctx);
        if (rank_of_truth(bs, ctx) == 1) continue;
        ++base_err;
        // hardest rival by raw base score (shortlist order)
        const int tp = ctx.true_position();
        const int h = tp == 0 ? 1 : 0;
        const auto ms = scorer_method(ctx);
        if (ms[tp] > ms[h]) ++flips;
    }
    return base_err > 0 ? static_cast<double>(flips) / base_err : nan_value();
}

double rho_k(const EvalReport& report_method, const EvalReport& report_base) {
    if (report_base.hit1 >= 1.0) throw SaturatedBase();
    return (report_method.hit1 - report_base.hit1) / (1.0 - report_base.hit1);
}

double unconditional(const EvalReport& report) { return report.hit1 * report.recall_at_k; }

}  // namespace repair
