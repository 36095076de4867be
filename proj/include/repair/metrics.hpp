#pragma once

#include <functional>
#include <span>
#include <vector>

#include "repair/features.hpp"
#include "repair/model.hpp"
#include "repair/types.hpp"

namespace repair {

// Maps a shortlist context to reranked scores aligned with the shortlist.
using Scorer = std::function<std::vector<double>(const ShortlistContext&)>;

Scorer base_scorer();
Scorer logit_adjust_scorer(const ClassStats& stats, double tau);
Scorer tau_norm_scorer(const ClassStats& stats, double tau);
// Prepares features per context with the model's stored transform.
Scorer model_scorer(const ModelParams& params, const ClassStats& stats,
                    const SimilarityMatrix* sim);
// Test-only oracle: +1 on the true label, 0 elsewhere.
Scorer oracle_scorer();

// 1-based rank of the true label under the reranked scores, ties broken by
// ascending class id. Throws Uncovered for uncovered contexts.
int rank_of_truth(std::span<const double> reranked, const ShortlistContext& ctx);

// Full coverage-conditioned report. recall_at_k is computed over all
// contexts; everything else conditions on covered ones. hfr and rho_k are
// measured against the base ordering of the same contexts.
EvalReport evaluate(std::span<const ShortlistContext> contexts, const Scorer& scorer,
                    const ClassStats& stats);

// Among covered examples the base scorer misranks, the fraction where the
// method puts the truth strictly above the base model's hardest rival.
// NaN when the base makes no covered errors.
double hfr(std::span<const ShortlistContext> contexts, const Scorer& scorer_base,
           const Scorer& scorer_method);

// Recoverable gap closure (may be negative). Throws SaturatedBase.
double rho_k(const EvalReport& report_method, const EvalReport& report_base);

// Unconditional Hit@1 = conditional Hit@1 * Recall@k.
double unconditional(const EvalReport& report);

}  // namespace repair
