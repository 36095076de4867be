#pragma once

#include <optional>
#include <span>
#include <vector>

#include "repair/features.hpp"
#include "repair/lbfgs.hpp"
#include "repair/types.hpp"

namespace repair {

// A shortlist context with its standardized rival-mean feature rows cached.
// phi is k x d row-major: phi[y] = (1/(k-1)) sum_{j != y} phi(x, y, j), with
// the feature transform already applied (the mean commutes with it).
struct PreparedExample {
    std::vector<ClassId> shortlist;
    std::vector<double> base_scores;
    int true_position = -1;  // -1 when uncovered
    int d = 0;
    std::vector<double> phi;

    int k() const { return static_cast<int>(shortlist.size()); }
    const double* phi_row(int pos) const { return phi.data() + static_cast<size_t>(pos) * d; }
};

PreparedExample prepare_example(const ShortlistContext& ctx, const ClassStats& stats,
                                const SimilarityMatrix* sim, const FeatureConfig& cfg,
                                const FeatureTransform& transform);

std::vector<PreparedExample> prepare_examples(std::span<const ShortlistContext> contexts,
                                              const ClassStats& stats, const SimilarityMatrix* sim,
                                              const FeatureConfig& cfg,
                                              const FeatureTransform& transform);

// Mean over rivals of theta^T phi(x, y, j) for the class at shortlist
// position y_pos (Eq.-11-style correction).
double pairwise_correction(const PreparedExample& ex, int y_pos, std::span<const double> theta);

// r_y = g_y + a_y + l_y for every shortlisted y, in shortlist order.
std::vector<double> rerank_scores(const PreparedExample& ex, const ModelParams& params);

// Stable softmax; probabilities sum to 1 within 1e-12.
std::vector<double> shortlist_softmax(std::span<const double> scores);

enum class FitMode { full, cw_only, pw_only };

struct ObjectiveValue {
    double value = 0.0;            // negated penalized log-likelihood
    std::vector<double> grad;      // K + d, a-block first
};

// Negated regularized conditional log-likelihood over covered examples and
// its exact gradient w.r.t. (a, theta). Frozen blocks (per mode) contribute
// neither gradient nor penalty.
ObjectiveValue objective(std::span<const double> a, std::span<const double> theta,
                         std::span<const PreparedExample> data, double lambda_a,
                         double lambda_theta, FitMode mode = FitMode::full);

// Spec-level wrapper: value and full-length gradient at the params point.
ObjectiveValue objective(const ModelParams& params, std::span<const PreparedExample> data);

struct FitOptions {
    int max_iter = 300;
    double tol = 1e-8;
    int memory = 10;
};

struct FitResult {
    ModelParams params;
    double nll = 0.0;  // penalized objective at the solution
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Joint maximum-likelihood fit of (a, theta) from zeros (or init), single
// sequential optimizer run. Shrinkage is applied separately by the caller.
FitResult fit(std::span<const PreparedExample> calib, int K, double lambda_a, double lambda_theta,
              const FitOptions& opt = {}, FitMode mode = FitMode::full,
              const std::optional<ModelParams>& init = std::nullopt);

// Deterministic argmax with ascending-class-id tie-break; returns shortlist position.
int argmax_position(std::span<const double> scores, std::span<const ClassId> shortlist);

}  // namespace repair
