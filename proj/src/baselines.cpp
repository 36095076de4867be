#include "repair/baselines.hpp"

#include <cmath>

namespace repair {

std::vector<double> logit_adjust(const ShortlistContext& ctx, const ClassStats& stats, double tau) {
    const int k = ctx.k();
    std::vector<double> out(k);
    for (int p = 0; p < k; ++p) {
        const double pi = stats.prior(ctx.shortlist[p]);
        if (!(pi > 0.0)) throw ZeroPrior();
        out[p] = ctx.base_scores[p] - tau * std::log(pi);
    }
    return out;
}

std::vector<double> tau_norm(const ShortlistContext& ctx, const ClassStats& stats, double tau) {
    if (!stats.weight_norms) throw MissingWeightNorms();
    const auto& w = *stats.weight_norms;
    const int k = ctx.k();
    std::vector<double> out(k);
    for (int p = 0; p < k; ++p) {
        const double wy = w[ctx.shortlist[p]];
        if (!(wy > 0.0)) throw NonPositiveNorm();
        out[p] = ctx.base_scores[p] / std::pow(wy, tau);
    }
    return out;
}

double tune_tau(std::span<const ShortlistContext> calib, const ClassStats& stats, TauMethod method,
                std::span<const double> grid) {
    if (grid.empty()) throw EmptyGrid();
    double best_tau = grid[0];
    std::int64_t best_hits = -1;
    for (double tau : grid) {
        std::int64_t hits = 0;
        for (const auto& ctx : calib) {
            if (!ctx.covered) continue;
            const auto scores = method == TauMethod::logit_adjust ? logit_adjust(ctx, stats, tau)
                                                                  : tau_norm(ctx, stats, tau);
            const int best = argmax_position(scores, ctx.shortlist);
            if (ctx.shortlist[best] == ctx.true_label) ++hits;
        }
        if (hits > best_hits || (hits == best_hits && tau < best_tau)) {
            best_hits = hits;
            best_tau = tau;
        }
    }
    return best_tau;
}

FitResult ablation_fit(std::span<const PreparedExample> calib, int K, FitMode mode,
                       double lambda_a, double lambda_theta, const FitOptions& opt) {
    return fit(calib, K, lambda_a, lambda_theta, opt, mode);
}

}  // namespace repair
