#include "repair/experiment.hpp"

#include <cmath>

#include "repair/shortlist.hpp"

namespace repair {

FittedModel fit_pipeline(std::span<const ShortlistContext> calib_contexts, const ClassStats& stats,
                         const SimilarityMatrix* sim, const PipelineConfig& cfg, FitMode mode,
                         const std::string& fingerprint) {
    std::vector<ShortlistContext> covered = covered_subset(calib_contexts);
    if (covered.empty()) throw EmptyCalibration();

    const FeatureTransform transform = compute_transform(covered, stats, sim, cfg.features);
    const auto prepared = prepare_examples(covered, stats, sim, cfg.features, transform);

    FitResult r = fit(prepared, stats.K, cfg.lambda_a, cfg.lambda_theta, cfg.opt, mode);
    r.params.feature_layout = feature_layout(cfg.features);
    r.params.transform = transform;
    r.params.fitted_on = fingerprint;

    if (mode != FitMode::pw_only) {
        std::vector<std::int64_t> covered_counts(stats.K, 0);
        for (const auto& ctx : covered) ++covered_counts[ctx.true_label];
        const auto groups = cfg.shrinkage_groups <= 1
                                ? ShrinkageGroups::single(stats.K)
                                : ShrinkageGroups::by_frequency(stats, cfg.shrinkage_groups);
        r.params.a = apply_shrinkage(r.params.a, covered_counts, groups);
    }

    FittedModel out;
    out.params = std::move(r.params);
    out.nll = r.nll;
    out.grad_norm = r.grad_norm;
    out.iterations = r.iterations;
    out.converged = r.converged;
    return out;
}

SeedResult run_seed(Regime regime, std::uint64_t seed, const std::vector<int>& ks,
                    const PipelineConfig& cfg) {
    const auto synth = generate(SyntheticSpec::defaults(regime, seed));
    const ClassStats& stats = synth.calib.stats;

    SeedResult res;
    for (int k : ks) {
        const auto calib_ctx = build_contexts(synth.calib, k);
        const auto test_ctx = build_contexts(synth.test, k);

        const auto cw = fit_pipeline(calib_ctx, stats, nullptr, cfg, FitMode::cw_only);
        const auto full = fit_pipeline(calib_ctx, stats, nullptr, cfg, FitMode::full);
        const auto pw = fit_pipeline(calib_ctx, stats, nullptr, cfg, FitMode::pw_only);

        res.reports["base"][k] = evaluate(test_ctx, base_scorer(), stats);
        res.reports["classwise"][k] = evaluate(test_ctx, model_scorer(cw.params, stats, nullptr), stats);
        res.reports["repair"][k] = evaluate(test_ctx, model_scorer(full.params, stats, nullptr), stats);
        res.reports["pairwise"][k] = evaluate(test_ctx, model_scorer(pw.params, stats, nullptr), stats);

        if (k == 10) {
            // quintiles over rare classes with defined dispersion
            const auto disp = all_dispersions(test_ctx, stats.K);
            std::vector<ClassId> rare;
            std::vector<double> rare_disp;
            for (int y = 0; y < stats.K; ++y)
                if (stats.is_rare(y) && disp[y]) {
                    rare.push_back(y);
                    rare_disp.push_back(*disp[y]);
                }
            if (rare.size() >= 5) {
                res.quintiles = quintile_gains(rare, rare_disp, res.reports["repair"][k].per_class,
                                               res.reports["classwise"][k].per_class);
                res.quintiles_valid = true;
            }

            // repair-vs-classwise argmax identity on covered test examples
            const auto s_cw = model_scorer(cw.params, stats, nullptr);
            const auto s_full = model_scorer(full.params, stats, nullptr);
            std::int64_t agree = 0, covered = 0;
            for (const auto& ctx : test_ctx) {
                if (!ctx.covered) continue;
                ++covered;
                const auto a = s_cw(ctx);
                const auto b = s_full(ctx);
                if (argmax_position(a, ctx.shortlist) == argmax_position(b, ctx.shortlist)) ++agree;
            }
            res.identity_fraction = covered > 0 ? static_cast<double>(agree) / covered : 1.0;

            // contradictory-pair witnesses over the planted pairs, both splits
            std::vector<ShortlistContext> pooled = calib_ctx;
            pooled.insert(pooled.end(), test_ctx.begin(), test_ctx.end());
            for (const auto& [u, v] : synth.truth.confuser_pairs) {
                ++res.witness_scanned;
                const auto w = contradictory_pair_witness(
                    pooled, u, v, posterior_preference(synth.truth, u, v));
                if (w && !offset_scan_satisfiable(w->t_u, w->t_v)) ++res.witness_pairs;
            }
        }
    }
    return res;
}

Aggregate aggregate(const std::vector<double>& xs) {
    Aggregate a;
    a.n = static_cast<int>(xs.size());
    if (a.n == 0) return a;
    double s = 0.0;
    for (double x : xs) s += x;
    a.mean = s / a.n;
    double v = 0.0;
    for (double x : xs) v += (x - a.mean) * (x - a.mean);
    a.stdev = a.n > 1 ? std::sqrt(v / (a.n - 1)) : 0.0;
    return a;
}

}  // namespace repair
