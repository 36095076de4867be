// Acceptance suite: runs every published-result criterion end to end and
// prints one pass/fail line per criterion. Exit status is the number of
// failed criteria. Expected failures (non-class-separable reranker rows,
// see the README) are reported together with the measured posterior ceiling.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle_helpers.hpp"
#include "repair/baselines.hpp"
#include "repair/diagnostics.hpp"
#include "repair/experiment.hpp"
#include "repair/io.hpp"
#include "repair/metrics.hpp"
#include "repair/shortlist.hpp"

using namespace repair;

namespace {

int g_failures = 0;
bool g_current_ok = true;
std::string g_notes;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        g_current_ok = false;
        g_notes += (g_notes.empty() ? "" : "; ") + what;
    }
}

void expect_near(double got, double want, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s got %.4f want %.4f +- %.3f", what.c_str(), got, want, tol);
    expect(std::abs(got - want) <= tol, buf);
}

void finish(int criterion, const std::string& title) {
    if (g_current_ok) {
        std::printf("[criterion %2d] PASS  %s\n", criterion, title.c_str());
    } else {
        ++g_failures;
        std::printf("[criterion %2d] FAIL  %s\n               %s\n", criterion, title.c_str(),
                    g_notes.c_str());
    }
    std::fflush(stdout);
    g_current_ok = true;
    g_notes.clear();
}

struct Runs {
    std::map<Regime, std::vector<SeedResult>> by_regime;
    double seconds_per_seed = 0.0;

    Aggregate hit1(Regime r, const std::string& m, int k) const {
        std::vector<double> xs;
        for (const auto& sr : by_regime.at(r)) xs.push_back(sr.reports.at(m).at(k).hit1 * 100.0);
        return aggregate(xs);
    }
    Aggregate rho(Regime r, const std::string& m) const {
        std::vector<double> xs;
        for (const auto& sr : by_regime.at(r)) xs.push_back(sr.reports.at(m).at(10).rho_k);
        return aggregate(xs);
    }
    Aggregate quintile(Regime r, int b) const {
        std::vector<double> xs;
        for (const auto& sr : by_regime.at(r))
            if (sr.quintiles_valid) xs.push_back(sr.quintiles.delta_hit1[b]);
        return aggregate(xs);
    }
};

Runs run_everything() {
    Runs runs;
    const PipelineConfig cfg;  // lambda_a = lambda_theta = 0.001
    const auto t0 = std::chrono::steady_clock::now();
    int n = 0;
    for (Regime r : {Regime::class_separable, Regime::non_class_separable})
        for (std::uint64_t seed : default_seeds()) {
            runs.by_regime[r].push_back(run_seed(r, seed, {5, 10, 20, 50}, cfg));
            ++n;
        }
    const auto t1 = std::chrono::steady_clock::now();
    runs.seconds_per_seed = std::chrono::duration<double>(t1 - t0).count() / n;
    return runs;
}

// Conditional Hit@1 of the exact-posterior rule on the same covered test
// contexts; an upper bound for every score-based reranker on this data.
double posterior_ceiling(Regime regime, std::uint64_t seed, int k) {
    const auto synth = generate(SyntheticSpec::defaults(regime, seed));
    const auto ctxs = build_contexts(synth.test, k);
    Scorer oracle = [&](const ShortlistContext& ctx) {
        const auto post = true_posterior(synth.truth, synth.truth.x_of(ctx.example_id));
        std::vector<double> s(ctx.k());
        for (int p = 0; p < ctx.k(); ++p) s[p] = post[ctx.shortlist[p]];
        return s;
    };
    return evaluate(ctxs, oracle, synth.calib.stats).hit1 * 100.0;
}

void criterion1(const Runs& runs) {
    const auto& T = synthetic_targets();
    expect_near(runs.rho(Regime::class_separable, "classwise").mean, T.rho_cs, T.rho_cs_tol,
                "rho_10 classwise class-sep");
    expect_near(runs.rho(Regime::class_separable, "repair").mean, T.rho_cs, T.rho_cs_tol,
                "rho_10 repair class-sep");
    expect_near(runs.rho(Regime::non_class_separable, "classwise").mean, T.rho_cw_ncs,
                T.rho_cw_ncs_tol, "rho_10 classwise non-class-sep");
    expect_near(runs.rho(Regime::non_class_separable, "repair").mean, T.rho_repair_ncs,
                T.rho_repair_ncs_tol, "rho_10 repair non-class-sep");
    char buf[120];
    std::snprintf(buf, sizeof buf, "runtime %.1fs per seed exceeds 120s", runs.seconds_per_seed);
    expect(runs.seconds_per_seed < 120.0, buf);
    finish(1, "recoverable-gap closure at k=10, 5-seed means");
}

void criterion2(const Runs& runs) {
    const auto& T = synthetic_targets();
    for (int i = 0; i < 4; ++i) {
        const int k = T.ks[i];
        const auto tag = "k=" + std::to_string(k);
        expect_near(runs.hit1(Regime::class_separable, "base", k).mean, T.base_cs[i], T.hit1_tol,
                    "cs base " + tag);
        expect_near(runs.hit1(Regime::class_separable, "classwise", k).mean, T.cw_cs[i],
                    T.hit1_tol, "cs classwise " + tag);
        expect_near(runs.hit1(Regime::class_separable, "repair", k).mean, T.cw_cs[i], T.hit1_tol,
                    "cs repair " + tag);
        expect_near(runs.hit1(Regime::non_class_separable, "base", k).mean, T.base_ncs[i],
                    T.hit1_tol, "ncs base " + tag);
        expect_near(runs.hit1(Regime::non_class_separable, "classwise", k).mean, T.cw_ncs[i],
                    T.hit1_tol, "ncs classwise " + tag);
        expect_near(runs.hit1(Regime::non_class_separable, "repair", k).mean, T.repair_ncs[i],
                    T.hit1_tol, "ncs repair " + tag);
    }
    finish(2, "published Hit@1 table, synthetic block, k in {5,10,20,50}");
}

void criterion3(const Runs& runs) {
    const auto& T = synthetic_targets();
    double prev = -1e9;
    bool monotone = true;
    for (int b = 0; b < 5; ++b) {
        const double q = runs.quintile(Regime::non_class_separable, b).mean;
        if (q < prev) monotone = false;
        prev = q;
    }
    expect(monotone, "non-class-sep quintile gains are not non-decreasing");
    expect_near(runs.quintile(Regime::non_class_separable, 0).mean, T.q1_ncs, T.q1_ncs_tol,
                "ncs Q1");
    expect_near(runs.quintile(Regime::non_class_separable, 4).mean, T.q5_ncs, T.q5_ncs_tol,
                "ncs Q5");
    double mn = 1e9, mx = -1e9;
    for (int b = 0; b < 5; ++b) {
        const double q = runs.quintile(Regime::class_separable, b).mean;
        mn = std::min(mn, q);
        mx = std::max(mx, q);
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "class-sep quintile span %.3f exceeds %.2f", mx - mn,
                  T.flat_cs_span);
    expect(mx - mn <= T.flat_cs_span, buf);
    finish(3, "dispersion-quintile gains (5-seed means)");
}

void criterion4(const Runs& runs) {
    const auto& T = synthetic_targets();
    expect_near(runs.hit1(Regime::non_class_separable, "classwise", 10).mean, T.cw_only_ncs_k10,
                T.ablation_tol, "ncs cw-only k=10");
    expect_near(runs.hit1(Regime::non_class_separable, "pairwise", 10).mean, T.pw_only_ncs_k10,
                T.ablation_tol, "ncs pw-only k=10");
    expect_near(runs.hit1(Regime::non_class_separable, "repair", 10).mean, T.repair_ncs_k10,
                T.ablation_tol, "ncs repair k=10");
    const double cw = runs.hit1(Regime::class_separable, "classwise", 10).mean;
    const double rep = runs.hit1(Regime::class_separable, "repair", 10).mean;
    char buf[140];
    std::snprintf(buf, sizeof buf, "cs |classwise - repair| = %.3f exceeds %.2f",
                  std::abs(cw - rep), T.cs_identity_tol);
    expect(std::abs(cw - rep) <= T.cs_identity_tol, buf);
    for (const auto& sr : runs.by_regime.at(Regime::class_separable)) {
        std::snprintf(buf, sizeof buf,
                      "cs repair/classwise rank identically on only %.1f%% of covered examples",
                      sr.identity_fraction * 100.0);
        expect(sr.identity_fraction >= 0.99, buf);
    }
    finish(4, "component ablation at k=10");
}

void criterion5() {
    std::mt19937_64 rng(20240517);
    std::normal_distribution<double> gauss;
    std::vector<PreparedExample> data;
    for (int i = 0; i < 5; ++i) {
        std::vector<double> scores(8);
        for (auto& s : scores) s = gauss(rng);
        ScoreRecord rec{i, 0, {}, scores};
        auto ctx = build_shortlist(rec, 3, 8);
        PreparedExample ex;
        ex.shortlist = ctx.shortlist;
        ex.base_scores = ctx.base_scores;
        ex.true_position = static_cast<int>(rng() % 3);
        ex.d = 4;
        ex.phi.resize(12);
        for (auto& v : ex.phi) v = gauss(rng);
        data.push_back(std::move(ex));
    }
    double worst = 0.0;
    for (int point = 0; point < 20; ++point) {
        std::vector<double> a(8), theta(4);
        for (auto& v : a) v = 0.6 * gauss(rng);
        for (auto& v : theta) v = 0.6 * gauss(rng);
        const auto o = objective(a, theta, data, 0.01, 0.02);
        const auto fd = testing::fd_gradient(data, a, theta, 0.01, 0.02, 1e-5);
        worst = std::max(worst, testing::rel_error(o.grad, fd));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "worst relative error %.3g exceeds 1e-5", worst);
    expect(worst <= 1e-5, buf);
    finish(5, "analytic gradient vs central finite differences (20 points)");
}

void criterion6() {
    std::mt19937_64 rng(90210);
    std::normal_distribution<double> gauss;

    // single-pair instance, offsets only, then offsets + one pairwise weight
    for (int use_theta = 0; use_theta <= 1; ++use_theta) {
        std::vector<PreparedExample> data;
        for (int i = 0; i < 15; ++i) {
            PreparedExample ex;
            ex.shortlist = {0, 1};
            ex.base_scores = {gauss(rng), gauss(rng)};
            ex.true_position = static_cast<int>(rng() % 2);
            ex.d = use_theta;
            if (use_theta) ex.phi = {0.8 * gauss(rng), 0.8 * gauss(rng)};
            data.push_back(std::move(ex));
        }
        FitOptions opt;
        opt.tol = 1e-10;
        const auto r =
            fit(data, 2, 0.05, 0.05, opt, use_theta ? FitMode::full : FitMode::cw_only);
        const auto grid = testing::grid_search_pair_instance(data, 0.05, 0.05, use_theta != 0);
        char buf[140];
        std::snprintf(buf, sizeof buf, "K=2 d=%d |fit - grid| = %.3g exceeds 1e-6", use_theta,
                      std::abs(r.nll - grid.value));
        expect(std::abs(r.nll - grid.value) <= 1e-6, buf);
    }

    // K=4 with two disjoint pairs; the objective separates per pair, so the
    // grid optimum is the sum of the per-pair grid optima
    {
        std::vector<PreparedExample> data, pair_a, pair_b;
        for (int i = 0; i < 30; ++i) {
            PreparedExample ex;
            ex.shortlist = i % 2 == 0 ? std::vector<ClassId>{0, 1} : std::vector<ClassId>{2, 3};
            ex.base_scores = {gauss(rng), gauss(rng)};
            ex.true_position = static_cast<int>(rng() % 2);
            ex.d = 0;
            (i % 2 == 0 ? pair_a : pair_b).push_back(ex);
            data.push_back(std::move(ex));
        }
        FitOptions opt;
        opt.tol = 1e-10;
        const auto r = fit(data, 4, 0.05, 0.0, opt, FitMode::cw_only);
        const auto ga = testing::grid_search_pair_instance(pair_a, 0.05, 0.0, false);
        const auto gb = testing::grid_search_pair_instance(pair_b, 0.05, 0.0, false);
        char buf[140];
        std::snprintf(buf, sizeof buf, "K=4 |fit - grid| = %.3g exceeds 1e-6",
                      std::abs(r.nll - (ga.value + gb.value)));
        expect(std::abs(r.nll - (ga.value + gb.value)) <= 1e-6, buf);
    }
    finish(6, "fitted NLL vs dense grid search on tiny instances");
}

void criterion7() {
    SyntheticSpec spec = SyntheticSpec::defaults(Regime::class_separable, 0);
    spec.K = 50;  // every class populated, so all priors are positive
    const auto synth = generate(spec);
    const auto& stats = synth.calib.stats;
    for (std::int64_t c : stats.counts) expect(c > 0, "zero-count class breaks the tau grid");
    const auto ctxs = build_contexts(synth.test, 10);

    for (double tau : default_tau_grid()) {
        ModelParams p;
        p.a.resize(spec.K);
        for (int y = 0; y < spec.K; ++y) p.a[y] = -tau * std::log(stats.prior(y));
        p.theta.assign(4, 0.0);
        p.feature_layout = feature_layout(FeatureConfig{});
        p.transform = FeatureTransform::identity(4);
        const auto repair_scorer = model_scorer(p, stats, nullptr);
        const auto la_scorer = logit_adjust_scorer(stats, tau);
        std::int64_t mismatches = 0, covered = 0;
        for (const auto& ctx : ctxs) {
            if (!ctx.covered) continue;
            ++covered;
            const auto a = repair_scorer(ctx);
            const auto b = la_scorer(ctx);
            if (argmax_position(a, ctx.shortlist) != argmax_position(b, ctx.shortlist))
                ++mismatches;
        }
        char buf[140];
        std::snprintf(buf, sizeof buf, "tau=%.2f: %lld argmax mismatches over %lld covered", tau,
                      static_cast<long long>(mismatches), static_cast<long long>(covered));
        expect(mismatches == 0 && covered > 0, buf);
    }
    finish(7, "fixed-offset configuration reproduces the logit-adjusted argmax");
}

void criterion8() {
    // planted confuser pairs admit a witness whose orderings no offset
    // satisfies; the scan covers the whole generated dataset (both splits)
    for (std::uint64_t seed : default_seeds()) {
        const auto synth = generate(SyntheticSpec::defaults(Regime::non_class_separable, seed));
        auto ctxs = build_contexts(synth.calib, 10);
        const auto test_ctxs = build_contexts(synth.test, 10);
        ctxs.insert(ctxs.end(), test_ctxs.begin(), test_ctxs.end());
        int found = 0;
        for (const auto& [u, v] : synth.truth.confuser_pairs) {
            const auto w =
                contradictory_pair_witness(ctxs, u, v, posterior_preference(synth.truth, u, v));
            if (w && !offset_scan_satisfiable(w->t_u, w->t_v)) ++found;
        }
        char buf[120];
        std::snprintf(buf, sizeof buf, "seed %llu: no confirmed witness among planted pairs",
                      static_cast<unsigned long long>(seed));
        expect(found >= 1, buf);
    }

    // noiseless class-separable data: no witness over any co-occurring pair
    SyntheticSpec spec = SyntheticSpec::defaults(Regime::class_separable, 0);
    spec.noise_var = 0.0;
    const auto synth = generate(spec);
    const auto ctxs = build_contexts(synth.test, 10);
    struct Extremes {
        double max_pref_u = -1e300;
        double min_pref_v = 1e300;
    };
    std::map<std::pair<ClassId, ClassId>, Extremes> table;
    for (const auto& ctx : ctxs) {
        if (!ctx.covered) continue;
        const auto post = true_posterior(synth.truth, synth.truth.x_of(ctx.example_id));
        for (int i = 0; i < ctx.k(); ++i)
            for (int j = i + 1; j < ctx.k(); ++j) {
                ClassId u = ctx.shortlist[i], v = ctx.shortlist[j];
                double t = ctx.base_scores[j] - ctx.base_scores[i];
                if (u > v) {
                    std::swap(u, v);
                    t = -t;
                }
                auto& e = table[{u, v}];
                if (post[u] > post[v])
                    e.max_pref_u = std::max(e.max_pref_u, t);
                else if (post[v] > post[u])
                    e.min_pref_v = std::min(e.min_pref_v, t);
            }
    }
    int witnesses = 0;
    for (const auto& [pair, e] : table)
        if (e.max_pref_u > -1e300 && e.min_pref_v < 1e300 && e.max_pref_u >= e.min_pref_v)
            ++witnesses;
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d witness pairs on noiseless class-separable data",
                  witnesses);
    expect(witnesses == 0, buf);
    finish(8, "threshold-crossing witnesses and the offset scan");
}

void criterion9() {
    std::mt19937_64 rng(777);
    std::normal_distribution<double> gauss;

    // shortlist determinism and shift invariance
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> scores(40);
        for (auto& s : scores) s = gauss(rng);
        ScoreRecord r{trial, static_cast<ClassId>(rng() % 40), {}, scores};
        const auto a = build_shortlist(r, 8, 40);
        const auto b = build_shortlist(r, 8, 40);
        expect(a.shortlist == b.shortlist && a.base_scores == b.base_scores,
               "shortlist determinism");
        for (auto& s : r.scores) s += 3.25;
        expect(build_shortlist(r, 8, 40).shortlist == a.shortlist, "shortlist shift invariance");
    }

    // softmax normalization at 1e-12
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> s(9);
        for (auto& v : s) v = 50.0 * gauss(rng);
        const auto p = shortlist_softmax(s);
        double sum = 0.0;
        for (double v : p) sum += v;
        expect(std::abs(sum - 1.0) <= 1e-12, "softmax normalization");
    }

    // shrinkage convexity and monotonicity
    for (int trial = 0; trial < 50; ++trial) {
        const int K = 4 + static_cast<int>(rng() % 6);
        std::vector<double> a_hat(K);
        std::vector<std::int64_t> counts(K);
        for (int y = 0; y < K; ++y) {
            a_hat[y] = gauss(rng);
            counts[y] = rng() % 40;
        }
        const auto g = ShrinkageGroups::single(K);
        const auto est = estimate_variances(a_hat, counts, g);
        const auto out = shrink(a_hat, est, g);
        for (int y = 0; y < K; ++y) {
            expect(out[y] >= std::min(a_hat[y], est.mu[0]) - 1e-12 &&
                       out[y] <= std::max(a_hat[y], est.mu[0]) + 1e-12,
                   "shrinkage convexity");
        }
        auto est2 = est;
        est2.sigma2[0] = est.sigma2[0] / 4.0;
        const auto out2 = shrink(a_hat, est2, g);
        expect(std::abs(out2[0] - a_hat[0]) <= std::abs(out[0] - a_hat[0]) + 1e-12,
               "shrinkage monotonicity");
    }

    // metric bounds, coverage ceiling, rho equality on a real evaluation
    {
        const auto synth = generate(SyntheticSpec::defaults(Regime::class_separable, 1));
        const auto ctxs = build_contexts(synth.test, 10);
        const auto base = evaluate(ctxs, base_scorer(), synth.calib.stats);
        const auto la =
            evaluate(ctxs, logit_adjust_scorer(synth.calib.stats, 0.25), synth.calib.stats);
        for (const auto& rep : {base, la}) {
            expect(rep.hit1 >= 0 && rep.hit1 <= rep.hit3 && rep.hit3 <= 1.0, "hit bounds");
            expect(rep.hit1 <= rep.mrr && rep.mrr <= 1.0 && rep.mrr >= 0.1, "mrr bounds");
            expect(unconditional(rep) <= rep.recall_at_k + 1e-12, "coverage ceiling");
        }
        const double cond = rho_k(la, base);
        const double acc_m = la.hit1 * la.recall_at_k;
        const double acc_b = base.hit1 * base.recall_at_k;
        expect(std::abs(cond - (acc_m - acc_b) / (base.recall_at_k - acc_b)) <= 1e-12,
               "rho conditional/unconditional equality");
    }

    // feature antisymmetries
    {
        const auto stats = ClassStats::from_counts({9, 5, 4, 3, 2, 1});
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> scores(6);
            for (auto& s : scores) s = gauss(rng);
            ScoreRecord r{trial, 0, {}, scores};
            const auto ctx = build_shortlist(r, 4, 6);
            const ClassId y = ctx.shortlist[rng() % 4];
            ClassId j = ctx.shortlist[rng() % 4];
            if (j == y) j = ctx.shortlist[(ctx.position_of(y) + 1) % 4];
            expect(score_gap(ctx, y, j) == -score_gap(ctx, j, y), "score_gap antisymmetry");
            expect(rank_gap(ctx, y, j) == -rank_gap(ctx, j, y), "rank_gap antisymmetry");
            // log(a/b) and -log(b/a) may differ by an ulp
            expect(std::abs(log_freq_ratio(stats, y, j, 1.0) + log_freq_ratio(stats, j, y, 1.0)) <=
                       1e-12,
                   "log_freq_ratio antisymmetry");
            expect(log_prob_ratio(ctx, y, j) == -log_prob_ratio(ctx, j, y),
                   "log_prob_ratio antisymmetry");
        }
    }

    // bit-exact score file round-trip
    {
        SyntheticSpec spec = SyntheticSpec::defaults(Regime::non_class_separable, 4);
        spec.n_train = 200;
        spec.n_test = 50;
        const auto synth = generate(spec);
        const auto dir = std::filesystem::temp_directory_path();
        const auto p1 = dir / "acc_roundtrip_1.scores";
        const auto p2 = dir / "acc_roundtrip_2.scores";
        io::write_scores(p1, {spec.K, 1, true, synth.calib.records});
        io::write_scores(p2, io::read_scores(p1));
        std::ifstream f1(p1), f2(p2);
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        expect(s1.str() == s2.str(), "score file round-trip not byte-identical");
        std::filesystem::remove(p1);
        std::filesystem::remove(p2);
    }
    finish(9, "invariant suite");
}

void criterion10() {
    SyntheticSpec spec = SyntheticSpec::defaults(Regime::class_separable, 0);
    spec.noise_var = 0.0;
    const auto synth = generate(spec);
    const auto ctxs = build_contexts(synth.test, 10);
    const auto a = regress_oracle_offsets(synth, ctxs);
    std::int64_t mismatches = 0, covered = 0;
    for (const auto& ctx : ctxs) {
        if (!ctx.covered) continue;
        ++covered;
        const auto post = true_posterior(synth.truth, synth.truth.x_of(ctx.example_id));
        int best_bayes = 0, best_fixed = 0;
        for (int p = 1; p < ctx.k(); ++p) {
            if (post[ctx.shortlist[p]] > post[ctx.shortlist[best_bayes]]) best_bayes = p;
            if (ctx.base_scores[p] + a[ctx.shortlist[p]] >
                ctx.base_scores[best_fixed] + a[ctx.shortlist[best_fixed]])
                best_fixed = p;
        }
        if (best_fixed != best_bayes) ++mismatches;
    }
    char buf[140];
    std::snprintf(buf, sizeof buf, "%lld of %lld covered examples deviate from the Bayes ordering",
                  static_cast<long long>(mismatches), static_cast<long long>(covered));
    expect(covered > 0 && mismatches == 0, buf);
    finish(10, "regressed fixed offsets reproduce the Bayes ordering (noiseless)");
}

}  // namespace

int main() {
    std::printf("acceptance suite: synthetic-benchmark reproduction and oracles\n");
    std::printf("--------------------------------------------------------------\n");
    const Runs runs = run_everything();

    criterion1(runs);
    criterion2(runs);
    criterion3(runs);
    criterion4(runs);
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();

    std::printf("--------------------------------------------------------------\n");
    if (g_failures > 0) {
        const double ceiling = posterior_ceiling(Regime::non_class_separable, 0, 10);
        std::printf(
            "%d criteria failed. Note: the exact-posterior rule itself reaches only %.1f%%\n"
            "conditional Hit@1 on the non-class-separable data (seed 0, k=10); published\n"
            "reranker values above that level are unreachable for any method on this\n"
            "generator. The failing targets and the analysis are documented in README.md.\n",
            g_failures, ceiling);
    } else {
        std::printf("all criteria passed\n");
    }
    return g_failures;
}
