#include <doctest.h>

#include <cmath>
#include <random>

#include "repair/baselines.hpp"
#include "repair/shortlist.hpp"
#include "repair/synthgen.hpp"

using namespace repair;

namespace {

ShortlistContext make_ctx(std::vector<ClassId> ids, std::vector<double> scores, ClassId truth) {
    ShortlistContext ctx;
    ctx.true_label = truth;
    ctx.shortlist = std::move(ids);
    ctx.base_scores = std::move(scores);
    ctx.covered = ctx.true_position() >= 0;
    return ctx;
}

}  // namespace

TEST_CASE("logit_adjust") {
    const auto stats = ClassStats::from_counts({2, 1, 1});
    const auto ctx = make_ctx({0, 1, 2}, {0.0, 0.0, 0.0}, 0);
    SUBCASE("tau 0 is the identity") {
        CHECK(logit_adjust(ctx, stats, 0.0) == ctx.base_scores);
    }
    SUBCASE("analytic logs at tau 1") {
        const auto adj = logit_adjust(ctx, stats, 1.0);
        CHECK(adj[0] == doctest::Approx(std::log(2.0)).epsilon(1e-4));      // -log 0.5
        CHECK(adj[1] == doctest::Approx(std::log(4.0)).epsilon(1e-4));      // -log 0.25
        CHECK(adj[2] == doctest::Approx(1.3863).epsilon(1e-3));
    }
    SUBCASE("zero priors are rejected") {
        const auto zero = ClassStats::from_counts({2, 0, 1});
        CHECK_THROWS_AS(logit_adjust(ctx, zero, 0.5), ZeroPrior);
    }
    SUBCASE("equal priors keep relative scores") {
        const auto eq = ClassStats::from_counts({5, 5, 5});
        const auto ctx2 = make_ctx({0, 1, 2}, {3.0, 2.0, 1.0}, 0);
        const auto adj = logit_adjust(ctx2, eq, 0.75);
        for (int i = 0; i + 1 < 3; ++i)
            CHECK(adj[i] - adj[i + 1] ==
                  doctest::Approx(ctx2.base_scores[i] - ctx2.base_scores[i + 1]).epsilon(1e-12));
    }
}

TEST_CASE("tau_norm") {
    auto stats = ClassStats::from_counts({5, 5}, std::vector<double>{2.0, 1.0});
    const auto ctx = make_ctx({0, 1}, {4.0, 3.0}, 0);
    CHECK(tau_norm(ctx, stats, 0.0) == ctx.base_scores);
    const auto scaled = tau_norm(ctx, stats, 1.0);
    CHECK(scaled[0] == 2.0);
    CHECK(scaled[1] == 3.0);  // rank flip

    const auto no_norms = ClassStats::from_counts({5, 5});
    CHECK_THROWS_AS(tau_norm(ctx, no_norms, 1.0), MissingWeightNorms);

    // uniform norms never change the ranking
    auto uniform = ClassStats::from_counts({5, 5, 5}, std::vector<double>{1.7, 1.7, 1.7});
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> s = {gauss(rng), gauss(rng), gauss(rng)};
        const auto c = make_ctx({0, 1, 2}, s, 0);
        for (double tau : {0.25, 1.0, 2.0}) {
            const auto out = tau_norm(c, uniform, tau);
            CHECK(argmax_position(out, c.shortlist) == argmax_position(s, c.shortlist));
        }
    }
}

TEST_CASE("tune_tau") {
    SUBCASE("a one-element grid returns that element") {
        const auto stats = ClassStats::from_counts({4, 4});
        std::vector<ShortlistContext> ctxs = {make_ctx({0, 1}, {1.0, 0.0}, 0)};
        const std::vector<double> grid = {0.75};
        CHECK(tune_tau(ctxs, stats, TauMethod::logit_adjust, grid) == 0.75);
    }
    SUBCASE("empty grids are rejected") {
        const auto stats = ClassStats::from_counts({4, 4});
        std::vector<ShortlistContext> ctxs = {make_ctx({0, 1}, {1.0, 0.0}, 0)};
        CHECK_THROWS_AS(tune_tau(ctxs, stats, TauMethod::logit_adjust, std::vector<double>{}),
                        EmptyGrid);
    }
    SUBCASE("unbiased synthetic scores select tau = 0") {
        SyntheticSpec spec = SyntheticSpec::defaults(Regime::class_separable, 3);
        spec.K = 30;  // small enough that every class shows up in the calibration pool
        spec.corruption_c = 0.0;
        spec.n_train = 1500;
        spec.n_test = 0;
        const auto synth = generate(spec);
        const auto ctxs = build_contexts(synth.calib, 10);
        CHECK(tune_tau(ctxs, synth.calib.stats, TauMethod::logit_adjust, default_tau_grid()) ==
              0.0);
    }
    SUBCASE("rare-suppressing bias selects a strictly positive tau") {
        // negative corruption scales the bias to +c|.|log pi, pushing rare
        // classes down; the adjustment that undoes it is tau = |c|
        SyntheticSpec spec = SyntheticSpec::defaults(Regime::class_separable, 3);
        spec.K = 30;
        spec.corruption_c = -0.5;
        spec.n_train = 1500;
        spec.n_test = 0;
        const auto synth = generate(spec);
        const auto ctxs = build_contexts(synth.calib, 10);
        CHECK(tune_tau(ctxs, synth.calib.stats, TauMethod::logit_adjust, default_tau_grid()) >
              0.0);
    }
}

TEST_CASE("pw-only ablation with all-zero features cannot change the ranking") {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> gauss;
    std::vector<PreparedExample> data;
    for (int i = 0; i < 12; ++i) {
        PreparedExample ex;
        ex.shortlist = {0, 1, 2};
        ex.base_scores = {gauss(rng), gauss(rng), gauss(rng)};
        std::sort(ex.base_scores.rbegin(), ex.base_scores.rend());
        ex.true_position = static_cast<int>(rng() % 3);
        ex.d = 4;
        ex.phi.assign(12, 0.0);
        data.push_back(ex);
    }
    const auto r = ablation_fit(data, 3, FitMode::pw_only, 0.001, 0.001);
    for (double v : r.params.a) CHECK(v == 0.0);
    ModelParams p = r.params;
    for (const auto& ex : data) {
        const auto scores = rerank_scores(ex, p);
        CHECK(argmax_position(scores, ex.shortlist) ==
              argmax_position(ex.base_scores, ex.shortlist));
    }
}

TEST_CASE("cw-only ablation pins theta to zero exactly") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss;
    std::vector<PreparedExample> data;
    for (int i = 0; i < 10; ++i) {
        PreparedExample ex;
        ex.shortlist = {0, 1};
        ex.base_scores = {gauss(rng), gauss(rng)};
        ex.true_position = static_cast<int>(rng() % 2);
        ex.d = 4;
        ex.phi.resize(8);
        for (auto& v : ex.phi) v = gauss(rng);
        data.push_back(ex);
    }
    const auto r = ablation_fit(data, 2, FitMode::cw_only, 0.01, 0.01);
    for (double v : r.params.theta) CHECK(v == 0.0);
}
