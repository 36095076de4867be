#include "repair/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace repair {

double threshold(const ShortlistContext& ctx, ClassId u, ClassId v) {
    const int pu = ctx.position_of(u);
    const int pv = ctx.position_of(v);
    if (pu < 0 || pv < 0) throw NotInShortlist();
    return ctx.base_scores[pv] - ctx.base_scores[pu];
}

namespace {

struct Welford {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double pop_std() const { return n > 0 ? std::sqrt(m2 / n) : 0.0; }
};

}  // namespace

double dispersion(std::span<const ShortlistContext> contexts, ClassId y) {
    std::unordered_map<ClassId, Welford> rivals;
    int appearances = 0;
    for (const auto& ctx : contexts) {
        if (!ctx.covered) continue;
        const int py = ctx.position_of(y);
        if (py < 0) continue;
        ++appearances;
        for (int pj = 0; pj < ctx.k(); ++pj) {
            if (pj == py) continue;
            rivals[ctx.shortlist[pj]].add(ctx.base_scores[pj] - ctx.base_scores[py]);
        }
    }
    if (appearances < 2) throw InsufficientContexts();
    double best = -1.0;
    for (const auto& [j, w] : rivals)
        if (w.n >= 2) best = std::max(best, w.pop_std());
    if (best < 0.0) throw InsufficientContexts();
    return best;
}

std::vector<std::optional<double>> all_dispersions(std::span<const ShortlistContext> contexts,
                                                   int K) {
    std::vector<std::unordered_map<ClassId, Welford>> rivals(K);
    std::vector<int> appearances(K, 0);
    for (const auto& ctx : contexts) {
        if (!ctx.covered) continue;
        const int k = ctx.k();
        for (int py = 0; py < k; ++py) {
            const ClassId y = ctx.shortlist[py];
            ++appearances[y];
            auto& row = rivals[y];
            for (int pj = 0; pj < k; ++pj) {
                if (pj == py) continue;
                row[ctx.shortlist[pj]].add(ctx.base_scores[pj] - ctx.base_scores[py]);
            }
        }
    }
    std::vector<std::optional<double>> out(K);
    for (int y = 0; y < K; ++y) {
        if (appearances[y] < 2) continue;
        double best = -1.0;
        for (const auto& [j, w] : rivals[y])
            if (w.n >= 2) best = std::max(best, w.pop_std());
        if (best >= 0.0) out[y] = best;
    }
    return out;
}

QuintileGains quintile_gains(std::span<const ClassId> classes, std::span<const double> dispersions,
                             const std::map<ClassId, PerClassStat>& per_class_method,
                             const std::map<ClassId, PerClassStat>& per_class_classwise) {
    const int n = static_cast<int>(classes.size());
    if (n < 5) throw TooFewClasses();
    if (dispersions.size() != classes.size()) throw DimensionMismatch();

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (dispersions[a] != dispersions[b]) return dispersions[a] < dispersions[b];
        return classes[a] < classes[b];
    });

    // equal bins, remainder distributed to the lower bins
    const int base = n / 5, rem = n % 5;
    QuintileGains out;
    int cursor = 0;
    for (int b = 0; b < 5; ++b) {
        const int size = base + (b < rem ? 1 : 0);
        std::int64_t mh = 0, ch = 0, tot = 0;
        for (int i = 0; i < size; ++i, ++cursor) {
            const ClassId y = classes[order[cursor]];
            out.classes[b].push_back(y);
            const auto im = per_class_method.find(y);
            const auto ic = per_class_classwise.find(y);
            const std::int64_t t_m = im != per_class_method.end() ? im->second.total : 0;
            const std::int64_t t_c = ic != per_class_classwise.end() ? ic->second.total : 0;
            if (t_m != t_c) throw Error("quintile_gains: methods disagree on per-class totals");
            tot += t_m;
            if (im != per_class_method.end()) mh += im->second.hits;
            if (ic != per_class_classwise.end()) ch += ic->second.hits;
        }
        out.pooled_examples[b] = tot;
        out.delta_hit1[b] =
            tot > 0 ? (static_cast<double>(mh) - static_cast<double>(ch)) / tot : 0.0;
    }
    return out;
}

PreferenceFn posterior_preference(const GenerativeTruth& truth, ClassId u, ClassId v) {
    return [&truth, u, v](const ShortlistContext& ctx) {
        const auto post = true_posterior(truth, truth.x_of(ctx.example_id));
        if (post[u] == post[v]) return 0;
        return post[u] > post[v] ? 1 : -1;
    };
}

PreferenceFn label_preference(ClassId u, ClassId v) {
    return [u, v](const ShortlistContext& ctx) {
        if (ctx.true_label == u) return 1;
        if (ctx.true_label == v) return -1;
        return 0;
    };
}

std::optional<Witness> contradictory_pair_witness(std::span<const ShortlistContext> contexts,
                                                  ClassId u, ClassId v,
                                                  const PreferenceFn& prefers_u) {
    const ShortlistContext* best_u = nullptr;  // max threshold among prefer-u
    const ShortlistContext* best_v = nullptr;  // min threshold among prefer-v
    double t_u = 0.0, t_v = 0.0;
    for (const auto& ctx : contexts) {
        if (!ctx.covered) continue;
        if (ctx.position_of(u) < 0 || ctx.position_of(v) < 0) continue;
        const int pref = prefers_u(ctx);
        if (pref == 0) continue;
        const double t = threshold(ctx, u, v);
        if (pref > 0) {
            if (!best_u || t > t_u) {
                best_u = &ctx;
                t_u = t;
            }
        } else {
            if (!best_v || t < t_v) {
                best_v = &ctx;
                t_v = t;
            }
        }
    }
    if (best_u && best_v && t_u >= t_v) return Witness{best_u, best_v, t_u, t_v};
    return std::nullopt;
}

bool offset_scan_satisfiable(double t_u, double t_v, double lo, double hi, double step) {
    const std::int64_t n = static_cast<std::int64_t>(std::floor((hi - lo) / step)) + 1;
    for (std::int64_t i = 0; i < n; ++i) {
        const double e = lo + i * step;
        if (e > t_u && e < t_v) return true;
    }
    return false;
}

std::vector<double> oracle_residual(const SyntheticDataset& synth, const ShortlistContext& ctx) {
    const auto& truth = synth.truth;
    if (truth.inputs.empty() || ctx.example_id < 0 || ctx.example_id >= truth.n_examples())
        throw NoGenerativeTruth();
    const auto post = true_posterior(truth, truth.x_of(ctx.example_id));
    double alpha = 0.0;
    for (ClassId y : ctx.shortlist) alpha += post[y];
    std::vector<double> beta(ctx.k());
    for (int p = 0; p < ctx.k(); ++p)
        beta[p] = std::log(post[ctx.shortlist[p]]) - std::log(alpha) - ctx.base_scores[p];
    return beta;
}

std::vector<double> regress_oracle_offsets(const SyntheticDataset& synth,
                                           std::span<const ShortlistContext> contexts) {
    const int K = synth.truth.K;
    // normal equations of sum_{ctx} sum_{u<v in S} (gap_uv - (a_u - a_v))^2
    std::vector<double> A(static_cast<size_t>(K) * K, 0.0);
    std::vector<double> rhs(K, 0.0);
    for (const auto& ctx : contexts) {
        if (!ctx.covered) continue;
        const auto beta = oracle_residual(synth, ctx);
        const int k = ctx.k();
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) {
                const ClassId cu = ctx.shortlist[p], cv = ctx.shortlist[q];
                const double gap = beta[p] - beta[q];
                A[static_cast<size_t>(cu) * K + cu] += 1.0;
                A[static_cast<size_t>(cv) * K + cv] += 1.0;
                A[static_cast<size_t>(cu) * K + cv] -= 1.0;
                A[static_cast<size_t>(cv) * K + cu] -= 1.0;
                rhs[cu] += gap;
                rhs[cv] -= gap;
            }
    }
    // gauge: the Laplacian is singular along the all-ones direction; a tiny
    // ridge pins the mean near zero without disturbing differences
    for (int y = 0; y < K; ++y) A[static_cast<size_t>(y) * K + y] += 1e-9;

    // Cholesky solve (K is desk-scale)
    std::vector<double> L(static_cast<size_t>(K) * K, 0.0);
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = A[static_cast<size_t>(i) * K + j];
            for (int t = 0; t < j; ++t)
                s -= L[static_cast<size_t>(i) * K + t] * L[static_cast<size_t>(j) * K + t];
            if (i == j) {
                if (s <= 0.0) throw Error("offset regression: non-PD system");
                L[static_cast<size_t>(i) * K + i] = std::sqrt(s);
            } else {
                L[static_cast<size_t>(i) * K + j] = s / L[static_cast<size_t>(j) * K + j];
            }
        }
    }
    std::vector<double> y(K), a(K);
    for (int i = 0; i < K; ++i) {
        double s = rhs[i];
        for (int t = 0; t < i; ++t) s -= L[static_cast<size_t>(i) * K + t] * y[t];
        y[i] = s / L[static_cast<size_t>(i) * K + i];
    }
    for (int i = K - 1; i >= 0; --i) {
        double s = y[i];
        for (int t = i + 1; t < K; ++t) s -= L[static_cast<size_t>(t) * K + i] * a[t];
        a[i] = s / L[static_cast<size_t>(i) * K + i];
    }
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / K;
    for (double& v : a) v -= mean;
    return a;
}

}  // namespace repair
