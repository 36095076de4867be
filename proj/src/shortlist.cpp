#include "repair/shortlist.hpp"

#include <algorithm>
#include <numeric>

namespace repair {

ShortlistContext build_shortlist(const ScoreRecord& r, int k, int K) {
    const int scored = r.scored_classes(K);
    if (k > scored) throw ShortlistTooLarge();
    if (k < 1) throw Error("build_shortlist: k must be positive");

    // candidate order: (score desc, id asc)
    std::vector<int> order(scored);
    std::iota(order.begin(), order.end(), 0);
    auto class_of = [&](int idx) { return r.dense() ? static_cast<ClassId>(idx) : r.ids[idx]; };
    auto better = [&](int a, int b) {
        if (r.scores[a] != r.scores[b]) return r.scores[a] > r.scores[b];
        return class_of(a) < class_of(b);
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), better);

    ShortlistContext ctx;
    ctx.example_id = r.example_id;
    ctx.true_label = r.true_label;
    ctx.shortlist.reserve(k);
    ctx.base_scores.reserve(k);
    for (int i = 0; i < k; ++i) {
        ctx.shortlist.push_back(class_of(order[i]));
        ctx.base_scores.push_back(r.scores[order[i]]);
    }
    ctx.covered = ctx.position_of(r.true_label) >= 0;
    return ctx;
}

std::vector<ShortlistContext> build_contexts(const Dataset& d, int k) {
    std::vector<ShortlistContext> out;
    out.reserve(d.records.size());
    for (const auto& r : d.records) out.push_back(build_shortlist(r, k, d.stats.K));
    return out;
}

double coverage(std::span<const ShortlistContext> contexts) {
    if (contexts.empty()) throw EmptyInput();
    std::int64_t n = 0;
    for (const auto& c : contexts) n += c.covered ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(contexts.size());
}

std::vector<ShortlistContext> covered_subset(std::span<const ShortlistContext> contexts) {
    std::vector<ShortlistContext> out;
    for (const auto& c : contexts)
        if (c.covered) out.push_back(c);
    return out;
}

std::vector<ShortlistContext> covered_subset(const Dataset& d, int k) {
    auto all = build_contexts(d, k);
    return covered_subset(std::span<const ShortlistContext>(all));
}

}  // namespace repair
