#include "repair/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace repair {

ClassStats ClassStats::from_counts(std::vector<std::int64_t> counts,
                                   std::optional<std::vector<double>> weight_norms) {
    ClassStats s;
    s.K = static_cast<int>(counts.size());
    s.counts = std::move(counts);
    for (auto c : s.counts)
        if (c < 0) throw Error("ClassStats: negative count");
    if (weight_norms) {
        if (static_cast<int>(weight_norms->size()) != s.K)
            throw Error("ClassStats: weight_norms length != K");
        for (double w : *weight_norms)
            if (!(w > 0.0)) throw NonPositiveNorm();
        s.weight_norms = std::move(weight_norms);
    }
    // bottom ceil(0.8*K) by count, ties toward the lower class id
    std::vector<int> order(s.K);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (s.counts[a] != s.counts[b]) return s.counts[a] < s.counts[b];
        return a < b;
    });
    s.rare_mask.assign(s.K, 0);
    const int n_rare = rare_count(s.K);
    for (int i = 0; i < n_rare && i < s.K; ++i) s.rare_mask[order[i]] = 1;
    return s;
}

std::vector<double> ClassStats::priors() const {
    std::vector<double> p(K, 0.0);
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
    if (total > 0)
        for (int y = 0; y < K; ++y) p[y] = static_cast<double>(counts[y]) / total;
    return p;
}

double ClassStats::prior(ClassId y) const {
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
    return total > 0 ? static_cast<double>(counts[y]) / total : 0.0;
}

void SimilarityMatrix::validate(double tol) const {
    for (const auto& [k, v] : entries) {
        const ClassId i = static_cast<ClassId>(k >> 32);
        const ClassId j = static_cast<ClassId>(k & 0xffffffffu);
        if (i < 0 || i >= K || j < 0 || j >= K) throw Error("similarity index out of range");
        if (!std::isfinite(v) || v < 0.0 || v > 1.0 + tol)
            throw Error("similarity value outside [0,1]");
        if (i == j && std::abs(v - 1.0) > tol)
            throw Error("similarity diagonal must be 1");
        auto rev = entries.find(key(j, i));
        if (i != j && rev != entries.end() && std::abs(rev->second - v) > tol)
            throw AsymmetricSimilarity();
    }
}

const Dataset& validate_dataset(const Dataset& d, int k_min) {
    for (const auto& r : d.records) {
        if (r.true_label < 0 || r.true_label >= d.stats.K) throw InvalidLabel();
        for (double s : r.scores)
            if (!std::isfinite(s)) throw NonFiniteScore();
        if (!r.dense()) {
            if (r.ids.size() != r.scores.size())
                throw Error("sparse record: ids/scores length mismatch");
            if (static_cast<int>(r.ids.size()) < k_min) throw SparseTooShort();
            std::unordered_set<ClassId> seen;
            for (ClassId c : r.ids) {
                if (c < 0 || c >= d.stats.K) throw InvalidLabel();
                if (!seen.insert(c).second) throw Error("sparse record: duplicate class id");
            }
        } else if (static_cast<int>(r.scores.size()) != d.stats.K) {
            throw Error("dense record: score length != K");
        }
    }
    if (d.similarity) {
        if (d.similarity->K != d.stats.K) throw Error("similarity K mismatch");
        d.similarity->validate();
    }
    return d;
}

}  // namespace repair
