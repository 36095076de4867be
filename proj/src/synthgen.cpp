#include "repair/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "repair/shortlist.hpp"

namespace repair {

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::categorical(const std::vector<double>& cdf) {
    const double u = uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min(static_cast<int>(it - cdf.begin()), static_cast<int>(cdf.size()) - 1);
}

SyntheticSpec SyntheticSpec::defaults(Regime r, std::uint64_t seed) {
    SyntheticSpec s;
    s.regime = r;
    s.seed = seed;
    if (r == Regime::non_class_separable) {
        s.n_confusers = 15;
        s.delta = 3.0;
        s.corruption_c = 0.1;
    } else {
        s.n_confusers = 0;
        s.corruption_c = 0.6;
    }
    return s;
}

void SyntheticSpec::validate() const {
    if (K < 2 || dim < 1 || n_train < 1 || n_test < 0) throw InvalidSpec();
    if (mean_scale <= 0.0 || noise_var < 0.0) throw InvalidSpec();
    if (regime == Regime::class_separable && n_confusers != 0) throw InvalidSpec();
    if (n_confusers < 0 || n_confusers > K / 5 || delta < 0.0) throw InvalidSpec();
    if (n_calib > n_train) throw InvalidSpec();
}

namespace {

// RNG substream salts
enum : std::uint64_t { kStreamMeans = 1, kStreamPairs = 2, kStreamExamples = 3, kStreamSigns = 4 };

std::vector<int> unperturbed_topk(const std::vector<double>& g, int k) {
    std::vector<int> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        if (g[a] != g[b]) return g[a] > g[b];
        return a < b;
    });
    order.resize(k);
    return order;
}

}  // namespace

std::vector<double> true_posterior(const GenerativeTruth& truth, const double* x) {
    std::vector<double> lp(truth.K);
    double mx = -std::numeric_limits<double>::infinity();
    for (int y = 0; y < truth.K; ++y) {
        const double* mu = truth.mean_of(y);
        double d2 = 0.0;
        for (int t = 0; t < truth.dim; ++t) {
            const double diff = x[t] - mu[t];
            d2 += diff * diff;
        }
        lp[y] = std::log(truth.prior[y]) - 0.5 * d2;
        mx = std::max(mx, lp[y]);
    }
    double z = 0.0;
    for (int y = 0; y < truth.K; ++y) {
        lp[y] = std::exp(lp[y] - mx);
        z += lp[y];
    }
    for (double& v : lp) v /= z;
    return lp;
}

double coverage_alpha(const GenerativeTruth& truth, const double* x,
                      std::span<const ClassId> shortlist) {
    const auto post = true_posterior(truth, x);
    double a = 0.0;
    for (ClassId y : shortlist) a += post[y];
    return a;
}

SyntheticDataset generate(const SyntheticSpec& spec) {
    spec.validate();
    const int K = spec.K, dim = spec.dim;
    const int n_calib = spec.calib_size();
    const int n_total = n_calib + spec.n_test;

    SyntheticDataset out;
    out.spec = spec;
    auto& truth = out.truth;
    truth.K = K;
    truth.dim = dim;

    // Zipf prior pi_y proportional to 1/(y+1)
    truth.prior.resize(K);
    double zsum = 0.0;
    for (int y = 0; y < K; ++y) zsum += 1.0 / (y + 1);
    for (int y = 0; y < K; ++y) truth.prior[y] = 1.0 / ((y + 1) * zsum);
    std::vector<double> cdf(K);
    double acc = 0.0;
    for (int y = 0; y < K; ++y) {
        acc += truth.prior[y];
        cdf[y] = acc;
    }
    cdf[K - 1] = 1.0;

    // class means
    {
        Rng rng(spec.seed, kStreamMeans);
        const double scale = std::sqrt(spec.mean_scale);
        truth.means.resize(static_cast<size_t>(K) * dim);
        for (double& m : truth.means) m = scale * rng.normal();
    }

    // confuser pairs: u without replacement from the bottom half by prior,
    // v from the top fifth
    if (spec.n_confusers > 0) {
        Rng rng(spec.seed, kStreamPairs);
        std::vector<ClassId> tail_pool, head_pool;
        for (int y = K / 2; y < K; ++y) tail_pool.push_back(y);
        for (int y = 0; y < (K + 4) / 5; ++y) head_pool.push_back(y);
        for (int i = 0; i < spec.n_confusers; ++i) {
            const int iu = rng.below(static_cast<int>(tail_pool.size()));
            const ClassId u = tail_pool[iu];
            tail_pool.erase(tail_pool.begin() + iu);
            const int iv = rng.below(static_cast<int>(head_pool.size()));
            const ClassId v = head_pool[iv];
            head_pool.erase(head_pool.begin() + iv);
            truth.confuser_pairs.emplace_back(u, v);
        }
    }

    std::vector<double> bias(K);
    for (int y = 0; y < K; ++y)
        bias[y] = -spec.bias_tau * std::log(truth.prior[y]) * spec.corruption_c;

    Rng ex_rng(spec.seed, kStreamExamples);
    Rng sign_rng(spec.seed, kStreamSigns);
    const double noise_std = std::sqrt(spec.noise_var);

    truth.inputs.resize(static_cast<size_t>(n_total) * dim);
    truth.perturbations.assign(n_total, {});
    std::vector<std::int64_t> calib_counts(K, 0);

    auto make_record = [&](std::int64_t id) {
        ScoreRecord rec;
        rec.example_id = id;
        const ClassId label = ex_rng.categorical(cdf);
        rec.true_label = label;
        double* x = truth.inputs.data() + static_cast<size_t>(id) * dim;
        const double* mu = truth.mean_of(label);
        for (int t = 0; t < dim; ++t) x[t] = mu[t] + ex_rng.normal();

        // exact log posterior (unnormalized log-joint, normalized below)
        std::vector<double> g(K);
        double mx = -std::numeric_limits<double>::infinity();
        for (int y = 0; y < K; ++y) {
            const double* my = truth.mean_of(y);
            double d2 = 0.0;
            for (int t = 0; t < dim; ++t) {
                const double diff = x[t] - my[t];
                d2 += diff * diff;
            }
            g[y] = std::log(truth.prior[y]) - 0.5 * d2;
            mx = std::max(mx, g[y]);
        }
        double z = 0.0;
        for (int y = 0; y < K; ++y) z += std::exp(g[y] - mx);
        const double lse = mx + std::log(z);
        for (int y = 0; y < K; ++y) g[y] += bias[y] - lse;
        for (int y = 0; y < K; ++y) g[y] += noise_std * ex_rng.normal();

        if (spec.regime == Regime::non_class_separable && !truth.confuser_pairs.empty()) {
            const int trig_k = std::min(kPerturbTriggerK, K);
            const auto top = unperturbed_topk(g, trig_k);
            for (size_t pi = 0; pi < truth.confuser_pairs.size(); ++pi) {
                const auto [u, v] = truth.confuser_pairs[pi];
                const bool has_u = std::find(top.begin(), top.end(), u) != top.end();
                const bool has_v = std::find(top.begin(), top.end(), v) != top.end();
                if (!has_u || !has_v) continue;
                const std::int8_t s = sign_rng.uniform() < 0.5 ? std::int8_t{1} : std::int8_t{-1};
                if (spec.delta != 0.0) {
                    g[u] += s * spec.delta;
                    g[v] -= s * spec.delta;
                }
                truth.perturbations[id].push_back({static_cast<int>(pi), s});
            }
        }
        rec.scores = std::move(g);
        return rec;
    };

    std::vector<ScoreRecord> calib_records, test_records;
    calib_records.reserve(n_calib);
    test_records.reserve(spec.n_test);
    for (int i = 0; i < n_calib; ++i) {
        calib_records.push_back(make_record(i));
        ++calib_counts[calib_records.back().true_label];
    }
    for (int i = 0; i < spec.n_test; ++i) test_records.push_back(make_record(n_calib + i));

    const ClassStats stats = ClassStats::from_counts(calib_counts);
    out.calib = Dataset{std::move(calib_records), stats, std::nullopt, DatasetRole::calibration};
    out.test = Dataset{std::move(test_records), stats, std::nullopt, DatasetRole::test};
    return out;
}

}  // namespace repair
