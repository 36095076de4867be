#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "repair/types.hpp"

namespace repair {

// Deterministic uniform/normal source. Gaussians are Box-Muller over
// mt19937_64 (two uniforms per draw, no caching) so that streams do not
// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        gen_.seed(seq);
    }
    // [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double normal();
    // index into cdf (non-decreasing, back() == 1)
    int categorical(const std::vector<double>& cdf);
    // uniform int in [0, n)
    int below(int n) { return std::min(static_cast<int>(uniform() * n), n - 1); }

private:
    std::mt19937_64 gen_;
};

enum class Regime { class_separable, non_class_separable };

// Generative configuration; any dataset is regenerated bit-for-bit from it.
struct SyntheticSpec {
    int K = 100;
    int dim = 10;
    int n_train = 5000;
    int n_test = 2000;
    int n_calib = -1;  // -1: the training pool doubles as calibration
    double mean_scale = 0.52;
    double noise_var = 0.12;
    double bias_tau = 1.0;
    double corruption_c = 0.6;
    int n_confusers = 0;
    double delta = 3.0;
    std::uint64_t seed = 0;
    Regime regime = Regime::class_separable;

    static SyntheticSpec defaults(Regime r, std::uint64_t seed = 0);
    void validate() const;
    int calib_size() const { return n_calib < 0 ? n_train : n_calib; }
};

// The confuser pair trigger always uses the unperturbed top-10 shortlist,
// independent of the evaluation shortlist size.
inline constexpr int kPerturbTriggerK = 10;

struct ConfuserPerturbation {
    int pair_index = 0;
    std::int8_t sign = 0;  // g_u += sign*delta, g_v -= sign*delta
};

// Everything needed to evaluate exact-posterior oracles on generated data.
struct GenerativeTruth {
    int K = 0;
    int dim = 0;
    std::vector<double> means;   // K x dim row-major
    std::vector<double> prior;   // length K
    std::vector<std::pair<ClassId, ClassId>> confuser_pairs;  // (tail u, head v)
    std::vector<double> inputs;  // n_total x dim by example id
    std::vector<std::vector<ConfuserPerturbation>> perturbations;  // by example id

    const double* mean_of(ClassId y) const { return means.data() + static_cast<size_t>(y) * dim; }
    const double* x_of(std::int64_t example_id) const {
        return inputs.data() + static_cast<size_t>(example_id) * dim;
    }
    std::int64_t n_examples() const { return static_cast<std::int64_t>(inputs.size()) / dim; }
};

struct SyntheticDataset {
    SyntheticSpec spec;
    Dataset calib;
    Dataset test;
    GenerativeTruth truth;
};

// Appendix-style benchmark generator. RNG is split into substreams
// (means / confuser pairs / examples / signs) so that both regimes share
// geometry and example stream at equal seed, and delta = 0 reproduces the
// class-separable dataset byte-for-byte.
SyntheticDataset generate(const SyntheticSpec& spec);

// Exact mixture posterior softmax_y(log pi_y - ||x - mu_y||^2 / 2).
std::vector<double> true_posterior(const GenerativeTruth& truth, const double* x);

// P(C | X = x) for the given shortlist: sum of the posterior over it.
double coverage_alpha(const GenerativeTruth& truth, const double* x,
                      std::span<const ClassId> shortlist);

}  // namespace repair
