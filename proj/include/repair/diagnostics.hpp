#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "repair/synthgen.hpp"
#include "repair/types.hpp"

namespace repair {

// Base-score threshold t(x; u, v) = g_v - g_u; the margin a fixed offset
// difference a_u - a_v must exceed to rank u above v.
double threshold(const ShortlistContext& ctx, ClassId u, ClassId v);

// Max over co-occurring rivals of the population std of t(x; y, j) across
// the covered contexts containing both. Rivals need >= 2 co-occurrences.
double dispersion(std::span<const ShortlistContext> contexts, ClassId y);

// Dispersion for every class at once; nullopt where undefined.
std::vector<std::optional<double>> all_dispersions(std::span<const ShortlistContext> contexts,
                                                   int K);

// Classes sorted ascending by dispersion into five bins (remainder classes
// go to the lower bins); per-bin delta Hit@1 of the method over classwise,
// pooled over the bin's covered examples.
struct QuintileGains {
    std::array<double, 5> delta_hit1;
    std::array<std::int64_t, 5> pooled_examples;
    std::array<std::vector<ClassId>, 5> classes;
};
QuintileGains quintile_gains(std::span<const ClassId> classes, std::span<const double> dispersions,
                             const std::map<ClassId, PerClassStat>& per_class_method,
                             const std::map<ClassId, PerClassStat>& per_class_classwise);

// Ground-truth preference for the pair in a context: +1 prefers u, -1
// prefers v, 0 abstains.
using PreferenceFn = std::function<int(const ShortlistContext&)>;

// Exact-posterior preference for synthetic data.
PreferenceFn posterior_preference(const GenerativeTruth& truth, ClassId u, ClassId v);
// Label preference for real data; contexts whose truth is neither class abstain.
PreferenceFn label_preference(ClassId u, ClassId v);

struct Witness {
    const ShortlistContext* prefer_u = nullptr;  // wants u above v, threshold t_u
    const ShortlistContext* prefer_v = nullptr;  // wants v above u, threshold t_v
    double t_u = 0.0;
    double t_v = 0.0;  // witness condition: t_u >= t_v
};

// Scans covered contexts containing both labels for a Theorem-1-style
// contradictory pair: a prefer-u context whose threshold is >= some
// prefer-v context's threshold. Returns the most extreme such pair.
std::optional<Witness> contradictory_pair_witness(std::span<const ShortlistContext> contexts,
                                                  ClassId u, ClassId v,
                                                  const PreferenceFn& prefers_u);

// Exhaustive grid scan for an offset difference e = a_u - a_v satisfying
// both orderings (e > t_u and e < t_v); the constructive Theorem-1 check
// expects none for a witness pair.
bool offset_scan_satisfiable(double t_u, double t_v, double lo = -50.0, double hi = 50.0,
                             double step = 1e-3);

// Residual correction beta*_y = log p_S(y|x) - g_y per shortlisted class,
// from the exact generative posterior. Throws NoGenerativeTruth when the
// context's example is not part of the generated data.
std::vector<double> oracle_residual(const SyntheticDataset& synth, const ShortlistContext& ctx);

// Least-squares fixed offsets from oracle pairwise gaps regressed on class
// indicators over covered contexts (sum-zero gauge).
std::vector<double> regress_oracle_offsets(const SyntheticDataset& synth,
                                           std::span<const ShortlistContext> contexts);

}  // namespace repair
