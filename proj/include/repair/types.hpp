#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "repair/errors.hpp"

namespace repair {

using ClassId = std::int32_t;

inline double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// Per-class training statistics. rare_mask marks the bottom ceil(0.8*K)
// classes by count, ties broken by ascending class id.
struct ClassStats {
    int K = 0;
    std::vector<std::int64_t> counts;
    std::optional<std::vector<double>> weight_norms;
    std::vector<std::uint8_t> rare_mask;

    static int rare_count(int K) { return static_cast<int>((4LL * K + 4) / 5); }
    static ClassStats from_counts(std::vector<std::int64_t> counts,
                                  std::optional<std::vector<double>> weight_norms = std::nullopt);

    std::vector<double> priors() const;
    double prior(ClassId y) const;
    bool is_rare(ClassId y) const { return rare_mask[static_cast<size_t>(y)] != 0; }
};

// One example's base-model scores. Dense when ids is empty (scores has
// length K); sparse otherwise (ids[i] scored scores[i]).
struct ScoreRecord {
    std::int64_t example_id = 0;
    ClassId true_label = 0;
    std::vector<ClassId> ids;
    std::vector<double> scores;

    bool dense() const { return ids.empty(); }
    int scored_classes(int K) const { return dense() ? K : static_cast<int>(ids.size()); }
};

// Sparse symmetric class-pair similarity in [0,1]; missing entries read as 0,
// the diagonal as 1. Entries are stored as given so validation can catch
// asymmetric input.
struct SimilarityMatrix {
    int K = 0;
    std::unordered_map<std::uint64_t, double> entries;

    static std::uint64_t key(ClassId i, ClassId j) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
               static_cast<std::uint32_t>(j);
    }
    void insert(ClassId i, ClassId j, double v) { entries[key(i, j)] = v; }
    double at(ClassId i, ClassId j) const {
        if (i == j) return 1.0;
        auto it = entries.find(key(i, j));
        if (it != entries.end()) return it->second;
        it = entries.find(key(j, i));
        if (it != entries.end()) return it->second;
        return 0.0;
    }
    void validate(double tol = 1e-12) const;
};

enum class DatasetRole { calibration, test };

struct Dataset {
    std::vector<ScoreRecord> records;
    ClassStats stats;
    std::optional<SimilarityMatrix> similarity;
    DatasetRole role = DatasetRole::calibration;
};

// Throws if any type invariant is violated; returns its argument otherwise.
// k_min is the smallest shortlist size sparse records must support.
const Dataset& validate_dataset(const Dataset& d, int k_min = 1);

// An example reduced to its ordered top-k shortlist (descending base score,
// ties by ascending class id).
struct ShortlistContext {
    std::int64_t example_id = 0;
    ClassId true_label = 0;
    std::vector<ClassId> shortlist;
    std::vector<double> base_scores;
    bool covered = false;

    int k() const { return static_cast<int>(shortlist.size()); }
    // -1 when absent
    int position_of(ClassId y) const {
        for (size_t i = 0; i < shortlist.size(); ++i)
            if (shortlist[i] == y) return static_cast<int>(i);
        return -1;
    }
    int true_position() const { return position_of(true_label); }
};

struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> layout;
    int d() const { return static_cast<int>(values.size()); }
};

// Affine per-dimension feature standardization, estimated on calibration
// pairs and stored with the fitted model.
struct FeatureTransform {
    std::vector<double> mean;
    std::vector<double> stdev;

    static FeatureTransform identity(int d) {
        return {std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
    }
    int d() const { return static_cast<int>(mean.size()); }
    double apply(int dim, double v) const { return (v - mean[dim]) / stdev[dim]; }
};

struct ModelParams {
    std::vector<double> a;       // classwise offsets, length K
    std::vector<double> theta;   // pairwise weights, length d
    double lambda_a = 0.0;
    double lambda_theta = 0.0;
    std::vector<std::string> feature_layout;
    FeatureTransform transform;
    std::string fitted_on;

    int K() const { return static_cast<int>(a.size()); }
    int d() const { return static_cast<int>(theta.size()); }
};

struct PerClassStat {
    std::int64_t hits = 0;
    std::int64_t total = 0;
    double mean_dispersion = nan_value();
};

// Coverage-conditioned evaluation for one (method, dataset) pair. Fields
// that can be undefined (no rare covered examples, no base errors, base
// saturated) hold NaN and serialize as null / "—".
struct EvalReport {
    double hit1 = 0.0;
    double hit3 = 0.0;
    double mrr = 0.0;
    double rare_hit1 = nan_value();
    double freq_hit1 = nan_value();
    double hfr = nan_value();
    double recall_at_k = 0.0;
    double rho_k = nan_value();
    std::int64_t n_covered = 0;
    std::int64_t n_base_errors = 0;
    std::map<ClassId, PerClassStat> per_class;
};

}  // namespace repair
