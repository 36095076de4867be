#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "repair/synthgen.hpp"
#include "repair/types.hpp"

namespace repair::io {

inline constexpr int kModelSchemaVersion = 1;

// Score file: UTF-8 text, header `K=<int> N=<int> format=<dense|sparse> k_min=<int>`,
// dense rows `example_id,label,s_0,...,s_{K-1}`,
// sparse rows `example_id,label,c1:s1,c2:s2,...`.
struct ScoreFile {
    int K = 0;
    int k_min = 1;
    bool dense = true;
    std::vector<ScoreRecord> records;
};

ScoreFile read_scores(const std::filesystem::path& path);
void write_scores(const std::filesystem::path& path, const ScoreFile& file);

// Class stats: lines `class_id,count[,weight_norm]`, order-independent.
// K defaults to max id + 1 unless forced larger by the caller.
ClassStats read_class_stats(const std::filesystem::path& path, int K = -1);
void write_class_stats(const std::filesystem::path& path, const ClassStats& stats);

// Similarity: lines `i,j,value` with i < j; symmetric closure on load.
SimilarityMatrix read_similarity(const std::filesystem::path& path, int K);
void write_similarity(const std::filesystem::path& path, const SimilarityMatrix& sim);

void write_model(const ModelParams& params, const std::filesystem::path& path);
ModelParams read_model(const std::filesystem::path& path);

// Report JSON with stable key order; provenance (effective configuration)
// is echoed under "config" when non-empty.
void write_report(const EvalReport& report, const std::filesystem::path& path,
                  const std::string& config_echo = {});
std::string report_json(const EvalReport& report, const std::string& config_echo = {});
// Aligned-column single-row table; header + one line per call site.
std::string report_table_header();
std::string report_table_row(const std::string& method, const EvalReport& report);

// Oracle sidecar for generated datasets (means, prior, confuser pairs,
// inputs, applied perturbations, spec echo).
void write_sidecar(const SyntheticDataset& synth, const std::filesystem::path& path);
SyntheticDataset read_sidecar(const std::filesystem::path& path);

// Canonical shortest round-trip decimal for doubles.
std::string format_double(double v);

// FNV-1a over the serialized records; used as the model's dataset fingerprint.
std::string dataset_fingerprint(const Dataset& d);

}  // namespace repair::io
