#include "repair/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace repair::io {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line, const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view tok, const std::filesystem::path& path, int line) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        parse_fail(path, line, "bad number '" + std::string(tok) + "'");
    return v;
}

std::int64_t parse_int(std::string_view tok, const std::filesystem::path& path, int line) {
    std::int64_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        parse_fail(path, line, "bad integer '" + std::string(tok) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

ordered_json json_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ScoreFile read_scores(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw HeaderMismatch(path.string() + ": empty file");
    ScoreFile file;
    {
        std::istringstream hs(line);
        std::string tok;
        int seen = 0;
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw HeaderMismatch(path.string() + ": bad header token " + tok);
            const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "K") file.K = static_cast<int>(parse_int(val, path, 1));
            else if (key == "N") parse_int(val, path, 1);
            else if (key == "format") {
                if (val == "dense") file.dense = true;
                else if (val == "sparse") file.dense = false;
                else throw HeaderMismatch(path.string() + ": unknown format " + val);
            } else if (key == "k_min") file.k_min = static_cast<int>(parse_int(val, path, 1));
            else throw HeaderMismatch(path.string() + ": unknown header key " + key);
            ++seen;
        }
        if (seen < 3 || file.K <= 0) throw HeaderMismatch(path.string() + ": incomplete header");
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto toks = split(line, ',');
        if (toks.size() < 3) parse_fail(path, lineno, "too few fields");
        ScoreRecord rec;
        rec.example_id = parse_int(toks[0], path, lineno);
        rec.true_label = static_cast<ClassId>(parse_int(toks[1], path, lineno));
        if (file.dense) {
            if (static_cast<int>(toks.size()) != 2 + file.K)
                parse_fail(path, lineno, "expected " + std::to_string(file.K) + " scores");
            rec.scores.reserve(file.K);
            for (size_t i = 2; i < toks.size(); ++i)
                rec.scores.push_back(parse_double(toks[i], path, lineno));
        } else {
            rec.ids.reserve(toks.size() - 2);
            rec.scores.reserve(toks.size() - 2);
            for (size_t i = 2; i < toks.size(); ++i) {
                const auto colon = toks[i].find(':');
                if (colon == std::string_view::npos) parse_fail(path, lineno, "expected class:score");
                const ClassId c =
                    static_cast<ClassId>(parse_int(toks[i].substr(0, colon), path, lineno));
                if (c < 0 || c >= file.K) parse_fail(path, lineno, "class id out of range");
                for (ClassId prev : rec.ids)
                    if (prev == c) parse_fail(path, lineno, "duplicate class id in sparse row");
                rec.ids.push_back(c);
                rec.scores.push_back(parse_double(toks[i].substr(colon + 1), path, lineno));
            }
            if (static_cast<int>(rec.ids.size()) < file.k_min)
                parse_fail(path, lineno, "sparse row shorter than k_min");
        }
        file.records.push_back(std::move(rec));
    }
    return file;
}

void write_scores(const std::filesystem::path& path, const ScoreFile& file) {
    auto out = open_out(path);
    out << "K=" << file.K << " N=" << file.records.size() << " format="
        << (file.dense ? "dense" : "sparse") << " k_min=" << file.k_min << "\n";
    for (const auto& rec : file.records) {
        out << rec.example_id << ',' << rec.true_label;
        if (file.dense) {
            for (double s : rec.scores) out << ',' << format_double(s);
        } else {
            for (size_t i = 0; i < rec.ids.size(); ++i)
                out << ',' << rec.ids[i] << ':' << format_double(rec.scores[i]);
        }
        out << '\n';
    }
}

ClassStats read_class_stats(const std::filesystem::path& path, int K) {
    auto in = open_in(path);
    std::string line;
    int lineno = 0;
    std::vector<std::pair<ClassId, std::pair<std::int64_t, double>>> rows;
    bool any_norm = false, all_norm = true;
    ClassId max_id = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto toks = split(line, ',');
        if (toks.size() != 2 && toks.size() != 3) parse_fail(path, lineno, "expected 2 or 3 fields");
        const ClassId id = static_cast<ClassId>(parse_int(toks[0], path, lineno));
        const std::int64_t count = parse_int(toks[1], path, lineno);
        double norm = 0.0;
        if (toks.size() == 3) {
            norm = parse_double(toks[2], path, lineno);
            any_norm = true;
        } else {
            all_norm = false;
        }
        if (id < 0) parse_fail(path, lineno, "negative class id");
        max_id = std::max(max_id, id);
        rows.push_back({id, {count, norm}});
    }
    if (any_norm && !all_norm) throw ParseError(path.string() + ": mixed weight_norm presence");
    const int k = std::max(K, max_id + 1);
    std::vector<std::int64_t> counts(k, 0);
    std::optional<std::vector<double>> norms;
    if (any_norm) norms = std::vector<double>(k, 1.0);
    for (const auto& [id, cn] : rows) {
        counts[id] = cn.first;
        if (norms) (*norms)[id] = cn.second;
    }
    return ClassStats::from_counts(std::move(counts), std::move(norms));
}

void write_class_stats(const std::filesystem::path& path, const ClassStats& stats) {
    auto out = open_out(path);
    for (int y = 0; y < stats.K; ++y) {
        out << y << ',' << stats.counts[y];
        if (stats.weight_norms) out << ',' << format_double((*stats.weight_norms)[y]);
        out << '\n';
    }
}

SimilarityMatrix read_similarity(const std::filesystem::path& path, int K) {
    auto in = open_in(path);
    SimilarityMatrix sim;
    sim.K = K;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto toks = split(line, ',');
        if (toks.size() != 3) parse_fail(path, lineno, "expected i,j,value");
        const ClassId i = static_cast<ClassId>(parse_int(toks[0], path, lineno));
        const ClassId j = static_cast<ClassId>(parse_int(toks[1], path, lineno));
        const double v = parse_double(toks[2], path, lineno);
        if (i >= j) parse_fail(path, lineno, "require i < j");
        if (i < 0 || j >= K) parse_fail(path, lineno, "class id out of range");
        if (sim.entries.count(SimilarityMatrix::key(i, j)))
            parse_fail(path, lineno, "duplicate pair");
        sim.insert(i, j, v);
    }
    try {
        sim.validate();
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return sim;
}

void write_similarity(const std::filesystem::path& path, const SimilarityMatrix& sim) {
    auto out = open_out(path);
    std::vector<std::tuple<ClassId, ClassId, double>> rows;
    for (const auto& [k, v] : sim.entries) {
        const ClassId i = static_cast<ClassId>(k >> 32);
        const ClassId j = static_cast<ClassId>(k & 0xffffffffu);
        if (i < j) rows.emplace_back(i, j, v);
        else if (j < i && !sim.entries.count(SimilarityMatrix::key(j, i)))
            rows.emplace_back(j, i, v);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [i, j, v] : rows) out << i << ',' << j << ',' << format_double(v) << '\n';
}

void write_model(const ModelParams& params, const std::filesystem::path& path) {
    ordered_json j;
    j["schema_version"] = kModelSchemaVersion;
    j["K"] = params.K();
    j["d"] = params.d();
    j["feature_layout"] = params.feature_layout;
    j["a"] = params.a;
    j["theta"] = params.theta;
    j["lambda_a"] = params.lambda_a;
    j["lambda_theta"] = params.lambda_theta;
    j["feature_mean"] = params.transform.mean;
    j["feature_std"] = params.transform.stdev;
    j["fitted_on"] = params.fitted_on;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

ModelParams read_model(const std::filesystem::path& path) {
    auto in = open_in(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != kModelSchemaVersion)
        throw VersionMismatch(path.string() + ": unsupported model schema");
    ModelParams p;
    p.a = j["a"].get<std::vector<double>>();
    p.theta = j["theta"].get<std::vector<double>>();
    p.lambda_a = j["lambda_a"].get<double>();
    p.lambda_theta = j["lambda_theta"].get<double>();
    p.feature_layout = j["feature_layout"].get<std::vector<std::string>>();
    p.transform.mean = j["feature_mean"].get<std::vector<double>>();
    p.transform.stdev = j["feature_std"].get<std::vector<double>>();
    p.fitted_on = j["fitted_on"].get<std::string>();
    if (p.K() != j["K"].get<int>() || p.d() != j["d"].get<int>() ||
        p.transform.d() != p.d() || static_cast<int>(p.feature_layout.size()) != p.d())
        throw ParseError(path.string() + ": inconsistent dimensions");
    return p;
}

namespace {

ordered_json report_to_json(const EvalReport& r) {
    ordered_json j;
    j["hit1"] = r.hit1;
    j["hit3"] = r.hit3;
    j["mrr"] = r.mrr;
    j["rare_hit1"] = json_or_null(r.rare_hit1);
    j["freq_hit1"] = json_or_null(r.freq_hit1);
    j["hfr"] = json_or_null(r.hfr);
    j["recall_at_k"] = r.recall_at_k;
    j["rho_k"] = json_or_null(r.rho_k);
    j["n_covered"] = r.n_covered;
    j["n_base_errors"] = r.n_base_errors;
    if (!r.per_class.empty()) {
        ordered_json pc = ordered_json::object();
        for (const auto& [y, s] : r.per_class) {
            ordered_json e;
            e["hits"] = s.hits;
            e["total"] = s.total;
            e["mean_dispersion"] = json_or_null(s.mean_dispersion);
            pc[std::to_string(y)] = std::move(e);
        }
        j["per_class"] = std::move(pc);
    }
    return j;
}

std::string cell(double v, bool dash_nan = true) {
    if (std::isnan(v)) return dash_nan ? "—" : "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string report_json(const EvalReport& report, const std::string& config_echo) {
    ordered_json j = report_to_json(report);
    if (!config_echo.empty()) j["config"] = config_echo;
    return j.dump(2);
}

void write_report(const EvalReport& report, const std::filesystem::path& path,
                  const std::string& config_echo) {
    auto out = open_out(path);
    out << report_json(report, config_echo) << '\n';
}

std::string report_table_header() {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %8s %8s %8s %9s %9s %8s %9s %8s", "method", "hit1",
                  "hit3", "mrr", "rare@1", "freq@1", "hfr", "recall@k", "rho_k");
    return buf;
}

std::string report_table_row(const std::string& method, const EvalReport& r) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-12s %8s %8s %8s %9s %9s %8s %9s %8s", method.c_str(),
                  cell(r.hit1).c_str(), cell(r.hit3).c_str(), cell(r.mrr).c_str(),
                  cell(r.rare_hit1).c_str(), cell(r.freq_hit1).c_str(), cell(r.hfr).c_str(),
                  cell(r.recall_at_k).c_str(), cell(r.rho_k).c_str());
    return buf;
}

void write_sidecar(const SyntheticDataset& synth, const std::filesystem::path& path) {
    const auto& t = synth.truth;
    ordered_json j;
    j["schema_version"] = 1;
    ordered_json spec;
    spec["K"] = synth.spec.K;
    spec["dim"] = synth.spec.dim;
    spec["n_train"] = synth.spec.n_train;
    spec["n_test"] = synth.spec.n_test;
    spec["n_calib"] = synth.spec.n_calib;
    spec["mean_scale"] = synth.spec.mean_scale;
    spec["noise_var"] = synth.spec.noise_var;
    spec["bias_tau"] = synth.spec.bias_tau;
    spec["corruption_c"] = synth.spec.corruption_c;
    spec["n_confusers"] = synth.spec.n_confusers;
    spec["delta"] = synth.spec.delta;
    spec["seed"] = synth.spec.seed;
    spec["regime"] =
        synth.spec.regime == Regime::class_separable ? "class-separable" : "non-class-separable";
    j["spec"] = std::move(spec);
    j["prior"] = t.prior;
    j["means"] = t.means;
    ordered_json pairs = ordered_json::array();
    for (const auto& [u, v] : t.confuser_pairs) pairs.push_back({u, v});
    j["confuser_pairs"] = std::move(pairs);
    j["inputs"] = t.inputs;
    ordered_json perts = ordered_json::array();
    for (std::int64_t id = 0; id < static_cast<std::int64_t>(t.perturbations.size()); ++id) {
        for (const auto& p : t.perturbations[id])
            perts.push_back({id, p.pair_index, static_cast<int>(p.sign)});
    }
    j["perturbations"] = std::move(perts);
    auto out = open_out(path);
    out << j.dump() << '\n';
}

SyntheticDataset read_sidecar(const std::filesystem::path& path) {
    auto in = open_in(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
        throw VersionMismatch(path.string() + ": unsupported sidecar schema");
    SyntheticDataset s;
    const auto& spec = j["spec"];
    s.spec.K = spec["K"].get<int>();
    s.spec.dim = spec["dim"].get<int>();
    s.spec.n_train = spec["n_train"].get<int>();
    s.spec.n_test = spec["n_test"].get<int>();
    s.spec.n_calib = spec["n_calib"].get<int>();
    s.spec.mean_scale = spec["mean_scale"].get<double>();
    s.spec.noise_var = spec["noise_var"].get<double>();
    s.spec.bias_tau = spec["bias_tau"].get<double>();
    s.spec.corruption_c = spec["corruption_c"].get<double>();
    s.spec.n_confusers = spec["n_confusers"].get<int>();
    s.spec.delta = spec["delta"].get<double>();
    s.spec.seed = spec["seed"].get<std::uint64_t>();
    s.spec.regime = spec["regime"].get<std::string>() == "class-separable"
                        ? Regime::class_separable
                        : Regime::non_class_separable;
    s.truth.K = s.spec.K;
    s.truth.dim = s.spec.dim;
    s.truth.prior = j["prior"].get<std::vector<double>>();
    s.truth.means = j["means"].get<std::vector<double>>();
    for (const auto& p : j["confuser_pairs"])
        s.truth.confuser_pairs.emplace_back(p[0].get<ClassId>(), p[1].get<ClassId>());
    s.truth.inputs = j["inputs"].get<std::vector<double>>();
    s.truth.perturbations.assign(s.truth.n_examples(), {});
    for (const auto& p : j["perturbations"]) {
        const auto id = p[0].get<std::int64_t>();
        s.truth.perturbations[id].push_back(
            {p[1].get<int>(), static_cast<std::int8_t>(p[2].get<int>())});
    }
    return s;
}

std::string dataset_fingerprint(const Dataset& d) {
    std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
    auto mix = [&h](const void* data, size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    for (const auto& r : d.records) {
        mix(&r.example_id, sizeof r.example_id);
        mix(&r.true_label, sizeof r.true_label);
        if (!r.ids.empty()) mix(r.ids.data(), r.ids.size() * sizeof(ClassId));
        mix(r.scores.data(), r.scores.size() * sizeof(double));
    }
    mix(d.stats.counts.data(), d.stats.counts.size() * sizeof(std::int64_t));
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace repair::io
