#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "repair/io.hpp"
#include "repair/shortlist.hpp"

using namespace repair;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("repair_io_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("dense score files parse the documented example") {
    TempDir tmp;
    const auto p = tmp.path / "scores.txt";
    {
        std::ofstream out(p);
        out << "K=3 N=2 format=dense k_min=1\n";
        out << "0,1,0.5,2.0,0.1\n";
        out << "1,2,1.5,0.25,3.5\n";
    }
    const auto file = io::read_scores(p);
    CHECK(file.K == 3);
    CHECK(file.records.size() == 2);
    CHECK(file.records[0].true_label == 1);
    CHECK(file.records[0].scores == std::vector<double>{0.5, 2.0, 0.1});
}

TEST_CASE("sparse rows with duplicate ids are parse errors") {
    TempDir tmp;
    const auto p = tmp.path / "scores.txt";
    {
        std::ofstream out(p);
        out << "K=5 N=1 format=sparse k_min=2\n";
        out << "0,1,2:0.5,2:0.7\n";
    }
    CHECK_THROWS_AS(io::read_scores(p), ParseError);
}

TEST_CASE("bad headers are rejected") {
    TempDir tmp;
    const auto p = tmp.path / "scores.txt";
    {
        std::ofstream out(p);
        out << "K=3 N=1 format=banana k_min=1\n";
    }
    CHECK_THROWS_AS(io::read_scores(p), HeaderMismatch);
}

TEST_CASE("generated score files round-trip byte for byte") {
    SyntheticSpec spec = SyntheticSpec::defaults(Regime::non_class_separable, 3);
    spec.n_train = 150;
    spec.n_test = 50;
    const auto synth = generate(spec);
    TempDir tmp;
    const auto p1 = tmp.path / "a.scores";
    const auto p2 = tmp.path / "b.scores";
    io::write_scores(p1, {spec.K, 1, true, synth.calib.records});
    const auto file = io::read_scores(p1);
    io::write_scores(p2, file);
    CHECK(slurp(p1) == slurp(p2));
    // parsed values are exact
    for (size_t i = 0; i < file.records.size(); ++i)
        CHECK(file.records[i].scores == synth.calib.records[i].scores);
}

TEST_CASE("sparse score files round-trip losslessly") {
    TempDir tmp;
    io::ScoreFile f;
    f.K = 40;
    f.k_min = 3;
    f.dense = false;
    std::mt19937_64 rng(10);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 25; ++i) {
        ScoreRecord r;
        r.example_id = i;
        r.true_label = static_cast<ClassId>(rng() % 40);
        for (int j = 0; j < 6; ++j) {
            r.ids.push_back(static_cast<ClassId>((rng() % 40 + 7 * j) % 40));
            r.scores.push_back(gauss(rng));
        }
        // dedupe ids
        std::vector<ClassId> ids;
        std::vector<double> sc;
        for (size_t t = 0; t < r.ids.size(); ++t)
            if (std::find(ids.begin(), ids.end(), r.ids[t]) == ids.end()) {
                ids.push_back(r.ids[t]);
                sc.push_back(r.scores[t]);
            }
        r.ids = ids;
        r.scores = sc;
        if (static_cast<int>(r.ids.size()) >= f.k_min) f.records.push_back(r);
    }
    const auto p1 = tmp.path / "s1";
    const auto p2 = tmp.path / "s2";
    io::write_scores(p1, f);
    io::write_scores(p2, io::read_scores(p1));
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("class stats round-trip and are order-independent") {
    TempDir tmp;
    const auto p = tmp.path / "stats.csv";
    {
        std::ofstream out(p);
        out << "2,5\n0,100\n1,20\n";  // shuffled ids
    }
    const auto stats = io::read_class_stats(p);
    CHECK(stats.K == 3);
    CHECK(stats.counts == std::vector<std::int64_t>{100, 20, 5});

    const auto p2 = tmp.path / "stats2.csv";
    io::write_class_stats(p2, stats);
    const auto again = io::read_class_stats(p2);
    CHECK(again.counts == stats.counts);
    CHECK(again.rare_mask == stats.rare_mask);
}

TEST_CASE("similarity files validate symmetry and bounds") {
    TempDir tmp;
    const auto p = tmp.path / "sim.csv";
    {
        std::ofstream out(p);
        out << "0,1,0.5\n1,2,0.25\n";
    }
    const auto sim = io::read_similarity(p, 3);
    CHECK(sim.at(1, 0) == 0.5);
    CHECK(sim.at(2, 2) == 1.0);

    const auto bad = tmp.path / "bad.csv";
    {
        std::ofstream out(bad);
        out << "1,0,0.5\n";  // requires i < j
    }
    CHECK_THROWS_AS(io::read_similarity(bad, 3), ParseError);
    const auto oob = tmp.path / "oob.csv";
    {
        std::ofstream out(oob);
        out << "0,1,1.5\n";
    }
    CHECK_THROWS_AS(io::read_similarity(oob, 3), ParseError);

    const auto p2 = tmp.path / "sim2.csv";
    io::write_similarity(p2, sim);
    const auto again = io::read_similarity(p2, 3);
    CHECK(again.at(0, 1) == 0.5);
    CHECK(again.at(1, 2) == 0.25);
}

TEST_CASE("models round-trip at full precision and check their schema") {
    ModelParams p;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    p.a.resize(17);
    p.theta.resize(4);
    for (auto& v : p.a) v = gauss(rng) * 1e-3;
    for (auto& v : p.theta) v = gauss(rng) * 100;
    p.lambda_a = 0.001;
    p.lambda_theta = 5e-5;
    p.feature_layout = {"score_gap", "rank_gap", "log_prob_ratio", "log_freq_ratio"};
    p.transform.mean = {0, 0, 0, 0};
    p.transform.stdev = {1.5, 2.5, 1.5, 0.25};
    p.fitted_on = "deadbeef01020304";

    TempDir tmp;
    const auto path = tmp.path / "model.json";
    io::write_model(p, path);
    const auto q = io::read_model(path);
    CHECK(q.a == p.a);
    CHECK(q.theta == p.theta);
    CHECK(q.lambda_a == p.lambda_a);
    CHECK(q.transform.stdev == p.transform.stdev);
    CHECK(q.fitted_on == p.fitted_on);

    // version gate
    auto text = slurp(path);
    const auto pos = text.find("\"schema_version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("\"schema_version\": 1").size(), "\"schema_version\": 2");
    const auto bad = tmp.path / "bad.json";
    std::ofstream(bad) << text;
    CHECK_THROWS_AS(io::read_model(bad), VersionMismatch);
}

TEST_CASE("report JSON carries the documented keys in order") {
    EvalReport r;
    r.hit1 = 0.5;
    r.hit3 = 0.75;
    r.mrr = 0.6;
    r.recall_at_k = 0.9;
    r.rho_k = 0.1;
    r.n_covered = 10;
    const auto js = io::report_json(r, "k=10");
    for (const char* key : {"hit1", "hit3", "mrr", "rare_hit1", "freq_hit1", "hfr", "recall_at_k",
                            "rho_k", "n_covered", "n_base_errors", "config"})
        CHECK(js.find(std::string("\"") + key + "\"") != std::string::npos);
    // NaN fields serialize as null
    CHECK(js.find("\"hfr\": null") != std::string::npos);
    // undefined cells render as a dash in the text table
    const auto row = io::report_table_row("base", r);
    CHECK(row.find("—") != std::string::npos);
}

TEST_CASE("sidecars reconstruct the generative truth exactly") {
    SyntheticSpec spec = SyntheticSpec::defaults(Regime::non_class_separable, 2);
    spec.n_train = 120;
    spec.n_test = 40;
    const auto synth = generate(spec);
    TempDir tmp;
    const auto p = tmp.path / "oracle.json";
    io::write_sidecar(synth, p);
    const auto back = io::read_sidecar(p);
    CHECK(back.truth.means == synth.truth.means);
    CHECK(back.truth.prior == synth.truth.prior);
    CHECK(back.truth.inputs == synth.truth.inputs);
    CHECK(back.truth.confuser_pairs == synth.truth.confuser_pairs);
    CHECK(back.spec.corruption_c == synth.spec.corruption_c);
    REQUIRE(back.truth.perturbations.size() == synth.truth.perturbations.size());
    for (size_t i = 0; i < back.truth.perturbations.size(); ++i) {
        REQUIRE(back.truth.perturbations[i].size() == synth.truth.perturbations[i].size());
        for (size_t j = 0; j < back.truth.perturbations[i].size(); ++j) {
            CHECK(back.truth.perturbations[i][j].pair_index ==
                  synth.truth.perturbations[i][j].pair_index);
            CHECK(back.truth.perturbations[i][j].sign == synth.truth.perturbations[i][j].sign);
        }
    }
}

TEST_CASE("format_double is shortest round-trip") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0, -0.75}) {
        const auto s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}
