#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmit/bench.hpp"
#include "hmit/synthetic.hpp"
#include "oracles.hpp"

using namespace hmit;

namespace {

std::filesystem::path temp_dir() {
    auto p = std::filesystem::temp_directory_path() / "hmit_test_bench";
    std::filesystem::create_directories(p);
    return p;
}

// small planted-structure table on disk for fast sweeps
std::string write_toy_dataset() {
    Rng rng(314);
    Dataset ds = oracle::random_mixed_dataset(rng, 80);
    // the sweep corrupts on its own; start from a complete table
    for (size_t r = 0; r < ds.rows(); ++r)
        for (size_t a = 0; a < ds.attr_count(); ++a)
            if (ds.cell(r, a).is_missing())
                ds.cell(r, a) = ds.attribute(a).kind == AttrKind::continuous
                                    ? Cell::number(1.0)
                                    : Cell::token(0);
    save_table_file(ds, temp_dir() / "toy.csv", TableFormat::csv);
    return "toy.csv";
}

ExperimentSpec toy_spec(const std::string& name) {
    ExperimentSpec spec;
    spec.datasets = {name};
    spec.data_dir = temp_dir();
    spec.missing_rate = {0.2};
    spec.seeds = 2;
    spec.timings = false;
    return spec;
}

}  // namespace

TEST_CASE("score: categorical correctness counting") {
    std::istringstream in("a,x\nb,y\na,x\nb,x\n");
    Dataset truth = load_table(in, TableFormat::csv);
    auto [corrupted, mask] = inject_missing(truth, 0.4, 3, false);
    REQUIRE(mask.cells.size() == 3);  // floor(0.4 * 8)

    std::vector<std::vector<double>> edges(truth.attr_count());

    ScoreFragment perfect = score(truth, mask, edges);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.correct == 3);

    // flip every masked cell to a wrong token
    Dataset wrong = truth;
    for (const auto& m : mask.cells)
        wrong.cell(m.row, m.attr) = Cell::token(1 - m.original.token_index());
    CHECK(score(wrong, mask, edges).accuracy == 0.0);

    // 3 of 4 correct on a hand-made 4-cell mask
    CorruptionMask hand;
    hand.cells = {{0, 0, truth.cell(0, 0)},
                  {1, 0, truth.cell(1, 0)},
                  {2, 0, truth.cell(2, 0)},
                  {3, 0, truth.cell(3, 0)}};
    Dataset mostly = truth;
    mostly.cell(3, 0) = Cell::token(1 - truth.cell(3, 0).token_index());
    CHECK(score(mostly, hand, edges).accuracy == doctest::Approx(0.75));
}

TEST_CASE("score: continuous cells are right when they land in the truth's bin") {
    std::istringstream in("1.0,x\n2.0,x\n9.0,x\n10.0,x\n");
    Dataset truth = load_table(in, TableFormat::csv);
    std::vector<std::vector<double>> edges(2);
    edges[0] = {1.0, 5.0, 10.0};  // bins [1,5) and [5,10]

    CorruptionMask mask;
    mask.cells = {{0, 0, Cell::number(1.0)}, {2, 0, Cell::number(9.0)}};

    Dataset imputed = truth;
    imputed.cell(0, 0) = Cell::number(3.9);  // same bin as 1.0
    imputed.cell(2, 0) = Cell::number(4.9);  // wrong bin for 9.0
    ScoreFragment frag = score(imputed, mask, edges);
    CHECK(frag.accuracy == doctest::Approx(0.5));

    // nrmse: errors 2.9 and -4.1 over range 9 (values 1..10)
    double expect = std::sqrt((2.9 * 2.9 + 4.1 * 4.1) / 2.0) / 9.0;
    CHECK(frag.nrmse == doctest::Approx(expect));

    // an unimputed masked cell is an error
    Dataset hole = truth;
    hole.cell(0, 0) = Cell::missing();
    CHECK_THROWS_AS(score(hole, mask, edges), IncompleteImputationError);
}

TEST_CASE("score: accuracy 1.0 on an empty mask, nrmse undefined without continuous") {
    std::istringstream in("a,x\nb,y\n");
    Dataset ds = load_table(in, TableFormat::csv);
    CorruptionMask empty;
    std::vector<std::vector<double>> edges(2);
    ScoreFragment frag = score(ds, empty, edges);
    CHECK(frag.accuracy == 1.0);
    CHECK(std::isnan(frag.nrmse));
}

TEST_CASE("run_sweep: cartesian run count and partition invariant") {
    std::string name = write_toy_dataset();
    ExperimentSpec spec = toy_spec(name);
    spec.methods = {Method::partial_hmit};
    spec.min_sup = {0.02, 0.04, 0.06, 0.08, 0.10};
    spec.seeds = 1;
    auto metrics = run_sweep(spec);
    CHECK(metrics.size() == 5);

    for (const auto& m : metrics) {
        REQUIRE_FALSE(m.failed);
        CHECK(m.n_rule + m.n_knn + m.n_global == m.n_mask);
        CHECK(m.accuracy >= 0.0);
        CHECK(m.accuracy <= 1.0);
        CHECK(m.ar_coverage >= 0.0);
        CHECK(m.ar_coverage <= 1.0);
    }
}

TEST_CASE("run_sweep: deterministic, coverage dominance on the toy table") {
    std::string name = write_toy_dataset();
    ExperimentSpec spec = toy_spec(name);
    auto a = run_sweep(spec);
    auto b = run_sweep(spec);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].dataset == b[i].dataset);
        CHECK(a[i].method == b[i].method);
        CHECK(a[i].seed_index == b[i].seed_index);
        CHECK(a[i].accuracy == b[i].accuracy);
        CHECK(a[i].ar_coverage == b[i].ar_coverage);
        CHECK(a[i].n_mask == b[i].n_mask);
    }

    double partial = 0, full = 0;
    for (const auto& m : a) {
        if (m.method == Method::partial_hmit) partial += m.ar_coverage;
        if (m.method == Method::full_hmit) full += m.ar_coverage;
        if (m.method == Method::knn_only) CHECK(m.ar_coverage == 0.0);
    }
    CHECK(partial >= full);
}

TEST_CASE("run_sweep: identical corruption across methods") {
    std::string name = write_toy_dataset();
    ExperimentSpec spec = toy_spec(name);
    auto metrics = run_sweep(spec);
    // same (rate, seed) coordinate -> same mask size for every method
    std::map<int, int64_t> mask_by_seed;
    for (const auto& m : metrics) {
        auto it = mask_by_seed.find(m.seed_index);
        if (it == mask_by_seed.end())
            mask_by_seed[m.seed_index] = m.n_mask;
        else
            CHECK(it->second == m.n_mask);
    }
}

TEST_CASE("export_report: csv shape and empty-metrics refusal") {
    std::string name = write_toy_dataset();
    ExperimentSpec spec = toy_spec(name);
    spec.methods = {Method::partial_hmit};
    spec.min_sup = {0.02, 0.05, 0.10, 0.20, 0.40};
    spec.seeds = 3;
    auto metrics = run_sweep(spec);
    CHECK(metrics.size() == 15);

    std::ostringstream out;
    export_report(metrics, ReportFormat::csv, out);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line ==
          "dataset,method,min_sup,min_conf,p,k,missing_rate,seeds,accuracy_mean,accuracy_sd,"
          "ar_coverage_mean,nrmse_mean,mine_ms,impute_ms");
    size_t rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find("toy.csv,partial_hmit,") == 0);
        CHECK(line.find(",3,") != std::string::npos);  // seeds column
        ++rows;
    }
    CHECK(rows == 5);  // one per coordinate, seed-averaged

    CHECK_THROWS_AS(export_report({}, ReportFormat::csv, out), EmptyMetricsError);
}

TEST_CASE("export_report: json round-trips the seed averages") {
    std::string name = write_toy_dataset();
    ExperimentSpec spec = toy_spec(name);
    spec.methods = {Method::partial_hmit, Method::knn_only};
    spec.seeds = 3;
    auto metrics = run_sweep(spec);

    std::ostringstream out;
    export_report(metrics, ReportFormat::json, out);
    auto arr = nlohmann::json::parse(out.str());
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 2);

    for (const auto& row : arr) {
        // recompute the mean from the raw metrics
        double sum = 0;
        int n = 0;
        for (const auto& m : metrics) {
            if (to_string(m.method) == row["method"].get<std::string>() &&
                m.missing_rate == row["missing_rate"].get<double>()) {
                sum += m.accuracy;
                ++n;
            }
        }
        REQUIRE(n == row["seeds"].get<int>());
        CHECK(row["accuracy_mean"].get<double>() == doctest::Approx(sum / n).epsilon(1e-12));
    }
}

TEST_CASE("export_imputed: round trip and missing-free guarantee") {
    Rng rng(17);
    Dataset ds = oracle::random_mixed_dataset(rng, 40);
    HmitConfig cfg;
    cfg.mining.min_sup = 0.1;
    ImputeResult res = impute_all(ds, cfg);

    auto dir = temp_dir();
    export_imputed(res.imputed, TableFormat::csv, dir / "imp.csv");
    Dataset back = load_table_file(dir / "imp.csv", TableFormat::csv);
    CHECK(back.same_content(res.imputed));

    export_imputed(res.imputed, TableFormat::arff, dir / "imp.arff");
    Dataset arff_back = load_table_file(dir / "imp.arff", TableFormat::arff);
    CHECK(arff_back == res.imputed);

    // the ARFF header declares every category
    std::ifstream f(dir / "imp.arff");
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(text.find("{p,q,r,s}") != std::string::npos);
    CHECK(text.find("{yes,no}") != std::string::npos);
    CHECK(text.find('?') == std::string::npos);

    // refuses a dataset with holes
    CHECK_THROWS_AS(export_imputed(ds, TableFormat::csv, dir / "bad.csv"),
                    IncompleteImputationError);
}

TEST_CASE("benchmark replicas: table shapes and determinism") {
    Dataset heart = make_benchmark("heart");
    CHECK(heart.rows() == 270);
    CHECK(heart.attr_count() == 14);  // 13 features + class
    CHECK(heart.attribute(13).is_class);
    CHECK(heart.attribute(13).categories.size() == 2);
    CHECK(heart.missing_count() == 0);

    Dataset tictac = make_benchmark("tictac");
    CHECK(tictac.rows() == 958);
    CHECK(tictac.attr_count() == 10);
    CHECK(tictac.attribute(9).categories.size() == 2);

    Dataset car = make_benchmark("car");
    CHECK(car.rows() == 1728);
    CHECK(car.attr_count() == 7);  // 6 features + class
    CHECK(car.attribute(6).categories.size() == 4);
    // all four class values actually occur
    std::set<int32_t> seen;
    for (size_t r = 0; r < car.rows(); ++r) seen.insert(car.cell(r, 6).token_index());
    CHECK(seen.size() == 4);

    Dataset crx = make_benchmark("crx");
    CHECK(crx.rows() == 690);
    CHECK(crx.attr_count() == 16);
    size_t continuous = 0;
    for (size_t a = 0; a < crx.attr_count(); ++a)
        if (crx.attribute(a).kind == AttrKind::continuous) ++continuous;
    CHECK(continuous == 6);

    CHECK(make_benchmark("heart") == heart);
    CHECK_THROWS_AS(make_benchmark("adult"), InvalidArgument);
}

TEST_CASE("experiment spec validation") {
    ExperimentSpec spec;
    spec.datasets = {};
    CHECK_THROWS_AS(run_sweep(spec), InvalidArgument);
    spec.datasets = {"heart"};
    spec.k = {};
    CHECK_THROWS_AS(run_sweep(spec), InvalidArgument);
}
