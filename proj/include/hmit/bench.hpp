#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hmit/corruption.hpp"
#include "hmit/imputer.hpp"
#include "hmit/io.hpp"

namespace hmit {

enum class Method { partial_hmit, full_hmit, knn_only };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct ExperimentSpec {
    std::vector<std::string> datasets;  // replica names or file paths
    std::vector<Method> methods = {Method::partial_hmit, Method::full_hmit, Method::knn_only};
    // Axes; the run set is their cross product.
    std::vector<double> min_sup = {0.02};
    std::vector<double> min_conf = {0.60};
    std::vector<double> p = {0.80};
    std::vector<int> k = {10};
    std::vector<double> missing_rate = {0.10, 0.20, 0.30, 0.40};
    int seeds = 5;
    uint64_t master_seed = 20060101;
    // Fixed (unswept) knobs.
    int bins = 5;
    BinStrategy bin_strategy = BinStrategy::equal_frequency;
    int max_itemset_len = 6;
    bool protect_class = true;
    PDenominator p_denominator = PDenominator::antecedent;
    // Optional directory of fetched data files; names resolve to
    // <data_dir>/<name> when present, else to the built-in replicas.
    std::filesystem::path data_dir;
    // false zeroes the timing columns so report files diff cleanly.
    bool timings = true;

    void validate() const;
};

struct RunMetrics {
    // coordinates
    std::string dataset;
    Method method = Method::partial_hmit;
    double min_sup = 0, min_conf = 0, p = 0;
    int k = 0;
    double missing_rate = 0;
    int seed_index = 0;

    // outcome
    double accuracy = 0;                       // fraction of masked cells imputed correctly
    std::vector<double> per_attr_accuracy;     // NaN where an attribute had no masked cells
    double ar_coverage = 0;                    // fraction of masked cells with method = rule
    int64_t n_rule = 0, n_knn = 0, n_global = 0, n_mask = 0;
    double nrmse = 0;                          // NaN when no continuous attribute was masked
    double mine_ms = 0, impute_ms = 0;
    size_t rule_count = 0;

    bool failed = false;
    std::string error;
};

struct ScoreFragment {
    double accuracy = 0;
    std::vector<double> per_attr_accuracy;
    double nrmse = 0;
    int64_t correct = 0;
};

// Compares imputed cells to the mask's ground truth. Categorical cells are
// correct on token equality; continuous cells when the imputed value lands in
// the truth's discretization bin (the edges used during imputation). NRMSE is
// the per-attribute range-normalized RMSE, averaged over the continuous
// attributes that had masked cells. Throws IncompleteImputationError if a
// masked cell is still missing.
ScoreFragment score(const Dataset& imputed, const CorruptionMask& mask,
                    const std::vector<std::vector<double>>& bin_edges);

// Runs the full cross product of axes x seeds x methods x datasets. The
// corruption seed for a run depends only on (master seed, dataset, rate,
// seed index), so methods and mining axes compare on identical corrupted
// data. Rule sets are shared between the two HMiT matching modes of a
// coordinate. Per-run failures are recorded in the metrics and skipped.
std::vector<RunMetrics> run_sweep(const ExperimentSpec& spec);

enum class ReportFormat { csv, json };

// Seed-averaged report, one row per coordinate. CSV columns:
// dataset,method,min_sup,min_conf,p,k,missing_rate,seeds,accuracy_mean,
// accuracy_sd,ar_coverage_mean,nrmse_mean,mine_ms,impute_ms
void export_report(const std::vector<RunMetrics>& metrics, ReportFormat format,
                   std::ostream& out);
void export_report_file(const std::vector<RunMetrics>& metrics, ReportFormat format,
                        const std::filesystem::path& out);

// Writes a fully imputed dataset; load_table reads it back identically.
void export_imputed(const Dataset& imputed, TableFormat format,
                    const std::filesystem::path& out);

}  // namespace hmit
