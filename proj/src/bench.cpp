#include "hmit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hmit/rng.hpp"
#include "hmit/synthetic.hpp"

namespace hmit {

const char* to_string(Method m) {
    switch (m) {
        case Method::partial_hmit: return "partial_hmit";
        case Method::full_hmit: return "full_hmit";
        case Method::knn_only: return "knn_only";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "partial_hmit" || s == "partial") return Method::partial_hmit;
    if (s == "full_hmit" || s == "full") return Method::full_hmit;
    if (s == "knn_only" || s == "knn") return Method::knn_only;
    throw InvalidArgument("unknown method '" + s + "'");
}

void ExperimentSpec::validate() const {
    if (datasets.empty()) throw InvalidArgument("no datasets selected");
    if (methods.empty() || min_sup.empty() || min_conf.empty() || p.empty() || k.empty() ||
        missing_rate.empty())
        throw InvalidArgument("every sweep axis needs at least one value");
    if (seeds < 1) throw InvalidArgument("seeds must be >= 1");
}

ScoreFragment score(const Dataset& imputed, const CorruptionMask& mask,
                    const std::vector<std::vector<double>>& bin_edges) {
    ScoreFragment frag;
    const size_t n_attrs = imputed.attr_count();
    std::vector<int64_t> attr_total(n_attrs, 0), attr_correct(n_attrs, 0);
    std::vector<double> sq_err(n_attrs, 0.0);
    std::vector<double> lo(n_attrs, std::numeric_limits<double>::infinity()), hi(n_attrs, -std::numeric_limits<double>::infinity());

    // observed range per continuous attribute: unmasked cells plus ground truth
    for (size_t a = 0; a < n_attrs; ++a) {
        if (imputed.attribute(a).kind != AttrKind::continuous) continue;
        for (size_t r = 0; r < imputed.rows(); ++r) {
            const Cell& c = imputed.cell(r, a);
            if (c.is_missing() || mask.contains(static_cast<uint32_t>(r), static_cast<uint32_t>(a)))
                continue;
            lo[a] = std::min(lo[a], c.value());
            hi[a] = std::max(hi[a], c.value());
        }
    }
    for (const MaskedCell& m : mask.cells) {
        if (imputed.attribute(m.attr).kind == AttrKind::continuous) {
            lo[m.attr] = std::min(lo[m.attr], m.original.value());
            hi[m.attr] = std::max(hi[m.attr], m.original.value());
        }
    }

    for (const MaskedCell& m : mask.cells) {
        const Cell& got = imputed.cell(m.row, m.attr);
        if (got.is_missing())
            throw IncompleteImputationError("masked cell (" + std::to_string(m.row) + ", " +
                                            std::to_string(m.attr) + ") is still missing");
        ++attr_total[m.attr];
        bool correct;
        if (imputed.attribute(m.attr).kind == AttrKind::continuous) {
            const auto& edges = bin_edges.at(m.attr);
            correct = edges.size() >= 2
                          ? bin_of(got.value(), edges) == bin_of(m.original.value(), edges)
                          : got.value() == m.original.value();
            double err = got.value() - m.original.value();
            sq_err[m.attr] += err * err;
        } else {
            correct = got.token_index() == m.original.token_index();
        }
        if (correct) {
            ++attr_correct[m.attr];
            ++frag.correct;
        }
    }

    frag.accuracy = mask.cells.empty()
                        ? 1.0
                        : static_cast<double>(frag.correct) / static_cast<double>(mask.cells.size());
    frag.per_attr_accuracy.assign(n_attrs, std::numeric_limits<double>::quiet_NaN());
    double nrmse_sum = 0.0;
    int nrmse_n = 0;
    for (size_t a = 0; a < n_attrs; ++a) {
        if (attr_total[a] == 0) continue;
        frag.per_attr_accuracy[a] =
            static_cast<double>(attr_correct[a]) / static_cast<double>(attr_total[a]);
        if (imputed.attribute(a).kind == AttrKind::continuous) {
            double range = hi[a] - lo[a];
            double rmse = std::sqrt(sq_err[a] / static_cast<double>(attr_total[a]));
            nrmse_sum += range > 0 ? rmse / range : (rmse > 0 ? 1.0 : 0.0);
            ++nrmse_n;
        }
    }
    frag.nrmse = nrmse_n ? nrmse_sum / nrmse_n : std::numeric_limits<double>::quiet_NaN();
    return frag;
}

namespace {

Dataset resolve_dataset(const ExperimentSpec& spec, const std::string& name) {
    if (!spec.data_dir.empty()) {
        std::filesystem::path p = spec.data_dir / name;
        if (std::filesystem::exists(p))
            return load_table_file(p, format_from_path(p));
    }
    return make_benchmark(name);
}

void fill_counters(RunMetrics& m, const ImputeResult& result, const CorruptionMask& mask) {
    for (const ImputationOutcome& o : result.outcomes) {
        if (!mask.contains(o.row, o.attr)) continue;
        switch (o.method) {
            case ImputeMethod::rule: ++m.n_rule; break;
            case ImputeMethod::knn: ++m.n_knn; break;
            case ImputeMethod::global_fallback: ++m.n_global; break;
        }
    }
    m.n_mask = static_cast<int64_t>(mask.cells.size());
    m.ar_coverage =
        m.n_mask ? static_cast<double>(m.n_rule) / static_cast<double>(m.n_mask) : 0.0;
    m.rule_count = result.rule_count;
    m.mine_ms = result.mine_ms;
    m.impute_ms = result.impute_ms;
}

struct CoordKey {
    std::string dataset;
    int method;
    double min_sup, min_conf, p;
    int k;
    double missing_rate;

    auto tie() const { return std::tie(dataset, method, min_sup, min_conf, p, k, missing_rate); }
    bool operator<(const CoordKey& o) const { return tie() < o.tie(); }
};

CoordKey key_of(const RunMetrics& m) {
    return {m.dataset, static_cast<int>(m.method), m.min_sup, m.min_conf, m.p, m.k,
            m.missing_rate};
}

}  // namespace

std::vector<RunMetrics> run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<RunMetrics> metrics;

    for (const std::string& name : spec.datasets) {
        Dataset original = resolve_dataset(spec, name);
        for (double rate : spec.missing_rate) {
            for (int seed_idx = 0; seed_idx < spec.seeds; ++seed_idx) {
                // methods and mining axes see the same corrupted data
                uint64_t run_seed = derive_seed(
                    derive_seed(spec.master_seed, name + "/" + format_double(rate)),
                    static_cast<uint64_t>(seed_idx));
                Dataset corrupted;
                CorruptionMask mask;
                try {
                    std::tie(corrupted, mask) =
                        inject_missing(original, rate, run_seed, spec.protect_class);
                } catch (const std::exception& e) {
                    RunMetrics m;
                    m.dataset = name;
                    m.missing_rate = rate;
                    m.seed_index = seed_idx;
                    m.failed = true;
                    m.error = e.what();
                    metrics.push_back(std::move(m));
                    continue;
                }

                // knn_only ignores the mining axes and p; one run per k is
                // enough for this corrupted table
                std::map<int, RunMetrics> knn_cache;
                std::optional<PreparedRules> prepared_plain;

                for (double sup : spec.min_sup) {
                    for (double conf : spec.min_conf) {
                        HmitConfig base;
                        base.mining = {sup, conf, spec.max_itemset_len};
                        base.bins = spec.bins;
                        base.bin_strategy = spec.bin_strategy;
                        base.p_denominator = spec.p_denominator;

                        std::optional<PreparedRules> prepared;
                        for (double pv : spec.p) {
                            for (int kv : spec.k) {
                                for (Method method : spec.methods) {
                                    RunMetrics m;
                                    m.dataset = name;
                                    m.method = method;
                                    m.min_sup = sup;
                                    m.min_conf = conf;
                                    m.p = pv;
                                    m.k = kv;
                                    m.missing_rate = rate;
                                    m.seed_index = seed_idx;

                                    if (method == Method::knn_only) {
                                        auto hit = knn_cache.find(kv);
                                        if (hit != knn_cache.end()) {
                                            RunMetrics copy = hit->second;
                                            copy.min_sup = sup;
                                            copy.min_conf = conf;
                                            copy.p = pv;
                                            metrics.push_back(std::move(copy));
                                            continue;
                                        }
                                    }

                                    try {
                                        HmitConfig cfg = base;
                                        cfg.p = pv;
                                        cfg.k = kv;
                                        cfg.rules_enabled = method != Method::knn_only;
                                        cfg.matching = method == Method::full_hmit
                                                           ? Matching::full
                                                           : Matching::partial;
                                        auto& prep = method == Method::knn_only ? prepared_plain
                                                                                : prepared;
                                        if (!prep) prep = prepare_rules(corrupted, cfg);
                                        ImputeResult result =
                                            impute_prepared(corrupted, *prep, cfg);
                                        ScoreFragment frag =
                                            score(result.imputed, mask, result.bin_edges);
                                        m.accuracy = frag.accuracy;
                                        m.per_attr_accuracy = frag.per_attr_accuracy;
                                        m.nrmse = frag.nrmse;
                                        fill_counters(m, result, mask);
                                    } catch (const std::exception& e) {
                                        m.failed = true;
                                        m.error = e.what();
                                    }
                                    if (method == Method::knn_only) knn_cache.emplace(kv, m);
                                    metrics.push_back(std::move(m));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    if (!spec.timings) {
        for (RunMetrics& m : metrics) {
            m.mine_ms = 0.0;
            m.impute_ms = 0.0;
        }
    }

    std::stable_sort(metrics.begin(), metrics.end(), [](const RunMetrics& a, const RunMetrics& b) {
        CoordKey ka = key_of(a), kb = key_of(b);
        if (ka < kb) return true;
        if (kb < ka) return false;
        return a.seed_index < b.seed_index;
    });
    return metrics;
}

namespace {

struct Aggregate {
    CoordKey key;
    std::vector<double> accuracy, coverage, nrmse, mine_ms, impute_ms;
};

double mean(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// NaN-free mean over the entries that are defined (all-NaN -> NaN)
double mean_defined(const std::vector<double>& v) {
    std::vector<double> def;
    for (double x : v)
        if (!std::isnan(x)) def.push_back(x);
    return mean(def);
}

std::vector<Aggregate> aggregate(const std::vector<RunMetrics>& metrics) {
    if (metrics.empty()) throw EmptyMetricsError("no metrics to export");
    std::vector<Aggregate> out;
    std::map<CoordKey, size_t> index;
    size_t skipped = 0;
    for (const RunMetrics& m : metrics) {
        if (m.failed) {
            ++skipped;
            continue;
        }
        CoordKey key = key_of(m);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            out.push_back({key, {}, {}, {}, {}, {}});
        }
        Aggregate& agg = out[it->second];
        agg.accuracy.push_back(m.accuracy);
        agg.coverage.push_back(m.ar_coverage);
        agg.nrmse.push_back(m.nrmse);
        agg.mine_ms.push_back(m.mine_ms);
        agg.impute_ms.push_back(m.impute_ms);
    }
    if (out.empty()) throw EmptyMetricsError("every run failed; nothing to export");
    if (skipped)
        std::cerr << "[bench] " << skipped << " failed run(s) excluded from the report\n";
    std::sort(out.begin(), out.end(),
              [](const Aggregate& a, const Aggregate& b) { return a.key < b.key; });
    return out;
}

std::string fmt(double v, const char* spec) {
    if (std::isnan(v)) return "";
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

void export_report(const std::vector<RunMetrics>& metrics, ReportFormat format,
                   std::ostream& out) {
    std::vector<Aggregate> aggs = aggregate(metrics);
    if (format == ReportFormat::csv) {
        out << "dataset,method,min_sup,min_conf,p,k,missing_rate,seeds,accuracy_mean,"
               "accuracy_sd,ar_coverage_mean,nrmse_mean,mine_ms,impute_ms\n";
        for (const Aggregate& a : aggs) {
            out << a.key.dataset << "," << to_string(static_cast<Method>(a.key.method)) << ","
                << fmt(a.key.min_sup, "%.6g") << "," << fmt(a.key.min_conf, "%.6g") << ","
                << fmt(a.key.p, "%.6g") << "," << a.key.k << ","
                << fmt(a.key.missing_rate, "%.6g") << "," << a.accuracy.size() << ","
                << fmt(mean(a.accuracy), "%.6f") << "," << fmt(sample_sd(a.accuracy), "%.6f")
                << "," << fmt(mean(a.coverage), "%.6f") << ","
                << fmt(mean_defined(a.nrmse), "%.6f") << "," << fmt(mean(a.mine_ms), "%.3f")
                << "," << fmt(mean(a.impute_ms), "%.3f") << "\n";
        }
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Aggregate& a : aggs) {
        nlohmann::ordered_json j;
        j["dataset"] = a.key.dataset;
        j["method"] = to_string(static_cast<Method>(a.key.method));
        j["min_sup"] = a.key.min_sup;
        j["min_conf"] = a.key.min_conf;
        j["p"] = a.key.p;
        j["k"] = a.key.k;
        j["missing_rate"] = a.key.missing_rate;
        j["seeds"] = a.accuracy.size();
        j["accuracy_mean"] = mean(a.accuracy);
        j["accuracy_sd"] = sample_sd(a.accuracy);
        j["ar_coverage_mean"] = mean(a.coverage);
        double nr = mean_defined(a.nrmse);
        if (std::isnan(nr))
            j["nrmse_mean"] = nullptr;
        else
            j["nrmse_mean"] = nr;
        j["mine_ms"] = mean(a.mine_ms);
        j["impute_ms"] = mean(a.impute_ms);
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << "\n";
}

void export_report_file(const std::vector<RunMetrics>& metrics, ReportFormat format,
                        const std::filesystem::path& out) {
    std::ofstream f(out);
    if (!f) throw IoError("cannot write " + out.string());
    export_report(metrics, format, f);
    if (!f) throw IoError("write failed for " + out.string());
}

void export_imputed(const Dataset& imputed, TableFormat format,
                    const std::filesystem::path& out) {
    if (imputed.missing_count() != 0)
        throw IncompleteImputationError("dataset still has missing cells");
    save_table_file(imputed, out, format);
}

}  // namespace hmit
