#include "hmit/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmit/bench.hpp"
#include "hmit/corruption.hpp"
#include "hmit/fetch.hpp"
#include "hmit/synthetic.hpp"

namespace hmit {

namespace {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// All options are carried as strings so a flat JSON config file can supply
// any of them; precedence is flag > config file > built-in default.
class Options {
public:
    explicit Options(CLI::App* cmd) : cmd_(cmd) {}

    void add(const std::string& name, const std::string& def, const std::string& help) {
        values_[name] = def;
        opts_[name] = cmd_->add_option("--" + name, values_[name], help + " [" + (def.empty() ? "none" : def) + "]");
    }

    void apply_config(const nlohmann::json& cfg) {
        for (const auto& [key, val] : cfg.items()) {
            auto it = opts_.find(key);
            if (it == opts_.end()) continue;  // other subcommands own this key
            if (it->second->count() > 0) continue;  // flags override the file
            if (val.is_string())
                values_[key] = val.get<std::string>();
            else
                values_[key] = val.dump();
        }
    }

    bool knows(const std::string& key) const { return opts_.count(key) > 0; }

    const std::string& raw(const std::string& name) const { return values_.at(name); }

    std::string text(const std::string& name) const { return values_.at(name); }

    // "0.02" or "2%"
    double fraction(const std::string& name) const {
        return parse_fraction(values_.at(name), name);
    }

    std::vector<double> fraction_list(const std::string& name) const {
        std::vector<double> out;
        for (const std::string& tok : split(values_.at(name)))
            out.push_back(parse_fraction(tok, name));
        if (out.empty()) throw UsageError("--" + name + ": empty list");
        return out;
    }

    long integer(const std::string& name) const {
        const std::string& s = values_.at(name);
        long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw UsageError("--" + name + ": expected an integer, got '" + s + "'");
        return v;
    }

    std::vector<int> integer_list(const std::string& name) const {
        std::vector<int> out;
        for (const std::string& tok : split(values_.at(name))) {
            int v = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || p != tok.data() + tok.size())
                throw UsageError("--" + name + ": expected integers, got '" + tok + "'");
            out.push_back(v);
        }
        if (out.empty()) throw UsageError("--" + name + ": empty list");
        return out;
    }

    bool boolean(const std::string& name) const {
        const std::string& s = values_.at(name);
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw UsageError("--" + name + ": expected true/false, got '" + s + "'");
    }

    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    }

    static double parse_fraction(const std::string& text, const std::string& name) {
        std::string s = text;
        bool percent = false;
        if (!s.empty() && s.back() == '%') {
            percent = true;
            s.pop_back();
        }
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return percent ? v / 100.0 : v;
        } catch (const std::exception&) {
            throw UsageError("--" + name + ": expected a fraction like 0.02 or 2%, got '" + text +
                             "'");
        }
    }

private:
    CLI::App* cmd_;
    std::map<std::string, std::string> values_;
    std::map<std::string, CLI::Option*> opts_;
};

TableFormat parse_format(const std::string& s, const std::filesystem::path& path,
                         const std::string& flag) {
    if (s == "auto") return format_from_path(path);
    if (s == "csv") return TableFormat::csv;
    if (s == "arff") return TableFormat::arff;
    throw UsageError("--" + flag + ": expected csv or arff, got '" + s + "'");
}

HeaderMode parse_header(const std::string& s) {
    if (s == "auto") return HeaderMode::automatic;
    if (s == "yes" || s == "true") return HeaderMode::yes;
    if (s == "no" || s == "false") return HeaderMode::no;
    throw UsageError("--header: expected auto/yes/no, got '" + s + "'");
}

BinStrategy parse_bin_strategy(const std::string& s) {
    if (s == "freq") return BinStrategy::equal_frequency;
    if (s == "width") return BinStrategy::equal_width;
    throw UsageError("--bin-strategy: expected width or freq, got '" + s + "'");
}

PDenominator parse_p_denominator(const std::string& s) {
    if (s == "antecedent") return PDenominator::antecedent;
    if (s == "known") return PDenominator::known_attributes;
    throw UsageError("--p-denominator: expected antecedent or known, got '" + s + "'");
}

Matching parse_matching(const std::string& s) {
    if (s == "partial") return Matching::partial;
    if (s == "full") return Matching::full;
    throw UsageError("--matching: expected partial or full, got '" + s + "'");
}

std::string default_cache_dir() {
    if (const char* env = std::getenv("HMIT_CACHE_DIR")) return env;
    if (const char* home = std::getenv("HOME"))
        return (std::filesystem::path(home) / ".cache" / "hmit").string();
    return ".hmit-cache";
}

Dataset load_input(const Options& o) {
    std::filesystem::path in = o.text("in");
    if (in.empty()) throw UsageError("--in is required");
    LoadOptions lo;
    lo.header = parse_header(o.text("header"));
    if (!o.text("schema").empty()) lo.schema_hint = load_schema_hint(o.text("schema"));
    return load_table_file(in, parse_format(o.text("format"), in, "format"), lo);
}

void add_input_options(Options& o) {
    o.add("in", "", "input table (CSV or ARFF)");
    o.add("format", "auto", "input format: csv, arff, or auto by extension");
    o.add("header", "auto", "CSV header row: auto, yes, no");
    o.add("schema", "", "JSON schema hint file");
}

void add_mining_options(Options& o, const std::string& max_len_default) {
    o.add("min-sup", "0.02", "support threshold, fraction or percent");
    o.add("min-conf", "0.60", "confidence threshold, fraction or percent");
    o.add("bins", "5", "bins for continuous attributes");
    o.add("bin-strategy", "freq", "discretization: width (equal width) or freq (equal frequency)");
    o.add("max-len", max_len_default, "itemset length cap, 0 = unbounded");
}

int cmd_fetch(const Options& o) {
    if (o.text("manifest").empty()) throw UsageError("--manifest is required");
    auto entries = load_manifest(o.text("manifest"));
    auto paths = fetch_benchmarks(entries, o.text("cache-dir"));
    for (const auto& p : paths) std::cout << p.string() << "\n";
    return 0;
}

int cmd_inject(const Options& o) {
    Dataset ds = load_input(o);
    auto [corrupted, mask] =
        inject_missing(ds, o.fraction("rate"), static_cast<uint64_t>(o.integer("seed")),
                       o.boolean("protect-class"));
    std::filesystem::path out = o.text("out");
    if (out.empty()) throw UsageError("--out is required");
    save_table_file(corrupted, out, format_from_path(out));
    if (!o.text("mask").empty()) save_mask(mask, ds, o.text("mask"));
    std::cerr << "[inject] masked " << mask.cells.size() << " of " << ds.rows() * ds.attr_count()
              << " cells -> " << out.string() << "\n";
    return 0;
}

int cmd_mine(const Options& o) {
    Dataset ds = load_input(o);
    Dataset disc = discretize(ds, static_cast<int>(o.integer("bins")),
                              parse_bin_strategy(o.text("bin-strategy")));
    ItemCodebook cb = ItemCodebook::build(disc);
    auto transactions = to_transactions(disc, cb);
    MiningParams params{o.fraction("min-sup"), o.fraction("min-conf"),
                        static_cast<int>(o.integer("max-len"))};
    auto frequent = mine_frequent(transactions, params, cb);
    auto rules = generate_rules(frequent, params, cb);
    std::cerr << "[mine] " << frequent.size() << " frequent itemsets, " << rules.size()
              << " rules\n";
    if (o.text("out").empty() || o.text("out") == "-") {
        dump_rules(rules, std::cout);
    } else {
        std::ofstream f(o.text("out"));
        if (!f) throw IoError("cannot write " + o.text("out"));
        dump_rules(rules, f);
    }
    return 0;
}

HmitConfig config_from(const Options& o) {
    HmitConfig cfg;
    cfg.mining = {o.fraction("min-sup"), o.fraction("min-conf"),
                  static_cast<int>(o.integer("max-len"))};
    cfg.p = o.fraction("p");
    cfg.matching = parse_matching(o.text("matching"));
    cfg.k = static_cast<int>(o.integer("k"));
    cfg.p_denominator = parse_p_denominator(o.text("p-denominator"));
    cfg.bins = static_cast<int>(o.integer("bins"));
    cfg.bin_strategy = parse_bin_strategy(o.text("bin-strategy"));
    return cfg;
}

int cmd_impute(const Options& o) {
    Dataset ds = load_input(o);
    HmitConfig cfg = config_from(o);
    ImputeResult result = impute_all(ds, cfg);

    std::filesystem::path out = o.text("out");
    if (out.empty()) throw UsageError("--out is required");
    save_table_file(result.imputed, out, format_from_path(out));

    std::string log_path = o.text("log");
    if (log_path != "none") {
        if (log_path.empty()) log_path = out.string() + ".log.jsonl";
        std::ofstream log(log_path);
        if (!log) throw IoError("cannot write " + log_path);
        write_outcome_log(result, ds, log);
    }

    size_t by_rule = 0, by_knn = 0, by_global = 0;
    for (const auto& oc : result.outcomes) {
        if (oc.method == ImputeMethod::rule) ++by_rule;
        else if (oc.method == ImputeMethod::knn) ++by_knn;
        else ++by_global;
    }
    std::cerr << "[impute] " << result.outcomes.size() << " cells: " << by_rule << " by rule, "
              << by_knn << " by knn, " << by_global << " by global fallback; " << result.rule_count
              << " rules; mine " << result.mine_ms << " ms, impute " << result.impute_ms
              << " ms -> " << out.string() << "\n";
    return 0;
}

int cmd_bench(const Options& o) {
    ReportFormat fmt;
    std::string rf = o.text("report");
    if (rf == "csv") fmt = ReportFormat::csv;
    else if (rf == "json") fmt = ReportFormat::json;
    else throw UsageError("--report: expected csv or json, got '" + rf + "'");

    ExperimentSpec spec;
    spec.datasets = Options::split(o.text("datasets"));
    spec.methods.clear();
    for (const std::string& m : Options::split(o.text("methods")))
        spec.methods.push_back(method_from_string(m));
    spec.min_sup = o.fraction_list("min-sup");
    spec.min_conf = o.fraction_list("min-conf");
    spec.p = o.fraction_list("p");
    spec.k = o.integer_list("k");
    spec.missing_rate = o.fraction_list("rate");
    spec.seeds = static_cast<int>(o.integer("seeds"));
    spec.master_seed = static_cast<uint64_t>(o.integer("seed"));
    spec.bins = static_cast<int>(o.integer("bins"));
    spec.bin_strategy = parse_bin_strategy(o.text("bin-strategy"));
    spec.max_itemset_len = static_cast<int>(o.integer("max-len"));
    spec.protect_class = o.boolean("protect-class");
    spec.p_denominator = parse_p_denominator(o.text("p-denominator"));
    spec.data_dir = o.text("data-dir");
    spec.timings = o.boolean("timings");

    auto metrics = run_sweep(spec);

    if (o.text("out").empty() || o.text("out") == "-")
        export_report(metrics, fmt, std::cout);
    else
        export_report_file(metrics, fmt, o.text("out"));
    return 0;
}

nlohmann::json read_config(int argc, const char* const* argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) path = a.substr(9);
    }
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold one flat JSON object");
    return j;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"hmit - hybrid missing-value imputation toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat JSON config file; flags override it");

    auto* fetch = app.add_subcommand("fetch-data", "download benchmark datasets from a manifest");
    fetch->fallthrough();
    Options fo(fetch);
    fo.add("manifest", "", "JSON manifest: name -> {url, sha256}");
    fo.add("cache-dir", default_cache_dir(), "download cache (env HMIT_CACHE_DIR overrides)");

    auto* inject = app.add_subcommand("inject", "corrupt a dataset with random missing cells");
    inject->fallthrough();
    Options io(inject);
    add_input_options(io);
    io.add("rate", "0.20", "fraction of eligible cells to blank");
    io.add("seed", "1", "corruption seed");
    io.add("protect-class", "true", "keep the class attribute intact");
    io.add("out", "", "corrupted output table (format by extension)");
    io.add("mask", "", "where to write the ground-truth mask JSON");

    auto* mine = app.add_subcommand("mine", "mine association rules from a table");
    mine->fallthrough();
    Options mo(mine);
    add_input_options(mo);
    add_mining_options(mo, "0");
    mo.add("out", "-", "rule dump destination, - for stdout");

    auto* impute = app.add_subcommand("impute", "fill missing cells with HMiT");
    impute->fallthrough();
    Options po(impute);
    add_input_options(po);
    add_mining_options(po, "0");
    po.add("p", "0.8", "partial matching threshold");
    po.add("p-denominator", "antecedent", "match fraction denominator: antecedent or known");
    po.add("matching", "partial", "rule firing mode: partial or full");
    po.add("k", "10", "kNN fallback neighbours");
    po.add("out", "", "imputed output table (format by extension)");
    po.add("log", "", "outcome log path, none to disable [<out>.log.jsonl]");

    auto* bench = app.add_subcommand("bench", "sweep the benchmark experiments");
    bench->fallthrough();
    Options bo(bench);
    bo.add("datasets", "heart,tictac,car,crx", "replica names or files under --data-dir");
    bo.add("methods", "partial,full,knn", "methods to run");
    bo.add("min-sup", "0.02", "support axis (comma list)");
    bo.add("min-conf", "0.60", "confidence axis (comma list)");
    bo.add("p", "0.8", "partial threshold axis (comma list)");
    bo.add("k", "10", "neighbour count axis (comma list)");
    bo.add("rate", "0.1,0.2,0.3,0.4", "missing rate axis (comma list)");
    bo.add("seeds", "5", "seeds per coordinate");
    bo.add("seed", "20060101", "master seed");
    bo.add("bins", "5", "bins for continuous attributes");
    bo.add("bin-strategy", "freq", "width or freq");
    bo.add("max-len", "6", "itemset length cap");
    bo.add("protect-class", "true", "keep class attributes intact");
    bo.add("p-denominator", "antecedent", "antecedent or known");
    bo.add("data-dir", "", "directory of fetched dataset files");
    bo.add("timings", "true", "false zeroes timing columns for reproducible diffs");
    bo.add("report", "csv", "report format: csv or json");
    bo.add("out", "-", "report destination, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 1;
    }

    try {
        nlohmann::json cfg = read_config(argc, argv);
        for (const auto& [key, val] : cfg.items())
            if (!fo.knows(key) && !io.knows(key) && !mo.knows(key) && !po.knows(key) &&
                !bo.knows(key))
                throw UsageError("config file: unknown option '" + key + "'");
        fo.apply_config(cfg);
        io.apply_config(cfg);
        mo.apply_config(cfg);
        po.apply_config(cfg);
        bo.apply_config(cfg);

        if (fetch->parsed()) return cmd_fetch(fo);
        if (inject->parsed()) return cmd_inject(io);
        if (mine->parsed()) return cmd_mine(mo);
        if (impute->parsed()) return cmd_impute(po);
        if (bench->parsed()) return cmd_bench(bo);
        std::cerr << app.help();
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace hmit
