#include "hmit/synthetic.hpp"

#include <cmath>

#include "hmit/rng.hpp"

namespace hmit {

namespace {

const std::vector<double> kStateWeights = {0.24, 0.21, 0.17, 0.12, 0.09, 0.07, 0.05, 0.05};
constexpr int kStates = 8;

// Balanced state bit for the XOR attribute; deliberately not a block map so
// neither the class nor a pin predicts it on its own.
constexpr int kStateBit[kStates] = {0, 1, 1, 0, 0, 1, 0, 1};

struct Builder {
    Dataset ds;
    std::vector<int> state;
    Rng rng;

    Builder(std::vector<AttributeSchema> schema, size_t rows, uint64_t seed)
        : ds(std::move(schema), rows), rng(seed) {
        state.resize(rows);
        for (size_t r = 0; r < rows; ++r) {
            double u = rng.uniform();
            double acc = 0.0;
            int s = kStates - 1;
            for (int i = 0; i < kStates; ++i) {
                acc += kStateWeights[i];
                if (u < acc) {
                    s = i;
                    break;
                }
            }
            state[r] = s;
        }
    }

    int domain(size_t a) const { return static_cast<int>(ds.attribute(a).categories.size()); }

    int block_peak(int s, int m, int rot) const {
        return (s * m / kStates + rot) % m;
    }

    // Per-state peaked categorical column; noise draws a uniform value.
    void cluster_cat(size_t a, double noise, int rot = 0) {
        int m = domain(a);
        for (size_t r = 0; r < ds.rows(); ++r) {
            int tok = rng.chance(noise) ? static_cast<int>(rng.below(m))
                                        : block_peak(state[r], m, rot);
            ds.cell(r, a) = Cell::token(tok);
        }
    }

    void cluster_num(size_t a, double base, double step, double sd) {
        for (size_t r = 0; r < ds.rows(); ++r)
            ds.cell(r, a) = Cell::number(base + step * state[r] + sd * rng.normal());
    }

    // Right-skewed positive column (income-like).
    void cluster_lognum(size_t a, double base, double step, double sd) {
        for (size_t r = 0; r < ds.rows(); ++r)
            ds.cell(r, a) = Cell::number(std::exp(base + step * state[r] + sd * rng.normal()));
    }

    // Two pins with different phases identify the state jointly; alone each
    // one narrows it to a block.
    void pin_quaternary(size_t a, int which, double noise) {
        for (size_t r = 0; r < ds.rows(); ++r) {
            int s = state[r];
            int tok = which == 0 ? s / 2 : ((s + 1) % kStates) / 2;
            if (rng.chance(noise)) tok = static_cast<int>(rng.below(4));
            ds.cell(r, a) = Cell::token(tok);
        }
    }

    void pin_ternary(size_t a, int which, double noise) {
        for (size_t r = 0; r < ds.rows(); ++r) {
            int s = state[r];
            int tok = which == 0 ? s / 3 : s % 3;
            if (rng.chance(noise)) tok = static_cast<int>(rng.below(3));
            ds.cell(r, a) = Cell::token(tok);
        }
    }

    // Fair coin over two designated tokens, independent of the state.
    void coin(size_t a, int hot0, int hot1, double rare) {
        int m = domain(a);
        for (size_t r = 0; r < ds.rows(); ++r) {
            int tok;
            if (rare > 0.0 && rng.chance(rare))
                tok = static_cast<int>(rng.below(m));
            else
                tok = rng.chance(0.5) ? hot1 : hot0;
            ds.cell(r, a) = Cell::token(tok);
        }
    }

    // XOR of the state bit with the coin column (fill the coin first). The
    // column is a fair coin given the state alone, so every predictive rule
    // for it must include the coin attribute.
    void xor_target(size_t a, size_t coin_attr, int coin_hot1, int out0, int out1, double noise) {
        int m = domain(a);
        for (size_t r = 0; r < ds.rows(); ++r) {
            if (rng.chance(noise)) {
                ds.cell(r, a) = Cell::token(static_cast<int>(rng.below(m)));
                continue;
            }
            int bit = kStateBit[state[r]] ^ (ds.cell(r, coin_attr).token_index() == coin_hot1);
            ds.cell(r, a) = Cell::token(bit ? out1 : out0);
        }
    }
};

AttributeSchema cat(std::string name, std::vector<std::string> values, bool is_class = false) {
    AttributeSchema s;
    s.name = std::move(name);
    s.kind = AttrKind::categorical;
    s.is_class = is_class;
    s.categories = std::move(values);
    return s;
}

AttributeSchema num(std::string name) {
    AttributeSchema s;
    s.name = std::move(name);
    s.kind = AttrKind::continuous;
    return s;
}

Dataset make_heart() {
    std::vector<AttributeSchema> schema = {
        num("age"),
        cat("sex", {"female", "male"}),
        cat("cp", {"typical", "atypical", "nonanginal", "asymptomatic"}),
        num("trestbps"),
        num("chol"),
        cat("fbs", {"f", "t"}),
        cat("restecg", {"normal", "stt", "hypertrophy"}),
        num("thalach"),
        cat("exang", {"no", "yes"}),
        num("oldpeak"),
        cat("slope", {"up", "flat", "down"}),
        cat("ca", {"c0", "c1", "c2", "c3"}),
        cat("thal", {"normal", "reversible", "fixed"}),
        cat("class", {"absent", "present"}, true),
    };
    Builder b(std::move(schema), 270, derive_seed(0x68656172, "heart"));
    b.cluster_num(0, 34.0, 4.2, 5.0);      // age
    b.coin(1, 0, 1, 0.0);                  // sex
    b.pin_quaternary(2, 0, 0.04);          // cp
    b.cluster_num(3, 110.0, 5.5, 8.0);     // trestbps
    b.cluster_num(4, 185.0, 16.0, 22.0);   // chol
    b.cluster_cat(6, 0.08, 1);             // restecg
    b.cluster_num(7, 195.0, -12.0, 10.0);  // thalach
    b.cluster_cat(8, 0.07, 0);             // exang
    b.cluster_num(9, 0.1, 0.5, 0.4);       // oldpeak
    b.cluster_cat(10, 0.09, 2);            // slope
    b.pin_quaternary(11, 1, 0.04);         // ca
    b.cluster_cat(12, 0.09, 1);            // thal
    b.cluster_cat(13, 0.05, 0);            // class
    b.xor_target(5, 1, 1, 0, 1, 0.04);     // fbs = bit(state) ^ sex
    b.ds.provenance = "synthetic:heart";
    return std::move(b.ds);
}

Dataset make_tictac() {
    std::vector<std::string> xob = {"x", "o", "b"};
    std::vector<AttributeSchema> schema = {
        cat("tl", xob), cat("tm", xob), cat("tr", xob),
        cat("ml", xob), cat("mm", xob), cat("mr", xob),
        cat("bl", xob), cat("bm", xob), cat("br", xob),
        cat("class", {"positive", "negative"}, true),
    };
    Builder b(std::move(schema), 958, derive_seed(0x74696374, "tictac"));
    b.pin_ternary(0, 0, 0.04);   // tl
    b.pin_ternary(1, 1, 0.04);   // tm
    b.cluster_cat(3, 0.08, 1);   // ml
    b.coin(4, 0, 1, 0.04);       // mm
    b.cluster_cat(5, 0.10, 2);   // mr
    b.cluster_cat(6, 0.07, 0);   // bl
    b.cluster_cat(7, 0.12, 1);   // bm
    b.cluster_cat(8, 0.09, 2);   // br
    b.cluster_cat(9, 0.05, 0);   // class
    b.xor_target(2, 4, 1, 0, 1, 0.04);  // tr = bit(state) ^ mm
    b.ds.provenance = "synthetic:tictac";
    return std::move(b.ds);
}

Dataset make_car() {
    std::vector<AttributeSchema> schema = {
        cat("buying", {"vhigh", "high", "med", "low"}),
        cat("maint", {"vhigh", "high", "med", "low"}),
        cat("doors", {"2", "3", "4", "5more"}),
        cat("persons", {"2", "4", "more"}),
        cat("lug_boot", {"small", "med", "big"}),
        cat("safety", {"low", "med", "high"}),
        cat("class", {"unacc", "acc", "good", "vgood"}, true),
    };
    Builder b(std::move(schema), 1728, derive_seed(0x63617265, "car"));
    b.pin_quaternary(0, 0, 0.04);  // buying
    b.pin_quaternary(1, 1, 0.04);  // maint
    b.coin(2, 0, 2, 0.04);         // doors: 2 vs 4, rare 3/5more
    b.cluster_cat(3, 0.09, 0);     // persons
    b.cluster_cat(4, 0.08, 1);     // lug_boot
    b.cluster_cat(6, 0.04, 0);     // class
    b.xor_target(5, 2, 2, 0, 2, 0.05);  // safety = bit(state) ^ doors, low/high
    b.ds.provenance = "synthetic:car";
    return std::move(b.ds);
}

Dataset make_crx() {
    std::vector<AttributeSchema> schema = {
        cat("A1", {"b", "a"}),
        num("A2"),
        num("A3"),
        cat("A4", {"u", "y", "l"}),
        cat("A5", {"g", "p", "gg"}),
        cat("A6", {"c", "q", "w", "i", "aa", "ff", "k", "m"}),
        cat("A7", {"v", "h", "bb", "ff", "z"}),
        num("A8"),
        cat("A9", {"t", "f"}),
        cat("A10", {"t", "f"}),
        num("A11"),
        cat("A12", {"t", "f"}),
        cat("A13", {"g", "s", "p"}),
        num("A14"),
        num("A15"),
        cat("class", {"+", "-"}, true),
    };
    Builder b(std::move(schema), 690, derive_seed(0x63727800, "crx"));
    b.coin(0, 0, 1, 0.0);                 // A1
    b.cluster_num(1, 20.0, 4.5, 5.0);     // A2
    b.cluster_num(2, 0.8, 1.1, 1.0);      // A3
    b.pin_ternary(3, 0, 0.04);            // A4
    b.cluster_cat(4, 0.08, 0);            // A5
    b.cluster_cat(5, 0.12, 2);            // A6
    b.cluster_cat(6, 0.10, 1);            // A7
    b.cluster_num(7, 0.3, 0.75, 0.7);     // A8
    b.cluster_cat(9, 0.08, 1);            // A10
    b.cluster_num(10, 0.2, 0.9, 0.9);     // A11
    b.cluster_cat(11, 0.15, 0);           // A12
    b.pin_ternary(12, 1, 0.04);           // A13
    b.cluster_num(13, 70.0, 26.0, 30.0);  // A14
    b.cluster_lognum(14, 2.0, 0.5, 0.6);  // A15
    b.cluster_cat(15, 0.05, 0);           // class
    b.xor_target(8, 0, 1, 0, 1, 0.04);    // A9 = bit(state) ^ A1
    b.ds.provenance = "synthetic:crx";
    return std::move(b.ds);
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = {"heart", "tictac", "car", "crx"};
    return names;
}

Dataset make_benchmark(const std::string& name) {
    if (name == "heart") return make_heart();
    if (name == "tictac") return make_tictac();
    if (name == "car") return make_car();
    if (name == "crx") return make_crx();
    throw InvalidArgument("unknown benchmark dataset '" + name + "'");
}

}  // namespace hmit
