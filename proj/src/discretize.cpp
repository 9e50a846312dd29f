#include "hmit/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hmit {

namespace {

std::vector<double> widen_constant(double v) {
    double hi = v + 1.0;
    if (!(hi > v)) hi = std::nextafter(v, std::numeric_limits<double>::infinity());
    return {v, hi};
}

std::vector<double> equal_width_edges(double lo, double hi, int bins) {
    std::vector<double> edges(bins + 1);
    for (int i = 0; i <= bins; ++i)
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
    edges.front() = lo;
    edges.back() = hi;
    // floating-point rounding can collapse neighbors on tiny ranges
    std::vector<double> out;
    for (double e : edges)
        if (out.empty() || e > out.back()) out.push_back(e);
    if (out.size() < 2) return widen_constant(lo);
    return out;
}

std::vector<double> equal_frequency_edges(std::vector<double> values, int bins) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    std::vector<double> out{values.front()};
    for (int i = 1; i < bins; ++i) {
        double cut = values[i * n / bins];
        if (cut > out.back() && cut < values.back()) out.push_back(cut);
    }
    out.push_back(values.back());  // strictly above every interior cut
    return out;
}

}  // namespace

int32_t bin_of(double v, const std::vector<double>& edges) {
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto idx = static_cast<int32_t>(it - edges.begin()) - 1;
    int32_t last = static_cast<int32_t>(edges.size()) - 2;
    return std::clamp(idx, 0, last);
}

double bin_midpoint(int32_t b, const std::vector<double>& edges) {
    return (edges[b] + edges[b + 1]) / 2.0;
}

Dataset discretize(const Dataset& ds, int bins, BinStrategy strategy) {
    if (bins < 1) throw InvalidArgument("bins must be >= 1");
    if (ds.rows() == 0) throw EmptyDatasetError("cannot discretize an empty dataset");

    Dataset out = ds;
    for (size_t a = 0; a < out.attr_count(); ++a) {
        AttributeSchema& s = out.attribute(a);
        if (s.kind != AttrKind::continuous) continue;

        std::vector<double> values;
        values.reserve(ds.rows());
        for (size_t r = 0; r < ds.rows(); ++r) {
            const Cell& c = ds.cell(r, a);
            if (!c.is_missing()) values.push_back(c.value());
        }

        if (values.empty()) {
            s.bin_edges = {0.0, 1.0};  // no observations; nothing to map
            continue;
        }
        auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        if (*lo_it == *hi_it) {
            s.bin_edges = widen_constant(*lo_it);
        } else if (strategy == BinStrategy::equal_width) {
            s.bin_edges = equal_width_edges(*lo_it, *hi_it, bins);
        } else {
            s.bin_edges = equal_frequency_edges(values, bins);
        }

        for (size_t r = 0; r < out.rows(); ++r) {
            Cell& c = out.cell(r, a);
            if (!c.is_missing()) c = Cell::token(bin_of(c.value(), s.bin_edges));
        }
    }
    return out;
}

}  // namespace hmit
