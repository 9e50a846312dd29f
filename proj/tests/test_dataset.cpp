#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hmit/codebook.hpp"
#include "hmit/corruption.hpp"
#include "hmit/discretize.hpp"
#include "hmit/io.hpp"
#include "hmit/rng.hpp"

using namespace hmit;

namespace {

Dataset from_csv(const std::string& text, const LoadOptions& opts = {}) {
    std::istringstream in(text);
    return load_table(in, TableFormat::csv, opts);
}

std::filesystem::path temp_dir() {
    auto p = std::filesystem::temp_directory_path() / "hmit_test_dataset";
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("csv: question mark and empty fields are missing") {
    Dataset ds = from_csv("a,1\nb,2\na,?\n");
    CHECK(ds.rows() == 3);
    CHECK(ds.attr_count() == 2);
    CHECK(ds.cell(2, 1).is_missing());
    CHECK(ds.attribute(0).kind == AttrKind::categorical);
    CHECK(ds.attribute(1).kind == AttrKind::continuous);
    CHECK(ds.cell(1, 1).value() == 2.0);
    CHECK(ds.attribute(1).is_class);  // last column by default

    Dataset empties = from_csv("a,1\nb,\n");
    CHECK(empties.cell(1, 1).is_missing());
}

TEST_CASE("csv: any non-numeric token forces a categorical attribute") {
    Dataset ds = from_csv("1.5,1\nx,2\n");
    CHECK(ds.attribute(0).kind == AttrKind::categorical);
    CHECK(ds.attribute(0).categories == std::vector<std::string>{"1.5", "x"});
}

TEST_CASE("csv: ragged row reports the line number") {
    CHECK_THROWS_WITH_AS(from_csv("a,1\nb\n"), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("csv: empty input") {
    CHECK_THROWS_AS(from_csv(""), EmptyDatasetError);
    CHECK_THROWS_AS(from_csv("\n\n"), EmptyDatasetError);
}

TEST_CASE("csv: header auto-detection") {
    // distinct non-numeric names that never reappear -> header
    Dataset with = from_csv("color,size\nred,1\nblue,2\n");
    CHECK(with.rows() == 2);
    CHECK(with.attribute(0).name == "color");

    // all-categorical data rows with repeats are not mistaken for a header
    Dataset without = from_csv("x,o,x\no,x,o\nx,o,x\n");
    CHECK(without.rows() == 3);
    CHECK(without.attribute(0).name == "attr0");

    // numeric first row is data
    Dataset numeric = from_csv("1,2\n3,4\n");
    CHECK(numeric.rows() == 2);

    LoadOptions force_no;
    force_no.header = HeaderMode::no;
    Dataset forced = from_csv("color,size\nred,1\n", force_no);
    CHECK(forced.rows() == 2);

    LoadOptions force_yes;
    force_yes.header = HeaderMode::yes;
    Dataset names = from_csv("x,o\no,x\n", force_yes);
    CHECK(names.rows() == 1);
    CHECK(names.attribute(1).name == "o");
}

TEST_CASE("csv: schema hint forces kinds and closes categories") {
    LoadOptions opts;
    AttributeSchema h0;
    h0.name = "code";
    h0.kind = AttrKind::categorical;
    h0.categories = {"1", "2"};
    AttributeSchema h1;
    h1.name = "value";
    h1.kind = AttrKind::continuous;
    h1.is_class = true;
    opts.schema_hint = {h0, h1};

    Dataset ds = from_csv("1,10\n2,20\n", opts);
    CHECK(ds.attribute(0).kind == AttrKind::categorical);
    CHECK(ds.cell(0, 0).token_index() == 0);

    CHECK_THROWS_AS(from_csv("3,10\n", opts), ParseError);  // not in declared categories
}

TEST_CASE("arff: declared schema wins") {
    std::string text =
        "% comment\n"
        "@relation toy\n"
        "@attribute outlook {sunny,overcast,rain}\n"
        "@attribute 'temp erature' numeric\n"
        "@attribute play {no,yes}\n"
        "@data\n"
        "rain,71.5,no\n"
        "sunny,?,yes\n";
    std::istringstream in(text);
    Dataset ds = load_table(in, TableFormat::arff);
    CHECK(ds.rows() == 2);
    CHECK(ds.attribute(0).categories == std::vector<std::string>{"sunny", "overcast", "rain"});
    CHECK(ds.attribute(1).name == "temp erature");
    CHECK(ds.attribute(1).kind == AttrKind::continuous);
    CHECK(ds.cell(1, 1).is_missing());
    CHECK(ds.cell(0, 0).token_index() == 2);  // declared order, not first-appearance

    std::istringstream bad("@attribute s string\n@data\nx\n");
    CHECK_THROWS_AS(load_table(bad, TableFormat::arff), ParseError);
}

TEST_CASE("save/load round trip") {
    Dataset ds = from_csv("red,1.25,T\nblue,?,F\nred,3.5,T\n");
    auto dir = temp_dir();

    save_table_file(ds, dir / "t.csv", TableFormat::csv);
    Dataset csv_back = load_table_file(dir / "t.csv", TableFormat::csv);
    CHECK(csv_back.same_content(ds));

    save_table_file(ds, dir / "t.arff", TableFormat::arff);
    Dataset arff_back = load_table_file(dir / "t.arff", TableFormat::arff);
    CHECK(arff_back == ds);  // ARFF keeps category order, so fully structural
}

TEST_CASE("discretize: equal width edge arithmetic") {
    Dataset ds = from_csv("0,x\n2.5,x\n5,x\n8,x\n");
    Dataset out = discretize(ds, 4, BinStrategy::equal_width);
    CHECK(out.attribute(0).bin_edges == std::vector<double>{0, 2, 4, 6, 8});
    CHECK(out.cell(0, 0).token_index() == 0);
    CHECK(out.cell(1, 0).token_index() == 1);
    CHECK(out.cell(2, 0).token_index() == 2);  // value 5 -> [4,6)
    CHECK(out.cell(3, 0).token_index() == 3);  // max lands in the last bin
}

TEST_CASE("discretize: constant and categorical columns") {
    Dataset ds = from_csv("7,a\n7,b\n7,?\n");
    Dataset out = discretize(ds, 4, BinStrategy::equal_frequency);
    CHECK(out.attribute(0).bin_edges.size() == 2);  // single bin
    CHECK(out.cell(0, 0).token_index() == 0);
    CHECK(out.cell(1, 0).token_index() == 0);
    // categorical column unchanged, missing stays missing
    CHECK(out.cell(0, 1) == ds.cell(0, 1));
    CHECK(out.cell(2, 1).is_missing());
}

TEST_CASE("discretize: total and order-preserving") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<AttributeSchema> schema(1);
        schema[0].name = "v";
        schema[0].kind = AttrKind::continuous;
        Dataset ds(schema, 50);
        for (size_t r = 0; r < 50; ++r)
            ds.cell(r, 0) = Cell::number(rng.normal() * (trial % 3 ? 100.0 : 0.001));
        auto strategy = trial % 2 ? BinStrategy::equal_width : BinStrategy::equal_frequency;
        Dataset out = discretize(ds, 1 + static_cast<int>(rng.below(7)), strategy);
        for (size_t i = 0; i < 50; ++i) {
            CHECK(out.cell(i, 0).is_token());  // total
            for (size_t j = 0; j < 50; ++j) {
                if (ds.cell(i, 0).value() <= ds.cell(j, 0).value())
                    CHECK(out.cell(i, 0).token_index() <= out.cell(j, 0).token_index());
            }
        }
    }
}

TEST_CASE("discretize: bins must be positive") {
    Dataset ds = from_csv("1,x\n");
    CHECK_THROWS_AS(discretize(ds, 0, BinStrategy::equal_width), InvalidArgument);
}

TEST_CASE("codebook: attribute-major contiguous ids") {
    Dataset ds = from_csv("a,p\nb,q\nc,p\na,q\n");  // 3 + 2 categories
    ItemCodebook cb = ItemCodebook::build(ds);
    CHECK(cb.item_count() == 5);
    CHECK(cb.attribute_count() == 2);
    CHECK(cb.first_item(0) == 0);
    CHECK(cb.first_item(1) == 3);
    for (int32_t item = 0; item < 5; ++item) {
        auto [attr, tok] = cb.decode(item);
        CHECK(cb.encode(attr, tok) == item);
    }
    CHECK(cb.attribute_of(4) == 1);

    // same schema -> identical codebook
    Dataset ds2 = from_csv("a,p\nb,q\nc,q\na,p\n");
    CHECK(ItemCodebook::build(ds2) == cb);

    // bins count as tokens, even unobserved ones
    Dataset cont = discretize(from_csv("1,x\n2,x\n9,x\n"), 3, BinStrategy::equal_width);
    ItemCodebook cb2 = ItemCodebook::build(cont);
    CHECK(cb2.token_count(0) == 3);

    // raw continuous attribute is an error
    CHECK_THROWS_AS(ItemCodebook::build(from_csv("1,x\n2,x\n")), InvalidArgument);
}

TEST_CASE("transactions: known cells only, one item per attribute") {
    Dataset ds = from_csv("a,?,x\n?,?,?\na,1,x\nb,2,y\n");
    // attr 1 is continuous ("1","2") -> discretize first
    Dataset disc = discretize(ds, 2, BinStrategy::equal_width);
    ItemCodebook cb = ItemCodebook::build(disc);
    auto tx = to_transactions(disc, cb);
    REQUIRE(tx.size() == 4);
    CHECK(tx[0] == std::vector<int32_t>{cb.encode(0, 0), cb.encode(2, 0)});
    CHECK(tx[1].empty());
    CHECK(tx[2].size() == 3);
    for (const auto& t : tx) {
        std::vector<bool> seen(3, false);
        for (int32_t item : t) {
            size_t a = cb.attribute_of(item);
            CHECK(!seen[a]);
            seen[a] = true;
        }
        CHECK(std::is_sorted(t.begin(), t.end()));
    }

    // raw continuous cell -> codebook miss
    CHECK_THROWS_AS(to_transactions(ds, cb), CodebookMissError);
}

namespace {

Dataset grid_dataset(size_t rows, size_t attrs) {
    std::vector<AttributeSchema> schema(attrs + 1);
    for (size_t a = 0; a <= attrs; ++a) {
        schema[a].name = "a" + std::to_string(a);
        schema[a].kind = AttrKind::categorical;
        schema[a].categories = {"0", "1", "2"};
    }
    schema[attrs].is_class = true;
    Dataset ds(schema, rows);
    Rng rng(7);
    for (size_t r = 0; r < rows; ++r)
        for (size_t a = 0; a <= attrs; ++a)
            ds.cell(r, a) = Cell::token(static_cast<int32_t>(rng.below(3)));
    return ds;
}

}  // namespace

TEST_CASE("inject_missing: measure-exact count") {
    Dataset ds = grid_dataset(100, 10);  // 1000 eligible cells + protected class
    auto [corrupted, mask] = inject_missing(ds, 0.2, 99);
    CHECK(mask.cells.size() == 200);
    CHECK(corrupted.missing_count() == 200);
    for (const auto& cell : mask.cells) CHECK(cell.attr != 10);  // class protected

    auto [c2, m2] = inject_missing(ds, 0.2, 99);
    CHECK(c2 == corrupted);  // same seed, same mask
    REQUIRE(m2.cells.size() == mask.cells.size());
    for (size_t i = 0; i < mask.cells.size(); ++i) {
        CHECK(m2.cells[i].row == mask.cells[i].row);
        CHECK(m2.cells[i].attr == mask.cells[i].attr);
    }

    auto [c3, m3] = inject_missing(ds, 0.2, 100);
    CHECK_FALSE(c3 == corrupted);  // different seed, different picks
}

TEST_CASE("inject_missing: rate zero, restore round trip, class opt-in") {
    Dataset ds = grid_dataset(40, 6);
    auto [same, empty_mask] = inject_missing(ds, 0.0, 5);
    CHECK(same == ds);
    CHECK(empty_mask.cells.empty());

    auto [corrupted, mask] = inject_missing(ds, 0.35, 5);
    CHECK(restore(corrupted, mask) == ds);

    auto [c2, m2] = inject_missing(ds, 0.2, 5, /*protect_class=*/false);
    bool class_masked = false;
    for (const auto& cell : m2.cells) class_masked |= cell.attr == 6;
    CHECK(class_masked);
}

TEST_CASE("inject_missing: every row keeps a known non-class cell") {
    Dataset ds = grid_dataset(30, 4);
    auto [corrupted, mask] = inject_missing(ds, 0.7, 3);
    CHECK(mask.cells.size() == 30 * 4 * 7 / 10);
    for (size_t r = 0; r < corrupted.rows(); ++r) {
        size_t known = 0;
        for (size_t a = 0; a < 4; ++a)
            if (!corrupted.cell(r, a).is_missing()) ++known;
        CHECK(known >= 1);
    }
}

TEST_CASE("inject_missing: infeasible rate") {
    // one non-class attribute: no cell may be masked, but rate asks for 15
    Dataset ds = grid_dataset(30, 1);
    CHECK_THROWS_AS(inject_missing(ds, 0.5, 1), InfeasibleRateError);
    CHECK_THROWS_AS(inject_missing(ds, 1.0, 1), InvalidArgument);
}

TEST_CASE("mask json round trip") {
    Dataset ds = from_csv("red,1.5,a\nblue,2.5,b\nred,3.5,a\nblue,4.5,b\n");
    auto [corrupted, mask] = inject_missing(ds, 0.4, 11);
    REQUIRE(!mask.cells.empty());
    auto path = temp_dir() / "mask.json";
    save_mask(mask, ds, path);
    CorruptionMask back = load_mask(path, ds);
    CHECK(back.seed == mask.seed);
    CHECK(back.rate == mask.rate);
    REQUIRE(back.cells.size() == mask.cells.size());
    for (size_t i = 0; i < mask.cells.size(); ++i) {
        CHECK(back.cells[i].row == mask.cells[i].row);
        CHECK(back.cells[i].attr == mask.cells[i].attr);
        CHECK(back.cells[i].original == mask.cells[i].original);
    }
    CHECK(restore(corrupted, back) == ds);
}
