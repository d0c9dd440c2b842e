#include <doctest.h>

#include <cmath>

#include "mathtools/operations.hpp"
#include "mathtools/parser.hpp"
#include "mathtools/similarity.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mathtools;
using namespace mathtools::similarity;
using mathtools::testing::load_fixture;

namespace {

MathNode tree(const std::string& name, std::vector<MathNode> children = {}) {
    MathNode n;
    n.name = name;
    n.children = std::move(children);
    return n;
}

}  // namespace

TEST_CASE("histograms of the a/b fraction") {
    const MathDoc doc = load_fixture("frac_ab.mml");
    const Histogram pres = histogram(doc, Scope::presentation);
    CHECK(pres == Histogram{{"mfrac", 1}, {"mi", 2}});
    CHECK(pres.total() == 3);
    const Histogram whole = histogram(doc, Scope::whole);
    CHECK(whole == Histogram{{"mfrac", 1}, {"mi", 2}, {"apply", 1}, {"divide", 1}, {"ci", 2}});
    CHECK(whole.total() == 7);
    CHECK(histogram(doc, Scope::content) == Histogram{{"apply", 1}, {"divide", 1}, {"ci", 2}});
    CHECK(to_text(whole) == "apply\t1\nci\t2\ndivide\t1\nmfrac\t1\nmi\t2\n");

    const Histogram structural = histogram(doc, Scope::whole, true);
    CHECK(structural.total() == 11);
    CHECK(structural.count("annotation-xml") == 1);
    CHECK(structural.count("semantics") == 1);
    CHECK(histogram(doc, Scope::content, true).count("annotation-xml") == 1);

    CHECK_THROWS_AS(histogram(split_presentation(doc), Scope::content), MissingBranch);
    MathNode empty;
    empty.name = "math";
    CHECK(histogram(MathDoc::from_tree(empty), Scope::whole).empty());
}

TEST_CASE("histogram basics") {
    Histogram h;
    h.add("mi", 0);
    CHECK(h.counts().empty());
    h.add("mi", 2);
    h.add("mo");
    CHECK(h.total() == 3);
    CHECK(h.count("mn") == 0);
    CHECK(parse_scope("whole") == Scope::whole);
    CHECK_FALSE(parse_scope("all"));
    CHECK(is_structural("annotation-xml"));
    CHECK_FALSE(is_structural("mi"));
}

TEST_CASE("accumulate") {
    const std::vector<Histogram> hs{{{"mi", 2}}, {{"mi", 1}, {"mo", 1}}};
    const Histogram sum = accumulate(hs);
    CHECK(sum == Histogram{{"mi", 3}, {"mo", 1}});
    CHECK(sum.total() == 4);
    CHECK(accumulate({}).empty());
    const std::vector<Histogram> with_empty{hs[0], Histogram{}};
    CHECK(accumulate(with_empty) == hs[0]);
}

TEST_CASE("histogram distances") {
    const Histogram frac{{"mfrac", 1}, {"mi", 2}};
    const Histogram three{{"mi", 3}};
    CHECK(hist_distance_absolute(frac, frac) == 0);
    CHECK(hist_distance_absolute(frac, three) == 2);
    CHECK(hist_distance_absolute({}, three) == 3);
    CHECK(hist_distance_relative(frac, frac) == 0);
    CHECK(hist_distance_relative(frac, three) == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
    CHECK(hist_distance_relative({{"mi", 2}}, {{"mo", 3}}) == 1);
    CHECK(hist_distance_relative({}, {}) == 0);
}

TEST_CASE("tree edit distance examples") {
    const MathDoc doc = load_fixture("frac_ab.mml");
    const MathNode& pres = doc.node(*doc.presentation_root());
    CHECK(tree_edit_distance(pres, pres) == 0);

    const MathNode frac = tree("mfrac", {tree("mi"), tree("mi")});
    const MathNode row = tree("mrow", {tree("mi"), tree("mi")});
    CHECK(tree_edit_distance(frac, row) == 1);
    // Deleting mfrac and one mi: two edits. The exhaustive search agrees.
    const double single = tree_edit_distance(frac, tree("mi"));
    CHECK(single == mathtools::testing::MappingEnumeration(frac, tree("mi")).min_cost({}));
    CHECK(single == 2);

    CHECK(tree_edit_distance(frac, row, {1, 1, 5}) == 2);
    CHECK(tree_edit_distance(tree("a"), tree("a", {tree("b")}), {0.5, 3, 1}) == 0.5);
    CHECK_THROWS_AS(tree_edit_distance(frac, row, {-1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(tree_edit_distance(frac, row, {1, NAN, 1}), std::invalid_argument);

    MathNode a = tree("mi");
    a.text = "a";
    MathNode b = tree("mi");
    b.text = "b";
    CHECK(tree_edit_distance(a, b) == 0);
    CHECK(tree_edit_distance(a, b, {}, LabelMode::name_and_leaf_text) == 1);
}

TEST_CASE("tree edit distance matches exhaustive mapping search") {
    mathtools::testing::Rng rng(11);
    const std::vector<std::string> labels{"a", "b", "c"};
    for (int trial = 0; trial < 60; ++trial) {
        const MathNode x = mathtools::testing::random_tree(rng, 6, labels);
        const MathNode y = mathtools::testing::random_tree(rng, 6, labels);
        const mathtools::testing::MappingEnumeration oracle(x, y);
        const mathtools::testing::MappingEnumeration text_oracle(x, y, true);
        for (const CostConfig costs : {CostConfig{}, CostConfig{0.3, 2.1, 1.7}, CostConfig{4, 0.5, 9}}) {
            CHECK(tree_edit_distance(x, y, costs) == doctest::Approx(oracle.min_cost(costs)).epsilon(1e-12));
            CHECK(tree_edit_distance(x, y, costs, LabelMode::name_and_leaf_text) ==
                  doctest::Approx(text_oracle.min_cost(costs)).epsilon(1e-12));
            CHECK(tree_edit_distance(x, y, costs) <=
                  costs.del * static_cast<double>(subtree_size(x)) +
                      costs.insert * static_cast<double>(subtree_size(y)) + 1e-12);
        }
    }
}

TEST_CASE("emd examples") {
    const Histogram frac{{"mfrac", 1}, {"mi", 2}};
    CHECK(emd(frac, frac) == 0);
    CHECK(emd({{"mi", 1}}, {{"mo", 1}}) == 1);
    CHECK(emd(frac, {{"mi", 3}}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(emd(frac, Histogram{{"mfrac", 2}, {"mi", 4}}) == 0);
    CHECK_THROWS_AS(emd({}, frac), EmptyHistogram);
    CHECK_THROWS_AS(emd(frac, {}), EmptyHistogram);

    GroundDistance ground;
    ground.set_override("mi", "mo", 0.25);
    CHECK(ground("mo", "mi") == 0.25);
    CHECK(ground("mi", "mi") == 0);
    CHECK(ground("mi", "mn") == 1);
    CHECK(emd({{"mi", 1}}, {{"mo", 1}}, ground) == 0.25);
    CHECK_THROWS_AS(ground.set_override("mi", "mi", 1), std::invalid_argument);
    CHECK_THROWS_AS(ground.set_override("mi", "mn", -1), std::invalid_argument);
}

TEST_CASE("emd against the transport oracle") {
    mathtools::testing::Rng rng(5);
    std::uniform_real_distribution<double> unit(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Histogram a = mathtools::testing::random_histogram(rng, 5, 6);
        const Histogram b = mathtools::testing::random_histogram(rng, 5, 6);
        CHECK(emd(a, b) == doctest::Approx(mathtools::testing::half_l1_normalized(a, b)).epsilon(1e-12));
        GroundDistance ground;
        mathtools::testing::GroundTable table;
        for (int i = 0; i < 5; ++i) {
            for (int j = i + 1; j < 5; ++j) {
                const double c = unit(rng);
                ground.set_override("e" + std::to_string(i), "e" + std::to_string(j), c);
                table[{"e" + std::to_string(i), "e" + std::to_string(j)}] = c;
            }
        }
        CHECK(emd(a, b, ground) ==
              doctest::Approx(mathtools::testing::transport_oracle(a, b, table)).epsilon(1e-12));
    }
}

TEST_CASE("cosine similarity") {
    const Histogram frac{{"mfrac", 1}, {"mi", 2}};
    CHECK(cosine_similarity(frac, frac) == 1);
    CHECK(cosine_similarity({{"mi", 2}}, {{"mo", 3}}) == 0);
    CHECK(cosine_similarity(frac, {{"mi", 3}}) == doctest::Approx(2 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(cosine_similarity(frac, Histogram{{"mfrac", 7}, {"mi", 14}}) == doctest::Approx(1).epsilon(1e-12));
    CHECK_THROWS_AS(cosine_similarity({}, frac), EmptyHistogram);
}

TEST_CASE("document distance") {
    const MathDoc l1 = load_fixture("frac_ab.mml");
    const std::vector<MathDoc> one{l1};
    const std::vector<MathDoc> two{l1, l1};
    CHECK(document_distance(one, one, DocumentMeasure::emd, Scope::whole) == 0);
    CHECK(document_distance(one, one, DocumentMeasure::cosine, Scope::whole) == 1);
    CHECK(document_distance(one, two, DocumentMeasure::cosine, Scope::whole) == doctest::Approx(1).epsilon(1e-12));
    CHECK(document_distance(one, two, DocumentMeasure::emd, Scope::presentation) == 0);

    const MathDoc plain = load_fixture("plain.mml");
    const std::vector<MathDoc> other{plain};
    const double c = document_distance(one, other, DocumentMeasure::cosine, Scope::presentation);
    CHECK(c == doctest::Approx(mathtools::testing::cosine_oracle(histogram(l1, Scope::presentation),
                                                                 histogram(plain, Scope::presentation))));
    CHECK_THROWS_AS(document_distance({}, one, DocumentMeasure::emd, Scope::whole), EmptyHistogram);
}
