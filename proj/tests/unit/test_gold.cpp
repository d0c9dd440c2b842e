#include <doctest.h>

#include <sstream>

#include "mathtools/gold.hpp"
#include "support/fixtures.hpp"

using namespace mathtools;
using namespace mathtools::gold;
using mathtools::testing::fixture_text;

namespace {

GoldEntry frac_ab_entry() {
    GoldEntry e;
    e.id = 1;
    e.tex = "\\frac{a}{b}";
    e.mathml = fixture_text("frac_ab.mml");
    return e;
}

}  // namespace

TEST_CASE("load the a/b fraction entry") {
    const auto entries = load_gold(fixture_text("gold/frac_ab.json"));
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].id == 1);
    CHECK(entries[0].tex == "\\frac{a}{b}");
    CHECK(entries[0].title == "fraction");
    CHECK(entries[0].uri == "https://example.org/frac");
    CHECK(entries[0].check.empty());
    CHECK(validate_entry(entries[0]).empty());
    CHECK(load_gold("[]").empty());
}

TEST_CASE("save is deterministic, id ordered and round-trips") {
    CHECK(save_gold({}) == "[]");
    GoldEntry a = frac_ab_entry();
    a.id = 2;
    a.check = {{"latexml", "ok"}};
    a.extra = {{"zeta", 1}, {"alpha", {{"nested", true}}}};
    GoldEntry b = frac_ab_entry();
    b.title = "fraction";
    const std::string text = save_gold({a, b});
    const auto loaded = load_gold(text);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0] == b);
    CHECK(loaded[1] == a);
    CHECK(save_gold(loaded) == text);
    CHECK(text.find("\"alpha\"") < text.find("\"check\""));
}

TEST_CASE("duplicate id names the id") {
    try {
        load_gold(fixture_text("gold/invalid_duplicate_id.json"));
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.id() == 1);
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
}

TEST_CASE("every violation fixture raises the designated error") {
    std::istringstream manifest(fixture_text("gold/violations.tsv"));
    int cases = 0;
    for (std::string line; std::getline(manifest, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string file, kind, id;
        std::getline(fields, file, '\t');
        std::getline(fields, kind, '\t');
        std::getline(fields, id, '\t');
        CAPTURE(file);
        ++cases;
        const std::string text = fixture_text("gold/" + file);
        if (kind == "schema") {
            try {
                load_gold(text);
                FAIL("expected SchemaError");
            } catch (const SchemaError& e) {
                if (id == "-") CHECK_FALSE(e.id());
                else CHECK(e.id() == std::stoll(id));
            }
        } else {
            try {
                load_gold(text);
                FAIL("expected InvalidGoldMathML");
            } catch (const InvalidGoldMathML& e) {
                CHECK(e.id() == std::stoll(id));
            }
        }
    }
    CHECK(cases >= 10);
}

TEST_CASE("validate_entry findings") {
    GoldEntry no_content = frac_ab_entry();
    no_content.mathml =
        "<math xmlns=\"http://www.w3.org/1998/Math/MathML\"><semantics><mi>x</mi>"
        "<annotation encoding=\"application/x-tex\">\\frac{a}{b}</annotation></semantics></math>";
    auto findings = validate_entry(no_content);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == FindingKind::missing_content_branch);

    GoldEntry mismatch = frac_ab_entry();
    mismatch.tex = "\\tfrac{a}{b}";
    findings = validate_entry(mismatch);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == FindingKind::tex_mismatch);

    GoldEntry broken = frac_ab_entry();
    broken.mathml = "<math>";
    findings = validate_entry(broken);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == FindingKind::invalid_mathml);

    const auto loaded = load_gold(fixture_text("gold/findings.json"));
    REQUIRE(loaded.size() == 4);
    CHECK(validate_entry(loaded[2]).at(0).kind == FindingKind::dangling_xref);
    CHECK(validate_entry(loaded[3]).at(0).kind == FindingKind::missing_tex_annotation);
    CHECK(to_string(FindingKind::tex_mismatch) == "tex-mismatch");
}
