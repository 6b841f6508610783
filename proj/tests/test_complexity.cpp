#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tokenlens/complexity.hpp"
#include "tokenlens/syntax.hpp"

using namespace tokenlens;

namespace {

struct Parsed {
    SyntaxTree tree;
    FunctionUnit unit;
};

Parsed first_unit(const std::string& code) {
    Parsed p{parse(wrap_snippet(SourceText{code})), {}};
    const auto units = extract_functions(p.tree);
    REQUIRE_FALSE(units.empty());
    p.unit = units.front();
    return p;
}

HalsteadProfile halstead_of(const std::string& body) {
    const Parsed p = first_unit("void m() {\n" + body + "\n}");
    return halstead(p.unit, p.tree);
}

std::size_t cyclomatic_of(const std::string& body) {
    const Parsed p = first_unit("void m() {\n" + body + "\n}");
    return cyclomatic(p.unit, p.tree);
}

void check_derived(const HalsteadProfile& h) {
    const double n = static_cast<double>(h.distinct_operators + h.distinct_operands);
    const double N = static_cast<double>(h.total_operators + h.total_operands);
    CHECK(h.vocabulary == doctest::Approx(n).epsilon(1e-9));
    CHECK(h.length == doctest::Approx(N).epsilon(1e-9));
    const double v = n > 0 ? N * std::log2(n) : 0.0;
    CHECK(h.volume == doctest::Approx(v).epsilon(1e-9));
    const double d = h.distinct_operands > 0
                         ? (static_cast<double>(h.distinct_operators) / 2.0) *
                               (static_cast<double>(h.total_operands) /
                                static_cast<double>(h.distinct_operands))
                         : 0.0;
    CHECK(h.difficulty == doctest::Approx(d).epsilon(1e-9));
    CHECK(h.effort == doctest::Approx(d * v).epsilon(1e-9));
}

}  // namespace

TEST_CASE("return x + 1 oracle") {
    const HalsteadProfile h = halstead_of("return x + 1;");
    CHECK(h.distinct_operators == 3);
    CHECK(h.total_operators == 3);
    CHECK(h.distinct_operands == 2);
    CHECK(h.total_operands == 2);
    CHECK(h.volume == doctest::Approx(5.0 * std::log2(5.0)).epsilon(1e-9));
    CHECK(h.difficulty == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(h.effort == doctest::Approx(1.5 * 5.0 * std::log2(5.0)).epsilon(1e-9));
    check_derived(h);
}

TEST_CASE("empty body yields the zero profile") {
    const HalsteadProfile h = halstead_of("");
    CHECK(h.distinct_operators == 0);
    CHECK(h.distinct_operands == 0);
    CHECK(h.total_operators == 0);
    CHECK(h.total_operands == 0);
    CHECK(h.volume == 0.0);
    CHECK(h.difficulty == 0.0);
    CHECK(h.effort == 0.0);
}

TEST_CASE("duplicated statements double totals but not distinct counts") {
    const HalsteadProfile once = halstead_of("x = 1;");
    const HalsteadProfile twice = halstead_of("x = 1; x = 1;");
    CHECK(twice.total_operators == 2 * once.total_operators);
    CHECK(twice.total_operands == 2 * once.total_operands);
    CHECK(twice.distinct_operators == once.distinct_operators);
    CHECK(twice.distinct_operands == once.distinct_operands);
    check_derived(once);
    check_derived(twice);
}

TEST_CASE("cyclomatic oracles") {
    CHECK(cyclomatic_of("a(); b();") == 1);
    CHECK(cyclomatic_of("if (a) { b(); }") == 2);
    CHECK(cyclomatic_of("for (int i = 0; i < n; i++) { if (a && b) { c(); } }") == 4);
}

TEST_CASE("cyclomatic counts every decision point kind") {
    CHECK(cyclomatic_of("while (a) { b(); }") == 2);
    CHECK(cyclomatic_of("do { b(); } while (a);") == 2);
    CHECK(cyclomatic_of("switch (x) { case 1: a(); break; case 2: b(); break; "
                        "default: c(); }") == 3);
    CHECK(cyclomatic_of("try { a(); } catch (Exception e) { b(); }") == 2);
    CHECK(cyclomatic_of("int y = a ? b : c;") == 2);
    CHECK(cyclomatic_of("boolean y = a || b;") == 2);
}

TEST_CASE("cyclomatic is invariant under renaming and reformatting") {
    const std::size_t original =
        cyclomatic_of("if (count > 0) { for (int i = 0; i < count; i++) { f(i); } }");
    const std::size_t renamed = cyclomatic_of(
        "if (total > 0) {\n  for (int k = 0;\n       k < total; k++) { g(k); }\n}");
    CHECK(original == renamed);
}

TEST_CASE("concatenating independent bodies adds decision points") {
    const std::string a = "if (x) { f(); }";
    const std::string b = "while (y) { g(); } if (z) { h(); }";
    CHECK(cyclomatic_of(a + "\n" + b) == cyclomatic_of(a) + cyclomatic_of(b) - 1);
}

TEST_CASE("score modes") {
    ComplexityProfile p;
    p.halstead.volume = 100.0;
    p.halstead.effort = 250.0;
    p.cyclomatic = 3;
    CHECK(complexity_score(p, ScoreMode::HalsteadVolume) == doctest::Approx(100.0));
    CHECK(complexity_score(p, ScoreMode::HalsteadEffort) == doctest::Approx(250.0));
    CHECK(complexity_score(p, ScoreMode::Cyclomatic) == doctest::Approx(3.0));
    CHECK(complexity_score(p, ScoreMode::Composite) == doctest::Approx(300.0));
}

TEST_CASE("effort dominates volume when difficulty is at least one") {
    const char* bodies[] = {"return x + 1;", "x = a + b; y = a - b;",
                            "if (a < b) { c = a; } else { c = b; }"};
    for (const char* body : bodies) {
        const HalsteadProfile h = halstead_of(body);
        if (h.difficulty >= 1.0) CHECK(h.effort >= h.volume);
    }
}

TEST_CASE("score mode names round-trip") {
    for (ScoreMode mode : {ScoreMode::HalsteadVolume, ScoreMode::HalsteadEffort,
                           ScoreMode::Cyclomatic, ScoreMode::Composite})
        CHECK(score_mode_from_string(to_string(mode)) == mode);
}

TEST_CASE("derived fields satisfy their formulas on varied snippets") {
    const char* bodies[] = {
        "int y = 2;",
        "f(a);",
        "return a ? b : c;",
        "while (i < 10) i = i + 1;",
        "return obj.size();",
        "x++;",
        "for (String s : items) { total = total + s.length(); }",
    };
    for (const char* body : bodies) check_derived(halstead_of(body));
}
