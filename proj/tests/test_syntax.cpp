#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "tokenlens/syntax.hpp"

using namespace tokenlens;

namespace {

std::size_t count_kind(const SyntaxTree& tree, NodeKind kind) {
    std::size_t n = 0;
    tree.walk(tree.root(), [&](NodeId id) {
        if (tree.node(id).kind == kind) ++n;
    });
    return n;
}

void check_tree_invariants(const SyntaxTree& tree) {
    const std::size_t len = tree.source().size();
    tree.walk(tree.root(), [&](NodeId id) {
        const Node& node = tree.node(id);
        REQUIRE(node.span.begin <= node.span.end);
        REQUIRE(node.span.end <= len);
        std::size_t prev_end = node.span.begin;
        for (NodeId child : node.children) {
            const Node& c = tree.node(child);
            REQUIRE(node.span.contains(c.span));
            REQUIRE(c.span.begin >= prev_end);
            prev_end = c.span.end;
            REQUIRE(c.parent == id);
        }
    });
}

}  // namespace

TEST_CASE("minimal class parses without errors") {
    const SyntaxTree tree = parse(SourceText{"class A { void f() {} }"});
    CHECK_FALSE(tree.has_errors());
    CHECK(count_kind(tree, NodeKind::TypeDecl) == 1);
    CHECK(count_kind(tree, NodeKind::MethodDecl) == 1);
    check_tree_invariants(tree);
}

TEST_CASE("empty input yields empty root span") {
    const SyntaxTree tree = parse(SourceText{""});
    CHECK_FALSE(tree.has_errors());
    CHECK(tree.node(tree.root()).span == Span{0, 0});
}

TEST_CASE("malformed parameter list is recovered with error nodes") {
    const SyntaxTree tree = parse(SourceText{"class A { void f( {} }"});
    CHECK(tree.has_errors());
    CHECK(count_kind(tree, NodeKind::ErrorNode) >= 1);
    check_tree_invariants(tree);
}

TEST_CASE("extract_functions returns declarations in source order") {
    const SyntaxTree tree = parse(SourceText{
        "class A { int first(int a) { return a; } void second() {} }"});
    const auto units = extract_functions(tree);
    REQUIRE(units.size() == 2);
    CHECK(units[0].name == "first");
    CHECK(units[1].name == "second");
    CHECK(units[0].parameters.size() == 1);
    CHECK(units[0].parameters[0].name == "a");
    CHECK(units[0].parameters[0].declared_type == "int");
}

TEST_CASE("sources without functions yield an empty list") {
    const SyntaxTree tree = parse(SourceText{"class A { int field; }"});
    CHECK(extract_functions(tree).empty());
}

TEST_CASE("a bare method snippet exposes its signature arity") {
    const SourceText snippet{
        "public int combine(int left, int right, String label) {\n"
        "    return left + right + label.length();\n"
        "}\n"};
    const SyntaxTree tree = parse(wrap_snippet(snippet));
    const auto units = extract_functions(tree);
    REQUIRE(units.size() == 1);
    CHECK(units[0].name == "combine");
    CHECK(units[0].parameters.size() == 3);
}

TEST_CASE("lexical token counting excludes trivia") {
    CHECK(count_lexical_tokens(SourceText{"int x = 1 ;"}) == 5);
    CHECK(count_lexical_tokens(SourceText{""}) == 0);
    CHECK(count_lexical_tokens(SourceText{"// only a comment"}) == 0);
}

TEST_CASE("line classification") {
    const LocProfile p = count_lines(SourceText{"a\n\n// c\n"});
    CHECK(p.total == 3);
    CHECK(p.code == 1);
    CHECK(p.blank == 1);
    CHECK(p.comment == 1);
    CHECK(p.code + p.blank + p.comment == p.total);

    const LocProfile empty = count_lines(SourceText{""});
    CHECK(empty.total == 0);
    CHECK(empty.code == 0);

    const LocProfile one = count_lines(SourceText{"int f() { return 1; }"});
    CHECK(one.total == 1);
    CHECK(one.code == 1);
}

TEST_CASE("parsing is deterministic") {
    const SourceText src{"class A { void f(int a) { if (a > 0) { g(a); } } }"};
    const SyntaxTree a = parse(src);
    const SyntaxTree b = parse(src);
    REQUIRE(a.node_count() == b.node_count());
    for (NodeId id = 0; id < a.node_count(); ++id) {
        CHECK(a.node(id).kind == b.node(id).kind);
        CHECK(a.node(id).span == b.node(id).span);
    }
}

TEST_CASE("leaf spans are ordered and reconstruct the input with trivia") {
    const SourceText src{
        "class A {\n  // add\n  int add(int x) { return x + 1; }\n}\n"};
    const SyntaxTree tree = parse(src);
    check_tree_invariants(tree);
    const auto leaves = tree.leaves(tree.root());
    std::size_t pos = 0;
    std::string rebuilt;
    for (NodeId id : leaves) {
        const Span s = tree.node(id).span;
        REQUIRE(s.begin >= pos);
        rebuilt += src.content.substr(pos, s.begin - pos);  // trivia gap
        rebuilt += src.content.substr(s.begin, s.length());
        pos = s.end;
    }
    rebuilt += src.content.substr(pos);
    CHECK(rebuilt == src.content);
}

TEST_CASE("function count is invariant under comments and whitespace") {
    const SourceText plain{"class A { void f() {} int g() { return 1; } }"};
    const SourceText noisy{
        "class A {  /* lead */ void f() {}\n\n  // note\n  int g() {\n"
        "    return 1; }\n}"};
    CHECK(extract_functions(parse(plain)).size() ==
          extract_functions(parse(noisy)).size());
}

TEST_CASE("wrap_snippet adds a shell only for bare fragments") {
    std::size_t prefix = 0;
    const SourceText bare{"void f() {}"};
    const SourceText wrapped = wrap_snippet(bare, &prefix);
    CHECK(prefix > 0);
    CHECK(wrapped.content.find(bare.content) != std::string::npos);
    CHECK_FALSE(parse(wrapped).has_errors());

    const SourceText full{"class A { void f() {} }"};
    const SourceText same = wrap_snippet(full, &prefix);
    CHECK(prefix == 0);
    CHECK(same.content == full.content);
}
