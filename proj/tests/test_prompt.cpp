#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "tokenlens/prompt.hpp"
#include "tokenlens/smells.hpp"
#include "tokenlens/syntax.hpp"
#include "tokenlens/textutil.hpp"

using namespace tokenlens;

namespace {

const std::string kRepo = TOKENLENS_REPO_DIR;

const TemplateSet& templates() {
    static TemplateSet set = TemplateSet::load_dir(kRepo + "/templates");
    return set;
}

SourceSample make_sample() {
    SourceSample s;
    s.id = "sample1";
    s.code = SourceText{
        "public boolean matchesRange(String input) {\n"
        "    return input.matches(\"^(a+|b*)?[c-d]{2}$\");\n"
        "}\n"};
    s.doc = "checks whether the input matches a bounded letter range pattern";
    s.label = SampleLabel::Smelly;
    return s;
}

std::vector<SmellFinding> findings_for(const SourceSample& s) {
    const SyntaxTree tree = parse(wrap_snippet(s.code));
    const auto units = extract_functions(tree);
    REQUIRE_FALSE(units.empty());
    return detect(units.front(), tree);
}

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("evaluate prompts enumerate the six quality dimensions") {
    const PromptBundle b = compose(make_sample(), TaskKind::Evaluate,
                                   PromptStrategy::baseline(), {}, templates());
    CHECK(b.user_text.find("functional correctness, readability, robustness, "
                           "maintainability, extensibility, and security") !=
          std::string::npos);
}

TEST_CASE("smell tips name the regex smell in its documented phrasing") {
    const SourceSample s = make_sample();
    PromptStrategy strategy;
    strategy.with(SmellTipsPart{});
    const PromptBundle b =
        compose(s, TaskKind::Refactor, strategy, findings_for(s), templates());
    CHECK(b.user_text.find("complex regular expressions") != std::string::npos);
}

TEST_CASE("relative cost budget is the ceiling of fraction times prompt tokens") {
    const SourceSample s = make_sample();
    const PromptBundle base = compose(s, TaskKind::Refactor,
                                      PromptStrategy::baseline(), {}, templates());
    PromptStrategy strategy;
    strategy.with(CostRelativePart{0.5});
    const PromptBundle b = compose(s, TaskKind::Refactor, strategy, {}, templates());
    REQUIRE(b.declared_budget.has_value());
    const std::size_t prompt_tokens =
        approx_token_count(base.system_text) + approx_token_count(base.user_text);
    CHECK(*b.declared_budget ==
          static_cast<std::size_t>(std::ceil(0.5 * static_cast<double>(prompt_tokens))));
}

TEST_CASE("role strategy changes only the system persona") {
    const SourceSample s = make_sample();
    const PromptBundle base = compose(s, TaskKind::Refactor,
                                      PromptStrategy::baseline(), {}, templates());
    PromptStrategy role;
    role.with(RolePart{RoleKind::SEer});
    const PromptBundle persona = compose(s, TaskKind::Refactor, role, {}, templates());
    CHECK(base.user_text == persona.user_text);
    CHECK(base.system_text != persona.system_text);
    CHECK(persona.system_text.find("software engineer") != std::string::npos);
}

TEST_CASE("composition is pure") {
    const SourceSample s = make_sample();
    PromptStrategy strategy;
    strategy.with(ContextCodePart{"a/b.java", "B.run", "int x = 1;"})
        .with(ContextFuncPart{})
        .with(RolePart{RoleKind::QAer})
        .with(CostRelativePart{0.25});
    const PromptBundle a = compose(s, TaskKind::Refactor, strategy, {}, templates());
    const PromptBundle b = compose(s, TaskKind::Refactor, strategy, {}, templates());
    CHECK(a.system_text == b.system_text);
    CHECK(a.user_text == b.user_text);
    CHECK(a.strategy_tags == b.strategy_tags);
    CHECK(a.declared_budget == b.declared_budget);
}

TEST_CASE("the sample code appears verbatim exactly once under every strategy") {
    const SourceSample s = make_sample();
    std::vector<PromptStrategy> strategies;
    strategies.push_back(PromptStrategy::baseline());
    strategies.push_back(PromptStrategy{}.with(SmellTipsPart{}));
    strategies.push_back(PromptStrategy{}.with(ContextCodePart{"f.java", "", ""}));
    strategies.push_back(PromptStrategy{}.with(ContextFuncPart{}));
    strategies.push_back(PromptStrategy{}.with(RolePart{RoleKind::DevOps}));
    strategies.push_back(PromptStrategy{}.with(CostAbsolutePart{64}));
    strategies.push_back(PromptStrategy{}.with(CostRelativePart{0.5}));
    PromptStrategy comb;
    comb.with(ContextCodePart{"f.java", "", ""})
        .with(ContextFuncPart{})
        .with(RolePart{RoleKind::SEer})
        .with(CostRelativePart{0.5});
    strategies.push_back(comb);

    for (const PromptStrategy& strategy : strategies) {
        const PromptBundle b =
            compose(s, TaskKind::Refactor, strategy, findings_for(s), templates());
        CHECK(count_occurrences(b.user_text, s.code.content) == 1);
        CHECK(b.declared_budget.has_value() ==
              (b.user_text.find("output tokens") != std::string::npos));
    }
}

TEST_CASE("strategy tags reflect exactly the applied variants") {
    PromptStrategy strategy;
    strategy.with(RolePart{RoleKind::QAer}).with(CostAbsolutePart{32});
    const PromptBundle b =
        compose(make_sample(), TaskKind::Refactor, strategy, {}, templates());
    CHECK(b.strategy_tags == std::vector<std::string>{"cost_absolute", "role_qaer"});
    CHECK(*b.declared_budget == 32);

    const PromptBundle base = compose(make_sample(), TaskKind::Refactor,
                                      PromptStrategy::baseline(), {}, templates());
    CHECK(base.strategy_tags.empty());
    CHECK_FALSE(base.declared_budget.has_value());
}

TEST_CASE("invalid strategies are rejected") {
    PromptStrategy dup;
    dup.with(RolePart{RoleKind::SEer});
    CHECK_THROWS_AS(dup.with(RolePart{RoleKind::QAer}), InvalidStrategy);
    PromptStrategy s2;
    CHECK_THROWS_AS(s2.with(CostAbsolutePart{0}), InvalidStrategy);
    PromptStrategy s3;
    CHECK_THROWS_AS(s3.with(CostRelativePart{4.5}), InvalidStrategy);
    PromptStrategy both;
    both.with(CostAbsolutePart{10}).with(CostRelativePart{0.5});
    CHECK_THROWS_AS(
        compose(make_sample(), TaskKind::Refactor, both, {}, templates()),
        InvalidStrategy);
}

TEST_CASE("function context without a docstring is an error") {
    SourceSample s = make_sample();
    s.doc.clear();
    PromptStrategy strategy;
    strategy.with(ContextFuncPart{});
    CHECK_THROWS_AS(compose(s, TaskKind::Refactor, strategy, {}, templates()),
                    MissingDocstring);
}

TEST_CASE("template lint rejects unknown placeholders") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tpl_lint_check";
    fs::create_directories(dir);
    for (const auto& entry : fs::directory_iterator(kRepo + "/templates"))
        fs::copy_file(entry.path(), dir / entry.path().filename(),
                      fs::copy_options::overwrite_existing);
    std::ofstream(dir / "task_refactor.txt") << "Refactor {{mystery}} now: {{code}}";
    CHECK_THROWS_AS(TemplateSet::load_dir(dir.string()), TemplateError);
    fs::remove_all(dir);
}

TEST_CASE("context blocks precede the task body") {
    const SourceSample s = make_sample();
    PromptStrategy strategy;
    strategy.with(ContextCodePart{"src/Main.java", "Main.run", "int y = 2;"});
    const PromptBundle b = compose(s, TaskKind::Refactor, strategy, {}, templates());
    const std::size_t ctx = b.user_text.find("src/Main.java");
    const std::size_t code = b.user_text.find(s.code.content);
    REQUIRE(ctx != std::string::npos);
    REQUIRE(code != std::string::npos);
    CHECK(ctx < code);
}
