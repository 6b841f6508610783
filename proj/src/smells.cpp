#include "tokenlens/smells.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "tokenlens/complexity.hpp"

namespace tokenlens {

namespace {

const std::unordered_set<std::string> kPrimitiveTypes = {
    "byte", "short", "int", "long", "float", "double", "char", "boolean",
};

constexpr std::string_view kRegexMetachars = ".*+?[](){}|^$\\";

NodeId find_child(const SyntaxTree& tree, NodeId parent, NodeKind kind) {
    if (parent == kNoNode) return kNoNode;
    for (NodeId c : tree.node(parent).children)
        if (tree.node(c).kind == kind) return c;
    return kNoNode;
}

NodeId name_node(const SyntaxTree& tree, NodeId decl) {
    if (decl == kNoNode) return kNoNode;
    const Node& n = tree.node(decl);
    for (std::size_t i = 1; i < n.children.size(); ++i) {
        if (tree.node(n.children[i]).kind == NodeKind::ParamList &&
            tree.node(n.children[i - 1]).kind == NodeKind::LeafIdentifier)
            return n.children[i - 1];
    }
    return kNoNode;
}

std::vector<std::string> camel_words(const std::string& name) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : name) {
        if (std::isupper(static_cast<unsigned char>(c)) && !cur.empty()) {
            words.push_back(cur);
            cur.clear();
        }
        cur += c;
    }
    if (!cur.empty()) words.push_back(cur);
    return words;
}

bool is_lower_camel(const std::string& name) {
    if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c));
    });
}

std::string base_type(const std::string& declared) {
    std::string t = declared;
    // strip array suffixes and generic arguments
    if (auto p = t.find('['); p != std::string::npos) t.resize(p);
    if (auto p = t.find('<'); p != std::string::npos) t.resize(p);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    return t;
}

bool is_logical_node(const SyntaxTree& tree, NodeId id) {
    const Node& n = tree.node(id);
    if (n.kind == NodeKind::BinaryExpr && n.children.size() >= 2) {
        std::string_view op = tree.text(n.children[1]);
        return op == "&&" || op == "||";
    }
    if (n.kind == NodeKind::UnaryExpr && !n.children.empty())
        return tree.text(n.children[0]) == "!";
    return false;
}

std::size_t count_logical_leaves(const SyntaxTree& tree, NodeId id) {
    std::size_t count = 0;
    tree.walk(id, [&](NodeId c) {
        const Node& n = tree.node(c);
        if (n.kind == NodeKind::LeafOperator) {
            std::string_view t = tree.text(c);
            if (t == "&&" || t == "||" || t == "!") ++count;
        }
    });
    return count;
}

bool is_loop(NodeKind k) {
    return k == NodeKind::ForStmt || k == NodeKind::EnhancedForStmt ||
           k == NodeKind::WhileStmt || k == NodeKind::DoStmt;
}

void loop_stats(const SyntaxTree& tree, NodeId id, std::size_t depth,
                std::size_t& max_depth, std::size_t& count) {
    const Node& n = tree.node(id);
    std::size_t d = depth;
    if (is_loop(n.kind)) {
        ++count;
        d = depth + 1;
        max_depth = std::max(max_depth, d);
    }
    for (NodeId c : n.children) loop_stats(tree, c, d, max_depth, count);
}

std::string truncate(std::string_view s, std::size_t limit = 60) {
    if (s.size() <= limit) return std::string(s);
    return std::string(s.substr(0, limit)) + "...";
}

}  // namespace

std::map<SmellKind, SmellCategory> DetectorConfig::default_categories() {
    return {
        {SmellKind::FuncName, SmellCategory::Naming},
        {SmellKind::BinaryOperatorInName, SmellCategory::Naming},
        {SmellKind::ComplicatedBooleanExpression, SmellCategory::Expression},
        {SmellKind::ComplicatedRegexExpression, SmellCategory::Expression},
        {SmellKind::TooLong, SmellCategory::Structure},
        {SmellKind::TooLongParameterList, SmellCategory::Structure},
        {SmellKind::Loops, SmellCategory::Structure},
        {SmellKind::CyclomaticComplexity, SmellCategory::Structure},
        {SmellKind::MutationTooMuch, SmellCategory::Design},
        {SmellKind::PrimitiveObsession, SmellCategory::Design},
    };
}

SmellCategory categorize(SmellKind kind, const DetectorConfig& config) {
    auto it = config.categories.find(kind);
    if (it != config.categories.end()) return it->second;
    return DetectorConfig::default_categories().at(kind);
}

std::vector<SmellFinding> detect(const FunctionUnit& unit, const SyntaxTree& tree,
                                 const DetectorConfig& config) {
    std::vector<SmellFinding> out;
    auto add = [&](SmellKind kind, Span span, double measured, double threshold,
                   std::string evidence) {
        out.push_back({kind, categorize(kind, config), span, measured, threshold,
                       std::move(evidence)});
    };

    NodeId body = find_child(tree, unit.decl_node, NodeKind::Block);
    NodeId params = find_child(tree, unit.decl_node, NodeKind::ParamList);
    NodeId name_id = name_node(tree, unit.decl_node);
    const Span params_span =
        params != kNoNode ? tree.node(params).span : unit.decl_span;
    const Span name_span = name_id != kNoNode ? tree.node(name_id).span : unit.decl_span;

    // too_long_parameter_list
    if (unit.parameters.size() > config.max_parameters) {
        add(SmellKind::TooLongParameterList, params_span,
            static_cast<double>(unit.parameters.size()),
            static_cast<double>(config.max_parameters),
            std::to_string(unit.parameters.size()) + " parameters");
    }

    // primitive_obsession
    if (unit.parameters.size() >= 3) {
        std::size_t prim = 0;
        for (const ParamInfo& p : unit.parameters)
            if (kPrimitiveTypes.count(base_type(p.declared_type))) ++prim;
        const double frac = static_cast<double>(prim) / unit.parameters.size();
        if (frac >= config.primitive_fraction) {
            add(SmellKind::PrimitiveObsession, params_span, frac,
                config.primitive_fraction,
                std::to_string(prim) + "/" + std::to_string(unit.parameters.size()) +
                    " primitive parameters");
        }
    }

    // name rules apply to methods only; constructor names are class names
    if (!unit.is_constructor && !unit.name.empty()) {
        for (const std::string& word : camel_words(unit.name)) {
            if (word == "And" || word == "Or" || word == "Not") {
                add(SmellKind::BinaryOperatorInName, name_span, 1, 0, word);
                break;
            }
        }
        const bool bad_length =
            unit.name.size() < 3 || unit.name.size() > config.max_name_length;
        if (bad_length || !is_lower_camel(unit.name)) {
            add(SmellKind::FuncName, name_span, static_cast<double>(unit.name.size()),
                static_cast<double>(config.max_name_length),
                bad_length ? "bad length" : "not lowerCamelCase");
        }
    }

    if (body != kNoNode) {
        // too_long
        SourceText body_text;
        body_text.content = std::string(std::string_view(tree.source())
                                            .substr(unit.body_span.begin,
                                                    unit.body_span.length()));
        const LocProfile loc = count_lines(body_text);
        if (loc.code > config.max_body_lines) {
            add(SmellKind::TooLong, unit.body_span, static_cast<double>(loc.code),
                static_cast<double>(config.max_body_lines),
                std::to_string(loc.code) + " code lines");
        }

        // loops
        std::size_t max_depth = 0, loop_count = 0;
        loop_stats(tree, body, 0, max_depth, loop_count);
        if (max_depth >= config.loop_nesting_depth) {
            add(SmellKind::Loops, unit.body_span, static_cast<double>(max_depth),
                static_cast<double>(config.loop_nesting_depth),
                "nesting depth " + std::to_string(max_depth));
        } else if (loop_count > config.max_loop_count) {
            add(SmellKind::Loops, unit.body_span, static_cast<double>(loop_count),
                static_cast<double>(config.max_loop_count),
                std::to_string(loop_count) + " loops");
        }

        // cyclomatic_complexity
        const std::size_t mccabe = cyclomatic(unit, tree);
        if (mccabe > config.max_cyclomatic) {
            add(SmellKind::CyclomaticComplexity, unit.body_span,
                static_cast<double>(mccabe), static_cast<double>(config.max_cyclomatic),
                "McCabe " + std::to_string(mccabe));
        }

        // mutation_too_much
        std::size_t mutations = 0;
        tree.walk(body, [&](NodeId id) {
            const Node& n = tree.node(id);
            if (n.kind == NodeKind::AssignExpr) ++mutations;
            if ((n.kind == NodeKind::UnaryExpr || n.kind == NodeKind::PostfixExpr) &&
                !n.children.empty()) {
                for (NodeId c : n.children) {
                    std::string_view t = tree.text(c);
                    if (tree.node(c).is_leaf() && (t == "++" || t == "--")) {
                        ++mutations;
                        break;
                    }
                }
            }
        });
        if (mutations > config.max_mutations) {
            add(SmellKind::MutationTooMuch, unit.body_span,
                static_cast<double>(mutations), static_cast<double>(config.max_mutations),
                std::to_string(mutations) + " mutations");
        }

        // complicated_boolean_expression: maximal logical expressions only
        tree.walk(body, [&](NodeId id) {
            if (!is_logical_node(tree, id)) return;
            for (NodeId a = tree.node(id).parent;
                 a != kNoNode && tree.node(a).span.begin >= unit.body_span.begin &&
                 tree.node(a).span.end <= unit.body_span.end;
                 a = tree.node(a).parent) {
                if (is_logical_node(tree, a)) return;  // not maximal
            }
            const std::size_t ops = count_logical_leaves(tree, id);
            if (ops > config.max_logical_operators) {
                add(SmellKind::ComplicatedBooleanExpression, tree.node(id).span,
                    static_cast<double>(ops),
                    static_cast<double>(config.max_logical_operators),
                    truncate(tree.text(id)));
            }
        });

        // complicated_regex_expression: string literals with many metacharacters
        tree.walk(body, [&](NodeId id) {
            const Node& n = tree.node(id);
            if (n.kind != NodeKind::LeafString) return;
            std::string_view lit = tree.text(id);
            if (lit.size() >= 2) lit = lit.substr(1, lit.size() - 2);
            std::size_t metas = 0;
            for (char c : lit)
                if (kRegexMetachars.find(c) != std::string_view::npos) ++metas;
            if (metas > config.max_regex_metachars) {
                add(SmellKind::ComplicatedRegexExpression, n.span,
                    static_cast<double>(metas),
                    static_cast<double>(config.max_regex_metachars), truncate(lit));
            }
        });
    }

    std::sort(out.begin(), out.end(), [](const SmellFinding& a, const SmellFinding& b) {
        if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return out;
}

std::string to_string(SmellKind kind) {
    switch (kind) {
        case SmellKind::ComplicatedRegexExpression: return "complicated_regex_expression";
        case SmellKind::TooLongParameterList: return "too_long_parameter_list";
        case SmellKind::BinaryOperatorInName: return "binary_operator_in_name";
        case SmellKind::ComplicatedBooleanExpression:
            return "complicated_boolean_expression";
        case SmellKind::CyclomaticComplexity: return "cyclomatic_complexity";
        case SmellKind::FuncName: return "func_name";
        case SmellKind::Loops: return "loops";
        case SmellKind::MutationTooMuch: return "mutation_too_much";
        case SmellKind::PrimitiveObsession: return "primitive_obsession";
        case SmellKind::TooLong: return "too_long";
    }
    return "unknown";
}

std::string to_string(SmellCategory cat) {
    switch (cat) {
        case SmellCategory::Naming: return "Naming";
        case SmellCategory::Expression: return "Expression";
        case SmellCategory::Structure: return "Structure";
        case SmellCategory::Design: return "Design";
    }
    return "unknown";
}

std::optional<SmellKind> smell_kind_from_string(const std::string& name) {
    for (SmellKind k : kAllSmellKinds)
        if (to_string(k) == name) return k;
    return std::nullopt;
}

}  // namespace tokenlens
