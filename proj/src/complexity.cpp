#include "tokenlens/complexity.hpp"

#include <cmath>
#include <unordered_map>

namespace tokenlens {

namespace {

NodeId body_node(const FunctionUnit& unit, const SyntaxTree& tree) {
    if (unit.decl_node == kNoNode) return kNoNode;
    for (NodeId c : tree.node(unit.decl_node).children)
        if (tree.node(c).kind == NodeKind::Block) return c;
    return kNoNode;
}

bool is_grouping(std::string_view t) {
    return t == "(" || t == ")" || t == "{" || t == "}" || t == "[" || t == "]" ||
           t == "," || t == "@";
}

}  // namespace

HalsteadProfile halstead(const FunctionUnit& unit, const SyntaxTree& tree) {
    HalsteadProfile p;
    NodeId body = body_node(unit, tree);
    if (body == kNoNode) return p;

    std::unordered_map<std::string_view, std::size_t> operators, operands;
    std::vector<NodeId> leaves = tree.leaves(body);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const Node& n = tree.node(leaves[i]);
        std::string_view text = tree.text(leaves[i]);
        switch (n.kind) {
            case NodeKind::LeafKeyword:
                if (is_type_keyword(text)) ++operands[text];
                else ++operators[text];
                break;
            case NodeKind::LeafIdentifier: {
                const bool call_name = i + 1 < leaves.size() &&
                                       tree.text(leaves[i + 1]) == "(";
                if (call_name) ++operators[text];
                else ++operands[text];
                break;
            }
            case NodeKind::LeafNumber:
            case NodeKind::LeafString:
            case NodeKind::LeafChar:
                ++operands[text];
                break;
            case NodeKind::LeafOperator:
                if (!is_grouping(text)) ++operators[text];
                break;
            default:
                break;
        }
    }

    p.distinct_operators = operators.size();
    p.distinct_operands = operands.size();
    for (const auto& [k, v] : operators) p.total_operators += v;
    for (const auto& [k, v] : operands) p.total_operands += v;

    p.vocabulary = static_cast<double>(p.distinct_operators + p.distinct_operands);
    p.length = static_cast<double>(p.total_operators + p.total_operands);
    p.volume = p.vocabulary > 0 ? p.length * std::log2(p.vocabulary) : 0.0;
    p.difficulty = p.distinct_operands > 0
                       ? (p.distinct_operators / 2.0) *
                             (static_cast<double>(p.total_operands) / p.distinct_operands)
                       : 0.0;
    p.effort = p.difficulty * p.volume;
    return p;
}

std::size_t cyclomatic(const FunctionUnit& unit, const SyntaxTree& tree) {
    NodeId body = body_node(unit, tree);
    std::size_t decisions = 0;
    if (body != kNoNode) {
        tree.walk(body, [&](NodeId id) {
            const Node& n = tree.node(id);
            switch (n.kind) {
                case NodeKind::IfStmt:
                case NodeKind::ForStmt:
                case NodeKind::EnhancedForStmt:
                case NodeKind::WhileStmt:
                case NodeKind::DoStmt:
                case NodeKind::SwitchCase:
                case NodeKind::CatchClause:
                case NodeKind::TernaryExpr:
                    ++decisions;
                    break;
                case NodeKind::BinaryExpr:
                    if (n.children.size() >= 2) {
                        std::string_view op = tree.text(n.children[1]);
                        if (op == "&&" || op == "||") ++decisions;
                    }
                    break;
                default:
                    break;
            }
        });
    }
    return 1 + decisions;
}

ComplexityProfile complexity_profile(const FunctionUnit& unit, const SyntaxTree& tree) {
    ComplexityProfile p;
    p.halstead = halstead(unit, tree);
    p.cyclomatic = cyclomatic(unit, tree);
    SourceText body_text;
    body_text.content = std::string(
        std::string_view(tree.source()).substr(unit.body_span.begin, unit.body_span.length()));
    p.loc = count_lines(body_text);
    return p;
}

double complexity_score(const ComplexityProfile& profile, ScoreMode mode) {
    switch (mode) {
        case ScoreMode::HalsteadVolume: return profile.halstead.volume;
        case ScoreMode::HalsteadEffort: return profile.halstead.effort;
        case ScoreMode::Cyclomatic: return static_cast<double>(profile.cyclomatic);
        case ScoreMode::Composite:
            return profile.halstead.volume * static_cast<double>(profile.cyclomatic);
    }
    return 0.0;
}

ScoreMode score_mode_from_string(const std::string& name) {
    if (name == "halstead_volume") return ScoreMode::HalsteadVolume;
    if (name == "halstead_effort") return ScoreMode::HalsteadEffort;
    if (name == "cyclomatic") return ScoreMode::Cyclomatic;
    if (name == "composite") return ScoreMode::Composite;
    throw std::invalid_argument("unknown score mode: " + name);
}

std::string to_string(ScoreMode mode) {
    switch (mode) {
        case ScoreMode::HalsteadVolume: return "halstead_volume";
        case ScoreMode::HalsteadEffort: return "halstead_effort";
        case ScoreMode::Cyclomatic: return "cyclomatic";
        case ScoreMode::Composite: return "composite";
    }
    return "unknown";
}

}  // namespace tokenlens
