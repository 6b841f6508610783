#include "tokenlens/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tokenlens/lexer.hpp"
#include "tokenlens/syntax.hpp"

namespace tokenlens {

namespace {

constexpr int kMaxNgram = 4;
constexpr double kKeywordWeight = 5.0;
constexpr int kAstDepthBound = 3;

std::vector<std::string> code_tokens(const std::string& content) {
    std::vector<std::string> out;
    LexResult lexed = lex(content);
    for (const Token& t : lexed.tokens)
        if (!is_trivia(t.kind))
            out.emplace_back(token_text(content, t));
    return out;
}

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const std::vector<std::string>& tokens, int n) {
    NgramCounts counts;
    if (tokens.size() < static_cast<std::size_t>(n)) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

/// Smoothed modified n-gram precision BLEU against a single reference.
/// Add-one smoothing on every precision keeps short disjoint inputs off
/// exact zero. `weighted` up-weights n-grams whose first token is a Java
/// keyword by kKeywordWeight.
double bleu(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
            bool weighted) {
    if (cand.empty()) return 0.0;

    double log_sum = 0.0;
    int used = 0;
    for (int n = 1; n <= kMaxNgram; ++n) {
        NgramCounts cg = ngrams(cand, n);
        if (cg.empty()) break;
        NgramCounts rg = ngrams(ref, n);
        double total = 0.0, matched = 0.0;
        for (const auto& [gram, count] : cg) {
            const double w =
                weighted && is_java_keyword(gram.front()) ? kKeywordWeight : 1.0;
            total += w * count;
            auto it = rg.find(gram);
            if (it != rg.end()) matched += w * std::min(count, it->second);
        }
        log_sum += std::log((matched + 1.0) / (total + 1.0));
        ++used;
    }
    if (used == 0) return 0.0;

    const double c = static_cast<double>(cand.size());
    const double r = static_cast<double>(ref.size());
    const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum / used);
}

std::string anonymize_leaf(const SyntaxTree& tree, NodeId id) {
    switch (tree.node(id).kind) {
        case NodeKind::LeafIdentifier: return "id";
        case NodeKind::LeafNumber:
        case NodeKind::LeafString:
        case NodeKind::LeafChar: return "lit";
        default: return std::string(tree.text(id));
    }
}

std::string serialize_subtree(const SyntaxTree& tree, NodeId id, int depth) {
    const Node& n = tree.node(id);
    if (n.is_leaf()) return anonymize_leaf(tree, id);
    std::string out = std::to_string(static_cast<int>(n.kind));
    if (depth > 0 && !n.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i) out += ' ';
            out += serialize_subtree(tree, n.children[i], depth - 1);
        }
        out += ')';
    }
    return out;
}

std::unordered_map<std::string, std::size_t> subtree_multiset(const SyntaxTree& tree) {
    std::unordered_map<std::string, std::size_t> out;
    tree.walk(tree.root(), [&](NodeId id) {
        if (tree.node(id).is_leaf()) return;
        ++out[serialize_subtree(tree, id, kAstDepthBound)];
    });
    return out;
}

double multiset_match(const std::unordered_map<std::string, std::size_t>& cand,
                      const std::unordered_map<std::string, std::size_t>& ref) {
    std::size_t total = 0, matched = 0;
    for (const auto& [key, count] : ref) {
        total += count;
        auto it = cand.find(key);
        if (it != cand.end()) matched += std::min(count, it->second);
    }
    if (total == 0) return 1.0;  // nothing to match
    return static_cast<double>(matched) / static_cast<double>(total);
}

/// Approximate def-use edges: each identifier use pairs with the most recent
/// syntactic definition (declaration, assignment target, or ++/--) of the
/// same name. Edge key = (name, ordinal of that definition).
std::unordered_map<std::string, std::size_t> dataflow_edges(const SyntaxTree& tree) {
    struct Event {
        std::size_t pos;
        std::string name;
        bool is_def;
    };
    std::vector<Event> events;
    std::unordered_set<std::size_t> def_leaves;      // leaf node ids acting as targets
    std::unordered_set<std::size_t> excluded_leaves;  // call names, member names, types

    tree.walk(tree.root(), [&](NodeId id) {
        const Node& n = tree.node(id);
        if (n.kind == NodeKind::AssignExpr && !n.children.empty()) {
            NodeId lhs = n.children.front();
            if (tree.node(lhs).kind == NodeKind::LeafIdentifier) def_leaves.insert(lhs);
        }
        if ((n.kind == NodeKind::UnaryExpr || n.kind == NodeKind::PostfixExpr) &&
            n.children.size() == 2) {
            for (NodeId c : n.children) {
                std::string_view t = tree.text(c);
                if (tree.node(c).is_leaf() && (t == "++" || t == "--")) {
                    NodeId other = n.children[c == n.children[0] ? 1 : 0];
                    if (tree.node(other).kind == NodeKind::LeafIdentifier)
                        def_leaves.insert(other);
                }
            }
        }
        if (n.kind == NodeKind::LocalVarDecl || n.kind == NodeKind::Parameter) {
            for (NodeId c : n.children)
                if (tree.node(c).kind == NodeKind::LeafIdentifier) def_leaves.insert(c);
        }
        if (n.kind == NodeKind::TypeRef) {
            for (NodeId c : tree.leaves(id)) excluded_leaves.insert(c);
        }
        if (n.kind == NodeKind::FieldAccess && n.children.size() == 3) {
            excluded_leaves.insert(n.children.back());  // member name after '.'
        }
        if (n.kind == NodeKind::CallExpr && !n.children.empty()) {
            NodeId callee = n.children.front();
            if (tree.node(callee).kind == NodeKind::LeafIdentifier)
                excluded_leaves.insert(callee);
        }
    });

    for (NodeId leaf : tree.leaves(tree.root())) {
        if (tree.node(leaf).kind != NodeKind::LeafIdentifier) continue;
        if (excluded_leaves.count(leaf) && !def_leaves.count(leaf)) continue;
        events.push_back({tree.node(leaf).span.begin, std::string(tree.text(leaf)),
                          def_leaves.count(leaf) > 0});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.pos < b.pos; });

    std::unordered_map<std::string, std::size_t> def_ordinal;  // name -> current def
    std::unordered_map<std::string, std::size_t> edges;
    for (const Event& e : events) {
        if (e.is_def) {
            ++def_ordinal[e.name];
        } else {
            auto it = def_ordinal.find(e.name);
            if (it == def_ordinal.end()) continue;  // no prior def in scope
            ++edges[e.name + "#" + std::to_string(it->second)];
        }
    }
    return edges;
}

const std::unordered_set<std::string>& stop_words() {
    static const std::unordered_set<std::string> words = {
        "a",  "an",  "the",  "in",  "on",   "of",  "to",   "and", "or",  "is",
        "are", "for", "with", "that", "this", "it", "as",  "by",  "at",  "be",
        "from",
    };
    return words;
}

std::unordered_map<std::string, std::size_t> doc_token_counts(const std::string& text) {
    std::unordered_map<std::string, std::size_t> counts;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty() && !stop_words().count(cur)) ++counts[cur];
        cur.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else
            flush();
    }
    flush();
    return counts;
}

}  // namespace

CodeBleuScore codebleu(const SourceText& candidate, const SourceText& reference,
                       const CodeBleuWeights& weights) {
    if (candidate.language != reference.language)
        throw LanguageMismatch("codebleu inputs must share a language");

    CodeBleuScore score;
    const std::vector<std::string> cand_tokens = code_tokens(candidate.content);
    const std::vector<std::string> ref_tokens = code_tokens(reference.content);

    score.weights = weights;
    if (cand_tokens.empty() && ref_tokens.empty()) {
        score.ngram = score.weighted_ngram = score.ast_match = score.dataflow_match = 1.0;
        score.combined = 1.0;
        score.both_empty = true;
        return score;
    }

    score.ngram = bleu(cand_tokens, ref_tokens, /*weighted=*/false);
    score.weighted_ngram = bleu(cand_tokens, ref_tokens, /*weighted=*/true);

    SyntaxTree cand_tree = parse(wrap_snippet(candidate));
    SyntaxTree ref_tree = parse(wrap_snippet(reference));
    score.ast_match = multiset_match(subtree_multiset(cand_tree), subtree_multiset(ref_tree));

    const auto ref_edges = dataflow_edges(ref_tree);
    if (ref_edges.empty()) {
        // no dataflow to match against: fold its weight into the rest
        score.dataflow_match = 0.0;
        const double rest = weights.ngram + weights.weighted_ngram + weights.ast_match;
        if (rest > 0) {
            const double scale = (rest + weights.dataflow_match) / rest;
            score.weights.ngram = weights.ngram * scale;
            score.weights.weighted_ngram = weights.weighted_ngram * scale;
            score.weights.ast_match = weights.ast_match * scale;
        }
        score.weights.dataflow_match = 0.0;
    } else {
        score.dataflow_match = multiset_match(dataflow_edges(cand_tree), ref_edges);
    }

    score.combined = score.weights.ngram * score.ngram +
                     score.weights.weighted_ngram * score.weighted_ngram +
                     score.weights.ast_match * score.ast_match +
                     score.weights.dataflow_match * score.dataflow_match;
    return score;
}

DocSimScore docstring_similarity(const std::string& a, const std::string& b) {
    DocSimScore score;
    const auto va = doc_token_counts(a);
    const auto vb = doc_token_counts(b);
    if (va.empty() && vb.empty()) {
        score.value = 1.0;
        score.both_empty = true;
        return score;
    }
    if (va.empty() || vb.empty()) return score;  // 0

    double dot = 0, na = 0, nb = 0;
    for (const auto& [tok, ca] : va) {
        na += static_cast<double>(ca) * ca;
        auto it = vb.find(tok);
        if (it != vb.end()) dot += static_cast<double>(ca) * it->second;
    }
    for (const auto& [tok, cb] : vb) nb += static_cast<double>(cb) * cb;
    score.value = dot / (std::sqrt(na) * std::sqrt(nb));
    return score;
}

}  // namespace tokenlens
