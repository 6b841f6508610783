#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "tokenlens/source.hpp"

namespace tokenlens {

/// CodeBLEU component weights; defaults are 0.25 each.
struct CodeBleuWeights {
    double ngram = 0.25;
    double weighted_ngram = 0.25;
    double ast_match = 0.25;
    double dataflow_match = 0.25;
};

struct CodeBleuScore {
    double ngram = 0;
    double weighted_ngram = 0;
    double ast_match = 0;
    double dataflow_match = 0;
    double combined = 0;
    /// Effective weights; when the reference has no def-use edges the
    /// dataflow weight is redistributed over the other components, so these
    /// can differ from the requested ones. combined = sum(w_i * c_i) always.
    CodeBleuWeights weights;
    bool both_empty = false;  // combined forced to 1 by convention
};

struct DocSimScore {
    double value = 0;
    std::string method = "token_count_cosine";
    bool both_empty = false;  // value forced to 1 by convention
};

struct LanguageMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Composite code similarity: smoothed 4-gram BLEU, keyword-weighted BLEU,
/// depth-bounded AST subtree match with anonymized leaves, and name-based
/// def-use dataflow match.
CodeBleuScore codebleu(const SourceText& candidate, const SourceText& reference,
                       const CodeBleuWeights& weights = {});

/// Cosine similarity of token-count vectors after lowercasing, punctuation
/// stripping, and stop-word removal. Symmetric in its arguments.
DocSimScore docstring_similarity(const std::string& a, const std::string& b);

}  // namespace tokenlens
