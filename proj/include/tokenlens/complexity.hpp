#pragma once

#include <stdexcept>
#include <string>

#include "tokenlens/syntax.hpp"

namespace tokenlens {

/// Halstead counters plus the derived values. Derived fields are always
/// recomputable from the four counters; n2 == 0 makes difficulty 0.
struct HalsteadProfile {
    std::size_t distinct_operators = 0;  // n1
    std::size_t distinct_operands = 0;   // n2
    std::size_t total_operators = 0;     // N1
    std::size_t total_operands = 0;      // N2
    double vocabulary = 0;               // n1 + n2
    double length = 0;                   // N1 + N2
    double volume = 0;                   // N * log2(n)
    double difficulty = 0;               // (n1/2) * (N2/n2)
    double effort = 0;                   // D * V
};

struct ComplexityProfile {
    HalsteadProfile halstead;
    std::size_t cyclomatic = 1;
    LocProfile loc;
};

enum class ScoreMode { HalsteadVolume, HalsteadEffort, Cyclomatic, Composite };

struct ZeroComplexity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operator/operand classification rule set (fixed, auditable):
/// keywords, operators, the punctuation ; ? : . :: and method-call names
/// count as operators; identifiers, literals, and type names (including
/// primitive type keywords) count as operands. Grouping parentheses,
/// braces, brackets, and commas are not counted. Counting runs over the
/// unit's body tokens.
HalsteadProfile halstead(const FunctionUnit& unit, const SyntaxTree& tree);

/// 1 + decision points: if, for (both forms), while, do, case labels,
/// catch clauses, ternaries, && and ||.
std::size_t cyclomatic(const FunctionUnit& unit, const SyntaxTree& tree);

ComplexityProfile complexity_profile(const FunctionUnit& unit, const SyntaxTree& tree);

double complexity_score(const ComplexityProfile& profile, ScoreMode mode);

ScoreMode score_mode_from_string(const std::string& name);
std::string to_string(ScoreMode mode);

}  // namespace tokenlens
