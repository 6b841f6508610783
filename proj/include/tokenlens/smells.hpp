#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tokenlens/syntax.hpp"

namespace tokenlens {

/// The ten detected smell types. String forms follow the dataset's
/// identifiers byte-for-byte.
enum class SmellKind {
    ComplicatedRegexExpression,
    TooLongParameterList,
    BinaryOperatorInName,
    ComplicatedBooleanExpression,
    CyclomaticComplexity,
    FuncName,
    Loops,
    MutationTooMuch,
    PrimitiveObsession,
    TooLong,
};

inline constexpr std::array<SmellKind, 10> kAllSmellKinds = {
    SmellKind::ComplicatedRegexExpression, SmellKind::TooLongParameterList,
    SmellKind::BinaryOperatorInName,       SmellKind::ComplicatedBooleanExpression,
    SmellKind::CyclomaticComplexity,       SmellKind::FuncName,
    SmellKind::Loops,                      SmellKind::MutationTooMuch,
    SmellKind::PrimitiveObsession,         SmellKind::TooLong,
};

enum class SmellCategory { Naming, Expression, Structure, Design };

struct SmellFinding {
    SmellKind kind;
    SmellCategory category;
    Span span;
    double measured_value = 0;
    double threshold = 0;
    std::string evidence;
};

/// Detection thresholds. The defaults follow common linter conventions;
/// every value is overridable through the config file.
struct DetectorConfig {
    std::size_t max_parameters = 5;          // too_long_parameter_list: count > P
    std::size_t max_body_lines = 50;         // too_long: code lines > L
    std::size_t loop_nesting_depth = 3;      // loops: nesting >= D ...
    std::size_t max_loop_count = 4;          // ... or statement count > C
    std::size_t max_cyclomatic = 10;         // cyclomatic_complexity: McCabe > M
    std::size_t max_logical_operators = 3;   // complicated_boolean_expression: > B
    std::size_t max_regex_metachars = 8;     // complicated_regex_expression: > R
    std::size_t max_name_length = 30;        // func_name: length > N (or < 3)
    std::size_t max_mutations = 10;          // mutation_too_much: > A
    double primitive_fraction = 0.8;         // primitive_obsession: >= F, params >= 3

    /// kind -> category, remappable via config.
    std::map<SmellKind, SmellCategory> categories = default_categories();

    static std::map<SmellKind, SmellCategory> default_categories();
};

/// All findings across the ten rules, ordered by span start then kind.
/// Pure function of (unit bytes, config); an empty result means clean.
std::vector<SmellFinding> detect(const FunctionUnit& unit, const SyntaxTree& tree,
                                 const DetectorConfig& config = {});

SmellCategory categorize(SmellKind kind, const DetectorConfig& config = {});

std::string to_string(SmellKind kind);
std::string to_string(SmellCategory cat);
std::optional<SmellKind> smell_kind_from_string(const std::string& name);

}  // namespace tokenlens
