#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tokenlens/corpus.hpp"
#include "tokenlens/smells.hpp"

namespace tokenlens {

enum class TaskKind { Evaluate, Refactor, GenerateFromDoc, DescribeCode };

enum class RoleKind { SEer, QAer, DevOps };

// ---- strategy variants -------------------------------------------------

struct SmellTipsPart {};
struct ContextCodePart {
    std::string path;
    std::string enclosing_names;
    std::string snippet;  // surrounding code, the unit itself excluded
};
struct ContextFuncPart {};
struct RolePart {
    RoleKind role;
};
struct CostAbsolutePart {
    std::size_t max_tokens;
};
struct CostRelativePart {
    double fraction;  // of the prompt's lexical token count, in (0, 4]
};

using StrategyPart = std::variant<SmellTipsPart, ContextCodePart, ContextFuncPart,
                                  RolePart, CostAbsolutePart, CostRelativePart>;

/// A strategy is a set of parts; empty = baseline. Parts apply in the fixed
/// order context -> role -> smell tips -> cost regardless of insertion order.
struct PromptStrategy {
    std::vector<StrategyPart> parts;

    static PromptStrategy baseline() { return {}; }
    PromptStrategy& with(StrategyPart part);
};

struct PromptBundle {
    std::string system_text;
    std::string user_text;
    std::vector<std::string> strategy_tags;
    std::optional<std::size_t> declared_budget;
    TaskKind task = TaskKind::Evaluate;
};

struct MissingDocstring : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidStrategy : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TemplateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Frozen prompt text, loaded from the versioned template files shipped in
/// templates/. Placeholders use {{name}} syntax; loading rejects files with
/// placeholders outside the known set.
class TemplateSet {
public:
    static TemplateSet load_dir(const std::string& dir);

    const std::string& get(const std::string& name) const;

    /// Substitutes {{key}} -> value; unknown placeholders throw.
    static std::string render(const std::string& tpl,
                              const std::map<std::string, std::string>& values);

private:
    std::map<std::string, std::string> templates_;
};

/// Pure text assembly of one prompt. The sample's code appears verbatim
/// exactly once in user_text (Evaluate/Refactor/DescribeCode tasks).
PromptBundle compose(const SourceSample& sample, TaskKind task,
                     const PromptStrategy& strategy,
                     const std::vector<SmellFinding>& findings,
                     const TemplateSet& templates);

/// One paper-style tip sentence per smell kind.
std::string smell_tip_sentence(SmellKind kind);

std::string to_string(TaskKind task);
std::string to_string(RoleKind role);
std::string strategy_tag(const StrategyPart& part);

}  // namespace tokenlens
