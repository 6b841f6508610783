#include "tokenlens/prompt.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tokenlens/textutil.hpp"

namespace tokenlens {

namespace {

const std::set<std::string> kKnownPlaceholders = {
    "code", "doc", "path", "names", "snippet", "tips", "budget",
};

const char* kTemplateNames[] = {
    "system_base", "role_seer",   "role_qaer",    "role_devops",
    "task_evaluate", "task_refactor", "task_generate", "task_describe",
    "context_code", "context_func", "tips", "cost",
};

std::string strip_trailing_newline(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

void lint_template(const std::string& name, const std::string& text) {
    std::size_t pos = 0;
    while ((pos = text.find("{{", pos)) != std::string::npos) {
        const std::size_t end = text.find("}}", pos);
        if (end == std::string::npos)
            throw TemplateError(name + ": unterminated placeholder");
        const std::string key = text.substr(pos + 2, end - pos - 2);
        if (!kKnownPlaceholders.count(key))
            throw TemplateError(name + ": unknown placeholder {{" + key + "}}");
        pos = end + 2;
    }
}

}  // namespace

PromptStrategy& PromptStrategy::with(StrategyPart part) {
    for (const StrategyPart& existing : parts) {
        if (existing.index() == part.index())
            throw InvalidStrategy("duplicate strategy variant: " + strategy_tag(part));
    }
    if (const auto* abs = std::get_if<CostAbsolutePart>(&part)) {
        if (abs->max_tokens == 0)
            throw InvalidStrategy("absolute cost budget must be positive");
    }
    if (const auto* rel = std::get_if<CostRelativePart>(&part)) {
        if (!(rel->fraction > 0.0) || rel->fraction > 4.0)
            throw InvalidStrategy("relative cost fraction must be in (0, 4]");
    }
    parts.push_back(std::move(part));
    return *this;
}

TemplateSet TemplateSet::load_dir(const std::string& dir) {
    TemplateSet set;
    for (const char* name : kTemplateNames) {
        const std::filesystem::path path = std::filesystem::path(dir) / (std::string(name) + ".txt");
        std::ifstream in(path);
        if (!in) throw TemplateError("missing template file: " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = strip_trailing_newline(buf.str());
        lint_template(name, text);
        set.templates_[name] = std::move(text);
    }
    return set;
}

const std::string& TemplateSet::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw TemplateError("unknown template: " + name);
    return it->second;
}

std::string TemplateSet::render(const std::string& tpl,
                                const std::map<std::string, std::string>& values) {
    std::string out;
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        const std::size_t open = tpl.find("{{", pos);
        if (open == std::string::npos) {
            out.append(tpl, pos, std::string::npos);
            break;
        }
        out.append(tpl, pos, open - pos);
        const std::size_t close = tpl.find("}}", open);
        const std::string key = tpl.substr(open + 2, close - open - 2);
        auto it = values.find(key);
        if (it == values.end()) throw TemplateError("unfilled placeholder {{" + key + "}}");
        out += it->second;
        pos = close + 2;
    }
    return out;
}

std::string smell_tip_sentence(SmellKind kind) {
    switch (kind) {
        case SmellKind::ComplicatedRegexExpression:
            return "the code contains complex regular expressions";
        case SmellKind::TooLongParameterList:
            return "the code has an excessively long parameter list";
        case SmellKind::BinaryOperatorInName:
            return "a method name contains a conjunction word";
        case SmellKind::ComplicatedBooleanExpression:
            return "the code contains a complicated boolean expression";
        case SmellKind::CyclomaticComplexity:
            return "the code has high cyclomatic complexity";
        case SmellKind::FuncName:
            return "a method name does not follow naming conventions";
        case SmellKind::Loops:
            return "the code contains deeply nested or numerous loops";
        case SmellKind::MutationTooMuch:
            return "the code mutates state excessively";
        case SmellKind::PrimitiveObsession:
            return "the parameter list relies heavily on primitive types";
        case SmellKind::TooLong:
            return "the method body is excessively long";
    }
    return "";
}

PromptBundle compose(const SourceSample& sample, TaskKind task,
                     const PromptStrategy& strategy,
                     const std::vector<SmellFinding>& findings,
                     const TemplateSet& templates) {
    const ContextCodePart* ctx_code = nullptr;
    const ContextFuncPart* ctx_func = nullptr;
    const RolePart* role = nullptr;
    const SmellTipsPart* tips = nullptr;
    const CostAbsolutePart* cost_abs = nullptr;
    const CostRelativePart* cost_rel = nullptr;
    for (const StrategyPart& part : strategy.parts) {
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, ContextCodePart>) ctx_code = &p;
                else if constexpr (std::is_same_v<T, ContextFuncPart>) ctx_func = &p;
                else if constexpr (std::is_same_v<T, RolePart>) role = &p;
                else if constexpr (std::is_same_v<T, SmellTipsPart>) tips = &p;
                else if constexpr (std::is_same_v<T, CostAbsolutePart>) cost_abs = &p;
                else if constexpr (std::is_same_v<T, CostRelativePart>) cost_rel = &p;
            },
            part);
    }
    if (cost_abs && cost_rel)
        throw InvalidStrategy("absolute and relative cost limits are exclusive");
    if (ctx_func && sample.doc.empty())
        throw MissingDocstring("sample " + sample.id + " has no docstring");

    PromptBundle bundle;
    bundle.task = task;

    // system text: persona first when present
    if (role) {
        const char* tpl = role->role == RoleKind::SEer   ? "role_seer"
                          : role->role == RoleKind::QAer ? "role_qaer"
                                                         : "role_devops";
        bundle.system_text = templates.get(tpl) + "\n" + templates.get("system_base");
    } else {
        bundle.system_text = templates.get("system_base");
    }

    // user text: context blocks -> task body -> tips -> cost
    std::vector<std::string> blocks;
    if (ctx_code) {
        blocks.push_back(TemplateSet::render(
            templates.get("context_code"),
            {{"path", ctx_code->path},
             {"names", ctx_code->enclosing_names.empty() ? "(top level)"
                                                         : ctx_code->enclosing_names},
             {"snippet", ctx_code->snippet.empty() ? "(none)" : ctx_code->snippet}}));
    }
    if (ctx_func) {
        blocks.push_back(TemplateSet::render(templates.get("context_func"),
                                             {{"doc", sample.doc}}));
    }

    const char* task_tpl = nullptr;
    switch (task) {
        case TaskKind::Evaluate: task_tpl = "task_evaluate"; break;
        case TaskKind::Refactor: task_tpl = "task_refactor"; break;
        case TaskKind::GenerateFromDoc: task_tpl = "task_generate"; break;
        case TaskKind::DescribeCode: task_tpl = "task_describe"; break;
    }
    blocks.push_back(TemplateSet::render(
        templates.get(task_tpl),
        {{"code", sample.code.content}, {"doc", sample.doc}}));

    if (tips) {
        std::vector<SmellKind> kinds;
        for (const SmellFinding& f : findings)
            if (std::find(kinds.begin(), kinds.end(), f.kind) == kinds.end())
                kinds.push_back(f.kind);
        std::sort(kinds.begin(), kinds.end());
        if (!kinds.empty()) {
            std::string joined;
            for (std::size_t i = 0; i < kinds.size(); ++i) {
                if (i) joined += "; ";
                joined += smell_tip_sentence(kinds[i]);
            }
            blocks.push_back(
                TemplateSet::render(templates.get("tips"), {{"tips", joined}}));
        }
    }

    std::string user;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) user += "\n\n";
        user += blocks[i];
    }

    if (cost_abs || cost_rel) {
        std::size_t budget;
        if (cost_abs) {
            budget = cost_abs->max_tokens;
        } else {
            const std::size_t prompt_tokens =
                approx_token_count(bundle.system_text) + approx_token_count(user);
            budget = static_cast<std::size_t>(
                std::ceil(cost_rel->fraction * static_cast<double>(prompt_tokens)));
            if (budget == 0) budget = 1;
        }
        bundle.declared_budget = budget;
        user += "\n\n" + TemplateSet::render(templates.get("cost"),
                                             {{"budget", std::to_string(budget)}});
    }

    bundle.user_text = std::move(user);
    for (const StrategyPart& part : strategy.parts)
        bundle.strategy_tags.push_back(strategy_tag(part));
    std::sort(bundle.strategy_tags.begin(), bundle.strategy_tags.end());
    return bundle;
}

std::string to_string(TaskKind task) {
    switch (task) {
        case TaskKind::Evaluate: return "evaluate";
        case TaskKind::Refactor: return "refactor";
        case TaskKind::GenerateFromDoc: return "generate";
        case TaskKind::DescribeCode: return "describe";
    }
    return "unknown";
}

std::string to_string(RoleKind role) {
    switch (role) {
        case RoleKind::SEer: return "seer";
        case RoleKind::QAer: return "qaer";
        case RoleKind::DevOps: return "devops";
    }
    return "unknown";
}

std::string strategy_tag(const StrategyPart& part) {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SmellTipsPart>) return "smell_tips";
            else if constexpr (std::is_same_v<T, ContextCodePart>) return "context_code";
            else if constexpr (std::is_same_v<T, ContextFuncPart>) return "context_func";
            else if constexpr (std::is_same_v<T, RolePart>)
                return "role_" + to_string(p.role);
            else if constexpr (std::is_same_v<T, CostAbsolutePart>) return "cost_absolute";
            else return "cost_relative";
        },
        part);
}

}  // namespace tokenlens
