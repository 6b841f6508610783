#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tokenlens/lexer.hpp"
#include "tokenlens/source.hpp"

namespace tokenlens {

enum class NodeKind : std::uint8_t {
    // containers
    Program,
    ImportDecl,  // also covers package declarations
    TypeDecl,
    ClassBody,
    MethodDecl,
    ConstructorDecl,
    FieldDecl,
    InitializerBlock,
    Modifiers,
    TypeRef,
    TypeParams,
    ParamList,
    Parameter,
    ThrowsClause,
    // statements
    Block,
    IfStmt,
    ElseClause,
    ForStmt,
    EnhancedForStmt,
    WhileStmt,
    DoStmt,
    SwitchStmt,
    SwitchCase,
    SwitchDefault,
    TryStmt,
    ResourceSpec,
    CatchClause,
    FinallyClause,
    ReturnStmt,
    ThrowStmt,
    BreakStmt,
    ContinueStmt,
    SyncStmt,
    AssertStmt,
    LabeledStmt,
    LocalVarDecl,
    ExprStmt,
    EmptyStmt,
    // expressions
    AssignExpr,
    TernaryExpr,
    BinaryExpr,
    InstanceofExpr,
    UnaryExpr,
    PostfixExpr,
    CastExpr,
    CallExpr,
    NewExpr,
    ArrayAccess,
    FieldAccess,
    MethodRef,
    LambdaExpr,
    ParenExpr,
    ArrayInit,
    ArgList,
    // leaves
    LeafIdentifier,
    LeafKeyword,
    LeafNumber,
    LeafString,
    LeafChar,
    LeafOperator,
    // error recovery
    ErrorNode,
};

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;

struct Node {
    NodeKind kind;
    Span span;
    NodeId parent = kNoNode;
    std::vector<NodeId> children;  // in source order

    bool is_leaf() const {
        return kind >= NodeKind::LeafIdentifier && kind <= NodeKind::LeafOperator;
    }
};

/// Concrete syntax tree over one SourceText. Immutable after parsing.
/// Children spans are ordered, non-overlapping, and contained in the parent's.
class SyntaxTree {
public:
    NodeId root() const { return root_; }
    const Node& node(NodeId id) const { return nodes_[id]; }
    std::size_t node_count() const { return nodes_.size(); }
    bool has_errors() const { return has_errors_; }

    /// Source bytes covered by the node's span.
    std::string_view text(NodeId id) const {
        const Span& s = nodes_[id].span;
        return std::string_view(source_).substr(s.begin, s.length());
    }
    const std::string& source() const { return source_; }

    /// Leaf node ids of the subtree, in source order.
    std::vector<NodeId> leaves(NodeId id) const;

    template <typename Fn>
    void walk(NodeId id, Fn&& fn) const {
        fn(id);
        for (NodeId c : nodes_[id].children) walk(c, fn);
    }

private:
    friend class Parser;
    std::vector<Node> nodes_;
    NodeId root_ = 0;
    std::string source_;
    bool has_errors_ = false;
};

struct ParamInfo {
    std::string name;
    std::string declared_type;
};

/// One method or constructor declaration, the unit of analysis for all
/// per-function metrics.
struct FunctionUnit {
    std::string name;
    std::vector<ParamInfo> parameters;
    Span body_span;       // span of the block, {} included; empty if abstract
    Span decl_span;       // full declaration span
    NodeId decl_node = kNoNode;
    bool is_constructor = false;
};

struct UnsupportedLanguage : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CatastrophicParseFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Error-tolerant parse; recoverable syntax errors become ErrorNode entries
/// and set has_errors() instead of failing.
SyntaxTree parse(const SourceText& source);

/// Methods and constructors in source order. Empty for sources without any.
std::vector<FunctionUnit> extract_functions(const SyntaxTree& tree);

/// Leaf lexical tokens, comments and whitespace excluded.
std::size_t count_lexical_tokens(const SourceText& source);

LocProfile count_lines(const SourceText& source);

/// Wraps a bare method fragment in a synthetic class shell so CodeXGLUE-style
/// snippets parse as a compilation unit. Returns the input unchanged when it
/// already declares a type. `shell_prefix_len` reports how many bytes the
/// wrapper prepends, for mapping spans back to the original text.
SourceText wrap_snippet(const SourceText& source, std::size_t* shell_prefix_len = nullptr);

}  // namespace tokenlens
