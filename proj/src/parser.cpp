#include <algorithm>
#include <cassert>

#include "tokenlens/syntax.hpp"

namespace tokenlens {

namespace {

// Thrown inside speculative parses; always caught within the parser.
struct ParseFail {};

const char* kAssignOps[] = {"=",  "+=", "-=",  "*=",  "/=",  "%=",
                            "&=", "|=", "^=", "<<=", ">>=", ">>>="};

// Binary operator precedence levels, loosest first. instanceof is handled
// separately at the relational level.
const std::vector<std::vector<std::string_view>> kBinaryLevels = {
    {"||"},
    {"&&"},
    {"|"},
    {"^"},
    {"&"},
    {"==", "!="},
    {"<", ">", "<=", ">="},
    {"<<", ">>", ">>>"},
    {"+", "-"},
    {"*", "/", "%"},
};

bool is_modifier_word(std::string_view w) {
    return w == "public" || w == "private" || w == "protected" || w == "static" ||
           w == "final" || w == "abstract" || w == "native" || w == "synchronized" ||
           w == "transient" || w == "volatile" || w == "strictfp" || w == "default";
}

bool is_type_decl_word(std::string_view w) {
    return w == "class" || w == "interface" || w == "enum" || w == "record";
}

}  // namespace

class Parser {
public:
    explicit Parser(const SourceText& source) {
        tree_.source_ = source.content;
        LexResult lexed = lex(tree_.source_);
        if (lexed.had_errors) tree_.has_errors_ = true;
        for (const Token& t : lexed.tokens)
            if (!is_trivia(t.kind)) tokens_.push_back(t);
    }

    SyntaxTree run() {
        std::vector<NodeId> top;
        while (!eof()) {
            const std::size_t before = pos_;
            top.push_back(parse_top_level());
            if (pos_ == before) {  // safety: always make progress
                top.push_back(error_consume_one());
            }
        }
        NodeId root = make(NodeKind::Program, std::move(top));
        if (tree_.nodes_[root].children.empty()) {
            tree_.nodes_[root].span = {0, 0};
        }
        tree_.root_ = root;
        fix_parents(root, kNoNode);
        return std::move(tree_);
    }

private:
    SyntaxTree tree_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    // ---- token helpers -------------------------------------------------

    bool eof() const { return pos_ >= tokens_.size(); }
    const Token& peek(std::size_t off = 0) const { return tokens_[pos_ + off]; }
    bool has(std::size_t off = 0) const { return pos_ + off < tokens_.size(); }

    std::string_view text_at(std::size_t off = 0) const {
        return token_text(tree_.source_, tokens_[pos_ + off]);
    }
    bool at(std::string_view s) const { return !eof() && text_at() == s; }
    bool at_kind(TokenKind k) const { return !eof() && peek().kind == k; }

    std::size_t here() const {
        return eof() ? (tokens_.empty() ? 0 : tokens_.back().span.end)
                     : peek().span.begin;
    }

    struct Checkpoint {
        std::size_t pos;
        std::size_t node_count;
    };
    Checkpoint save() const { return {pos_, tree_.nodes_.size()}; }
    void restore(const Checkpoint& cp) {
        pos_ = cp.pos;
        tree_.nodes_.resize(cp.node_count);
    }

    // ---- node construction ---------------------------------------------

    NodeId make(NodeKind kind, std::vector<NodeId> children) {
        Span span{here(), here()};
        if (!children.empty()) {
            span.begin = tree_.nodes_[children.front()].span.begin;
            span.end = tree_.nodes_[children.back()].span.end;
        }
        tree_.nodes_.push_back({kind, span, kNoNode, std::move(children)});
        return static_cast<NodeId>(tree_.nodes_.size() - 1);
    }

    NodeId leaf() {
        assert(!eof());
        const Token& t = tokens_[pos_++];
        NodeKind kind = NodeKind::LeafOperator;
        switch (t.kind) {
            case TokenKind::Identifier: kind = NodeKind::LeafIdentifier; break;
            case TokenKind::Keyword: kind = NodeKind::LeafKeyword; break;
            case TokenKind::Number: kind = NodeKind::LeafNumber; break;
            case TokenKind::String: kind = NodeKind::LeafString; break;
            case TokenKind::Char: kind = NodeKind::LeafChar; break;
            case TokenKind::Error: kind = NodeKind::LeafOperator; break;
            default: break;
        }
        tree_.nodes_.push_back({kind, t.span, kNoNode, {}});
        return static_cast<NodeId>(tree_.nodes_.size() - 1);
    }

    NodeId expect(std::string_view s, std::vector<NodeId>& into) {
        if (at(s)) {
            NodeId id = leaf();
            into.push_back(id);
            return id;
        }
        tree_.has_errors_ = true;
        NodeId err = make(NodeKind::ErrorNode, {});
        into.push_back(err);
        return err;
    }

    NodeId error_consume_one() {
        tree_.has_errors_ = true;
        std::vector<NodeId> kids;
        if (!eof()) kids.push_back(leaf());
        return make(NodeKind::ErrorNode, std::move(kids));
    }

    /// Consumes tokens into an ErrorNode until a statement boundary.
    NodeId recover_statement() {
        tree_.has_errors_ = true;
        std::vector<NodeId> kids;
        int depth = 0;
        while (!eof()) {
            std::string_view t = text_at();
            if (depth == 0) {
                if (t == ";") {
                    kids.push_back(leaf());
                    break;
                }
                if (t == "}" || t == "{") break;
            } else if (t == "}") {
                --depth;
            }
            if (t == "{") ++depth;
            kids.push_back(leaf());
        }
        return make(NodeKind::ErrorNode, std::move(kids));
    }

    void fix_parents(NodeId id, NodeId parent) {
        tree_.nodes_[id].parent = parent;
        for (NodeId c : tree_.nodes_[id].children) fix_parents(c, id);
    }

    // ---- top level ------------------------------------------------------

    NodeId parse_top_level() {
        if (at("package") || at("import")) {
            std::vector<NodeId> kids;
            while (!eof() && !at(";")) kids.push_back(leaf());
            if (at(";")) kids.push_back(leaf());
            return make(NodeKind::ImportDecl, std::move(kids));
        }
        // lookahead for a type declaration, skipping modifiers/annotations
        std::size_t off = 0;
        while (has(off)) {
            std::string_view t = token_text(tree_.source_, tokens_[pos_ + off]);
            if (is_modifier_word(t)) {
                ++off;
            } else if (t == "@") {
                off += 2;  // @ Name, argument lists rare at this level
            } else {
                break;
            }
        }
        if (has(off) && is_type_decl_word(token_text(tree_.source_, tokens_[pos_ + off]))) {
            return parse_type_decl();
        }
        // tolerate bare members (method fragments) at top level
        return parse_member();
    }

    NodeId parse_modifiers(std::vector<NodeId>& into) {
        std::vector<NodeId> kids;
        while (!eof()) {
            if (at_kind(TokenKind::Keyword) && is_modifier_word(text_at())) {
                kids.push_back(leaf());
            } else if (at("@")) {
                kids.push_back(leaf());
                if (at_kind(TokenKind::Identifier) || at_kind(TokenKind::Keyword))
                    kids.push_back(leaf());
                while (at(".")) {
                    kids.push_back(leaf());
                    if (at_kind(TokenKind::Identifier)) kids.push_back(leaf());
                }
                if (at("(")) consume_balanced("(", ")", kids);
            } else {
                break;
            }
        }
        if (kids.empty()) return kNoNode;
        NodeId id = make(NodeKind::Modifiers, std::move(kids));
        into.push_back(id);
        return id;
    }

    void consume_balanced(std::string_view open, std::string_view close,
                          std::vector<NodeId>& kids) {
        int depth = 0;
        while (!eof()) {
            std::string_view t = text_at();
            if (t == open) ++depth;
            if (t == close) --depth;
            kids.push_back(leaf());
            if (depth == 0) break;
        }
    }

    NodeId parse_type_decl() {
        std::vector<NodeId> kids;
        parse_modifiers(kids);
        if (!eof() && is_type_decl_word(text_at())) kids.push_back(leaf());
        if (at_kind(TokenKind::Identifier)) kids.push_back(leaf());
        if (at("<")) skip_type_args(kids);
        if (at("(")) consume_balanced("(", ")", kids);  // record header
        // extends / implements / permits clause: raw tokens up to the body
        while (!eof() && !at("{") && !at(";")) kids.push_back(leaf());
        if (at("{")) {
            kids.push_back(parse_class_body());
        } else if (at(";")) {
            kids.push_back(leaf());
        }
        return make(NodeKind::TypeDecl, std::move(kids));
    }

    NodeId parse_class_body() {
        std::vector<NodeId> kids;
        expect("{", kids);
        while (!eof() && !at("}")) {
            const std::size_t before = pos_;
            kids.push_back(parse_member());
            if (pos_ == before) kids.push_back(error_consume_one());
        }
        expect("}", kids);
        return make(NodeKind::ClassBody, std::move(kids));
    }

    NodeId parse_member() {
        if (at(";")) {
            std::vector<NodeId> kids;
            kids.push_back(leaf());
            return make(NodeKind::EmptyStmt, std::move(kids));
        }
        {
            // nested type?
            std::size_t off = 0;
            while (has(off)) {
                std::string_view t = token_text(tree_.source_, tokens_[pos_ + off]);
                if (is_modifier_word(t)) ++off;
                else if (t == "@") off += 2;
                else break;
            }
            if (has(off) && is_type_decl_word(token_text(tree_.source_, tokens_[pos_ + off])))
                return parse_type_decl();
        }

        std::vector<NodeId> kids;
        parse_modifiers(kids);

        if (at("{")) {  // instance/static initializer
            kids.push_back(parse_block());
            return make(NodeKind::InitializerBlock, std::move(kids));
        }

        if (at("<")) {  // generic method type parameters
            std::vector<NodeId> tp;
            skip_type_args(tp);
            kids.push_back(make(NodeKind::TypeParams, std::move(tp)));
        }

        // constructor: Identifier '('
        if (at_kind(TokenKind::Identifier) && has(1) && text_at(1) == "(") {
            kids.push_back(leaf());  // name
            kids.push_back(parse_param_list());
            parse_method_tail(kids);
            return make(NodeKind::ConstructorDecl, std::move(kids));
        }

        // method or field: TypeRef Identifier ...
        Checkpoint cp = save();
        try {
            kids.push_back(parse_type_ref());
            if (!at_kind(TokenKind::Identifier)) throw ParseFail{};
            kids.push_back(leaf());  // name
            if (at("(")) {
                kids.push_back(parse_param_list());
                parse_method_tail(kids);
                return make(NodeKind::MethodDecl, std::move(kids));
            }
            // field declaration: declarators up to ';'
            parse_declarators(kids);
            return make(NodeKind::FieldDecl, std::move(kids));
        } catch (ParseFail&) {
            // drop speculative nodes but keep any modifiers we consumed
            restore(cp);
            kids.clear();
        }
        return recover_statement();
    }

    void parse_method_tail(std::vector<NodeId>& kids) {
        if (at("throws")) {
            std::vector<NodeId> th;
            th.push_back(leaf());
            while (!eof() && !at("{") && !at(";")) th.push_back(leaf());
            kids.push_back(make(NodeKind::ThrowsClause, std::move(th)));
        }
        if (at("{")) {
            kids.push_back(parse_block());
        } else {
            expect(";", kids);
        }
    }

    NodeId parse_param_list() {
        std::vector<NodeId> kids;
        expect("(", kids);
        while (!eof() && !at(")") && !at("{")) {
            Checkpoint cp = save();
            try {
                kids.push_back(parse_parameter());
            } catch (ParseFail&) {
                restore(cp);
                tree_.has_errors_ = true;
                std::vector<NodeId> err;
                while (!eof() && !at(",") && !at(")") && !at("{") && !at(";"))
                    err.push_back(leaf());
                kids.push_back(make(NodeKind::ErrorNode, std::move(err)));
            }
            if (at(",")) kids.push_back(leaf());
            else break;
        }
        expect(")", kids);
        return make(NodeKind::ParamList, std::move(kids));
    }

    NodeId parse_parameter() {
        std::vector<NodeId> kids;
        parse_modifiers(kids);
        kids.push_back(parse_type_ref());
        if (at("...")) kids.push_back(leaf());
        if (!at_kind(TokenKind::Identifier)) throw ParseFail{};
        kids.push_back(leaf());
        while (at("[")) {
            kids.push_back(leaf());
            if (at("]")) kids.push_back(leaf());
        }
        return make(NodeKind::Parameter, std::move(kids));
    }

    /// Type reference: primitive or qualified name, generics, array suffixes.
    NodeId parse_type_ref() {
        std::vector<NodeId> kids;
        if (at_kind(TokenKind::Keyword) && is_type_keyword(text_at())) {
            kids.push_back(leaf());
        } else if (at_kind(TokenKind::Identifier)) {
            kids.push_back(leaf());
            while (at(".") && has(1) && tokens_[pos_ + 1].kind == TokenKind::Identifier) {
                kids.push_back(leaf());
                kids.push_back(leaf());
            }
        } else if (at("?")) {  // wildcard inside type arguments
            kids.push_back(leaf());
            if (at("extends") || at("super")) {
                kids.push_back(leaf());
                kids.push_back(parse_type_ref());
            }
            return make(NodeKind::TypeRef, std::move(kids));
        } else {
            throw ParseFail{};
        }
        if (at("<")) skip_type_args(kids);
        while (at("[") && has(1) && text_at(1) == "]") {
            kids.push_back(leaf());
            kids.push_back(leaf());
        }
        return make(NodeKind::TypeRef, std::move(kids));
    }

    /// Consumes a balanced generic argument list starting at '<'. Closing
    /// '>>' and '>>>' tokens count for multiple levels. Fails when the scan
    /// runs into a token that cannot appear inside type arguments.
    void skip_type_args(std::vector<NodeId>& kids) {
        int depth = 0;
        while (!eof()) {
            std::string_view t = text_at();
            if (t == "<") {
                ++depth;
            } else if (t == ">" || t == ">>" || t == ">>>") {
                depth -= static_cast<int>(t.size());
                if (depth < 0) throw ParseFail{};
            } else if (t == ";" || t == "{" || t == "}" || t == "(" || t == ")") {
                throw ParseFail{};
            }
            kids.push_back(leaf());
            if (depth == 0) break;
        }
        if (depth != 0) throw ParseFail{};
    }

    // ---- statements -----------------------------------------------------

    NodeId parse_block() {
        std::vector<NodeId> kids;
        expect("{", kids);
        while (!eof() && !at("}")) {
            const std::size_t before = pos_;
            kids.push_back(parse_statement());
            if (pos_ == before) kids.push_back(error_consume_one());
        }
        expect("}", kids);
        return make(NodeKind::Block, std::move(kids));
    }

    NodeId parse_statement() {
        if (at("{")) return parse_block();
        if (at(";")) {
            std::vector<NodeId> kids;
            kids.push_back(leaf());
            return make(NodeKind::EmptyStmt, std::move(kids));
        }
        if (at("if")) return parse_if();
        if (at("for")) return parse_for();
        if (at("while")) return parse_while();
        if (at("do")) return parse_do();
        if (at("switch")) return parse_switch();
        if (at("try")) return parse_try();
        if (at("return")) return parse_keyword_stmt(NodeKind::ReturnStmt, true);
        if (at("throw")) return parse_keyword_stmt(NodeKind::ThrowStmt, true);
        if (at("break")) return parse_jump(NodeKind::BreakStmt);
        if (at("continue")) return parse_jump(NodeKind::ContinueStmt);
        if (at("synchronized")) return parse_sync();
        if (at("assert")) return parse_keyword_stmt(NodeKind::AssertStmt, true);
        if (at("yield")) return parse_keyword_stmt(NodeKind::ReturnStmt, true);

        // labeled statement: Identifier ':' Stmt  (':' not part of ternary here)
        if (at_kind(TokenKind::Identifier) && has(1) && text_at(1) == ":") {
            std::vector<NodeId> kids;
            kids.push_back(leaf());
            kids.push_back(leaf());
            kids.push_back(parse_statement());
            return make(NodeKind::LabeledStmt, std::move(kids));
        }

        // nested class in a method body (rare)
        if (!eof() && is_type_decl_word(text_at())) return parse_type_decl();

        // local variable declaration (speculative)
        {
            Checkpoint cp = save();
            try {
                std::vector<NodeId> kids;
                while (at("final")) kids.push_back(leaf());
                kids.push_back(parse_type_ref());
                if (at_kind(TokenKind::Identifier)) {
                    std::string_view nxt = has(1) ? text_at(1) : std::string_view{};
                    if (nxt == "=" || nxt == ";" || nxt == "," || nxt == "[") {
                        kids.push_back(leaf());  // first name
                        parse_declarators(kids);
                        return make(NodeKind::LocalVarDecl, std::move(kids));
                    }
                }
                throw ParseFail{};
            } catch (ParseFail&) {
                restore(cp);
            }
        }

        // expression statement
        {
            Checkpoint cp = save();
            try {
                std::vector<NodeId> kids;
                kids.push_back(parse_expression());
                expect(";", kids);
                return make(NodeKind::ExprStmt, std::move(kids));
            } catch (ParseFail&) {
                restore(cp);
            }
        }
        return recover_statement();
    }

    /// Declarator tail after "Type name": array suffixes, initializers,
    /// further comma-separated declarators, closing ';'.
    void parse_declarators(std::vector<NodeId>& kids) {
        while (true) {
            while (at("[") && has(1) && text_at(1) == "]") {
                kids.push_back(leaf());
                kids.push_back(leaf());
            }
            if (at("=")) {
                kids.push_back(leaf());
                if (at("{")) kids.push_back(parse_array_init());
                else kids.push_back(parse_expression());
            }
            if (at(",")) {
                kids.push_back(leaf());
                if (at_kind(TokenKind::Identifier)) kids.push_back(leaf());
                else throw ParseFail{};
                continue;
            }
            break;
        }
        expect(";", kids);
    }

    NodeId parse_keyword_stmt(NodeKind kind, bool optional_expr) {
        std::vector<NodeId> kids;
        kids.push_back(leaf());  // keyword
        if (!at(";") && optional_expr) {
            Checkpoint cp = save();
            try {
                kids.push_back(parse_expression());
            } catch (ParseFail&) {
                restore(cp);
                kids.push_back(recover_statement());
                return make(kind, std::move(kids));
            }
        }
        expect(";", kids);
        return make(kind, std::move(kids));
    }

    NodeId parse_jump(NodeKind kind) {
        std::vector<NodeId> kids;
        kids.push_back(leaf());
        if (at_kind(TokenKind::Identifier)) kids.push_back(leaf());
        expect(";", kids);
        return make(kind, std::move(kids));
    }

    NodeId parse_paren_expr(std::vector<NodeId>& kids) {
        expect("(", kids);
        Checkpoint cp = save();
        try {
            kids.push_back(parse_expression());
        } catch (ParseFail&) {
            restore(cp);
            tree_.has_errors_ = true;
            std::vector<NodeId> err;
            int depth = 1;
            while (!eof()) {
                std::string_view t = text_at();
                if (t == "(") ++depth;
                if (t == ")" && --depth == 0) break;
                if (t == "{" || t == ";") break;
                err.push_back(leaf());
            }
            kids.push_back(make(NodeKind::ErrorNode, std::move(err)));
        }
        return expect(")", kids);
    }

    NodeId parse_if() {
        std::vector<NodeId> kids;
        kids.push_back(leaf());  // if
        parse_paren_expr(kids);
        kids.push_back(parse_statement());
        if (at("else")) {
            std::vector<NodeId> ek;
            ek.push_back(leaf());
            ek.push_back(parse_statement());
            kids.push_back(make(NodeKind::ElseClause, std::move(ek)));
        }
        return make(NodeKind::IfStmt, std::move(kids));
    }

    NodeId parse_for() {
        std::vector<NodeId> kids;
        kids.push_back(leaf());  // for
        expect("(", kids);

        // enhanced for: [final] Type name ':' expr
        {
            Checkpoint cp = save();
            try {
                std::vector<NodeId> hk;
                while (at("final")) hk.push_back(leaf());
                hk.push_back(parse_type_ref());
                if (!at_kind(TokenKind::Identifier)) throw ParseFail{};
                hk.push_back(leaf());
                if (!at(":")) throw ParseFail{};
                hk.push_back(leaf());
                hk.push_back(parse_expression());
                for (NodeId id : hk) kids.push_back(id);
                expect(")", kids);
                kids.push_back(parse_statement());
                return make(NodeKind::EnhancedForStmt, std::move(kids));
            } catch (ParseFail&) {
                restore(cp);
            }
        }

        // classic for: init ';' cond ';' update
        if (!at(";")) {
            Checkpoint cp = save();
            try {
                std::vector<NodeId> ik;
                ik.push_back(parse_type_ref());
                if (!at_kind(TokenKind::Identifier)) throw ParseFail{};
                ik.push_back(leaf());
                if (!at("=")) throw ParseFail{};
                ik.push_back(leaf());
                ik.push_back(parse_expression());
                while (at(",")) {
                    ik.push_back(leaf());
                    ik.push_back(parse_expression());
                }
                kids.push_back(make(NodeKind::LocalVarDecl, std::move(ik)));
            } catch (ParseFail&) {
                restore(cp);
                try_expr_list(kids);
            }
        }
        expect(";", kids);
        if (!at(";")) try_expr(kids);
        expect(";", kids);
        if (!at(")")) try_expr_list(kids);
        expect(")", kids);
        kids.push_back(parse_statement());
        return make(NodeKind::ForStmt, std::move(kids));
    }

    void try_expr(std::vector<NodeId>& kids) {
        Checkpoint cp = save();
        try {
            kids.push_back(parse_expression());
        } catch (ParseFail&) {
            restore(cp);
            tree_.has_errors_ = true;
            std::vector<NodeId> err;
            while (!eof() && !at(";") && !at(")") && !at("{") && !at("}"))
                err.push_back(leaf());
            kids.push_back(make(NodeKind::ErrorNode, std::move(err)));
        }
    }

    void try_expr_list(std::vector<NodeId>& kids) {
        try_expr(kids);
        while (at(",")) {
            kids.push_back(leaf());
            try_expr(kids);
        }
    }

    NodeId parse_while() {
        std::vector<NodeId> kids;
        kids.push_back(leaf());
        parse_paren_expr(kids);
        kids.push_back(parse_statement());
        return make(NodeKind::WhileStmt, std::move(kids));
    }

    NodeId parse_do() {
        std::vector<NodeId> kids;
        kids.push_back(leaf());
        kids.push_back(parse_statement());
        if (at("while")) kids.push_back(leaf());
        parse_paren_expr(kids);
        expect(";", kids);
        return make(NodeKind::DoStmt, std::move(kids));
    }

    NodeId parse_switch() {
        std::vector<NodeId> kids;
        kids.push_back(leaf());  // switch
        parse_paren_expr(kids);
        expect("{", kids);
        while (!eof() && !at("}")) {
            if (at("case")) {
                std::vector<NodeId> ck;
                ck.push_back(leaf());
                while (!eof() && !at(":") && !at("->") && !at("}"))
                    ck.push_back(leaf());
                if (at(":") || at("->")) ck.push_back(leaf());
                kids.push_back(make(NodeKind::SwitchCase, std::move(ck)));
            } else if (at("default")) {
                std::vector<NodeId> dk;
                dk.push_back(leaf());
                if (at(":") || at("->")) dk.push_back(leaf());
                kids.push_back(make(NodeKind::SwitchDefault, std::move(dk)));
            } else {
                const std::size_t before = pos_;
                kids.push_back(parse_statement());
                if (pos_ == before) kids.push_back(error_consume_one());
            }
        }
        expect("}", kids);
        return make(NodeKind::SwitchStmt, std::move(kids));
    }

    NodeId parse_try() {
        std::vector<NodeId> kids;
        kids.push_back(leaf());  // try
        if (at("(")) {
            std::vector<NodeId> rk;
            consume_balanced("(", ")", rk);
            kids.push_back(make(NodeKind::ResourceSpec, std::move(rk)));
        }
        kids.push_back(parse_block());
        while (at("catch")) {
            std::vector<NodeId> ck;
            ck.push_back(leaf());
            if (at("(")) consume_balanced("(", ")", ck);
            if (at("{")) ck.push_back(parse_block());
            kids.push_back(make(NodeKind::CatchClause, std::move(ck)));
        }
        if (at("finally")) {
            std::vector<NodeId> fk;
            fk.push_back(leaf());
            if (at("{")) fk.push_back(parse_block());
            kids.push_back(make(NodeKind::FinallyClause, std::move(fk)));
        }
        return make(NodeKind::TryStmt, std::move(kids));
    }

    NodeId parse_sync() {
        std::vector<NodeId> kids;
        kids.push_back(leaf());
        if (at("(")) parse_paren_expr(kids);
        kids.push_back(parse_block());
        return make(NodeKind::SyncStmt, std::move(kids));
    }

    // ---- expressions ----------------------------------------------------

    NodeId parse_expression() { return parse_assignment(); }

    NodeId parse_assignment() {
        NodeId lhs = parse_ternary();
        if (!eof()) {
            std::string_view t = text_at();
            for (const char* op : kAssignOps) {
                if (t == op) {
                    std::vector<NodeId> kids{lhs};
                    kids.push_back(leaf());
                    kids.push_back(parse_assignment());
                    return make(NodeKind::AssignExpr, std::move(kids));
                }
            }
        }
        return lhs;
    }

    NodeId parse_ternary() {
        NodeId cond = parse_binary(0);
        if (at("?")) {
            std::vector<NodeId> kids{cond};
            kids.push_back(leaf());
            kids.push_back(parse_expression());
            if (!at(":")) throw ParseFail{};
            kids.push_back(leaf());
            kids.push_back(parse_ternary());
            return make(NodeKind::TernaryExpr, std::move(kids));
        }
        return cond;
    }

    NodeId parse_binary(std::size_t level) {
        if (level >= kBinaryLevels.size()) return parse_unary();
        NodeId lhs = parse_binary(level + 1);
        while (!eof()) {
            std::string_view t = text_at();
            if (level == 6 && t == "instanceof") {  // relational level
                std::vector<NodeId> kids{lhs};
                kids.push_back(leaf());
                kids.push_back(parse_type_ref());
                if (at_kind(TokenKind::Identifier)) kids.push_back(leaf());  // pattern
                lhs = make(NodeKind::InstanceofExpr, std::move(kids));
                continue;
            }
            bool hit = false;
            for (std::string_view op : kBinaryLevels[level]) {
                if (t == op) {
                    // '<' here could open generic args; accept the operator
                    // reading, which is the common case in expressions.
                    std::vector<NodeId> kids{lhs};
                    kids.push_back(leaf());
                    kids.push_back(parse_binary(level + 1));
                    lhs = make(NodeKind::BinaryExpr, std::move(kids));
                    hit = true;
                    break;
                }
            }
            if (!hit) break;
        }
        return lhs;
    }

    NodeId parse_unary() {
        if (at("+") || at("-") || at("!") || at("~") || at("++") || at("--")) {
            std::vector<NodeId> kids;
            kids.push_back(leaf());
            kids.push_back(parse_unary());
            return make(NodeKind::UnaryExpr, std::move(kids));
        }
        if (at("(") && looks_like_cast()) {
            std::vector<NodeId> kids;
            kids.push_back(leaf());  // (
            kids.push_back(parse_type_ref());
            expect(")", kids);
            kids.push_back(parse_unary());
            return make(NodeKind::CastExpr, std::move(kids));
        }
        return parse_postfix();
    }

    bool looks_like_cast() {
        Checkpoint cp = save();
        bool ok = false;
        try {
            leaf();  // (
            NodeId ty = parse_type_ref();
            if (at(")")) {
                const Node& t = tree_.nodes_[ty];
                bool primitive = t.children.size() >= 1 &&
                                 tree_.nodes_[t.children.front()].kind == NodeKind::LeafKeyword;
                bool arr_or_generic = t.children.size() > 1;
                leaf();  // )
                bool next_starts_operand =
                    !eof() && (at_kind(TokenKind::Identifier) ||
                               at_kind(TokenKind::Number) || at_kind(TokenKind::String) ||
                               at_kind(TokenKind::Char) || at("(") || at("!") || at("~") ||
                               at("this") || at("super") || at("new"));
                ok = primitive || arr_or_generic || next_starts_operand;
            }
        } catch (ParseFail&) {
            ok = false;
        }
        restore(cp);
        return ok;
    }

    NodeId parse_postfix() {
        NodeId expr = parse_primary();
        while (!eof()) {
            if (at(".")) {
                std::vector<NodeId> kids{expr};
                kids.push_back(leaf());  // .
                if (at_kind(TokenKind::Identifier) || at("this") || at("class") ||
                    at("new") || at("super")) {
                    kids.push_back(leaf());
                } else {
                    throw ParseFail{};
                }
                expr = make(NodeKind::FieldAccess, std::move(kids));
            } else if (at("(")) {
                std::vector<NodeId> kids{expr};
                kids.push_back(parse_arg_list());
                expr = make(NodeKind::CallExpr, std::move(kids));
            } else if (at("[")) {
                std::vector<NodeId> kids{expr};
                kids.push_back(leaf());
                if (!at("]")) kids.push_back(parse_expression());
                expect("]", kids);
                expr = make(NodeKind::ArrayAccess, std::move(kids));
            } else if (at("++") || at("--")) {
                std::vector<NodeId> kids{expr};
                kids.push_back(leaf());
                expr = make(NodeKind::PostfixExpr, std::move(kids));
            } else if (at("::")) {
                std::vector<NodeId> kids{expr};
                kids.push_back(leaf());
                if (at_kind(TokenKind::Identifier) || at("new")) kids.push_back(leaf());
                expr = make(NodeKind::MethodRef, std::move(kids));
            } else {
                break;
            }
        }
        return expr;
    }

    NodeId parse_arg_list() {
        std::vector<NodeId> kids;
        expect("(", kids);
        while (!eof() && !at(")")) {
            try_expr(kids);
            if (at(",")) kids.push_back(leaf());
            else break;
        }
        expect(")", kids);
        return make(NodeKind::ArgList, std::move(kids));
    }

    NodeId parse_primary() {
        if (eof()) throw ParseFail{};

        // lambda with parenthesized parameters
        if (at("(") && paren_lambda_ahead()) {
            std::vector<NodeId> kids;
            std::vector<NodeId> pk;
            consume_balanced("(", ")", pk);
            kids.push_back(make(NodeKind::ParamList, std::move(pk)));
            expect("->", kids);
            if (at("{")) kids.push_back(parse_block());
            else kids.push_back(parse_expression());
            return make(NodeKind::LambdaExpr, std::move(kids));
        }
        if (at("(")) {
            std::vector<NodeId> kids;
            kids.push_back(leaf());
            kids.push_back(parse_expression());
            if (!at(")")) throw ParseFail{};
            kids.push_back(leaf());
            return make(NodeKind::ParenExpr, std::move(kids));
        }
        if (at_kind(TokenKind::Identifier)) {
            if (has(1) && text_at(1) == "->") {  // single-parameter lambda
                std::vector<NodeId> kids;
                kids.push_back(leaf());
                kids.push_back(leaf());  // ->
                if (at("{")) kids.push_back(parse_block());
                else kids.push_back(parse_expression());
                return make(NodeKind::LambdaExpr, std::move(kids));
            }
            return leaf();
        }
        if (at_kind(TokenKind::Number) || at_kind(TokenKind::String) ||
            at_kind(TokenKind::Char)) {
            return leaf();
        }
        if (at("this") || at("super") || at("null") || at("true") || at("false")) {
            return leaf();
        }
        // boolean/null literals lex as identifiers; plain keywords below
        if (at_kind(TokenKind::Keyword)) {
            std::string_view t = text_at();
            if (t == "new") return parse_new();
            if (t == "switch") return parse_switch();  // switch expression
            if (is_type_keyword(t)) {
                // e.g. int.class or int[]::new
                std::vector<NodeId> kids;
                kids.push_back(leaf());
                while (at("[") && has(1) && text_at(1) == "]") {
                    kids.push_back(leaf());
                    kids.push_back(leaf());
                }
                return make(NodeKind::TypeRef, std::move(kids));
            }
        }
        if (at("{")) return parse_array_init();
        throw ParseFail{};
    }

    bool paren_lambda_ahead() const {
        // scan balanced parens; lambda iff the next token is '->'
        int depth = 0;
        std::size_t i = pos_;
        while (i < tokens_.size()) {
            std::string_view t = token_text(tree_.source_, tokens_[i]);
            if (t == "(") ++depth;
            else if (t == ")") {
                if (--depth == 0) {
                    return i + 1 < tokens_.size() &&
                           token_text(tree_.source_, tokens_[i + 1]) == "->";
                }
            } else if (t == ";" || t == "{" || t == "}") {
                return false;
            }
            ++i;
        }
        return false;
    }

    NodeId parse_new() {
        std::vector<NodeId> kids;
        kids.push_back(leaf());  // new
        kids.push_back(parse_type_ref());
        if (at("(")) {
            kids.push_back(parse_arg_list());
            if (at("{")) kids.push_back(parse_class_body());  // anonymous class
        } else {
            while (at("[")) {
                kids.push_back(leaf());
                if (!at("]")) kids.push_back(parse_expression());
                expect("]", kids);
            }
            if (at("{")) kids.push_back(parse_array_init());
        }
        return make(NodeKind::NewExpr, std::move(kids));
    }

    NodeId parse_array_init() {
        std::vector<NodeId> kids;
        expect("{", kids);
        while (!eof() && !at("}")) {
            if (at("{")) kids.push_back(parse_array_init());
            else try_expr(kids);
            if (at(",")) kids.push_back(leaf());
            else break;
        }
        expect("}", kids);
        return make(NodeKind::ArrayInit, std::move(kids));
    }
};

SyntaxTree parse(const SourceText& source) {
    if (source.language != Language::Java) {
        throw UnsupportedLanguage("only Java is supported");
    }
    return Parser(source).run();
}

std::vector<NodeId> SyntaxTree::leaves(NodeId id) const {
    std::vector<NodeId> out;
    walk(id, [&](NodeId n) {
        if (nodes_[n].is_leaf()) out.push_back(n);
    });
    return out;
}

std::vector<FunctionUnit> extract_functions(const SyntaxTree& tree) {
    std::vector<FunctionUnit> out;
    tree.walk(tree.root(), [&](NodeId id) {
        const Node& n = tree.node(id);
        if (n.kind != NodeKind::MethodDecl && n.kind != NodeKind::ConstructorDecl)
            return;
        FunctionUnit unit;
        unit.decl_node = id;
        unit.decl_span = n.span;
        unit.is_constructor = (n.kind == NodeKind::ConstructorDecl);
        unit.body_span = {n.span.end, n.span.end};
        NodeId param_list = kNoNode;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            const Node& c = tree.node(n.children[i]);
            if (c.kind == NodeKind::ParamList && param_list == kNoNode) {
                param_list = n.children[i];
                // declaration name is the identifier right before the params
                if (i > 0) {
                    const Node& prev = tree.node(n.children[i - 1]);
                    if (prev.kind == NodeKind::LeafIdentifier)
                        unit.name = std::string(tree.text(n.children[i - 1]));
                }
            } else if (c.kind == NodeKind::Block) {
                unit.body_span = c.span;
            }
        }
        if (param_list != kNoNode) {
            for (NodeId pid : tree.node(param_list).children) {
                const Node& p = tree.node(pid);
                if (p.kind != NodeKind::Parameter) continue;
                ParamInfo info;
                for (NodeId cc : p.children) {
                    const Node& c = tree.node(cc);
                    if (c.kind == NodeKind::TypeRef) info.declared_type = tree.text(cc);
                    if (c.kind == NodeKind::LeafIdentifier) info.name = tree.text(cc);
                }
                unit.parameters.push_back(std::move(info));
            }
        }
        out.push_back(std::move(unit));
    });
    std::sort(out.begin(), out.end(), [](const FunctionUnit& a, const FunctionUnit& b) {
        return a.decl_span.begin < b.decl_span.begin;
    });
    return out;
}

std::size_t count_lexical_tokens(const SourceText& source) {
    LexResult lexed = lex(source.content);
    std::size_t count = 0;
    for (const Token& t : lexed.tokens)
        if (!is_trivia(t.kind)) ++count;
    return count;
}

LocProfile count_lines(const SourceText& source) {
    const std::string& s = source.content;
    LocProfile out;
    if (s.empty()) return out;

    // line start offsets; a trailing newline does not open a new line
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] == '\n') starts.push_back(i + 1);
    if (s.back() == '\n' && starts.size() > 1 && starts.back() == s.size()) starts.pop_back();
    out.total = starts.size();

    auto line_of = [&](std::size_t off) {
        auto it = std::upper_bound(starts.begin(), starts.end(), off);
        return static_cast<std::size_t>(it - starts.begin()) - 1;
    };

    std::vector<bool> has_code(out.total, false), has_comment(out.total, false);
    LexResult lexed = lex(s);
    for (const Token& t : lexed.tokens) {
        if (t.kind == TokenKind::Whitespace) continue;
        if (t.span.begin >= s.size()) continue;
        const std::size_t first = line_of(t.span.begin);
        const std::size_t last = line_of(t.span.end > t.span.begin ? t.span.end - 1
                                                                   : t.span.begin);
        const bool comment =
            t.kind == TokenKind::LineComment || t.kind == TokenKind::BlockComment;
        for (std::size_t ln = first; ln <= last && ln < out.total; ++ln) {
            if (comment) has_comment[ln] = true;
            else has_code[ln] = true;
        }
    }
    for (std::size_t ln = 0; ln < out.total; ++ln) {
        if (has_code[ln]) ++out.code;
        else if (has_comment[ln]) ++out.comment;
        else ++out.blank;
    }
    return out;
}

SourceText wrap_snippet(const SourceText& source, std::size_t* shell_prefix_len) {
    if (shell_prefix_len) *shell_prefix_len = 0;
    LexResult lexed = lex(source.content);
    for (const Token& t : lexed.tokens) {
        if (is_trivia(t.kind)) continue;
        std::string_view text = token_text(source.content, t);
        if (t.kind == TokenKind::Keyword && is_type_decl_word(text)) return source;
        if (text == "{" || text == "(") break;  // signature starts before any type decl
    }
    static const std::string prefix = "class __Snippet {\n";
    SourceText wrapped;
    wrapped.language = source.language;
    wrapped.content = prefix + source.content + "\n}\n";
    if (shell_prefix_len) *shell_prefix_len = prefix.size();
    return wrapped;
}

}  // namespace tokenlens
