#include <cctype>
#include <fstream>
#include <sstream>

#include "pascal/hdl.hpp"

namespace pascal {

namespace {

struct Token {
    enum class Kind { Ident, Number, Symbol, Eof } kind;
    std::string text;     // ident text or symbol spelling
    uint64_t value = 0;   // Number
    int width = -1;       // Number: -1 if unsized
    int line = 1, col = 1;
};

const char *kSymbols[] = {"<<", ">>", "==", "!=", "<=", "(", ")", "[", "]", "{", "}",
                          ",", ";", ":", "?", "=", "<", "+", "-", "*", "&", "|",
                          "^", "~", "@"};

struct Lexer {
    const std::string &src;
    size_t pos = 0;
    int line = 1, col = 1;
    std::vector<Token> tokens;
    std::vector<std::pair<std::string, std::pair<int, int>>> pragma_comments;

    explicit Lexer(const std::string &s) : src(s) {}

    char peek(size_t off = 0) const { return pos + off < src.size() ? src[pos + off] : '\0'; }

    void advance() {
        if (src[pos] == '\n') {
            line++;
            col = 1;
        } else {
            col++;
        }
        pos++;
    }

    void run() {
        while (pos < src.size()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                int cl = line, cc = col;
                std::string body;
                while (pos < src.size() && peek() != '\n') {
                    body += peek();
                    advance();
                }
                // strip leading "//" and spaces; keep pragma comments
                size_t i = 2;
                while (i < body.size() && (body[i] == ' ' || body[i] == '\t'))
                    i++;
                if (i < body.size() && body[i] == '@')
                    pragma_comments.push_back({body.substr(i + 1), {cl, cc}});
                continue;
            }
            if (std::isalpha((unsigned char)c) || c == '_') {
                Token t{Token::Kind::Ident, "", 0, -1, line, col};
                while (std::isalnum((unsigned char)peek()) || peek() == '_') {
                    t.text += peek();
                    advance();
                }
                tokens.push_back(std::move(t));
                continue;
            }
            if (std::isdigit((unsigned char)c)) {
                lex_number();
                continue;
            }
            bool matched = false;
            for (const char *sym : kSymbols) {
                size_t n = std::string(sym).size();
                if (src.compare(pos, n, sym) == 0) {
                    Token t{Token::Kind::Symbol, sym, 0, -1, line, col};
                    for (size_t k = 0; k < n; k++)
                        advance();
                    tokens.push_back(std::move(t));
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw LexError(std::string("illegal character '") + c + "'", line, col);
        }
        tokens.push_back({Token::Kind::Eof, "<eof>", 0, -1, line, col});
    }

    void lex_number() {
        Token t{Token::Kind::Number, "", 0, -1, line, col};
        uint64_t dec = 0;
        std::string digits;
        while (std::isdigit((unsigned char)peek())) {
            digits += peek();
            advance();
        }
        if (digits.size() > 19)
            throw LexError("decimal literal too large", t.line, t.col);
        for (char d : digits)
            dec = dec * 10 + (uint64_t)(d - '0');
        if (peek() != '\'') {
            t.value = dec;
            tokens.push_back(std::move(t));
            return;
        }
        // sized hex literal: <width>'h<hexdigits>
        advance();
        if (peek() != 'h')
            throw LexError("expected 'h' after width in sized literal", line, col);
        advance();
        if (dec < 1 || dec > (uint64_t)kMaxWidth)
            throw LexError("literal width out of range 1..64", t.line, t.col);
        t.width = (int)dec;
        std::string hex;
        while (std::isxdigit((unsigned char)peek())) {
            hex += peek();
            advance();
        }
        if (hex.empty())
            throw LexError("sized literal has no hex digits", line, col);
        if (hex.size() > 16)
            throw LexError("hex literal too large", t.line, t.col);
        uint64_t v = 0;
        for (char h : hex) {
            v = (v << 4) |
                (uint64_t)(std::isdigit((unsigned char)h) ? h - '0'
                                                          : std::tolower((unsigned char)h) - 'a' + 10);
        }
        if ((v & ~width_mask(t.width)) != 0)
            throw LexError("literal value does not fit declared width", t.line, t.col);
        t.value = v;
        tokens.push_back(std::move(t));
    }
};

struct Parser {
    std::vector<Token> toks;
    size_t idx = 0;

    const Token &cur() const { return toks[idx]; }
    const Token &next() { return toks[idx++]; }

    [[noreturn]] void fail(const std::string &msg) const {
        throw SyntaxError(msg + " (got '" + cur().text + "')", cur().line, cur().col);
    }

    bool at_symbol(const std::string &s) const {
        return cur().kind == Token::Kind::Symbol && cur().text == s;
    }
    bool at_ident(const std::string &s) const {
        return cur().kind == Token::Kind::Ident && cur().text == s;
    }
    void expect_symbol(const std::string &s) {
        if (!at_symbol(s))
            fail("expected '" + s + "'");
        idx++;
    }
    void expect_keyword(const std::string &s) {
        if (!at_ident(s))
            fail("expected '" + s + "'");
        idx++;
    }
    std::string expect_ident() {
        if (cur().kind != Token::Kind::Ident)
            fail("expected identifier");
        return next().text;
    }
    int expect_int() {
        if (cur().kind != Token::Kind::Number || cur().width != -1)
            fail("expected plain decimal number");
        uint64_t v = next().value;
        if (v > 1u << 20)
            fail("number out of range");
        return (int)v;
    }

    SourceModule parse_module() {
        SourceModule m;
        expect_keyword("module");
        m.name = expect_ident();
        expect_symbol("(");
        m.ports.push_back(parse_port());
        while (at_symbol(",")) {
            idx++;
            m.ports.push_back(parse_port());
        }
        expect_symbol(")");
        expect_symbol(";");
        while (!at_ident("endmodule")) {
            if (cur().kind == Token::Kind::Eof)
                fail("expected 'endmodule'");
            parse_item(m);
        }
        idx++;
        if (cur().kind != Token::Kind::Eof)
            fail("trailing input after 'endmodule'");
        return m;
    }

    AstPort parse_port() {
        AstPort p;
        p.line = cur().line;
        p.col = cur().col;
        if (at_ident("input"))
            p.is_input = true;
        else if (at_ident("output"))
            p.is_input = false;
        else
            fail("expected 'input' or 'output'");
        idx++;
        if (at_ident("reg")) {
            if (p.is_input)
                fail("'input reg' is not allowed");
            p.is_reg = true;
            idx++;
        }
        p.width = parse_opt_range();
        p.name = expect_ident();
        return p;
    }

    // "[" int ":" "0" "]" -> width, or 1 when absent
    int parse_opt_range() {
        if (!at_symbol("["))
            return 1;
        idx++;
        int hi = expect_int();
        expect_symbol(":");
        int lo = expect_int();
        if (lo != 0)
            fail("declaration ranges must end at 0");
        if (hi < 0 || hi >= kMaxWidth)
            fail("declaration range out of 1..64 bits");
        expect_symbol("]");
        return hi + 1;
    }

    void parse_item(SourceModule &m) {
        if (at_ident("wire") || at_ident("reg")) {
            AstDecl d;
            d.line = cur().line;
            d.col = cur().col;
            d.is_reg = at_ident("reg");
            idx++;
            d.width = parse_opt_range();
            d.name = expect_ident();
            expect_symbol(";");
            m.decls.push_back(std::move(d));
            return;
        }
        if (at_ident("assign")) {
            AstAssign a;
            a.line = cur().line;
            a.col = cur().col;
            idx++;
            a.target = expect_ident();
            expect_symbol("=");
            a.rhs = parse_expr();
            expect_symbol(";");
            m.assigns.push_back(std::move(a));
            return;
        }
        if (at_ident("always")) {
            AstAlways blk;
            blk.line = cur().line;
            blk.col = cur().col;
            idx++;
            expect_symbol("@");
            expect_symbol("(");
            expect_keyword("posedge");
            expect_keyword("clk");
            expect_symbol(")");
            blk.body = parse_stmt();
            m.always_blocks.push_back(std::move(blk));
            return;
        }
        fail("expected declaration, assign, or always block");
    }

    AstStmtPtr parse_stmt() {
        auto s = std::make_shared<AstStmt>();
        s->line = cur().line;
        s->col = cur().col;
        if (at_ident("begin")) {
            idx++;
            s->kind = AstStmt::Kind::Block;
            while (!at_ident("end")) {
                if (cur().kind == Token::Kind::Eof)
                    fail("expected 'end'");
                s->stmts.push_back(parse_stmt());
            }
            idx++;
            return s;
        }
        if (at_ident("if")) {
            idx++;
            s->kind = AstStmt::Kind::If;
            expect_symbol("(");
            s->cond = parse_expr();
            expect_symbol(")");
            s->then_stmt = parse_stmt();
            if (at_ident("else")) {
                idx++;
                s->else_stmt = parse_stmt();
            }
            return s;
        }
        s->kind = AstStmt::Kind::NonBlocking;
        s->target = expect_ident();
        expect_symbol("<=");
        s->rhs = parse_expr();
        expect_symbol(";");
        return s;
    }

    // precedence (loosest first): ?:  |  ^  &  ==/!=  <  <</>>  +/-  *  unary
    AstExprPtr parse_expr() { return parse_ternary(); }

    AstExprPtr parse_ternary() {
        AstExprPtr c = parse_or();
        if (!at_symbol("?"))
            return c;
        auto e = std::make_shared<AstExpr>();
        e->kind = AstExpr::Kind::Ternary;
        e->line = cur().line;
        e->col = cur().col;
        idx++;
        AstExprPtr t = parse_ternary();
        expect_symbol(":");
        AstExprPtr f = parse_ternary();
        e->args = {c, t, f};
        return e;
    }

    AstExprPtr parse_binary_level(int level) {
        static const std::vector<std::vector<std::string>> kLevels = {
            {"|"}, {"^"}, {"&"}, {"==", "!="}, {"<"}, {"<<", ">>"}, {"+", "-"}, {"*"}};
        if (level >= (int)kLevels.size())
            return parse_unary();
        AstExprPtr lhs = parse_binary_level(level + 1);
        for (;;) {
            bool matched = false;
            for (const auto &op : kLevels[level]) {
                if (at_symbol(op)) {
                    auto e = std::make_shared<AstExpr>();
                    e->kind = AstExpr::Kind::Binary;
                    e->bin_op = op;
                    e->line = cur().line;
                    e->col = cur().col;
                    idx++;
                    AstExprPtr rhs = parse_binary_level(level + 1);
                    e->args = {lhs, rhs};
                    lhs = e;
                    matched = true;
                    break;
                }
            }
            if (!matched)
                return lhs;
        }
    }

    AstExprPtr parse_or() { return parse_binary_level(0); }

    AstExprPtr parse_unary() {
        if (at_symbol("~") || at_symbol("-")) {
            auto e = std::make_shared<AstExpr>();
            e->kind = AstExpr::Kind::Unary;
            e->unary_op = cur().text[0];
            e->line = cur().line;
            e->col = cur().col;
            idx++;
            e->args = {parse_unary()};
            return e;
        }
        return parse_primary();
    }

    AstExprPtr parse_primary() {
        auto e = std::make_shared<AstExpr>();
        e->line = cur().line;
        e->col = cur().col;
        if (cur().kind == Token::Kind::Number) {
            e->kind = AstExpr::Kind::Number;
            e->value = cur().value;
            e->width = cur().width;
            idx++;
            return e;
        }
        if (at_symbol("(")) {
            idx++;
            AstExprPtr inner = parse_expr();
            expect_symbol(")");
            return inner;
        }
        if (at_symbol("{")) {
            e->kind = AstExpr::Kind::Concat;
            idx++;
            e->args.push_back(parse_expr());
            while (at_symbol(",")) {
                idx++;
                e->args.push_back(parse_expr());
            }
            expect_symbol("}");
            return e;
        }
        if (cur().kind == Token::Kind::Ident) {
            e->name = next().text;
            if (at_symbol("[")) {
                e->kind = AstExpr::Kind::Index;
                idx++;
                e->hi = expect_int();
                if (at_symbol(":")) {
                    idx++;
                    e->lo = expect_int();
                } else {
                    e->lo = e->hi;
                }
                expect_symbol("]");
            } else {
                e->kind = AstExpr::Kind::Ident;
            }
            return e;
        }
        fail("expected expression");
    }
};

void parse_pragmas(const std::vector<std::pair<std::string, std::pair<int, int>>> &comments,
                   PragmaSet &out) {
    for (const auto &[body, pos] : comments) {
        std::istringstream in(body);
        std::string kind;
        in >> kind;
        std::vector<std::string> words;
        std::string w;
        while (in >> w)
            words.push_back(w);
        auto need_one = [&](const std::string &k) {
            if (words.size() != 1)
                throw SyntaxError("pragma @" + k + " expects exactly one name", pos.first,
                                  pos.second);
            return words[0];
        };
        if (kind == "secret") {
            if (words.empty())
                throw SyntaxError("pragma @secret expects at least one name", pos.first,
                                  pos.second);
            for (auto &n : words)
                out.secret.push_back(n);
        } else if (kind == "observable") {
            if (words.empty())
                throw SyntaxError("pragma @observable expects at least one name", pos.first,
                                  pos.second);
            for (auto &n : words)
                out.observable.push_back(n);
        } else if (kind == "start") {
            out.start = need_one("start");
        } else if (kind == "done") {
            out.done = need_one("done");
        } else if (kind == "bound") {
            try {
                out.bound = std::stoi(need_one("bound"));
            } catch (const std::exception &) {
                throw SyntaxError("pragma @bound expects an integer", pos.first, pos.second);
            }
        } else if (kind == "compensator") {
            if (words.size() != 2)
                throw SyntaxError("pragma @compensator expects <signal> <t_max>", pos.first,
                                  pos.second);
            try {
                out.compensator = {words[0], std::stoi(words[1])};
            } catch (const std::exception &) {
                throw SyntaxError("pragma @compensator expects an integer t_max", pos.first,
                                  pos.second);
            }
        } else {
            throw SyntaxError("unknown pragma @" + kind, pos.first, pos.second);
        }
    }
}

} // namespace

SourceModule parse(const std::string &text) {
    Lexer lex(text);
    lex.run();
    Parser p;
    p.toks = std::move(lex.tokens);
    SourceModule m = p.parse_module();
    parse_pragmas(lex.pragma_comments, m.pragmas);
    return m;
}

Design load_design_text(const std::string &text) {
    SourceModule m = parse(text);
    return elaborate(m, m.pragmas);
}

Design load_design_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_design_text(ss.str());
}

} // namespace pascal
