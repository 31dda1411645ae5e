// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "semdiff/error.hpp"

namespace semdiff::text {

std::string_view to_string(SourceKind kind) {
    switch (kind) {
    case SourceKind::ClassDiagram: return "cd";
    case SourceKind::ObjectDiagram: return "od";
    case SourceKind::ActivityDiagram: return "ad";
    }
    return "?";
}

namespace {

struct Token {
    enum class Kind { Ident, Int, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int col = 1;

    std::string describe() const {
        switch (kind) {
        case Kind::Ident: return "identifier '" + text + "'";
        case Kind::Int: return "integer " + text;
        case Kind::Sym: return "'" + text + "'";
        case Kind::End: return "end of input";
        }
        return "?";
    }
};

std::vector<Token> lex(std::string_view src) {
    static const char* const two_char[] = {"..", "--", "->", ":=", "<=", ">=", "==", "!=", "&&", "||"};
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
                ++j;
            }
            t.kind = Token::Kind::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            t.kind = Token::Kind::Int;
            t.text = std::string(src.substr(i, j - i));
            if (t.text.size() > 15) {
                throw Error(ErrorKind::ParseError, t.text,
                            std::to_string(line) + ":" + std::to_string(col) + ": integer literal too large");
            }
            t.value = std::stoll(t.text);
            advance(j - i);
        } else {
            t.kind = Token::Kind::Sym;
            for (const char* sym : two_char) {
                if (src.substr(i, 2) == sym) {
                    t.text = sym;
                    break;
                }
            }
            if (t.text.empty()) {
                if (std::string_view("{};:[]()+-<>!*=,").find(c) == std::string_view::npos) {
                    throw Error(ErrorKind::ParseError, std::string(1, c),
                                std::to_string(line) + ":" + std::to_string(col) + ": unexpected character '" +
                                    std::string(1, c) + "'");
                }
                t.text = std::string(1, c);
            }
            advance(t.text.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

class Parser {
  public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at_sym(std::string_view s, std::size_t ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Sym && peek(ahead).text == s;
    }
    bool at_word(std::string_view s) const { return peek().kind == Token::Kind::Ident && peek().text == s; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        throw Error(ErrorKind::ParseError, t.text,
                    std::to_string(t.line) + ":" + std::to_string(t.col) + ": expected " + expected + ", found " +
                        t.describe());
    }

    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    void expect_sym(std::string_view s) {
        if (!at_sym(s)) {
            fail("'" + std::string(s) + "'");
        }
        take();
    }
    bool accept_sym(std::string_view s) {
        if (at_sym(s)) {
            take();
            return true;
        }
        return false;
    }
    void expect_word(std::string_view s) {
        if (!at_word(s)) {
            fail("'" + std::string(s) + "'");
        }
        take();
    }
    std::string ident(const std::string& what) {
        if (peek().kind != Token::Kind::Ident) {
            fail(what);
        }
        return take().text;
    }
    std::int64_t integer(const std::string& what) {
        const bool neg = accept_sym("-");
        if (peek().kind != Token::Kind::Int) {
            fail(what);
        }
        const std::int64_t v = take().value;
        return neg ? -v : v;
    }
    void expect_end() {
        if (peek().kind != Token::Kind::End) {
            fail("end of input");
        }
    }

    cd::MultRange multiplicity() {
        const bool bracketed = accept_sym("[");
        cd::MultRange m;
        if (accept_sym("*")) {
            m = cd::MultRange::many();
        } else {
            if (peek().kind != Token::Kind::Int) {
                fail("multiplicity");
            }
            m.lo = static_cast<std::uint32_t>(take().value);
            m.hi = m.lo;
            if (accept_sym("..")) {
                if (accept_sym("*")) {
                    m.hi.reset();
                } else if (peek().kind == Token::Kind::Int) {
                    m.hi = static_cast<std::uint32_t>(take().value);
                } else {
                    fail("upper bound or '*'");
                }
            }
        }
        if (bracketed) {
            expect_sym("]");
        }
        return m;
    }

    // expr := or ; or := and ('||' and)* ; and := cmp ('&&' cmp)* ;
    // cmp := sum (op sum)? ; sum := unary (('+'|'-') unary)* ; unary := ('!'|'-') unary | atom
    ad::Expr expr() { return disjunction(); }

    ad::Expr disjunction() {
        ad::Expr e = conjunction();
        while (accept_sym("||")) {
            e = ad::Expr::binary(ad::Expr::Op::Or, std::move(e), conjunction());
        }
        return e;
    }
    ad::Expr conjunction() {
        ad::Expr e = comparison();
        while (accept_sym("&&")) {
            e = ad::Expr::binary(ad::Expr::Op::And, std::move(e), comparison());
        }
        return e;
    }
    ad::Expr comparison() {
        ad::Expr e = sum();
        static const std::pair<const char*, ad::Expr::Op> ops[] = {
            {"<=", ad::Expr::Op::Le}, {">=", ad::Expr::Op::Ge}, {"==", ad::Expr::Op::Eq},
            {"!=", ad::Expr::Op::Ne}, {"<", ad::Expr::Op::Lt},  {">", ad::Expr::Op::Gt}};
        for (const auto& [sym, op] : ops) {
            if (accept_sym(sym)) {
                return ad::Expr::binary(op, std::move(e), sum());
            }
        }
        return e;
    }
    ad::Expr sum() {
        ad::Expr e = unary();
        while (true) {
            if (accept_sym("+")) {
                e = ad::Expr::binary(ad::Expr::Op::Add, std::move(e), unary());
            } else if (at_sym("-")) {
                take();
                e = ad::Expr::binary(ad::Expr::Op::Sub, std::move(e), unary());
            } else if (at_sym("--")) {
                // "a--1" lexes as a, --, 1
                take();
                e = ad::Expr::binary(ad::Expr::Op::Sub, std::move(e), negate(unary()));
            } else {
                return e;
            }
        }
    }
    static ad::Expr negate(ad::Expr e) {
        if (e.op == ad::Expr::Op::Const && e.value >= 0 && e.args.empty()) {
            return ad::Expr::constant(-e.value);
        }
        return ad::Expr::unary(ad::Expr::Op::Neg, std::move(e));
    }
    ad::Expr unary() {
        if (accept_sym("!")) {
            return ad::Expr::unary(ad::Expr::Op::Not, unary());
        }
        if (at_sym("--")) {
            take();
            return ad::Expr::unary(ad::Expr::Op::Neg, negate_literal_only());
        }
        if (accept_sym("-")) {
            return negate_literal_only();
        }
        return atom();
    }
    // After a unary minus: a literal folds into a negative constant.
    ad::Expr negate_literal_only() {
        if (peek().kind == Token::Kind::Int) {
            return ad::Expr::constant(-take().value);
        }
        return ad::Expr::unary(ad::Expr::Op::Neg, unary());
    }
    ad::Expr atom() {
        if (peek().kind == Token::Kind::Int) {
            return ad::Expr::constant(take().value);
        }
        if (peek().kind == Token::Kind::Ident) {
            return ad::Expr::variable(take().text);
        }
        if (accept_sym("(")) {
            ad::Expr e = expr();
            expect_sym(")");
            return e;
        }
        fail("expression");
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

cd::ClassDiagram parse_cd(std::string_view text) {
    Parser p(text);
    cd::ClassDiagram cd;
    p.expect_word("classdiagram");
    cd.name = p.ident("diagram name");
    p.expect_sym("{");
    while (!p.accept_sym("}")) {
        if (p.at_word("class")) {
            p.take();
            cd::ClassDecl c;
            c.name = p.ident("class name");
            if (p.at_word("abstract")) {
                p.take();
                c.is_abstract = true;
            }
            if (p.at_word("extends")) {
                p.take();
                c.superclass = p.ident("superclass name");
            }
            p.expect_sym(";");
            cd.classes.push_back(std::move(c));
        } else if (p.at_word("association")) {
            p.take();
            cd::Association a;
            a.name = p.ident("association name");
            a.side_a.mult = p.multiplicity();
            a.side_a.cls = p.ident("class name");
            p.expect_sym("--");
            a.side_b.cls = p.ident("class name");
            a.side_b.mult = p.multiplicity();
            p.expect_sym(";");
            cd.associations.push_back(std::move(a));
        } else {
            p.fail("'class', 'association' or '}'");
        }
    }
    p.expect_end();
    return cd;
}

cd::ObjectModel parse_od(std::string_view text) {
    Parser p(text);
    cd::ObjectModel om;
    p.expect_word("objectdiagram");
    om.name = p.ident("diagram name");
    p.expect_sym("{");
    while (!p.accept_sym("}")) {
        if (p.at_word("link") && !p.at_sym(":", 1)) {
            p.take();
            cd::Link l;
            l.assoc = p.ident("association name");
            l.a = p.ident("object id");
            p.expect_sym("--");
            l.b = p.ident("object id");
            p.expect_sym(";");
            om.links.push_back(std::move(l));
        } else if (p.peek().kind == Token::Kind::Ident) {
            cd::Object o;
            o.id = p.take().text;
            p.expect_sym(":");
            o.cls = p.ident("class name");
            p.expect_sym(";");
            om.objects.push_back(std::move(o));
        } else {
            p.fail("object declaration, 'link' or '}'");
        }
    }
    p.expect_end();
    return om;
}

ad::ActivityDiagram parse_ad(std::string_view text) {
    static const std::pair<const char*, ad::NodeKind> kinds[] = {
        {"initial", ad::NodeKind::Initial}, {"final", ad::NodeKind::Final}, {"action", ad::NodeKind::Action},
        {"decision", ad::NodeKind::Decision}, {"merge", ad::NodeKind::Merge}, {"fork", ad::NodeKind::Fork},
        {"join", ad::NodeKind::Join}};
    Parser p(text);
    ad::ActivityDiagram ad;
    p.expect_word("activitydiagram");
    ad.name = p.ident("diagram name");
    p.expect_sym("{");
    auto range = [&](ad::VarDecl& v) {
        v.name = p.ident("variable name");
        p.expect_sym(":");
        v.lo = p.integer("lower bound");
        p.expect_sym("..");
        v.hi = p.integer("upper bound");
    };
    while (!p.accept_sym("}")) {
        if (p.at_word("input")) {
            p.take();
            ad::VarDecl v;
            range(v);
            p.expect_sym(";");
            ad.inputs.push_back(std::move(v));
            continue;
        }
        if (p.at_word("local")) {
            p.take();
            ad::VarDecl v;
            range(v);
            p.expect_sym("=");
            v.init = p.integer("initial value");
            p.expect_sym(";");
            ad.locals.push_back(std::move(v));
            continue;
        }
        if (p.at_word("edge")) {
            p.take();
            ad::Edge e;
            e.source = p.ident("source node");
            p.expect_sym("->");
            e.target = p.ident("target node");
            if (p.accept_sym("[")) {
                e.guard = p.expr();
                p.expect_sym("]");
            }
            p.expect_sym(";");
            ad.edges.push_back(std::move(e));
            continue;
        }
        bool matched = false;
        for (const auto& [word, kind] : kinds) {
            if (!p.at_word(word)) {
                continue;
            }
            matched = true;
            p.take();
            ad::Node n;
            n.kind = kind;
            n.id = p.ident("node name");
            if (kind == ad::NodeKind::Action) {
                n.action = n.id;
                if (p.at_word("as")) {
                    p.take();
                    n.action = p.ident("action name");
                }
                if (p.accept_sym("{")) {
                    while (!p.accept_sym("}")) {
                        ad::Assignment a;
                        a.var = p.ident("variable name");
                        p.expect_sym(":=");
                        a.value = p.expr();
                        p.expect_sym(";");
                        n.effects.push_back(std::move(a));
                    }
                }
            }
            p.expect_sym(";");
            ad.nodes.push_back(std::move(n));
            break;
        }
        if (!matched) {
            p.fail("declaration or '}'");
        }
    }
    p.expect_end();
    return ad;
}

ad::Expr parse_expr(std::string_view text) {
    Parser p(text);
    ad::Expr e = p.expr();
    p.expect_end();
    return e;
}

SourceKind detect_kind(std::string_view text) {
    Parser p(text);
    if (p.at_word("classdiagram")) {
        return SourceKind::ClassDiagram;
    }
    if (p.at_word("objectdiagram")) {
        return SourceKind::ObjectDiagram;
    }
    if (p.at_word("activitydiagram")) {
        return SourceKind::ActivityDiagram;
    }
    p.fail("'classdiagram', 'objectdiagram' or 'activitydiagram'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, path.string(), "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SourceFile load_source(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        switch (detect_kind(text)) {
        case SourceKind::ClassDiagram: return {path, SourceKind::ClassDiagram, parse_cd(text)};
        case SourceKind::ObjectDiagram: return {path, SourceKind::ObjectDiagram, parse_od(text)};
        case SourceKind::ActivityDiagram: return {path, SourceKind::ActivityDiagram, parse_ad(text)};
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ParseError) {
            throw;
        }
        // "ParseError: 3:7: ..." -> "ParseError: file.cd:3:7: ..."
        std::string msg = e.what();
        const std::string prefix = "ParseError: ";
        throw Error(ErrorKind::ParseError, e.element(), path.string() + ":" + msg.substr(prefix.size()));
    }
    throw Error(ErrorKind::ParseError, path.string(), "unknown source kind");
}

} // namespace semdiff::text
