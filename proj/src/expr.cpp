// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/expr.hpp"

#include <cassert>

namespace semdiff::ad {

bool Expr::is_boolean() const {
    switch (op) {
    case Op::Not:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::Eq:
    case Op::Ne:
    case Op::And:
    case Op::Or:
        return true;
    default:
        return false;
    }
}

namespace {

// Binding strength, higher binds tighter.
int precedence(Expr::Op op) {
    switch (op) {
    case Expr::Op::Or: return 1;
    case Expr::Op::And: return 2;
    case Expr::Op::Lt:
    case Expr::Op::Le:
    case Expr::Op::Gt:
    case Expr::Op::Ge:
    case Expr::Op::Eq:
    case Expr::Op::Ne: return 3;
    case Expr::Op::Add:
    case Expr::Op::Sub: return 4;
    case Expr::Op::Neg:
    case Expr::Op::Not: return 5;
    default: return 6;
    }
}

const char* symbol(Expr::Op op) {
    switch (op) {
    case Expr::Op::Neg: return "-";
    case Expr::Op::Not: return "!";
    case Expr::Op::Add: return " + ";
    case Expr::Op::Sub: return " - ";
    case Expr::Op::Lt: return " < ";
    case Expr::Op::Le: return " <= ";
    case Expr::Op::Gt: return " > ";
    case Expr::Op::Ge: return " >= ";
    case Expr::Op::Eq: return " == ";
    case Expr::Op::Ne: return " != ";
    case Expr::Op::And: return " && ";
    case Expr::Op::Or: return " || ";
    default: return "";
    }
}

std::string wrap(const Expr& e, int min_prec) {
    std::string s = to_string(e);
    return precedence(e.op) < min_prec ? "(" + s + ")" : s;
}

} // namespace

std::string to_string(const Expr& e) {
    switch (e.op) {
    case Expr::Op::Const: return std::to_string(e.value);
    case Expr::Op::Var: return e.var;
    case Expr::Op::Neg:
        // The parser folds "-<literal>" into a constant.
        if (e.args[0].op == Expr::Op::Const) {
            return "-(" + to_string(e.args[0]) + ")";
        }
        return symbol(e.op) + wrap(e.args[0], precedence(e.op));
    case Expr::Op::Not: return symbol(e.op) + wrap(e.args[0], precedence(e.op));
    default: {
        // Left-associative: the right operand needs parentheses at equal precedence.
        // Comparisons do not chain, so both sides must bind tighter.
        const int p = precedence(e.op);
        const bool cmp = p == 3;
        return wrap(e.args[0], cmp ? p + 1 : p) + symbol(e.op) + wrap(e.args[1], p + 1);
    }
    }
}

std::int64_t evaluate(const Expr& e, const std::vector<std::int64_t>& values) {
    switch (e.op) {
    case Expr::Op::Const: return e.value;
    case Expr::Op::Var:
        assert(e.slot >= 0);
        return values[static_cast<std::size_t>(e.slot)];
    case Expr::Op::Neg: return -evaluate(e.args[0], values);
    case Expr::Op::Not: return evaluate(e.args[0], values) == 0 ? 1 : 0;
    case Expr::Op::And: return evaluate(e.args[0], values) != 0 && evaluate(e.args[1], values) != 0 ? 1 : 0;
    case Expr::Op::Or: return evaluate(e.args[0], values) != 0 || evaluate(e.args[1], values) != 0 ? 1 : 0;
    default: break;
    }
    const std::int64_t l = evaluate(e.args[0], values);
    const std::int64_t r = evaluate(e.args[1], values);
    switch (e.op) {
    case Expr::Op::Add: return l + r;
    case Expr::Op::Sub: return l - r;
    case Expr::Op::Lt: return l < r;
    case Expr::Op::Le: return l <= r;
    case Expr::Op::Gt: return l > r;
    case Expr::Op::Ge: return l >= r;
    case Expr::Op::Eq: return l == r;
    case Expr::Op::Ne: return l != r;
    default: return 0;
    }
}

void for_each_var(const Expr& e, const std::function<void(const std::string&)>& f) {
    if (e.op == Expr::Op::Var) {
        f(e.var);
    }
    for (const auto& a : e.args) {
        for_each_var(a, f);
    }
}

} // namespace semdiff::ad
