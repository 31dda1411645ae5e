// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace semdiff::ad {

// Integer/boolean expression over AD variables. Booleans evaluate to 0/1.
struct Expr {
    enum class Op { Const, Var, Neg, Not, Add, Sub, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

    Op op = Op::Const;
    std::int64_t value = 0;  // Const
    std::string var;         // Var
    int slot = -1;           // Var, resolved by validation
    std::vector<Expr> args;  // operands

    static Expr constant(std::int64_t v) { return {Op::Const, v, {}, -1, {}}; }
    static Expr variable(std::string name) { return {Op::Var, 0, std::move(name), -1, {}}; }
    static Expr unary(Op op, Expr e) { return {op, 0, {}, -1, {std::move(e)}}; }
    static Expr binary(Op op, Expr l, Expr r) { return {op, 0, {}, -1, {std::move(l), std::move(r)}}; }

    bool is_boolean() const;

    // Structural equality; ignores resolved slots.
    friend bool operator==(const Expr& a, const Expr& b) {
        return a.op == b.op && a.value == b.value && a.var == b.var && a.args == b.args;
    }
};

// Fully parenthesized where needed; parses back to an equal tree.
std::string to_string(const Expr& e);

// Requires resolved slots.
std::int64_t evaluate(const Expr& e, const std::vector<std::int64_t>& values);

// Calls `f` for every variable name mentioned.
void for_each_var(const Expr& e, const std::function<void(const std::string&)>& f);

} // namespace semdiff::ad
