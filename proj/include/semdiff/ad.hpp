// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semdiff/expr.hpp"

namespace semdiff::ad {

struct VarDecl {
    std::string name;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::optional<std::int64_t> init; // locals only

    std::size_t domain_size() const { return static_cast<std::size_t>(hi - lo + 1); }

    friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct Assignment {
    std::string var;
    Expr value;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

enum class NodeKind { Initial, Final, Action, Decision, Merge, Fork, Join };

std::string_view to_string(NodeKind kind);

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Action;
    std::string action;               // emitted name, defaults to id
    std::vector<Assignment> effects;  // actions only, applied left to right

    friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
    std::string source;
    std::string target;
    std::optional<Expr> guard; // decision out-edges only

    std::string id() const { return source + "->" + target; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct ActivityDiagram {
    std::string name;
    std::vector<VarDecl> inputs;
    std::vector<VarDecl> locals;
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    friend bool operator==(const ActivityDiagram&, const ActivityDiagram&) = default;
};

// Runtime state: one bit per edge (safe nets) and the valuation of inputs
// followed by locals, in declaration order.
struct Configuration {
    std::vector<bool> tokens;
    std::vector<std::int64_t> values;

    friend bool operator==(const Configuration&, const Configuration&) = default;
    friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

using InputValuation = std::map<std::string, std::int64_t>;

// A validated activity diagram with resolved edge/variable indices. Immutable.
class Activity {
  public:
    const ActivityDiagram& diagram() const noexcept { return ad_; }
    const std::string& name() const noexcept { return ad_.name; }

    std::size_t edge_count() const noexcept { return ad_.edges.size(); }
    std::size_t variable_count() const noexcept { return vars_.size(); }
    std::size_t input_count() const noexcept { return ad_.inputs.size(); }
    // Inputs first, then locals.
    const VarDecl& variable(std::size_t slot) const { return vars_[slot]; }
    std::optional<std::size_t> slot_of(const std::string& var) const;

    const std::vector<std::size_t>& in_edges(std::size_t node) const { return in_[node]; }
    const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_[node]; }
    std::size_t edge_source(std::size_t edge) const { return src_[edge]; }
    std::size_t edge_target(std::size_t edge) const { return dst_[edge]; }
    std::size_t initial_node() const noexcept { return initial_; }

    // Sorted, duplicate-free action names.
    const std::vector<std::string>& action_names() const noexcept { return action_names_; }

    // Non-fatal findings, e.g. decisions whose guards are not exhaustive.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    // Initial configuration for the given input values (missing inputs: lo).
    Configuration initial_config(const InputValuation& inputs) const;
    InputValuation inputs_of(const Configuration& c) const;

    std::string describe(const Configuration& c) const;

  private:
    friend Activity validate_ad(ActivityDiagram ad);

    ActivityDiagram ad_;
    std::vector<VarDecl> vars_;
    std::map<std::string, std::size_t> slot_;
    std::vector<std::vector<std::size_t>> in_, out_;
    std::vector<std::size_t> src_, dst_;
    std::size_t initial_ = 0;
    std::vector<std::string> action_names_;
    std::vector<std::string> warnings_;
};

// Throws Error{SilentCycle | BadDegree | UndeclaredVariable | EmptyRange |
// MissingGuard | BadGuard | TypeMismatch | AssignToInput | DuplicateName |
// DanglingReference | RangeViolation}.
Activity validate_ad(ActivityDiagram ad);

// One configuration per input valuation, lexicographic in declared input order.
std::vector<Configuration> initial_configs(const Activity& ad);

struct ClosureResult {
    std::vector<Configuration> configs; // sorted silent normal forms
    bool stuck_decision = false;        // some decision holds a token with no true guard
};

// Silent normal forms of `c`: configurations reachable by decision, merge,
// fork, join and final firings in which no further silent firing is enabled.
// Throws Error{UnsafeToken}.
ClosureResult silent_closure(const Activity& ad, const Configuration& c);

struct ObservableStep {
    std::string action;
    Configuration next;

    friend bool operator==(const ObservableStep&, const ObservableStep&) = default;
    friend auto operator<=>(const ObservableStep&, const ObservableStep&) = default;
};

// Silent closure, then one action firing. Successors are not closed.
// Sorted and duplicate-free. Throws Error{UnsafeToken | RangeViolation}.
std::vector<ObservableStep> observable_steps(const Activity& ad, const Configuration& c);

struct TransitionSystem {
    struct Transition {
        std::size_t from;
        std::string action;
        std::size_t to;
    };
    std::vector<Configuration> states;
    std::vector<std::size_t> initial; // indices into states, in initial_configs order
    std::vector<Transition> transitions;

    std::optional<std::size_t> index_of(const Configuration& c) const;

  private:
    friend TransitionSystem build_explicit_ts(const Activity&, std::size_t);
    std::map<Configuration, std::size_t> index_;
};

inline constexpr std::size_t default_state_budget = 1'000'000;

// BFS over observable steps from all initial configurations.
// Throws Error{StateBudgetExceeded | UnsafeToken | RangeViolation}.
TransitionSystem build_explicit_ts(const Activity& ad, std::size_t state_budget = default_state_budget);

bool is_observably_deterministic(const Activity& ad);
bool is_observably_deterministic(const TransitionSystem& ts);

// Configurations reachable from `start` by exactly the given action sequence
// (empty when it is not a trace).
std::vector<Configuration> replay(const Activity& ad, const Configuration& start,
                                  std::span<const std::string> actions);

// Whether the action sequence is a (prefix-closed) trace from `start`.
bool is_trace(const Activity& ad, const Configuration& start, std::span<const std::string> actions);

} // namespace semdiff::ad
