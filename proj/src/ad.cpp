// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/ad.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "semdiff/error.hpp"

namespace semdiff::ad {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::Initial: return "initial";
    case NodeKind::Final: return "final";
    case NodeKind::Action: return "action";
    case NodeKind::Decision: return "decision";
    case NodeKind::Merge: return "merge";
    case NodeKind::Fork: return "fork";
    case NodeKind::Join: return "join";
    }
    return "?";
}

std::optional<std::size_t> Activity::slot_of(const std::string& var) const {
    const auto it = slot_.find(var);
    if (it == slot_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Configuration Activity::initial_config(const InputValuation& inputs) const {
    Configuration c;
    c.tokens.assign(edge_count(), false);
    c.tokens[out_[initial_].front()] = true;
    c.values.reserve(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i < ad_.inputs.size()) {
            const auto it = inputs.find(vars_[i].name);
            c.values.push_back(it == inputs.end() ? vars_[i].lo : it->second);
        } else {
            c.values.push_back(*vars_[i].init);
        }
    }
    return c;
}

InputValuation Activity::inputs_of(const Configuration& c) const {
    InputValuation out;
    for (std::size_t i = 0; i < ad_.inputs.size(); ++i) {
        out.emplace(vars_[i].name, c.values[i]);
    }
    return out;
}

std::string Activity::describe(const Configuration& c) const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (std::size_t e = 0; e < c.tokens.size(); ++e) {
        if (c.tokens[e]) {
            os << (first ? "" : ", ") << ad_.edges[e].id();
            first = false;
        }
    }
    os << "}";
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        os << " " << vars_[i].name << "=" << c.values[i];
    }
    return os.str();
}

namespace {

void resolve(Expr& e, const std::map<std::string, std::size_t>& slots, const std::string& where) {
    if (e.op == Expr::Op::Var) {
        const auto it = slots.find(e.var);
        if (it == slots.end()) {
            throw Error(ErrorKind::UndeclaredVariable, e.var,
                        "variable '" + e.var + "' used in " + where + " is not declared");
        }
        e.slot = static_cast<int>(it->second);
    }
    for (auto& a : e.args) {
        resolve(a, slots, where);
    }
}

// Boolean operators take boolean operands; arithmetic and comparisons take integers.
void typecheck(const Expr& e, const std::string& where) {
    auto expect = [&](const Expr& arg, bool boolean) {
        if (arg.is_boolean() != boolean) {
            throw Error(ErrorKind::TypeMismatch, where,
                        "in " + where + ": '" + to_string(arg) + "' must be " + (boolean ? "boolean" : "an integer"));
        }
        typecheck(arg, where);
    };
    switch (e.op) {
    case Expr::Op::Const:
    case Expr::Op::Var: return;
    case Expr::Op::Not:
    case Expr::Op::And:
    case Expr::Op::Or:
        for (const auto& a : e.args) {
            expect(a, true);
        }
        return;
    default:
        for (const auto& a : e.args) {
            expect(a, false);
        }
    }
}

void check_degree(const Node& n, std::size_t in, std::size_t out) {
    auto bad = [&](const std::string& rule) {
        throw Error(ErrorKind::BadDegree, n.id,
                    std::string(to_string(n.kind)) + " node '" + n.id + "' has " + std::to_string(in) +
                        " incoming and " + std::to_string(out) + " outgoing edges; expected " + rule);
    };
    switch (n.kind) {
    case NodeKind::Initial:
        if (in != 0 || out != 1) bad("0 in / 1 out");
        break;
    case NodeKind::Final:
        if (in < 1 || out != 0) bad(">=1 in / 0 out");
        break;
    case NodeKind::Action:
        if (in != 1 || out != 1) bad("1 in / 1 out");
        break;
    case NodeKind::Decision:
    case NodeKind::Fork:
        if (in != 1 || out < 2) bad("1 in / >=2 out");
        break;
    case NodeKind::Merge:
    case NodeKind::Join:
        if (in < 2 || out != 1) bad(">=2 in / 1 out");
        break;
    }
}

} // namespace

Activity validate_ad(ActivityDiagram ad) {
    Activity out;

    for (const auto* group : {&ad.inputs, &ad.locals}) {
        for (const auto& v : *group) {
            if (v.lo > v.hi) {
                throw Error(ErrorKind::EmptyRange, v.name,
                            "variable '" + v.name + "' has empty range " + std::to_string(v.lo) + ".." +
                                std::to_string(v.hi));
            }
            if (!out.slot_.emplace(v.name, out.vars_.size()).second) {
                throw Error(ErrorKind::DuplicateName, v.name, "variable '" + v.name + "' declared twice");
            }
            out.vars_.push_back(v);
        }
    }
    for (auto& v : out.vars_) {
        const bool is_local = out.slot_.at(v.name) >= ad.inputs.size();
        if (is_local && (!v.init || *v.init < v.lo || *v.init > v.hi)) {
            throw Error(ErrorKind::RangeViolation, v.name, "local '" + v.name + "' needs an initial value in range");
        }
        if (!is_local) {
            v.init.reset();
        }
    }

    std::map<std::string, std::size_t> node_ix;
    for (std::size_t i = 0; i < ad.nodes.size(); ++i) {
        if (!node_ix.emplace(ad.nodes[i].id, i).second) {
            throw Error(ErrorKind::DuplicateName, ad.nodes[i].id, "node '" + ad.nodes[i].id + "' declared twice");
        }
        if (ad.nodes[i].kind == NodeKind::Action && ad.nodes[i].action.empty()) {
            ad.nodes[i].action = ad.nodes[i].id;
        }
    }
    const std::size_t n = ad.nodes.size();
    out.in_.assign(n, {});
    out.out_.assign(n, {});
    std::set<std::string> edge_ids;
    for (std::size_t e = 0; e < ad.edges.size(); ++e) {
        const Edge& edge = ad.edges[e];
        const auto s = node_ix.find(edge.source);
        const auto t = node_ix.find(edge.target);
        if (s == node_ix.end() || t == node_ix.end()) {
            const std::string& missing = s == node_ix.end() ? edge.source : edge.target;
            throw Error(ErrorKind::DanglingReference, missing,
                        "edge " + edge.id() + " refers to undeclared node '" + missing + "'");
        }
        if (!edge_ids.insert(edge.id()).second) {
            throw Error(ErrorKind::DuplicateName, edge.id(), "edge " + edge.id() + " declared twice");
        }
        out.src_.push_back(s->second);
        out.dst_.push_back(t->second);
        out.out_[s->second].push_back(e);
        out.in_[t->second].push_back(e);
    }

    std::optional<std::size_t> initial;
    for (std::size_t i = 0; i < n; ++i) {
        const Node& node = ad.nodes[i];
        check_degree(node, out.in_[i].size(), out.out_[i].size());
        if (node.kind == NodeKind::Initial) {
            if (initial) {
                throw Error(ErrorKind::BadDegree, node.id, "second initial node '" + node.id + "'");
            }
            initial = i;
        }
        if (node.kind != NodeKind::Action && !node.effects.empty()) {
            throw Error(ErrorKind::BadDegree, node.id, "only action nodes may carry effects ('" + node.id + "')");
        }
    }
    if (!initial) {
        throw Error(ErrorKind::BadDegree, ad.name, "activity '" + ad.name + "' has no initial node");
    }
    out.initial_ = *initial;

    for (std::size_t e = 0; e < ad.edges.size(); ++e) {
        Edge& edge = ad.edges[e];
        const bool from_decision = ad.nodes[out.src_[e]].kind == NodeKind::Decision;
        if (from_decision && !edge.guard) {
            throw Error(ErrorKind::MissingGuard, edge.id(), "decision out-edge " + edge.id() + " has no guard");
        }
        if (!from_decision && edge.guard) {
            throw Error(ErrorKind::BadGuard, edge.id(), "guard on edge " + edge.id() + " which does not leave a decision");
        }
        if (edge.guard) {
            resolve(*edge.guard, out.slot_, "guard of " + edge.id());
            if (!edge.guard->is_boolean()) {
                throw Error(ErrorKind::TypeMismatch, edge.id(), "guard of " + edge.id() + " is not boolean");
            }
            typecheck(*edge.guard, "guard of " + edge.id());
        }
    }
    for (auto& node : ad.nodes) {
        for (auto& a : node.effects) {
            const auto slot = out.slot_.find(a.var);
            if (slot == out.slot_.end()) {
                throw Error(ErrorKind::UndeclaredVariable, a.var,
                            "action '" + node.id + "' assigns undeclared variable '" + a.var + "'");
            }
            if (slot->second < ad.inputs.size()) {
                throw Error(ErrorKind::AssignToInput, a.var,
                            "action '" + node.id + "' assigns input variable '" + a.var + "'");
            }
            resolve(a.value, out.slot_, "effect of " + node.id);
            if (a.value.is_boolean()) {
                throw Error(ErrorKind::TypeMismatch, node.id, "effect " + a.var + " := " + to_string(a.value) +
                                                                  " assigns a boolean");
            }
            typecheck(a.value, "effect of " + node.id);
        }
    }

    // Cycles through pseudo nodes only would let silent closure diverge.
    {
        std::vector<int> color(n, 0);
        std::function<void(std::size_t)> visit = [&](std::size_t v) {
            color[v] = 1;
            for (std::size_t e : out.out_[v]) {
                const std::size_t w = out.dst_[e];
                if (ad.nodes[w].kind == NodeKind::Action) {
                    continue;
                }
                if (color[w] == 1) {
                    throw Error(ErrorKind::SilentCycle, ad.nodes[w].id,
                                "cycle through pseudo nodes only, via '" + ad.nodes[w].id + "'");
                }
                if (color[w] == 0) {
                    visit(w);
                }
            }
            color[v] = 2;
        };
        for (std::size_t v = 0; v < n; ++v) {
            if (ad.nodes[v].kind != NodeKind::Action && color[v] == 0) {
                visit(v);
            }
        }
    }

    std::set<std::string> names;
    for (const auto& node : ad.nodes) {
        if (node.kind == NodeKind::Action) {
            names.insert(node.action);
        }
    }
    out.action_names_.assign(names.begin(), names.end());

    // Static exhaustiveness of decision guards, by enumerating the valuation space.
    std::size_t space = 1;
    for (const auto& v : out.vars_) {
        space *= v.domain_size();
        if (space > 100'000) {
            break;
        }
    }
    if (space <= 100'000) {
        for (std::size_t i = 0; i < n; ++i) {
            if (ad.nodes[i].kind != NodeKind::Decision) {
                continue;
            }
            std::vector<std::int64_t> values(out.vars_.size());
            for (std::size_t k = 0; k < values.size(); ++k) {
                values[k] = out.vars_[k].lo;
            }
            bool exhaustive = true;
            while (exhaustive) {
                bool any = false;
                for (std::size_t e : out.out_[i]) {
                    any = any || evaluate(*ad.edges[e].guard, values) != 0;
                }
                exhaustive = any;
                std::size_t k = 0;
                for (; k < values.size(); ++k) {
                    if (++values[k] <= out.vars_[k].hi) {
                        break;
                    }
                    values[k] = out.vars_[k].lo;
                }
                if (k == values.size()) {
                    break;
                }
            }
            if (!exhaustive) {
                out.warnings_.push_back("guards of decision '" + ad.nodes[i].id + "' are not exhaustive");
            }
        }
    }

    out.ad_ = std::move(ad);
    return out;
}

std::vector<Configuration> initial_configs(const Activity& ad) {
    const std::size_t k = ad.input_count();
    std::vector<std::int64_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) {
        cur[i] = ad.variable(i).lo;
    }
    std::vector<Configuration> out;
    while (true) {
        InputValuation v;
        for (std::size_t i = 0; i < k; ++i) {
            v.emplace(ad.variable(i).name, cur[i]);
        }
        out.push_back(ad.initial_config(v));
        // Last input varies fastest.
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (++cur[i] <= ad.variable(i).hi) {
                break;
            }
            cur[i] = ad.variable(i).lo;
            if (i == 0) {
                return out;
            }
        }
        if (k == 0) {
            return out;
        }
    }
}

namespace {

void put_token(const Activity& ad, Configuration& c, std::size_t e) {
    if (c.tokens[e]) {
        throw Error(ErrorKind::UnsafeToken, ad.diagram().edges[e].id(),
                    "second token on edge " + ad.diagram().edges[e].id() + " in " + ad.describe(c));
    }
    c.tokens[e] = true;
}

// All single silent firings enabled in `c`.
std::vector<Configuration> silent_successors(const Activity& ad, const Configuration& c, bool& stuck) {
    std::vector<Configuration> out;
    const auto& nodes = ad.diagram().nodes;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        const auto& ins = ad.in_edges(v);
        const auto& outs = ad.out_edges(v);
        switch (nodes[v].kind) {
        case NodeKind::Decision: {
            if (!c.tokens[ins[0]]) {
                break;
            }
            bool fired = false;
            for (std::size_t e : outs) {
                if (evaluate(*ad.diagram().edges[e].guard, c.values) != 0) {
                    Configuration n = c;
                    n.tokens[ins[0]] = false;
                    put_token(ad, n, e);
                    out.push_back(std::move(n));
                    fired = true;
                }
            }
            stuck = stuck || !fired;
            break;
        }
        case NodeKind::Merge:
        case NodeKind::Final:
            for (std::size_t e : ins) {
                if (c.tokens[e]) {
                    Configuration n = c;
                    n.tokens[e] = false;
                    if (!outs.empty()) {
                        put_token(ad, n, outs[0]);
                    }
                    out.push_back(std::move(n));
                }
            }
            break;
        case NodeKind::Fork:
            if (c.tokens[ins[0]]) {
                Configuration n = c;
                n.tokens[ins[0]] = false;
                for (std::size_t e : outs) {
                    put_token(ad, n, e);
                }
                out.push_back(std::move(n));
            }
            break;
        case NodeKind::Join:
            if (std::all_of(ins.begin(), ins.end(), [&](std::size_t e) { return c.tokens[e]; })) {
                Configuration n = c;
                for (std::size_t e : ins) {
                    n.tokens[e] = false;
                }
                put_token(ad, n, outs[0]);
                out.push_back(std::move(n));
            }
            break;
        case NodeKind::Initial:
        case NodeKind::Action:
            break;
        }
    }
    return out;
}

} // namespace

ClosureResult silent_closure(const Activity& ad, const Configuration& c) {
    ClosureResult result;
    std::set<Configuration> seen{c};
    std::set<Configuration> normal;
    std::vector<Configuration> stack{c};
    while (!stack.empty()) {
        Configuration cur = std::move(stack.back());
        stack.pop_back();
        bool stuck = false;
        auto next = silent_successors(ad, cur, stuck);
        result.stuck_decision = result.stuck_decision || stuck;
        if (next.empty()) {
            normal.insert(std::move(cur));
            continue;
        }
        for (auto& n : next) {
            if (seen.insert(n).second) {
                stack.push_back(std::move(n));
            }
        }
    }
    result.configs.assign(normal.begin(), normal.end());
    return result;
}

std::vector<ObservableStep> observable_steps(const Activity& ad, const Configuration& c) {
    std::set<ObservableStep> steps;
    const auto& nodes = ad.diagram().nodes;
    for (const auto& base : silent_closure(ad, c).configs) {
        for (std::size_t v = 0; v < nodes.size(); ++v) {
            if (nodes[v].kind != NodeKind::Action || !base.tokens[ad.in_edges(v)[0]]) {
                continue;
            }
            Configuration n = base;
            n.tokens[ad.in_edges(v)[0]] = false;
            for (const auto& a : nodes[v].effects) {
                const std::int64_t value = evaluate(a.value, n.values);
                const std::size_t slot = *ad.slot_of(a.var);
                const VarDecl& decl = ad.variable(slot);
                if (value < decl.lo || value > decl.hi) {
                    throw Error(ErrorKind::RangeViolation, nodes[v].id,
                                "action '" + nodes[v].id + "' assigns " + a.var + " := " + std::to_string(value) +
                                    " outside " + std::to_string(decl.lo) + ".." + std::to_string(decl.hi) +
                                    " in " + ad.describe(base));
                }
                n.values[slot] = value;
            }
            put_token(ad, n, ad.out_edges(v)[0]);
            steps.insert({nodes[v].action, std::move(n)});
        }
    }
    return {steps.begin(), steps.end()};
}

std::optional<std::size_t> TransitionSystem::index_of(const Configuration& c) const {
    const auto it = index_.find(c);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

TransitionSystem build_explicit_ts(const Activity& ad, std::size_t state_budget) {
    TransitionSystem ts;
    std::deque<std::size_t> queue;
    auto intern = [&](const Configuration& c) {
        const auto [it, fresh] = ts.index_.emplace(c, ts.states.size());
        if (fresh) {
            if (ts.states.size() >= state_budget) {
                throw Error(ErrorKind::StateBudgetExceeded, ad.name(),
                            "more than " + std::to_string(state_budget) + " reachable states in " + ad.name());
            }
            ts.states.push_back(c);
            queue.push_back(it->second);
        }
        return it->second;
    };
    for (const auto& c : initial_configs(ad)) {
        ts.initial.push_back(intern(c));
    }
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        // Copy: interning may reallocate `states`.
        const Configuration c = ts.states[s];
        for (auto& step : observable_steps(ad, c)) {
            const std::size_t t = intern(step.next);
            ts.transitions.push_back({s, std::move(step.action), t});
        }
    }
    return ts;
}

bool is_observably_deterministic(const TransitionSystem& ts) {
    std::set<std::pair<std::size_t, std::string>> seen;
    for (const auto& t : ts.transitions) {
        if (!seen.emplace(t.from, t.action).second) {
            return false;
        }
    }
    return true;
}

bool is_observably_deterministic(const Activity& ad) {
    return is_observably_deterministic(build_explicit_ts(ad));
}

std::vector<Configuration> replay(const Activity& ad, const Configuration& start,
                                  std::span<const std::string> actions) {
    std::set<Configuration> cur{start};
    for (const auto& a : actions) {
        std::set<Configuration> next;
        for (const auto& c : cur) {
            for (auto& step : observable_steps(ad, c)) {
                if (step.action == a) {
                    next.insert(std::move(step.next));
                }
            }
        }
        cur = std::move(next);
        if (cur.empty()) {
            break;
        }
    }
    return {cur.begin(), cur.end()};
}

bool is_trace(const Activity& ad, const Configuration& start, std::span<const std::string> actions) {
    return !replay(ad, start, actions).empty();
}

} // namespace semdiff::ad
