// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/cd_diff.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "semdiff/parse.hpp"

namespace semdiff::cd {
namespace {

// Feasible circulation with lower bounds, decided by one max flow from a
// super source to a super sink (Dinic). Graphs here have a few dozen nodes.
class BoundedFlow {
  public:
    explicit BoundedFlow(int nodes) : graph_(static_cast<std::size_t>(nodes) + 2), excess_(graph_.size(), 0) {}

    void add_edge(int u, int v, int lo, int hi) {
        if (lo > hi) {
            infeasible_ = true;
            return;
        }
        push_arc(u, v, hi - lo);
        excess_[static_cast<std::size_t>(v)] += lo;
        excess_[static_cast<std::size_t>(u)] -= lo;
    }

    bool feasible() {
        if (infeasible_) {
            return false;
        }
        const int source = static_cast<int>(graph_.size()) - 2;
        const int sink = source + 1;
        int need = 0;
        for (std::size_t v = 0; v + 2 < graph_.size(); ++v) {
            if (excess_[v] > 0) {
                push_arc(source, static_cast<int>(v), excess_[v]);
                need += excess_[v];
            } else if (excess_[v] < 0) {
                push_arc(static_cast<int>(v), sink, -excess_[v]);
            }
        }
        return max_flow(source, sink) == need;
    }

  private:
    struct Arc {
        int to;
        int cap;
    };

    void push_arc(int u, int v, int cap) {
        graph_[static_cast<std::size_t>(u)].push_back(arcs_.size());
        arcs_.push_back({v, cap});
        graph_[static_cast<std::size_t>(v)].push_back(arcs_.size());
        arcs_.push_back({u, 0});
    }

    bool levels(int s, int t) {
        level_.assign(graph_.size(), -1);
        std::deque<int> q{s};
        level_[static_cast<std::size_t>(s)] = 0;
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            for (std::size_t id : graph_[static_cast<std::size_t>(u)]) {
                const Arc& a = arcs_[id];
                if (a.cap > 0 && level_[static_cast<std::size_t>(a.to)] < 0) {
                    level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
                    q.push_back(a.to);
                }
            }
        }
        return level_[static_cast<std::size_t>(t)] >= 0;
    }

    int augment(int u, int t, int pushed) {
        if (u == t) {
            return pushed;
        }
        auto& it = cursor_[static_cast<std::size_t>(u)];
        for (; it < graph_[static_cast<std::size_t>(u)].size(); ++it) {
            const std::size_t id = graph_[static_cast<std::size_t>(u)][it];
            Arc& a = arcs_[id];
            if (a.cap <= 0 || level_[static_cast<std::size_t>(a.to)] != level_[static_cast<std::size_t>(u)] + 1) {
                continue;
            }
            const int got = augment(a.to, t, std::min(pushed, a.cap));
            if (got > 0) {
                a.cap -= got;
                arcs_[id ^ 1].cap += got;
                return got;
            }
        }
        return 0;
    }

    int max_flow(int s, int t) {
        int flow = 0;
        while (levels(s, t)) {
            cursor_.assign(graph_.size(), 0);
            while (const int f = augment(s, t, std::numeric_limits<int>::max())) {
                flow += f;
            }
        }
        return flow;
    }

    std::vector<std::vector<std::size_t>> graph_;
    std::vector<Arc> arcs_;
    std::vector<int> excess_;
    std::vector<int> level_;
    std::vector<std::size_t> cursor_;
    bool infeasible_ = false;
};

struct Interval {
    int lo = 0;
    int hi = 0;

    Interval meet(Interval o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
    bool empty() const { return lo > hi; }
};

Interval clamp(const MultRange& m, std::size_t partners) {
    const int cap = static_cast<int>(partners);
    return {static_cast<int>(m.lo), m.hi ? std::min(static_cast<int>(*m.hi), cap) : cap};
}

// A way for one association's links to make the model fail in cd2.
struct Target {
    enum class Kind { Pair, Left, Right };
    Kind kind;
    std::size_t index;  // pair index, or position in left/right
    Interval bound;     // Left/Right: degree must fall here
    std::tuple<int, std::size_t, std::size_t, int, int, int> symmetry; // equal for interchangeable targets
};

// One cd1 association over a fixed object set. Links form a bipartite
// graph between the objects that may sit in position A and those that may
// sit in position B (an object can be on both sides).
struct AssocCase {
    std::vector<std::size_t> left;  // object indices
    std::vector<std::size_t> right;
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // (left pos, right pos), left-major
    std::vector<Interval> left_bound;  // cd1 degree bounds
    std::vector<Interval> right_bound;
    std::vector<Target> targets;
    std::size_t offset = 0; // first global pair index
};

struct Instance {
    std::vector<Object> objects;
    std::vector<std::size_t> object_class; // index into Search::classes_
    std::vector<AssocCase> cases;           // cd1 declaration order
    bool static_violation = false;
    std::size_t pair_count = 0;
};

struct Status {
    bool valid = false;     // some completion is a cd1 instance
    bool violating = false; // some completion is a cd1 instance that breaks cd2
};

class Search {
  public:
    Search(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2)
        : cd1_(cd1), cd2_(cd2), classes_(cd1.concrete_classes()) {}

    const std::vector<std::string>& classes() const { return classes_; }

    // Count vectors with the given total, in a fixed order.
    std::vector<std::vector<std::size_t>> vectors(std::size_t total) const {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> cur(classes_.size(), 0);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
            if (i + 1 == cur.size()) {
                cur[i] = left;
                out.push_back(cur);
                return;
            }
            for (std::size_t k = left + 1; k-- > 0;) {
                cur[i] = k;
                rec(i + 1, left - k);
            }
        };
        if (!classes_.empty()) {
            rec(0, total);
        }
        return out;
    }

    std::vector<std::string> class_set(const std::vector<std::size_t>& counts) const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] > 0) {
                out.push_back(classes_[i]);
            }
        }
        return out;
    }

    Instance instantiate(const std::vector<std::size_t>& counts) const {
        Instance inst;
        std::vector<std::string> ids;
        for (std::size_t c = 0; c < counts.size(); ++c) {
            for (std::size_t k = 1; k <= counts[c]; ++k) {
                inst.objects.push_back({object_name(classes_[c], k), classes_[c]});
                inst.object_class.push_back(c);
            }
        }
        const auto& objs = inst.objects;

        for (const auto& o : objs) {
            if (!cd2_.is_concrete(o.cls)) {
                inst.static_violation = true;
            }
        }
        // cd2 associations unknown to cd1 never get links in a cd1 instance.
        for (const auto& a2 : cd2_.diagram().associations) {
            if (cd1_.find_association(a2.name) != nullptr) {
                continue;
            }
            for (const auto& o : objs) {
                if ((cd2_.conforms(o.cls, a2.side_a.cls) && !a2.side_b.mult.contains(0)) ||
                    (cd2_.conforms(o.cls, a2.side_b.cls) && !a2.side_a.mult.contains(0))) {
                    inst.static_violation = true;
                }
            }
        }

        for (const auto& a1 : cd1_.diagram().associations) {
            AssocCase ac;
            ac.offset = inst.pair_count;
            for (std::size_t i = 0; i < objs.size(); ++i) {
                if (cd1_.conforms(objs[i].cls, a1.side_a.cls)) {
                    ac.left.push_back(i);
                }
                if (cd1_.conforms(objs[i].cls, a1.side_b.cls)) {
                    ac.right.push_back(i);
                }
            }
            for (std::size_t l = 0; l < ac.left.size(); ++l) {
                for (std::size_t r = 0; r < ac.right.size(); ++r) {
                    ac.pairs.emplace_back(l, r);
                }
            }
            for (std::size_t l = 0; l < ac.left.size(); ++l) {
                ac.left_bound.push_back(clamp(a1.side_b.mult, ac.right.size()));
            }
            for (std::size_t r = 0; r < ac.right.size(); ++r) {
                ac.right_bound.push_back(clamp(a1.side_a.mult, ac.left.size()));
            }
            add_targets(inst, a1, ac);
            inst.pair_count += ac.pairs.size();
            inst.cases.push_back(std::move(ac));
        }
        return inst;
    }

    // fixed: per global pair, -1 free, 0 absent, 1 present.
    Status status(const Instance& inst, std::size_t k, const std::vector<std::int8_t>& fixed) const {
        const AssocCase& ac = inst.cases[k];
        Status s;
        s.valid = flow(ac, fixed, nullptr);
        if (!s.valid) {
            return s;
        }
        bool any_fixed = false;
        for (std::size_t p = 0; p < ac.pairs.size() && !any_fixed; ++p) {
            any_fixed = fixed[ac.offset + p] >= 0;
        }
        std::set<std::tuple<int, std::size_t, std::size_t, int, int, int>> tried;
        for (const Target& t : ac.targets) {
            // With nothing fixed, objects of one class are interchangeable.
            if (!any_fixed && !tried.insert(t.symmetry).second) {
                continue;
            }
            if (flow(ac, fixed, &t)) {
                s.violating = true;
                break;
            }
        }
        return s;
    }

    static bool feasible(const Instance& inst, const std::vector<Status>& st) {
        bool violating = inst.static_violation;
        for (const auto& s : st) {
            if (!s.valid) {
                return false;
            }
            violating = violating || s.violating;
        }
        return violating;
    }

    ObjectModel build(const Instance& inst, const std::vector<std::int8_t>& fixed, std::string name) const {
        ObjectModel om;
        om.name = std::move(name);
        om.objects = inst.objects;
        for (std::size_t k = 0; k < inst.cases.size(); ++k) {
            const AssocCase& ac = inst.cases[k];
            for (std::size_t p = 0; p < ac.pairs.size(); ++p) {
                if (fixed[ac.offset + p] == 1) {
                    om.links.push_back({cd1_.diagram().associations[k].name,
                                        inst.objects[ac.left[ac.pairs[p].first]].id,
                                        inst.objects[ac.right[ac.pairs[p].second]].id});
                }
            }
        }
        if (!is_instance(om, cd1_) || is_instance(om, cd2_)) {
            throw std::logic_error("cd-diff produced a model that is not a witness:\n" + text::print_od(om));
        }
        return om;
    }

    // Depth-first over pairs, absent before present. Every visited node has a
    // completion (the feasibility check is exact), so the first leaf is
    // reached without backtracking. `emit` returns false to stop.
    void walk(const Instance& inst, const std::function<bool(const std::vector<std::int8_t>&)>& emit,
              bool first_only) const {
        std::vector<std::int8_t> fixed(inst.pair_count, -1);
        std::vector<Status> st(inst.cases.size());
        for (std::size_t k = 0; k < inst.cases.size(); ++k) {
            st[k] = status(inst, k, fixed);
        }
        if (!feasible(inst, st)) {
            return;
        }
        // Global pair index -> association.
        std::vector<std::size_t> owner(inst.pair_count);
        for (std::size_t k = 0; k < inst.cases.size(); ++k) {
            for (std::size_t p = 0; p < inst.cases[k].pairs.size(); ++p) {
                owner[inst.cases[k].offset + p] = k;
            }
        }
        bool stop = false;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == inst.pair_count) {
                stop = !emit(fixed);
                return;
            }
            const std::size_t k = owner[i];
            const Status saved = st[k];
            for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
                fixed[i] = v;
                st[k] = status(inst, k, fixed);
                if (feasible(inst, st)) {
                    rec(i + 1);
                    if (stop || first_only) {
                        stop = true;
                        break;
                    }
                }
            }
            fixed[i] = -1;
            st[k] = saved;
        };
        rec(0);
    }

  private:
    static std::string object_name(const std::string& cls, std::size_t k) {
        std::string lower;
        for (char ch : cls) {
            lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
        return lower + std::to_string(k);
    }

    void add_targets(Instance& inst, const Association& a1, AssocCase& ac) const {
        const Association* a2 = cd2_.find_association(a1.name);
        const auto& objs = inst.objects;
        auto cls = [&](std::size_t obj) { return inst.object_class[obj]; };
        if (a2 == nullptr) {
            // Any link at all is unknown to cd2.
            for (std::size_t l = 0; l < ac.left.size(); ++l) {
                ac.targets.push_back({Target::Kind::Left, l, {1, static_cast<int>(ac.right.size())},
                                      {1, cls(ac.left[l]), 0, 0, 0, 0}});
            }
            return;
        }
        for (std::size_t p = 0; p < ac.pairs.size(); ++p) {
            const std::size_t x = ac.left[ac.pairs[p].first];
            const std::size_t y = ac.right[ac.pairs[p].second];
            if (!cd2_.conforms(objs[x].cls, a2->side_a.cls) || !cd2_.conforms(objs[y].cls, a2->side_b.cls)) {
                ac.targets.push_back({Target::Kind::Pair, p, {}, {0, cls(x), cls(y), x == y ? 1 : 0, 0, 0}});
            }
        }
        auto outside = [](const MultRange& m) {
            std::vector<Interval> out;
            if (m.lo > 0) {
                out.push_back({0, static_cast<int>(m.lo) - 1});
            }
            if (m.hi) {
                out.push_back({static_cast<int>(*m.hi) + 1, std::numeric_limits<int>::max() / 4});
            }
            return out;
        };
        for (std::size_t l = 0; l < ac.left.size(); ++l) {
            if (!cd2_.conforms(objs[ac.left[l]].cls, a2->side_a.cls)) {
                continue;
            }
            for (Interval iv : outside(a2->side_b.mult)) {
                const Interval b = iv.meet(ac.left_bound[l]);
                if (!b.empty()) {
                    ac.targets.push_back({Target::Kind::Left, l, b, {2, cls(ac.left[l]), 0, 0, b.lo, b.hi}});
                }
            }
        }
        for (std::size_t r = 0; r < ac.right.size(); ++r) {
            if (!cd2_.conforms(objs[ac.right[r]].cls, a2->side_b.cls)) {
                continue;
            }
            for (Interval iv : outside(a2->side_a.mult)) {
                const Interval b = iv.meet(ac.right_bound[r]);
                if (!b.empty()) {
                    ac.targets.push_back({Target::Kind::Right, r, b, {3, cls(ac.right[r]), 0, 0, b.lo, b.hi}});
                }
            }
        }
        // Objects that cannot take part in cd1 links keep degree 0.
        std::vector<bool> on_left(objs.size(), false), on_right(objs.size(), false);
        for (std::size_t x : ac.left) {
            on_left[x] = true;
        }
        for (std::size_t y : ac.right) {
            on_right[y] = true;
        }
        for (std::size_t o = 0; o < objs.size(); ++o) {
            if (!on_left[o] && cd2_.conforms(objs[o].cls, a2->side_a.cls) && !a2->side_b.mult.contains(0)) {
                inst.static_violation = true;
            }
            if (!on_right[o] && cd2_.conforms(objs[o].cls, a2->side_b.cls) && !a2->side_a.mult.contains(0)) {
                inst.static_violation = true;
            }
        }
    }

    static bool flow(const AssocCase& ac, const std::vector<std::int8_t>& fixed, const Target* target) {
        const int nl = static_cast<int>(ac.left.size());
        const int nr = static_cast<int>(ac.right.size());
        const int s = 0;
        const int t = 1;
        BoundedFlow f(2 + nl + nr);
        for (int l = 0; l < nl; ++l) {
            Interval b = ac.left_bound[static_cast<std::size_t>(l)];
            if (target && target->kind == Target::Kind::Left && target->index == static_cast<std::size_t>(l)) {
                b = b.meet(target->bound);
            }
            f.add_edge(s, 2 + l, b.lo, b.hi);
        }
        for (int r = 0; r < nr; ++r) {
            Interval b = ac.right_bound[static_cast<std::size_t>(r)];
            if (target && target->kind == Target::Kind::Right && target->index == static_cast<std::size_t>(r)) {
                b = b.meet(target->bound);
            }
            f.add_edge(2 + nl + r, t, b.lo, b.hi);
        }
        for (std::size_t p = 0; p < ac.pairs.size(); ++p) {
            int lo = 0;
            int hi = 1;
            const std::int8_t v = fixed[ac.offset + p];
            if (v >= 0) {
                lo = hi = v;
            }
            if (target && target->kind == Target::Kind::Pair && target->index == p) {
                lo = std::max(lo, 1);
            }
            f.add_edge(2 + static_cast<int>(ac.pairs[p].first), 2 + nl + static_cast<int>(ac.pairs[p].second), lo,
                       hi);
        }
        f.add_edge(t, s, 0, nl * nr + 1);
        return f.feasible();
    }

    const CheckedClassDiagram& cd1_;
    const CheckedClassDiagram& cd2_;
    std::vector<std::string> classes_;
};

// Lex-leader test against swapping adjacent objects of the same class: the
// least member of every relabeling orbit passes, most other members fail.
bool is_lex_leader(const Instance& inst, const std::vector<std::int8_t>& bits) {
    const std::size_t n = inst.objects.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (inst.object_class[i] != inst.object_class[i + 1]) {
            continue;
        }
        auto swap_obj = [&](std::size_t o) { return o == i ? i + 1 : (o == i + 1 ? i : o); };
        std::vector<std::int8_t> permuted(bits.size());
        for (const auto& ac : inst.cases) {
            std::map<std::pair<std::size_t, std::size_t>, std::size_t> where;
            for (std::size_t p = 0; p < ac.pairs.size(); ++p) {
                where[{ac.left[ac.pairs[p].first], ac.right[ac.pairs[p].second]}] = ac.offset + p;
            }
            for (std::size_t p = 0; p < ac.pairs.size(); ++p) {
                const std::size_t x = swap_obj(ac.left[ac.pairs[p].first]);
                const std::size_t y = swap_obj(ac.right[ac.pairs[p].second]);
                permuted[where.at({x, y})] = bits[ac.offset + p];
            }
        }
        if (permuted < bits) {
            return false;
        }
    }
    return true;
}

// Remembers count vectors proven witness-free across find_witness calls.
class WitnessFinder {
  public:
    WitnessFinder(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2) : search_(cd1, cd2) {}

    std::optional<ObjectModel> find(Scope scope, const BlockingConstraint& blocking, const std::string& name) {
        for (std::size_t total = 1; total <= scope.max_objects; ++total) {
            for (const auto& counts : search_.vectors(total)) {
                if (dead_.contains(counts) || blocking.blocks(search_.class_set(counts))) {
                    continue;
                }
                const Instance inst = search_.instantiate(counts);
                std::optional<ObjectModel> found;
                search_.walk(
                    inst,
                    [&](const std::vector<std::int8_t>& bits) {
                        found = search_.build(inst, bits, name);
                        return false;
                    },
                    true);
                if (found) {
                    return found;
                }
                dead_.insert(counts);
            }
        }
        return std::nullopt;
    }

    Search& search() { return search_; }

  private:
    Search search_;
    std::set<std::vector<std::size_t>> dead_;
};

} // namespace

std::optional<ObjectModel> find_witness(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2, Scope scope,
                                        const BlockingConstraint& blocking) {
    return WitnessFinder(cd1, cd2).find(scope, blocking, "witness");
}

ClassSetSummary cddiff_summarize(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2, Scope scope) {
    WitnessFinder finder(cd1, cd2);
    BlockingConstraint blocking;
    std::size_t calls = 0;
    auto next = [&]() -> std::optional<ObjectModel> {
        ++calls;
        auto w = finder.find(scope, blocking, "w" + std::to_string(blocking.forbidden_class_sets.size() + 1));
        if (w) {
            blocking.forbidden_class_sets.insert(classes_of(*w));
        }
        return w;
    };
    ClassSetSummary out;
    out.summary = summarize<ObjectModel>(next, [](const ObjectModel& om) {
        return PartitionKey::class_set(classes_of(om));
    });
    out.solver_calls = calls;
    return out;
}

SummaryReport cddiff_summary(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2, Scope scope) {
    const ClassSetSummary s = cddiff_summarize(cd1, cd2, scope);
    SummaryReport report = to_report<ObjectModel>(s.summary, {cd1.name(), cd2.name()}, PartitionKind::ClassSet,
                                                  [](const ObjectModel& om) { return text::print_od(om); });
    report.notes.push_back("scope " + std::to_string(scope.max_objects) + " objects; " +
                           std::to_string(s.solver_calls) + (s.solver_calls == 1 ? " witness search" : " witness searches"));
    return report;
}

std::vector<ObjectModel> enumerate_witnesses(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2,
                                             Scope scope, std::size_t limit) {
    std::vector<ObjectModel> out;
    Search search(cd1, cd2);
    for (std::size_t total = 1; total <= scope.max_objects && out.size() < limit; ++total) {
        for (const auto& counts : search.vectors(total)) {
            if (out.size() >= limit) {
                break;
            }
            const Instance inst = search.instantiate(counts);
            search.walk(
                inst,
                [&](const std::vector<std::int8_t>& bits) {
                    if (is_lex_leader(inst, bits)) {
                        out.push_back(search.build(inst, bits, "w" + std::to_string(out.size() + 1)));
                    }
                    return out.size() < limit;
                },
                false);
        }
    }
    return out;
}

} // namespace semdiff::cd
