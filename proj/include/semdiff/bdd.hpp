// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reduced ordered BDDs without complement edges. The variable order is the
// variable index order and never changes.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semdiff::bdd {

using NodeId = std::uint32_t;
using Var = std::uint32_t;

inline constexpr NodeId false_node = 0;
inline constexpr NodeId true_node = 1;

class Manager;

// A function owned by one manager. Equality of handles is equality of
// functions (canonicity); handles from different managers never compare equal.
class Bdd {
  public:
    Bdd() = default;

    NodeId id() const noexcept { return root_; }
    Manager* manager() const noexcept { return mgr_; }
    bool is_false() const noexcept { return root_ == false_node; }
    bool is_true() const noexcept { return root_ == true_node; }

    Bdd operator&(const Bdd& o) const;
    Bdd operator|(const Bdd& o) const;
    Bdd operator^(const Bdd& o) const;
    Bdd operator!() const;
    // f - g = f and not g
    Bdd operator-(const Bdd& o) const;
    Bdd& operator&=(const Bdd& o) { return *this = *this & o; }
    Bdd& operator|=(const Bdd& o) { return *this = *this | o; }

    friend bool operator==(const Bdd&, const Bdd&) = default;

  private:
    friend class Manager;
    Bdd(Manager* m, NodeId n) : mgr_(m), root_(n) {}

    Manager* mgr_ = nullptr;
    NodeId root_ = false_node;
};

// A finite-domain variable [lo, hi] encoded in binary (value - lo, most
// significant bit first) over consecutive-in-order variables. Width 0 for a
// single-value domain.
struct VarBundle {
    std::string name;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<Var> vars;

    std::size_t width() const noexcept { return vars.size(); }
    std::uint64_t size() const noexcept { return static_cast<std::uint64_t>(hi - lo) + 1; }
};

// Current/next correspondence used by image computations.
class Pairing {
  public:
    // Throws Error{UnpairedBundle} when two paired bundles differ in domain.
    explicit Pairing(std::vector<std::pair<VarBundle, VarBundle>> cur_next);

    const std::vector<std::pair<VarBundle, VarBundle>>& pairs() const noexcept { return pairs_; }
    std::vector<Var> current_vars() const;
    std::vector<Var> next_vars() const;
    std::vector<std::pair<Var, Var>> to_next() const;
    std::vector<std::pair<Var, Var>> to_current() const;

  private:
    std::vector<std::pair<VarBundle, VarBundle>> pairs_;
};

struct NodeInfo {
    Var level;
    NodeId low;
    NodeId high;
};

class Manager {
  public:
    explicit Manager(std::size_t var_count = 0);
    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;

    std::size_t var_count() const noexcept { return var_count_; }
    // Appends a variable at the bottom of the order.
    Var new_var();
    VarBundle new_bundle(std::string name, std::int64_t lo, std::int64_t hi);

    Bdd bdd_true() { return {this, true_node}; }
    Bdd bdd_false() { return {this, false_node}; }
    // Throws Error{IndexOutOfRange}.
    Bdd var(Var v);
    Bdd nvar(Var v);

    Bdd apply_and(const Bdd& f, const Bdd& g);
    Bdd apply_or(const Bdd& f, const Bdd& g);
    Bdd apply_xor(const Bdd& f, const Bdd& g);
    Bdd negate(const Bdd& f);
    Bdd ite(const Bdd& f, const Bdd& g, const Bdd& h);

    Bdd exists(const Bdd& f, std::span<const Var> vars);
    Bdd forall(const Bdd& f, std::span<const Var> vars);
    Bdd exists(const Bdd& f, std::span<const VarBundle> bundles);
    Bdd forall(const Bdd& f, std::span<const VarBundle> bundles);
    // exists vars . f and g, without building the conjunction.
    Bdd and_exists(const Bdd& f, const Bdd& g, std::span<const Var> vars);

    // Simultaneous substitution of variables; the map must be injective.
    Bdd rename(const Bdd& f, std::span<const std::pair<Var, Var>> map);

    // { s | exists extra, s' . t(s, extra, s') and x(s') }, over current vars.
    Bdd preimage(const Bdd& t, const Bdd& x_next, const Pairing& p, std::span<const Var> extra = {});
    // { s' | exists extra, s . t(s, extra, s') and x(s) }, renamed to current vars.
    Bdd image(const Bdd& t, const Bdd& x, const Pairing& p, std::span<const Var> extra = {});

    // Finite-domain predicates.
    Bdd domain(const VarBundle& b);
    Bdd equals(const VarBundle& b, std::int64_t value);
    Bdd equals(const VarBundle& a, const VarBundle& b); // same domain required
    Bdd in_range(const VarBundle& b, std::int64_t lo, std::int64_t hi);

    // Least valuation of the bundles (in the given order) satisfying f and
    // their domains. Throws Error{EmptySet}.
    std::vector<std::int64_t> pick_one(const Bdd& f, std::span<const VarBundle> bundles);
    // Number of valuations of the bundles, within their domains, that extend
    // to a satisfying assignment of f. Throws Error{BitBudgetExceeded} past 63 bits.
    std::uint64_t count_sat(const Bdd& f, std::span<const VarBundle> bundles);
    // Sorted values of one bundle consistent with f.
    std::vector<std::int64_t> project_values(const Bdd& f, const VarBundle& b);

    bool eval(const Bdd& f, const std::vector<bool>& assignment) const;

    // Node count reachable from f, terminals included.
    std::size_t size(const Bdd& f) const;
    std::size_t table_size() const noexcept { return nodes_.size(); }
    NodeInfo node(NodeId n) const { return nodes_.at(n); }

    // Checks reduction, ordering and uniqueness of the whole node table.
    // Returns an empty string when everything holds.
    std::string audit() const;
    // "id: level low high" for every internal node reachable from f.
    std::string dump(const Bdd& f) const;

    void clear_cache();
    std::uint64_t cache_generation() const noexcept { return generation_; }

  private:
    enum class Op : std::uint8_t { And, Or, Xor, Not, Ite, Exists, Forall, AndExists, Rename };

    struct Key {
        Op op;
        NodeId a, b, c;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };
    struct Triple {
        Var level;
        NodeId low, high;
        friend bool operator==(const Triple&, const Triple&) = default;
    };
    struct TripleHash {
        std::size_t operator()(const Triple& t) const noexcept;
    };

    void check(const Bdd& f) const;
    Var level(NodeId n) const { return nodes_[n].level; }
    NodeId make(Var level, NodeId low, NodeId high);
    NodeId cube(std::span<const Var> vars);
    NodeId and_rec(NodeId f, NodeId g);
    NodeId or_rec(NodeId f, NodeId g);
    NodeId xor_rec(NodeId f, NodeId g);
    NodeId not_rec(NodeId f);
    NodeId ite_rec(NodeId f, NodeId g, NodeId h);
    NodeId quant_rec(NodeId f, NodeId cube, bool exist);
    NodeId and_exists_rec(NodeId f, NodeId g, NodeId cube);
    NodeId rename_rec(NodeId f, const std::unordered_map<Var, Var>& map, NodeId tag);
    static std::vector<Var> bundle_vars(std::span<const VarBundle> bundles);

    std::size_t var_count_ = 0;
    std::vector<NodeInfo> nodes_;
    std::unordered_map<Triple, NodeId, TripleHash> unique_;
    std::unordered_map<Key, NodeId, KeyHash> cache_;
    std::uint64_t generation_ = 0;
    NodeId rename_tag_ = 0;
};

} // namespace semdiff::bdd
