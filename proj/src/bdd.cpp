// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/bdd.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "semdiff/error.hpp"

namespace semdiff::bdd {
namespace {

constexpr Var terminal_level = std::numeric_limits<Var>::max();

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

} // namespace

// ---- handle operators -------------------------------------------------------

Bdd Bdd::operator&(const Bdd& o) const { return mgr_->apply_and(*this, o); }
Bdd Bdd::operator|(const Bdd& o) const { return mgr_->apply_or(*this, o); }
Bdd Bdd::operator^(const Bdd& o) const { return mgr_->apply_xor(*this, o); }
Bdd Bdd::operator!() const { return mgr_->negate(*this); }
Bdd Bdd::operator-(const Bdd& o) const { return mgr_->apply_and(*this, mgr_->negate(o)); }

// ---- pairing -----------------------------------------------------------------

Pairing::Pairing(std::vector<std::pair<VarBundle, VarBundle>> cur_next) : pairs_(std::move(cur_next)) {
    for (const auto& [c, n] : pairs_) {
        if (c.lo != n.lo || c.hi != n.hi || c.width() != n.width()) {
            throw Error(ErrorKind::UnpairedBundle, c.name,
                        "bundle " + c.name + " cannot be paired with " + n.name + ": domains differ");
        }
    }
}

std::vector<Var> Pairing::current_vars() const {
    std::vector<Var> out;
    for (const auto& p : pairs_) {
        out.insert(out.end(), p.first.vars.begin(), p.first.vars.end());
    }
    return out;
}

std::vector<Var> Pairing::next_vars() const {
    std::vector<Var> out;
    for (const auto& p : pairs_) {
        out.insert(out.end(), p.second.vars.begin(), p.second.vars.end());
    }
    return out;
}

std::vector<std::pair<Var, Var>> Pairing::to_next() const {
    std::vector<std::pair<Var, Var>> out;
    for (const auto& [c, n] : pairs_) {
        for (std::size_t i = 0; i < c.width(); ++i) {
            out.emplace_back(c.vars[i], n.vars[i]);
        }
    }
    return out;
}

std::vector<std::pair<Var, Var>> Pairing::to_current() const {
    auto out = to_next();
    for (auto& [a, b] : out) {
        std::swap(a, b);
    }
    return out;
}

// ---- manager -----------------------------------------------------------------

std::size_t Manager::KeyHash::operator()(const Key& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.op);
    h = mix(h, k.a);
    h = mix(h, k.b);
    return mix(h, k.c);
}

std::size_t Manager::TripleHash::operator()(const Triple& t) const noexcept {
    return mix(mix(t.level, t.low), t.high);
}

Manager::Manager(std::size_t var_count) : var_count_(var_count) {
    nodes_.push_back({terminal_level, false_node, false_node});
    nodes_.push_back({terminal_level, true_node, true_node});
}

Var Manager::new_var() { return static_cast<Var>(var_count_++); }

VarBundle Manager::new_bundle(std::string name, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw Error(ErrorKind::EmptyRange, name, "empty domain for " + name);
    }
    VarBundle b{std::move(name), lo, hi, {}};
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
    const int width = span == 0 ? 0 : std::bit_width(span);
    for (int i = 0; i < width; ++i) {
        b.vars.push_back(new_var());
    }
    return b;
}

void Manager::check(const Bdd& f) const {
    if (f.mgr_ != this) {
        throw Error(ErrorKind::ManagerMismatch, "", "BDD belongs to a different manager");
    }
}

Bdd Manager::var(Var v) {
    if (v >= var_count_) {
        throw Error(ErrorKind::IndexOutOfRange, std::to_string(v),
                    "variable " + std::to_string(v) + " out of range (" + std::to_string(var_count_) + " variables)");
    }
    return {this, make(v, false_node, true_node)};
}

Bdd Manager::nvar(Var v) {
    var(v);
    return {this, make(v, true_node, false_node)};
}

NodeId Manager::make(Var lvl, NodeId low, NodeId high) {
    if (low == high) {
        return low;
    }
    const Triple t{lvl, low, high};
    if (auto it = unique_.find(t); it != unique_.end()) {
        return it->second;
    }
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({lvl, low, high});
    unique_.emplace(t, id);
    return id;
}

NodeId Manager::and_rec(NodeId f, NodeId g) {
    if (f == false_node || g == false_node) {
        return false_node;
    }
    if (f == true_node || f == g) {
        return g;
    }
    if (g == true_node) {
        return f;
    }
    if (f > g) {
        std::swap(f, g);
    }
    const Key key{Op::And, f, g, 0};
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    const Var v = std::min(level(f), level(g));
    const NodeInfo nf = nodes_[f];
    const NodeInfo ng = nodes_[g];
    const NodeId lo = and_rec(nf.level == v ? nf.low : f, ng.level == v ? ng.low : g);
    const NodeId hi = and_rec(nf.level == v ? nf.high : f, ng.level == v ? ng.high : g);
    const NodeId r = make(v, lo, hi);
    cache_.emplace(key, r);
    return r;
}

NodeId Manager::or_rec(NodeId f, NodeId g) {
    if (f == true_node || g == true_node) {
        return true_node;
    }
    if (f == false_node || f == g) {
        return g;
    }
    if (g == false_node) {
        return f;
    }
    if (f > g) {
        std::swap(f, g);
    }
    const Key key{Op::Or, f, g, 0};
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    const Var v = std::min(level(f), level(g));
    const NodeInfo nf = nodes_[f];
    const NodeInfo ng = nodes_[g];
    const NodeId lo = or_rec(nf.level == v ? nf.low : f, ng.level == v ? ng.low : g);
    const NodeId hi = or_rec(nf.level == v ? nf.high : f, ng.level == v ? ng.high : g);
    const NodeId r = make(v, lo, hi);
    cache_.emplace(key, r);
    return r;
}

NodeId Manager::xor_rec(NodeId f, NodeId g) {
    if (f == g) {
        return false_node;
    }
    if (f == false_node) {
        return g;
    }
    if (g == false_node) {
        return f;
    }
    if (f == true_node) {
        return not_rec(g);
    }
    if (g == true_node) {
        return not_rec(f);
    }
    if (f > g) {
        std::swap(f, g);
    }
    const Key key{Op::Xor, f, g, 0};
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    const Var v = std::min(level(f), level(g));
    const NodeInfo nf = nodes_[f];
    const NodeInfo ng = nodes_[g];
    const NodeId lo = xor_rec(nf.level == v ? nf.low : f, ng.level == v ? ng.low : g);
    const NodeId hi = xor_rec(nf.level == v ? nf.high : f, ng.level == v ? ng.high : g);
    const NodeId r = make(v, lo, hi);
    cache_.emplace(key, r);
    return r;
}

NodeId Manager::not_rec(NodeId f) {
    if (f <= true_node) {
        return f ^ 1U;
    }
    const Key key{Op::Not, f, 0, 0};
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    const NodeInfo n = nodes_[f];
    const NodeId r = make(n.level, not_rec(n.low), not_rec(n.high));
    cache_.emplace(key, r);
    return r;
}

NodeId Manager::ite_rec(NodeId f, NodeId g, NodeId h) {
    if (f == true_node) {
        return g;
    }
    if (f == false_node) {
        return h;
    }
    if (g == h) {
        return g;
    }
    if (g == true_node && h == false_node) {
        return f;
    }
    if (g == false_node && h == true_node) {
        return not_rec(f);
    }
    const Key key{Op::Ite, f, g, h};
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    const Var v = std::min({level(f), level(g), level(h)});
    auto cof = [&](NodeId n, bool high) {
        const NodeInfo& i = nodes_[n];
        return i.level == v ? (high ? i.high : i.low) : n;
    };
    const NodeId lo = ite_rec(cof(f, false), cof(g, false), cof(h, false));
    const NodeId hi = ite_rec(cof(f, true), cof(g, true), cof(h, true));
    const NodeId r = make(v, lo, hi);
    cache_.emplace(key, r);
    return r;
}

NodeId Manager::cube(std::span<const Var> vars) {
    std::vector<Var> sorted(vars.begin(), vars.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    NodeId c = true_node;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (*it >= var_count_) {
            throw Error(ErrorKind::IndexOutOfRange, std::to_string(*it),
                        "variable " + std::to_string(*it) + " out of range");
        }
        c = make(*it, false_node, c);
    }
    return c;
}

NodeId Manager::quant_rec(NodeId f, NodeId c, bool exist) {
    if (f <= true_node || c == true_node) {
        return f;
    }
    const Var v = level(f);
    while (c != true_node && level(c) < v) {
        c = nodes_[c].high;
    }
    if (c == true_node) {
        return f;
    }
    const Key key{exist ? Op::Exists : Op::Forall, f, c, 0};
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    const NodeInfo n = nodes_[f];
    NodeId r;
    if (level(c) == v) {
        const NodeId rest = nodes_[c].high;
        const NodeId lo = quant_rec(n.low, rest, exist);
        if (exist && lo == true_node) {
            r = true_node;
        } else if (!exist && lo == false_node) {
            r = false_node;
        } else {
            const NodeId hi = quant_rec(n.high, rest, exist);
            r = exist ? or_rec(lo, hi) : and_rec(lo, hi);
        }
    } else {
        r = make(v, quant_rec(n.low, c, exist), quant_rec(n.high, c, exist));
    }
    cache_.emplace(key, r);
    return r;
}

NodeId Manager::and_exists_rec(NodeId f, NodeId g, NodeId c) {
    if (f == false_node || g == false_node) {
        return false_node;
    }
    if (f == true_node && g == true_node) {
        return true_node;
    }
    if (f == true_node || f == g) {
        return quant_rec(g, c, true);
    }
    if (g == true_node) {
        return quant_rec(f, c, true);
    }
    if (f > g) {
        std::swap(f, g);
    }
    const Var v = std::min(level(f), level(g));
    while (c != true_node && level(c) < v) {
        c = nodes_[c].high;
    }
    if (c == true_node) {
        return and_rec(f, g);
    }
    const Key key{Op::AndExists, f, g, c};
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    const NodeInfo nf = nodes_[f];
    const NodeInfo ng = nodes_[g];
    const NodeId f0 = nf.level == v ? nf.low : f;
    const NodeId f1 = nf.level == v ? nf.high : f;
    const NodeId g0 = ng.level == v ? ng.low : g;
    const NodeId g1 = ng.level == v ? ng.high : g;
    NodeId r;
    if (level(c) == v) {
        const NodeId rest = nodes_[c].high;
        const NodeId lo = and_exists_rec(f0, g0, rest);
        r = lo == true_node ? true_node : or_rec(lo, and_exists_rec(f1, g1, rest));
    } else {
        r = make(v, and_exists_rec(f0, g0, c), and_exists_rec(f1, g1, c));
    }
    cache_.emplace(key, r);
    return r;
}

NodeId Manager::rename_rec(NodeId f, const std::unordered_map<Var, Var>& map, NodeId tag) {
    if (f <= true_node) {
        return f;
    }
    const Key key{Op::Rename, f, tag, 0};
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    const NodeInfo n = nodes_[f];
    const auto m = map.find(n.level);
    const Var target = m == map.end() ? n.level : m->second;
    const NodeId lo = rename_rec(n.low, map, tag);
    const NodeId hi = rename_rec(n.high, map, tag);
    const NodeId r = ite_rec(make(target, false_node, true_node), hi, lo);
    cache_.emplace(key, r);
    return r;
}

Bdd Manager::apply_and(const Bdd& f, const Bdd& g) {
    check(f);
    check(g);
    return {this, and_rec(f.root_, g.root_)};
}

Bdd Manager::apply_or(const Bdd& f, const Bdd& g) {
    check(f);
    check(g);
    return {this, or_rec(f.root_, g.root_)};
}

Bdd Manager::apply_xor(const Bdd& f, const Bdd& g) {
    check(f);
    check(g);
    return {this, xor_rec(f.root_, g.root_)};
}

Bdd Manager::negate(const Bdd& f) {
    check(f);
    return {this, not_rec(f.root_)};
}

Bdd Manager::ite(const Bdd& f, const Bdd& g, const Bdd& h) {
    check(f);
    check(g);
    check(h);
    return {this, ite_rec(f.root_, g.root_, h.root_)};
}

Bdd Manager::exists(const Bdd& f, std::span<const Var> vars) {
    check(f);
    return {this, quant_rec(f.root_, cube(vars), true)};
}

Bdd Manager::forall(const Bdd& f, std::span<const Var> vars) {
    check(f);
    return {this, quant_rec(f.root_, cube(vars), false)};
}

std::vector<Var> Manager::bundle_vars(std::span<const VarBundle> bundles) {
    std::vector<Var> out;
    for (const auto& b : bundles) {
        out.insert(out.end(), b.vars.begin(), b.vars.end());
    }
    return out;
}

Bdd Manager::exists(const Bdd& f, std::span<const VarBundle> bundles) {
    const auto vars = bundle_vars(bundles);
    return exists(f, std::span<const Var>(vars));
}

Bdd Manager::forall(const Bdd& f, std::span<const VarBundle> bundles) {
    const auto vars = bundle_vars(bundles);
    return forall(f, std::span<const Var>(vars));
}

Bdd Manager::and_exists(const Bdd& f, const Bdd& g, std::span<const Var> vars) {
    check(f);
    check(g);
    return {this, and_exists_rec(f.root_, g.root_, cube(vars))};
}

Bdd Manager::rename(const Bdd& f, std::span<const std::pair<Var, Var>> map) {
    check(f);
    std::unordered_map<Var, Var> m;
    for (const auto& [from, to] : map) {
        if (from >= var_count_ || to >= var_count_) {
            throw Error(ErrorKind::IndexOutOfRange, std::to_string(std::max(from, to)),
                        "rename refers to an unknown variable");
        }
        if (from == to) {
            continue;
        }
        m.emplace(from, to);
    }
    if (m.empty()) {
        return f;
    }
    // A fresh tag keeps cache entries of different maps apart.
    return {this, rename_rec(f.root_, m, ++rename_tag_)};
}

Bdd Manager::preimage(const Bdd& t, const Bdd& x_next, const Pairing& p, std::span<const Var> extra) {
    auto vars = p.next_vars();
    vars.insert(vars.end(), extra.begin(), extra.end());
    return and_exists(t, x_next, vars);
}

Bdd Manager::image(const Bdd& t, const Bdd& x, const Pairing& p, std::span<const Var> extra) {
    auto vars = p.current_vars();
    vars.insert(vars.end(), extra.begin(), extra.end());
    const Bdd next = and_exists(t, x, vars);
    const auto map = p.to_current();
    return rename(next, map);
}

Bdd Manager::domain(const VarBundle& b) { return in_range(b, b.lo, b.hi); }

Bdd Manager::equals(const VarBundle& b, std::int64_t value) {
    if (value < b.lo || value > b.hi) {
        return bdd_false();
    }
    const auto code = static_cast<std::uint64_t>(value - b.lo);
    NodeId r = true_node;
    for (std::size_t i = b.width(); i-- > 0;) {
        const bool bit = (code >> (b.width() - 1 - i)) & 1U;
        r = bit ? make(b.vars[i], false_node, r) : make(b.vars[i], r, false_node);
    }
    return {this, r};
}

Bdd Manager::equals(const VarBundle& a, const VarBundle& b) {
    if (a.lo != b.lo || a.hi != b.hi) {
        throw Error(ErrorKind::UnpairedBundle, a.name, "bundle " + a.name + " and " + b.name + " differ in domain");
    }
    Bdd r = bdd_true();
    for (std::size_t i = 0; i < a.width(); ++i) {
        r &= !(var(a.vars[i]) ^ var(b.vars[i]));
    }
    return r;
}

Bdd Manager::in_range(const VarBundle& b, std::int64_t lo, std::int64_t hi) {
    lo = std::max(lo, b.lo);
    hi = std::min(hi, b.hi);
    if (lo > hi) {
        return bdd_false();
    }
    // code >= lo_code and code <= hi_code, built bottom-up bit by bit.
    const auto lo_code = static_cast<std::uint64_t>(lo - b.lo);
    const auto hi_code = static_cast<std::uint64_t>(hi - b.lo);
    NodeId ge = true_node;
    NodeId le = true_node;
    for (std::size_t i = b.width(); i-- > 0;) {
        const unsigned shift = static_cast<unsigned>(b.width() - 1 - i);
        const Var v = b.vars[i];
        if ((lo_code >> shift) & 1U) {
            ge = make(v, false_node, ge);
        } else {
            ge = make(v, ge, true_node);
        }
        if ((hi_code >> shift) & 1U) {
            le = make(v, true_node, le);
        } else {
            le = make(v, le, false_node);
        }
    }
    return {this, and_rec(ge, le)};
}

std::vector<std::int64_t> Manager::pick_one(const Bdd& f, std::span<const VarBundle> bundles) {
    check(f);
    Bdd g = f;
    for (const auto& b : bundles) {
        g &= domain(b);
    }
    if (g.is_false()) {
        throw Error(ErrorKind::EmptySet, "", "pick_one on an empty set");
    }
    std::vector<std::int64_t> out;
    for (const auto& b : bundles) {
        std::uint64_t code = 0;
        for (Var v : b.vars) {
            const Bdd zero = g & nvar(v);
            code <<= 1;
            if (zero.is_false()) {
                g &= var(v);
                code |= 1U;
            } else {
                g = zero;
            }
        }
        out.push_back(b.lo + static_cast<std::int64_t>(code));
    }
    return out;
}

std::uint64_t Manager::count_sat(const Bdd& f, std::span<const VarBundle> bundles) {
    check(f);
    std::vector<Var> vars = bundle_vars(bundles);
    std::sort(vars.begin(), vars.end());
    if (vars.size() > 63) {
        throw Error(ErrorKind::BitBudgetExceeded, "", "count_sat over more than 63 bits");
    }
    Bdd g = f;
    for (const auto& b : bundles) {
        g &= domain(b);
    }
    std::vector<Var> others;
    {
        std::unordered_set<Var> keep(vars.begin(), vars.end());
        for (Var v = 0; v < var_count_; ++v) {
            if (!keep.contains(v)) {
                others.push_back(v);
            }
        }
    }
    g = exists(g, std::span<const Var>(others));
    // Position of each level among the counted variables.
    auto pos = [&](Var lvl) -> std::size_t {
        return lvl == terminal_level ? vars.size()
                                     : static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), lvl) -
                                                                vars.begin());
    };
    std::unordered_map<NodeId, std::uint64_t> memo;
    // Models of the sub-function below its own level.
    auto rec = [&](auto&& self, NodeId n) -> std::uint64_t {
        if (n == false_node) {
            return 0;
        }
        if (n == true_node) {
            return 1;
        }
        if (auto it = memo.find(n); it != memo.end()) {
            return it->second;
        }
        const NodeInfo& i = nodes_[n];
        const std::size_t p = pos(i.level);
        const std::uint64_t lo = self(self, i.low) << (pos(level(i.low)) - p - 1);
        const std::uint64_t hi = self(self, i.high) << (pos(level(i.high)) - p - 1);
        return memo[n] = lo + hi;
    };
    return rec(rec, g.root_) << pos(level(g.root_));
}

std::vector<std::int64_t> Manager::project_values(const Bdd& f, const VarBundle& b) {
    check(f);
    Bdd g = f & domain(b);
    std::vector<Var> others;
    {
        std::unordered_set<Var> keep(b.vars.begin(), b.vars.end());
        for (Var v = 0; v < var_count_; ++v) {
            if (!keep.contains(v)) {
                others.push_back(v);
            }
        }
    }
    g = exists(g, std::span<const Var>(others));
    std::vector<std::int64_t> out;
    // Walk the bundle bits MSB first, low branch before high: values come out sorted.
    auto rec = [&](auto&& self, NodeId n, std::size_t i, std::uint64_t code) -> void {
        if (n == false_node) {
            return;
        }
        if (i == b.width()) {
            out.push_back(b.lo + static_cast<std::int64_t>(code));
            return;
        }
        const NodeInfo& info = nodes_[n];
        const bool here = info.level == b.vars[i];
        self(self, here ? info.low : n, i + 1, code << 1);
        self(self, here ? info.high : n, i + 1, (code << 1) | 1U);
    };
    rec(rec, g.root_, 0, 0);
    return out;
}

bool Manager::eval(const Bdd& f, const std::vector<bool>& assignment) const {
    check(f);
    NodeId n = f.root_;
    while (n > true_node) {
        const NodeInfo& i = nodes_[n];
        n = i.level < assignment.size() && assignment[i.level] ? i.high : i.low;
    }
    return n == true_node;
}

std::size_t Manager::size(const Bdd& f) const {
    check(f);
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> stack{f.root_};
    while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second || n <= true_node) {
            continue;
        }
        stack.push_back(nodes_[n].low);
        stack.push_back(nodes_[n].high);
    }
    return seen.size();
}

std::string Manager::audit() const {
    std::ostringstream err;
    if (unique_.size() + 2 != nodes_.size()) {
        err << "unique table has " << unique_.size() << " entries for " << nodes_.size() - 2 << " nodes\n";
    }
    for (NodeId n = 2; n < nodes_.size(); ++n) {
        const NodeInfo& i = nodes_[n];
        if (i.low == i.high) {
            err << "node " << n << " is redundant\n";
        }
        if (i.low >= nodes_.size() || i.high >= nodes_.size()) {
            err << "node " << n << " has a dangling child\n";
            continue;
        }
        if (level(i.low) <= i.level || level(i.high) <= i.level) {
            err << "node " << n << " violates the variable order\n";
        }
        if (i.level >= var_count_) {
            err << "node " << n << " tests unknown variable " << i.level << "\n";
        }
        const auto it = unique_.find({i.level, i.low, i.high});
        if (it == unique_.end() || it->second != n) {
            err << "node " << n << " is not the unique representative of its triple\n";
        }
    }
    return err.str();
}

std::string Manager::dump(const Bdd& f) const {
    check(f);
    std::set<NodeId> seen;
    std::vector<NodeId> stack{f.root_};
    while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        if (n <= true_node || !seen.insert(n).second) {
            continue;
        }
        stack.push_back(nodes_[n].low);
        stack.push_back(nodes_[n].high);
    }
    std::ostringstream out;
    out << "root " << f.root_ << "\n";
    for (NodeId n : seen) {
        out << n << ": " << nodes_[n].level << " " << nodes_[n].low << " " << nodes_[n].high << "\n";
    }
    return out.str();
}

void Manager::clear_cache() {
    cache_.clear();
    ++generation_;
}

} // namespace semdiff::bdd
