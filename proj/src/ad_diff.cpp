// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/ad_diff.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "semdiff/error.hpp"

namespace semdiff::ad {
namespace {

using bdd::Bdd;
using bdd::Var;
using bdd::VarBundle;

// A current bundle and its next-state copy with interleaved bits.
std::pair<VarBundle, VarBundle> twin(bdd::Manager& m, const std::string& name, std::int64_t lo, std::int64_t hi) {
    VarBundle cur{name, lo, hi, {}};
    VarBundle next{name + "'", lo, hi, {}};
    const auto span = static_cast<std::uint64_t>(hi - lo);
    const int width = span == 0 ? 0 : std::bit_width(span);
    for (int i = 0; i < width; ++i) {
        cur.vars.push_back(m.new_var());
        next.vars.push_back(m.new_var());
    }
    return {cur, next};
}

void set_bits(std::vector<bool>& bits, const VarBundle& b, std::int64_t value) {
    const auto code = static_cast<std::uint64_t>(value - b.lo);
    for (std::size_t i = 0; i < b.width(); ++i) {
        bits[b.vars[i]] = ((code >> (b.width() - 1 - i)) & 1U) != 0;
    }
}

// Bundle specs for one diagram: one bit per edge, then the locals.
std::vector<VarDecl> state_layout(const Activity& ad) {
    std::vector<VarDecl> out;
    for (const auto& e : ad.diagram().edges) {
        out.push_back({"tok." + e.id(), 0, 1, std::nullopt});
    }
    for (const auto& l : ad.diagram().locals) {
        out.push_back(l);
    }
    return out;
}

std::size_t bits_of(const VarDecl& d) {
    const auto span = static_cast<std::uint64_t>(d.hi - d.lo);
    return span == 0 ? 0 : static_cast<std::size_t>(std::bit_width(span));
}

std::vector<Var> vars_of(const std::vector<VarBundle>& bundles) {
    std::vector<Var> out;
    for (const auto& b : bundles) {
        out.insert(out.end(), b.vars.begin(), b.vars.end());
    }
    return out;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? sep : "") + items[i];
    }
    return out;
}

InputValuation restrict_to(const Activity& ad, const InputValuation& all) {
    InputValuation out;
    for (const auto& in : ad.diagram().inputs) {
        out[in.name] = all.at(in.name);
    }
    return out;
}

std::vector<Configuration> successors(const Activity& ad, const Configuration& c, const std::string& action) {
    std::vector<Configuration> out;
    for (auto& s : observable_steps(ad, c)) {
        if (s.action == action) {
            out.push_back(std::move(s.next));
        }
    }
    return out;
}

} // namespace

// ---- encoding --------------------------------------------------------------

Bdd ProductEncoding::label_is(const std::string& action) const {
    const auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), action);
    if (it == alphabet_.end() || *it != action) {
        return mgr_->bdd_false();
    }
    return mgr_->equals(label_, it - alphabet_.begin());
}

std::vector<Var> ProductEncoding::state_vars(int side, bool next) const {
    return vars_of(side == 1 ? (next ? next1_ : cur1_) : (next ? next2_ : cur2_));
}

void ProductEncoding::set_state_bits(std::vector<bool>& bits, int side, const Configuration& c) const {
    const Activity& ad = side == 1 ? ad1_ : ad2_;
    const auto& bundles = side == 1 ? cur1_ : cur2_;
    for (std::size_t e = 0; e < ad.edge_count(); ++e) {
        set_bits(bits, bundles[e], c.tokens[e] ? 1 : 0);
    }
    for (std::size_t l = 0; l < ad.diagram().locals.size(); ++l) {
        set_bits(bits, bundles[ad.edge_count() + l], c.values[ad.input_count() + l]);
    }
    for (std::size_t i = 0; i < ad.input_count(); ++i) {
        const auto& name = ad.diagram().inputs[i].name;
        for (const auto& b : inputs_) {
            if (b.name == name) {
                set_bits(bits, b, c.values[i]);
            }
        }
    }
}

Bdd ProductEncoding::state_cube(int side, const Configuration& c, bool next) const {
    const Activity& ad = side == 1 ? ad1_ : ad2_;
    const auto& bundles = side == 1 ? (next ? next1_ : cur1_) : (next ? next2_ : cur2_);
    Bdd r = mgr_->bdd_true();
    for (std::size_t e = 0; e < ad.edge_count(); ++e) {
        r &= mgr_->equals(bundles[e], c.tokens[e] ? 1 : 0);
    }
    for (std::size_t l = 0; l < ad.diagram().locals.size(); ++l) {
        r &= mgr_->equals(bundles[ad.edge_count() + l], c.values[ad.input_count() + l]);
    }
    return r;
}

Bdd ProductEncoding::inputs_cube(const Activity& ad, const Configuration& c) const {
    Bdd r = mgr_->bdd_true();
    for (std::size_t i = 0; i < ad.input_count(); ++i) {
        const auto& name = ad.diagram().inputs[i].name;
        for (const auto& b : inputs_) {
            if (b.name == name) {
                r &= mgr_->equals(b, c.values[i]);
            }
        }
    }
    return r;
}

Bdd ProductEncoding::encode_pair(const Configuration& c1, const Configuration& c2) const {
    return inputs_cube(ad1_, c1) & inputs_cube(ad2_, c2) & state_cube(1, c1, false) & state_cube(2, c2, false);
}

bool ProductEncoding::contains(const Bdd& set, const Configuration& c1, const Configuration& c2) const {
    // a joint state carries one value per shared input
    const InputValuation in1 = ad1_.inputs_of(c1);
    for (const auto& [name, v] : ad2_.inputs_of(c2)) {
        const auto it = in1.find(name);
        if (it != in1.end() && it->second != v) {
            return false;
        }
    }
    std::vector<bool> bits(mgr_->var_count(), false);
    set_state_bits(bits, 1, c1);
    set_state_bits(bits, 2, c2);
    return mgr_->eval(set, bits);
}

ProductEncoding encode_product(const Activity& ad1, const Activity& ad2, const EncodeOptions& options) {
    ProductEncoding enc(ad1, ad2);
    const auto layout1 = state_layout(ad1);
    const auto layout2 = state_layout(ad2);

    std::map<std::string, std::pair<std::int64_t, std::int64_t>> input_ranges;
    for (const Activity* ad : {&ad1, &ad2}) {
        std::size_t bits = 0;
        for (const auto& d : state_layout(*ad)) {
            bits += bits_of(d);
        }
        for (const auto& in : ad->diagram().inputs) {
            bits += bits_of(in);
            auto [it, fresh] = input_ranges.try_emplace(in.name, in.lo, in.hi);
            if (!fresh) {
                it->second = {std::min(it->second.first, in.lo), std::max(it->second.second, in.hi)};
            }
        }
        if (bits > options.bit_budget) {
            throw Error(ErrorKind::BitBudgetExceeded, ad->name(),
                        ad->name() + " needs " + std::to_string(bits) + " state bits, budget is " +
                            std::to_string(options.bit_budget));
        }
    }

    enc.ts1_ = build_explicit_ts(ad1, options.state_budget);
    enc.ts2_ = build_explicit_ts(ad2, options.state_budget);

    std::set<std::string> alphabet(ad1.action_names().begin(), ad1.action_names().end());
    alphabet.insert(ad2.action_names().begin(), ad2.action_names().end());
    enc.alphabet_.assign(alphabet.begin(), alphabet.end());

    enc.mgr_ = std::make_unique<bdd::Manager>();
    bdd::Manager& m = *enc.mgr_;
    for (const auto& [name, range] : input_ranges) {
        enc.inputs_.push_back(m.new_bundle(name, range.first, range.second));
    }
    enc.label_ = m.new_bundle("action", 0, std::max<std::int64_t>(0, static_cast<std::int64_t>(alphabet.size()) - 1));
    for (std::size_t k = 0; k < std::max(layout1.size(), layout2.size()); ++k) {
        if (k < layout1.size()) {
            auto [c, n] = twin(m, "1." + layout1[k].name, layout1[k].lo, layout1[k].hi);
            enc.cur1_.push_back(std::move(c));
            enc.next1_.push_back(std::move(n));
        }
        if (k < layout2.size()) {
            auto [c, n] = twin(m, "2." + layout2[k].name, layout2[k].lo, layout2[k].hi);
            enc.cur2_.push_back(std::move(c));
            enc.next2_.push_back(std::move(n));
        }
    }
    for (int side : {1, 2}) {
        const auto& cur = side == 1 ? enc.cur1_ : enc.cur2_;
        const auto& next = side == 1 ? enc.next1_ : enc.next2_;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            for (std::size_t i = 0; i < cur[k].width(); ++i) {
                enc.to_next_.emplace_back(cur[k].vars[i], next[k].vars[i]);
                enc.to_current_.emplace_back(next[k].vars[i], cur[k].vars[i]);
            }
        }
    }

    for (int side : {1, 2}) {
        const Activity& ad = side == 1 ? ad1 : ad2;
        const TransitionSystem& ts = side == 1 ? enc.ts1_ : enc.ts2_;
        std::vector<Bdd> moves(ts.states.size(), m.bdd_false());
        for (const auto& t : ts.transitions) {
            moves[t.from] |= enc.label_is(t.action) & enc.state_cube(side, ts.states[t.to], true);
        }
        Bdd trans = m.bdd_false();
        for (std::size_t s = 0; s < ts.states.size(); ++s) {
            if (!moves[s].is_false()) {
                trans |= enc.inputs_cube(ad, ts.states[s]) & enc.state_cube(side, ts.states[s], false) & moves[s];
            }
        }
        Bdd init = m.bdd_false();
        for (std::size_t s : ts.initial) {
            init |= enc.inputs_cube(ad, ts.states[s]) & enc.state_cube(side, ts.states[s], false);
        }
        const auto next_vars = enc.state_vars(side, true);
        const Bdd en = m.exists(trans, std::span<const Var>(next_vars));
        (side == 1 ? enc.t1_ : enc.t2_) = trans;
        (side == 1 ? enc.en1_ : enc.en2_) = en;
        (side == 1 ? enc.i1_ : enc.i2_) = init;
    }
    return enc;
}

// ---- fixpoint --------------------------------------------------------------

Bdd non_correspondence(const ProductEncoding& enc) {
    const auto label = enc.label().vars;
    return enc.manager().and_exists(enc.enabled(1), !enc.enabled(2), label);
}

Bdd DiffLayers::exact(std::size_t k) const {
    return k == 0 ? layers.at(0) : layers.at(k) - layers.at(k - 1);
}

DiffLayers backward_fixpoint(const ProductEncoding& enc, const Bdd& d0) {
    bdd::Manager& m = enc.manager();
    const auto next2 = enc.state_vars(2, true);
    auto next1_label = enc.state_vars(1, true);
    next1_label.insert(next1_label.end(), enc.label().vars.begin(), enc.label().vars.end());

    DiffLayers out;
    out.layers.push_back(d0);
    while (true) {
        const Bdd& dk = out.layers.back();
        const Bdd dk_next = m.rename(dk, enc.to_next());
        // Some ad2 successor escapes D_k.
        const Bdd escape = m.and_exists(enc.transitions(2), !dk_next, next2);
        const Bdd forced = m.and_exists(enc.transitions(1), enc.enabled(2) - escape, next1_label);
        const Bdd grown = dk | forced;
        if (grown == dk) {
            break;
        }
        out.layers.push_back(grown);
    }
    return out;
}

Bdd initial_diff_states(const ProductEncoding& enc, const DiffLayers& layers) {
    return enc.initial(1) & enc.initial(2) & layers.fixpoint();
}

// ---- forward split ---------------------------------------------------------

std::vector<SymbolicTrace> forward_split(const ProductEncoding& enc, const DiffLayers& layers) {
    bdd::Manager& m = enc.manager();
    const auto label = enc.label().vars;
    auto states = enc.state_vars(1, false);
    {
        const auto s2 = enc.state_vars(2, false);
        states.insert(states.end(), s2.begin(), s2.end());
    }
    const auto cur1 = enc.state_vars(1, false);
    auto cur2_label = enc.state_vars(2, false);
    cur2_label.insert(cur2_label.end(), label.begin(), label.end());

    std::vector<Bdd> diverge; // per label: En1 and not En2 with that action
    for (const auto& a : enc.alphabet()) {
        const Bdd l = enc.label_is(a);
        diverge.push_back(m.and_exists(enc.enabled(1), l, label) - m.and_exists(enc.enabled(2), l, label));
    }

    std::map<std::vector<std::string>, Bdd> merged;
    std::vector<std::string> path;
    std::function<void(const Bdd&, std::size_t)> expand = [&](const Bdd& frontier, std::size_t d) {
        for (std::size_t ai = 0; ai < enc.alphabet().size(); ++ai) {
            const std::string& a = enc.alphabet()[ai];
            path.push_back(a);
            if (d == 0) {
                const Bdd leaf = frontier & diverge[ai];
                if (!leaf.is_false()) {
                    const Bdd ins = m.exists(leaf, std::span<const Var>(states));
                    auto [it, fresh] = merged.try_emplace(path, ins);
                    if (!fresh) {
                        it->second |= ins;
                    }
                }
            } else {
                Bdd step = m.and_exists(frontier & enc.label_is(a), enc.transitions(1), cur1);
                step = m.and_exists(step, enc.transitions(2), cur2_label);
                const Bdd next = m.rename(step, enc.to_current()) & layers.exact(d - 1);
                if (!next.is_false()) {
                    expand(next, d - 1);
                }
            }
            path.pop_back();
        }
    };

    const Bdd init = initial_diff_states(enc, layers);
    for (std::size_t d = 0; d < layers.layers.size(); ++d) {
        const Bdd group = init & layers.exact(d);
        if (!group.is_false()) {
            expand(group, d);
        }
    }

    std::vector<SymbolicTrace> out;
    for (auto& [actions, ins] : merged) {
        Bdd product = m.bdd_true();
        for (const auto& b : enc.inputs()) {
            Bdd any = m.bdd_false();
            for (std::int64_t v : m.project_values(ins, b)) {
                any |= m.equals(b, v);
            }
            product &= any;
        }
        out.push_back({actions, ins, product == ins});
    }
    return out;
}

// ---- concretization and rendering --------------------------------------------

DiffTrace concretize(const ProductEncoding& enc, const DiffLayers& layers, const SymbolicTrace& st) {
    const Activity& ad1 = enc.ad1();
    const Activity& ad2 = enc.ad2();
    auto mismatch = [&](const std::string& why) {
        return Error(ErrorKind::ReplayMismatch, join(st.actions, ","),
                     "replay of [" + join(st.actions, ", ") + "] failed: " + why);
    };
    if (st.actions.empty() || st.init_inputs.is_false()) {
        throw mismatch("empty symbolic trace");
    }

    DiffTrace out;
    const auto values = enc.manager().pick_one(st.init_inputs, enc.inputs());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.inputs[enc.inputs()[i].name] = values[i];
    }
    out.actions = st.actions;
    out.constraint = render_inputs(enc, st);

    Configuration c1 = ad1.initial_config(restrict_to(ad1, out.inputs));
    std::vector<Configuration> s2{ad2.initial_config(restrict_to(ad2, out.inputs))};
    out.configs.push_back(c1);

    const std::size_t n = st.actions.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::string& a = st.actions[i];
        std::set<Configuration> next2;
        for (const auto& c : s2) {
            for (auto& s : successors(ad2, c, a)) {
                next2.insert(std::move(s));
            }
        }
        if (next2.empty()) {
            throw mismatch(ad2.name() + " cannot match " + a);
        }
        const Bdd& target = layers.exact(n - 2 - i);
        const std::span<const std::string> rest(st.actions.data() + i + 1, n - i - 1);
        std::optional<Configuration> chosen;
        auto cands = successors(ad1, c1, a);
        for (const auto& cand : cands) {
            const bool on_layer = std::all_of(next2.begin(), next2.end(), [&](const Configuration& c) {
                return enc.contains(target, cand, c);
            });
            if (on_layer && is_trace(ad1, cand, rest)) {
                chosen = cand;
                break;
            }
        }
        if (!chosen) {
            throw mismatch(ad1.name() + " has no successor on a shortest divergence after " + a);
        }
        c1 = *chosen;
        s2.assign(next2.begin(), next2.end());
        out.configs.push_back(c1);
    }
    const auto last = successors(ad1, c1, st.actions.back());
    if (last.empty()) {
        throw mismatch(ad1.name() + " cannot perform " + st.actions.back());
    }
    out.configs.push_back(last.front());

    const Configuration start2 = ad2.initial_config(restrict_to(ad2, out.inputs));
    const std::span<const std::string> all(st.actions);
    if (!is_trace(ad1, out.configs.front(), all) || !is_trace(ad2, start2, all.first(n - 1)) ||
        is_trace(ad2, start2, all)) {
        throw mismatch("not a diff trace");
    }
    return out;
}

std::string render_inputs(const ProductEncoding& enc, const SymbolicTrace& st) {
    if (enc.inputs().empty()) {
        return "(no inputs)";
    }
    std::vector<std::string> parts;
    for (const auto& b : enc.inputs()) {
        const auto values = enc.manager().project_values(st.init_inputs, b);
        std::vector<std::string> ranges;
        for (std::size_t i = 0; i < values.size();) {
            std::size_t j = i;
            while (j + 1 < values.size() && values[j + 1] == values[j] + 1) {
                ++j;
            }
            ranges.push_back("[" + std::to_string(values[i]) + ".." + std::to_string(values[j]) + "]");
            i = j + 1;
        }
        parts.push_back(b.name + " ∈ " + (ranges.empty() ? std::string("∅") : join(ranges, " ∪ ")));
    }
    return join(parts, "; ") + (st.exact_product ? "" : " (projection)");
}

std::string render_trace(const DiffTrace& trace) {
    std::vector<std::string> ins;
    for (const auto& [name, v] : trace.inputs) {
        ins.push_back(name + " = " + std::to_string(v));
    }
    return (ins.empty() ? std::string("(no inputs)") : join(ins, "; ")) + ": " + join(trace.actions, ", ");
}

namespace {

SummaryReport summarize_by(const ProductEncoding& enc, const DiffLayers& layers,
                           const std::vector<SymbolicTrace>& traces, PartitionKind kind) {
    auto key = [kind](const SymbolicTrace& t) {
        return kind == PartitionKind::ActionSet ? PartitionKey::action_set(t.actions)
                                                : PartitionKey::action_list(t.actions);
    };
    const Summary<SymbolicTrace> s = summarize<SymbolicTrace>(traces, key);
    return to_report<SymbolicTrace>(
        s, {enc.ad1().name(), enc.ad2().name()}, kind,
        [&](const SymbolicTrace& t) { return render_trace(concretize(enc, layers, t)); },
        [&](const SymbolicTrace& t) { return render_inputs(enc, t); });
}

} // namespace

SummaryReport summarize_action_list(const ProductEncoding& enc, const DiffLayers& layers,
                                    const std::vector<SymbolicTrace>& traces) {
    return summarize_by(enc, layers, traces, PartitionKind::ActionList);
}

SummaryReport summarize_action_set(const ProductEncoding& enc, const DiffLayers& layers,
                                   const std::vector<SymbolicTrace>& traces) {
    return summarize_by(enc, layers, traces, PartitionKind::ActionSet);
}

SummaryReport AdDiff::report(PartitionKind partition) const {
    SummaryReport r = partition == PartitionKind::ActionSet ? summarize_action_set(encoding, layers, traces)
                                                            : summarize_action_list(encoding, layers, traces);
    if (simulation_semantics) {
        r.notes.push_back(encoding.ad2().name() + " is not observably deterministic; results use simulation semantics");
    }
    return r;
}

AdDiff addiff(const Activity& ad1, const Activity& ad2, const EncodeOptions& options) {
    ProductEncoding enc = encode_product(ad1, ad2, options);
    DiffLayers layers = backward_fixpoint(enc, non_correspondence(enc));
    std::vector<SymbolicTrace> traces = forward_split(enc, layers);
    const bool sim = !is_observably_deterministic(enc.ts2());
    return AdDiff{std::move(enc), std::move(layers), std::move(traces), sim};
}

} // namespace semdiff::ad
