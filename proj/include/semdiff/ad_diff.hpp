// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "semdiff/ad.hpp"
#include "semdiff/bdd.hpp"
#include "semdiff/diff_core.hpp"

namespace semdiff::ad {

struct EncodeOptions {
    std::size_t bit_budget = 64;                   // encoded state bits per diagram
    std::size_t state_budget = default_state_budget; // explicit reachability
};

// Joint symbolic encoding of two activity diagrams. Variable order: shared
// inputs, action label, then the state bundles of both diagrams interleaved
// (tokens before locals, each current bit next to its next-state copy).
// Inputs never change, so they have no next-state copy and pair the two
// diagrams by name.
class ProductEncoding {
  public:
    bdd::Manager& manager() const { return *mgr_; }
    const Activity& ad1() const { return ad1_; }
    const Activity& ad2() const { return ad2_; }
    const TransitionSystem& ts1() const { return ts1_; }
    const TransitionSystem& ts2() const { return ts2_; }

    // Sorted union of both alphabets; index = label value.
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    // Sorted union of input names.
    const std::vector<bdd::VarBundle>& inputs() const { return inputs_; }
    const bdd::VarBundle& label() const { return label_; }
    const std::vector<bdd::VarBundle>& state(int side) const { return side == 1 ? cur1_ : cur2_; }
    const std::vector<bdd::VarBundle>& next_state(int side) const { return side == 1 ? next1_ : next2_; }

    // T_i(inputs, s_i, a, s_i'), compiled from the reachable explicit steps.
    const bdd::Bdd& transitions(int side) const { return side == 1 ? t1_ : t2_; }
    // En_i(inputs, s_i, a) = exists s_i' T_i.
    const bdd::Bdd& enabled(int side) const { return side == 1 ? en1_ : en2_; }
    const bdd::Bdd& initial(int side) const { return side == 1 ? i1_ : i2_; }

    bdd::Bdd label_is(const std::string& action) const;
    // The single joint state (c1, c2); inputs are taken from c1 and c2.
    bdd::Bdd encode_pair(const Configuration& c1, const Configuration& c2) const;
    // False when c1 and c2 disagree on a shared input.
    bool contains(const bdd::Bdd& set, const Configuration& c1, const Configuration& c2) const;

    // Renaming maps over the state bundles of both sides.
    const std::vector<std::pair<bdd::Var, bdd::Var>>& to_next() const { return to_next_; }
    const std::vector<std::pair<bdd::Var, bdd::Var>>& to_current() const { return to_current_; }
    std::vector<bdd::Var> state_vars(int side, bool next) const;

  private:
    friend ProductEncoding encode_product(const Activity&, const Activity&, const EncodeOptions&);
    ProductEncoding(const Activity& ad1, const Activity& ad2) : ad1_(ad1), ad2_(ad2) {}

    void set_state_bits(std::vector<bool>& bits, int side, const Configuration& c) const;
    bdd::Bdd state_cube(int side, const Configuration& c, bool next) const;
    bdd::Bdd inputs_cube(const Activity& ad, const Configuration& c) const;

    Activity ad1_;
    Activity ad2_;
    TransitionSystem ts1_;
    TransitionSystem ts2_;
    std::unique_ptr<bdd::Manager> mgr_;
    std::vector<std::string> alphabet_;
    std::vector<bdd::VarBundle> inputs_;
    bdd::VarBundle label_;
    std::vector<bdd::VarBundle> cur1_, next1_, cur2_, next2_;
    std::vector<std::pair<bdd::Var, bdd::Var>> to_next_, to_current_;
    bdd::Bdd t1_, t2_, en1_, en2_, i1_, i2_;
};

// Throws Error{BitBudgetExceeded | StateBudgetExceeded}.
ProductEncoding encode_product(const Activity& ad1, const Activity& ad2, const EncodeOptions& options = {});

// D0: joint states where ad1 enables an action ad2 does not.
bdd::Bdd non_correspondence(const ProductEncoding& enc);

// D0 ⊆ D1 ⊆ ... ⊆ Dm with Dm the least fixpoint. A joint state first enters
// layer k when ad1 can force a divergence after exactly k matched actions.
struct DiffLayers {
    std::vector<bdd::Bdd> layers;

    const bdd::Bdd& fixpoint() const { return layers.back(); }
    // D_k minus D_{k-1}.
    bdd::Bdd exact(std::size_t k) const;
};

DiffLayers backward_fixpoint(const ProductEncoding& enc, const bdd::Bdd& d0);

// Joint initial states (equal inputs) inside the fixpoint.
bdd::Bdd initial_diff_states(const ProductEncoding& enc, const DiffLayers& layers);

// All shortest diff traces sharing one action list, with the inputs they start from.
struct SymbolicTrace {
    std::vector<std::string> actions; // last one diverges
    bdd::Bdd init_inputs;             // over the input bundles only
    bool exact_product = true;        // init_inputs is the product of its projections
};

// Sorted by action list, one entry per list.
std::vector<SymbolicTrace> forward_split(const ProductEncoding& enc, const DiffLayers& layers);

struct DiffTrace {
    InputValuation inputs;
    std::vector<std::string> actions;
    std::vector<Configuration> configs; // ad1, before each action and after the last
    std::string constraint;             // rendered inputs of the trace's class
};

// Least input valuation, then the least ad1 successor at every step that stays
// on a shortest divergence. Throws Error{ReplayMismatch}.
DiffTrace concretize(const ProductEncoding& enc, const DiffLayers& layers, const SymbolicTrace& st);

// "tickets ∈ [0..7]", ranges joined by " ∪ ", variables by "; ", with a
// trailing " (projection)" when the inputs are correlated.
std::string render_inputs(const ProductEncoding& enc, const SymbolicTrace& st);
// "tickets = 0: register, welcome_msg".
std::string render_trace(const DiffTrace& trace);

SummaryReport summarize_action_list(const ProductEncoding& enc, const DiffLayers& layers,
                                    const std::vector<SymbolicTrace>& traces);
SummaryReport summarize_action_set(const ProductEncoding& enc, const DiffLayers& layers,
                                   const std::vector<SymbolicTrace>& traces);

// The whole pipeline for one direction.
struct AdDiff {
    ProductEncoding encoding;
    DiffLayers layers;
    std::vector<SymbolicTrace> traces;
    bool simulation_semantics = false; // ad2 is not observably deterministic

    SummaryReport report(PartitionKind partition) const;
};

AdDiff addiff(const Activity& ad1, const Activity& ad2, const EncodeOptions& options = {});

} // namespace semdiff::ad
