// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force references for the diff engines. Slow on purpose and kept
// apart from the engine code: they share only the model checkers.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semdiff/ad.hpp"
#include "semdiff/cd.hpp"

namespace semdiff::oracle {

inline constexpr std::size_t max_cd_scope = 4;

struct CdOracleReport {
    // One model per isomorphism class, by ascending size.
    std::vector<cd::ObjectModel> witnesses;
    // Sorted class set -> indices into witnesses.
    std::map<std::vector<std::string>, std::vector<std::size_t>> by_class_set;
};

// Every object model over cd1's concrete classes with at most `scope`
// objects that is an instance of cd1 and not of cd2.
// Throws Error{ScopeTooLarge} above max_cd_scope.
CdOracleReport cd_enumerate_all(const cd::CheckedClassDiagram& cd1, const cd::CheckedClassDiagram& cd2,
                                std::size_t scope);

struct AdOracleRow {
    ad::InputValuation inputs;
    std::optional<std::size_t> shortest;        // length of the shortest diff traces
    std::set<std::vector<std::string>> traces;  // all diff traces of that length
};

struct AdOracleReport {
    std::vector<AdOracleRow> rows; // one per joint initial valuation
    std::map<std::vector<std::string>, std::set<ad::InputValuation>> by_action_list;
    std::map<std::vector<std::string>, std::set<ad::InputValuation>> by_action_set; // keys sorted
};

// Per joint input valuation, breadth-first search over (ad1 configuration,
// set of ad2 configurations reached by the same actions).
// Throws Error{StateBudgetExceeded}.
AdOracleReport ad_diff_bfs(const ad::Activity& ad1, const ad::Activity& ad2,
                           std::size_t state_budget = ad::default_state_budget);

} // namespace semdiff::oracle
