// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semdiff/cd.hpp"
#include "semdiff/diff_core.hpp"

namespace semdiff::cd {

// Bound on the number of objects in a witness.
struct Scope {
    std::size_t max_objects = 10;
};

inline constexpr std::size_t default_scope = 10;

// Class sets already covered by a representative.
struct BlockingConstraint {
    std::set<std::vector<std::string>> forbidden_class_sets; // each sorted

    bool blocks(const std::vector<std::string>& class_set) const {
        return forbidden_class_sets.contains(class_set);
    }
};

// An object model that is an instance of `cd1` but not of `cd2`, has at most
// scope.max_objects objects, and whose class set is not blocked. Candidates
// are visited by ascending object count, so the result has minimal size among
// unblocked witnesses. nullopt iff no such model exists within scope.
std::optional<ObjectModel> find_witness(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2, Scope scope,
                                        const BlockingConstraint& blocking = {});

struct ClassSetSummary {
    Summary<ObjectModel> summary;
    std::size_t solver_calls = 0; // find_witness runs, the last one finding nothing
};

// Generalize-and-block loop: find a witness, block its class set, repeat
// until the search comes back empty. One representative per class set
// realizable within scope.
ClassSetSummary cddiff_summarize(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2, Scope scope);

SummaryReport cddiff_summary(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2, Scope scope);

// Up to `limit` distinct witnesses by ascending size. Relabelings of objects
// within a class are suppressed by a lex-leader check on adjacent swaps.
std::vector<ObjectModel> enumerate_witnesses(const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2,
                                             Scope scope, std::size_t limit);

} // namespace semdiff::cd
