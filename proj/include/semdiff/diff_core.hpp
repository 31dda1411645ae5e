// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace semdiff {

enum class PartitionKind { ClassSet, ActionList, ActionSet };

std::string_view to_string(PartitionKind kind);
std::optional<PartitionKind> partition_kind_from_string(std::string_view text);

// Canonical name of an equivalence class. Class sets and action sets are kept
// sorted and duplicate-free, action lists keep their order; two witnesses of
// the same class therefore always produce identical payloads.
class PartitionKey {
  public:
    PartitionKey() = default;

    static PartitionKey class_set(std::vector<std::string> classes);
    static PartitionKey action_list(std::vector<std::string> actions);
    static PartitionKey action_set(std::vector<std::string> actions);

    PartitionKind kind() const noexcept { return kind_; }
    const std::vector<std::string>& items() const noexcept { return items_; }

    // Items joined by U+001F; the byte string entries are ordered by.
    std::string payload() const;

    // "{A, B}" for sets, "[a, b]" for lists.
    std::string to_string() const;

    friend bool operator==(const PartitionKey&, const PartitionKey&) = default;
    friend bool operator<(const PartitionKey& a, const PartitionKey& b) {
        if (a.kind_ != b.kind_) {
            return a.kind_ < b.kind_;
        }
        return a.payload() < b.payload();
    }

  private:
    PartitionKey(PartitionKind kind, std::vector<std::string> items) : kind_(kind), items_(std::move(items)) {}

    PartitionKind kind_ = PartitionKind::ClassSet;
    std::vector<std::string> items_;
};

// A summary over typed witnesses, before rendering.
template <class Witness>
struct Summary {
    std::vector<std::pair<PartitionKey, Witness>> entries; // sorted by key payload
    bool exhaustive = true;
    std::size_t consumed = 0; // witnesses drawn from the stream
};

// Keeps the first witness per key. `next` yields witnesses until it returns
// nullopt; `limit` caps how many are drawn (the summary is then not exhaustive
// unless the stream also ended).
template <class Witness, class Source, class KeyFn>
    requires std::invocable<Source&>
Summary<Witness> summarize(Source&& next, KeyFn&& key_of, std::optional<std::size_t> limit = std::nullopt) {
    std::map<std::string, std::pair<PartitionKey, Witness>> seen;
    Summary<Witness> out;
    while (true) {
        if (limit && out.consumed >= *limit) {
            // Peek to tell a natural end from a cut.
            out.exhaustive = !next().has_value();
            break;
        }
        std::optional<Witness> w = next();
        if (!w) {
            out.exhaustive = true;
            break;
        }
        ++out.consumed;
        PartitionKey key = key_of(*w);
        std::string payload = key.payload();
        if (!seen.contains(payload)) {
            seen.emplace(std::move(payload), std::make_pair(std::move(key), std::move(*w)));
        }
    }
    out.entries.reserve(seen.size());
    for (auto& [_, entry] : seen) {
        out.entries.push_back(std::move(entry));
    }
    return out;
}

// Convenience overload over a finished range.
template <class Witness, class KeyFn>
Summary<Witness> summarize(const std::vector<Witness>& witnesses, KeyFn&& key_of) {
    std::size_t i = 0;
    auto next = [&]() -> std::optional<Witness> {
        if (i == witnesses.size()) {
            return std::nullopt;
        }
        return witnesses[i++];
    };
    return summarize<Witness>(next, std::forward<KeyFn>(key_of));
}

struct SummaryEntry {
    PartitionKey key;
    std::string representative; // rendered witness
    std::string annotation;     // e.g. input constraint of an AD class

    friend bool operator==(const SummaryEntry&, const SummaryEntry&) = default;
};

// Rendered, engine-independent summary. Entry keys are pairwise distinct and
// entries are sorted by key payload.
struct SummaryReport {
    std::pair<std::string, std::string> direction; // (left, right): witnesses of left not in right
    PartitionKind partition = PartitionKind::ClassSet;
    std::vector<SummaryEntry> entries;
    bool exhaustive = true;
    std::vector<std::string> notes;

    friend bool operator==(const SummaryReport&, const SummaryReport&) = default;
};

template <class Witness>
SummaryReport to_report(const Summary<Witness>& summary, std::pair<std::string, std::string> direction,
                        PartitionKind partition, const std::function<std::string(const Witness&)>& render,
                        const std::function<std::string(const Witness&)>& annotate = {}) {
    SummaryReport report;
    report.direction = std::move(direction);
    report.partition = partition;
    report.exhaustive = summary.exhaustive;
    for (const auto& [key, w] : summary.entries) {
        report.entries.push_back({key, render(w), annotate ? annotate(w) : std::string{}});
    }
    return report;
}

// True when keys are pairwise distinct and sorted by payload.
bool is_well_formed(const SummaryReport& report);

} // namespace semdiff
