#include <algorithm>
#include <optional>
#include <set>
#include <random>

#include "doctest.h"
#include "semdiff/diff_core.hpp"
#include "semdiff/error.hpp"

using namespace semdiff;

namespace {

// Integers keyed by residue; a stand-in for witnesses.
PartitionKey residue(int w, int mod) { return PartitionKey::class_set({"r" + std::to_string(w % mod)}); }

} // namespace

TEST_CASE("partition keys are canonical") {
    CHECK(PartitionKey::class_set({"Task", "Manager", "Task"}).items() == std::vector<std::string>{"Manager", "Task"});
    CHECK(PartitionKey::action_set({"b", "a", "b"}) == PartitionKey::action_set({"a", "b"}));
    CHECK(PartitionKey::action_list({"b", "a", "b"}).items() == std::vector<std::string>{"b", "a", "b"});
    CHECK(PartitionKey::action_list({"a", "b"}) != PartitionKey::action_list({"b", "a"}));
    CHECK(PartitionKey::class_set({"Manager", "Employee"}).to_string() == "{Employee, Manager}");
    CHECK(PartitionKey::action_list({"register", "report"}).to_string() == "[register, report]");
    CHECK(PartitionKey::class_set({}).to_string() == "{}");
}

TEST_CASE("partition kind names") {
    for (auto k : {PartitionKind::ClassSet, PartitionKind::ActionList, PartitionKind::ActionSet}) {
        CHECK(partition_kind_from_string(to_string(k)) == k);
    }
    CHECK(to_string(PartitionKind::ActionSet) == "action-set");
    CHECK_FALSE(partition_kind_from_string("classes").has_value());
}

TEST_CASE("summarize: empty stream") {
    auto s = summarize<int>(std::vector<int>{}, [](int w) { return residue(w, 2); });
    CHECK(s.entries.empty());
    CHECK(s.exhaustive);
}

TEST_CASE("summarize: 20 witnesses over 4 classes give 4 entries") {
    std::vector<int> ws;
    for (int i = 0; i < 20; ++i) {
        ws.push_back(i);
    }
    auto s = summarize<int>(ws, [](int w) { return residue(w, 4); });
    REQUIRE(s.entries.size() == 4);
    CHECK(s.exhaustive);
    CHECK(s.consumed == 20);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s.entries[i].second == static_cast<int>(i)); // first per class
    }
}

TEST_CASE("summarize: constant key keeps the first witness") {
    auto s = summarize<int>(std::vector<int>{7, 3, 9}, [](int) { return PartitionKey::class_set({"A"}); });
    REQUIRE(s.entries.size() == 1);
    CHECK(s.entries[0].second == 7);
}

TEST_CASE("summarize: limit marks the summary as cut off") {
    int next = 0;
    auto endless = [&]() -> std::optional<int> { return next++; };
    auto s = summarize<int>(endless, [](int w) { return residue(w, 3); }, 5);
    CHECK_FALSE(s.exhaustive);
    CHECK(s.consumed == 5);
    CHECK(s.entries.size() == 3);

    int n = 0;
    auto three = [&]() -> std::optional<int> { return n < 3 ? std::optional<int>(n++) : std::nullopt; };
    auto t = summarize<int>(three, [](int w) { return residue(w, 3); }, 3);
    CHECK(t.exhaustive); // stream ended exactly at the limit
}

TEST_CASE("summarize properties on random streams") {
    std::mt19937 rng(7);
    for (int round = 0; round < 200; ++round) {
        std::vector<int> ws(rng() % 30);
        for (auto& w : ws) {
            w = static_cast<int>(rng() % 50);
        }
        const int mod = 1 + static_cast<int>(rng() % 6);
        auto key = [mod](int w) { return residue(w, mod); };
        auto s = summarize<int>(ws, key);
        std::set<std::string> expected;
        for (int w : ws) {
            expected.insert(key(w).payload());
        }
        std::set<std::string> got;
        for (const auto& [k, w] : s.entries) {
            got.insert(k.payload());
            CHECK(key(w) == k);
        }
        CHECK(got == expected);
        CHECK(s.entries.size() <= ws.size());
        CHECK(std::is_sorted(s.entries.begin(), s.entries.end(),
                             [](const auto& a, const auto& b) { return a.first.payload() < b.first.payload(); }));

        // Idempotent on the representatives.
        std::vector<int> reps;
        for (const auto& e : s.entries) {
            reps.push_back(e.second);
        }
        auto again = summarize<int>(reps, key);
        CHECK(again.entries == s.entries);

        auto report = to_report<int>(s, {"a", "b"}, PartitionKind::ClassSet, [](int w) { return std::to_string(w); });
        CHECK(is_well_formed(report));
    }
}

TEST_CASE("is_well_formed rejects duplicate or unsorted keys") {
    SummaryReport r;
    r.entries.push_back({PartitionKey::class_set({"B"}), "", ""});
    r.entries.push_back({PartitionKey::class_set({"A"}), "", ""});
    CHECK_FALSE(is_well_formed(r));
    r.entries[1].key = PartitionKey::class_set({"B"});
    CHECK_FALSE(is_well_formed(r));
    r.entries[1].key = PartitionKey::class_set({"C"});
    CHECK(is_well_formed(r));
}

TEST_CASE("error messages carry the kind") {
    Error e(ErrorKind::InheritanceCycle, "A", "A extends itself");
    CHECK(std::string(e.what()) == "InheritanceCycle: A extends itself");
    CHECK(e.element() == "A");
}
