#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "semdiff/cd_diff.hpp"
#include "semdiff/error.hpp"
#include "semdiff/oracle.hpp"
#include "support.hpp"

using namespace semdiff;
using namespace semdiff::cd;

namespace {

using ClassSet = std::vector<std::string>;

std::set<ClassSet> summary_keys(const ClassSetSummary& s) {
    std::set<ClassSet> out;
    for (const auto& [key, _] : s.summary.entries) {
        out.insert(key.items());
    }
    return out;
}

std::set<ClassSet> oracle_keys(const oracle::CdOracleReport& r) {
    std::set<ClassSet> out;
    for (const auto& [key, _] : r.by_class_set) {
        out.insert(key);
    }
    return out;
}

bool is_witness(const ObjectModel& om, const CheckedClassDiagram& cd1, const CheckedClassDiagram& cd2) {
    return is_instance(om, cd1).ok && !is_instance(om, cd2).ok;
}

// Small random diagrams over three classes and two associations.
std::string random_cd(std::mt19937& rng, const std::string& name) {
    static const char* const mults[] = {"0..1", "1", "*", "1..*", "0..2", "2"};
    const char* const classes[] = {"A", "B", "C"};
    std::string text = "classdiagram " + name + " {\n";
    text += rng() % 3 == 0 ? "  class A abstract;\n" : "  class A;\n";
    text += rng() % 2 ? "  class B extends A;\n" : "  class B;\n";
    text += "  class C;\n";
    for (int i = 0; i < 2; ++i) {
        if (rng() % 4 == 0) {
            continue;
        }
        text += "  association r" + std::to_string(i) + " [" + mults[rng() % 6] + "] " + classes[rng() % 3] + " -- " +
                classes[rng() % 3] + " [" + mults[rng() % 6] + "];\n";
    }
    return text + "}\n";
}

} // namespace

TEST_CASE("smallest witness of cd_v2 against cd_v1") {
    const auto v1 = fixtures::cd("cd_v1");
    const auto v2 = fixtures::cd("cd_v2");
    const auto w = find_witness(v2, v1, Scope{5});
    REQUIRE(w.has_value());
    REQUIRE(w->objects.size() == 1);
    CHECK(w->objects[0].cls == "Manager");
    REQUIRE(w->links.size() == 1);
    CHECK(w->links[0].assoc == "manages");
    CHECK(w->links[0].a == w->links[0].b);
    CHECK(is_witness(*w, v2, v1));

    BlockingConstraint block;
    block.forbidden_class_sets.insert({"Manager"});
    const auto w2 = find_witness(v2, v1, Scope{5}, block);
    REQUIRE(w2.has_value());
    CHECK(w2->objects.size() == 2);
    CHECK(classes_of(*w2) != ClassSet{"Manager"});
    CHECK(is_witness(*w2, v2, v1));
}

TEST_CASE("a diagram has no witness against itself") {
    for (const char* name : {"cd_v1", "cd_v2"}) {
        const auto cd = fixtures::cd(name);
        CHECK_FALSE(find_witness(cd, cd, Scope{6}).has_value());
        CHECK(cddiff_summary(cd, cd, Scope{4}).entries.empty());
    }
}

TEST_CASE("class-set summaries of the company diagrams") {
    const auto v1 = fixtures::cd("cd_v1");
    const auto v2 = fixtures::cd("cd_v2");
    const ClassSetSummary fwd = cddiff_summarize(v2, v1, Scope{6});
    CHECK(fwd.summary.entries.size() == 4);
    CHECK(fwd.solver_calls == 5);
    CHECK(fwd.summary.exhaustive);
    for (const auto& [key, om] : fwd.summary.entries) {
        CHECK(key.items() == classes_of(om));
        CHECK(is_witness(om, v2, v1));
    }
    const ClassSetSummary back = cddiff_summarize(v1, v2, Scope{6});
    CHECK(back.summary.entries.size() == 3);

    const SummaryReport report = cddiff_summary(v2, v1, Scope{6});
    CHECK(report.direction == std::pair<std::string, std::string>{"cd_v2", "cd_v1"});
    CHECK(report.partition == PartitionKind::ClassSet);
    CHECK(is_well_formed(report));
    CHECK(report.entries.size() == 4);
    // deterministic
    CHECK(cddiff_summary(v2, v1, Scope{6}) == report);
}

TEST_CASE("summaries match the oracle on the company diagrams") {
    const auto v1 = fixtures::cd("cd_v1");
    const auto v2 = fixtures::cd("cd_v2");
    for (std::size_t scope = 1; scope <= oracle::max_cd_scope; ++scope) {
        CAPTURE(scope);
        CHECK(summary_keys(cddiff_summarize(v2, v1, Scope{scope})) == oracle_keys(oracle::cd_enumerate_all(v2, v1, scope)));
        CHECK(summary_keys(cddiff_summarize(v1, v2, Scope{scope})) == oracle_keys(oracle::cd_enumerate_all(v1, v2, scope)));
    }
}

TEST_CASE("summaries match the oracle on random diagrams") {
    std::mt19937 rng(2024);
    int compared = 0;
    for (int round = 0; round < 60; ++round) {
        const std::string t1 = random_cd(rng, "x");
        const std::string t2 = random_cd(rng, "y");
        CAPTURE(t1);
        CAPTURE(t2);
        const auto c1 = fixtures::cd_text(t1);
        const auto c2 = fixtures::cd_text(t2);
        const std::size_t scope = 1 + rng() % 3;
        const ClassSetSummary s = cddiff_summarize(c1, c2, Scope{scope});
        CHECK(summary_keys(s) == oracle_keys(oracle::cd_enumerate_all(c1, c2, scope)));
        for (const auto& [key, om] : s.summary.entries) {
            CHECK(om.objects.size() <= scope);
            CHECK(is_witness(om, c1, c2));
        }
        ++compared;
    }
    CHECK(compared == 60);
}

TEST_CASE("minimality against the oracle") {
    const auto v1 = fixtures::cd("cd_v1");
    const auto v2 = fixtures::cd("cd_v2");
    const auto all = oracle::cd_enumerate_all(v2, v1, 4);
    REQUIRE_FALSE(all.witnesses.empty());
    std::size_t smallest = all.witnesses.front().objects.size();
    for (const auto& w : all.witnesses) {
        smallest = std::min(smallest, w.objects.size());
    }
    CHECK(find_witness(v2, v1, Scope{4})->objects.size() == smallest);
}

TEST_CASE("enumeration") {
    const auto v1 = fixtures::cd("cd_v1");
    const auto v2 = fixtures::cd("cd_v2");
    const auto ws = enumerate_witnesses(v2, v1, Scope{6}, 20);
    CHECK(ws.size() == 20);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        CHECK(is_witness(ws[i], v2, v1));
        if (i > 0) {
            CHECK(ws[i - 1].objects.size() <= ws[i].objects.size());
            CHECK_FALSE(ws[i - 1] == ws[i]);
        }
    }
    // at scope 1 every witness is distinct up to isomorphism
    const auto one = enumerate_witnesses(v2, v1, Scope{1}, 100);
    const auto ref = oracle::cd_enumerate_all(v2, v1, 1);
    CHECK(one.size() == ref.witnesses.size());
}

TEST_CASE("witness names") {
    const auto v1 = fixtures::cd("cd_v1");
    const auto v2 = fixtures::cd("cd_v2");
    const auto w = find_witness(v2, v1, Scope{3});
    REQUIRE(w.has_value());
    CHECK(w->name == "witness");
    CHECK(w->objects[0].id == "manager1");
}
