#include <set>

#include "doctest.h"
#include "semdiff/error.hpp"
#include "semdiff/oracle.hpp"
#include "support.hpp"

using namespace semdiff;

namespace {

using Names = std::vector<std::string>;

std::set<Names> keys(const oracle::CdOracleReport& r) {
    std::set<Names> out;
    for (const auto& [k, _] : r.by_class_set) out.insert(k);
    return out;
}

} // namespace

TEST_CASE("class diagram scope is capped") {
    const auto v1 = fixtures::cd("cd_v1");
    try {
        oracle::cd_enumerate_all(v1, v1, oracle::max_cd_scope + 1);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ScopeTooLarge);
    }
}

TEST_CASE("class sets of the company diagrams") {
    const auto v1 = fixtures::cd("cd_v1");
    const auto v2 = fixtures::cd("cd_v2");
    const auto fwd = oracle::cd_enumerate_all(v2, v1, 3);
    CHECK(keys(fwd) == std::set<Names>{{"Manager"}, {"Employee", "Manager"}, {"Manager", "Task"},
                                       {"Employee", "Manager", "Task"}});
    for (const auto& w : fwd.witnesses) {
        CHECK(cd::is_instance(w, v2).ok);
        CHECK_FALSE(cd::is_instance(w, v1).ok);
        CHECK(w.objects.size() <= 3);
    }
    for (std::size_t i = 1; i < fwd.witnesses.size(); ++i) {
        CHECK(fwd.witnesses[i - 1].objects.size() <= fwd.witnesses[i].objects.size());
    }
    CHECK(keys(oracle::cd_enumerate_all(v1, v2, 3)).size() == 3);
    CHECK(oracle::cd_enumerate_all(v1, v1, 3).witnesses.empty());
    CHECK(oracle::cd_enumerate_all(v2, v2, 3).witnesses.empty());
}

TEST_CASE("witnesses are counted up to isomorphism") {
    const auto top = fixtures::cd_text("classdiagram t { class A; }");
    const auto none = fixtures::cd_text("classdiagram n { class B; }");
    // A, AA, AAA, AAAA
    const auto r = oracle::cd_enumerate_all(top, none, 4);
    CHECK(r.witnesses.size() == 4);
    CHECK(r.witnesses[0].objects[0].id == "A_0");
}

TEST_CASE("activity diagram oracle") {
    const auto v1 = fixtures::ad("ad_v1");
    const auto v2 = fixtures::ad("ad_v2");
    const auto v3 = fixtures::ad("ad_v3");

    const auto same = oracle::ad_diff_bfs(v2, v2);
    CHECK(same.by_action_list.empty());
    CHECK(same.rows.size() == 16);

    const auto r32 = oracle::ad_diff_bfs(v3, v2);
    CHECK(r32.by_action_list.size() == 6);
    CHECK(r32.by_action_set.size() == 1);
    for (const auto& row : r32.rows) {
        const auto t = row.inputs.at("tickets");
        CHECK(row.shortest.has_value() == (t < 12));
        if (row.shortest) {
            CHECK(*row.shortest == 6);
            CHECK(row.traces.size() == 6);
        }
    }

    const auto r21 = oracle::ad_diff_bfs(v2, v1);
    REQUIRE(r21.by_action_list.size() == 2);
    CHECK(r21.by_action_list.at({"register", "welcome_msg"}).size() == 4);
    CHECK(r21.by_action_list.at({"register", "welcome_msg", "accounts"}).size() == 8);

    try {
        oracle::ad_diff_bfs(v3, v2, 3);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StateBudgetExceeded);
    }
}

TEST_CASE("fork interleavings") {
    const auto f3 = fixtures::ad_text(R"(activitydiagram f { initial s; fork k; action a; action b; action c;
        join j; action x; final e; edge s -> k; edge k -> a; edge k -> b; edge k -> c;
        edge a -> j; edge b -> j; edge c -> j; edge j -> x; edge x -> e; })");
    const auto f3y = fixtures::ad_text(R"(activitydiagram g { initial s; fork k; action a; action b; action c;
        join j; action y; final e; edge s -> k; edge k -> a; edge k -> b; edge k -> c;
        edge a -> j; edge b -> j; edge c -> j; edge j -> y; edge y -> e; })");
    const auto r = oracle::ad_diff_bfs(f3, f3y);
    CHECK(r.by_action_list.size() == 6);
    REQUIRE(r.by_action_set.size() == 1);
    CHECK(r.by_action_set.begin()->first == Names{"a", "b", "c", "x"});
}
