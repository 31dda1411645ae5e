#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "semdiff/ad_diff.hpp"
#include "semdiff/error.hpp"
#include "semdiff/oracle.hpp"
#include "support.hpp"

using namespace semdiff;
using namespace semdiff::ad;

namespace {

using Actions = std::vector<std::string>;
using bdd::Bdd;

const char* const chain_abcx = R"(activitydiagram p { initial s; action a; action b; action c; action x; final f;
    edge s -> a; edge a -> b; edge b -> c; edge c -> x; edge x -> f; })";
const char* const chain_abcy = R"(activitydiagram q { initial s; action a; action b; action c; action y; final f;
    edge s -> a; edge a -> b; edge b -> c; edge c -> y; edge y -> f; })";

// Sequences of plain actions, input decisions and two-way forks over a
// three-letter alphabet; single input t.
std::string random_ad(std::mt19937& rng, const std::string& name) {
    const char letters[] = {'a', 'b', 'c'};
    std::string nodes = "  input t : 0..3;\n  local v : 0..1 = 0;\n  initial s;\n  final f;\n";
    std::string edges;
    std::string prev = "s";
    int n = 0;
    auto action = [&]() {
        const std::string id = "n" + std::to_string(n++);
        nodes += "  action " + id + " as " + letters[rng() % 3];
        if (rng() % 4 == 0) {
            nodes += " { v := 1; }";
        }
        nodes += ";\n";
        return id;
    };
    const int blocks = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < blocks; ++i) {
        switch (rng() % 3) {
        case 0: {
            const std::string a = action();
            edges += "  edge " + prev + " -> " + a + ";\n";
            prev = a;
            break;
        }
        case 1: {
            const std::string d = "d" + std::to_string(i), m = "m" + std::to_string(i);
            nodes += "  decision " + d + ";\n  merge " + m + ";\n";
            const std::string a = action(), b = action();
            const bool on_v = rng() % 3 == 0;
            const std::string k = std::to_string(on_v ? 1 : 1 + rng() % 3);
            const std::string var = on_v ? "v" : "t";
            edges += "  edge " + prev + " -> " + d + ";\n";
            edges += "  edge " + d + " -> " + a + " [" + var + " < " + k + "];\n";
            edges += "  edge " + d + " -> " + b + " [" + var + " >= " + k + "];\n";
            edges += "  edge " + a + " -> " + m + ";\n  edge " + b + " -> " + m + ";\n";
            prev = m;
            break;
        }
        default: {
            const std::string fk = "k" + std::to_string(i), j = "j" + std::to_string(i);
            nodes += "  fork " + fk + ";\n  join " + j + ";\n";
            const std::string a = action(), b = action();
            edges += "  edge " + prev + " -> " + fk + ";\n";
            edges += "  edge " + fk + " -> " + a + ";\n  edge " + fk + " -> " + b + ";\n";
            edges += "  edge " + a + " -> " + j + ";\n  edge " + b + " -> " + j + ";\n";
            prev = j;
            break;
        }
        }
    }
    edges += "  edge " + prev + " -> f;\n";
    return "activitydiagram " + name + " {\n" + nodes + edges + "}\n";
}

std::set<std::int64_t> tickets_of(const std::set<InputValuation>& vs, const std::string& var) {
    std::set<std::int64_t> out;
    for (const auto& v : vs) {
        out.insert(v.at(var));
    }
    return out;
}

// Engine and oracle agree on action lists and their input sets (single input t).
void check_against_oracle(const Activity& ad1, const Activity& ad2, const std::string& var) {
    const AdDiff diff = addiff(ad1, ad2);
    const oracle::AdOracleReport ref = oracle::ad_diff_bfs(ad1, ad2);
    REQUIRE(diff.traces.size() == ref.by_action_list.size());
    std::size_t i = 0;
    for (const auto& [actions, inputs] : ref.by_action_list) {
        const SymbolicTrace& st = diff.traces[i++];
        CHECK(st.actions == actions);
        const auto& bundle = diff.encoding.inputs().front();
        const auto got = diff.encoding.manager().project_values(st.init_inputs, bundle);
        CHECK(std::set<std::int64_t>(got.begin(), got.end()) == tickets_of(inputs, var));
    }
    std::set<Actions> set_keys;
    for (const auto& e : diff.report(PartitionKind::ActionSet).entries) {
        set_keys.insert(e.key.items());
    }
    std::set<Actions> ref_sets;
    for (const auto& [k, _] : ref.by_action_set) {
        ref_sets.insert(k);
    }
    CHECK(set_keys == ref_sets);
}

// Replays a concrete trace: a trace of ad1 whose last action is refused by ad2
// after the same prefix, with no shorter divergence.
void check_sound(const AdDiff& diff, const DiffTrace& t) {
    const Activity& ad1 = diff.encoding.ad1();
    const Activity& ad2 = diff.encoding.ad2();
    REQUIRE_FALSE(t.actions.empty());
    const Configuration c1 = ad1.initial_config(t.inputs);
    const Configuration c2 = ad2.initial_config(t.inputs);
    CHECK(is_trace(ad1, c1, t.actions));
    const std::span<const std::string> prefix(t.actions.data(), t.actions.size() - 1);
    CHECK(is_trace(ad2, c2, prefix));
    CHECK_FALSE(is_trace(ad2, c2, t.actions));
}

} // namespace

TEST_CASE("encoding layout") {
    const Activity v2 = fixtures::ad("ad_v2");
    const Activity v3 = fixtures::ad("ad_v3");
    const ProductEncoding enc = encode_product(v3, v2);
    CHECK(enc.inputs().size() == 1);
    CHECK(enc.inputs()[0].name == "tickets");
    CHECK(enc.alphabet() == Actions{"accounts", "confirm", "register", "report", "reserve", "update", "welcome_msg"});
    CHECK(enc.ts1().states.size() == build_explicit_ts(v3).states.size());
    CHECK(enc.manager().audit().empty());

    // the initial pair for tickets = 4 is encoded and enabled on both sides
    const Configuration c1 = v3.initial_config({{"tickets", 4}});
    const Configuration c2 = v2.initial_config({{"tickets", 4}});
    CHECK(enc.contains(enc.initial(1), c1, c2));
    CHECK(enc.contains(enc.initial(2), c1, c2));
    const Configuration other = v2.initial_config({{"tickets", 5}});
    CHECK_FALSE(enc.contains(enc.initial(1) & enc.initial(2), c1, other));
    CHECK_FALSE((enc.enabled(1) & enc.encode_pair(c1, c2) & enc.label_is("register")).is_false());
    CHECK((enc.enabled(1) & enc.encode_pair(c1, c2) & enc.label_is("report")).is_false());
}

TEST_CASE("bit budget") {
    try {
        encode_product(fixtures::ad("ad_v3"), fixtures::ad("ad_v2"), EncodeOptions{4});
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BitBudgetExceeded);
    }
    try {
        encode_product(fixtures::ad("ad_v3"), fixtures::ad("ad_v2"), EncodeOptions{64, 5});
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StateBudgetExceeded);
    }
}

TEST_CASE("disjoint alphabets diverge at once") {
    const Activity p = fixtures::ad_text(chain_abcx);
    const Activity q = fixtures::ad_text(R"(activitydiagram q { initial s; action z; final f; edge s -> z; edge z -> f; })");
    const AdDiff diff = addiff(p, q);
    REQUIRE(diff.traces.size() == 1);
    CHECK(diff.traces[0].actions == Actions{"a"});
    CHECK(diff.layers.layers.size() >= 1);
}

TEST_CASE("layers of a three step chain") {
    const Activity p = fixtures::ad_text(chain_abcx);
    const Activity q = fixtures::ad_text(chain_abcy);
    const ProductEncoding enc = encode_product(p, q);
    const DiffLayers layers = backward_fixpoint(enc, non_correspondence(enc));
    const Configuration c1 = initial_configs(p)[0];
    const Configuration c2 = initial_configs(q)[0];
    CHECK_FALSE(enc.contains(layers.layers[0], c1, c2));
    CHECK(enc.contains(layers.exact(3), c1, c2));
    CHECK_FALSE(enc.contains(layers.exact(2), c1, c2));
    for (std::size_t k = 1; k < layers.layers.size(); ++k) {
        CHECK((layers.layers[k - 1] - layers.layers[k]).is_false());
    }
    const auto traces = forward_split(enc, layers);
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].actions == Actions{"a", "b", "c", "x"});
}

TEST_CASE("initial diff states of v3 against v2") {
    const AdDiff diff = addiff(fixtures::ad("ad_v3"), fixtures::ad("ad_v2"));
    const Bdd init = initial_diff_states(diff.encoding, diff.layers);
    const auto values = diff.encoding.manager().project_values(init, diff.encoding.inputs()[0]);
    CHECK(values == std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(diff.traces.size() == 6);
    CHECK_FALSE(diff.simulation_semantics);
}

TEST_CASE("action list and action set summaries") {
    const AdDiff d32 = addiff(fixtures::ad("ad_v3"), fixtures::ad("ad_v2"));
    const SummaryReport ql = d32.report(PartitionKind::ActionList);
    const SummaryReport qs = d32.report(PartitionKind::ActionSet);
    CHECK(ql.entries.size() == 6);
    CHECK(qs.entries.size() == 1);
    CHECK(is_well_formed(ql));
    CHECK(is_well_formed(qs));
    CHECK(qs.entries[0].key.items() == Actions{"accounts", "register", "report", "reserve", "update", "welcome_msg"});
    CHECK(qs.entries[0].annotation == "tickets ∈ [0..11]");
    CHECK(qs.entries[0].representative == "tickets = 0: register, welcome_msg, accounts, reserve, update, report");

    const AdDiff d21 = addiff(fixtures::ad("ad_v2"), fixtures::ad("ad_v1"));
    const SummaryReport l21 = d21.report(PartitionKind::ActionList);
    REQUIRE(l21.entries.size() == 2);
    CHECK(l21.entries[0].key.items() == Actions{"register", "welcome_msg"});
    CHECK(l21.entries[0].annotation == "tickets ∈ [8..11]");
    CHECK(l21.entries[1].key.items() == Actions{"register", "welcome_msg", "accounts"});
    CHECK(l21.entries[1].annotation == "tickets ∈ [0..7]");
    CHECK(d21.report(PartitionKind::ActionSet).entries.size() == 2);

    const AdDiff d12 = addiff(fixtures::ad("ad_v1"), fixtures::ad("ad_v2"));
    const SummaryReport l12 = d12.report(PartitionKind::ActionList);
    REQUIRE(l12.entries.size() == 1);
    CHECK(l12.entries[0].representative == "tickets = 8: register, report");
}

TEST_CASE("concretized traces are sound, shortest and least") {
    for (const auto& [l, r] : std::vector<std::pair<const char*, const char*>>{
             {"ad_v1", "ad_v2"}, {"ad_v2", "ad_v1"}, {"ad_v1", "ad_v3"},
             {"ad_v3", "ad_v1"}, {"ad_v2", "ad_v3"}, {"ad_v3", "ad_v2"}}) {
        CAPTURE(l);
        CAPTURE(r);
        const AdDiff diff = addiff(fixtures::ad(l), fixtures::ad(r));
        const auto ref = oracle::ad_diff_bfs(diff.encoding.ad1(), diff.encoding.ad2());
        for (const SymbolicTrace& st : diff.traces) {
            const DiffTrace t = concretize(diff.encoding, diff.layers, st);
            CHECK(t.actions == st.actions);
            CHECK(t.configs.size() == t.actions.size() + 1);
            check_sound(diff, t);
            // shortest for its inputs, and the least inputs of the class
            for (const auto& row : ref.rows) {
                if (row.inputs == t.inputs) {
                    REQUIRE(row.shortest.has_value());
                    CHECK(*row.shortest == t.actions.size());
                }
            }
            const auto vals = diff.encoding.manager().project_values(st.init_inputs, diff.encoding.inputs()[0]);
            CHECK(t.inputs.at("tickets") == vals.front());
        }
    }
}

TEST_CASE("fixture pairs agree with the oracle") {
    for (const char* l : {"ad_v1", "ad_v2", "ad_v3"}) {
        for (const char* r : {"ad_v1", "ad_v2", "ad_v3"}) {
            CAPTURE(l);
            CAPTURE(r);
            check_against_oracle(fixtures::ad(l), fixtures::ad(r), "tickets");
        }
    }
}

TEST_CASE("random diagrams agree with the oracle") {
    std::mt19937 rng(99);
    int compared = 0;
    for (int round = 0; round < 150; ++round) {
        const std::string t1 = random_ad(rng, "x");
        const std::string t2 = random_ad(rng, "y");
        CAPTURE(t1);
        CAPTURE(t2);
        const Activity a1 = fixtures::ad_text(t1);
        const Activity a2 = fixtures::ad_text(t2);
        const AdDiff diff = addiff(a1, a2);
        for (const SymbolicTrace& st : diff.traces) {
            check_sound(diff, concretize(diff.encoding, diff.layers, st));
        }
        if (is_observably_deterministic(a2)) {
            check_against_oracle(a1, a2, "t");
            ++compared;
        }
    }
    CHECK(compared > 50);
}

TEST_CASE("a diagram does not differ from itself") {
    for (const char* name : {"ad_v1", "ad_v2", "ad_v3"}) {
        const Activity ad = fixtures::ad(name);
        const AdDiff diff = addiff(ad, ad);
        CHECK(diff.traces.empty());
        CHECK(initial_diff_states(diff.encoding, diff.layers).is_false());
        CHECK(diff.report(PartitionKind::ActionList).entries.empty());
    }
}

TEST_CASE("rendering input sets") {
    const Activity corr = fixtures::ad_text(R"(activitydiagram c { input a : 0..1; input b : 0..1;
        initial s; decision d; action x1 as x; action y1 as y; final f; final g;
        edge s -> d; edge d -> x1 [a == b]; edge d -> y1 [a != b]; edge x1 -> f; edge y1 -> g; })");
    const Activity flat = fixtures::ad_text(R"(activitydiagram n { initial s; action y; final f;
        edge s -> y; edge y -> f; })");
    const AdDiff diff = addiff(corr, flat);
    REQUIRE(diff.traces.size() == 1);
    CHECK(diff.traces[0].actions == Actions{"x"});
    CHECK_FALSE(diff.traces[0].exact_product);
    CHECK(render_inputs(diff.encoding, diff.traces[0]) == "a ∈ [0..1]; b ∈ [0..1] (projection)");
    const DiffTrace t = concretize(diff.encoding, diff.layers, diff.traces[0]);
    CHECK(t.inputs == InputValuation{{"a", 0}, {"b", 0}});
    CHECK(render_trace(t) == "a = 0; b = 0: x");

    const AdDiff none = addiff(flat, fixtures::ad_text(R"(activitydiagram m { initial s; action z; final f;
        edge s -> z; edge z -> f; })"));
    REQUIRE(none.traces.size() == 1);
    CHECK(render_inputs(none.encoding, none.traces[0]) == "(no inputs)");

    const AdDiff gaps = addiff(fixtures::ad_text(R"(activitydiagram g { input t : 0..9;
        initial s; decision d; action x1 as x; action y1 as y; final f; final h;
        edge s -> d; edge d -> x1 [t < 3 || t > 6]; edge d -> y1 [t >= 3 && t <= 6]; edge x1 -> f; edge y1 -> h; })"),
                               flat);
    REQUIRE(gaps.traces.size() == 1);
    CHECK(render_inputs(gaps.encoding, gaps.traces[0]) == "t ∈ [0..2] ∪ [7..9]");
}

TEST_CASE("nondeterministic right-hand diagrams are flagged") {
    const Activity nd = fixtures::ad_text(R"(activitydiagram nd {
        initial s; fork k; action a1 as a; action a2 as a; join j; final f;
        edge s -> k; edge k -> a1; edge k -> a2; edge a1 -> j; edge a2 -> j; edge j -> f; })");
    const AdDiff diff = addiff(fixtures::ad_text(chain_abcx), nd);
    CHECK(diff.simulation_semantics);
    const auto notes = diff.report(PartitionKind::ActionList).notes;
    CHECK(std::find(notes.begin(), notes.end(), "nd is not observably deterministic; results use simulation semantics") !=
          notes.end());
}
