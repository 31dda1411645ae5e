// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/cli.hpp"

#include <algorithm>
#include <future>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "semdiff/ad_diff.hpp"
#include "semdiff/cd_diff.hpp"
#include "semdiff/error.hpp"
#include "semdiff/oracle.hpp"
#include "semdiff/parse.hpp"
#include "semdiff/report.hpp"

namespace semdiff::cli {
namespace {

std::string counted(std::size_t n, const std::string& noun) {
    const bool es = noun.ends_with("s") || noun.ends_with("ch");
    return std::to_string(n) + " " + noun + (n == 1 ? "" : es ? "es" : "s");
}

struct Options {
    std::string left;
    std::string right;
    std::size_t scope = cd::default_scope;
    std::size_t limit = 20;
    std::string summarize;
    bool no_summary = false;
    bool both = false;
    bool oracle = false;
    bool both_directions = false;
    std::string format = "text";

    bool json() const { return format == "json-lines"; }
    bool raw() const { return no_summary || summarize == "none"; }
};

// Output of one diff direction, rendered off the main thread.
struct Outcome {
    std::string text;
    bool differences = false;
    bool mismatch = false;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

text::SourceFile load(const std::string& path, text::SourceKind want) {
    text::SourceFile src = text::load_source(path);
    if (src.kind != want) {
        throw UsageError(path + ": expected a " + std::string(text::to_string(want)) + " model, found " +
                         std::string(text::to_string(src.kind)));
    }
    return src;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? sep : "") + items[i];
    }
    return out;
}

std::string render(const SummaryReport& r, const Options& o) {
    return o.json() ? report::render_json_lines(r) : report::render_text(r);
}

// ---- cddiff ------------------------------------------------------------------

Outcome cd_direction(const cd::CheckedClassDiagram& cd1, const cd::CheckedClassDiagram& cd2, const Options& o) {
    Outcome out;
    if (o.raw()) {
        const auto ws = cd::enumerate_witnesses(cd1, cd2, {o.scope}, o.limit);
        out.differences = !ws.empty();
        std::ostringstream s;
        if (o.json()) {
            for (const auto& w : ws) {
                s << nlohmann::json({{"witness", text::print_od(w)}}).dump() << "\n";
            }
        } else {
            s << cd1.name() << " vs " << cd2.name() << ": " << ws.size() << " witnesses (limit " << o.limit
              << ")\n";
            for (const auto& w : ws) {
                s << "\n" << text::print_od(w);
            }
        }
        out.text = s.str();
        return out;
    }

    SummaryReport r = cd::cddiff_summary(cd1, cd2, {o.scope});
    out.differences = !r.entries.empty();
    if (o.oracle) {
        const auto ref = oracle::cd_enumerate_all(cd1, cd2, o.scope);
        std::set<std::vector<std::string>> engine_keys;
        std::vector<std::string> problems;
        for (const auto& e : r.entries) {
            engine_keys.insert(e.key.items());
            const cd::ObjectModel om = text::parse_od(e.representative);
            if (!cd::is_instance(om, cd1) || cd::is_instance(om, cd2)) {
                problems.push_back("representative of " + e.key.to_string() + " is not a witness");
            }
        }
        std::set<std::vector<std::string>> oracle_keys;
        for (const auto& [k, _] : ref.by_class_set) {
            oracle_keys.insert(k);
        }
        for (const auto& k : oracle_keys) {
            if (!engine_keys.contains(k)) {
                problems.push_back("oracle-only class set " + PartitionKey::class_set(k).to_string());
            }
        }
        for (const auto& k : engine_keys) {
            if (!oracle_keys.contains(k)) {
                problems.push_back("engine-only class set " + PartitionKey::class_set(k).to_string());
            }
        }
        if (problems.empty()) {
            r.notes.push_back("oracle agrees: " + counted(oracle_keys.size(), "class set") + " over " +
                              counted(ref.witnesses.size(), "witness"));
        } else {
            out.mismatch = true;
            for (const auto& p : problems) {
                r.notes.push_back("oracle mismatch: " + p);
            }
        }
    }
    out.text = render(r, o);
    return out;
}

// ---- addiff ------------------------------------------------------------------

std::vector<std::string> oracle_problems(const ad::AdDiff& d, const oracle::AdOracleReport& ref) {
    std::vector<std::string> problems;
    bdd::Manager& m = d.encoding.manager();
    std::set<std::vector<std::string>> engine_lists;
    std::set<std::vector<std::string>> engine_sets;
    for (const auto& st : d.traces) {
        engine_lists.insert(st.actions);
        engine_sets.insert(PartitionKey::action_set(st.actions).items());
        const std::string key = PartitionKey::action_list(st.actions).to_string();
        const auto it = ref.by_action_list.find(st.actions);
        if (it == ref.by_action_list.end()) {
            problems.push_back("engine-only action list " + key);
            continue;
        }
        bool same = m.count_sat(st.init_inputs, d.encoding.inputs()) == it->second.size();
        for (const auto& v : it->second) {
            bdd::Bdd point = m.bdd_true();
            for (const auto& b : d.encoding.inputs()) {
                point &= m.equals(b, v.at(b.name));
            }
            same = same && !(point & st.init_inputs).is_false();
        }
        if (!same) {
            problems.push_back("inputs differ for " + key);
        }
    }
    for (const auto& [list, _] : ref.by_action_list) {
        if (!engine_lists.contains(list)) {
            problems.push_back("oracle-only action list " + PartitionKey::action_list(list).to_string());
        }
    }
    for (const auto& [set, _] : ref.by_action_set) {
        if (!engine_sets.contains(set)) {
            problems.push_back("oracle-only action set " + PartitionKey::action_set(set).to_string());
        }
    }
    for (const auto& set : engine_sets) {
        if (!ref.by_action_set.contains(set)) {
            problems.push_back("engine-only action set " + PartitionKey::action_set(set).to_string());
        }
    }
    return problems;
}

Outcome ad_direction(const ad::Activity& ad1, const ad::Activity& ad2, const Options& o) {
    Outcome out;
    const ad::AdDiff d = ad::addiff(ad1, ad2);
    out.differences = !d.traces.empty();

    std::vector<std::string> notes;
    if (o.oracle) {
        const auto problems = oracle_problems(d, oracle::ad_diff_bfs(ad1, ad2));
        if (problems.empty()) {
            notes.push_back("oracle agrees: " + counted(d.traces.size(), "action list"));
        } else {
            out.mismatch = true;
            for (const auto& p : problems) {
                notes.push_back("oracle mismatch: " + p);
            }
        }
    }

    std::ostringstream s;
    if (o.raw()) {
        const std::size_t n = std::min(o.limit, d.traces.size());
        if (o.json()) {
            for (std::size_t i = 0; i < n; ++i) {
                s << nlohmann::json({{"actions", d.traces[i].actions},
                                     {"inputs", ad::render_inputs(d.encoding, d.traces[i])}})
                         .dump()
                  << "\n";
            }
        } else {
            s << ad1.name() << " vs " << ad2.name() << ": " << d.traces.size() << " symbolic traces";
            if (n < d.traces.size()) {
                s << ", first " << n << " shown";
            }
            s << "\n";
            for (const auto& note : notes) {
                s << "note: " << note << "\n";
            }
            for (std::size_t i = 0; i < n; ++i) {
                s << "[" << join(d.traces[i].actions, ", ") << "]  " << ad::render_inputs(d.encoding, d.traces[i])
                  << "\n";
            }
        }
        out.text = s.str();
        return out;
    }

    std::vector<PartitionKind> kinds;
    if (o.both) {
        kinds = {PartitionKind::ActionList, PartitionKind::ActionSet};
    } else {
        kinds = {o.summarize == "action-set" ? PartitionKind::ActionSet : PartitionKind::ActionList};
    }
    std::vector<std::size_t> counts;
    for (PartitionKind k : kinds) {
        SummaryReport r = d.report(k);
        r.notes.insert(r.notes.end(), notes.begin(), notes.end());
        counts.push_back(r.entries.size());
        s << render(r, o);
        if (!o.json() && k != kinds.back()) {
            s << "\n";
        }
    }
    if (o.both && !o.json()) {
        s << "\ncounts " << counts[0] << "/" << counts[1] << "\n";
    }
    out.text = s.str();
    return out;
}

// Runs one or both directions; the reverse one concurrently.
template <class Model, class Direction>
int diff_command(const Model& m1, const Model& m2, const Options& o, Direction dir, std::ostream& out) {
    std::vector<Outcome> outcomes;
    if (o.both_directions) {
        auto reverse = std::async(std::launch::async, [&] { return dir(m2, m1, o); });
        outcomes.push_back(dir(m1, m2, o));
        outcomes.push_back(reverse.get());
    } else {
        outcomes.push_back(dir(m1, m2, o));
    }
    bool any = false;
    bool mismatch = false;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (i > 0 && o.format == "text") {
            out << "\n";
        }
        out << outcomes[i].text;
        any = any || outcomes[i].differences;
        mismatch = mismatch || outcomes[i].mismatch;
    }
    if (mismatch) {
        return oracle_mismatch;
    }
    return any ? found : none;
}

int cmd_cddiff(const Options& o, std::ostream& out) {
    if (!o.summarize.empty() && o.summarize != "class-set" && o.summarize != "none") {
        throw UsageError("cddiff summarizes by class-set only");
    }
    if (o.oracle && o.scope > oracle::max_cd_scope) {
        throw UsageError("--oracle needs --scope " + std::to_string(oracle::max_cd_scope) + " or less");
    }
    const auto cd1 = cd::validate_cd(std::get<cd::ClassDiagram>(load(o.left, text::SourceKind::ClassDiagram).model));
    const auto cd2 = cd::validate_cd(std::get<cd::ClassDiagram>(load(o.right, text::SourceKind::ClassDiagram).model));
    return diff_command(cd1, cd2, o, cd_direction, out);
}

int cmd_addiff(const Options& o, std::ostream& out) {
    if (o.summarize == "class-set") {
        throw UsageError("addiff summarizes by action-list or action-set");
    }
    const auto ad1 =
        ad::validate_ad(std::get<ad::ActivityDiagram>(load(o.left, text::SourceKind::ActivityDiagram).model));
    const auto ad2 =
        ad::validate_ad(std::get<ad::ActivityDiagram>(load(o.right, text::SourceKind::ActivityDiagram).model));
    return diff_command(ad1, ad2, o, ad_direction, out);
}

int cmd_check(const std::string& od_path, const std::string& cd_path, std::ostream& out) {
    const auto om = std::get<cd::ObjectModel>(load(od_path, text::SourceKind::ObjectDiagram).model);
    const auto cd = cd::validate_cd(std::get<cd::ClassDiagram>(load(cd_path, text::SourceKind::ClassDiagram).model));
    cd::validate_om(om);
    const cd::Verdict v = cd::is_instance(om, cd);
    if (v.ok) {
        out << om.name << " is an instance of " << cd.name() << "\n";
        return found;
    }
    out << om.name << " is not an instance of " << cd.name() << "\n";
    for (const auto& viol : v.violations) {
        out << "  " << cd::to_string(viol.clause) << ": " << viol.message << "\n";
    }
    return none;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Semantic differencing of class and activity diagrams", "semdiff"};
    app.require_subcommand(1);
    Options o;

    const auto formats = CLI::IsMember({"text", "json-lines"});
    auto common = [&](CLI::App* sub) {
        sub->add_option("left", o.left, "Model whose instances are reported")->required();
        sub->add_option("right", o.right, "Model they are compared against")->required();
        sub->add_option("--limit", o.limit, "Witness cap for --no-summary")->check(CLI::NonNegativeNumber);
        sub->add_flag("--no-summary", o.no_summary, "List raw witnesses instead of a summary");
        sub->add_flag("--oracle", o.oracle, "Cross-check against the brute-force oracle (exit 3 on mismatch)");
        sub->add_option("--format", o.format, "text or json-lines")->check(formats);
        sub->add_flag("--both-directions", o.both_directions, "Also diff right against left");
    };

    CLI::App* cddiff = app.add_subcommand("cddiff", "Object models of LEFT that RIGHT rejects");
    common(cddiff);
    cddiff->add_option("--scope", o.scope, "Maximum number of objects")->check(CLI::NonNegativeNumber);
    cddiff->add_option("--summarize", o.summarize, "class-set or none")->check(CLI::IsMember({"class-set", "none"}));

    CLI::App* addiff = app.add_subcommand("addiff", "Traces of LEFT that RIGHT cannot produce");
    common(addiff);
    addiff->add_option("--summarize", o.summarize, "action-list, action-set or none")
        ->check(CLI::IsMember({"action-list", "action-set", "none"}));
    addiff->add_flag("--both", o.both, "Print both summaries and their L/S counts");

    std::string od_path;
    std::string cd_path;
    CLI::App* check = app.add_subcommand("check", "Is the object model an instance of the class diagram?");
    check->add_option("object-model", od_path)->required();
    check->add_option("class-diagram", cd_path)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : usage;
    }

    try {
        if (cddiff->parsed()) {
            return cmd_cddiff(o, out);
        }
        if (addiff->parsed()) {
            return cmd_addiff(o, out);
        }
        return cmd_check(od_path, cd_path, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    }
    return usage;
}

} // namespace semdiff::cli
