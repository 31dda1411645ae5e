// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "semdiff/error.hpp"

namespace semdiff::oracle {

// ---- class diagrams ----------------------------------------------------------

namespace {

constexpr std::size_t max_pairs = 24;

struct Candidate {
    std::size_t assoc;
    std::size_t a, b; // object indices
};

} // namespace

CdOracleReport cd_enumerate_all(const cd::CheckedClassDiagram& cd1, const cd::CheckedClassDiagram& cd2,
                                std::size_t scope) {
    if (scope > max_cd_scope) {
        throw Error(ErrorKind::ScopeTooLarge, std::to_string(scope),
                    "oracle scope " + std::to_string(scope) + " exceeds " + std::to_string(max_cd_scope));
    }
    const auto classes = cd1.concrete_classes();
    const auto& assocs = cd1.diagram().associations;
    CdOracleReport out;

    // Class multisets as non-decreasing index sequences.
    std::vector<std::vector<std::size_t>> shapes{{}};
    for (std::size_t n = 1; n <= scope; ++n) {
        std::vector<std::size_t> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            if (cur.size() == n) {
                shapes.push_back(cur);
                return;
            }
            for (std::size_t c = from; c < classes.size(); ++c) {
                cur.push_back(c);
                rec(c);
                cur.pop_back();
            }
        };
        rec(0);
    }

    for (const auto& shape : shapes) {
        std::vector<cd::Object> objects;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            objects.push_back({classes[shape[i]] + "_" + std::to_string(i), classes[shape[i]]});
        }
        std::vector<Candidate> cands;
        for (std::size_t k = 0; k < assocs.size(); ++k) {
            for (std::size_t a = 0; a < objects.size(); ++a) {
                for (std::size_t b = 0; b < objects.size(); ++b) {
                    if (cd::conforms(cd1, objects[a].cls, assocs[k].side_a.cls) &&
                        cd::conforms(cd1, objects[b].cls, assocs[k].side_b.cls)) {
                        cands.push_back({k, a, b});
                    }
                }
            }
        }
        if (cands.size() > max_pairs) {
            throw Error(ErrorKind::ScopeTooLarge, std::to_string(scope),
                        "too many candidate links (" + std::to_string(cands.size()) + ") for the oracle");
        }

        // Relabelings that keep every object's class.
        std::vector<std::vector<std::size_t>> perms;
        std::vector<std::size_t> p(objects.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = i;
        }
        do {
            bool ok = true;
            for (std::size_t i = 0; i < p.size() && ok; ++i) {
                ok = shape[p[i]] == shape[i];
            }
            if (ok) {
                perms.push_back(p);
            }
        } while (std::next_permutation(p.begin(), p.end()));
        std::vector<std::vector<std::size_t>> moved; // candidate index image per relabeling
        for (const auto& perm : perms) {
            std::vector<std::size_t> img(cands.size());
            for (std::size_t i = 0; i < cands.size(); ++i) {
                const Candidate c{cands[i].assoc, perm[cands[i].a], perm[cands[i].b]};
                for (std::size_t j = 0; j < cands.size(); ++j) {
                    if (cands[j].assoc == c.assoc && cands[j].a == c.a && cands[j].b == c.b) {
                        img[i] = j;
                    }
                }
            }
            moved.push_back(std::move(img));
        }

        const std::uint64_t total = std::uint64_t{1} << cands.size();
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            bool canonical = true;
            for (const auto& img : moved) {
                std::uint64_t m2 = 0;
                for (std::size_t i = 0; i < cands.size(); ++i) {
                    if ((mask >> i) & 1U) {
                        m2 |= std::uint64_t{1} << img[i];
                    }
                }
                if (m2 < mask) {
                    canonical = false;
                    break;
                }
            }
            if (!canonical) {
                continue;
            }
            cd::ObjectModel om;
            om.name = "oracle" + std::to_string(out.witnesses.size() + 1);
            om.objects = objects;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                if ((mask >> i) & 1U) {
                    om.links.push_back(
                        {assocs[cands[i].assoc].name, objects[cands[i].a].id, objects[cands[i].b].id});
                }
            }
            if (cd::is_instance(om, cd1) && !cd::is_instance(om, cd2)) {
                out.by_class_set[cd::classes_of(om)].push_back(out.witnesses.size());
                out.witnesses.push_back(std::move(om));
            }
        }
    }
    return out;
}

// ---- activity diagrams -------------------------------------------------------

namespace {

using Config = ad::Configuration;
using ConfigSet = std::set<Config>;

std::map<std::string, std::vector<Config>> steps_by_action(const ad::Activity& ad, const Config& c) {
    std::map<std::string, std::vector<Config>> out;
    for (auto& s : ad::observable_steps(ad, c)) {
        out[s.action].push_back(std::move(s.next));
    }
    return out;
}

ConfigSet advance(const ad::Activity& ad, const ConfigSet& from, const std::string& action) {
    ConfigSet out;
    for (const auto& c : from) {
        for (auto& s : ad::observable_steps(ad, c)) {
            if (s.action == action) {
                out.insert(std::move(s.next));
            }
        }
    }
    return out;
}

bool can_do(const ad::Activity& ad, const ConfigSet& from, const std::string& action) {
    for (const auto& c : from) {
        for (const auto& s : ad::observable_steps(ad, c)) {
            if (s.action == action) {
                return true;
            }
        }
    }
    return false;
}

std::vector<ad::InputValuation> joint_valuations(const ad::Activity& ad1, const ad::Activity& ad2) {
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> ranges;
    for (const ad::Activity* a : {&ad1, &ad2}) {
        for (const auto& in : a->diagram().inputs) {
            auto [it, fresh] = ranges.try_emplace(in.name, in.lo, in.hi);
            if (!fresh) {
                it->second = {std::max(it->second.first, in.lo), std::min(it->second.second, in.hi)};
            }
        }
    }
    std::vector<ad::InputValuation> out{{}};
    for (const auto& [name, r] : ranges) {
        std::vector<ad::InputValuation> next;
        for (const auto& v : out) {
            for (std::int64_t x = r.first; x <= r.second; ++x) {
                auto w = v;
                w[name] = x;
                next.push_back(std::move(w));
            }
        }
        out = std::move(next);
    }
    return out;
}

ad::InputValuation own_inputs(const ad::Activity& ad, const ad::InputValuation& all) {
    ad::InputValuation out;
    for (const auto& in : ad.diagram().inputs) {
        out[in.name] = all.at(in.name);
    }
    return out;
}

} // namespace

AdOracleReport ad_diff_bfs(const ad::Activity& ad1, const ad::Activity& ad2, std::size_t state_budget) {
    AdOracleReport out;
    for (const auto& valuation : joint_valuations(ad1, ad2)) {
        AdOracleRow row;
        row.inputs = valuation;
        const Config start1 = ad1.initial_config(own_inputs(ad1, valuation));
        const ConfigSet start2{ad2.initial_config(own_inputs(ad2, valuation))};

        // Level-wise BFS until some node has an unmatched ad1 action.
        using Node = std::pair<Config, ConfigSet>;
        std::set<Node> seen{{start1, start2}};
        std::vector<Node> level{{start1, start2}};
        for (std::size_t depth = 0; !level.empty() && !row.shortest; ++depth) {
            std::vector<Node> next;
            for (const auto& [c1, s2] : level) {
                for (const auto& [a, succ] : steps_by_action(ad1, c1)) {
                    if (!can_do(ad2, s2, a)) {
                        row.shortest = depth + 1;
                        continue;
                    }
                    const ConfigSet s2n = advance(ad2, s2, a);
                    for (const auto& c : succ) {
                        if (seen.emplace(c, s2n).second) {
                            if (seen.size() > state_budget) {
                                throw Error(ErrorKind::StateBudgetExceeded, ad1.name(),
                                            "oracle product exceeds " + std::to_string(state_budget) + " states");
                            }
                            next.emplace_back(c, s2n);
                        }
                    }
                }
            }
            level = std::move(next);
        }

        if (row.shortest) {
            const std::size_t len = *row.shortest;
            std::vector<std::string> path;
            std::function<void(const Config&, const ConfigSet&)> dfs = [&](const Config& c1, const ConfigSet& s2) {
                for (const auto& [a, succ] : steps_by_action(ad1, c1)) {
                    path.push_back(a);
                    if (path.size() == len) {
                        if (!can_do(ad2, s2, a)) {
                            row.traces.insert(path);
                        }
                    } else if (can_do(ad2, s2, a)) {
                        const ConfigSet s2n = advance(ad2, s2, a);
                        for (const auto& c : succ) {
                            dfs(c, s2n);
                        }
                    }
                    path.pop_back();
                }
            };
            dfs(start1, start2);
            for (const auto& t : row.traces) {
                out.by_action_list[t].insert(valuation);
                auto key = t;
                std::sort(key.begin(), key.end());
                key.erase(std::unique(key.begin(), key.end()), key.end());
                out.by_action_set[key].insert(valuation);
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace semdiff::oracle
