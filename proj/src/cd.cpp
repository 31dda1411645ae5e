// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/cd.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>

#include "semdiff/error.hpp"

namespace semdiff::cd {

std::string MultRange::to_string() const {
    if (!hi) {
        return lo == 0 ? "*" : std::to_string(lo) + "..*";
    }
    if (*hi == lo) {
        return std::to_string(lo);
    }
    return std::to_string(lo) + ".." + std::to_string(*hi);
}

std::optional<std::size_t> CheckedClassDiagram::class_index(const std::string& name) const {
    const auto it = class_ix_.find(name);
    if (it == class_ix_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool CheckedClassDiagram::is_concrete(const std::string& name) const {
    const auto ix = class_index(name);
    return ix && !cd_.classes[*ix].is_abstract;
}

bool CheckedClassDiagram::conforms(const std::string& sub, const std::string& super) const {
    const auto s = class_index(sub);
    const auto t = class_index(super);
    return s && t && conforms_[*s][*t];
}

const Association* CheckedClassDiagram::find_association(const std::string& name) const {
    const auto it = assoc_ix_.find(name);
    return it == assoc_ix_.end() ? nullptr : &cd_.associations[it->second];
}

std::vector<std::string> CheckedClassDiagram::concrete_classes() const {
    std::vector<std::string> out;
    for (const auto& c : cd_.classes) {
        if (!c.is_abstract) {
            out.push_back(c.name);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

CheckedClassDiagram validate_cd(ClassDiagram cd) {
    CheckedClassDiagram out;
    for (std::size_t i = 0; i < cd.classes.size(); ++i) {
        if (!out.class_ix_.emplace(cd.classes[i].name, i).second) {
            throw Error(ErrorKind::DuplicateName, cd.classes[i].name,
                        "class '" + cd.classes[i].name + "' declared twice");
        }
    }
    const std::size_t n = cd.classes.size();
    std::vector<std::optional<std::size_t>> parent(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (const auto& super = cd.classes[i].superclass) {
            const auto it = out.class_ix_.find(*super);
            if (it == out.class_ix_.end()) {
                throw Error(ErrorKind::DanglingReference, cd.classes[i].name,
                            "class '" + cd.classes[i].name + "' extends undeclared class '" + *super + "'");
            }
            parent[i] = it->second;
        }
    }
    // Single inheritance: walking up from any class must terminate within n steps.
    out.conforms_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<std::size_t> cur = i;
        std::size_t steps = 0;
        while (cur) {
            if (steps++ > n) {
                throw Error(ErrorKind::InheritanceCycle, cd.classes[i].name,
                            "inheritance cycle through class '" + cd.classes[i].name + "'");
            }
            out.conforms_[i][*cur] = true;
            cur = parent[*cur];
        }
    }
    for (std::size_t i = 0; i < cd.associations.size(); ++i) {
        const Association& a = cd.associations[i];
        if (!out.assoc_ix_.emplace(a.name, i).second) {
            throw Error(ErrorKind::DuplicateName, a.name, "association '" + a.name + "' declared twice");
        }
        for (const AssocEnd* end : {&a.side_a, &a.side_b}) {
            if (!out.class_ix_.contains(end->cls)) {
                throw Error(ErrorKind::DanglingReference, a.name,
                            "association '" + a.name + "' refers to undeclared class '" + end->cls + "'");
            }
            if (!end->mult.well_formed()) {
                throw Error(ErrorKind::BadMultiplicity, a.name,
                            "association '" + a.name + "' has multiplicity " + std::to_string(end->mult.lo) +
                                ".." + std::to_string(*end->mult.hi) + " with lower bound above upper bound");
            }
        }
    }
    out.cd_ = std::move(cd);
    return out;
}

bool conforms(const CheckedClassDiagram& cd, const std::string& subclass, const std::string& superclass) {
    return cd.conforms(subclass, superclass);
}

void validate_om(const ObjectModel& om) {
    std::set<std::string> ids;
    for (const auto& o : om.objects) {
        if (!ids.insert(o.id).second) {
            throw Error(ErrorKind::DuplicateName, o.id, "object '" + o.id + "' declared twice");
        }
    }
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const auto& l : om.links) {
        for (const std::string* end : {&l.a, &l.b}) {
            if (!ids.contains(*end)) {
                throw Error(ErrorKind::DanglingReference, *end,
                            "link '" + l.assoc + "' refers to undeclared object '" + *end + "'");
            }
        }
        if (!seen.emplace(l.assoc, l.a, l.b).second) {
            throw Error(ErrorKind::DuplicateName, l.assoc,
                        "duplicate link " + l.assoc + " " + l.a + " -- " + l.b);
        }
    }
}

std::string_view to_string(Violation::Clause clause) {
    switch (clause) {
    case Violation::Clause::UnknownClass: return "unknown-class";
    case Violation::Clause::AbstractClass: return "abstract-class";
    case Violation::Clause::UnknownAssociation: return "unknown-association";
    case Violation::Clause::LinkEndpoint: return "link-endpoint";
    case Violation::Clause::Multiplicity: return "multiplicity";
    }
    return "unknown";
}

Verdict is_instance(const ObjectModel& om, const CheckedClassDiagram& cd) {
    Verdict v;
    auto fail = [&v](Violation::Clause clause, std::string element, std::string message) {
        v.ok = false;
        v.violations.push_back({clause, std::move(element), std::move(message)});
    };

    std::unordered_map<std::string, const std::string*> class_of;
    for (const auto& o : om.objects) {
        class_of.emplace(o.id, &o.cls);
        if (!cd.has_class(o.cls)) {
            fail(Violation::Clause::UnknownClass, o.id, o.id + " : " + o.cls + " is not a class of " + cd.name());
        } else if (!cd.is_concrete(o.cls)) {
            fail(Violation::Clause::AbstractClass, o.id, o.id + " instantiates abstract class " + o.cls);
        }
    }

    // Per-association tallies of position-A and position-B links, by object id.
    std::map<std::string, std::pair<std::unordered_map<std::string, std::size_t>,
                                    std::unordered_map<std::string, std::size_t>>>
        tally;
    for (const auto& l : om.links) {
        const Association* a = cd.find_association(l.assoc);
        if (a == nullptr) {
            fail(Violation::Clause::UnknownAssociation, l.assoc,
                 "link " + l.assoc + " " + l.a + " -- " + l.b + ": no such association in " + cd.name());
            continue;
        }
        const auto ca = class_of.find(l.a);
        const auto cb = class_of.find(l.b);
        const bool a_ok = ca != class_of.end() && cd.conforms(*ca->second, a->side_a.cls);
        const bool b_ok = cb != class_of.end() && cd.conforms(*cb->second, a->side_b.cls);
        if (!a_ok || !b_ok) {
            fail(Violation::Clause::LinkEndpoint, l.assoc,
                 "link " + l.assoc + " " + l.a + " -- " + l.b + ": endpoints must conform to " + a->side_a.cls +
                     " -- " + a->side_b.cls);
        }
        auto& t = tally[l.assoc];
        ++t.first[l.a];
        ++t.second[l.b];
    }

    for (const auto& a : cd.diagram().associations) {
        const auto& t = tally[a.name];
        for (const auto& o : om.objects) {
            if (cd.conforms(o.cls, a.side_a.cls)) {
                const auto it = t.first.find(o.id);
                const std::size_t n = it == t.first.end() ? 0 : it->second;
                if (!a.side_b.mult.contains(n)) {
                    fail(Violation::Clause::Multiplicity, a.name,
                         o.id + " has " + std::to_string(n) + " " + a.name + " link(s) to " + a.side_b.cls +
                             ", allowed " + a.side_b.mult.to_string());
                }
            }
            if (cd.conforms(o.cls, a.side_b.cls)) {
                const auto it = t.second.find(o.id);
                const std::size_t n = it == t.second.end() ? 0 : it->second;
                if (!a.side_a.mult.contains(n)) {
                    fail(Violation::Clause::Multiplicity, a.name,
                         o.id + " has " + std::to_string(n) + " " + a.name + " link(s) from " + a.side_a.cls +
                             ", allowed " + a.side_a.mult.to_string());
                }
            }
        }
    }
    return v;
}

std::vector<std::string> classes_of(const ObjectModel& om) {
    std::vector<std::string> out;
    out.reserve(om.objects.size());
    for (const auto& o : om.objects) {
        out.push_back(o.cls);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace semdiff::cd
