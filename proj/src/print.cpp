// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include "semdiff/parse.hpp"

namespace semdiff::text {

std::string print_cd(const cd::ClassDiagram& cd) {
    std::ostringstream os;
    os << "classdiagram " << cd.name << " {\n";
    for (const auto& c : cd.classes) {
        os << "  class " << c.name;
        if (c.is_abstract) {
            os << " abstract";
        }
        if (c.superclass) {
            os << " extends " << *c.superclass;
        }
        os << ";\n";
    }
    for (const auto& a : cd.associations) {
        os << "  association " << a.name << " [" << a.side_a.mult.to_string() << "] " << a.side_a.cls << " -- "
           << a.side_b.cls << " [" << a.side_b.mult.to_string() << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::string print_od(const cd::ObjectModel& om) {
    std::ostringstream os;
    os << "objectdiagram " << om.name << " {\n";
    for (const auto& o : om.objects) {
        os << "  " << o.id << " : " << o.cls << ";\n";
    }
    for (const auto& l : om.links) {
        os << "  link " << l.assoc << " " << l.a << " -- " << l.b << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string print_ad(const ad::ActivityDiagram& ad) {
    std::ostringstream os;
    os << "activitydiagram " << ad.name << " {\n";
    for (const auto& v : ad.inputs) {
        os << "  input " << v.name << " : " << v.lo << ".." << v.hi << ";\n";
    }
    for (const auto& v : ad.locals) {
        os << "  local " << v.name << " : " << v.lo << ".." << v.hi << " = " << v.init.value_or(v.lo) << ";\n";
    }
    for (const auto& n : ad.nodes) {
        os << "  " << to_string(n.kind) << " " << n.id;
        if (n.kind == ad::NodeKind::Action) {
            if (!n.action.empty() && n.action != n.id) {
                os << " as " << n.action;
            }
            if (!n.effects.empty()) {
                os << " {";
                for (const auto& a : n.effects) {
                    os << " " << a.var << " := " << ad::to_string(a.value) << ";";
                }
                os << " }";
            }
        }
        os << ";\n";
    }
    for (const auto& e : ad.edges) {
        os << "  edge " << e.source << " -> " << e.target;
        if (e.guard) {
            os << " [" << ad::to_string(*e.guard) << "]";
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace semdiff::text
