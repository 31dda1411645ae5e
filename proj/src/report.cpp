// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/report.hpp"

#include <sstream>

#include "json.hpp"
#include "semdiff/error.hpp"

namespace semdiff::report {

using nlohmann::json;

namespace {

std::string indent(const std::string& text, const std::string& pad) {
    std::string out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out += pad + line + "\n";
    }
    return out;
}

PartitionKey make_key(PartitionKind kind, std::vector<std::string> items) {
    switch (kind) {
    case PartitionKind::ClassSet:
        return PartitionKey::class_set(std::move(items));
    case PartitionKind::ActionList:
        return PartitionKey::action_list(std::move(items));
    case PartitionKind::ActionSet:
        return PartitionKey::action_set(std::move(items));
    }
    return {};
}

} // namespace

std::string render_text(const SummaryReport& r) {
    std::ostringstream out;
    out << r.direction.first << " vs " << r.direction.second << ": ";
    if (r.entries.empty()) {
        out << "no differences";
    } else {
        out << r.entries.size() << (r.entries.size() == 1 ? " entry" : " entries") << " by " << to_string(r.partition);
    }
    if (!r.exhaustive) {
        out << " (search cut off)";
    }
    out << "\n";
    for (const auto& n : r.notes) {
        out << "note: " << n << "\n";
    }
    for (const auto& e : r.entries) {
        out << "\n" << e.key.to_string() << "\n";
        if (!e.annotation.empty()) {
            out << "  inputs: " << e.annotation << "\n";
        }
        if (r.partition == PartitionKind::ClassSet) {
            out << indent(e.representative, "  ");
        } else {
            out << "  trace:  " << e.representative << "\n";
        }
    }
    return out.str();
}

std::string render_json_lines(const SummaryReport& r) {
    std::string out;
    json header = {{"direction", {r.direction.first, r.direction.second}},
                   {"partition", std::string(to_string(r.partition))},
                   {"exhaustive", r.exhaustive},
                   {"notes", r.notes},
                   {"entries", r.entries.size()}};
    out += header.dump() + "\n";
    for (const auto& e : r.entries) {
        json line = {{"key", e.key.items()}, {"representative", e.representative}, {"annotation", e.annotation}};
        out += line.dump() + "\n";
    }
    return out;
}

std::vector<SummaryReport> parse_json_lines(std::string_view text) {
    std::vector<SummaryReport> out;
    std::istringstream in{std::string(text)};
    std::size_t pending = 0;
    std::size_t lineno = 0;
    try {
        for (std::string line; std::getline(in, line);) {
            ++lineno;
            if (line.empty()) {
                continue;
            }
            const json j = json::parse(line);
            if (pending == 0) {
                SummaryReport r;
                r.direction = {j.at("direction").at(0).get<std::string>(), j.at("direction").at(1).get<std::string>()};
                const auto kind = partition_kind_from_string(j.at("partition").get<std::string>());
                if (!kind) {
                    throw Error(ErrorKind::ParseError, "", std::to_string(lineno) + ": unknown partition");
                }
                r.partition = *kind;
                r.exhaustive = j.at("exhaustive").get<bool>();
                r.notes = j.at("notes").get<std::vector<std::string>>();
                pending = j.at("entries").get<std::size_t>();
                out.push_back(std::move(r));
                continue;
            }
            SummaryReport& r = out.back();
            r.entries.push_back({make_key(r.partition, j.at("key").get<std::vector<std::string>>()),
                                 j.at("representative").get<std::string>(), j.at("annotation").get<std::string>()});
            --pending;
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, "", std::to_string(lineno) + ": " + e.what());
    }
    if (pending != 0) {
        throw Error(ErrorKind::ParseError, "", "report ends " + std::to_string(pending) + " entries early");
    }
    return out;
}

} // namespace semdiff::report
