// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#include "semdiff/diff_core.hpp"

#include "semdiff/error.hpp"

namespace semdiff {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InheritanceCycle: return "InheritanceCycle";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::BadMultiplicity: return "BadMultiplicity";
    case ErrorKind::SilentCycle: return "SilentCycle";
    case ErrorKind::BadDegree: return "BadDegree";
    case ErrorKind::UndeclaredVariable: return "UndeclaredVariable";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::MissingGuard: return "MissingGuard";
    case ErrorKind::BadGuard: return "BadGuard";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::AssignToInput: return "AssignToInput";
    case ErrorKind::UnsafeToken: return "UnsafeToken";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ManagerMismatch: return "ManagerMismatch";
    case ErrorKind::UnpairedBundle: return "UnpairedBundle";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::BitBudgetExceeded: return "BitBudgetExceeded";
    case ErrorKind::ReplayMismatch: return "ReplayMismatch";
    case ErrorKind::ScopeTooLarge: return "ScopeTooLarge";
    case ErrorKind::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

std::string_view to_string(PartitionKind kind) {
    switch (kind) {
    case PartitionKind::ClassSet: return "class-set";
    case PartitionKind::ActionList: return "action-list";
    case PartitionKind::ActionSet: return "action-set";
    }
    return "unknown";
}

std::optional<PartitionKind> partition_kind_from_string(std::string_view text) {
    if (text == "class-set") {
        return PartitionKind::ClassSet;
    }
    if (text == "action-list") {
        return PartitionKind::ActionList;
    }
    if (text == "action-set") {
        return PartitionKind::ActionSet;
    }
    return std::nullopt;
}

static std::vector<std::string> sorted_unique(std::vector<std::string> items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

PartitionKey PartitionKey::class_set(std::vector<std::string> classes) {
    return {PartitionKind::ClassSet, sorted_unique(std::move(classes))};
}

PartitionKey PartitionKey::action_list(std::vector<std::string> actions) {
    return {PartitionKind::ActionList, std::move(actions)};
}

PartitionKey PartitionKey::action_set(std::vector<std::string> actions) {
    return {PartitionKind::ActionSet, sorted_unique(std::move(actions))};
}

std::string PartitionKey::payload() const {
    std::string out;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i > 0) {
            out.push_back('\x1f');
        }
        out += items_[i];
    }
    return out;
}

std::string PartitionKey::to_string() const {
    const bool is_list = kind_ == PartitionKind::ActionList;
    std::string out(1, is_list ? '[' : '{');
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += items_[i];
    }
    out.push_back(is_list ? ']' : '}');
    return out;
}

bool is_well_formed(const SummaryReport& report) {
    for (std::size_t i = 1; i < report.entries.size(); ++i) {
        if (!(report.entries[i - 1].key.payload() < report.entries[i].key.payload())) {
            return false;
        }
    }
    return true;
}

} // namespace semdiff
