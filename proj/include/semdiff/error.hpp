// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semdiff {

enum class ErrorKind {
    // class diagrams
    InheritanceCycle,
    DanglingReference,
    DuplicateName,
    BadMultiplicity,
    // activity diagrams
    SilentCycle,
    BadDegree,
    UndeclaredVariable,
    EmptyRange,
    MissingGuard,
    BadGuard,
    TypeMismatch,
    AssignToInput,
    UnsafeToken,
    RangeViolation,
    // symbolic
    IndexOutOfRange,
    ManagerMismatch,
    UnpairedBundle,
    EmptySet,
    BitBudgetExceeded,
    // engines and oracle
    ReplayMismatch,
    ScopeTooLarge,
    StateBudgetExceeded,
    // input
    ParseError,
    Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports. `element()` names the offending model
// element (class, association, node, variable) when there is one.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string element, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind),
          element_(std::move(element)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& element() const noexcept { return element_; }

  private:
    ErrorKind kind_;
    std::string element_;
};

} // namespace semdiff
