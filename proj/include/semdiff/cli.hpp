// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semdiff::cli {

// Exit statuses.
inline constexpr int found = 0;          // differences found / model is an instance
inline constexpr int none = 1;           // no differences / not an instance
inline constexpr int usage = 2;          // bad arguments, unreadable or malformed input
inline constexpr int oracle_mismatch = 3;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace semdiff::cli
