// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semdiff/diff_core.hpp"

namespace semdiff::report {

std::string render_text(const SummaryReport& report);

// A header object (direction, partition, exhaustive, notes, entry count)
// followed by one object per entry with key, representative and annotation.
std::string render_json_lines(const SummaryReport& report);

// Inverse of render_json_lines; accepts several reports back to back.
// Throws Error{ParseError}.
std::vector<SummaryReport> parse_json_lines(std::string_view text);

} // namespace semdiff::report
