// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "semdiff/ad.hpp"
#include "semdiff/cd.hpp"

// Textual .cd / .od / .ad formats. Whitespace-insensitive; `//` starts a
// comment that runs to the end of the line.
//
//   classdiagram NAME { (class NAME [abstract] [extends NAME];)*
//                       (association NAME MULT NAME -- NAME MULT;)* }
//   objectdiagram NAME { (ID : CLASS;)* (link ASSOC ID -- ID;)* }
//   activitydiagram NAME { (input NAME : LO..HI;)* (local NAME : LO..HI = INIT;)*
//                          (KIND NAME [as ACTION] [{ (VAR := EXPR;)* }];)*
//                          (edge NAME -> NAME [[GUARD]];)* }
//
// MULT is N, N..M, N..* or *, optionally in brackets. Declarations of
// different sorts may interleave.
namespace semdiff::text {

enum class SourceKind { ClassDiagram, ObjectDiagram, ActivityDiagram };

std::string_view to_string(SourceKind kind);

// All throw Error{ParseError} with a "line:col: expected ..." message.
cd::ClassDiagram parse_cd(std::string_view text);
cd::ObjectModel parse_od(std::string_view text);
ad::ActivityDiagram parse_ad(std::string_view text);
ad::Expr parse_expr(std::string_view text);

// From the top-level keyword, not the file extension.
SourceKind detect_kind(std::string_view text);

std::string print_cd(const cd::ClassDiagram& cd);
std::string print_od(const cd::ObjectModel& om);
std::string print_ad(const ad::ActivityDiagram& ad);

struct SourceFile {
    std::filesystem::path path;
    SourceKind kind;
    std::variant<cd::ClassDiagram, cd::ObjectModel, ad::ActivityDiagram> model;
};

// Throws Error{Io | ParseError}; parse errors are prefixed with the path.
std::string read_file(const std::filesystem::path& path);
SourceFile load_source(const std::filesystem::path& path);

} // namespace semdiff::text
