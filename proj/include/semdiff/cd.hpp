// Copyright (c) semdiff contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semdiff::cd {

// Multiplicity interval; an absent upper bound means unbounded ("*").
struct MultRange {
    std::uint32_t lo = 0;
    std::optional<std::uint32_t> hi;

    static MultRange exactly(std::uint32_t n) { return {n, n}; }
    static MultRange at_least(std::uint32_t n) { return {n, std::nullopt}; }
    static MultRange many() { return {0, std::nullopt}; }

    bool contains(std::size_t n) const { return n >= lo && (!hi || n <= *hi); }
    bool well_formed() const { return !hi || lo <= *hi; }
    std::string to_string() const;

    friend bool operator==(const MultRange&, const MultRange&) = default;
};

struct ClassDecl {
    std::string name;
    bool is_abstract = false;
    std::optional<std::string> superclass;

    friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct AssocEnd {
    std::string cls;
    MultRange mult;

    friend bool operator==(const AssocEnd&, const AssocEnd&) = default;
};

// Binary association. `side_b.mult` bounds, for every object conforming to
// the A class, how many links it has in position A; `side_a.mult` bounds the
// position-B count of every B-conforming object.
struct Association {
    std::string name;
    AssocEnd side_a;
    AssocEnd side_b;

    friend bool operator==(const Association&, const Association&) = default;
};

struct ClassDiagram {
    std::string name;
    std::vector<ClassDecl> classes;
    std::vector<Association> associations;

    friend bool operator==(const ClassDiagram&, const ClassDiagram&) = default;
};

struct Object {
    std::string id;
    std::string cls;

    friend bool operator==(const Object&, const Object&) = default;
};

struct Link {
    std::string assoc;
    std::string a; // object id in position A
    std::string b;

    friend bool operator==(const Link&, const Link&) = default;
    friend auto operator<=>(const Link&, const Link&) = default;
};

struct ObjectModel {
    std::string name;
    std::vector<Object> objects;
    std::vector<Link> links;

    friend bool operator==(const ObjectModel&, const ObjectModel&) = default;
};

// A class diagram that passed validation, with the transitive subclass
// relation precomputed. Immutable.
class CheckedClassDiagram {
  public:
    const ClassDiagram& diagram() const noexcept { return cd_; }
    const std::string& name() const noexcept { return cd_.name; }

    std::optional<std::size_t> class_index(const std::string& name) const;
    bool has_class(const std::string& name) const { return class_index(name).has_value(); }
    bool is_concrete(const std::string& name) const;

    // Reflexive-transitive subclass test; false when either name is unknown.
    bool conforms(const std::string& sub, const std::string& super) const;

    const Association* find_association(const std::string& name) const;

    // Non-abstract class names, sorted.
    std::vector<std::string> concrete_classes() const;

  private:
    friend CheckedClassDiagram validate_cd(ClassDiagram cd);

    ClassDiagram cd_;
    std::map<std::string, std::size_t> class_ix_;
    std::map<std::string, std::size_t> assoc_ix_;
    std::vector<std::vector<bool>> conforms_; // [sub][super]
};

// Throws Error{InheritanceCycle | DanglingReference | DuplicateName | BadMultiplicity}.
CheckedClassDiagram validate_cd(ClassDiagram cd);

bool conforms(const CheckedClassDiagram& cd, const std::string& subclass, const std::string& superclass);

// Structural checks on an object model: unique ids, resolvable link
// endpoints, no duplicate link. Throws Error{DuplicateName | DanglingReference}.
void validate_om(const ObjectModel& om);

struct Violation {
    enum class Clause { UnknownClass, AbstractClass, UnknownAssociation, LinkEndpoint, Multiplicity };
    Clause clause;
    std::string element; // class, association, or object id
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

std::string_view to_string(Violation::Clause clause);

struct Verdict {
    bool ok = true;
    std::vector<Violation> violations; // empty iff ok

    explicit operator bool() const noexcept { return ok; }
};

// Closed-world instance-of check; see Violation::Clause for the clauses.
Verdict is_instance(const ObjectModel& om, const CheckedClassDiagram& cd);

// Sorted, duplicate-free class names instantiated in `om`.
std::vector<std::string> classes_of(const ObjectModel& om);

} // namespace semdiff::cd
