#include <fstream>
#include <functional>
#include <random>

#include "doctest.h"
#include "semdiff/error.hpp"
#include "semdiff/parse.hpp"
#include "support.hpp"

using namespace semdiff;
using semdiff::ad::Expr;

namespace {

std::string parse_error(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        return e.what();
    }
    FAIL("no parse error");
    return {};
}

std::string ident(std::mt19937& rng, const char* prefix) { return prefix + std::to_string(rng() % 5); }

Expr random_expr(std::mt19937& rng, int depth, bool boolean) {
    using Op = Expr::Op;
    if (boolean) {
        switch (depth <= 0 ? 0 : rng() % 4) {
        case 0: {
            static const Op cmp[] = {Op::Lt, Op::Le, Op::Gt, Op::Ge, Op::Eq, Op::Ne};
            return Expr::binary(cmp[rng() % 6], random_expr(rng, depth - 1, false), random_expr(rng, depth - 1, false));
        }
        case 1: return Expr::unary(Op::Not, random_expr(rng, depth - 1, true));
        case 2: return Expr::binary(Op::And, random_expr(rng, depth - 1, true), random_expr(rng, depth - 1, true));
        default: return Expr::binary(Op::Or, random_expr(rng, depth - 1, true), random_expr(rng, depth - 1, true));
        }
    }
    switch (depth <= 0 ? rng() % 2 : rng() % 5) {
    case 0: return Expr::constant(static_cast<std::int64_t>(rng() % 21) - 10);
    case 1: return Expr::variable(ident(rng, "v"));
    case 2: return Expr::unary(Op::Neg, random_expr(rng, depth - 1, false));
    case 3: return Expr::binary(Op::Add, random_expr(rng, depth - 1, false), random_expr(rng, depth - 1, false));
    default: return Expr::binary(Op::Sub, random_expr(rng, depth - 1, false), random_expr(rng, depth - 1, false));
    }
}

cd::MultRange random_mult(std::mt19937& rng) {
    const auto lo = static_cast<std::uint32_t>(rng() % 3);
    switch (rng() % 3) {
    case 0: return cd::MultRange::at_least(lo);
    case 1: return cd::MultRange::exactly(lo);
    default: return {lo, lo + static_cast<std::uint32_t>(rng() % 3)};
    }
}

} // namespace

TEST_CASE("minimal class diagram") {
    const auto cd = text::parse_cd("classdiagram X { class A; }");
    CHECK(cd.name == "X");
    REQUIRE(cd.classes.size() == 1);
    CHECK(cd.classes[0].name == "A");
}

TEST_CASE("cd_v2 fixture") {
    const auto cd = std::get<cd::ClassDiagram>(text::load_source(fixtures::path("cd_v2.cd")).model);
    CHECK(cd.name == "cd_v2");
    REQUIRE(cd.classes.size() == 3);
    CHECK(cd.classes[1].name == "Manager");
    CHECK(cd.classes[1].superclass == "Employee");
    REQUIRE(cd.associations.size() == 2);
    CHECK(cd.associations[0] == cd::Association{"manages", {"Manager", cd::MultRange::exactly(1)},
                                                {"Employee", cd::MultRange::many()}});
    CHECK(cd.associations[1] == cd::Association{"handles", {"Employee", cd::MultRange::exactly(1)},
                                                {"Task", cd::MultRange::many()}});
}

TEST_CASE("multiplicity forms with and without brackets") {
    const auto cd = text::parse_cd("classdiagram X { class A; association r 1..* A -- A [0..2]; "
                                   "association s [*] A -- A 3; }");
    CHECK(cd.associations[0].side_a.mult == cd::MultRange::at_least(1));
    CHECK(cd.associations[0].side_b.mult == cd::MultRange{0, 2});
    CHECK(cd.associations[1].side_a.mult == cd::MultRange::many());
    CHECK(cd.associations[1].side_b.mult == cd::MultRange::exactly(3));
}

TEST_CASE("parse errors carry line and column") {
    const auto msg = parse_error([] { text::parse_cd("classdiagram X {\n  class A extends;\n}"); });
    CHECK(msg.find("2:18") != std::string::npos);
    CHECK(msg.find("expected") != std::string::npos);
    parse_error([] { text::parse_cd("classdiagram { }"); });
    parse_error([] { text::parse_cd("classdiagram X { class A; "); });
    parse_error([] { text::parse_od("objectdiagram o { a : ; }"); });
    parse_error([] { text::parse_ad("activitydiagram a { input x : 0..; }"); });
    parse_error([] { text::parse_ad("activitydiagram a { edge x -> ; }"); });
    parse_error([] { text::parse_expr("a < "); });
    parse_error([] { text::parse_expr("(a"); });
    parse_error([] { text::parse_cd("classdiagram X { class A; } trailing"); });
}

TEST_CASE("kind comes from the keyword") {
    CHECK(text::detect_kind("// c\nclassdiagram X {}") == text::SourceKind::ClassDiagram);
    CHECK(text::detect_kind("objectdiagram X {}") == text::SourceKind::ObjectDiagram);
    CHECK(text::detect_kind("activitydiagram X {}") == text::SourceKind::ActivityDiagram);
    parse_error([] { text::detect_kind("statechart X {}"); });
    CHECK(text::load_source(fixtures::path("om1.od")).kind == text::SourceKind::ObjectDiagram);
}

TEST_CASE("missing files are Io errors") {
    try {
        text::load_source(fixtures::path("nope.cd"));
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}

TEST_CASE("parse errors name the file") {
    const std::string bad = "/tmp/semdiff_parse_test_bad.cd";
    {
        std::ofstream(bad) << "classdiagram X { class ; }";
    }
    try {
        text::load_source(bad);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(bad) != std::string::npos);
    }
}

TEST_CASE("expressions") {
    using Op = Expr::Op;
    CHECK(text::parse_expr("tickets < 12") ==
          Expr::binary(Op::Lt, Expr::variable("tickets"), Expr::constant(12)));
    CHECK(text::parse_expr("a - b - c") ==
          Expr::binary(Op::Sub, Expr::binary(Op::Sub, Expr::variable("a"), Expr::variable("b")),
                       Expr::variable("c")));
    CHECK(text::parse_expr("-3") == Expr::constant(-3));
    CHECK(text::parse_expr("!(a == 1) || b >= 2 && c != 3") ==
          Expr::binary(Op::Or, Expr::unary(Op::Not, Expr::binary(Op::Eq, Expr::variable("a"), Expr::constant(1))),
                       Expr::binary(Op::And, Expr::binary(Op::Ge, Expr::variable("b"), Expr::constant(2)),
                                    Expr::binary(Op::Ne, Expr::variable("c"), Expr::constant(3)))));
    CHECK(ad::to_string(text::parse_expr("a - (b - c)")) == "a - (b - c)");
    CHECK(ad::to_string(text::parse_expr("(a - b) - c")) == "a - b - c");
}

TEST_CASE("expression round trip") {
    std::mt19937 rng(11);
    for (int i = 0; i < 500; ++i) {
        const Expr e = random_expr(rng, 4, i % 2 == 0);
        const std::string s = ad::to_string(e);
        INFO(s);
        CHECK(text::parse_expr(s) == e);
    }
}

TEST_CASE("class and object diagram round trip") {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        cd::ClassDiagram cd{"cd" + std::to_string(i), {}, {}};
        const int nc = 1 + static_cast<int>(rng() % 4);
        for (int c = 0; c < nc; ++c) {
            cd::ClassDecl decl{"C" + std::to_string(c), rng() % 4 == 0, std::nullopt};
            if (c > 0 && rng() % 2) {
                decl.superclass = "C" + std::to_string(rng() % c);
            }
            cd.classes.push_back(decl);
        }
        for (int a = 0; a < static_cast<int>(rng() % 3); ++a) {
            cd.associations.push_back({"r" + std::to_string(a),
                                       {"C" + std::to_string(rng() % nc), random_mult(rng)},
                                       {"C" + std::to_string(rng() % nc), random_mult(rng)}});
        }
        CHECK(text::parse_cd(text::print_cd(cd)) == cd);

        cd::ObjectModel om{"om" + std::to_string(i), {}, {}};
        for (int o = 0; o < static_cast<int>(rng() % 4); ++o) {
            om.objects.push_back({"o" + std::to_string(o), "C" + std::to_string(rng() % nc)});
        }
        for (int l = 0; l < static_cast<int>(rng() % 4) && !om.objects.empty(); ++l) {
            om.links.push_back({"r0", om.objects[rng() % om.objects.size()].id,
                                om.objects[rng() % om.objects.size()].id});
        }
        CHECK(text::parse_od(text::print_od(om)) == om);
    }
}

TEST_CASE("activity diagram round trip") {
    for (const char* f : {"ad_v1", "ad_v2", "ad_v3"}) {
        const auto ad = std::get<ad::ActivityDiagram>(text::load_source(fixtures::path(std::string(f) + ".ad")).model);
        CHECK(text::parse_ad(text::print_ad(ad)) == ad);
    }
    std::mt19937 rng(3);
    static const ad::NodeKind kinds[] = {ad::NodeKind::Initial, ad::NodeKind::Final,    ad::NodeKind::Action,
                                         ad::NodeKind::Decision, ad::NodeKind::Merge, ad::NodeKind::Fork,
                                         ad::NodeKind::Join};
    for (int i = 0; i < 200; ++i) {
        ad::ActivityDiagram ad;
        ad.name = "a" + std::to_string(i);
        if (rng() % 2) {
            ad.inputs.push_back({"v0", 0, static_cast<std::int64_t>(rng() % 9), std::nullopt});
        }
        if (rng() % 2) {
            ad.locals.push_back({"v1", -2, 4, static_cast<std::int64_t>(rng() % 3)});
        }
        const int nn = 1 + static_cast<int>(rng() % 6);
        for (int n = 0; n < nn; ++n) {
            ad::Node node{"n" + std::to_string(n), kinds[rng() % 7], {}, {}};
            if (node.kind == ad::NodeKind::Action) {
                node.action = rng() % 2 ? node.id : "act" + std::to_string(rng() % 3);
                for (int k = 0; k < static_cast<int>(rng() % 3); ++k) {
                    node.effects.push_back({"v1", random_expr(rng, 2, false)});
                }
            }
            ad.nodes.push_back(node);
        }
        for (int e = 0; e < static_cast<int>(rng() % 6); ++e) {
            ad::Edge edge{"n" + std::to_string(rng() % nn), "n" + std::to_string(rng() % nn), std::nullopt};
            if (rng() % 2) {
                edge.guard = random_expr(rng, 2, true);
            }
            ad.edges.push_back(edge);
        }
        const std::string printed = text::print_ad(ad);
        INFO(printed);
        CHECK(text::parse_ad(printed) == ad);
    }
}
