#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "vbcalc/cli.hpp"
#include "vbcalc/specfile.hpp"

using namespace vbcalc;

namespace {

std::string fixture(const std::string& name) {
    return std::string(VBCALC_FIXTURE_DIR) + "/" + name;
}

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("specfile: all block kinds parse and resolve") {
    SpecParser parser;
    SpecDocument doc = parser.parse(R"(
algebroid tm
  base x
  frame e
  anchor e = 1
end
connection g tm 1
  christoffel e[1,1] = x
end
vb w trivialcore tm g
end
cochain c w.total
  degree 1
  value [e] = x*e
  symbol [] = x^2, 0
end
triple t w
  X = 1
end
imsection s tm g
  X = 1
  U[1,1] = 0
  V[1,1] = 1
end
)");
    CHECK(doc.algebroids.count("tm") == 1);
    CHECK(doc.algebroids.count("w.total") == 1);
    CHECK(doc.algebroids.count("w.fat") == 1);
    CHECK(doc.connections.count("g") == 1);
    CHECK(doc.vbs.count("w") == 1);
    CHECK(doc.cochains.count("c") == 1);
    CHECK(doc.triples.count("t") == 1);
    CHECK(doc.imsections.count("s") == 1);
    CHECK(doc.cochains.at("c").degree() == 1);
}

TEST_CASE("specfile: errors carry positions and names") {
    SpecParser parser;
    CHECK_THROWS_AS(parser.parse("algebroid a\n  frame e\n  junk = 1\nend\n"),
                    ParseError);
    CHECK_THROWS_AS(parser.parse("algebroid a\n  frame e\nend\nalgebroid a\n  frame f\nend\n"),
                    ParseError);
    // unknown identifier in an expression
    try {
        parser.parse("algebroid a\n  base x\n  frame e\n  anchor e = y\nend\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
        CHECK(e.line == 4);
    }
    // degree cap
    CHECK_THROWS_AS(
        parser.parse("algebroid a\n  frame e\nend\ncochain c a\n  degree 9\nend\n"),
        ParseError);
    // poly cap
    CHECK_THROWS_AS(
        parser.parse("algebroid a\n  base x\n  frame e\n  anchor e = x^17\nend\n"),
        ParseError);
}

TEST_CASE("specfile: section expressions must be linear in frame elements") {
    SpecParser parser;
    CHECK_THROWS_AS(
        parser.parse("algebroid a\n  frame e1, e2\n  bracket [e1, e2] = e1*e2\nend\n"),
        ParseError);
    CHECK_THROWS_AS(
        parser.parse("algebroid a\n  frame e1, e2\n  bracket [e1, e2] = 1\nend\n"),
        ParseError);
}

TEST_CASE("cmd_validate: exit codes 0, 1, 2") {
    auto good = run({"validate", fixture("aff1.alg")});
    CHECK(good.code == 0);

    auto bad = run({"validate", fixture("broken_jacobi.alg")});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("jacobi(e1,e2,e3)") != std::string::npos);

    auto malformed = run({"validate", fixture("malformed.alg")});
    CHECK(malformed.code == 2);
    CHECK(malformed.err.find("parse error") != std::string::npos);

    auto missing = run({"validate", "/nonexistent/file.alg"});
    CHECK(missing.code == 2);
}

TEST_CASE("cmd_validate: every shipped good fixture passes") {
    for (const char* f : {"abelian1.alg", "abelian2.alg", "aff1.alg", "so3.alg",
                          "tm.alg", "tc_tm.alg", "fc_aff1.alg", "tangent.alg",
                          "gauge_tm.alg"}) {
        auto r = run({"validate", fixture(f)});
        INFO(f << "\n" << r.out << r.err);
        CHECK(r.code == 0);
    }
}

TEST_CASE("cmd_validate: broken fixtures fail with witnesses") {
    auto anchor = run({"validate", fixture("broken_anchor.alg")});
    CHECK(anchor.code == 1);
    CHECK(anchor.out.find("anchor_compat(e1,e2)") != std::string::npos);

    auto flat = run({"validate", fixture("broken_flat.alg")});
    CHECK(flat.code == 1);
    CHECK(flat.out.find("flatness(e1,e2)") != std::string::npos);

    auto vb = run({"validate", fixture("broken_vb.alg")});
    CHECK(vb.code == 1);
    CHECK(vb.out.find("bracket_core_core(c1,c2)") != std::string::npos);
    CHECK(vb.out.find("anchor_shape(e1)") != std::string::npos);
}

TEST_CASE("cmd_diff: adjoint of a degree-0 cochain in aff(1)") {
    auto r = run({"diff", fixture("aff1.alg"), "adj1", "--check-d2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("value [e2] = (1)*e2") != std::string::npos);
    CHECK(r.out.find("value [e1] = 0") != std::string::npos);
    CHECK(r.out.find("d2=0: pass") != std::string::npos);
}

TEST_CASE("cmd_diff: identity 1-cochain of aff(1)") {
    auto r = run({"diff", fixture("aff1.alg"), "ident"});
    CHECK(r.code == 0);
    CHECK(r.out.find("value [e1, e2] = (1)*e2") != std::string::npos);
}

TEST_CASE("cmd_diff: unknown cochain and degree cap") {
    CHECK(run({"diff", fixture("aff1.alg"), "nope"}).code == 2);
    auto capped = run({"--degree-cap", "1", "diff", fixture("aff1.alg"), "ident"});
    CHECK(capped.code == 2);
    CHECK(capped.err.find("degree cap") != std::string::npos);
}

TEST_CASE("cmd_check_im: triples") {
    auto good = run({"check-im", fixture("tc_tm.alg"), "internal"});
    INFO(good.out << good.err);
    CHECK(good.code == 0);

    auto bad = run({"check-im", fixture("tc_tm.alg"), "mismatch"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("[FAIL] sigma_delta") != std::string::npos);
    // only the symbol condition fails
    std::size_t fails = 0;
    for (std::size_t p = 0; (p = bad.out.find("[FAIL]", p)) != std::string::npos; ++p)
        ++fails;
    CHECK(fails == 1);

    CHECK(run({"check-im", fixture("tc_tm.alg"), "nothere"}).code == 2);
}

TEST_CASE("cmd_check_im: imsections") {
    auto good = run({"check-im", fixture("tc_tm.alg"), "good"});
    INFO(good.out << good.err);
    CHECK(good.code == 0);

    auto bad = run({"check-im", fixture("tc_tm.alg"), "bad"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("pde_connection") != std::string::npos);
    CHECK(bad.out.find("residual [1]") != std::string::npos);
}

TEST_CASE("cmd_suite: passes and is byte-stable under a fixed seed") {
    auto r1 = run({"--seed", "42", "--format", "records", "suite"});
    INFO(r1.err);
    CHECK(r1.code == 0);
    auto r2 = run({"--seed", "42", "--format", "records", "suite"});
    CHECK(r1.out == r2.out);
    auto r3 = run({"--seed", "43", "--format", "records", "suite"});
    CHECK(r3.code == 0);

    // fixture filtering restricts the scope
    auto one = run({"--format", "records", "suite", "--fixture", "tangent-aff1"});
    CHECK(one.code == 0);
    CHECK(one.out.find("tangent-aff1") != std::string::npos);
    CHECK(one.out.find("so3") == std::string::npos);
}
