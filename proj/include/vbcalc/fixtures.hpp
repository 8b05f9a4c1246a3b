#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vbcalc/algebroid.hpp"
#include "vbcalc/im.hpp"
#include "vbcalc/vb.hpp"

namespace vbcalc::fixtures {

/// Abelian rank-n algebroid over a point.
inline FrameAlgebroid abelian(std::size_t rank) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rank; ++i) names.push_back("e" + std::to_string(i + 1));
    return FrameAlgebroid::abelian(Chart(), rank, std::move(names));
}

/// aff(1): [e1, e2] = e2 over a point.
inline FrameAlgebroid aff1() {
    Chart pt;
    auto A = FrameAlgebroid::abelian(pt, 2, {"e1", "e2"});
    std::vector<PolyVector> anchor(2, PolyVector::zero(pt));
    std::vector<std::vector<Section>> c(2, std::vector<Section>(2, Section::zero(pt, 2)));
    Section e2 = Section::unit(pt, 2, 1);
    c[0][1] = e2;
    c[1][0] = -e2;
    return FrameAlgebroid(pt, 2, {"e1", "e2"}, std::move(anchor), std::move(c));
}

/// so(3): [e_a, e_b] = eps_{abc} e_c over a point.
inline FrameAlgebroid so3() {
    Chart pt;
    std::vector<PolyVector> anchor(3, PolyVector::zero(pt));
    std::vector<std::vector<Section>> c(3, std::vector<Section>(3, Section::zero(pt, 3)));
    auto unit = [&](std::size_t i) { return Section::unit(pt, 3, i); };
    c[0][1] = unit(2);
    c[1][0] = -unit(2);
    c[1][2] = unit(0);
    c[2][1] = -unit(0);
    c[2][0] = unit(1);
    c[0][2] = -unit(1);
    return FrameAlgebroid(pt, 3, {"e1", "e2", "e3"}, std::move(anchor), std::move(c));
}

/// TM over the line: rank 1, rho(e) = d/dx.
inline FrameAlgebroid tangent_line() {
    Chart x({"x"});
    std::vector<PolyVector> anchor{PolyVector::coordinate(x, 0)};
    std::vector<std::vector<Section>> c(1, std::vector<Section>(1, Section::zero(x, 1)));
    return FrameAlgebroid(x, 1, {"e"}, std::move(anchor), std::move(c));
}

/// Deliberately broken Jacobi: rank 3 over a point with [e1,e2] = e3 and
/// [e1,e3] = e1; the (1,2,3) Jacobiator is -e3.
inline FrameAlgebroid broken_jacobi() {
    Chart pt;
    std::vector<PolyVector> anchor(3, PolyVector::zero(pt));
    std::vector<std::vector<Section>> c(3, std::vector<Section>(3, Section::zero(pt, 3)));
    c[0][1] = Section::unit(pt, 3, 2);
    c[1][0] = -c[0][1];
    c[0][2] = Section::unit(pt, 3, 0);
    c[2][0] = -c[0][2];
    return FrameAlgebroid(pt, 3, {"e1", "e2", "e3"}, std::move(anchor), std::move(c));
}

/// Deliberately broken anchor: rho(e1) = d/dx, rho(e2) = x d/dx, c = 0.
inline FrameAlgebroid broken_anchor() {
    Chart x({"x"});
    PolyVector d = PolyVector::coordinate(x, 0);
    PolyVector xd = Polynomial::variable(x, 0) * d;
    std::vector<PolyVector> anchor{d, xd};
    std::vector<std::vector<Section>> c(2, std::vector<Section>(2, Section::zero(x, 2)));
    return FrameAlgebroid(x, 2, {"e1", "e2"}, std::move(anchor), std::move(c));
}

/// Non-flat connection on rank-2 E over abelian rank-2 base:
/// V1 = [[0,1],[0,0]], V2 = [[0,0],[1,0]].
inline Connection nonflat_ab2() {
    Chart pt;
    Connection nabla = Connection::zero(pt, 2, 2);
    nabla.gamma(0).at(0, 1) = Polynomial::constant(pt, 1);
    nabla.gamma(1).at(1, 0) = Polynomial::constant(pt, 1);
    return nabla;
}

/// Connection Gamma(x) = g on the rank-1 bundle over TM of the line.
inline Connection line_connection(const Polynomial& g) {
    Chart x({"x"});
    Connection nabla = Connection::zero(x, 1, 1);
    nabla.gamma(0).at(0, 0) = g;
    return nabla;
}

/// Rank-1 representation of aff(1): nabla_{e1} = id, nabla_{e2} = 0 (flat).
inline Connection aff1_rep() {
    Chart pt;
    Connection nabla = Connection::zero(pt, 2, 1);
    nabla.gamma(0).at(0, 0) = Polynomial::constant(pt, 1);
    return nabla;
}

/// A named algebroid fixture.
struct AlgebroidFixture {
    std::string name;
    FrameAlgebroid algebroid;
};

inline std::vector<AlgebroidFixture> algebroid_fixtures() {
    return {
        {"abelian1", abelian(1)}, {"abelian2", abelian(2)}, {"aff1", aff1()},
        {"so3", so3()},           {"tm", tangent_line()},
    };
}

/// A named VB fixture with its trivial-core data when applicable.
struct VBFixture {
    std::string name;
    SplitVB vb;
};

inline std::vector<VBFixture> vb_fixtures() {
    Chart x({"x"});
    std::vector<VBFixture> out;
    out.push_back({"tc-tm-g0", build_trivial_core(tangent_line(), 1,
                                                  line_connection(Polynomial::zero(x)))});
    out.push_back({"tc-tm-gx",
                   build_trivial_core(tangent_line(), 1,
                                      line_connection(Polynomial::variable(x, 0)))});
    out.push_back({"tc-aff1", build_trivial_core(aff1(), 1, aff1_rep())});
    out.push_back({"fc-aff1", build_full_core(aff1(), 1, aff1_rep())});
    out.push_back({"tangent-aff1", build_tangent(aff1())});
    out.push_back({"tangent-tm", build_tangent(tangent_line())});
    out.push_back({"gauge-tm-g0",
                   gauge_vb(tangent_line(), line_connection(Polynomial::zero(x)), 1)});
    out.push_back({"gauge-tm-gx",
                   gauge_vb(tangent_line(),
                            line_connection(Polynomial::variable(x, 0)), 1)});
    return out;
}

/// Trivial-core fixtures with their defining data, for the equivalence suite.
struct TrivialCoreFixture {
    std::string name;
    FrameAlgebroid algebroid;
    Connection nabla;
    std::size_t n;
};

inline std::vector<TrivialCoreFixture> trivial_core_fixtures() {
    Chart x({"x"});
    return {
        {"tc-tm-g0", tangent_line(), line_connection(Polynomial::zero(x)), 1},
        {"tc-tm-gx", tangent_line(), line_connection(Polynomial::variable(x, 0)), 1},
        {"tc-aff1", aff1(), aff1_rep(), 1},
    };
}

/// Hand-built broken VB presentation: [core, core] != 0.
inline SplitVB broken_vb_corecore() {
    Chart pt;
    std::vector<PolyVector> anchor(2, PolyVector::zero(pt));
    std::vector<std::vector<Section>> c(2, std::vector<Section>(2, Section::zero(pt, 2)));
    c[0][1] = Section::unit(pt, 2, 0);
    c[1][0] = -c[0][1];
    auto base = std::make_shared<const FrameAlgebroid>(
        FrameAlgebroid::abelian(pt, 0, {}));
    auto total = std::make_shared<const FrameAlgebroid>(
        FrameAlgebroid(pt, 2, {"c1", "c2"}, std::move(anchor), std::move(c)));
    return SplitVB(base, 0, 2, total);
}

/// Hand-built broken VB presentation: the linear-generator anchor has a
/// fiber-quadratic term.
inline SplitVB broken_vb_anchor() {
    Chart x({"x"});
    Chart tot = x.extended({"v1"});
    Polynomial v = Polynomial::variable(tot, 1);
    std::vector<PolyVector> anchor;
    anchor.push_back(PolyVector(tot, {Polynomial::zero(tot), v * v}));
    std::vector<std::vector<Section>> c(1, std::vector<Section>(1, Section::zero(tot, 1)));
    auto base = std::make_shared<const FrameAlgebroid>(
        FrameAlgebroid::abelian(x, 1, {"e1"}));
    auto total = std::make_shared<const FrameAlgebroid>(
        FrameAlgebroid(tot, 1, {"e1"}, std::move(anchor), std::move(c)));
    return SplitVB(base, 1, 0, total);
}

}  // namespace vbcalc::fixtures
