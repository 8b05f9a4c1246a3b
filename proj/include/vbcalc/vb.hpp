#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vbcalc/algebroid.hpp"
#include "vbcalc/defcomplex.hpp"

namespace vbcalc {

/// Split presentation of a VB-algebroid (W, E; A, M) over the total space of
/// E. The total algebroid lives over the extended chart (x, v) and its frame
/// lists the r linear generators first, then the k core generators.
class SplitVB {
public:
    SplitVB() = default;

    SplitVB(std::shared_ptr<const FrameAlgebroid> base, std::size_t side_rank,
            std::size_t core_rank, std::shared_ptr<const FrameAlgebroid> total)
        : base_(std::move(base)),
          side_rank_(side_rank),
          core_rank_(core_rank),
          total_(std::move(total)) {
        if (total_->rank() != base_->rank() + core_rank_)
            throw Error("total rank must be r + k");
        if (total_->chart().dim() != base_->chart().dim() + side_rank_)
            throw Error("total chart must extend the base chart by n fiber names");
        for (std::size_t i = 0; i < base_->chart().dim(); ++i)
            if (total_->chart().name(i) != base_->chart().name(i))
                throw Error("total chart must start with the base chart");
    }

    const FrameAlgebroid& base() const { return *base_; }
    const FrameAlgebroid& total() const { return *total_; }
    const std::shared_ptr<const FrameAlgebroid>& base_ptr() const { return base_; }
    const std::shared_ptr<const FrameAlgebroid>& total_ptr() const { return total_; }

    std::size_t m() const { return base_->chart().dim(); }
    std::size_t r() const { return base_->rank(); }
    std::size_t n() const { return side_rank_; }
    std::size_t k() const { return core_rank_; }

    bool is_core_generator(std::size_t i) const { return i >= r(); }

    /// Indices of the fiber coordinates inside the total chart.
    std::vector<std::size_t> v_vars() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < side_rank_; ++i) out.push_back(m() + i);
        return out;
    }

private:
    std::shared_ptr<const FrameAlgebroid> base_;
    std::size_t side_rank_ = 0;
    std::size_t core_rank_ = 0;
    std::shared_ptr<const FrameAlgebroid> total_;
};

namespace detail {

inline std::vector<std::string> fiber_names(const Chart& base, std::size_t n,
                                            const std::string& prefix) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        std::string nm = prefix + std::to_string(i + 1);
        if (base.find(nm) >= 0) throw Error("fiber name '" + nm + "' collides");
        names.push_back(nm);
    }
    return names;
}

}  // namespace detail

/// Action VB-algebroid of a representation: core rank 0, total over (x, v),
/// anchor of a_alpha = rho^i_alpha d/dx^i - Gamma_alpha[B][A] v^A d/dv^B,
/// brackets of the pulled-back frame given by the pulled-back structure.
/// The flatness precondition is bypassed only by the _unchecked variant
/// (used to exhibit the flatness <-> Jacobi equivalence).
inline SplitVB build_trivial_core_unchecked(const FrameAlgebroid& A, std::size_t n,
                                            const Connection& nabla) {
    if (nabla.algebroid_rank() != A.rank() || nabla.bundle_rank() != n)
        throw Error("connection shape mismatch");
    Chart tot = A.chart().extended(detail::fiber_names(A.chart(), n, "v"));
    const std::size_t m = A.chart().dim();
    const std::size_t r = A.rank();

    std::vector<PolyVector> anchor;
    for (std::size_t alpha = 0; alpha < r; ++alpha) {
        std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
        for (std::size_t i = 0; i < m; ++i)
            comps[i] = A.anchor_of_frame(alpha).component(i).extended_to(tot);
        for (std::size_t B = 0; B < n; ++B) {
            Polynomial acc = Polynomial::zero(tot);
            for (std::size_t C = 0; C < n; ++C) {
                const Polynomial& g = nabla.gamma(alpha).at(B, C);
                if (g.is_zero()) continue;
                acc = acc - g.extended_to(tot) * Polynomial::variable(tot, m + C);
            }
            comps[m + B] = acc;
        }
        anchor.emplace_back(tot, std::move(comps));
    }

    std::vector<std::vector<Section>> structure(
        r, std::vector<Section>(r, Section::zero(tot, r)));
    for (std::size_t b = 0; b < r; ++b)
        for (std::size_t g = 0; g < r; ++g) {
            Section s = Section::zero(tot, r);
            for (std::size_t a = 0; a < r; ++a)
                s.coefficients[a] =
                    A.frame_bracket(b, g).coefficients[a].extended_to(tot);
            structure[b][g] = std::move(s);
        }

    auto base = std::make_shared<const FrameAlgebroid>(A);
    auto total = std::make_shared<const FrameAlgebroid>(
        tot, r, A.frame_names(), std::move(anchor), std::move(structure));
    return SplitVB(base, n, 0, total);
}

inline SplitVB build_trivial_core(const FrameAlgebroid& A, std::size_t n,
                                  const Connection& nabla) {
    Report flat = check_flatness(A, nabla);
    if (!flat.all_passed())
        throw Error("build_trivial_core: connection is not flat (" +
                    flat.first_failure()->name + ")");
    return build_trivial_core_unchecked(A, n, nabla);
}

/// Semidirect product A x C of a representation on C: side rank 0, so the
/// total chart is the base chart; frame = r linear + k core generators.
inline SplitVB build_full_core(const FrameAlgebroid& A, std::size_t k,
                               const Connection& nabla) {
    if (nabla.algebroid_rank() != A.rank() || nabla.bundle_rank() != k)
        throw Error("connection shape mismatch");
    Report flat = check_flatness(A, nabla);
    if (!flat.all_passed())
        throw Error("build_full_core: connection is not flat (" +
                    flat.first_failure()->name + ")");
    const Chart& chart = A.chart();
    const std::size_t r = A.rank();
    const std::size_t rank = r + k;

    std::vector<std::string> names = A.frame_names();
    for (std::size_t B = 0; B < k; ++B) names.push_back("c" + std::to_string(B + 1));

    std::vector<PolyVector> anchor;
    for (std::size_t a = 0; a < r; ++a) anchor.push_back(A.anchor_of_frame(a));
    for (std::size_t B = 0; B < k; ++B) anchor.push_back(PolyVector::zero(chart));

    std::vector<std::vector<Section>> structure(
        rank, std::vector<Section>(rank, Section::zero(chart, rank)));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            Section s = Section::zero(chart, rank);
            for (std::size_t g = 0; g < r; ++g)
                s.coefficients[g] = A.frame_bracket(a, b).coefficients[g];
            structure[a][b] = std::move(s);
        }
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t B = 0; B < k; ++B) {
            Section s = Section::zero(chart, rank);
            for (std::size_t C = 0; C < k; ++C)
                s.coefficients[r + C] = nabla.gamma(a).at(C, B);
            structure[a][r + B] = s;
            structure[r + B][a] = -s;
        }

    auto base = std::make_shared<const FrameAlgebroid>(A);
    auto total = std::make_shared<const FrameAlgebroid>(
        chart, rank, std::move(names), std::move(anchor), std::move(structure));
    return SplitVB(base, 0, k, total);
}

/// Tangent VB-algebroid (TA, TM; A, M): fiber chart gets one dotted name per
/// base coordinate; linear generators d eps_alpha, core generators
/// hat eps_alpha. Anchors are the complete and vertical lifts of the base
/// anchor; brackets follow d[a,b] with d(f a) = f da + fdot hat-a.
inline SplitVB build_tangent(const FrameAlgebroid& A) {
    const std::size_t m = A.chart().dim();
    const std::size_t r = A.rank();
    std::vector<std::string> fibers;
    for (std::size_t i = 0; i < m; ++i) {
        std::string nm = "d" + A.chart().name(i);
        if (A.chart().find(nm) >= 0)
            throw Error("tangent fiber name '" + nm + "' collides");
        fibers.push_back(nm);
    }
    Chart tot = A.chart().extended(fibers);
    const std::size_t rank = 2 * r;

    std::vector<std::string> names;
    for (std::size_t a = 0; a < r; ++a) names.push_back("d" + A.frame_name(a));
    for (std::size_t a = 0; a < r; ++a) names.push_back("hat_" + A.frame_name(a));

    // fdot = sum_j dx^j d f/dx^j, the fiberwise-linear lift of df.
    auto lift_dot = [&](const Polynomial& f) {
        Polynomial acc = Polynomial::zero(tot);
        for (std::size_t j = 0; j < m; ++j)
            acc = acc + Polynomial::variable(tot, m + j) *
                            f.derivative(j).extended_to(tot);
        return acc;
    };

    std::vector<PolyVector> anchor;
    for (std::size_t a = 0; a < r; ++a) {
        std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
        for (std::size_t i = 0; i < m; ++i) {
            const Polynomial& rho = A.anchor_of_frame(a).component(i);
            comps[i] = rho.extended_to(tot);
            comps[m + i] = lift_dot(rho);
        }
        anchor.emplace_back(tot, std::move(comps));
    }
    for (std::size_t a = 0; a < r; ++a) {
        std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
        for (std::size_t i = 0; i < m; ++i)
            comps[m + i] = A.anchor_of_frame(a).component(i).extended_to(tot);
        anchor.emplace_back(tot, std::move(comps));
    }

    std::vector<std::vector<Section>> structure(
        rank, std::vector<Section>(rank, Section::zero(tot, rank)));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            const Section& br = A.frame_bracket(a, b);
            Section dd = Section::zero(tot, rank);
            for (std::size_t g = 0; g < r; ++g) {
                dd.coefficients[g] = br.coefficients[g].extended_to(tot);
                dd.coefficients[r + g] = lift_dot(br.coefficients[g]);
            }
            structure[a][b] = std::move(dd);
            Section dc = Section::zero(tot, rank);
            for (std::size_t g = 0; g < r; ++g)
                dc.coefficients[r + g] = br.coefficients[g].extended_to(tot);
            structure[a][r + b] = dc;
            structure[r + b][a] = -dc;
        }

    auto base = std::make_shared<const FrameAlgebroid>(A);
    auto total = std::make_shared<const FrameAlgebroid>(
        tot, rank, std::move(names), std::move(anchor), std::move(structure));
    return SplitVB(base, m, r, total);
}

// ---------------------------------------------------------------------------
// Linearity predicates on the split presentation.

/// Linear vector field on E: x-components fiber-constant, v-components
/// homogeneous of fiber degree 1 (or zero).
inline bool is_linear_vector_field(const SplitVB& W, const PolyVector& X) {
    auto vv = W.v_vars();
    for (std::size_t i = 0; i < W.m(); ++i)
        if (X.component(i).degree_in(vv) != 0) return false;
    for (std::size_t A = 0; A < W.n(); ++A)
        if (!X.component(W.m() + A).homogeneous_in(vv, 1)) return false;
    return true;
}

/// Vertical lift of a section of E: x-components zero, v-components
/// fiber-constant.
inline bool is_vertical_constant_field(const SplitVB& W, const PolyVector& X) {
    auto vv = W.v_vars();
    for (std::size_t i = 0; i < W.m(); ++i)
        if (!X.component(i).is_zero()) return false;
    for (std::size_t A = 0; A < W.n(); ++A)
        if (X.component(W.m() + A).degree_in(vv) != 0) return false;
    return true;
}

/// Linear section of W -> E: linear-generator coefficients fiber-constant,
/// core coefficients fiber-linear homogeneous.
inline bool is_linear_section(const SplitVB& W, const Section& s) {
    auto vv = W.v_vars();
    for (std::size_t a = 0; a < W.r(); ++a)
        if (s.coefficients[a].degree_in(vv) != 0) return false;
    for (std::size_t B = 0; B < W.k(); ++B)
        if (!s.coefficients[W.r() + B].homogeneous_in(vv, 1)) return false;
    return true;
}

/// Core section: no linear-generator part, fiber-constant core coefficients.
inline bool is_core_section(const SplitVB& W, const Section& s) {
    auto vv = W.v_vars();
    for (std::size_t a = 0; a < W.r(); ++a)
        if (!s.coefficients[a].is_zero()) return false;
    for (std::size_t B = 0; B < W.k(); ++B)
        if (s.coefficients[W.r() + B].degree_in(vv) != 0) return false;
    return true;
}

/// Checks Def. VB-algebroid linearity conditions plus the anchor shape
/// invariants on all generators; names violations.
inline Report validate_vb_axioms(const SplitVB& W) {
    Report rep;
    const FrameAlgebroid& T = W.total();
    for (std::size_t i = 0; i < T.rank(); ++i) {
        const PolyVector& X = T.anchor_of_frame(i);
        std::string name = "anchor_shape(" + T.frame_name(i) + ")";
        if (!W.is_core_generator(i)) {
            if (is_linear_vector_field(W, X))
                rep.add_pass(name);
            else
                rep.add_fail(name, "anchor not linear: " + X.to_string());
        } else {
            if (is_vertical_constant_field(W, X))
                rep.add_pass(name);
            else
                rep.add_fail(name, "anchor not a vertical constant lift: " +
                                       X.to_string());
        }
    }
    for (std::size_t i = 0; i < T.rank(); ++i)
        for (std::size_t j = i + 1; j < T.rank(); ++j) {
            const Section& br = T.frame_bracket(i, j);
            bool ci = W.is_core_generator(i), cj = W.is_core_generator(j);
            std::string pair = "(" + T.frame_name(i) + "," + T.frame_name(j) + ")";
            if (!ci && !cj) {
                if (is_linear_section(W, br))
                    rep.add_pass("bracket_linear_linear" + pair);
                else
                    rep.add_fail("bracket_linear_linear" + pair,
                                 "not linear: " + br.to_string(T.frame_names()));
            } else if (!ci || !cj) {
                if (is_core_section(W, br))
                    rep.add_pass("bracket_linear_core" + pair);
                else
                    rep.add_fail("bracket_linear_core" + pair,
                                 "not core: " + br.to_string(T.frame_names()));
            } else {
                if (br.is_zero())
                    rep.add_pass("bracket_core_core" + pair);
                else
                    rep.add_fail("bracket_core_core" + pair,
                                 "nonzero: " + br.to_string(T.frame_names()));
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Fat algebroid and the derived representations.

/// Fat algebroid A-hat of rank r + n*k over the base chart. Frame: the r
/// linear generators, then the Hom(E,C) generators s_{AB} = v^A hat-c_B
/// (index r + A*k + B). The projection onto A kills exactly the Hom part.
class FatAlgebroid {
public:
    FatAlgebroid() = default;
    FatAlgebroid(std::shared_ptr<const FrameAlgebroid> alg, std::size_t r,
                 std::size_t n, std::size_t k)
        : alg_(std::move(alg)), r_(r), n_(n), k_(k) {}

    const FrameAlgebroid& algebroid() const { return *alg_; }
    const std::shared_ptr<const FrameAlgebroid>& algebroid_ptr() const { return alg_; }
    std::size_t r() const { return r_; }
    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t rank() const { return r_ + n_ * k_; }

    bool is_hom_generator(std::size_t i) const { return i >= r_; }
    std::size_t hom_index(std::size_t A, std::size_t B) const {
        return r_ + A * k_ + B;
    }
    /// (A, B) of a Hom generator.
    std::pair<std::size_t, std::size_t> hom_of(std::size_t i) const {
        std::size_t h = i - r_;
        return {h / k_, h % k_};
    }

    /// Projection pi: A-hat -> A on sections.
    Section project(const Section& s) const {
        std::vector<Polynomial> coeffs(s.coefficients.begin(),
                                       s.coefficients.begin() + r_);
        return Section(std::move(coeffs));
    }

private:
    std::shared_ptr<const FrameAlgebroid> alg_;
    std::size_t r_ = 0, n_ = 0, k_ = 0;
};

/// Total section of the fat frame element with the given index.
inline Section fat_frame_to_total(const SplitVB& W, const FatAlgebroid& fat,
                                  std::size_t i) {
    const Chart& tot = W.total().chart();
    Section s = Section::zero(tot, W.total().rank());
    if (!fat.is_hom_generator(i)) {
        s.coefficients[i] = Polynomial::constant(tot, 1);
    } else {
        auto [A, B] = fat.hom_of(i);
        s.coefficients[W.r() + B] = Polynomial::variable(tot, W.m() + A);
    }
    return s;
}

/// Total section of a fat section (coefficients over the base chart).
inline Section fat_to_total(const SplitVB& W, const FatAlgebroid& fat,
                            const Section& g) {
    if (g.rank() != fat.rank()) throw Error("fat section rank mismatch");
    const Chart& tot = W.total().chart();
    Section s = Section::zero(tot, W.total().rank());
    for (std::size_t i = 0; i < fat.rank(); ++i) {
        if (g.coefficients[i].is_zero()) continue;
        Polynomial f = g.coefficients[i].extended_to(tot);
        Section gen = fat_frame_to_total(W, fat, i);
        s = s + f * gen;
    }
    return s;
}

/// Fat coordinates of a linear section of W -> E; throws when not linear.
inline Section total_to_fat(const SplitVB& W, const FatAlgebroid& fat,
                            const Section& s) {
    if (!is_linear_section(W, s))
        throw Error("section is not linear: " +
                    s.to_string(W.total().frame_names()));
    const Chart& base = W.base().chart();
    Section g = Section::zero(base, fat.rank());
    for (std::size_t a = 0; a < W.r(); ++a)
        g.coefficients[a] = s.coefficients[a].restricted_to(base);
    for (std::size_t B = 0; B < W.k(); ++B) {
        const Polynomial& cb = s.coefficients[W.r() + B];
        for (std::size_t A = 0; A < W.n(); ++A)
            g.coefficients[fat.hom_index(A, B)] =
                cb.derivative(W.m() + A).restricted_to(base);
    }
    return g;
}

/// Restriction of the total bracket to linear sections, re-expressed in the
/// fat frame; anchor = rho o pi.
inline FatAlgebroid fat_algebroid(const SplitVB& W) {
    Report ax = validate_vb_axioms(W);
    if (!ax.all_passed())
        throw Error("fat_algebroid: VB axioms fail (" + ax.first_failure()->name +
                    ")");
    const std::size_t r = W.r(), n = W.n(), k = W.k();
    const std::size_t rank = r + n * k;
    const Chart& chart = W.base().chart();

    FatAlgebroid shape(nullptr, r, n, k);
    std::vector<std::string> names = W.base().frame_names();
    for (std::size_t A = 0; A < n; ++A)
        for (std::size_t B = 0; B < k; ++B)
            names.push_back("phi" + std::to_string(A + 1) + "_c" +
                            std::to_string(B + 1));

    std::vector<PolyVector> anchor;
    for (std::size_t a = 0; a < r; ++a) anchor.push_back(W.base().anchor_of_frame(a));
    for (std::size_t h = r; h < rank; ++h) anchor.push_back(PolyVector::zero(chart));

    std::vector<Section> total_frame;
    for (std::size_t i = 0; i < rank; ++i)
        total_frame.push_back(fat_frame_to_total(W, shape, i));

    std::vector<std::vector<Section>> structure(
        rank, std::vector<Section>(rank, Section::zero(chart, rank)));
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = i + 1; j < rank; ++j) {
            Section br = W.total().bracket(total_frame[i], total_frame[j]);
            Section g = total_to_fat(W, shape, br);
            structure[i][j] = g;
            structure[j][i] = -g;
        }

    auto alg = std::make_shared<const FrameAlgebroid>(
        chart, rank, std::move(names), std::move(anchor), std::move(structure));
    return FatAlgebroid(alg, r, n, k);
}

/// Derivation of E corresponding to a linear vector field on E.
inline BundleDerivation linear_field_to_derivation(const SplitVB& W,
                                                   const PolyVector& X) {
    if (!is_linear_vector_field(W, X))
        throw Error("vector field is not linear: " + X.to_string());
    const Chart& base = W.base().chart();
    std::vector<Polynomial> sym;
    for (std::size_t i = 0; i < W.m(); ++i)
        sym.push_back(X.component(i).restricted_to(base));
    PolyMatrix mat(base, W.n(), W.n());
    for (std::size_t A = 0; A < W.n(); ++A)
        for (std::size_t B = 0; B < W.n(); ++B)
            mat.at(A, B) =
                -X.component(W.m() + A).derivative(W.m() + B).restricted_to(base);
    return BundleDerivation(PolyVector(base, std::move(sym)), std::move(mat));
}

/// Linear vector field of a derivation of E: X = sigma - V[A][B] v^B d/dv^A.
inline PolyVector derivation_to_linear_field(const SplitVB& W,
                                             const BundleDerivation& d) {
    if (d.bundle_rank() != W.n()) throw Error("derivation rank mismatch");
    const Chart& tot = W.total().chart();
    std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
    for (std::size_t i = 0; i < W.m(); ++i)
        comps[i] = d.symbol.component(i).extended_to(tot);
    for (std::size_t A = 0; A < W.n(); ++A) {
        Polynomial acc = Polynomial::zero(tot);
        for (std::size_t B = 0; B < W.n(); ++B) {
            const Polynomial& v = d.matrix.at(A, B);
            if (v.is_zero()) continue;
            acc = acc - v.extended_to(tot) * Polynomial::variable(tot, W.m() + B);
        }
        comps[W.m() + A] = acc;
    }
    return PolyVector(tot, std::move(comps));
}

/// Section of E whose vertical lift is the given vertical-constant field.
inline Section vertical_field_to_section(const SplitVB& W, const PolyVector& X) {
    if (!is_vertical_constant_field(W, X))
        throw Error("vector field is not a vertical constant lift: " +
                    X.to_string());
    const Chart& base = W.base().chart();
    std::vector<Polynomial> comps;
    for (std::size_t A = 0; A < W.n(); ++A)
        comps.push_back(X.component(W.m() + A).restricted_to(base));
    return Section(std::move(comps));
}

/// Side representation psi^s: the derivation of E corresponding to the
/// linear vector field rho~(a) of a fat section.
inline BundleDerivation side_representation(const SplitVB& W, const FatAlgebroid& fat,
                                            const Section& fat_section) {
    if (W.n() == 0) throw Error("side_representation: no side bundle (n = 0)");
    Section t = fat_to_total(W, fat, fat_section);
    return linear_field_to_derivation(W, W.total().anchor(t));
}

/// Core representation psi^c read off the core component of the total
/// bracket: hat(psi^c_a chi) = [a, hat chi].
inline BundleDerivation core_representation_derivation(const SplitVB& W,
                                                       const FatAlgebroid& fat,
                                                       const Section& fat_section) {
    if (W.k() == 0) throw Error("core_representation: no core bundle (k = 0)");
    const Chart& base = W.base().chart();
    Section t = fat_to_total(W, fat, fat_section);
    PolyMatrix mat(base, W.k(), W.k());
    for (std::size_t B = 0; B < W.k(); ++B) {
        Section hat = W.total().frame_section(W.r() + B);
        Section br = W.total().bracket(t, hat);
        if (!is_core_section(W, br))
            throw Error("core representation produced a non-core section");
        for (std::size_t C = 0; C < W.k(); ++C)
            mat.at(C, B) = br.coefficients[W.r() + C].restricted_to(base);
    }
    // Symbol of psi^c_a is rho(pi(a)).
    PolyVector sym = W.base().anchor(fat.project(fat_section));
    return BundleDerivation(std::move(sym), std::move(mat));
}

inline Section core_representation(const SplitVB& W, const FatAlgebroid& fat,
                                   const Section& fat_section,
                                   const Section& core_section) {
    return derivation_apply(core_representation_derivation(W, fat, fat_section),
                            core_section);
}

/// Core-anchor alpha: C -> E, read from the vertical-constant anchors of the
/// core generators: (alpha chi)^V = rho~(hat chi). Empty when n = 0 or k = 0.
inline PolyMatrix core_anchor(const SplitVB& W) {
    const Chart& base = W.base().chart();
    PolyMatrix alpha(base, W.n(), W.k());
    for (std::size_t B = 0; B < W.k(); ++B) {
        Section col = vertical_field_to_section(W, W.total().anchor_of_frame(W.r() + B));
        for (std::size_t A = 0; A < W.n(); ++A) alpha.at(A, B) = col.coefficients[A];
    }
    return alpha;
}

/// Euler derivation of W -> E: symbol = Euler vector field of E, eigenvalue 0
/// on linear generators and -1 on core generators.
inline BundleDerivation euler_derivation(const SplitVB& W) {
    const Chart& tot = W.total().chart();
    std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
    for (std::size_t A = 0; A < W.n(); ++A)
        comps[W.m() + A] = Polynomial::variable(tot, W.m() + A);
    PolyMatrix mat(tot, W.total().rank(), W.total().rank());
    for (std::size_t B = 0; B < W.k(); ++B)
        mat.at(W.r() + B, W.r() + B) = Polynomial::constant(tot, -1);
    return BundleDerivation(PolyVector(tot, std::move(comps)), std::move(mat));
}

/// Linearity verdict with witness.
struct LinearityVerdict {
    bool linear = true;
    std::string witness;
};

/// A cochain is linear iff its Schouten-Jacobi bracket with the Euler
/// derivation vanishes.
inline LinearityVerdict classify_cochain_linearity(const SplitVB& W,
                                                   const DefCochain& c) {
    if (c.parent() != W.total()) throw Error("cochain not over the VB total space");
    DefCochain br = bracket_with_derivation(euler_derivation(W), c);
    LinearityVerdict v;
    for (const auto& [t, val] : br.frame_values())
        if (!val.is_zero()) {
            v.linear = false;
            v.witness = "[[euler, c]] value on tuple != 0: " +
                        val.to_string(W.total().frame_names());
            return v;
        }
    for (const auto& [t, val] : br.symbol_values())
        if (!val.is_zero()) {
            v.linear = false;
            v.witness = "[[euler, c]] symbol on tuple != 0: " + val.to_string();
            return v;
        }
    return v;
}

/// Independent route to the same verdict: inspect fiber degrees of the
/// stored tables directly (eigenvalue conditions of the Euler derivation).
inline LinearityVerdict classify_linearity_by_inspection(const SplitVB& W,
                                                         const DefCochain& c) {
    if (c.parent() != W.total()) throw Error("cochain not over the VB total space");
    LinearityVerdict v;
    auto vv = W.v_vars();
    auto core_count = [&](const std::vector<int>& t) {
        std::size_t n = 0;
        for (int i : t)
            if (W.is_core_generator(static_cast<std::size_t>(i))) ++n;
        return n;
    };
    for (const auto& [t, val] : c.frame_values()) {
        std::size_t j = core_count(t);
        bool ok = j == 0   ? is_linear_section(W, val)
                  : j == 1 ? is_core_section(W, val)
                           : val.is_zero();
        if (!ok) {
            v.linear = false;
            v.witness = "value with " + std::to_string(j) + " core slots: " +
                        val.to_string(W.total().frame_names());
            return v;
        }
    }
    for (const auto& [t, val] : c.symbol_values()) {
        std::size_t j = core_count(t);
        bool ok = j == 0   ? is_linear_vector_field(W, val)
                  : j == 1 ? is_vertical_constant_field(W, val)
                           : val.is_zero();
        if (!ok) {
            v.linear = false;
            v.witness =
                "symbol with " + std::to_string(j) + " core slots: " + val.to_string();
            return v;
        }
    }
    return v;
}

/// The five clauses of the linear-cochain corollary, on all stored tuples of
/// a linear cochain of degree k+1.
inline Report corollary_c_check(const SplitVB& W, const DefCochain& c) {
    if (c.degree() < 1) throw Error("corollary_c_check needs degree >= 1");
    Report rep;
    auto core_count = [&](const std::vector<int>& t) {
        std::size_t n = 0;
        for (int i : t)
            if (W.is_core_generator(static_cast<std::size_t>(i))) ++n;
        return n;
    };
    auto tuple_name = [&](const std::vector<int>& t) {
        std::string s = "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) s += ",";
            s += W.total().frame_name(t[i]);
        }
        return s + ")";
    };
    bool c1 = true, c2 = true, s0 = true, s1 = true, s2 = true;
    std::string w1, w2, w3, w4, w5;
    for (const auto& [t, val] : c.frame_values()) {
        std::size_t j = core_count(t);
        if (j == 1 && !is_core_section(W, val)) {
            c1 = false;
            w1 = tuple_name(t);
        }
        if (j >= 2 && !val.is_zero()) {
            c2 = false;
            w2 = tuple_name(t);
        }
    }
    for (const auto& [t, val] : c.symbol_values()) {
        std::size_t j = core_count(t);
        if (j == 0 && !is_linear_vector_field(W, val)) {
            s0 = false;
            w3 = tuple_name(t);
        }
        if (j == 1 && !is_vertical_constant_field(W, val)) {
            s1 = false;
            w4 = tuple_name(t);
        }
        if (j >= 2 && !val.is_zero()) {
            s2 = false;
            w5 = tuple_name(t);
        }
    }
    c1 ? rep.add_pass("value_one_core_is_core")
       : rep.add_fail("value_one_core_is_core", w1);
    c2 ? rep.add_pass("value_two_core_vanishes")
       : rep.add_fail("value_two_core_vanishes", w2);
    s0 ? rep.add_pass("symbol_all_linear_is_linear_field")
       : rep.add_fail("symbol_all_linear_is_linear_field", w3);
    s1 ? rep.add_pass("symbol_one_core_is_vertical_lift")
       : rep.add_fail("symbol_one_core_is_vertical_lift", w4);
    s2 ? rep.add_pass("symbol_two_core_vanishes")
       : rep.add_fail("symbol_two_core_vanishes", w5);
    return rep;
}

}  // namespace vbcalc
