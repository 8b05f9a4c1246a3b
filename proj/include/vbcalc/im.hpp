#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "vbcalc/defcomplex.hpp"
#include "vbcalc/vb.hpp"

namespace vbcalc {

/// Candidate triple (delta_fat, delta_E, delta_C) of bundle derivations,
/// checked against the triple characterization of IM derivations.
struct IMTriple {
    BundleDerivation d_fat;   // derivation of the fat algebroid bundle
    BundleDerivation d_side;  // derivation of E
    BundleDerivation d_core;  // derivation of C
};

namespace detail {

/// Tensorial extension psi_{sum g^i frame_i} = sum g^i psi_i.
inline BundleDerivation tensorial_rep(const std::vector<BundleDerivation>& frame_reps,
                                      const Section& g, const Chart& chart,
                                      std::size_t bundle_rank) {
    BundleDerivation acc = BundleDerivation::zero(chart, bundle_rank);
    for (std::size_t i = 0; i < frame_reps.size(); ++i) {
        if (g.coefficients[i].is_zero()) continue;
        acc = acc + g.coefficients[i] * frame_reps[i];
    }
    return acc;
}

}  // namespace detail

/// Side representations of every fat frame element.
inline std::vector<BundleDerivation> side_rep_frame(const SplitVB& W,
                                                    const FatAlgebroid& fat) {
    std::vector<BundleDerivation> out;
    const Chart& base = W.base().chart();
    for (std::size_t i = 0; i < fat.rank(); ++i) {
        if (W.n() == 0) {
            out.push_back(BundleDerivation(
                W.base().anchor(fat.project(fat.algebroid().frame_section(i))),
                PolyMatrix(base, 0, 0)));
        } else {
            out.push_back(
                side_representation(W, fat, fat.algebroid().frame_section(i)));
        }
    }
    return out;
}

/// Core representations of every fat frame element.
inline std::vector<BundleDerivation> core_rep_frame(const SplitVB& W,
                                                    const FatAlgebroid& fat) {
    std::vector<BundleDerivation> out;
    const Chart& base = W.base().chart();
    for (std::size_t i = 0; i < fat.rank(); ++i) {
        if (W.k() == 0) {
            out.push_back(BundleDerivation(
                W.base().anchor(fat.project(fat.algebroid().frame_section(i))),
                PolyMatrix(base, 0, 0)));
        } else {
            out.push_back(
                core_representation_derivation(W, fat, fat.algebroid().frame_section(i)));
        }
    }
    return out;
}

/// The adjoint cochain [a~, -] of a fat section, with symbol rho~(a~).
inline DefCochain internal_derivation(const SplitVB& W, const FatAlgebroid& fat,
                                      const Section& fat_section) {
    Section t = fat_to_total(W, fat, fat_section);
    DefCochain c(1, W.total_ptr());
    for (std::size_t i = 0; i < W.total().rank(); ++i)
        c.set_frame_value({static_cast<int>(i)},
                          W.total().bracket(t, W.total().frame_section(i)));
    c.set_symbol_value({}, W.total().anchor(t));
    return c;
}

/// Triple induced by an internal derivation: ([a~,-] restricted to the fat
/// frame, psi^s_a~, psi^c_a~).
inline IMTriple internal_triple(const SplitVB& W, const FatAlgebroid& fat,
                                const Section& fat_section) {
    const Chart& base = W.base().chart();
    Section t = fat_to_total(W, fat, fat_section);
    PolyMatrix mat(base, fat.rank(), fat.rank());
    for (std::size_t i = 0; i < fat.rank(); ++i) {
        Section br = W.total().bracket(t, fat_frame_to_total(W, fat, i));
        Section g = total_to_fat(W, fat, br);
        for (std::size_t j = 0; j < fat.rank(); ++j) mat.at(j, i) = g.coefficients[j];
    }
    PolyVector sym = W.base().anchor(fat.project(fat_section));
    BundleDerivation d_fat(sym, std::move(mat));
    BundleDerivation d_side =
        W.n() ? side_representation(W, fat, fat_section)
              : BundleDerivation(sym, PolyMatrix(base, 0, 0));
    BundleDerivation d_core =
        W.k() ? core_representation_derivation(W, fat, fat_section)
              : BundleDerivation(sym, PolyMatrix(base, 0, 0));
    return {std::move(d_fat), std::move(d_side), std::move(d_core)};
}

/// Theorem conditions for a candidate triple, each as an exact polynomial
/// identity on frames: common symbol; delta_fat on Hom(E,C) insertions;
/// compatibility with the core-anchor; commutation with the side and core
/// representations; and delta_fat being a Lie algebroid derivation of the
/// fat algebroid.
inline Report check_im_triple(const SplitVB& W, const FatAlgebroid& fat,
                              const IMTriple& t) {
    Report rep;
    const Chart& base = W.base().chart();
    if (t.d_fat.bundle_rank() != fat.rank() || t.d_side.bundle_rank() != W.n() ||
        t.d_core.bundle_rank() != W.k())
        throw Error("triple shape mismatch");

    if (t.d_fat.symbol == t.d_side.symbol && t.d_side.symbol == t.d_core.symbol)
        rep.add_pass("sigma_delta");
    else
        rep.add_fail("sigma_delta", "symbol mismatch: sigma(fat) = " +
                                        t.d_fat.symbol.to_string() +
                                        ", sigma(E) = " + t.d_side.symbol.to_string() +
                                        ", sigma(C) = " + t.d_core.symbol.to_string());

    // delta_fat(Phi) = delta_C o Phi - Phi o delta_E on the Hom(E,C) basis.
    bool hom_ok = true;
    std::string hom_witness;
    for (std::size_t A = 0; A < W.n() && hom_ok; ++A)
        for (std::size_t B = 0; B < W.k() && hom_ok; ++B) {
            std::size_t col = fat.hom_index(A, B);
            Section got = Section::zero(base, fat.rank());
            for (std::size_t j = 0; j < fat.rank(); ++j)
                got.coefficients[j] = t.d_fat.matrix.at(j, col);
            Section want = Section::zero(base, fat.rank());
            for (std::size_t Bp = 0; Bp < W.k(); ++Bp)
                want.coefficients[fat.hom_index(A, Bp)] = t.d_core.matrix.at(Bp, B);
            for (std::size_t Ap = 0; Ap < W.n(); ++Ap)
                want.coefficients[fat.hom_index(Ap, B)] =
                    want.coefficients[fat.hom_index(Ap, B)] -
                    t.d_side.matrix.at(A, Ap);
            if (got != want) {
                hom_ok = false;
                hom_witness =
                    "Phi = phi" + std::to_string(A + 1) + " (x) chi" +
                    std::to_string(B + 1) + ", residual " +
                    (got - want).to_string(fat.algebroid().frame_names());
            }
        }
    hom_ok ? rep.add_pass("delta_hom") : rep.add_fail("delta_hom", hom_witness);

    // alpha o delta_C = delta_E o alpha.
    PolyMatrix alpha = core_anchor(W);
    PolyMatrix lhs = alpha * t.d_core.matrix;
    PolyMatrix rhs = alpha.derived_along(t.d_side.symbol) + t.d_side.matrix * alpha;
    if (lhs == rhs)
        rep.add_pass("core_anchor_compat");
    else
        rep.add_fail("core_anchor_compat", "residual " + (lhs - rhs).to_string());

    // [delta_E, psi^s_a] = psi^s_{delta_fat a} on the fat frame.
    std::vector<BundleDerivation> psis = side_rep_frame(W, fat);
    bool psi_ok = true;
    std::string psi_witness;
    for (std::size_t i = 0; i < fat.rank() && psi_ok; ++i) {
        BundleDerivation l = derivation_commutator(t.d_side, psis[i]);
        Section col = Section::zero(base, fat.rank());
        for (std::size_t j = 0; j < fat.rank(); ++j)
            col.coefficients[j] = t.d_fat.matrix.at(j, i);
        BundleDerivation r = detail::tensorial_rep(psis, col, base, W.n());
        if (l != r) {
            psi_ok = false;
            psi_witness = "a~ = " + fat.algebroid().frame_name(i);
        }
    }
    psi_ok ? rep.add_pass("delta_psi_side") : rep.add_fail("delta_psi_side", psi_witness);

    // [delta_C, psi^c_a] = psi^c_{delta_fat a} on the fat frame.
    std::vector<BundleDerivation> psic = core_rep_frame(W, fat);
    bool psic_ok = true;
    std::string psic_witness;
    for (std::size_t i = 0; i < fat.rank() && psic_ok; ++i) {
        BundleDerivation l = derivation_commutator(t.d_core, psic[i]);
        Section col = Section::zero(base, fat.rank());
        for (std::size_t j = 0; j < fat.rank(); ++j)
            col.coefficients[j] = t.d_fat.matrix.at(j, i);
        BundleDerivation r = detail::tensorial_rep(psic, col, base, W.k());
        if (l != r) {
            psic_ok = false;
            psic_witness = "a~ = " + fat.algebroid().frame_name(i);
        }
    }
    psic_ok ? rep.add_pass("delta_psi_core")
            : rep.add_fail("delta_psi_core", psic_witness);

    // delta_fat is a Lie algebroid derivation of the fat algebroid.
    DefCochain dfat = DefCochain::from_derivation(fat.algebroid_ptr(), t.d_fat);
    Report der = is_algebroid_derivation(dfat);
    if (der.all_passed())
        rep.add_pass("fat_algebroid_derivation");
    else
        rep.add_fail("fat_algebroid_derivation", der.first_failure()->name + ": " +
                                                     der.first_failure()->witness);
    return rep;
}

inline Report check_im_triple(const SplitVB& W, const IMTriple& t) {
    return check_im_triple(W, fat_algebroid(W), t);
}

/// The horizontal derivation of a triple, as a degree-1 cochain on the total
/// algebroid: delta_fat on linear generators, delta_C on core generators,
/// symbol the linear vector field of delta_E. No validity check.
inline DefCochain horizontal_cochain(const SplitVB& W, const FatAlgebroid& fat,
                                     const IMTriple& t) {
    DefCochain c(1, W.total_ptr());
    const Chart& tot = W.total().chart();
    for (std::size_t a = 0; a < W.r(); ++a) {
        Section col = Section::zero(W.base().chart(), fat.rank());
        for (std::size_t j = 0; j < fat.rank(); ++j)
            col.coefficients[j] = t.d_fat.matrix.at(j, a);
        c.set_frame_value({static_cast<int>(a)}, fat_to_total(W, fat, col));
    }
    for (std::size_t B = 0; B < W.k(); ++B) {
        Section val = Section::zero(tot, W.total().rank());
        for (std::size_t C = 0; C < W.k(); ++C)
            val.coefficients[W.r() + C] = t.d_core.matrix.at(C, B).extended_to(tot);
        c.set_frame_value({static_cast<int>(W.r() + B)}, std::move(val));
    }
    c.set_symbol_value({}, derivation_to_linear_field(W, t.d_side));
    return c;
}

/// The unique infinitesimal automorphism extending a valid triple.
inline DefCochain horizontal_from_triple(const SplitVB& W, const FatAlgebroid& fat,
                                         const IMTriple& t) {
    Report rep = check_im_triple(W, fat, t);
    if (!rep.all_passed())
        throw Error("horizontal_from_triple: triple check failed (" +
                    rep.first_failure()->name + ")");
    return horizontal_cochain(W, fat, t);
}

// ---------------------------------------------------------------------------
// Linear cochain decomposition (Theorem on linear cochains).

/// Decomposition of a linear degree-k cochain on W into data over M:
/// a k-cochain on the fat algebroid, derivation-valued forms c_E and c_C on
/// (k-1)-tuples, and the Hom(C,E)-valued form on (k-2)-tuples.
struct LinearDecomposition {
    std::size_t degree = 0;
    DefCochain c_fat;
    std::map<std::vector<int>, BundleDerivation> c_side;
    std::map<std::vector<int>, BundleDerivation> c_core;
    std::map<std::vector<int>, PolyMatrix> d_hom;

    friend bool operator==(const LinearDecomposition& a, const LinearDecomposition& b) {
        return a.degree == b.degree && a.c_fat == b.c_fat && a.c_side == b.c_side &&
               a.c_core == b.c_core && a.d_hom == b.d_hom;
    }
    friend bool operator!=(const LinearDecomposition& a, const LinearDecomposition& b) {
        return !(a == b);
    }
};

namespace detail {

/// Antisymmetric lookup: value on an arbitrarily ordered tuple.
template <typename T>
T anti_lookup(const std::map<std::vector<int>, T>& table, std::vector<int> tuple,
              const T& zero) {
    int sign = sort_with_sign(tuple);
    if (sign == 0) return zero;
    const T& v = table.at(tuple);
    return sign == 1 ? v : -v;
}

/// Tensorial evaluation with a general fat section in the first slot.
inline BundleDerivation eval_derivation_form(
    const std::map<std::vector<int>, BundleDerivation>& table, const Section& g,
    const std::vector<int>& rest, const Chart& chart, std::size_t bundle_rank) {
    BundleDerivation acc = BundleDerivation::zero(chart, bundle_rank);
    for (std::size_t gamma = 0; gamma < g.rank(); ++gamma) {
        if (g.coefficients[gamma].is_zero()) continue;
        std::vector<int> tuple;
        tuple.push_back(static_cast<int>(gamma));
        tuple.insert(tuple.end(), rest.begin(), rest.end());
        BundleDerivation v = anti_lookup(
            table, tuple, BundleDerivation::zero(chart, bundle_rank));
        if (v.is_zero()) continue;
        acc = acc + g.coefficients[gamma] * v;
    }
    return acc;
}

inline PolyMatrix eval_matrix_form(const std::map<std::vector<int>, PolyMatrix>& table,
                                   const Section& g, const std::vector<int>& rest,
                                   const Chart& chart, std::size_t rows,
                                   std::size_t cols) {
    PolyMatrix acc(chart, rows, cols);
    for (std::size_t gamma = 0; gamma < g.rank(); ++gamma) {
        if (g.coefficients[gamma].is_zero()) continue;
        std::vector<int> tuple;
        tuple.push_back(static_cast<int>(gamma));
        tuple.insert(tuple.end(), rest.begin(), rest.end());
        PolyMatrix v = anti_lookup(table, tuple, PolyMatrix(chart, rows, cols));
        if (v.is_zero()) continue;
        acc = acc + g.coefficients[gamma] * v;
    }
    return acc;
}

}  // namespace detail

/// Extraction rules: c_fat by restriction to the fat frame, c_E from symbols
/// on fat tuples, c_C from core outputs, d_hom from vertical symbols on
/// one-core tuples.
inline LinearDecomposition decompose_linear(const SplitVB& W, const FatAlgebroid& fat,
                                            const DefCochain& c) {
    LinearityVerdict lin = classify_cochain_linearity(W, c);
    if (!lin.linear) throw Error("decompose_linear: cochain is not linear: " + lin.witness);
    const std::size_t k = c.degree();
    const Chart& base = W.base().chart();
    LinearDecomposition dec;
    dec.degree = k;

    std::vector<Section> fat_total;
    for (std::size_t i = 0; i < fat.rank(); ++i)
        fat_total.push_back(fat_frame_to_total(W, fat, i));

    DefCochain cf(k, fat.algebroid_ptr());
    for (const auto& tuple : increasing_tuples(fat.rank(), k)) {
        std::vector<Section> args;
        for (int i : tuple) args.push_back(fat_total[i]);
        cf.set_frame_value(tuple, total_to_fat(W, fat, cochain_eval(c, args)));
    }
    if (k >= 1) {
        for (const auto& tuple : increasing_tuples(fat.rank(), k - 1)) {
            std::vector<Section> args;
            for (int i : tuple) args.push_back(fat_total[i]);
            PolyVector sig = cochain_symbol_eval(c, args);
            std::vector<Polynomial> xpart;
            for (std::size_t i = 0; i < W.m(); ++i)
                xpart.push_back(sig.component(i).restricted_to(base));
            cf.set_symbol_value(tuple, PolyVector(base, std::move(xpart)));

            if (W.n() == 0) {
                std::vector<Polynomial> sym;
                for (std::size_t i = 0; i < W.m(); ++i)
                    sym.push_back(sig.component(i).restricted_to(base));
                dec.c_side[tuple] = BundleDerivation(PolyVector(base, std::move(sym)),
                                                     PolyMatrix(base, 0, 0));
            } else {
                dec.c_side[tuple] = linear_field_to_derivation(W, sig);
            }

            PolyMatrix core_mat(base, W.k(), W.k());
            for (std::size_t B = 0; B < W.k(); ++B) {
                std::vector<Section> cargs = args;
                cargs.push_back(W.total().frame_section(W.r() + B));
                Section val = cochain_eval(c, cargs);
                if (!is_core_section(W, val))
                    throw Error("decompose_linear: expected a core value");
                for (std::size_t C = 0; C < W.k(); ++C)
                    core_mat.at(C, B) =
                        val.coefficients[W.r() + C].restricted_to(base);
            }
            dec.c_core[tuple] =
                BundleDerivation(dec.c_side[tuple].symbol, std::move(core_mat));
        }
    }
    if (k >= 2) {
        for (const auto& tuple : increasing_tuples(fat.rank(), k - 2)) {
            PolyMatrix d(base, W.n(), W.k());
            for (std::size_t B = 0; B < W.k(); ++B) {
                std::vector<Section> args;
                for (int i : tuple) args.push_back(fat_total[i]);
                args.push_back(W.total().frame_section(W.r() + B));
                PolyVector sig = cochain_symbol_eval(c, args);
                Section col = vertical_field_to_section(W, sig);
                for (std::size_t A = 0; A < W.n(); ++A)
                    d.at(A, B) = col.coefficients[A];
            }
            dec.d_hom[tuple] = std::move(d);
        }
    }
    dec.c_fat = std::move(cf);
    return dec;
}

/// Structural invariants of a decomposition: matching symbols and the
/// Hom(E,C)-insertion identities.
inline Report validate_decomposition(const SplitVB& W, const FatAlgebroid& fat,
                                     const LinearDecomposition& dec) {
    Report rep;
    const Chart& base = W.base().chart();
    const std::size_t k = dec.degree;
    if (k == 0) {
        rep.add_pass("decomposition(degree 0: nothing to check)");
        return rep;
    }

    bool sym_ok = true;
    std::string sym_w;
    for (const auto& [t, der] : dec.c_side) {
        if (der.symbol != dec.c_fat.symbol_value(std::vector<int>(t)) ||
            dec.c_core.at(t).symbol != der.symbol) {
            sym_ok = false;
            sym_w = "tuple mismatch";
            break;
        }
    }
    sym_ok ? rep.add_pass("derivation_valued_symbols")
           : rep.add_fail("derivation_valued_symbols", sym_w);

    // c_fat with one Hom insertion.
    bool ca_ok = true;
    std::string ca_w;
    for (const auto& tuple : increasing_tuples(fat.rank(), k - 1)) {
        const BundleDerivation& vc = dec.c_core.at(tuple);
        const BundleDerivation& ve = dec.c_side.at(tuple);
        for (std::size_t A = 0; A < W.n() && ca_ok; ++A)
            for (std::size_t B = 0; B < W.k() && ca_ok; ++B) {
                int h = static_cast<int>(fat.hom_index(A, B));
                std::vector<int> full = tuple;
                full.push_back(h);
                Section got = dec.c_fat.frame_value(full);
                Section want = Section::zero(base, fat.rank());
                for (std::size_t Bp = 0; Bp < W.k(); ++Bp)
                    want.coefficients[fat.hom_index(A, Bp)] = vc.matrix.at(Bp, B);
                for (std::size_t Ap = 0; Ap < W.n(); ++Ap)
                    want.coefficients[fat.hom_index(Ap, B)] =
                        want.coefficients[fat.hom_index(Ap, B)] - ve.matrix.at(A, Ap);
                if (got != want) {
                    ca_ok = false;
                    ca_w = "residual " +
                           (got - want).to_string(fat.algebroid().frame_names());
                }
            }
        if (!ca_ok) break;
    }
    ca_ok ? rep.add_pass("c_fat_hom_insertion")
          : rep.add_fail("c_fat_hom_insertion", ca_w);

    // c_E and c_C with one Hom insertion; d_hom kills Hom slots.
    if (k >= 2) {
        bool ce_ok = true, cc_ok = true;
        for (const auto& tuple : increasing_tuples(fat.rank(), k - 2)) {
            const PolyMatrix& D = dec.d_hom.at(tuple);
            for (std::size_t A = 0; A < W.n(); ++A)
                for (std::size_t B = 0; B < W.k(); ++B) {
                    int h = static_cast<int>(fat.hom_index(A, B));
                    std::vector<int> full = tuple;
                    full.push_back(h);
                    BundleDerivation gotE = detail::anti_lookup(
                        dec.c_side, full, BundleDerivation::zero(base, W.n()));
                    PolyMatrix wantE(base, W.n(), W.n());
                    for (std::size_t App = 0; App < W.n(); ++App)
                        wantE.at(App, A) = -D.at(App, B);
                    if (!(gotE.matrix == wantE) || !gotE.symbol.is_zero()) ce_ok = false;

                    BundleDerivation gotC = detail::anti_lookup(
                        dec.c_core, full, BundleDerivation::zero(base, W.k()));
                    PolyMatrix wantC(base, W.k(), W.k());
                    for (std::size_t Bpp = 0; Bpp < W.k(); ++Bpp)
                        wantC.at(B, Bpp) = -D.at(A, Bpp);
                    if (!(gotC.matrix == wantC) || !gotC.symbol.is_zero()) cc_ok = false;
                }
        }
        ce_ok ? rep.add_pass("c_side_hom_insertion")
              : rep.add_fail("c_side_hom_insertion", "mismatch");
        cc_ok ? rep.add_pass("c_core_hom_insertion")
              : rep.add_fail("c_core_hom_insertion", "mismatch");
    }
    if (k >= 3) {
        bool d_ok = true;
        for (const auto& tuple : increasing_tuples(fat.rank(), k - 3)) {
            for (std::size_t A = 0; A < W.n(); ++A)
                for (std::size_t B = 0; B < W.k(); ++B) {
                    std::vector<int> full = tuple;
                    full.push_back(static_cast<int>(fat.hom_index(A, B)));
                    PolyMatrix got = detail::anti_lookup(
                        dec.d_hom, full, PolyMatrix(base, W.n(), W.k()));
                    if (!got.is_zero()) d_ok = false;
                }
        }
        d_ok ? rep.add_pass("d_hom_kills_hom")
             : rep.add_fail("d_hom_kills_hom", "nonzero value");
    }
    return rep;
}

/// The unique linear cochain restricting to a valid decomposition;
/// inverse of decompose_linear.
inline DefCochain compose_linear(const SplitVB& W, const FatAlgebroid& fat,
                                 const LinearDecomposition& dec) {
    Report inv = validate_decomposition(W, fat, dec);
    if (!inv.all_passed())
        throw Error("compose_linear: decomposition invariants fail (" +
                    inv.first_failure()->name + ")");
    const std::size_t k = dec.degree;
    const Chart& tot = W.total().chart();
    const std::size_t R = W.total().rank();

    if (k == 0)
        return DefCochain::from_section(
            W.total_ptr(), fat_to_total(W, fat, dec.c_fat.as_section()));

    DefCochain c(k, W.total_ptr());
    for (const auto& tuple : increasing_tuples(R, k)) {
        std::size_t j = 0;
        for (int i : tuple)
            if (W.is_core_generator(static_cast<std::size_t>(i))) ++j;
        if (j == 0) {
            c.set_frame_value(tuple,
                              fat_to_total(W, fat, dec.c_fat.frame_value(
                                                       std::vector<int>(tuple))));
        } else if (j == 1) {
            std::vector<int> lin(tuple.begin(), tuple.end() - 1);
            std::size_t B = static_cast<std::size_t>(tuple.back()) - W.r();
            BundleDerivation vc = detail::anti_lookup(
                dec.c_core, lin, BundleDerivation::zero(W.base().chart(), W.k()));
            Section val = Section::zero(tot, R);
            for (std::size_t C = 0; C < W.k(); ++C)
                val.coefficients[W.r() + C] = vc.matrix.at(C, B).extended_to(tot);
            c.set_frame_value(tuple, std::move(val));
        }
        // two or more core slots: zero (already the default)
    }
    for (const auto& tuple : increasing_tuples(R, k - 1)) {
        std::size_t j = 0;
        for (int i : tuple)
            if (W.is_core_generator(static_cast<std::size_t>(i))) ++j;
        if (j == 0) {
            BundleDerivation ve = detail::anti_lookup(
                dec.c_side, tuple, BundleDerivation::zero(W.base().chart(), W.n()));
            c.set_symbol_value(tuple, derivation_to_linear_field(W, ve));
        } else if (j == 1 && k >= 2) {
            std::vector<int> lin(tuple.begin(), tuple.end() - 1);
            std::size_t B = static_cast<std::size_t>(tuple.back()) - W.r();
            PolyMatrix D = detail::anti_lookup(
                dec.d_hom, lin, PolyMatrix(W.base().chart(), W.n(), W.k()));
            std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
            for (std::size_t A = 0; A < W.n(); ++A)
                comps[W.m() + A] = D.at(A, B).extended_to(tot);
            c.set_symbol_value(tuple, PolyVector(tot, std::move(comps)));
        }
    }
    return c;
}

/// Differential transported through the decomposition. Degree 0 maps a fat
/// section to (d a~, psi^s_a~, psi^c_a~); higher degrees follow the displayed
/// formulas for c_E', c_C' and D'.
inline LinearDecomposition decomposition_differential(const SplitVB& W,
                                                      const FatAlgebroid& fat,
                                                      const LinearDecomposition& dec) {
    const Chart& base = W.base().chart();
    const std::size_t k = dec.degree;
    LinearDecomposition out;
    out.degree = k + 1;
    out.c_fat = differential(dec.c_fat);

    std::vector<BundleDerivation> psis = side_rep_frame(W, fat);
    std::vector<BundleDerivation> psic = core_rep_frame(W, fat);
    PolyMatrix alpha = core_anchor(W);

    if (k == 0) {
        const Section& a = dec.c_fat.as_section();
        out.c_side[{}] = detail::tensorial_rep(psis, a, base, W.n());
        out.c_core[{}] = detail::tensorial_rep(psic, a, base, W.k());
        return out;
    }

    for (const auto& tuple : increasing_tuples(fat.rank(), k)) {
        BundleDerivation accE = BundleDerivation::zero(base, W.n());
        BundleDerivation accC = BundleDerivation::zero(base, W.k());
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<int> rest;
            for (std::size_t j = 0; j < k; ++j)
                if (j != i) rest.push_back(tuple[j]);
            BundleDerivation ve = detail::anti_lookup(
                dec.c_side, rest, BundleDerivation::zero(base, W.n()));
            BundleDerivation vc = detail::anti_lookup(
                dec.c_core, rest, BundleDerivation::zero(base, W.k()));
            BundleDerivation te = derivation_commutator(psis[tuple[i]], ve);
            BundleDerivation tc = derivation_commutator(psic[tuple[i]], vc);
            if (i % 2 == 0) {
                accE = accE + te;
                accC = accC + tc;
            } else {
                accE = accE - te;
                accC = accC - tc;
            }
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                Section br = fat.algebroid().frame_bracket(tuple[i], tuple[j]);
                std::vector<int> rest;
                for (std::size_t l = 0; l < k; ++l)
                    if (l != i && l != j) rest.push_back(tuple[l]);
                BundleDerivation te =
                    detail::eval_derivation_form(dec.c_side, br, rest, base, W.n());
                BundleDerivation tc =
                    detail::eval_derivation_form(dec.c_core, br, rest, base, W.k());
                if ((i + j) % 2 == 0) {
                    accE = accE + te;
                    accC = accC + tc;
                } else {
                    accE = accE - te;
                    accC = accC - tc;
                }
            }
        Section cf = dec.c_fat.frame_value(std::vector<int>(tuple));
        BundleDerivation pe = detail::tensorial_rep(psis, cf, base, W.n());
        BundleDerivation pc = detail::tensorial_rep(psic, cf, base, W.k());
        if (k % 2 == 0) {
            accE = accE - pe;
            accC = accC - pc;
        } else {
            accE = accE + pe;
            accC = accC + pc;
        }
        out.c_side[tuple] = std::move(accE);
        out.c_core[tuple] = std::move(accC);
    }

    for (const auto& tuple : increasing_tuples(fat.rank(), k - 1)) {
        PolyMatrix acc(base, W.n(), W.k());
        for (std::size_t i = 0; i + 1 < k; ++i) {
            std::vector<int> rest;
            for (std::size_t j = 0; j + 1 < k; ++j)
                if (j != i) rest.push_back(tuple[j]);
            PolyMatrix D =
                detail::anti_lookup(dec.d_hom, rest, PolyMatrix(base, W.n(), W.k()));
            PolyMatrix term = D.derived_along(psis[tuple[i]].symbol) +
                              psis[tuple[i]].matrix * D - D * psic[tuple[i]].matrix;
            acc = (i % 2 == 0) ? acc + term : acc - term;
        }
        for (std::size_t i = 0; i + 1 < k; ++i)
            for (std::size_t j = i + 1; j + 1 < k; ++j) {
                Section br = fat.algebroid().frame_bracket(tuple[i], tuple[j]);
                std::vector<int> rest;
                for (std::size_t l = 0; l + 1 < k; ++l)
                    if (l != i && l != j) rest.push_back(tuple[l]);
                PolyMatrix term = detail::eval_matrix_form(dec.d_hom, br, rest, base,
                                                           W.n(), W.k());
                acc = ((i + j) % 2 == 0) ? acc + term : acc - term;
            }
        BundleDerivation ve =
            detail::anti_lookup(dec.c_side, std::vector<int>(tuple),
                                BundleDerivation::zero(base, W.n()));
        BundleDerivation vc =
            detail::anti_lookup(dec.c_core, std::vector<int>(tuple),
                                BundleDerivation::zero(base, W.k()));
        PolyMatrix last =
            alpha.derived_along(ve.symbol) + ve.matrix * alpha - alpha * vc.matrix;
        acc = (k % 2 == 0) ? acc + last : acc - last;
        out.d_hom[tuple] = std::move(acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trivial-core specialization and the coordinate PDE criterion.

/// Prop.-style conditions for a trivial-core candidate pair: delta_A is an
/// algebroid derivation, sigma(delta_A) = sigma(delta_E), and
/// [delta_E, nabla_a] = nabla_{delta_A a} on the frame.
inline Report trivial_core_im_check(const FrameAlgebroid& A, const Connection& nabla,
                                    const DefCochain& delta_A,
                                    const BundleDerivation& delta_E) {
    if (delta_A.degree() != 1 || delta_A.parent() != A)
        throw Error("delta_A must be a degree-1 cochain on A");
    if (nabla.algebroid_rank() != A.rank() ||
        nabla.bundle_rank() != delta_E.bundle_rank())
        throw Error("shape mismatch");
    Report rep;

    Report der = is_algebroid_derivation(delta_A);
    if (der.all_passed())
        rep.add_pass("delta_A_algebroid_derivation");
    else
        rep.add_fail("delta_A_algebroid_derivation",
                     der.first_failure()->name + ": " + der.first_failure()->witness);

    if (delta_A.symbol_value({}) == delta_E.symbol)
        rep.add_pass("sigma_match");
    else
        rep.add_fail("sigma_match",
                     "sigma(delta_A) = " + delta_A.symbol_value({}).to_string() +
                         ", sigma(delta_E) = " + delta_E.symbol.to_string());

    for (std::size_t a = 0; a < A.rank(); ++a) {
        BundleDerivation lhs =
            derivation_commutator(delta_E, connection_derivation(A, nabla, a));
        Section da = delta_A.frame_value({static_cast<int>(a)});
        BundleDerivation rhs = BundleDerivation::zero(A.chart(), nabla.bundle_rank());
        for (std::size_t b = 0; b < A.rank(); ++b) {
            if (da.coefficients[b].is_zero()) continue;
            rhs = rhs + da.coefficients[b] * connection_derivation(A, nabla, b);
        }
        std::string name = "connection_compat(" + A.frame_name(a) + ")";
        if (lhs == rhs)
            rep.add_pass(name);
        else
            rep.add_fail(name, "residual matrix " + (lhs - rhs).matrix.to_string());
    }
    return rep;
}

/// The VB-algebroid (der E_A, der E; A, M) of a representation: side bundle
/// der E with the gauge frame, core A; linear generators are the total lifts
/// with anchor the commutator action [nabla_a, -] as a linear field on der E,
/// core generators anchor to the vertical lift of nabla_b.
inline SplitVB gauge_vb(const FrameAlgebroid& A, const Connection& nabla,
                        std::size_t n) {
    if (nabla.algebroid_rank() != A.rank() || nabla.bundle_rank() != n)
        throw Error("connection shape mismatch");
    Report flat = check_flatness(A, nabla);
    if (!flat.all_passed())
        throw Error("gauge_vb: connection is not flat (" +
                    flat.first_failure()->name + ")");
    const std::size_t m = A.chart().dim();
    const std::size_t r = A.rank();
    GaugeAlgebroid gauge(A.chart(), n);
    const std::size_t s = m + n * n;  // rank of der E

    Chart tot = A.chart().extended(detail::fiber_names(A.chart(), s, "w"));
    const std::size_t rank = 2 * r;
    std::vector<std::string> names;
    for (std::size_t a = 0; a < r; ++a) names.push_back("d" + A.frame_name(a));
    for (std::size_t a = 0; a < r; ++a) names.push_back("hat_" + A.frame_name(a));

    // fdot = sum_j w^{D_j} df/dx^j (only the symbol coordinates contribute).
    auto lift_dot = [&](const Polynomial& f) {
        Polynomial acc = Polynomial::zero(tot);
        for (std::size_t j = 0; j < m; ++j)
            acc = acc + Polynomial::variable(tot, m + j) *
                            f.derivative(j).extended_to(tot);
        return acc;
    };

    std::vector<PolyVector> anchor;
    for (std::size_t a = 0; a < r; ++a) {
        BundleDerivation na = connection_derivation(A, nabla, a);
        // Matrix of [nabla_a, -] on the gauge frame.
        PolyMatrix M(A.chart(), s, s);
        for (std::size_t col = 0; col < s; ++col) {
            Section c = gauge.coords_of(derivation_commutator(na, gauge.frame()[col]));
            for (std::size_t row = 0; row < s; ++row)
                M.at(row, col) = c.coefficients[row];
        }
        std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
        for (std::size_t i = 0; i < m; ++i)
            comps[i] = A.anchor_of_frame(a).component(i).extended_to(tot);
        for (std::size_t row = 0; row < s; ++row) {
            Polynomial acc = Polynomial::zero(tot);
            for (std::size_t col = 0; col < s; ++col) {
                if (M.at(row, col).is_zero()) continue;
                acc = acc - M.at(row, col).extended_to(tot) *
                                Polynomial::variable(tot, m + col);
            }
            comps[m + row] = acc;
        }
        anchor.emplace_back(tot, std::move(comps));
    }
    for (std::size_t b = 0; b < r; ++b) {
        Section c = gauge.coords_of(connection_derivation(A, nabla, b));
        std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
        for (std::size_t row = 0; row < s; ++row)
            comps[m + row] = c.coefficients[row].extended_to(tot);
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
    return SplitVB(base, s, r, total);
}

/// Coordinates of an IM-section candidate: X^i(x), U^alpha_beta(x),
/// V^A_B(x), all polynomials over the base chart only.
struct IMSectionCoords {
    PolyVector X;
    PolyMatrix U;
    PolyMatrix V;
};

/// The three PDE families, as exact polynomial identities.
inline Report im_section_pde_check(const FrameAlgebroid& A, const Connection& nabla,
                                   std::size_t n, const IMSectionCoords& s) {
    const std::size_t m = A.chart().dim();
    const std::size_t r = A.rank();
    if (s.X.dim() != m || s.U.rows() != r || s.U.cols() != r || s.V.rows() != n ||
        s.V.cols() != n || nabla.bundle_rank() != n)
        throw Error("IM section coordinate shape mismatch");
    Report rep;

    // (1) rho^j_alpha d_j X^i = (d_j rho^i_alpha) X^j + rho^i_beta U^beta_alpha.
    bool ok1 = true;
    std::string w1;
    for (std::size_t alpha = 0; alpha < r && ok1; ++alpha)
        for (std::size_t i = 0; i < m && ok1; ++i) {
            Polynomial lhs = A.anchor_of_frame(alpha).apply(s.X.component(i));
            Polynomial rhs = Polynomial::zero(A.chart());
            for (std::size_t j = 0; j < m; ++j)
                rhs = rhs + A.anchor_of_frame(alpha).component(i).derivative(j) *
                                s.X.component(j);
            for (std::size_t beta = 0; beta < r; ++beta)
                rhs = rhs + A.anchor_of_frame(beta).component(i) * s.U.at(beta, alpha);
            if (lhs != rhs) {
                ok1 = false;
                w1 = "(alpha=" + std::to_string(alpha + 1) + ", i=" +
                     std::to_string(i + 1) + ") residual " + (lhs - rhs).to_string();
            }
        }
    ok1 ? rep.add_pass("pde_anchor") : rep.add_fail("pde_anchor", w1);

    // (2) rho_alpha(V) = X(Gamma_alpha) + V Gamma_alpha - Gamma_alpha V
    //     + sum_beta U^beta_alpha Gamma_beta.
    bool ok2 = true;
    std::string w2;
    for (std::size_t alpha = 0; alpha < r && ok2; ++alpha) {
        PolyMatrix lhs = s.V.derived_along(A.anchor_of_frame(alpha));
        PolyMatrix rhs = nabla.gamma(alpha).derived_along(s.X) +
                         s.V * nabla.gamma(alpha) - nabla.gamma(alpha) * s.V;
        for (std::size_t beta = 0; beta < r; ++beta)
            rhs = rhs + s.U.at(beta, alpha) * nabla.gamma(beta);
        if (lhs != rhs) {
            ok2 = false;
            w2 = "(alpha=" + std::to_string(alpha + 1) + ") residual " +
                 (lhs - rhs).to_string();
        }
    }
    ok2 ? rep.add_pass("pde_connection") : rep.add_fail("pde_connection", w2);

    // (3) rho_beta(U^alpha_gamma) - rho_gamma(U^alpha_beta)
    //     = c^alpha_{delta beta} U^delta_gamma - c^alpha_{delta gamma} U^delta_beta
    //     + c^delta_{beta gamma} U^alpha_delta - X(c^alpha_{beta gamma}).
    bool ok3 = true;
    std::string w3;
    for (std::size_t beta = 0; beta < r && ok3; ++beta)
        for (std::size_t gamma = beta + 1; gamma < r && ok3; ++gamma)
            for (std::size_t alpha = 0; alpha < r && ok3; ++alpha) {
                Polynomial lhs =
                    A.anchor_of_frame(beta).apply(s.U.at(alpha, gamma)) -
                    A.anchor_of_frame(gamma).apply(s.U.at(alpha, beta));
                Polynomial rhs = Polynomial::zero(A.chart());
                for (std::size_t delta = 0; delta < r; ++delta) {
                    rhs = rhs +
                          A.frame_bracket(delta, beta).coefficients[alpha] *
                              s.U.at(delta, gamma) -
                          A.frame_bracket(delta, gamma).coefficients[alpha] *
                              s.U.at(delta, beta) +
                          A.frame_bracket(beta, gamma).coefficients[delta] *
                              s.U.at(alpha, delta);
                }
                rhs = rhs - s.X.apply(A.frame_bracket(beta, gamma).coefficients[alpha]);
                if (lhs != rhs) {
                    ok3 = false;
                    w3 = "(beta=" + std::to_string(beta + 1) + ", gamma=" +
                         std::to_string(gamma + 1) + ", alpha=" +
                         std::to_string(alpha + 1) + ") residual " +
                         (lhs - rhs).to_string();
                }
            }
    ok3 ? rep.add_pass("pde_bracket") : rep.add_fail("pde_bracket", w3);
    return rep;
}

/// Derivation pair induced by IM-section coordinates: delta_A = (X, -U),
/// delta_E = (X, V).
inline DefCochain delta_A_of_coords(std::shared_ptr<const FrameAlgebroid> A,
                                    const IMSectionCoords& s) {
    return DefCochain::from_derivation(std::move(A),
                                       BundleDerivation(s.X, -s.U));
}

inline BundleDerivation delta_E_of_coords(const IMSectionCoords& s) {
    return BundleDerivation(s.X, s.V);
}

/// Deterministic candidate generation for the equivalence suite: internal
/// candidates from sections, randomized coordinates of total degree <= 2,
/// and deliberately broken perturbations.
struct EquivalenceCandidate {
    std::string name;
    IMSectionCoords coords;
};

inline Polynomial random_polynomial(std::mt19937_64& rng, const Chart& chart,
                                    unsigned max_degree) {
    static const int num[] = {0, 1, -1, 2, 1, -1, 3, 1};
    static const int den[] = {1, 1, 1, 1, 2, 3, 1, 1};
    Polynomial p = Polynomial::zero(chart);
    std::vector<Monomial> monos;
    Monomial cur(chart.dim(), 0);
    // enumerate all monomials of total degree <= max_degree
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i == chart.dim()) {
            monos.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            cur[i] = e;
            rec(i + 1, left - e);
        }
        cur[i] = 0;
    };
    rec(0, max_degree);
    for (const auto& mth : monos) {
        std::size_t pick = rng() % 8;
        if (num[pick] == 0) continue;
        if (rng() % 3 != 0) continue;  // keep candidates sparse
        p = p + Polynomial::monomial(chart, mth, Rational(num[pick], den[pick]));
    }
    return p;
}

inline IMSectionCoords internal_candidate(const FrameAlgebroid& A,
                                          const Connection& nabla, std::size_t n,
                                          const Section& a) {
    const std::size_t r = A.rank();
    PolyMatrix U(A.chart(), r, r);
    for (std::size_t alpha = 0; alpha < r; ++alpha) {
        Section br = A.bracket(a, A.frame_section(alpha));
        for (std::size_t beta = 0; beta < r; ++beta)
            U.at(beta, alpha) = -br.coefficients[beta];
    }
    PolyMatrix V(A.chart(), n, n);
    for (std::size_t alpha = 0; alpha < r; ++alpha) {
        if (a.coefficients[alpha].is_zero()) continue;
        V = V + a.coefficients[alpha] * nabla.gamma(alpha);
    }
    return {A.anchor(a), std::move(U), std::move(V)};
}

inline std::vector<EquivalenceCandidate> equivalence_candidates(
    const FrameAlgebroid& A, const Connection& nabla, std::size_t n,
    std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<EquivalenceCandidate> out;
    const std::size_t r = A.rank();
    const std::size_t m = A.chart().dim();

    // zero candidate and internal candidates from the frame
    out.push_back({"zero",
                   {PolyVector::zero(A.chart()), PolyMatrix(A.chart(), r, r),
                    PolyMatrix(A.chart(), n, n)}});
    for (std::size_t a = 0; a < r; ++a)
        out.push_back({"internal(" + A.frame_name(a) + ")",
                       internal_candidate(A, nabla, n, A.frame_section(a))});

    std::size_t i = 0;
    while (out.size() < count) {
        std::string tag = std::to_string(i);
        if (i % 4 == 0) {
            // internal candidate with random polynomial coefficients
            Section a = A.zero_section();
            for (std::size_t b = 0; b < r; ++b)
                a.coefficients[b] = random_polynomial(rng, A.chart(), 2);
            out.push_back({"internal_random#" + tag,
                           internal_candidate(A, nabla, n, a)});
        } else if (i % 4 == 1 || i % 4 == 2) {
            // fully random coordinates
            std::vector<Polynomial> xc;
            for (std::size_t j = 0; j < m; ++j)
                xc.push_back(random_polynomial(rng, A.chart(), 2));
            PolyMatrix U(A.chart(), r, r), V(A.chart(), n, n);
            for (std::size_t p = 0; p < r; ++p)
                for (std::size_t q = 0; q < r; ++q)
                    U.at(p, q) = random_polynomial(rng, A.chart(), 2);
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q)
                    V.at(p, q) = random_polynomial(rng, A.chart(), 2);
            out.push_back({"random#" + tag,
                           {PolyVector(A.chart(), std::move(xc)), std::move(U),
                            std::move(V)}});
        } else {
            // broken perturbation of an internal candidate
            Section a = A.zero_section();
            for (std::size_t b = 0; b < r; ++b)
                a.coefficients[b] = random_polynomial(rng, A.chart(), 1);
            IMSectionCoords c = internal_candidate(A, nabla, n, a);
            std::size_t which = rng() % 3;
            if (which == 0 && m > 0) {
                std::vector<Polynomial> xc = c.X.components();
                xc[rng() % m] = xc[rng() % m] + Polynomial::constant(A.chart(), 1);
                c.X = PolyVector(A.chart(), std::move(xc));
            } else if (which == 1 || m == 0) {
                std::size_t p = rng() % r, q = rng() % r;
                c.U.at(p, q) = c.U.at(p, q) + Polynomial::constant(A.chart(), 1);
            } else {
                std::size_t p = rng() % n, q = rng() % n;
                c.V.at(p, q) = c.V.at(p, q) + Polynomial::constant(A.chart(), 1);
            }
            out.push_back({"broken#" + tag, std::move(c)});
        }
        ++i;
    }
    return out;
}

/// For every candidate, the three independent IM verdicts must agree:
/// the coordinate PDE system, the trivial-core derivation-pair conditions,
/// and linearity + cocycle of the reconstructed horizontal derivation.
inline Report theorem_equivalence_suite(const FrameAlgebroid& A,
                                        const Connection& nabla, std::size_t n,
                                        std::size_t count, std::uint64_t seed) {
    Report rep;
    SplitVB W = build_trivial_core(A, n, nabla);
    auto A_ptr = W.base_ptr();
    auto candidates = equivalence_candidates(A, nabla, n, count, seed);
    for (const auto& cand : candidates) {
        bool pde = im_section_pde_check(A, nabla, n, cand.coords).all_passed();
        bool prop =
            trivial_core_im_check(A, nabla, delta_A_of_coords(A_ptr, cand.coords),
                                  delta_E_of_coords(cand.coords))
                .all_passed();
        DefCochain hor(1, W.total_ptr());
        {
            const Chart& tot = W.total().chart();
            for (std::size_t a = 0; a < W.r(); ++a) {
                Section val = Section::zero(tot, W.r());
                for (std::size_t b = 0; b < W.r(); ++b)
                    val.coefficients[b] = (-cand.coords.U.at(b, a)).extended_to(tot);
                hor.set_frame_value({static_cast<int>(a)}, std::move(val));
            }
            hor.set_symbol_value(
                {}, derivation_to_linear_field(W, delta_E_of_coords(cand.coords)));
        }
        bool rec = is_algebroid_derivation(hor).all_passed() &&
                   classify_cochain_linearity(W, hor).linear;

        std::string verdicts = std::string(pde ? "pde=pass" : "pde=fail") + " " +
                               (prop ? "pair=pass" : "pair=fail") + " " +
                               (rec ? "reconstructed=pass" : "reconstructed=fail");
        if (pde == prop && prop == rec)
            rep.add_pass("agreement(" + cand.name + ": " + verdicts + ")");
        else
            rep.add_fail("agreement(" + cand.name + ")", verdicts);
    }
    return rep;
}

}  // namespace vbcalc
