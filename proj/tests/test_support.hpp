#pragma once

// Shared generators for the test suites: deterministic randomized sections,
// cochains, and linear cochains over split VB presentations.

#include <memory>
#include <random>

#include "vbcalc/defcomplex.hpp"
#include "vbcalc/vb.hpp"

namespace vbtest {

using namespace vbcalc;

inline Polynomial random_poly(std::mt19937_64& rng, const Chart& chart,
                              unsigned max_deg) {
    Polynomial p = Polynomial::zero(chart);
    for (int t = 0; t < 3; ++t) {
        if (rng() % 2) continue;
        Monomial m(chart.dim(), 0);
        unsigned d = rng() % (max_deg + 1);
        for (unsigned j = 0; j < d && chart.dim(); ++j) m[rng() % chart.dim()] += 1;
        int c = int(rng() % 7) - 3;
        if (c) p = p + Polynomial::monomial(chart, m, c);
    }
    return p;
}

inline Section random_section(std::mt19937_64& rng, const FrameAlgebroid& A,
                              unsigned max_deg) {
    Section s = A.zero_section();
    for (std::size_t i = 0; i < A.rank(); ++i)
        s.coefficients[i] = random_poly(rng, A.chart(), max_deg);
    return s;
}

inline DefCochain random_cochain(std::mt19937_64& rng,
                                 std::shared_ptr<const FrameAlgebroid> A,
                                 std::size_t degree, unsigned max_deg) {
    DefCochain c(degree, A);
    for (const auto& t : increasing_tuples(A->rank(), degree))
        c.set_frame_value(t, random_section(rng, *A, max_deg));
    if (degree >= 1)
        for (const auto& t : increasing_tuples(A->rank(), degree - 1)) {
            std::vector<Polynomial> comps;
            for (std::size_t i = 0; i < A->chart().dim(); ++i)
                comps.push_back(random_poly(rng, A->chart(), max_deg));
            c.set_symbol_value(t, PolyVector(A->chart(), std::move(comps)));
        }
    return c;
}

/// Random polynomial over the base chart of W, embedded in the total chart.
inline Polynomial random_base_poly(std::mt19937_64& rng, const SplitVB& W,
                                   unsigned max_deg) {
    return random_poly(rng, W.base().chart(), max_deg)
        .extended_to(W.total().chart());
}

inline Section random_linear_section(std::mt19937_64& rng, const SplitVB& W,
                                     unsigned max_deg) {
    const Chart& tot = W.total().chart();
    Section s = Section::zero(tot, W.total().rank());
    for (std::size_t a = 0; a < W.r(); ++a)
        s.coefficients[a] = random_base_poly(rng, W, max_deg);
    for (std::size_t B = 0; B < W.k(); ++B) {
        Polynomial acc = Polynomial::zero(tot);
        for (std::size_t A = 0; A < W.n(); ++A)
            acc = acc + random_base_poly(rng, W, max_deg) *
                            Polynomial::variable(tot, W.m() + A);
        s.coefficients[W.r() + B] = acc;
    }
    return s;
}

inline Section random_core_section(std::mt19937_64& rng, const SplitVB& W,
                                   unsigned max_deg) {
    Section s = Section::zero(W.total().chart(), W.total().rank());
    for (std::size_t B = 0; B < W.k(); ++B)
        s.coefficients[W.r() + B] = random_base_poly(rng, W, max_deg);
    return s;
}

inline PolyVector random_linear_field(std::mt19937_64& rng, const SplitVB& W,
                                      unsigned max_deg) {
    const Chart& tot = W.total().chart();
    std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
    for (std::size_t i = 0; i < W.m(); ++i)
        comps[i] = random_base_poly(rng, W, max_deg);
    for (std::size_t A = 0; A < W.n(); ++A) {
        Polynomial acc = Polynomial::zero(tot);
        for (std::size_t B = 0; B < W.n(); ++B)
            acc = acc + random_base_poly(rng, W, max_deg) *
                            Polynomial::variable(tot, W.m() + B);
        comps[W.m() + A] = acc;
    }
    return PolyVector(tot, std::move(comps));
}

inline PolyVector random_vertical_constant(std::mt19937_64& rng, const SplitVB& W,
                                           unsigned max_deg) {
    const Chart& tot = W.total().chart();
    std::vector<Polynomial> comps(tot.dim(), Polynomial::zero(tot));
    for (std::size_t A = 0; A < W.n(); ++A)
        comps[W.m() + A] = random_base_poly(rng, W, max_deg);
    return PolyVector(tot, std::move(comps));
}

/// Random linear cochain built slot-type by slot-type.
inline DefCochain random_linear_cochain(std::mt19937_64& rng, const SplitVB& W,
                                        std::size_t degree, unsigned max_deg) {
    DefCochain c(degree, W.total_ptr());
    auto core_count = [&](const std::vector<int>& t) {
        std::size_t n = 0;
        for (int i : t)
            if (W.is_core_generator(static_cast<std::size_t>(i))) ++n;
        return n;
    };
    for (const auto& t : increasing_tuples(W.total().rank(), degree)) {
        std::size_t j = core_count(t);
        if (j == 0)
            c.set_frame_value(t, random_linear_section(rng, W, max_deg));
        else if (j == 1)
            c.set_frame_value(t, random_core_section(rng, W, max_deg));
    }
    if (degree >= 1)
        for (const auto& t : increasing_tuples(W.total().rank(), degree - 1)) {
            std::size_t j = core_count(t);
            if (j == 0)
                c.set_symbol_value(t, random_linear_field(rng, W, max_deg));
            else if (j == 1)
                c.set_symbol_value(t, random_vertical_constant(rng, W, max_deg));
        }
    return c;
}

}  // namespace vbtest
