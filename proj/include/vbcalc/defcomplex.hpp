#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vbcalc/algebroid.hpp"

namespace vbcalc {

/// Sorts the tuple in place and returns the permutation sign, or 0 when an
/// index repeats. Single source of truth for the antisymmetry convention.
inline int sort_with_sign(std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) {
                std::swap(idx[i], idx[j]);
                sign = -sign;
            }
        }
    return sign;
}

/// All strictly increasing k-tuples from {0..r-1}, lexicographic order.
inline std::vector<std::vector<int>> increasing_tuples(std::size_t r, std::size_t k) {
    std::vector<std::vector<int>> out;
    if (k > r) return out;
    std::vector<int> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = static_cast<int>(i);
    for (;;) {
        out.push_back(cur);
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && cur[i] == static_cast<int>(r - k + i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (std::size_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

/// Degree-k cochain in the deformation complex of a frame algebroid:
/// antisymmetric frame values (sections) on strictly increasing index tuples
/// plus antisymmetric symbol values (vector fields) on (k-1)-tuples. Degree 0
/// stores a single section and has no symbol table. Evaluation extends the
/// tables by multilinearity, antisymmetry and the Leibniz rule
///   c(a_1, .., f a_k) = f c(a_1, .., a_k) + sigma_c(a_1, .., a_{k-1})(f) a_k.
class DefCochain {
public:
    DefCochain() = default;

    DefCochain(std::size_t degree, std::shared_ptr<const FrameAlgebroid> parent)
        : degree_(degree), parent_(std::move(parent)) {
        const std::size_t r = parent_->rank();
        for (const auto& t : increasing_tuples(r, degree_))
            frame_values_[t] = parent_->zero_section();
        if (degree_ >= 1)
            for (const auto& t : increasing_tuples(r, degree_ - 1))
                symbol_values_[t] = PolyVector::zero(parent_->chart());
    }

    static DefCochain zero(std::size_t degree,
                           std::shared_ptr<const FrameAlgebroid> parent) {
        return DefCochain(degree, std::move(parent));
    }

    /// Degree-0 cochain from a section.
    static DefCochain from_section(std::shared_ptr<const FrameAlgebroid> parent,
                                   const Section& s) {
        DefCochain c(0, std::move(parent));
        c.parent_->require_section(s);
        c.frame_values_[{}] = s;
        return c;
    }

    /// Degree-1 cochain from a bundle derivation of the algebroid's bundle.
    static DefCochain from_derivation(std::shared_ptr<const FrameAlgebroid> parent,
                                      const BundleDerivation& d) {
        if (d.bundle_rank() != parent->rank())
            throw Error("derivation rank does not match algebroid");
        DefCochain c(1, parent);
        for (std::size_t a = 0; a < parent->rank(); ++a)
            c.set_frame_value({static_cast<int>(a)},
                              derivation_apply(d, parent->frame_section(a)));
        c.set_symbol_value({}, d.symbol);
        return c;
    }

    std::size_t degree() const { return degree_; }
    const std::shared_ptr<const FrameAlgebroid>& parent_ptr() const { return parent_; }
    const FrameAlgebroid& parent() const { return *parent_; }

    const std::map<std::vector<int>, Section>& frame_values() const {
        return frame_values_;
    }
    const std::map<std::vector<int>, PolyVector>& symbol_values() const {
        return symbol_values_;
    }

    void set_frame_value(std::vector<int> tuple, Section value) {
        int sign = sort_with_sign(tuple);
        if (sign == 0) {
            if (!value.is_zero())
                throw Error("nonzero value on repeated frame tuple");
            return;
        }
        auto it = frame_values_.find(tuple);
        if (it == frame_values_.end()) throw Error("frame tuple out of range");
        it->second = sign == 1 ? std::move(value) : -value;
    }

    void set_symbol_value(std::vector<int> tuple, PolyVector value) {
        int sign = sort_with_sign(tuple);
        if (sign == 0) {
            if (!value.is_zero())
                throw Error("nonzero symbol on repeated frame tuple");
            return;
        }
        auto it = symbol_values_.find(tuple);
        if (it == symbol_values_.end()) throw Error("symbol tuple out of range");
        it->second = sign == 1 ? std::move(value) : -value;
    }

    /// Value on a frame tuple in any order, with antisymmetry sign applied.
    Section frame_value(std::vector<int> tuple) const {
        int sign = sort_with_sign(tuple);
        if (sign == 0) return parent_->zero_section();
        const Section& v = frame_values_.at(tuple);
        return sign == 1 ? v : -v;
    }

    PolyVector symbol_value(std::vector<int> tuple) const {
        int sign = sort_with_sign(tuple);
        if (sign == 0) return PolyVector::zero(parent_->chart());
        const PolyVector& v = symbol_values_.at(tuple);
        return sign == 1 ? v : -v;
    }

    /// The degree-0 payload.
    const Section& as_section() const {
        if (degree_ != 0) throw Error("not a degree-0 cochain");
        return frame_values_.at({});
    }

    /// Degree-1 cochains are bundle derivations of A -> M.
    BundleDerivation as_derivation() const {
        if (degree_ != 1) throw Error("not a degree-1 cochain");
        const std::size_t r = parent_->rank();
        PolyMatrix mat(parent_->chart(), r, r);
        for (std::size_t a = 0; a < r; ++a) {
            Section v = frame_value({static_cast<int>(a)});
            for (std::size_t b = 0; b < r; ++b) mat.at(b, a) = v.coefficients[b];
        }
        return BundleDerivation(symbol_value({}), mat);
    }

    bool is_zero() const {
        for (const auto& [t, v] : frame_values_)
            if (!v.is_zero()) return false;
        for (const auto& [t, v] : symbol_values_)
            if (!v.is_zero()) return false;
        return true;
    }

    friend bool operator==(const DefCochain& a, const DefCochain& b) {
        return a.degree_ == b.degree_ && *a.parent_ == *b.parent_ &&
               a.frame_values_ == b.frame_values_ &&
               a.symbol_values_ == b.symbol_values_;
    }
    friend bool operator!=(const DefCochain& a, const DefCochain& b) {
        return !(a == b);
    }

    friend DefCochain operator+(const DefCochain& a, const DefCochain& b) {
        if (a.degree_ != b.degree_ || *a.parent_ != *b.parent_)
            throw Error("cochain degree/parent mismatch");
        DefCochain r = a;
        for (auto& [t, v] : r.frame_values_) v = v + b.frame_values_.at(t);
        for (auto& [t, v] : r.symbol_values_) v = v + b.symbol_values_.at(t);
        return r;
    }

    friend DefCochain operator-(const DefCochain& a, const DefCochain& b) {
        if (a.degree_ != b.degree_ || *a.parent_ != *b.parent_)
            throw Error("cochain degree/parent mismatch");
        DefCochain r = a;
        for (auto& [t, v] : r.frame_values_) v = v - b.frame_values_.at(t);
        for (auto& [t, v] : r.symbol_values_) v = v - b.symbol_values_.at(t);
        return r;
    }

    friend DefCochain operator*(const Rational& q, const DefCochain& a) {
        DefCochain r = a;
        for (auto& [t, v] : r.frame_values_) v = q * v;
        for (auto& [t, v] : r.symbol_values_) v = q * v;
        return r;
    }

private:
    std::size_t degree_ = 0;
    std::shared_ptr<const FrameAlgebroid> parent_;
    std::map<std::vector<int>, Section> frame_values_;
    std::map<std::vector<int>, PolyVector> symbol_values_;
};

/// Multilinear antisymmetric tensorial extension of the symbol table.
inline PolyVector cochain_symbol_eval(const DefCochain& c,
                                      const std::vector<Section>& args) {
    if (c.degree() < 1) throw Error("degree-0 cochains have no symbol");
    if (args.size() + 1 != c.degree()) throw Error("symbol arity mismatch");
    const FrameAlgebroid& A = c.parent();
    for (const auto& a : args) A.require_section(a);
    const std::size_t r = A.rank();
    const std::size_t k1 = args.size();
    PolyVector total = PolyVector::zero(A.chart());
    std::vector<int> idx(k1, 0);
    for (;;) {
        Polynomial coeff = Polynomial::constant(A.chart(), 1);
        bool zero = false;
        for (std::size_t i = 0; i < k1 && !zero; ++i) {
            const Polynomial& f = args[i].coefficients[idx[i]];
            if (f.is_zero())
                zero = true;
            else
                coeff = coeff * f;
        }
        if (!zero) {
            PolyVector v = c.symbol_value(idx);
            if (!v.is_zero()) total = total + coeff * v;
        }
        std::size_t p = 0;
        while (p < k1 && idx[p] == static_cast<int>(r) - 1) idx[p++] = 0;
        if (p == k1) break;
        ++idx[p];
    }
    return total;
}

/// Evaluation of a cochain on arbitrary sections via the closed formula
///   c(a_1..a_k) = sum over frame indices (prod coeffs) c(frame tuple)
///               + sum_i (-1)^{k-i} sum_alpha sigma_c(a_1..^a_i..a_k)(a_i^alpha) eps_alpha.
inline Section cochain_eval(const DefCochain& c, const std::vector<Section>& args) {
    const FrameAlgebroid& A = c.parent();
    if (args.size() != c.degree()) throw Error("cochain arity mismatch");
    for (const auto& a : args) A.require_section(a);
    if (c.degree() == 0) return c.as_section();

    const std::size_t r = A.rank();
    const std::size_t k = args.size();
    Section total = A.zero_section();

    // Frame part.
    std::vector<int> idx(k, 0);
    for (;;) {
        Polynomial coeff = Polynomial::constant(A.chart(), 1);
        bool zero = false;
        for (std::size_t i = 0; i < k && !zero; ++i) {
            const Polynomial& f = args[i].coefficients[idx[i]];
            if (f.is_zero())
                zero = true;
            else
                coeff = coeff * f;
        }
        if (!zero) {
            Section v = c.frame_value(idx);
            if (!v.is_zero()) total = total + coeff * v;
        }
        std::size_t p = 0;
        while (p < k && idx[p] == static_cast<int>(r) - 1) idx[p++] = 0;
        if (p == k) break;
        ++idx[p];
    }

    // Leibniz corrections, one per slot.
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Section> rest;
        rest.reserve(k - 1);
        for (std::size_t j = 0; j < k; ++j)
            if (j != i) rest.push_back(args[j]);
        PolyVector sig = cochain_symbol_eval(c, rest);
        if (sig.is_zero()) continue;
        int sign = ((k - 1 - i) % 2 == 0) ? 1 : -1;
        for (std::size_t alpha = 0; alpha < r; ++alpha) {
            Polynomial d = sig.apply(args[i].coefficients[alpha]);
            if (d.is_zero()) continue;
            if (sign < 0) d = -d;
            total.coefficients[alpha] = total.coefficients[alpha] + d;
        }
    }
    return total;
}

/// The differential of the deformation complex. Degree 0 is special-cased to
/// d a = [a, -] with symbol rho(a); in higher degree the frame table follows
///   (d c)(a_1..a_{k+1}) = sum_i (-)^{i+1} [a_i, c(.. ^a_i ..)]
///                       + sum_{i<j} (-)^{i+j} c([a_i,a_j], .. ^a_i .. ^a_j ..)
/// and the symbol table follows the matching formula with rho(c(a_1..a_k))
/// closing the sum.
inline DefCochain differential(const DefCochain& c) {
    const auto& parent = c.parent_ptr();
    const FrameAlgebroid& A = *parent;
    const std::size_t r = A.rank();
    const std::size_t k = c.degree();

    DefCochain out(k + 1, parent);

    if (k == 0) {
        const Section& a = c.as_section();
        for (std::size_t b = 0; b < r; ++b)
            out.set_frame_value({static_cast<int>(b)},
                                A.bracket(a, A.frame_section(b)));
        out.set_symbol_value({}, A.anchor(a));
        return out;
    }

    for (const auto& tuple : increasing_tuples(r, k + 1)) {
        Section value = A.zero_section();
        for (std::size_t i = 0; i < k + 1; ++i) {
            std::vector<int> rest;
            for (std::size_t j = 0; j < k + 1; ++j)
                if (j != i) rest.push_back(tuple[j]);
            Section inner = c.frame_value(rest);
            Section term = A.bracket(A.frame_section(tuple[i]), inner);
            value = (i % 2 == 0) ? value + term : value - term;
        }
        for (std::size_t i = 0; i < k + 1; ++i)
            for (std::size_t j = i + 1; j < k + 1; ++j) {
                Section br = A.frame_bracket(tuple[i], tuple[j]);
                std::vector<Section> args;
                args.push_back(br);
                for (std::size_t l = 0; l < k + 1; ++l)
                    if (l != i && l != j) args.push_back(A.frame_section(tuple[l]));
                Section term = cochain_eval(c, args);
                value = ((i + j) % 2 == 0) ? value + term : value - term;
            }
        out.set_frame_value(tuple, std::move(value));
    }

    for (const auto& tuple : increasing_tuples(r, k)) {
        PolyVector value = PolyVector::zero(A.chart());
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<int> rest;
            for (std::size_t j = 0; j < k; ++j)
                if (j != i) rest.push_back(tuple[j]);
            PolyVector term =
                vf_commutator(A.anchor_of_frame(tuple[i]), c.symbol_value(rest));
            value = (i % 2 == 0) ? value + term : value - term;
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                Section br = A.frame_bracket(tuple[i], tuple[j]);
                std::vector<Section> args;
                args.push_back(br);
                for (std::size_t l = 0; l < k; ++l)
                    if (l != i && l != j) args.push_back(A.frame_section(tuple[l]));
                PolyVector term = cochain_symbol_eval(c, args);
                value = ((i + j) % 2 == 0) ? value + term : value - term;
            }
        std::vector<int> t = tuple;
        Section cv = c.frame_value(t);
        PolyVector rho_cv = A.anchor(cv);
        value = (k % 2 == 0) ? value - rho_cv : value + rho_cv;
        out.set_symbol_value(tuple, std::move(value));
    }
    return out;
}

/// delta is a Lie algebroid derivation iff delta[a,b] = [delta a, b] + [a, delta b]
/// on frame pairs and rho(delta a) = [sigma(delta), rho(a)] on the frame;
/// equivalently, iff differential(delta) is the zero cochain.
inline Report is_algebroid_derivation(const DefCochain& delta) {
    if (delta.degree() != 1) throw Error("is_algebroid_derivation needs degree 1");
    const FrameAlgebroid& A = delta.parent();
    const std::size_t r = A.rank();
    Report rep;
    PolyVector sym = delta.symbol_value({});
    for (std::size_t a = 0; a < r; ++a) {
        PolyVector lhs = A.anchor(delta.frame_value({static_cast<int>(a)}));
        PolyVector rhs = vf_commutator(sym, A.anchor_of_frame(a));
        std::string name = "anchor_cocycle(" + A.frame_name(a) + ")";
        if (lhs == rhs)
            rep.add_pass(name);
        else
            rep.add_fail(name, "residual " + (lhs - rhs).to_string());
    }
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) {
            Section lhs = cochain_eval(delta, {A.frame_bracket(a, b)});
            Section rhs =
                A.bracket(delta.frame_value({static_cast<int>(a)}),
                          A.frame_section(b)) +
                A.bracket(A.frame_section(a), delta.frame_value({static_cast<int>(b)}));
            std::string name =
                "bracket_cocycle(" + A.frame_name(a) + "," + A.frame_name(b) + ")";
            if (lhs == rhs)
                rep.add_pass(name);
            else
                rep.add_fail(name,
                             "residual " + (lhs - rhs).to_string(A.frame_names()));
        }
    if (r == 0) rep.add_pass("cocycle(vacuous)");
    return rep;
}

/// Bracket of a bundle derivation against a degree-k cochain:
///   [[Delta, c]](w_1..w_k) = Delta(c(w_1..w_k)) - sum_i c(w_1.. Delta w_i ..w_k),
/// symbol [sigma(Delta), sigma_c(..)] - sum_i sigma_c(.. Delta w_i ..).
inline DefCochain bracket_with_derivation(const BundleDerivation& d,
                                          const DefCochain& c) {
    const auto& parent = c.parent_ptr();
    const FrameAlgebroid& A = *parent;
    if (d.bundle_rank() != A.rank())
        throw Error("derivation rank does not match cochain parent");
    const std::size_t r = A.rank();
    const std::size_t k = c.degree();
    DefCochain out(k, parent);

    std::vector<Section> d_frame;
    d_frame.reserve(r);
    for (std::size_t i = 0; i < r; ++i)
        d_frame.push_back(derivation_apply(d, A.frame_section(i)));

    for (const auto& tuple : increasing_tuples(r, k)) {
        std::vector<int> t = tuple;
        Section value = derivation_apply(d, c.frame_value(t));
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<Section> args;
            args.reserve(k);
            for (std::size_t j = 0; j < k; ++j)
                args.push_back(j == i ? d_frame[tuple[j]]
                                      : A.frame_section(tuple[j]));
            value = value - cochain_eval(c, args);
        }
        out.set_frame_value(tuple, std::move(value));
    }

    if (k >= 1) {
        for (const auto& tuple : increasing_tuples(r, k - 1)) {
            std::vector<int> t = tuple;
            PolyVector value = vf_commutator(d.symbol, c.symbol_value(t));
            for (std::size_t i = 0; i < k - 1; ++i) {
                std::vector<Section> args;
                args.reserve(k - 1);
                for (std::size_t j = 0; j < k - 1; ++j)
                    args.push_back(j == i ? d_frame[tuple[j]]
                                          : A.frame_section(tuple[j]));
                value = value - cochain_symbol_eval(c, args);
            }
            out.set_symbol_value(tuple, std::move(value));
        }
    }
    return out;
}

}  // namespace vbcalc
