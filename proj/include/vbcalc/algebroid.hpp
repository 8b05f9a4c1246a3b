#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vbcalc/matrix.hpp"
#include "vbcalc/polynomial.hpp"
#include "vbcalc/polyvector.hpp"
#include "vbcalc/report.hpp"

namespace vbcalc {

/// Section of a trivialized bundle: one polynomial coefficient per frame
/// element. Ownership of shape checks lies with the operations.
struct Section {
    std::vector<Polynomial> coefficients;

    Section() = default;
    explicit Section(std::vector<Polynomial> coeffs)
        : coefficients(std::move(coeffs)) {}

    static Section zero(const Chart& chart, std::size_t rank) {
        return Section(std::vector<Polynomial>(rank, Polynomial::zero(chart)));
    }

    /// Frame element as a section (unit coefficient in one slot).
    static Section unit(const Chart& chart, std::size_t rank, std::size_t index) {
        Section s = zero(chart, rank);
        s.coefficients[index] = Polynomial::constant(chart, 1);
        return s;
    }

    std::size_t rank() const { return coefficients.size(); }

    bool is_zero() const {
        for (const auto& c : coefficients)
            if (!c.is_zero()) return false;
        return true;
    }

    friend Section operator+(const Section& a, const Section& b) {
        require_same_rank(a, b);
        Section r = a;
        for (std::size_t i = 0; i < r.coefficients.size(); ++i)
            r.coefficients[i] = r.coefficients[i] + b.coefficients[i];
        return r;
    }

    friend Section operator-(const Section& a, const Section& b) {
        require_same_rank(a, b);
        Section r = a;
        for (std::size_t i = 0; i < r.coefficients.size(); ++i)
            r.coefficients[i] = r.coefficients[i] - b.coefficients[i];
        return r;
    }

    friend Section operator-(const Section& a) {
        Section r = a;
        for (auto& c : r.coefficients) c = -c;
        return r;
    }

    friend Section operator*(const Polynomial& f, const Section& a) {
        Section r = a;
        for (auto& c : r.coefficients) c = f * c;
        return r;
    }

    friend Section operator*(const Rational& q, const Section& a) {
        Section r = a;
        for (auto& c : r.coefficients) c = q * c;
        return r;
    }

    friend bool operator==(const Section& a, const Section& b) {
        return a.coefficients == b.coefficients;
    }
    friend bool operator!=(const Section& a, const Section& b) { return !(a == b); }

    std::string to_string(const std::vector<std::string>& frame_names) const {
        std::string out;
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
            if (coefficients[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + coefficients[i].to_string() + ")*" + frame_names[i];
        }
        return out.empty() ? "0" : out;
    }

private:
    static void require_same_rank(const Section& a, const Section& b) {
        if (a.coefficients.size() != b.coefficients.size())
            throw Error("section rank mismatch");
    }
};

/// Lie algebroid presented over a polynomial chart by anchor components
/// rho^i_alpha and bracket structure functions c^alpha_{beta gamma} on a
/// finite frame. The structure table is stored in full and kept antisymmetric.
class FrameAlgebroid {
public:
    FrameAlgebroid() = default;

    FrameAlgebroid(Chart chart, std::size_t rank, std::vector<std::string> frame_names,
                   std::vector<PolyVector> anchor,
                   std::vector<std::vector<Section>> structure)
        : chart_(std::move(chart)),
          rank_(rank),
          frame_names_(std::move(frame_names)),
          anchor_(std::move(anchor)),
          structure_(std::move(structure)) {
        if (frame_names_.size() != rank_) throw Error("frame name count mismatch");
        if (anchor_.size() != rank_) throw Error("anchor table rank mismatch");
        for (const auto& a : anchor_)
            if (a.chart() != chart_) throw Error("anchor chart mismatch");
        if (structure_.size() != rank_) throw Error("structure table rank mismatch");
        for (const auto& row : structure_) {
            if (row.size() != rank_) throw Error("structure table rank mismatch");
            for (const auto& s : row)
                if (s.rank() != rank_) throw Error("structure entry rank mismatch");
        }
        for (std::size_t b = 0; b < rank_; ++b)
            for (std::size_t g = 0; g < rank_; ++g)
                if (structure_[b][g] != -structure_[g][b])
                    throw Error("structure functions not antisymmetric in (" +
                                frame_names_[b] + ", " + frame_names_[g] + ")");
    }

    /// Convenience builder: zero anchor, zero brackets; callers fill in.
    static FrameAlgebroid abelian(Chart chart, std::size_t rank,
                                  std::vector<std::string> frame_names) {
        std::vector<PolyVector> anchor(rank, PolyVector::zero(chart));
        std::vector<std::vector<Section>> structure(
            rank, std::vector<Section>(rank, Section::zero(chart, rank)));
        return FrameAlgebroid(std::move(chart), rank, std::move(frame_names),
                              std::move(anchor), std::move(structure));
    }

    const Chart& chart() const { return chart_; }
    std::size_t rank() const { return rank_; }
    const std::vector<std::string>& frame_names() const { return frame_names_; }
    const std::string& frame_name(std::size_t i) const { return frame_names_[i]; }

    const PolyVector& anchor_of_frame(std::size_t alpha) const {
        return anchor_[alpha];
    }

    /// [eps_beta, eps_gamma] as a section.
    const Section& frame_bracket(std::size_t beta, std::size_t gamma) const {
        return structure_[beta][gamma];
    }

    Section zero_section() const { return Section::zero(chart_, rank_); }
    Section frame_section(std::size_t i) const {
        return Section::unit(chart_, rank_, i);
    }

    /// rho(a) = sum_alpha a^alpha rho_alpha.
    PolyVector anchor(const Section& a) const {
        require_section(a);
        PolyVector r = PolyVector::zero(chart_);
        for (std::size_t alpha = 0; alpha < rank_; ++alpha) {
            if (a.coefficients[alpha].is_zero()) continue;
            r = r + a.coefficients[alpha] * anchor_[alpha];
        }
        return r;
    }

    /// [a,b]^alpha = rho(a)(b^alpha) - rho(b)(a^alpha)
    ///             + sum c^alpha_{beta gamma} a^beta b^gamma.
    Section bracket(const Section& a, const Section& b) const {
        require_section(a);
        require_section(b);
        PolyVector ra = anchor(a), rb = anchor(b);
        Section r = zero_section();
        for (std::size_t alpha = 0; alpha < rank_; ++alpha)
            r.coefficients[alpha] =
                ra.apply(b.coefficients[alpha]) - rb.apply(a.coefficients[alpha]);
        for (std::size_t beta = 0; beta < rank_; ++beta) {
            if (a.coefficients[beta].is_zero()) continue;
            for (std::size_t gamma = 0; gamma < rank_; ++gamma) {
                if (b.coefficients[gamma].is_zero()) continue;
                Polynomial f = a.coefficients[beta] * b.coefficients[gamma];
                const Section& c = structure_[beta][gamma];
                for (std::size_t alpha = 0; alpha < rank_; ++alpha) {
                    if (c.coefficients[alpha].is_zero()) continue;
                    r.coefficients[alpha] =
                        r.coefficients[alpha] + f * c.coefficients[alpha];
                }
            }
        }
        return r;
    }

    friend bool operator==(const FrameAlgebroid& a, const FrameAlgebroid& b) {
        return a.chart_ == b.chart_ && a.rank_ == b.rank_ && a.anchor_ == b.anchor_ &&
               a.structure_ == b.structure_;
    }
    friend bool operator!=(const FrameAlgebroid& a, const FrameAlgebroid& b) {
        return !(a == b);
    }

    void require_section(const Section& s) const {
        if (s.rank() != rank_) throw Error("section rank mismatch");
        for (const auto& c : s.coefficients)
            if (c.chart() != chart_) throw Error("section chart mismatch");
    }

private:
    Chart chart_;
    std::size_t rank_ = 0;
    std::vector<std::string> frame_names_;
    std::vector<PolyVector> anchor_;               // rho_alpha
    std::vector<std::vector<Section>> structure_;  // [beta][gamma] -> section
};

/// Jacobi identity of the presented bracket on all sections: the Jacobiator
/// on frame triples, plus the Leibniz correction term
///   rho([eps_a, eps_b]) - [rho(eps_a), rho(eps_b)]
/// on frame pairs, which obstructs the Jacobiator from being tensorial (it is
/// what the Jacobiator on (eps_a, eps_b, f eps_c) picks up). Both families
/// vanish iff Jacobi holds for arbitrary polynomial-coefficient sections.
inline Report check_jacobi(const FrameAlgebroid& A) {
    Report rep;
    const std::size_t r = A.rank();
    bool any = false;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b)
            for (std::size_t c = b + 1; c < r; ++c) {
                any = true;
                Section ea = A.frame_section(a), eb = A.frame_section(b),
                        ec = A.frame_section(c);
                Section jac = A.bracket(ea, A.bracket(eb, ec)) +
                              A.bracket(eb, A.bracket(ec, ea)) +
                              A.bracket(ec, A.bracket(ea, eb));
                std::string name = "jacobi(" + A.frame_name(a) + "," +
                                   A.frame_name(b) + "," + A.frame_name(c) + ")";
                if (jac.is_zero())
                    rep.add_pass(name);
                else
                    rep.add_fail(name, "residual " + jac.to_string(A.frame_names()));
            }
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) {
            any = true;
            PolyVector l = A.anchor(A.frame_bracket(a, b)) -
                           vf_commutator(A.anchor_of_frame(a), A.anchor_of_frame(b));
            std::string name = "jacobi_leibniz(" + A.frame_name(a) + "," +
                               A.frame_name(b) + ")";
            if (l.is_zero())
                rep.add_pass(name);
            else
                rep.add_fail(name, "residual " + l.to_string());
        }
    if (!any) rep.add_pass("jacobi(vacuous: rank < 2)");
    return rep;
}

/// rho([eps_a, eps_b]) = [rho(eps_a), rho(eps_b)] on all frame pairs.
inline Report check_anchor_compat(const FrameAlgebroid& A) {
    Report rep;
    const std::size_t r = A.rank();
    bool any = false;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) {
            any = true;
            PolyVector lhs = A.anchor(A.frame_bracket(a, b));
            PolyVector rhs = vf_commutator(A.anchor_of_frame(a), A.anchor_of_frame(b));
            std::string name =
                "anchor_compat(" + A.frame_name(a) + "," + A.frame_name(b) + ")";
            if (lhs == rhs)
                rep.add_pass(name);
            else
                rep.add_fail(name, "residual " + (lhs - rhs).to_string());
        }
    if (!any) rep.add_pass("anchor_compat(vacuous: rank < 2)");
    return rep;
}

/// A-connection on a rank-n bundle, given by Christoffel matrices:
/// nabla_{eps_alpha} e_A = Gamma_alpha[B][A] e_B.
class Connection {
public:
    Connection() = default;
    Connection(std::vector<PolyMatrix> christoffel) : gamma_(std::move(christoffel)) {
        for (const auto& g : gamma_)
            if (g.rows() != g.cols()) throw Error("christoffel matrices must be square");
    }

    static Connection zero(const Chart& chart, std::size_t alg_rank,
                           std::size_t bundle_rank) {
        return Connection(std::vector<PolyMatrix>(
            alg_rank, PolyMatrix(chart, bundle_rank, bundle_rank)));
    }

    std::size_t algebroid_rank() const { return gamma_.size(); }
    std::size_t bundle_rank() const { return gamma_.empty() ? 0 : gamma_[0].rows(); }
    const PolyMatrix& gamma(std::size_t alpha) const { return gamma_[alpha]; }
    PolyMatrix& gamma(std::size_t alpha) { return gamma_[alpha]; }

private:
    std::vector<PolyMatrix> gamma_;
};

/// nabla_a e, Leibniz in e and tensorial in a.
inline Section connection_apply(const FrameAlgebroid& A, const Connection& nabla,
                                const Section& a, const Section& e) {
    A.require_section(a);
    if (nabla.algebroid_rank() != A.rank()) throw Error("connection rank mismatch");
    if (e.rank() != nabla.bundle_rank()) throw Error("bundle section rank mismatch");
    PolyVector ra = A.anchor(a);
    Section r(std::vector<Polynomial>(e.rank(), Polynomial::zero(A.chart())));
    for (std::size_t B = 0; B < e.rank(); ++B)
        r.coefficients[B] = ra.apply(e.coefficients[B]);
    for (std::size_t alpha = 0; alpha < A.rank(); ++alpha) {
        if (a.coefficients[alpha].is_zero()) continue;
        std::vector<Polynomial> ge = nabla.gamma(alpha).apply(e.coefficients);
        for (std::size_t B = 0; B < e.rank(); ++B)
            r.coefficients[B] = r.coefficients[B] + a.coefficients[alpha] * ge[B];
    }
    return r;
}

/// Derivation of a trivialized bundle: Delta e_A = X(e^A-coeffs) + V[B][A] e_B,
/// with symbol X on the base chart.
struct BundleDerivation {
    PolyVector symbol;
    PolyMatrix matrix;

    BundleDerivation() = default;
    BundleDerivation(PolyVector sym, PolyMatrix mat)
        : symbol(std::move(sym)), matrix(std::move(mat)) {
        if (symbol.chart() != matrix.chart())
            throw Error("derivation symbol/matrix chart mismatch");
        if (matrix.rows() != matrix.cols())
            throw Error("derivation matrix must be square");
    }

    static BundleDerivation zero(const Chart& chart, std::size_t bundle_rank) {
        return BundleDerivation(PolyVector::zero(chart),
                                PolyMatrix(chart, bundle_rank, bundle_rank));
    }

    std::size_t bundle_rank() const { return matrix.rows(); }

    bool is_zero() const { return symbol.is_zero() && matrix.is_zero(); }

    friend BundleDerivation operator+(const BundleDerivation& a,
                                      const BundleDerivation& b) {
        return BundleDerivation(a.symbol + b.symbol, a.matrix + b.matrix);
    }
    friend BundleDerivation operator-(const BundleDerivation& a,
                                      const BundleDerivation& b) {
        return BundleDerivation(a.symbol - b.symbol, a.matrix - b.matrix);
    }
    friend BundleDerivation operator-(const BundleDerivation& a) {
        return BundleDerivation(-a.symbol, -a.matrix);
    }
    friend BundleDerivation operator*(const Polynomial& f, const BundleDerivation& a) {
        return BundleDerivation(f * a.symbol, f * a.matrix);
    }

    friend bool operator==(const BundleDerivation& a, const BundleDerivation& b) {
        return a.symbol == b.symbol && a.matrix == b.matrix;
    }
    friend bool operator!=(const BundleDerivation& a, const BundleDerivation& b) {
        return !(a == b);
    }
};

/// nabla_{eps_alpha} as a BundleDerivation.
inline BundleDerivation connection_derivation(const FrameAlgebroid& A,
                                              const Connection& nabla,
                                              std::size_t alpha) {
    return BundleDerivation(A.anchor_of_frame(alpha), nabla.gamma(alpha));
}

/// Leibniz action (Delta e)^B = X(e^B) + V^B_A e^A.
inline Section derivation_apply(const BundleDerivation& d, const Section& e) {
    if (e.rank() != d.bundle_rank()) throw Error("derivation/section rank mismatch");
    std::vector<Polynomial> r = d.matrix.apply(e.coefficients);
    for (std::size_t B = 0; B < r.size(); ++B)
        r[B] = r[B] + d.symbol.apply(e.coefficients[B]);
    return Section(std::move(r));
}

/// Commutator Delta1 Delta2 - Delta2 Delta1: symbol [X1,X2],
/// matrix X1(V2) - X2(V1) + [V1,V2].
inline BundleDerivation derivation_commutator(const BundleDerivation& d1,
                                              const BundleDerivation& d2) {
    if (d1.bundle_rank() != d2.bundle_rank())
        throw Error("derivation commutator rank mismatch");
    return BundleDerivation(vf_commutator(d1.symbol, d2.symbol),
                            d2.matrix.derived_along(d1.symbol) -
                                d1.matrix.derived_along(d2.symbol) +
                                matrix_commutator(d1.matrix, d2.matrix));
}

/// Dual derivation: same symbol, negated transpose matrix. Satisfies
/// <Delta* phi, e> = sigma(Delta)<phi, e> - <phi, Delta e>.
inline BundleDerivation dual_derivation(const BundleDerivation& d) {
    return BundleDerivation(d.symbol, -d.matrix.transposed());
}

/// Curvature R(eps_a, eps_b) = [nabla_a, nabla_b] - nabla_{[eps_a, eps_b]}
/// must vanish, as an identity of full first-order operators.
inline Report check_flatness(const FrameAlgebroid& A, const Connection& nabla) {
    Report rep;
    if (nabla.algebroid_rank() != A.rank()) throw Error("connection rank mismatch");
    const std::size_t r = A.rank();
    bool any = false;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) {
            any = true;
            BundleDerivation comm =
                derivation_commutator(connection_derivation(A, nabla, a),
                                      connection_derivation(A, nabla, b));
            const Section& br = A.frame_bracket(a, b);
            BundleDerivation nabla_br =
                BundleDerivation::zero(A.chart(), nabla.bundle_rank());
            for (std::size_t g = 0; g < r; ++g) {
                if (br.coefficients[g].is_zero()) continue;
                nabla_br = nabla_br +
                           br.coefficients[g] * connection_derivation(A, nabla, g);
            }
            BundleDerivation curv = comm - nabla_br;
            std::string name =
                "flatness(" + A.frame_name(a) + "," + A.frame_name(b) + ")";
            if (curv.is_zero())
                rep.add_pass(name);
            else
                rep.add_fail(name, "curvature matrix " + curv.matrix.to_string());
        }
    if (!any) rep.add_pass("flatness(vacuous: rank < 2)");
    return rep;
}

/// The gauge (Atiyah) algebroid der E of a trivial rank-n bundle over the
/// chart: frame = m coordinate-lift derivations (d/dx^i, 0) followed by n^2
/// endomorphism derivations (0, E^A_B); bracket = derivation commutator,
/// anchor = symbol map.
class GaugeAlgebroid {
public:
    GaugeAlgebroid(const Chart& chart, std::size_t bundle_rank)
        : chart_(chart), n_(bundle_rank), m_(chart.dim()) {
        std::vector<std::string> names;
        std::vector<BundleDerivation> frame;
        for (std::size_t i = 0; i < m_; ++i) {
            names.push_back("D_" + chart.name(i));
            frame.emplace_back(PolyVector::coordinate(chart, i),
                               PolyMatrix(chart, n_, n_));
        }
        for (std::size_t A = 0; A < n_; ++A)
            for (std::size_t B = 0; B < n_; ++B) {
                names.push_back("N" + std::to_string(A + 1) + "_" +
                                std::to_string(B + 1));
                PolyMatrix e(chart, n_, n_);
                e.at(A, B) = Polynomial::constant(chart, 1);
                frame.emplace_back(PolyVector::zero(chart), std::move(e));
            }
        frame_ = std::move(frame);

        const std::size_t rank = m_ + n_ * n_;
        std::vector<PolyVector> anchor;
        anchor.reserve(rank);
        for (const auto& d : frame_) anchor.push_back(d.symbol);
        std::vector<std::vector<Section>> structure(
            rank, std::vector<Section>(rank, Section::zero(chart, rank)));
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < rank; ++j) {
                if (i == j) continue;
                structure[i][j] = coords_of(derivation_commutator(frame_[i], frame_[j]));
            }
        algebroid_ = FrameAlgebroid(chart, rank, std::move(names), std::move(anchor),
                                    std::move(structure));
    }

    const FrameAlgebroid& algebroid() const { return algebroid_; }
    const std::vector<BundleDerivation>& frame() const { return frame_; }
    std::size_t bundle_rank() const { return n_; }

    /// Expand a derivation of E (polynomial symbol and matrix) over the gauge
    /// frame: symbol components land on the D's, matrix entries on the N's.
    Section coords_of(const BundleDerivation& d) const {
        Section s = Section::zero(chart_, m_ + n_ * n_);
        for (std::size_t i = 0; i < m_; ++i) s.coefficients[i] = d.symbol.component(i);
        for (std::size_t A = 0; A < n_; ++A)
            for (std::size_t B = 0; B < n_; ++B)
                s.coefficients[m_ + A * n_ + B] = d.matrix.at(A, B);
        return s;
    }

    /// Inverse of coords_of.
    BundleDerivation derivation_of(const Section& s) const {
        std::vector<Polynomial> sym(s.coefficients.begin(),
                                    s.coefficients.begin() + m_);
        PolyMatrix mat(chart_, n_, n_);
        for (std::size_t A = 0; A < n_; ++A)
            for (std::size_t B = 0; B < n_; ++B)
                mat.at(A, B) = s.coefficients[m_ + A * n_ + B];
        return BundleDerivation(PolyVector(chart_, std::move(sym)), std::move(mat));
    }

private:
    Chart chart_;
    std::size_t n_;
    std::size_t m_;
    std::vector<BundleDerivation> frame_;
    FrameAlgebroid algebroid_;
};

inline FrameAlgebroid gauge_algebroid(const Chart& chart, std::size_t bundle_rank) {
    return GaugeAlgebroid(chart, bundle_rank).algebroid();
}

}  // namespace vbcalc
