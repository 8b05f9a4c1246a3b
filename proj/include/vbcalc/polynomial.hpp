#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vbcalc/error.hpp"
#include "vbcalc/rational.hpp"

namespace vbcalc {

/// Ordered list of coordinate names, shared between the values built over it.
/// Equality is by name sequence, not identity.
class Chart {
public:
    Chart() : names_(std::make_shared<const std::vector<std::string>>()) {}
    explicit Chart(std::vector<std::string> names)
        : names_(std::make_shared<const std::vector<std::string>>(std::move(names))) {
        for (std::size_t i = 0; i < names_->size(); ++i)
            for (std::size_t j = i + 1; j < names_->size(); ++j)
                if ((*names_)[i] == (*names_)[j])
                    throw Error("duplicate coordinate name '" + (*names_)[i] + "'");
    }

    std::size_t dim() const { return names_->size(); }
    const std::string& name(std::size_t i) const { return (*names_)[i]; }
    const std::vector<std::string>& names() const { return *names_; }

    /// Index of a coordinate, or -1 when absent.
    int find(const std::string& n) const {
        for (std::size_t i = 0; i < names_->size(); ++i)
            if ((*names_)[i] == n) return static_cast<int>(i);
        return -1;
    }

    friend bool operator==(const Chart& a, const Chart& b) {
        return a.names_ == b.names_ || *a.names_ == *b.names_;
    }
    friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }

    /// New chart with extra coordinates appended.
    Chart extended(const std::vector<std::string>& extra) const {
        std::vector<std::string> all = *names_;
        all.insert(all.end(), extra.begin(), extra.end());
        return Chart(std::move(all));
    }

private:
    std::shared_ptr<const std::vector<std::string>> names_;
};

/// Exponent vector; length always equals the chart dimension.
using Monomial = std::vector<unsigned>;

inline unsigned monomial_degree(const Monomial& m) {
    unsigned d = 0;
    for (unsigned e : m) d += e;
    return d;
}

/// Graded lexicographic order, larger monomial first, so map iteration yields
/// the canonical printing order (leading term first).
struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = monomial_degree(a), db = monomial_degree(b);
        if (da != db) return da > db;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] > b[i];
        return false;
    }
};

/// Exact multivariate polynomial over the rationals in canonical form:
/// no stored zero coefficients, terms ordered graded-lexicographically.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GrlexGreater>;

    Polynomial() = default;
    explicit Polynomial(Chart chart) : chart_(std::move(chart)) {}

    static Polynomial zero(const Chart& chart) { return Polynomial(chart); }

    static Polynomial constant(const Chart& chart, const Rational& c) {
        Polynomial p(chart);
        if (c != 0) p.terms_[Monomial(chart.dim(), 0)] = c;
        return p;
    }

    static Polynomial variable(const Chart& chart, std::size_t index) {
        if (index >= chart.dim()) throw Error("variable index out of range");
        Polynomial p(chart);
        Monomial m(chart.dim(), 0);
        m[index] = 1;
        p.terms_[m] = 1;
        return p;
    }

    static Polynomial monomial(const Chart& chart, Monomial m, const Rational& c) {
        if (m.size() != chart.dim()) throw Error("exponent vector length mismatch");
        Polynomial p(chart);
        if (c != 0) p.terms_[std::move(m)] = c;
        return p;
    }

    const Chart& chart() const { return chart_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && monomial_degree(terms_.begin()->first) == 0);
    }

    /// Total degree; zero polynomial reports 0.
    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
        return d;
    }

    /// Largest total degree in the given variable subset.
    unsigned degree_in(const std::vector<std::size_t>& vars) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) {
            unsigned t = 0;
            for (std::size_t v : vars) t += m[v];
            d = std::max(d, t);
        }
        return d;
    }

    /// True when every term has the given total degree in the variable subset.
    bool homogeneous_in(const std::vector<std::size_t>& vars, unsigned degree) const {
        for (const auto& [m, c] : terms_) {
            unsigned t = 0;
            for (std::size_t v : vars) t += m[v];
            if (t != degree) return false;
        }
        return true;
    }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        require_same_chart(a, b);
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r(a.chart_);
        for (const auto& [m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        require_same_chart(a, b);
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        require_same_chart(a, b);
        Polynomial r(a.chart_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(ma.size());
                for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    friend Polynomial operator*(const Rational& c, const Polynomial& a) {
        Polynomial r(a.chart_);
        if (c == 0) return r;
        for (const auto& [m, k] : a.terms_) r.terms_[m] = c * k;
        return r;
    }

    Polynomial pow(unsigned e) const {
        Polynomial r = constant(chart_, 1);
        for (unsigned i = 0; i < e; ++i) r = r * (*this);
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.chart_ == b.chart_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Formal partial derivative in the given coordinate.
    Polynomial derivative(std::size_t var) const {
        if (var >= chart_.dim()) throw Error("unknown variable index");
        Polynomial r(chart_);
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            Monomial d = m;
            d[var] -= 1;
            r.add_term(d, c * m[var]);
        }
        return r;
    }

    Polynomial derivative(const std::string& var) const {
        int i = chart_.find(var);
        if (i < 0) throw Error("unknown variable '" + var + "'");
        return derivative(static_cast<std::size_t>(i));
    }

    /// Exact evaluation at a rational point of full chart dimension.
    Rational evaluate(const std::vector<Rational>& point) const {
        if (point.size() != chart_.dim())
            throw Error("evaluation point dimension mismatch");
        Rational total = 0;
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < m.size(); ++i)
                for (unsigned e = 0; e < m[i]; ++e) t *= point[i];
            total += t;
        }
        return total;
    }

    /// Reinterpret over a larger chart that starts with this chart's
    /// coordinates (new variables get exponent zero).
    Polynomial extended_to(const Chart& big) const {
        if (big.dim() < chart_.dim()) throw Error("extended_to: chart too small");
        for (std::size_t i = 0; i < chart_.dim(); ++i)
            if (big.name(i) != chart_.name(i))
                throw Error("extended_to: chart prefix mismatch");
        Polynomial r(big);
        for (const auto& [m, c] : terms_) {
            Monomial e(big.dim(), 0);
            std::copy(m.begin(), m.end(), e.begin());
            r.terms_[e] = c;
        }
        return r;
    }

    /// Restrict to a prefix chart; fails when a trailing variable occurs.
    Polynomial restricted_to(const Chart& small) const {
        if (small.dim() > chart_.dim()) throw Error("restricted_to: chart too large");
        for (std::size_t i = 0; i < small.dim(); ++i)
            if (small.name(i) != chart_.name(i))
                throw Error("restricted_to: chart prefix mismatch");
        Polynomial r(small);
        for (const auto& [m, c] : terms_) {
            for (std::size_t i = small.dim(); i < chart_.dim(); ++i)
                if (m[i] != 0)
                    throw Error("restricted_to: polynomial depends on '" +
                                chart_.name(i) + "'");
            Monomial e(m.begin(), m.begin() + small.dim());
            r.terms_[e] = c;
        }
        return r;
    }

    /// Canonical printing: graded-lex term order, explicit '*' between factors,
    /// '^' for powers. Round-trips through the expression parser.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Rational mag = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) out += "-";
                first = false;
            } else {
                out += c < 0 ? " - " : " + ";
            }
            std::string vars;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (!vars.empty()) vars += "*";
                vars += chart_.name(i);
                if (m[i] > 1) vars += "^" + std::to_string(m[i]);
            }
            if (vars.empty()) {
                out += rational_to_string(mag);
            } else if (mag == 1) {
                out += vars;
            } else {
                out += rational_to_string(mag) + "*" + vars;
            }
        }
        return out;
    }

private:
    static void require_same_chart(const Polynomial& a, const Polynomial& b) {
        if (a.chart_ != b.chart_) throw Error("polynomial chart mismatch");
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_[m] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Chart chart_;
    TermMap terms_;
};

}  // namespace vbcalc
