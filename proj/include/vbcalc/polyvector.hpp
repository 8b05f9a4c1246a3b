#pragma once

#include <string>
#include <vector>

#include "vbcalc/polynomial.hpp"

namespace vbcalc {

/// Polynomial vector field: one component per chart coordinate.
class PolyVector {
public:
    PolyVector() = default;

    static PolyVector zero(const Chart& chart) {
        PolyVector v;
        v.chart_ = chart;
        v.components_.assign(chart.dim(), Polynomial::zero(chart));
        return v;
    }

    PolyVector(Chart chart, std::vector<Polynomial> components)
        : chart_(std::move(chart)), components_(std::move(components)) {
        if (components_.size() != chart_.dim())
            throw Error("vector field component count mismatch");
        for (const auto& c : components_)
            if (c.chart() != chart_) throw Error("vector field chart mismatch");
    }

    /// Coordinate vector field d/dx_i.
    static PolyVector coordinate(const Chart& chart, std::size_t i) {
        PolyVector v = zero(chart);
        v.components_[i] = Polynomial::constant(chart, 1);
        return v;
    }

    const Chart& chart() const { return chart_; }
    std::size_t dim() const { return components_.size(); }
    const Polynomial& component(std::size_t i) const { return components_[i]; }
    const std::vector<Polynomial>& components() const { return components_; }

    bool is_zero() const {
        for (const auto& c : components_)
            if (!c.is_zero()) return false;
        return true;
    }

    /// Derivation action X(f) = sum_i X^i df/dx_i.
    Polynomial apply(const Polynomial& f) const {
        if (f.chart() != chart_) throw Error("vector field applied across charts");
        Polynomial r = Polynomial::zero(chart_);
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (components_[i].is_zero()) continue;
            r = r + components_[i] * f.derivative(i);
        }
        return r;
    }

    friend PolyVector operator+(const PolyVector& a, const PolyVector& b) {
        require_same(a, b);
        PolyVector r = a;
        for (std::size_t i = 0; i < r.components_.size(); ++i)
            r.components_[i] = r.components_[i] + b.components_[i];
        return r;
    }

    friend PolyVector operator-(const PolyVector& a, const PolyVector& b) {
        require_same(a, b);
        PolyVector r = a;
        for (std::size_t i = 0; i < r.components_.size(); ++i)
            r.components_[i] = r.components_[i] - b.components_[i];
        return r;
    }

    friend PolyVector operator-(const PolyVector& a) {
        PolyVector r = a;
        for (auto& c : r.components_) c = -c;
        return r;
    }

    friend PolyVector operator*(const Polynomial& f, const PolyVector& a) {
        PolyVector r = a;
        for (auto& c : r.components_) c = f * c;
        return r;
    }

    friend PolyVector operator*(const Rational& q, const PolyVector& a) {
        PolyVector r = a;
        for (auto& c : r.components_) c = q * c;
        return r;
    }

    friend bool operator==(const PolyVector& a, const PolyVector& b) {
        return a.chart_ == b.chart_ && a.components_ == b.components_;
    }
    friend bool operator!=(const PolyVector& a, const PolyVector& b) {
        return !(a == b);
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (components_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + components_[i].to_string() + ")*d/d" + chart_.name(i);
        }
        return out.empty() ? "0" : out;
    }

private:
    static void require_same(const PolyVector& a, const PolyVector& b) {
        if (a.chart_ != b.chart_) throw Error("vector field chart mismatch");
        if (a.components_.size() != b.components_.size())
            throw Error("vector field dimension mismatch");
    }

    Chart chart_;
    std::vector<Polynomial> components_;
};

/// Commutator [X,Y]^i = X(Y^i) - Y(X^i).
inline PolyVector vf_commutator(const PolyVector& x, const PolyVector& y) {
    std::vector<Polynomial> comps;
    comps.reserve(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
        comps.push_back(x.apply(y.component(i)) - y.apply(x.component(i)));
    return PolyVector(x.chart(), std::move(comps));
}

}  // namespace vbcalc
