#pragma once

#include <memory>
#include <vector>

#include "distgeo/errors.hpp"
#include "distgeo/expr.hpp"
#include "distgeo/jet.hpp"
#include "distgeo/linalg.hpp"

namespace distgeo {

// m expressions over the chart; a vector field in coordinates.
struct VectorFieldModel {
    std::vector<Expr> components;

    static VectorFieldModel parse(const std::vector<std::string>& comps,
                                  const std::vector<std::string>& chart);
};

// A vector field evaluable at every jet depth the pipelines need. Composite
// fields that take derivatives internally (covariant derivatives of derived
// fields) stop one level short, which is enforced at compile time through
// DerivedField below.
class VectorField {
public:
    virtual ~VectorField() = default;
    virtual int dim() const = 0;
    virtual Vec<double> operator()(const Vec<double>& p) const = 0;
    virtual Vec<Jet1> operator()(const Vec<Jet1>& p) const = 0;
    virtual Vec<Jet2> operator()(const Vec<Jet2>& p) const = 0;
    virtual Vec<Jet3> operator()(const Vec<Jet3>& p) const {
        (void)p;
        throw Error("vector field does not support jet depth 3");
    }
};

// Field defined by closed-form components; safe at every jet depth.
class ModelField final : public VectorField {
public:
    explicit ModelField(VectorFieldModel model) : model_(std::move(model)) {}

    int dim() const override { return static_cast<int>(model_.components.size()); }
    Vec<double> operator()(const Vec<double>& p) const override { return evalT(p); }
    Vec<Jet1> operator()(const Vec<Jet1>& p) const override { return evalT(p); }
    Vec<Jet2> operator()(const Vec<Jet2>& p) const override { return evalT(p); }
    Vec<Jet3> operator()(const Vec<Jet3>& p) const override { return evalT(p); }

    const VectorFieldModel& model() const { return model_; }

private:
    template <class S>
    Vec<S> evalT(const Vec<S>& p) const {
        Vec<S> out(model_.components.size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = model_.components[k].eval(p);
        return out;
    }

    VectorFieldModel model_;
};

// Position-independent components.
class ConstantField final : public VectorField {
public:
    explicit ConstantField(Vec<double> v) : v_(std::move(v)) {}

    int dim() const override { return static_cast<int>(v_.size()); }
    Vec<double> operator()(const Vec<double>&) const override { return v_; }
    Vec<Jet1> operator()(const Vec<Jet1>& p) const override { return lift<Jet1>(p); }
    Vec<Jet2> operator()(const Vec<Jet2>& p) const override { return lift<Jet2>(p); }
    Vec<Jet3> operator()(const Vec<Jet3>& p) const override { return lift<Jet3>(p); }

private:
    template <class S>
    Vec<S> lift(const Vec<S>&) const {
        Vec<S> out(v_.size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = S(v_[k]);
        return out;
    }

    Vec<double> v_;
};

// Constant-coefficient combination of other fields; evaluates at the same
// depth as its terms, so it is as deep as the shallowest term allows.
class LinCombField final : public VectorField {
public:
    LinCombField(int m, std::vector<std::pair<double, const VectorField*>> terms)
        : m_(m), terms_(std::move(terms)) {}

    int dim() const override { return m_; }
    Vec<double> operator()(const Vec<double>& p) const override { return evalT(p); }
    Vec<Jet1> operator()(const Vec<Jet1>& p) const override { return evalT(p); }
    Vec<Jet2> operator()(const Vec<Jet2>& p) const override { return evalT(p); }
    Vec<Jet3> operator()(const Vec<Jet3>& p) const override { return evalT(p); }

private:
    template <class S>
    Vec<S> evalT(const Vec<S>& p) const {
        Vec<S> out(static_cast<std::size_t>(m_), S(0.0));
        for (const auto& [c, f] : terms_) {
            Vec<S> v = (*f)(p);
            for (int k = 0; k < m_; ++k) out[static_cast<std::size_t>(k)] += c * v[static_cast<std::size_t>(k)];
        }
        return out;
    }

    int m_;
    std::vector<std::pair<double, const VectorField*>> terms_;
};

// Adapter for generic lambdas that are valid at every jet depth
// (no internal differentiation of other fields).
template <class F>
class AnalyticField final : public VectorField {
public:
    AnalyticField(int m, F f) : m_(m), f_(std::move(f)) {}

    int dim() const override { return m_; }
    Vec<double> operator()(const Vec<double>& p) const override { return f_(p); }
    Vec<Jet1> operator()(const Vec<Jet1>& p) const override { return f_(p); }
    Vec<Jet2> operator()(const Vec<Jet2>& p) const override { return f_(p); }
    Vec<Jet3> operator()(const Vec<Jet3>& p) const override { return f_(p); }

private:
    int m_;
    F f_;
};

template <class F>
AnalyticField<F> analytic_field(int m, F f) { return AnalyticField<F>(m, std::move(f)); }

// Adapter for pipelines that differentiate other fields internally. Such a
// pipeline evaluated at depth k calls fields at depth k+1, so it must not be
// instantiated at the interface ceiling.
template <class F>
class DerivedField final : public VectorField {
public:
    DerivedField(int m, F f) : m_(m), f_(std::move(f)) {}

    int dim() const override { return m_; }
    Vec<double> operator()(const Vec<double>& p) const override { return f_(p); }
    Vec<Jet1> operator()(const Vec<Jet1>& p) const override { return f_(p); }
    Vec<Jet2> operator()(const Vec<Jet2>& p) const override { return f_(p); }

private:
    int m_;
    F f_;
};

template <class F>
DerivedField<F> derived_field(int m, F f) { return DerivedField<F>(m, std::move(f)); }

// Directional derivative of a field: value and exact derivative of
// F(p + t u) at t = 0, both at scalar depth S.
template <class S>
struct FieldDirDeriv {
    Vec<S> value;
    Vec<S> deriv;
};

template <class S>
FieldDirDeriv<S> dir_deriv(const VectorField& f, const Vec<S>& p, const Vec<S>& u) {
    const std::size_t m = p.size();
    Vec<Jet<S>> q(m);
    for (std::size_t i = 0; i < m; ++i) q[i] = Jet<S>(p[i], u[i]);
    Vec<Jet<S>> r = f(q);
    FieldDirDeriv<S> out;
    out.value.resize(r.size());
    out.deriv.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        out.value[i] = r[i].v;
        out.deriv[i] = r[i].d;
    }
    return out;
}

// Directional derivative of a scalar position function. Fn maps a point
// vector (of jets) to one scalar of the same kind.
template <class S, class Fn>
std::pair<S, S> dir_scalar(Fn&& fn, const Vec<S>& p, const Vec<S>& u) {
    const std::size_t m = p.size();
    Vec<Jet<S>> q(m);
    for (std::size_t i = 0; i < m; ++i) q[i] = Jet<S>(p[i], u[i]);
    Jet<S> r = fn(q);
    return {r.v, r.d};
}

}  // namespace distgeo
