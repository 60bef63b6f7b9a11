#pragma once

#include <cmath>
#include <utility>

namespace distgeo {

// Forward-mode dual scalar carrying one directional derivative coefficient.
// Nesting (Jet<Jet<double>>) yields exact mixed second-order directional
// derivatives; all pipeline code is generic over the scalar kind so that
// derivatives propagate through linear solves and orthonormalization.
template <class T>
struct Jet {
    T v{};  // value
    T d{};  // derivative along the seeded direction

    Jet() = default;
    Jet(double c) : v(c), d() {}
    Jet(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}
};

using Jet1 = Jet<double>;
using Jet2 = Jet<Jet1>;
using Jet3 = Jet<Jet2>;

// Innermost (plain) value of a possibly nested jet.
inline double val(double x) { return x; }
template <class T>
double val(const Jet<T>& x) { return val(x.v); }

template <class T>
Jet<T> operator-(const Jet<T>& a) { return {-a.v, -a.d}; }

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Jet<T> operator+(const Jet<T>& a, double b) { return {a.v + b, a.d}; }
template <class T>
Jet<T> operator+(double a, const Jet<T>& b) { return {a + b.v, b.d}; }

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T>
Jet<T> operator-(const Jet<T>& a, double b) { return {a.v - b, a.d}; }
template <class T>
Jet<T> operator-(double a, const Jet<T>& b) { return {a - b.v, -b.d}; }

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
    return {a.v * b.v, a.v * b.d + a.d * b.v};
}
template <class T>
Jet<T> operator*(const Jet<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T>
Jet<T> operator*(double a, const Jet<T>& b) { return {a * b.v, a * b.d}; }

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}
template <class T>
Jet<T> operator/(const Jet<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T>
Jet<T> operator/(double a, const Jet<T>& b) {
    T q = a / b.v;
    return {q, -(q * b.d) / b.v};
}

template <class T>
Jet<T>& operator+=(Jet<T>& a, const Jet<T>& b) { a = a + b; return a; }
template <class T>
Jet<T>& operator-=(Jet<T>& a, const Jet<T>& b) { a = a - b; return a; }
template <class T>
Jet<T>& operator*=(Jet<T>& a, const Jet<T>& b) { a = a * b; return a; }
template <class T>
Jet<T>& operator/=(Jet<T>& a, const Jet<T>& b) { a = a / b; return a; }

template <class T>
Jet<T> sin(const Jet<T>& x) {
    using std::sin; using std::cos;
    return {sin(x.v), x.d * cos(x.v)};
}
template <class T>
Jet<T> cos(const Jet<T>& x) {
    using std::sin; using std::cos;
    return {cos(x.v), -(x.d * sin(x.v))};
}
template <class T>
Jet<T> tan(const Jet<T>& x) {
    using std::tan;
    T t = tan(x.v);
    return {t, x.d * (1.0 + t * t)};
}
template <class T>
Jet<T> exp(const Jet<T>& x) {
    using std::exp;
    T e = exp(x.v);
    return {e, x.d * e};
}
template <class T>
Jet<T> log(const Jet<T>& x) {
    using std::log;
    return {log(x.v), x.d / x.v};
}
template <class T>
Jet<T> sqrt(const Jet<T>& x) {
    using std::sqrt;
    T s = sqrt(x.v);
    return {s, x.d / (2.0 * s)};
}
template <class T>
Jet<T> sinh(const Jet<T>& x) {
    using std::sinh; using std::cosh;
    return {sinh(x.v), x.d * cosh(x.v)};
}
template <class T>
Jet<T> cosh(const Jet<T>& x) {
    using std::sinh; using std::cosh;
    return {cosh(x.v), x.d * sinh(x.v)};
}
template <class T>
Jet<T> tanh(const Jet<T>& x) {
    using std::tanh;
    T t = tanh(x.v);
    return {t, x.d * (1.0 - t * t)};
}

// Integer power by repeated multiplication; exact for any base, any scalar.
template <class S>
S ipow(const S& base, long long n) {
    if (n < 0) return S(1.0) / ipow(base, -n);
    S result(1.0);
    S acc = base;
    long long k = n;
    while (k > 0) {
        if (k & 1) result = result * acc;
        acc = acc * acc;
        k >>= 1;
    }
    return result;
}

}  // namespace distgeo
