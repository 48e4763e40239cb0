#pragma once

// Truncated Taylor series arithmetic. A Jet<T, N> holds the normalized
// coefficients c[k] = f^(k)(x0) / k! of a function around x0, k = 0..N.

#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

namespace cpatom {

template <class T, int N>
struct Jet {
    std::array<T, N + 1> c{};

    Jet() = default;
    Jet(T v) { c[0] = v; }

    static Jet variable(T x0) {
        Jet j(x0);
        if constexpr (N >= 1) j.c[1] = T(1);
        return j;
    }

    T value() const { return c[0]; }

    // k-th derivative at the expansion point.
    T derivative(int k) const {
        T f = c[k];
        for (int i = 2; i <= k; ++i) f *= T(double(i));
        return f;
    }

    Jet& operator+=(const Jet& o) {
        for (int k = 0; k <= N; ++k) c[k] += o.c[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int k = 0; k <= N; ++k) c[k] -= o.c[k];
        return *this;
    }
    Jet& operator*=(T s) {
        for (auto& v : c) v *= s;
        return *this;
    }
};

template <class T, int N>
Jet<T, N> operator+(Jet<T, N> a, const Jet<T, N>& b) { return a += b; }
template <class T, int N>
Jet<T, N> operator-(Jet<T, N> a, const Jet<T, N>& b) { return a -= b; }
template <class T, int N>
Jet<T, N> operator-(Jet<T, N> a) {
    for (auto& v : a.c) v = -v;
    return a;
}
template <class T, int N>
Jet<T, N> operator+(Jet<T, N> a, T s) { a.c[0] += s; return a; }
template <class T, int N>
Jet<T, N> operator+(T s, Jet<T, N> a) { a.c[0] += s; return a; }
template <class T, int N>
Jet<T, N> operator-(Jet<T, N> a, T s) { a.c[0] -= s; return a; }
template <class T, int N>
Jet<T, N> operator-(T s, const Jet<T, N>& a) { return -a + s; }
template <class T, int N>
Jet<T, N> operator*(Jet<T, N> a, T s) { return a *= s; }
template <class T, int N>
Jet<T, N> operator*(T s, Jet<T, N> a) { return a *= s; }

template <class T, int N>
Jet<T, N> operator*(const Jet<T, N>& a, const Jet<T, N>& b) {
    Jet<T, N> r;
    for (int k = 0; k <= N; ++k) {
        T s{};
        for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
        r.c[k] = s;
    }
    return r;
}

template <class T, int N>
Jet<T, N> operator/(const Jet<T, N>& a, const Jet<T, N>& b) {
    Jet<T, N> q;
    for (int k = 0; k <= N; ++k) {
        T s = a.c[k];
        for (int j = 1; j <= k; ++j) s -= b.c[j] * q.c[k - j];
        q.c[k] = s / b.c[0];
    }
    return q;
}
template <class T, int N>
Jet<T, N> operator/(const Jet<T, N>& a, T s) { return a * (T(1) / s); }
template <class T, int N>
Jet<T, N> operator/(T s, const Jet<T, N>& b) { return Jet<T, N>(s) / b; }

// Real scalars acting on complex jets.
template <class T, int N>
    requires(!std::is_same_v<T, double>)
Jet<T, N> operator*(Jet<T, N> a, double s) { return a *= T(s); }
template <class T, int N>
    requires(!std::is_same_v<T, double>)
Jet<T, N> operator*(double s, Jet<T, N> a) { return a *= T(s); }
template <class T, int N>
    requires(!std::is_same_v<T, double>)
Jet<T, N> operator+(Jet<T, N> a, double s) { a.c[0] += T(s); return a; }
template <class T, int N>
    requires(!std::is_same_v<T, double>)
Jet<T, N> operator-(Jet<T, N> a, double s) { a.c[0] -= T(s); return a; }
template <class T, int N>
    requires(!std::is_same_v<T, double>)
Jet<T, N> operator-(double s, const Jet<T, N>& a) { return -a + T(s); }
template <class T, int N>
    requires(!std::is_same_v<T, double>)
Jet<T, N> operator/(const Jet<T, N>& a, double s) { return a * T(1.0 / s); }

template <class T, int N>
Jet<T, N> exp(const Jet<T, N>& x) {
    Jet<T, N> e;
    using std::exp;
    e.c[0] = exp(x.c[0]);
    for (int k = 1; k <= N; ++k) {
        T s{};
        for (int j = 1; j <= k; ++j) s += T(double(j)) * x.c[j] * e.c[k - j];
        e.c[k] = s / T(double(k));
    }
    return e;
}

template <class T, int N>
void sincos(const Jet<T, N>& x, Jet<T, N>& sn, Jet<T, N>& cs) {
    using std::cos;
    using std::sin;
    sn.c[0] = sin(x.c[0]);
    cs.c[0] = cos(x.c[0]);
    for (int k = 1; k <= N; ++k) {
        T s{}, c{};
        for (int j = 1; j <= k; ++j) {
            s += T(double(j)) * x.c[j] * cs.c[k - j];
            c -= T(double(j)) * x.c[j] * sn.c[k - j];
        }
        sn.c[k] = s / T(double(k));
        cs.c[k] = c / T(double(k));
    }
}

template <class T, int N>
Jet<T, N> sin(const Jet<T, N>& x) {
    Jet<T, N> s, c;
    sincos(x, s, c);
    return s;
}

template <class T, int N>
Jet<T, N> cos(const Jet<T, N>& x) {
    Jet<T, N> s, c;
    sincos(x, s, c);
    return c;
}

template <class T, int N>
Jet<T, N> sqrt(const Jet<T, N>& x) {
    Jet<T, N> r;
    using std::sqrt;
    r.c[0] = sqrt(x.c[0]);
    for (int k = 1; k <= N; ++k) {
        T s = x.c[k];
        for (int j = 1; j < k; ++j) s -= r.c[j] * r.c[k - j];
        r.c[k] = s / (T(2) * r.c[0]);
    }
    return r;
}

// Horner evaluation of a polynomial with scalar coefficients at a jet.
template <class T, int N, class Coeffs>
Jet<T, N> polyval(const Coeffs& a, const Jet<T, N>& x) {
    Jet<T, N> r;
    for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + T(*it);
    return r;
}

}  // namespace cpatom
