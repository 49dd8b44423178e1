#pragma once

#include <cmath>

namespace rieszflow {

// Forward-mode dual number a + d·ε with ε² = 0. Nesting Dual<Dual<double>>
// carries two independent tangents and their mixed second derivative.
template <class T>
struct Dual {
    T v{};
    T d{};

    constexpr Dual() = default;
    constexpr Dual(T value) : v(value), d() {}  // NOLINT: implicit lift of constants
    constexpr Dual(T value, T tangent) : v(value), d(tangent) {}

    friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
    friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
    friend constexpr Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
    friend constexpr Dual operator*(const Dual& a, const Dual& b) {
        return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    friend constexpr Dual operator/(const Dual& a, const Dual& b) {
        T inv = T(1) / b.v;
        return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
    }

    Dual& operator+=(const Dual& o) { return *this = *this + o; }
    Dual& operator-=(const Dual& o) { return *this = *this - o; }
    Dual& operator*=(const Dual& o) { return *this = *this * o; }
};

template <class T>
Dual<T> tanh(const Dual<T>& a) {
    using std::tanh;
    T t = tanh(a.v);
    return {t, (T(1) - t * t) * a.d};
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
    using std::exp;
    T e = exp(a.v);
    return {e, e * a.d};
}

/// Strips all tangents, returning the innermost real value.
inline double value_of(double a) { return a; }
template <class T>
double value_of(const Dual<T>& a) {
    return value_of(a.v);
}

}  // namespace rieszflow
