#pragma once

// Arithmetic modulo the Mersenne prime 2^61 - 1. Used only to locate the rows
// an exact solve needs; verdicts are always confirmed over Q or Q(q).

#include "braidcheck/matrix.hpp"
#include "braidcheck/scalar.hpp"

#include <cstdint>
#include <stdexcept>

namespace braidcheck {

struct Fp {
    static constexpr std::uint64_t P = (std::uint64_t{1} << 61) - 1;
    std::uint64_t v = 0;

    Fp() = default;
    Fp(long long x) {  // NOLINT(google-explicit-constructor)
        long long r = x % static_cast<long long>(P);
        v = static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(P) : r);
    }
    static Fp raw(std::uint64_t x) {
        Fp f;
        f.v = x;
        return f;
    }

    friend Fp operator+(Fp a, Fp b) {
        std::uint64_t s = a.v + b.v;
        return raw(s >= P ? s - P : s);
    }
    friend Fp operator-(Fp a, Fp b) { return raw(a.v >= b.v ? a.v - b.v : a.v + P - b.v); }
    Fp operator-() const { return raw(v == 0 ? 0 : P - v); }
    friend Fp operator*(Fp a, Fp b) {
        unsigned __int128 m = static_cast<unsigned __int128>(a.v) * b.v;
        std::uint64_t lo = static_cast<std::uint64_t>(m & P), hi = static_cast<std::uint64_t>(m >> 61);
        std::uint64_t s = lo + hi;
        return raw(s >= P ? s - P : s);
    }
    friend bool operator==(Fp a, Fp b) { return a.v == b.v; }
    friend bool operator!=(Fp a, Fp b) { return a.v != b.v; }

    Fp pow(std::uint64_t e) const {
        Fp r(1), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    Fp inverse() const {
        if (v == 0) throw std::domain_error("inverse of zero mod p");
        return pow(P - 2);
    }
};

inline bool is_zero(Fp x) { return x.v == 0; }

template <>
struct FieldTraits<Fp> {
    static Fp inverse(const Fp& x) { return x.inverse(); }
};

inline Fp to_fp(const Rational& r) {
    static const mpz_class Pz = mpz_class(std::to_string(Fp::P));
    auto red = [](const mpz_class& z) {
        mpz_class m = z % Pz;
        if (m < 0) m += Pz;
        return Fp::raw(m.get_ui());
    };
    Fp d = red(r.get_den());
    if (is_zero(d)) throw std::domain_error("denominator vanishes mod p");
    return red(r.get_num()) * d.inverse();
}

inline Fp eval_fp(const Poly& p, Fp x) {
    Fp acc;
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + to_fp(*it);
    return acc;
}

/// Value of a Scalar at t = x mod p; throws at a pole.
inline Fp eval_fp(const Scalar& s, Fp x) {
    if (s.is_zero()) return Fp();
    Fp d = eval_fp(s.denominator(), x);
    if (is_zero(d) || (s.exponent() < 0 && is_zero(x))) throw std::domain_error("evaluation at a pole mod p");
    Fp v = eval_fp(s.numerator(), x) * d.inverse();
    int e = s.exponent();
    if (e > 0) v = v * x.pow(static_cast<std::uint64_t>(e));
    if (e < 0) v = v * x.inverse().pow(static_cast<std::uint64_t>(-e));
    return v;
}

}  // namespace braidcheck
