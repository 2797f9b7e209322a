#pragma once

// Exact scalars: rationals and univariate rational functions over Q in a
// single formal parameter (q for Hecke data, h for the shifted Yangian).
//
// A nonzero value is stored as  t^e * num(t) / den(t)  with
//   num(0) != 0, den(0) != 0, den monic, gcd(num, den) = 1.
// Laurent polynomials (the overwhelmingly common case) have den == 1 and never
// touch a gcd. Equal values have identical representations.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace braidcheck {

using Rational = mpq_class;

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline std::string to_string(const Rational& r) {
    return r.get_str();  // "p/q" or "p"
}

/// Dense univariate polynomial over Q, coefficients low to high, no trailing zeros.
class Poly {
public:
    Poly() = default;
    explicit Poly(Rational c) {
        c.canonicalize();
        if (!braidcheck::is_zero(c)) c_.push_back(std::move(c));
    }
    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { canonicalize_all(); }
    Poly(std::initializer_list<Rational> coeffs) : c_(coeffs) { canonicalize_all(); }

    static Poly monomial(int degree, Rational c = 1) {
        std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
        v.back() = std::move(c);
        return Poly(std::move(v));
    }
    static Poly one() { return Poly(Rational(1)); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const { return c_.size() <= 1; }
    const Rational& lead() const { return c_.back(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : Rational(0);
    }

    /// Largest k with t^k dividing this polynomial (0 for the zero polynomial).
    int valuation() const {
        int v = 0;
        while (v < static_cast<int>(c_.size()) && braidcheck::is_zero(c_[static_cast<std::size_t>(v)])) ++v;
        return c_.empty() ? 0 : v;
    }
    Poly shifted_down(int k) const {
        if (k <= 0) return *this;
        Poly r;
        r.c_.assign(c_.begin() + k, c_.end());
        return r;
    }
    Poly shifted_up(int k) const {
        if (k <= 0 || c_.empty()) return *this;
        Poly r;
        r.c_.assign(static_cast<std::size_t>(k), Rational(0));
        r.c_.insert(r.c_.end(), c_.begin(), c_.end());
        return r;
    }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly monic() const {
        if (c_.empty()) return *this;
        Poly r = *this;
        Rational l = lead();
        for (auto& x : r.c_) x /= l;
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c_.empty() || b.c_.empty()) return {};
        if (a.c_.size() == 1 && a.c_[0] == 1) return b;
        if (b.c_.size() == 1 && b.c_[0] == 1) return a;
        Poly r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (braidcheck::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }
    friend Poly operator*(const Rational& s, const Poly& p) {
        if (braidcheck::is_zero(s)) return {};
        Poly r = p;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    /// Euclidean division; throws on division by zero.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        if (a.degree() < b.degree()) return {Poly{}, a};
        std::vector<Rational> rem = a.c_;
        std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - b.degree() + 1));
        const Rational& lb = b.lead();
        for (int k = a.degree() - b.degree(); k >= 0; --k) {
            Rational f = rem[static_cast<std::size_t>(k + b.degree())] / lb;
            quo[static_cast<std::size_t>(k)] = f;
            if (braidcheck::is_zero(f)) continue;
            for (int j = 0; j <= b.degree(); ++j)
                rem[static_cast<std::size_t>(k + j)] -= f * b.c_[static_cast<std::size_t>(j)];
        }
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }
    static Poly exact_div(const Poly& a, const Poly& b) {
        auto [qq, r] = divmod(a, b);
        if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
        return qq;
    }
    /// Monic gcd (zero only if both are zero).
    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly r = divmod(a, b).second;
            a = std::move(b);
            b = r.monic();
        }
        return a.monic();
    }

private:
    void canonicalize_all() {
        for (auto& x : c_) x.canonicalize();
        trim();
    }
    void trim() {
        while (!c_.empty() && braidcheck::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// Which formal parameter a nonconstant Scalar depends on.
enum class Param : std::uint8_t { none, q, h };

inline char param_symbol(Param p) { return p == Param::h ? 'h' : 'q'; }

class Scalar {
public:
    Scalar() = default;
    Scalar(int v) : Scalar(Rational(v)) {}  // NOLINT(google-explicit-constructor)
    Scalar(long v) : Scalar(Rational(v)) {}  // NOLINT(google-explicit-constructor)
    Scalar(Rational v) : num_(std::move(v)), den_(Poly::one()) {}  // NOLINT(google-explicit-constructor)

    /// The formal parameter itself.
    static Scalar param(Param p = Param::q) { return power(1, p); }
    static Scalar q() { return param(Param::q); }
    static Scalar h() { return param(Param::h); }
    /// t^k for the parameter t.
    static Scalar power(int k, Param p = Param::q) {
        Scalar s(1);
        s.e_ = k;
        s.par_ = (k == 0) ? Param::none : p;
        return s;
    }
    static Scalar from_parts(int e, Poly num, Poly den, Param p) {
        Scalar s;
        s.e_ = e;
        s.num_ = std::move(num);
        s.den_ = std::move(den);
        s.par_ = p;
        s.normalize();
        return s;
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return e_ == 0 && num_.is_constant() && den_.is_constant(); }
    bool is_one() const { return is_constant() && num_.is_one(); }
    bool is_laurent() const { return den_.is_one(); }
    Param param_kind() const { return par_; }
    int exponent() const { return e_; }
    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }

    /// The rational value of a constant Scalar; throws otherwise.
    Rational to_rational() const {
        if (!is_constant()) throw std::domain_error("scalar is not constant: " + to_string());
        return num_.coeff(0);
    }

    /// Conservative degree bound of the numerator of (this - c) after clearing
    /// denominators; used to size sample plans.
    int degree_bound() const {
        if (is_zero()) return 0;
        return std::max(num_.degree(), 0) + std::max(den_.degree(), 0) + std::abs(e_);
    }

    /// Exact evaluation at t = x; throws std::domain_error at a pole.
    Rational eval(const Rational& x) const {
        if (is_zero()) return 0;
        Rational d = den_.eval(x);
        if (braidcheck::is_zero(d) || (e_ < 0 && braidcheck::is_zero(x)))
            throw std::domain_error("evaluation at a pole");
        Rational v = num_.eval(x) / d;
        if (e_ != 0) {
            Rational p = 1;
            Rational base = e_ > 0 ? x : Rational(1) / x;
            for (int i = 0; i < std::abs(e_); ++i) p *= base;
            v *= p;
        }
        return v;
    }
    /// Substitute t = x where x is itself a Scalar (used for h -> 1 etc.).
    Scalar substitute(const Scalar& x) const;

    Scalar operator-() const {
        Scalar s = *this;
        s.num_ = -s.num_;
        return s;
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    friend Scalar operator+(const Scalar& a, const Scalar& b) { return add(a, b, false); }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return add(a, b, true); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_one()) return b;
        if (b.is_one()) return a;
        Scalar r;
        r.par_ = merge_param(a, b);
        r.e_ = a.e_ + b.e_;
        if (a.den_.is_one() && b.den_.is_one()) {
            r.num_ = a.num_ * b.num_;
            r.den_ = Poly::one();
            r.fix_param();
            return r;
        }
        Poly g1 = Poly::gcd(a.num_, b.den_);
        Poly g2 = Poly::gcd(b.num_, a.den_);
        r.num_ = Poly::exact_div(a.num_, g1) * Poly::exact_div(b.num_, g2);
        r.den_ = Poly::exact_div(a.den_, g2) * Poly::exact_div(b.den_, g1);
        r.make_den_monic();
        r.fix_param();
        return r;
    }
    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("division by zero scalar");
        Scalar r;
        r.par_ = par_;
        r.e_ = -e_;
        r.num_ = den_;
        r.den_ = num_;
        r.make_den_monic();
        return r;
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.e_ == b.e_ && a.num_ == b.num_ && a.den_ == b.den_ &&
               (a.par_ == b.par_ || a.is_constant());
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    /// Text in the braiding-file expression grammar.
    std::string to_string() const;

private:
    static Param merge_param(const Scalar& a, const Scalar& b) {
        Param pa = a.is_constant() ? Param::none : a.par_;
        Param pb = b.is_constant() ? Param::none : b.par_;
        if (pa != Param::none && pb != Param::none && pa != pb)
            throw std::domain_error("cannot combine scalars in different parameters q and h");
        return pa != Param::none ? pa : pb;
    }
    static Scalar add(const Scalar& a, const Scalar& b, bool negate_b) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return negate_b ? -b : b;
        Scalar r;
        r.par_ = merge_param(a, b);
        int e = std::min(a.e_, b.e_);
        Poly an = a.num_.shifted_up(a.e_ - e);
        Poly bn = b.num_.shifted_up(b.e_ - e);
        if (negate_b) bn = -bn;
        if (a.den_ == b.den_) {
            r.num_ = an + bn;
            r.den_ = a.den_;
        } else {
            r.num_ = an * b.den_ + bn * a.den_;
            r.den_ = a.den_ * b.den_;
        }
        r.e_ = e;
        r.normalize();
        return r;
    }
    void fix_param() {
        if (is_constant()) par_ = Param::none;
    }
    void make_den_monic() {
        if (num_.is_zero()) {
            *this = Scalar();
            return;
        }
        int v = num_.valuation();
        if (v > 0) {
            num_ = num_.shifted_down(v);
            e_ += v;
        }
        int w = den_.valuation();
        if (w > 0) {
            den_ = den_.shifted_down(w);
            e_ -= w;
        }
        Rational l = den_.lead();
        if (l != 1) {
            Rational inv = Rational(1) / l;
            num_ = inv * num_;
            den_ = inv * den_;
        }
        fix_param();
    }
    void normalize() {
        if (num_.is_zero()) {
            *this = Scalar();
            return;
        }
        if (!den_.is_constant()) {
            // strip t-powers first so the gcd works on smaller polynomials
            int v = num_.valuation();
            if (v > 0) {
                num_ = num_.shifted_down(v);
                e_ += v;
            }
            int w = den_.valuation();
            if (w > 0) {
                den_ = den_.shifted_down(w);
                e_ -= w;
            }
            Poly g = Poly::gcd(num_, den_);
            if (!g.is_one()) {
                num_ = Poly::exact_div(num_, g);
                den_ = Poly::exact_div(den_, g);
            }
        }
        make_den_monic();
    }

    int e_ = 0;
    Poly num_;
    Poly den_ = Poly::one();
    Param par_ = Param::none;
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }

inline Scalar pow(const Scalar& base, int k) {
    if (k < 0) return pow(base.inverse(), -k);
    Scalar r(1), b = base;
    while (k > 0) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

inline Scalar Scalar::substitute(const Scalar& x) const {
    if (is_constant()) return *this;
    auto horner = [&x](const Poly& p) {
        Scalar acc;
        const auto& c = p.coeffs();
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + Scalar(*it);
        return acc;
    };
    return pow(x, e_) * horner(num_) / horner(den_);
}

namespace detail {
inline std::string laurent_to_string(const Poly& p, int shift, char sym) {
    std::ostringstream os;
    bool first = true;
    const auto& c = p.coeffs();
    for (int k = p.degree(); k >= 0; --k) {
        const Rational& a = c[static_cast<std::size_t>(k)];
        if (braidcheck::is_zero(a)) continue;
        int ex = k + shift;
        Rational mag = abs(a);
        if (first) {
            if (sgn(a) < 0) os << "-";
        } else {
            os << (sgn(a) < 0 ? " - " : " + ");
        }
        first = false;
        if (ex == 0) {
            os << mag.get_str();
            continue;
        }
        if (mag != 1) os << mag.get_str() << "*";
        os << sym;
        if (ex != 1) os << "^" << ex;
    }
    return first ? "0" : os.str();
}
}  // namespace detail

inline std::string Scalar::to_string() const {
    if (is_zero()) return "0";
    char sym = param_symbol(par_);
    std::string n = detail::laurent_to_string(num_, e_, sym);
    if (den_.is_one()) return n;
    return "(" + n + ")/(" + detail::laurent_to_string(den_, 0, sym) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

/// q-number k_q = (q^k - q^-k)/(q - q^-1) = q^{k-1} + q^{k-3} + ... + q^{1-k}.
/// With `involutive` set this is the integer k (the q = 1 specialization).
inline Scalar qint(int k, bool involutive = false) {
    if (k < 1) throw std::invalid_argument("qint requires k >= 1");
    if (involutive) return Scalar(k);
    std::vector<Rational> c(static_cast<std::size_t>(2 * (k - 1) + 1));
    for (int j = 0; j < k; ++j) c[static_cast<std::size_t>(2 * j)] = 1;
    return Scalar::from_parts(1 - k, Poly(std::move(c)), Poly::one(), Param::q);
}

inline Scalar qfactorial(int k, bool involutive = false) {
    if (k < 1) throw std::invalid_argument("qfactorial requires k >= 1");
    Scalar r(1);
    for (int j = 1; j <= k; ++j) r *= qint(j, involutive);
    return r;
}

/// lambda = q - q^-1.
inline Scalar qlambda() { return Scalar::q() - Scalar::power(-1); }

/// Sample points for exact identity testing. A polynomial identity of degree at
/// most `degree_bound` that holds at every point holds identically.
struct SamplePlan {
    int degree_bound = 0;
    std::vector<Rational> points;
    std::uint64_t seed = 0;
};

/// Deterministic plan of `count` distinct nonzero rationals avoiding the roots of
/// every polynomial in `excluded`. Points are drawn as a/b with |a| <= range and
/// 1 <= b <= 4; throws std::runtime_error if the range is exhausted.
inline SamplePlan make_sample_plan(int degree_bound, int count, std::uint64_t seed,
                                   const std::vector<Poly>& excluded = {}, int range = 0) {
    if (degree_bound < 0 || count <= degree_bound)
        throw std::invalid_argument("sample plan needs count > degree_bound >= 0");
    if (range <= 0) range = std::max(8, 2 * count + 4);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-range, range);
    std::uniform_int_distribution<int> den(1, 4);
    SamplePlan plan{degree_bound, {}, seed};
    std::set<Rational> seen;
    auto admissible = [&](const Rational& x) {
        if (braidcheck::is_zero(x) || seen.count(x)) return false;
        return std::none_of(excluded.begin(), excluded.end(),
                            [&](const Poly& p) { return braidcheck::is_zero(p.eval(x)); });
    };
    // bounded random search, then an exhaustive sweep so failure really means exhaustion
    for (int tries = 0; tries < 64 * count && static_cast<int>(plan.points.size()) < count; ++tries) {
        Rational x(num(rng), den(rng));
        x.canonicalize();
        if (admissible(x)) {
            seen.insert(x);
            plan.points.push_back(x);
        }
    }
    for (int b = 1; b <= 4 && static_cast<int>(plan.points.size()) < count; ++b)
        for (int a = -range; a <= range && static_cast<int>(plan.points.size()) < count; ++a) {
            Rational x(a, b);
            x.canonicalize();
            if (admissible(x)) {
                seen.insert(x);
                plan.points.push_back(x);
            }
        }
    if (static_cast<int>(plan.points.size()) < count)
        throw std::runtime_error("sample plan: excluded denominators cannot be avoided within the range");
    return plan;
}

}  // namespace braidcheck
