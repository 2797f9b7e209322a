#pragma once

// Braidings R on V (x) V and operators on tensor powers of V.
//
// Index convention (used bit-exactly by the file format): the basis vector
// e_{i1} (x) ... (x) e_{in} of V^{(x)n} has index sum_k i_k N^{n-k}, i.e. the
// leftmost tensor factor is the most significant digit. R_k is R acting in
// factors k and k+1 (1-based).

#include "braidcheck/expr.hpp"
#include "braidcheck/matrix.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace braidcheck {

using Op = Matrix<Scalar>;

enum class BraidingKind { hecke, involutive };

inline const char* to_string(BraidingKind k) { return k == BraidingKind::hecke ? "hecke" : "involutive"; }

class BraidingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Number of tensor factors of an operator on V^{(x)n}.
template <class T>
std::size_t spaces_of(const Matrix<T>& op, std::size_t N) {
    std::size_t n = 0, d = 1;
    while (d < op.rows()) {
        d *= N;
        ++n;
    }
    if (d != op.rows() || op.rows() != op.cols()) throw std::invalid_argument("operator is not on a tensor power of V");
    return n;
}

/// Place `op` (acting on j consecutive factors) at factors pos..pos+j-1 of V^{(x)n}.
template <class T>
Matrix<T> embed(const Matrix<T>& op, std::size_t N, std::size_t pos, std::size_t n) {
    const std::size_t j = spaces_of(op, N);
    if (pos < 1 || pos + j - 1 > n) throw std::out_of_range("embedding position out of range");
    const std::size_t hi = ipow(N, pos - 1), mid = ipow(N, j), lo = ipow(N, n - pos - j + 1);
    Matrix<T> out(hi * mid * lo, hi * mid * lo);
    for (std::size_t h = 0; h < hi; ++h)
        for (std::size_t r = 0; r < mid; ++r)
            for (const auto& [c, v] : op.row(r))
                for (std::size_t l = 0; l < lo; ++l) out.set((h * mid + r) * lo + l, (h * mid + c) * lo + l, v);
    return out;
}

/// Decompose a mixed-radix index into its n digits (leftmost first).
inline std::vector<std::size_t> digits(std::size_t index, std::size_t N, std::size_t n) {
    std::vector<std::size_t> d(n);
    for (std::size_t k = n; k-- > 0;) {
        d[k] = index % N;
        index /= N;
    }
    return d;
}

inline std::string multi_index(std::size_t index, std::size_t N, std::size_t n) {
    std::ostringstream os;
    os << "(";
    auto d = digits(index, N, n);
    for (std::size_t k = 0; k < n; ++k) os << (k ? "," : "") << d[k] + 1;
    os << ")";
    return os.str();
}

/// Flip P on V (x) V.
inline Op flip_matrix(std::size_t N) {
    Op p(N * N, N * N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) p.set(j * N + i, i * N + j, Scalar(1));
    return p;
}

inline Op braid_residual(const Op& R, std::size_t N) {
    Op r1 = embed(R, N, 1, 3), r2 = embed(R, N, 2, 3);
    return r1 * r2 * r1 - r2 * r1 * r2;
}

/// (R - qI)(R + q^-1 I).
inline Op hecke_residual(const Op& R) {
    const std::size_t d = R.rows();
    Op I = Op::identity(d);
    return (R - scale(Scalar::q(), I)) * (R + scale(Scalar::power(-1), I));
}

inline Op involutive_residual(const Op& R) { return R * R - Op::identity(R.rows()); }

/// Involutivity is tested first; a matrix passing both is reported involutive.
inline BraidingKind classify(const Op& R) {
    if (involutive_residual(R).is_zero_matrix()) return BraidingKind::involutive;
    if (hecke_residual(R).is_zero_matrix()) return BraidingKind::hecke;
    throw BraidingError("matrix satisfies neither R^2 = I nor (R - qI)(R + q^-1 I) = 0");
}

class Braiding;
inline std::vector<Op> skew_symmetrizers(const Braiding& B, std::size_t kmax);
inline int birank(const Braiding& B);
inline Op c_matrix(const Braiding& B);

class Braiding {
public:
    /// Verifies the braid relation and the declared (or detected) kind.
    Braiding(std::string name, std::size_t N, Op matrix, std::optional<BraidingKind> declared = std::nullopt)
        : name_(std::move(name)), N_(N), R_(std::move(matrix)), cache_(std::make_shared<Cache>()) {
        if (N_ < 1 || R_.rows() != N_ * N_ || R_.cols() != N_ * N_)
            throw BraidingError("braiding matrix must be N^2 x N^2");
        Op res = braid_residual(R_, N_);
        if (auto nz = res.first_nonzero()) {
            throw BraidingError("braid relation R1 R2 R1 = R2 R1 R2 violated at row " + multi_index(nz->first, N_, 3) +
                                ", column " + multi_index(nz->second, N_, 3));
        }
        if (declared) {
            Op r = *declared == BraidingKind::hecke ? hecke_residual(R_) : involutive_residual(R_);
            if (!r.is_zero_matrix())
                throw BraidingError(std::string("matrix is not ") + to_string(*declared));
            kind_ = *declared;
        } else {
            kind_ = classify(R_);
        }
        auto inv = braidcheck::inverse(R_);
        if (!inv) throw BraidingError("braiding is singular");
        Rinv_ = std::move(*inv);
    }

    const std::string& name() const { return name_; }
    std::size_t dim() const { return N_; }
    const Op& matrix() const { return R_; }
    const Op& inverse_matrix() const { return Rinv_; }
    BraidingKind kind() const { return kind_; }
    bool is_hecke() const { return kind_ == BraidingKind::hecke; }

    /// R_k on V^{(x)n}; negative `power` gives R_k^{-1}.
    Op at(std::size_t k, std::size_t n, int power = 1) const { return embed(power < 0 ? Rinv_ : R_, N_, k, n); }

    // Write-once caches, safe to fill from several threads.
    /// A^(k) on V^{(x)k}, 1 <= k.
    Op symmetrizer(std::size_t k) const {
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (cache_->sym.size() < k) cache_->sym = skew_symmetrizers(*this, k);
        return cache_->sym[k - 1];
    }
    int bi_rank() const {
        {
            std::lock_guard<std::mutex> lock(cache_->mu);
            if (cache_->m) return *cache_->m;
        }
        int m = birank(*this);
        std::lock_guard<std::mutex> lock(cache_->mu);
        cache_->m = m;
        return m;
    }
    const Op& c() const {
        {
            std::lock_guard<std::mutex> lock(cache_->mu);
            if (cache_->c) return *cache_->c;
        }
        Op c = c_matrix(*this);
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (!cache_->c) cache_->c = std::move(c);
        return *cache_->c;
    }

private:
    struct Cache {
        std::mutex mu;
        std::vector<Op> sym;
        std::optional<int> m;
        std::optional<Op> c;
    };
    std::string name_;
    std::size_t N_;
    Op R_, Rinv_;
    BraidingKind kind_ = BraidingKind::involutive;
    std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Built-in catalog

/// Standard Drinfeld-Jimbo Hecke symmetry of U_q(sl(N)):
///   R(e_i (x) e_i) = q e_i (x) e_i,
///   R(e_i (x) e_j) = e_j (x) e_i + lambda e_i (x) e_j   (i < j),
///   R(e_i (x) e_j) = e_j (x) e_i                         (i > j).
inline Op dj_hecke_matrix(std::size_t N) {
    Op R(N * N, N * N);
    const Scalar lam = qlambda();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const std::size_t col = i * N + j;
            if (i == j) {
                R.set(col, col, Scalar::q());
                continue;
            }
            R.set(j * N + i, col, Scalar(1));
            if (i < j) R.set(col, col, lam);
        }
    return R;
}

/// (W (x) I) P (W (x) I)^{-1} = (W (x) W^{-1}) P.
inline Op conjugated_flip_matrix(const Matrix<Scalar>& W) {
    const std::size_t N = W.rows();
    auto Winv = braidcheck::inverse(W);
    if (!Winv) throw BraidingError("conjugating matrix W is singular");
    Op Q = kron(W, Op::identity(N)), Qinv = kron(*Winv, Op::identity(N));
    return Q * flip_matrix(N) * Qinv;
}

/// The default nonidentity conjugator used by the catalog: upper unitriangular
/// with ones above the diagonal.
inline Matrix<Scalar> default_conjugator(std::size_t N) {
    Matrix<Scalar> W(N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i; j < N; ++j) W.set(i, j, Scalar(1));
    return W;
}

inline Braiding builtin_braiding(const std::string& name, std::size_t N,
                                 const std::optional<Matrix<Scalar>>& W = std::nullopt) {
    if (N < 2) throw std::invalid_argument("builtin braidings need N >= 2");
    if (name == "flip" || name == "P") return Braiding("flip", N, flip_matrix(N), BraidingKind::involutive);
    if (name == "dj_hecke") return Braiding("dj_hecke", N, dj_hecke_matrix(N), BraidingKind::hecke);
    if (name == "conjugated_flip") {
        Matrix<Scalar> w = W ? *W : default_conjugator(N);
        if (w.rows() != N || w.cols() != N) throw std::invalid_argument("W must be N x N");
        return Braiding("conjugated_flip", N, conjugated_flip_matrix(w), BraidingKind::involutive);
    }
    throw std::invalid_argument("unknown builtin braiding '" + name + "'");
}

// ---------------------------------------------------------------------------
// Baxterization

/// Current R-matrix R(x): R - lambda x/(x-1) I (Hecke) or R - I/x (involutive).
/// `h` rescales the rational pole term (R - h/x I) for the shifted Yangian.
inline Op baxterize(const Braiding& B, const Scalar& x, const Scalar& h = Scalar(1)) {
    const Op I = Op::identity(B.matrix().rows());
    if (B.is_hecke()) {
        if ((x - Scalar(1)).is_zero()) throw std::domain_error("trigonometric R(x) has a pole at x = 1");
        return B.matrix() - scale(qlambda() * x / (x - Scalar(1)), I);
    }
    if (x.is_zero()) throw std::domain_error("rational R(x) has a pole at x = 0");
    return B.matrix() - scale(h / x, I);
}

/// Two-parameter form R(u, v): x = u/v (Hecke) or x = u - v (involutive).
inline Op current_rmatrix(const Braiding& B, const Scalar& u, const Scalar& v) {
    return B.is_hecke() ? baxterize(B, u / v) : baxterize(B, u - v);
}

/// R(x)^{-1} from the closed inversion formulas:
///   rational:  x^2/(x^2-1) R(-x)
///   trig:      (x-1)^2/((x-1)^2 - lambda^2 x) R(1/x)
inline Op baxterize_inverse(const Braiding& B, const Scalar& x) {
    if (B.is_hecke()) {
        Scalar lam = qlambda();
        Scalar xm1 = x - Scalar(1);
        Scalar den = xm1 * xm1 - lam * lam * x;
        if (den.is_zero() || xm1.is_zero()) throw std::domain_error("R(x) is singular at x = q^{+-2} or x = 1");
        return scale(xm1 * xm1 / den, baxterize(B, x.inverse()));
    }
    Scalar den = x * x - Scalar(1);
    if (den.is_zero() || x.is_zero()) throw std::domain_error("R(x) is singular at x = +-1");
    return scale(x * x / den, baxterize(B, -x));
}

// ---------------------------------------------------------------------------
// Skew-symmetrizers, bi-rank, C-matrix

/// A^(1..kmax); A^(k) acts on V^{(x)k}. Recursion
///   A^(k+1) = k_q/(k+1)_q A^(k) (q^k/k_q I - R_k) A^(k),
/// with q = 1 and k_q -> k for involutive braidings.
inline std::vector<Op> skew_symmetrizers(const Braiding& B, std::size_t kmax) {
    const std::size_t N = B.dim();
    const bool inv = !B.is_hecke();
    std::vector<Op> A;
    if (kmax == 0) return A;
    A.push_back(Op::identity(N));
    for (std::size_t k = 1; k < kmax; ++k) {
        const int ki = static_cast<int>(k);
        Scalar kq = qint(ki, inv), k1q = qint(ki + 1, inv);
        if (kq.is_zero() || k1q.is_zero()) throw std::domain_error("vanishing q-integer in skew-symmetrizer recursion");
        Scalar qk = inv ? Scalar(1) : Scalar::power(ki);
        Op Ak = embed(A.back(), N, 1, k + 1);
        Op middle = scale(qk / kq, Op::identity(Ak.rows())) - B.at(k, k + 1);
        A.push_back(scale(kq / k1q, Ak * middle * Ak));
    }
    return A;
}

/// Smallest m with A^(m) != 0 = A^(m+1); requires rank A^(m) = 1. Searched up to k = N + 2.
inline int birank(const Braiding& B) {
    const std::size_t cutoff = B.dim() + 2;
    auto A = skew_symmetrizers(B, cutoff);
    for (std::size_t k = 1; k < A.size(); ++k) {
        if (A[k].is_zero_matrix()) {
            std::size_t r = rank(A[k - 1]);
            if (r != 1)
                throw BraidingError("symmetry is not of bi-rank (m|0): rank A^(" + std::to_string(k) +
                                    ") = " + std::to_string(r));
            return static_cast<int>(k);
        }
    }
    throw BraidingError("no vanishing skew-symmetrizer up to k = " + std::to_string(cutoff));
}

/// Solve Tr_(2) R_12 C_2 = I_1 for C and verify R C1 C2 = C1 C2 R and Tr C = m_q/q^m.
inline Op c_matrix(const Braiding& B) {
    const std::size_t N = B.dim();
    const Op& R = B.matrix();
    // unknown C[k][l] -> column k*N + l; equation (i1, j1) -> row i1*N + j1
    Matrix<Scalar> sys(N * N, N * N);
    std::vector<Scalar> rhs(N * N);
    for (std::size_t i1 = 0; i1 < N; ++i1)
        for (std::size_t j1 = 0; j1 < N; ++j1) {
            rhs[i1 * N + j1] = i1 == j1 ? Scalar(1) : Scalar(0);
            for (std::size_t i2 = 0; i2 < N; ++i2)
                for (std::size_t k = 0; k < N; ++k)
                    if (const Scalar* r = R.find(i1 * N + i2, j1 * N + k)) sys.add_to(i1 * N + j1, k * N + i2, *r);
        }
    auto sol = solve(sys, rhs);
    if (!sol) throw BraidingError("Tr_(2) R_12 C_2 = I_1 has no solution (R is not skew-invertible)");
    if (rank(sys) != N * N) throw BraidingError("C-matrix is not unique (R is not skew-invertible)");
    Op C(N, N);
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) C.set(k, l, (*sol)[k * N + l]);
    Op CC = kron(C, C);
    if (!(R * CC == CC * R)) throw BraidingError("C-matrix does not satisfy R C1 C2 = C1 C2 R");
    const int m = B.bi_rank();
    Scalar expected = B.is_hecke() ? qint(m) * Scalar::power(-m) : Scalar(m);
    if (trace(C) != expected)
        throw BraidingError("Tr C = " + trace(C).to_string() + " but m_q/q^m = " + expected.to_string());
    return C;
}

// ---------------------------------------------------------------------------
// R-trace

/// Tr_{R(first..n)} X = Tr_(first..n)(C_first ... C_n X) for X on V^{(x)n}; the
/// result acts on V^{(x)(first-1)} (1x1 for a full trace). Only trailing blocks
/// of factors are supported.
template <class S, class T>
auto r_trace(const Matrix<T>& X, const Matrix<S>& C, std::size_t N, std::size_t first) {
    using P = product_t<S, T>;
    const std::size_t n = spaces_of(X, N);
    if (first < 1 || first > n) throw std::invalid_argument("R-trace over an empty or invalid block of spaces");
    const std::size_t t = n - first + 1;
    Matrix<S> Ct = C;
    for (std::size_t k = 1; k < t; ++k) Ct = kron(Ct, C);
    const std::size_t blk = ipow(N, t), outer = ipow(N, first - 1);
    Matrix<P> out(outer, outer);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const std::size_t I = r / blk, Kp = r % blk;
        for (const auto& [c, x] : X.row(r)) {
            const std::size_t J = c / blk, K = c % blk;
            if (const S* cv = Ct.find(K, Kp)) out.add_to(I, J, *cv * x);
        }
    }
    return out;
}

/// Space-set form of the R-trace: `spaces` must be the trailing block {s, ..., n}.
template <class S, class T>
auto r_trace(const Matrix<T>& X, const Matrix<S>& C, std::size_t N, const std::vector<std::size_t>& spaces) {
    const std::size_t n = spaces_of(X, N);
    if (spaces.empty()) throw std::invalid_argument("R-trace over an empty set of spaces");
    for (std::size_t k = 0; k < spaces.size(); ++k)
        if (spaces[k] != n - spaces.size() + 1 + k)
            throw std::invalid_argument("R-trace is only defined over a trailing block of tensor factors");
    return r_trace(X, C, N, spaces.front());
}

/// Full R-trace returned as a coefficient-ring element.
template <class S, class T>
auto r_trace_full(const Matrix<T>& X, const Matrix<S>& C, std::size_t N) {
    return r_trace(X, C, N, std::size_t{1}).get(0, 0);
}

// ---------------------------------------------------------------------------
// Chains of current R-matrices

/// [R_{i->j}(u)]^(sign): R_i(u) R_{i+-1}(q^{2 sign} u) ... R_j(q^{2 sign |j-i|} u).
/// With `inverse` set the factors are R^{-1}(.) instead.
struct ChainSpec {
    int start = 1;
    int end = 1;
    int sign = +1;
    bool inverse = false;
};

inline Op chain(const Braiding& B, const ChainSpec& s, const Scalar& u, std::size_t n) {
    if (!B.is_hecke()) throw std::invalid_argument("chains are defined for Hecke symmetries only");
    if (s.start < 1 || s.end < 1 || static_cast<std::size_t>(std::max(s.start, s.end)) > n - 1)
        throw std::out_of_range("chain positions out of range");
    const int step = s.end >= s.start ? 1 : -1;
    const int len = std::abs(s.end - s.start);
    Op out = Op::identity(ipow(B.dim(), n));
    for (int t = 0; t <= len; ++t) {
        Scalar x = u * Scalar::power(2 * s.sign * t);
        Op f = s.inverse ? baxterize_inverse(B, x) : baxterize(B, x);
        out = out * embed(f, B.dim(), static_cast<std::size_t>(s.start + step * t), n);
    }
    return out;
}

/// Inverse of a chain from {[R_{i->j}(u)]^(+-)}^{-1} = [R^{-1}_{j->i}(q^{+-2|i-j|} u)]^(-+).
inline Op inverse_chain(const Braiding& B, const ChainSpec& s, const Scalar& u, std::size_t n) {
    ChainSpec inv{s.end, s.start, -s.sign, !s.inverse};
    return chain(B, inv, u * Scalar::power(2 * s.sign * std::abs(s.start - s.end)), n);
}

// ---------------------------------------------------------------------------

/// R1 F2 F1 = F2 F1 R2 and R2 F1 F2 = F1 F2 R1 on V^{(x)3}.
inline bool check_compatibility(const Braiding& R, const Braiding& F) {
    if (R.dim() != F.dim()) throw std::invalid_argument("compatibility check needs equal dimensions");
    Op R1 = R.at(1, 3), R2 = R.at(2, 3), F1 = F.at(1, 3), F2 = F.at(2, 3);
    return R1 * F2 * F1 == F2 * F1 * R2 && R2 * F1 * F2 == F1 * F2 * R1;
}

}  // namespace braidcheck
