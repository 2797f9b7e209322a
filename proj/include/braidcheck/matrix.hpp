#pragma once

// Sparse exact matrices over an arbitrary (possibly noncommutative) coefficient
// ring, plus Gaussian elimination over exact fields.
//
// Coefficient requirements: default construction yields zero, `is_zero(x)` is
// found by ADL, and + - * == are defined. Products of matrices with different
// coefficient types use the coefficient product type, so Scalar x NCPolynomial
// and Rational x (physical operator) mix freely.

#include "braidcheck/scalar.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace braidcheck {

// gmpxx products are lazy expression templates; store their evaluated type.
template <class T>
struct value_of {
    using type = T;
};
template <class U>
struct value_of<__gmp_expr<mpq_t, U>> {
    using type = mpq_class;
};
template <class T>
using value_t = typename value_of<std::decay_t<T>>::type;

template <class T>
class Matrix {
public:
    using value_type = T;
    using Row = std::map<std::size_t, T>;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

    static Matrix identity(std::size_t n, const T& one = T(1)) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace(i, one);
        return m;
    }
    static Matrix diagonal(const std::vector<T>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    /// A 0x0 matrix acts as the zero of every size.
    bool is_empty_shape() const { return rows_ == 0 && cols_ == 0; }

    const Row& row(std::size_t r) const { return data_[r]; }
    const T* find(std::size_t r, std::size_t c) const {
        auto it = data_[r].find(c);
        return it == data_[r].end() ? nullptr : &it->second;
    }
    T get(std::size_t r, std::size_t c) const {
        const T* p = find(r, c);
        return p ? *p : T{};
    }
    void set(std::size_t r, std::size_t c, T v) {
        check_index(r, c);
        if (is_zero(v))
            data_[r].erase(c);
        else
            data_[r][c] = std::move(v);
    }
    void add_to(std::size_t r, std::size_t c, const T& v) {
        check_index(r, c);
        if (is_zero(v)) return;
        auto [it, fresh] = data_[r].try_emplace(c, v);
        if (!fresh) {
            it->second = it->second + v;
            if (is_zero(it->second)) data_[r].erase(it);
        }
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }
    bool is_zero_matrix() const {
        for (const auto& r : data_)
            if (!r.empty()) return false;
        return true;
    }
    /// First nonzero entry (row, col) or nullopt.
    std::optional<std::pair<std::size_t, std::size_t>> first_nonzero() const {
        for (std::size_t r = 0; r < rows_; ++r)
            if (!data_[r].empty()) return std::make_pair(r, data_[r].begin()->first);
        return std::nullopt;
    }

    template <class F>
    auto map(F&& f) const {
        using U = value_t<decltype(f(std::declval<const T&>()))>;
        Matrix<U> out(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (const auto& [c, v] : data_[r]) out.set(r, c, f(v));
        return out;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (const auto& [c, v] : data_[r]) t.data_[c].emplace(r, v);
        return t;
    }

    Matrix operator-() const {
        Matrix m = *this;
        for (auto& r : m.data_)
            for (auto& [c, v] : r) v = -v;
        return m;
    }
    Matrix& operator+=(const Matrix& o) {
        if (o.is_empty_shape()) return *this;
        if (is_empty_shape()) return *this = o;
        check_shape(o);
        for (std::size_t r = 0; r < rows_; ++r)
            for (const auto& [c, v] : o.data_[r]) add_to(r, c, v);
        return *this;
    }
    Matrix& operator-=(const Matrix& o) { return *this += -o; }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (a.is_empty_shape() || b.is_empty_shape()) return a.is_zero_matrix() && b.is_zero_matrix();
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Row& mutable_row(std::size_t r) { return data_[r]; }

private:
    void check_index(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
    }
    void check_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Row> data_;
};

template <class T>
bool is_zero(const Matrix<T>& m) {
    return m.is_zero_matrix();
}

template <class A, class B>
using product_t = value_t<decltype(std::declval<const A&>() * std::declval<const B&>())>;

template <class A, class B>
Matrix<product_t<A, B>> operator*(const Matrix<A>& a, const Matrix<B>& b) {
    using P = product_t<A, B>;
    if (a.is_empty_shape() || b.is_empty_shape()) return Matrix<P>{};
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    Matrix<P> out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto& dst = out.mutable_row(r);
        for (const auto& [k, av] : a.row(r)) {
            for (const auto& [c, bv] : b.row(k)) {
                P term = av * bv;
                if (is_zero(term)) continue;
                auto [it, fresh] = dst.try_emplace(c, std::move(term));
                if (!fresh) it->second = it->second + term;
            }
        }
        for (auto it = dst.begin(); it != dst.end();) it = is_zero(it->second) ? dst.erase(it) : std::next(it);
    }
    return out;
}

/// Left multiplication by a coefficient-ring element.
template <class S, class T>
auto scale(const S& s, const Matrix<T>& m) {
    return m.map([&s](const T& v) { return s * v; });
}
template <class T, class S>
auto scale_right(const Matrix<T>& m, const S& s) {
    return m.map([&s](const T& v) { return v * s; });
}

template <class T>
T trace(const Matrix<T>& m) {
    T acc{};
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
        if (const T* p = m.find(i, i)) acc = acc + *p;
    return acc;
}

/// Kronecker product a (x) b; a's index is the most significant.
template <class A, class B>
Matrix<product_t<A, B>> kron(const Matrix<A>& a, const Matrix<B>& b) {
    Matrix<product_t<A, B>> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (const auto& [c, av] : a.row(r))
            for (std::size_t rb = 0; rb < b.rows(); ++rb)
                for (const auto& [cb, bv] : b.row(rb))
                    out.set(r * b.rows() + rb, c * b.cols() + cb, av * bv);
    return out;
}

inline std::size_t ipow(std::size_t base, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= base;
    return r;
}

// ---------------------------------------------------------------------------
// Field helpers so elimination is generic over Scalar and Rational.

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static Rational inverse(const Rational& x) { return Rational(1) / x; }
};
template <>
struct FieldTraits<Scalar> {
    static Scalar inverse(const Scalar& x) { return x.inverse(); }
};

/// Sparse row vector sorted by column index.
template <class F>
using SparseVec = std::vector<std::pair<std::size_t, F>>;

/// dst = a + f * b on sorted sparse vectors.
template <class F>
SparseVec<F> axpy(const SparseVec<F>& a, const F& f, const SparseVec<F>& b) {
    SparseVec<F> out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            out.push_back(*ia++);
        } else if (ia == a.end() || ib->first < ia->first) {
            F v = f * ib->second;
            if (!is_zero(v)) out.emplace_back(ib->first, std::move(v));
            ++ib;
        } else {
            F v = ia->second + f * ib->second;
            if (!is_zero(v)) out.emplace_back(ia->first, std::move(v));
            ++ia;
            ++ib;
        }
    }
    return out;
}

/// Incremental semi-echelon basis: every stored row has a distinct pivot (its
/// smallest column) normalized to 1. Optionally tracks, for every stored row,
/// its expression as a combination of the inserted input rows.
template <class F>
class Echelon {
public:
    explicit Echelon(bool track = false) : track_(track) {}

    struct Reduced {
        SparseVec<F> rest;
        SparseVec<F> combo;  // rest = input - sum combo[i] * input_i
    };

    /// Reduce v by the basis. Reduction stops at the first column without a pivot
    /// unless `full` is set.
    Reduced reduce(SparseVec<F> v, bool full = false) const {
        SparseVec<F> combo;
        SparseVec<F> done;  // columns already known to be non-pivot (full mode)
        while (!v.empty()) {
            auto it = basis_.find(v.front().first);
            if (it == basis_.end()) {
                if (!full) break;
                done.push_back(v.front());
                v.erase(v.begin());
                continue;
            }
            F f = -v.front().second;
            v = axpy(v, f, it->second.row);
            if (track_) combo = axpy(combo, F(-f), it->second.combo);
            // axpy(combo, -f, ...) records input = rest + sum combo_i * input_i
        }
        if (full) {
            done.insert(done.end(), v.begin(), v.end());
            v = std::move(done);
        }
        return {std::move(v), std::move(combo)};
    }

    /// Insert a row; returns true if it was independent of the current basis.
    bool insert(SparseVec<F> v) {
        std::size_t id = inputs_++;
        Reduced red = reduce(std::move(v));
        if (red.rest.empty()) return false;
        SparseVec<F> combo;
        if (track_) {
            // stored row = input_id - sum red.combo
            combo = axpy(SparseVec<F>{{id, F(1)}}, F(-1), red.combo);
        }
        F inv = FieldTraits<F>::inverse(red.rest.front().second);
        for (auto& [c, x] : red.rest) x = inv * x;
        for (auto& [c, x] : combo) x = inv * x;
        std::size_t pivot = red.rest.front().first;
        basis_.emplace(pivot, Stored{std::move(red.rest), std::move(combo)});
        return true;
    }

    std::size_t rank() const { return basis_.size(); }
    std::size_t inputs() const { return inputs_; }

private:
    struct Stored {
        SparseVec<F> row;
        SparseVec<F> combo;
    };
    bool track_;
    std::size_t inputs_ = 0;
    std::map<std::size_t, Stored> basis_;
};

template <class F>
SparseVec<F> to_sparse(const typename Matrix<F>::Row& r) {
    return SparseVec<F>(r.begin(), r.end());
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    Echelon<F> e;
    for (std::size_t r = 0; r < m.rows(); ++r) e.insert(to_sparse<F>(m.row(r)));
    return e.rank();
}

/// Solve a x = b (a: n x k). Returns one solution (free variables zero) or nullopt.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& a, const std::vector<F>& b) {
    // eliminate columns of [a | b] row-wise on the transposed system is awkward;
    // use Gauss-Jordan on augmented rows with pivots chosen per column.
    const std::size_t n = a.rows(), k = a.cols();
    std::vector<SparseVec<F>> rows(n);
    for (std::size_t r = 0; r < n; ++r) {
        rows[r] = to_sparse<F>(a.row(r));
        if (!is_zero(b[r])) rows[r].emplace_back(k, b[r]);  // augmented column k
    }
    std::vector<std::optional<std::size_t>> pivot_row_of_col(k);
    std::vector<bool> used(n, false);
    for (std::size_t col = 0; col < k; ++col) {
        std::optional<std::size_t> p;
        for (std::size_t r = 0; r < n; ++r)
            if (!used[r] && !rows[r].empty() && rows[r].front().first == col) {
                if (!p || rows[r].size() < rows[*p].size()) p = r;
            }
        if (!p) continue;
        used[*p] = true;
        F inv = FieldTraits<F>::inverse(rows[*p].front().second);
        for (auto& [c, x] : rows[*p]) x = inv * x;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == *p) continue;
            auto it = std::lower_bound(rows[r].begin(), rows[r].end(), col,
                                       [](const auto& e, std::size_t c) { return e.first < c; });
            if (it == rows[r].end() || it->first != col) continue;
            F f = -it->second;
            rows[r] = axpy(rows[r], f, rows[*p]);
        }
        pivot_row_of_col[col] = *p;
    }
    for (std::size_t r = 0; r < n; ++r)
        if (!rows[r].empty() && rows[r].front().first == k) return std::nullopt;  // 0 = nonzero
    std::vector<F> x(k);
    for (std::size_t col = 0; col < k; ++col) {
        if (!pivot_row_of_col[col]) continue;
        const auto& row = rows[*pivot_row_of_col[col]];
        if (!row.empty() && row.back().first == k) x[col] = row.back().second;
    }
    return x;
}

/// Exact inverse via Gauss-Jordan; nullopt if singular.
template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = a.rows();
    Matrix<F> inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<F> e(n);
        e[j] = F(1);
        auto x = solve(a, e);
        if (!x) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) inv.set(i, j, (*x)[i]);
    }
    if (!(a * inv == Matrix<F>::identity(n))) return std::nullopt;
    return inv;
}

}  // namespace braidcheck
