#pragma once

// Exact scalars and dense exact matrices. All arithmetic in the library is
// exact; the only floating point lives in the SVG renderer.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace refl3 {

using Int = mpz_class;
using Rat = mpq_class;

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// floor division quotient
inline Int fdiv_q(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int mod(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool is_integer(Rat q) {
    q.canonicalize();
    return q.get_den() == 1;
}

// canonical representative of q mod m in [0, m)
inline Rat mod_reduce(const Rat& q, const Rat& m) {
    Rat f = q / m;
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), f.get_num().get_mpz_t(), f.get_den().get_mpz_t());
    return q - Rat(fl) * m;
}

using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;

template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t r, size_t c) : rows_(r), cols_(c), a_(r * c) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged initializer");
            for (const auto& x : row) a_.push_back(x);
        }
    }

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    T& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix size mismatch");
        Matrix r(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const T& x = (*this)(i, k);
                if (x == 0) continue;
                for (size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }

    std::vector<T> row(size_t i) const {
        return std::vector<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }
    void set_row(size_t i, const std::vector<T>& v) {
        for (size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

private:
    size_t rows_, cols_;
    std::vector<T> a_;
};

using IMat = Matrix<Int>;
using QMat = Matrix<Rat>;

QMat to_rational(const IMat& m);
IMat to_integer(const QMat& m);  // throws if any entry is non-integral

// Exact determinant (Gaussian elimination over Q).
Rat det(const QMat& m);
Int det(const IMat& m);

// Exact inverse; throws on singular input.
QMat inverse(const QMat& m);
inline QMat inverse(const IMat& m) { return inverse(to_rational(m)); }

// v * M for a row vector v.
template <class T>
std::vector<T> row_times(const std::vector<T>& v, const Matrix<T>& m) {
    if (v.size() != m.rows()) throw std::invalid_argument("size mismatch");
    std::vector<T> r(m.cols());
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (size_t j = 0; j < m.cols(); ++j) r[j] += v[i] * m(i, j);
    }
    return r;
}

// x^T G y
template <class T>
T pair_with(const Matrix<T>& g, const std::vector<T>& x, const std::vector<T>& y) {
    T s = 0;
    for (size_t i = 0; i < g.rows(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < g.cols(); ++j) s += x[i] * g(i, j) * y[j];
    }
    return s;
}

Rat pair_mixed(const IMat& g, const QVec& x, const QVec& y);

struct SmithForm {
    IMat d;  // diagonal, d1 | d2 | ...
    IMat u;  // unimodular row transform
    IMat v;  // unimodular column transform;  u * m * v == d
};

SmithForm smith_normal_form(const IMat& m);

// Row-style Hermite reduction: basis of the Z-module spanned by the rows.
// Returns a matrix whose rows are a basis (full pivoted echelon form,
// positive pivots, entries above pivots reduced).
IMat hnf_row_basis(const IMat& gens);

// Unimodular M with M * w = (gcd(w), 0, ..., 0)^T; rows 1.. of M span the
// integer solutions of y . w = 0.
IMat column_reduce_unimodular(const IVec& w);

// Legendre symbol (a/p); p must be an odd prime.
int legendre_symbol(const Int& a, const Int& p);

// Hilbert symbol (a,b)_p for a prime p, or at the real place when
// p == 0 (the conventional "infinity").
int hilbert_symbol(const Rat& a, const Rat& b, const Int& p);

bool is_prime(const Int& n);
bool is_square_free(const Int& n);
std::vector<Int> prime_factors(const Int& n);

}  // namespace refl3
