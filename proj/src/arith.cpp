#include "refl3/arith.hpp"

#include <algorithm>
#include <cstdlib>

namespace refl3 {

QMat to_rational(const IMat& m) {
    QMat r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

IMat to_integer(const QMat& m) {
    IMat r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            if (!is_integer(m(i, j))) throw std::invalid_argument("non-integral matrix entry");
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

Rat det(const QMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det of non-square matrix");
    size_t n = m.rows();
    QMat a = m;
    Rat d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a(piv, c) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            for (size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
            d = -d;
        }
        d *= a(c, c);
        for (size_t r = c + 1; r < n; ++r) {
            if (a(r, c) == 0) continue;
            Rat f = a(r, c) / a(c, c);
            for (size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return d;
}

Int det(const IMat& m) {
    Rat d = det(to_rational(m));
    return d.get_num();
}

QMat inverse(const QMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    size_t n = m.rows();
    QMat a = m;
    QMat inv = QMat::identity(n);
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a(piv, c) == 0) ++piv;
        if (piv == n) throw std::invalid_argument("singular matrix");
        if (piv != c)
            for (size_t j = 0; j < n; ++j) {
                std::swap(a(c, j), a(piv, j));
                std::swap(inv(c, j), inv(piv, j));
            }
        Rat p = a(c, c);
        for (size_t j = 0; j < n; ++j) {
            a(c, j) /= p;
            inv(c, j) /= p;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) continue;
            Rat f = a(r, c);
            for (size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

Rat pair_mixed(const IMat& g, const QVec& x, const QVec& y) {
    Rat s = 0;
    for (size_t i = 0; i < g.rows(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < g.cols(); ++j) s += x[i] * Rat(g(i, j)) * y[j];
    }
    return s;
}

namespace {

void swap_rows(IMat& a, IMat& u, size_t i, size_t j) {
    for (size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
    for (size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
}

void swap_cols(IMat& a, IMat& v, size_t i, size_t j) {
    for (size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
    for (size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
}

// row i += q * row j
void add_row(IMat& a, IMat& u, size_t i, size_t j, const Int& q) {
    for (size_t c = 0; c < a.cols(); ++c) a(i, c) += q * a(j, c);
    for (size_t c = 0; c < u.cols(); ++c) u(i, c) += q * u(j, c);
}

void add_col(IMat& a, IMat& v, size_t i, size_t j, const Int& q) {
    for (size_t r = 0; r < a.rows(); ++r) a(r, i) += q * a(r, j);
    for (size_t r = 0; r < v.rows(); ++r) v(r, i) += q * v(r, j);
}

}  // namespace

SmithForm smith_normal_form(const IMat& m) {
    size_t n = m.rows(), k = m.cols();
    IMat a = m;
    IMat u = IMat::identity(n);
    IMat v = IMat::identity(k);
    size_t t = 0;
    size_t dim = std::min(n, k);
    while (t < dim) {
        // smallest nonzero pivot in the remaining block
        size_t pi = n, pj = k;
        for (size_t i = t; i < n; ++i)
            for (size_t j = t; j < k; ++j)
                if (a(i, j) != 0 &&
                    (pi == n || cmp(abs(a(i, j)), abs(a(pi, pj))) < 0)) {
                    pi = i;
                    pj = j;
                }
        if (pi == n) break;
        swap_rows(a, u, t, pi);
        swap_cols(a, v, t, pj);
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (size_t i = t + 1; i < n; ++i)
                while (a(i, t) != 0) {
                    Int q = fdiv_q(a(i, t), a(t, t));
                    add_row(a, u, i, t, -q);
                    if (a(i, t) != 0) {
                        swap_rows(a, u, t, i);
                        dirty = true;
                    }
                }
            for (size_t j = t + 1; j < k; ++j)
                while (a(t, j) != 0) {
                    Int q = fdiv_q(a(t, j), a(t, t));
                    add_col(a, v, j, t, -q);
                    if (a(t, j) != 0) {
                        swap_cols(a, v, t, j);
                        dirty = true;
                    }
                }
        }
        ++t;
    }
    // enforce the divisibility chain d1 | d2 | ...
    for (size_t i = 0; i + 1 < t; ++i)
        for (size_t j = i + 1; j < t; ++j)
            if (a(j, j) % a(i, i) != 0) {
                add_col(a, v, i, j, 1);
                // clear the introduced off-diagonal entries
                while (a(j, i) != 0 || a(i, j) != 0) {
                    while (a(j, i) != 0) {
                        Int q = fdiv_q(a(j, i), a(i, i));
                        add_row(a, u, j, i, -q);
                        if (a(j, i) != 0) swap_rows(a, u, i, j);
                    }
                    while (a(i, j) != 0) {
                        Int q = fdiv_q(a(i, j), a(i, i));
                        add_col(a, v, j, i, -q);
                        if (a(i, j) != 0) swap_cols(a, v, i, j);
                    }
                }
            }
    for (size_t i = 0; i < t; ++i)
        if (a(i, i) < 0) {
            Int q = -1;
            for (size_t c = 0; c < k; ++c) a(i, c) *= q;
            for (size_t c = 0; c < u.cols(); ++c) u(i, c) *= q;
        }
    return {a, u, v};
}

IMat hnf_row_basis(const IMat& gens) {
    size_t n = gens.rows(), m = gens.cols();
    IMat a = gens;
    size_t r0 = 0;
    for (size_t c = 0; c < m && r0 < n; ++c) {
        // gcd-reduce column c below r0
        while (true) {
            size_t piv = n;
            for (size_t i = r0; i < n; ++i)
                if (a(i, c) != 0 && (piv == n || cmp(abs(a(i, c)), abs(a(piv, c))) < 0))
                    piv = i;
            if (piv == n) break;
            if (piv != r0)
                for (size_t j = 0; j < m; ++j) std::swap(a(r0, j), a(piv, j));
            bool clean = true;
            for (size_t i = r0 + 1; i < n; ++i) {
                if (a(i, c) == 0) continue;
                Int q = fdiv_q(a(i, c), a(r0, c));
                for (size_t j = 0; j < m; ++j) a(i, j) -= q * a(r0, j);
                if (a(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (a(r0, c) == 0) continue;
        if (a(r0, c) < 0)
            for (size_t j = 0; j < m; ++j) a(r0, j) = -a(r0, j);
        for (size_t i = 0; i < r0; ++i) {
            Int q = fdiv_q(a(i, c), a(r0, c));
            if (q != 0)
                for (size_t j = 0; j < m; ++j) a(i, j) -= q * a(r0, j);
        }
        ++r0;
    }
    IMat basis(r0, m);
    for (size_t i = 0; i < r0; ++i)
        for (size_t j = 0; j < m; ++j) basis(i, j) = a(i, j);
    return basis;
}

int legendre_symbol(const Int& a, const Int& p) {
    if (p <= 2 || !is_prime(p)) throw std::invalid_argument("legendre_symbol: p must be an odd prime");
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

namespace {

// a = p^k * u with p odd prime; returns (k, u)
std::pair<long, Int> split_valuation(Int a, const Int& p) {
    long k = 0;
    while (a % p == 0) {
        a /= p;
        ++k;
    }
    return {k, a};
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, const Int& p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
    if (p == 0)  // real place
        return (a < 0 && b < 0) ? -1 : 1;
    if (!is_prime(p)) throw std::invalid_argument("hilbert_symbol: p must be prime");
    // reduce to integers: symbol depends on square classes only
    Int an = a.get_num() * a.get_den();
    Int bn = b.get_num() * b.get_den();
    if (p == 2) {
        auto [alpha, u] = split_valuation(an < 0 ? an : an, Int(2));
        auto [beta, v] = split_valuation(bn, Int(2));
        auto eps = [](const Int& x) { return mod((x - 1) / 2, Int(2)); };
        auto om = [](const Int& x) { return mod((x * x - 1) / 8, Int(2)); };
        Int e = eps(u) * eps(v) + Int(alpha) * om(v) + Int(beta) * om(u);
        return mod(e, Int(2)) == 0 ? 1 : -1;
    }
    auto [alpha, u] = split_valuation(an, p);
    auto [beta, v] = split_valuation(bn, p);
    int s = 1;
    if ((alpha * beta) % 2 == 1 && mod((p - 1) / 2, Int(2)) == 1) s = -s;
    if (beta % 2 == 1) s *= legendre_symbol(u, p);
    if (alpha % 2 == 1) s *= legendre_symbol(v, p);
    return s;
}

bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

bool is_square_free(const Int& n) {
    if (n == 0) return false;
    for (const Int& p : prime_factors(n)) {
        if ((abs(n) / p) % p == 0) return false;
    }
    return true;
}

IMat column_reduce_unimodular(const IVec& w) {
    size_t n = w.size();
    IMat m = IMat::identity(n);
    IVec c = w;
    auto row_op = [&](size_t dst, size_t src, const Int& q) {
        c[dst] -= q * c[src];
        for (size_t j = 0; j < n; ++j) m(dst, j) -= q * m(src, j);
    };
    auto swap_rows = [&](size_t i, size_t j) {
        std::swap(c[i], c[j]);
        for (size_t k = 0; k < n; ++k) std::swap(m(i, k), m(j, k));
    };
    for (size_t i = 1; i < n; ++i) {
        while (c[i] != 0) {
            if (c[0] != 0) row_op(0, i, fdiv_q(c[0], c[i]));
            swap_rows(0, i);
        }
    }
    if (c[0] < 0) {
        c[0] = -c[0];
        for (size_t j = 0; j < n; ++j) m(0, j) = -m(0, j);
    }
    return m;
}

std::vector<Int> prime_factors(const Int& n) {
    std::vector<Int> out;
    Int x = abs(n);
    for (Int p = 2; p * p <= x; ++p) {
        if (x % p == 0) {
            out.push_back(p);
            while (x % p == 0) x /= p;
        }
    }
    if (x > 1) out.push_back(x);
    return out;
}

}  // namespace refl3
