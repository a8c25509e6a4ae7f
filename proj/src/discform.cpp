#include "refl3/discform.hpp"

#include <algorithm>

namespace refl3 {

DiscriminantData discriminant_group(const Lattice& l) {
    size_t n = l.rank();
    SmithForm snf = smith_normal_form(l.gram());
    QMat ginv = inverse(l.gram());
    QMat vinv = inverse(snf.v);
    DiscriminantData out;
    out.order = abs(det(l.gram()));
    for (size_t i = 0; i < n; ++i) {
        Int di = snf.d(i, i);
        if (di == 1) continue;
        // generator of the Z/d_i component: row i of V^{-1} in dual-basis
        // coordinates, lifted to L-coordinates through gram^{-1}
        QVec w(n);
        for (size_t j = 0; j < n; ++j) w[j] = vinv(i, j);
        out.invariant_factors.push_back(di);
        out.generator_lifts.push_back(row_times(w, ginv));
    }
    return out;
}

namespace {

void check_in_dual(const Lattice& l, const QVec& x) {
    for (size_t j = 0; j < l.rank(); ++j) {
        Rat pr = 0;
        for (size_t i = 0; i < l.rank(); ++i) pr += x[i] * Rat(l.gram()(i, j));
        if (!is_integer(pr)) throw std::invalid_argument("argument not in the dual lattice");
    }
}

}  // namespace

Rat disc_bilinear(const Lattice& l, const QVec& x, const QVec& y) {
    check_in_dual(l, x);
    check_in_dual(l, y);
    return mod_reduce(pair_mixed(l.gram(), x, y), Rat(1));
}

Rat disc_quadratic(const Lattice& l, const QVec& x) {
    if (l.parity() != Parity::even)
        throw std::invalid_argument("discriminant quadratic form requires an even lattice");
    check_in_dual(l, x);
    return mod_reduce(pair_mixed(l.gram(), x, x), Rat(2));
}

std::map<Int, size_t> p_invariants(const Lattice& l) {
    DiscriminantData d = discriminant_group(l);
    std::map<Int, size_t> out;
    for (const Int& p : prime_factors(d.order))
        for (const Int& f : d.invariant_factors)
            if (f % p == 0) ++out[p];
    return out;
}

bool is_elementary(const Lattice& l) {
    DiscriminantData d = discriminant_group(l);
    for (const Int& f : d.invariant_factors)
        if (!is_square_free(f)) return false;
    return true;
}

ElementarizeResult elementarize(const Lattice& l) {
    ElementarizeResult out;
    out.chain.push_back(l);
    Lattice cur = l;
    while (!is_elementary(cur)) {
        DiscriminantData dd = discriminant_group(cur);
        std::vector<QVec> gens;
        for (const Int& p : prime_factors(dd.order)) {
            // exponent t_p of the p-component
            long tp = 0;
            for (const Int& f : dd.invariant_factors) {
                long v = 0;
                Int x = f;
                while (x % p == 0) {
                    x /= p;
                    ++v;
                }
                tp = std::max(tp, v);
            }
            if (tp <= 1) continue;
            // H_p = p^{t_p - 1} A_p: glue p^{t_p-1} * (p-part of each generator)
            Int pt;
            mpz_pow_ui(pt.get_mpz_t(), p.get_mpz_t(), tp - 1);
            for (size_t i = 0; i < dd.invariant_factors.size(); ++i) {
                Int f = dd.invariant_factors[i];
                Int cof = f;
                while (cof % p == 0) cof /= p;
                QVec g = dd.generator_lifts[i];
                for (auto& x : g) x *= Rat(cof * pt);
                gens.push_back(g);
            }
        }
        cur = overlattice(cur, gens);
        out.chain.push_back(cur);
    }
    out.result = cur;
    return out;
}

Lattice m_dual(const Lattice& l, const Int& m) {
    if (m <= 0 || !is_square_free(m)) throw std::invalid_argument("m must be positive square-free");
    if (!is_elementary(l)) throw std::invalid_argument("m_dual requires an elementary lattice");
    size_t n = l.rank();
    // x in Z^n indexes L* via x . gram^{-1}; membership in (1/m)L means
    // m x gram^{-1} integral, i.e. x N = 0 mod q with N = m adj(gram), q = det
    Int d = det(l.gram());
    Int q = abs(d);
    IMat nmat(n, n);
    {
        QMat ginv = inverse(l.gram());
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Rat e = Rat(m) * ginv(i, j) * Rat(d);
                if (!is_integer(e)) throw std::logic_error("adjugate not integral");
                nmat(i, j) = e.get_num();
            }
    }
    SmithForm snf = smith_normal_form(nmat);
    // w D in qZ^n  <=>  w_i multiple of q / gcd(d_i, q); x = w U
    IMat x(n, n);
    for (size_t i = 0; i < n; ++i) {
        Int mult = q / gcd(snf.d(i, i), q);
        for (size_t j = 0; j < n; ++j) x(i, j) = mult * snf.u(i, j);
    }
    // basis of the intersection in L-coordinates, form scaled by m
    QMat b = to_rational(x) * inverse(l.gram());
    QMat gram_q = b * to_rational(l.gram()) * b.transpose();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) gram_q(i, j) *= Rat(m);
    return Lattice(to_integer(gram_q), GlueSpec{l.gram(), {}}, b);
}

InvariantTriple invariant_triple(const Lattice& l) {
    Int d = abs(det(l.gram()));
    if (!is_square_free(d)) throw std::invalid_argument("invariant_triple: determinant not square-free");
    InvariantTriple out;
    out.d = d;
    out.type = l.parity();
    DiscriminantData dd = discriminant_group(l);
    std::vector<Int> odd_primes;
    for (const Int& p : prime_factors(d))
        if (p != 2) odd_primes.push_back(p);
    std::sort(odd_primes.begin(), odd_primes.end());
    for (const Int& p : odd_primes) {
        // unique invariant factor divisible by p (square-free determinant)
        size_t idx = dd.invariant_factors.size();
        for (size_t i = 0; i < dd.invariant_factors.size(); ++i)
            if (dd.invariant_factors[i] % p == 0) idx = i;
        QVec g = dd.generator_lifts[idx];
        Int cof = dd.invariant_factors[idx] / p;
        for (auto& x : g) x *= Rat(cof);
        Rat b = disc_bilinear(l, g, g);  // = u/p with gcd(u, p) = 1
        if (b.get_den() != p) throw std::logic_error("unexpected discriminant form denominator");
        out.eta_bits.push_back(legendre_symbol(b.get_num(), p) == 1 ? 0 : 1);
    }
    return out;
}

std::vector<int> omega(const Int& d) {
    if (mod(d, Int(2)) == 0 || !is_square_free(d))
        throw std::invalid_argument("omega: d must be odd square-free");
    std::vector<int> out;
    for (const Int& p : prime_factors(d))
        out.push_back(mod((p * p - 1) / 8, Int(2)) == 0 ? 0 : 1);
    return out;
}

std::vector<int> eta_bits_from_code(const Int& d, const Int& code) {
    size_t t = 0;
    for (const Int& p : prime_factors(d))
        if (p != 2) ++t;
    std::vector<int> bits(t);
    for (size_t i = 0; i < t; ++i)
        bits[i] = mpz_tstbit(code.get_mpz_t(), i);
    return bits;
}

bool equivariantly_equivalent(const Int& d, const std::vector<int>& eta_bits) {
    if (mod(d, Int(2)) == 0 || !is_square_free(d))
        throw std::invalid_argument("equivariantly_equivalent: d must be odd square-free");
    std::vector<Int> ps = prime_factors(d);
    if (eta_bits.size() != ps.size()) throw std::invalid_argument("eta bit vector has wrong width");
    std::vector<int> om = omega(d);
    Int sum = 0;
    for (size_t i = 0; i < ps.size(); ++i)
        sum += 1 - ps[i] + 4 * eta_bits[i] + 4 * om[i];
    Int r = mod(sum, Int(8));
    return r == 0 || r == 6;
}

bool equivariantly_equivalent(const Int& d, const Int& eta_code) {
    return equivariantly_equivalent(d, eta_bits_from_code(d, eta_code));
}

std::vector<Lattice> odd_overlattices(const Lattice& s) {
    Int d = abs(det(s.gram()));
    if (mod(d, Int(2)) == 0 || !is_square_free(d))
        throw std::invalid_argument("odd_overlattices requires odd square-free determinant");
    Lattice s2 = rescale(s, 2);
    DiscriminantData dd = discriminant_group(s2);
    // 2-parts of the generators
    std::vector<QVec> gens2;
    for (size_t i = 0; i < dd.invariant_factors.size(); ++i) {
        Int f = dd.invariant_factors[i];
        if (mod(f, Int(2)) == 0) {
            Int cof = f;
            while (mod(cof, Int(2)) == 0) cof /= 2;
            QVec g = dd.generator_lifts[i];
            for (auto& x : g) x *= Rat(cof);
            gens2.push_back(g);
        }
    }
    size_t k = gens2.size();
    std::vector<Lattice> out;
    size_t n = s.rank();
    for (size_t mask = 1; mask < (size_t(1) << k); ++mask) {
        QVec w(n);
        for (size_t i = 0; i < k; ++i)
            if (mask & (size_t(1) << i))
                for (size_t j = 0; j < n; ++j) w[j] += gens2[i][j];
        if (disc_quadratic(s2, w) == 1) out.push_back(overlattice(s2, {w}));
    }
    return out;
}

}  // namespace refl3
