#include "refl3/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace refl3 {

Int pairing_divisor(const Lattice& l, const IVec& a) {
    IVec ag = row_times(a, l.gram());
    Int t = 0;
    for (const Int& x : ag) t = gcd(t, x);
    return t;
}

bool is_root(const Lattice& l, const IVec& a) {
    bool zero = true;
    for (const Int& x : a)
        if (x != 0) zero = false;
    if (zero) throw std::invalid_argument("is_root: zero vector");
    Int n = l.norm(a);
    if (n >= 0) return false;
    return mod(2 * pairing_divisor(l, a), -n) == 0;
}

bool is_primitive(const IVec& a) {
    Int g = 0;
    for (const Int& x : a) g = gcd(g, x);
    return g == 1;
}

IMat reflection(const Lattice& l, const IVec& a) {
    if (!is_root(l, a)) throw std::invalid_argument("reflection requires a root");
    size_t n = l.rank();
    Int nn = l.norm(a);
    IVec ag = row_times(a, l.gram());
    IMat m = IMat::identity(n);
    for (size_t i = 0; i < n; ++i) {
        Int c = 2 * ag[i];  // 2 (e_i, alpha); divisible by alpha^2
        for (size_t j = 0; j < n; ++j) m(i, j) -= c / nn * a[j];
    }
    return m;
}

Int twist_bound(const Lattice& l) { return 2 * discriminant_group(l).exponent(); }

std::vector<Int> admissible_norms(const Lattice& l) {
    Int b = twist_bound(l);
    std::vector<Int> out;
    for (Int i = 1; i * i <= b; ++i) {
        if (b % i != 0) continue;
        out.push_back(i);
        if (i * i != b) out.push_back(b / i);
    }
    std::sort(out.begin(), out.end());
    for (Int& k : out) k = -k;
    return out;
}

namespace {

IVec combine(const IVec& x0, const Int& s, const IVec& u, const Int& t, const IVec& v) {
    IVec r(x0.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = x0[i] + s * u[i] + t * v[i];
    return r;
}

// bit i set iff i is a square modulo 64; cheap rejection filter for square tests
constexpr std::uint64_t square_mask64 = [] {
    std::uint64_t m = 0;
    for (int i = 0; i < 64; ++i) m |= std::uint64_t(1) << ((i * i) & 63);
    return m;
}();

unsigned __int128 abs_to_u128(const Int& v) {
    unsigned __int128 r = 0;
    mpz_srcptr z = v.get_mpz_t();
    for (size_t i = mpz_size(z); i-- > 0;) r = (r << GMP_NUMB_BITS) | mpz_getlimbn(z, i);
    return r;
}

__int128 to_i128(const Int& v) {
    unsigned __int128 m = abs_to_u128(v);
    return mpz_sgn(v.get_mpz_t()) < 0 ? -static_cast<__int128>(m) : static_cast<__int128>(m);
}

bool bits_at_most(const Int& v, size_t bits) {
    return v == 0 || mpz_sizeinbase(v.get_mpz_t(), 2) <= bits;
}

}  // namespace

RootSlicer::RootSlicer(const Lattice& l, const IVec& p0) : l_(&l) {
    if (l.rank() != 3) throw std::invalid_argument("roots_with: rank-3 lattice required");
    if (l.norm(p0) <= 0)
        throw std::invalid_argument("roots_with: base point must have positive norm");

    IVec w = row_times(p0, l.gram());
    IMat m = column_reduce_unimodular(w);
    g_ = 0;
    for (const Int& x : w) g_ = gcd(g_, x);
    x0_ = m.row(0);
    u_ = m.row(1);
    v_ = m.row(2);
    const IMat& gr = l.gram();
    // Lagrange-reduce the basis of the plane section so the per-slice scan
    // interval is as short as the geometry allows.
    while (true) {
        Int au = -pair_with(gr, u_, u_);
        Int bv = -pair_with(gr, u_, v_);
        Int r = fdiv_q(2 * bv + au, 2 * au);
        for (size_t i = 0; i < v_.size(); ++i) v_[i] -= r * u_[i];
        if (-pair_with(gr, v_, v_) < au)
            std::swap(u_, v_);
        else
            break;
    }
    // scan runs over multiples of u_; keep the short vector as v_ so the
    // ellipse extent along the scan direction is minimal
    std::swap(u_, v_);
    a_ = pair_with(gr, u_, u_);
    b_ = pair_with(gr, u_, v_);
    cc_ = pair_with(gr, v_, v_);
    pa_ = a_ * cc_ - b_ * b_;
    if (a_ >= 0 || pa_ <= 0) throw std::logic_error("slice form is not negative definite");
    d0_ = pair_with(gr, u_, x0_);
    e0_ = pair_with(gr, v_, x0_);
    f0_ = pair_with(gr, x0_, x0_);
}

std::vector<IVec> RootSlicer::slice(const Int& k, const Int& n) const {
    if (k >= 0) throw std::invalid_argument("roots_with: root norm must be negative");
    if (mod(n, g_) != 0) return {};
    Int scale = n / g_;
    Int d = scale * d0_, e = scale * e0_, f = scale * scale * f0_;

    // s must keep the per-s discriminant (b s + e)^2 - cc (a s^2 + 2 d s + f - k)
    // non-negative; that quadratic in s has negative leading coefficient
    Int q = b_ * e - cc_ * d;
    Int r = e * e - cc_ * (f - k);
    Int disc = q * q + pa_ * r;
    std::vector<IVec> out;
    if (disc < 0) return out;
    Int root;
    mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
    Int lo = fdiv_q(q - root, pa_) - 1;
    Int hi = fdiv_q(q + root, pa_) + 2;
    IVec x0 = x0_;
    for (Int& x : x0) x *= scale;
    auto try_s = [&](const Int& s) {
        Int beta = b_ * s + e;
        Int gamma = a_ * s * s + 2 * d * s + f - k;
        Int dt = beta * beta - cc_ * gamma;
        if (dt < 0) return;
        if (!mpz_perfect_square_p(dt.get_mpz_t())) return;
        Int rt;
        mpz_sqrt(rt.get_mpz_t(), dt.get_mpz_t());
        for (int sign = -1; sign <= 1; sign += 2) {
            if (rt == 0 && sign == 1) continue;
            Int num = -beta + sign * rt;
            if (mod(num, cc_) != 0) continue;
            Int t = num / cc_;
            IVec alpha = combine(x0, s, u_, t, v_);
            if (l_->norm(alpha) != k) throw std::logic_error("slice enumeration inconsistency");
            if (is_root(*l_, alpha)) out.push_back(alpha);
        }
    };
    // dt(s) = beta^2 - cc*gamma = -pa*s^2 + 2*q*s + r; when everything fits
    // comfortably in 128-bit words, walk dt incrementally and reject
    // non-squares with a mod-64 mask before any exact work.
    if (bits_at_most(disc, 96) && bits_at_most(q, 90) && bits_at_most(r, 90) &&
        bits_at_most(pa_, 62) && lo.fits_sint_p() && hi.fits_sint_p()) {
        const __int128 pa = to_i128(pa_), q1 = to_i128(q), r1 = to_i128(r);
        long s = lo.get_si();
        const long sh = hi.get_si();
        __int128 dt = -pa * s * s + 2 * q1 * s + r1;
        __int128 step = -pa * (2 * s + 1) + 2 * q1;
        for (; s <= sh; ++s, dt += step, step -= 2 * pa) {
            if (dt < 0) continue;
            if (!((square_mask64 >> (static_cast<std::uint64_t>(dt) & 63)) & 1)) continue;
            auto ud = static_cast<unsigned __int128>(dt);
            auto rt = static_cast<std::uint64_t>(sqrtl(static_cast<long double>(ud)));
            while (static_cast<unsigned __int128>(rt) * rt > ud) --rt;
            while (static_cast<unsigned __int128>(rt + 1) * (rt + 1) <= ud) ++rt;
            if (static_cast<unsigned __int128>(rt) * rt != ud) continue;
            try_s(Int(s));
        }
    } else {
        for (Int s = lo; s <= hi; ++s) try_s(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IVec> roots_with(const Lattice& l, const Int& k, const IVec& p0, const Int& n) {
    return RootSlicer(l, p0).slice(k, n);
}

namespace {

QVec to_qvec(const IVec& v) {
    QVec q(v.size());
    for (size_t i = 0; i < v.size(); ++i) q[i] = v[i];
    return q;
}

void check_transformed(const Lattice& target, const std::vector<IVec>& roots) {
    for (const IVec& r : roots)
        if (!is_primitive(r) || !is_root(target, r))
            throw std::runtime_error("transformed vector is not a primitive root of the target");
}

}  // namespace

TransformedRoots transform_roots_odd_overlattice(const Lattice& s, const std::vector<IVec>& roots) {
    InvariantTriple tr = invariant_triple(s);
    if (mod(tr.d, Int(2)) == 0)
        throw std::invalid_argument("odd determinant required");
    if (!equivariantly_equivalent(tr.d, tr.eta_bits))
        throw std::invalid_argument("the odd overlattice is not unique for these invariants");
    std::vector<Lattice> over = odd_overlattices(s);
    if (over.size() != 1) throw std::logic_error("expected a unique odd overlattice");
    Lattice target = over[0];

    size_t n = roots.size();
    std::vector<Int> halve(n);
    TransformedRoots out{target, {}, IMat(n, n)};
    for (size_t i = 0; i < n; ++i) {
        if (!is_primitive(roots[i]) || !is_root(s, roots[i]))
            throw std::invalid_argument("input is not a primitive root");
        Int norm = s.norm(roots[i]);
        if (mod(norm, Int(2)) != 0)
            halve[i] = 1;
        else if (mod(norm, Int(4)) == 2)
            halve[i] = 2;
        else
            throw std::invalid_argument("root norm divisible by 4 has no overlattice image");
        QVec q = to_qvec(roots[i]);
        for (Rat& x : q) x /= Rat(halve[i]);
        out.roots.push_back(target.from_base_coords(q));
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Rat v = Rat(2 * s.pair(roots[i], roots[j])) / Rat(halve[i] * halve[j]);
            if (!is_integer(v)) throw std::logic_error("transformed form is not integral");
            out.gram(i, j) = v.get_num();
            if (out.gram(i, j) != target.pair(out.roots[i], out.roots[j]))
                throw std::logic_error("transformed form disagrees with the overlattice pairing");
        }
    check_transformed(target, out.roots);
    return out;
}

TransformedRoots transform_roots_m_dual(const Lattice& s, const std::vector<IVec>& roots,
                                        const Int& m) {
    Int d = abs(s.determinant());
    if (m <= 0 || mod(d, m) != 0) throw std::invalid_argument("m must divide the determinant");
    Lattice target = m_dual(s, m);

    size_t n = roots.size();
    std::vector<Int> kk(n);
    TransformedRoots out{target, {}, IMat(n, n)};
    for (size_t i = 0; i < n; ++i) {
        if (!is_primitive(roots[i]) || !is_root(s, roots[i]))
            throw std::invalid_argument("input is not a primitive root");
        kk[i] = gcd(pairing_divisor(s, roots[i]), m);
        QVec q = to_qvec(roots[i]);
        for (Rat& x : q) x /= Rat(kk[i]);
        out.roots.push_back(target.from_base_coords(q));
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Rat v = Rat(s.pair(roots[i], roots[j]) * m) / Rat(kk[i] * kk[j]);
            if (!is_integer(v)) throw std::logic_error("transformed form is not integral");
            out.gram(i, j) = v.get_num();
            if (out.gram(i, j) != target.pair(out.roots[i], out.roots[j]))
                throw std::logic_error("transformed form disagrees with the dual pairing");
        }
    check_transformed(target, out.roots);
    return out;
}

}  // namespace refl3
