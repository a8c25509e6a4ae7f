#include "refl3/lattice.hpp"

#include <cctype>
#include <sstream>

namespace refl3 {

Lattice::Lattice(IMat gram) : gram_(std::move(gram)) {
    if (!gram_.is_symmetric()) throw std::invalid_argument("gram matrix must be symmetric");
    if (det(gram_) == 0) throw std::invalid_argument("gram matrix must be non-degenerate");
    base_change_ = QMat::identity(gram_.rows());
}

Lattice::Lattice(IMat gram, GlueSpec provenance, QMat base_change)
    : gram_(std::move(gram)), provenance_(std::move(provenance)), base_change_(std::move(base_change)) {
    if (!gram_.is_symmetric()) throw std::invalid_argument("gram matrix must be symmetric");
    if (det(gram_) == 0) throw std::invalid_argument("gram matrix must be non-degenerate");
}

Int Lattice::determinant() const { return det(gram_); }

Parity Lattice::parity() const {
    for (size_t i = 0; i < rank(); ++i)
        if (mod(gram_(i, i), Int(2)) != 0) return Parity::odd;
    return Parity::even;
}

bool Lattice::is_hyperbolic_rank3() const {
    if (rank() != 3) return false;
    // signature via leading principal minors after diagonalization: count sign
    // changes of the characteristic sequence; use exact diagonalization instead.
    QMat g = to_rational(gram_);
    size_t n = 3, pos = 0, neg = 0;
    // symmetric Gaussian diagonalization
    for (size_t c = 0; c < n; ++c) {
        if (g(c, c) == 0) {
            size_t j = c + 1;
            while (j < n && g(c, j) == 0) ++j;
            if (j == n) continue;
            for (size_t k = 0; k < n; ++k) g(c, k) += g(j, k);
            for (size_t k = 0; k < n; ++k) g(k, c) += g(k, j);
        }
        if (g(c, c) == 0) continue;
        for (size_t r = c + 1; r < n; ++r) {
            if (g(r, c) == 0) continue;
            Rat f = g(r, c) / g(c, c);
            for (size_t k = 0; k < n; ++k) g(r, k) -= f * g(c, k);
            for (size_t k = 0; k < n; ++k) g(k, r) -= f * g(k, c);
        }
        if (g(c, c) > 0) ++pos; else ++neg;
    }
    return pos == 1 && neg == 2;
}

IVec Lattice::from_base_coords(const QVec& v) const {
    QMat inv = inverse(base_change_);
    QVec c = row_times(v, inv);
    IVec out(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
        if (!is_integer(c[i])) throw std::invalid_argument("vector is not in the lattice");
        out[i] = c[i].get_num();
    }
    return out;
}

QMat module_row_basis(const std::vector<QVec>& gens) {
    if (gens.empty()) throw std::invalid_argument("empty generator set");
    size_t n = gens[0].size();
    Int den = 1;
    for (const auto& g : gens)
        for (const auto& x : g) den = lcm(den, x.get_den());
    IMat m(gens.size(), n);
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = 0; j < n; ++j) {
            Rat s = gens[i][j] * Rat(den);
            m(i, j) = s.get_num();
        }
    IMat basis = hnf_row_basis(m);
    QMat out(basis.rows(), n);
    for (size_t i = 0; i < basis.rows(); ++i)
        for (size_t j = 0; j < n; ++j) {
            out(i, j) = Rat(basis(i, j)) / Rat(den);
            out(i, j).canonicalize();
        }
    return out;
}

namespace {

struct SymbolParser {
    std::string s;
    size_t pos = 0;

    explicit SymbolParser(std::string text) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }

    bool eat(char c) {
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    Int parse_int() {
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
            throw std::invalid_argument("lattice symbol: expected integer at position " + std::to_string(start));
        return Int(s.substr(start, pos - start));
    }

    Rat parse_rat() {
        Int num = parse_int();
        if (eat('/')) {
            Int den = parse_int();
            if (den <= 0) throw std::invalid_argument("lattice symbol: denominator must be positive");
            Rat r(num, den);
            r.canonicalize();
            return r;
        }
        return Rat(num);
    }
};

}  // namespace

Lattice parse_lattice_symbol(const std::string& text) {
    SymbolParser p(text);
    std::vector<IMat> blocks;
    while (true) {
        if (p.eat('U')) {
            blocks.push_back(IMat{{0, 1}, {1, 0}});
        } else if (p.eat('<')) {
            Int a = p.parse_int();
            if (!p.eat('>')) throw std::invalid_argument("lattice symbol: expected '>'");
            blocks.push_back(IMat{{a}});
        } else {
            throw std::invalid_argument("lattice symbol: expected term at position " + std::to_string(p.pos));
        }
        if (!p.eat('+')) break;
    }
    size_t n = 0;
    for (const auto& b : blocks) n += b.rows();
    IMat base(n, n);
    size_t off = 0;
    for (const auto& b : blocks) {
        for (size_t i = 0; i < b.rows(); ++i)
            for (size_t j = 0; j < b.cols(); ++j) base(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    std::vector<QVec> glue;
    while (p.eat('(')) {
        QVec v;
        v.push_back(p.parse_rat());
        while (p.eat(',')) v.push_back(p.parse_rat());
        if (!p.eat(')')) throw std::invalid_argument("lattice symbol: expected ')'");
        if (v.size() != n) throw std::invalid_argument("lattice symbol: glue vector has wrong length");
        glue.push_back(std::move(v));
    }
    if (p.pos != p.s.size())
        throw std::invalid_argument("lattice symbol: trailing input at position " + std::to_string(p.pos));

    Lattice base_lattice{base};
    if (glue.empty()) {
        GlueSpec spec{base, {}};
        return Lattice(base, spec, QMat::identity(n));
    }
    // glue vectors must lie in the dual of the base lattice
    for (const auto& g : glue)
        for (size_t j = 0; j < n; ++j) {
            Rat pr = 0;
            for (size_t i = 0; i < n; ++i) pr += g[i] * Rat(base(i, j));
            if (!is_integer(pr)) throw std::invalid_argument("glue vector is not in the dual of the base");
        }
    std::vector<QVec> gens;
    for (size_t i = 0; i < n; ++i) {
        QVec e(n);
        e[i] = 1;
        gens.push_back(e);
    }
    for (const auto& g : glue) gens.push_back(g);
    QMat basis = module_row_basis(gens);
    if (basis.rows() != n) throw std::invalid_argument("glue construction degenerate");
    QMat gram_q = basis * to_rational(base) * basis.transpose();
    IMat gram;
    try {
        gram = to_integer(gram_q);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("glue vectors not b-compatible: resulting gram is non-integral");
    }
    GlueSpec spec{base, glue};
    return Lattice(gram, spec, basis);
}

Lattice rescale(const Lattice& l, const Rat& r) {
    if (r <= 0) throw std::invalid_argument("rescale: factor must be positive");
    QMat g = to_rational(l.gram());
    for (size_t i = 0; i < g.rows(); ++i)
        for (size_t j = 0; j < g.cols(); ++j) g(i, j) *= r;
    IMat gi;
    try {
        gi = to_integer(g);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("rescale: non-integral result");
    }
    return Lattice(gi);
}

QMat dual_basis(const Lattice& l) { return inverse(l.gram()); }

SublatticeResult even_sublattice(const Lattice& l) {
    if (l.parity() == Parity::even) throw std::invalid_argument("lattice is already even");
    size_t n = l.rank();
    // x^2 = sum x_i^2 g_ii mod 2 is linear mod 2; kernel generators:
    std::vector<size_t> odd_idx, even_idx;
    for (size_t i = 0; i < n; ++i)
        (mod(l.gram()(i, i), Int(2)) != 0 ? odd_idx : even_idx).push_back(i);
    std::vector<IVec> gens;
    for (size_t i : even_idx) {
        IVec e(n);
        e[i] = 1;
        gens.push_back(e);
    }
    {
        IVec e(n);
        e[odd_idx[0]] = 2;
        gens.push_back(e);
    }
    for (size_t k = 1; k < odd_idx.size(); ++k) {
        IVec e(n);
        e[odd_idx[0]] = 1;
        e[odd_idx[k]] = 1;
        gens.push_back(e);
    }
    IMat g(gens.size(), n);
    for (size_t i = 0; i < gens.size(); ++i) g.set_row(i, gens[i]);
    IMat basis = hnf_row_basis(g);
    IMat gram(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) gram(i, j) = pair_with(l.gram(), basis.row(i), basis.row(j));
    return {Lattice(gram), basis};
}

Lattice overlattice(const Lattice& l, const std::vector<QVec>& gens) {
    size_t n = l.rank();
    for (const auto& g : gens) {
        // generator must lie in L*: pairings with basis vectors integral
        for (size_t j = 0; j < n; ++j) {
            Rat pr = 0;
            for (size_t i = 0; i < n; ++i) pr += g[i] * Rat(l.gram()(i, j));
            if (!is_integer(pr)) throw std::invalid_argument("overlattice generator outside the dual");
        }
    }
    std::vector<QVec> all;
    for (size_t i = 0; i < n; ++i) {
        QVec e(n);
        e[i] = 1;
        all.push_back(e);
    }
    for (const auto& g : gens) all.push_back(g);
    QMat basis = module_row_basis(all);
    if (basis.rows() != n) throw std::invalid_argument("overlattice generators degenerate");
    QMat gram_q = basis * to_rational(l.gram()) * basis.transpose();
    IMat gram;
    try {
        gram = to_integer(gram_q);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("overlattice subgroup is not isotropic: non-integral gram");
    }
    // compose base changes so provenance coordinates stay meaningful
    QMat bc = basis * l.base_change();
    GlueSpec spec = l.provenance() ? *l.provenance() : GlueSpec{l.gram(), {}};
    return Lattice(gram, spec, bc);
}

namespace {

// exact diagonalization of a symmetric rational matrix; returns diagonal values
QVec diagonalize_form(QMat g) {
    size_t n = g.rows();
    QVec out;
    for (size_t c = 0; c < n; ++c) {
        if (g(c, c) == 0) {
            size_t j = c + 1;
            while (j < n && g(c, j) == 0) ++j;
            if (j < n) {
                for (size_t k = 0; k < n; ++k) g(c, k) += g(j, k);
                for (size_t k = 0; k < n; ++k) g(k, c) += g(k, j);
            }
        }
        if (g(c, c) == 0) {
            out.push_back(0);
            continue;
        }
        for (size_t r = c + 1; r < n; ++r) {
            if (g(r, c) == 0) continue;
            Rat f = g(r, c) / g(c, c);
            for (size_t k = 0; k < n; ++k) g(r, k) -= f * g(c, k);
            for (size_t k = 0; k < n; ++k) g(k, r) -= f * g(k, c);
        }
        out.push_back(g(c, c));
    }
    return out;
}

// reduce a nonzero rational to a square-free integer representative of its
// square class
Int square_class(const Rat& q) {
    Int x = q.get_num() * q.get_den();
    Int r = sgn(x);
    for (const Int& p : prime_factors(x)) {
        Int y = abs(x);
        long v = 0;
        while (y % p == 0) {
            y /= p;
            ++v;
        }
        if (v % 2 == 1) r *= p;
    }
    return r;
}

}  // namespace

bool represents_zero(const Lattice& l) {
    if (l.rank() != 3 || !l.is_hyperbolic_rank3())
        throw std::invalid_argument("represents_zero: rank-3 hyperbolic lattice required");
    QVec diag = diagonalize_form(to_rational(l.gram()));
    IVec a(3);
    for (size_t i = 0; i < 3; ++i) a[i] = square_class(diag[i]);
    // indefinite over R by hypothesis; check Q_p for p | 2 a1 a2 a3
    Int prod = 2 * a[0] * a[1] * a[2];
    std::vector<Int> primes = prime_factors(prod);
    for (const Int& p : primes) {
        Rat d = Rat(a[0]) * Rat(a[1]) * Rat(a[2]);
        int eps = hilbert_symbol(Rat(a[0]), Rat(a[1]), p) *
                  hilbert_symbol(Rat(a[0]), Rat(a[2]), p) *
                  hilbert_symbol(Rat(a[1]), Rat(a[2]), p);
        if (eps != hilbert_symbol(Rat(-1), -d, p)) return false;
    }
    return true;
}

}  // namespace refl3
