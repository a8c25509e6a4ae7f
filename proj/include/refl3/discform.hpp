#pragma once

// Discriminant groups A_L = L*/L with their torsion forms, elementarization,
// m-duality and the (d, type, eta) invariants that pin down a rank-3 lattice
// with square-free determinant inside its genus.

#include "refl3/lattice.hpp"

#include <map>

namespace refl3 {

struct DiscriminantData {
    std::vector<Int> invariant_factors;  // d1 | d2 | ..., 1s dropped
    std::vector<QVec> generator_lifts;   // in L-coordinates, one per factor
    Int order;                           // |det L|

    Int exponent() const { return invariant_factors.empty() ? Int(1) : invariant_factors.back(); }
};

DiscriminantData discriminant_group(const Lattice& l);

// b_L(x, y) in Q/Z, canonical representative in [0, 1). x, y given in
// L-coordinates (rational; must lie in L*).
Rat disc_bilinear(const Lattice& l, const QVec& x, const QVec& y);

// q_L(x) in Q/2Z, canonical representative in [0, 2). L must be even.
Rat disc_quadratic(const Lattice& l, const QVec& x);

std::map<Int, size_t> p_invariants(const Lattice& l);
bool is_elementary(const Lattice& l);

struct ElementarizeResult {
    Lattice result;
    std::vector<Lattice> chain;  // intermediate overlattices, input first
};

// Glue H_p = p^{t_p - 1} A_p for every p with exponent t_p > 1 until
// elementary.
ElementarizeResult elementarize(const Lattice& l);

// (L* intersect (1/m)L)(m) for square-free m; an involution on elementary
// lattices. The result's base_change() rows express its basis in
// L-coordinates (the form is additionally scaled by m).
Lattice m_dual(const Lattice& l, const Int& m);

struct InvariantTriple {
    Int d;  // |det|, square-free
    Parity type;
    std::vector<int> eta_bits;  // one per odd prime divisor of d, ascending

    Int eta_code() const {
        Int c = 0;
        for (size_t i = 0; i < eta_bits.size(); ++i)
            if (eta_bits[i]) c += Int(1) << i;
        return c;
    }
    bool operator==(const InvariantTriple& o) const {
        return d == o.d && type == o.type && eta_bits == o.eta_bits;
    }
};

InvariantTriple invariant_triple(const Lattice& l);

// bit (p^2 - 1)/8 mod 2 per odd prime p | d, ascending order
std::vector<int> omega(const Int& d);

// true iff sum over p | d of (1 - p + 4 eta_p + 4 omega_p) == 0 or 6 mod 8
bool equivariantly_equivalent(const Int& d, const std::vector<int>& eta_bits);
bool equivariantly_equivalent(const Int& d, const Int& eta_code);

std::vector<int> eta_bits_from_code(const Int& d, const Int& code);

// All index-2 odd overlattices of S(2) for a main S (odd square-free
// determinant, either parity): one per element w of the 2-part of A_{S(2)}
// with q(w) = 1 mod 2Z.
std::vector<Lattice> odd_overlattices(const Lattice& s);

}  // namespace refl3
