#pragma once

// Roots (vectors of negative norm whose reflection preserves the lattice),
// reflection matrices, and the root-set transforms that carry a wall system
// to an odd overlattice or to an m-dual lattice.

#include "refl3/discform.hpp"

namespace refl3 {

// alpha != 0, alpha^2 < 0 and alpha^2 | 2t where (alpha, L) = tZ
bool is_root(const Lattice& l, const IVec& a);

// gcd of coordinates is 1
bool is_primitive(const IVec& a);

// t with (alpha, L) = tZ
Int pairing_divisor(const Lattice& l, const IVec& a);

// reflection in alpha as a matrix acting on row coordinate vectors
// (row i is the image of the i-th basis vector); an involution
IMat reflection(const Lattice& l, const IVec& a);

// 2 * exponent of the discriminant group: bounds both the twist lambda such
// that lambda * alpha can stay a root and |alpha^2| for primitive roots
Int twist_bound(const Lattice& l);

// norms a primitive root can have: -k for every divisor k of twist_bound
std::vector<Int> admissible_norms(const Lattice& l);

// all roots alpha with alpha^2 = k and (alpha, p0) = n, for p0 of positive
// norm (the slice is an ellipse: p0-perp is negative definite); sorted
// lexicographically
std::vector<IVec> roots_with(const Lattice& l, const Int& k, const IVec& p0, const Int& n);

// the same slice enumeration with the per-(lattice, base point) setup
// computed once; heights carrying any solution are multiples of stride()
class RootSlicer {
public:
    RootSlicer(const Lattice& l, const IVec& p0);
    const Int& stride() const { return g_; }
    std::vector<IVec> slice(const Int& k, const Int& n) const;

private:
    const Lattice* l_;
    IVec x0_, u_, v_;        // x0_ solves (x, p0) = stride; u_, v_ span p0-perp
    Int g_;                  // gcd of the image of ( . , p0)
    Int a_, b_, cc_, pa_;    // negative definite form on (u_, v_); pa_ = det > 0
    Int d0_, e0_, f0_;       // pairings of u_, v_, x0_ against x0_
};

struct TransformedRoots {
    Lattice lattice;            // the target lattice
    std::vector<IVec> roots;    // in the target's integral basis
    IMat gram;                  // pairwise form of the transformed roots
};

// Carry primitive roots of a main lattice S (odd square-free determinant,
// unique odd overlattice case) to the overlattice of S(2): alpha of odd norm
// is kept, alpha of norm 2 mod 4 becomes alpha/2; the form doubles and
// divides by the halving factors. Every output is checked to be a primitive
// root of the overlattice.
TransformedRoots transform_roots_odd_overlattice(const Lattice& s, const std::vector<IVec>& roots);

// Carry primitive roots of S to the m-dual for m | d: alpha goes to
// alpha / gcd(t, m) with (alpha, S) = tZ, and the form becomes
// (alpha, beta) m / (k_alpha k_beta). Outputs checked as primitive roots.
TransformedRoots transform_roots_m_dual(const Lattice& s, const std::vector<IVec>& roots,
                                        const Int& m);

}  // namespace refl3
