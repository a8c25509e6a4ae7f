#pragma once

// Integral lattices with a chosen integral basis, built from text symbols
// like "U + <-3>" or "<1> + <-10> + <-2> (0,1/2,1/2)".

#include "refl3/arith.hpp"

#include <optional>
#include <string>

namespace refl3 {

// Overlattice description: orthogonal-sum base plus glue generators given
// as rational coordinate tuples w.r.t. the base basis.
struct GlueSpec {
    IMat base_gram;
    std::vector<QVec> glue_vectors;
};

enum class Parity { even, odd };

class Lattice {
public:
    Lattice() = default;
    explicit Lattice(IMat gram);
    // gram on the integral basis; base_change rows express that basis in the
    // coordinates of provenance.base_gram.
    Lattice(IMat gram, GlueSpec provenance, QMat base_change);

    size_t rank() const { return gram_.rows(); }
    const IMat& gram() const { return gram_; }
    const std::optional<GlueSpec>& provenance() const { return provenance_; }
    // integral basis in base(symbol) coordinates; identity when no glue
    const QMat& base_change() const { return base_change_; }

    Int determinant() const;
    Parity parity() const;
    bool is_hyperbolic_rank3() const;  // signature (1,2)

    // pairing of integer coordinate vectors
    Int pair(const IVec& x, const IVec& y) const { return pair_with(gram_, x, y); }
    Int norm(const IVec& x) const { return pair(x, x); }

    // map coordinates w.r.t. the provenance base basis to the integral basis;
    // throws if the vector is not in the lattice
    IVec from_base_coords(const QVec& v) const;

    bool operator==(const Lattice& o) const { return gram_ == o.gram_; }

private:
    IMat gram_;
    std::optional<GlueSpec> provenance_;
    QMat base_change_;
};

// Grammar:  symbol := term ("+" term)* glue?
//           term   := "U" | "<" integer ">"
//           glue   := "(" rat ("," rat)* ")" ...
Lattice parse_lattice_symbol(const std::string& text);

Lattice rescale(const Lattice& l, const Rat& r);

// rows express a basis of L* in L-coordinates (= gram^{-1})
QMat dual_basis(const Lattice& l);

struct SublatticeResult {
    Lattice lattice;
    IMat embedding;  // rows: sublattice basis in L-coordinates
};

// maximal even sublattice {x : x^2 even} of an odd lattice
SublatticeResult even_sublattice(const Lattice& l);

// overlattice generated by L and rational coordinate vectors in L*;
// checks isotropy (integrality of the resulting gram)
Lattice overlattice(const Lattice& l, const std::vector<QVec>& gens);

// Hasse-Minkowski local test for a nonzero isotropic vector, rank 3 indefinite.
bool represents_zero(const Lattice& l);

// Build a lattice basis for the Z-module spanned by rational row vectors
// (full rank required); returns basis rows, entries rational.
QMat module_row_basis(const std::vector<QVec>& gens);

}  // namespace refl3
