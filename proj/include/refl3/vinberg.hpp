#pragma once

// Fundamental polygons of the reflection group: wall-by-wall acceptance in
// increasing distance from a base point, the finite-area test, and polygon
// symmetries (h and the Weyl vector).

#include "refl3/roots.hpp"

#include <optional>

namespace refl3 {

struct WallRelation {
    enum class Kind { angle, ideal_vertex, divergent };
    Kind kind;
    Rat cos2;  // cos^2 of the dihedral angle; 1 at an ideal vertex, > 1 divergent
};

// compares (d1,d2)^2 against d1^2 d2^2 exactly
WallRelation wall_pair_relation(const Lattice& l, const IVec& d1, const IVec& d2);

struct VinbergBudget {
    // bound on the candidate priority (alpha, p0)^2 / -alpha^2, a monotone
    // proxy for the distance of the mirror to the base point; the default
    // covers every fixture polygon (max observed ~1.2e8) with margin
    Int max_height{250000000};
    size_t max_walls{64};
};

enum class PolygonStatus { finite_area, budget_exhausted };

struct FundamentalPolygon {
    PolygonStatus status = PolygonStatus::budget_exhausted;
    IVec base_point;
    // cyclically ordered around the base point when finite_area, else in
    // acceptance order
    std::vector<IVec> walls;
    IMat gram;
    // consecutive-pair tags (i, i+1 mod n); filled when finite_area
    std::vector<WallRelation> relations;
};

// fundamental chamber of the finite reflection group generated by the
// primitive roots orthogonal to p0; lexicographically least normal set
std::vector<IVec> initial_chamber(const Lattice& l, const IVec& p0);

// true iff the region cut out by the walls around p0 has finite area: every
// vertex of consecutive walls (in the angular cyclic order, into which
// `walls` is reordered) is an ordinary or ideal point lying on the correct
// side of every wall
bool is_finite_area(const Lattice& l, const IVec& p0, std::vector<IVec>& walls);

FundamentalPolygon vinberg_run(const Lattice& l, const IVec& p0, const VinbergBudget& budget = {});

struct PolygonSymmetries {
    std::vector<IMat> group;    // all lattice automorphisms preserving the polygon
    std::vector<IMat> central;  // involutions with trace -1 and a positive-norm fixed vector
    size_t h = 0;               // conjugacy classes of central symmetries
    IVec weyl_vector;           // sum of g(base_point) over the group
};

PolygonSymmetries polygon_symmetries(const Lattice& l, const FundamentalPolygon& p);

struct Classification {
    bool elliptic = false;
    FundamentalPolygon polygon;
    std::optional<PolygonSymmetries> symmetries;  // present iff elliptic
};

// deterministic base point: smallest positive norm in the first coordinate
// box containing one, ties lexicographic
IVec default_base_point(const Lattice& l);

Classification classify_reflective(const Lattice& l, const VinbergBudget& budget = {});

}  // namespace refl3
