#include "refl3/vinberg.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace refl3 {

namespace {

IVec cross3(const IVec& a, const IVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool is_zero(const IVec& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

struct Dir2 {  // ray in the plane orthogonal to the base point
    Int x, y;
};

int half_of(const Dir2& d) { return (d.y > 0 || (d.y == 0 && d.x > 0)) ? 0 : 1; }

Int cross2(const Dir2& a, const Dir2& b) { return a.x * b.y - a.y * b.x; }

// strict counterclockwise order starting at the positive x-axis
bool angle_less(const Dir2& a, const Dir2& b) {
    int ha = half_of(a), hb = half_of(b);
    if (ha != hb) return ha < hb;
    return cross2(a, b) > 0;
}

Dir2 primitive_dir(Dir2 d) {
    Int g = gcd(d.x, d.y);
    return {d.x / g, d.y / g};
}

// coordinates of the plane orthogonal to p0
struct Plane {
    IMat m;      // column_reduce_unimodular(gram p0); rows 1,2 span p0-perp
    QMat minv;
    IMat gram2;  // negative definite form on those rows

    Plane(const Lattice& l, const IVec& p0) {
        m = column_reduce_unimodular(row_times(p0, l.gram()));
        minv = inverse(m);
        IVec u = m.row(1), v = m.row(2);
        gram2 = IMat{{pair_with(l.gram(), u, u), pair_with(l.gram(), u, v)},
                     {pair_with(l.gram(), v, u), pair_with(l.gram(), v, v)}};
    }

    // exact coordinates of the projection of a to the plane, up to the
    // positive factor p0^2
    Dir2 project(const Lattice& l, const IVec& p0, const IVec& a) const {
        Int n = l.norm(p0), h = l.pair(a, p0);
        QVec q(3);
        for (size_t i = 0; i < 3; ++i) q[i] = Rat(a[i] * n - h * p0[i]);
        QVec z = row_times(q, minv);
        if (z[0] != 0 || !is_integer(z[1]) || !is_integer(z[2]))
            throw std::logic_error("projection left the orthogonal plane");
        return {z[1].get_num(), z[2].get_num()};
    }

    Int form2(const Dir2& a, const Dir2& b) const {
        return a.x * (gram2(0, 0) * b.x + gram2(0, 1) * b.y) +
               a.y * (gram2(1, 0) * b.x + gram2(1, 1) * b.y);
    }

    // direction of the mirror line of a root with plane coordinates z
    Dir2 mirror_dir(const Dir2& z) const {
        Dir2 gz{gram2(0, 0) * z.x + gram2(0, 1) * z.y, gram2(1, 0) * z.x + gram2(1, 1) * z.y};
        return {-gz.y, gz.x};
    }
};

IMat gram_of(const Lattice& l, const std::vector<IVec>& walls) {
    IMat g(walls.size(), walls.size());
    for (size_t i = 0; i < walls.size(); ++i)
        for (size_t j = 0; j < walls.size(); ++j) g(i, j) = l.pair(walls[i], walls[j]);
    return g;
}

}  // namespace

WallRelation wall_pair_relation(const Lattice& l, const IVec& d1, const IVec& d2) {
    if (is_zero(cross3(d1, d2))) throw std::invalid_argument("walls are proportional");
    Int c = l.pair(d1, d2);
    Rat cos2 = Rat(c * c) / Rat(l.norm(d1) * l.norm(d2));
    if (cos2 < 1) return {WallRelation::Kind::angle, cos2};
    if (cos2 == 1) return {WallRelation::Kind::ideal_vertex, cos2};
    return {WallRelation::Kind::divergent, cos2};
}

std::vector<IVec> initial_chamber(const Lattice& l, const IVec& p0) {
    if (l.norm(p0) <= 0) throw std::invalid_argument("base point must have positive norm");
    std::vector<IVec> roots;
    for (const Int& k : admissible_norms(l))
        for (const IVec& a : roots_with(l, k, p0, 0))
            if (is_primitive(a)) roots.push_back(a);
    if (roots.empty()) return {};

    Plane pl(l, p0);
    std::vector<Dir2> coords;
    for (const IVec& a : roots) coords.push_back(pl.project(l, p0, a));

    // distinct mirror rays, angularly sorted
    std::vector<Dir2> rays;
    for (const Dir2& z : coords) {
        Dir2 d = primitive_dir(pl.mirror_dir(z));
        for (const Dir2& cand : {d, Dir2{-d.x, -d.y}}) {
            bool seen = false;
            for (const Dir2& r : rays)
                if (r.x == cand.x && r.y == cand.y) seen = true;
            if (!seen) rays.push_back(cand);
        }
    }
    std::sort(rays.begin(), rays.end(), angle_less);

    // normal set of the sector between two boundary directions: on each
    // bounding mirror take the root facing the sector interior
    auto sector_normals = [&](const Dir2& r1, const Dir2& r2) -> std::vector<IVec> {
        Dir2 interior{r1.x + r2.x, r1.y + r2.y};
        std::vector<IVec> out;
        for (const Dir2& r : {r1, r2}) {
            for (size_t i = 0; i < roots.size(); ++i) {
                if (cross2(pl.mirror_dir(coords[i]), r) != 0) continue;
                if (pl.form2(coords[i], interior) > 0) {
                    out.push_back(roots[i]);
                    break;
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    std::vector<std::vector<IVec>> candidates;
    if (rays.size() == 2) {
        // a single mirror: the chamber is a half-plane on either side
        for (size_t i = 0; i < roots.size(); ++i) candidates.push_back({roots[i]});
    } else {
        for (size_t i = 0; i < rays.size(); ++i)
            candidates.push_back(sector_normals(rays[i], rays[(i + 1) % rays.size()]));
    }
    return *std::min_element(candidates.begin(), candidates.end());
}

bool is_finite_area(const Lattice& l, const IVec& p0, std::vector<IVec>& walls) {
    if (walls.size() < 3) throw std::invalid_argument("need at least three walls");
    Plane pl(l, p0);
    std::vector<size_t> idx(walls.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<Dir2> coords;
    for (const IVec& a : walls) coords.push_back(pl.project(l, p0, a));
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        const Dir2 &da = coords[a], &db = coords[b];
        if (cross2(da, db) == 0 && da.x * db.x + da.y * db.y > 0)
            return walls[a] < walls[b];  // same-ray stacked walls: deterministic
        return angle_less(da, db);
    });

    std::vector<IVec> ordered;
    for (size_t i : idx) ordered.push_back(walls[i]);
    size_t n = ordered.size();
    for (size_t i = 0; i < n; ++i) {
        const IVec& a = ordered[i];
        const IVec& b = ordered[(i + 1) % n];
        IVec v = cross3(row_times(a, l.gram()), row_times(b, l.gram()));
        if (is_zero(v)) return false;  // proportional normals cannot close
        Int side = l.pair(v, p0);
        if (side == 0) return false;  // vertex direction in p0-perp is negative
        if (side < 0)
            for (Int& x : v) x = -x;
        if (l.norm(v) < 0) return false;  // walls diverge
        for (const IVec& w : ordered)
            if (l.pair(v, w) < 0) return false;  // vertex cut off by another wall
    }
    // canonical start: lexicographically least wall first
    size_t start = 0;
    for (size_t i = 1; i < n; ++i)
        if (ordered[i] < ordered[start]) start = i;
    std::rotate(ordered.begin(), ordered.begin() + start, ordered.end());
    walls = ordered;
    return true;
}

FundamentalPolygon vinberg_run(const Lattice& l, const IVec& p0, const VinbergBudget& budget) {
    if (!l.is_hyperbolic_rank3()) throw std::invalid_argument("rank-3 hyperbolic lattice required");
    if (l.norm(p0) <= 0) throw std::invalid_argument("base point must have positive norm");
    if (budget.max_height <= 0 || budget.max_walls == 0)
        throw std::invalid_argument("budget must be positive");

    FundamentalPolygon out;
    out.base_point = p0;
    out.walls = initial_chamber(l, p0);

    auto finish_if_closed = [&]() -> bool {
        if (out.walls.size() < 3) return false;
        std::vector<IVec> ordered = out.walls;
        if (!is_finite_area(l, p0, ordered)) return false;
        out.walls = ordered;
        out.status = PolygonStatus::finite_area;
        out.gram = gram_of(l, out.walls);
        for (size_t i = 0; i < out.walls.size(); ++i)
            out.relations.push_back(
                wall_pair_relation(l, out.walls[i], out.walls[(i + 1) % out.walls.size()]));
        return true;
    };

    // candidates in increasing distance: priority (alpha, p0)^2 / -alpha^2;
    // only heights divisible by the slicer stride carry solutions
    RootSlicer slicer(l, p0);
    const Int g = slicer.stride();
    std::vector<Int> norm_abs;
    for (const Int& k : admissible_norms(l)) norm_abs.push_back(-k);
    std::vector<Int> height(norm_abs.size(), g);

    while (true) {
        size_t pick = norm_abs.size();
        for (size_t i = 0; i < norm_abs.size(); ++i) {
            if (height[i] * height[i] > budget.max_height * norm_abs[i]) continue;
            if (pick == norm_abs.size() ||
                height[i] * height[i] * norm_abs[pick] < height[pick] * height[pick] * norm_abs[i])
                pick = i;
        }
        if (pick == norm_abs.size()) break;  // every class exhausted its height budget
        const Int n = height[pick];
        height[pick] += g;
        for (const IVec& a : slicer.slice(-norm_abs[pick], n)) {
            if (!is_primitive(a)) continue;
            bool ok = true;
            for (const IVec& w : out.walls)
                if (l.pair(a, w) < 0) ok = false;
            if (!ok) continue;
            if (out.walls.size() + 1 > budget.max_walls) {
                out.gram = gram_of(l, out.walls);
                return out;  // budget_exhausted
            }
            out.walls.push_back(a);
            if (finish_if_closed()) return out;
        }
    }
    out.gram = gram_of(l, out.walls);
    return out;  // budget_exhausted (height exhausted)
}

PolygonSymmetries polygon_symmetries(const Lattice& l, const FundamentalPolygon& p) {
    if (p.status != PolygonStatus::finite_area)
        throw std::invalid_argument("symmetries need a finite-area polygon");
    size_t n = p.walls.size();
    // an independent wall triple to solve the linear map
    size_t i1 = 0, i2 = 1, i3 = 2;
    bool found = false;
    for (size_t a = 0; a < n && !found; ++a)
        for (size_t b = a + 1; b < n && !found; ++b)
            for (size_t c = b + 1; c < n && !found; ++c) {
                IMat w(3, 3);
                w.set_row(0, p.walls[a]);
                w.set_row(1, p.walls[b]);
                w.set_row(2, p.walls[c]);
                if (det(w) != 0) {
                    i1 = a, i2 = b, i3 = c;
                    found = true;
                }
            }
    if (!found) throw std::logic_error("polygon walls do not span");
    IMat w(3, 3);
    w.set_row(0, p.walls[i1]);
    w.set_row(1, p.walls[i2]);
    w.set_row(2, p.walls[i3]);
    QMat winv = inverse(w);

    PolygonSymmetries out;
    auto try_relabeling = [&](auto pi) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (p.gram(pi(i), pi(j)) != p.gram(i, j)) return;
        QMat wp(3, 3);
        for (size_t r = 0; r < 3; ++r) {
            const IVec& t = p.walls[pi(r == 0 ? i1 : r == 1 ? i2 : i3)];
            for (size_t c = 0; c < 3; ++c) wp(r, c) = t[c];
        }
        QMat mq = winv * wp;
        IMat m;
        try {
            m = to_integer(mq);
        } catch (const std::invalid_argument&) {
            return;
        }
        for (size_t i = 0; i < n; ++i)
            if (row_times(p.walls[i], m) != p.walls[pi(i)]) return;
        if (m * l.gram() * m.transpose() != l.gram()) return;
        if (l.pair(row_times(p.base_point, m), p.base_point) <= 0) return;
        if (std::find(out.group.begin(), out.group.end(), m) == out.group.end())
            out.group.push_back(m);
    };
    for (size_t s = 0; s < n; ++s) {
        try_relabeling([&](size_t i) { return (i + s) % n; });
        try_relabeling([&](size_t i) { return (s + n - i % n) % n; });
    }

    for (const IMat& m : out.group) {
        if (m == IMat::identity(3)) continue;
        if (m * m != IMat::identity(3)) continue;
        if (m(0, 0) + m(1, 1) + m(2, 2) != -1) continue;
        // fixed line: cross product of two independent columns of m - I
        IMat d = m;
        for (size_t i = 0; i < 3; ++i) d(i, i) -= 1;
        IVec c0 = {d(0, 0), d(1, 0), d(2, 0)};
        IVec c1 = {d(0, 1), d(1, 1), d(2, 1)};
        IVec c2 = {d(0, 2), d(1, 2), d(2, 2)};
        IVec f = cross3(c0, c1);
        if (is_zero(f)) f = cross3(c0, c2);
        if (is_zero(f)) f = cross3(c1, c2);
        if (is_zero(f)) throw std::logic_error("degenerate involution");
        if (l.norm(f) > 0) out.central.push_back(m);
    }

    // conjugacy classes of central symmetries inside the full group
    std::vector<bool> classed(out.central.size(), false);
    for (size_t i = 0; i < out.central.size(); ++i) {
        if (classed[i]) continue;
        ++out.h;
        for (const IMat& g : out.group) {
            IMat conj = to_integer(inverse(g)) * out.central[i] * g;
            for (size_t j = 0; j < out.central.size(); ++j)
                if (out.central[j] == conj) classed[j] = true;
        }
    }

    out.weyl_vector = IVec(3);
    for (const IMat& g : out.group) {
        IVec img = row_times(p.base_point, g);
        for (size_t i = 0; i < 3; ++i) out.weyl_vector[i] += img[i];
    }
    return out;
}

IVec default_base_point(const Lattice& l) {
    for (int box = 1; box <= 64; ++box) {
        bool have = false;
        Int best_norm = 0;
        IVec best;
        for (int a = -box; a <= box; ++a)
            for (int b = -box; b <= box; ++b)
                for (int c = -box; c <= box; ++c) {
                    IVec v{a, b, c};
                    Int nn = l.norm(v);
                    if (nn <= 0) continue;
                    if (!have || nn < best_norm || (nn == best_norm && v < best)) {
                        have = true;
                        best_norm = nn;
                        best = v;
                    }
                }
        if (have) return best;
    }
    throw std::logic_error("no positive-norm vector found");
}

Classification classify_reflective(const Lattice& l, const VinbergBudget& budget) {
    Classification out;
    out.polygon = vinberg_run(l, default_base_point(l), budget);
    out.elliptic = out.polygon.status == PolygonStatus::finite_area;
    if (out.elliptic) out.symmetries = polygon_symmetries(l, out.polygon);
    return out;
}

}  // namespace refl3
