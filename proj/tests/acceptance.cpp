// End-to-end acceptance run: one pass/fail line per criterion, nonzero exit
// if any criterion fails. Everything is exact arithmetic; random inputs use
// fixed seeds so the run is deterministic.

#include "refl3/tables.hpp"

#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace refl3;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << ": " << name;
    if (!pass && !detail.empty()) std::cout << " — " << detail;
    std::cout << std::endl;
    if (!pass) ++failures;
}

std::string describe_failures(const std::vector<VerificationReport>& reps) {
    std::ostringstream os;
    for (const VerificationReport& r : reps) {
        if (r.passed()) continue;
        os << " [table " << r.table << " case " << r.index << ":";
        for (const CheckResult& c : r.checks)
            if (!c.pass) os << " " << c.name;
        os << "]";
    }
    return os.str();
}

std::set<Int> noncompact_determinants(const std::vector<TableCase>& rows) {
    std::set<Int> out;
    for (const TableCase& c : rows)
        if (represents_zero(parse_lattice_symbol(c.symbol))) out.insert(c.d);
    return out;
}

std::set<Int> int_set(std::initializer_list<long> xs) {
    std::set<Int> out;
    for (long x : xs) out.insert(Int(x));
    return out;
}

const TableCase* find_by_invariants(const std::vector<TableCase>& rows, const Int& d,
                                    const Int& eta) {
    for (const TableCase& c : rows)
        if (c.d == d && c.eta == eta) return &c;
    return nullptr;
}

// 1. every row of the 122-case table passes all recomputed checks and the
//    list of determinants with isotropic vectors comes out exactly right
void criterion1(const Fixtures& fx) {
    std::vector<VerificationReport> reps;
    for (const TableCase& c : fx.t1) reps.push_back(verify_case(fx, c));
    size_t passed = 0;
    for (const VerificationReport& r : reps) passed += r.passed();
    bool all = passed == 122 && fx.t1.size() == 122;
    std::set<Int> nc = noncompact_determinants(fx.t1);
    std::set<Int> expect = int_set({1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 21, 22, 26, 30, 33,
                                    34, 38, 42, 66, 78, 110});
    std::ostringstream detail;
    detail << passed << "/122 rows verified" << describe_failures(reps);
    if (nc != expect) detail << "; non-compact determinant list mismatch (" << nc.size() << ")";
    criterion(1, "table 1 fully verified, 23 non-compact determinants reproduced",
              all && nc == expect, detail.str());
}

// 2. the 38 doubled-lattice rows verify, the mod-8 equivalence criterion
//    splits them 21/17 matching the printed annotations, and the 10
//    non-compact determinants come out exactly right
void criterion2(const Fixtures& fx) {
    std::vector<VerificationReport> reps;
    for (const TableCase& c : fx.t2) reps.push_back(verify_case(fx, c));
    size_t passed = 0;
    for (const VerificationReport& r : reps) passed += r.passed();
    size_t equivalent = 0, with_roots = 0;
    bool split_consistent = true;
    for (const TableCase& c : fx.t2) {
        if (!c.equiv_ref) {
            split_consistent = false;
            continue;
        }
        bool eq = equivariantly_equivalent(c.equiv_ref->first, c.equiv_ref->second);
        equivalent += eq;
        with_roots += c.roots.has_value();
        if (eq != !c.roots.has_value()) split_consistent = false;
    }
    std::set<Int> nc = noncompact_determinants(fx.t2);
    std::set<Int> expect = int_set({2, 6, 10, 14, 22, 26, 30, 34, 42, 66});
    bool ok = passed == 38 && fx.t2.size() == 38 && equivalent == 21 && with_roots == 17 &&
              split_consistent && nc == expect;
    std::ostringstream detail;
    detail << passed << "/38 rows verified, split " << equivalent << "/" << with_roots
           << describe_failures(reps);
    criterion(2, "table 2 verified with the 21/17 equivalence split and 10 non-compact "
                 "determinants", ok, detail.str());
}

// 3. the 206-row table is consistent; rows marked nr never close a polygon
//    within an explicit reduced budget (their non-reflectivity is out of
//    scope for direct computation, so this is a sanity bound, not a proof)
void criterion3(const Fixtures& fx) {
    std::vector<VerificationReport> reps;
    for (const TableCase& c : fx.t3) reps.push_back(verify_case(fx, c));
    size_t passed = 0;
    for (const VerificationReport& r : reps) passed += r.passed();

    std::set<std::pair<std::string, std::string>> er;
    for (const TableCase& c : fx.t3)
        if (c.marker && *c.marker == "er")
            er.insert({c.d.get_str(), c.eta.get_str()});
    bool t1_covered = true;
    for (const TableCase& c : fx.t1)
        if (!er.count({c.d.get_str(), c.eta.get_str()})) t1_covered = false;

    size_t nr_total = 0, nr_open = 0;
    VinbergBudget reduced{Int(1000000), 64};
    for (const TableCase& c : fx.t3) {
        if (!c.marker || *c.marker != "nr") continue;
        ++nr_total;
        Classification cls = classify_reflective(parse_lattice_symbol(c.symbol), reduced);
        if (!cls.elliptic) ++nr_open;
    }
    std::cout << "  note: " << nr_open << "/" << nr_total
              << " rows marked nr exhausted the reduced search budget without closing"
              << std::endl;
    bool ok = passed == 206 && fx.t3.size() == 206 && t1_covered && nr_open == nr_total;
    std::ostringstream detail;
    detail << passed << "/206 rows verified" << describe_failures(reps);
    if (!t1_covered) detail << "; a table 1 invariant pair is missing the er marker";
    criterion(3, "table 3 consistent, every table 1 pair marked er, nr rows never close", ok,
              detail.str());
}

// 4. m-duality over every table 1 lattice and every divisor m of d:
//    determinant d*m, double dual isometric to the original, composition
//    across random coprime divisor pairs, 2^t distinct duals, and the
//    transformed wall systems are primitive roots of the dual
void criterion4(const Fixtures& fx) {
    std::mt19937 rng(20250826);
    std::string detail;
    bool ok = true;
    auto fail = [&](const TableCase& c, const std::string& what) {
        ok = false;
        if (detail.empty()) detail = "case " + std::to_string(c.index) + ": " + what;
    };
    for (const TableCase& c : fx.t1) {
        Lattice l = parse_lattice_symbol(c.symbol);
        std::vector<IVec> roots = integral_roots(l, *c.roots);
        std::vector<Int> divisors;
        for (Int m = 1; m <= c.d; ++m)
            if (mod(c.d, m) == 0) divisors.push_back(m);
        std::set<Int> dual_dets;
        for (const Int& m : divisors) {
            Lattice f = m_dual(l, m);
            if (abs(f.determinant()) != c.d * m) fail(c, "dual determinant");
            dual_dets.insert(abs(f.determinant()));

            // double dual: the composed base change rescaled by m must be a
            // unimodular integral isometry back onto the original gram
            Lattice ff = m_dual(f, m);
            QMat comp = ff.base_change() * f.base_change();
            for (size_t i = 0; i < comp.rows(); ++i)
                for (size_t j = 0; j < comp.cols(); ++j) comp(i, j) *= Rat(m);
            IMat t = to_integer(comp);
            if (abs(det(t)) != 1 ||
                to_rational(t) * to_rational(l.gram()) * to_rational(t).transpose() !=
                    to_rational(ff.gram()))
                fail(c, "double dual is not the original lattice");

            TransformedRoots tr = transform_roots_m_dual(l, roots, m);
            if (tr.roots.size() != roots.size()) fail(c, "dual root count");
            for (const IVec& r : tr.roots)
                if (!is_primitive(r) || !is_root(tr.lattice, r)) fail(c, "dual root validity");
        }
        size_t t = prime_factors(c.d).size();
        if (dual_dets.size() != divisors.size() || divisors.size() != (size_t{1} << t))
            fail(c, "dual count is not 2^t");

        // composition across a random coprime divisor pair
        std::uniform_int_distribution<size_t> pick(0, divisors.size() - 1);
        for (int attempt = 0; attempt < 20; ++attempt) {
            Int m1 = divisors[pick(rng)], m2 = divisors[pick(rng)];
            if (m1 == 1 || m2 == 1 || gcd(m1, m2) != 1) continue;
            Lattice f1 = m_dual(l, m1);
            Lattice f12 = m_dual(f1, m2);
            Lattice g = m_dual(l, m1 * m2);
            QMat chain = f12.base_change() * f1.base_change();
            QMat x = chain * inverse(g.base_change());
            IMat xi = to_integer(x);
            if (abs(det(xi)) != 1 ||
                to_rational(xi) * to_rational(g.gram()) * to_rational(xi).transpose() !=
                    to_rational(f12.gram()))
                fail(c, "duality does not compose across coprime divisors");
            break;
        }
    }
    criterion(4, "m-duality involution, composition, determinants, 2^t count and root "
                 "transport over all table 1 cases", ok, detail);
}

// 5. for the 21 equivalence-marked table 2 rows, the paired table 1 wall
//    system moves to the doubled lattice's odd overlattice as primitive
//    roots with the printed header invariants
void criterion5(const Fixtures& fx) {
    bool ok = true;
    std::string detail;
    size_t done = 0;
    for (const TableCase& c : fx.t2) {
        if (c.roots) continue;  // only the equivalence-marked rows
        const TableCase* main =
            c.equiv_ref ? find_by_invariants(fx.t1, c.equiv_ref->first, c.equiv_ref->second)
                        : nullptr;
        if (!main || !main->roots) {
            ok = false;
            detail = "case " + std::to_string(c.index) + ": missing paired table 1 row";
            continue;
        }
        Lattice s = parse_lattice_symbol(main->symbol);
        std::vector<IVec> roots = integral_roots(s, *main->roots);
        try {
            TransformedRoots tr = transform_roots_odd_overlattice(s, roots);
            for (const IVec& r : tr.roots)
                if (!is_primitive(r) || !is_root(tr.lattice, r)) ok = false;
            InvariantTriple inv = invariant_triple(tr.lattice);
            if (inv.d != c.d || inv.type != c.type || inv.eta_code() != c.eta) {
                ok = false;
                detail = "case " + std::to_string(c.index) + ": overlattice invariants differ";
            }
            ++done;
        } catch (const std::exception& e) {
            ok = false;
            detail = "case " + std::to_string(c.index) + ": " + e.what();
        }
    }
    criterion(5, "odd-overlattice root transport for all 21 equivalence-marked table 2 rows",
              ok && done == 21, detail);
}

// 6. fast property sweeps: reflections, Smith form round-trips, the Hilbert
//    product formula, glued-lattice torsion pairings, and a brute-force
//    isotropic search against the local-global test
void criterion6(const Fixtures& fx) {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    auto fail = [&](const std::string& what) {
        ok = false;
        if (detail.empty()) detail = what;
    };

    // reflections in every fixture root are involutive isometries
    for (const std::vector<TableCase>* rows : {&fx.t1, &fx.t2}) {
        for (const TableCase& c : *rows) {
            if (!c.roots) continue;
            Lattice l = parse_lattice_symbol(c.symbol);
            for (const IVec& a : integral_roots(l, *c.roots)) {
                IMat r = reflection(l, a);
                if (r * r != IMat::identity(3)) fail("reflection is not an involution");
                if (to_rational(r) * to_rational(l.gram()) * to_rational(r).transpose() !=
                    to_rational(l.gram()))
                    fail("reflection does not preserve the form");
            }
        }
    }

    // Smith normal form round-trip on random matrices
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> entry(-20, 20);
    for (int trial = 0; trial < 1000; ++trial) {
        IMat m(3, 3);
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) m(i, j) = entry(rng);
        SmithForm s = smith_normal_form(m);
        if (s.u * m * s.v != s.d || abs(det(s.u)) != 1 || abs(det(s.v)) != 1)
            fail("Smith form round-trip");
        for (size_t i = 0; i + 1 < 3; ++i)
            if (s.d(i + 1, i + 1) != 0 && (s.d(i, i) == 0 || s.d(i + 1, i + 1) % s.d(i, i) != 0))
                fail("Smith form divisibility chain");
    }

    // Hilbert symbol product formula over all places
    std::uniform_int_distribution<int> hil(-30, 30);
    for (int done = 0; done < 200;) {
        Int a = hil(rng), b = hil(rng);
        if (a == 0 || b == 0) continue;
        ++done;
        int prod = hilbert_symbol(Rat(a), Rat(b), 0);
        for (const Int& p : prime_factors(2 * abs(a * b))) prod *= hilbert_symbol(Rat(a), Rat(b), p);
        if (prod != 1) fail("Hilbert product formula");
    }

    // glued lattices: the torsion pairing restricts from the base lattice
    for (const std::vector<TableCase>* rows : {&fx.t1, &fx.t2, &fx.t3}) {
        for (const TableCase& c : *rows) {
            if (c.symbol.find('(') == std::string::npos) continue;
            Lattice l = parse_lattice_symbol(c.symbol);
            Lattice base(l.provenance()->base_gram);
            DiscriminantData dg = discriminant_group(l);
            auto to_base = [&](const QVec& x) {
                QVec out(x.size(), Rat(0));
                for (size_t i = 0; i < x.size(); ++i)
                    for (size_t j = 0; j < x.size(); ++j) out[j] += x[i] * l.base_change()(i, j);
                return out;
            };
            for (const QVec& x : dg.generator_lifts)
                for (const QVec& y : dg.generator_lifts)
                    if (disc_bilinear(l, x, y) !=
                        mod_reduce(disc_bilinear(base, to_base(x), to_base(y)), Rat(1)))
                        fail("glued torsion pairing does not restrict");
        }
    }

    // brute-force isotropic vectors agree with the local-global test
    for (const TableCase& c : fx.t1) {
        Lattice l = parse_lattice_symbol(c.symbol);
        long g[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g[i][j] = l.gram()(i, j).get_si();
        bool found = false;
        for (long x = 0; x <= 50 && !found; ++x)
            for (long y = -50; y <= 50 && !found; ++y)
                for (long z = -50; z <= 50; ++z) {
                    if (x == 0 && y == 0 && z == 0) continue;
                    long n = g[0][0] * x * x + g[1][1] * y * y + g[2][2] * z * z +
                             2 * (g[0][1] * x * y + g[0][2] * x * z + g[1][2] * y * z);
                    if (n == 0) {
                        found = true;
                        break;
                    }
                }
        if (found != represents_zero(l)) fail("isotropic search disagrees on d=" + c.d.get_str());
    }

    auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    if (secs >= 120) fail("property sweep took " + std::to_string(secs) + "s (budget 120s)");
    criterion(6, "property sweeps (reflections, Smith form, Hilbert symbols, glue, isotropy) "
                 "within the time budget", ok, detail);
}

// 7. every lattice the tool classifies as closing a finite-area polygon has
//    at most one class of central symmetries
void criterion7(const Fixtures& fx) {
    bool ok = true;
    std::string detail;
    size_t elliptic = 0;
    for (const std::vector<TableCase>* rows : {&fx.t1, &fx.t2}) {
        for (const TableCase& c : *rows) {
            Classification cls = classify_reflective(parse_lattice_symbol(c.symbol));
            if (!cls.elliptic) continue;
            ++elliptic;
            if (!cls.symmetries || cls.symmetries->h > 1) {
                ok = false;
                if (detail.empty())
                    detail = "table " + std::to_string(c.table) + " case " +
                             std::to_string(c.index) + " has h > 1";
            }
        }
    }
    std::cout << "  note: " << elliptic << "/160 rows classified as finite-area polygons"
              << std::endl;
    criterion(7, "h <= 1 for every lattice classified as closing a polygon", ok && elliptic > 0,
              detail);
}

}  // namespace

int main() {
    Fixtures fx = Fixtures::load();
    criterion1(fx);
    criterion2(fx);
    criterion3(fx);
    criterion4(fx);
    criterion5(fx);
    criterion6(fx);
    criterion7(fx);
    std::cout << (7 - failures) << "/7 criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
