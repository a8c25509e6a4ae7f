#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "refl3/tables.hpp"

#include <fstream>
#include <set>

using namespace refl3;

namespace {

const Fixtures& fixtures() {
    static Fixtures fx = Fixtures::load();
    return fx;
}

const TableCase& find_case(const std::vector<TableCase>& t, int index) {
    for (const TableCase& c : t)
        if (c.index == index) return c;
    throw std::out_of_range("no such case");
}

std::string failures(const VerificationReport& r) {
    std::string out;
    for (const CheckResult& c : r.checks)
        if (!c.pass) out += c.name + " (" + c.detail + "); ";
    return out;
}

}  // namespace

TEST_CASE("fixture loading") {
    const Fixtures& fx = fixtures();
    CHECK(fx.t1.size() == 122);
    CHECK(fx.t2.size() == 38);
    CHECK(fx.t3.size() == 206);

    size_t without_roots = 0;
    for (const TableCase& c : fx.t2)
        if (!c.roots) ++without_roots;
    CHECK(without_roots == 21);

    SUBCASE("every case carries the required keys") {
        for (const TableCase& c : fx.t1) {
            CHECK(c.table == 1);
            CHECK(c.roots.has_value());
            CHECK(c.gram.has_value());
            CHECK(c.h.has_value());
            CHECK(c.roots->size() == c.gram->rows());
        }
        for (const TableCase& c : fx.t2) CHECK(c.equiv_ref.has_value());
        for (const TableCase& c : fx.t3) {
            REQUIRE(c.marker.has_value());
            CHECK((*c.marker == "er" || *c.marker == "pr" || *c.marker == "hr" ||
                   *c.marker == "nr"));
        }
    }

    SUBCASE("indices are sequential") {
        for (size_t i = 0; i < fx.t1.size(); ++i) CHECK(fx.t1[i].index == int(i) + 1);
        for (size_t i = 0; i < fx.t3.size(); ++i) CHECK(fx.t3[i].index == int(i) + 1);
    }

    SUBCASE("missing directory") { CHECK_THROWS_AS(load_fixtures(1, "/nonexistent"), std::runtime_error); }

    SUBCASE("parse errors carry a line number") {
        std::ofstream("/tmp/table1.fix") << "[case]\ntable = 1\nbogus-line\n";
        try {
            load_fixtures(1, "/tmp");
            FAIL("expected a parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(":3:") != std::string::npos);
        }
    }

    SUBCASE("count mismatch is rejected") {
        std::ofstream("/tmp/table2.fix") << "[case]\ntable = 2\nn = 1\nd = 2\neta = 0\n";
        CHECK_THROWS_AS(load_fixtures(2, "/tmp"), std::runtime_error);
    }
}

TEST_CASE("fixture integrity") {
    const Fixtures& fx = fixtures();
    auto check_gram = [](const IMat& g) {
        CHECK(g.is_symmetric());
        for (size_t i = 0; i < g.rows(); ++i)
            for (size_t j = 0; j < g.rows(); ++j) {
                if (i == j)
                    CHECK(g(i, i) < 0);
                else
                    CHECK(g(i, j) >= 0);
            }
    };
    for (const TableCase& c : fx.t1) check_gram(*c.gram);
    for (const TableCase& c : fx.t2)
        if (c.gram) check_gram(*c.gram);

    // every paired reference names a real table 1 case
    std::set<std::pair<Int, Int>> t1keys;
    for (const TableCase& c : fx.t1) t1keys.insert({c.d, c.eta});
    for (const TableCase& c : fx.t2) CHECK(t1keys.count(*c.equiv_ref) == 1);
}

TEST_CASE("canonical cyclic gram") {
    SUBCASE("reversal is in the dihedral orbit") {
        IMat g{{-1, 1, 1}, {1, -1, 0}, {1, 0, -2}};
        IMat rev(3, 3);
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) rev(i, j) = g(2 - i, 2 - j);
        CHECK(canonical_cyclic_gram(g) == canonical_cyclic_gram(rev));
    }

    SUBCASE("shift-invariant printed matrix") {
        const IMat& g = *find_case(fixtures().t1, 8).gram;
        IMat shifted(4, 4);
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j) shifted(i, j) = g((i + 2) % 4, (j + 2) % 4);
        CHECK(shifted == g);  // the fixture itself is shift-by-2 invariant
        CHECK(canonical_cyclic_gram(g) == canonical_cyclic_gram(shifted));
    }

    SUBCASE("distinct norm patterns stay distinct") {
        IMat a{{-1, 0, 0}, {0, -2, 0}, {0, 0, -3}};
        IMat b{{-1, 0, 0}, {0, -2, 0}, {0, 0, -4}};
        CHECK(canonical_cyclic_gram(a) != canonical_cyclic_gram(b));
    }
}

TEST_CASE("rational root coordinates map through the glue basis") {
    const Fixtures& fx = fixtures();
    for (const TableCase& c : fx.t2) {
        if (!c.roots) continue;
        bool rational = false;
        for (const QVec& r : *c.roots)
            for (const Rat& x : r)
                if (x.get_den() != 1) rational = true;
        if (!rational) continue;
        Lattice l = parse_lattice_symbol(c.symbol);
        std::vector<IVec> roots = integral_roots(l, *c.roots);
        for (const IVec& r : roots) {
            CHECK(is_root(l, r));
            CHECK(is_primitive(r));
        }
    }
}

TEST_CASE("case verification") {
    const Fixtures& fx = fixtures();

    SUBCASE("a sample of rows passes everything") {
        for (int n : {1, 2, 4, 8, 12, 31}) {
            VerificationReport r = verify_case(fx, find_case(fx.t1, n));
            INFO("table 1 case ", n, ": ", failures(r));
            CHECK(r.passed());
        }
        for (int n : {1, 3, 10}) {
            VerificationReport r = verify_case(fx, find_case(fx.t2, n));
            INFO("table 2 case ", n, ": ", failures(r));
            CHECK(r.passed());
        }
    }

    SUBCASE("all header-only checks of the large table pass") {
        for (const TableCase& c : fx.t3) {
            VerificationReport r = verify_case(fx, c);
            INFO("table 3 case ", c.index, ": ", failures(r));
            CHECK(r.passed());
        }
    }

    SUBCASE("a corrupted row is reported, not thrown") {
        TableCase bad = find_case(fx.t1, 1);
        bad.d = 5;  // header contradicts the symbol
        VerificationReport r = verify_case(fx, bad);
        CHECK_FALSE(r.passed());
        bool det_failed = false;
        for (const CheckResult& c : r.checks)
            if (c.name == "determinant" && !c.pass) det_failed = true;
        CHECK(det_failed);
    }

    SUBCASE("unresolved rows get informational classification notes") {
        const TableCase& nr = find_case(fx.t3, 29);
        REQUIRE(*nr.marker == "nr");
        VerifyOptions opt;
        opt.budget.max_height = 100;  // keep the informational attempt quick
        opt.attempt_unresolved = true;
        VerificationReport r = verify_case(fx, nr, opt);
        CHECK(r.passed());
        REQUIRE(r.notes.size() == 1);
        CHECK(r.notes[0].find("budget exhausted") != std::string::npos);
    }
}

TEST_CASE("dual and overlattice transforms on fixture rows") {
    const Fixtures& fx = fixtures();

    SUBCASE("dual walls stay primitive roots and keep their count") {
        const TableCase& c = find_case(fx.t1, 4);  // d = 3
        Lattice l = parse_lattice_symbol(c.symbol);
        std::vector<IVec> roots = integral_roots(l, *c.roots);
        for (const Int& m : {Int(1), Int(3)}) {
            TransformedRoots t = transform_roots_m_dual(l, roots, m);
            CHECK(t.roots.size() == roots.size());
            CHECK(abs(t.lattice.determinant()) == c.d * m);
            for (const IVec& r : t.roots) {
                CHECK(is_root(t.lattice, r));
                CHECK(is_primitive(r));
            }
        }
    }

    SUBCASE("doubling an equivalent row reproduces its header invariants") {
        const TableCase& c2 = find_case(fx.t2, 2);  // paired with d=3 eta=1
        REQUIRE_FALSE(c2.roots.has_value());
        const TableCase& c1 = find_case(fx.t1, 4);
        REQUIRE(c1.d == c2.equiv_ref->first);
        REQUIRE(c1.eta == c2.equiv_ref->second);
        Lattice l = parse_lattice_symbol(c1.symbol);
        TransformedRoots t = transform_roots_odd_overlattice(l, integral_roots(l, *c1.roots));
        InvariantTriple inv = invariant_triple(t.lattice);
        CHECK(inv.d == c2.d);
        CHECK(inv.type == c2.type);
        CHECK(inv.eta_code() == c2.eta);
        for (const IVec& r : t.roots) CHECK(is_root(t.lattice, r));
    }
}
