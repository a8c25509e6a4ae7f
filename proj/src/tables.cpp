#include "refl3/tables.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace refl3 {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& file, int line, const std::string& what) {
    throw std::runtime_error(file + ":" + std::to_string(line) + ": " + what);
}

Rat parse_rat(const std::string& tok) {
    Rat q;
    if (q.set_str(tok, 10) != 0) throw std::invalid_argument("bad rational: " + tok);
    q.canonicalize();
    return q;
}

// "(a,b,c);(d,e,f);..." with rational entries
std::vector<QVec> parse_roots(const std::string& text) {
    std::vector<QVec> out;
    std::istringstream in(text);
    std::string tuple;
    while (std::getline(in, tuple, ';')) {
        tuple = trim(tuple);
        if (tuple.size() < 2 || tuple.front() != '(' || tuple.back() != ')')
            throw std::invalid_argument("bad root tuple: " + tuple);
        QVec v;
        std::istringstream tin(tuple.substr(1, tuple.size() - 2));
        std::string entry;
        while (std::getline(tin, entry, ',')) v.push_back(parse_rat(trim(entry)));
        if (v.size() != 3) throw std::invalid_argument("root tuple is not rank 3: " + tuple);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty root list");
    return out;
}

// "[[a,b],[c,d]]" with integer entries
IMat parse_gram(const std::string& text) {
    std::vector<IVec> rows;
    IVec row;
    std::string num;
    bool in_row = false;
    auto flush = [&]() {
        if (!num.empty()) {
            row.push_back(Int(num));
            num.clear();
        }
    };
    for (char ch : text) {
        if (ch == '-' || (ch >= '0' && ch <= '9'))
            num += ch;
        else if (ch == ',')
            flush();
        else if (ch == '[')
            in_row = true;
        else if (ch == ']') {
            flush();
            if (in_row && !row.empty()) {
                rows.push_back(row);
                row.clear();
            }
            in_row = false;
        } else if (ch != ' ')
            throw std::invalid_argument(std::string("bad gram character: ") + ch);
    }
    if (rows.empty()) throw std::invalid_argument("empty gram matrix");
    IMat g(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw std::invalid_argument("gram matrix not square");
        for (size_t j = 0; j < rows[i].size(); ++j) g(i, j) = rows[i][j];
    }
    return g;
}

std::pair<Int, Int> parse_equiv(const std::string& text) {
    std::istringstream in(text);
    std::string dtok, etok;
    in >> dtok >> etok;
    if (dtok.rfind("d=", 0) != 0 || etok.rfind("eta=", 0) != 0)
        throw std::invalid_argument("bad reference: " + text);
    return {Int(dtok.substr(2)), Int(etok.substr(4))};
}

size_t expected_count(int table) {
    switch (table) {
        case 1: return 122;
        case 2: return 38;
        case 3: return 206;
        default: throw std::invalid_argument("table id must be 1, 2 or 3");
    }
}

void add_check(VerificationReport& rep, const std::string& name, bool pass,
               const std::string& detail = "") {
    rep.checks.push_back({name, pass, pass ? "" : detail});
}

template <typename T>
std::string str(const T& v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

std::string str(Parity p) { return p == Parity::even ? "even" : "odd"; }

// checks shared by roots-bearing rows: root validity, printed gram, polygon
void verify_polygon_row(VerificationReport& rep, const Lattice& l, const TableCase& c,
                        const VerifyOptions& opt) {
    std::vector<IVec> roots;
    try {
        roots = integral_roots(l, *c.roots);
    } catch (const std::exception& e) {
        add_check(rep, "roots-in-lattice", false, e.what());
        return;
    }
    add_check(rep, "roots-in-lattice", true);

    bool all_roots = true;
    for (const IVec& r : roots)
        if (!is_root(l, r) || !is_primitive(r)) all_roots = false;
    add_check(rep, "roots-primitive", all_roots);

    IMat g(roots.size(), roots.size());
    bool nonobtuse = true;
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = 0; j < roots.size(); ++j) {
            g(i, j) = l.pair(roots[i], roots[j]);
            if (i != j && g(i, j) < 0) nonobtuse = false;
        }
    add_check(rep, "gram-matches", g == *c.gram,
              "pairings of the printed roots disagree with the printed gram");
    add_check(rep, "gram-nonobtuse", nonobtuse);

    Classification cls = classify_reflective(l, opt.budget);
    add_check(rep, "elliptic", cls.elliptic, "classification exhausted its budget");
    if (!cls.elliptic) return;
    add_check(rep, "polygon-matches",
              canonical_cyclic_gram(cls.polygon.gram) == canonical_cyclic_gram(*c.gram),
              "computed polygon differs from the printed one");
    if (c.h) {
        size_t h = cls.symmetries->h;
        add_check(rep, "h-matches", h == size_t(*c.h),
                  "computed h=" + str(h) + " expected " + str(*c.h));
    }
}

bool in_table1(const Fixtures& fx, const Int& d, const Int& eta) {
    for (const TableCase& t : fx.t1)
        if (t.d == d && t.eta == eta) return true;
    return false;
}

}  // namespace

std::string default_data_dir() {
#ifdef REFL3_DATA_DIR
    return REFL3_DATA_DIR;
#else
    return "data";
#endif
}

std::vector<TableCase> load_fixtures(int table, const std::string& dir) {
    std::string file = dir + "/table" + std::to_string(table) + ".fix";
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file);

    std::vector<TableCase> out;
    TableCase cur;
    bool open = false;
    std::string line;
    int lineno = 0;
    auto flush = [&]() {
        if (open) out.push_back(cur);
        open = false;
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line == "[case]") {
            flush();
            cur = TableCase{};
            open = true;
            continue;
        }
        if (!open) parse_fail(file, lineno, "key outside a [case] block");
        size_t eq = line.find('=');
        if (eq == std::string::npos) parse_fail(file, lineno, "expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        try {
            if (key == "table")
                cur.table = std::stoi(value);
            else if (key == "n")
                cur.index = std::stoi(value);
            else if (key == "d")
                cur.d = Int(value);
            else if (key == "type")
                cur.type = value == "even" ? Parity::even : Parity::odd;
            else if (key == "eta")
                cur.eta = Int(value);
            else if (key == "h")
                cur.h = std::stoi(value);
            else if (key == "lattice")
                cur.symbol = value;
            else if (key == "roots")
                cur.roots = parse_roots(value);
            else if (key == "gram")
                cur.gram = parse_gram(value);
            else if (key == "marker")
                cur.marker = value;
            else if (key == "equiv")
                cur.equiv_ref = parse_equiv(value);
            else
                parse_fail(file, lineno, "unknown key " + key);
        } catch (const std::invalid_argument& e) {
            parse_fail(file, lineno, e.what());
        }
    }
    flush();
    if (out.size() != expected_count(table))
        throw std::runtime_error(file + ": expected " + std::to_string(expected_count(table)) +
                                 " cases, found " + std::to_string(out.size()));
    return out;
}

Fixtures Fixtures::load(const std::string& dir) {
    return {load_fixtures(1, dir), load_fixtures(2, dir), load_fixtures(3, dir)};
}

std::vector<Int> canonical_cyclic_gram(const IMat& g) {
    size_t n = g.rows();
    std::vector<Int> best;
    auto consider = [&](auto pi) {
        std::vector<Int> seq;
        seq.reserve(n * n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) seq.push_back(g(pi(i), pi(j)));
        if (best.empty() || seq < best) best = std::move(seq);
    };
    for (size_t s = 0; s < n; ++s) {
        consider([&](size_t i) { return (i + s) % n; });
        consider([&](size_t i) { return (s + n - i % n) % n; });
    }
    return best;
}

std::vector<IVec> integral_roots(const Lattice& l, const std::vector<QVec>& roots) {
    std::vector<IVec> out;
    out.reserve(roots.size());
    for (const QVec& r : roots) out.push_back(l.from_base_coords(r));
    return out;
}

VerificationReport verify_case(const Fixtures& fx, const TableCase& c, const VerifyOptions& opt) {
    VerificationReport rep;
    rep.table = c.table;
    rep.index = c.index;

    Lattice l{IMat::identity(1)};
    try {
        l = parse_lattice_symbol(c.symbol);
    } catch (const std::exception& e) {
        add_check(rep, "parse", false, e.what());
        return rep;
    }
    add_check(rep, "parse", true);

    Int det_abs = abs(l.determinant());
    add_check(rep, "determinant", det_abs == c.d,
              "computed |det|=" + str(det_abs) + " expected " + str(c.d));
    add_check(rep, "parity", l.parity() == c.type,
              "computed " + str(l.parity()) + " expected " + str(c.type));

    InvariantTriple inv = invariant_triple(l);
    bool inv_ok = inv.d == c.d && inv.type == c.type && inv.eta_code() == c.eta;
    add_check(rep, "invariants", inv_ok,
              "computed (" + str(inv.d) + "," + str(inv.type) + "," + str(inv.eta_code()) +
                  ") expected (" + str(c.d) + "," + str(c.type) + "," + str(c.eta) + ")");

    if (c.table == 1 || c.table == 3) {
        // square-free determinant, even exactly when d is even
        bool main = is_square_free(c.d) && ((l.parity() == Parity::even) == (mod(c.d, 2) == 0));
        add_check(rep, "main-form", main);
    }

    if (c.table == 1) {
        bool u_form = c.symbol.rfind("U", 0) == 0;
        add_check(rep, "zero-representation", represents_zero(l) == u_form,
                  u_form ? "U-form symbol must represent zero" : "non-U symbol represents zero");
    }

    if (c.table == 2) {
        if (!c.equiv_ref) {
            add_check(rep, "cross-reference", false, "missing paired-case reference");
            return rep;
        }
        auto [dm, em] = *c.equiv_ref;
        add_check(rep, "cross-reference", in_table1(fx, dm, em),
                  "no paired case with d=" + str(dm) + " eta=" + str(em));
        bool equiv = equivariantly_equivalent(dm, em);
        add_check(rep, "equivalence-split", equiv == !c.roots.has_value(),
                  equiv ? "equivalent rows carry no explicit roots"
                        : "non-equivalent rows must carry roots");
        // invariants of the doubled form: (2 d, odd, eta + omega(d))
        std::vector<int> bits = eta_bits_from_code(dm, em), w = omega(dm);
        for (size_t i = 0; i < bits.size(); ++i) bits[i] = (bits[i] + w[i]) % 2;
        InvariantTriple expect{2 * dm, Parity::odd, bits};
        bool ok = c.d == expect.d && c.type == expect.type && c.eta == expect.eta_code();
        add_check(rep, "doubled-invariants", ok,
                  "expected (" + str(expect.d) + ",odd," + str(expect.eta_code()) + ")");
    }

    if (c.table == 3) {
        add_check(rep, "h-bound", c.h && *c.h <= 1);
        bool er = c.marker && *c.marker == "er";
        add_check(rep, "er-cross-reference", er == in_table1(fx, c.d, c.eta),
                  er ? "marked er but absent from table 1" : "in table 1 but not marked er");
        if (!er && opt.attempt_unresolved) {
            Classification cls = classify_reflective(l, opt.budget);
            rep.notes.push_back("classification attempt: " +
                                std::string(cls.elliptic ? "elliptic" : "budget exhausted"));
        }
    }

    if (c.roots.has_value() != c.gram.has_value())
        add_check(rep, "roots-and-gram-paired", false, "roots and gram must appear together");
    if (c.roots && c.gram) verify_polygon_row(rep, l, c, opt);
    return rep;
}

}  // namespace refl3
