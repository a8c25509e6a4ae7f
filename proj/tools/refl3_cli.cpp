// Command-line front end: invariant reports, fundamental-polygon runs,
// m-duals, fixture verification and Klein-disk SVG rendering.
//
// Exit codes: 0 success, 1 usage or parse error, 2 budget exhausted,
// 3 verification failures.

#include "refl3/tables.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace refl3;
using json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0, exit_usage = 1, exit_budget = 2, exit_verify = 3;

std::string vec_str(const IVec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

std::string mat_str(const IMat& m, const std::string& indent) {
    std::ostringstream os;
    for (size_t i = 0; i < m.rows(); ++i) {
        os << indent;
        for (size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
        os << "\n";
    }
    return os.str();
}

std::string relation_str(const WallRelation& r) {
    switch (r.kind) {
        case WallRelation::Kind::angle: {
            std::ostringstream os;
            os << "angle cos^2=" << r.cos2;
            return os.str();
        }
        case WallRelation::Kind::ideal_vertex:
            return "ideal_vertex";
        default:
            return "divergent";
    }
}

// a symbol argument is either fixture-grammar text or "@table:index"
struct ResolvedSymbol {
    Lattice lattice;
    const TableCase* fixture = nullptr;  // set for @table:index references
};

ResolvedSymbol resolve_symbol(const std::string& text, Fixtures& fx, bool& fx_loaded) {
    if (!text.empty() && text[0] == '@') {
        size_t colon = text.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("expected @table:index, got '" + text + "'");
        int table = std::stoi(text.substr(1, colon - 1));
        int index = std::stoi(text.substr(colon + 1));
        if (!fx_loaded) {
            fx = Fixtures::load();
            fx_loaded = true;
        }
        const std::vector<TableCase>* rows =
            table == 1 ? &fx.t1 : table == 2 ? &fx.t2 : table == 3 ? &fx.t3 : nullptr;
        if (!rows) throw std::invalid_argument("table must be 1, 2 or 3");
        for (const TableCase& c : *rows)
            if (c.index == index) return {parse_lattice_symbol(c.symbol), &c};
        throw std::invalid_argument("no case " + std::to_string(index) + " in table " +
                                    std::to_string(table));
    }
    return {parse_lattice_symbol(text), nullptr};
}

IVec parse_point(const std::string& text) {
    IVec out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.emplace_back(part);
    if (out.size() != 3) throw std::invalid_argument("base point needs three coordinates");
    return out;
}

int cmd_invariants(const Lattice& l) {
    InvariantTriple tr = invariant_triple(l);
    std::cout << "d: " << tr.d << "\n";
    std::cout << "type: " << (tr.type == Parity::even ? "even" : "odd") << "\n";
    std::cout << "eta: code " << tr.eta_code() << " bits [";
    for (size_t i = 0; i < tr.eta_bits.size(); ++i)
        std::cout << (i ? "," : "") << tr.eta_bits[i];
    std::cout << "]\n";
    std::cout << "r_p:";
    for (const auto& [p, r] : p_invariants(l)) std::cout << " " << p << "^" << r;
    std::cout << "\n";
    std::cout << "elementary: " << (is_elementary(l) ? "yes" : "no") << "\n";
    if (l.rank() == 3 && l.is_hyperbolic_rank3())
        std::cout << "represents_zero: " << (represents_zero(l) ? "yes" : "no") << "\n";
    return exit_ok;
}

int cmd_vinberg(const Lattice& l, const std::string& basepoint, const VinbergBudget& budget) {
    IVec p0 = basepoint.empty() ? default_base_point(l) : parse_point(basepoint);
    FundamentalPolygon poly = vinberg_run(l, p0, budget);
    std::cout << "base point: " << vec_str(poly.base_point) << "\n";
    std::cout << "status: "
              << (poly.status == PolygonStatus::finite_area ? "finite_area" : "budget_exhausted")
              << "\n";
    std::cout << "walls (" << poly.walls.size() << "):\n";
    for (const IVec& w : poly.walls) std::cout << "  " << vec_str(w) << "\n";
    std::cout << "gram:\n" << mat_str(poly.gram, "  ");
    if (poly.status != PolygonStatus::finite_area) return exit_budget;
    std::cout << "relations:\n";
    for (size_t i = 0; i < poly.relations.size(); ++i)
        std::cout << "  (" << i + 1 << "," << (i + 1) % poly.walls.size() + 1
                  << "): " << relation_str(poly.relations[i]) << "\n";
    PolygonSymmetries sym = polygon_symmetries(l, poly);
    std::cout << "symmetries: " << sym.group.size() << "\n";
    std::cout << "h: " << sym.h << "\n";
    std::cout << "weyl vector: " << vec_str(sym.weyl_vector) << "\n";
    return exit_ok;
}

int cmd_dual(const Lattice& l, const ResolvedSymbol& sym, const Int& m) {
    Lattice target = m_dual(l, m);
    std::cout << "m: " << m << "\n";
    std::cout << "dual determinant: " << target.determinant() << "\n";
    std::cout << "dual gram:\n" << mat_str(target.gram(), "  ");
    if (sym.fixture && sym.fixture->roots) {
        std::vector<IVec> roots = integral_roots(l, *sym.fixture->roots);
        TransformedRoots tr = transform_roots_m_dual(l, roots, m);
        std::cout << "transformed roots (" << tr.roots.size() << "):\n";
        for (const IVec& r : tr.roots) std::cout << "  " << vec_str(r) << "\n";
        std::cout << "transformed gram:\n" << mat_str(tr.gram, "  ");
    }
    return exit_ok;
}

json report_json(const VerificationReport& rep) {
    json j;
    j["table"] = rep.table;
    j["case"] = rep.index;
    j["passed"] = rep.passed();
    json checks = json::array();
    for (const CheckResult& c : rep.checks) {
        json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        if (!c.detail.empty()) jc["detail"] = c.detail;
        checks.push_back(std::move(jc));
    }
    j["checks"] = std::move(checks);
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

int cmd_verify(int table, int case_id, unsigned jobs, const std::string& format) {
    Fixtures fx = Fixtures::load();
    std::vector<const TableCase*> selection;
    for (const std::vector<TableCase>* rows : {&fx.t1, &fx.t2, &fx.t3}) {
        for (const TableCase& c : *rows) {
            if (table != 0 && c.table != table) continue;
            if (case_id != 0 && c.index != case_id) continue;
            selection.push_back(&c);
        }
    }
    if (selection.empty()) {
        std::cerr << "error: no cases match the selection\n";
        return exit_usage;
    }

    std::vector<VerificationReport> reports(selection.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < selection.size(); i = next.fetch_add(1))
            reports[i] = verify_case(fx, *selection[i]);
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    size_t failed = 0;
    for (const VerificationReport& rep : reports) {
        if (!rep.passed()) ++failed;
        if (format == "jsonl") {
            std::cout << report_json(rep).dump() << "\n";
            continue;
        }
        std::cout << "table " << rep.table << " case " << rep.index << ": "
                  << (rep.passed() ? "pass" : "FAIL") << "\n";
        for (const CheckResult& c : rep.checks)
            if (!c.pass)
                std::cout << "  " << c.name << ": FAIL"
                          << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
        for (const std::string& n : rep.notes) std::cout << "  note: " << n << "\n";
    }
    if (format != "jsonl")
        std::cout << reports.size() - failed << "/" << reports.size() << " cases passed\n";
    return failed == 0 ? exit_ok : exit_verify;
}

// --- rendering: the only floating-point code in the artifact -------------

struct Frame {
    double f[3][3];  // rows: time-like unit vector, two space-like unit vectors
    double gram[3][3];
};

Frame make_frame(const Lattice& l, const IVec& p0) {
    Frame fr{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) fr.gram[i][j] = l.gram()(i, j).get_d();
    auto form = [&](const double* x, const double* y) {
        double s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += x[i] * fr.gram[i][j] * y[j];
        return s;
    };
    double rows[3][3] = {{p0[0].get_d(), p0[1].get_d(), p0[2].get_d()}, {0, 0, 0}, {0, 0, 0}};
    int have = 1;
    for (int cand = 0; cand < 3 && have < 3; ++cand) {
        double v[3] = {cand == 0 ? 1.0 : 0.0, cand == 1 ? 1.0 : 0.0, cand == 2 ? 1.0 : 0.0};
        for (int r = 0; r < have; ++r) {
            double c = form(v, rows[r]) / form(rows[r], rows[r]);
            for (int i = 0; i < 3; ++i) v[i] -= c * rows[r][i];
        }
        if (std::fabs(form(v, v)) < 1e-9) continue;
        for (int i = 0; i < 3; ++i) rows[have][i] = v[i];
        ++have;
    }
    for (int r = 0; r < 3; ++r) {
        double n = std::sqrt(std::fabs(form(rows[r], rows[r])));
        for (int i = 0; i < 3; ++i) fr.f[r][i] = rows[r][i] / n;
    }
    return fr;
}

// wall alpha as a line A + B u + C v = 0 in Klein coordinates (u, v)
void wall_line(const Frame& fr, const IVec& alpha, double& A, double& B, double& C) {
    double a[3] = {alpha[0].get_d(), alpha[1].get_d(), alpha[2].get_d()};
    double out[3];
    for (int r = 0; r < 3; ++r) {
        out[r] = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out[r] += fr.f[r][i] * fr.gram[i][j] * a[j];
    }
    A = out[0];
    B = out[1];
    C = out[2];
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", x + 0.0);  // normalize -0
    return buf;
}

int cmd_render(const Lattice& l, const std::string& out_path) {
    IVec p0 = default_base_point(l);
    FundamentalPolygon poly = vinberg_run(l, p0);
    if (poly.status != PolygonStatus::finite_area) {
        std::cerr << "error: polygon not closed within the default budget\n";
        return exit_budget;
    }
    Frame fr = make_frame(l, poly.base_point);
    std::ostringstream svg;
    const double sc = 200, cx = 220, cy = 220;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\">\n";
    svg << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << sc
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    size_t n = poly.walls.size();
    std::vector<double> la(n), lb(n), lc(n);
    for (size_t i = 0; i < n; ++i) {
        wall_line(fr, poly.walls[i], la[i], lb[i], lc[i]);
        // chord endpoints: intersect A + Bu + Cv = 0 with u^2 + v^2 = 1
        double nn = lb[i] * lb[i] + lc[i] * lc[i];
        double u0 = -la[i] * lb[i] / nn, v0 = -la[i] * lc[i] / nn;
        double h = std::sqrt(std::max(0.0, 1.0 - la[i] * la[i] / nn));
        double du = -lc[i] / std::sqrt(nn), dv = lb[i] / std::sqrt(nn);
        svg << "<line x1=\"" << fmt(cx + sc * (u0 - h * du)) << "\" y1=\""
            << fmt(cy - sc * (v0 - h * dv)) << "\" x2=\"" << fmt(cx + sc * (u0 + h * du))
            << "\" y2=\"" << fmt(cy - sc * (v0 + h * dv)) << "\" stroke=\"steelblue\"/>\n";
    }
    for (size_t i = 0; i < n; ++i) {
        const WallRelation& rel = poly.relations[i];
        if (rel.kind == WallRelation::Kind::divergent) continue;
        size_t j = (i + 1) % n;
        double det = lb[i] * lc[j] - lb[j] * lc[i];
        if (std::fabs(det) < 1e-12) continue;
        double u = (lc[i] * la[j] - lc[j] * la[i]) / det;
        double v = (lb[j] * la[i] - lb[i] * la[j]) / det;
        bool ideal = rel.kind == WallRelation::Kind::ideal_vertex;
        svg << "<circle cx=\"" << fmt(cx + sc * u) << "\" cy=\"" << fmt(cy - sc * v)
            << "\" r=\"3\" fill=\"" << (ideal ? "none" : "crimson") << "\""
            << (ideal ? " stroke=\"crimson\"" : "") << "/>\n";
    }
    svg << "</svg>\n";
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return exit_usage;
    }
    out << svg.str();
    std::cout << "wrote " << out_path << " (" << n << " walls)\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-3 hyperbolic lattice toolkit"};
    app.require_subcommand(1);

    std::string symbol, basepoint, max_height_text, out_path, format = "text";
    unsigned long max_walls = VinbergBudget{}.max_walls;
    std::string m_text;
    int table = 0, case_id = 0;
    unsigned jobs = 1;

    CLI::App* inv = app.add_subcommand("invariants", "determinant, parity and eta of a lattice");
    inv->add_option("symbol", symbol, "lattice symbol or @table:index")->required();

    CLI::App* vin = app.add_subcommand("vinberg", "fundamental polygon around a base point");
    vin->add_option("symbol", symbol)->required();
    vin->add_option("--basepoint", basepoint, "comma-separated coordinates a,b,c");
    vin->add_option("--max-height", max_height_text, "priority budget (alpha,p0)^2 / -alpha^2");
    vin->add_option("--max-walls", max_walls, "wall-count budget");

    CLI::App* dual = app.add_subcommand("dual", "m-dual lattice and transformed roots");
    dual->add_option("symbol", symbol)->required();
    dual->add_option("--m", m_text, "divisor of the determinant")->required();

    CLI::App* verify = app.add_subcommand("verify", "recheck fixture tables");
    verify->add_option("--table", table, "restrict to one table (1, 2 or 3)");
    verify->add_option("--case", case_id, "restrict to one case index");
    verify->add_option("--jobs", jobs, "parallel case fan-out");
    verify->add_option("--format", format)->check(CLI::IsMember({"text", "jsonl"}));

    CLI::App* render = app.add_subcommand("render", "Klein-disk SVG of the polygon");
    render->add_option("symbol", symbol)->required();
    render->add_option("-o,--output", out_path, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        Fixtures fx;
        bool fx_loaded = false;
        if (verify->parsed()) return cmd_verify(table, case_id, jobs, format);
        ResolvedSymbol rs = resolve_symbol(symbol, fx, fx_loaded);
        if (inv->parsed()) return cmd_invariants(rs.lattice);
        if (vin->parsed()) {
            VinbergBudget budget;
            if (!max_height_text.empty()) budget.max_height = Int(max_height_text);
            budget.max_walls = max_walls;
            if (budget.max_height <= 0 || budget.max_walls == 0)
                throw std::invalid_argument("budgets must be positive");
            return cmd_vinberg(rs.lattice, basepoint, budget);
        }
        if (dual->parsed()) return cmd_dual(rs.lattice, rs, Int(m_text));
        if (render->parsed()) return cmd_render(rs.lattice, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
