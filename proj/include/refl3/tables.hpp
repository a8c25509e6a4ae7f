#pragma once

// Fixture tables of reflective rank-3 hyperbolic lattices and the
// verification harness that recomputes every printed claim.

#include "refl3/vinberg.hpp"
#include "refl3/discform.hpp"

#include <optional>
#include <string>

namespace refl3 {

struct TableCase {
    int table = 0;  // 1, 2 or 3
    int index = 0;  // row number within its table
    Int d;
    Parity type = Parity::odd;
    Int eta;  // integer code packing one bit per odd prime divisor of d
    std::optional<int> h;
    std::string symbol;
    std::optional<std::vector<QVec>> roots;  // provenance-basis coordinates
    std::optional<IMat> gram;
    std::optional<std::string> marker;             // er / pr / hr / nr
    std::optional<std::pair<Int, Int>> equiv_ref;  // (d, eta) of the paired case
};

std::string default_data_dir();

// parses data/table<id>.fix; throws std::runtime_error with a line number on
// malformed input or when the case count does not match 122 / 38 / 206
std::vector<TableCase> load_fixtures(int table, const std::string& dir = default_data_dir());

struct Fixtures {
    std::vector<TableCase> t1, t2, t3;
    static Fixtures load(const std::string& dir = default_data_dir());
};

// minimum over the 2n dihedral relabelings of the row-major entry sequence;
// two wall cycles describe the same polygon iff their canonical forms match
std::vector<Int> canonical_cyclic_gram(const IMat& g);

// printed root coordinates (possibly rational, in the provenance basis of the
// symbol) mapped to integral coordinates of the lattice
std::vector<IVec> integral_roots(const Lattice& l, const std::vector<QVec>& roots);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // computed vs expected when failing
};

struct VerificationReport {
    int table = 0;
    int index = 0;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;  // informational, never failing
    bool passed() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct VerifyOptions {
    VinbergBudget budget{};
    // also attempt classification of rows marked hr/nr (informational)
    bool attempt_unresolved = false;
};

VerificationReport verify_case(const Fixtures& fx, const TableCase& c,
                               const VerifyOptions& opt = {});

}  // namespace refl3
