#pragma once

#include "smcount/formula.hpp"
#include "smcount/literals.hpp"
#include "smcount/polynomial.hpp"

#include <cstddef>

namespace smcount {

// Dense matrix over F_p, row major.
struct ModMatrix {
    int p = 2;
    std::size_t rows = 0, cols = 0;
    std::vector<int> data;

    static ModMatrix zero(int p, std::size_t rows, std::size_t cols) {
        return {p, rows, cols, std::vector<int>(rows * cols, 0)};
    }
    int& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    int at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool operator==(const ModMatrix&) const = default;
};

struct RrefResult {
    ModMatrix mat;  // reduced row echelon form, zero rows dropped
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;  // pivot column per surviving row
};

// Gauss-Jordan elimination: leftmost pivots, pivots scaled to 1, zero rows
// removed. Deterministic.
RrefResult rref(ModMatrix m);

// The complete linear type of a parameter tuple: the subspace of relation
// vectors c with sum c_i * param_i = 0, held as an RREF basis.
struct LinPattern {
    int prime = 2;
    std::vector<Symbol> params;
    std::vector<std::vector<int>> basis;  // RREF rows, each of length params.size()

    std::size_t rank() const { return basis.size(); }
    std::size_t independent_count() const { return params.size() - basis.size(); }
    // Canonical residue of a relation vector modulo the basis row space.
    std::vector<int> reduce(std::vector<int> v) const;
    bool contains(const std::vector<int>& v) const;
    // Basis relations = 0 plus one disequation per nonzero residue class
    // (scaled so the first nonzero coefficient is 1).
    FormulaPtr render() const;
    bool operator==(const LinPattern&) const = default;
};

// One pattern per subspace of F_p^m, full space first, then by descending
// rank. Throws CapExceeded when p^m exceeds cap.
std::vector<LinPattern> enumerate_lin_patterns(const std::vector<Symbol>& params, int p,
                                               unsigned long cap);

// One-variable existential elimination for a conjunction of linear
// equations and disequations over F_p.
ElimResult eliminate_exists_vs(const Symbol& v, const std::vector<Literal>& conj);

struct VsCellData {
    IntPoly poly;
    int dim = -1;          // affine dimension of the equation solution set; -1 when empty
    std::string coset_key;  // canonical equation system; equal keys = equal affine sets
};

// Inclusion-exclusion count of the literal conjunction over vars, with
// parameters rewritten modulo the pattern relations. Exact at every q = p^e
// large enough to realize the pattern (q >= p^independent_count).
VsCellData count_cell_vs(const std::vector<Symbol>& vars, const std::vector<Literal>& conj,
                         const LinPattern& pattern, std::size_t diseq_cap);

}  // namespace smcount
