#pragma once

#include "smcount/formula.hpp"
#include "smcount/literals.hpp"
#include "smcount/polynomial.hpp"

namespace smcount {

// A set partition of an ordered symbol universe, stored as a restricted
// growth string: block_of[i] is the block index of universe[i], and block
// indices appear in order of first use. Blocks are therefore canonically
// sorted by least member.
struct EqPattern {
    std::vector<Symbol> universe;
    std::vector<int> block_of;

    int block_count() const;
    bool same_block(const Symbol& a, const Symbol& b) const;
    int block_of_symbol(const Symbol& s) const;  // -1 if absent
    // Conjunction of equalities within blocks and disequations between
    // block representatives; True for the empty or all-merged trivial cases.
    FormulaPtr render() const;
    // The partition induced on a subset of the universe.
    EqPattern restrict_to(const std::vector<Symbol>& subset) const;

    bool operator==(const EqPattern&) const = default;
};

// All set partitions of the given symbols, in restricted-growth-string
// order. Throws CapExceeded when the count would exceed cap.
std::vector<EqPattern> enumerate_eq_patterns(const std::vector<Symbol>& symbols, std::size_t cap);

// All partitions of base.universe + extra whose restriction to
// base.universe is exactly base.
std::vector<EqPattern> extend_eq_pattern(const EqPattern& base, const std::vector<Symbol>& extra,
                                         std::size_t cap);

// Truth value of a quantifier-free formula when symbol equality is decided
// by pattern membership.
bool eval_under_eq_pattern(const FormulaPtr& qf, const EqPattern& pattern);

// One-variable existential elimination for a conjunction of equality
// literals. v must occur in the conjunction.
ElimResult eliminate_exists_pure(const Symbol& v, const std::vector<Literal>& conj);

// Assignments of the variable-only blocks of a full pattern: the falling
// factorial (q-c)(q-c-1)...(q-c-k+1), c = param_blocks, k = variable-only
// blocks. Exact in every model of size >= c.
IntPoly eq_pattern_poly(const EqPattern& full, int param_blocks);

// Number of assignments of vars satisfying the literal conjunction, as a
// polynomial in the model size, given the parameter pattern. Exact in every
// model of size >= pattern.block_count().
IntPoly count_cell_pure(const std::vector<Symbol>& vars, const std::vector<Literal>& conj,
                        const EqPattern& param_pattern, std::size_t cap);

}  // namespace smcount
