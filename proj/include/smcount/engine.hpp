#pragma once

#include "smcount/formula.hpp"
#include "smcount/literals.hpp"
#include "smcount/polynomial.hpp"
#include "smcount/pure_set.hpp"
#include "smcount/vector_space.hpp"

#include <variant>

namespace smcount {

struct EngineLimits {
    std::size_t cell_cap = 100000;            // decomposition / DNF blow-up cap
    std::size_t diseq_cap = 20;               // inclusion-exclusion literals per cell
    std::size_t pure_param_cap = 8;           // set-partition enumeration guard
    unsigned long vs_param_cap = 256;         // p^m guard for pattern enumeration
    std::size_t counting_quantifier_cap = 16;  // largest compiled "exactly k"
};

// Defaults, with SMCOUNT_CELL_CAP honored when set in the environment.
EngineLimits default_limits();

// A complete quantifier-free description of the relations among the
// parameter constants, under which counting is uniform.
class ParamPattern {
  public:
    explicit ParamPattern(EqPattern p) : impl_(std::move(p)) {}
    explicit ParamPattern(LinPattern p) : impl_(std::move(p)) {}

    TheoryKind theory() const {
        return std::holds_alternative<EqPattern>(impl_) ? TheoryKind::pure_set : TheoryKind::vector_space;
    }
    const EqPattern& eq() const { return std::get<EqPattern>(impl_); }
    const LinPattern& lin() const { return std::get<LinPattern>(impl_); }

    const std::vector<Symbol>& params() const;
    FormulaPtr render() const;
    // Least model size admitting a realizing parameter assignment.
    long long realizability_threshold() const;
    // Truth of a quantifier-free constraint on the parameters under this
    // pattern (every tuple realizing the pattern gives the same value).
    bool satisfies(const FormulaPtr& constraint) const;

    bool operator==(const ParamPattern&) const = default;

  private:
    std::variant<EqPattern, LinPattern> impl_;
};

// The default when no pattern is given: parameters pairwise distinct
// (pure_set) or linearly independent (vector_space).
ParamPattern generic_pattern(const TheorySpec& theory, const std::vector<Symbol>& params);

// All parameter patterns: set partitions, or relation subspaces of F_p^m.
std::vector<ParamPattern> enumerate_patterns(const TheorySpec& theory, const std::vector<Symbol>& params,
                                             const EngineLimits& limits = default_limits());

struct CountResult {
    IntPoly poly;
    long long threshold_q0 = 0;  // exact for every admissible model size >= this
    long morley_rank = -1;       // degree of poly; -1 for the empty set
    long morley_degree = 0;      // top-rank disjoint cells (deduplicated per theory)
    BigInt leading_coefficient;  // 0 for the empty set
};

struct QeResult {
    FormulaPtr formula;          // quantifier-free
    long long threshold = 0;     // equivalent to the input in every model of size > threshold
};

// Innermost-first one-variable elimination; universal quantifiers go
// through the double negation.
QeResult quantifier_eliminate(const TheorySpec& theory, const FormulaPtr& f,
                              const EngineLimits& limits = default_limits());

// NNF'd quantifier-free formula to a list of simplified literal
// conjunctions (an empty conjunction is True; no conjunctions means False).
std::vector<std::vector<Literal>> to_dnf(const FormulaPtr& qf, const EngineLimits& limits = default_limits());

// As to_dnf but the conjunctions are pairwise inconsistent and their union
// is equivalent to the input.
std::vector<std::vector<Literal>> to_disjoint_dnf(const FormulaPtr& qf,
                                                  const EngineLimits& limits = default_limits());

struct Cell {
    FormulaPtr formula;     // literal conjunction over frame + parameters
    IntPoly poly;           // exact count of frame assignments in the cell
    std::string coset_key;  // equal keys = same top-dimensional carrier
};

// Pairwise disjoint cells whose union is equivalent to qf over the frame.
// pure_set cells are complete equality patterns; vector_space cells are
// literal conjunctions keyed by their affine carrier.
std::vector<Cell> decompose(const TheorySpec& theory, const std::vector<Symbol>& frame_vars,
                            const FormulaPtr& qf, const ParamPattern& pattern,
                            const EngineLimits& limits = default_limits());

// The central computation: the exact counting polynomial of the input
// formula over its declared frame, under the given parameter pattern.
CountResult count(const Input& input, const ParamPattern& pattern,
                  const EngineLimits& limits = default_limits());

CountResult count(const Input& input, const EngineLimits& limits = default_limits());

struct PartitionEntry {
    std::vector<ParamPattern> patterns;  // merged patterns sharing one polynomial
    FormulaPtr condition;                // disjunction of the pattern renderings
    CountResult result;
};

struct PartitionResult {
    std::vector<PartitionEntry> entries;
};

// Counts under every parameter pattern and merges patterns with equal
// polynomials; the entries partition all parameter tuples of every model.
PartitionResult parametric_count(const Input& input, const EngineLimits& limits = default_limits());

// The conjunction of two inputs over concatenated disjoint frames.
Input conjoin_disjoint(const Input& f, const Input& g);

// Checks the product law: counting polynomials multiply, ranks add, and
// degrees multiply for disjoint-variable formulas.
bool product_check(const Input& f, const Input& g, const ParamPattern& pattern,
                   const EngineLimits& limits = default_limits());

}  // namespace smcount
