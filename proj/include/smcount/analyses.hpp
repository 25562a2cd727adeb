#pragma once

#include "smcount/engine.hpp"
#include "smcount/oracle.hpp"

namespace smcount {

// Semantic rejection of an analysis input (non-constant fibers, edge set
// not inside V x W, Morley degree too high for the plain dichotomy).
class AnalysisError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// "exactly k witnesses": compiled to plain first-order form with k fresh
// tuple copies, pairwise distinctness, and a closure quantifier. The tuple
// variables are no longer free in the result.
FormulaPtr exactly_k(const TheorySpec& theory, std::size_t k, const std::vector<Symbol>& tuple,
                     const FormulaPtr& body, NameGen& gen);

struct CorrespondenceReport {
    std::size_t n = 0;       // tuple length of each side
    long long k = 0;         // fiber size over the left projection
    long long ell = 0;       // fiber size over the right projection
    IntPoly Z_poly, X_poly, Y_poly;
    bool identity_holds = false;  // Z = k*X = ell*Y as polynomials
    bool full_degree = false;     // deg X = deg Y = n
    bool k_equals_ell = false;
    long long threshold = 0;
    FormulaPtr chi;  // the trimmed correspondence actually counted
};

// Fiber analysis of a correspondence psi(left-tuple, right-tuple): discovers
// the constant fiber sizes k and ell (trying 1..cap and requiring the
// exact-fiber part to cover the full top rank of psi), counts the graph and
// both projections, and checks the two-way counting identity. psi.var_groups
// must hold the two tuples. Throws AnalysisError when the fibers are not of
// constant finite size under the pattern.
CorrespondenceReport unimodularity_check(const Input& psi, const ParamPattern& pattern,
                                         const EngineLimits& limits = default_limits());

struct GraphInput {
    Input V, W, E;  // E's frame is V's variables followed by W's
};

// Validates frames and that E defines a subgraph of V x W under the pattern.
void validate_graph(const GraphInput& g, const ParamPattern& pattern,
                    const EngineLimits& limits = default_limits());

enum class RegularityCase { dense, sparse };

struct RegularityReport {
    long d1 = 0, d2 = 0;  // ranks of the two sides
    RegularityCase case_tag = RegularityCase::sparse;
    IntPoly R_poly;  // degree < d1 + d2
    IntPoly E_poly, V_poly, W_poly;
    long long threshold = 0;
};

// The density dichotomy for a definable bipartite graph whose sides have
// Morley degree 1: either E misses only R(q) points of V x W, or E has only
// R(q) points, with deg R < d1 + d2 either way.
RegularityReport regularity_analyze(const GraphInput& g, const ParamPattern& pattern,
                                    const EngineLimits& limits = default_limits());

struct PairReport {
    FormulaPtr v_piece, w_piece;
    RegularityReport report;
};

struct RemainderPiece {
    char side = 'V';
    FormulaPtr formula;
    IntPoly poly;
};

struct SplitReport {
    IntPoly V_poly, W_poly, E_poly;
    std::vector<PairReport> pairs;           // one dichotomy per top-rank piece pair
    std::vector<RemainderPiece> remainders;  // lower-rank pieces, no dichotomy claim
    long long threshold = 0;
};

// The split refinement: decomposes each side into top-rank degree-1 pieces
// plus a lower-rank remainder and runs the dichotomy on every top pair.
SplitReport regularity_split(const GraphInput& g, const ParamPattern& pattern,
                             const EngineLimits& limits = default_limits());

// The graph restricted to one piece pair of a split report.
GraphInput restrict_pair(const GraphInput& g, const PairReport& pair);

struct VerifySummary {
    bool pass = false;
    bool exhaustive = false;  // all subset pairs checked
    unsigned long long samples = 0;
    unsigned long long violations = 0;
    BigInt worst_margin;  // least slack over all sampled pairs; negative = violation
};

// Checks the case inequality on subsets A of V and B of W in a concrete
// model: exhaustively when 2^|V| * 2^|W| <= 2^20, otherwise on `trials`
// seeded random pairs plus the deterministic extremes (empty, singletons,
// full).
VerifySummary regularity_verify(const FiniteModel& m, const GraphInput& g, const RegularityReport& report,
                                long trials, std::uint64_t seed, const OracleLimits& limits = {});

}  // namespace smcount
