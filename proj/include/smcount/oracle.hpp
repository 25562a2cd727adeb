#pragma once

#include "smcount/engine.hpp"
#include "smcount/formula.hpp"
#include "smcount/polynomial.hpp"

#include <cstdint>
#include <map>

namespace smcount {

class BudgetExceeded : public CapExceeded {
  public:
    using CapExceeded::CapExceeded;
};

struct OracleLimits {
    unsigned long long eval_budget = 10'000'000;  // atomic evaluations
};

// A concrete finite structure: {0..q-1} with equality, or F_p^e with
// elements coded as base-p digit strings (little-endian), plus a parameter
// assignment.
struct FiniteModel {
    TheorySpec theory;
    long long q = 1;
    int exponent = 0;  // vector_space: q = p^exponent
    std::map<std::string, long long> param_values;

    long long vs_add(long long a, long long b) const;
    long long vs_scale(int c, long long a) const;
    // Display form of an element: "3" or "(1,0)".
    std::string element_name(long long code) const;
};

// Deterministic model construction; the parameter assignment realizes the
// pattern exactly. seed 0 picks the first-fit assignment. Throws
// std::invalid_argument when the pattern cannot be realized at this size
// (or q is not a power of p for vector_space).
FiniteModel build_model(const TheorySpec& theory, long long q, const ParamPattern& pattern,
                        std::uint64_t seed = 0);

// Truth of a formula under the given assignment of its free variables;
// quantifiers range over the whole domain.
bool evaluate(const FiniteModel& m, const FormulaPtr& f, const std::map<std::string, long long>& assignment,
              const OracleLimits& limits = {});

// Exhaustive count of satisfying assignments to the declared frame
// variables, enumerated lexicographically.
unsigned long long brute_count(const FiniteModel& m, const Input& input, const OracleLimits& limits = {});

// Exact Lagrange interpolation; throws std::invalid_argument on duplicate
// abscissae or when the points do not lie on an integer polynomial.
IntPoly interpolate(const std::vector<std::pair<BigInt, BigInt>>& points);

}  // namespace smcount
