#pragma once

#include "smcount/formula.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace smcount {

// Thrown when a configured enumeration or blow-up cap is exceeded.
class CapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An atom with polarity; the conjunction form the theory plugins consume.
struct Literal {
    FormulaPtr atom;  // a PureAtom or LinAtom node
    bool negated = false;
};

FormulaPtr literal_formula(const Literal& l);
FormulaPtr conjunction_formula(const std::vector<Literal>& conj);

// Drops duplicate literals; nullopt when the conjunction contains a
// complementary pair (syntactic contradiction).
std::optional<std::vector<Literal>> simplify_literals(const std::vector<Literal>& conj);

struct ElimResult {
    FormulaPtr formula;
    long long threshold = 0;  // equivalence holds in every model of size > threshold
};

}  // namespace smcount
