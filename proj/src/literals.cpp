#include "smcount/literals.hpp"

#include <map>

namespace smcount {

FormulaPtr literal_formula(const Literal& l) { return l.negated ? f_not(l.atom) : l.atom; }

FormulaPtr conjunction_formula(const std::vector<Literal>& conj) {
    std::vector<FormulaPtr> parts;
    parts.reserve(conj.size());
    for (const auto& l : conj) parts.push_back(literal_formula(l));
    return f_and(std::move(parts));
}

std::optional<std::vector<Literal>> simplify_literals(const std::vector<Literal>& conj) {
    std::vector<Literal> out;
    for (const auto& l : conj) {
        bool duplicate = false;
        for (const auto& kept : out) {
            if (!equal(kept.atom, l.atom)) continue;
            if (kept.negated != l.negated) return std::nullopt;
            duplicate = true;
            break;
        }
        if (!duplicate) out.push_back(l);
    }
    return out;
}

}  // namespace smcount
