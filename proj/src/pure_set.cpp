#include "smcount/pure_set.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace smcount {

// ---------- EqPattern ----------

int EqPattern::block_count() const {
    int m = 0;
    for (int b : block_of) m = std::max(m, b + 1);
    return m;
}

int EqPattern::block_of_symbol(const Symbol& s) const {
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (universe[i].name == s.name) return block_of[i];
    return -1;
}

bool EqPattern::same_block(const Symbol& a, const Symbol& b) const {
    int ba = block_of_symbol(a), bb = block_of_symbol(b);
    if (ba < 0 || bb < 0) throw std::logic_error("symbol outside pattern universe");
    return ba == bb;
}

FormulaPtr EqPattern::render() const {
    int blocks = block_count();
    std::vector<std::vector<Symbol>> members(blocks);
    for (std::size_t i = 0; i < universe.size(); ++i) members[block_of[i]].push_back(universe[i]);
    std::vector<FormulaPtr> parts;
    for (const auto& block : members)
        for (std::size_t i = 1; i < block.size(); ++i) parts.push_back(f_pure_atom(block[0], block[i]));
    for (int i = 0; i < blocks; ++i)
        for (int j = i + 1; j < blocks; ++j) parts.push_back(f_not(f_pure_atom(members[i][0], members[j][0])));
    return f_and(std::move(parts));
}

EqPattern EqPattern::restrict_to(const std::vector<Symbol>& subset) const {
    EqPattern out;
    out.universe = subset;
    std::map<int, int> renumber;
    for (const auto& s : subset) {
        int b = block_of_symbol(s);
        if (b < 0) throw std::logic_error("symbol outside pattern universe");
        auto [it, inserted] = renumber.emplace(b, static_cast<int>(renumber.size()));
        out.block_of.push_back(it->second);
    }
    return out;
}

namespace {
void gen_rgs(std::size_t i, std::vector<int>& cur, int max_used, const std::vector<Symbol>& universe,
             std::vector<EqPattern>& out, std::size_t cap) {
    if (i == cur.size()) {
        if (out.size() >= cap) throw CapExceeded("equality-pattern enumeration exceeds cap of " + std::to_string(cap));
        out.push_back(EqPattern{universe, cur});
        return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
        cur[i] = b;
        gen_rgs(i + 1, cur, std::max(max_used, b), universe, out, cap);
    }
}
}  // namespace

std::vector<EqPattern> enumerate_eq_patterns(const std::vector<Symbol>& symbols, std::size_t cap) {
    std::vector<EqPattern> out;
    std::vector<int> cur(symbols.size(), 0);
    gen_rgs(0, cur, -1, symbols, out, cap);
    return out;
}

std::vector<EqPattern> extend_eq_pattern(const EqPattern& base, const std::vector<Symbol>& extra,
                                         std::size_t cap) {
    std::vector<Symbol> universe = base.universe;
    universe.insert(universe.end(), extra.begin(), extra.end());
    std::vector<EqPattern> out;
    std::vector<int> cur(universe.size(), 0);
    std::copy(base.block_of.begin(), base.block_of.end(), cur.begin());
    gen_rgs(base.universe.size(), cur, base.block_count() - 1, universe, out, cap);
    return out;
}

bool eval_under_eq_pattern(const FormulaPtr& qf, const EqPattern& pattern) {
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TrueNode>) {
                return true;
            } else if constexpr (std::is_same_v<T, FalseNode>) {
                return false;
            } else if constexpr (std::is_same_v<T, PureAtom>) {
                return pattern.same_block(x.lhs, x.rhs);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return !eval_under_eq_pattern(x.inner, pattern);
            } else if constexpr (std::is_same_v<T, AndNode>) {
                return std::all_of(x.parts.begin(), x.parts.end(),
                                   [&](const FormulaPtr& p) { return eval_under_eq_pattern(p, pattern); });
            } else if constexpr (std::is_same_v<T, OrNode>) {
                return std::any_of(x.parts.begin(), x.parts.end(),
                                   [&](const FormulaPtr& p) { return eval_under_eq_pattern(p, pattern); });
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return !eval_under_eq_pattern(x.lhs, pattern) || eval_under_eq_pattern(x.rhs, pattern);
            } else {
                throw std::logic_error("formula is not quantifier-free");
            }
        },
        qf->node);
}

// ---------- quantifier elimination ----------

ElimResult eliminate_exists_pure(const Symbol& v, const std::vector<Literal>& conj) {
    auto simplified = simplify_literals(conj);
    if (!simplified) return {f_false(), 0};

    std::vector<Literal> with_v, rest;
    for (const auto& l : *simplified) {
        const auto* atom = std::get_if<PureAtom>(&l.atom->node);
        if (atom == nullptr) throw std::logic_error("pure_set literal expected");
        (atom->lhs.name == v.name || atom->rhs.name == v.name ? with_v : rest).push_back(l);
    }

    std::optional<Symbol> solution;
    for (const auto& l : with_v) {
        if (l.negated) continue;
        const auto& atom = std::get<PureAtom>(l.atom->node);
        solution = atom.lhs.name == v.name ? atom.rhs : atom.lhs;
        break;
    }

    if (solution) {
        std::vector<Literal> out = rest;
        for (const auto& l : with_v) {
            FormulaPtr sub = substitute(literal_formula(l), v, TermPayload{*solution});
            if (is_true(sub)) continue;
            if (is_false(sub)) return {f_false(), 0};
            if (const auto* n = std::get_if<NotNode>(&sub->node)) {
                out.push_back({n->inner, true});
            } else {
                out.push_back({sub, false});
            }
        }
        auto final = simplify_literals(out);
        if (!final) return {f_false(), 0};
        return {conjunction_formula(*final), 0};
    }

    // v appears only in disequations: a witness exists once the model has
    // more elements than the excluded terms.
    std::set<std::string> excluded;
    for (const auto& l : with_v) {
        const auto& atom = std::get<PureAtom>(l.atom->node);
        excluded.insert(atom.lhs.name == v.name ? atom.rhs.name : atom.lhs.name);
    }
    return {conjunction_formula(rest), static_cast<long long>(excluded.size())};
}

// ---------- counting ----------

IntPoly eq_pattern_poly(const EqPattern& full, int param_blocks) {
    int k = full.block_count() - param_blocks;  // blocks holding only variables
    IntPoly term = IntPoly::constant(1);
    for (int j = 0; j < k; ++j)
        term = term * IntPoly(std::vector<BigInt>{BigInt(-(param_blocks + j)), BigInt(1)});
    return term;
}

IntPoly count_cell_pure(const std::vector<Symbol>& vars, const std::vector<Literal>& conj,
                        const EqPattern& param_pattern, std::size_t cap) {
    FormulaPtr body = conjunction_formula(conj);
    int c = param_pattern.block_count();
    IntPoly total;
    for (const auto& full : extend_eq_pattern(param_pattern, vars, cap)) {
        if (!eval_under_eq_pattern(body, full)) continue;
        total = total + eq_pattern_poly(full, c);
    }
    return total;
}

}  // namespace smcount
