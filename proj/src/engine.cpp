#include "smcount/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace smcount {

EngineLimits default_limits() {
    EngineLimits limits;
    if (const char* cap = std::getenv("SMCOUNT_CELL_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(cap, &end, 10);
        if (end != cap && *end == '\0' && v > 0) limits.cell_cap = static_cast<std::size_t>(v);
    }
    return limits;
}

// ---------- ParamPattern ----------

const std::vector<Symbol>& ParamPattern::params() const {
    if (const auto* e = std::get_if<EqPattern>(&impl_)) return e->universe;
    return std::get<LinPattern>(impl_).params;
}

FormulaPtr ParamPattern::render() const {
    if (const auto* e = std::get_if<EqPattern>(&impl_)) return e->render();
    return std::get<LinPattern>(impl_).render();
}

long long ParamPattern::realizability_threshold() const {
    if (const auto* e = std::get_if<EqPattern>(&impl_)) return e->block_count();
    const auto& lin = std::get<LinPattern>(impl_);
    long long q = 1;
    for (std::size_t i = 0; i < lin.independent_count(); ++i) q *= lin.prime;
    return q;
}

namespace {
bool eval_param_constraint_lin(const FormulaPtr& f, const LinPattern& pattern) {
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TrueNode>) {
                return true;
            } else if constexpr (std::is_same_v<T, FalseNode>) {
                return false;
            } else if constexpr (std::is_same_v<T, LinAtom>) {
                std::vector<int> vec(pattern.params.size(), 0);
                for (const auto& [sym, c] : x.coeffs) {
                    auto it = std::find_if(pattern.params.begin(), pattern.params.end(),
                                           [&](const Symbol& s) { return s.name == sym.name; });
                    if (it == pattern.params.end())
                        throw std::invalid_argument("pattern constraint mentions non-parameter '" + sym.name + "'");
                    vec[static_cast<std::size_t>(it - pattern.params.begin())] = c;
                }
                return pattern.contains(vec);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return !eval_param_constraint_lin(x.inner, pattern);
            } else if constexpr (std::is_same_v<T, AndNode>) {
                return std::all_of(x.parts.begin(), x.parts.end(),
                                   [&](const FormulaPtr& p) { return eval_param_constraint_lin(p, pattern); });
            } else if constexpr (std::is_same_v<T, OrNode>) {
                return std::any_of(x.parts.begin(), x.parts.end(),
                                   [&](const FormulaPtr& p) { return eval_param_constraint_lin(p, pattern); });
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return !eval_param_constraint_lin(x.lhs, pattern) || eval_param_constraint_lin(x.rhs, pattern);
            } else {
                throw std::invalid_argument("pattern constraint must be quantifier-free over parameters");
            }
        },
        f->node);
}
}  // namespace

bool ParamPattern::satisfies(const FormulaPtr& constraint) const {
    if (const auto* e = std::get_if<EqPattern>(&impl_)) return eval_under_eq_pattern(constraint, *e);
    return eval_param_constraint_lin(constraint, std::get<LinPattern>(impl_));
}

ParamPattern generic_pattern(const TheorySpec& theory, const std::vector<Symbol>& params) {
    if (theory.kind == TheoryKind::pure_set) {
        EqPattern p;
        p.universe = params;
        for (std::size_t i = 0; i < params.size(); ++i) p.block_of.push_back(static_cast<int>(i));
        return ParamPattern(std::move(p));
    }
    return ParamPattern(LinPattern{theory.prime, params, {}});
}

std::vector<ParamPattern> enumerate_patterns(const TheorySpec& theory, const std::vector<Symbol>& params,
                                             const EngineLimits& limits) {
    std::vector<ParamPattern> out;
    if (theory.kind == TheoryKind::pure_set) {
        if (params.size() > limits.pure_param_cap)
            throw CapExceeded("too many parameters for pattern enumeration (" + std::to_string(params.size()) +
                              " > " + std::to_string(limits.pure_param_cap) + ")");
        for (auto& p : enumerate_eq_patterns(params, limits.cell_cap)) out.push_back(ParamPattern(std::move(p)));
    } else {
        for (auto& p : enumerate_lin_patterns(params, theory.prime, limits.vs_param_cap))
            out.push_back(ParamPattern(std::move(p)));
    }
    return out;
}

// ---------- DNF ----------

namespace {
bool literal_mentions(const Literal& l, const Symbol& v) {
    if (const auto* a = std::get_if<PureAtom>(&l.atom->node))
        return a->lhs.name == v.name || a->rhs.name == v.name;
    const auto& a = std::get<LinAtom>(l.atom->node);
    return a.coeffs.count(v) != 0;
}

bool conj_mentions(const std::vector<Literal>& conj, const Symbol& v) {
    return std::any_of(conj.begin(), conj.end(), [&](const Literal& l) { return literal_mentions(l, v); });
}

using Disjuncts = std::vector<std::vector<Literal>>;

void check_cap(std::size_t size, const EngineLimits& limits) {
    if (size > limits.cell_cap)
        throw CapExceeded("formula expansion exceeds cell cap of " + std::to_string(limits.cell_cap) +
                          " (set SMCOUNT_CELL_CAP to raise)");
}

Disjuncts dnf_rec(const FormulaPtr& f, const EngineLimits& limits) {
    return std::visit(
        [&](const auto& x) -> Disjuncts {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TrueNode>) {
                return {{}};
            } else if constexpr (std::is_same_v<T, FalseNode>) {
                return {};
            } else if constexpr (std::is_same_v<T, PureAtom> || std::is_same_v<T, LinAtom>) {
                return {{Literal{f, false}}};
            } else if constexpr (std::is_same_v<T, NotNode>) {
                if (!is_atom(x.inner)) throw std::logic_error("DNF input must be in NNF");
                return {{Literal{x.inner, true}}};
            } else if constexpr (std::is_same_v<T, AndNode>) {
                Disjuncts acc = {{}};
                for (const auto& part : x.parts) {
                    Disjuncts rhs = dnf_rec(part, limits);
                    Disjuncts next;
                    for (const auto& a : acc) {
                        for (const auto& b : rhs) {
                            std::vector<Literal> merged = a;
                            merged.insert(merged.end(), b.begin(), b.end());
                            auto simplified = simplify_literals(merged);
                            if (!simplified) continue;
                            next.push_back(std::move(*simplified));
                            check_cap(next.size(), limits);
                        }
                    }
                    acc = std::move(next);
                }
                return acc;
            } else if constexpr (std::is_same_v<T, OrNode>) {
                Disjuncts acc;
                for (const auto& part : x.parts) {
                    Disjuncts rhs = dnf_rec(part, limits);
                    acc.insert(acc.end(), std::make_move_iterator(rhs.begin()), std::make_move_iterator(rhs.end()));
                    check_cap(acc.size(), limits);
                }
                return acc;
            } else {
                throw std::logic_error("DNF input must be quantifier-free NNF");
            }
        },
        f->node);
}
}  // namespace

Disjuncts to_dnf(const FormulaPtr& qf, const EngineLimits& limits) { return dnf_rec(to_nnf(qf), limits); }

Disjuncts to_disjoint_dnf(const FormulaPtr& qf, const EngineLimits& limits) {
    Disjuncts disjuncts = to_dnf(qf, limits);
    Disjuncts out;
    for (std::size_t i = 0; i < disjuncts.size(); ++i) {
        // d_i minus d_0..d_{i-1}: cross with the prefix-wise disjoint
        // expansion of each earlier disjunct's negation.
        Disjuncts pieces = {disjuncts[i]};
        for (std::size_t j = 0; j < i && !pieces.empty(); ++j) {
            Disjuncts next;
            for (const auto& piece : pieces) {
                for (std::size_t t = 0; t < disjuncts[j].size(); ++t) {
                    std::vector<Literal> refined = piece;
                    for (std::size_t s = 0; s < t; ++s) refined.push_back(disjuncts[j][s]);
                    Literal flipped = disjuncts[j][t];
                    flipped.negated = !flipped.negated;
                    refined.push_back(std::move(flipped));
                    auto simplified = simplify_literals(refined);
                    if (!simplified) continue;
                    next.push_back(std::move(*simplified));
                    check_cap(out.size() + next.size(), limits);
                }
            }
            pieces = std::move(next);
        }
        out.insert(out.end(), std::make_move_iterator(pieces.begin()), std::make_move_iterator(pieces.end()));
        check_cap(out.size(), limits);
    }
    return out;
}

// ---------- quantifier elimination ----------

namespace {
FormulaPtr eliminate_exists_from_qf(const TheorySpec& theory, const Symbol& v, const FormulaPtr& qf,
                                    long long& threshold, const EngineLimits& limits) {
    std::vector<FormulaPtr> disjunct_results;
    for (const auto& conj : to_dnf(qf, limits)) {
        if (!conj_mentions(conj, v)) {
            // exists v . phi is phi when v does not occur: the domain is
            // nonempty in every model.
            disjunct_results.push_back(conjunction_formula(conj));
            continue;
        }
        ElimResult r = theory.kind == TheoryKind::pure_set ? eliminate_exists_pure(v, conj)
                                                           : eliminate_exists_vs(v, conj);
        threshold = std::max(threshold, r.threshold);
        disjunct_results.push_back(std::move(r.formula));
    }
    return f_or(std::move(disjunct_results));
}

FormulaPtr eliminate_rec(const TheorySpec& theory, const FormulaPtr& f, long long& threshold,
                         const EngineLimits& limits) {
    return std::visit(
        [&](const auto& x) -> FormulaPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, QuantNode>) {
                FormulaPtr body = eliminate_rec(theory, x.body, threshold, limits);
                if (!x.universal) return eliminate_exists_from_qf(theory, x.var, body, threshold, limits);
                FormulaPtr negated = to_nnf(f_not(body));
                FormulaPtr inner = eliminate_exists_from_qf(theory, x.var, negated, threshold, limits);
                return to_nnf(f_not(inner));
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return f_not(eliminate_rec(theory, x.inner, threshold, limits));
            } else if constexpr (std::is_same_v<T, AndNode>) {
                std::vector<FormulaPtr> parts;
                for (const auto& p : x.parts) parts.push_back(eliminate_rec(theory, p, threshold, limits));
                return f_and(std::move(parts));
            } else if constexpr (std::is_same_v<T, OrNode>) {
                std::vector<FormulaPtr> parts;
                for (const auto& p : x.parts) parts.push_back(eliminate_rec(theory, p, threshold, limits));
                return f_or(std::move(parts));
            } else {
                return f;
            }
        },
        f->node);
}
}  // namespace

QeResult quantifier_eliminate(const TheorySpec& theory, const FormulaPtr& f, const EngineLimits& limits) {
    long long threshold = 0;
    FormulaPtr qf = eliminate_rec(theory, to_nnf(f), threshold, limits);
    return {std::move(qf), threshold};
}

// ---------- decomposition ----------

std::vector<Cell> decompose(const TheorySpec& theory, const std::vector<Symbol>& frame_vars,
                            const FormulaPtr& qf, const ParamPattern& pattern, const EngineLimits& limits) {
    std::vector<Cell> cells;
    if (theory.kind == TheoryKind::pure_set) {
        int c = pattern.eq().block_count();
        for (const auto& full : extend_eq_pattern(pattern.eq(), frame_vars, limits.cell_cap)) {
            if (!eval_under_eq_pattern(qf, full)) continue;
            Cell cell;
            cell.formula = full.render();
            cell.poly = eq_pattern_poly(full, c);
            cell.coset_key = render(cell.formula);
            cells.push_back(std::move(cell));
        }
        return cells;
    }
    for (const auto& conj : to_disjoint_dnf(qf, limits)) {
        VsCellData data = count_cell_vs(frame_vars, conj, pattern.lin(), limits.diseq_cap);
        if (data.poly.is_zero()) continue;
        Cell cell;
        cell.formula = conjunction_formula(conj);
        cell.poly = std::move(data.poly);
        cell.coset_key = std::move(data.coset_key);
        cells.push_back(std::move(cell));
    }
    return cells;
}

// ---------- counting ----------

namespace {
void validate_frame(const Input& input, const ParamPattern& pattern) {
    if ((input.theory.kind == TheoryKind::pure_set) != (pattern.theory() == TheoryKind::pure_set))
        throw std::invalid_argument("parameter pattern theory does not match the input theory");
    FreeSymbols frees = free_symbols(input.formula);
    std::set<std::string> declared_vars;
    for (const auto& v : input.vars) declared_vars.insert(v.name);
    for (const auto& v : frees.variables)
        if (!declared_vars.count(v.name))
            throw std::invalid_argument("free variable '" + v.name + "' is not in the declared frame");
    std::set<std::string> covered;
    for (const auto& p : pattern.params()) covered.insert(p.name);
    for (const auto& p : frees.parameters)
        if (!covered.count(p.name))
            throw std::invalid_argument("parameter '" + p.name + "' is not covered by the pattern");
}
}  // namespace

CountResult count(const Input& input, const ParamPattern& pattern, const EngineLimits& limits) {
    validate_frame(input, pattern);
    QeResult qe = quantifier_eliminate(input.theory, input.formula, limits);
    std::vector<Cell> cells = decompose(input.theory, input.vars, qe.formula, pattern, limits);

    CountResult result;
    for (const auto& cell : cells) result.poly = result.poly + cell.poly;
    result.threshold_q0 = std::max<long long>(pattern.realizability_threshold(),
                                              qe.threshold > 0 ? qe.threshold + 1 : 0);
    if (result.poly.is_zero()) return result;

    result.morley_rank = result.poly.degree();
    result.leading_coefficient = result.poly.leading_coefficient();
    std::set<std::string> top_carriers;
    for (const auto& cell : cells)
        if (cell.poly.degree() == result.poly.degree()) top_carriers.insert(cell.coset_key);
    result.morley_degree = static_cast<long>(top_carriers.size());
    return result;
}

CountResult count(const Input& input, const EngineLimits& limits) {
    return count(input, generic_pattern(input.theory, input.params), limits);
}

PartitionResult parametric_count(const Input& input, const EngineLimits& limits) {
    PartitionResult result;
    for (const auto& pattern : enumerate_patterns(input.theory, input.params, limits)) {
        CountResult r = count(input, pattern, limits);
        auto match = std::find_if(result.entries.begin(), result.entries.end(),
                                  [&](const PartitionEntry& e) { return e.result.poly == r.poly; });
        if (match == result.entries.end()) {
            result.entries.push_back(PartitionEntry{{pattern}, pattern.render(), std::move(r)});
        } else {
            match->patterns.push_back(pattern);
            std::vector<FormulaPtr> parts;
            for (const auto& p : match->patterns) parts.push_back(p.render());
            match->condition = f_or(std::move(parts));
            match->result.threshold_q0 = std::max(match->result.threshold_q0, r.threshold_q0);
            match->result.morley_degree = std::max(match->result.morley_degree, r.morley_degree);
        }
    }
    return result;
}

// ---------- product law ----------

Input conjoin_disjoint(const Input& f, const Input& g) {
    std::set<std::string> f_vars;
    for (const auto& v : f.vars) f_vars.insert(v.name);
    for (const auto& v : g.vars)
        if (f_vars.count(v.name)) throw std::invalid_argument("variable frames overlap on '" + v.name + "'");

    Input combined;
    combined.theory = f.theory;
    combined.vars = f.vars;
    combined.vars.insert(combined.vars.end(), g.vars.begin(), g.vars.end());
    combined.params = f.params;
    std::set<std::string> param_names;
    for (const auto& p : f.params) param_names.insert(p.name);
    for (const auto& p : g.params)
        if (param_names.insert(p.name).second) combined.params.push_back(p);

    NameGen gen;
    gen.reserve_all(f.formula);
    for (const auto& v : combined.vars) gen.reserve(v.name);
    for (const auto& p : combined.params) gen.reserve(p.name);
    combined.formula = f_and({f.formula, rename_bound_apart(g.formula, gen)});
    return combined;
}

bool product_check(const Input& f, const Input& g, const ParamPattern& pattern, const EngineLimits& limits) {
    Input combined = conjoin_disjoint(f, g);
    CountResult rf = count(f, pattern, limits);
    CountResult rg = count(g, pattern, limits);
    CountResult rfg = count(combined, pattern, limits);
    if (!(rfg.poly == rf.poly * rg.poly)) return false;
    if (rf.poly.is_zero() || rg.poly.is_zero()) return rfg.poly.is_zero();
    return rfg.morley_rank == rf.morley_rank + rg.morley_rank &&
           rfg.morley_degree == rf.morley_degree * rg.morley_degree;
}

}  // namespace smcount
