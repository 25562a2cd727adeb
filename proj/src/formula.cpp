#include "smcount/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace smcount {

std::string theory_name(const TheorySpec& t) {
    if (t.kind == TheoryKind::pure_set) return "pure_set";
    return "vector_space p=" + std::to_string(t.prime);
}

// ---------- Construction ----------

namespace {
const FormulaPtr kTrue = std::make_shared<Formula>(Formula{TrueNode{}});
const FormulaPtr kFalse = std::make_shared<Formula>(Formula{FalseNode{}});

int mod_p(long long v, int p) {
    long long r = v % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

// Multiplicative inverse mod a prime.
int inv_mod(int a, int p) {
    int r = 1;
    int e = p - 2;
    long long base = a % p;
    while (e > 0) {
        if (e & 1) r = static_cast<int>(r * base % p);
        base = base * base % p;
        e >>= 1;
    }
    return r;
}
}  // namespace

FormulaPtr f_true() { return kTrue; }
FormulaPtr f_false() { return kFalse; }

FormulaPtr f_pure_atom(const Symbol& a, const Symbol& b) {
    if (a.name == b.name) return kTrue;
    PureAtom atom = SymbolLess{}(a, b) ? PureAtom{a, b} : PureAtom{b, a};
    return std::make_shared<Formula>(Formula{std::move(atom)});
}

FormulaPtr f_lin_atom(int prime, const LinCoeffs& coeffs) {
    LinCoeffs reduced;
    for (const auto& [sym, c] : coeffs) {
        int r = mod_p(c, prime);
        if (r != 0) reduced.emplace(sym, r);
    }
    if (reduced.empty()) return kTrue;
    int lead = reduced.begin()->second;
    if (lead != 1) {
        int scale = inv_mod(lead, prime);
        for (auto& [sym, c] : reduced) c = mod_p(static_cast<long long>(c) * scale, prime);
    }
    return std::make_shared<Formula>(Formula{LinAtom{prime, std::move(reduced)}});
}

FormulaPtr f_not(FormulaPtr f) {
    if (is_true(f)) return kFalse;
    if (is_false(f)) return kTrue;
    return std::make_shared<Formula>(Formula{NotNode{std::move(f)}});
}

FormulaPtr f_and(std::vector<FormulaPtr> parts) {
    std::vector<FormulaPtr> flat;
    for (auto& p : parts) {
        if (is_true(p)) continue;
        if (is_false(p)) return kFalse;
        if (const auto* a = std::get_if<AndNode>(&p->node)) {
            flat.insert(flat.end(), a->parts.begin(), a->parts.end());
        } else {
            flat.push_back(std::move(p));
        }
    }
    if (flat.empty()) return kTrue;
    if (flat.size() == 1) return flat.front();
    return std::make_shared<Formula>(Formula{AndNode{std::move(flat)}});
}

FormulaPtr f_or(std::vector<FormulaPtr> parts) {
    std::vector<FormulaPtr> flat;
    for (auto& p : parts) {
        if (is_false(p)) continue;
        if (is_true(p)) return kTrue;
        if (const auto* a = std::get_if<OrNode>(&p->node)) {
            flat.insert(flat.end(), a->parts.begin(), a->parts.end());
        } else {
            flat.push_back(std::move(p));
        }
    }
    if (flat.empty()) return kFalse;
    if (flat.size() == 1) return flat.front();
    return std::make_shared<Formula>(Formula{OrNode{std::move(flat)}});
}

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{ImpliesNode{std::move(a), std::move(b)}});
}

FormulaPtr f_exists(const Symbol& v, FormulaPtr body) {
    return std::make_shared<Formula>(Formula{QuantNode{false, v, std::move(body)}});
}

FormulaPtr f_forall(const Symbol& v, FormulaPtr body) {
    return std::make_shared<Formula>(Formula{QuantNode{true, v, std::move(body)}});
}

FormulaPtr exists_tuple(const std::vector<Symbol>& tuple, FormulaPtr body) {
    for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) body = f_exists(*it, std::move(body));
    return body;
}

FormulaPtr forall_tuple(const std::vector<Symbol>& tuple, FormulaPtr body) {
    for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) body = f_forall(*it, std::move(body));
    return body;
}

bool is_true(const FormulaPtr& f) { return std::holds_alternative<TrueNode>(f->node); }
bool is_false(const FormulaPtr& f) { return std::holds_alternative<FalseNode>(f->node); }

bool is_atom(const FormulaPtr& f) {
    return std::holds_alternative<PureAtom>(f->node) || std::holds_alternative<LinAtom>(f->node);
}

bool is_literal(const FormulaPtr& f) {
    if (is_atom(f)) return true;
    if (const auto* n = std::get_if<NotNode>(&f->node)) return is_atom(n->inner);
    return false;
}

// ---------- Equality ----------

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, TrueNode> || std::is_same_v<T, FalseNode>) {
                return true;
            } else if constexpr (std::is_same_v<T, PureAtom> || std::is_same_v<T, LinAtom>) {
                return x == y;
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return equal(x.inner, y.inner);
            } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                if (x.parts.size() != y.parts.size()) return false;
                for (std::size_t i = 0; i < x.parts.size(); ++i)
                    if (!equal(x.parts[i], y.parts[i])) return false;
                return true;
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
            } else {
                return x.universal == y.universal && x.var == y.var && equal(x.body, y.body);
            }
        },
        a->node);
}

namespace {
using RenameMap = std::map<std::string, std::string>;

std::string mapped(const RenameMap& m, const std::string& s) {
    auto it = m.find(s);
    return it == m.end() ? s : it->second;
}

bool alpha_equal_rec(const FormulaPtr& a, const FormulaPtr& b, RenameMap& ab, RenameMap& ba) {
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, TrueNode> || std::is_same_v<T, FalseNode>) {
                return true;
            } else if constexpr (std::is_same_v<T, PureAtom>) {
                // Renaming may break the lhs < rhs order, so compare as sets.
                auto l1 = mapped(ab, x.lhs.name), r1 = mapped(ab, x.rhs.name);
                return (l1 == y.lhs.name && r1 == y.rhs.name) || (l1 == y.rhs.name && r1 == y.lhs.name);
            } else if constexpr (std::is_same_v<T, LinAtom>) {
                if (x.prime != y.prime || x.coeffs.size() != y.coeffs.size()) return false;
                LinCoeffs renamed;
                for (const auto& [sym, c] : x.coeffs) renamed.emplace(Symbol{mapped(ab, sym.name), sym.kind}, c);
                // Rescale: renaming can change which coefficient leads.
                int lead = renamed.begin()->second;
                if (lead != 1) {
                    int scale = inv_mod(lead, x.prime);
                    for (auto& [sym, c] : renamed) c = mod_p(static_cast<long long>(c) * scale, x.prime);
                }
                return renamed == y.coeffs;
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return alpha_equal_rec(x.inner, y.inner, ab, ba);
            } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                if (x.parts.size() != y.parts.size()) return false;
                for (std::size_t i = 0; i < x.parts.size(); ++i)
                    if (!alpha_equal_rec(x.parts[i], y.parts[i], ab, ba)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return alpha_equal_rec(x.lhs, y.lhs, ab, ba) && alpha_equal_rec(x.rhs, y.rhs, ab, ba);
            } else {
                if (x.universal != y.universal) return false;
                RenameMap ab2 = ab, ba2 = ba;
                ab2[x.var.name] = y.var.name;
                ba2[y.var.name] = x.var.name;
                return alpha_equal_rec(x.body, y.body, ab2, ba2);
            }
        },
        a->node);
}
}  // namespace

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
    RenameMap ab, ba;
    return alpha_equal_rec(a, b, ab, ba);
}

// ---------- Variable bookkeeping ----------

namespace {
void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& seen, FreeSymbols& out) {
    auto record = [&](const Symbol& s) {
        if (bound.count(s.name) || seen.count(s.name)) return;
        seen.insert(s.name);
        (s.kind == SymbolKind::variable ? out.variables : out.parameters).push_back(s);
    };
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PureAtom>) {
                record(x.lhs);
                record(x.rhs);
            } else if constexpr (std::is_same_v<T, LinAtom>) {
                for (const auto& [sym, c] : x.coeffs) record(sym);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                collect_free(x.inner, bound, seen, out);
            } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                for (const auto& p : x.parts) collect_free(p, bound, seen, out);
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                collect_free(x.lhs, bound, seen, out);
                collect_free(x.rhs, bound, seen, out);
            } else if constexpr (std::is_same_v<T, QuantNode>) {
                bool inserted = bound.insert(x.var.name).second;
                collect_free(x.body, bound, seen, out);
                if (inserted) bound.erase(x.var.name);
            }
        },
        f->node);
}
}  // namespace

FreeSymbols free_symbols(const FormulaPtr& f) {
    FreeSymbols out;
    std::set<std::string> bound, seen;
    collect_free(f, bound, seen, out);
    return out;
}

std::set<std::string> all_names(const FormulaPtr& f) {
    std::set<std::string> names;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PureAtom>) {
                names.insert(x.lhs.name);
                names.insert(x.rhs.name);
            } else if constexpr (std::is_same_v<T, LinAtom>) {
                for (const auto& [sym, c] : x.coeffs) names.insert(sym.name);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                names.merge(all_names(x.inner));
            } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                for (const auto& p : x.parts) names.merge(all_names(p));
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                names.merge(all_names(x.lhs));
                names.merge(all_names(x.rhs));
            } else if constexpr (std::is_same_v<T, QuantNode>) {
                names.insert(x.var.name);
                names.merge(all_names(x.body));
            }
        },
        f->node);
    return names;
}

void NameGen::reserve_all(const FormulaPtr& f) {
    for (const auto& n : all_names(f)) used_.insert(n);
}

std::string NameGen::fresh(const std::string& base) {
    if (used_.insert(base).second) return base;
    for (int k = 2;; ++k) {
        std::string candidate = base + "_" + std::to_string(k);
        if (used_.insert(candidate).second) return candidate;
    }
}

namespace {
FormulaPtr rename_bound_rec(const FormulaPtr& f, NameGen& gen, RenameMap& map) {
    return std::visit(
        [&](const auto& x) -> FormulaPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TrueNode> || std::is_same_v<T, FalseNode>) {
                return f;
            } else if constexpr (std::is_same_v<T, PureAtom>) {
                return f_pure_atom({mapped(map, x.lhs.name), x.lhs.kind}, {mapped(map, x.rhs.name), x.rhs.kind});
            } else if constexpr (std::is_same_v<T, LinAtom>) {
                LinCoeffs renamed;
                for (const auto& [sym, c] : x.coeffs) renamed.emplace(Symbol{mapped(map, sym.name), sym.kind}, c);
                return f_lin_atom(x.prime, renamed);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return f_not(rename_bound_rec(x.inner, gen, map));
            } else if constexpr (std::is_same_v<T, AndNode>) {
                std::vector<FormulaPtr> parts;
                for (const auto& p : x.parts) parts.push_back(rename_bound_rec(p, gen, map));
                return f_and(std::move(parts));
            } else if constexpr (std::is_same_v<T, OrNode>) {
                std::vector<FormulaPtr> parts;
                for (const auto& p : x.parts) parts.push_back(rename_bound_rec(p, gen, map));
                return f_or(std::move(parts));
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return f_implies(rename_bound_rec(x.lhs, gen, map), rename_bound_rec(x.rhs, gen, map));
            } else {
                Symbol fresh{gen.fresh(x.var.name), SymbolKind::variable};
                RenameMap inner = map;
                inner[x.var.name] = fresh.name;
                FormulaPtr body = rename_bound_rec(x.body, gen, inner);
                return x.universal ? f_forall(fresh, std::move(body)) : f_exists(fresh, std::move(body));
            }
        },
        f->node);
}
}  // namespace

FormulaPtr rename_bound_apart(const FormulaPtr& f, NameGen& gen) {
    RenameMap map;
    return rename_bound_rec(f, gen, map);
}

// ---------- NNF ----------

namespace {
FormulaPtr nnf(const FormulaPtr& f, bool negate) {
    return std::visit(
        [&](const auto& x) -> FormulaPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TrueNode>) {
                return negate ? f_false() : f;
            } else if constexpr (std::is_same_v<T, FalseNode>) {
                return negate ? f_true() : f;
            } else if constexpr (std::is_same_v<T, PureAtom> || std::is_same_v<T, LinAtom>) {
                return negate ? f_not(f) : f;
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return nnf(x.inner, !negate);
            } else if constexpr (std::is_same_v<T, AndNode>) {
                std::vector<FormulaPtr> parts;
                for (const auto& p : x.parts) parts.push_back(nnf(p, negate));
                return negate ? f_or(std::move(parts)) : f_and(std::move(parts));
            } else if constexpr (std::is_same_v<T, OrNode>) {
                std::vector<FormulaPtr> parts;
                for (const auto& p : x.parts) parts.push_back(nnf(p, negate));
                return negate ? f_and(std::move(parts)) : f_or(std::move(parts));
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                if (negate) return f_and({nnf(x.lhs, false), nnf(x.rhs, true)});
                return f_or({nnf(x.lhs, true), nnf(x.rhs, false)});
            } else {
                FormulaPtr body = nnf(x.body, negate);
                bool universal = negate ? !x.universal : x.universal;
                return universal ? f_forall(x.var, std::move(body)) : f_exists(x.var, std::move(body));
            }
        },
        f->node);
}
}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false); }

// ---------- Substitution ----------

FormulaPtr substitute(const FormulaPtr& f, const Symbol& s, const TermPayload& t) {
    return std::visit(
        [&](const auto& x) -> FormulaPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TrueNode> || std::is_same_v<T, FalseNode>) {
                return f;
            } else if constexpr (std::is_same_v<T, PureAtom>) {
                if (x.lhs.name != s.name && x.rhs.name != s.name) return f;
                const Symbol* repl = std::get_if<Symbol>(&t);
                if (repl == nullptr) throw std::logic_error("pure_set substitution payload must be a symbol");
                Symbol a = x.lhs.name == s.name ? *repl : x.lhs;
                Symbol b = x.rhs.name == s.name ? *repl : x.rhs;
                return f_pure_atom(a, b);
            } else if constexpr (std::is_same_v<T, LinAtom>) {
                auto it = x.coeffs.find(s);
                if (it == x.coeffs.end()) return f;
                int c = it->second;
                LinCoeffs coeffs = x.coeffs;
                coeffs.erase(s);
                LinCoeffs repl;
                if (const Symbol* sym = std::get_if<Symbol>(&t)) {
                    repl.emplace(*sym, 1);
                } else {
                    repl = std::get<LinCoeffs>(t);
                }
                for (const auto& [sym, rc] : repl) {
                    coeffs[sym] = mod_p(coeffs.count(sym) ? coeffs[sym] + static_cast<long long>(c) * rc
                                                          : static_cast<long long>(c) * rc,
                                        x.prime);
                }
                return f_lin_atom(x.prime, coeffs);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return f_not(substitute(x.inner, s, t));
            } else if constexpr (std::is_same_v<T, AndNode>) {
                std::vector<FormulaPtr> parts;
                for (const auto& p : x.parts) parts.push_back(substitute(p, s, t));
                return f_and(std::move(parts));
            } else if constexpr (std::is_same_v<T, OrNode>) {
                std::vector<FormulaPtr> parts;
                for (const auto& p : x.parts) parts.push_back(substitute(p, s, t));
                return f_or(std::move(parts));
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return f_implies(substitute(x.lhs, s, t), substitute(x.rhs, s, t));
            } else {
                if (x.var.name == s.name) return f;
                bool captures = false;
                if (const Symbol* sym = std::get_if<Symbol>(&t)) {
                    captures = sym->name == x.var.name;
                } else {
                    for (const auto& [sym, c] : std::get<LinCoeffs>(t))
                        if (sym.name == x.var.name) captures = true;
                }
                if (captures) throw std::logic_error("variable capture during substitution: " + x.var.name);
                FormulaPtr body = substitute(x.body, s, t);
                return x.universal ? f_forall(x.var, std::move(body)) : f_exists(x.var, std::move(body));
            }
        },
        f->node);
}

// ---------- Rendering ----------

namespace {
std::string render_lin_sum(const LinAtom& a) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [sym, c] : a.coeffs) {
        if (!first) out << " + ";
        first = false;
        if (c != 1) out << c << "*";
        out << sym.name;
    }
    return out.str();
}

std::string render_rec(const FormulaPtr& f);

std::string render_operand(const FormulaPtr& f) { return "(" + render_rec(f) + ")"; }

std::string render_rec(const FormulaPtr& f) {
    return std::visit(
        [&](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TrueNode>) {
                return "true";
            } else if constexpr (std::is_same_v<T, FalseNode>) {
                return "false";
            } else if constexpr (std::is_same_v<T, PureAtom>) {
                return x.lhs.name + " = " + x.rhs.name;
            } else if constexpr (std::is_same_v<T, LinAtom>) {
                return render_lin_sum(x) + " = 0";
            } else if constexpr (std::is_same_v<T, NotNode>) {
                if (const auto* a = std::get_if<PureAtom>(&x.inner->node))
                    return a->lhs.name + " != " + a->rhs.name;
                if (const auto* a = std::get_if<LinAtom>(&x.inner->node)) return render_lin_sum(*a) + " != 0";
                return "!" + render_operand(x.inner);
            } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                const char* sep = std::is_same_v<T, AndNode> ? " & " : " | ";
                std::string out;
                for (std::size_t i = 0; i < x.parts.size(); ++i) {
                    if (i) out += sep;
                    out += render_operand(x.parts[i]);
                }
                return out;
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return render_operand(x.lhs) + " -> " + render_operand(x.rhs);
            } else {
                std::string body =
                    is_literal(x.body) || is_true(x.body) || is_false(x.body) ? render_rec(x.body) : render_operand(x.body);
                return std::string(x.universal ? "forall " : "exists ") + x.var.name + ". " + body;
            }
        },
        f->node);
}
}  // namespace

std::string render(const FormulaPtr& f) { return render_rec(f); }

}  // namespace smcount
