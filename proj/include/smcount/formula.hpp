#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smcount {

enum class TheoryKind { pure_set, vector_space };

struct TheorySpec {
    TheoryKind kind = TheoryKind::pure_set;
    int prime = 0;  // meaningful only for vector_space

    bool operator==(const TheorySpec&) const = default;
};

std::string theory_name(const TheorySpec& t);

enum class SymbolKind { variable, parameter };

// A named object variable or parameter constant. Within one formula a name
// has exactly one kind, so ordering and equality go by name.
struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::variable;

    bool operator==(const Symbol& o) const { return name == o.name && kind == o.kind; }
};

struct SymbolLess {
    bool operator()(const Symbol& a, const Symbol& b) const { return a.name < b.name; }
};

// ---------- AST nodes ----------

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// lhs = rhs between two symbols; canonical with lhs.name < rhs.name.
// Atoms with identical sides never exist: the factory yields True instead.
struct PureAtom {
    Symbol lhs, rhs;
    bool operator==(const PureAtom& o) const { return lhs == o.lhs && rhs == o.rhs; }
};

using LinCoeffs = std::map<Symbol, int, SymbolLess>;

// sum of coeff*symbol = 0 over F_p; no zero coefficients and the first
// coefficient (in symbol order) is scaled to 1. The empty sum is True and
// never stored as an atom.
struct LinAtom {
    int prime = 2;
    LinCoeffs coeffs;
    bool operator==(const LinAtom& o) const { return prime == o.prime && coeffs == o.coeffs; }
};

struct TrueNode {
    bool operator==(const TrueNode&) const { return true; }
};
struct FalseNode {
    bool operator==(const FalseNode&) const { return true; }
};
struct NotNode {
    FormulaPtr inner;
};
struct AndNode {
    std::vector<FormulaPtr> parts;  // nonempty
};
struct OrNode {
    std::vector<FormulaPtr> parts;  // nonempty
};
struct ImpliesNode {
    FormulaPtr lhs, rhs;
};
struct QuantNode {
    bool universal = false;
    Symbol var;
    FormulaPtr body;
};

struct Formula {
    std::variant<TrueNode, FalseNode, PureAtom, LinAtom, NotNode, AndNode, OrNode, ImpliesNode, QuantNode> node;
};

// ---------- Construction (lightly normalizing) ----------

FormulaPtr f_true();
FormulaPtr f_false();
// Normalizes x = x to True.
FormulaPtr f_pure_atom(const Symbol& a, const Symbol& b);
// Reduces coefficients mod p, drops zeros, scales the leading coefficient to
// 1; an empty sum becomes True.
FormulaPtr f_lin_atom(int prime, const LinCoeffs& coeffs);
// not(true) = false and not(false) = true; double negation is kept.
FormulaPtr f_not(FormulaPtr f);
// Flattens nested conjunctions, drops True, collapses on False; empty = True.
FormulaPtr f_and(std::vector<FormulaPtr> parts);
// Dual of f_and.
FormulaPtr f_or(std::vector<FormulaPtr> parts);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_exists(const Symbol& v, FormulaPtr body);
FormulaPtr f_forall(const Symbol& v, FormulaPtr body);
// Quantifier nests over a whole tuple, first component outermost.
FormulaPtr exists_tuple(const std::vector<Symbol>& tuple, FormulaPtr body);
FormulaPtr forall_tuple(const std::vector<Symbol>& tuple, FormulaPtr body);

bool is_true(const FormulaPtr& f);
bool is_false(const FormulaPtr& f);
bool is_atom(const FormulaPtr& f);
// An atom or a negated atom.
bool is_literal(const FormulaPtr& f);

bool equal(const FormulaPtr& a, const FormulaPtr& b);
// Structural equality up to renaming of bound variables.
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);

// ---------- Variable bookkeeping ----------

struct FreeSymbols {
    std::vector<Symbol> variables;   // first occurrence, left to right
    std::vector<Symbol> parameters;  // likewise
};

FreeSymbols free_symbols(const FormulaPtr& f);

// Every symbol name appearing in the formula (free or bound).
std::set<std::string> all_names(const FormulaPtr& f);

// Produces fresh identifier names, never repeating one it has seen.
class NameGen {
  public:
    void reserve(const std::string& name) { used_.insert(name); }
    void reserve_all(const FormulaPtr& f);
    std::string fresh(const std::string& base);

  private:
    std::set<std::string> used_;
};

// Renames every bound variable to a fresh name from gen. Used before
// combining independently parsed formulas so bound names stay unique.
FormulaPtr rename_bound_apart(const FormulaPtr& f, NameGen& gen);

// ---------- Transformations ----------

// Negation normal form: Implies eliminated, negations pushed onto atoms,
// quantifiers preserved.
FormulaPtr to_nnf(const FormulaPtr& f);

// The replacement payload: a single symbol for pure_set, a linear
// combination for vector_space.
using TermPayload = std::variant<Symbol, LinCoeffs>;

// Capture-free replacement of free occurrences of s. Linear atoms are
// renormalized (coefficients combined mod p, zeros dropped).
FormulaPtr substitute(const FormulaPtr& f, const Symbol& s, const TermPayload& t);

// ---------- Parsing ----------

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

// A parsed declaration block plus formula. The declared variable list is the
// counting frame even when a variable does not occur in the formula.
struct Input {
    TheorySpec theory;
    std::vector<Symbol> vars;    // declaration order
    std::vector<Symbol> params;  // declaration order
    FormulaPtr formula;
    // One entry per 'var' declaration statement; PSI sections use the first
    // two groups as the left/right tuples of a correspondence.
    std::vector<std::vector<Symbol>> var_groups;
};

// text = {decl} formula, per the surface grammar. Bound variables are
// renamed apart at parse time; free identifiers must be declared.
Input parse_input(std::string_view text, const TheorySpec& theory);

// A whole input file: theory header, optional shared declarations, then
// either a single formula or named sections (V:, W:, E:, PSI:).
struct InputFile {
    TheorySpec theory;
    std::optional<Input> main;
    std::map<std::string, Input> sections;
};

InputFile parse_file(std::string_view text);

// Inverse of parsing up to bound-variable names.
std::string render(const FormulaPtr& f);

}  // namespace smcount
