#include "smcount/formula.hpp"

#include <cctype>
#include <utility>

namespace smcount {

namespace {

enum class Tok {
    ident,
    number,
    lparen,
    rparen,
    comma,
    semi,
    dot,
    colon,
    eq,
    neq,
    plus,
    minus,
    star,
    amp,
    bar,
    bang,
    arrow,
    iff,
    end
};

struct Token {
    Tok kind;
    std::string text;
    long long value = 0;
    std::size_t pos = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_start(c)) {
            while (i < text.size() && ident_char(text[i])) ++i;
            out.push_back({Tok::ident, std::string(text.substr(start, i - start)), 0, start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i - start > 18) throw ParseError("integer literal too large", start);
            out.push_back({Tok::number, std::string(text.substr(start, i - start)),
                           std::stoll(std::string(text.substr(start, i - start))), start});
            continue;
        }
        auto two = text.substr(i, 2);
        auto three = text.substr(i, 3);
        if (three == "<->") {
            out.push_back({Tok::iff, "<->", 0, start});
            i += 3;
        } else if (two == "!=") {
            out.push_back({Tok::neq, "!=", 0, start});
            i += 2;
        } else if (two == "->") {
            out.push_back({Tok::arrow, "->", 0, start});
            i += 2;
        } else {
            Tok kind;
            switch (c) {
                case '(': kind = Tok::lparen; break;
                case ')': kind = Tok::rparen; break;
                case ',': kind = Tok::comma; break;
                case ';': kind = Tok::semi; break;
                case '.': kind = Tok::dot; break;
                case ':': kind = Tok::colon; break;
                case '=': kind = Tok::eq; break;
                case '+': kind = Tok::plus; break;
                case '-': kind = Tok::minus; break;
                case '*': kind = Tok::star; break;
                case '&': kind = Tok::amp; break;
                case '|': kind = Tok::bar; break;
                case '!': kind = Tok::bang; break;
                default: throw ParseError(std::string("unexpected character '") + c + "'", start);
            }
            out.push_back({kind, std::string(1, c), 0, start});
            ++i;
        }
    }
    out.push_back({Tok::end, "", 0, text.size()});
    return out;
}

bool is_keyword(const std::string& s) {
    return s == "var" || s == "param" || s == "exists" || s == "forall" || s == "true" || s == "false" ||
           s == "theory";
}

class Parser {
  public:
    Parser(std::vector<Token> tokens, TheorySpec theory, NameGen* shared_names)
        : tokens_(std::move(tokens)), theory_(theory), names_(shared_names) {}

    bool at_end() const { return at(Tok::end); }
    const Token& peek() const { return tokens_[pos_]; }

    bool at_decl() const { return at(Tok::ident) && (peek().text == "var" || peek().text == "param"); }

    bool at_section_label() const {
        return at(Tok::ident) && !is_keyword(peek().text) && tokens_[pos_ + 1].kind == Tok::colon;
    }

    std::string take_section_label() {
        std::string label = expect(Tok::ident, "section label").text;
        expect(Tok::colon, "':'");
        return label;
    }

    TheorySpec parse_theory_header() {
        const Token& kw = expect(Tok::ident, "'theory'");
        if (kw.text != "theory") throw ParseError("expected 'theory' header", kw.pos);
        const Token& name = expect(Tok::ident, "theory name");
        if (name.text == "pure_set") {
            theory_ = {TheoryKind::pure_set, 0};
            return theory_;
        }
        if (name.text != "vector_space") throw ParseError("unknown theory '" + name.text + "'", name.pos);
        const Token& p = expect(Tok::ident, "'p'");
        if (p.text != "p") throw ParseError("expected 'p=<prime>'", p.pos);
        expect(Tok::eq, "'='");
        const Token& num = expect(Tok::number, "prime");
        if (num.value < 2 || !is_prime(num.value)) throw ParseError("p must be a prime", num.pos);
        theory_ = {TheoryKind::vector_space, static_cast<int>(num.value)};
        return theory_;
    }

    void parse_decls(Input& input, std::vector<std::vector<Symbol>>* var_groups) {
        while (at_decl() && !at_section_label()) parse_decl(input, var_groups);
    }

    FormulaPtr parse_formula_top() { return parse_formula(); }

    // Drops all local declarations and re-declares the shared symbols.
    void begin_section(const std::vector<Symbol>& shared) {
        declared_.clear();
        scopes_.clear();
        for (const auto& s : shared) declared_.emplace(s.name, s);
    }

  private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    TheorySpec theory_;
    NameGen* names_;
    std::map<std::string, Symbol> declared_;
    std::vector<std::map<std::string, Symbol>> scopes_;

    static bool is_prime(long long n) {
        if (n < 2) return false;
        for (long long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    bool at(Tok k) const { return tokens_[pos_].kind == k; }

    const Token& expect(Tok k, const std::string& what) {
        if (!at(k)) throw ParseError("expected " + what, peek().pos);
        return tokens_[pos_++];
    }

    bool accept(Tok k) {
        if (!at(k)) return false;
        ++pos_;
        return true;
    }

    void declare(const Symbol& s, std::size_t pos) {
        if (!declared_.emplace(s.name, s).second) throw ParseError("duplicate declaration of '" + s.name + "'", pos);
        names_->reserve(s.name);
    }

    void parse_decl(Input& input, std::vector<std::vector<Symbol>>* var_groups) {
        const Token& kw = expect(Tok::ident, "declaration");
        SymbolKind kind = kw.text == "var" ? SymbolKind::variable : SymbolKind::parameter;
        std::vector<Symbol> group;
        for (;;) {
            const Token& name = expect(Tok::ident, "identifier");
            if (is_keyword(name.text)) throw ParseError("'" + name.text + "' is a reserved word", name.pos);
            Symbol s{name.text, kind};
            declare(s, name.pos);
            (kind == SymbolKind::variable ? input.vars : input.params).push_back(s);
            group.push_back(s);
            if (!accept(Tok::comma)) break;
        }
        expect(Tok::semi, "';'");
        if (kind == SymbolKind::variable && var_groups != nullptr) var_groups->push_back(std::move(group));
    }

    Symbol resolve(const Token& tok) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(tok.text);
            if (found != it->end()) return found->second;
        }
        auto found = declared_.find(tok.text);
        if (found != declared_.end()) return found->second;
        throw ParseError("undeclared symbol '" + tok.text + "'", tok.pos);
    }

    FormulaPtr parse_formula() {
        FormulaPtr lhs = parse_impl();
        while (accept(Tok::iff)) {
            FormulaPtr rhs = parse_impl();
            lhs = f_and({f_implies(lhs, rhs), f_implies(rhs, lhs)});
        }
        return lhs;
    }

    FormulaPtr parse_impl() {
        FormulaPtr lhs = parse_disj();
        if (accept(Tok::arrow)) return f_implies(std::move(lhs), parse_impl());
        return lhs;
    }

    FormulaPtr parse_disj() {
        std::vector<FormulaPtr> parts{parse_conj()};
        while (accept(Tok::bar)) parts.push_back(parse_conj());
        return parts.size() == 1 ? parts.front() : f_or(std::move(parts));
    }

    FormulaPtr parse_conj() {
        std::vector<FormulaPtr> parts{parse_unary()};
        while (accept(Tok::amp)) parts.push_back(parse_unary());
        return parts.size() == 1 ? parts.front() : f_and(std::move(parts));
    }

    FormulaPtr parse_quantifier(bool universal) {
        const Token& name = expect(Tok::ident, "bound variable");
        if (is_keyword(name.text)) throw ParseError("'" + name.text + "' is a reserved word", name.pos);
        auto found = declared_.find(name.text);
        if (found != declared_.end() && found->second.kind == SymbolKind::parameter)
            throw ParseError("cannot bind declared parameter '" + name.text + "'", name.pos);
        expect(Tok::dot, "'.'");
        Symbol bound{names_->fresh(name.text), SymbolKind::variable};
        scopes_.push_back({{name.text, bound}});
        FormulaPtr body = parse_unary();
        scopes_.pop_back();
        return universal ? f_forall(bound, std::move(body)) : f_exists(bound, std::move(body));
    }

    FormulaPtr parse_unary() {
        if (accept(Tok::bang)) return f_not(parse_unary());
        if (at(Tok::ident)) {
            const std::string& word = peek().text;
            if (word == "exists") {
                ++pos_;
                return parse_quantifier(false);
            }
            if (word == "forall") {
                ++pos_;
                return parse_quantifier(true);
            }
            if (word == "true") {
                ++pos_;
                return f_true();
            }
            if (word == "false") {
                ++pos_;
                return f_false();
            }
            return parse_atom();
        }
        if (accept(Tok::lparen)) {
            FormulaPtr inner = parse_formula();
            expect(Tok::rparen, "')'");
            return inner;
        }
        if (theory_.kind == TheoryKind::vector_space && at(Tok::number)) return parse_atom();
        throw ParseError("expected a formula", peek().pos);
    }

    FormulaPtr parse_atom() {
        if (theory_.kind == TheoryKind::pure_set) {
            const Token& lhs = expect(Tok::ident, "identifier");
            if (is_keyword(lhs.text)) throw ParseError("'" + lhs.text + "' is a reserved word", lhs.pos);
            bool negated;
            if (accept(Tok::eq)) {
                negated = false;
            } else if (accept(Tok::neq)) {
                negated = true;
            } else {
                throw ParseError("expected '=' or '!='", peek().pos);
            }
            const Token& rhs = expect(Tok::ident, "identifier");
            if (is_keyword(rhs.text)) throw ParseError("'" + rhs.text + "' is a reserved word", rhs.pos);
            FormulaPtr atom = f_pure_atom(resolve(lhs), resolve(rhs));
            return negated ? f_not(std::move(atom)) : atom;
        }
        LinCoeffs lhs = parse_linterm();
        bool negated;
        if (accept(Tok::eq)) {
            negated = false;
        } else if (accept(Tok::neq)) {
            negated = true;
        } else {
            throw ParseError("expected '=' or '!='", peek().pos);
        }
        LinCoeffs rhs = parse_linterm();
        for (const auto& [sym, c] : rhs) {
            auto it = lhs.find(sym);
            if (it == lhs.end()) {
                lhs.emplace(sym, -c);
            } else {
                it->second -= c;
            }
        }
        FormulaPtr atom = f_lin_atom(theory_.prime, lhs);
        return negated ? f_not(std::move(atom)) : atom;
    }

    // [coeff "*"] ident {("+" | "-") [coeff "*"] ident} | "0"
    LinCoeffs parse_linterm() {
        LinCoeffs coeffs;
        if (at(Tok::number) && peek().value == 0 && tokens_[pos_ + 1].kind != Tok::star) {
            ++pos_;
            return coeffs;
        }
        int sign = 1;
        for (;;) {
            long long coeff = 1;
            if (at(Tok::number)) {
                coeff = peek().value;
                ++pos_;
                expect(Tok::star, "'*'");
            }
            const Token& name = expect(Tok::ident, "identifier");
            if (is_keyword(name.text)) throw ParseError("'" + name.text + "' is a reserved word", name.pos);
            Symbol sym = resolve(name);
            int contribution = sign * static_cast<int>(coeff % theory_.prime);
            auto it = coeffs.find(sym);
            if (it == coeffs.end()) {
                coeffs.emplace(sym, contribution);
            } else {
                it->second += contribution;
            }
            if (accept(Tok::plus)) {
                sign = 1;
            } else if (accept(Tok::minus)) {
                sign = -1;
            } else {
                break;
            }
        }
        return coeffs;
    }
};

}  // namespace

Input parse_input(std::string_view text, const TheorySpec& theory) {
    NameGen names;
    Parser parser(tokenize(text), theory, &names);
    Input input;
    input.theory = theory;
    parser.parse_decls(input, &input.var_groups);
    input.formula = parser.parse_formula_top();
    if (!parser.at_end()) throw ParseError("trailing input after formula", parser.peek().pos);
    return input;
}

InputFile parse_file(std::string_view text) {
    NameGen names;
    Parser parser(tokenize(text), TheorySpec{}, &names);
    InputFile file;
    file.theory = parser.parse_theory_header();

    // Declarations before the first section (or before the single formula).
    Input globals;
    globals.theory = file.theory;
    parser.parse_decls(globals, nullptr);

    if (!parser.at_section_label()) {
        globals.formula = parser.parse_formula_top();
        if (!parser.at_end()) throw ParseError("trailing input after formula", parser.peek().pos);
        file.main = std::move(globals);
        return file;
    }

    if (!globals.vars.empty())
        throw ParseError("variables must be declared inside sections, not globally", parser.peek().pos);

    while (!parser.at_end()) {
        if (!parser.at_section_label()) throw ParseError("expected a section label", parser.peek().pos);
        std::size_t label_pos = parser.peek().pos;
        std::string label = parser.take_section_label();
        if (label != "V" && label != "W" && label != "E" && label != "PSI")
            throw ParseError("unknown section '" + label + "'", label_pos);
        std::vector<Symbol> shared = globals.params;
        if (label == "E") {
            // E ranges over V's variables followed by W's.
            for (const char* side : {"V", "W"}) {
                auto it = file.sections.find(side);
                if (it == file.sections.end())
                    throw ParseError(std::string("section '") + side + "' must come before 'E'", label_pos);
                shared.insert(shared.end(), it->second.vars.begin(), it->second.vars.end());
            }
        }
        parser.begin_section(shared);
        Input input;
        input.theory = file.theory;
        input.params = globals.params;
        parser.parse_decls(input, &input.var_groups);
        input.formula = parser.parse_formula_top();
        if (label == "PSI" && input.var_groups.size() != 2)
            throw ParseError("PSI section needs two 'var' declarations (left tuple, right tuple)", label_pos);
        if (!file.sections.emplace(label, std::move(input)).second)
            throw ParseError("duplicate section '" + label + "'", label_pos);
    }
    return file;
}

}  // namespace smcount
