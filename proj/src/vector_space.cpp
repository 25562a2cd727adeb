#include "smcount/vector_space.hpp"

#include "smcount/modarith.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace smcount {

// ---------- RREF ----------

RrefResult rref(ModMatrix m) {
    const int p = m.p;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t pivot = row;
        while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != row)
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(row, c), m.at(pivot, c));
        int scale = mod_inverse(m.at(row, col), p);
        for (std::size_t c = col; c < m.cols; ++c) m.at(row, c) = mod_norm(static_cast<long long>(m.at(row, c)) * scale, p);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == row || m.at(r, col) == 0) continue;
            int factor = m.at(r, col);
            for (std::size_t c = 0; c < m.cols; ++c)
                m.at(r, c) = mod_norm(m.at(r, c) - static_cast<long long>(factor) * m.at(row, c), p);
        }
        pivots.push_back(col);
        ++row;
    }
    m.data.resize(row * m.cols);
    m.rows = row;
    return {std::move(m), row, std::move(pivots)};
}

// ---------- LinPattern ----------

std::vector<int> LinPattern::reduce(std::vector<int> v) const {
    for (const auto& row : basis) {
        std::size_t pivot = 0;
        while (pivot < row.size() && row[pivot] == 0) ++pivot;
        int c = v[pivot];
        if (c == 0) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = mod_norm(v[j] - static_cast<long long>(c) * row[j], prime);
    }
    return v;
}

bool LinPattern::contains(const std::vector<int>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](int x) { return x == 0; });
}

namespace {
LinCoeffs row_to_coeffs(const std::vector<int>& row, const std::vector<Symbol>& params) {
    LinCoeffs coeffs;
    for (std::size_t j = 0; j < params.size(); ++j)
        if (row[j] != 0) coeffs.emplace(params[j], row[j]);
    return coeffs;
}
}  // namespace

FormulaPtr LinPattern::render() const {
    std::vector<FormulaPtr> parts;
    for (const auto& row : basis) parts.push_back(f_lin_atom(prime, row_to_coeffs(row, params)));

    std::set<std::size_t> pivot_cols;
    for (const auto& row : basis) {
        std::size_t pivot = 0;
        while (pivot < row.size() && row[pivot] == 0) ++pivot;
        pivot_cols.insert(pivot);
    }
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < params.size(); ++j)
        if (!pivot_cols.count(j)) free_cols.push_back(j);

    // One disequation per nonzero residue class, modulo scaling: keep the
    // vectors whose first nonzero entry is 1.
    std::vector<int> assign(free_cols.size(), 0);
    for (;;) {
        std::size_t i = 0;
        while (i < assign.size() && assign[i] == prime - 1) assign[i++] = 0;
        if (i == assign.size()) break;
        ++assign[i];
        std::size_t first = 0;
        while (first < assign.size() && assign[first] == 0) ++first;
        if (first == assign.size() || assign[first] != 1) continue;
        std::vector<int> vec(params.size(), 0);
        for (std::size_t j = 0; j < free_cols.size(); ++j) vec[free_cols[j]] = assign[j];
        parts.push_back(f_not(f_lin_atom(prime, row_to_coeffs(vec, params))));
    }
    return f_and(std::move(parts));
}

namespace {
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t r = c.size();
    for (std::size_t i = r; i-- > 0;) {
        if (c[i] + (r - i) < n) {
            ++c[i];
            for (std::size_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}
}  // namespace

std::vector<LinPattern> enumerate_lin_patterns(const std::vector<Symbol>& params, int p,
                                               unsigned long cap) {
    const std::size_t m = params.size();
    unsigned long space = 1;
    for (std::size_t i = 0; i < m; ++i) {
        space *= static_cast<unsigned long>(p);
        if (space > cap)
            throw CapExceeded("parameter space p^" + std::to_string(m) + " exceeds cap of " + std::to_string(cap));
    }

    std::vector<LinPattern> out;
    for (std::size_t r = m + 1; r-- > 0;) {
        // All r-subsets of pivot columns, lexicographic.
        std::vector<std::size_t> pivots(r);
        for (std::size_t i = 0; i < r; ++i) pivots[i] = i;
        do {
            std::vector<std::pair<std::size_t, std::size_t>> free_slots;  // (row, col)
            std::set<std::size_t> pivot_set(pivots.begin(), pivots.end());
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = pivots[i] + 1; j < m; ++j)
                    if (!pivot_set.count(j)) free_slots.emplace_back(i, j);

            std::vector<int> assign(free_slots.size(), 0);
            for (;;) {
                std::vector<std::vector<int>> basis(r, std::vector<int>(m, 0));
                for (std::size_t i = 0; i < r; ++i) basis[i][pivots[i]] = 1;
                for (std::size_t s = 0; s < free_slots.size(); ++s)
                    basis[free_slots[s].first][free_slots[s].second] = assign[s];
                out.push_back(LinPattern{p, params, std::move(basis)});

                std::size_t i = 0;
                while (i < assign.size() && assign[i] == p - 1) assign[i++] = 0;
                if (i == assign.size()) break;
                ++assign[i];
            }
        } while (next_combination(pivots, m));
    }
    return out;
}

// ---------- quantifier elimination ----------

ElimResult eliminate_exists_vs(const Symbol& v, const std::vector<Literal>& conj) {
    auto simplified = simplify_literals(conj);
    if (!simplified) return {f_false(), 0};

    const LinAtom* solved_atom = nullptr;
    for (const auto& l : *simplified) {
        if (l.negated) continue;
        const auto* atom = std::get_if<LinAtom>(&l.atom->node);
        if (atom == nullptr) throw std::logic_error("vector_space literal expected");
        if (atom->coeffs.count(v)) {
            solved_atom = atom;
            break;
        }
    }

    if (solved_atom != nullptr) {
        const int p = solved_atom->prime;
        int cv = solved_atom->coeffs.at(v);
        int neg_inv = mod_norm(-static_cast<long long>(mod_inverse(cv, p)), p);
        LinCoeffs solution;
        for (const auto& [sym, c] : solved_atom->coeffs) {
            if (sym.name == v.name) continue;
            solution.emplace(sym, mod_norm(static_cast<long long>(neg_inv) * c, p));
        }
        std::vector<Literal> out;
        for (const auto& l : *simplified) {
            const auto* atom = std::get_if<LinAtom>(&l.atom->node);
            if (!l.negated && atom == solved_atom) continue;
            FormulaPtr sub = substitute(literal_formula(l), v, TermPayload{solution});
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

    // v occurs only in disequations, each excluding one value of v.
    std::vector<Literal> rest;
    long long excluded = 0;
    for (const auto& l : *simplified) {
        const auto& atom = std::get<LinAtom>(l.atom->node);
        if (atom.coeffs.count(v)) {
            ++excluded;
        } else {
            rest.push_back(l);
        }
    }
    return {conjunction_formula(rest), excluded};
}

// ---------- counting ----------

namespace {
struct CellSystem {
    int p = 2;
    std::size_t n = 0;  // variable columns; then parameters, then the constant column
    std::vector<std::vector<int>> eq_rows;
    std::vector<std::vector<int>> diseq_rows;
};

// rank and consistency of eq_rows plus the selected disequations turned
// into equations; nullopt when inconsistent (some pivot lies outside the
// variable columns).
std::optional<std::size_t> system_rank(const CellSystem& sys, unsigned long long subset) {
    std::size_t rows = sys.eq_rows.size();
    for (std::size_t bit = 0; bit < sys.diseq_rows.size(); ++bit)
        if (subset & (1ull << bit)) ++rows;
    std::size_t cols = sys.eq_rows.empty()
                           ? (sys.diseq_rows.empty() ? sys.n + 1 : sys.diseq_rows[0].size())
                           : sys.eq_rows[0].size();
    ModMatrix m = ModMatrix::zero(sys.p, rows, cols);
    std::size_t r = 0;
    for (const auto& row : sys.eq_rows) {
        std::copy(row.begin(), row.end(), m.data.begin() + static_cast<long>(r * cols));
        ++r;
    }
    for (std::size_t bit = 0; bit < sys.diseq_rows.size(); ++bit) {
        if (!(subset & (1ull << bit))) continue;
        std::copy(sys.diseq_rows[bit].begin(), sys.diseq_rows[bit].end(), m.data.begin() + static_cast<long>(r * cols));
        ++r;
    }
    RrefResult red = rref(std::move(m));
    for (std::size_t pc : red.pivots)
        if (pc >= sys.n) return std::nullopt;
    return red.rank;
}
}  // namespace

VsCellData count_cell_vs(const std::vector<Symbol>& vars, const std::vector<Literal>& conj,
                         const LinPattern& pattern, std::size_t diseq_cap) {
    const int p = pattern.prime;
    const std::size_t n = vars.size();
    const std::size_t m = pattern.params.size();
    const std::size_t cols = n + m + 1;  // trailing constant column, always zero

    std::map<std::string, std::size_t> var_col, param_col;
    for (std::size_t i = 0; i < n; ++i) var_col.emplace(vars[i].name, i);
    for (std::size_t j = 0; j < m; ++j) param_col.emplace(pattern.params[j].name, n + j);

    auto atom_row = [&](const LinAtom& atom) {
        std::vector<int> row(cols, 0);
        for (const auto& [sym, c] : atom.coeffs) {
            auto vit = var_col.find(sym.name);
            if (vit != var_col.end()) {
                row[vit->second] = c;
                continue;
            }
            auto pit = param_col.find(sym.name);
            if (pit == param_col.end())
                throw std::logic_error("symbol '" + sym.name + "' not covered by frame or pattern");
            row[pit->second] = c;
        }
        // Rewrite the parameter part modulo the pattern relations.
        std::vector<int> param_part(row.begin() + static_cast<long>(n), row.begin() + static_cast<long>(n + m));
        param_part = pattern.reduce(std::move(param_part));
        std::copy(param_part.begin(), param_part.end(), row.begin() + static_cast<long>(n));
        return row;
    };

    CellSystem sys;
    sys.p = p;
    sys.n = n;
    std::set<std::vector<int>> seen_diseqs;
    for (const auto& l : conj) {
        const auto* atom = std::get_if<LinAtom>(&l.atom->node);
        if (atom == nullptr) throw std::logic_error("vector_space literal expected");
        std::vector<int> row = atom_row(*atom);
        bool zero = std::all_of(row.begin(), row.end(), [](int x) { return x == 0; });
        if (!l.negated) {
            if (!zero) sys.eq_rows.push_back(std::move(row));
            continue;
        }
        if (zero) return {};  // the disequation denies 0 = 0: empty cell
        // Scale so the first nonzero entry is 1; scalar multiples cut the
        // same set.
        std::size_t first = 0;
        while (row[first] == 0) ++first;
        if (row[first] != 1) {
            int scale = mod_inverse(row[first], p);
            for (int& x : row) x = mod_norm(static_cast<long long>(x) * scale, p);
        }
        if (seen_diseqs.insert(row).second) sys.diseq_rows.push_back(std::move(row));
    }
    if (sys.diseq_rows.size() > diseq_cap || sys.diseq_rows.size() > 62)
        throw CapExceeded("cell has " + std::to_string(sys.diseq_rows.size()) +
                          " disequations, exceeding cap of " + std::to_string(std::min<std::size_t>(diseq_cap, 62)));

    auto base_rank = system_rank(sys, 0);
    if (!base_rank) return {};

    VsCellData out;
    out.dim = static_cast<int>(n - *base_rank);

    // Canonical key for the affine set cut by the equations.
    {
        ModMatrix m0 = ModMatrix::zero(p, sys.eq_rows.size(), cols);
        for (std::size_t r = 0; r < sys.eq_rows.size(); ++r)
            std::copy(sys.eq_rows[r].begin(), sys.eq_rows[r].end(), m0.data.begin() + static_cast<long>(r * cols));
        RrefResult red = rref(std::move(m0));
        std::ostringstream key;
        key << p << ":" << n << ":" << m;
        for (int x : red.mat.data) key << "," << x;
        out.coset_key = key.str();
    }

    const std::size_t k = sys.diseq_rows.size();
    for (unsigned long long subset = 0; subset < (1ull << k); ++subset) {
        auto rank = system_rank(sys, subset);
        if (!rank) continue;
        int sign = __builtin_popcountll(subset) % 2 == 0 ? 1 : -1;
        out.poly = out.poly + IntPoly::monomial(BigInt(sign), n - *rank);
    }
    return out;
}

}  // namespace smcount
