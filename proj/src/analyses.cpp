#include "smcount/analyses.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace smcount {

// ---------- counting quantifiers ----------

namespace {
FormulaPtr tuple_eq(const TheorySpec& theory, const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (theory.kind == TheoryKind::pure_set) {
            parts.push_back(f_pure_atom(a[i], b[i]));
        } else {
            parts.push_back(f_lin_atom(theory.prime, LinCoeffs{{a[i], 1}, {b[i], theory.prime - 1}}));
        }
    }
    return f_and(std::move(parts));
}

FormulaPtr rename_tuple(const FormulaPtr& body, const std::vector<Symbol>& from,
                        const std::vector<Symbol>& to) {
    FormulaPtr out = body;
    for (std::size_t i = 0; i < from.size(); ++i) out = substitute(out, from[i], TermPayload{to[i]});
    return out;
}

std::vector<Symbol> fresh_tuple(const std::vector<Symbol>& tuple, NameGen& gen) {
    std::vector<Symbol> out;
    out.reserve(tuple.size());
    for (const auto& t : tuple) out.push_back(Symbol{gen.fresh(t.name), SymbolKind::variable});
    return out;
}
}  // namespace

FormulaPtr exactly_k(const TheorySpec& theory, std::size_t k, const std::vector<Symbol>& tuple,
                     const FormulaPtr& body, NameGen& gen) {
    if (k == 0) return f_not(exists_tuple(tuple, body));

    std::vector<std::vector<Symbol>> copies;
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < k; ++i) {
        copies.push_back(fresh_tuple(tuple, gen));
        parts.push_back(rename_tuple(body, tuple, copies.back()));
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) parts.push_back(f_not(tuple_eq(theory, copies[i], copies[j])));

    std::vector<Symbol> closure_tuple = fresh_tuple(tuple, gen);
    std::vector<FormulaPtr> matches;
    for (std::size_t i = 0; i < k; ++i) matches.push_back(tuple_eq(theory, closure_tuple, copies[i]));
    parts.push_back(
        forall_tuple(closure_tuple, f_implies(rename_tuple(body, tuple, closure_tuple), f_or(std::move(matches)))));

    FormulaPtr inner = f_and(std::move(parts));
    for (auto it = copies.rbegin(); it != copies.rend(); ++it) inner = exists_tuple(*it, std::move(inner));
    return inner;
}

// ---------- correspondences ----------

CorrespondenceReport unimodularity_check(const Input& psi, const ParamPattern& pattern,
                                         const EngineLimits& limits) {
    if (psi.var_groups.size() != 2)
        throw std::invalid_argument("a correspondence needs exactly two variable tuples");
    const std::vector<Symbol>& left = psi.var_groups[0];
    const std::vector<Symbol>& right = psi.var_groups[1];
    if (left.empty() || left.size() != right.size())
        throw AnalysisError("tuple length mismatch: left has " + std::to_string(left.size()) + ", right has " +
                            std::to_string(right.size()));
    const std::size_t n = left.size();

    CountResult base = count(psi, pattern, limits);
    if (base.poly.is_zero()) throw AnalysisError("the correspondence is empty under this pattern");

    NameGen gen;
    gen.reserve_all(psi.formula);
    for (const auto& v : psi.vars) gen.reserve(v.name);
    for (const auto& p : psi.params) gen.reserve(p.name);

    // phi covers the full top-rank part of psi exactly when psi & phi keeps
    // psi's degree and leading coefficient (the counts of psi & phi and
    // psi & !phi add up to psi's).
    auto covers_top = [&](const FormulaPtr& phi) {
        Input test = psi;
        test.formula = f_and({psi.formula, phi});
        CountResult r = count(test, pattern, limits);
        return r.morley_rank == base.morley_rank && r.leading_coefficient == base.leading_coefficient;
    };

    auto discover = [&](const std::vector<Symbol>& fiber_tuple) -> std::pair<long long, FormulaPtr> {
        for (std::size_t kk = 1; kk <= limits.counting_quantifier_cap; ++kk) {
            NameGen local = gen;
            FormulaPtr cand = exactly_k(psi.theory, kk, fiber_tuple, psi.formula, local);
            if (covers_top(cand)) return {static_cast<long long>(kk), cand};
        }
        return {0, nullptr};
    };

    auto [k, phi1] = discover(right);
    if (phi1 == nullptr)
        throw AnalysisError("fibers over the left projection are not of constant finite size (tried 1.." +
                            std::to_string(limits.counting_quantifier_cap) + ")");
    auto [ell, phi2] = discover(left);
    if (phi2 == nullptr)
        throw AnalysisError("fibers over the right projection are not of constant finite size (tried 1.." +
                            std::to_string(limits.counting_quantifier_cap) + ")");

    FormulaPtr chi = f_and({psi.formula, phi1, phi2});

    Input z_in = psi;
    z_in.formula = chi;
    CountResult Z = count(z_in, pattern, limits);

    Input x_in = psi;
    x_in.vars = left;
    x_in.formula = exists_tuple(right, chi);
    CountResult X = count(x_in, pattern, limits);

    Input y_in = psi;
    y_in.vars = right;
    y_in.formula = exists_tuple(left, chi);
    CountResult Y = count(y_in, pattern, limits);

    CorrespondenceReport report;
    report.n = n;
    report.k = k;
    report.ell = ell;
    report.Z_poly = Z.poly;
    report.X_poly = X.poly;
    report.Y_poly = Y.poly;
    report.identity_holds = Z.poly == BigInt(k) * X.poly && Z.poly == BigInt(ell) * Y.poly;
    report.full_degree = X.morley_rank == static_cast<long>(n) && Y.morley_rank == static_cast<long>(n);
    report.k_equals_ell = k == ell;
    report.threshold = std::max({base.threshold_q0, Z.threshold_q0, X.threshold_q0, Y.threshold_q0});
    report.chi = chi;
    return report;
}

// ---------- regularity ----------

void validate_graph(const GraphInput& g, const ParamPattern& pattern, const EngineLimits& limits) {
    std::set<std::string> v_names;
    for (const auto& v : g.V.vars) v_names.insert(v.name);
    for (const auto& w : g.W.vars)
        if (v_names.count(w.name)) throw std::invalid_argument("V and W share the variable '" + w.name + "'");
    std::vector<Symbol> expected = g.V.vars;
    expected.insert(expected.end(), g.W.vars.begin(), g.W.vars.end());
    if (g.E.vars.size() != expected.size())
        throw std::invalid_argument("E's frame must be V's variables followed by W's");
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (g.E.vars[i].name != expected[i].name)
            throw std::invalid_argument("E's frame must be V's variables followed by W's");

    Input outside = g.E;
    outside.formula = f_and({g.E.formula, f_not(f_and({g.V.formula, g.W.formula}))});
    CountResult r = count(outside, pattern, limits);
    if (!r.poly.is_zero()) throw AnalysisError("E is not contained in V x W (excess count " + r.poly.to_string() + ")");
}

RegularityReport regularity_analyze(const GraphInput& g, const ParamPattern& pattern,
                                    const EngineLimits& limits) {
    validate_graph(g, pattern, limits);
    CountResult cV = count(g.V, pattern, limits);
    CountResult cW = count(g.W, pattern, limits);
    if (cV.poly.is_zero() || cW.poly.is_zero()) throw AnalysisError("a side of the graph is empty");
    if (cV.morley_degree != 1 || cW.morley_degree != 1)
        throw AnalysisError("a side has Morley degree > 1; use the split refinement");
    CountResult cE = count(g.E, pattern, limits);

    RegularityReport report;
    report.d1 = cV.morley_rank;
    report.d2 = cW.morley_rank;
    report.V_poly = cV.poly;
    report.W_poly = cW.poly;
    report.E_poly = cE.poly;
    const long full = report.d1 + report.d2;
    if (cE.poly.degree() == static_cast<int>(full)) {
        report.case_tag = RegularityCase::dense;
        report.R_poly = cV.poly * cW.poly - cE.poly;
    } else {
        report.case_tag = RegularityCase::sparse;
        report.R_poly = cE.poly;
    }
    if (report.R_poly.degree() >= static_cast<int>(full))
        throw std::logic_error("dichotomy invariant violated: deg(R) >= d1 + d2");
    report.threshold = std::max({cV.threshold_q0, cW.threshold_q0, cE.threshold_q0});
    return report;
}

SplitReport regularity_split(const GraphInput& g, const ParamPattern& pattern, const EngineLimits& limits) {
    validate_graph(g, pattern, limits);
    CountResult cV = count(g.V, pattern, limits);
    CountResult cW = count(g.W, pattern, limits);
    if (cV.poly.is_zero() || cW.poly.is_zero()) throw AnalysisError("a side of the graph is empty");
    CountResult cE = count(g.E, pattern, limits);

    auto side_cells = [&](const Input& side, long rank, char tag, std::vector<Cell>& top,
                          std::vector<RemainderPiece>& remainders) {
        QeResult qe = quantifier_eliminate(side.theory, side.formula, limits);
        for (auto& cell : decompose(side.theory, side.vars, qe.formula, pattern, limits)) {
            if (cell.poly.degree() == static_cast<int>(rank)) {
                top.push_back(std::move(cell));
            } else {
                remainders.push_back(RemainderPiece{tag, cell.formula, cell.poly});
            }
        }
    };

    SplitReport report;
    report.V_poly = cV.poly;
    report.W_poly = cW.poly;
    report.E_poly = cE.poly;
    report.threshold = std::max({cV.threshold_q0, cW.threshold_q0, cE.threshold_q0});

    std::vector<Cell> v_top, w_top;
    side_cells(g.V, cV.morley_rank, 'V', v_top, report.remainders);
    side_cells(g.W, cW.morley_rank, 'W', w_top, report.remainders);

    for (const auto& vc : v_top) {
        for (const auto& wc : w_top) {
            GraphInput piece = g;
            piece.V.formula = vc.formula;
            piece.W.formula = wc.formula;
            piece.E.formula = f_and({g.E.formula, vc.formula, wc.formula});
            PairReport pair;
            pair.v_piece = vc.formula;
            pair.w_piece = wc.formula;
            pair.report = regularity_analyze(piece, pattern, limits);
            report.threshold = std::max(report.threshold, pair.report.threshold);
            report.pairs.push_back(std::move(pair));
        }
    }
    return report;
}

GraphInput restrict_pair(const GraphInput& g, const PairReport& pair) {
    GraphInput out = g;
    out.V.formula = pair.v_piece;
    out.W.formula = pair.w_piece;
    out.E.formula = f_and({g.E.formula, pair.v_piece, pair.w_piece});
    return out;
}

// ---------- verification in a concrete model ----------

namespace {
struct SubsetChecker {
    std::vector<std::vector<std::uint64_t>> rows;  // E incidence, V-member rows over W-member bits
    std::size_t nv = 0, nw = 0;
    std::size_t chunks = 0;
    bool dense = false;
    BigInt r_at_q;

    unsigned long long edges_in(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const {
        unsigned long long total = 0;
        for (std::size_t i = 0; i < nv; ++i) {
            if (!(a[i / 64] >> (i % 64) & 1)) continue;
            for (std::size_t c = 0; c < chunks; ++c) total += static_cast<unsigned long long>(__builtin_popcountll(rows[i][c] & b[c]));
        }
        return total;
    }

    static unsigned long long popcount(const std::vector<std::uint64_t>& mask) {
        unsigned long long total = 0;
        for (auto chunk : mask) total += static_cast<unsigned long long>(__builtin_popcountll(chunk));
        return total;
    }

    // Slack of the case inequality; negative means a violation.
    BigInt margin(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const {
        BigInt cnt = edges_in(a, b);
        if (dense) return cnt - (BigInt(popcount(a)) * BigInt(popcount(b)) - r_at_q);
        return r_at_q - cnt;
    }
};

std::vector<std::vector<long long>> member_tuples(const FiniteModel& m, const Input& side,
                                                  const OracleLimits& limits) {
    std::vector<std::vector<long long>> members;
    const std::size_t n = side.vars.size();
    std::vector<long long> tuple(n, 0);
    std::map<std::string, long long> env;
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) env[side.vars[i].name] = tuple[i];
        if (evaluate(m, side.formula, env, limits)) members.push_back(tuple);
        std::size_t i = n;
        bool done = n == 0;
        while (i-- > 0) {
            if (++tuple[i] < m.q) break;
            tuple[i] = 0;
            if (i == 0) done = true;
        }
        if (done) break;
    }
    return members;
}
}  // namespace

VerifySummary regularity_verify(const FiniteModel& m, const GraphInput& g, const RegularityReport& report,
                                long trials, std::uint64_t seed, const OracleLimits& limits) {
    if (m.q < report.threshold)
        throw std::invalid_argument("model size " + std::to_string(m.q) + " is below the report threshold " +
                                    std::to_string(report.threshold));

    auto v_members = member_tuples(m, g.V, limits);
    auto w_members = member_tuples(m, g.W, limits);

    SubsetChecker checker;
    checker.nv = v_members.size();
    checker.nw = w_members.size();
    checker.chunks = (checker.nw + 63) / 64;
    checker.dense = report.case_tag == RegularityCase::dense;
    checker.r_at_q = report.R_poly.eval(BigInt(m.q));
    checker.rows.assign(checker.nv, std::vector<std::uint64_t>(checker.chunks, 0));
    {
        std::map<std::string, long long> env;
        for (std::size_t i = 0; i < checker.nv; ++i) {
            for (std::size_t t = 0; t < g.V.vars.size(); ++t) env[g.V.vars[t].name] = v_members[i][t];
            for (std::size_t j = 0; j < checker.nw; ++j) {
                for (std::size_t t = 0; t < g.W.vars.size(); ++t) env[g.W.vars[t].name] = w_members[j][t];
                if (evaluate(m, g.E.formula, env, limits)) checker.rows[i][j / 64] |= 1ull << (j % 64);
            }
        }
    }

    VerifySummary summary;
    summary.worst_margin = checker.r_at_q + BigInt(checker.nv) * BigInt(checker.nw) + 1;  // above any margin

    auto record = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
        BigInt margin = checker.margin(a, b);
        ++summary.samples;
        if (margin < summary.worst_margin) summary.worst_margin = margin;
        if (margin < 0) ++summary.violations;
    };

    auto single = [&](std::size_t bits, std::size_t idx) {
        std::vector<std::uint64_t> mask((bits + 63) / 64, 0);
        mask[idx / 64] |= 1ull << (idx % 64);
        return mask;
    };
    auto full_mask = [&](std::size_t bits) {
        std::vector<std::uint64_t> mask((bits + 63) / 64, 0);
        for (std::size_t i = 0; i < bits; ++i) mask[i / 64] |= 1ull << (i % 64);
        return mask;
    };

    const std::size_t va_chunks = (checker.nv + 63) / 64;
    std::vector<std::uint64_t> v_empty(va_chunks, 0), w_empty(checker.chunks, 0);
    std::vector<std::uint64_t> v_full = checker.nv ? full_mask(checker.nv) : v_empty;
    std::vector<std::uint64_t> w_full = checker.nw ? full_mask(checker.nw) : w_empty;

    bool exhaustive = checker.nv <= 63 && checker.nw <= 63 && checker.nv + checker.nw <= 20;
    summary.exhaustive = exhaustive;
    if (exhaustive) {
        for (std::uint64_t a = 0; a < (1ull << checker.nv); ++a) {
            std::vector<std::uint64_t> ma{a};
            for (std::uint64_t b = 0; b < (1ull << checker.nw); ++b) {
                std::vector<std::uint64_t> mb{b};
                record(ma, mb);
            }
        }
    } else {
        record(v_empty, w_empty);
        record(v_empty, w_full);
        record(v_full, w_empty);
        record(v_full, w_full);
        if (checker.nv > 0 && checker.nw > 0) {
            if (checker.nv * checker.nw <= 4096) {
                for (std::size_t i = 0; i < checker.nv; ++i)
                    for (std::size_t j = 0; j < checker.nw; ++j) record(single(checker.nv, i), single(checker.nw, j));
            } else {
                std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
                for (int t = 0; t < 64; ++t)
                    record(single(checker.nv, rng() % checker.nv), single(checker.nw, rng() % checker.nw));
            }
        }
        std::mt19937_64 rng(seed);
        for (long t = 0; t < trials; ++t) {
            std::vector<std::uint64_t> a(va_chunks, 0), b(checker.chunks, 0);
            for (std::size_t i = 0; i < checker.nv; ++i)
                if (rng() & 1) a[i / 64] |= 1ull << (i % 64);
            for (std::size_t j = 0; j < checker.nw; ++j)
                if (rng() & 1) b[j / 64] |= 1ull << (j % 64);
            record(a, b);
        }
    }
    summary.pass = summary.violations == 0;
    return summary;
}

}  // namespace smcount
