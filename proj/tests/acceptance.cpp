// Acceptance suite: runs every acceptance criterion against the fixture
// corpus and prints one pass/fail line per criterion. Exit status is the
// number of failed criteria.

#include "smcount/analyses.hpp"
#include "smcount/engine.hpp"
#include "smcount/oracle.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace smcount;

namespace {

const TheorySpec kPure{TheoryKind::pure_set, 0};
const TheorySpec kVs2{TheoryKind::vector_space, 2};
const TheorySpec kVs3{TheoryKind::vector_space, 3};

const OracleLimits kOracle{1ull << 27};  // roomy budget for the large vector-space sizes

struct CorpusEntry {
    TheorySpec theory;
    std::string text;     // declarations + formula
    std::string pattern;  // constraint selecting the parameter pattern; "" = generic
};

// Criterion 1 fixture corpus: 1-4 free variables, nested quantifiers,
// parameters, empty and degenerate sets, both theories.
const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = {
        // pure set
        {kPure, "var x, y; x != y", ""},
        {kPure, "var x, y, z; true", ""},
        {kPure, "var x, y; x = y", ""},
        {kPure, "var x, y, z; x != y & x != z & y != z", ""},
        {kPure, "var x; param a; x != a", ""},
        {kPure, "var x; param a, b; x != a & x != b", ""},
        {kPure, "var x, y; exists z. (z != x & z != y)", ""},
        {kPure, "var x, y; forall z. (z = x | z = y)", ""},
        {kPure, "var x; x != x", ""},
        {kPure, "var x, y, z; (x = y) | (x = z)", ""},
        {kPure, "var x; exists z. z = x", ""},
        {kPure, "var x; param a, b; x = a | x = b", ""},
        {kPure, "var x; exists u. exists v. (u != v & u != x & v != x)", ""},
        {kPure, "var x, y; param a; x != y & y != a", ""},
        {kPure, "var x; forall z. z != x", ""},
        {kPure, "var x, y; param a; x = a -> y != a", ""},
        {kPure, "var x, y; param a; exists z. (z != x & z != y & z != a)", ""},
        {kPure, "var w, x, y, z; w != x & y != z", ""},
        {kPure, "var x, y; (x = y) <-> (y = x)", ""},
        {kPure, "true", ""},
        // vector space, p = 2
        {kVs2, "var x, y; x + y = 0", ""},
        {kVs2, "var x, y, z; x + y + z = 0 & x != y", ""},
        {kVs2, "var x; param a; x != 0 & x != a", "a != 0"},
        {kVs2, "var x, y; param a; (y = x) | (y = x + a)", "a != 0"},
        {kVs2, "var x, y; true", ""},
        {kVs2, "var x; x = 0", ""},
        {kVs2, "var x; x != x", ""},
        {kVs2, "var x, y; exists z. (x + z = 0 & z + y != 0)", ""},
        {kVs2, "var x, y; forall z. (z + x = 0 -> z = y)", ""},
        {kVs2, "param a; a = 0", "a = 0"},
        {kVs2, "var x; param a, b; exists y. (y + x = a & y != b)", ""},
        {kVs2, "var x, y; param a, b; (x = a & y = b) | (x = b & y = a)", ""},
        {kVs2, "var w, x, y, z; w + x + y + z = 0", ""},
        {kVs2, "var x, y; param a, b; (x + y = 0) | (x + y = a) | (x + y = b)", ""},
        {kVs2, "var x; forall z. (z + x != x -> z != 0)", ""},
        // vector space, p = 3
        {kVs3, "var x, y; 2*x = y", ""},
        {kVs3, "var x; param a, b; x != a & x != b", ""},
        {kVs3, "var x, y, z; x + 2*y + z = 0 & x + y != 0 & y != 0", ""},
        {kVs3, "var x; x != 0", ""},
        {kVs3, "var x, y; exists z. (z = x + y & z != x)", ""},
    };
    return entries;
}

ParamPattern pattern_of(const Input& input, const std::string& constraint) {
    if (constraint.empty()) return generic_pattern(input.theory, input.params);
    std::string decls;
    if (!input.params.empty()) {
        decls = "param ";
        for (std::size_t i = 0; i < input.params.size(); ++i) decls += (i ? ", " : "") + input.params[i].name;
        decls += "; ";
    }
    Input parsed = parse_input(decls + constraint, input.theory);
    for (const auto& p : enumerate_patterns(input.theory, input.params))
        if (p.satisfies(parsed.formula)) return p;
    throw std::runtime_error("no pattern satisfies " + constraint);
}

std::size_t quantifier_count(const FormulaPtr& f) {
    return std::visit(
        [&](const auto& x) -> std::size_t {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NotNode>) {
                return quantifier_count(x.inner);
            } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                std::size_t total = 0;
                for (const auto& p : x.parts) total += quantifier_count(p);
                return total;
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return quantifier_count(x.lhs) + quantifier_count(x.rhs);
            } else if constexpr (std::is_same_v<T, QuantNode>) {
                return 1 + quantifier_count(x.body);
            } else {
                return 0;
            }
        },
        f->node);
}

// Model sizes mandated by criterion 1. The work bound q^n counts bound
// variables too, since the brute-force oracle scans the domain per
// quantifier.
std::vector<long long> criterion_sizes(const Input& input, long long q0, double work_bound = 1e6,
                                       std::size_t max_sizes = 64) {
    const std::size_t n_eff =
        std::max<std::size_t>(input.vars.size() + quantifier_count(input.formula), 1);
    std::vector<long long> sizes;
    if (input.theory.kind == TheoryKind::pure_set) {
        long long start = std::max<long long>(q0, 1);
        for (long long q = start; q <= std::min<long long>(start + 8, 12) && sizes.size() < max_sizes; ++q)
            sizes.push_back(q);
        return sizes;
    }
    for (long long q = input.theory.prime;; q *= input.theory.prime) {
        if (std::pow(static_cast<double>(q), static_cast<double>(n_eff)) > work_bound) break;
        if (q >= std::max<long long>(q0, 1)) sizes.push_back(q);
        if (sizes.size() >= max_sizes) break;
    }
    return sizes;
}

struct CriterionResult {
    bool pass = true;
    std::ostringstream detail;
    int checks = 0;

    void fail(const std::string& message) {
        pass = false;
        detail << "\n    FAIL: " << message;
    }
};

// ---------- criterion 1 ----------

CriterionResult criterion1() {
    CriterionResult r;
    int pure_entries = 0, vs_entries = 0;
    for (const auto& entry : corpus()) {
        (entry.theory.kind == TheoryKind::pure_set ? pure_entries : vs_entries) += 1;
        Input input = parse_input(entry.text, entry.theory);
        ParamPattern pattern = pattern_of(input, entry.pattern);
        CountResult result = count(input, pattern);
        std::vector<long long> sizes = criterion_sizes(input, result.threshold_q0);
        if (sizes.empty()) {
            r.fail("no admissible sizes for: " + entry.text);
            continue;
        }
        for (long long q : sizes) {
            FiniteModel m = build_model(input.theory, q, pattern);
            BigInt actual = brute_count(m, input, kOracle);
            ++r.checks;
            if (result.poly.eval(q) != actual) {
                r.fail(entry.text + " at q=" + std::to_string(q) + ": engine " +
                       result.poly.eval(q).str() + " vs oracle " + actual.str());
                break;
            }
        }
    }
    if (pure_entries < 15) r.fail("pure_set corpus too small");
    if (vs_entries < 15) r.fail("vector_space corpus too small");
    r.detail << pure_entries + vs_entries << " formulas, " << r.checks << " exact size checks";
    return r;
}

// ---------- criterion 2 ----------

CriterionResult criterion2() {
    CriterionResult r;
    for (const auto& entry : corpus()) {
        Input input = parse_input(entry.text, entry.theory);
        ParamPattern pattern = pattern_of(input, entry.pattern);
        CountResult result = count(input, pattern);
        ++r.checks;
        if (result.poly.is_zero()) {
            if (result.morley_rank != -1 || result.morley_degree != 0)
                r.fail("empty-set sentinel wrong for: " + entry.text);
            continue;
        }
        if (result.morley_rank != result.poly.degree())
            r.fail("rank != degree for: " + entry.text);
        if (result.leading_coefficient <= 0)
            r.fail("nonpositive leading coefficient for: " + entry.text);
        if (result.morley_degree < 1 || BigInt(result.morley_degree) > result.leading_coefficient)
            r.fail("morley degree outside [1, lc] for: " + entry.text);
    }
    for (int n = 0; n <= 4; ++n) {
        std::string decls;
        if (n > 0) {
            decls = "var ";
            for (int i = 0; i < n; ++i) decls += (i ? ", x" : "x") + std::to_string(i);
            decls += "; ";
        }
        for (const TheorySpec& theory : {kPure, kVs2}) {
            CountResult full = count(parse_input(decls + "true", theory));
            ++r.checks;
            if (!(full.poly == IntPoly::monomial(1, n)) || full.morley_rank != n || full.morley_degree != 1)
                r.fail("full space D^" + std::to_string(n) + " miscounted in " + theory_name(theory));
        }
    }
    r.detail << r.checks << " rank/degree checks";
    return r;
}

// ---------- criterion 3 ----------

CriterionResult criterion3() {
    CriterionResult r;
    const std::vector<CorpusEntry> parametric = {
        {kPure, "var x; param y1, y2; x != y1 & x != y2", ""},
        {kPure, "var x; param a; x != a", ""},
        {kPure, "var x; param a, b; x = a | x = b", ""},
        {kPure, "var x; param a; x = a", ""},
        {kPure, "var x, y; param a; x != y & y = a", ""},
        {kPure, "var x; param a, b, c; x != a & x != b & x != c", ""},
        {kVs2, "var x; param a; x = a", ""},
        {kVs2, "var x, y; param a; x + y = a", ""},
        {kVs2, "var x, y; param a; (y = x) | (y = x + a)", ""},
        {kVs2, "var x; param a; x != a & x != 0", ""},
        {kVs2, "var x; param a, b; x = a | x = b", ""},
        {kVs3, "var x; param a; 2*x = a", ""},
    };
    for (const auto& entry : parametric) {
        Input input = parse_input(entry.text, entry.theory);
        PartitionResult partition = parametric_count(input);
        std::vector<long long> sizes;
        if (entry.theory.kind == TheoryKind::pure_set) {
            sizes = {1, 2, 3, 4, 5, 6};
        } else if (entry.theory.prime == 2) {
            sizes = {2, 4, 8};
        } else {
            sizes = {3, 9};
        }
        for (long long q : sizes) {
            FiniteModel m;
            m.theory = entry.theory;
            m.q = q;
            m.exponent = 0;
            while (entry.theory.kind == TheoryKind::vector_space &&
                   (long long)std::pow(entry.theory.prime, m.exponent) < q)
                ++m.exponent;
            std::vector<long long> tuple(input.params.size(), 0);
            for (;;) {
                for (std::size_t i = 0; i < input.params.size(); ++i)
                    m.param_values[input.params[i].name] = tuple[i];
                int matched = 0;
                for (const auto& e : partition.entries) {
                    if (!evaluate(m, e.condition, {}, kOracle)) continue;
                    ++matched;
                    ++r.checks;
                    if (q >= e.result.threshold_q0 &&
                        e.result.poly.eval(q) != BigInt(brute_count(m, input, kOracle)))
                        r.fail(entry.text + ": count mismatch at q=" + std::to_string(q));
                }
                if (matched != 1) r.fail(entry.text + ": tuple matched " + std::to_string(matched) + " entries");
                std::size_t i = input.params.size();
                bool done = input.params.empty();
                while (i-- > 0) {
                    if (++tuple[i] < q) break;
                    tuple[i] = 0;
                    if (i == 0) done = true;
                }
                if (done) break;
            }
        }
    }
    // flagship instance: the exact two-entry table
    PartitionResult flagship =
        parametric_count(parse_input("var x; param y1, y2; x != y1 & x != y2", kPure));
    IntPoly q_minus_1(std::vector<BigInt>{-1, 1}), q_minus_2(std::vector<BigInt>{-2, 1});
    if (flagship.entries.size() != 2 || render(flagship.entries[0].condition) != "y1 = y2" ||
        !(flagship.entries[0].result.poly == q_minus_1) ||
        render(flagship.entries[1].condition) != "y1 != y2" ||
        !(flagship.entries[1].result.poly == q_minus_2))
        r.fail("flagship partition table is not {y1=y2 -> q-1, y1!=y2 -> q-2}");
    r.detail << parametric.size() << " parametric formulas, " << r.checks << " tuple checks";
    return r;
}

// ---------- criterion 4 ----------

CriterionResult criterion4() {
    CriterionResult r;
    const std::vector<std::pair<CorpusEntry, CorpusEntry>> pairs = {
        {{kPure, "var x, y; x != y", ""}, {kPure, "var z, w; z != w", ""}},
        {{kPure, "var x; param a; x != a", ""}, {kPure, "var y; param b; y != b", ""}},
        {{kPure, "var x; true", ""}, {kPure, "var y, z; true", ""}},
        {{kPure, "var x; param a, b; x = a | x = b", ""}, {kPure, "var y; param c; y != c", ""}},
        {{kPure, "var x; x != x", ""}, {kPure, "var y; true", ""}},
        {{kPure, "var x; exists u. u != x", ""}, {kPure, "var y; param c; y = c", ""}},
        {{kVs2, "var x, y; x + y = 0", ""}, {kVs2, "var z; z = 0", ""}},
        {{kVs2, "var x, y; param a; (y = x) | (y = x + a)", "a != 0"}, {kVs2, "var z; z != 0", ""}},
        {{kVs2, "var x; true", ""}, {kVs2, "var y, z; y + z = 0", ""}},
        {{kVs2, "var x; param a; x = a", ""}, {kVs2, "var y; param b; y = b", ""}},
        {{kVs3, "var x, y; 2*x = y", ""}, {kVs3, "var z; z != 0", ""}},
        {{kVs3, "var x; x != 0", ""}, {kVs3, "var y; y != 0", ""}},
    };
    for (const auto& [fe, ge] : pairs) {
        Input f = parse_input(fe.text, fe.theory);
        Input g = parse_input(ge.text, ge.theory);
        Input combined = conjoin_disjoint(f, g);
        std::string constraint;
        if (!fe.pattern.empty()) constraint = fe.pattern;
        if (!ge.pattern.empty()) constraint += (constraint.empty() ? "" : " & ") + ge.pattern;
        ParamPattern pattern = pattern_of(combined, constraint);
        ++r.checks;
        if (!product_check(f, g, pattern)) r.fail("product law fails for: " + fe.text + "  x  " + ge.text);
    }
    r.detail << r.checks << " disjoint-variable pairs";
    return r;
}

// ---------- criterion 5 ----------

CriterionResult criterion5() {
    CriterionResult r;
    struct PsiCase {
        std::string file;
        std::string pattern;
        long long k, ell;
    };
    const std::vector<PsiCase> cases = {
        {"theory vector_space p=2\nPSI: var x; var y; y = x\n", "", 1, 1},
        {"theory vector_space p=2\nparam a;\nPSI: var x; var y; (y = x) | (y = x + a)\n", "a != 0", 2, 2},
        {"theory vector_space p=2\nparam a;\nPSI: var x; var y; y = x + a\n", "a != 0", 1, 1},
        {"theory vector_space p=3\nPSI: var x; var y; y = 2*x\n", "", 1, 1},
        {"theory pure_set\nPSI: var x; var y; x = y\n", "", 1, 1},
        {"theory vector_space p=2\nparam a, b;\nPSI: var x; var y; (y = x) | (y = x + a) | (y = x + b)\n",
         "", 3, 3},
        {"theory vector_space p=2\nPSI: var x1, x2; var y1, y2; y1 = x1 & y2 = x2\n", "", 1, 1},
    };
    for (const auto& c : cases) {
        Input psi = parse_file(c.file).sections.at("PSI");
        ParamPattern pattern = pattern_of(psi, c.pattern);
        CorrespondenceReport report = unimodularity_check(psi, pattern);
        ++r.checks;
        if (report.k != c.k || report.ell != c.ell)
            r.fail("fiber sizes (" + std::to_string(report.k) + "," + std::to_string(report.ell) +
                   ") unexpected for: " + c.file);
        if (!report.identity_holds) r.fail("counting identity fails for: " + c.file);
        if (!report.full_degree) r.fail("projections not full degree for: " + c.file);
        if (report.full_degree && !report.k_equals_ell) r.fail("k != ell at full degree for: " + c.file);
    }
    // rejection path
    Input bad = parse_file("theory pure_set\nPSI: var x; var y; x != y\n").sections.at("PSI");
    bool rejected = false;
    try {
        unimodularity_check(bad, generic_pattern(kPure, {}));
    } catch (const AnalysisError&) {
        rejected = true;
    }
    ++r.checks;
    if (!rejected) r.fail("growing-fiber correspondence was not rejected");
    r.detail << cases.size() << " accepted correspondences + rejection";
    return r;
}

// ---------- criterion 6 ----------

CriterionResult criterion6() {
    CriterionResult r;
    struct GraphCase {
        std::string file;
        std::string pattern;
        bool split;
        RegularityCase expected;  // for the plain dichotomy
        std::vector<long long> sizes;
    };
    const std::vector<GraphCase> cases = {
        // dense
        {"theory pure_set\nV: var x; true\nW: var y; true\nE: x != y\n", "", false, RegularityCase::dense,
         {5, 7, 9, 11}},
        {"theory vector_space p=2\nV: var x; true\nW: var y; true\nE: x + y != 0\n", "", false,
         RegularityCase::dense, {2, 4, 8}},
        {"theory pure_set\nV: var x1, x2; true\nW: var y1, y2; true\nE: !(x1 = y1 & x2 = y2)\n", "", false,
         RegularityCase::dense, {3, 4, 5}},
        // sparse
        {"theory pure_set\nV: var x; true\nW: var y; true\nE: x = y\n", "", false, RegularityCase::sparse,
         {5, 7, 9, 11}},
        {"theory vector_space p=2\nparam a;\nV: var x; true\nW: var y; true\nE: x + y = a\n", "a != 0",
         false, RegularityCase::sparse, {2, 4, 8}},
        {"theory vector_space p=3\nV: var x; true\nW: var y; true\nE: y = 2*x\n", "", false,
         RegularityCase::sparse, {3, 9}},
        // split refinement
        {"theory vector_space p=2\nV: var x; (x = 0) | (x != 0)\nW: var y; (y = 0) | (y != 0)\n"
         "E: x + y = 0\n",
         "", true, RegularityCase::sparse, {2, 4, 8}},
        {"theory vector_space p=2\nparam a;\nV: var x, y; (y = 0) | (y = x + a)\n"
         "W: var u, v; (v = 0) | (v = u + a)\n"
         "E: ((y = 0) | (y = x + a)) & ((v = 0) | (v = u + a)) & x = u\n",
         "a != 0", true, RegularityCase::sparse, {2, 4, 8}},
        {"theory pure_set\nparam a, b;\nV: var x, y; (y = a) | (y = b)\n"
         "W: var u, v; (v = a) | (v = b)\n"
         "E: ((y = a) | (y = b)) & ((v = a) | (v = b)) & x = u\n",
         "", true, RegularityCase::sparse, {4, 6, 8}},
    };
    int dense_count = 0, sparse_count = 0, split_count = 0;
    for (const auto& c : cases) {
        InputFile file = parse_file(c.file);
        GraphInput g{file.sections.at("V"), file.sections.at("W"), file.sections.at("E")};
        g.E.vars = g.V.vars;
        g.E.vars.insert(g.E.vars.end(), g.W.vars.begin(), g.W.vars.end());
        std::vector<Symbol> all_params = g.E.params;
        ParamPattern pattern = pattern_of(g.E, c.pattern);

        std::vector<std::pair<GraphInput, RegularityReport>> checks;
        if (c.split) {
            ++split_count;
            SplitReport split = regularity_split(g, pattern);
            if (split.pairs.empty()) r.fail("split produced no top-rank pairs for: " + c.file);
            for (const auto& pair : split.pairs) checks.emplace_back(restrict_pair(g, pair), pair.report);
        } else {
            RegularityReport report = regularity_analyze(g, pattern);
            (report.case_tag == RegularityCase::dense ? dense_count : sparse_count) += 1;
            if (report.case_tag != c.expected) r.fail("unexpected case for: " + c.file);
            checks.emplace_back(g, report);
        }

        for (const auto& [piece, report] : checks) {
            if (report.R_poly.degree() >= report.d1 + report.d2)
                r.fail("deg R too large for: " + c.file);
            for (long long q : c.sizes) {
                if (q < std::max<long long>(report.threshold, 1)) continue;
                FiniteModel m = build_model(piece.E.theory, q, pattern);
                BigInt v_count = brute_count(m, piece.V, kOracle);
                BigInt w_count = brute_count(m, piece.W, kOracle);
                BigInt e_count = brute_count(m, piece.E, kOracle);
                BigInt expected = report.case_tag == RegularityCase::dense
                                      ? v_count * w_count - report.R_poly.eval(q)
                                      : report.R_poly.eval(q);
                ++r.checks;
                if (e_count != expected)
                    r.fail(c.file + " |E| identity off at q=" + std::to_string(q));
                VerifySummary summary = regularity_verify(m, piece, report, 200, 2026, kOracle);
                ++r.checks;
                if (!summary.pass)
                    r.fail(c.file + " subset inequality violated at q=" + std::to_string(q));
                if (!c.split && piece.V.vars.size() == 1 && piece.W.vars.size() == 1 && q <= 10 &&
                    !summary.exhaustive)
                    r.fail("expected exhaustive subset check at q=" + std::to_string(q));
            }
        }
    }
    if (dense_count < 2 || sparse_count < 2 || split_count < 2)
        r.fail("graph corpus does not cover the three case families");
    r.detail << cases.size() << " graphs (" << dense_count << " dense, " << sparse_count << " sparse, "
             << split_count << " split), " << r.checks << " model checks";
    return r;
}

// ---------- criterion 7 ----------

CriterionResult criterion7() {
    CriterionResult r;
    for (const auto& entry : corpus()) {
        Input input = parse_input(entry.text, entry.theory);
        ParamPattern pattern = pattern_of(input, entry.pattern);
        CountResult result = count(input, pattern);
        const int needed = std::max(result.poly.degree(), 0) + 2;
        std::vector<long long> sizes = criterion_sizes(input, result.threshold_q0, 8e6, needed);
        if (static_cast<int>(sizes.size()) < needed) {
            r.fail("not enough admissible sizes to interpolate: " + entry.text);
            continue;
        }
        std::vector<std::pair<BigInt, BigInt>> points;
        for (long long q : sizes) {
            FiniteModel m = build_model(input.theory, q, pattern);
            points.emplace_back(q, brute_count(m, input, kOracle));
        }
        ++r.checks;
        try {
            if (!(interpolate(points) == result.poly)) r.fail("interpolation differs for: " + entry.text);
        } catch (const std::invalid_argument& e) {
            r.fail("interpolation error for " + entry.text + ": " + e.what());
        }
    }
    r.detail << r.checks << " polynomials reproduced from oracle counts";
    return r;
}

// ---------- criterion 8 ----------

CriterionResult criterion8() {
    CriterionResult r;
    for (const auto& entry : corpus()) {
        Input input = parse_input(entry.text, entry.theory);
        ParamPattern pattern = pattern_of(input, entry.pattern);
        QeResult qe = quantifier_eliminate(input.theory, input.formula);
        Input eliminated = input;
        eliminated.formula = qe.formula;
        long long start = std::max(qe.threshold + 1, pattern.realizability_threshold());
        std::vector<long long> sizes = criterion_sizes(input, start, 1e6, 3);
        for (long long q : sizes) {
            FiniteModel m = build_model(input.theory, q, pattern);
            // identical solution sets: compare per assignment
            const std::size_t n = input.vars.size();
            std::vector<long long> tuple(n, 0);
            bool same = true;
            for (;;) {
                std::map<std::string, long long> env;
                for (std::size_t i = 0; i < n; ++i) env[input.vars[i].name] = tuple[i];
                if (evaluate(m, input.formula, env, kOracle) != evaluate(m, qe.formula, env, kOracle))
                    same = false;
                std::size_t i = n;
                bool done = n == 0;
                while (i-- > 0) {
                    if (++tuple[i] < m.q) break;
                    tuple[i] = 0;
                    if (i == 0) done = true;
                }
                if (done || !same) break;
            }
            ++r.checks;
            if (!same) r.fail(entry.text + ": solution sets differ at q=" + std::to_string(q));
        }
    }
    r.detail << r.checks << " exhaustive solution-set comparisons";
    return r;
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<CriterionResult()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "counting polynomial matches brute force exactly", criterion1},
        {2, "rank equals degree, leading coefficient positive, full space is q^n", criterion2},
        {3, "parameter partition is exclusive, exhaustive, and exact", criterion3},
        {4, "product law for disjoint-variable formulas", criterion4},
        {5, "two-way fiber counting identity with k = ell at full degree", criterion5},
        {6, "density dichotomy with verified subset inequalities", criterion6},
        {7, "oracle interpolation reproduces the engine polynomial", criterion7},
        {8, "quantifier elimination preserves solution sets", criterion8},
    };

    int failures = 0;
    auto suite_start = std::chrono::steady_clock::now();
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        CriterionResult result;
        try {
            result = criterion.run();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail << "exception: " << e.what();
        }
        auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        std::cout << "criterion " << criterion.number << " (" << criterion.name << "): "
                  << (result.pass ? "PASS" : "FAIL") << "  [" << result.detail.str() << ", " << ms.count()
                  << " ms]" << std::endl;
        if (!result.pass) ++failures;
    }
    auto total = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                       suite_start);
    std::cout << (failures == 0 ? "acceptance: all criteria PASS" : "acceptance: FAILURES") << "  ["
              << total.count() << " ms total]" << std::endl;
    return failures;
}
