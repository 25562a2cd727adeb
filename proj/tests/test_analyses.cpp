#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smcount/analyses.hpp"

using namespace smcount;

namespace {
const TheorySpec kPure{TheoryKind::pure_set, 0};
const TheorySpec kVs2{TheoryKind::vector_space, 2};
const TheorySpec kVs3{TheoryKind::vector_space, 3};

IntPoly poly(std::vector<long long> coeffs) {
    std::vector<BigInt> big(coeffs.begin(), coeffs.end());
    return IntPoly(std::move(big));
}

Input psi_of(const std::string& file_text) {
    InputFile file = parse_file(file_text);
    return file.sections.at("PSI");
}

GraphInput graph_of(const std::string& file_text) {
    InputFile file = parse_file(file_text);
    GraphInput g{file.sections.at("V"), file.sections.at("W"), file.sections.at("E")};
    g.E.vars = g.V.vars;
    g.E.vars.insert(g.E.vars.end(), g.W.vars.begin(), g.W.vars.end());
    return g;
}

ParamPattern pattern_for(const Input& any, const std::string& constraint) {
    auto patterns = enumerate_patterns(any.theory, any.params);
    if (constraint.empty()) return generic_pattern(any.theory, any.params);
    std::string decls;
    if (!any.params.empty()) {
        decls = "param ";
        for (std::size_t i = 0; i < any.params.size(); ++i) decls += (i ? ", " : "") + any.params[i].name;
        decls += "; ";
    }
    Input parsed = parse_input(decls + constraint, any.theory);
    for (const auto& p : patterns)
        if (p.satisfies(parsed.formula)) return p;
    throw std::logic_error("no pattern matches " + constraint);
}
}  // namespace

TEST_CASE("exactly_k compiles to a counting condition") {
    Input in = parse_input("var x, y; x = y", kPure);
    NameGen gen;
    gen.reserve_all(in.formula);
    Symbol y{"y", SymbolKind::variable};

    // every x has exactly one y with x = y
    FormulaPtr one = exactly_k(kPure, 1, {y}, in.formula, gen);
    Input probe{kPure, {{"x", SymbolKind::variable}}, {}, one, {}};
    CHECK(count(probe).poly == poly({0, 1}));

    // and never exactly two
    FormulaPtr two = exactly_k(kPure, 2, {y}, in.formula, gen);
    probe.formula = two;
    CHECK(count(probe).poly.is_zero());

    // exactly zero: the complement of the projection
    FormulaPtr zero = exactly_k(kPure, 0, {y}, in.formula, gen);
    probe.formula = zero;
    CHECK(count(probe).poly.is_zero());
}

TEST_CASE("unimodularity: identity correspondence") {
    Input psi = psi_of("theory vector_space p=2\nPSI: var x; var y; y = x\n");
    CorrespondenceReport r = unimodularity_check(psi, generic_pattern(kVs2, {}));
    CHECK(r.k == 1);
    CHECK(r.ell == 1);
    CHECK(r.Z_poly == poly({0, 1}));
    CHECK(r.X_poly == poly({0, 1}));
    CHECK(r.Y_poly == poly({0, 1}));
    CHECK(r.identity_holds);
    CHECK(r.full_degree);
    CHECK(r.k_equals_ell);
}

TEST_CASE("unimodularity: two-to-two coset correspondence") {
    Input psi = psi_of("theory vector_space p=2\nparam a;\nPSI: var x; var y; (y = x) | (y = x + a)\n");
    ParamPattern nonzero = pattern_for(psi, "a != 0");
    CorrespondenceReport r = unimodularity_check(psi, nonzero);
    CHECK(r.k == 2);
    CHECK(r.ell == 2);
    CHECK(r.Z_poly == poly({0, 2}));
    CHECK(r.X_poly == poly({0, 1}));
    CHECK(r.Y_poly == poly({0, 1}));
    CHECK(r.identity_holds);
    CHECK(r.full_degree);
    CHECK(r.k_equals_ell);

    // fiber sizes confirmed by direct enumeration in F_2^e
    for (int e = 2; e <= 3; ++e) {
        long long q = 1ll << e;
        FiniteModel m = build_model(kVs2, q, nonzero);
        for (long long x = 0; x < q; ++x) {
            int fiber = 0;
            for (long long y = 0; y < q; ++y)
                if (evaluate(m, psi.formula, {{"x", x}, {"y", y}})) ++fiber;
            CHECK(fiber == 2);
        }
    }
}

TEST_CASE("unimodularity: three-way coset fibers") {
    Input psi = psi_of(
        "theory vector_space p=2\nparam a, b;\n"
        "PSI: var x; var y; (y = x) | (y = x + a) | (y = x + b)\n");
    CorrespondenceReport r = unimodularity_check(psi, generic_pattern(kVs2, psi.params));
    CHECK(r.k == 3);
    CHECK(r.ell == 3);
    CHECK(r.Z_poly == poly({0, 3}));
    CHECK(r.identity_holds);
    CHECK(r.k_equals_ell);
}

TEST_CASE("unimodularity: scaling correspondence mod 3") {
    Input psi = psi_of("theory vector_space p=3\nPSI: var x; var y; y = 2*x\n");
    CorrespondenceReport r = unimodularity_check(psi, generic_pattern(kVs3, {}));
    CHECK(r.k == 1);
    CHECK(r.ell == 1);
    CHECK(r.identity_holds);
    CHECK(r.full_degree);
}

TEST_CASE("unimodularity rejects growing fibers") {
    Input psi = psi_of("theory pure_set\nPSI: var x; var y; x != y\n");
    CHECK_THROWS_AS(unimodularity_check(psi, generic_pattern(kPure, {})), AnalysisError);
}

TEST_CASE("unimodularity rejects mismatched tuples") {
    Input psi = psi_of("theory pure_set\nPSI: var x1, x2; var y; x1 = y & x2 = y\n");
    CHECK_THROWS_AS(unimodularity_check(psi, generic_pattern(kPure, {})), AnalysisError);
}

TEST_CASE("regularity: dense complement of the diagonal") {
    GraphInput g = graph_of("theory pure_set\nV: var x; true\nW: var y; true\nE: x != y\n");
    RegularityReport r = regularity_analyze(g, generic_pattern(kPure, {}));
    CHECK(r.case_tag == RegularityCase::dense);
    CHECK(r.d1 == 1);
    CHECK(r.d2 == 1);
    CHECK(r.R_poly == poly({0, 1}));
    CHECK(r.E_poly == poly({0, -1, 1}));
}

TEST_CASE("regularity: sparse diagonal") {
    GraphInput g = graph_of("theory pure_set\nV: var x; true\nW: var y; true\nE: x = y\n");
    RegularityReport r = regularity_analyze(g, generic_pattern(kPure, {}));
    CHECK(r.case_tag == RegularityCase::sparse);
    CHECK(r.R_poly == poly({0, 1}));
}

TEST_CASE("regularity: sparse affine graph with brute-force edge counts") {
    GraphInput g = graph_of(
        "theory vector_space p=2\nparam a;\nV: var x; true\nW: var y; true\nE: x + y = a\n");
    ParamPattern nonzero = pattern_for(g.E, "a != 0");
    RegularityReport r = regularity_analyze(g, nonzero);
    CHECK(r.case_tag == RegularityCase::sparse);
    CHECK(r.R_poly == poly({0, 1}));
    for (int e = 1; e <= 3; ++e) {
        long long q = 1ll << e;
        FiniteModel m = build_model(kVs2, q, nonzero);
        CHECK(BigInt(brute_count(m, g.E)) == r.E_poly.eval(q));
    }
}

TEST_CASE("regularity rejections") {
    GraphInput loose = graph_of("theory pure_set\nV: var x; true\nW: var y; true\nE: true\n");
    loose.E.formula = f_true();
    CHECK_NOTHROW(regularity_analyze(loose, generic_pattern(kPure, {})));

    // E escapes V x W
    GraphInput escape =
        graph_of("theory pure_set\nparam a;\nV: var x; x != a\nW: var y; true\nE: x = a & y = y\n");
    CHECK_THROWS_AS(regularity_analyze(escape, generic_pattern(kPure, escape.E.params)), AnalysisError);

    // a degree-2 side must be split
    GraphInput wide = graph_of(
        "theory pure_set\nparam a, b;\nV: var x; x = a | x = b\nW: var y; true\nE: (x = a | x = b) & y = y\n");
    CHECK_THROWS_AS(regularity_analyze(wide, generic_pattern(kPure, wide.E.params)), AnalysisError);

    // empty side
    GraphInput empty = graph_of("theory pure_set\nV: var x; false\nW: var y; true\nE: false\n");
    CHECK_THROWS_AS(regularity_analyze(empty, generic_pattern(kPure, {})), AnalysisError);
}

TEST_CASE("split: trivial split delegates to the plain dichotomy") {
    GraphInput g = graph_of(
        "theory vector_space p=2\nV: var x; (x = 0) | (x != 0)\nW: var y; (y = 0) | (y != 0)\n"
        "E: x + y = 0\n");
    SplitReport r = regularity_split(g, generic_pattern(kVs2, {}));
    REQUIRE(r.pairs.size() == 1);  // one top-rank piece per side
    CHECK(r.remainders.size() == 2);
    CHECK(r.pairs[0].report.case_tag == RegularityCase::sparse);
    CHECK(r.pairs[0].report.R_poly == poly({-1, 1}));  // q - 1 pairs with both coords nonzero
}

TEST_CASE("split: empty edge set is sparse with R = 0 on every pair") {
    GraphInput g = graph_of("theory pure_set\nV: var x; true\nW: var y; true\nE: false\n");
    SplitReport r = regularity_split(g, generic_pattern(kPure, {}));
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].report.case_tag == RegularityCase::sparse);
    CHECK(r.pairs[0].report.R_poly.is_zero());
}

TEST_CASE("split: two-line sides over the vector space") {
    GraphInput g = graph_of(
        "theory vector_space p=2\nparam a;\n"
        "V: var x, y; (y = 0) | (y = x + a)\n"
        "W: var u, v; (v = 0) | (v = u + a)\n"
        "E: ((y = 0) | (y = x + a)) & ((v = 0) | (v = u + a)) & x = u\n");
    ParamPattern nonzero = pattern_for(g.E, "a != 0");
    CHECK_THROWS_AS(regularity_analyze(g, nonzero), AnalysisError);  // degree 2 sides
    SplitReport r = regularity_split(g, nonzero);
    CHECK(r.pairs.size() == 4);
    for (const auto& pair : r.pairs) {
        CHECK(pair.report.case_tag == RegularityCase::sparse);
        CHECK(pair.report.R_poly.degree() < pair.report.d1 + pair.report.d2);
    }
    // the split pieces tile E: the pair polynomials sum to E's
    IntPoly total;
    for (const auto& pair : r.pairs) total = total + pair.report.E_poly;
    CHECK(total == r.E_poly);
}

TEST_CASE("regularity verification passes on honest reports") {
    GraphInput dense = graph_of("theory pure_set\nV: var x; true\nW: var y; true\nE: x != y\n");
    RegularityReport r = regularity_analyze(dense, generic_pattern(kPure, {}));
    FiniteModel m7 = build_model(kPure, 7, generic_pattern(kPure, {}));
    VerifySummary s = regularity_verify(m7, dense, r, 50, 1);
    CHECK(s.pass);
    CHECK(s.exhaustive);  // 2^7 * 2^7 pairs fit the exhaustive budget
    CHECK(s.violations == 0);

    GraphInput diag = graph_of("theory pure_set\nV: var x; true\nW: var y; true\nE: x = y\n");
    RegularityReport r2 = regularity_analyze(diag, generic_pattern(kPure, {}));
    VerifySummary s2 = regularity_verify(m7, diag, r2, 50, 1);
    CHECK(s2.pass);

    // larger model: seeded sampling instead of exhaustion
    FiniteModel m40 = build_model(kPure, 40, generic_pattern(kPure, {}));
    VerifySummary s3 = regularity_verify(m40, dense, r, 100, 9);
    CHECK_FALSE(s3.exhaustive);
    CHECK(s3.pass);
    VerifySummary s4 = regularity_verify(m40, dense, r, 100, 9);
    CHECK(s3.samples == s4.samples);
    CHECK(s3.worst_margin == s4.worst_margin);  // deterministic for a fixed seed
}

TEST_CASE("regularity verification catches a wrong bound") {
    GraphInput dense = graph_of("theory pure_set\nV: var x; true\nW: var y; true\nE: x != y\n");
    RegularityReport r = regularity_analyze(dense, generic_pattern(kPure, {}));
    r.R_poly = IntPoly();  // claim E = V x W exactly; the diagonal refutes it
    FiniteModel m7 = build_model(kPure, 7, generic_pattern(kPure, {}));
    VerifySummary s = regularity_verify(m7, dense, r, 50, 1);
    CHECK_FALSE(s.pass);
    CHECK(s.violations > 0);
    CHECK(s.worst_margin < 0);
}

TEST_CASE("verification needs the threshold") {
    GraphInput g = graph_of(
        "theory vector_space p=2\nparam a;\nV: var x; true\nW: var y; true\nE: x + y = a\n");
    ParamPattern nonzero = pattern_for(g.E, "a != 0");
    RegularityReport r = regularity_analyze(g, nonzero);
    FiniteModel m2 = build_model(kVs2, 2, nonzero);
    CHECK_NOTHROW(regularity_verify(m2, g, r, 10, 1));
    FiniteModel tiny;
    tiny.theory = kVs2;
    tiny.q = 1;
    tiny.exponent = 0;
    tiny.param_values = {{"a", 0}};
    CHECK_THROWS_AS(regularity_verify(tiny, g, r, 10, 1), std::invalid_argument);
}
