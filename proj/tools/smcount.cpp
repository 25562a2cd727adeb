#include "smcount/analyses.hpp"
#include "smcount/engine.hpp"
#include "smcount/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace smcount;

namespace {

// exit codes: 0 success, 1 usage/parse error, 2 engine cap exceeded,
// 3 verification mismatch.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCap = 2;
constexpr int kExitMismatch = 3;

long long to_i64(const BigInt& v) {
    if (v > BigInt(std::numeric_limits<long long>::max()) || v < BigInt(std::numeric_limits<long long>::min()))
        throw CapExceeded("value exceeds 64-bit range in report");
    return static_cast<long long>(v);
}

json poly_coeffs_json(const IntPoly& p) {
    json arr = json::array();
    for (const auto& c : p.coefficients()) arr.push_back(to_i64(c));
    return arr;
}

json count_result_json(const CountResult& r) {
    return json{{"poly_coeffs", poly_coeffs_json(r.poly)},
                {"poly_display", r.poly.to_string()},
                {"threshold_q0", r.threshold_q0},
                {"morley_rank", r.morley_rank},
                {"morley_degree", r.morley_degree},
                {"leading_coefficient", to_i64(r.leading_coefficient)}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<Symbol> union_params(std::initializer_list<const Input*> inputs) {
    std::vector<Symbol> out;
    std::set<std::string> seen;
    for (const Input* in : inputs)
        for (const auto& p : in->params)
            if (seen.insert(p.name).second) out.push_back(p);
    return out;
}

ParamPattern select_pattern(const TheorySpec& theory, const std::vector<Symbol>& params,
                            const std::string& expr, const EngineLimits& limits) {
    if (expr.empty()) return generic_pattern(theory, params);
    std::ostringstream decl;
    if (!params.empty()) {
        decl << "param ";
        for (std::size_t i = 0; i < params.size(); ++i) decl << (i ? ", " : "") << params[i].name;
        decl << "; ";
    }
    decl << expr;
    Input constraint = parse_input(decl.str(), theory);
    std::vector<ParamPattern> matches;
    for (auto& pattern : enumerate_patterns(theory, params, limits))
        if (pattern.satisfies(constraint.formula)) matches.push_back(std::move(pattern));
    if (matches.empty()) throw std::invalid_argument("no parameter pattern satisfies '" + expr + "'");
    if (matches.size() > 1)
        throw std::invalid_argument("pattern constraint '" + expr + "' is ambiguous (" +
                                    std::to_string(matches.size()) + " patterns match); tighten it");
    return matches.front();
}

const Input& need_main(const InputFile& file, const std::string& command) {
    if (!file.main) throw std::invalid_argument("'" + command + "' needs a plain formula file, not sections");
    return *file.main;
}

const Input& need_section(const InputFile& file, const std::string& name) {
    auto it = file.sections.find(name);
    if (it == file.sections.end()) throw std::invalid_argument("missing section '" + name + ":'");
    return it->second;
}

GraphInput assemble_graph(const InputFile& file) {
    GraphInput g{need_section(file, "V"), need_section(file, "W"), need_section(file, "E")};
    if (!g.E.vars.empty())
        throw std::invalid_argument("the E section must not declare variables; it uses V's then W's");
    g.E.vars = g.V.vars;
    g.E.vars.insert(g.E.vars.end(), g.W.vars.begin(), g.W.vars.end());
    return g;
}

struct Report {
    json machine;
    std::string human;
    int exit_code = kExitOk;
};

void emit(const Report& report, bool as_json) {
    if (as_json) {
        std::cout << report.machine.dump(2) << "\n";
    } else {
        std::cout << report.human;
    }
}

std::string fmt_pattern(const ParamPattern& p) { return render(p.render()); }

// ---------- count ----------

Report run_count(const InputFile& file, const ParamPattern& pattern, const EngineLimits& limits) {
    const Input& input = need_main(file, "count");
    CountResult r = count(input, pattern, limits);
    Report report;
    report.machine = count_result_json(r);
    report.machine["command"] = "count";
    report.machine["theory"] = theory_name(file.theory);
    report.machine["formula"] = render(input.formula);
    report.machine["pattern"] = fmt_pattern(pattern);
    report.machine["oracle"] = json::array();
    std::ostringstream out;
    out << "theory: " << theory_name(file.theory) << "\n";
    out << "formula: " << render(input.formula) << "\n";
    out << "pattern: " << fmt_pattern(pattern) << "\n";
    out << "P(q) = " << r.poly.to_string() << "\n";
    out << "threshold q0 = " << r.threshold_q0 << "\n";
    out << "Morley rank = " << r.morley_rank << ", Morley degree = " << r.morley_degree
        << ", leading coefficient = " << r.leading_coefficient.str() << "\n";
    report.human = out.str();
    return report;
}

// ---------- partition ----------

Report run_partition(const InputFile& file, const EngineLimits& limits) {
    const Input& input = need_main(file, "partition");
    PartitionResult result = parametric_count(input, limits);
    Report report;
    json entries = json::array();
    std::ostringstream out;
    out << "theory: " << theory_name(file.theory) << "\n";
    out << "formula: " << render(input.formula) << "\n";
    out << "entries: " << result.entries.size() << "\n";
    for (const auto& entry : result.entries) {
        json e = count_result_json(entry.result);
        e["pattern"] = render(entry.condition);
        entries.push_back(std::move(e));
        out << "  " << render(entry.condition) << "  ->  P(q) = " << entry.result.poly.to_string()
            << "  (rank " << entry.result.morley_rank << ", degree " << entry.result.morley_degree
            << ", q0 " << entry.result.threshold_q0 << ")\n";
    }
    report.machine = json{{"command", "partition"},
                          {"theory", theory_name(file.theory)},
                          {"formula", render(input.formula)},
                          {"partition", std::move(entries)},
                          {"oracle", json::array()}};
    report.human = out.str();
    return report;
}

// ---------- decompose ----------

Report run_decompose(const InputFile& file, const ParamPattern& pattern, const EngineLimits& limits) {
    const Input& input = need_main(file, "decompose");
    QeResult qe = quantifier_eliminate(input.theory, input.formula, limits);
    std::vector<Cell> cells = decompose(input.theory, input.vars, qe.formula, pattern, limits);
    Report report;
    json arr = json::array();
    std::ostringstream out;
    out << "theory: " << theory_name(file.theory) << "\n";
    out << "formula: " << render(input.formula) << "\n";
    out << "quantifier-free form: " << render(qe.formula) << " (threshold " << qe.threshold << ")\n";
    out << "cells: " << cells.size() << "\n";
    for (const auto& cell : cells) {
        arr.push_back(json{{"formula", render(cell.formula)},
                           {"poly_coeffs", poly_coeffs_json(cell.poly)},
                           {"poly_display", cell.poly.to_string()}});
        out << "  " << render(cell.formula) << "  ->  " << cell.poly.to_string() << "\n";
    }
    report.machine = json{{"command", "decompose"},
                          {"theory", theory_name(file.theory)},
                          {"formula", render(input.formula)},
                          {"qf", render(qe.formula)},
                          {"threshold", qe.threshold},
                          {"cells", std::move(arr)},
                          {"oracle", json::array()}};
    report.human = out.str();
    return report;
}

// ---------- unimod ----------

Report run_unimod(const InputFile& file, const ParamPattern& pattern, const EngineLimits& limits) {
    const Input& psi = need_section(file, "PSI");
    CorrespondenceReport r = unimodularity_check(psi, pattern, limits);
    Report report;
    report.machine = json{{"command", "unimod"},
                          {"theory", theory_name(file.theory)},
                          {"formula", render(psi.formula)},
                          {"pattern", fmt_pattern(pattern)},
                          {"n", r.n},
                          {"k", r.k},
                          {"ell", r.ell},
                          {"Z_coeffs", poly_coeffs_json(r.Z_poly)},
                          {"X_coeffs", poly_coeffs_json(r.X_poly)},
                          {"Y_coeffs", poly_coeffs_json(r.Y_poly)},
                          {"Z_display", r.Z_poly.to_string()},
                          {"X_display", r.X_poly.to_string()},
                          {"Y_display", r.Y_poly.to_string()},
                          {"identity_holds", r.identity_holds},
                          {"full_degree", r.full_degree},
                          {"k_equals_ell", r.k_equals_ell},
                          {"threshold_q0", r.threshold},
                          {"oracle", json::array()}};
    std::ostringstream out;
    out << "theory: " << theory_name(file.theory) << "\n";
    out << "correspondence: " << render(psi.formula) << "\n";
    out << "pattern: " << fmt_pattern(pattern) << "\n";
    out << "n = " << r.n << ", k = " << r.k << ", ell = " << r.ell << "\n";
    out << "Z(q) = " << r.Z_poly.to_string() << ", X(q) = " << r.X_poly.to_string() << ", Y(q) = "
        << r.Y_poly.to_string() << "\n";
    out << "identity Z = k*X = ell*Y: " << (r.identity_holds ? "holds" : "FAILS") << "\n";
    out << "full-degree projections: " << (r.full_degree ? "yes" : "no")
        << (r.full_degree ? (r.k_equals_ell ? " (k = ell confirmed)" : " (k != ell: VIOLATION)") : "") << "\n";
    report.human = out.str();
    if (!r.identity_holds || (r.full_degree && !r.k_equals_ell)) report.exit_code = kExitMismatch;
    return report;
}

// ---------- regularity ----------

json regularity_json(const RegularityReport& r) {
    return json{{"case", r.case_tag == RegularityCase::dense ? "dense" : "sparse"},
                {"d1", r.d1},
                {"d2", r.d2},
                {"R_coeffs", poly_coeffs_json(r.R_poly)},
                {"R_display", r.R_poly.to_string()},
                {"E_coeffs", poly_coeffs_json(r.E_poly)},
                {"V_coeffs", poly_coeffs_json(r.V_poly)},
                {"W_coeffs", poly_coeffs_json(r.W_poly)},
                {"threshold_q0", r.threshold}};
}

void regularity_human(std::ostream& out, const RegularityReport& r, const std::string& indent) {
    out << indent << "V(q) = " << r.V_poly.to_string() << ", W(q) = " << r.W_poly.to_string()
        << ", E(q) = " << r.E_poly.to_string() << "\n";
    out << indent << "d1 = " << r.d1 << ", d2 = " << r.d2 << ", case: "
        << (r.case_tag == RegularityCase::dense ? "dense" : "sparse") << "\n";
    out << indent << "R(q) = " << r.R_poly.to_string() << " (degree " << r.R_poly.degree() << " < "
        << r.d1 + r.d2 << ")\n";
}

Report run_regularity(const InputFile& file, const ParamPattern& pattern, bool split,
                      const EngineLimits& limits) {
    GraphInput g = assemble_graph(file);
    Report report;
    std::ostringstream out;
    out << "theory: " << theory_name(file.theory) << "\n";
    out << "V: " << render(g.V.formula) << "\nW: " << render(g.W.formula) << "\nE: " << render(g.E.formula)
        << "\n";
    json graph_echo = json{{"V", render(g.V.formula)}, {"W", render(g.W.formula)}, {"E", render(g.E.formula)}};
    if (!split) {
        RegularityReport r = regularity_analyze(g, pattern, limits);
        report.machine = regularity_json(r);
        report.machine["command"] = "regularity";
        report.machine["theory"] = theory_name(file.theory);
        report.machine["pattern"] = fmt_pattern(pattern);
        report.machine["formula"] = std::move(graph_echo);
        report.machine["oracle"] = json::array();
        regularity_human(out, r, "");
        report.human = out.str();
        return report;
    }
    SplitReport r = regularity_split(g, pattern, limits);
    json pairs = json::array();
    out << "split: " << r.pairs.size() << " top-rank pair(s), " << r.remainders.size()
        << " remainder piece(s)\n";
    for (const auto& pair : r.pairs) {
        json pj = regularity_json(pair.report);
        pj["V_piece"] = render(pair.v_piece);
        pj["W_piece"] = render(pair.w_piece);
        pairs.push_back(std::move(pj));
        out << "piece pair: V_i = " << render(pair.v_piece) << " ; W_j = " << render(pair.w_piece) << "\n";
        regularity_human(out, pair.report, "  ");
    }
    json rem = json::array();
    for (const auto& piece : r.remainders) {
        rem.push_back(json{{"side", std::string(1, piece.side)},
                           {"formula", render(piece.formula)},
                           {"poly_coeffs", poly_coeffs_json(piece.poly)},
                           {"poly_display", piece.poly.to_string()}});
        out << "remainder (" << piece.side << "): " << render(piece.formula) << "  ->  "
            << piece.poly.to_string() << "\n";
    }
    report.machine = json{{"command", "regularity"},
                          {"theory", theory_name(file.theory)},
                          {"pattern", fmt_pattern(pattern)},
                          {"formula", std::move(graph_echo)},
                          {"split", true},
                          {"E_coeffs", poly_coeffs_json(r.E_poly)},
                          {"V_coeffs", poly_coeffs_json(r.V_poly)},
                          {"W_coeffs", poly_coeffs_json(r.W_poly)},
                          {"pairs", std::move(pairs)},
                          {"remainders", std::move(rem)},
                          {"threshold_q0", r.threshold},
                          {"oracle", json::array()}};
    report.human = out.str();
    return report;
}

// ---------- verify ----------

std::vector<long long> parse_sizes(const std::string& list) {
    std::vector<long long> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    if (out.empty()) throw std::invalid_argument("--sizes needs at least one size");
    return out;
}

IntPoly parse_coeffs(const std::string& list) {
    std::vector<BigInt> coeffs;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(BigInt(item));
    return IntPoly(std::move(coeffs));
}

struct OracleRow {
    long long q;
    std::string kind;
    BigInt expected;
    BigInt actual;
    bool match;
};

json oracle_json(const std::vector<OracleRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows)
        arr.push_back(json{{"q", row.q},
                           {"kind", row.kind},
                           {"expected", to_i64(row.expected)},
                           {"actual", to_i64(row.actual)},
                           {"match", row.match}});
    return arr;
}

Report run_verify(const InputFile& file, const ParamPattern& pattern, const std::vector<long long>& sizes,
                  const std::string& expect, long trials, std::uint64_t seed, bool split,
                  const EngineLimits& limits, const OracleLimits& oracle_limits) {
    Report report;
    std::vector<OracleRow> rows;
    std::ostringstream out;
    out << "theory: " << theory_name(file.theory) << "\n";

    if (file.main) {
        const Input& input = *file.main;
        CountResult r = count(input, pattern, limits);
        IntPoly expected_poly = expect.empty() ? r.poly : parse_coeffs(expect);
        long long q0 = std::max<long long>(r.threshold_q0, 1);
        for (long long q : sizes) {
            if (q < q0)
                throw std::invalid_argument("size " + std::to_string(q) + " is below threshold q0 = " +
                                            std::to_string(q0));
            FiniteModel m = build_model(file.theory, q, pattern, seed);
            BigInt actual = brute_count(m, input, oracle_limits);
            BigInt expected = expected_poly.eval(BigInt(q));
            rows.push_back({q, "count", expected, actual, expected == actual});
        }
        report.machine["poly_display"] = r.poly.to_string();
        report.machine["poly_coeffs"] = poly_coeffs_json(r.poly);
        out << "formula: " << render(input.formula) << "\nP(q) = " << r.poly.to_string() << "\n";
    } else if (file.sections.count("PSI")) {
        const Input& psi = need_section(file, "PSI");
        CorrespondenceReport r = unimodularity_check(psi, pattern, limits);
        if (!r.identity_holds) report.exit_code = kExitMismatch;
        const auto& left = psi.var_groups[0];
        const auto& right = psi.var_groups[1];
        Input z_in = psi;
        z_in.formula = r.chi;
        Input x_in = psi;
        x_in.vars = left;
        x_in.formula = exists_tuple(right, r.chi);
        Input y_in = psi;
        y_in.vars = right;
        y_in.formula = exists_tuple(left, r.chi);
        long long q0 = std::max<long long>(r.threshold, 1);
        for (long long q : sizes) {
            if (q < q0)
                throw std::invalid_argument("size " + std::to_string(q) + " is below threshold q0 = " +
                                            std::to_string(q0));
            FiniteModel m = build_model(file.theory, q, pattern, seed);
            BigInt z = brute_count(m, z_in, oracle_limits);
            BigInt x = brute_count(m, x_in, oracle_limits);
            BigInt y = brute_count(m, y_in, oracle_limits);
            rows.push_back({q, "Z", r.Z_poly.eval(BigInt(q)), z, r.Z_poly.eval(BigInt(q)) == z});
            rows.push_back({q, "X", r.X_poly.eval(BigInt(q)), x, r.X_poly.eval(BigInt(q)) == x});
            rows.push_back({q, "Y", r.Y_poly.eval(BigInt(q)), y, r.Y_poly.eval(BigInt(q)) == y});
        }
        out << "correspondence: k = " << r.k << ", ell = " << r.ell << "\n";
    } else {
        GraphInput g = assemble_graph(file);
        std::vector<std::pair<GraphInput, RegularityReport>> checks;
        if (split) {
            SplitReport s = regularity_split(g, pattern, limits);
            for (const auto& pair : s.pairs) checks.emplace_back(restrict_pair(g, pair), pair.report);
        } else {
            checks.emplace_back(g, regularity_analyze(g, pattern, limits));
        }
        for (long long q : sizes) {
            FiniteModel m = build_model(file.theory, q, pattern, seed);
            for (const auto& [piece, rr] : checks) {
                if (q < std::max<long long>(rr.threshold, 1))
                    throw std::invalid_argument("size " + std::to_string(q) + " is below threshold q0 = " +
                                                std::to_string(std::max<long long>(rr.threshold, 1)));
                BigInt e_actual = brute_count(m, piece.E, oracle_limits);
                BigInt e_expected = rr.E_poly.eval(BigInt(q));
                rows.push_back({q, "E", e_expected, e_actual, e_expected == e_actual});
                VerifySummary vs = regularity_verify(m, piece, rr, trials, seed, oracle_limits);
                rows.push_back({q, vs.exhaustive ? "subsets(exhaustive)" : "subsets(sampled)",
                                BigInt(0), BigInt(vs.violations), vs.pass});
                out << "q=" << q << " subsets: " << vs.samples << " pairs, " << vs.violations
                    << " violations, worst margin " << vs.worst_margin.str() << "\n";
            }
        }
    }

    bool all_match = true;
    for (const auto& row : rows) {
        all_match = all_match && row.match;
        out << "q=" << row.q << " [" << row.kind << "]: expected " << row.expected.str() << ", actual "
            << row.actual.str() << (row.match ? "" : "  << MISMATCH") << "\n";
    }
    out << (all_match && report.exit_code == kExitOk ? "verify: PASS" : "verify: FAIL") << "\n";
    if (!all_match) report.exit_code = kExitMismatch;
    report.machine["command"] = "verify";
    report.machine["theory"] = theory_name(file.theory);
    report.machine["oracle"] = oracle_json(rows);
    report.machine["pass"] = all_match && report.exit_code == kExitOk;
    report.human = out.str();
    return report;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact counting of definable sets over finite models of two strongly minimal theories"};
    app.require_subcommand(1);

    std::string file_path, pattern_expr, sizes_expr, expect_expr;
    bool as_json = false, split = false;
    long trials = 200;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool with_pattern = true) {
        cmd->add_option("file", file_path, "input file")->required();
        cmd->add_flag("--json", as_json, "machine-readable output");
        if (with_pattern)
            cmd->add_option("--pattern", pattern_expr, "parameter-pattern constraint, e.g. \"a != 0\"");
    };

    CLI::App* cmd_count = app.add_subcommand("count", "counting polynomial with rank data");
    add_common(cmd_count);
    CLI::App* cmd_partition = app.add_subcommand("partition", "one polynomial per parameter pattern");
    add_common(cmd_partition, false);
    CLI::App* cmd_decompose = app.add_subcommand("decompose", "disjoint cells of the formula");
    add_common(cmd_decompose);
    CLI::App* cmd_unimod = app.add_subcommand("unimod", "two-way fiber counting identity");
    add_common(cmd_unimod);
    CLI::App* cmd_regularity = app.add_subcommand("regularity", "density dichotomy for a definable graph");
    add_common(cmd_regularity);
    cmd_regularity->add_flag("--split", split, "decompose the sides into degree-1 pieces first");
    CLI::App* cmd_verify = app.add_subcommand("verify", "cross-check against brute-force finite models");
    add_common(cmd_verify);
    cmd_verify->add_option("--sizes", sizes_expr, "comma-separated model sizes")->required();
    cmd_verify->add_option("--seed", seed, "model/sampling seed");
    cmd_verify->add_option("--trials", trials, "random subset pairs per size");
    cmd_verify->add_option("--expect", expect_expr, "ascending coefficients to verify instead of the engine's");
    cmd_verify->add_flag("--split", split, "use the split refinement for graph files");

    CLI11_PARSE(app, argc, argv);

    EngineLimits limits = default_limits();
    OracleLimits oracle_limits;

    auto fail = [&](const std::string& reason, int code) {
        if (as_json) {
            std::cout << json{{"error", reason}}.dump(2) << "\n";
        } else {
            std::cout << "error: " << reason << "\n";
        }
        return code;
    };

    try {
        InputFile file = parse_file(read_file(file_path));
        std::vector<Symbol> params;
        if (file.main) {
            params = file.main->params;
        } else if (file.sections.count("PSI")) {
            params = need_section(file, "PSI").params;
        } else {
            GraphInput g = assemble_graph(file);
            params = union_params({&g.V, &g.W, &g.E});
        }
        ParamPattern pattern = select_pattern(file.theory, params, pattern_expr, limits);

        Report report;
        if (app.got_subcommand(cmd_count)) {
            report = run_count(file, pattern, limits);
        } else if (app.got_subcommand(cmd_partition)) {
            report = run_partition(file, limits);
        } else if (app.got_subcommand(cmd_decompose)) {
            report = run_decompose(file, pattern, limits);
        } else if (app.got_subcommand(cmd_unimod)) {
            report = run_unimod(file, pattern, limits);
        } else if (app.got_subcommand(cmd_regularity)) {
            report = run_regularity(file, pattern, split, limits);
        } else {
            report = run_verify(file, pattern, parse_sizes(sizes_expr), expect_expr, trials, seed, split,
                                limits, oracle_limits);
        }
        emit(report, as_json);
        return report.exit_code;
    } catch (const ParseError& e) {
        return fail(std::string("parse: ") + e.what(), kExitUsage);
    } catch (const BudgetExceeded& e) {
        return fail(std::string("budget: ") + e.what(), kExitCap);
    } catch (const CapExceeded& e) {
        return fail(std::string("cap: ") + e.what(), kExitCap);
    } catch (const AnalysisError& e) {
        return fail(std::string("rejected: ") + e.what(), kExitCap);
    } catch (const std::invalid_argument& e) {
        return fail(e.what(), kExitUsage);
    } catch (const std::exception& e) {
        return fail(e.what(), kExitCap);
    }
}
