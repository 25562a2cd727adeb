#include "smcount/oracle.hpp"

#include "smcount/modarith.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace smcount {

// ---------- element arithmetic ----------

long long FiniteModel::vs_add(long long a, long long b) const {
    const int p = theory.prime;
    if (p == 2) return a ^ b;
    long long result = 0, place = 1;
    for (int d = 0; d < exponent; ++d) {
        result += ((a + b) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    return result;
}

long long FiniteModel::vs_scale(int c, long long a) const {
    const int p = theory.prime;
    if (c == 0) return 0;
    if (c == 1) return a;
    long long result = 0, place = 1;
    for (int d = 0; d < exponent; ++d) {
        result += (a % p * c) % p * place;
        a /= p;
        place *= p;
    }
    return result;
}

std::string FiniteModel::element_name(long long code) const {
    if (theory.kind == TheoryKind::pure_set) return std::to_string(code);
    std::ostringstream out;
    out << "(";
    for (int d = 0; d < exponent; ++d) {
        if (d) out << ",";
        out << code % theory.prime;
        code /= theory.prime;
    }
    out << ")";
    return out.str();
}

// ---------- model construction ----------

namespace {
FiniteModel build_pure_model(long long q, const EqPattern& pattern, std::uint64_t seed) {
    if (q < 1) throw std::invalid_argument("model size must be at least 1");
    const int blocks = pattern.block_count();
    if (blocks > q)
        throw std::invalid_argument("pattern with " + std::to_string(blocks) +
                                    " distinct parameter blocks is not realizable at size " + std::to_string(q));
    std::vector<long long> block_value(blocks);
    if (seed == 0) {
        std::iota(block_value.begin(), block_value.end(), 0);
    } else {
        // Partial Fisher-Yates over 0..q-1, deterministic for the seed.
        std::mt19937_64 rng(seed);
        std::map<long long, long long> moved;
        for (int i = 0; i < blocks; ++i) {
            std::uniform_int_distribution<long long> dist(i, q - 1);
            long long j = dist(rng);
            long long vi = moved.count(i) ? moved[i] : i;
            long long vj = moved.count(j) ? moved[j] : j;
            block_value[i] = vj;
            moved[j] = vi;
        }
    }
    FiniteModel m;
    m.theory = TheorySpec{TheoryKind::pure_set, 0};
    m.q = q;
    for (std::size_t i = 0; i < pattern.universe.size(); ++i)
        m.param_values[pattern.universe[i].name] = block_value[pattern.block_of[i]];
    return m;
}

FiniteModel build_vs_model(const TheorySpec& theory, long long q, const LinPattern& pattern,
                           std::uint64_t seed) {
    const int p = theory.prime;
    int exponent = 0;
    long long size = 1;
    while (size < q) {
        size *= p;
        ++exponent;
    }
    if (size != q)
        throw std::invalid_argument("size " + std::to_string(q) + " is not a power of p=" + std::to_string(p));

    const std::size_t m = pattern.params.size();
    const std::size_t indep = pattern.independent_count();
    if (static_cast<std::size_t>(exponent) < indep)
        throw std::invalid_argument("pattern with " + std::to_string(indep) +
                                    " independent parameters is not realizable at size " + std::to_string(q));

    FiniteModel model;
    model.theory = theory;
    model.q = q;
    model.exponent = exponent;

    std::set<std::size_t> pivot_cols;
    for (const auto& row : pattern.basis) {
        std::size_t pivot = 0;
        while (pivot < row.size() && row[pivot] == 0) ++pivot;
        pivot_cols.insert(pivot);
    }
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < m; ++j)
        if (!pivot_cols.count(j)) free_cols.push_back(j);

    // Independent vectors for the free parameters: the standard basis for
    // seed 0, otherwise a seeded search for an independent family.
    std::vector<long long> value(m, 0);
    std::vector<long long> free_values(indep);
    if (seed == 0) {
        long long place = 1;
        for (std::size_t i = 0; i < indep; ++i) {
            free_values[i] = place;
            place *= p;
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<long long> dist(0, q - 1);
        for (int attempt = 0; attempt < 4096; ++attempt) {
            for (auto& v : free_values) v = dist(rng);
            ModMatrix digits = ModMatrix::zero(p, indep, static_cast<std::size_t>(exponent));
            for (std::size_t i = 0; i < indep; ++i) {
                long long code = free_values[i];
                for (int d = 0; d < exponent; ++d) {
                    digits.at(i, static_cast<std::size_t>(d)) = static_cast<int>(code % p);
                    code /= p;
                }
            }
            if (rref(digits).rank == indep) break;
            if (attempt == 4095) throw std::runtime_error("failed to sample independent parameter vectors");
        }
    }
    for (std::size_t i = 0; i < indep; ++i) value[free_cols[i]] = free_values[i];

    // Pivot parameters follow from the basis relations.
    for (const auto& row : pattern.basis) {
        std::size_t pivot = 0;
        while (pivot < row.size() && row[pivot] == 0) ++pivot;
        long long acc = 0;
        for (std::size_t j : free_cols)
            if (row[j] != 0) acc = model.vs_add(acc, model.vs_scale(row[j], value[j]));
        value[pivot] = model.vs_scale(p - 1, acc);  // negate
    }

    for (std::size_t j = 0; j < m; ++j) model.param_values[pattern.params[j].name] = value[j];
    return model;
}
}  // namespace

FiniteModel build_model(const TheorySpec& theory, long long q, const ParamPattern& pattern,
                        std::uint64_t seed) {
    if (theory.kind == TheoryKind::pure_set) return build_pure_model(q, pattern.eq(), seed);
    return build_vs_model(theory, q, pattern.lin(), seed);
}

// ---------- evaluation ----------

namespace {
struct EvalContext {
    const FiniteModel& model;
    std::map<std::string, long long> env;
    unsigned long long budget;
    unsigned long long used = 0;

    void charge() {
        if (++used > budget)
            throw BudgetExceeded("evaluation budget of " + std::to_string(budget) + " atomic steps exceeded");
    }

    long long value_of(const Symbol& s) {
        auto it = env.find(s.name);
        if (it != env.end()) return it->second;
        auto pit = model.param_values.find(s.name);
        if (pit != model.param_values.end()) return pit->second;
        throw std::invalid_argument("symbol '" + s.name + "' has no value in the model");
    }
};

bool eval_rec(EvalContext& ctx, const FormulaPtr& f) {
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TrueNode>) {
                return true;
            } else if constexpr (std::is_same_v<T, FalseNode>) {
                return false;
            } else if constexpr (std::is_same_v<T, PureAtom>) {
                ctx.charge();
                return ctx.value_of(x.lhs) == ctx.value_of(x.rhs);
            } else if constexpr (std::is_same_v<T, LinAtom>) {
                ctx.charge();
                long long sum = 0;
                for (const auto& [sym, c] : x.coeffs)
                    sum = ctx.model.vs_add(sum, ctx.model.vs_scale(c, ctx.value_of(sym)));
                return sum == 0;
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return !eval_rec(ctx, x.inner);
            } else if constexpr (std::is_same_v<T, AndNode>) {
                for (const auto& p : x.parts)
                    if (!eval_rec(ctx, p)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, OrNode>) {
                for (const auto& p : x.parts)
                    if (eval_rec(ctx, p)) return true;
                return false;
            } else if constexpr (std::is_same_v<T, ImpliesNode>) {
                return !eval_rec(ctx, x.lhs) || eval_rec(ctx, x.rhs);
            } else {
                bool had = ctx.env.count(x.var.name);
                long long saved = had ? ctx.env[x.var.name] : 0;
                bool result = x.universal;
                for (long long d = 0; d < ctx.model.q; ++d) {
                    ctx.env[x.var.name] = d;
                    bool b = eval_rec(ctx, x.body);
                    if (x.universal && !b) {
                        result = false;
                        break;
                    }
                    if (!x.universal && b) {
                        result = true;
                        break;
                    }
                }
                if (had) {
                    ctx.env[x.var.name] = saved;
                } else {
                    ctx.env.erase(x.var.name);
                }
                return result;
            }
        },
        f->node);
}
}  // namespace

bool evaluate(const FiniteModel& m, const FormulaPtr& f, const std::map<std::string, long long>& assignment,
              const OracleLimits& limits) {
    EvalContext ctx{m, assignment, limits.eval_budget};
    return eval_rec(ctx, f);
}

unsigned long long brute_count(const FiniteModel& m, const Input& input, const OracleLimits& limits) {
    EvalContext ctx{m, {}, limits.eval_budget};
    const std::size_t n = input.vars.size();
    std::vector<long long> tuple(n, 0);
    unsigned long long count = 0;
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) ctx.env[input.vars[i].name] = tuple[i];
        if (eval_rec(ctx, input.formula)) ++count;
        // lexicographic odometer, last variable fastest
        std::size_t i = n;
        while (i-- > 0) {
            if (++tuple[i] < m.q) break;
            tuple[i] = 0;
            if (i == 0) return count;
        }
        if (n == 0) return count;
    }
}

// ---------- interpolation ----------

IntPoly interpolate(const std::vector<std::pair<BigInt, BigInt>>& points) {
    using Rat = boost::multiprecision::cpp_rational;
    const std::size_t k = points.size();
    if (k < 2) throw std::invalid_argument("interpolation needs at least 2 points");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (points[i].first == points[j].first)
                throw std::invalid_argument("duplicate abscissa q=" + points[i].first.str());

    std::vector<Rat> acc(k, Rat(0));
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rat> basis{Rat(1)};
        Rat denom(1);
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            // basis *= (x - q_j)
            std::vector<Rat> next(basis.size() + 1, Rat(0));
            for (std::size_t t = 0; t < basis.size(); ++t) {
                next[t] -= basis[t] * Rat(points[j].first);
                next[t + 1] += basis[t];
            }
            basis = std::move(next);
            denom *= Rat(points[i].first - points[j].first);
        }
        Rat scale = Rat(points[i].second) / denom;
        for (std::size_t t = 0; t < basis.size(); ++t) acc[t] += basis[t] * scale;
    }

    std::vector<BigInt> coeffs;
    coeffs.reserve(k);
    for (std::size_t t = 0; t < k; ++t) {
        if (boost::multiprecision::denominator(acc[t]) != 1)
            throw std::invalid_argument("points do not lie on an integer polynomial: coefficient of q^" +
                                        std::to_string(t) + " is " + acc[t].str());
        coeffs.push_back(boost::multiprecision::numerator(acc[t]));
    }
    return IntPoly(std::move(coeffs));
}

}  // namespace smcount
