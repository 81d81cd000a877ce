// parabint: exact intersection numbers of tautological classes on moduli of
// parabolic bundles.
//
// Subcommands:
//   integrate  evaluate a descendent expression against a moduli class
//   walls      list the walls of the weight simplex S_{r,d}
//   check      run consistency suites (wall-crossing, symmetry, Hecke, ...)
//
// Output is JSON lines (CSV with --csv); all rationals print exactly as
// "p/q".  Exit codes: 0 success, 1 suite failure, 2 usage/config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <future>
#include <random>
#include <sstream>

#include "parab/chambers.hpp"
#include "parab/engine.hpp"
#include "parab/exprparse.hpp"
#include "parab/operators.hpp"
#include "parab/vertex.hpp"

using json = nlohmann::json;
using namespace parab;

namespace {

struct Config {
    int genus = 1;
    int rank = 1;
    long degree = 0;
    std::vector<std::string> weights;  // "p/q" strings, strictly increasing
    std::vector<int> flags;            // multiplicities per weight (default all 1)
    std::string expr;
    std::vector<std::string> suites;
    std::string cache_path;
    int threads = 1;
    long degree_cap = 0;  // 0: auto (2*dim + 2)
    bool csv = false;
    int m_max = 8;
};

std::string default_cache_path() {
    const char* dir = std::getenv("PARABINT_CACHE_DIR");
    if (!dir || !*dir) return {};
    return std::string(dir) + "/parabint-cache.json";
}

Rat parse_weight(const std::string& s) {
    auto v = rat_parse(s);
    if (!v) throw CLI::ValidationError("--weights", "not a rational: '" + s + "'");
    return *v;
}

/// the parabolic type of the run; rank 1 with no weights means no marked point.
ParabolicType config_type(const Config& cfg) {
    if (cfg.weights.empty()) {
        if (cfg.rank != 1)
            throw CLI::ValidationError("--weights", "required for rank >= 2");
        ParabolicType t;
        t.rank = 1;
        t.degree = cfg.degree;
        return t;
    }
    std::vector<std::pair<Rat, int>> flags;
    for (std::size_t i = 0; i < cfg.weights.size(); ++i) {
        int mult = 1;
        if (!cfg.flags.empty()) {
            if (cfg.flags.size() != cfg.weights.size())
                throw CLI::ValidationError("--flags", "one multiplicity per weight");
            mult = cfg.flags[i];
        }
        flags.emplace_back(parse_weight(cfg.weights[i]), mult);
    }
    ParabolicType t = make_type(cfg.rank, cfg.degree, flags);
    int total = 0;
    for (const auto& s : t.punctures[0].steps) total += s.mult;
    if (total != cfg.rank)
        throw CLI::ValidationError("--flags", "flag multiplicities must sum to the rank");
    return t;
}

void emit(const json& record, bool csv) {
    if (!csv) {
        std::printf("%s\n", record.dump().c_str());
        return;
    }
    std::string line;
    for (auto it = record.begin(); it != record.end(); ++it) {
        if (!line.empty()) line += ',';
        line += it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    }
    std::printf("%s\n", line.c_str());
}

// ----------------------------------------------------------------- integrate

int cmd_integrate(const Config& cfg) {
    CurveModel C{cfg.genus};
    ParabolicType type = config_type(cfg);
    long dim = dim_moduli(C, type);
    long cap = cfg.degree_cap > 0 ? cfg.degree_cap : 2 * dim + 2;
    if (cap < 2 * dim)
        throw CLI::ValidationError("--degree-cap", "must be at least twice the moduli dimension");
    Ctx ctx{C, type, static_cast<int>(cap)};

    ExprPtr ast = parse_expr(cfg.expr);
    DPoly D = expr_to_dpoly(ctx, ast);

    MemoStore store;
    if (!cfg.cache_path.empty()) store.load(cfg.cache_path);
    std::size_t entries_before = 0;
    for (const auto& [k, t] : store.tables) entries_before += t->size();

    auto t0 = std::chrono::steady_clock::now();
    Rat value = integrate(C, type, D, &store);
    auto t1 = std::chrono::steady_clock::now();

    std::size_t entries_after = 0;
    for (const auto& [k, t] : store.tables) entries_after += t->size();
    if (!cfg.cache_path.empty()) store.save(cfg.cache_path);

    json rec;
    rec["command"] = "integrate";
    rec["expr"] = print_expr(ast);
    rec["type"] = type.to_string();
    rec["genus"] = cfg.genus;
    rec["value"] = rat_str(value);
    rec["support_degree"] = 2 * dim;
    rec["time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    rec["cache_entries_loaded"] = entries_before;
    rec["cache_entries_final"] = entries_after;
    emit(rec, cfg.csv);
    return 0;
}

// --------------------------------------------------------------------- walls

int cmd_walls(const Config& cfg) {
    for (const Wall& w : enumerate_walls(cfg.rank, cfg.degree)) {
        json rec;
        rec["command"] = "walls";
        rec["rank"] = cfg.rank;
        rec["degree"] = cfg.degree;
        rec["id"] = w.id();
        rec["lambda_coeffs"] = w.lambda_coeffs();
        rec["rhs"] = w.rhs();
        std::string eq;
        auto coeffs = w.lambda_coeffs();
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k] == 0) continue;
            long a = coeffs[k];
            if (eq.empty()) {
                if (a < 0) eq += "-";
            } else {
                eq += a < 0 ? " - " : " + ";
            }
            if (std::labs(a) != 1) eq += std::to_string(std::labs(a)) + "*";
            eq += "l" + std::to_string(k + 1);
        }
        rec["equation"] = eq + " = " + std::to_string(w.rhs());
        emit(rec, cfg.csv);
    }
    return 0;
}

// --------------------------------------------------------------------- check

struct SuiteResult {
    std::vector<json> records;
    bool pass = true;

    void record(const std::string& suite, const std::string& name, bool ok,
                const std::string& detail = {}) {
        json rec;
        rec["command"] = "check";
        rec["suite"] = suite;
        rec["case"] = name;
        rec["pass"] = ok;
        if (!detail.empty()) rec["detail"] = detail;
        records.push_back(std::move(rec));
        pass = pass && ok;
    }
};

/// word polynomials in the ordered parts of a decomposition, used to compare
/// bracket expressions without assuming Lie identities.
using Word = std::vector<std::pair<std::uint32_t, long>>;
using WordPoly = std::map<Word, Rat>;

void wp_add(WordPoly& p, const Word& w, const Rat& coeff) {
    Rat& slot = p[w];
    slot += coeff;
    slot.canonicalize();
    if (slot == 0) p.erase(w);
}

WordPoly nested_bracket(const Word& parts) {
    WordPoly acc;
    acc[{parts[0]}] = 1;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        WordPoly next;
        for (const auto& [w, coeff] : acc) {
            Word left = w;
            left.push_back(parts[i]);
            wp_add(next, left, coeff);
            Word right{parts[i]};
            right.insert(right.end(), w.begin(), w.end());
            wp_add(next, right, -coeff);
        }
        acc = std::move(next);
    }
    return acc;
}

WordPoly expand_terms(const std::vector<BracketTerm>& terms) {
    WordPoly out;
    for (const auto& t : terms) {
        Word parts;
        for (std::size_t i = 0; i < t.J.size(); ++i) parts.emplace_back(t.J[i], t.d[i]);
        for (const auto& [w, coeff] : nested_bracket(parts)) wp_add(out, w, coeff * t.coeff);
    }
    return out;
}

SuiteResult suite_wallcross() {
    SuiteResult res;

    // crossing the single wall of S_{3,1}: [M_after] = [M_before] + [[M12],[M3]],
    // i.e. word coefficients (1, 1, -1) on (M, M12*M3, M3*M12)
    auto below = cbar_from_lambda(Rat(1, 10), {Rat(1, 10), Rat(1, 10)});
    auto above = cbar_from_lambda(Rat(1, 10), {Rat(1, 10), Rat(1, 2)});
    WordPoly got = expand_terms(joyce_terms(3, 1, below, above));
    WordPoly want;
    wp_add(want, {{0b111u, 1L}}, 1);
    wp_add(want, {{0b011u, 1L}, {0b100u, 0L}}, 1);
    wp_add(want, {{0b100u, 0L}, {0b011u, 1L}}, -1);
    res.record("wallcross", "simple wall of S_{3,1}: coefficients (1, 1, -1)", got == want);

    // fully degenerate rank-3 degree-0 point: the six-term bracket combination
    // with coefficients (1, -1/2, -1/2, +1/2, +1/3, -1/6)
    auto c = cbar_from_lambda(Rat(1, 20), {Rat(1, 20), Rat(1, 10)});
    auto cp = std::vector<Rat>{Rat(0), Rat(0), Rat(0)};
    WordPoly wp = expand_terms(joyce_terms(3, 0, c, cp));
    auto B = [](std::initializer_list<std::uint32_t> masks) {
        Word parts;
        for (auto m : masks) parts.emplace_back(m, 0L);
        return nested_bracket(parts);
    };
    auto add_scaled = [](WordPoly& acc, const WordPoly& p, const Rat& s) {
        for (const auto& [w, coeff] : p) wp_add(acc, w, coeff * s);
    };
    WordPoly expected;
    wp_add(expected, {{0b111u, 0L}}, 1);
    add_scaled(expected, B({0b001, 0b110}), Rat(-1, 2));
    add_scaled(expected, B({0b010, 0b101}), Rat(-1, 2));
    add_scaled(expected, B({0b100, 0b011}), Rat(1, 2));
    add_scaled(expected, B({0b001, 0b010, 0b100}), Rat(1, 3));
    add_scaled(expected, B({0b001, 0b100, 0b010}), Rat(-1, 6));
    res.record("wallcross", "rank-3 degenerate-point six-term coefficient vector",
               wp == expected);
    return res;
}

SuiteResult suite_joyce_identity(int m_max) {
    SuiteResult res;
    // sum_l (-1)^{l-1} sum_{k_1+...+k_l=m, k_1>=j} m!/(k_1!...k_l!)
    //   = (-1)^{m+j} binom(m-1, j-1), by brute-force summation
    for (int m = 1; m <= m_max; ++m) {
        bool ok = true;
        for (int j = 1; j <= m; ++j) {
            Rat total = 0;
            std::vector<int> comp;
            std::function<void(int, int)> rec = [&](int used, int parts) {
                if (used == m) {
                    Rat prod = rat_factorial(static_cast<unsigned>(m));
                    for (int k : comp) prod /= rat_factorial(static_cast<unsigned>(k));
                    total += (parts % 2 == 1 ? prod : -prod);
                    return;
                }
                int lo = comp.empty() ? j : 1;
                for (int k = lo; k <= m - used; ++k) {
                    comp.push_back(k);
                    rec(used + k, parts + 1);
                    comp.pop_back();
                }
            };
            rec(0, 0);
            total.canonicalize();
            Rat expect = rat_binomial(m - 1, j - 1);
            if ((m + j) % 2 == 1) expect = -expect;
            ok = ok && total == expect;
        }
        res.record("joyce-identity", "alternating composition identity, m = " + std::to_string(m),
                   ok);
    }
    return res;
}

SuiteResult suite_weyl() {
    SuiteResult res;
    CurveModel C{1};
    MemoStore store;
    ClassFunctional u = reference_chamber_class(C, 3, &store);
    std::vector<int> perm{0, 1, 2, 3};
    std::sort(perm.begin() + 1, perm.end());
    do {
        int inv = 0;
        for (int i = 1; i <= 3; ++i)
            for (int j = i + 1; j <= 3; ++j)
                if (perm[i] > perm[j]) ++inv;
        Rat sgn = inv % 2 == 0 ? 1 : -1;
        bool ok = true;
        for (const Monomial& m : enumerate_monomials(u.ctx, u.support_degree)) {
            DPoly D;
            D.add_term(m, 1);
            Rat lhs = cf_pair(u, weyl_act(u.ctx, perm, D));
            Rat rhs = sgn * cf_pair(u, D);
            rhs.canonicalize();
            ok = ok && lhs == rhs;
        }
        std::string name = "rank-3 small-chamber anti-invariance, perm (";
        for (int i = 1; i <= 3; ++i) name += std::to_string(perm[i]);
        res.record("weyl", name + ")", ok);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return res;
}

SuiteResult suite_hecke() {
    SuiteResult res;
    CurveModel C{1};

    // composition law on types: h_tau o h_tau' = h_{tau + tau' - 1} whenever
    // all three rotations avoid the zero weight (denominators <= 4)
    ParabolicType base = make_full_type(3, 1, {Rat(1, 9), Rat(2, 9), Rat(4, 9)});
    bool comp_ok = true;
    int tried = 0;
    for (int qa = 1; qa <= 4; ++qa)
        for (int pa = 1; pa < qa; ++pa)
            for (int qb = 1; qb <= 4; ++qb)
                for (int pb = 1; pb < qb; ++pb) {
                    Rat ta(pa, qa), tb(pb, qb);
                    ta.canonicalize();
                    tb.canonicalize();
                    Rat tc = ta + tb;
                    if (tc < 1) continue;  // composite rotates by tau+tau'-1 in [0,1)
                    tc -= 1;
                    tc.canonicalize();
                    try {
                        ParabolicType two = hecke_on_type(tb, hecke_on_type(ta, base));
                        ParabolicType one = hecke_on_type(tc, base);
                        comp_ok = comp_ok && two == one;
                        ++tried;
                    } catch (const std::invalid_argument&) {
                        // a weight landed on 0: outside the composition law's domain
                    }
                }
    res.record("hecke", "rotation composition law on types (denominators <= 4)",
               comp_ok && tried > 0);

    // integral compatibility: <[M_{h_tau alpha}], D> = <[M_alpha], h_tau†(D)>
    MemoStore store;
    ParabolicType alpha = make_full_type(2, 1, {Rat(1, 128), Rat(3, 128)});
    ClassFunctional u = moduli_class(C, alpha, &store);
    Rat tau(1, 3);
    ClassFunctional pushed = hecke_push(tau, u);
    ClassFunctional direct = moduli_class(C, hecke_on_type(tau, alpha), &store);
    bool ok = pushed.ctx.type == direct.ctx.type &&
              pushed.support_degree == direct.support_degree;
    if (ok)
        for (const Monomial& m : enumerate_monomials(pushed.ctx, pushed.support_degree)) {
            DPoly D;
            D.add_term(m, 1);
            ok = ok && cf_pair(pushed, D) == cf_pair(direct, D);
        }
    res.record("hecke", "pushforward matches the directly computed class (rank 2)", ok);
    return res;
}

SuiteResult suite_newstead() {
    SuiteResult res;
    CurveModel C{1};
    MemoStore store;
    std::vector<Rat> w{Rat(1, 128), Rat(3, 128)};
    ClassFunctional base = moduli_class(C, make_full_type(2, 1, w), &store);
    long bound = 2 + 0;  // dim + r(g-1) = 2 at r = 2, g = 1
    for (long d : {-1L, 0L, 1L, 2L}) {
        ClassFunctional u = moduli_class(C, make_full_type(2, d, w), &store);
        bool ok = u.support_degree == base.support_degree;
        for (const Monomial& m : enumerate_monomials(u.ctx, u.support_degree)) {
            DPoly D;
            D.add_term(m, 1);
            Rat vu = cf_pair(u, D);
            if (m.chern_degree() <= bound) {
                ok = ok && vu == 0;
            } else if (m.chern_degree() == bound + 1) {
                Rat lhs = pos_mod(d, 2) == 0 ? vu : -vu;
                ok = ok && lhs == -cf_pair(base, D);
            }
        }
        res.record("newstead",
                   "rank 2, genus 1, degree " + std::to_string(d) +
                       ": vanishing bound and signed constancy",
                   ok);
    }
    return res;
}

SuiteResult suite_virasoro() {
    SuiteResult res;
    CurveModel C{1};
    MemoStore store;

    res.record("virasoro", "weight-zero constraints, rank 1 (Jacobian)",
               primary_test(jacobian_class(C, make_type(1, 0, {{Rat(1, 3), 1}}))));
    res.record("virasoro", "weight-zero constraints, rank 2 full flag",
               primary_test(moduli_class(C, make_full_type(2, 1, {Rat(1, 128), Rat(3, 128)}),
                                         &store)));

    // operator commutators [L_n, L_m] = (m - n) L_{n+m} on sample descendents
    Ctx ctx{C, make_full_type(2, 1, {Rat(1, 128), Rat(3, 128)}), 20};
    std::vector<DPoly> samples;
    samples.push_back(gen_dpoly(ctx, GenKind::One, 3));
    samples.push_back(dp_mul(ctx, gen_dpoly(ctx, GenKind::One, 2),
                             gen_dpoly(ctx, GenKind::Flag, 1, 1)));
    samples.push_back(dp_mul(ctx, gen_dpoly(ctx, GenKind::Odd, 1, 1),
                             gen_dpoly(ctx, GenKind::Odd, 2, 2)));
    bool comm_ok = true;
    for (int n = 0; n <= 2; ++n)
        for (int m = 0; m <= 2; ++m)
            for (const DPoly& D : samples) {
                DPoly lhs = dp_add(L_op(ctx, n, L_op(ctx, m, D)),
                                   dp_scale(L_op(ctx, m, L_op(ctx, n, D)), Rat(-1)));
                DPoly rhs = dp_scale(L_op(ctx, n + m, D), Rat(m - n));
                comm_ok = comm_ok && lhs == rhs;
            }
    res.record("virasoro", "operator commutators [L_n, L_m] = (m-n) L_{n+m}, n,m <= 2",
               comm_ok);
    return res;
}

SuiteResult suite_chern_bracket(int cases) {
    SuiteResult res;
    CurveModel C{1};
    std::mt19937 rng(20240817);
    auto rnd_rat = [&rng]() {
        std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
        Rat v(num(rng), den(rng));
        v.canonicalize();
        return v;
    };
    bool all_ok = true;
    for (int it = 0; it < cases; ++it) {
        // two rank-1 types with disjoint random weights and random degrees
        std::uniform_int_distribution<int> wnum(1, 40), dd(-2, 2), sup(2, 6);
        int w1 = wnum(rng), w2 = wnum(rng);
        if (w1 == w2) w2 = (w2 % 40) + 1 == w1 ? w1 + 1 : (w2 % 40) + 1;
        ParabolicType a = make_type(1, dd(rng), {{Rat(w1, 41), 1}});
        ParabolicType b = make_type(1, dd(rng), {{Rat(w2, 41), 1}});
        if (a.punctures[0].steps[0].weight == b.punctures[0].steps[0].weight) continue;
        int sa = 2 * sup(rng), sb = 2 * sup(rng);
        // arbitrary functionals: random values memoized per monomial
        auto make_rand = [&](const ParabolicType& t, int supp) {
            ClassFunctional u;
            u.ctx = Ctx{C, t, supp};
            u.support_degree = supp;
            u.origin = Origin::Bracket;
            auto vals = std::make_shared<std::map<Monomial, Rat>>();
            auto gen = std::make_shared<std::function<Rat()>>(rnd_rat);
            u.eval = [vals, gen](const Monomial& m) -> Rat {
                auto it2 = vals->find(m);
                if (it2 != vals->end()) return it2->second;
                Rat v = (*gen)();
                (*vals)[m] = v;
                return v;
            };
            return u;
        };
        ClassFunctional u = make_rand(a, sa), v = make_rand(b, sb);
        long chi = chi_sym(C, a, b);
        ClassFunctional br = lie_bracket(u, v);
        for (const Monomial& m : enumerate_monomials(br.ctx, br.support_degree)) {
            if (m.chern_degree() > chi) continue;  // budget >= chi_sym + 1: may pair
            DPoly D;
            D.add_term(m, 1);
            all_ok = all_ok && cf_pair(br, D) == 0;
        }
    }
    res.record("chern-bracket",
               "bracket pairs to 0 below Chern budget chi_sym + 1 (" +
                   std::to_string(cases) + " randomized functionals)",
               all_ok);
    return res;
}

int cmd_check(const Config& cfg) {
    std::vector<std::string> names = cfg.suites;
    if (names.empty())
        names = {"wallcross", "joyce-identity", "weyl", "hecke",
                 "newstead",  "virasoro",       "chern-bracket"};

    std::vector<std::function<SuiteResult()>> jobs;
    for (const std::string& s : names) {
        if (s == "wallcross")
            jobs.emplace_back(suite_wallcross);
        else if (s == "joyce-identity")
            jobs.emplace_back([&cfg] { return suite_joyce_identity(cfg.m_max); });
        else if (s == "weyl")
            jobs.emplace_back(suite_weyl);
        else if (s == "hecke")
            jobs.emplace_back(suite_hecke);
        else if (s == "newstead")
            jobs.emplace_back(suite_newstead);
        else if (s == "virasoro")
            jobs.emplace_back(suite_virasoro);
        else if (s == "chern-bracket")
            jobs.emplace_back([] { return suite_chern_bracket(20); });
        else
            throw CLI::ValidationError("--suite", "unknown suite '" + s + "'");
    }

    // suites are independent; run in parallel if asked, emit in fixed order
    std::vector<SuiteResult> results(jobs.size());
    if (cfg.threads > 1) {
        std::vector<std::future<SuiteResult>> futs;
        for (auto& j : jobs) futs.push_back(std::async(std::launch::async, j));
        for (std::size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
    }

    bool pass = true;
    for (const SuiteResult& r : results) {
        for (const json& rec : r.records) emit(rec, cfg.csv);
        pass = pass && r.pass;
    }
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact intersection numbers on moduli of parabolic bundles"};
    app.require_subcommand(1);
    Config cfg;
    cfg.cache_path = default_cache_path();

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--genus", cfg.genus, "genus of the curve")->check(CLI::Range(0, 20));
        sub->add_option("--rank", cfg.rank, "rank of the bundles")->check(CLI::Range(1, 16));
        sub->add_option("--degree", cfg.degree, "degree of the bundles");
        sub->add_flag("--csv", cfg.csv, "emit CSV instead of JSON lines");
        sub->add_option("--threads", cfg.threads, "worker threads for independent suites")
            ->check(CLI::Range(1, 64));
        sub->add_option("--cache", cfg.cache_path,
                        "cache file (default: $PARABINT_CACHE_DIR/parabint-cache.json)");
    };

    CLI::App* integ = app.add_subcommand("integrate", "integrate a descendent expression");
    add_common(integ);
    integ->add_option("--weights", cfg.weights, "flag weights, increasing rationals p/q")
        ->delimiter(',');
    integ->add_option("--flags", cfg.flags, "flag multiplicities (default all 1)")
        ->delimiter(',');
    integ->add_option("--expr", cfg.expr, "descendent expression, e.g. \"ch2(one)^2 * ch1(d1)\"")
        ->required();
    integ->add_option("--degree-cap", cfg.degree_cap,
                      "cohomological truncation (default 2*dim + 2)");

    CLI::App* walls = app.add_subcommand("walls", "list walls of the weight simplex");
    add_common(walls);

    CLI::App* check = app.add_subcommand("check", "run consistency suites");
    add_common(check);
    check->add_option("--suite,suites", cfg.suites,
                      "suites to run: newstead virasoro weyl wallcross hecke "
                      "chern-bracket joyce-identity (default: all)")
        ->delimiter(',');
    check->add_option("--m-max", cfg.m_max, "largest m for the composition identity")
        ->check(CLI::Range(1, 12));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(integ)) return cmd_integrate(cfg);
        if (app.got_subcommand(walls)) return cmd_walls(cfg);
        return cmd_check(cfg);
    } catch (const ExprError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
