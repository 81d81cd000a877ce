#include "parab/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <json.hpp>

#include "parab/operators.hpp"

namespace parab {

namespace {

/// element of the exterior algebra on delta_1..delta_2g, keyed by bitmask;
/// coefficients are relative to the ascending-index wedge order.
using Ext = std::map<std::uint64_t, Rat>;

void ext_add(Ext& p, std::uint64_t mask, const Rat& c) {
    Rat& slot = p[mask];
    slot += c;
    slot.canonicalize();
    if (slot == 0) p.erase(mask);
}

/// multiply by a single delta_j (0-based), with the Koszul sign from moving
/// it past the lower-index factors already present.
Ext ext_mul_delta(const Ext& p, int j) {
    Ext out;
    const std::uint64_t bit = 1ull << j;
    for (const auto& [mask, c] : p) {
        if (mask & bit) continue;
        int before = __builtin_popcountll(mask & (bit - 1));
        ext_add(out, mask | bit, (before % 2 == 0) ? c : -c);
    }
    return out;
}

Ext ext_mul(const Ext& a, const Ext& b) {
    Ext out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            if (ma & mb) continue;
            // sign: move each set bit of mb past the higher bits of ma
            int sign = 0;
            std::uint64_t rest = mb;
            while (rest) {
                int j = __builtin_ctzll(rest);
                rest &= rest - 1;
                sign += __builtin_popcountll(ma >> (j + 1));
            }
            Rat prod = ca * cb;
            if (sign % 2 != 0) prod = -prod;
            ext_add(out, ma | mb, prod);
        }
    }
    return out;
}

DPoly mono_dp(const Monomial& m) {
    DPoly d;
    d.add_term(m, 1);
    return d;
}

DPoly gen_keep(Gen g) {
    DPoly d;
    d.add_term(Monomial{std::vector<Gen>{g}}, 1);
    return d;
}

/// the flag-quotient lines give ch_k(d_j) = t_j^k / k! with t_j = ch_1(d_j).
DPoly silly_normalize(const Ctx& ctx, const DPoly& a) {
    return dp_substitute(ctx, a, [&](Gen g) -> DPoly {
        if (gen_kind(g) == GenKind::Flag && gen_k(g) >= 2) {
            DPoly t = gen_dpoly(ctx, GenKind::Flag, 1, gen_idx(g), gen_puncture(g));
            return dp_scale(dp_pow(ctx, t, static_cast<unsigned>(gen_k(g))),
                            Rat(1) / rat_factorial(static_cast<unsigned>(gen_k(g))));
        }
        return gen_keep(g);
    });
}

/// sum of (k - 1) over the ch_k(1) factors: the induction measure for the
/// translation rewriting.
int one_filtration(const Monomial& m) {
    int acc = 0;
    for (Gen g : m.gens)
        if (gen_kind(g) == GenKind::One) acc += gen_k(g) - 1;
    return acc;
}

int count_gen(const Monomial& m, Gen g) {
    int n = 0;
    for (Gen x : m.gens)
        if (x == g) ++n;
    return n;
}

Monomial remove_one(const Monomial& m, Gen g) {
    Monomial out;
    bool done = false;
    for (Gen x : m.gens) {
        if (!done && x == g) {
            done = true;
            continue;
        }
        out.gens.push_back(x);
    }
    if (!done) throw std::logic_error("remove_one: generator not present");
    return out;
}

/// multiply a monomial by an even generator, staying in normal form.
Monomial insert_even(const Ctx& ctx, const Monomial& m, Gen g) {
    DPoly out;
    mono_mul_gen(ctx, m, 1, g, out);
    if (out.terms.size() != 1 || out.terms.begin()->second != 1)
        throw std::logic_error("insert_even: unexpected normal form");
    return out.terms.begin()->first;
}

int perm_sign(const std::vector<int>& perm) {  // 1-based, perm[0] unused
    int inv = 0;
    for (std::size_t i = 1; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

ClassFunctional retype(const ClassFunctional& u, const ParabolicType& t) {
    ClassFunctional f = u;
    f.ctx.type = t;
    return f;
}

Rat exact_div(Rat a, const Rat& b) {
    a /= b;
    a.canonicalize();
    return a;
}

// -------------------------------------------------------------- wall brackets

ClassFunctional crossing_bracket(const CurveModel& C, const Crossing& cr, MemoStore* store) {
    // exact intersection of the crossing segment with the wall
    Rat pb = wall_phi(cr.wall, cr.before), pa = wall_phi(cr.wall, cr.after);
    Rat t = exact_div(pb, pb - pa);
    std::vector<Rat> cross(cr.before.size());
    for (std::size_t i = 0; i < cross.size(); ++i) {
        cross[i] = cr.before[i] + t * (cr.after[i] - cr.before[i]);
        cross[i].canonicalize();
    }
    auto [a1, a2] = wall_split_types(cr.wall, cross);
    return lie_bracket(moduli_class(C, a1, store), moduli_class(C, a2, store));
}

}  // namespace

// ------------------------------------------------------------------- Jacobian

ClassFunctional jacobian_class(const CurveModel& curve, const ParabolicType& type) {
    if (type.rank != 1) throw std::invalid_argument("jacobian_class: rank must be 1");
    const int g = curve.genus;
    if (2 * g > 62) throw std::invalid_argument("jacobian_class: genus too large");

    // -theta = -sum_i delta_i delta_{i+g}
    Ext minus_theta;
    for (int i = 0; i < g; ++i) {
        Ext di{{1ull << i, Rat(1)}};
        Ext prod = ext_mul_delta(di, i + g);
        for (const auto& [m, c] : prod) ext_add(minus_theta, m, -c);
    }

    // normalization: int prod_i (delta_i delta_{i+g}) = 1, i.e. the full
    // ascending wedge integrates to the sign relating the two orders.
    Ext norm{{0ull, Rat(1)}};
    for (int i = 0; i < g; ++i) {
        norm = ext_mul_delta(norm, i);
        norm = ext_mul_delta(norm, i + g);
    }
    const std::uint64_t full = g == 0 ? 0ull : (1ull << (2 * g)) - 1;
    Rat full_integral = norm.count(full) ? norm.at(full) : Rat(g == 0 ? 1 : 0);
    // norm = s * (ascending wedge) with s = +-1; int(ascending wedge) = s.

    Ctx ctx{curve, type, 2 * g};
    ClassFunctional f;
    f.ctx = ctx;
    f.support_degree = 2 * g;
    f.origin = Origin::Geometric;
    f.eval = [g, minus_theta, full, full_integral](const Monomial& mono) -> Rat {
        Ext acc{{0ull, Rat(1)}};
        for (Gen gen : mono.gens) {
            switch (gen_kind(gen)) {
                case GenKind::One:
                    if (gen_k(gen) == 2) {
                        acc = ext_mul(acc, minus_theta);
                    } else {
                        return Rat(0);
                    }
                    break;
                case GenKind::Odd: {
                    if (gen_k(gen) != 1) return Rat(0);
                    int i = gen_idx(gen);  // 1-based
                    if (i <= g) {
                        acc = ext_mul_delta(acc, i - 1 + g);
                        for (auto& [m, c] : acc) c = -c;
                    } else {
                        acc = ext_mul_delta(acc, i - 1 - g);
                    }
                    break;
                }
                case GenKind::Flag:
                    return Rat(0);
            }
            if (acc.empty()) return Rat(0);
        }
        auto it = acc.find(full);
        if (it == acc.end()) return Rat(0);
        Rat val = it->second * full_integral;
        val.canonicalize();
        return val;
    };
    return f;
}

// ----------------------------------------------------------------- memo store

std::shared_ptr<std::map<Monomial, Rat>> MemoStore::table(const std::string& key) {
    auto it = tables.find(key);
    if (it != tables.end()) return it->second;
    auto t = std::make_shared<std::map<Monomial, Rat>>();
    tables.emplace(key, t);
    return t;
}

void MemoStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;  // a missing cache file is an empty cache
    nlohmann::json j;
    in >> j;
    if (j.value("schema", std::string()) != "parabint-cache-1")
        throw std::runtime_error("cache file: unknown schema");
    for (auto& [key, entries] : j.at("tables").items()) {
        auto t = table(key);
        for (auto& e : entries) {
            Monomial m;
            for (auto& g : e.at(0)) m.gens.push_back(g.get<std::uint32_t>());
            auto v = rat_parse(e.at(1).get<std::string>());
            if (!v) throw std::runtime_error("cache file: malformed rational");
            (*t)[m] = *v;
        }
    }
}

void MemoStore::save(const std::string& path) const {
    nlohmann::json j;
    j["schema"] = "parabint-cache-1";
    nlohmann::json tabs = nlohmann::json::object();
    for (const auto& [key, t] : tables) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& [m, v] : *t) {
            nlohmann::json gens = nlohmann::json::array();
            for (Gen g : m.gens) gens.push_back(g);
            entries.push_back(nlohmann::json::array({gens, rat_str(v)}));
        }
        tabs[key] = std::move(entries);
    }
    j["tables"] = std::move(tabs);
    std::ofstream out(path);
    out << j.dump();
}

MemoStore& MemoStore::process_default() {
    static MemoStore store;
    return store;
}

namespace {

MemoStore* store_or_default(MemoStore* s) { return s ? s : &MemoStore::process_default(); }

std::string key_prefix(const CurveModel& C) { return "g" + std::to_string(C.genus) + "|"; }

}  // namespace

// ------------------------------------------------------- two-puncture solver

ParabolicType two_puncture_type() {
    ParabolicType t;
    t.rank = 2;
    t.degree = 1;
    t.punctures.resize(2);
    t.punctures[0].steps = {{Rat(1, 5), 1}, {Rat(2, 5), 1}};
    t.punctures[1].steps = {{Rat(1, 7), 1}, {Rat(2, 7), 1}};
    return t;
}

ClassFunctional two_puncture_wall_difference(const CurveModel& curve) {
    // crossing the single wall lambda_1 + lambda_2 = 1 away from the flag
    // chamber subtracts the bracket of the destabilizing rank-1 pieces:
    // f_A - f_B = [[Jac(1,0; top weights)], [Jac(1,1; bottom weights)]].
    ParabolicType top, bot;
    top.rank = 1;
    top.degree = 0;
    top.punctures.resize(2);
    top.punctures[0].steps = {{Rat(2, 5), 1}};
    top.punctures[1].steps = {{Rat(2, 7), 1}};
    bot.rank = 1;
    bot.degree = 1;
    bot.punctures.resize(2);
    bot.punctures[0].steps = {{Rat(1, 5), 1}};
    bot.punctures[1].steps = {{Rat(1, 7), 1}};
    return lie_bracket(jacobian_class(curve, top), jacobian_class(curve, bot));
}

namespace {

struct TwoPunctureSolver {
    CurveModel C;
    Ctx cx;   // type (2, 1, two full flags), cap = support degree
    Ctx cm1;  // same weights, degree -1 (conjugation target)
    int supp = 0;
    ClassFunctional wall_diff;  // f_A - f_B
    std::shared_ptr<std::map<Monomial, Rat>> memo;
    long work = 0;

    explicit TwoPunctureSolver(const CurveModel& curve, MemoStore* store) : C(curve) {
        ParabolicType t = two_puncture_type();
        supp = 2 * static_cast<int>(dim_moduli(C, t));
        if (supp < 0) throw std::invalid_argument("two-puncture solve: empty moduli");
        cx = Ctx{C, t, supp};
        ParabolicType tm = t;
        tm.degree = -1;
        cm1 = Ctx{C, tm, supp};
        wall_diff = two_puncture_wall_difference(C);
        if (wall_diff.support_degree != supp)
            throw std::logic_error("two-puncture solve: wall bracket degree mismatch");
        memo = store_or_default(store)->table(key_prefix(C) + "2p");
    }

    Rat W(const DPoly& X) { return cf_pair(wall_diff, X); }

    /// conjugate of the flag swap at puncture j by the degree-shift map.
    DPoly sigma_tilde(int j, const DPoly& X) {
        DPoly a = conj_H2(cm1, X);
        std::vector<int> swp{0, 2, 1};
        a = weyl_act(cm1, swp, a, j);
        return conj_H2_inv(cx, a);
    }

    /// the translation (swap at p_j) o sigma_tilde_j as a literal
    /// substitution: ch_k(1) -> ch_k(1) + ch_{k-1}(d_1^j) - ch_{k-1}(d_2^j).
    DPoly translate(int j, const DPoly& X) {
        DPoly out = dp_substitute(cx, X, [&](Gen g) -> DPoly {
            if (gen_kind(g) == GenKind::One) {
                int k = gen_k(g);
                DPoly img = gen_dpoly(cx, GenKind::One, k);
                img += gen_dpoly(cx, GenKind::Flag, k - 1, 1, j);
                img -= gen_dpoly(cx, GenKind::Flag, k - 1, 2, j);
                return img;
            }
            return gen_keep(g);
        });
        return silly_normalize(cx, out);
    }

    Rat eval_dp(const DPoly& d) {
        Rat acc = 0;
        for (const auto& [m, c] : d.terms) acc += c * eval_mono(m);
        acc.canonicalize();
        return acc;
    }

    /// Delta_j(E) = f(t_1^j E) - f(t_2^j E), extracted from the translation
    /// relation applied to X = ch_2(1) E:
    ///   f(translate_j X) - f(X) = -W(X) - W(sigma_tilde_j X).
    Rat delta(int j, const Monomial& E) {
        DPoly Edp = mono_dp(E);
        DPoly X = dp_mul(cx, gen_dpoly(cx, GenKind::One, 2), Edp);
        DPoly Zd = translate(j, X);
        Zd -= X;
        const Gen t1 = make_gen(GenKind::Flag, 1, 1, j);
        const Gen t2 = make_gen(GenKind::Flag, 1, 2, j);
        const Rat n2 = Rat(1 + count_gen(E, make_gen(GenKind::One, 2)));
        Monomial t1E = insert_even(cx, E, t1);
        Monomial t2E = insert_even(cx, E, t2);
        auto it1 = Zd.terms.find(t1E);
        if (it1 == Zd.terms.end() || it1->second != n2)
            throw std::logic_error("two-puncture solve: leading term extraction failed");
        Zd.terms.erase(it1);
        auto it2 = Zd.terms.find(t2E);
        if (it2 == Zd.terms.end() || it2->second != -n2)
            throw std::logic_error("two-puncture solve: leading term extraction failed");
        Zd.terms.erase(it2);
        const int fE = one_filtration(E);
        for (const auto& [z, c] : Zd.terms)
            if (one_filtration(z) >= fE)
                throw std::logic_error("two-puncture solve: filtration did not drop");
        Rat corr = -W(X) - W(sigma_tilde(j, X));
        // n2 (f(t1 E) - f(t2 E)) + f(rest) = corr
        return exact_div(corr - eval_dp(Zd), n2);
    }

    Rat eval_mono(const Monomial& m) {
        auto hit = memo->find(m);
        if (hit != memo->end()) return hit->second;
        if (++work > 5000000) throw std::runtime_error("two-puncture solve: work guard tripped");
        for (Gen g : m.gens)
            if (gen_kind(g) == GenKind::Flag && gen_k(g) != 1)
                throw std::logic_error("two-puncture solve: non-linear flag symbol");

        Rat val = 0;
        int which = -1;
        for (int j = 0; j < 2 && which < 0; ++j)
            if (count_gen(m, make_gen(GenKind::Flag, 1, 2, j)) > 0) which = j;
        if (which >= 0) {
            // f(t_2 E) = f(t_1 E) - Delta(E)
            Monomial E = remove_one(m, make_gen(GenKind::Flag, 1, 2, which));
            Monomial t1E = insert_even(cx, E, make_gen(GenKind::Flag, 1, 1, which));
            val = eval_mono(t1E) - delta(which, E);
        } else {
            // only bottom flag lines left; use the swap anti-invariance:
            // f(t_1^n A) = -f(t_2^n A) telescopes through Delta.
            int j = count_gen(m, make_gen(GenKind::Flag, 1, 1, 0)) > 0 ? 0 : 1;
            const Gen t1 = make_gen(GenKind::Flag, 1, 1, j);
            const Gen t2 = make_gen(GenKind::Flag, 1, 2, j);
            int n = count_gen(m, t1);
            if (n > 0) {
                Monomial base = m;
                for (int k = 0; k < n; ++k) base = remove_one(base, t1);
                for (int k = 1; k <= n; ++k) {
                    Monomial arg = base;
                    for (int a = 0; a < k - 1; ++a) arg = insert_even(cx, arg, t1);
                    for (int a = 0; a < n - k; ++a) arg = insert_even(cx, arg, t2);
                    val += delta(j, arg);
                }
                val /= 2;
            }
            // no flag lines at all: fixed by a swap, so the value vanishes
        }
        val.canonicalize();
        memo->emplace(m, val);
        return val;
    }
};

std::shared_ptr<TwoPunctureSolver> two_puncture_solver(const CurveModel& C, MemoStore* store) {
    return std::make_shared<TwoPunctureSolver>(C, store);
}

}  // namespace

ClassFunctional two_puncture_class(const CurveModel& curve, MemoStore* store) {
    MemoStore* st = store_or_default(store);
    const std::string key = key_prefix(curve) + "class|2p";
    auto it = st->classes.find(key);
    if (it != st->classes.end()) return it->second;

    auto solver = two_puncture_solver(curve, st);
    ClassFunctional f;
    f.ctx = solver->cx;
    f.support_degree = solver->supp;
    f.origin = Origin::Geometric;
    f.cache = st->table(key_prefix(curve) + "cf|2p");
    f.eval = [solver](const Monomial& m) {
        return solver->eval_dp(silly_normalize(solver->cx, mono_dp(m)));
    };
    st->classes.emplace(key, f);
    return f;
}

Rat rank2_twopoint_solve(const CurveModel& curve, const DPoly& D, MemoStore* store) {
    return cf_pair(two_puncture_class(curve, store), D);
}

// ----------------------------------------------------------- rank-2 reference

namespace {

/// single-puncture rank-2 degree-1 class, recovered through the
/// projective-line bundle forgetting the flag at the second puncture:
/// <u, D> = -f_A(ch_1(d_1^2) * lift(D)).
ClassFunctional rank2_single_reference(const CurveModel& C, MemoStore* store) {
    ClassFunctional A = two_puncture_class(C, store);
    ParabolicType t = make_full_type(2, 1, reference_chamber_weights(2));
    const int supp = A.support_degree - 2;
    ClassFunctional f;
    f.ctx = Ctx{C, t, supp};
    f.support_degree = supp;
    f.origin = Origin::Geometric;
    Ctx acx = A.ctx;
    f.eval = [A, acx](const Monomial& m) {
        // generators of the one-puncture algebra are literally generators at
        // the first puncture of the two-puncture algebra
        DPoly lifted = dp_mul(acx, gen_dpoly(acx, GenKind::Flag, 1, 1, 1), mono_dp(m));
        Rat v = -cf_pair(A, lifted);
        v.canonicalize();
        return v;
    };
    return f;
}

}  // namespace

// ------------------------------------------------------------- affine solver

std::vector<Rat> reference_chamber_weights(int rank) {
    if (rank < 1) throw std::invalid_argument("reference_chamber_weights: rank must be positive");
    Rat eps(1, 8L * rank * rank * rank + 1);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Rat> c(rank);
        for (int i = 0; i < rank; ++i) {
            c[i] = Rat(i + 1) * eps;
            c[i].canonicalize();
        }
        if (classify(c, rank, 1).regular) return c;
        eps /= 2;
    }
    throw std::logic_error("reference_chamber_weights: no regular point found");
}

namespace {

struct AffineSolver {
    CurveModel C;
    int r = 0;
    int supp = 0;
    Ctx cx;   // (r, 1) at the reference weights
    Ctx cm1;  // (r, -1) at the reference weights
    std::vector<std::pair<ClassFunctional, int>> wterms;  // (bracket, direction)
    std::shared_ptr<std::map<Monomial, Rat>> memo;
    long work = 0;

    AffineSolver(const CurveModel& curve, int rank, MemoStore* store) : C(curve), r(rank) {
        if (r < 3) throw std::invalid_argument("affine solve: rank must be >= 3");
        std::vector<Rat> cstar = reference_chamber_weights(r);
        ParabolicType t1 = make_full_type(r, 1, cstar);
        long dim = dim_moduli(C, t1);
        if (dim < 0) throw std::invalid_argument("affine solve: empty moduli");
        supp = 2 * static_cast<int>(dim);
        cx = Ctx{C, t1, supp};
        ParabolicType tm = t1;
        tm.degree = -1;
        cm1 = Ctx{C, tm, supp};

        // W = f_{c*} - f_{c''}: wall crossings from the conjugate reference
        // chamber c'' (the image of the small chamber of S_{r,-1} under the
        // degree identification) back to c*.
        Rat eps = cstar[0];
        std::vector<Rat> lam_small(r - 1, eps);
        std::vector<Rat> lam2 = hecke_chamber_map(r, -1, 1, lam_small);
        std::vector<Rat> cpp = cbar_from_lambda(eps / 2, lam2);
        for (auto& x : cpp) x.canonicalize();
        if (!classify(cpp, r, 1).regular)
            throw std::logic_error("affine solve: conjugate representative not regular");
        for (const Crossing& cr : simple_path(cpp, cstar, r, 1))
            wterms.emplace_back(crossing_bracket(C, cr, store), cr.direction);
        memo = store_or_default(store)->table(key_prefix(C) + "aw|r" + std::to_string(r));
    }

    Rat W(const DPoly& X) {
        Rat acc = 0;
        for (const auto& [br, dir] : wterms) acc += Rat(dir) * cf_pair(br, X);
        acc.canonicalize();
        return acc;
    }

    /// sigma realizing the translation for flag line i >= 3:
    /// sigma(r) = r-1 and sigma(i-2) = r, remaining values ascending.
    std::vector<int> sigma_for(int i) const {
        std::vector<int> sig(static_cast<std::size_t>(r) + 1, 0);
        sig[r] = r - 1;
        sig[i - 2] = r;
        std::vector<bool> used(static_cast<std::size_t>(r) + 1, false);
        used[r - 1] = used[r] = true;
        int next = 1;
        for (int p = 1; p <= r; ++p) {
            if (sig[p] != 0) continue;
            while (used[next]) ++next;
            sig[p] = next;
            used[next] = true;
        }
        return sig;
    }

    /// conjugate of the permutation action by the degree-shift map H.
    DPoly sigma_tilde(const std::vector<int>& sig, const DPoly& X) {
        DPoly a = conj_H(cm1, X);
        a = weyl_act(cm1, sig, a);
        return conj_H_inv(cx, a);
    }

    /// literal form of the composite translation for flag line i >= 3:
    /// ch_k(1) -> ch_k(1) + ch_{k-1}(d_1) - ch_{k-1}(d_i).
    DPoly translate(int i, const DPoly& X) {
        DPoly out = dp_substitute(cx, X, [&](Gen g) -> DPoly {
            if (gen_kind(g) == GenKind::One) {
                int k = gen_k(g);
                DPoly img = gen_dpoly(cx, GenKind::One, k);
                img += gen_dpoly(cx, GenKind::Flag, k - 1, 1);
                img -= gen_dpoly(cx, GenKind::Flag, k - 1, i);
                return img;
            }
            return gen_keep(g);
        });
        return silly_normalize(cx, out);
    }

    Rat eval_dp(const DPoly& d) {
        Rat acc = 0;
        for (const auto& [m, c] : d.terms) acc += c * eval_mono(m);
        acc.canonicalize();
        return acc;
    }

    Rat eval_mono(const Monomial& m) {
        auto hit = memo->find(m);
        if (hit != memo->end()) return hit->second;
        if (++work > 20000000) throw std::runtime_error("affine solve: work guard tripped");

        int big = 0;
        for (Gen g : m.gens)
            if (gen_kind(g) == GenKind::Flag) {
                if (gen_k(g) != 1)
                    throw std::logic_error("affine solve: non-linear flag symbol");
                big = std::max(big, gen_idx(g));
            }

        Rat val = 0;
        if (big >= 3) {
            // strip one t_big through the translation relation applied to
            // X = ch_2(1) E:  f(translate X) - f(X) = -W(X) + sgn W(~X).
            Monomial E = remove_one(m, make_gen(GenKind::Flag, 1, big));
            DPoly X = dp_mul(cx, gen_dpoly(cx, GenKind::One, 2), mono_dp(E));
            DPoly Zd = translate(big, X);
            Zd -= X;
            const Rat n2 = Rat(1 + count_gen(E, make_gen(GenKind::One, 2)));
            Monomial t1E = insert_even(cx, E, make_gen(GenKind::Flag, 1, 1));
            auto it1 = Zd.terms.find(t1E);
            if (it1 == Zd.terms.end() || it1->second != n2)
                throw std::logic_error("affine solve: leading term extraction failed");
            Zd.terms.erase(it1);
            auto iti = Zd.terms.find(m);
            if (iti == Zd.terms.end() || iti->second != -n2)
                throw std::logic_error("affine solve: leading term extraction failed");
            Zd.terms.erase(iti);
            const int fm = one_filtration(m);
            for (const auto& [z, c] : Zd.terms)
                if (one_filtration(z) >= fm)
                    throw std::logic_error("affine solve: filtration did not drop");
            std::vector<int> sig = sigma_for(big);
            Rat corr = -W(X) + Rat(perm_sign(sig)) * W(sigma_tilde(sig, X));
            // n2 f(t_1 E) - n2 f(t_big E) + f(rest) = corr
            val = eval_mono(t1E) + exact_div(eval_dp(Zd) - corr, n2);
        } else if (big == 2) {
            // swap flag lines 2 and r; the functional is anti-invariant
            std::vector<int> perm(static_cast<std::size_t>(r) + 1);
            for (int j = 1; j <= r; ++j) perm[j] = j;
            std::swap(perm[2], perm[r]);
            val = -eval_dp(weyl_act(cx, perm, mono_dp(m)));
        }
        // big <= 1: the monomial is fixed by the transposition (2 3), whose
        // sign forces the value to vanish.
        val.canonicalize();
        memo->emplace(m, val);
        return val;
    }
};

std::map<std::string, std::shared_ptr<AffineSolver>>& affine_registry() {
    static std::map<std::string, std::shared_ptr<AffineSolver>> reg;
    return reg;
}

std::shared_ptr<AffineSolver> affine_solver(const CurveModel& C, int r, MemoStore* store) {
    const std::string key = key_prefix(C) + "aw|r" + std::to_string(r) + "|" +
                            std::to_string(reinterpret_cast<std::uintptr_t>(store_or_default(store)));
    auto& reg = affine_registry();
    auto it = reg.find(key);
    if (it != reg.end()) return it->second;
    auto s = std::make_shared<AffineSolver>(C, r, store);
    reg.emplace(key, s);
    return s;
}

}  // namespace

Rat affine_weyl_solve(const CurveModel& curve, int rank, const DPoly& D, MemoStore* store) {
    return cf_pair(reference_chamber_class(curve, rank, store), D);
}

ClassFunctional reference_chamber_class(const CurveModel& curve, int rank, MemoStore* store) {
    MemoStore* st = store_or_default(store);
    const std::string key = key_prefix(curve) + "class|ref|r" + std::to_string(rank);
    auto it = st->classes.find(key);
    if (it != st->classes.end()) return it->second;

    ClassFunctional f;
    if (rank == 1) {
        f = jacobian_class(curve, make_full_type(1, 1, reference_chamber_weights(1)));
    } else if (rank == 2) {
        f = rank2_single_reference(curve, st);
    } else {
        auto solver = affine_solver(curve, rank, st);
        f.ctx = solver->cx;
        f.support_degree = solver->supp;
        f.origin = Origin::Geometric;
        f.eval = [solver](const Monomial& m) {
            return solver->eval_dp(silly_normalize(solver->cx, mono_dp(m)));
        };
    }
    f.cache = st->table(key_prefix(curve) + "cf|ref|r" + std::to_string(rank));
    st->classes.emplace(key, f);
    return f;
}

// ----------------------------------------------------- degree-1 full classes

namespace {

ClassFunctional full_class_deg1(const CurveModel& C, const ParabolicType& type,
                                MemoStore* store) {
    const int r = type.rank;
    std::vector<Rat> cbar = full_embedding(type);
    Classification cls = classify(cbar, r, 1);
    if (!cls.regular) throw std::invalid_argument("full_class_deg1: weights on a wall");

    MemoStore* st = store_or_default(store);
    const std::string key =
        key_prefix(C) + "class|full|r" + std::to_string(r) + "|d1|c" + cls.chamber_id;
    auto it = st->classes.find(key);
    if (it != st->classes.end()) return retype(it->second, type);

    ClassFunctional f = reference_chamber_class(C, r, st);
    for (const Crossing& cr : simple_path(reference_chamber_weights(r), cbar, r, 1)) {
        ClassFunctional br = crossing_bracket(C, cr, st);
        f = cf_add(f, cf_scale(br, Rat(cr.direction)));
    }
    f.cache = st->table(key_prefix(C) + "cf|full|r" + std::to_string(r) + "|d1|c" +
                        cls.chamber_id);
    st->classes.emplace(key, f);
    return retype(f, type);
}

/// full-flag regular class at any degree, by composing the degree-1 class
/// with Hecke/twist pushforwards.
ClassFunctional full_class_any(const CurveModel& C, const ParabolicType& type,
                               MemoStore* store) {
    const int r = type.rank;
    const long d = type.degree;
    if (r == 1) return jacobian_class(C, type);
    if (d == 1) return full_class_deg1(C, type, store);

    if (pos_mod(d - 1, r) == 0) {
        const long k = (d - 1) / r;
        ParabolicType beta = twist_type(type, -k);
        ClassFunctional u = full_class_any(C, beta, store);
        if (k > 0) {
            for (long s = 0; s < k; ++s) u = twist_push(u);
        } else {
            // tensoring down by O(p) is the tau = 0 modification
            for (long s = 0; s < -k; ++s) u = hecke_push(Rat(0), u);
        }
        if (!(u.ctx.type == type)) throw std::logic_error("full_class_any: twist chain mismatch");
        return u;
    }

    // rotate so the degree becomes 1 mod r: wrap the top w weights
    const int w = static_cast<int>(pos_mod(d - 1, r));
    const std::vector<Rat> a = full_embedding(type);
    Rat tau = (a[w - 1] + a[w]) / 2;
    tau.canonicalize();
    std::vector<Rat> bweights;
    for (int i = w; i < r; ++i) {
        Rat x = a[i] - tau;  // bottom block of the source
        x.canonicalize();
        bweights.push_back(x);
    }
    for (int i = 0; i < w; ++i) {
        Rat x = a[i] + 1 - tau;  // wrapped block returns to the top
        x.canonicalize();
        bweights.push_back(x);
    }
    ParabolicType beta = make_full_type(r, d + r - w, bweights);
    ClassFunctional u = hecke_push(tau, full_class_any(C, beta, store));
    if (!(u.ctx.type == type)) throw std::logic_error("full_class_any: rotation mismatch");
    return u;
}

}  // namespace

ClassFunctional full_class_regular(const CurveModel& curve, int rank, long degree,
                                   const std::vector<Rat>& cbar, MemoStore* store) {
    ParabolicType t = make_full_type(rank, degree, cbar);
    if (!classify(cbar, rank, degree).regular)
        throw std::invalid_argument("full_class_regular: weights on a wall");
    return full_class_any(curve, t, store);
}

// ------------------------------------------------------------------ dispatcher

ClassFunctional moduli_class(const CurveModel& curve, const ParabolicType& type,
                             MemoStore* store) {
    type.validate_cone();
    if (type.rank == 1) return jacobian_class(curve, type);
    if (type.num_punctures() != 1)
        throw std::invalid_argument("moduli_class: one marked point required for rank >= 2");

    const int r = type.rank;
    const long d = type.degree;
    std::vector<Rat> cbar = full_embedding(type);
    Classification cls = classify(cbar, r, d);
    if (type.is_full() && cls.regular) return full_class_any(curve, type, store);

    MemoStore* st = store_or_default(store);
    const std::string key = key_prefix(curve) + "class|" +
                            (type.is_full() ? "wall|" : "part|") + type.to_string();
    auto hit = st->classes.find(key);
    if (hit != st->classes.end()) return hit->second;

    // a regular weight vector adjacent to cbar: spread each weight downward
    // along a generic direction (distinct offset ratios avoid staying
    // parallel to any wall)
    std::vector<Rat> creg;
    {
        Rat eps(1, 64L * r * r * r + 1);
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 64)
                throw std::logic_error("moduli_class: no regular perturbation found");
            creg.assign(cbar.begin(), cbar.end());
            long off = 0;
            for (int j = r - 1; j >= 0; --j) {
                creg[j] -= Rat(off) * eps;
                creg[j].canonicalize();
                off = 3 * off + 1;  // 0, 1, 4, 13, ...: distinct consecutive gaps
            }
            bool ok = creg[0] > 0;
            for (int j = 0; ok && j + 1 < r; ++j) ok = creg[j] < creg[j + 1];
            if (ok && classify(creg, r, d).regular) break;
            eps /= 2;
        }
    }

    // class at the boundary point: U-coefficient bracket sum over ordered
    // decompositions, with the pieces taken at the regular weights
    ClassFunctional acc;
    bool first = true;
    for (const BracketTerm& term : joyce_terms(r, d, creg, cbar)) {
        ClassFunctional cur;
        for (std::size_t i = 0; i < term.J.size(); ++i) {
            std::vector<Rat> w;
            for (int pos = 0; pos < r; ++pos)
                if (term.J[i] & (1u << pos)) w.push_back(creg[pos]);
            ParabolicType part = make_full_type(static_cast<int>(w.size()), term.d[i], w);
            ClassFunctional piece = moduli_class(curve, part, st);
            cur = (i == 0) ? piece : lie_bracket(cur, piece);
        }
        ClassFunctional scaled = cf_scale(cur, term.coeff);
        acc = first ? scaled : cf_add(acc, scaled);
        first = false;
    }

    ClassFunctional result;
    if (type.is_full()) {
        result = retype(acc, type);
    } else {
        // push down the flag bundle and divide by the fiber Weyl-group order
        ClassFunctional om = omega_map(acc, type);
        Rat fact = 1;
        for (const auto& s : type.punctures[0].steps)
            fact *= rat_factorial(static_cast<unsigned>(s.mult));
        result = cf_scale(om, Rat(1) / fact);
        result.ctx.type = type;
    }
    st->classes.emplace(key, result);
    return result;
}

Rat integrate(const CurveModel& curve, const ParabolicType& type, const DPoly& D,
              MemoStore* store) {
    return cf_pair(moduli_class(curve, type, store), D);
}

// -------------------------------------------------------------- residue oracle

Rat flag_residue_oracle(int rank, const std::vector<std::pair<std::vector<int>, Rat>>& F,
                        const std::vector<Rat>& segre) {
    if (rank < 1 || rank > 8) throw std::invalid_argument("flag_residue_oracle: rank out of range");
    std::vector<int> sigma(rank);
    Rat total = 0;
    for (const auto& [exps, coeff] : F) {
        if (static_cast<int>(exps.size()) != rank)
            throw std::invalid_argument("flag_residue_oracle: exponent vector length mismatch");
        for (int i = 0; i < rank; ++i) sigma[i] = i + 1;
        do {
            // coefficient of z_i^{-1} in z_i^{a_i + r - sigma(i) - r} * segre series
            Rat prod = coeff;
            int inv = 0;
            for (int i = 0; i < rank && prod != 0; ++i) {
                int k = exps[i] - sigma[i] + 1;  // Segre index selected
                if (k < 0 || k >= static_cast<int>(segre.size())) {
                    prod = 0;
                    break;
                }
                prod *= segre[k];
                for (int j = i + 1; j < rank; ++j)
                    if (sigma[i] > sigma[j]) ++inv;
            }
            if (prod != 0 && inv % 2 != 0) prod = -prod;
            total += prod;
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
    total.canonicalize();
    return total;
}

}  // namespace parab
