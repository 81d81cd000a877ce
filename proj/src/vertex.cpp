#include "parab/vertex.hpp"

#include <algorithm>
#include <stdexcept>

namespace parab {

namespace {

TensorPoly tp_scale(const TensorPoly& a, const Rat& s) {
    TensorPoly out = a;
    out *= s;
    return out;
}

TensorPoly tp_truncate(const TensorPoly& a, int max_total_coh) {
    TensorPoly out;
    for (const auto& [ab, c] : a.terms)
        if (ab.first.coh_degree() + ab.second.coh_degree() <= max_total_coh)
            out.add_term(ab.first, ab.second, c);
    return out;
}

DPoly dp_truncate(const DPoly& a, int max_coh) {
    DPoly out;
    for (const auto& [m, c] : a.terms)
        if (m.coh_degree() <= max_coh) out.add_term(m, c);
    return out;
}

/// apply a linear slot-1 operator (even, e.g. a lowering derivation).
template <typename F>
TensorPoly tp_apply_slot1(F&& op, const TensorPoly& a) {
    TensorPoly out;
    for (const auto& [ab, c] : a.terms) {
        DPoly x;
        x.add_term(ab.first, c);
        DPoly y = op(x);
        for (const auto& [m, cc] : y.terms) out.add_term(m, ab.second, cc);
    }
    return out;
}

}  // namespace

TensorPoly tp_coh_component(const TensorPoly& a, int total_coh) {
    TensorPoly out;
    for (const auto& [ab, c] : a.terms)
        if (ab.first.coh_degree() + ab.second.coh_degree() == total_coh)
            out.add_term(ab.first, ab.second, c);
    return out;
}

TensorPoly theta_ch(const Ctx& c1, const Ctx& c2, int max_total_coh) {
    if (c1.type.num_punctures() != c2.type.num_punctures())
        throw std::invalid_argument("theta_ch: marked-point mismatch");
    const int cap1 = std::min(c1.coh_cap, max_total_coh);
    const int cap2 = std::min(c2.coh_cap, max_total_coh);
    TensorPoly out;

    // curve part: (2 - 2g) sum (-1)^b ch_a(pt) (x) ch_b(pt)
    const long curve_factor = 2 - 2 * c1.curve.genus;
    if (curve_factor != 0) {
        for (int a = 0; 2 * a <= cap1; ++a) {
            DPoly pa = ch_pt(c1, a);
            if (pa.is_zero()) continue;
            for (int b = 0; 2 * (a + b) <= max_total_coh && 2 * b <= cap2; ++b) {
                DPoly pb = ch_pt(c2, b);
                if (pb.is_zero()) continue;
                Rat f = Rat(curve_factor);
                if (b % 2 == 1) f = -f;
                out += tp_scale(tp_outer(pa, pb), f);
            }
        }
    }

    // flag parts: for each marked point and each flag jump of one slot, pair
    // against the filtration of the other slot at the same weight.
    for (int p = 0; p < c1.type.num_punctures(); ++p) {
        // - sum (-1)^b ch_a(e_1(t)) (x) ch_b(d_j2) over steps j2 of slot 2
        const auto& steps2 = c2.type.punctures[p].steps;
        for (std::size_t j = 0; j < steps2.size(); ++j) {
            const Rat& t = steps2[j].weight;
            for (int a = 0; 2 * a <= cap1; ++a) {
                DPoly ea = ch_e_at(c1, a, t, p);
                if (ea.is_zero()) continue;
                for (int b = 0; 2 * (a + b) <= max_total_coh && 2 * b <= cap2; ++b) {
                    DPoly db = gen_dpoly(c2, GenKind::Flag, b, static_cast<int>(j + 1), p);
                    if (db.is_zero()) continue;
                    Rat f(-1);
                    if (b % 2 == 1) f = -f;
                    out += tp_scale(tp_outer(ea, db), f);
                }
            }
        }
        // - sum (-1)^a ch_b(d_j1) (x) ch_a(e_2(t)) over steps j1 of slot 1
        const auto& steps1 = c1.type.punctures[p].steps;
        for (std::size_t j = 0; j < steps1.size(); ++j) {
            const Rat& t = steps1[j].weight;
            for (int b = 0; 2 * b <= cap1; ++b) {
                DPoly db = gen_dpoly(c1, GenKind::Flag, b, static_cast<int>(j + 1), p);
                if (db.is_zero()) continue;
                for (int a = 0; 2 * (a + b) <= max_total_coh && 2 * a <= cap2; ++a) {
                    DPoly ea = ch_e_at(c2, a, t, p);
                    if (ea.is_zero()) continue;
                    Rat f(-1);
                    if (a % 2 == 1) f = -f;
                    out += tp_scale(tp_outer(db, ea), f);
                }
            }
        }
    }
    return tp_truncate(out, max_total_coh);
}

DPoly chern_from_ch(const Ctx& ctx, const DPoly& ch, int max_i) {
    const int cap = 2 * max_i;
    // logarithm of the total Chern class
    DPoly logc;
    for (int m = 1; m <= max_i; ++m) {
        DPoly chm = dp_coh_component(ch, 2 * m);
        if (chm.is_zero()) continue;
        Rat f = rat_factorial(m - 1);
        if (m % 2 == 0) f = -f;
        logc += dp_scale(chm, f);
    }
    DPoly result = dp_const(1);
    DPoly cur = dp_const(1);
    for (int k = 1; k <= max_i; ++k) {
        cur = dp_truncate(dp_mul(ctx, cur, logc), cap);
        cur = dp_scale(cur, Rat(1, k));
        if (cur.is_zero()) break;
        result += cur;
    }
    return result;
}

TensorPoly chern_from_ch_tensor(const Ctx& c1, const Ctx& c2, const TensorPoly& ch,
                                int max_i) {
    const int cap = 2 * max_i;
    TensorPoly logc;
    for (int m = 1; m <= max_i; ++m) {
        TensorPoly chm = tp_coh_component(ch, 2 * m);
        if (chm.is_zero()) continue;
        Rat f = rat_factorial(m - 1);
        if (m % 2 == 0) f = -f;
        logc += tp_scale(chm, f);
    }
    TensorPoly result;
    result.add_term(Monomial{}, Monomial{}, 1);
    TensorPoly cur = result;
    for (int k = 1; k <= max_i; ++k) {
        cur = tp_truncate(tp_mul(c1, c2, cur, logc), cap);
        cur = tp_scale(cur, Rat(1, k));
        if (cur.is_zero()) break;
        result += cur;
    }
    return result;
}

// ------------------------------------------------------------- functionals

Rat cf_pair(const ClassFunctional& u, const DPoly& D) {
    DPoly n = point_normalize(u.ctx, D);
    Rat total = 0;
    for (const auto& [m, c] : n.terms) {
        if (m.coh_degree() != u.support_degree) continue;
        auto it = u.cache->find(m);
        Rat val;
        if (it != u.cache->end()) {
            val = it->second;
        } else {
            val = u.eval(m);
            u.cache->emplace(m, val);
        }
        total += c * val;
    }
    total.canonicalize();
    return total;
}

ClassFunctional cf_zero(const Ctx& ctx, int support_degree) {
    ClassFunctional f;
    f.ctx = ctx;
    f.ctx.coh_cap = support_degree;
    f.support_degree = support_degree;
    f.eval = [](const Monomial&) { return Rat(0); };
    return f;
}

ClassFunctional cf_scale(const ClassFunctional& u, const Rat& s) {
    ClassFunctional f = u;
    f.cache = std::make_shared<std::map<Monomial, Rat>>();
    ClassFunctional base = u;
    f.eval = [base, s](const Monomial& m) {
        DPoly D;
        D.add_term(m, 1);
        Rat v = s * cf_pair(base, D);
        v.canonicalize();
        return v;
    };
    return f;
}

namespace {

bool same_flag_shape(const ParabolicType& a, const ParabolicType& b) {
    if (a.rank != b.rank || a.degree != b.degree) return false;
    if (a.num_punctures() != b.num_punctures()) return false;
    for (int p = 0; p < a.num_punctures(); ++p) {
        const auto &sa = a.punctures[p].steps, &sb = b.punctures[p].steps;
        if (sa.size() != sb.size()) return false;
        for (std::size_t j = 0; j < sa.size(); ++j)
            if (sa[j].mult != sb[j].mult) return false;
    }
    return true;
}

}  // namespace

ClassFunctional cf_add(const ClassFunctional& u, const ClassFunctional& v) {
    if (!same_flag_shape(u.ctx.type, v.ctx.type) || u.support_degree != v.support_degree)
        throw std::invalid_argument("cf_add: incompatible functionals");
    ClassFunctional f = u;
    f.cache = std::make_shared<std::map<Monomial, Rat>>();
    ClassFunctional a = u, b = v;
    f.eval = [a, b](const Monomial& m) {
        DPoly D;
        D.add_term(m, 1);
        Rat val = cf_pair(a, D) + cf_pair(b, D);
        val.canonicalize();
        return val;
    };
    return f;
}

// ----------------------------------------------------------------- bracket

ClassFunctional lie_bracket(const ClassFunctional& u, const ClassFunctional& v) {
    const CurveModel& curve = u.ctx.curve;
    const ParabolicType &t1 = u.ctx.type, &t2 = v.ctx.type;
    ParabolicType combined = add_types(t1, t2);
    const long chi = euler_pairing(curve, t1, t2);
    const long chis = chi_sym(curve, t1, t2);
    const int supp = u.support_degree + v.support_degree - 2 * (static_cast<int>(chis) + 1);

    // each flag level of the combined type belongs to exactly one side
    std::vector<std::vector<int>> side_of_level(combined.num_punctures());
    for (int p = 0; p < combined.num_punctures(); ++p) {
        for (const auto& s : combined.punctures[p].steps) {
            bool in1 = false, in2 = false;
            for (const auto& a : t1.punctures[p].steps)
                if (a.weight == s.weight) in1 = true;
            for (const auto& b : t2.punctures[p].steps)
                if (b.weight == s.weight) in2 = true;
            if (in1 == in2)
                throw std::invalid_argument(
                    "lie_bracket: types must have disjoint weights at each marked point");
            side_of_level[p].push_back(in1 ? 1 : 2);
        }
    }

    Ctx cx{curve, combined, supp};
    Ctx c1 = u.ctx, c2 = v.ctx;
    // slot 1 is lowered by R_{-1} and raised by the Chern factors before the
    // pairing selects degree supp(u), so intermediate degrees range up to the
    // full input degree; slot 2 only ever grows towards supp(v).
    c1.coh_cap = std::max(supp, u.support_degree);
    c2.coh_cap = v.support_degree;

    auto chern_cache = std::make_shared<std::map<int, TensorPoly>>();
    auto theta = std::make_shared<TensorPoly>();
    auto theta_ready = std::make_shared<bool>(false);
    ClassFunctional uu = u, vv = v;

    ClassFunctional f;
    f.ctx = cx;
    f.support_degree = supp;
    f.origin = Origin::Bracket;
    f.eval = [=](const Monomial& mono) -> Rat {
        DPoly D;
        D.add_term(mono, 1);
        // the formula is canonical only on the kernel of R_{-1}
        D = wt0_project(cx, D);
        TensorPoly cur = wall_split(cx, c1, c2, side_of_level, D);
        Rat total = 0;
        Rat nfact = 1;
        for (int n = 0; !cur.is_zero(); ++n) {
            const long i = chis + 1 + n;
            if (i >= 0) {
                TensorPoly ci;
                auto it = chern_cache->find(static_cast<int>(i));
                if (it != chern_cache->end()) {
                    ci = it->second;
                } else {
                    if (!*theta_ready) {
                        *theta = theta_ch(c1, c2, c1.coh_cap + c2.coh_cap);
                        *theta_ready = true;
                    }
                    TensorPoly full = chern_from_ch_tensor(c1, c2, *theta,
                                                           static_cast<int>(i));
                    ci = tp_coh_component(full, 2 * static_cast<int>(i));
                    chern_cache->emplace(static_cast<int>(i), ci);
                }
                if (!ci.is_zero()) {
                    TensorPoly prod = tp_mul(c1, c2, ci, cur);
                    for (const auto& [ab, c] : prod.terms) {
                        if (ab.first.coh_degree() != uu.support_degree ||
                            ab.second.coh_degree() != vv.support_degree)
                            continue;
                        DPoly A, B;
                        A.add_term(ab.first, 1);
                        B.add_term(ab.second, 1);
                        Rat va = cf_pair(uu, A);
                        if (va == 0) continue;
                        Rat vb = cf_pair(vv, B);
                        if (vb == 0) continue;
                        total += c / nfact * va * vb;
                    }
                }
            }
            cur = tp_apply_slot1([&](const DPoly& x) { return R_op(c1, -1, x); }, cur);
            nfact *= (n + 1);
        }
        if (chi % 2 != 0) total = -total;
        total.canonicalize();
        return total;
    };
    return f;
}

// ---------------------------------------------------------- flag forgetting

ClassFunctional omega_map(const ClassFunctional& u, const ParabolicType& partial) {
    const Ctx& rc = u.ctx;
    const ParabolicType& refined = rc.type;
    if (partial.rank != refined.rank || partial.degree != refined.degree ||
        partial.num_punctures() != refined.num_punctures())
        throw std::invalid_argument("omega_map: type mismatch");

    // the relative tangent bundle: for every refined level whose cumulative
    // dimension is absent from the coarse flag, Hom(e_j - e_p, d_{j+1}),
    // where p is the nearest retained level below j.  Subtracting e_p keeps
    // only the Homs inside the coarse block being refined; pairs straddling
    // a retained level survive the forgetful map and are not relative
    // directions.
    DPoly xi_ch;          // Chern character, degree-0 part excluded
    long xi_rank = 0;
    for (int p = 0; p < refined.num_punctures(); ++p) {
        std::vector<int> keep;  // cumulative dims of the coarse flag
        int acc = 0;
        for (const auto& s : partial.punctures[p].steps) {
            acc += s.mult;
            keep.push_back(acc);
        }
        std::vector<int> fine;  // cumulative dims of the refined flag
        acc = 0;
        for (const auto& s : refined.punctures[p].steps) {
            acc += s.mult;
            fine.push_back(acc);
        }
        for (int kdim : keep)
            if (std::find(fine.begin(), fine.end(), kdim) == fine.end())
                throw std::invalid_argument("omega_map: coarse flag is not a coarsening");
        int cum = 0;
        const auto& steps = refined.punctures[p].steps;
        int below_idx = 0;  // 1-based refined level of the last retained dim
        int below_cum = 0;  // its cumulative dimension (0 before any)
        for (std::size_t j = 0; j + 1 < steps.size(); ++j) {
            cum += steps[j].mult;
            if (std::find(keep.begin(), keep.end(), cum) != keep.end()) {
                below_idx = static_cast<int>(j + 1);
                below_cum = cum;
                continue;
            }
            xi_rank += static_cast<long>(cum - below_cum) * steps[j + 1].mult;
            for (int a = 0; 2 * a <= rc.coh_cap; ++a) {
                DPoly ea = ch_e(rc, a, static_cast<int>(j + 1), p);
                if (below_idx > 0)
                    ea = dp_add(ea, dp_scale(ch_e(rc, a, below_idx, p), Rat(-1)));
                if (ea.is_zero()) continue;
                for (int b = 0; 2 * (a + b) <= rc.coh_cap; ++b) {
                    if (a + b == 0) continue;
                    DPoly db = gen_dpoly(rc, GenKind::Flag, b, static_cast<int>(j + 2), p);
                    if (db.is_zero()) continue;
                    Rat f(1);
                    if (a % 2 == 1) f = -f;
                    xi_ch += dp_scale(dp_mul(rc, ea, db), f);
                }
            }
        }
    }

    const int supp = u.support_degree - 2 * static_cast<int>(xi_rank);
    DPoly ctop = dp_coh_component(chern_from_ch(rc, xi_ch, static_cast<int>(xi_rank)),
                                  2 * static_cast<int>(xi_rank));

    Ctx pc{rc.curve, partial, supp};
    ClassFunctional base = u;
    Ctx refined_ctx = rc;
    ClassFunctional f;
    f.ctx = pc;
    f.support_degree = supp;
    f.origin = u.origin;
    f.eval = [base, refined_ctx, pc, ctop](const Monomial& m) {
        DPoly D;
        D.add_term(m, 1);
        DPoly lifted = lift_to_refinement(refined_ctx, pc, D);
        return cf_pair(base, dp_mul(refined_ctx, ctop, lifted));
    };
    return f;
}

// -------------------------------------------------------------- Hecke duals

ClassFunctional hecke_push(const Rat& tau, const ClassFunctional& u, int puncture) {
    ParabolicType moved = hecke_on_type(tau, u.ctx.type, puncture);
    Ctx nc{u.ctx.curve, moved, u.support_degree};
    ClassFunctional base = u;
    Ctx target = u.ctx;
    ClassFunctional f;
    f.ctx = nc;
    f.support_degree = u.support_degree;
    f.origin = u.origin;
    f.eval = [base, target, tau, puncture](const Monomial& m) {
        DPoly D;
        D.add_term(m, 1);
        return cf_pair(base, hecke_dagger(target, tau, D, puncture));
    };
    return f;
}

ClassFunctional twist_push(const ClassFunctional& u) {
    ParabolicType twisted = twist_type(u.ctx.type);
    Ctx nc{u.ctx.curve, twisted, u.support_degree};
    ClassFunctional base = u;
    Ctx target = u.ctx;
    ClassFunctional f;
    f.ctx = nc;
    f.support_degree = u.support_degree;
    f.origin = u.origin;
    f.eval = [base, target](const Monomial& m) {
        DPoly D;
        D.add_term(m, 1);
        return cf_pair(base, twist_dagger(target, D));
    };
    return f;
}

// ----------------------------------------------------------------- Virasoro

ClassFunctional virasoro_dual(int n, const ClassFunctional& u) {
    Ctx nc = u.ctx;
    nc.coh_cap = u.support_degree - 2 * n;
    ClassFunctional base = u;
    Ctx bc = u.ctx;
    ClassFunctional f;
    f.ctx = nc;
    f.support_degree = u.support_degree - 2 * n;
    f.origin = u.origin;
    f.eval = [base, bc, n](const Monomial& m) {
        DPoly D;
        D.add_term(m, 1);
        Ctx wide = bc;
        wide.coh_cap = base.support_degree;
        return cf_pair(base, L_op(wide, n, D));
    };
    return f;
}

bool primary_test(const ClassFunctional& u) {
    Ctx wide = u.ctx;
    wide.coh_cap = u.support_degree + 2;
    for (const Monomial& m : enumerate_monomials(wide, u.support_degree + 2)) {
        DPoly D;
        D.add_term(m, 1);
        if (cf_pair(u, L_wt0(wide, D)) != 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------- utilities

namespace {

void enum_rec(const std::vector<Gen>& gens, std::size_t from, int remaining,
              Monomial& acc, std::vector<Monomial>& out) {
    if (remaining == 0) {
        out.push_back(acc);
        return;
    }
    for (std::size_t i = from; i < gens.size(); ++i) {
        Gen g = gens[i];
        int d = gen_coh_degree(g);
        if (d > remaining) continue;
        if (gen_is_odd(g) && !acc.gens.empty() && acc.gens.back() == g) continue;
        acc.gens.push_back(g);
        enum_rec(gens, gen_is_odd(g) ? i + 1 : i, remaining - d, acc, out);
        acc.gens.pop_back();
    }
}

}  // namespace

std::vector<Monomial> enumerate_monomials(const Ctx& ctx, int coh_degree) {
    std::vector<Gen> gens;
    for (int k = 2; 2 * k - 2 <= coh_degree; ++k) gens.push_back(make_gen(GenKind::One, k));
    for (int i = 1; i <= 2 * ctx.curve.genus; ++i)
        for (int k = 1; 2 * k - 1 <= coh_degree; ++k)
            gens.push_back(make_gen(GenKind::Odd, k, i));
    for (int p = 0; p < ctx.type.num_punctures(); ++p)
        for (int j = 1; j <= ctx.flag_levels(p); ++j)
            for (int k = 1; 2 * k <= coh_degree; ++k)
                gens.push_back(make_gen(GenKind::Flag, k, j, p));
    std::sort(gens.begin(), gens.end());
    std::vector<Monomial> out;
    Monomial acc;
    enum_rec(gens, 0, coh_degree, acc, out);
    return out;
}

}  // namespace parab
