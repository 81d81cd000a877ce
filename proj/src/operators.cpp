#include "parab/operators.hpp"

#include <stdexcept>

namespace parab {

namespace {

/// Hodge-shifted index m of a generator: R_n multiplies by (m)(m+1)...(m+n).
int hodge_m(const CurveModel& C, Gen g) {
    switch (gen_kind(g)) {
        case GenKind::One: return gen_k(g) - 1;
        case GenKind::Odd: return gen_k(g) - 1 + C.hodge_p_odd(gen_idx(g));
        default: return gen_k(g);
    }
}

}  // namespace

DPoly R_op(const Ctx& ctx, int n, const DPoly& a) {
    if (n < -1) throw std::invalid_argument("R_op: n must be >= -1");
    DPoly out;
    for (const auto& [m, c] : a.terms) {
        for (std::size_t i = 0; i < m.gens.size(); ++i) {
            Gen g = m.gens[i];
            int k = gen_k(g);
            if (k + n < 0) continue;
            Rat factor = 1;
            int h = hodge_m(ctx.curve, g);
            for (int j = 0; j <= n; ++j) factor *= Rat(h + j);
            if (factor == 0) continue;
            Monomial rest;
            rest.gens.reserve(m.gens.size() - 1);
            int odd_after = 0;
            for (std::size_t j = 0; j < m.gens.size(); ++j) {
                if (j != i) rest.gens.push_back(m.gens[j]);
                if (j > i && gen_is_odd(m.gens[j])) ++odd_after;
            }
            // moving the odd operand to the right end of the monomial before
            // re-inserting it in sorted position costs a Koszul sign
            if (gen_is_odd(g) && (odd_after & 1)) factor = -factor;
            Gen ng = make_gen(gen_kind(g), k + n, gen_idx(g), gen_puncture(g));
            mono_mul_gen(ctx, rest, c * factor, ng, out);
        }
    }
    return out;
}

DPoly T_poly(const Ctx& ctx, int n) {
    DPoly out;
    for (int a = 0; a <= n; ++a) {
        int b = n - a;
        Rat pref = rat_factorial(a) * rat_factorial(b);
        // curve part (1-g) ch_a(pt) ch_b(pt)
        DPoly curve = dp_mul(ctx, ch_pt(ctx, a), ch_pt(ctx, b));
        out += dp_scale(curve, pref * Rat(1 - ctx.curve.genus));
        // flag part per marked point: minus the partial class times the
        // forward jump.  The sign is forced by geometry: with the plus sign
        // the weight-zero constraints fail against the rank-2 moduli class
        // computed independently by a Fourier-Mukai model (genus 1), while
        // the minus sign makes them hold there and for the rank-3 classes.
        // The bracket relation [L_n, L_m] = (m-n) L_{n+m} holds either way,
        // so it cannot distinguish the two.
        for (int p = 0; p < ctx.type.num_punctures(); ++p) {
            for (int j = 1; j <= ctx.flag_levels(p) - 1; ++j) {
                DPoly term =
                    dp_mul(ctx, ch_e(ctx, a, j, p), gen_dpoly(ctx, GenKind::Flag, b, j + 1, p));
                out -= dp_scale(term, pref);
            }
        }
    }
    return out;
}

DPoly L_op(const Ctx& ctx, int n, const DPoly& a) {
    DPoly out = R_op(ctx, n, a);
    out += dp_mul(ctx, T_poly(ctx, n), a);
    return out;
}

DPoly L_wt0(const Ctx& ctx, const DPoly& a) {
    DPoly out;
    DPoly lowered = a;  // R_{-1}^{n+1} a
    for (int n = -1;; ++n) {
        if (n >= 0) {
            lowered = R_op(ctx, -1, lowered);
            if (lowered.is_zero()) break;
        }
        Rat coeff = Rat((n % 2 == 0) ? 1 : -1) / rat_factorial(static_cast<unsigned>(n + 1));
        out += dp_scale(L_op(ctx, n, lowered), coeff);
    }
    return out;
}

DPoly wt0_project(const Ctx& ctx, const DPoly& a) {
    const int r = ctx.type.rank;
    DPoly out;
    DPoly lowered = a;
    DPoly pt1 = ch_pt(ctx, 1);
    DPoly pt_pow = dp_const(1);
    Rat coeff = 1;
    for (int n = 0;; ++n) {
        if (n > 0) {
            lowered = R_op(ctx, -1, lowered);
            if (lowered.is_zero()) break;
            pt_pow = dp_mul(ctx, pt_pow, pt1);
            coeff *= Rat(-1, static_cast<long>(n) * r);
        }
        out += dp_scale(dp_mul(ctx, pt_pow, lowered), coeff);
    }
    return out;
}

DPoly weyl_act(const Ctx& ctx, const std::vector<int>& perm, const DPoly& a, int puncture) {
    if (!ctx.type.is_full()) throw std::invalid_argument("weyl_act: full flag required");
    return dp_substitute(ctx, a, [&](Gen g) -> DPoly {
        if (gen_kind(g) == GenKind::Flag && gen_puncture(g) == puncture) {
            return gen_dpoly(ctx, GenKind::Flag, gen_k(g), perm.at(gen_idx(g)), puncture);
        }
        DPoly img;
        img.add_term(Monomial{std::vector<Gen>{g}}, 1);
        return img;
    });
}

DPoly twist_dagger(const Ctx& target, const DPoly& a) {
    return dp_substitute(target, a, [&](Gen g) -> DPoly {
        if (gen_kind(g) == GenKind::One) {
            DPoly img = gen_dpoly(target, GenKind::One, gen_k(g));
            img += ch_pt(target, gen_k(g) - 1);
            return img;
        }
        DPoly img;
        img.add_term(Monomial{std::vector<Gen>{g}}, 1);
        return img;
    });
}

DPoly hecke_dagger(const Ctx& target, const Rat& tau, const DPoly& a, int puncture) {
    const auto& steps = target.type.punctures.at(puncture).steps;
    const int l = static_cast<int>(steps.size());
    Rat cut = Rat(1) - tau;
    int j0 = 0;  // levels of the target type strictly below the cut
    for (const auto& s : steps) {
        if (s.weight == cut)
            throw std::invalid_argument("hecke_dagger: weight on the rotation cut");
        if (s.weight < cut) ++j0;
    }
    const int wrapped_levels = l - j0;
    return dp_substitute(target, a, [&](Gen g) -> DPoly {
        if (gen_kind(g) == GenKind::One) {
            DPoly img = gen_dpoly(target, GenKind::One, gen_k(g));
            img -= ch_e(target, gen_k(g) - 1, j0, puncture);
            return img;
        }
        if (gen_kind(g) == GenKind::Flag && gen_puncture(g) == puncture) {
            int j = gen_idx(g);
            int tj = (j <= wrapped_levels) ? j0 + j : j - wrapped_levels;
            return gen_dpoly(target, GenKind::Flag, gen_k(g), tj, puncture);
        }
        DPoly img;
        img.add_term(Monomial{std::vector<Gen>{g}}, 1);
        return img;
    });
}

DPoly conj_H(const Ctx& target, const DPoly& a) {
    const int r = target.type.rank;
    if (r < 3 || target.type.num_punctures() != 1 || !target.type.is_full())
        throw std::invalid_argument("conj_H: full single-puncture flag of rank >= 3 required");
    return dp_substitute(target, a, [&](Gen g) -> DPoly {
        int k = gen_k(g);
        if (gen_kind(g) == GenKind::One) {
            DPoly img = gen_dpoly(target, GenKind::One, k);
            img += gen_dpoly(target, GenKind::Flag, k - 1, r - 1);
            img += gen_dpoly(target, GenKind::Flag, k - 1, r);
            return img;
        }
        if (gen_kind(g) == GenKind::Flag) {
            int j = gen_idx(g);
            int pj = ((j + r - 3) % r) + 1;  // j + r - 2 (mod r), 1-based
            return gen_dpoly(target, GenKind::Flag, k, pj);
        }
        DPoly img;
        img.add_term(Monomial{std::vector<Gen>{g}}, 1);
        return img;
    });
}

DPoly conj_H_inv(const Ctx& target, const DPoly& a) {
    const int r = target.type.rank;
    if (r < 3 || target.type.num_punctures() != 1 || !target.type.is_full())
        throw std::invalid_argument("conj_H_inv: full single-puncture flag of rank >= 3 required");
    return dp_substitute(target, a, [&](Gen g) -> DPoly {
        int k = gen_k(g);
        if (gen_kind(g) == GenKind::One) {
            DPoly img = gen_dpoly(target, GenKind::One, k);
            img -= gen_dpoly(target, GenKind::Flag, k - 1, 1);
            img -= gen_dpoly(target, GenKind::Flag, k - 1, 2);
            return img;
        }
        if (gen_kind(g) == GenKind::Flag) {
            int j = gen_idx(g);
            int pj = ((j + 1) % r) + 1;  // j + 2 (mod r), 1-based
            return gen_dpoly(target, GenKind::Flag, k, pj);
        }
        DPoly img;
        img.add_term(Monomial{std::vector<Gen>{g}}, 1);
        return img;
    });
}

namespace {

DPoly conj_H2_impl(const Ctx& target, const DPoly& a, int sign) {
    if (target.type.rank != 2 || target.type.num_punctures() != 2)
        throw std::invalid_argument("conj_H2: rank-2 two-puncture type required");
    return dp_substitute(target, a, [&](Gen g) -> DPoly {
        int k = gen_k(g);
        if (gen_kind(g) == GenKind::One) {
            DPoly img = gen_dpoly(target, GenKind::One, k);
            int fl = sign > 0 ? 2 : 1;  // forward adds d_2's, inverse subtracts d_1's
            DPoly corr = gen_dpoly(target, GenKind::Flag, k - 1, fl, 0);
            corr += gen_dpoly(target, GenKind::Flag, k - 1, fl, 1);
            img += dp_scale(corr, Rat(sign));
            return img;
        }
        if (gen_kind(g) == GenKind::Flag) {
            return gen_dpoly(target, GenKind::Flag, k, 3 - gen_idx(g), gen_puncture(g));
        }
        DPoly img;
        img.add_term(Monomial{std::vector<Gen>{g}}, 1);
        return img;
    });
}

}  // namespace

DPoly conj_H2(const Ctx& target, const DPoly& a) { return conj_H2_impl(target, a, +1); }
DPoly conj_H2_inv(const Ctx& target, const DPoly& a) { return conj_H2_impl(target, a, -1); }

DPoly lift_to_refinement(const Ctx& refined, const Ctx& partial, const DPoly& a) {
    const int np = partial.type.num_punctures();
    if (refined.type.num_punctures() != np)
        throw std::invalid_argument("lift_to_refinement: marked-point mismatch");
    // block[p][i] = (first, last) 1-based refined levels for partial level i
    std::vector<std::vector<std::pair<int, int>>> block(np);
    for (int p = 0; p < np; ++p) {
        const auto& ps = partial.type.punctures[p].steps;
        const auto& rs = refined.type.punctures[p].steps;
        int rlev = 0, cum = 0;
        for (const auto& s : ps) {
            int first = rlev + 1, need = s.mult;
            while (need > 0) {
                if (rlev >= static_cast<int>(rs.size()))
                    throw std::invalid_argument("lift_to_refinement: flags do not refine");
                need -= rs[rlev].mult;
                ++rlev;
            }
            if (need != 0) throw std::invalid_argument("lift_to_refinement: cumulative dimension mismatch");
            cum += s.mult;
            block[p].emplace_back(first, rlev);
        }
        if (cum != partial.type.rank)
            throw std::invalid_argument("lift_to_refinement: flag does not exhaust the fiber");
    }
    return dp_substitute(refined, a, [&](Gen g) -> DPoly {
        if (gen_kind(g) == GenKind::Flag) {
            auto [first, last] = block.at(gen_puncture(g)).at(gen_idx(g) - 1);
            DPoly img;
            for (int j = first; j <= last; ++j)
                img += gen_dpoly(refined, GenKind::Flag, gen_k(g), j, gen_puncture(g));
            return img;
        }
        DPoly img;
        img.add_term(Monomial{std::vector<Gen>{g}}, 1);
        return img;
    });
}

TensorPoly wall_split(const Ctx& ctx, const Ctx& ctx1, const Ctx& ctx2,
                      const std::vector<std::vector<int>>& side_of_level, const DPoly& a) {
    const int np = ctx.type.num_punctures();
    // local index of each level within its side, per marked point
    std::vector<std::vector<int>> local(np);
    for (int p = 0; p < np; ++p) {
        int n1 = 0, n2 = 0;
        for (int j = 1; j <= ctx.flag_levels(p); ++j) {
            int side = side_of_level.at(p).at(j - 1);
            local[p].push_back(side == 1 ? ++n1 : ++n2);
        }
    }
    TensorPoly out;
    for (const auto& [m, c] : a.terms) {
        // states: (slot-1 monomial, slot-2 monomial, sign); generators arrive
        // in sorted order and stay sorted within each slot.
        std::vector<std::tuple<Monomial, Monomial, int>> states;
        states.emplace_back(Monomial{}, Monomial{}, 1);
        for (Gen g : m.gens) {
            std::vector<std::tuple<Monomial, Monomial, int>> next;
            for (auto& [m1, m2, s] : states) {
                auto push = [&](int slot, Gen gg) {
                    Monomial n1 = m1, n2 = m2;
                    int ns = s;
                    if (slot == 1) {
                        if (gen_is_odd(gg) && (n2.parity() & 1)) ns = -ns;
                        n1.gens.push_back(gg);
                        if (n1.coh_degree() > ctx1.coh_cap) return;
                    } else {
                        n2.gens.push_back(gg);
                        if (n2.coh_degree() > ctx2.coh_cap) return;
                    }
                    next.emplace_back(std::move(n1), std::move(n2), ns);
                };
                if (gen_kind(g) == GenKind::Flag) {
                    int p = gen_puncture(g), j = gen_idx(g);
                    int side = side_of_level.at(p).at(j - 1);
                    Gen gg = make_gen(GenKind::Flag, gen_k(g), local[p][j - 1], p);
                    push(side, gg);
                } else {
                    push(1, g);
                    push(2, g);
                }
            }
            states = std::move(next);
        }
        for (auto& [m1, m2, s] : states) out.add_term(m1, m2, c * Rat(s));
    }
    return out;
}

}  // namespace parab
