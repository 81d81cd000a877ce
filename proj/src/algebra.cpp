#include "parab/algebra.hpp"

#include <sstream>

namespace parab {

std::string gen_str(Gen g, int num_punctures) {
    std::ostringstream os;
    os << "ch" << gen_k(g) << "(";
    switch (gen_kind(g)) {
        case GenKind::One: os << "one"; break;
        case GenKind::Odd: os << "g" << gen_idx(g); break;
        case GenKind::Flag:
            os << "d" << gen_idx(g);
            if (num_punctures > 1) os << "^" << (gen_puncture(g) + 1);
            break;
    }
    os << ")";
    return os.str();
}

std::string Monomial::to_string(int num_punctures) const {
    if (gens.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (i) out += "*";
        out += gen_str(gens[i], num_punctures);
    }
    return out;
}

void DPoly::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        Rat cc = c;
        cc.canonicalize();
        terms.emplace(m, std::move(cc));
    } else {
        it->second += c;
        it->second.canonicalize();
        if (it->second == 0) terms.erase(it);
    }
}

DPoly& DPoly::operator+=(const DPoly& o) {
    for (const auto& [m, c] : o.terms) add_term(m, c);
    return *this;
}
DPoly& DPoly::operator-=(const DPoly& o) {
    for (const auto& [m, c] : o.terms) add_term(m, -c);
    return *this;
}
DPoly& DPoly::operator*=(const Rat& c) {
    if (c == 0) {
        terms.clear();
        return *this;
    }
    for (auto& [m, v] : terms) {
        v *= c;
        v.canonicalize();
    }
    return *this;
}

std::string DPoly::to_string(int num_punctures) const {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms) {
        if (!first) out += " + ";
        first = false;
        out += rat_str(c) + "*" + m.to_string(num_punctures);
    }
    return out;
}

DPoly dp_zero() { return DPoly{}; }

DPoly dp_const(const Rat& c) {
    DPoly p;
    p.add_term(Monomial{}, c);
    return p;
}

void mono_mul_gen(const Ctx& ctx, const Monomial& m, const Rat& coeff, Gen g, DPoly& out) {
    if (coeff == 0) return;
    const int k = gen_k(g);
    switch (gen_kind(g)) {
        case GenKind::One:
            if (k == 0) return;  // ch_0(1) = 0
            if (k == 1) {        // ch_1(1) = degree
                out.add_term(m, coeff * Rat(ctx.type.degree));
                return;
            }
            break;
        case GenKind::Odd:
            if (k == 0) return;  // ch_0(g_i) = 0
            break;
        case GenKind::Flag:
            if (k == 0) {  // ch_0(d_j) = multiplicity
                out.add_term(m, coeff * Rat(ctx.flag_mult(gen_idx(g), gen_puncture(g))));
                return;
            }
            break;
    }
    if (m.coh_degree() + gen_coh_degree(g) > ctx.coh_cap) return;
    Monomial nm = m;
    auto pos = std::upper_bound(nm.gens.begin(), nm.gens.end(), g);
    int sign = 1;
    if (gen_is_odd(g)) {
        if (std::find(nm.gens.begin(), nm.gens.end(), g) != nm.gens.end()) return;  // odd square
        int odd_after = 0;
        for (auto it = pos; it != nm.gens.end(); ++it)
            if (gen_is_odd(*it)) ++odd_after;
        if (odd_after & 1) sign = -1;
    }
    nm.gens.insert(pos, g);
    out.add_term(nm, coeff * sign);
}

DPoly gen_dpoly(const Ctx& ctx, GenKind kind, int k, int idx, int puncture) {
    DPoly out;
    mono_mul_gen(ctx, Monomial{}, Rat(1), make_gen(kind, k, idx, puncture), out);
    return out;
}

DPoly ch_pt(const Ctx& ctx, int k, int puncture) {
    DPoly out;
    for (int j = 1; j <= ctx.flag_levels(puncture); ++j)
        out += gen_dpoly(ctx, GenKind::Flag, k, j, puncture);
    return out;
}

DPoly ch_e(const Ctx& ctx, int k, int j, int puncture) {
    DPoly out;
    for (int i = 1; i <= j; ++i) out += gen_dpoly(ctx, GenKind::Flag, k, i, puncture);
    return out;
}

DPoly ch_e_at(const Ctx& ctx, int k, const Rat& t, int puncture) {
    int j = 0;
    for (const auto& s : ctx.type.punctures.at(puncture).steps)
        if (s.weight <= t) ++j;
    return ch_e(ctx, k, j, puncture);
}

DPoly dp_add(const DPoly& a, const DPoly& b) {
    DPoly out = a;
    out += b;
    return out;
}

DPoly dp_scale(const DPoly& a, const Rat& c) {
    DPoly out = a;
    out *= c;
    return out;
}

namespace {

/// merge two normal-form monomials; returns false if the product vanishes
/// (repeated odd generator).  sign receives the Koszul sign.
bool mono_merge(const Monomial& a, const Monomial& b, Monomial& out, int& sign) {
    out.gens.clear();
    out.gens.reserve(a.gens.size() + b.gens.size());
    sign = 1;
    std::size_t i = 0, j = 0;
    int odd_left = 0;  // odd generators of a not yet consumed
    for (Gen g : a.gens) odd_left += gen_is_odd(g) ? 1 : 0;
    while (i < a.gens.size() && j < b.gens.size()) {
        if (gen_is_odd(a.gens[i]) && a.gens[i] == b.gens[j]) return false;
        if (a.gens[i] <= b.gens[j]) {
            if (gen_is_odd(a.gens[i])) --odd_left;
            out.gens.push_back(a.gens[i++]);
        } else {
            if (gen_is_odd(b.gens[j]) && (odd_left & 1)) sign = -sign;
            out.gens.push_back(b.gens[j++]);
        }
    }
    while (i < a.gens.size()) out.gens.push_back(a.gens[i++]);
    while (j < b.gens.size()) out.gens.push_back(b.gens[j++]);
    return true;
}

}  // namespace

DPoly dp_mul_mono(const Ctx& ctx, const DPoly& a, const Monomial& m, const Rat& c) {
    DPoly out;
    if (c == 0) return out;
    const int mdeg = m.coh_degree();
    for (const auto& [am, ac] : a.terms) {
        if (am.coh_degree() + mdeg > ctx.coh_cap) continue;
        Monomial nm;
        int sign;
        if (!mono_merge(am, m, nm, sign)) continue;
        out.add_term(nm, ac * c * sign);
    }
    return out;
}

DPoly dp_mul(const Ctx& ctx, const DPoly& a, const DPoly& b) {
    DPoly out;
    for (const auto& [bm, bc] : b.terms) out += dp_mul_mono(ctx, a, bm, bc);
    return out;
}

DPoly dp_pow(const Ctx& ctx, const DPoly& a, unsigned e) {
    DPoly acc = dp_const(1);
    for (unsigned i = 0; i < e; ++i) acc = dp_mul(ctx, acc, a);
    return acc;
}

DPoly dp_coh_component(const DPoly& a, int deg) {
    DPoly out;
    for (const auto& [m, c] : a.terms)
        if (m.coh_degree() == deg) out.add_term(m, c);
    return out;
}

DPoly point_normalize(const Ctx& ctx, const DPoly& a) {
    // images of the eliminated generators ch_1(d_l) at each marked point
    std::vector<Gen> last;
    for (int p = 0; p < ctx.type.num_punctures(); ++p)
        last.push_back(make_gen(GenKind::Flag, 1, ctx.flag_levels(p), p));
    return dp_substitute(ctx, a, [&](Gen g) -> DPoly {
        for (int p = 0; p < static_cast<int>(last.size()); ++p) {
            if (g == last[p]) {
                DPoly img;
                for (int j = 1; j < ctx.flag_levels(p); ++j)
                    img -= gen_dpoly(ctx, GenKind::Flag, 1, j, p);
                return img;
            }
        }
        DPoly img;
        img.add_term(Monomial{std::vector<Gen>{g}}, 1);
        return img;
    });
}

void TensorPoly::add_term(const Monomial& a, const Monomial& b, const Rat& c) {
    if (c == 0) return;
    auto key = std::make_pair(a, b);
    auto it = terms.find(key);
    if (it == terms.end()) {
        Rat cc = c;
        cc.canonicalize();
        terms.emplace(std::move(key), std::move(cc));
    } else {
        it->second += c;
        it->second.canonicalize();
        if (it->second == 0) terms.erase(it);
    }
}

TensorPoly& TensorPoly::operator+=(const TensorPoly& o) {
    for (const auto& [k, c] : o.terms) add_term(k.first, k.second, c);
    return *this;
}

TensorPoly& TensorPoly::operator*=(const Rat& c) {
    if (c == 0) {
        terms.clear();
        return *this;
    }
    for (auto& [k, v] : terms) {
        v *= c;
        v.canonicalize();
    }
    return *this;
}

TensorPoly tp_mul(const Ctx& c1, const Ctx& c2, const TensorPoly& a, const TensorPoly& b) {
    TensorPoly out;
    for (const auto& [ak, ac] : a.terms) {
        for (const auto& [bk, bc] : b.terms) {
            if (ak.first.coh_degree() + bk.first.coh_degree() > c1.coh_cap) continue;
            if (ak.second.coh_degree() + bk.second.coh_degree() > c2.coh_cap) continue;
            Monomial m1, m2;
            int s1, s2;
            if (!mono_merge(ak.first, bk.first, m1, s1)) continue;
            if (!mono_merge(ak.second, bk.second, m2, s2)) continue;
            // Koszul: slot-2 part of a moves past slot-1 part of b
            int cross = (ak.second.parity() & bk.first.parity()) ? -1 : 1;
            out.add_term(m1, m2, ac * bc * s1 * s2 * cross);
        }
    }
    return out;
}

TensorPoly tp_outer(const DPoly& a, const DPoly& b) {
    TensorPoly out;
    for (const auto& [am, ac] : a.terms)
        for (const auto& [bm, bc] : b.terms) out.add_term(am, bm, ac * bc);
    return out;
}

}  // namespace parab
