#pragma once

/**
 * @file algebra.hpp
 * @brief The free supercommutative descendent algebra in normal form.
 *
 * Generators are the formal symbols
 *     ch_k(1)          -- unit class of the curve        (coh degree 2k-2)
 *     ch_k(g_i)        -- odd classes, i = 1..2g         (coh degree 2k-1)
 *     ch_k(d_j)        -- successive flag quotients      (coh degree 2k)
 * where d_j = e_j - e_{j-1} is the j-th graded piece of the flag at a
 * marked point (for several marked points each carries its own d_j's).
 * The point class is not a separate symbol: ch_k(pt) expands as
 * sum_j ch_k(d_j) over the flag at the first marked point, and partial-flag
 * symbols ch_k(e_j) expand as sums of d's.  This makes the algebra literally
 * free on the generators above, with only the scalar relations
 *     ch_0(1) = 0,  ch_1(1) = d,  ch_0(g_i) = 0,  ch_0(d_j) = mult_j
 * applied eagerly relative to a type.
 *
 * A monomial is a sorted product of generators (odd ones at most once, with
 * Koszul signs); a DPoly is a finite rational linear combination.  All maps
 * here are exact; a cohomological degree cap in the context drops monomials
 * that cannot pair with anything of interest.
 */

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parab/curve_types.hpp"

namespace parab {

// ---------------------------------------------------------------- generators

enum class GenKind : std::uint32_t { One = 0, Odd = 1, Flag = 2 };

/// packed generator: kind(2) | puncture(2) | idx(12) | k(16)
using Gen = std::uint32_t;

inline Gen make_gen(GenKind kind, int k, int idx = 0, int puncture = 0) {
    return (static_cast<std::uint32_t>(kind) << 30) |
           (static_cast<std::uint32_t>(puncture) << 28) |
           (static_cast<std::uint32_t>(idx) << 16) | static_cast<std::uint32_t>(k);
}
inline GenKind gen_kind(Gen g) { return static_cast<GenKind>(g >> 30); }
inline int gen_puncture(Gen g) { return static_cast<int>((g >> 28) & 0x3u); }
inline int gen_idx(Gen g) { return static_cast<int>((g >> 16) & 0xFFFu); }
inline int gen_k(Gen g) { return static_cast<int>(g & 0xFFFFu); }
inline bool gen_is_odd(Gen g) { return gen_kind(g) == GenKind::Odd; }

inline int gen_coh_degree(Gen g) {
    switch (gen_kind(g)) {
        case GenKind::One: return 2 * gen_k(g) - 2;
        case GenKind::Odd: return 2 * gen_k(g) - 1;
        default: return 2 * gen_k(g);
    }
}
inline int gen_chern_degree(Gen g) { return gen_k(g); }

std::string gen_str(Gen g, int num_punctures = 1);

// ----------------------------------------------------------------- monomials

struct Monomial {
    std::vector<Gen> gens;  // sorted ascending; odd generators distinct

    bool operator==(const Monomial& o) const { return gens == o.gens; }
    bool operator<(const Monomial& o) const { return gens < o.gens; }

    int coh_degree() const {
        int acc = 0;
        for (Gen g : gens) acc += gen_coh_degree(g);
        return acc;
    }
    int chern_degree() const {
        int acc = 0;
        for (Gen g : gens) acc += gen_chern_degree(g);
        return acc;
    }
    int parity() const {  // 0 even, 1 odd
        int n = 0;
        for (Gen g : gens) n += gen_is_odd(g) ? 1 : 0;
        return n & 1;
    }
    /// total descendent weight sum of k's (bounds nilpotency of lowering ops)
    int total_weight() const {
        int acc = 0;
        for (Gen g : gens) acc += gen_k(g);
        return acc;
    }
    std::string to_string(int num_punctures = 1) const;
};

// ------------------------------------------------------------------- context

/// Everything a normal form needs to know: the curve, the type the algebra
/// is relative to, and the cohomological degree cap.
struct Ctx {
    CurveModel curve;
    ParabolicType type;
    int coh_cap = 1 << 28;

    int flag_levels(int puncture = 0) const { return type.punctures.at(puncture).levels(); }
    int flag_mult(int j, int puncture = 0) const {  // 1-based level j
        return type.punctures.at(puncture).steps.at(j - 1).mult;
    }
};

// --------------------------------------------------------------- polynomials

struct DPoly {
    std::map<Monomial, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    void add_term(const Monomial& m, const Rat& c);
    DPoly& operator+=(const DPoly& o);
    DPoly& operator-=(const DPoly& o);
    DPoly& operator*=(const Rat& c);
    std::string to_string(int num_punctures = 1) const;

    bool operator==(const DPoly& o) const { return terms == o.terms; }
};

DPoly dp_zero();
DPoly dp_const(const Rat& c);

/// multiply a normal-form monomial by one generator, applying the scalar
/// relations of the context and the Koszul sign; appends the result to out.
void mono_mul_gen(const Ctx& ctx, const Monomial& m, const Rat& coeff, Gen g, DPoly& out);

/// the generator ch_k(sym) as a DPoly in normal form (may be a scalar).
DPoly gen_dpoly(const Ctx& ctx, GenKind kind, int k, int idx = 0, int puncture = 0);

/// ch_k(pt) = sum_j ch_k(d_j) over the flag at `puncture`.
DPoly ch_pt(const Ctx& ctx, int k, int puncture = 0);

/// ch_k(e_j) = ch_k(d_1 + ... + d_j) (partial flag class, 1-based level).
DPoly ch_e(const Ctx& ctx, int k, int j, int puncture = 0);

/// ch_k(e(t)): the flag class at parameter t, i.e. e_j with j = f(t)-level.
DPoly ch_e_at(const Ctx& ctx, int k, const Rat& t, int puncture = 0);

DPoly dp_add(const DPoly& a, const DPoly& b);
DPoly dp_scale(const DPoly& a, const Rat& c);
DPoly dp_mul(const Ctx& ctx, const DPoly& a, const DPoly& b);
DPoly dp_mul_mono(const Ctx& ctx, const DPoly& a, const Monomial& m, const Rat& c);
DPoly dp_pow(const Ctx& ctx, const DPoly& a, unsigned e);

/// keep only monomials with the given cohomological degree.
DPoly dp_coh_component(const DPoly& a, int deg);

/// apply an algebra homomorphism given by images of generators.
template <typename F>
DPoly dp_substitute(const Ctx& target, const DPoly& a, F&& gen_image) {
    DPoly out;
    for (const auto& [m, c] : a.terms) {
        DPoly acc = dp_const(c);
        for (Gen g : m.gens) {
            acc = dp_mul(target, acc, gen_image(g));
            if (acc.is_zero()) break;
        }
        out += acc;
    }
    return out;
}

/**
 * Point normalization: the canonical representative modulo the ideal
 * generated by ch_1(pt).  For each marked point the last first-power flag
 * symbol ch_1(d_l) is eliminated via ch_1(d_l) -> -sum_{j<l} ch_1(d_j).
 * Functionals of moduli spaces kill this ideal, so pairing through the
 * normalized representative is well defined.
 */
DPoly point_normalize(const Ctx& ctx, const DPoly& a);

// ----------------------------------------------------------- tensor products

/// element of D_alpha (x) D_beta; Koszul signs are tracked at build time.
struct TensorPoly {
    std::map<std::pair<Monomial, Monomial>, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    void add_term(const Monomial& a, const Monomial& b, const Rat& c);
    TensorPoly& operator+=(const TensorPoly& o);
    TensorPoly& operator*=(const Rat& c);
};

/// (a (x) b) * (c (x) d) with the Koszul sign (-1)^{|b||c|}.
TensorPoly tp_mul(const Ctx& c1, const Ctx& c2, const TensorPoly& a, const TensorPoly& b);
TensorPoly tp_outer(const DPoly& a, const DPoly& b);

}  // namespace parab
