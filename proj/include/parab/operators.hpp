#pragma once

/**
 * @file operators.hpp
 * @brief Operators on the descendent algebra.
 *
 * - the lowering/raising derivations R_n (R_{-1} lowers every ch index);
 * - Virasoro operators L_n = R_n + T_n and the weight-zero combination
 *   L_wt0 = sum_{n>=-1} ((-1)^n/(n+1)!) L_n R_{-1}^{n+1};
 * - the projection onto the kernel of R_{-1} (canonical lift of the
 *   quotient by the ideal (ch_1(pt)));
 * - the symmetric-group action permuting flag quotients d_j;
 * - Hecke substitutions: the dagger of the weight-rotation modification,
 *   the dagger of tensoring by O(p), and the degree-conjugation map H used
 *   by the translation (affine) symmetries, with its inverse;
 * - weight-set refinement (lifting descendents of a partial flag to a full
 *   flag) and the coproduct split across a two-term type decomposition.
 */

#include <vector>

#include "parab/algebra.hpp"

namespace parab {

// ------------------------------------------------------------- derivations

/// R_n, n >= -1: derivation with R_n(ch_k(g)) = (prod_{j=0}^{n}(m+j)) ch_{k+n}(g),
/// where m = k - 1 + p(g) and p is the holomorphic Hodge degree of g
/// (p = 0 for the unit and antiholomorphic odd classes, p = 1 for
/// holomorphic odd classes and flag classes).
DPoly R_op(const Ctx& ctx, int n, const DPoly& a);

/// The multiplication operator T_n as an element of the algebra:
///   T_n = sum_{a+b=n} a! b! [ (1-g) ch_a(pt) ch_b(pt)
///                             + sum_{p} sum_{j=1}^{l_p - 1} ch_a(e_j) ch_b(d_{j+1}) ].
/// The flag part pairs each partial flag class with the forward jump across
/// it (the j = 0 and j = l terms vanish: e_0 = 0 and e_l already equals the
/// full fiber).  In particular T_{-1} = 0.
DPoly T_poly(const Ctx& ctx, int n);

/// L_n = R_n + (T_n *)
DPoly L_op(const Ctx& ctx, int n, const DPoly& a);

/// L_wt0 = sum_{n >= -1} ((-1)^n / (n+1)!) L_n R_{-1}^{n+1}; the sum is
/// finite because R_{-1} is nilpotent on any fixed element.
DPoly L_wt0(const Ctx& ctx, const DPoly& a);

/// canonical projection onto ker R_{-1} along the ideal (ch_1(pt)):
///   Phi = sum_n (-ch_1(pt))^n / (n! r^n) R_{-1}^n.
DPoly wt0_project(const Ctx& ctx, const DPoly& a);

// ------------------------------------------------------------- Weyl action

/// permute the flag quotients at one marked point: ch_k(d_j) -> ch_k(d_{perm[j]}).
/// perm is 1-based of size levels+1 (perm[0] unused).  Requires a full flag.
DPoly weyl_act(const Ctx& ctx, const std::vector<int>& perm, const DPoly& a, int puncture = 0);

// ---------------------------------------------------------- Hecke operators

/// dagger of tensoring with O(p): maps descendents of type (r, d+r, f) to
/// descendents of type `target.type` = (r, d, f): ch_k(1) -> ch_k(1) + ch_{k-1}(pt).
DPoly twist_dagger(const Ctx& target, const DPoly& a);

/**
 * dagger of the Hecke weight-rotation by tau at `puncture`: maps
 * descendents over hecke_on_type(tau, target.type) to descendents over
 * target.type.  Flag quotients relabel cyclically (the wrapped block of
 * levels returns to the top) and
 *   ch_k(1) -> ch_k(1) - ch_{k-1}(e_{j0}),  j0 = #levels with weight < 1-tau.
 */
DPoly hecke_dagger(const Ctx& target, const Rat& tau, const DPoly& a, int puncture = 0);

/**
 * Degree conjugation for a full single-puncture flag of rank r >= 3:
 * the dagger of (twist by O(p)) o (rotation wrapping the top two weights),
 * an isomorphism  D over (r, d)  ->  D over (r, d-2):
 *   ch_k(d_j)    -> ch_k(d_{pi(j)}),  pi(j) = j + r - 2 (mod r),
 *   ch_{k+1}(1)  -> ch_{k+1}(1) + ch_k(d_{r-1}) + ch_k(d_r).
 * `target` is the degree d-2 context.  conj_H_inv is its inverse
 * (`target` again receives the image, at degree d+2).
 */
DPoly conj_H(const Ctx& target, const DPoly& a);
DPoly conj_H_inv(const Ctx& target, const DPoly& a);

/// Two-puncture rank-2 version: D over (2,d) -> D over (2,d-2),
/// ch_k(d_i^j) -> ch_k(d_{3-i}^j) at both punctures,
/// ch_{k+1}(1) -> ch_{k+1}(1) + ch_k(d_2^1) + ch_k(d_2^2);  self-conjugate
/// inverse with minus signs on the first flag lines.
DPoly conj_H2(const Ctx& target, const DPoly& a);
DPoly conj_H2_inv(const Ctx& target, const DPoly& a);

// ----------------------------------------------------- refinement and split

/**
 * Lift descendents over a partial flag to a refining (e.g. full) flag:
 * the i-th quotient of the partial flag is the sum of the block of
 * successive quotients of the refined flag with the same cumulative
 * dimensions, so ch_k(d'_i) -> sum_{j in block i} ch_k(d_j).
 * Works per marked point; cumulative multiplicities must match.
 */
DPoly lift_to_refinement(const Ctx& refined, const Ctx& partial, const DPoly& a);

/**
 * Coproduct split of descendents across a decomposition of the type into
 * two parts: side_of_level[p][j] in {1,2} assigns each flag level (1-based
 * j, per marked point p) to a side; flag quotients go to their side with
 * indices renumbered in weight order, and ch_k(1), ch_k(g_i) split as
 * g (x) 1 + 1 (x) g.  Koszul signs are tracked.
 */
TensorPoly wall_split(const Ctx& ctx, const Ctx& ctx1, const Ctx& ctx2,
                      const std::vector<std::vector<int>>& side_of_level, const DPoly& a);

}  // namespace parab
