#pragma once

/**
 * @file vertex.hpp
 * @brief Class functionals and the residue Lie bracket on descendents.
 *
 * A moduli class is represented by the functional D -> integral of D, which
 * is supported in a single cohomological degree (twice the moduli dimension
 * for geometric classes) and factors through the point-normalized quotient.
 *
 * The bracket of two functionals pairs them against the two tensor slots of
 *   (-1)^{chi(a,b)} z^{chi_sym(a,b)} C_{z^-1} (e^{z R_-1} (x) id) Sigma*,
 * taking the z^{-1} coefficient; here C_{z^-1} is the Chern series of the
 * symmetrized pairing bundle Theta, whose Chern character is
 *   ch(Theta) = (2-2g) sum_{a,b} (-1)^b ch_a(pt) (x) ch_b(pt)
 *     - sum_t [ sum_{a,b} (-1)^b ch_a(e_1(t)) (x) ch_b(de_2(t))
 *             + sum_{a,b} (-1)^a ch_b(de_1(t)) (x) ch_a(e_2(t)) ],
 * with e_i(t) the filtration classes and de_i(t) the flag jumps, summed over
 * the weights of the opposite slot; the degree-0 part is the symmetrized
 * Euler pairing of the two types.
 *
 * Flag-forgetting morphisms are realized dually: pairing against the lift of
 * the integrand times the top Chern class of the relative tangent bundle
 *   Xi = sum over dropped weights t of Hom(e(t) - de(t), de(t)).
 */

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "parab/algebra.hpp"
#include "parab/operators.hpp"

namespace parab {

// ----------------------------------------------------------- Theta and Chern

/// ch of the symmetrized pairing bundle in D_alpha (x) D_beta, truncated to
/// total cohomological degree <= max_total_coh (and the per-slot caps).
TensorPoly theta_ch(const Ctx& c1, const Ctx& c2, int max_total_coh);

/// Chern classes from a Chern character: c = exp(sum_m (-1)^{m-1}(m-1)! ch_m)
/// where ch_m is the degree-2m component of `ch`.  Returns the full series
/// truncated at coh degree <= 2*max_i; c_0 = 1.
DPoly chern_from_ch(const Ctx& ctx, const DPoly& ch, int max_i);

/// tensor-algebra version; components are selected by total coh degree.
TensorPoly chern_from_ch_tensor(const Ctx& c1, const Ctx& c2, const TensorPoly& ch,
                                int max_i);

/// the degree-2i component of a tensor series.
TensorPoly tp_coh_component(const TensorPoly& a, int total_coh);

// ----------------------------------------------------------- class functionals

enum class Origin { Geometric, Bracket, WallDefined };

/**
 * A linear functional on descendents of a fixed type, supported in a single
 * cohomological degree.  `eval` is defined on point-normalized monomials of
 * the support degree; pairings normalize and degree-select first.  Values
 * are memoized per functional.
 */
struct ClassFunctional {
    Ctx ctx;                  // curve, type; coh_cap = support_degree
    int support_degree = 0;   // cohomological degree (2 * dim for geometric)
    Origin origin = Origin::Geometric;
    std::function<Rat(const Monomial&)> eval;
    std::shared_ptr<std::map<Monomial, Rat>> cache =
        std::make_shared<std::map<Monomial, Rat>>();
};

/// <u, D>: point-normalize, keep the support degree, evaluate (memoized).
Rat cf_pair(const ClassFunctional& u, const DPoly& D);

ClassFunctional cf_zero(const Ctx& ctx, int support_degree);
ClassFunctional cf_scale(const ClassFunctional& u, const Rat& s);
/// sum of functionals with identical flag shape and support degree.
ClassFunctional cf_add(const ClassFunctional& u, const ClassFunctional& v);

// ------------------------------------------------------------------- bracket

/**
 * The residue Lie bracket [u, v]: a functional over add_types(u, v) with
 * support degree supp(u) + supp(v) - 2 (chi_sym + 1).  The two types must
 * have disjoint weights at every marked point.
 */
ClassFunctional lie_bracket(const ClassFunctional& u, const ClassFunctional& v);

// ------------------------------------------------------------ flag forgetting

/**
 * Pushforward along the flag-bundle morphism that forgets the weights not
 * present in `partial` (a coarsening of u's type at every marked point):
 * <omega_map(u), D> = <u, c_top(Xi) * lift(D)>.  Support degree drops by
 * twice the rank of Xi.
 */
ClassFunctional omega_map(const ClassFunctional& u, const ParabolicType& partial);

// --------------------------------------------------------------- Hecke duals

/// <hecke_push(tau, u), D> = <u, hecke_dagger(tau, D)>; the type rotates by tau.
ClassFunctional hecke_push(const Rat& tau, const ClassFunctional& u, int puncture = 0);

/// dual of the O(p)-twist dagger: the type's degree increases by the rank.
ClassFunctional twist_push(const ClassFunctional& u);

// ------------------------------------------------------------------ Virasoro

/// <virasoro_dual(n, u), D> = <u, L_n D>; support degree drops by 2n.
ClassFunctional virasoro_dual(int n, const ClassFunctional& u);

/// check <u, L_wt0(D)> = 0 over all monomials D of the appropriate degree.
bool primary_test(const ClassFunctional& u);

// ------------------------------------------------------------------ utilities

/// all normal-form monomials of the exact cohomological degree (odd
/// generators squarefree; scalar generators excluded).
std::vector<Monomial> enumerate_monomials(const Ctx& ctx, int coh_degree);

}  // namespace parab
