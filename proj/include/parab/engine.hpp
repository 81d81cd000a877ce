#pragma once

/**
 * @file engine.hpp
 * @brief Evaluation of moduli classes: geometric base cases, wall-crossing
 *        recursion, and reference-chamber solves.
 *
 * The rank-1 base case is the Jacobian: descendents realize in the exterior
 * algebra on the odd degree-1 classes delta_1..delta_2g with
 *   ch_2(1) -> -theta,  theta = sum_i delta_i delta_{i+g},
 *   ch_1(g_i) -> -delta_{i+g} (i <= g),  +delta_{i-g} (i > g),
 * all higher Chern characters and all flag symbols realizing to zero (the
 * universal bundle is normalized along the marked points), and the integral
 * normalized by int theta^g = g!.
 *
 * Higher ranks reduce to rank 1:
 *   - degree is Hecke-normalized to 1 (weight rotations and O(p)-twists);
 *   - regular full-flag classes are reached from a reference chamber by
 *     simple wall crossings, each adding a Lie bracket of lower-rank classes;
 *   - the reference-chamber functional (the chamber adjacent to the
 *     zero-weight vertex of the simplex) is solved through its symmetries:
 *     the flag-quotient line bundles make ch_k(d_i) = t_i^k / k! with
 *     t_i = ch_1(d_i), the functional is anti-invariant under permuting the
 *     t_i, and conjugating the permutation action by the degree-shift
 *     isomorphism H produces translation substitutions
 *         ch_{k+1}(1) -> ch_{k+1}(1) + ch_k(d_1) - ch_k(d_i)
 *     whose failure to preserve the functional is an explicitly computable
 *     wall-crossing correction.  Rewriting along these relations terminates
 *     by induction on the filtration by sum of (k-1) over ch_k(1) factors.
 *   - rank 2 (where no interior walls exist in the one-puncture simplex)
 *     gains the needed translation symmetries from a second marked point;
 *     one-puncture integrals are recovered through the projective-line
 *     bundle forgetting the second flag.
 *
 * Partial flags are handled by the flag-bundle pushforward Omega, and
 * non-regular (on-wall) weights by the combinatorial U coefficients.
 */

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "parab/chambers.hpp"
#include "parab/vertex.hpp"

namespace parab {

/// the geometric class of the rank-1 moduli space (the Jacobian); the type
/// must have rank 1 (any number of marked points).  Support degree 2g.
ClassFunctional jacobian_class(const CurveModel& curve, const ParabolicType& type);

// ------------------------------------------------------------------ memo store

/**
 * Shared registry of computed classes and their value tables, keyed by
 * canonical strings (genus, rank, degree, chamber id -- not raw weights, so
 * classes that agree after forgetting weights share entries).  Value tables
 * persist to a versioned JSON file and round-trip exactly.
 */
struct MemoStore {
    std::map<std::string, ClassFunctional> classes;
    std::map<std::string, std::shared_ptr<std::map<Monomial, Rat>>> tables;

    /// get-or-create the named value table.
    std::shared_ptr<std::map<Monomial, Rat>> table(const std::string& key);

    void load(const std::string& path);        // merge entries from disk
    void save(const std::string& path) const;  // write all tables

    /// process-wide store used when callers pass none.
    static MemoStore& process_default();
};

// ------------------------------------------------------------- chamber classes

/// weights of the reference chamber of S_{r,1}: (eps, 2 eps, ..., r eps)
/// with eps small enough that the point is regular in every wall inequality.
std::vector<Rat> reference_chamber_weights(int rank);

/// the full-flag class of the reference chamber of S_{r,1} (single puncture);
/// rank 1 is the Jacobian, rank 2 goes through the two-puncture solve, and
/// rank >= 3 through the translation rewriting.
ClassFunctional reference_chamber_class(const CurveModel& curve, int rank,
                                        MemoStore* store = nullptr);

/// full-flag class at a regular weight vector, any degree: Hecke-normalizes
/// the degree to 1, then wall-crosses from the reference chamber.
ClassFunctional full_class_regular(const CurveModel& curve, int rank, long degree,
                                   const std::vector<Rat>& cbar, MemoStore* store = nullptr);

/// the dispatcher: rank 1 -> Jacobian; full regular -> full_class_regular;
/// full on a wall -> U-coefficient bracket sum at a nearby regular weight;
/// partial -> the same at a refining full flag, pushed down by omega_map and
/// divided by the product of multiplicity factorials.
ClassFunctional moduli_class(const CurveModel& curve, const ParabolicType& type,
                             MemoStore* store = nullptr);

/// <moduli_class(type), D>
Rat integrate(const CurveModel& curve, const ParabolicType& type, const DPoly& D,
              MemoStore* store = nullptr);

// ------------------------------------------------------------ reference solves

/// integral of D over the reference-chamber full-flag moduli of (r, 1) for
/// r >= 3, via the translation rewriting.  D is over the reference type.
Rat affine_weyl_solve(const CurveModel& curve, int rank, const DPoly& D,
                      MemoStore* store = nullptr);

/// the chamber with lambda_1 + lambda_2 < 1 of the two-puncture rank-2
/// degree-1 space (internal weight choices; see two_puncture_type).
ClassFunctional two_puncture_class(const CurveModel& curve, MemoStore* store = nullptr);

/// the type over which two_puncture_class lives.
ParabolicType two_puncture_type();

/// f_A - f_B across the single wall of the two-puncture weight square:
/// the bracket [[Jac(1,0; top weights)], [Jac(1,1; bottom weights)]].
ClassFunctional two_puncture_wall_difference(const CurveModel& curve);

/// integral of D over the two-puncture chamber-A moduli space.
Rat rank2_twopoint_solve(const CurveModel& curve, const DPoly& D,
                         MemoStore* store = nullptr);

// ------------------------------------------------------------- residue oracle

/**
 * Independent full-flag-bundle integral over a point base:
 *   int_{Fl(E)} F(t_1..t_r)
 *     = [z_1^{-1}..z_r^{-1}]  F(z) prod_{i<j}(z_i - z_j) prod_i shat(z_i),
 * with shat(z) = z^{-r} sum_k s_k(E) z^{-k} built from the Segre classes of
 * E (trivial E: segre = {1}), and t_i the first Chern class of the i-th
 * successive quotient line F_i / F_{i-1} of the tautological flag.
 * F is given as a list of (exponent vector, coefficient) pairs.
 */
Rat flag_residue_oracle(int rank, const std::vector<std::pair<std::vector<int>, Rat>>& F,
                        const std::vector<Rat>& segre);

}  // namespace parab
