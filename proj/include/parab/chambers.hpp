#pragma once

/**
 * @file chambers.hpp
 * @brief Wall-and-chamber geometry of the weight simplex and the
 *        wall-crossing coefficients S, U*, U.
 *
 * Weight vectors for rank r live in the simplex
 *     S_{r,d} = {0 < c_1 < ... < c_r < 1}
 * (compactified by allowing equalities), with difference coordinates
 * lambda_k = c_{k+1} - c_k.  A wall is the locus where a proper sub-type
 * (J_1, d_1) has the same slope as its complement:
 *     sum_{(i,j) in J1 x J2} (c_j - c_i) = r_2 d_1 - r_1 d_2.
 * Only finitely many walls meet the simplex; chambers are the connected
 * components of the complement, and moduli spaces are constant on chambers.
 *
 * The second half of this header implements the combinatorial wall-crossing
 * coefficients: the sign S of an ordered decomposition relative to two
 * stability parameters, the enveloping-algebra coefficients U* (sums over
 * groupings of consecutive equal-slope blocks), and the Lie-level
 * coefficients U used to define classes at non-regular weights.
 */

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "parab/curve_types.hpp"

namespace parab {

// --------------------------------------------------------------------- walls

/// slope of a sub-type: mu_c(J, d') = (d' + sum_{j in J} c_j) / |J|.
Rat mu_of(const std::vector<Rat>& c, std::uint32_t J, long dJ);

struct Wall {
    int r = 0;
    std::uint32_t J1 = 0, J2 = 0;  // bitmasks over positions 1..r (bit j-1)
    long d1 = 0, d2 = 0;

    int r1() const { return __builtin_popcount(J1); }
    int r2() const { return __builtin_popcount(J2); }

    /// coefficients a_k of the wall equation sum_k a_k lambda_k = rhs.
    std::vector<long> lambda_coeffs() const;
    long rhs() const { return static_cast<long>(r2()) * d1 - static_cast<long>(r1()) * d2; }

    /// canonical id "({J1}|{J2}|d1|d2)".
    std::string id() const;

    bool operator==(const Wall& o) const {
        return r == o.r && J1 == o.J1 && J2 == o.J2 && d1 == o.d1 && d2 == o.d2;
    }
};

/**
 * Signed distance of a weight vector from the wall:
 *   phi(c) = sum_{(i,j) in J1 x J2}(c_j - c_i) - rhs = r1 r2 (mu(J2,d2) - mu(J1,d1)).
 * phi > 0 is the side where the J1 sub-type (the part containing weight
 * position 1) has the smaller slope; classify labels that side '-' and the
 * phi < 0 side '+'.  Crossing from phi < 0 to phi > 0 adds the bracket
 * correction [[M_{J1 part}], [M_{J2 part}]] to the moduli class.
 */
Rat wall_phi(const Wall& w, const std::vector<Rat>& cbar);

/// all walls meeting the open simplex S_{r,d}, deduplicated (1 in J1) and
/// sorted canonically (by J1 mask, then d1).
std::vector<Wall> enumerate_walls(int r, long d);

struct Classification {
    bool regular = false;
    std::string chamber_id;   // one of '+'/'-'/'0' per wall, canonical order
    std::vector<Wall> on;     // walls through the point (empty iff regular)
};

Classification classify(const std::vector<Rat>& cbar, int r, long d);

/// weakly increasing weight vector from (c_1, lambda_1..lambda_{r-1}).
std::vector<Rat> cbar_from_lambda(const Rat& c1, const std::vector<Rat>& lam);

/// the two full types of the distinguished decomposition at a point of the
/// wall: weights c_{J_i} with degree d_i.  Checks the point lies on the wall.
std::pair<ParabolicType, ParabolicType> wall_split_types(const Wall& w,
                                                         const std::vector<Rat>& cbar);

// ---------------------------------------------------------------------- paths

struct Crossing {
    Wall wall;
    int direction = 0;          // +1: crossing from phi < 0 to phi > 0, -1: reverse
    std::vector<Rat> before;    // regular representative just before the wall
    std::vector<Rat> after;     // regular representative just after
};

/**
 * A deterministic path of simple wall crossings from one regular weight
 * vector to another: a straight segment, retried with a fixed sequence of
 * rational endpoint perturbations (staying inside the endpoint chambers)
 * until every wall is crossed at a distinct interior time.  Returns the
 * crossings in order; empty if the endpoints share a chamber.
 */
std::vector<Crossing> simple_path(const std::vector<Rat>& from, const std::vector<Rat>& to,
                                  int r, long d);

// ---------------------------------------------------- wall-crossing constants

/**
 * The sign S((J_1..J_n),(d_1..d_n); c, c') in {-1, 0, +1}: nonzero iff each
 * consecutive pair satisfies exactly one of
 *  (a) mu_c(J_i,d_i) <= mu_c(J_{i+1},d_{i+1})  and
 *      mu_{c'}(prefix) > mu_{c'}(suffix),
 *  (b) the same with the inequalities flipped to (>, <=),
 * in which case S = (-1)^{#(a)}.
 */
int S_coeff(const std::vector<std::uint32_t>& J, const std::vector<long>& dv,
            const std::vector<Rat>& c, const std::vector<Rat>& cp);

/**
 * Enveloping-algebra coefficient U*: sum over groupings of the ordered tuple
 * into consecutive blocks with constant mu_c-slope, each grouping weighted by
 * prod_i 1/|block_i|! times S of the sequence of block sums.
 */
Rat U_star(const std::vector<std::uint32_t>& J, const std::vector<long>& dv,
           const std::vector<Rat>& c, const std::vector<Rat>& cp);

/**
 * Lie-level coefficient U: as U*, followed by a second grouping of the block
 * sums into consecutive clusters whose totals all have mu_{c'}-slope equal to
 * the full slope, weighted by (-1)^{l-1}/l and a product of S factors per
 * cluster.  The class at c' is sum over ordered tuples of
 *    (U/n) [[...[M_{J_1,d_1}, M_{J_2,d_2}], ...], M_{J_n,d_n}]
 * with the classes taken at the source weights c.
 */
Rat U_tilde(const std::vector<std::uint32_t>& J, const std::vector<long>& dv,
            const std::vector<Rat>& c, const std::vector<Rat>& cp);

struct BracketTerm {
    std::vector<std::uint32_t> J;  // ordered parts (masks over positions of c)
    std::vector<long> d;
    Rat coeff;                     // U/n, nonzero
};

/**
 * All ordered decompositions of ([r], d) with nonzero U relative to
 * (c, cp), with coefficients U/n.  Degrees are enumerated in a window
 * around slope equality wide enough for every nonzero S (verified by the
 * window-widening test in the test suite).  `window` <= 0 selects the
 * default half-width r + 2.
 */
std::vector<BracketTerm> joyce_terms(int r, long d, const std::vector<Rat>& c,
                                     const std::vector<Rat>& cp, long window = 0);

// ---------------------------------------------------------- Hecke on chambers

/**
 * The identification S_{r,d} -> S_{r,d'} induced by Hecke modifications, in
 * lambda coordinates: with lambda_r = 1 - lambda_1 - ... - lambda_{r-1}, the
 * cyclic rotation by i = (d - d') mod r, returning the first r-1 entries of
 * (lambda_{i+1}, ..., lambda_r, lambda_1, ..., lambda_i).  Sends walls to
 * walls and chambers to chambers.
 */
std::vector<Rat> hecke_chamber_map(int r, long d, long d_prime, const std::vector<Rat>& lambda);

}  // namespace parab
