#pragma once

/**
 * @file curve_types.hpp
 * @brief The curve model and weighted topological types of parabolic bundles.
 *
 * A parabolic bundle on a genus-g curve is a vector bundle V together with a
 * weighted flag in the fiber V|_p at each marked point.  Its topological type
 * is (rank, degree, f) where f is the weighted dimension function of the
 * flag: a step function on [0,1] with f(0)=0, f(1)=rank, jumping by the flag
 * multiplicities at the weights.  This header models:
 *
 *   - CurveModel: genus and the symplectic basis of H^1 of the curve;
 *   - ParabolicType: (r, d, flag data at one or more marked points);
 *   - slope, Euler pairing, moduli dimension, Hecke modification on types.
 *
 * Slope convention used throughout the project:
 *     mu(r, d, f) = (d - sum_p int_0^1 f_p(t) dt) / r
 *                 = (d + sum weights*multiplicities)/r - (#points),
 * and f(t) counts weights <= t (so f jumps *at* its weights).
 */

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "parab/rational.hpp"

namespace parab {

/**
 * Genus-g curve with the standard symplectic basis of H^1.
 *
 * Odd classes g_1..g_{2g} pair as  int_C g_i g_{g+i} = +1 = -int_C g_{g+i} g_i
 * (1 <= i <= g); all other products of basis odd classes vanish.  Even
 * classes are the unit and the point class pt with int_C pt = 1.
 * For the Hodge-type grading, g_1..g_g are (1,0)-classes and g_{g+1}..g_{2g}
 * are (0,1)-classes.
 */
struct CurveModel {
    int genus = 0;

    int odd_basis_size() const { return 2 * genus; }

    /// int_C g_i g_j in units of the point class: 0 or +-1.
    int odd_pairing(int i, int j) const {
        if (i + genus == j) return +1;
        if (j + genus == i) return -1;
        return 0;
    }

    /// Hodge p-degree of odd class g_i (1 if holomorphic, else 0).
    int hodge_p_odd(int i) const { return i <= genus ? 1 : 0; }
};

/// One step of a weighted flag: `mult` new directions appearing at `weight`.
struct FlagStep {
    Rat weight;  // in (0,1); strictly increasing along the flag
    int mult = 0;

    bool operator==(const FlagStep& o) const {
        return mult == o.mult && weight == o.weight;
    }
};

/// The weighted flag at a single marked point. steps may be empty only for
/// rank-0 formal types; otherwise multiplicities sum to the rank.
struct PunctureFlags {
    std::vector<FlagStep> steps;

    int levels() const { return static_cast<int>(steps.size()); }

    /// f(t) = number of weights <= t, counted with multiplicity.
    int f_at(const Rat& t) const {
        int acc = 0;
        for (const auto& s : steps)
            if (s.weight <= t) acc += s.mult;
        return acc;
    }

    /// jump of f at t (0 if t is not a weight).
    int jump_at(const Rat& t) const {
        for (const auto& s : steps)
            if (s.weight == t) return s.mult;
        return 0;
    }

    /// partial dimension f_j = f(c_j) for level j (1-based); f_0 = 0.
    int f_level(int j) const {
        int acc = 0;
        for (int i = 0; i < j; ++i) acc += steps[i].mult;
        return acc;
    }

    /// exact integral of f over [0,1]:  sum m_j (1 - c_j).
    Rat integral() const {
        Rat acc = 0;
        for (const auto& s : steps) acc += Rat(s.mult) * (Rat(1) - s.weight);
        acc.canonicalize();
        return acc;
    }

    bool operator==(const PunctureFlags& o) const { return steps == o.steps; }
};

/**
 * Topological type of a parabolic bundle: rank, degree, and the weighted
 * flags at each marked point.  Elements of the positive cone have rank > 0
 * and positive multiplicities; the formal group closure (differences of
 * types, used by bilinearity checks) allows arbitrary integers.
 */
struct ParabolicType {
    int rank = 0;
    long degree = 0;
    std::vector<PunctureFlags> punctures;

    int num_punctures() const { return static_cast<int>(punctures.size()); }

    void validate_cone() const {
        if (rank <= 0) throw std::invalid_argument("type: rank must be positive");
        for (const auto& p : punctures) {
            int total = 0;
            Rat prev = 0;
            for (const auto& s : p.steps) {
                if (s.mult <= 0) throw std::invalid_argument("type: flag multiplicity must be positive");
                if (!(s.weight > prev) || !(s.weight < 1))
                    throw std::invalid_argument("type: weights must be strictly increasing in (0,1)");
                prev = s.weight;
                total += s.mult;
            }
            if (total != rank) throw std::invalid_argument("type: flag multiplicities must sum to the rank");
        }
    }

    bool is_full() const {
        for (const auto& p : punctures)
            for (const auto& s : p.steps)
                if (s.mult != 1) return false;
        return true;
    }

    bool operator==(const ParabolicType& o) const {
        return rank == o.rank && degree == o.degree && punctures == o.punctures;
    }

    std::string to_string() const {
        std::string out = "(" + std::to_string(rank) + "," + std::to_string(degree);
        for (const auto& p : punctures) {
            out += ";";
            for (std::size_t i = 0; i < p.steps.size(); ++i) {
                if (i) out += ",";
                out += rat_str(p.steps[i].weight) + ":" + std::to_string(p.steps[i].mult);
            }
        }
        out += ")";
        return out;
    }
};

/// Convenience constructor for a single-puncture type from (weight, mult) pairs.
ParabolicType make_type(int rank, long degree, const std::vector<std::pair<Rat, int>>& flags);

/// Single-puncture full type (all multiplicities 1) from a strictly
/// increasing weight vector of length `rank`.
ParabolicType make_full_type(int rank, long degree, const std::vector<Rat>& weights);

/// slope(alpha) = (d - sum_p int f_p) / r.  Throws on rank 0.
Rat slope(const ParabolicType& a);

/**
 * Euler pairing of parabolic types:
 *   chi_P(a, b) = chi_C(a, b) - sum_p sum_t f_a(t) * jump_b(t)
 * with the curve Riemann-Roch part chi_C = r d' - r' d + r r' (1-g).
 * Both types must carry the same number of marked points.
 */
long euler_pairing(const CurveModel& C, const ParabolicType& a, const ParabolicType& b);

/// chi_sym(a,b) = chi_P(a,b) + chi_P(b,a).
long chi_sym(const CurveModel& C, const ParabolicType& a, const ParabolicType& b);

/**
 * Hecke modification of a type at marked point `puncture`, parameter
 * tau in [0,1]: every weight moves to c + tau (mod 1), keeping its
 * multiplicity; if w weights (with multiplicity) wrap around past 1,
 * the degree becomes d - r + w.  tau = 1 is the identity; tau = 0 is
 * tensoring by O(-p).  Throws if some weight would land on 0.
 */
ParabolicType hecke_on_type(const Rat& tau, const ParabolicType& a, int puncture = 0);

/// Tensor with O(k p): degree shifts by k*r, flags unchanged.
ParabolicType twist_type(const ParabolicType& a, long k = 1);

/// dim of the moduli space: r^2(g-1) + 1 + sum_p sum_i f_{i-1} (f_i - f_{i-1}).
long dim_moduli(const CurveModel& C, const ParabolicType& a);

/**
 * The point of the closed weight simplex corresponding to a (possibly
 * partial) single-puncture type: each weight repeated by its multiplicity,
 * giving a weakly increasing vector of length r.
 */
std::vector<Rat> full_embedding(const ParabolicType& a, int puncture = 0);

/// Inverse of full_embedding: recover the flag data from a weakly
/// increasing weight vector (consecutive equal entries merge into one step).
ParabolicType type_from_cbar(int rank, long degree, const std::vector<Rat>& cbar);

/// Formal sum of types (merges flag steps at equal weights); used by
/// bilinearity checks and wall decompositions.
ParabolicType add_types(const ParabolicType& a, const ParabolicType& b);

}  // namespace parab
