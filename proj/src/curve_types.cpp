#include "parab/curve_types.hpp"

#include <map>

namespace parab {

ParabolicType make_type(int rank, long degree, const std::vector<std::pair<Rat, int>>& flags) {
    ParabolicType t;
    t.rank = rank;
    t.degree = degree;
    PunctureFlags p;
    for (const auto& [w, m] : flags) {
        Rat cw = w;
        cw.canonicalize();  // exact comparisons require reduced fractions
        p.steps.push_back({cw, m});
    }
    t.punctures.push_back(std::move(p));
    t.validate_cone();
    return t;
}

ParabolicType make_full_type(int rank, long degree, const std::vector<Rat>& weights) {
    std::vector<std::pair<Rat, int>> flags;
    for (const auto& w : weights) flags.emplace_back(w, 1);
    return make_type(rank, degree, flags);
}

Rat slope(const ParabolicType& a) {
    if (a.rank == 0) throw std::domain_error("slope: undefined for rank 0");
    Rat num = Rat(a.degree);
    for (const auto& p : a.punctures) num -= p.integral();
    Rat mu = num / Rat(a.rank);
    mu.canonicalize();
    return mu;
}

long euler_pairing(const CurveModel& C, const ParabolicType& a, const ParabolicType& b) {
    if (a.num_punctures() != b.num_punctures())
        throw std::invalid_argument("euler_pairing: marked-point mismatch");
    long chi = static_cast<long>(a.rank) * b.degree - static_cast<long>(b.rank) * a.degree +
               static_cast<long>(a.rank) * b.rank * (1 - C.genus);
    for (int p = 0; p < a.num_punctures(); ++p) {
        for (const auto& s : b.punctures[p].steps)
            chi -= static_cast<long>(a.punctures[p].f_at(s.weight)) * s.mult;
    }
    return chi;
}

long chi_sym(const CurveModel& C, const ParabolicType& a, const ParabolicType& b) {
    return euler_pairing(C, a, b) + euler_pairing(C, b, a);
}

ParabolicType hecke_on_type(const Rat& tau, const ParabolicType& a, int puncture) {
    if (tau < 0 || tau > 1) throw std::invalid_argument("hecke_on_type: tau must be in [0,1]");
    ParabolicType out = a;
    auto& flags = out.punctures.at(puncture);
    int wrapped = 0;
    std::vector<FlagStep> moved;
    for (const auto& s : flags.steps) {
        Rat c = s.weight + tau;
        if (c >= 1) {
            c -= 1;
            wrapped += s.mult;
        }
        c.canonicalize();
        if (c == 0) throw std::invalid_argument("hecke_on_type: weight lands on 0; choose generic tau");
        moved.push_back({c, s.mult});
    }
    std::sort(moved.begin(), moved.end(),
              [](const FlagStep& x, const FlagStep& y) { return x.weight < y.weight; });
    flags.steps = std::move(moved);
    if (!(tau == 1))  // tau = 1 moves every weight by a full turn: identity
        out.degree = a.degree - a.rank + wrapped;
    return out;
}

ParabolicType twist_type(const ParabolicType& a, long k) {
    ParabolicType out = a;
    out.degree += k * a.rank;
    return out;
}

long dim_moduli(const CurveModel& C, const ParabolicType& a) {
    if (a.rank < 1) throw std::invalid_argument("dim_moduli: rank must be >= 1");
    long dim = static_cast<long>(a.rank) * a.rank * (C.genus - 1) + 1;
    for (const auto& p : a.punctures) {
        int prev = 0;
        for (const auto& s : p.steps) {
            dim += static_cast<long>(prev) * s.mult;
            prev += s.mult;
        }
    }
    return dim;
}

std::vector<Rat> full_embedding(const ParabolicType& a, int puncture) {
    std::vector<Rat> cbar;
    for (const auto& s : a.punctures.at(puncture).steps)
        for (int i = 0; i < s.mult; ++i) cbar.push_back(s.weight);
    return cbar;
}

ParabolicType type_from_cbar(int rank, long degree, const std::vector<Rat>& cbar) {
    ParabolicType t;
    t.rank = rank;
    t.degree = degree;
    PunctureFlags p;
    for (const auto& w : cbar) {
        if (!p.steps.empty() && p.steps.back().weight == w)
            p.steps.back().mult += 1;
        else
            p.steps.push_back({w, 1});
    }
    t.punctures.push_back(std::move(p));
    t.validate_cone();
    return t;
}

ParabolicType add_types(const ParabolicType& a, const ParabolicType& b) {
    if (a.num_punctures() != b.num_punctures())
        throw std::invalid_argument("add_types: marked-point mismatch");
    ParabolicType out;
    out.rank = a.rank + b.rank;
    out.degree = a.degree + b.degree;
    for (int i = 0; i < a.num_punctures(); ++i) {
        std::map<Rat, int> merged;
        for (const auto& s : a.punctures[i].steps) merged[s.weight] += s.mult;
        for (const auto& s : b.punctures[i].steps) merged[s.weight] += s.mult;
        PunctureFlags p;
        for (const auto& [w, m] : merged) p.steps.push_back({w, m});
        out.punctures.push_back(std::move(p));
    }
    return out;
}

}  // namespace parab
