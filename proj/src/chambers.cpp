#include "parab/chambers.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace parab {

Rat mu_of(const std::vector<Rat>& c, std::uint32_t J, long dJ) {
    int n = __builtin_popcount(J);
    if (n == 0) throw std::invalid_argument("mu_of: empty index set");
    Rat num(dJ);
    for (std::size_t j = 0; j < c.size(); ++j)
        if (J & (1u << j)) num += c[j];
    Rat mu = num / n;
    mu.canonicalize();
    return mu;
}

std::vector<long> Wall::lambda_coeffs() const {
    // a_k = #{i in J1, i <= k} * #{j in J2, j > k} - #{j in J2, j <= k} * #{i in J1, i > k}
    std::vector<long> a(r - 1, 0);
    for (int k = 1; k <= r - 1; ++k) {
        long i_le = 0, i_gt = 0, j_le = 0, j_gt = 0;
        for (int p = 1; p <= r; ++p) {
            bool in1 = J1 & (1u << (p - 1));
            bool in2 = J2 & (1u << (p - 1));
            if (in1) (p <= k ? i_le : i_gt)++;
            if (in2) (p <= k ? j_le : j_gt)++;
        }
        a[k - 1] = i_le * j_gt - j_le * i_gt;
    }
    return a;
}

namespace {

std::string mask_str(std::uint32_t m, int r) {
    std::string out = "{";
    bool first = true;
    for (int p = 1; p <= r; ++p) {
        if (m & (1u << (p - 1))) {
            if (!first) out += ",";
            first = false;
            out += std::to_string(p);
        }
    }
    return out + "}";
}

}  // namespace

std::string Wall::id() const {
    std::ostringstream os;
    os << "(" << mask_str(J1, r) << "|" << mask_str(J2, r) << "|" << d1 << "|" << d2 << ")";
    return os.str();
}

Rat wall_phi(const Wall& w, const std::vector<Rat>& cbar) {
    Rat s1 = 0, s2 = 0;
    for (std::size_t j = 0; j < cbar.size(); ++j) {
        if (w.J1 & (1u << j)) s1 += cbar[j];
        if (w.J2 & (1u << j)) s2 += cbar[j];
    }
    Rat phi = Rat(w.r1()) * s2 - Rat(w.r2()) * s1 - Rat(w.rhs());
    phi.canonicalize();
    return phi;
}

std::vector<Wall> enumerate_walls(int r, long d) {
    std::vector<Wall> out;
    if (r < 2) return out;
    const std::uint32_t full = (1u << r) - 1;
    for (std::uint32_t J1 = 1; J1 < full; ++J1) {
        if (!(J1 & 1u)) continue;  // canonical representative: 1 in J1
        std::uint32_t J2 = full & ~J1;
        int r1 = __builtin_popcount(J1), r2 = r - r1;
        // rhs = r d1 - r1 d ranges inside (-r1 r2, r1 r2) on the closed simplex
        for (long d1 = floor_div(static_cast<long>(r1) * d - static_cast<long>(r1) * r2, r);
             ; ++d1) {
            long rhs = r * d1 - static_cast<long>(r1) * d;
            if (rhs >= static_cast<long>(r1) * r2) break;
            if (rhs <= -static_cast<long>(r1) * r2) continue;
            Wall w{r, J1, J2, d1, d - d1};
            auto a = w.lambda_coeffs();
            long lo = 0, hi = 0;
            for (long ak : a) {
                lo = std::min(lo, ak);
                hi = std::max(hi, ak);
            }
            if (lo < rhs && rhs < hi) out.push_back(w);
        }
    }
    std::sort(out.begin(), out.end(), [](const Wall& x, const Wall& y) {
        return std::tie(x.J1, x.d1) < std::tie(y.J1, y.d1);
    });
    return out;
}

Classification classify(const std::vector<Rat>& cbar, int r, long d) {
    Classification out;
    out.regular = true;
    for (const Wall& w : enumerate_walls(r, d)) {
        Rat phi = wall_phi(w, cbar);
        if (phi < 0)
            out.chamber_id += '+';
        else if (phi > 0)
            out.chamber_id += '-';
        else {
            out.chamber_id += '0';
            out.regular = false;
            out.on.push_back(w);
        }
    }
    return out;
}

std::vector<Rat> cbar_from_lambda(const Rat& c1, const std::vector<Rat>& lam) {
    std::vector<Rat> c{c1};
    for (const Rat& l : lam) {
        Rat next = c.back() + l;
        next.canonicalize();
        c.push_back(next);
    }
    return c;
}

std::pair<ParabolicType, ParabolicType> wall_split_types(const Wall& w,
                                                         const std::vector<Rat>& cbar) {
    if (wall_phi(w, cbar) != 0)
        throw std::invalid_argument("wall_split_types: weights not on the wall");
    std::vector<Rat> c1, c2;
    for (std::size_t j = 0; j < cbar.size(); ++j) {
        if (w.J1 & (1u << j)) c1.push_back(cbar[j]);
        if (w.J2 & (1u << j)) c2.push_back(cbar[j]);
    }
    return {type_from_cbar(w.r1(), w.d1, c1), type_from_cbar(w.r2(), w.d2, c2)};
}

// ----------------------------------------------------------------------- path

namespace {

std::vector<Rat> segment_point(const std::vector<Rat>& a, const std::vector<Rat>& b,
                               const Rat& t) {
    std::vector<Rat> p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        p[i] = a[i] + t * (b[i] - a[i]);
        p[i].canonicalize();
    }
    return p;
}

/// deterministic small perturbation of a regular weight vector inside its
/// chamber; attempt index selects the direction, the magnitude is halved
/// until the chamber is preserved.
std::vector<Rat> perturb_in_chamber(const std::vector<Rat>& c, int r, long d, int attempt) {
    auto base = classify(c, r, d);
    for (int halving = 6; halving < 64; ++halving) {
        std::vector<Rat> p = c;
        Rat eps(1, 1);
        for (int h = 0; h < halving; ++h) eps /= 2;
        bool ok = true;
        for (std::size_t j = 0; j < p.size(); ++j) {
            long dir = ((attempt * 7 + static_cast<long>(j) * 3) % 11) + 1;
            p[j] += eps * Rat(dir, 11);
            p[j].canonicalize();
            if (j > 0 && !(p[j] > p[j - 1])) ok = false;
        }
        if (!ok || !(p.front() > 0) || !(p.back() < 1)) continue;
        auto cls = classify(p, r, d);
        if (cls.regular && cls.chamber_id == base.chamber_id) return p;
    }
    throw std::runtime_error("perturb_in_chamber: no valid perturbation found");
}

}  // namespace

std::vector<Crossing> simple_path(const std::vector<Rat>& from, const std::vector<Rat>& to,
                                  int r, long d) {
    auto cls_from = classify(from, r, d);
    auto cls_to = classify(to, r, d);
    if (!cls_from.regular || !cls_to.regular)
        throw std::invalid_argument("simple_path: endpoints must be regular");
    if (cls_from.chamber_id == cls_to.chamber_id) return {};
    auto walls = enumerate_walls(r, d);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Rat> a = from, b = to;
        if (attempt > 0) {
            a = perturb_in_chamber(from, r, d, attempt);
            b = perturb_in_chamber(to, r, d, attempt + 37);
        }
        // crossing times of all walls whose sign flips along [a, b]
        std::vector<std::pair<Rat, std::size_t>> times;
        bool ok = true;
        for (std::size_t wi = 0; wi < walls.size() && ok; ++wi) {
            Rat pa = wall_phi(walls[wi], a), pb = wall_phi(walls[wi], b);
            if ((pa > 0 && pb > 0) || (pa < 0 && pb < 0)) continue;
            Rat t = pa / (pa - pb);
            t.canonicalize();
            if (!(t > 0) || !(t < 1)) {
                ok = false;
                break;
            }
            times.emplace_back(t, wi);
        }
        if (!ok) continue;
        std::sort(times.begin(), times.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t i = 0; i + 1 < times.size(); ++i)
            if (times[i].first == times[i + 1].first) ok = false;
        if (!ok) continue;
        // representative points between consecutive crossings
        std::vector<Crossing> path;
        Rat prev(0);
        for (std::size_t i = 0; i < times.size() && ok; ++i) {
            Rat next = (i + 1 < times.size()) ? times[i + 1].first : Rat(1);
            Rat tb = (prev + times[i].first) / 2, ta = (times[i].first + next) / 2;
            Crossing cr;
            cr.wall = walls[times[i].second];
            cr.before = segment_point(a, b, tb);
            cr.after = segment_point(a, b, ta);
            if (!classify(cr.before, r, d).regular || !classify(cr.after, r, d).regular) {
                ok = false;
                break;
            }
            cr.direction = wall_phi(cr.wall, cr.before) < 0 ? +1 : -1;
            path.push_back(std::move(cr));
            prev = times[i].first;
        }
        if (ok) return path;
    }
    throw std::runtime_error("simple_path: failed to find a generic segment");
}

// --------------------------------------------------------------- coefficients

int S_coeff(const std::vector<std::uint32_t>& J, const std::vector<long>& dv,
            const std::vector<Rat>& c, const std::vector<Rat>& cp) {
    const std::size_t n = J.size();
    if (n != dv.size() || n == 0) throw std::invalid_argument("S_coeff: malformed input");
    int count_a = 0;
    std::uint32_t prefix = 0;
    long dpre = 0;
    std::uint32_t total = 0;
    long dtot = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total |= J[i];
        dtot += dv[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        prefix |= J[i];
        dpre += dv[i];
        Rat xi = mu_of(c, J[i], dv[i]);
        Rat xj = mu_of(c, J[i + 1], dv[i + 1]);
        Rat p = mu_of(cp, prefix, dpre);
        Rat q = mu_of(cp, total & ~prefix, dtot - dpre);
        bool cond_a = (xi <= xj) && (p > q);
        bool cond_b = (xi > xj) && (p <= q);
        if (cond_a)
            ++count_a;
        else if (!cond_b)
            return 0;
    }
    return (count_a % 2 == 0) ? 1 : -1;
}

namespace {

struct Block {
    std::uint32_t J;
    long d;
};

/// all groupings of parts[from..] into consecutive blocks of constant
/// mu_c-slope, invoking sink(blocks, weight = prod 1/k!).
template <typename F>
void equal_slope_groupings(const std::vector<std::uint32_t>& J, const std::vector<long>& dv,
                           const std::vector<Rat>& c, std::size_t from,
                           std::vector<Block>& acc, const Rat& weight, F&& sink) {
    const std::size_t n = J.size();
    if (from == n) {
        sink(acc, weight);
        return;
    }
    std::uint32_t mask = 0;
    long deg = 0;
    Rat slope0 = mu_of(c, J[from], dv[from]);
    for (std::size_t to = from; to < n; ++to) {
        if (to > from && mu_of(c, J[to], dv[to]) != slope0) break;
        mask |= J[to];
        deg += dv[to];
        acc.push_back({mask, deg});
        Rat w = weight / rat_factorial(static_cast<unsigned>(to - from + 1));
        equal_slope_groupings(J, dv, c, to + 1, acc, w, sink);
        acc.pop_back();
    }
}

}  // namespace

Rat U_star(const std::vector<std::uint32_t>& J, const std::vector<long>& dv,
           const std::vector<Rat>& c, const std::vector<Rat>& cp) {
    Rat total = 0;
    std::vector<Block> acc;
    equal_slope_groupings(J, dv, c, 0, acc, Rat(1), [&](const std::vector<Block>& blocks,
                                                        const Rat& weight) {
        std::vector<std::uint32_t> bj;
        std::vector<long> bd;
        for (const Block& b : blocks) {
            bj.push_back(b.J);
            bd.push_back(b.d);
        }
        total += weight * S_coeff(bj, bd, c, cp);
    });
    total.canonicalize();
    return total;
}

Rat U_tilde(const std::vector<std::uint32_t>& J, const std::vector<long>& dv,
            const std::vector<Rat>& c, const std::vector<Rat>& cp) {
    std::uint32_t full = 0;
    long dtot = 0;
    for (std::size_t i = 0; i < J.size(); ++i) {
        full |= J[i];
        dtot += dv[i];
    }
    const Rat target_slope = mu_of(cp, full, dtot);
    Rat total = 0;
    std::vector<Block> acc;
    equal_slope_groupings(J, dv, c, 0, acc, Rat(1), [&](const std::vector<Block>& blocks,
                                                        const Rat& weight) {
        // second grouping: consecutive clusters whose totals all have
        // mu_{c'}-slope equal to the slope of the whole
        const std::size_t m = blocks.size();
        // enumerate compositions of m via bitmask of cut positions
        for (std::uint32_t cuts = 0; cuts < (1u << (m - 1)); ++cuts) {
            Rat prod = 1;
            int l = 0;
            std::size_t start = 0;
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i) {
                bool cut_here = (i + 1 == m) || (cuts & (1u << i));
                if (!cut_here) continue;
                ++l;
                std::uint32_t cm = 0;
                long cd = 0;
                std::vector<std::uint32_t> bj;
                std::vector<long> bd;
                for (std::size_t k = start; k <= i; ++k) {
                    cm |= blocks[k].J;
                    cd += blocks[k].d;
                    bj.push_back(blocks[k].J);
                    bd.push_back(blocks[k].d);
                }
                if (mu_of(cp, cm, cd) != target_slope) {
                    ok = false;
                    break;
                }
                prod *= S_coeff(bj, bd, c, cp);
                start = i + 1;
            }
            if (!ok || prod == 0) continue;
            Rat sign = (l % 2 == 1) ? Rat(1) : Rat(-1);
            total += weight * sign * prod / l;
        }
    });
    total.canonicalize();
    return total;
}

namespace {

void enumerate_ordered_partitions(std::uint32_t remaining,
                                  std::vector<std::uint32_t>& acc,
                                  std::vector<std::vector<std::uint32_t>>& out) {
    if (remaining == 0) {
        out.push_back(acc);
        return;
    }
    // iterate over nonempty submasks of remaining as the next part
    for (std::uint32_t s = remaining; s; s = (s - 1) & remaining) {
        acc.push_back(s);
        enumerate_ordered_partitions(remaining & ~s, acc, out);
        acc.pop_back();
    }
}

}  // namespace

std::vector<BracketTerm> joyce_terms(int r, long d, const std::vector<Rat>& c,
                                     const std::vector<Rat>& cp, long window) {
    const std::uint32_t full = (1u << r) - 1;
    std::vector<std::vector<std::uint32_t>> partitions;
    std::vector<std::uint32_t> acc;
    enumerate_ordered_partitions(full, acc, partitions);
    const Rat mu_total = mu_of(cp, full, d);
    std::vector<BracketTerm> out;
    const long W = window > 0 ? window : r + 2;  // widening adds nothing (tested)
    for (const auto& parts : partitions) {
        const std::size_t n = parts.size();
        // degree windows centered on slope equality at cp
        std::vector<std::vector<long>> choices(n);
        for (std::size_t i = 0; i < n; ++i) {
            int ri = __builtin_popcount(parts[i]);
            Rat center = mu_total * ri;
            for (std::size_t j = 0; j < cp.size(); ++j)
                if (parts[i] & (1u << j)) center -= cp[j];
            // nearest integer to center
            Rat fl = center;
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), fl.get_num().get_mpz_t(), fl.get_den().get_mpz_t());
            long base = q.get_si();
            for (long dd = base - W; dd <= base + W + 1; ++dd) choices[i].push_back(dd);
        }
        std::vector<long> dv(n, 0);
        std::function<void(std::size_t, long)> rec = [&](std::size_t i, long used) {
            if (i + 1 == n) {
                long last = d - used;
                if (std::find(choices[i].begin(), choices[i].end(), last) == choices[i].end())
                    return;
                dv[i] = last;
                Rat u = U_tilde(parts, dv, c, cp);
                if (u != 0) out.push_back({parts, dv, u / static_cast<long>(n)});
                return;
            }
            for (long dd : choices[i]) {
                dv[i] = dd;
                rec(i + 1, used + dd);
            }
        };
        rec(0, 0);
    }
    return out;
}

std::vector<Rat> hecke_chamber_map(int r, long d, long d_prime, const std::vector<Rat>& lambda) {
    if (static_cast<int>(lambda.size()) != r - 1)
        throw std::invalid_argument("hecke_chamber_map: need r-1 gap coordinates");
    std::vector<Rat> ext = lambda;
    Rat last(1);
    for (const Rat& l : lambda) last -= l;
    last.canonicalize();
    ext.push_back(last);
    long i = pos_mod(d - d_prime, r);
    std::vector<Rat> out;
    for (int k = 0; k < r - 1; ++k) out.push_back(ext[(i + k) % r]);
    return out;
}

}  // namespace parab
