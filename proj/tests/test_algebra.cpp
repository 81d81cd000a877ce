#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "parab/algebra.hpp"

using namespace parab;

namespace {

Ctx ctx_full(int genus, int rank, long degree, std::vector<Rat> weights) {
    Ctx c;
    c.curve = CurveModel{genus};
    c.type = make_full_type(rank, degree, std::move(weights));
    return c;
}

DPoly gp(const Ctx& c, GenKind kind, int k, int idx = 0, int p = 0) {
    return gen_dpoly(c, kind, k, idx, p);
}

}  // namespace

TEST_CASE("scalar relations") {
    auto c = ctx_full(2, 2, 5, {Rat(1, 3), Rat(2, 3)});
    CHECK(gp(c, GenKind::One, 0) == dp_zero());
    CHECK(gp(c, GenKind::One, 1) == dp_const(5));
    CHECK(gp(c, GenKind::Odd, 0, 1) == dp_zero());
    CHECK(gp(c, GenKind::Flag, 0, 2) == dp_const(1));
    // ch_0(pt) = rank; ch_0(e_j) = partial dimension f_j
    CHECK(ch_pt(c, 0) == dp_const(2));
    CHECK(ch_e(c, 0, 1) == dp_const(1));
    CHECK(ch_e_at(c, 0, Rat(1, 2)) == dp_const(1));
    CHECK(ch_e_at(c, 0, Rat(2, 3)) == dp_const(2));  // f counts weights <= t
}

TEST_CASE("supercommutative multiplication") {
    auto c = ctx_full(2, 2, 1, {Rat(1, 3), Rat(2, 3)});
    auto g1 = gp(c, GenKind::Odd, 1, 1);
    auto g2 = gp(c, GenKind::Odd, 1, 2);
    CHECK(dp_mul(c, g1, g1) == dp_zero());  // odd square
    // anticommutativity
    auto ab = dp_mul(c, g1, g2);
    auto ba = dp_mul(c, g2, g1);
    CHECK(ab == dp_scale(ba, -1));
    // unit
    auto x = gp(c, GenKind::Flag, 2, 1);
    CHECK(dp_mul(c, x, dp_const(1)) == x);
    // even generators commute with odd ones
    CHECK(dp_mul(c, x, g1) == dp_mul(c, g1, x));
    // associativity on a mixed product
    auto y = gp(c, GenKind::One, 2);
    auto lhs = dp_mul(c, dp_mul(c, g1, y), g2);
    auto rhs = dp_mul(c, g1, dp_mul(c, y, g2));
    CHECK(lhs == rhs);
}

TEST_CASE("degrees") {
    CHECK(gen_coh_degree(make_gen(GenKind::Flag, 2, 1)) == 4);
    CHECK(gen_chern_degree(make_gen(GenKind::Flag, 2, 1)) == 2);
    CHECK(gen_coh_degree(make_gen(GenKind::Odd, 1, 1)) == 1);
    CHECK(gen_chern_degree(make_gen(GenKind::Odd, 1, 1)) == 1);
    // ch_3(1) * ch_1(pt): coh (6-2) + 2 = 6, Chern 4
    Monomial m{{make_gen(GenKind::One, 3), make_gen(GenKind::Flag, 1, 1)}};
    CHECK(m.coh_degree() == 6);
    CHECK(m.chern_degree() == 4);
    CHECK(m.parity() == 0);
}

TEST_CASE("degree cap drops high monomials") {
    auto c = ctx_full(0, 2, 1, {Rat(1, 3), Rat(2, 3)});
    c.coh_cap = 4;
    auto x = gp(c, GenKind::Flag, 2, 1);  // degree 4
    CHECK(dp_mul(c, x, x) == dp_zero());  // degree 8 > cap
    CHECK(!dp_mul(c, x, dp_const(2)).is_zero());
}

TEST_CASE("substitution is an algebra homomorphism") {
    auto c = ctx_full(1, 2, 3, {Rat(1, 4), Rat(3, 4)});
    auto id = [&](Gen g) {
        DPoly img;
        img.add_term(Monomial{{g}}, 1);
        return img;
    };
    auto a = dp_mul(c, gp(c, GenKind::Odd, 1, 1), gp(c, GenKind::Flag, 1, 2));
    a += dp_scale(gp(c, GenKind::One, 2), Rat(3, 2));
    CHECK(dp_substitute(c, a, id) == a);
    // a substitution sending an odd generator to a sum stays multiplicative
    auto sub = [&](Gen g) -> DPoly {
        if (gen_kind(g) == GenKind::Odd && gen_idx(g) == 1) {
            DPoly img = gp(c, GenKind::Odd, gen_k(g), 1);
            img += gp(c, GenKind::Odd, gen_k(g), 2);
            return img;
        }
        DPoly img;
        img.add_term(Monomial{{g}}, 1);
        return img;
    };
    auto u = gp(c, GenKind::Odd, 1, 1);
    auto v = gp(c, GenKind::Odd, 2, 2);
    CHECK(dp_substitute(c, dp_mul(c, u, v), sub) ==
          dp_mul(c, dp_substitute(c, u, sub), dp_substitute(c, v, sub)));
}

TEST_CASE("point normalization kills ch_1(pt)") {
    auto c = ctx_full(1, 3, 2, {Rat(1, 5), Rat(2, 5), Rat(3, 5)});
    DPoly pt1 = ch_pt(c, 1);
    CHECK(point_normalize(c, pt1) == dp_zero());
    // idempotent, identity on polynomials avoiding ch_1(d_l)
    auto a = dp_mul(c, gp(c, GenKind::Flag, 1, 1), gp(c, GenKind::Flag, 2, 3));
    CHECK(point_normalize(c, point_normalize(c, a)) == point_normalize(c, a));
    auto b = gp(c, GenKind::Flag, 1, 2);
    CHECK(point_normalize(c, b) == b);
    // multiples of ch_1(pt) die even inside products
    auto prod = dp_mul(c, pt1, a);
    CHECK(point_normalize(c, prod) == dp_zero());
}

TEST_CASE("tensor product Koszul signs") {
    auto c = ctx_full(1, 2, 1, {Rat(1, 3), Rat(2, 3)});
    auto g1 = gp(c, GenKind::Odd, 1, 1);
    auto g2 = gp(c, GenKind::Odd, 1, 2);
    // (g1 (x) 1) * (1 (x) g2) = g1 (x) g2, no sign (|1 (x)| even)
    auto a = tp_outer(g1, dp_const(1));
    auto b = tp_outer(dp_const(1), g2);
    auto ab = tp_mul(c, c, a, b);
    CHECK(ab.terms.size() == 1);
    CHECK(ab.terms.begin()->second == 1);
    // (1 (x) g2) * (g1 (x) 1) = -(g1 (x) g2): g2 moves past g1
    auto ba = tp_mul(c, c, b, a);
    CHECK(ba.terms.size() == 1);
    CHECK(ba.terms.begin()->second == -1);
}

TEST_CASE("string forms") {
    auto c = ctx_full(1, 2, 1, {Rat(1, 3), Rat(2, 3)});
    auto a = dp_mul(c, gp(c, GenKind::One, 2), gp(c, GenKind::Flag, 1, 1));
    CHECK(a.to_string() == "1*ch2(one)*ch1(d1)");
    CHECK(dp_zero().to_string() == "0");
    CHECK(dp_const(Rat(-3, 2)).to_string() == "-3/2*1");
}
