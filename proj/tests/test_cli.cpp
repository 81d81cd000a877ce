#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "parab/engine.hpp"
#include "parab/exprparse.hpp"

using namespace parab;

namespace {

Ctx ctx_full(int genus, int rank, long degree, const std::vector<Rat>& weights, int cap = 12) {
    CurveModel C{genus};
    return Ctx{C, make_full_type(rank, degree, weights), cap};
}

/// canonical form of a source string: parse, then print
std::string canon(const std::string& src) { return print_expr(parse_expr(src)); }

/// random expression source text drawn from the grammar
struct ExprGen {
    std::mt19937 rng;
    explicit ExprGen(unsigned seed) : rng(seed) {}

    int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

    std::string atom() {
        switch (pick(5)) {
            case 0: return "ch" + std::to_string(pick(4)) + "(one)";
            case 1: return "ch" + std::to_string(pick(4)) + "(pt)";
            case 2: return "ch" + std::to_string(pick(3)) + "(g" + std::to_string(1 + pick(2)) + ")";
            case 3: return "ch" + std::to_string(pick(3)) + "(e" + std::to_string(1 + pick(2)) + ")";
            default: return "ch" + std::to_string(pick(3)) + "(d" + std::to_string(1 + pick(2)) + ")";
        }
    }

    std::string factor(int depth) {
        std::string out;
        if (depth > 0 && pick(4) == 0)
            out = "(" + expr(depth - 1) + ")";
        else if (pick(5) == 0)
            out = std::to_string(1 + pick(7)) + (pick(2) ? "/" + std::to_string(1 + pick(5)) : "");
        else
            out = atom();
        // powers attach to atoms and parenthesized groups, not literals
        if (out.back() == ')' && pick(3) == 0) out += "^" + std::to_string(1 + pick(3));
        return out;
    }

    std::string term(int depth) {
        std::string out = factor(depth);
        int extra = pick(3);
        for (int i = 0; i < extra; ++i) out += " * " + factor(depth);
        return out;
    }

    std::string expr(int depth) {
        std::string out = pick(4) == 0 ? "-" : "";
        out += term(depth);
        int extra = pick(3);
        for (int i = 0; i < extra; ++i) out += (pick(2) ? " + " : " - ") + term(depth);
        return out;
    }
};

}  // namespace

TEST_CASE("parser round-trip on a generated corpus") {
    ExprGen gen(20240824);
    for (int i = 0; i < 100; ++i) {
        std::string src = gen.expr(2);
        CAPTURE(src);
        std::string once = canon(src);
        CHECK(canon(once) == once);  // printing is a normal form
    }
}

TEST_CASE("parser shapes and whitespace insensitivity") {
    ExprPtr e = parse_expr("ch2(pt)^3 * ch1(g1)");
    REQUIRE(e->node == ExprNode::Product);
    REQUIRE(e->kids.size() == 2);
    CHECK(e->kids[0]->node == ExprNode::Power);
    CHECK(e->kids[0]->exponent == 3);
    CHECK(e->kids[0]->kids[0]->sym == AtomSym::Pt);
    CHECK(e->kids[1]->node == ExprNode::Atom);
    CHECK(e->kids[1]->sym == AtomSym::G);
    CHECK(e->kids[1]->index == 1);

    CHECK(canon("ch2(one)^2-1/2*ch1(d1)*ch1(d2)") ==
          canon(" ch2( one )^2  -  1/2 * ch1(d1) * ch1(d2) "));
    CHECK(canon("ch1(d1^2)") == "ch1(d1^2)");  // marked-point selector survives
    CHECK(canon("-(ch2(one))") == "-ch2(one)");
}

TEST_CASE("parser reports positioned errors") {
    auto col_of = [](const std::string& src) {
        try {
            parse_expr(src);
        } catch (const ExprError& err) {
            return err.column;
        }
        return -1;
    };
    CHECK(col_of("ch2(") == 5);        // missing symbol
    CHECK(col_of("ch2(x)") == 5);      // unknown symbol
    CHECK(col_of("1/0") == 4);         // zero denominator (reported past the literal)
    CHECK(col_of("ch2(one)) ") == 9);  // trailing input
    CHECK(col_of("") == 1);            // empty expression
    CHECK(col_of("ch2(one) + ") == 12);
    CHECK_THROWS_AS(parse_expr("ch2(d0)"), ExprError);  // 1-based indices
}

TEST_CASE("evaluation matches direct construction and validates ranges") {
    Ctx c = ctx_full(1, 2, 1, {Rat(1, 8), Rat(3, 8)});
    DPoly direct = dp_mul(c, dp_pow(c, gen_dpoly(c, GenKind::One, 2), 2),
                          dp_scale(gen_dpoly(c, GenKind::Flag, 1, 1), Rat(-1, 2)));
    CHECK(expr_to_dpoly(c, parse_expr("ch2(one)^2 * ch1(d1) * (0 - 1/2)")) == direct);

    // odd square collapses to zero in the supercommutative algebra
    CHECK(expr_to_dpoly(c, parse_expr("ch1(g1)^2")).is_zero());
    // ch_k(pt) expands to the sum of the flag lines
    CHECK(expr_to_dpoly(c, parse_expr("ch1(pt) - ch1(d1) - ch1(d2)")).is_zero());

    Ctx c3 = ctx_full(1, 3, 1, {Rat(1, 8), Rat(2, 8), Rat(3, 8)});
    CHECK_THROWS_AS(expr_to_dpoly(c3, parse_expr("ch2(e5)")), ExprError);
    CHECK_THROWS_AS(expr_to_dpoly(c3, parse_expr("ch1(g3)")), ExprError);   // genus 1: g1, g2
    CHECK_THROWS_AS(expr_to_dpoly(c3, parse_expr("ch1(d1^2)")), ExprError);  // one marked point
    CHECK_NOTHROW(expr_to_dpoly(c3, parse_expr("ch2(e3) * ch1(g2)")));
}

// ------------------------------------------------------------ binary tests

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(PARABINT_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    int rc = pclose(p);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("binary: integrate examples and determinism") {
    RunResult r = run_cli("integrate --genus 1 --rank 1 --degree 0 --expr \"ch2(one)\"");
    CHECK(r.status == 0);
    CHECK(contains(r.out, "\"value\":\"-1\""));
    CHECK(contains(r.out, "\"support_degree\":2"));

    RunResult r2 = run_cli(
        "integrate --genus 1 --rank 2 --degree 1 --weights 1/8,3/8 "
        "--expr \"ch2(one) * (ch1(d1) - ch1(d2))\"");
    CHECK(r2.status == 0);
    CHECK(contains(r2.out, "\"value\":\"1\""));

    // identical config => identical value/type fields (timing varies)
    RunResult r3 = run_cli(
        "integrate --genus 1 --rank 2 --degree 1 --weights 1/8,3/8 "
        "--expr \"ch2(one) * (ch1(d1) - ch1(d2))\"");
    CHECK(contains(r3.out, "\"value\":\"1\""));
    CHECK(contains(r3.out, "\"type\":\"(2,1;1/8:1,3/8:1)\""));
}

TEST_CASE("binary: walls lists the interior wall of the rank-3 degree-1 simplex") {
    RunResult r = run_cli("walls --rank 3 --degree 1");
    CHECK(r.status == 0);
    CHECK(contains(r.out, "\"equation\":\"l1 + 2*l2 = 1\""));
    CHECK(contains(r.out, "\"lambda_coeffs\":[1,2]"));
}

TEST_CASE("binary: check suite passes and exit codes are honored") {
    RunResult ok = run_cli("check joyce-identity --m-max 5");
    CHECK(ok.status == 0);
    CHECK(contains(ok.out, "\"pass\":true"));
    CHECK(!contains(ok.out, "\"pass\":false"));

    CHECK(run_cli("check --suite no-such-suite").status == 2);
    CHECK(run_cli("integrate --genus 1 --rank 1 --degree 0 --expr \"ch2(oops)\"").status == 2);
    CHECK(run_cli("frobnicate").status == 2);
    CHECK(run_cli("integrate --rank 2 --degree 1 --weights 3/8,1/8 --expr \"ch2(one)\"").status ==
          2);  // weights must increase
}

TEST_CASE("binary: cache round-trips through the environment-selected directory") {
    std::string dir = "/tmp/parab_cli_cache_XXXXXX";
    REQUIRE(mkdtemp(dir.data()) != nullptr);
    std::string env = "PARABINT_CACHE_DIR=" + dir;
    std::string args =
        "integrate --genus 1 --rank 2 --degree 1 --weights 1/8,3/8 "
        "--expr \"ch2(one) * (ch1(d1) - ch1(d2))\"";
    RunResult cold = run_cli(args, env);
    CHECK(cold.status == 0);
    CHECK(contains(cold.out, "\"cache_entries_loaded\":0"));
    CHECK(contains(cold.out, "\"value\":\"1\""));
    RunResult warm = run_cli(args, env);
    CHECK(warm.status == 0);
    CHECK(!contains(warm.out, "\"cache_entries_loaded\":0"));
    CHECK(contains(warm.out, "\"value\":\"1\""));
    std::remove((dir + "/parabint-cache.json").c_str());
    rmdir(dir.c_str());
}
