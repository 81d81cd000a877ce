#include "parab/exprparse.hpp"

#include <cctype>

namespace parab {

namespace {

/// recursive-descent parser over a single pass of the source text.
struct Parser {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit Parser(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& what) const { throw ExprError(what, line, col); }

    void advance() {
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) advance();
    }

    bool eof() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() != c) return false;
        advance();
        return true;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    /// unsigned decimal integer (no whitespace skipping: part of a token).
    long raw_nat(const char* what) {
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            fail(std::string("expected ") + what);
        long v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            v = v * 10 + (src[pos] - '0');
            if (v > 1000000) fail(std::string("number too large in ") + what);
            advance();
        }
        return v;
    }

    long nat(const char* what) {
        skip_ws();
        return raw_nat(what);
    }

    ExprPtr expr() {
        auto out = std::make_shared<Expr>();
        out->node = ExprNode::Sum;
        int sign = accept('-') ? -1 : 1;
        out->kids.push_back(term());
        out->signs.push_back(sign);
        while (true) {
            if (accept('+'))
                sign = 1;
            else if (accept('-'))
                sign = -1;
            else
                break;
            out->kids.push_back(term());
            out->signs.push_back(sign);
        }
        if (out->kids.size() == 1 && out->signs[0] == 1) return out->kids[0];
        return out;
    }

    ExprPtr term() {
        auto out = std::make_shared<Expr>();
        out->node = ExprNode::Product;
        out->kids.push_back(factor());
        while (accept('*')) out->kids.push_back(factor());
        if (out->kids.size() == 1) return out->kids[0];
        return out;
    }

    ExprPtr factor() {
        char c = peek();
        if (c == '(') {
            advance();
            ExprPtr inner = expr();
            expect(')');
            return maybe_power(inner);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            auto out = std::make_shared<Expr>();
            out->node = ExprNode::Const;
            long num = raw_nat("rational numerator");
            long den = 1;
            if (pos < src.size() && src[pos] == '/') {
                advance();
                den = raw_nat("rational denominator");
                if (den == 0) fail("zero denominator");
            }
            out->value = Rat(num, den);
            out->value.canonicalize();
            return out;
        }
        if (c == 'c') return maybe_power(atom());
        fail("expected 'ch', '(', or a rational literal");
    }

    ExprPtr maybe_power(ExprPtr base) {
        if (!accept('^')) return base;
        auto out = std::make_shared<Expr>();
        out->node = ExprNode::Power;
        out->kids.push_back(std::move(base));
        long e = raw_nat("exponent");
        out->exponent = static_cast<unsigned>(e);
        return out;
    }

    ExprPtr atom() {
        skip_ws();
        if (src.compare(pos, 2, "ch") != 0) fail("expected 'ch'");
        advance();
        advance();
        auto out = std::make_shared<Expr>();
        out->node = ExprNode::Atom;
        out->k = static_cast<int>(raw_nat("Chern index"));
        expect('(');
        skip_ws();
        if (src.compare(pos, 3, "one") == 0) {
            out->sym = AtomSym::One;
            advance(), advance(), advance();
        } else if (src.compare(pos, 2, "pt") == 0) {
            out->sym = AtomSym::Pt;
            advance(), advance();
        } else if (pos < src.size() && (src[pos] == 'g' || src[pos] == 'e' || src[pos] == 'd')) {
            char s = src[pos];
            out->sym = s == 'g' ? AtomSym::G : (s == 'e' ? AtomSym::E : AtomSym::D);
            advance();
            out->index = static_cast<int>(raw_nat("symbol index"));
            if (out->index < 1) fail("indices are 1-based");
            if (s == 'd' && pos < src.size() && src[pos] == '^') {
                advance();
                out->point = static_cast<int>(raw_nat("marked-point index"));
                if (out->point < 1) fail("marked points are 1-based");
            }
        } else {
            fail("unknown symbol (expected one, pt, g<i>, e<j>, or d<j>)");
        }
        expect(')');
        return out;
    }
};

// how tightly the surrounding syntax binds: a sum may appear bare at top
// level, a factor in a product must parenthesize sums, and the base of a
// power must additionally parenthesize products and powers ('^' does not
// associate) and rational literals ('2^3' is not in the grammar).
enum class PrintSlot { Top, Factor, PowerBase };

void print_rec(const ExprPtr& e, std::string& out, PrintSlot slot) {
    bool parens = false;
    switch (e->node) {
        case ExprNode::Sum: parens = slot != PrintSlot::Top; break;
        case ExprNode::Product:
        case ExprNode::Power: parens = slot == PrintSlot::PowerBase; break;
        case ExprNode::Const:
            parens = slot == PrintSlot::PowerBase ||
                     (slot == PrintSlot::Factor && e->value < 0);
            break;
        case ExprNode::Atom: break;
    }
    if (parens) out += '(';
    switch (e->node) {
        case ExprNode::Sum: {
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i == 0) {
                    if (e->signs[i] < 0) out += '-';
                } else {
                    out += e->signs[i] < 0 ? " - " : " + ";
                }
                // a sum directly under a sum keeps its parentheses so the
                // sign in front distributes over the right subtree
                print_rec(e->kids[i], out,
                          e->kids[i]->node == ExprNode::Sum ? PrintSlot::Factor
                                                            : PrintSlot::Top);
            }
            break;
        }
        case ExprNode::Product:
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += " * ";
                print_rec(e->kids[i], out, PrintSlot::Factor);
            }
            break;
        case ExprNode::Power:
            print_rec(e->kids[0], out, PrintSlot::PowerBase);
            out += '^' + std::to_string(e->exponent);
            break;
        case ExprNode::Atom: {
            out += "ch" + std::to_string(e->k) + '(';
            switch (e->sym) {
                case AtomSym::One: out += "one"; break;
                case AtomSym::Pt: out += "pt"; break;
                case AtomSym::G: out += 'g' + std::to_string(e->index); break;
                case AtomSym::E: out += 'e' + std::to_string(e->index); break;
                case AtomSym::D:
                    out += 'd' + std::to_string(e->index);
                    if (e->point != 1) out += '^' + std::to_string(e->point);
                    break;
            }
            out += ')';
            break;
        }
        case ExprNode::Const: out += rat_str(e->value); break;
    }
    if (parens) out += ')';
}

DPoly eval_rec(const Ctx& ctx, const ExprPtr& e) {
    switch (e->node) {
        case ExprNode::Sum: {
            DPoly acc = dp_zero();
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                DPoly t = eval_rec(ctx, e->kids[i]);
                acc = dp_add(acc, e->signs[i] < 0 ? dp_scale(t, Rat(-1)) : t);
            }
            return acc;
        }
        case ExprNode::Product: {
            DPoly acc = dp_const(1);
            for (const ExprPtr& kid : e->kids) acc = dp_mul(ctx, acc, eval_rec(ctx, kid));
            return acc;
        }
        case ExprNode::Power: return dp_pow(ctx, eval_rec(ctx, e->kids[0]), e->exponent);
        case ExprNode::Const: return dp_const(e->value);
        case ExprNode::Atom: break;
    }
    // atoms: validate 1-based indices against the context, then build
    int p = e->point - 1;
    if (e->sym == AtomSym::D || e->sym == AtomSym::E || e->sym == AtomSym::Pt) {
        if (p < 0 || p >= ctx.type.num_punctures())
            throw ExprError("marked-point index out of range", 1, 1);
    }
    switch (e->sym) {
        case AtomSym::One: return gen_dpoly(ctx, GenKind::One, e->k);
        case AtomSym::Pt: return ch_pt(ctx, e->k, p);
        case AtomSym::G:
            if (e->index > 2 * ctx.curve.genus)
                throw ExprError("odd-class index exceeds 2g", 1, 1);
            return gen_dpoly(ctx, GenKind::Odd, e->k, e->index);
        case AtomSym::E:
            if (e->index > static_cast<int>(ctx.type.punctures[p].steps.size()))
                throw ExprError("flag index out of range", 1, 1);
            return ch_e(ctx, e->k, e->index, p);
        case AtomSym::D:
            if (e->index > static_cast<int>(ctx.type.punctures[p].steps.size()))
                throw ExprError("flag index out of range", 1, 1);
            return gen_dpoly(ctx, GenKind::Flag, e->k, e->index, p);
    }
    throw ExprError("unreachable", 1, 1);
}

}  // namespace

ExprPtr parse_expr(const std::string& src) {
    Parser p(src);
    if (p.eof()) p.fail("empty expression");
    ExprPtr out = p.expr();
    if (!p.eof()) p.fail("trailing input");
    return out;
}

std::string print_expr(const ExprPtr& e) {
    std::string out;
    print_rec(e, out, PrintSlot::Top);
    return out;
}

DPoly expr_to_dpoly(const Ctx& ctx, const ExprPtr& e) { return eval_rec(ctx, e); }

}  // namespace parab
