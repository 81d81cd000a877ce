#pragma once

/**
 * @file exprparse.hpp
 * @brief Surface syntax for descendent expressions.
 *
 * Grammar (whitespace-insensitive):
 *     expr   := ['-'] term (('+' | '-') term)*
 *     term   := factor ('*' factor)*
 *     factor := atom ('^' nat)? | '(' expr ')' | rational
 *     atom   := 'ch' nat '(' sym ')'
 *     sym    := 'one' | 'pt' | 'g' nat | 'e' nat | 'd' nat ('^' nat)?
 * with 1-based indices throughout: g<i> are the odd curve classes, d<j> the
 * successive flag quotient lines, e<j> the partial flag classes
 * d_1 + ... + d_j, and d<j>^<p> selects the flag at marked point p when
 * there are several.  Rational literals are 'p' or 'p/q'.
 *
 * print_expr emits a canonical form that parses back to the same tree.
 */

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "parab/algebra.hpp"

namespace parab {

/// syntax or validation error with a 1-based source position.
struct ExprError : std::runtime_error {
    int line, column;
    ExprError(const std::string& what, int line_, int column_)
        : std::runtime_error(what + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprNode { Sum, Product, Power, Atom, Const };

enum class AtomSym { One, Pt, G, E, D };

struct Expr {
    ExprNode node;

    // Sum: kids with signs (+1/-1); Product: kids; Power: kids[0] ^ exponent
    std::vector<ExprPtr> kids;
    std::vector<int> signs;
    unsigned exponent = 1;

    // Atom: ch_k(sym) with 1-based index / marked point
    AtomSym sym = AtomSym::One;
    int k = 0, index = 0, point = 1;

    // Const
    Rat value = 0;
};

/// parse source text into an expression tree, or throw ExprError.
ExprPtr parse_expr(const std::string& src);

/// canonical printing; parse_expr(print_expr(e)) reproduces e.
std::string print_expr(const ExprPtr& e);

/// evaluate into the descendent algebra of the context, validating index
/// ranges (odd classes against the genus, flag indices against the flag
/// lengths, marked points against the puncture count); throws ExprError.
DPoly expr_to_dpoly(const Ctx& ctx, const ExprPtr& e);

}  // namespace parab
