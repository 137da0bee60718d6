// ============================================================================
// stlf/parser.hpp — concrete syntax for STL formulas
// ============================================================================
//
// Grammar (precedence: unary > U/R > && > || > ->; U, R and -> associate to
// the right, && and || to the left; an omitted interval means [0, inf)):
//
//   phi  ::= "true" | pred | "!" phi | phi "&&" phi | phi "||" phi
//          | phi "->" phi | "X" phi | "[]" intv? phi | "<>" intv? phi
//          | phi "U" intv? phi | phi "R" intv? phi | "(" phi ")"
//   intv ::= "_" ("["|"(") num "," (num|"inf") ("]"|")")
//   pred ::= linexpr rel num | IDENT
//   linexpr ::= ["-"] term (("+"|"-") term)*
//   term ::= num | [num "*"] IDENT
//   rel  ::= ">=" | ">" | "<=" | "<"
//
// A bare IDENT names a boolean channel.  Every channel appearing in the
// formula must exist in the supplied signal space (channels or parameters);
// bare-IDENT predicates must name boolean channels.
//
// ============================================================================

#pragma once

#include <string>

#include "stlf/formula.hpp"
#include "stlf/trace.hpp"

namespace stlf {

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line(line),
          column(column) {}

    std::size_t line;
    std::size_t column;
};

Formula parse_formula(const std::string& text, const SignalSpace& space);

}  // namespace stlf
