#pragma once

#include <string>

#include "tame/errors.hpp"
#include "tame/formula.hpp"

namespace tame {

// Parses the ASCII formula language:
//
//   formula := ("exists"|"forall") ident "." formula
//            | or-expr ("->" formula)?
//   or-expr := and-expr ("or" and-expr)*
//   and-expr := not-expr ("and" not-expr)*
//   not-expr := "not" not-expr | primary
//   primary := "(" formula ")" | "true" | "false"
//            | term (("<"|"<="|"="|"!="|">="|">") term)+
//   term := ["-"] product (("+"|"-") product)*
//   product := rational ["*" ident] | ident
//   rational := digits ["/" digits]
//
// "#" comments to end of line. Comparisons chain: a < b < c means
// a < b and b < c. "implies" is accepted as a synonym of "->".
FormulaPtr parse_formula(const std::string& text);

// Parses a single affine term.
AffineTerm parse_term(const std::string& text);

}  // namespace tame
