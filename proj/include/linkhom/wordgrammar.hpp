#pragma once

#include <stdexcept>
#include <string>

#include "linkhom/words.hpp"

namespace linkhom {

struct ParseError : std::runtime_error {
	size_t position; // byte offset into the input

	ParseError(const std::string &msg, size_t pos);
};

// Surface syntax for word expressions:
//   word   := factor { factor } ;
//   factor := atom [ "^" atom | "^-1" ] ;
//   atom   := IDENT | "[" word "," word "]" | "(" word ")" ;
//   IDENT  := letter { letter | digit | "'" } ; whitespace separates factors.
// Juxtaposition is product, w^c = c^-1 w c, [u,v] = u^-1 v^-1 u v. Commas are
// strictly binary; the left-normed list form is spelled ln[e1,...,en] ("ln"
// immediately followed by "["). A bare "1" is the empty product.
CommExpr parse_word(const std::string &text);

// Canonical text form: products are flattened and space-separated, brackets
// stay binary, non-atomic bases of ^ are parenthesized. print(parse(t))
// canonicalizes t; parse(print(e)) reproduces e up to product flattening.
std::string print_word(const CommExpr &e);

} // namespace linkhom
