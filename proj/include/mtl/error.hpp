/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtl {

struct SourceLocation {
	std::size_t offset = 0;
	std::size_t line = 1;
	std::size_t column = 1;
};

/* Malformed input text or file: lexing, parsing, unknown symbols, arity mismatch. */
class ParseError : public std::runtime_error {
public:
	ParseError(const std::string &what, SourceLocation loc)
	: std::runtime_error(what + " at " + std::to_string(loc.line) + ":" + std::to_string(loc.column))
	, loc_(loc)
	{}
	const SourceLocation &where() const { return loc_; }

private:
	SourceLocation loc_;
};

/* Input that parses but violates a data invariant (weights, totality, arities, caps). */
class ValidationError : public std::runtime_error {
	using std::runtime_error::runtime_error;
};

/* Evaluation precondition failure: unbound variables, missing groundings, unsupported fragment. */
class EvalError : public std::runtime_error {
	using std::runtime_error::runtime_error;
};

} // namespace mtl
