/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/ast.hpp"
#include "mtl/signature.hpp"
#include "mtl/syntax.hpp"

#include <cstddef>
#include <vector>

namespace mtl {

/*
 * Rewrites a conjunction of disjunctions of conjunctions into a disjunction of
 * conjunctions by distribution. Any subformula that is neither a conjunction
 * nor a disjunction counts as an atom. Atoms repeated inside one conjunction and
 * repeated disjuncts are dropped (syntactic equality only); order of first
 * occurrence is kept. Throws ValidationError when a disjunction appears below
 * the third level.
 */
Formula0 to_disjunctive_shape(const Formula0 &f);
Formula1 to_disjunctive_shape(const Formula1 &f);

/* Splits a formula along top-level Or / And nodes. */
template <class F>
std::vector<F> flatten(const F &f, Op op)
{
	if (f.op() != op)
		return {f};
	std::vector<F> out = flatten(f.child(0), op);
	for (auto &g : flatten(f.child(1), op))
		out.push_back(std::move(g));
	return out;
}

/* Ordering key for enumerations: printed length, then the printed text. */
bool canonical_less(const Formula0 &a, const Formula0 &b);

/*
 * All quantifier-free L0 formulas with at most `bound` connective nodes (atoms
 * count 1) over the variables of dom, sorted by canonical_less. Atoms are
 * relational and equality atoms whose arguments are terms of depth at most
 * term_depth built from dom variables and constants. Connectives are ~ & | -> <->.
 * Throws std::length_error once more than max_count formulas would be produced.
 */
std::vector<Formula0> canonical_enumeration(const Signature &sig, const VarTuple &dom, std::size_t bound,
                                            int term_depth = 0, std::size_t max_count = 1'000'000);

/* The L0 formulas occurring as probability constants in sigma, deduplicated and sorted by canonical_less. */
std::vector<Formula0> canonical_enumeration(const std::vector<Formula1> &sigma);

} // namespace mtl
