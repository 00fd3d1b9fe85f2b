/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/ast.hpp"
#include "mtl/structure.hpp"
#include "mtl/syntax.hpp"

#include <map>
#include <vector>

namespace mtl {

/* Values of finitely many object variables. */
class Assignment {
public:
	Assignment() = default;
	Assignment(const VarTuple &dom, const std::vector<Element> &values);

	Assignment &bind(int var, Element e);
	bool binds(int var) const;
	Element at(int var) const;   // throws EvalError when unbound
	const std::map<int, Element> &bindings() const { return values_; }

private:
	std::map<int, Element> values_;
};

/*
 * A formula checked against a structure once, then evaluated under many
 * environments. An environment is indexed by variable number; -1 marks an
 * unbound slot. Evaluation may temporarily rebind quantified slots but
 * restores them before returning.
 */
class FormulaEvaluator {
public:
	FormulaEvaluator(const FiniteStructure &A, Formula0 phi);

	bool operator()(std::vector<Element> &env) const;
	const Formula0 &formula() const { return phi_; }
	/* Smallest environment length covering every variable of the formula. */
	std::size_t env_size() const { return env_size_; }

private:
	const FiniteStructure *A_;
	Formula0 phi_;
	std::size_t env_size_ = 0;
};

/* Tarskian satisfaction. Throws ValidationError for ill-sorted formulas and
 * EvalError for free variables that s does not bind. */
bool sat_fo(const FiniteStructure &A, const Assignment &s, const Formula0 &phi);

/* Truth of a sentence; throws ValidationError when phi has free variables. */
bool valid_on(const FiniteStructure &A, const Formula0 &sentence);

/* valid_on(A, forall x (phi -> psi)); the free variables of phi and psi must lie in x. */
bool implication_holds(const FiniteStructure &A, const Formula0 &phi, const Formula0 &psi, const VarTuple &x);

/* forall x_0 ... forall x_{n-1} body, innermost quantifier last in x. */
Formula0 universal_closure(const VarTuple &x, Formula0 body);

} // namespace mtl
