/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/rational.hpp"

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace mtl {

/* Node tags shared by the object language (L0) and the probability language (L1).
 * L0 atoms are Eq and Rel; L1 atoms are Eq, Le and Lt. */
enum class Op { Eq, Le, Lt, Rel, Not, And, Or, Implies, Iff, Forall, Exists };

bool is_atom(Op op);
bool is_binary_connective(Op op);
bool is_quantifier(Op op);

// ---------------------------------------------------------------- L0 terms

/* A term of L0: a variable v_i, a constant symbol, or a function application.
 * Immutable handle; copies share structure. */
class Term0 {
public:
	enum class Kind { Var, Const, Apply };

	static Term0 var(int index);
	static Term0 constant(std::string symbol);
	static Term0 apply(std::string symbol, std::vector<Term0> args);

	Kind kind() const;
	int var_index() const;                 // Var only
	const std::string &symbol() const;     // Const, Apply
	const std::vector<Term0> &args() const;

	void collect_vars(std::set<int> &out) const;

	friend bool operator==(const Term0 &a, const Term0 &b);

private:
	struct Node;
	std::shared_ptr<const Node> n_;
	explicit Term0(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
};

// ---------------------------------------------------------------- L0 formulas

class Formula0 {
public:
	static Formula0 eq(Term0 a, Term0 b);
	static Formula0 rel(std::string symbol, std::vector<Term0> args);
	static Formula0 negate(Formula0 f);
	static Formula0 binary(Op op, Formula0 a, Formula0 b);
	static Formula0 conj(Formula0 a, Formula0 b) { return binary(Op::And, std::move(a), std::move(b)); }
	static Formula0 disj(Formula0 a, Formula0 b) { return binary(Op::Or, std::move(a), std::move(b)); }
	static Formula0 implies(Formula0 a, Formula0 b) { return binary(Op::Implies, std::move(a), std::move(b)); }
	static Formula0 quantify(Op q, int var, Formula0 body);

	Op op() const;
	const std::string &symbol() const;          // Rel
	const std::vector<Term0> &terms() const;    // Eq (2), Rel (arity)
	const std::vector<Formula0> &children() const;
	const Formula0 &child(std::size_t i) const { return children().at(i); }
	int bound_var() const;                      // Forall, Exists

	const std::set<int> &free_vars() const;
	bool is_sentence() const { return free_vars().empty(); }
	bool is_quantifier_free() const;
	std::size_t size() const;                   // node count

	/* Generic builders so normal-form code can be shared with Formula1. */
	static Formula0 make_not(Formula0 f) { return negate(std::move(f)); }
	static Formula0 make_binary(Op op, Formula0 a, Formula0 b) { return binary(op, std::move(a), std::move(b)); }

	friend bool operator==(const Formula0 &a, const Formula0 &b);

private:
	struct Node;
	std::shared_ptr<const Node> n_;
	explicit Formula0(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
};

// ---------------------------------------------------------------- L1 terms

/* A term of L1: a real variable, a rational literal (0, 1 and c_q), a
 * probability constant |phi|, or +, -, *, unary minus. */
class Term1 {
public:
	enum class Kind { Var, Num, Prob, Add, Sub, Mul, Neg };

	static Term1 var(std::string name);
	static Term1 num(Rational q);
	static Term1 prob(Formula0 phi);
	static Term1 add(Term1 a, Term1 b);
	static Term1 sub(Term1 a, Term1 b);
	static Term1 mul(Term1 a, Term1 b);
	static Term1 neg(Term1 a);

	Kind kind() const;
	const std::string &name() const;            // Var
	const Rational &value() const;              // Num
	const Formula0 &formula() const;            // Prob
	const std::vector<Term1> &args() const;     // Add, Sub, Mul (2), Neg (1)

	void collect_vars(std::set<std::string> &out) const;
	void collect_probs(std::vector<Formula0> &out) const;
	bool has_vars() const;

	friend bool operator==(const Term1 &a, const Term1 &b);

private:
	struct Node;
	std::shared_ptr<const Node> n_;
	explicit Term1(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
};

// ---------------------------------------------------------------- L1 formulas

class Formula1 {
public:
	static Formula1 atom(Op rel, Term1 lhs, Term1 rhs);   // Eq, Le, Lt
	static Formula1 eq(Term1 a, Term1 b) { return atom(Op::Eq, std::move(a), std::move(b)); }
	static Formula1 le(Term1 a, Term1 b) { return atom(Op::Le, std::move(a), std::move(b)); }
	static Formula1 lt(Term1 a, Term1 b) { return atom(Op::Lt, std::move(a), std::move(b)); }
	static Formula1 negate(Formula1 f);
	static Formula1 binary(Op op, Formula1 a, Formula1 b);
	static Formula1 conj(Formula1 a, Formula1 b) { return binary(Op::And, std::move(a), std::move(b)); }
	static Formula1 disj(Formula1 a, Formula1 b) { return binary(Op::Or, std::move(a), std::move(b)); }
	static Formula1 quantify(Op q, std::string var, Formula1 body);

	/* Left-nested conjunction/disjunction of a non-empty list. */
	static Formula1 conj_all(const std::vector<Formula1> &fs);
	static Formula1 disj_all(const std::vector<Formula1> &fs);

	Op op() const;
	const Term1 &lhs() const;                   // atoms
	const Term1 &rhs() const;
	const std::vector<Formula1> &children() const;
	const Formula1 &child(std::size_t i) const { return children().at(i); }
	const std::string &bound_var() const;       // Forall, Exists

	std::set<std::string> free_vars() const;
	bool is_sentence() const { return free_vars().empty(); }
	bool is_quantifier_free() const;

	/* Atoms = and <= closed under and, or, forall and bounded exists
	 * "exists r (lo <= r & r <= hi & phi)" with ground lo, hi. */
	bool is_positive_bounded() const;

	/* Every probability constant, in order of first occurrence, without duplicates. */
	std::vector<Formula0> prob_constants() const;

	static Formula1 make_not(Formula1 f) { return negate(std::move(f)); }
	static Formula1 make_binary(Op op, Formula1 a, Formula1 b) { return binary(op, std::move(a), std::move(b)); }

	friend bool operator==(const Formula1 &a, const Formula1 &b);

private:
	struct Node;
	std::shared_ptr<const Node> n_;
	explicit Formula1(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
};

// ---------------------------------------------------------------- propositional formulas

/* Propositional formulas over variables v_i, used for boolean multi-teams. */
class PropFormula {
public:
	enum class Kind { Var, True, False, Not, And, Or, Implies, Iff };

	static PropFormula var(int index);
	static PropFormula constant(bool value);
	static PropFormula negate(PropFormula f);
	static PropFormula binary(Kind k, PropFormula a, PropFormula b);

	Kind kind() const;
	int var_index() const;
	const std::vector<PropFormula> &children() const;

	void collect_vars(std::set<int> &out) const;
	/* valuation[i] is the truth value of v_i */
	bool eval(const std::vector<bool> &valuation) const;

	friend bool operator==(const PropFormula &a, const PropFormula &b);

private:
	struct Node;
	std::shared_ptr<const Node> n_;
	explicit PropFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
};

} // namespace mtl
