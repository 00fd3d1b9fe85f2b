/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/ast.hpp"
#include "mtl/grounding.hpp"
#include "mtl/polynomial.hpp"
#include "mtl/simplex.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mtl {

enum class Truth { Holds, Fails, Unknown };
std::string to_string(Truth t);

struct Verdict {
	Truth truth = Truth::Unknown;
	std::string reason;                       // why UNKNOWN, or which part FAILS
	std::optional<Rational> delta;            // resolution reached, for UNKNOWN from interval search
	std::map<std::string, Rational> witness;  // real variables: witness for HOLDS, counterexample for FAILS

	static Verdict holds() { return {Truth::Holds, {}, {}, {}}; }
	static Verdict fails(std::string why = {}) { return {Truth::Fails, std::move(why), {}, {}}; }
	static Verdict unknown(std::string why, std::optional<Rational> delta = std::nullopt)
	{
		return {Truth::Unknown, std::move(why), std::move(delta), {}};
	}
};

/* Polynomial atom "p cmp 0". */
enum class Cmp { Eq, Ne, Le, Lt };
struct PolyAtom {
	Polynomial p;
	Cmp cmp;
};
using PolyCase = std::vector<PolyAtom>;

/* Name of the real unknown standing for the probability constant |phi|: "|<phi>|". */
std::string prob_variable(const Formula0 &phi);

/* Term as a polynomial. With a grounding, probability constants become their
 * values (EvalError when missing); without one they become prob_variable names. */
Polynomial to_polynomial(const Term1 &t, const Grounding *g = nullptr);

/* Exact value of a term without real variables. */
Rational eval_ground_term(const Term1 &t, const Grounding &g);

/* Exact truth of a quantifier-free sentence: HOLDS or FAILS, never UNKNOWN. */
Verdict eval_ground_qf(const Formula1 &f, const Grounding &g);

struct ArithPolicy {
	enum class Backend { Builtin, External };
	Backend backend = Backend::Builtin;
	Rational delta = Rational(1, 1L << 20);   // box edge at which the built-in search stops splitting
	std::size_t max_boxes = 200000;
	std::string command;                      // external: executable, called with the problem file path
};

/*
 * Truth of an L1 sentence with real quantifiers. The built-in policy combines
 * closed subformulas with three-valued logic; each quantifier block must bound
 * every variable it introduces through top-level conjuncts (for an existential
 * block) or hypotheses (for a universal one), else EvalError. Blocks are decided
 * by branch-and-prune over boxes with exact rational endpoints: HOLDS only with
 * an exactly checked rational witness, FAILS only when every box is refuted.
 */
Verdict eval_quantified(const Formula1 &f, const Grounding &g, const ArithPolicy &policy);

/* eval_ground_qf for quantifier-free sentences, eval_quantified otherwise. */
Verdict evaluate(const Formula1 &f, const Grounding &g, const ArithPolicy &policy);

/* The sentence with grounded probability constants as one SMT-LIB 2 problem:
 * (assert ...) (check-sat). sat / unsat / unknown map to HOLDS / FAILS / UNKNOWN. */
std::string to_smtlib(const Formula1 &f, const Grounding &g);

/*
 * Real-arithmetic consequence: does the conjunction of premises imply goal for
 * all real values of the probability constants and free real variables?
 * Quantifier-free input only. Decided exactly when every case of
 * premises & ~goal in disjunctive form is linear after constant folding;
 * otherwise UNKNOWN. FAILS carries a counterexample.
 */
Verdict rcf_entails(const std::vector<Formula1> &premises, const Formula1 &goal);

/*
 * Disjunctive cases of the conjunction of quantifier-free formulas, with
 * probability constants as prob_variable unknowns. "p != 0" is split into
 * "p < 0" and "-p < 0", and constant atoms are folded away (a case with a
 * false one is dropped). ValidationError beyond max_cases.
 */
std::vector<PolyCase> qf_cases(const std::vector<Formula1> &conjuncts, std::size_t max_cases = 4096);

/* A case without Ne atoms as a linear system over its variables (all free). */
std::pair<LinearSystem, std::vector<std::string>> to_linear_system(const PolyCase &c);

} // namespace mtl
