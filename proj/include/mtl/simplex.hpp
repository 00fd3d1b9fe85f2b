/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mtl {

enum class Relation { Le, Lt, Eq };

/* coeffs . x  rel  rhs */
struct LinearConstraint {
	std::vector<Rational> coeffs;
	Relation rel = Relation::Le;
	Rational rhs;
};

/* A system of linear constraints over variables x_0 .. x_{n-1}; variables
 * flagged nonneg carry the bound x_j >= 0, the others are free. */
struct LinearSystem {
	std::size_t num_vars = 0;
	std::vector<bool> nonneg;
	std::vector<LinearConstraint> rows;

	explicit LinearSystem(std::size_t n = 0, bool all_nonneg = false) : num_vars(n), nonneg(n, all_nonneg) {}
	std::size_t add_var(bool is_nonneg);
	void add(std::vector<Rational> coeffs, Relation rel, Rational rhs);
};

/*
 * Infeasibility certificate: one multiplier per row, nonnegative on
 * inequality rows. With a = sum_i y_i A_i and beta = sum_i y_i b_i it
 * satisfies a_j = 0 on free variables, a_j >= 0 on nonneg variables, and
 * either beta < 0, or beta = 0 with a positive multiplier on a strict row.
 */
struct FarkasCertificate {
	std::vector<Rational> multipliers;
};

struct LinearResult {
	bool feasible = false;
	std::vector<Rational> solution;   // when feasible; satisfies every row exactly
	FarkasCertificate certificate;    // when infeasible
};

/* Exact decision by two-phase simplex with Bland's rule. Both outcomes are
 * checked before returning; an internal inconsistency throws std::logic_error. */
LinearResult solve_linear(const LinearSystem &sys);

bool satisfies(const LinearSystem &sys, const std::vector<Rational> &x);
bool verify_certificate(const LinearSystem &sys, const FarkasCertificate &cert);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
	LpStatus status = LpStatus::Infeasible;
	std::vector<Rational> x;
	Rational value;
};

/* maximize c . x subject to the non-strict rows of sys (strict rows are
 * rejected with std::invalid_argument). */
LpResult maximize(const LinearSystem &sys, const std::vector<Rational> &c);

} // namespace mtl
