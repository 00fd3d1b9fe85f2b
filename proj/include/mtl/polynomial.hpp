/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/rational.hpp"

#include <map>
#include <set>
#include <string>

namespace mtl {

/* Product of variables with positive exponents; the empty monomial is 1. */
using Monomial = std::map<std::string, int>;

/* Sparse multivariate polynomial with exact rational coefficients. Zero
 * coefficients are never stored, so structural equality is polynomial identity. */
class Polynomial {
public:
	Polynomial() = default;
	Polynomial(const Rational &c);   // NOLINT: constants convert implicitly
	static Polynomial variable(const std::string &name);

	Polynomial &operator+=(const Polynomial &b);
	Polynomial &operator-=(const Polynomial &b);
	friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
	friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
	friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
	friend Polynomial operator-(const Polynomial &a);
	friend bool operator==(const Polynomial &, const Polynomial &) = default;

	const std::map<Monomial, Rational> &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	bool is_constant() const;
	Rational constant_term() const;
	Rational coefficient(const std::string &var) const;   // of the degree-1 monomial
	int degree() const;
	bool is_linear() const { return degree() <= 1; }
	std::set<std::string> variables() const;

	/* Exact value; throws EvalError when a variable has no value. */
	Rational eval(const std::map<std::string, Rational> &point) const;
	/* Replaces the given variables by values, keeping the others symbolic. */
	Polynomial substitute(const std::map<std::string, Rational> &values) const;
	/* Replaces variables by polynomials; variables without an entry stay. */
	Polynomial compose(const std::map<std::string, Polynomial> &images) const;

	std::string str() const;

private:
	void add_term(const Monomial &m, const Rational &c);
	std::map<Monomial, Rational> terms_;
};

} // namespace mtl
