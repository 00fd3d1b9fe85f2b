/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace mtl {

/* Exact rational number in canonical form (gcd 1, positive denominator).
 * Thin value wrapper over GMP's mpq_class; every operation re-canonicalizes. */
class Rational {
public:
	Rational() = default;
	Rational(long v) : q_(v) {}
	Rational(int v) : q_(v) {}
	Rational(long num, long den);
	explicit Rational(const mpq_class &q) : q_(q) { q_.canonicalize(); }
	explicit Rational(const mpz_class &z) : q_(z) {}

	/* Accepts "p", "p/q", "-p/q" and decimals "1.25", "-0.5e-3".
	 * Decimals convert exactly. Throws std::invalid_argument. */
	static Rational parse(std::string_view text);

	std::string str() const;        // "p/q" or "p"
	double to_double() const { return q_.get_d(); }

	mpz_class num() const { return q_.get_num(); }
	mpz_class den() const { return q_.get_den(); }
	const mpq_class &raw() const { return q_; }

	int sign() const { return sgn(q_); }
	bool is_zero() const { return sgn(q_) == 0; }
	bool is_integer() const { return q_.get_den() == 1; }
	bool is_canonical() const;

	Rational abs() const;
	Rational inverse() const;       // throws std::domain_error on zero
	Rational floor() const;
	Rational ceil() const;

	Rational &operator+=(const Rational &b) { q_ += b.q_; return *this; }
	Rational &operator-=(const Rational &b) { q_ -= b.q_; return *this; }
	Rational &operator*=(const Rational &b) { q_ *= b.q_; return *this; }
	Rational &operator/=(const Rational &b);

	friend Rational operator+(Rational a, const Rational &b) { return a += b; }
	friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
	friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
	friend Rational operator/(Rational a, const Rational &b) { return a /= b; }
	friend Rational operator-(const Rational &a) { return Rational(mpq_class(-a.q_)); }

	friend bool operator==(const Rational &a, const Rational &b) { return a.q_ == b.q_; }
	friend std::strong_ordering operator<=>(const Rational &a, const Rational &b)
	{
		int c = cmp(a.q_, b.q_);
		return c < 0 ? std::strong_ordering::less
		     : c > 0 ? std::strong_ordering::greater
		             : std::strong_ordering::equal;
	}

	friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

	std::size_t hash() const;

private:
	mpq_class q_;
};

/* Simplest rational (smallest denominator, then smallest |numerator|) in the closed interval [lo, hi]. */
Rational simplest_between(const Rational &lo, const Rational &hi);

/* Best continued-fraction approximation of x with denominator <= max_den. */
Rational approximate(double x, const mpz_class &max_den);

/* Rational bounds on sqrt(x) for x >= 0: lower <= sqrt(x) <= upper, exact when x is a perfect square. */
Rational sqrt_lower(const Rational &x);
Rational sqrt_upper(const Rational &x);

} // namespace mtl

template <> struct std::hash<mtl::Rational> {
	std::size_t operator()(const mtl::Rational &r) const { return r.hash(); }
};
