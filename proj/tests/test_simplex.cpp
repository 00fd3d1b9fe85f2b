/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "doctest.h"
#include "mtl/polynomial.hpp"
#include "mtl/simplex.hpp"

#include <random>

using namespace mtl;

namespace {

struct Ineq {
	std::vector<Rational> a;
	Rational b;
	bool strict;
};

// Fourier-Motzkin elimination: independent feasibility oracle for small systems
bool fm_feasible(std::vector<Ineq> rows, std::size_t n)
{
	for (std::size_t k = 0; k < n; ++k) {
		std::vector<Ineq> pos, neg, rest;
		for (auto &r : rows) {
			int s = r.a[k].sign();
			(s > 0 ? pos : s < 0 ? neg : rest).push_back(r);
		}
		for (const auto &p : pos) {
			for (const auto &q : neg) {
				Rational lp = -q.a[k], lq = p.a[k];   // both positive
				Ineq c{std::vector<Rational>(n), lp * p.b + lq * q.b, p.strict || q.strict};
				for (std::size_t j = 0; j < n; ++j)
					c.a[j] = lp * p.a[j] + lq * q.a[j];
				rest.push_back(c);
			}
		}
		rows = std::move(rest);
	}
	for (const auto &r : rows)
		if (r.strict ? !(Rational(0) < r.b) : !(Rational(0) <= r.b))
			return false;
	return true;
}

std::vector<Ineq> as_ineqs(const LinearSystem &sys)
{
	std::vector<Ineq> out;
	for (const auto &r : sys.rows) {
		out.push_back({r.coeffs, r.rhs, r.rel == Relation::Lt});
		if (r.rel == Relation::Eq) {
			Ineq neg{r.coeffs, -r.rhs, false};
			for (auto &c : neg.a)
				c = -c;
			out.push_back(neg);
		}
	}
	for (std::size_t j = 0; j < sys.num_vars; ++j) {
		if (!sys.nonneg[j])
			continue;
		std::vector<Rational> a(sys.num_vars);
		a[j] = Rational(-1);
		out.push_back({a, Rational(0), false});
	}
	return out;
}

} // namespace

TEST_CASE("feasible and infeasible systems")
{
	LinearSystem s(2, true);
	s.add({Rational(1), Rational(0)}, Relation::Eq, Rational(1, 3));
	s.add({Rational(1), Rational(1)}, Relation::Eq, Rational(1));
	LinearResult r = solve_linear(s);
	REQUIRE(r.feasible);
	CHECK(r.solution == std::vector<Rational>{Rational(1, 3), Rational(2, 3)});

	LinearSystem bad(1, true);
	bad.add({Rational(1)}, Relation::Eq, Rational(1, 3));
	bad.add({Rational(1)}, Relation::Eq, Rational(1, 2));
	LinearResult u = solve_linear(bad);
	CHECK_FALSE(u.feasible);
	CHECK(verify_certificate(bad, u.certificate));

	// x < 1 and x > 1 - only the strict certificate closes this
	LinearSystem strict(1);
	strict.add({Rational(1)}, Relation::Lt, Rational(1));
	strict.add({Rational(-1)}, Relation::Le, Rational(-1));
	LinearResult st = solve_linear(strict);
	CHECK_FALSE(st.feasible);
	CHECK(verify_certificate(strict, st.certificate));

	LinearSystem open(1);
	open.add({Rational(1)}, Relation::Lt, Rational(1));
	open.add({Rational(-1)}, Relation::Lt, Rational(0));
	LinearResult op = solve_linear(open);
	REQUIRE(op.feasible);
	CHECK(op.solution[0] > Rational(0));
	CHECK(op.solution[0] < Rational(1));
}

TEST_CASE("tampered certificates are rejected")
{
	LinearSystem bad(1, true);
	bad.add({Rational(1)}, Relation::Eq, Rational(1, 3));
	bad.add({Rational(1)}, Relation::Eq, Rational(1, 2));
	FarkasCertificate c = solve_linear(bad).certificate;
	CHECK(verify_certificate(bad, c));
	for (auto &y : c.multipliers)
		y = -y;
	CHECK_FALSE(verify_certificate(bad, c));
	CHECK_FALSE(verify_certificate(bad, FarkasCertificate{{Rational(0), Rational(0)}}));
}

TEST_CASE("optimization")
{
	LinearSystem s(2, true);
	s.add({Rational(1), Rational(2)}, Relation::Le, Rational(4));
	s.add({Rational(3), Rational(1)}, Relation::Le, Rational(6));
	LpResult r = maximize(s, {Rational(1), Rational(1)});
	REQUIRE(r.status == LpStatus::Optimal);
	CHECK(r.value == Rational(14, 5));
	LinearSystem free(1);
	CHECK(maximize(free, {Rational(1)}).status == LpStatus::Unbounded);
}

TEST_CASE("property: simplex agrees with Fourier-Motzkin")
{
	std::mt19937 rng(41);
	auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
	int feasible = 0, infeasible = 0;
	for (int it = 0; it < 400; ++it) {
		std::size_t n = static_cast<std::size_t>(pick(1, 3));
		LinearSystem s(n);
		for (std::size_t j = 0; j < n; ++j)
			s.nonneg[j] = pick(0, 1) == 1;
		int m = pick(1, 5);
		for (int i = 0; i < m; ++i) {
			std::vector<Rational> a(n);
			for (auto &c : a)
				c = Rational(pick(-3, 3));
			Relation rel = static_cast<Relation>(pick(0, 2));
			s.add(a, rel, Rational(pick(-4, 4), pick(1, 3)));
		}
		LinearResult r = solve_linear(s);
		CHECK(r.feasible == fm_feasible(as_ineqs(s), n));
		if (r.feasible) {
			CHECK(satisfies(s, r.solution));
			++feasible;
		} else {
			CHECK(verify_certificate(s, r.certificate));
			++infeasible;
		}
	}
	CHECK(feasible > 50);
	CHECK(infeasible > 50);
}

TEST_CASE("polynomials")
{
	Polynomial x = Polynomial::variable("x"), y = Polynomial::variable("y");
	Polynomial p = (x + y) * (x - y);
	CHECK(p == x * x - y * y);
	CHECK(p.degree() == 2);
	CHECK_FALSE(p.is_linear());
	CHECK((x - x).is_zero());
	CHECK((x + Rational(2)).constant_term() == Rational(2));
	CHECK((Rational(3) * x).coefficient("x") == Rational(3));
	CHECK(p.eval({{"x", Rational(3)}, {"y", Rational(1, 2)}}) == Rational(35, 4));
	CHECK(p.substitute({{"y", Rational(1)}}) == x * x - Rational(1));
	CHECK(p.variables() == std::set<std::string>{"x", "y"});
}
