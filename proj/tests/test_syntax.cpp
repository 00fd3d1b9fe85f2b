/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "doctest.h"
#include "mtl/error.hpp"
#include "mtl/syntax.hpp"

#include <random>

using namespace mtl;

namespace {

Signature test_sig()
{
	Signature s("test");
	s.add_relation("R", 1).add_relation("E", 2).add_relation("P", 0);
	s.add_function("f", 1).add_function("g", 2).add_constant("c").add_constant("d");
	return s;
}

struct Gen {
	std::mt19937 rng;
	explicit Gen(unsigned seed) : rng(seed) {}
	int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

	Term0 term(int depth)
	{
		int k = depth <= 0 ? pick(2) : pick(4);
		switch (k) {
		case 0: return Term0::var(pick(4));
		case 1: return Term0::constant(pick(2) ? "c" : "d");
		case 2: return Term0::apply("f", {term(depth - 1)});
		default: return Term0::apply("g", {term(depth - 1), term(depth - 1)});
		}
	}

	Formula0 f0(int depth)
	{
		int k = depth <= 0 ? pick(4) : pick(10);
		switch (k) {
		case 0: return Formula0::eq(term(1), term(1));
		case 1: return Formula0::rel("R", {term(1)});
		case 2: return Formula0::rel("E", {term(1), term(1)});
		case 3: return Formula0::rel("P", {});
		case 4: return Formula0::negate(f0(depth - 1));
		case 5: return Formula0::binary(Op::And, f0(depth - 1), f0(depth - 1));
		case 6: return Formula0::binary(Op::Or, f0(depth - 1), f0(depth - 1));
		case 7: return Formula0::binary(Op::Implies, f0(depth - 1), f0(depth - 1));
		case 8: return Formula0::binary(Op::Iff, f0(depth - 1), f0(depth - 1));
		default: return Formula0::quantify(pick(2) ? Op::Forall : Op::Exists, pick(4), f0(depth - 1));
		}
	}

	Term1 t1(int depth)
	{
		int k = depth <= 0 ? pick(3) : pick(7);
		switch (k) {
		case 0: return Term1::var(pick(2) ? "r" : "s");
		case 1: return Term1::num(Rational(pick(7) - 3, pick(3) + 1));
		case 2: return Term1::prob(f0(2));
		case 3: return Term1::add(t1(depth - 1), t1(depth - 1));
		case 4: return Term1::sub(t1(depth - 1), t1(depth - 1));
		case 5: return Term1::mul(t1(depth - 1), t1(depth - 1));
		default: return Term1::neg(t1(depth - 1));
		}
	}

	Formula1 f1(int depth)
	{
		int k = depth <= 0 ? pick(3) : pick(9);
		static const Op rels[] = {Op::Eq, Op::Le, Op::Lt};
		switch (k) {
		case 0:
		case 1:
		case 2: return Formula1::atom(rels[k], t1(2), t1(2));
		case 3: return Formula1::negate(f1(depth - 1));
		case 4: return Formula1::binary(Op::And, f1(depth - 1), f1(depth - 1));
		case 5: return Formula1::binary(Op::Or, f1(depth - 1), f1(depth - 1));
		case 6: return Formula1::binary(Op::Implies, f1(depth - 1), f1(depth - 1));
		case 7: return Formula1::binary(Op::Iff, f1(depth - 1), f1(depth - 1));
		default: return Formula1::quantify(pick(2) ? Op::Forall : Op::Exists, pick(2) ? "r" : "s", f1(depth - 1));
		}
	}

	PropFormula prop(int depth)
	{
		using K = PropFormula::Kind;
		int k = depth <= 0 ? pick(3) : pick(8);
		switch (k) {
		case 0: return PropFormula::var(pick(3));
		case 1: return PropFormula::constant(true);
		case 2: return PropFormula::constant(false);
		case 3: return PropFormula::negate(prop(depth - 1));
		case 4: return PropFormula::binary(K::And, prop(depth - 1), prop(depth - 1));
		case 5: return PropFormula::binary(K::Or, prop(depth - 1), prop(depth - 1));
		case 6: return PropFormula::binary(K::Implies, prop(depth - 1), prop(depth - 1));
		default: return PropFormula::binary(K::Iff, prop(depth - 1), prop(depth - 1));
		}
	}
};

const VarTuple kDom{0, 1, 2, 3};

} // namespace

TEST_CASE("L0 parsing")
{
	Signature sig = test_sig();
	Formula0 f = parse_l0("forall v0 (R(v0) -> exists v1 E(v0, v1))", sig);
	CHECK(f.op() == Op::Forall);
	CHECK(f.is_sentence());
	CHECK(print(f) == "forall v0 (R(v0) -> (exists v1 E(v0, v1)))");

	CHECK(print(parse_l0("R(v0) & R(v1) | P", sig)) == "R(v0) & R(v1) | P");
	CHECK(parse_l0("R(v0) -> R(v1) -> P", sig) == parse_l0("R(v0) -> (R(v1) -> P)", sig));
	CHECK(parse_l0("g(v0, c) = f(d)", sig).op() == Op::Eq);
	CHECK(parse_l0("∀v0 (R(v0) ∧ ¬P)", sig) == parse_l0("forall v0 (R(v0) & ~P)", sig));
	CHECK(parse_l0("R(v2) & E(v0, v3)", sig).free_vars() == std::set<int>{0, 2, 3});
}

TEST_CASE("L0 parse errors carry positions")
{
	Signature sig = test_sig();
	CHECK_THROWS_AS(parse_l0("R(v0", sig), ParseError);
	CHECK_THROWS_AS(parse_l0("Q(v0)", sig), ParseError);
	CHECK_THROWS_AS(parse_l0("R(v0, v1)", sig), ParseError);
	CHECK_THROWS_AS(parse_l0("R(v0) &", sig), ParseError);
	try {
		parse_l0("R(v0) & E(v0 v1)", sig);
		FAIL("expected a parse error");
	} catch (const ParseError &e) {
		CHECK(e.where().line == 1);
		CHECK(e.where().column >= 13);
	}
}

TEST_CASE("L1 parsing")
{
	Signature sig = test_sig();
	Formula1 f = parse_l1("|R(v0)| + |~R(v0)| = 1", sig, kDom);
	CHECK(f.op() == Op::Eq);
	CHECK(f.prob_constants().size() == 2);
	CHECK(print(f) == "|R(v0)| + |~(R(v0))| = 1");

	// '|' inside a probability constant is disjunction when it can be
	Formula1 g = parse_l1("|R(v0) | R(v1)| <= 1/2", sig, kDom);
	CHECK(g.lhs().formula().op() == Op::Or);

	CHECK(parse_l1("|P| >= 1/3", sig, kDom) == parse_l1("1/3 <= |P|", sig, kDom));
	CHECK(parse_l1("0 <= |P| <= 1", sig, kDom).op() == Op::And);
	CHECK(parse_l1("|P| != 0", sig, kDom).op() == Op::Not);
	CHECK(parse_l1("|P| = 0.25", sig, kDom).rhs().value() == Rational(1, 4));
	CHECK(parse_l1("exists r (0 <= r & r <= 1 & |P| = r * r)", sig, kDom).is_sentence());
	CHECK(parse_l1("-2 * r = s", sig, kDom).lhs().args()[0].value() == Rational(-2));

	CHECK_THROWS_AS(parse_l1("|R(v7)| = 1", sig, kDom), ParseError);
	CHECK_THROWS_AS(parse_l1("v0 = 1", sig, kDom), ParseError);
	CHECK_THROWS_AS(parse_l1("f(r) = 1", sig, kDom), ParseError);
}

TEST_CASE("positive bounded fragment")
{
	Signature sig = test_sig();
	auto pb = [&](const char *s) { return parse_l1(s, sig, kDom).is_positive_bounded(); };
	CHECK(pb("|P| <= 1/2 & |R(v0)| = |P|"));
	CHECK(pb("exists r (0 <= r & r <= 1 & |P| = r * r)"));
	CHECK(pb("forall r (|P| <= r | r <= |P|)"));
	CHECK_FALSE(pb("exists r |P| = r"));
	CHECK_FALSE(pb("|P| < 1"));
	CHECK_FALSE(pb("~(|P| = 1)"));
	CHECK_FALSE(pb("|P| = 1 -> |P| = 0"));
}

TEST_CASE("round trip: parse(print(f)) == f for random L0 formulas")
{
	Signature sig = test_sig();
	Gen gen(11);
	for (int i = 0; i < 2000; ++i) {
		Formula0 f = gen.f0(6);
		std::string s = print(f);
		INFO(s);
		CHECK(parse_l0(s, sig) == f);
	}
}

TEST_CASE("round trip: parse(print(f)) == f for random L1 formulas")
{
	Signature sig = test_sig();
	Gen gen(12);
	for (int i = 0; i < 1000; ++i) {
		Formula1 f = gen.f1(4);
		std::string s = print(f);
		INFO(s);
		CHECK(parse_l1(s, sig, kDom) == f);
	}
}

TEST_CASE("round trip for propositional formulas and boolean terms")
{
	Signature b2 = boolean_signature();
	Gen gen(13);
	for (int i = 0; i < 1000; ++i) {
		PropFormula p = gen.prop(5);
		INFO(print(p));
		CHECK(parse_prop(print(p)) == p);
		Formula0 enc = boolean_encoding(p);
		INFO(print(enc));
		CHECK(parse_l0(print(enc), b2) == enc);
	}
}

TEST_CASE("boolean encoding")
{
	Signature b2 = boolean_signature();
	CHECK(print(boolean_encoding(parse_prop("v0 & ~v1"))) == "(v0 & ~v1) = 1");
	CHECK(print(boolean_encoding(parse_prop("v0 -> v1"))) == "(~v0 | v1) = 1");
	CHECK(print(boolean_term(parse_prop("v0 <-> v1"))) == "v0 & v1 | ~v0 & ~v1");
	CHECK(parse_l0("~v0 = 1", b2).op() == Op::Eq);
	CHECK(parse_l0("(v0 | v1) = 1 | v0 = 0", b2).op() == Op::Or);
	CHECK_NOTHROW(check_sorts(boolean_encoding(parse_prop("(v0 | v1) & true")), b2));
}

TEST_CASE("sort checking")
{
	Signature sig = test_sig();
	Signature other("other");
	other.add_relation("R", 2);
	Formula0 f = parse_l0("R(v0)", sig);
	CHECK_NOTHROW(check_sorts(f, sig));
	CHECK_THROWS_AS(check_sorts(f, other), ValidationError);
	CHECK_THROWS_AS(check_sorts(parse_l1("|R(v2)| = 1", sig, kDom), sig, VarTuple{0}), ValidationError);
}

TEST_CASE("variable names")
{
	CHECK(var_name(12) == "v12");
	CHECK(parse_var_name("v12") == 12);
	CHECK(parse_var_name("v0") == 0);
	CHECK(parse_var_name("v01") == -1);
	CHECK(parse_var_name("vx") == -1);
	CHECK(parse_var_name("r") == -1);
}
