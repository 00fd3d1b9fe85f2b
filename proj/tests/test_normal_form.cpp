/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "doctest.h"
#include "mtl/error.hpp"
#include "mtl/normal_form.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace mtl;

namespace {

Signature props()
{
	Signature s("props");
	for (int i = 0; i < 6; ++i)
		s.add_relation("P" + std::to_string(i), 0);
	return s;
}

// truth value over nullary relations P0..P5, bit i of val is P_i
bool truth(const Formula0 &f, unsigned val)
{
	switch (f.op()) {
	case Op::Rel: return (val >> (f.symbol()[1] - '0')) & 1u;
	case Op::Not: return !truth(f.child(0), val);
	case Op::And: return truth(f.child(0), val) && truth(f.child(1), val);
	case Op::Or: return truth(f.child(0), val) || truth(f.child(1), val);
	default: throw std::logic_error("unexpected connective in test oracle");
	}
}

Formula0 random_shaped(std::mt19937 &rng)
{
	auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
	auto atom = [&] {
		Formula0 a = Formula0::rel("P" + std::to_string(pick(6)), {});
		return pick(3) == 0 ? Formula0::negate(a) : a;
	};
	auto chain = [&](Op op, int n, auto make) {
		Formula0 acc = make();
		for (int i = 1; i < n; ++i)
			acc = Formula0::binary(op, acc, make());
		return acc;
	};
	return chain(Op::And, 1 + pick(3), [&] {
		return chain(Op::Or, 1 + pick(3), [&] { return chain(Op::And, 1 + pick(3), atom); });
	});
}

} // namespace

TEST_CASE("distribution examples")
{
	Signature sig = props();
	auto nf = [&](const char *s) { return print(to_disjunctive_shape(parse_l0(s, sig))); };
	CHECK(nf("(P0 | P1) & (P2 | P3)") == "P0 & P2 | P0 & P3 | P1 & P2 | P1 & P3");
	CHECK(nf("P0 & P1") == "P0 & P1");
	CHECK(nf("P0 & (P0 | P1)") == "P0 | P0 & P1");
	CHECK(nf("(P0 | P0) & P1") == "P0 & P1");
	CHECK(nf("~(P0 | P1) & P2") == "~(P0 | P1) & P2");
	CHECK_THROWS_AS(nf("P0 | P1 & (P2 | P3)"), ValidationError);
}

TEST_CASE("distribution over L1 atoms")
{
	Signature sig = props();
	VarTuple dom{0};
	Formula1 f = parse_l1("(|P0| = 1 | |P1| <= 1/2) & |P2| = 0", sig, dom);
	CHECK(print(to_disjunctive_shape(f)) == "|P0| = 1 & |P2| = 0 | |P1| <= 1/2 & |P2| = 0");
}

TEST_CASE("distribution preserves truth tables")
{
	std::mt19937 rng(5);
	for (int i = 0; i < 300; ++i) {
		Formula0 f = random_shaped(rng);
		Formula0 g = to_disjunctive_shape(f);
		INFO(print(f));
		for (unsigned v = 0; v < 64; ++v)
			CHECK(truth(f, v) == truth(g, v));
	}
}

TEST_CASE("canonical enumeration")
{
	Signature sig("unary");
	sig.add_relation("R", 1);
	VarTuple dom{0};
	auto e = canonical_enumeration(sig, dom, 3);
	REQUIRE(!e.empty());
	CHECK(print(e.front()) == "R(v0)");
	CHECK(e == canonical_enumeration(sig, dom, 3));
	for (std::size_t i = 1; i < e.size(); ++i)
		CHECK_FALSE(canonical_less(e[i], e[i - 1]));

	std::ifstream golden(MTL_TEST_DIR "/golden/enumeration_R_v0_2.txt");
	REQUIRE(golden);
	std::vector<std::string> want;
	for (std::string line; std::getline(golden, line);)
		want.push_back(line);
	auto small = canonical_enumeration(sig, dom, 2);
	std::vector<std::string> got;
	for (const auto &f : small)
		got.push_back(print(f));
	CHECK(got == want);
}

TEST_CASE("enumeration restricted to a theory")
{
	Signature sig("unary");
	sig.add_relation("R", 1).add_relation("S", 1);
	VarTuple dom{0};
	std::vector<Formula1> sigma{parse_l1("|R(v0) & S(v0)| = 1/2", sig, dom), parse_l1("|S(v0)| <= |R(v0)|", sig, dom),
	                            parse_l1("|R(v0)| = 1/2", sig, dom)};
	std::vector<std::string> got;
	for (const auto &f : canonical_enumeration(sigma))
		got.push_back(print(f));
	CHECK(got == std::vector<std::string>{"R(v0)", "S(v0)", "R(v0) & S(v0)"});
	CHECK(canonical_enumeration(std::vector<Formula1>{}).empty());
}

TEST_CASE("enumeration cap")
{
	Signature sig("unary");
	sig.add_relation("R", 1);
	CHECK_THROWS_AS(canonical_enumeration(sig, VarTuple{0, 1}, 5, 0, 1000), std::length_error);
}
