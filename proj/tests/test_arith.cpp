/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "doctest.h"
#include "mtl/arith.hpp"
#include "mtl/error.hpp"
#include "mtl/syntax.hpp"
#include "mtl/team.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

using namespace mtl;

namespace {

const Signature &sig()
{
	static const Signature s = boolean_signature();
	return s;
}

const VarTuple kDom{0, 1, 2, 3};

Formula1 l1(const std::string &s) { return parse_l1(s, sig(), kDom); }
Formula0 l0(const std::string &s) { return parse_l0(s, sig()); }

Grounding grounding(std::initializer_list<std::pair<const char *, Rational>> values)
{
	Grounding g;
	for (const auto &[phi, q] : values)
		g.set(l0(phi), q);
	return g;
}

Verdict quantified(const std::string &s, const Grounding &g = {})
{
	return eval_quantified(l1(s), g, ArithPolicy{});
}

// substitutes rational values for real variables by text replacement, then decides the
// resulting ground sentence
bool check_witness(std::string matrix, const std::map<std::string, Rational> &w, const Grounding &g)
{
	for (const auto &[v, q] : w) {
		std::string lit = "(" + (q.sign() < 0 ? "0 - " + q.abs().str() : q.str()) + ")";
		for (std::size_t at = matrix.find(v); at != std::string::npos; at = matrix.find(v, at + lit.size()))
			matrix.replace(at, v.size(), lit);
	}
	return eval_ground_qf(l1(matrix), g).truth == Truth::Holds;
}

} // namespace

TEST_CASE("ground terms")
{
	Grounding g = grounding({{"v0 = 1", Rational(1, 2)}, {"v1 = 1", Rational(1, 3)}});
	CHECK(eval_ground_term(l1("|v0 = 1| + |v1 = 1| = 0").lhs(), g) == Rational(5, 6));
	CHECK(eval_ground_term(l1("c_{2/3} * c_{3/4} = 0").lhs(), {}) == Rational(1, 2));
	CHECK(eval_ground_term(l1("2/3 * 3/4 = 0").lhs(), {}) == Rational(1, 2));
	Grounding h = grounding({{"v0 = 1", Rational(1, 8)}});
	CHECK(eval_ground_term(l1("1 - |v0 = 1| = 0").lhs(), h) == Rational(7, 8));
	CHECK(eval_ground_term(l1("-c_{-1/2} = 0").lhs(), {}) == Rational(1, 2));

	CHECK_THROWS_AS(eval_ground_term(l1("|v2 = 1| = 0").lhs(), g), EvalError);
	CHECK_THROWS_AS(eval_ground_term(l1("r + 1 = 0").lhs(), g), EvalError);
	CHECK(eval_ground_qf(l1("|v0 = 1| <= 1/2"), g).truth == Truth::Holds);
	CHECK(eval_ground_qf(l1("|v0 = 1| < 1/2"), g).truth == Truth::Fails);
	CHECK_THROWS_AS(eval_ground_qf(l1("exists r (0 <= r <= 1 & r = 0)"), g), EvalError);
}

TEST_CASE("ground formulas under the eight-row team grounding")
{
	FiniteStructure B = boolean_structure();
	DiscreteMeasureTeam X = load_team(MTL_DATA_DIR "/teams/binary8.csv", TeamFormat::Auto, B);
	Formula1 wrong = l1("|v0 = 1| = 2/3");
	Grounding g = ground_constants(X, B, wrong.prob_constants());
	CHECK(g.at(l0("v0 = 1")) == Rational(1, 2));
	CHECK(eval_ground_qf(wrong, g).truth == Truth::Fails);

	for (const char *s : {"|v0 = 1| = |v0 = 1 & v2 = 1| + |v0 = 1 & ~(v2 = 1)|", "|v3 = 1| <= 1",
	                      "0 <= |v2 = 1 -> v3 = 1|", "|v0 = 1 | v1 = 1| = |v0 = 1| + |v1 = 1| - |v0 = 1 & v1 = 1|"}) {
		Formula1 f = l1(s);
		CHECK_MESSAGE(eval_ground_qf(f, ground_constants(X, B, f.prob_constants())).truth == Truth::Holds, s);
	}
}

TEST_CASE("quantified sentences")
{
	Grounding quarter = grounding({{"v0 = 1", Rational(1, 4)}});
	Verdict v = quantified("exists r (0 <= r <= 1 & r * r = |v0 = 1|)", quarter);
	REQUIRE(v.truth == Truth::Holds);
	CHECK(v.witness.at("r") == Rational(1, 2));

	Verdict two = quantified("exists r (0 <= r <= 1 & r * r = c_{2})");
	CHECK(two.truth == Truth::Fails);

	Grounding half = grounding({{"v0 = 1", Rational(1, 2)}});
	Verdict irr = quantified("exists r (0 <= r <= 1 & r * r = |v0 = 1|)", half);
	CHECK(irr.truth == Truth::Unknown);
	REQUIRE(irr.delta);
	CHECK(*irr.delta == Rational(1, 1L << 20));

	ArithPolicy coarse;
	coarse.delta = Rational(1, 16);
	Verdict c = eval_quantified(l1("exists r (0 <= r <= 1 & r * r = |v0 = 1|)"), half, coarse);
	CHECK(c.truth == Truth::Unknown);
	CHECK(*c.delta == Rational(1, 16));

	CHECK(quantified("forall r (0 <= r <= 1 -> r * r <= 2)").truth == Truth::Holds);
	Verdict cex = quantified("forall r (0 <= r <= 1 -> r * r <= 1/2)");
	REQUIRE(cex.truth == Truth::Fails);
	CHECK(cex.witness.at("r") * cex.witness.at("r") > Rational(1, 2));

	// two complex numbers as pairs of reals: a unit vector orthogonal to (1, 1)
	Verdict pair = quantified("exists x exists y (-2 <= x <= 2 & -2 <= y <= 2 & x + y = 0 & x * x + y * y = 2)");
	REQUIRE(pair.truth == Truth::Holds);
	CHECK(pair.witness.at("x") * pair.witness.at("x") == Rational(1));

	CHECK(quantified("exists r (0 <= r <= 1 & r = 1/3) & 1 <= 2").truth == Truth::Holds);
	CHECK(quantified("exists r (0 <= r <= 1 & r = 1/3) & 2 <= 1").truth == Truth::Fails);
	CHECK(quantified("(exists r (0 <= r <= 1 & r = 2)) | (exists s (0 <= s <= 1 & s = 1/7))").truth == Truth::Holds);
	CHECK(quantified("exists r (0 <= r <= 1 & (r = 2 | r = 3/5))").truth == Truth::Holds);
	CHECK(quantified("exists r (0 <= r <= 1 & r * r < 0)").truth == Truth::Fails);
	CHECK(quantified("exists r (1 <= r <= 0)").truth == Truth::Fails);

	CHECK_THROWS_AS(quantified("exists r (0 <= r & r * r = 2)"), EvalError);
	CHECK_THROWS_AS(quantified("exists r (r = s)"), EvalError);

	ArithPolicy tiny;
	tiny.max_boxes = 3;
	Verdict budget = eval_quantified(l1("exists r (0 <= r <= 1 & r * r - r = -1/5)"), {}, tiny);
	CHECK(budget.truth == Truth::Unknown);
	CHECK(budget.reason.find("budget") != std::string::npos);
}

TEST_CASE("property: agreement with a substitute-and-compare oracle")
{
	std::mt19937 rng(7);
	auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
	const std::vector<std::string> constants{"v0 = 1", "v1 = 1", "v0 = v1", "(v2 & v3) = 1"};
	auto rational = [&] { return Rational(pick(13) - 6, 1 + pick(6)); };

	for (int trial = 0; trial < 1000; ++trial) {
		Grounding g;
		std::vector<Rational> vals;
		for (const auto &c : constants) {
			vals.push_back(Rational(pick(9), 8));
			g.set(l0(c), vals.back());
		}
		// a term is rendered as text while its value is computed alongside
		std::function<std::pair<std::string, Rational>(int)> term = [&](int depth) -> std::pair<std::string, Rational> {
			int k = depth == 0 ? pick(2) : pick(5);
			if (k == 0) {
				Rational q = rational();
				return {q.sign() < 0 ? "c_{" + q.str() + "}" : q.str(), q};
			}
			if (k == 1) {
				int i = pick(4);
				return {"|" + constants[i] + "|", vals[i]};
			}
			auto a = term(depth - 1), b = term(depth - 1);
			if (k == 2)
				return {"(" + a.first + " + " + b.first + ")", a.second + b.second};
			if (k == 3)
				return {"(" + a.first + " - " + b.first + ")", a.second - b.second};
			return {"(" + a.first + " * " + b.first + ")", a.second * b.second};
		};
		std::function<std::pair<std::string, bool>(int)> formula = [&](int depth) -> std::pair<std::string, bool> {
			int k = depth == 0 ? 0 : pick(5);
			if (k == 0) {
				auto a = term(2), b = term(2);
				int r = pick(3);
				const char *rel = r == 0 ? " = " : r == 1 ? " <= " : " < ";
				bool t = r == 0 ? a.second == b.second : r == 1 ? a.second <= b.second : a.second < b.second;
				return {a.first + rel + b.first, t};
			}
			if (k == 1) {
				auto a = formula(depth - 1);
				return {"~(" + a.first + ")", !a.second};
			}
			auto a = formula(depth - 1), b = formula(depth - 1);
			if (k == 2)
				return {"(" + a.first + ") & (" + b.first + ")", a.second && b.second};
			if (k == 3)
				return {"(" + a.first + ") | (" + b.first + ")", a.second || b.second};
			return {"(" + a.first + ") -> (" + b.first + ")", !a.second || b.second};
		};
		auto [text, expected] = formula(3);
		Verdict v = eval_ground_qf(l1(text), g);
		REQUIRE_MESSAGE(v.truth == (expected ? Truth::Holds : Truth::Fails), text);
	}
}

TEST_CASE("property: witnesses check and seeded instances never fail")
{
	std::mt19937 rng(11);
	auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
	auto lit = [](const Rational &q) { return q.sign() < 0 ? "c_{" + q.str() + "}" : q.str(); };
	int holds = 0;
	for (int trial = 0; trial < 150; ++trial) {
		// a rational point (r0, s0) inside the box satisfies every constraint by construction
		Rational r0(pick(17) - 8, 1 + pick(4)), s0(pick(17) - 8, 1 + pick(4));
		Rational a(pick(7) - 3), b(pick(7) - 3), c(pick(5) - 2);
		Rational rhs1 = a * r0 * r0 + b * s0, rhs2 = c * r0 * s0 + r0;
		std::string m = "-9 <= r <= 9 & -9 <= s <= 9";
		m += " & " + lit(a) + " * r * r + " + lit(b) + " * s = " + lit(rhs1);
		m += " & " + lit(c) + " * r * s + r <= " + lit(rhs2 + Rational(pick(3)));
		if (pick(2))
			m += " & (r < " + lit(r0 - Rational(1, 3)) + " | r = " + lit(r0) + ")";
		Verdict v = quantified("exists r exists s (" + m + ")");
		REQUIRE_MESSAGE(v.truth != Truth::Fails, m);
		if (v.truth == Truth::Holds) {
			++holds;
			REQUIRE_MESSAGE(check_witness(m, v.witness, {}), m);
		}
	}
	CHECK(holds > 100);
}

TEST_CASE("external backend")
{
	Grounding half = grounding({{"v0 = 1", Rational(1, 2)}});
	Formula1 f = l1("exists r (0 <= r <= 1 & r * r = |v0 = 1|)");
	std::string smt = to_smtlib(f, half);
	CHECK(smt.find("(assert (exists ((|r| Real)) (and (and (<= 0.0 |r|) (<= |r| 1.0)) (= (* |r| |r|) (/ 1.0 2.0)))))")
	      != std::string::npos);
	CHECK(smt.find("(check-sat)") != std::string::npos);
	CHECK(to_smtlib(l1("c_{-3/4} < -1"), {}).find("(< (- (/ 3.0 4.0)) (- 1.0))") != std::string::npos);

	ArithPolicy ext;
	ext.backend = ArithPolicy::Backend::External;
	ext.command = "sh " MTL_TEST_DIR "/stubs/solver.sh";
	std::string copy = std::string(MTL_TEST_DIR) + "/../build-stub-copy.smt2";
	::setenv("MTL_STUB_COPY", copy.c_str(), 1);
	::setenv("MTL_STUB_ANSWER", "sat", 1);
	CHECK(eval_quantified(f, half, ext).truth == Truth::Holds);
	{
		std::ifstream in(copy);
		std::stringstream ss;
		ss << in.rdbuf();
		CHECK(ss.str() == smt);
	}
	std::remove(copy.c_str());
	::unsetenv("MTL_STUB_COPY");
	::setenv("MTL_STUB_ANSWER", "unsat", 1);
	CHECK(eval_quantified(f, half, ext).truth == Truth::Fails);
	::setenv("MTL_STUB_ANSWER", "unknown", 1);
	CHECK(eval_quantified(f, half, ext).truth == Truth::Unknown);
	::setenv("MTL_STUB_ANSWER", "(error \"x\")", 1);
	CHECK_THROWS_AS(eval_quantified(f, half, ext), EvalError);
	::unsetenv("MTL_STUB_ANSWER");

	ext.command.clear();
	CHECK_THROWS_AS(eval_quantified(f, half, ext), EvalError);
}

TEST_CASE("real-arithmetic entailment")
{
	auto entails = [](std::vector<std::string> ps, const std::string &goal) {
		std::vector<Formula1> fs;
		for (const auto &p : ps)
			fs.push_back(l1(p));
		return rcf_entails(fs, l1(goal));
	};
	CHECK(entails({"|v0 = 1| <= |v1 = 1|", "|v1 = 1| <= |v2 = 1|"}, "|v0 = 1| <= |v2 = 1|").truth == Truth::Holds);
	CHECK(entails({"|v0 = 1| = 1/2", "|v1 = 1| = 1/4"}, "|v0 = 1| + |v1 = 1| = 3/4").truth == Truth::Holds);
	CHECK(entails({"|v0 = 1| < |v1 = 1|"}, "~(|v1 = 1| <= |v0 = 1|)").truth == Truth::Holds);
	CHECK(entails({}, "|v0 = 1| = |v0 = 1|").truth == Truth::Holds);
	CHECK(entails({"1 <= 0"}, "|v0 = 1| = 7").truth == Truth::Holds);
	CHECK(entails({"|v0 = 1| != 0", "0 <= |v0 = 1|"}, "0 < |v0 = 1|").truth == Truth::Holds);

	Verdict no = entails({"|v0 = 1| <= 1"}, "|v0 = 1| <= 1/2");
	REQUIRE(no.truth == Truth::Fails);
	Rational x = no.witness.at("|v0 = 1|");
	CHECK(x <= Rational(1));
	CHECK(x > Rational(1, 2));

	CHECK(entails({"|v0 = 1| = 1/2"}, "|v0 = 1| * |v0 = 1| = 1/4").truth == Truth::Unknown);
	CHECK(entails({}, "0 <= |v0 = 1| * |v0 = 1|").truth == Truth::Unknown);
	CHECK(entails({}, "exists r (0 <= r <= 1 & r = 0)").truth == Truth::Unknown);
}
