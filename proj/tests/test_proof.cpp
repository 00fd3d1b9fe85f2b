/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "doctest.h"
#include "mtl/arith.hpp"
#include "mtl/error.hpp"
#include "mtl/proof.hpp"
#include "mtl/semantics.hpp"
#include "mtl/team.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace mtl;

namespace {

const std::string kData = MTL_DATA_DIR;
const std::string kFixtures = MTL_TEST_DIR "/fixtures/proofs";

Signature rs_signature()
{
	Signature s("RS");
	s.add_relation("R", 1).add_relation("S", 1).add_relation("E", 2);
	return s;
}

std::string slurp(const std::string &path)
{
	std::ifstream in(path);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

struct Gen {
	std::mt19937 rng;
	explicit Gen(unsigned seed) : rng(seed) {}
	int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

	// quantifier-free L0 formula over R, S, E and variables v0, v1
	std::string formula(int depth)
	{
		int k = depth == 0 ? pick(3) : pick(7);
		auto var = [&] { return "v" + std::to_string(pick(2)); };
		switch (k) {
		case 0: return "R(" + var() + ")";
		case 1: return "S(" + var() + ")";
		case 2: return "E(" + var() + ", " + var() + ")";
		case 3: return "~(" + formula(depth - 1) + ")";
		case 4: return "(" + formula(depth - 1) + ") & (" + formula(depth - 1) + ")";
		case 5: return "(" + formula(depth - 1) + ") | (" + formula(depth - 1) + ")";
		default: return var() + " = " + var();
		}
	}

	FiniteStructure structure()
	{
		int n = 1 + pick(3);
		std::vector<std::string> ids;
		for (int a = 0; a < n; ++a)
			ids.push_back("e" + std::to_string(a));
		FiniteStructure A("RS", ids);
		std::vector<std::vector<Element>> R, S, E;
		for (int a = 0; a < n; ++a) {
			if (pick(2))
				R.push_back({a});
			if (pick(2))
				S.push_back({a});
			for (int b = 0; b < n; ++b)
				if (pick(2))
					E.push_back({a, b});
		}
		A.add_relation("R", 1, R).add_relation("S", 1, S).add_relation("E", 2, E);
		A.validate();
		return A;
	}

	DiscreteMeasureTeam team(const FiniteStructure &A, const VarTuple &dom)
	{
		int rows = 1 + pick(5);
		std::vector<long> raw;
		long total = 0;
		for (int i = 0; i < rows; ++i) {
			raw.push_back(1 + pick(4));
			total += raw.back();
		}
		std::vector<TeamRow> out;
		for (int i = 0; i < rows; ++i) {
			std::vector<Element> vals;
			for (std::size_t d = 0; d < dom.size(); ++d)
				vals.push_back(pick(static_cast<int>(A.size())));
			out.push_back({vals, Rational(raw[i], total)});
		}
		return DiscreteMeasureTeam(A, dom, out);
	}
};

Truth holds_on(const Formula1 &f, const DiscreteMeasureTeam &X, const FiniteStructure &A)
{
	return eval_ground_qf(f, ground_constants(X, A, f.prob_constants())).truth;
}

const char *kShipped[] = {"split", "closure_i", "closure_ii", "closure_iii", "closure_iv"};

} // namespace

TEST_CASE("axiom schemas")
{
	Signature sig = rs_signature();
	VarTuple dom{0, 1};
	auto l1 = [&](const std::string &s) { return parse_l1(s, sig, dom); };

	CHECK(check_axiom_instance(Justification::AxA0, l1("|R(v0) & ~R(v0)| = 0")).ok);
	CheckResult bad = check_axiom_instance(Justification::AxA0, l1("|R(v0) & ~S(v0)| = 0"));
	CHECK_FALSE(bad.ok);
	CHECK(bad.reason.find("expected 'R(v0)' but found 'S(v0)'") != std::string::npos);
	CHECK_FALSE(check_axiom_instance(Justification::AxA0, l1("|R(v0) & ~R(v0)| = 1")).ok);
	CHECK_FALSE(check_axiom_instance(Justification::AxA0, l1("0 = |R(v0) & ~R(v0)|")).ok);

	CHECK(check_axiom_instance(Justification::AxA1, l1("|E(v0, v1) | ~E(v0, v1)| = 1")).ok);
	CHECK_FALSE(check_axiom_instance(Justification::AxA1, l1("|E(v0, v1) | ~E(v1, v0)| = 1")).ok);

	CHECK(check_axiom_instance(Justification::AxA2, l1("|R(v0) | S(v1)| = |R(v0)| + |S(v1)| - |R(v0) & S(v1)|")).ok);
	CHECK(check_axiom_instance(Justification::AxA2, l1("|R(v0) | R(v0)| = |R(v0)| + |R(v0)| - |R(v0) & R(v0)|")).ok);
	CheckResult swapped =
		check_axiom_instance(Justification::AxA2, l1("|R(v0) | S(v1)| = |R(v0)| + |S(v1)| - |S(v1) & R(v0)|"));
	CHECK_FALSE(swapped.ok);
	CHECK(swapped.reason.find("expected 'R(v0)' but found 'S(v1)'") != std::string::npos);
	CHECK_FALSE(check_axiom_instance(Justification::AxA2, l1("|R(v0) | S(v1)| = |R(v0)| + |S(v1)|")).ok);
	CHECK_FALSE(check_axiom_instance(Justification::RuleR0, l1("|R(v0)| = 0")).ok);
}

TEST_CASE("rule R0")
{
	FiniteStructure B = boolean_structure();
	const Signature &bs = B.signature();
	Formula0 prem = parse_l0("forall v0 forall v1 ((v0 & v1) = 1 -> v0 = 1)", bs);
	Formula1 conc = parse_l1("|(v0 & v1) = 1| <= |v0 = 1|", bs, {0, 1});
	CHECK(check_r0(prem, conc, Discharge::FoSemantic, {}, &B).ok);
	CHECK_FALSE(check_r0(prem, conc, Discharge::FoSemantic, {}, nullptr).ok);
	CHECK_FALSE(check_r0(prem, conc, Discharge::HypT, {}, &B).ok);
	CHECK(check_r0(prem, conc, Discharge::HypT, {prem}, nullptr).ok);

	Formula1 reversed = parse_l1("|v0 = 1| <= |(v0 & v1) = 1|", bs, {0, 1});
	CheckResult r = check_r0(prem, reversed, Discharge::FoSemantic, {}, &B);
	CHECK_FALSE(r.ok);
	CHECK(r.reason.find("on the left") != std::string::npos);

	Signature sig = rs_signature();
	Formula0 two = parse_l0("(forall v0 (R(v0) -> R(v0) | S(v0))) & (forall v0 (S(v0) & R(v0) -> S(v0)))", sig);
	CHECK(check_r0_shape(two, parse_l1("|R(v0)| <= |R(v0) | S(v0)| & |S(v0) & R(v0)| <= |S(v0)|", sig, {0})).ok);
	CHECK_FALSE(check_r0_shape(two, parse_l1("|S(v0) & R(v0)| <= |S(v0)| & |R(v0)| <= |R(v0) | S(v0)|", sig, {0})).ok);
	CHECK_FALSE(check_r0_shape(two, parse_l1("|R(v0)| <= |R(v0) | S(v0)|", sig, {0})).ok);

	Formula0 either = parse_l0("(forall v0 (R(v0) -> S(v0))) | (forall v0 (S(v0) -> R(v0)))", sig);
	CHECK(check_r0_shape(either, parse_l1("|R(v0)| <= |S(v0)| | |S(v0)| <= |R(v0)|", sig, {0})).ok);

	Formula0 open = parse_l0("R(v0) -> S(v0)", sig);
	CHECK(check_r0_shape(open, parse_l1("|R(v0)| <= |S(v0)|", sig, {0})).reason.find("not a sentence")
	      != std::string::npos);
	Formula0 nonimp = parse_l0("forall v0 (R(v0) | S(v0))", sig);
	CHECK_FALSE(check_r0_shape(nonimp, parse_l1("|R(v0)| <= |S(v0)|", sig, {0})).ok);
}

TEST_CASE("shipped scripts are accepted")
{
	for (const char *name : kShipped) {
		ProofScript s = ProofScript::load(kData + "/proofs/" + name + ".proof");
		ProofReport r = check_proof(s);
		for (const auto &l : r.lines)
			CHECK_MESSAGE(l.ok, name, " line ", l.number, ": ", l.reason);
		CHECK_MESSAGE(r.accepted, name, " ", r.goal_reason);
	}
	ProofScript split = ProofScript::load(kData + "/proofs/split.proof");
	CHECK(split.steps.size() == 9);
	CHECK(std::count_if(split.steps.begin(), split.steps.end(), [](const ProofStep &s) { return !s.is_l0(); }) == 7);
	CHECK(check_proof(split).to_json() == slurp(MTL_TEST_DIR "/golden/proof_split.json"));
}

TEST_CASE("rejections")
{
	ProofReport bad = check_proof(ProofScript::load(kFixtures + "/bad_r0.proof"));
	CHECK_FALSE(bad.accepted);
	REQUIRE(bad.lines.size() == 2);
	CHECK_FALSE(bad.lines[0].ok);
	CHECK_FALSE(bad.lines[1].ok);
	CHECK(bad.lines[1].reason.find("not valid on structure 'RS2'") != std::string::npos);

	ProofReport viaT = check_proof(ProofScript::load(kFixtures + "/theory_r0.proof"));
	CHECK(viaT.accepted);

	const std::string head = "relation R 1\nrelation S 1\ndom v0\n";
	auto run = [&](const std::string &body) { return check_proof(ProofScript::parse(head + body)); };

	ProofReport mism = run("1. |R(v0) & ~S(v0)| = 0 by AX_A0\n");
	CHECK_FALSE(mism.accepted);
	CHECK(mism.lines[0].reason.find("expected 'R(v0)' but found 'S(v0)'") != std::string::npos);

	ProofReport oracle = run("1. |R(v0) & ~R(v0)| = 0 by AX_A0\n2. |R(v0) & ~R(v0)| * |R(v0)| = 0 by RCF_ORACLE 1\n");
	CHECK_FALSE(oracle.accepted);
	CHECK(oracle.lines[1].reason.rfind("ORACLE_INCOMPLETE", 0) == 0);

	ProofReport wrong = run("1. |R(v0) & ~R(v0)| = 0 by AX_A0\n2. |R(v0)| = 0 by RCF_ORACLE 1\n");
	CHECK_FALSE(wrong.lines[1].ok);
	CHECK(wrong.lines[1].reason.find("counterexample") != std::string::npos);

	CHECK_FALSE(run("1. |R(v0)| = 0 by RCF_ORACLE 2\n").lines[0].ok);
	CHECK_FALSE(run("1. [L0] forall v0 R(v0) by AX_A0\n").lines[0].ok);
	CHECK_FALSE(run("1. |R(v0)| <= 1 by FO_SEMANTIC\n").lines[0].ok);
	CHECK_FALSE(run("1. [L0] forall v0 R(v0) by FO_SEMANTIC\n").lines[0].ok);   // no structure
	CHECK_FALSE(run("1. |R(v0)| <= 1 by HYP_SIGMA\n").lines[0].ok);
	CHECK_FALSE(run("1. |R(v0) & ~R(v0)| = 0 by AX_A0 1\n").lines[0].ok);

	ProofReport cascade = run("1. |R(v0) & ~S(v0)| = 0 by AX_A0\n2. |R(v0) & ~S(v0)| <= 0 by RCF_ORACLE 1\n");
	CHECK(cascade.lines[1].reason == "cites rejected line 1");

	ProofReport goal = check_proof(ProofScript::parse(head + "goal: |R(v0)| <= 1\n1. |R(v0) | ~R(v0)| = 1 by AX_A1\n"));
	CHECK(goal.lines[0].ok);
	CHECK_FALSE(goal.accepted);
	CHECK(goal.goal_reason.find("is not the goal") != std::string::npos);
	CHECK_FALSE(check_proof(ProofScript::parse(head)).accepted);
}

TEST_CASE("propositional steps")
{
	const std::string head = "relation R 1\nrelation S 1\ndom v0\nSigma a: |R(v0)| <= 1/2 | |S(v0)| <= 1/2\n"
	                         "Sigma b: ~(|R(v0)| <= 1/2)\n";
	ProofReport r = check_proof(ProofScript::parse(head + "1. |R(v0)| <= 1/2 | |S(v0)| <= 1/2 by HYP_SIGMA\n"
	                                                      "2. ~(|R(v0)| <= 1/2) by HYP_SIGMA\n"
	                                                      "3. |S(v0)| <= 1/2 by PROP_TAUT 1 2\n"
	                                                      "4. |S(v0)| = 0 | ~(|S(v0)| = 0) by PROP_TAUT\n"));
	CHECK(r.accepted);
	ProofReport bad = check_proof(ProofScript::parse(head + "1. |R(v0)| <= 1/2 | |S(v0)| <= 1/2 by HYP_SIGMA\n"
	                                                        "2. |S(v0)| <= 1/2 by PROP_TAUT 1\n"));
	CHECK_FALSE(bad.accepted);
	CHECK(bad.lines[1].reason.find("PROP_TAUT") != std::string::npos);
}

TEST_CASE("script syntax errors")
{
	CHECK_THROWS_AS(ProofScript::parse("relation R 1\ndom v0\n1. |R(v0)| <= 1 by MAGIC\n"), ParseError);
	CHECK_THROWS_AS(ProofScript::parse("relation R 1\ndom v0\n1. |R(v0)| <= 1\n"), ParseError);
	CHECK_THROWS_AS(ProofScript::parse("relation R 1\ndom v0\n2. |R(v0)| <= 1 by AX_A0\n"), ParseError);
	CHECK_THROWS_AS(ProofScript::parse("relation R 1\ndom v0\n1. |Q(v0)| <= 1 by AX_A0\n"), ParseError);
	CHECK_THROWS_AS(ProofScript::parse("relation R 1\ndom v0\nwhatever\n"), ParseError);
	CHECK_THROWS_AS(ProofScript::parse("relation R 1\ndom v0\n1. |R(v1)| <= 1 by AX_A0\n"), ParseError);
	try {
		ProofScript::parse("relation R 1\ndom v0\n\n1. |R(v0) <= 1 by AX_A0\n");
		FAIL("expected a parse error");
	} catch (const ParseError &e) {
		CHECK(e.where().line == 4);
	}
}

TEST_CASE("determinism")
{
	for (const char *name : kShipped) {
		ProofScript s = ProofScript::load(kData + "/proofs/" + name + ".proof");
		CHECK(check_proof(s).to_json() == check_proof(s).to_json());
	}
}

TEST_CASE("property: accepted goals hold on random teams")
{
	Gen g(21);
	for (const char *name : kShipped) {
		ProofScript s = ProofScript::load(kData + "/proofs/" + name + ".proof");
		REQUIRE(check_proof(s).accepted);
		REQUIRE(s.goal->is_quantifier_free());
		for (int t = 0; t < 100; ++t) {
			auto X = g.team(*s.structure, s.dom);
			REQUIRE_MESSAGE(holds_on(*s.goal, X, *s.structure) == Truth::Holds, name);
		}
	}
}

TEST_CASE("property: axiom instances hold on random teams")
{
	Gen g(5);
	Signature sig = rs_signature();
	VarTuple dom{0, 1};
	for (int t = 0; t < 300; ++t) {
		std::string p = g.formula(2), q = g.formula(2);
		std::vector<std::pair<Justification, std::string>> inst{
			{Justification::AxA0, "|(" + p + ") & ~(" + p + ")| = 0"},
			{Justification::AxA1, "|(" + p + ") | ~(" + p + ")| = 1"},
			{Justification::AxA2, "|(" + p + ") | (" + q + ")| = |" + p + "| + |" + q + "| - |(" + p + ") & (" + q + ")|"},
		};
		FiniteStructure A = g.structure();
		auto X = g.team(A, dom);
		for (const auto &[ax, text] : inst) {
			Formula1 f = parse_l1(text, sig, dom);
			REQUIRE_MESSAGE(check_axiom_instance(ax, f).ok, text);
			REQUIRE_MESSAGE(holds_on(f, X, A) == Truth::Holds, text);
		}
	}
}

TEST_CASE("property: R0 acceptance implies monotonicity")
{
	Gen g(9);
	Signature sig = rs_signature();
	VarTuple dom{0, 1};
	int accepted = 0;
	for (int t = 0; t < 100; ++t) {
		FiniteStructure A = g.structure();
		std::string p = g.formula(2), q = g.pick(2) ? "(" + p + ") | (" + g.formula(1) + ")" : g.formula(2);
		Formula0 prem = parse_l0("forall v0 forall v1 ((" + p + ") -> (" + q + "))", sig);
		Formula1 conc = parse_l1("|" + p + "| <= |" + q + "|", sig, dom);
		if (!check_r0(prem, conc, Discharge::FoSemantic, {}, &A).ok)
			continue;
		++accepted;
		for (int k = 0; k < 100; ++k)
			REQUIRE(holds_on(conc, g.team(A, dom), A) == Truth::Holds);
	}
	CHECK(accepted > 50);
}
