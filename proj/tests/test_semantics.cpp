/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "doctest.h"
#include "mtl/error.hpp"
#include "mtl/semantics.hpp"

#include <random>
#include <set>

using namespace mtl;

namespace {

const char *kGenotypes[] = {"AA", "Aa", "aa"};

// the 27 (father, mother, child) triples, built here independently of the corpus module
FiniteStructure genotype_triples()
{
	std::vector<std::string> ids;
	for (int f = 0; f < 3; ++f)
		for (int m = 0; m < 3; ++m)
			for (int c = 0; c < 3; ++c)
				ids.push_back(std::string(kGenotypes[f]) + "-" + kGenotypes[m] + "-" + kGenotypes[c]);
	FiniteStructure M("genotype", ids);
	const char *roles[] = {"f", "m", "c"};
	for (int r = 0; r < 3; ++r) {
		for (int k = 0; k < 3; ++k) {
			std::vector<std::vector<Element>> tuples;
			for (int e = 0; e < 27; ++e) {
				int digit = r == 0 ? e / 9 : r == 1 ? (e / 3) % 3 : e % 3;
				if (digit == k)
					tuples.push_back({e});
			}
			M.add_relation(std::string("P_") + roles[r] + "_" + kGenotypes[k], 1, tuples);
		}
	}
	M.validate();
	return M;
}

// independent model for the property oracle: plain vectors, no encoded tables
struct RawModel {
	int n;
	std::set<std::vector<int>> R, E;   // unary R, binary E
	std::vector<int> f;                // unary function
	int c;
};

struct Gen {
	std::mt19937 rng;
	explicit Gen(unsigned s) : rng(s) {}
	int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

	RawModel model()
	{
		RawModel m;
		m.n = 1 + pick(4);
		for (int a = 0; a < m.n; ++a) {
			if (pick(2))
				m.R.insert({a});
			for (int b = 0; b < m.n; ++b)
				if (pick(2))
					m.E.insert({a, b});
			m.f.push_back(pick(m.n));
		}
		m.c = pick(m.n);
		return m;
	}

	Term0 term()
	{
		switch (pick(4)) {
		case 0: return Term0::constant("c");
		case 1: return Term0::apply("f", {Term0::var(pick(3))});
		default: return Term0::var(pick(3));
		}
	}

	Formula0 formula(int depth)
	{
		int k = depth <= 0 ? pick(3) : pick(9);
		switch (k) {
		case 0: return Formula0::eq(term(), term());
		case 1: return Formula0::rel("R", {term()});
		case 2: return Formula0::rel("E", {term(), term()});
		case 3: return Formula0::negate(formula(depth - 1));
		case 4: return Formula0::binary(Op::And, formula(depth - 1), formula(depth - 1));
		case 5: return Formula0::binary(Op::Or, formula(depth - 1), formula(depth - 1));
		case 6: return Formula0::binary(Op::Implies, formula(depth - 1), formula(depth - 1));
		case 7: return Formula0::quantify(Op::Exists, pick(3), formula(depth - 1));
		default: return Formula0::quantify(Op::Forall, pick(3), formula(depth - 1));
		}
	}
};

FiniteStructure to_structure(const RawModel &m)
{
	std::vector<std::string> ids;
	for (int a = 0; a < m.n; ++a)
		ids.push_back("e" + std::to_string(a));
	FiniteStructure A("raw", ids);
	A.add_relation("R", 1, {m.R.begin(), m.R.end()});
	A.add_relation("E", 2, {m.E.begin(), m.E.end()});
	A.add_function("f", 1);
	for (int a = 0; a < m.n; ++a)
		A.set_value("f", {a}, m.f[static_cast<std::size_t>(a)]);
	A.add_constant("c", m.c);
	A.validate();
	return A;
}

int oracle_term(const RawModel &m, const Term0 &t, std::map<int, int> &s)
{
	if (t.kind() == Term0::Kind::Var)
		return s.at(t.var_index());
	if (t.kind() == Term0::Kind::Const)
		return m.c;
	return m.f[static_cast<std::size_t>(oracle_term(m, t.args()[0], s))];
}

bool oracle(const RawModel &m, const Formula0 &f, std::map<int, int> s)
{
	auto term = [&](std::size_t i) { return oracle_term(m, f.terms()[i], s); };
	switch (f.op()) {
	case Op::Eq: return term(0) == term(1);
	case Op::Rel:
		if (f.symbol() == "R")
			return m.R.count({term(0)}) > 0;
		return m.E.count({term(0), term(1)}) > 0;
	case Op::Not: return !oracle(m, f.child(0), s);
	case Op::And: return oracle(m, f.child(0), s) && oracle(m, f.child(1), s);
	case Op::Or: return oracle(m, f.child(0), s) || oracle(m, f.child(1), s);
	case Op::Implies: return !oracle(m, f.child(0), s) || oracle(m, f.child(1), s);
	case Op::Exists:
	case Op::Forall: {
		int count = 0;
		for (int a = 0; a < m.n; ++a) {
			s[f.bound_var()] = a;
			count += oracle(m, f.child(0), s);
		}
		return f.op() == Op::Exists ? count > 0 : count == m.n;
	}
	default: throw std::logic_error("unexpected op");
	}
}

} // namespace

TEST_CASE("boolean structure")
{
	FiniteStructure B = boolean_structure();
	const Signature &sig = B.signature();
	CHECK(sig == boolean_signature());
	CHECK(sat_fo(B, Assignment({0, 1}, {1, 1}), parse_l0("(v0 & v1) = 1", sig)));
	CHECK_FALSE(sat_fo(B, Assignment({0, 1}, {1, 0}), parse_l0("(v0 & v1) = 1", sig)));
	for (Element a = 0; a < 2; ++a)
		CHECK(sat_fo(B, Assignment({0}, {a}), parse_l0("exists v9 (v9 = ~v0)", sig)));
	CHECK(valid_on(B, parse_l0("forall v0 forall v1 ((v0 & v1) = 1 -> v0 = 1)", sig)));
	CHECK_FALSE(valid_on(B, parse_l0("forall v0 (v0 = 1)", sig)));
	CHECK_THROWS_AS(valid_on(B, parse_l0("v0 = 1", sig)), ValidationError);
	CHECK_THROWS_AS(sat_fo(B, Assignment{}, parse_l0("v0 = 1", sig)), EvalError);
}

TEST_CASE("implication over B2")
{
	FiniteStructure B = boolean_structure();
	const Signature &sig = B.signature();
	VarTuple x{0, 1};
	auto phi = parse_l0("(v0 & v1) = 1", sig), psi = parse_l0("v0 = 1", sig);
	CHECK(implication_holds(B, phi, psi, x));
	CHECK_FALSE(implication_holds(B, psi, phi, x));
	CHECK_THROWS_AS(implication_holds(B, phi, psi, VarTuple{0}), ValidationError);
}

TEST_CASE("genotype structure")
{
	FiniteStructure M = genotype_triples();
	const Signature &sig = M.signature();
	Element e = M.element("AA-Aa-Aa");
	CHECK(sat_fo(M, Assignment({0}, {e}), parse_l0("P_f_AA(v0)", sig)));
	CHECK_FALSE(sat_fo(M, Assignment({0}, {e}), parse_l0("P_m_aa(v0)", sig)));
	CHECK(valid_on(M, parse_l0("forall v0 (P_f_AA(v0) -> ~P_f_aa(v0))", sig)));
	CHECK(implication_holds(M, parse_l0("P_c_AA(v0)", sig), parse_l0("P_c_AA(v0) | P_c_Aa(v0)", sig), {0}));
	// each role partitions the 27 triples into three blocks of 9
	CHECK(valid_on(M, parse_l0("forall v0 (P_c_AA(v0) | P_c_Aa(v0) | P_c_aa(v0))", sig)));
}

TEST_CASE("structure JSON round trip and validation")
{
	FiniteStructure B = boolean_structure();
	FiniteStructure C = FiniteStructure::parse_json(B.to_json());
	CHECK(C.to_json() == B.to_json());
	CHECK(C.signature().is_function("&"));

	CHECK_THROWS_AS(FiniteStructure::parse_json(R"({"domain":["a","b"],"functions":{"f":{"arity":1,"table":[["a","b"]]}}})"),
	                ValidationError);
	CHECK_THROWS_AS(FiniteStructure::parse_json(R"({"domain":["a"],"relations":{"R":{"arity":1,"tuples":[["z"]]}}})"),
	                ValidationError);
	CHECK_THROWS_AS(FiniteStructure::parse_json(R"({"domain":["a"],"relations":{"R":{"arity":2,"tuples":[["a"]]}}})"),
	                ValidationError);
	CHECK_THROWS_AS(FiniteStructure::parse_json(R"({"domain":["a","a"]})"), ValidationError);
	CHECK_THROWS_AS(FiniteStructure::parse_json("{"), ValidationError);

	FiniteStructure D = FiniteStructure::parse_json(
	    R"({"name":"tiny","domain":["a","b",3],"relations":{"R":{"arity":1,"tuples":[["a"]]},"Q":{"arity":0,"holds":true}},
	        "constants":{"k":3}})");
	CHECK(D.size() == 3);
	CHECK(D.constant("k") == D.element("3"));
	CHECK(valid_on(D, parse_l0("Q & exists v0 R(v0) & ~R(k)", D.signature())));
}

TEST_CASE("loads the shipped structure files")
{
	FiniteStructure B = FiniteStructure::load(MTL_DATA_DIR "/structures/b2.json");
	CHECK(B.to_json() == boolean_structure().to_json());
	FiniteStructure M = FiniteStructure::load(MTL_DATA_DIR "/structures/genotype.json");
	CHECK(M.to_json() == genotype_triples().to_json());
}

TEST_CASE("property: satisfaction matches a brute-force oracle")
{
	Gen gen(21);
	for (int i = 0; i < 300; ++i) {
		RawModel m = gen.model();
		FiniteStructure A = to_structure(m);
		for (int j = 0; j < 10; ++j) {
			Formula0 phi = gen.formula(4);
			std::vector<Element> vals{gen.pick(m.n), gen.pick(m.n), gen.pick(m.n)};
			std::map<int, int> s{{0, vals[0]}, {1, vals[1]}, {2, vals[2]}};
			INFO(print(phi));
			CHECK(sat_fo(A, Assignment({0, 1, 2}, vals), phi) == oracle(m, phi, s));
			CHECK(valid_on(A, universal_closure({0, 1, 2}, Formula0::implies(phi, phi))));
		}
	}
}

TEST_CASE("property: implication is a preorder")
{
	Gen gen(22);
	for (int i = 0; i < 100; ++i) {
		FiniteStructure A = to_structure(gen.model());
		VarTuple x{0, 1, 2};
		Formula0 a = gen.formula(2), b = gen.formula(2), c = gen.formula(2);
		CHECK(implication_holds(A, a, a, x));
		if (implication_holds(A, a, b, x) && implication_holds(A, b, c, x))
			CHECK(implication_holds(A, a, c, x));
		// transitivity through a conjunction, which always yields a chain
		Formula0 ab = Formula0::conj(a, b);
		CHECK(implication_holds(A, ab, a, x));
		CHECK(implication_holds(A, Formula0::conj(ab, c), a, x));
	}
}
