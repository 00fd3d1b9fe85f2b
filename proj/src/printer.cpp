/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/error.hpp"
#include "mtl/syntax.hpp"

#include <algorithm>

namespace mtl {

namespace {

bool is_infix_relation(const std::string &s) { return s == "<=" || s == "<"; }

// binding strength; quantifiers bind weakest and are parenthesized unless in tail position
int prec(Op op)
{
	switch (op) {
	case Op::Forall:
	case Op::Exists: return 0;
	case Op::Iff: return 1;
	case Op::Implies: return 2;
	case Op::Or: return 3;
	case Op::And: return 4;
	case Op::Not: return 5;
	default: return 6;
	}
}

const char *connective(Op op)
{
	switch (op) {
	case Op::Iff: return " <-> ";
	case Op::Implies: return " -> ";
	case Op::Or: return " | ";
	case Op::And: return " & ";
	default: return " ? ";
	}
}

std::string paren(const std::string &s) { return "(" + s + ")"; }

// left- and right-operand minimum precedence for a binary connective
std::pair<int, int> operand_prec(Op op)
{
	int p = prec(op);
	if (op == Op::Implies)
		return {p + 1, p};
	return {p, p + 1};
}

template <class F, class AtomPrinter, class VarPrinter>
std::string print_formula(const F &f, int min_prec, AtomPrinter &&atom, VarPrinter &&var)
{
	auto rec = [&](const F &g, int m) { return print_formula(g, m, atom, var); };
	Op op = f.op();
	std::string s;
	if (is_atom(op)) {
		s = atom(f);
	} else if (op == Op::Not) {
		const F &c = f.child(0);
		if (is_atom(c.op()))
			s = "~" + paren(atom(c));
		else
			s = "~" + rec(c, prec(Op::Not));
	} else if (is_quantifier(op)) {
		const F &body = f.child(0);
		std::string b = is_binary_connective(body.op()) ? paren(rec(body, 0)) : rec(body, 0);
		s = std::string(op == Op::Forall ? "forall " : "exists ") + var(f) + " " + b;
	} else {
		auto [lp, rp] = operand_prec(op);
		s = rec(f.child(0), lp) + connective(op) + rec(f.child(1), rp);
	}
	return prec(op) < min_prec ? paren(s) : s;
}

std::string term0(const Term0 &t, bool simple);

std::string term0_simple(const Term0 &t) { return term0(t, true); }

// simple=true: the result must parse as a simple term (no bare infix operator)
std::string term0(const Term0 &t, bool simple)
{
	switch (t.kind()) {
	case Term0::Kind::Var: return var_name(t.var_index());
	case Term0::Kind::Const: return t.symbol();
	case Term0::Kind::Apply: {
		const auto &a = t.args();
		if (t.symbol() == "~" && a.size() == 1)
			return "~" + term0_simple(a[0]);
		if ((t.symbol() == "&" || t.symbol() == "|") && a.size() == 2) {
			// '&' binds tighter than '|'; both left-associative
			auto side = [&](const Term0 &x, bool right) {
				bool infix = x.kind() == Term0::Kind::Apply && x.args().size() == 2
				          && (x.symbol() == "&" || x.symbol() == "|");
				if (!infix)
					return term0_simple(x);
				bool weaker = t.symbol() == "&" && x.symbol() == "|";
				bool same = x.symbol() == t.symbol();
				return term0(x, weaker || (same && right));
			};
			std::string s = side(a[0], false) + " " + t.symbol() + " " + side(a[1], true);
			return simple ? paren(s) : s;
		}
		std::string s = t.symbol() + "(";
		for (std::size_t i = 0; i < a.size(); ++i)
			s += (i ? ", " : "") + term0(a[i], false);
		return s + ")";
	}
	}
	return "?";
}

std::string atom0(const Formula0 &f)
{
	if (f.op() == Op::Eq)
		return term0_simple(f.terms()[0]) + " = " + term0_simple(f.terms()[1]);
	if (is_infix_relation(f.symbol()) && f.terms().size() == 2)
		return term0_simple(f.terms()[0]) + " " + f.symbol() + " " + term0_simple(f.terms()[1]);
	if (f.terms().empty())
		return f.symbol();
	std::string s = f.symbol() + "(";
	for (std::size_t i = 0; i < f.terms().size(); ++i)
		s += (i ? ", " : "") + term0(f.terms()[i], false);
	return s + ")";
}

int term_prec(Term1::Kind k)
{
	switch (k) {
	case Term1::Kind::Add:
	case Term1::Kind::Sub: return 1;
	case Term1::Kind::Mul: return 2;
	case Term1::Kind::Neg: return 3;
	default: return 4;
	}
}

std::string term1(const Term1 &t, int min_prec)
{
	std::string s;
	int p = term_prec(t.kind());
	switch (t.kind()) {
	case Term1::Kind::Var: s = t.name(); break;
	case Term1::Kind::Num:
		s = t.value().str();
		if (t.value().sign() < 0)
			p = 3;
		break;
	case Term1::Kind::Prob: s = "|" + print(t.formula()) + "|"; break;
	case Term1::Kind::Add: s = term1(t.args()[0], 1) + " + " + term1(t.args()[1], 2); break;
	case Term1::Kind::Sub: s = term1(t.args()[0], 1) + " - " + term1(t.args()[1], 2); break;
	case Term1::Kind::Mul: s = term1(t.args()[0], 2) + " * " + term1(t.args()[1], 3); break;
	case Term1::Kind::Neg: {
		const Term1 &a = t.args()[0];
		s = "-" + (a.kind() == Term1::Kind::Num && a.value().sign() >= 0 ? paren(a.value().str()) : term1(a, 3));
		break;
	}
	}
	return p < min_prec ? paren(s) : s;
}

std::string atom1(const Formula1 &f)
{
	const char *rel = f.op() == Op::Eq ? " = " : f.op() == Op::Le ? " <= " : " < ";
	return term1(f.lhs(), 0) + rel + term1(f.rhs(), 0);
}

int prop_prec(PropFormula::Kind k)
{
	switch (k) {
	case PropFormula::Kind::Iff: return 1;
	case PropFormula::Kind::Implies: return 2;
	case PropFormula::Kind::Or: return 3;
	case PropFormula::Kind::And: return 4;
	case PropFormula::Kind::Not: return 5;
	default: return 6;
	}
}

std::string prop(const PropFormula &f, int min_prec)
{
	using K = PropFormula::Kind;
	std::string s;
	int p = prop_prec(f.kind());
	const auto &c = f.children();
	switch (f.kind()) {
	case K::Var: s = var_name(f.var_index()); break;
	case K::True: s = "true"; break;
	case K::False: s = "false"; break;
	case K::Not: s = "~" + prop(c[0], 5); break;
	case K::And: s = prop(c[0], 4) + " & " + prop(c[1], 5); break;
	case K::Or: s = prop(c[0], 3) + " | " + prop(c[1], 4); break;
	case K::Implies: s = prop(c[0], 3) + " -> " + prop(c[1], 2); break;
	case K::Iff: s = prop(c[0], 1) + " <-> " + prop(c[1], 2); break;
	}
	return p < min_prec ? paren(s) : s;
}

} // namespace

std::string print(const Term0 &t) { return term0(t, false); }

std::string print(const Formula0 &f)
{
	return print_formula(f, 0, atom0, [](const Formula0 &g) { return var_name(g.bound_var()); });
}

std::string print(const Term1 &t) { return term1(t, 0); }

std::string print(const Formula1 &f)
{
	return print_formula(f, 0, atom1, [](const Formula1 &g) { return g.bound_var(); });
}

std::string print(const PropFormula &f) { return prop(f, 0); }

// ---------------------------------------------------------------- sort checking

namespace {

void check_term(const Term0 &t, const Signature &sig)
{
	switch (t.kind()) {
	case Term0::Kind::Var: return;
	case Term0::Kind::Const:
		if (!sig.is_constant(t.symbol()))
			throw ValidationError("'" + t.symbol() + "' is not a constant of signature '" + sig.name() + "'");
		return;
	case Term0::Kind::Apply:
		if (!sig.is_function(t.symbol()))
			throw ValidationError("'" + t.symbol() + "' is not a function of signature '" + sig.name() + "'");
		if (sig.arity(t.symbol()) != static_cast<int>(t.args().size()))
			throw ValidationError("arity mismatch for function '" + t.symbol() + "'");
		for (const auto &a : t.args())
			check_term(a, sig);
		return;
	}
}

void check_term1(const Term1 &t, const Signature &sig, const VarTuple &dom)
{
	if (t.kind() == Term1::Kind::Prob) {
		check_sorts(t.formula(), sig);
		for (int v : t.formula().free_vars())
			if (std::find(dom.begin(), dom.end(), v) == dom.end())
				throw ValidationError("probability constant |" + print(t.formula()) + "| uses " + var_name(v)
				                      + " outside the team domain");
		return;
	}
	for (const auto &a : t.args())
		check_term1(a, sig, dom);
}

} // namespace

void check_sorts(const Formula0 &f, const Signature &sig)
{
	if (f.op() == Op::Eq) {
		check_term(f.terms()[0], sig);
		check_term(f.terms()[1], sig);
		return;
	}
	if (f.op() == Op::Rel) {
		if (!sig.is_relation(f.symbol()))
			throw ValidationError("'" + f.symbol() + "' is not a relation of signature '" + sig.name() + "'");
		if (sig.arity(f.symbol()) != static_cast<int>(f.terms().size()))
			throw ValidationError("arity mismatch for relation '" + f.symbol() + "'");
		for (const auto &t : f.terms())
			check_term(t, sig);
		return;
	}
	for (const auto &c : f.children())
		check_sorts(c, sig);
}

void check_sorts(const Formula1 &f, const Signature &sig, const VarTuple &dom)
{
	if (is_atom(f.op())) {
		check_term1(f.lhs(), sig, dom);
		check_term1(f.rhs(), sig, dom);
		return;
	}
	for (const auto &c : f.children())
		check_sorts(c, sig, dom);
}

// ---------------------------------------------------------------- boolean encoding

Signature boolean_signature()
{
	Signature sig("B2");
	sig.add_function("&", 2).add_function("|", 2).add_function("~", 1).add_constant("0").add_constant("1");
	return sig;
}

Term0 boolean_term(const PropFormula &phi)
{
	using K = PropFormula::Kind;
	const auto &c = phi.children();
	auto neg = [](Term0 t) { return Term0::apply("~", {std::move(t)}); };
	auto conj = [](Term0 a, Term0 b) { return Term0::apply("&", {std::move(a), std::move(b)}); };
	auto disj = [](Term0 a, Term0 b) { return Term0::apply("|", {std::move(a), std::move(b)}); };
	switch (phi.kind()) {
	case K::Var: return Term0::var(phi.var_index());
	case K::True: return Term0::constant("1");
	case K::False: return Term0::constant("0");
	case K::Not: return neg(boolean_term(c[0]));
	case K::And: return conj(boolean_term(c[0]), boolean_term(c[1]));
	case K::Or: return disj(boolean_term(c[0]), boolean_term(c[1]));
	case K::Implies: return disj(neg(boolean_term(c[0])), boolean_term(c[1]));
	case K::Iff: {
		Term0 a = boolean_term(c[0]), b = boolean_term(c[1]);
		return disj(conj(a, b), conj(neg(a), neg(b)));
	}
	}
	return Term0::constant("0");
}

Formula0 boolean_encoding(const PropFormula &phi) { return Formula0::eq(boolean_term(phi), Term0::constant("1")); }

} // namespace mtl
