/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/semantics.hpp"

#include "mtl/error.hpp"

#include <algorithm>

namespace mtl {

Assignment::Assignment(const VarTuple &dom, const std::vector<Element> &values)
{
	if (dom.size() != values.size())
		throw ValidationError("assignment has " + std::to_string(values.size()) + " values for "
		                      + std::to_string(dom.size()) + " variables");
	for (std::size_t i = 0; i < dom.size(); ++i)
		bind(dom[i], values[i]);
}

Assignment &Assignment::bind(int var, Element e)
{
	values_[var] = e;
	return *this;
}

bool Assignment::binds(int var) const { return values_.count(var) > 0; }

Element Assignment::at(int var) const
{
	auto it = values_.find(var);
	if (it == values_.end())
		throw EvalError("variable " + var_name(var) + " is unbound");
	return it->second;
}

namespace {

int max_var(const Term0 &t)
{
	switch (t.kind()) {
	case Term0::Kind::Var: return t.var_index();
	case Term0::Kind::Const: return -1;
	case Term0::Kind::Apply: {
		int m = -1;
		for (const auto &a : t.args())
			m = std::max(m, max_var(a));
		return m;
	}
	}
	return -1;
}

int max_var(const Formula0 &f)
{
	int m = is_quantifier(f.op()) ? f.bound_var() : -1;
	for (const auto &t : f.terms())
		m = std::max(m, max_var(t));
	for (const auto &c : f.children())
		m = std::max(m, max_var(c));
	return m;
}

Element eval_term(const FiniteStructure &A, const Term0 &t, const std::vector<Element> &env)
{
	switch (t.kind()) {
	case Term0::Kind::Var: {
		auto i = static_cast<std::size_t>(t.var_index());
		if (i >= env.size() || env[i] < 0)
			throw EvalError("variable " + var_name(t.var_index()) + " is unbound");
		return env[i];
	}
	case Term0::Kind::Const: return A.constant(t.symbol());
	case Term0::Kind::Apply: {
		Element args[8];
		std::vector<Element> big;
		Element *p = args;
		if (t.args().size() > 8) {
			big.resize(t.args().size());
			p = big.data();
		}
		for (std::size_t i = 0; i < t.args().size(); ++i)
			p[i] = eval_term(A, t.args()[i], env);
		return A.apply(t.symbol(), p);
	}
	}
	return -1;
}

bool eval(const FiniteStructure &A, const Formula0 &f, std::vector<Element> &env)
{
	switch (f.op()) {
	case Op::Eq: return eval_term(A, f.terms()[0], env) == eval_term(A, f.terms()[1], env);
	case Op::Rel: {
		std::vector<Element> args(f.terms().size());
		for (std::size_t i = 0; i < args.size(); ++i)
			args[i] = eval_term(A, f.terms()[i], env);
		return A.holds(f.symbol(), args.data());
	}
	case Op::Not: return !eval(A, f.child(0), env);
	case Op::And: return eval(A, f.child(0), env) && eval(A, f.child(1), env);
	case Op::Or: return eval(A, f.child(0), env) || eval(A, f.child(1), env);
	case Op::Implies: return !eval(A, f.child(0), env) || eval(A, f.child(1), env);
	case Op::Iff: return eval(A, f.child(0), env) == eval(A, f.child(1), env);
	case Op::Forall:
	case Op::Exists: {
		auto v = static_cast<std::size_t>(f.bound_var());
		Element saved = env[v];
		bool want = f.op() == Op::Exists;
		bool result = !want;
		for (Element e = 0; e < A.size(); ++e) {
			env[v] = e;
			if (eval(A, f.child(0), env) == want) {
				result = want;
				break;
			}
		}
		env[v] = saved;
		return result;
	}
	default: throw EvalError("not an L0 formula");
	}
}

} // namespace

FormulaEvaluator::FormulaEvaluator(const FiniteStructure &A, Formula0 phi) : A_(&A), phi_(std::move(phi))
{
	check_sorts(phi_, A.signature());
	env_size_ = static_cast<std::size_t>(max_var(phi_) + 1);
}

bool FormulaEvaluator::operator()(std::vector<Element> &env) const
{
	if (env.size() < env_size_)
		env.resize(env_size_, -1);
	return eval(*A_, phi_, env);
}

bool sat_fo(const FiniteStructure &A, const Assignment &s, const Formula0 &phi)
{
	FormulaEvaluator ev(A, phi);
	for (int v : phi.free_vars())
		if (!s.binds(v))
			throw EvalError("free variable " + var_name(v) + " of " + print(phi) + " is unbound");
	std::vector<Element> env(ev.env_size(), -1);
	for (const auto &[v, e] : s.bindings()) {
		if (e < 0 || e >= A.size())
			throw EvalError("assignment maps " + var_name(v) + " outside the domain");
		if (static_cast<std::size_t>(v) >= env.size())
			env.resize(static_cast<std::size_t>(v) + 1, -1);
		env[static_cast<std::size_t>(v)] = e;
	}
	return ev(env);
}

bool valid_on(const FiniteStructure &A, const Formula0 &sentence)
{
	if (!sentence.is_sentence())
		throw ValidationError("'" + print(sentence) + "' has free variables");
	return sat_fo(A, Assignment{}, sentence);
}

Formula0 universal_closure(const VarTuple &x, Formula0 body)
{
	for (auto it = x.rbegin(); it != x.rend(); ++it)
		body = Formula0::quantify(Op::Forall, *it, std::move(body));
	return body;
}

bool implication_holds(const FiniteStructure &A, const Formula0 &phi, const Formula0 &psi, const VarTuple &x)
{
	for (const Formula0 *f : {&phi, &psi})
		for (int v : f->free_vars())
			if (std::find(x.begin(), x.end(), v) == x.end())
				throw ValidationError("free variable " + var_name(v) + " of " + print(*f) + " is not in the tuple");
	return valid_on(A, universal_closure(x, Formula0::implies(phi, psi)));
}

} // namespace mtl
