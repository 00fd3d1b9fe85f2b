/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace mtl {

bool is_atom(Op op) { return op == Op::Eq || op == Op::Le || op == Op::Lt || op == Op::Rel; }

bool is_binary_connective(Op op)
{
	return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}

bool is_quantifier(Op op) { return op == Op::Forall || op == Op::Exists; }

// ---------------------------------------------------------------- Term0

struct Term0::Node {
	Kind kind;
	int var = -1;
	std::string symbol;
	std::vector<Term0> args;
};

Term0 Term0::var(int index)
{
	if (index < 0)
		throw std::invalid_argument("negative variable index");
	return Term0(std::make_shared<const Node>(Node{Kind::Var, index, {}, {}}));
}

Term0 Term0::constant(std::string symbol)
{
	return Term0(std::make_shared<const Node>(Node{Kind::Const, -1, std::move(symbol), {}}));
}

Term0 Term0::apply(std::string symbol, std::vector<Term0> args)
{
	if (args.empty())
		throw std::invalid_argument("function application without arguments");
	return Term0(std::make_shared<const Node>(Node{Kind::Apply, -1, std::move(symbol), std::move(args)}));
}

Term0::Kind Term0::kind() const { return n_->kind; }
int Term0::var_index() const { return n_->var; }
const std::string &Term0::symbol() const { return n_->symbol; }
const std::vector<Term0> &Term0::args() const { return n_->args; }

void Term0::collect_vars(std::set<int> &out) const
{
	if (n_->kind == Kind::Var)
		out.insert(n_->var);
	for (const auto &a : n_->args)
		a.collect_vars(out);
}

bool operator==(const Term0 &a, const Term0 &b)
{
	if (a.n_ == b.n_)
		return true;
	return a.n_->kind == b.n_->kind && a.n_->var == b.n_->var && a.n_->symbol == b.n_->symbol
	    && a.n_->args == b.n_->args;
}

// ---------------------------------------------------------------- Formula0

struct Formula0::Node {
	Op op;
	std::string symbol;
	std::vector<Term0> terms;
	std::vector<Formula0> children;
	int var = -1;
	std::set<int> free;
	std::size_t size = 1;
	bool qf = true;
};

namespace {

template <class N>
void finish_formula0(N &n)
{
	for (const auto &t : n.terms)
		t.collect_vars(n.free);
	for (const auto &c : n.children) {
		n.free.insert(c.free_vars().begin(), c.free_vars().end());
		n.size += c.size();
		n.qf = n.qf && c.is_quantifier_free();
	}
	if (is_quantifier(n.op)) {
		n.free.erase(n.var);
		n.qf = false;
	}
}

} // namespace

Formula0 Formula0::eq(Term0 a, Term0 b)
{
	Node n{Op::Eq, {}, {std::move(a), std::move(b)}, {}, -1, {}, 1, true};
	finish_formula0(n);
	return Formula0(std::make_shared<const Node>(std::move(n)));
}

Formula0 Formula0::rel(std::string symbol, std::vector<Term0> args)
{
	Node n{Op::Rel, std::move(symbol), std::move(args), {}, -1, {}, 1, true};
	finish_formula0(n);
	return Formula0(std::make_shared<const Node>(std::move(n)));
}

Formula0 Formula0::negate(Formula0 f)
{
	Node n{Op::Not, {}, {}, {std::move(f)}, -1, {}, 1, true};
	finish_formula0(n);
	return Formula0(std::make_shared<const Node>(std::move(n)));
}

Formula0 Formula0::binary(Op op, Formula0 a, Formula0 b)
{
	if (!is_binary_connective(op))
		throw std::invalid_argument("Formula0::binary: not a binary connective");
	Node n{op, {}, {}, {std::move(a), std::move(b)}, -1, {}, 1, true};
	finish_formula0(n);
	return Formula0(std::make_shared<const Node>(std::move(n)));
}

Formula0 Formula0::quantify(Op q, int var, Formula0 body)
{
	if (!is_quantifier(q))
		throw std::invalid_argument("Formula0::quantify: not a quantifier");
	if (var < 0)
		throw std::invalid_argument("negative variable index");
	Node n{q, {}, {}, {std::move(body)}, var, {}, 1, true};
	finish_formula0(n);
	return Formula0(std::make_shared<const Node>(std::move(n)));
}

Op Formula0::op() const { return n_->op; }
const std::string &Formula0::symbol() const { return n_->symbol; }
const std::vector<Term0> &Formula0::terms() const { return n_->terms; }
const std::vector<Formula0> &Formula0::children() const { return n_->children; }
int Formula0::bound_var() const { return n_->var; }
const std::set<int> &Formula0::free_vars() const { return n_->free; }
bool Formula0::is_quantifier_free() const { return n_->qf; }
std::size_t Formula0::size() const { return n_->size; }

bool operator==(const Formula0 &a, const Formula0 &b)
{
	if (a.n_ == b.n_)
		return true;
	const auto &x = *a.n_, &y = *b.n_;
	return x.op == y.op && x.var == y.var && x.size == y.size && x.symbol == y.symbol && x.terms == y.terms
	    && x.children == y.children;
}

// ---------------------------------------------------------------- Term1

struct Term1::Node {
	Kind kind;
	std::string name;
	Rational value;
	std::vector<Formula0> phi;   // Prob: exactly one
	std::vector<Term1> args;
	bool has_vars = false;
};

namespace {

bool any_vars(const std::vector<Term1> &args)
{
	return std::any_of(args.begin(), args.end(), [](const Term1 &t) { return t.has_vars(); });
}

} // namespace

Term1 Term1::var(std::string name)
{
	if (name.empty())
		throw std::invalid_argument("empty real variable name");
	return Term1(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, {}, {}, true}));
}

Term1 Term1::num(Rational q) { return Term1(std::make_shared<const Node>(Node{Kind::Num, {}, std::move(q), {}, {}, false})); }

Term1 Term1::prob(Formula0 phi)
{
	return Term1(std::make_shared<const Node>(Node{Kind::Prob, {}, {}, {std::move(phi)}, {}, false}));
}

Term1 Term1::add(Term1 a, Term1 b)
{
	std::vector<Term1> args{std::move(a), std::move(b)};
	bool hv = any_vars(args);
	return Term1(std::make_shared<const Node>(Node{Kind::Add, {}, {}, {}, std::move(args), hv}));
}

Term1 Term1::sub(Term1 a, Term1 b)
{
	std::vector<Term1> args{std::move(a), std::move(b)};
	bool hv = any_vars(args);
	return Term1(std::make_shared<const Node>(Node{Kind::Sub, {}, {}, {}, std::move(args), hv}));
}

Term1 Term1::mul(Term1 a, Term1 b)
{
	std::vector<Term1> args{std::move(a), std::move(b)};
	bool hv = any_vars(args);
	return Term1(std::make_shared<const Node>(Node{Kind::Mul, {}, {}, {}, std::move(args), hv}));
}

Term1 Term1::neg(Term1 a)
{
	std::vector<Term1> args{std::move(a)};
	bool hv = any_vars(args);
	return Term1(std::make_shared<const Node>(Node{Kind::Neg, {}, {}, {}, std::move(args), hv}));
}

Term1::Kind Term1::kind() const { return n_->kind; }
const std::string &Term1::name() const { return n_->name; }
const Rational &Term1::value() const { return n_->value; }
const Formula0 &Term1::formula() const { return n_->phi.at(0); }
const std::vector<Term1> &Term1::args() const { return n_->args; }
bool Term1::has_vars() const { return n_->has_vars; }

void Term1::collect_vars(std::set<std::string> &out) const
{
	if (n_->kind == Kind::Var)
		out.insert(n_->name);
	for (const auto &a : n_->args)
		a.collect_vars(out);
}

void Term1::collect_probs(std::vector<Formula0> &out) const
{
	if (n_->kind == Kind::Prob) {
		if (std::find(out.begin(), out.end(), n_->phi[0]) == out.end())
			out.push_back(n_->phi[0]);
		return;
	}
	for (const auto &a : n_->args)
		a.collect_probs(out);
}

bool operator==(const Term1 &a, const Term1 &b)
{
	if (a.n_ == b.n_)
		return true;
	const auto &x = *a.n_, &y = *b.n_;
	return x.kind == y.kind && x.name == y.name && x.value == y.value && x.phi == y.phi && x.args == y.args;
}

// ---------------------------------------------------------------- Formula1

struct Formula1::Node {
	Op op;
	std::vector<Term1> sides;    // atoms: lhs, rhs
	std::vector<Formula1> children;
	std::string var;
	bool qf = true;
};

Formula1 Formula1::atom(Op rel, Term1 lhs, Term1 rhs)
{
	if (rel != Op::Eq && rel != Op::Le && rel != Op::Lt)
		throw std::invalid_argument("Formula1::atom: relation must be =, <= or <");
	return Formula1(std::make_shared<const Node>(Node{rel, {std::move(lhs), std::move(rhs)}, {}, {}, true}));
}

Formula1 Formula1::negate(Formula1 f)
{
	bool qf = f.is_quantifier_free();
	return Formula1(std::make_shared<const Node>(Node{Op::Not, {}, {std::move(f)}, {}, qf}));
}

Formula1 Formula1::binary(Op op, Formula1 a, Formula1 b)
{
	if (!is_binary_connective(op))
		throw std::invalid_argument("Formula1::binary: not a binary connective");
	bool qf = a.is_quantifier_free() && b.is_quantifier_free();
	return Formula1(std::make_shared<const Node>(Node{op, {}, {std::move(a), std::move(b)}, {}, qf}));
}

Formula1 Formula1::quantify(Op q, std::string var, Formula1 body)
{
	if (!is_quantifier(q))
		throw std::invalid_argument("Formula1::quantify: not a quantifier");
	if (var.empty())
		throw std::invalid_argument("empty real variable name");
	return Formula1(std::make_shared<const Node>(Node{q, {}, {std::move(body)}, std::move(var), false}));
}

Formula1 Formula1::conj_all(const std::vector<Formula1> &fs)
{
	if (fs.empty())
		throw std::invalid_argument("conj_all of empty list");
	Formula1 r = fs.front();
	for (std::size_t i = 1; i < fs.size(); ++i)
		r = conj(r, fs[i]);
	return r;
}

Formula1 Formula1::disj_all(const std::vector<Formula1> &fs)
{
	if (fs.empty())
		throw std::invalid_argument("disj_all of empty list");
	Formula1 r = fs.front();
	for (std::size_t i = 1; i < fs.size(); ++i)
		r = disj(r, fs[i]);
	return r;
}

Op Formula1::op() const { return n_->op; }
const Term1 &Formula1::lhs() const { return n_->sides.at(0); }
const Term1 &Formula1::rhs() const { return n_->sides.at(1); }
const std::vector<Formula1> &Formula1::children() const { return n_->children; }
const std::string &Formula1::bound_var() const { return n_->var; }
bool Formula1::is_quantifier_free() const { return n_->qf; }

std::set<std::string> Formula1::free_vars() const
{
	std::set<std::string> out;
	if (is_atom(n_->op)) {
		for (const auto &t : n_->sides)
			t.collect_vars(out);
		return out;
	}
	for (const auto &c : n_->children) {
		auto fv = c.free_vars();
		out.insert(fv.begin(), fv.end());
	}
	if (is_quantifier(n_->op))
		out.erase(n_->var);
	return out;
}

namespace {

void flatten_and(const Formula1 &f, std::vector<Formula1> &out)
{
	if (f.op() == Op::And) {
		flatten_and(f.child(0), out);
		flatten_and(f.child(1), out);
	} else {
		out.push_back(f);
	}
}

bool is_bound_atom(const Formula1 &f, const std::string &var)
{
	if (f.op() != Op::Le)
		return false;
	auto ground = [](const Term1 &t) { return !t.has_vars(); };
	bool left = f.lhs().kind() == Term1::Kind::Var && f.lhs().name() == var && ground(f.rhs());
	bool right = f.rhs().kind() == Term1::Kind::Var && f.rhs().name() == var && ground(f.lhs());
	return left || right;
}

} // namespace

bool Formula1::is_positive_bounded() const
{
	switch (n_->op) {
	case Op::Eq:
	case Op::Le:
		return true;
	case Op::Lt:
	case Op::Not:
	case Op::Implies:
	case Op::Iff:
		return false;
	case Op::And:
	case Op::Or:
	case Op::Forall:
		return std::all_of(n_->children.begin(), n_->children.end(),
		                   [](const Formula1 &c) { return c.is_positive_bounded(); });
	case Op::Exists: {
		std::vector<Formula1> parts;
		flatten_and(n_->children[0], parts);
		bool lower = false, upper = false;
		for (const auto &p : parts) {
			if (!is_bound_atom(p, n_->var))
				continue;
			if (p.lhs().kind() == Term1::Kind::Var && p.lhs().name() == n_->var)
				upper = true;
			else
				lower = true;
		}
		return lower && upper && n_->children[0].is_positive_bounded();
	}
	default:
		return false;
	}
}

std::vector<Formula0> Formula1::prob_constants() const
{
	std::vector<Formula0> out;
	auto walk = [&out](const Formula1 &f, auto &&self) -> void {
		if (is_atom(f.op())) {
			f.lhs().collect_probs(out);
			f.rhs().collect_probs(out);
			return;
		}
		for (const auto &c : f.children())
			self(c, self);
	};
	walk(*this, walk);
	return out;
}

bool operator==(const Formula1 &a, const Formula1 &b)
{
	if (a.n_ == b.n_)
		return true;
	const auto &x = *a.n_, &y = *b.n_;
	return x.op == y.op && x.var == y.var && x.sides == y.sides && x.children == y.children;
}

// ---------------------------------------------------------------- PropFormula

struct PropFormula::Node {
	Kind kind;
	int var = -1;
	std::vector<PropFormula> children;
};

PropFormula PropFormula::var(int index)
{
	if (index < 0)
		throw std::invalid_argument("negative variable index");
	return PropFormula(std::make_shared<const Node>(Node{Kind::Var, index, {}}));
}

PropFormula PropFormula::constant(bool value)
{
	return PropFormula(std::make_shared<const Node>(Node{value ? Kind::True : Kind::False, -1, {}}));
}

PropFormula PropFormula::negate(PropFormula f)
{
	return PropFormula(std::make_shared<const Node>(Node{Kind::Not, -1, {std::move(f)}}));
}

PropFormula PropFormula::binary(Kind k, PropFormula a, PropFormula b)
{
	if (k != Kind::And && k != Kind::Or && k != Kind::Implies && k != Kind::Iff)
		throw std::invalid_argument("PropFormula::binary: not a binary connective");
	return PropFormula(std::make_shared<const Node>(Node{k, -1, {std::move(a), std::move(b)}}));
}

PropFormula::Kind PropFormula::kind() const { return n_->kind; }
int PropFormula::var_index() const { return n_->var; }
const std::vector<PropFormula> &PropFormula::children() const { return n_->children; }

void PropFormula::collect_vars(std::set<int> &out) const
{
	if (n_->kind == Kind::Var)
		out.insert(n_->var);
	for (const auto &c : n_->children)
		c.collect_vars(out);
}

bool PropFormula::eval(const std::vector<bool> &valuation) const
{
	const auto &c = n_->children;
	switch (n_->kind) {
	case Kind::Var:
		if (static_cast<std::size_t>(n_->var) >= valuation.size())
			throw std::out_of_range("propositional variable v" + std::to_string(n_->var) + " has no value");
		return valuation[n_->var];
	case Kind::True: return true;
	case Kind::False: return false;
	case Kind::Not: return !c[0].eval(valuation);
	case Kind::And: return c[0].eval(valuation) && c[1].eval(valuation);
	case Kind::Or: return c[0].eval(valuation) || c[1].eval(valuation);
	case Kind::Implies: return !c[0].eval(valuation) || c[1].eval(valuation);
	case Kind::Iff: return c[0].eval(valuation) == c[1].eval(valuation);
	}
	return false;
}

bool operator==(const PropFormula &a, const PropFormula &b)
{
	if (a.n_ == b.n_)
		return true;
	return a.n_->kind == b.n_->kind && a.n_->var == b.n_->var && a.n_->children == b.n_->children;
}

} // namespace mtl
