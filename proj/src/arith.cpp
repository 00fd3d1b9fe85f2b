/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/arith.hpp"

#include "mtl/error.hpp"
#include "mtl/simplex.hpp"
#include "mtl/syntax.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <unistd.h>

namespace mtl {

std::string to_string(Truth t)
{
	switch (t) {
	case Truth::Holds: return "HOLDS";
	case Truth::Fails: return "FAILS";
	case Truth::Unknown: return "UNKNOWN";
	}
	return "?";
}

std::string prob_variable(const Formula0 &phi) { return "|" + print(phi) + "|"; }

Polynomial to_polynomial(const Term1 &t, const Grounding *g)
{
	const auto &a = t.args();
	switch (t.kind()) {
	case Term1::Kind::Var: return Polynomial::variable(t.name());
	case Term1::Kind::Num: return Polynomial(t.value());
	case Term1::Kind::Prob:
		if (g)
			return Polynomial(g->at(t.formula()));
		return Polynomial::variable(prob_variable(t.formula()));
	case Term1::Kind::Add: return to_polynomial(a[0], g) + to_polynomial(a[1], g);
	case Term1::Kind::Sub: return to_polynomial(a[0], g) - to_polynomial(a[1], g);
	case Term1::Kind::Mul: return to_polynomial(a[0], g) * to_polynomial(a[1], g);
	case Term1::Kind::Neg: return -to_polynomial(a[0], g);
	}
	return {};
}

Rational eval_ground_term(const Term1 &t, const Grounding &g)
{
	const auto &a = t.args();
	switch (t.kind()) {
	case Term1::Kind::Var: throw EvalError("real variable '" + t.name() + "' in a ground term");
	case Term1::Kind::Num: return t.value();
	case Term1::Kind::Prob: return g.at(t.formula());
	case Term1::Kind::Add: return eval_ground_term(a[0], g) + eval_ground_term(a[1], g);
	case Term1::Kind::Sub: return eval_ground_term(a[0], g) - eval_ground_term(a[1], g);
	case Term1::Kind::Mul: return eval_ground_term(a[0], g) * eval_ground_term(a[1], g);
	case Term1::Kind::Neg: return -eval_ground_term(a[0], g);
	}
	return {};
}

namespace {

bool ground_truth(const Formula1 &f, const Grounding &g)
{
	switch (f.op()) {
	case Op::Eq: return eval_ground_term(f.lhs(), g) == eval_ground_term(f.rhs(), g);
	case Op::Le: return eval_ground_term(f.lhs(), g) <= eval_ground_term(f.rhs(), g);
	case Op::Lt: return eval_ground_term(f.lhs(), g) < eval_ground_term(f.rhs(), g);
	case Op::Not: return !ground_truth(f.child(0), g);
	case Op::And: return ground_truth(f.child(0), g) && ground_truth(f.child(1), g);
	case Op::Or: return ground_truth(f.child(0), g) || ground_truth(f.child(1), g);
	case Op::Implies: return !ground_truth(f.child(0), g) || ground_truth(f.child(1), g);
	case Op::Iff: return ground_truth(f.child(0), g) == ground_truth(f.child(1), g);
	default: throw EvalError("quantifier in a quantifier-free evaluation");
	}
}

// ---------------------------------------------------------------- NNF over polynomial atoms

PolyAtom negate(const PolyAtom &a)
{
	switch (a.cmp) {
	case Cmp::Eq: return {a.p, Cmp::Ne};
	case Cmp::Ne: return {a.p, Cmp::Eq};
	case Cmp::Le: return {-a.p, Cmp::Lt};
	case Cmp::Lt: return {-a.p, Cmp::Le};
	}
	return a;
}

bool holds_at(Cmp c, const Rational &v)
{
	switch (c) {
	case Cmp::Eq: return v.is_zero();
	case Cmp::Ne: return !v.is_zero();
	case Cmp::Le: return v.sign() <= 0;
	case Cmp::Lt: return v.sign() < 0;
	}
	return false;
}

struct Nnf {
	enum class Kind { Atom, And, Or, Exists, Forall, True, False };
	Kind kind;
	PolyAtom atom{};
	std::string var;
	std::vector<std::shared_ptr<const Nnf>> kids;
};
using NnfPtr = std::shared_ptr<const Nnf>;

NnfPtr make(Nnf n) { return std::make_shared<const Nnf>(std::move(n)); }

NnfPtr to_nnf(const Formula1 &f, bool positive, const Grounding *g)
{
	auto atom = [&](Cmp c) {
		PolyAtom a{to_polynomial(f.lhs(), g) - to_polynomial(f.rhs(), g), c};
		return make({Nnf::Kind::Atom, positive ? a : negate(a), {}, {}});
	};
	auto bin = [&](Nnf::Kind k, NnfPtr a, NnfPtr b) { return make({k, {}, {}, {std::move(a), std::move(b)}}); };
	const Nnf::Kind conj = positive ? Nnf::Kind::And : Nnf::Kind::Or;
	const Nnf::Kind disj = positive ? Nnf::Kind::Or : Nnf::Kind::And;
	switch (f.op()) {
	case Op::Eq: return atom(Cmp::Eq);
	case Op::Le: return atom(Cmp::Le);
	case Op::Lt: return atom(Cmp::Lt);
	case Op::Not: return to_nnf(f.child(0), !positive, g);
	case Op::And: return bin(conj, to_nnf(f.child(0), positive, g), to_nnf(f.child(1), positive, g));
	case Op::Or: return bin(disj, to_nnf(f.child(0), positive, g), to_nnf(f.child(1), positive, g));
	case Op::Implies: return bin(disj, to_nnf(f.child(0), !positive, g), to_nnf(f.child(1), positive, g));
	case Op::Iff: {
		// (a & b) | (~a & ~b), negated: (a & ~b) | (~a & b)
		const Formula1 &a = f.child(0), &b = f.child(1);
		NnfPtr l = bin(Nnf::Kind::And, to_nnf(a, true, g), to_nnf(b, positive, g));
		NnfPtr r = bin(Nnf::Kind::And, to_nnf(a, false, g), to_nnf(b, !positive, g));
		return bin(Nnf::Kind::Or, l, r);
	}
	case Op::Forall:
	case Op::Exists: {
		bool ex = (f.op() == Op::Exists) == positive;
		return make({ex ? Nnf::Kind::Exists : Nnf::Kind::Forall, {}, f.bound_var(), {to_nnf(f.child(0), positive, g)}});
	}
	default: throw EvalError("not an L1 formula");
	}
}

NnfPtr negate(const NnfPtr &n)
{
	Nnf out = *n;
	switch (n->kind) {
	case Nnf::Kind::Atom: out.atom = negate(n->atom); return make(out);
	case Nnf::Kind::True: out.kind = Nnf::Kind::False; return make(out);
	case Nnf::Kind::False: out.kind = Nnf::Kind::True; return make(out);
	case Nnf::Kind::And: out.kind = Nnf::Kind::Or; break;
	case Nnf::Kind::Or: out.kind = Nnf::Kind::And; break;
	case Nnf::Kind::Exists: out.kind = Nnf::Kind::Forall; break;
	case Nnf::Kind::Forall: out.kind = Nnf::Kind::Exists; break;
	}
	for (auto &k : out.kids)
		k = negate(k);
	return make(out);
}

bool quantifier_free(const NnfPtr &n)
{
	if (n->kind == Nnf::Kind::Exists || n->kind == Nnf::Kind::Forall)
		return false;
	return std::all_of(n->kids.begin(), n->kids.end(), quantifier_free);
}

void flatten_and(const NnfPtr &n, std::vector<NnfPtr> &out)
{
	if (n->kind == Nnf::Kind::And) {
		for (const auto &k : n->kids)
			flatten_and(k, out);
	} else {
		out.push_back(n);
	}
}

// ---------------------------------------------------------------- intervals

struct Interval {
	Rational lo, hi;
	bool lo_inf = false, hi_inf = false;

	static Interval point(const Rational &x) { return {x, x}; }
	static Interval upto(const Rational &x) { return {Rational(0), x, true, false}; }
	bool empty() const { return !lo_inf && !hi_inf && hi < lo; }
	bool contains_zero() const { return (lo_inf || lo.sign() <= 0) && (hi_inf || hi.sign() >= 0); }
	bool finite() const { return !lo_inf && !hi_inf; }
};

Interval add(const Interval &a, const Interval &b)
{
	Interval r;
	r.lo_inf = a.lo_inf || b.lo_inf;
	r.hi_inf = a.hi_inf || b.hi_inf;
	if (!r.lo_inf)
		r.lo = a.lo + b.lo;
	if (!r.hi_inf)
		r.hi = a.hi + b.hi;
	return r;
}

Interval neg(const Interval &a) { return {-a.hi, -a.lo, a.hi_inf, a.lo_inf}; }

// finite intervals only
Interval mul(const Interval &a, const Interval &b)
{
	std::array<Rational, 4> p{a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
	return {*std::min_element(p.begin(), p.end()), *std::max_element(p.begin(), p.end())};
}

Interval scale(const Interval &a, const Rational &c)
{
	if (c.sign() >= 0) {
		Interval r = a;
		if (!r.lo_inf)
			r.lo *= c;
		if (!r.hi_inf)
			r.hi *= c;
		return r;
	}
	return scale(neg(a), -c);
}

Interval power(const Interval &a, int e)
{
	if (e == 1)
		return a;
	Rational lo(1), hi(1);
	for (int i = 0; i < e; ++i) {
		lo *= a.lo;
		hi *= a.hi;
	}
	if (e % 2 == 1)
		return {lo, hi};
	if (a.lo.sign() >= 0)
		return {lo, hi};
	if (a.hi.sign() <= 0)
		return {hi, lo};
	return {Rational(0), std::max(lo, hi)};
}

// a / b for b finite and not containing zero; a may be unbounded
Interval divide(const Interval &a, const Interval &b)
{
	if (b.hi.sign() < 0)
		return divide(neg(a), neg(b));
	Interval r;
	r.lo_inf = a.lo_inf;
	r.hi_inf = a.hi_inf;
	if (!r.lo_inf)
		r.lo = a.lo.sign() >= 0 ? a.lo / b.hi : a.lo / b.lo;
	if (!r.hi_inf)
		r.hi = a.hi.sign() >= 0 ? a.hi / b.lo : a.hi / b.hi;
	return r;
}

// rounds outward to a dyadic grid once denominators grow past 2^64
Rational round_down(const Rational &x)
{
	if (mpz_sizeinbase(x.raw().get_den_mpz_t(), 2) <= 64)
		return x;
	mpz_class scale = mpz_class(1) << 64;
	mpz_class f;
	mpz_fdiv_q(f.get_mpz_t(), mpz_class(x.num() * scale).get_mpz_t(), x.den().get_mpz_t());
	return Rational(mpq_class(f, scale));
}

Rational round_up(const Rational &x) { return -round_down(-x); }

// ---------------------------------------------------------------- compiled constraints

struct Term {
	Rational c;
	std::vector<std::pair<std::size_t, int>> vars;   // (index into the box, exponent)
};

struct Compiled {
	std::vector<Term> terms;   // constant term has no vars
	Cmp cmp;
};

Compiled compile(const PolyAtom &a, const std::map<std::string, std::size_t> &index)
{
	Compiled c{{}, a.cmp};
	for (const auto &[m, coef] : a.p.terms()) {
		Term t{coef, {}};
		for (const auto &[v, e] : m) {
			auto it = index.find(v);
			if (it == index.end())
				throw EvalError("real variable '" + v + "' is not bound by a quantifier");
			t.vars.emplace_back(it->second, e);
		}
		c.terms.push_back(std::move(t));
	}
	return c;
}

using Box = std::vector<Interval>;

Interval term_range(const Term &t, const Box &box)
{
	Interval r = Interval::point(t.c);
	for (const auto &[i, e] : t.vars)
		r = mul(r, power(box[i], e));
	return r;
}

Interval range(const Compiled &c, const Box &box)
{
	Interval r = Interval::point(Rational(0));
	for (const auto &t : c.terms)
		r = add(r, term_range(t, box));
	return r;
}

Rational value_at(const Compiled &c, const std::vector<Rational> &x)
{
	Rational total;
	for (const auto &t : c.terms) {
		Rational v = t.c;
		for (const auto &[i, e] : t.vars)
			for (int k = 0; k < e; ++k)
				v *= x[i];
		total += v;
	}
	return total;
}

enum class K3 { T, F, U };

K3 atom_on_box(const Compiled &c, const Box &box)
{
	Interval r = range(c, box);
	switch (c.cmp) {
	case Cmp::Eq:
		if (r.lo.is_zero() && r.hi.is_zero())
			return K3::T;
		return r.contains_zero() ? K3::U : K3::F;
	case Cmp::Ne:
		if (r.lo.is_zero() && r.hi.is_zero())
			return K3::F;
		return r.contains_zero() ? K3::U : K3::T;
	case Cmp::Le:
		if (r.hi.sign() <= 0)
			return K3::T;
		return r.lo.sign() > 0 ? K3::F : K3::U;
	case Cmp::Lt:
		if (r.hi.sign() < 0)
			return K3::T;
		return r.lo.sign() >= 0 ? K3::F : K3::U;
	}
	return K3::U;
}

// quantifier-free matrix with compiled atoms
struct Matrix {
	enum class Kind { Atom, And, Or, True, False };
	Kind kind;
	std::size_t atom = 0;
	std::vector<Matrix> kids;
};

Matrix build_matrix(const NnfPtr &n, std::vector<Compiled> &atoms, const std::map<std::string, std::size_t> &index)
{
	switch (n->kind) {
	case Nnf::Kind::Atom:
		atoms.push_back(compile(n->atom, index));
		return {Matrix::Kind::Atom, atoms.size() - 1, {}};
	case Nnf::Kind::True: return {Matrix::Kind::True, 0, {}};
	case Nnf::Kind::False: return {Matrix::Kind::False, 0, {}};
	case Nnf::Kind::And:
	case Nnf::Kind::Or: {
		Matrix m{n->kind == Nnf::Kind::And ? Matrix::Kind::And : Matrix::Kind::Or, 0, {}};
		for (const auto &k : n->kids)
			m.kids.push_back(build_matrix(k, atoms, index));
		return m;
	}
	default: throw std::logic_error("quantifier inside a matrix");
	}
}

K3 eval_box(const Matrix &m, const std::vector<K3> &atom_values)
{
	switch (m.kind) {
	case Matrix::Kind::Atom: return atom_values[m.atom];
	case Matrix::Kind::True: return K3::T;
	case Matrix::Kind::False: return K3::F;
	case Matrix::Kind::And: {
		K3 r = K3::T;
		for (const auto &k : m.kids) {
			K3 v = eval_box(k, atom_values);
			if (v == K3::F)
				return K3::F;
			if (v == K3::U)
				r = K3::U;
		}
		return r;
	}
	case Matrix::Kind::Or: {
		K3 r = K3::F;
		for (const auto &k : m.kids) {
			K3 v = eval_box(k, atom_values);
			if (v == K3::T)
				return K3::T;
			if (v == K3::U)
				r = K3::U;
		}
		return r;
	}
	}
	return K3::U;
}

bool eval_point(const Matrix &m, const std::vector<Compiled> &atoms, const std::vector<Rational> &x)
{
	switch (m.kind) {
	case Matrix::Kind::Atom: return holds_at(atoms[m.atom].cmp, value_at(atoms[m.atom], x));
	case Matrix::Kind::True: return true;
	case Matrix::Kind::False: return false;
	case Matrix::Kind::And:
		return std::all_of(m.kids.begin(), m.kids.end(), [&](const Matrix &k) { return eval_point(k, atoms, x); });
	case Matrix::Kind::Or:
		return std::any_of(m.kids.begin(), m.kids.end(), [&](const Matrix &k) { return eval_point(k, atoms, x); });
	}
	return false;
}

// ---------------------------------------------------------------- contraction

bool intersect(Interval &x, const Interval &target, bool &changed)
{
	if (!target.lo_inf && target.lo > x.lo) {
		x.lo = round_down(target.lo);
		changed = true;
	}
	if (!target.hi_inf && target.hi < x.hi) {
		x.hi = round_up(target.hi);
		changed = true;
	}
	return !(x.hi < x.lo);
}

// x^e in target; contracts x for e = 1 and e = 2
bool project_power(Interval &x, int e, const Interval &target, bool &changed)
{
	if (e == 1)
		return intersect(x, target, changed);
	if (e != 2)
		return true;
	if (!target.hi_inf && target.hi.sign() < 0)
		return false;
	Interval r = x;
	if (!target.hi_inf) {
		Rational R = sqrt_upper(target.hi);
		if (!intersect(r, {-R, R}, changed))
			return false;
	}
	if (!target.lo_inf && target.lo.sign() > 0) {
		Rational s = sqrt_lower(target.lo);
		// r minus the open interval (-s, s)
		bool neg_part = r.lo <= -s, pos_part = r.hi >= s;
		if (!neg_part && !pos_part)
			return false;
		if (!neg_part && r.lo < s) {
			r.lo = s;
			changed = true;
		}
		if (!pos_part && r.hi > -s) {
			r.hi = -s;
			changed = true;
		}
	}
	x = r;
	return true;
}

bool revise(const Compiled &c, Box &box, bool &changed)
{
	Interval target;
	switch (c.cmp) {
	case Cmp::Eq: target = Interval::point(Rational(0)); break;
	case Cmp::Le:
	case Cmp::Lt: target = Interval::upto(Rational(0)); break;
	case Cmp::Ne: return true;
	}
	std::vector<Interval> ranges;
	for (const auto &t : c.terms)
		ranges.push_back(term_range(t, box));
	for (std::size_t i = 0; i < c.terms.size(); ++i) {
		const Term &t = c.terms[i];
		if (t.vars.empty())
			continue;
		Interval rest = Interval::point(Rational(0));
		for (std::size_t j = 0; j < ranges.size(); ++j)
			if (j != i)
				rest = add(rest, ranges[j]);
		Interval ti = add(target, neg(rest));   // t.c * prod in ti
		Interval prod = scale(ti, t.c.inverse());
		for (std::size_t k = 0; k < t.vars.size(); ++k) {
			Interval others = Interval::point(Rational(1));
			for (std::size_t l = 0; l < t.vars.size(); ++l)
				if (l != k)
					others = mul(others, power(box[t.vars[l].first], t.vars[l].second));
			if (others.contains_zero())
				continue;
			Interval want = divide(prod, others);
			auto [vi, e] = t.vars[k];
			if (!project_power(box[vi], e, want, changed))
				return false;
		}
		ranges[i] = term_range(t, box);
	}
	return true;
}

// HC4-style fixpoint over the top-level conjuncts; false when the box empties
bool contract(const std::vector<std::size_t> &conjuncts, const std::vector<Compiled> &atoms, Box &box)
{
	for (int round = 0; round < 8; ++round) {
		bool changed = false;
		for (std::size_t a : conjuncts)
			if (!revise(atoms[a], box, changed))
				return false;
		if (!changed)
			break;
	}
	return true;
}

// ---------------------------------------------------------------- block search

struct Block {
	std::vector<std::string> vars;
	NnfPtr matrix;
};

// gathers a block of existentials, merging existentials that appear as conjuncts
bool gather_exists(const NnfPtr &n, std::vector<std::string> &vars, std::vector<NnfPtr> &conjuncts)
{
	if (n->kind == Nnf::Kind::Exists) {
		if (std::find(vars.begin(), vars.end(), n->var) != vars.end())
			return false;
		vars.push_back(n->var);
		return gather_exists(n->kids[0], vars, conjuncts);
	}
	if (n->kind == Nnf::Kind::And) {
		for (const auto &k : n->kids)
			if (!gather_exists(k, vars, conjuncts))
				return false;
		return true;
	}
	conjuncts.push_back(n);
	return true;
}

struct Bounds {
	std::optional<Rational> lo, hi;
};

void extract_bound(const PolyAtom &a, const std::map<std::string, std::size_t> &index, std::vector<Bounds> &b)
{
	if (a.cmp == Cmp::Ne || !a.p.is_linear())
		return;
	auto vars = a.p.variables();
	if (vars.size() != 1)
		return;
	const std::string &v = *vars.begin();
	auto it = index.find(v);
	if (it == index.end())
		return;
	Rational k = a.p.coefficient(v), c = a.p.constant_term();
	Rational at = -c / k;   // k*v + c cmp 0
	Bounds &bd = b[it->second];
	bool upper = k.sign() > 0 || a.cmp == Cmp::Eq, lower = k.sign() < 0 || a.cmp == Cmp::Eq;
	if (upper && (!bd.hi || at < *bd.hi))
		bd.hi = at;
	if (lower && (!bd.lo || at > *bd.lo))
		bd.lo = at;
}

// moves a candidate onto equality conjuncts that are linear in some variable, solving
// for that variable exactly; the result still has to pass the full check
std::vector<Rational> repair(std::vector<Rational> x, const std::vector<std::size_t> &conjuncts,
                             const std::vector<Compiled> &atoms, const Box &box)
{
	for (int pass = 0; pass < 2; ++pass) {
		for (std::size_t a : conjuncts) {
			const Compiled &c = atoms[a];
			if (c.cmp != Cmp::Eq || value_at(c, x).is_zero())
				continue;
			for (std::size_t v = 0; v < x.size(); ++v) {
				bool linear = true, present = false;
				for (const auto &t : c.terms)
					for (const auto &[i, e] : t.vars)
						if (i == v) {
							present = true;
							linear = linear && e == 1;
						}
				if (!present || !linear)
					continue;
				// c = coef * v + rest, both evaluated at x without v
				Rational coef, rest;
				for (const auto &t : c.terms) {
					Rational val = t.c;
					bool has = false;
					for (const auto &[i, e] : t.vars) {
						if (i == v) {
							has = true;
							continue;
						}
						for (int k = 0; k < e; ++k)
							val *= x[i];
					}
					(has ? coef : rest) += val;
				}
				if (coef.is_zero())
					continue;
				Rational solved = -rest / coef;
				if (solved < box[v].lo || solved > box[v].hi)
					continue;
				x[v] = solved;
				break;
			}
		}
	}
	return x;
}

Rational simplest_point(const Interval &x) { return simplest_between(x.lo, x.hi); }

Verdict search_exists(const NnfPtr &n, const ArithPolicy &policy)
{
	std::vector<std::string> vars;
	std::vector<NnfPtr> conj;
	if (!gather_exists(n, vars, conj))
		return Verdict::unknown("a quantifier block rebinds the same variable");
	std::vector<NnfPtr> flat;
	for (const auto &c : conj)
		flatten_and(c, flat);
	for (const auto &c : flat)
		if (!quantifier_free(c))
			return Verdict::unknown("quantifier alternation outside the built-in fragment");

	std::map<std::string, std::size_t> index;
	for (std::size_t i = 0; i < vars.size(); ++i)
		index[vars[i]] = i;
	std::vector<Bounds> bounds(vars.size());
	for (const auto &c : flat)
		if (c->kind == Nnf::Kind::Atom)
			extract_bound(c->atom, index, bounds);
	Box box(vars.size());
	for (std::size_t i = 0; i < vars.size(); ++i) {
		if (!bounds[i].lo || !bounds[i].hi)
			throw EvalError("quantified variable '" + vars[i] + "' is not bounded; the built-in policy needs "
			                "lo <= " + vars[i] + " <= hi with ground bounds");
		box[i] = {*bounds[i].lo, *bounds[i].hi};
		if (box[i].empty())
			return Verdict::fails("empty bounds for '" + vars[i] + "'");
	}

	std::vector<Compiled> atoms;
	Matrix root{Matrix::Kind::And, 0, {}};
	std::vector<std::size_t> conjunct_atoms;
	for (const auto &c : flat) {
		root.kids.push_back(build_matrix(c, atoms, index));
		if (root.kids.back().kind == Matrix::Kind::Atom)
			conjunct_atoms.push_back(root.kids.back().atom);
	}

	auto witness = [&](const std::vector<Rational> &x) {
		Verdict v = Verdict::holds();
		for (std::size_t i = 0; i < vars.size(); ++i)
			v.witness[vars[i]] = x[i];
		return v;
	};

	std::vector<Box> stack{box};
	std::size_t visited = 0, unresolved = 0;
	std::vector<K3> values(atoms.size());
	while (!stack.empty()) {
		Box b = std::move(stack.back());
		stack.pop_back();
		if (++visited > policy.max_boxes)
			return Verdict::unknown("box budget of " + std::to_string(policy.max_boxes) + " exhausted", policy.delta);
		if (!contract(conjunct_atoms, atoms, b))
			continue;
		for (std::size_t a = 0; a < atoms.size(); ++a)
			values[a] = atom_on_box(atoms[a], b);
		K3 v = eval_box(root, values);
		if (v == K3::F)
			continue;

		std::vector<Rational> simple(b.size()), mid(b.size());
		for (std::size_t i = 0; i < b.size(); ++i) {
			simple[i] = simplest_point(b[i]);
			mid[i] = (b[i].lo + b[i].hi) / Rational(2);
		}
		std::vector<std::vector<Rational>> candidates{simple, mid};
		for (std::size_t i = 0; i < b.size(); ++i) {
			for (const Rational &end : {b[i].lo, b[i].hi}) {
				auto c = simple;
				c[i] = end;
				candidates.push_back(std::move(c));
			}
		}
		for (std::size_t k = 0, n = candidates.size(); k < n; ++k)
			candidates.push_back(repair(candidates[k], conjunct_atoms, atoms, b));
		for (const auto &c : candidates)
			if (eval_point(root, atoms, c))
				return witness(c);
		if (v == K3::T)
			throw std::logic_error("box evaluates true but its simplest point does not");

		std::size_t widest = 0;
		Rational width(-1);
		for (std::size_t i = 0; i < b.size(); ++i) {
			Rational w = b[i].hi - b[i].lo;
			if (w > width) {
				width = w;
				widest = i;
			}
		}
		if (width <= policy.delta) {
			++unresolved;
			continue;
		}
		const Interval &x = b[widest];
		Rational quarter = width / Rational(4);
		Rational cut = simplest_between(x.lo + quarter, x.hi - quarter);
		Box left = b, right = b;
		left[widest].hi = cut;
		right[widest].lo = cut;
		stack.push_back(std::move(right));
		stack.push_back(std::move(left));
	}
	if (unresolved > 0)
		return Verdict::unknown(std::to_string(unresolved) + " boxes unresolved at resolution " + policy.delta.str(),
		                        policy.delta);
	return Verdict::fails("every box refuted");
}

Verdict kleene_and(Verdict a, Verdict b)
{
	if (a.truth == Truth::Fails)
		return a;
	if (b.truth == Truth::Fails)
		return b;
	if (a.truth == Truth::Unknown)
		return a;
	if (b.truth == Truth::Unknown)
		return b;
	for (auto &[k, v] : b.witness)
		a.witness.emplace(k, v);
	return a;
}

Verdict flip(Verdict v)
{
	if (v.truth == Truth::Holds) {
		v.truth = Truth::Fails;
		v.reason = "counterexample found";
	} else if (v.truth == Truth::Fails) {
		v.truth = Truth::Holds;
		v.reason.clear();
		v.witness.clear();
	}
	return v;
}

Verdict eval_nnf(const NnfPtr &n, const ArithPolicy &policy)
{
	switch (n->kind) {
	case Nnf::Kind::True: return Verdict::holds();
	case Nnf::Kind::False: return Verdict::fails();
	case Nnf::Kind::Atom: {
		if (!n->atom.p.is_constant())
			throw EvalError("free real variable in " + n->atom.p.str());
		return holds_at(n->atom.cmp, n->atom.p.constant_term()) ? Verdict::holds() : Verdict::fails();
	}
	case Nnf::Kind::And: {
		Verdict r = Verdict::holds();
		for (const auto &k : n->kids)
			r = kleene_and(r, eval_nnf(k, policy));
		return r;
	}
	case Nnf::Kind::Or: {
		Verdict r = Verdict::fails();
		for (const auto &k : n->kids)
			r = flip(kleene_and(flip(r), flip(eval_nnf(k, policy))));
		return r;
	}
	case Nnf::Kind::Exists: return search_exists(n, policy);
	case Nnf::Kind::Forall: return flip(search_exists(negate(n), policy));
	}
	return Verdict::unknown("unreachable");
}

// ---------------------------------------------------------------- external backend

std::string smt_symbol(const std::string &name) { return "|" + name + "|"; }

std::string smt_rational(const Rational &q)
{
	Rational a = q.abs();
	std::string body = a.is_integer() ? a.str() + ".0" : "(/ " + a.num().get_str() + ".0 " + a.den().get_str() + ".0)";
	return q.sign() < 0 ? "(- " + body + ")" : body;
}

std::string smt_term(const Term1 &t, const Grounding &g)
{
	const auto &a = t.args();
	switch (t.kind()) {
	case Term1::Kind::Var: return smt_symbol(t.name());
	case Term1::Kind::Num: return smt_rational(t.value());
	case Term1::Kind::Prob: return smt_rational(g.at(t.formula()));
	case Term1::Kind::Add: return "(+ " + smt_term(a[0], g) + " " + smt_term(a[1], g) + ")";
	case Term1::Kind::Sub: return "(- " + smt_term(a[0], g) + " " + smt_term(a[1], g) + ")";
	case Term1::Kind::Mul: return "(* " + smt_term(a[0], g) + " " + smt_term(a[1], g) + ")";
	case Term1::Kind::Neg: return "(- " + smt_term(a[0], g) + ")";
	}
	return "";
}

std::string smt_formula(const Formula1 &f, const Grounding &g)
{
	auto bin = [&](const char *op) {
		return std::string("(") + op + " " + smt_formula(f.child(0), g) + " " + smt_formula(f.child(1), g) + ")";
	};
	switch (f.op()) {
	case Op::Eq: return "(= " + smt_term(f.lhs(), g) + " " + smt_term(f.rhs(), g) + ")";
	case Op::Le: return "(<= " + smt_term(f.lhs(), g) + " " + smt_term(f.rhs(), g) + ")";
	case Op::Lt: return "(< " + smt_term(f.lhs(), g) + " " + smt_term(f.rhs(), g) + ")";
	case Op::Not: return "(not " + smt_formula(f.child(0), g) + ")";
	case Op::And: return bin("and");
	case Op::Or: return bin("or");
	case Op::Implies: return bin("=>");
	case Op::Iff: return bin("=");
	case Op::Forall:
	case Op::Exists:
		return std::string("(") + (f.op() == Op::Forall ? "forall" : "exists") + " ((" + smt_symbol(f.bound_var())
		       + " Real)) " + smt_formula(f.child(0), g) + ")";
	default: return "";
	}
}

std::string shell_quote(const std::string &s)
{
	std::string out = "'";
	for (char c : s)
		out += c == '\'' ? std::string("'\\''") : std::string(1, c);
	return out + "'";
}

Verdict run_external(const Formula1 &f, const Grounding &g, const ArithPolicy &policy)
{
	if (policy.command.empty())
		throw EvalError("external backend selected but no command configured");
	auto dir = std::filesystem::temp_directory_path();
	std::string stem = "mtl-" + std::to_string(::getpid()) + "-" + std::to_string(reinterpret_cast<std::uintptr_t>(&f));
	auto path = dir / (stem + ".smt2");
	{
		std::ofstream out(path);
		if (!out)
			throw EvalError("cannot write backend problem file " + path.string());
		out << to_smtlib(f, g);
	}
	std::string cmd = policy.command + " " + shell_quote(path.string()) + " 2>/dev/null";
	std::string output;
	FILE *pipe = ::popen(cmd.c_str(), "r");
	if (!pipe) {
		std::filesystem::remove(path);
		throw EvalError("cannot start backend command '" + policy.command + "'");
	}
	std::array<char, 256> buf{};
	while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe))
		output += buf.data();
	int status = ::pclose(pipe);
	std::filesystem::remove(path);

	std::size_t b = output.find_first_not_of(" \t\r\n");
	std::string first = b == std::string::npos ? "" : output.substr(b, output.find_first_of(" \t\r\n", b) - b);
	if (first == "sat")
		return Verdict::holds();
	if (first == "unsat")
		return Verdict::fails("backend answered unsat");
	if (first == "unknown")
		return Verdict::unknown("backend answered unknown");
	throw EvalError("backend command '" + policy.command + "' gave no verdict (exit status " + std::to_string(status)
	                + ")");
}

// ---------------------------------------------------------------- RCF entailment

using Branch = std::vector<PolyAtom>;

void dnf(const NnfPtr &n, std::vector<Branch> &out, std::size_t cap)
{
	switch (n->kind) {
	case Nnf::Kind::Atom: out = {{n->atom}}; return;
	case Nnf::Kind::True: out = {{}}; return;
	case Nnf::Kind::False: out.clear(); return;
	case Nnf::Kind::Or: {
		out.clear();
		for (const auto &k : n->kids) {
			std::vector<Branch> sub;
			dnf(k, sub, cap);
			out.insert(out.end(), sub.begin(), sub.end());
		}
		return;
	}
	case Nnf::Kind::And: {
		out = {{}};
		for (const auto &k : n->kids) {
			std::vector<Branch> sub, next;
			dnf(k, sub, cap);
			for (const auto &a : out)
				for (const auto &b : sub) {
					Branch c = a;
					c.insert(c.end(), b.begin(), b.end());
					next.push_back(std::move(c));
				}
			out = std::move(next);
			if (out.size() > cap)
				throw ValidationError("more than " + std::to_string(cap) + " disjunctive cases");
		}
		return;
	}
	default: throw std::logic_error("quantifier in dnf");
	}
}

} // namespace

Verdict eval_ground_qf(const Formula1 &f, const Grounding &g)
{
	if (!f.is_quantifier_free())
		throw EvalError("eval_ground_qf needs a quantifier-free sentence");
	return ground_truth(f, g) ? Verdict::holds() : Verdict::fails();
}

Verdict eval_quantified(const Formula1 &f, const Grounding &g, const ArithPolicy &policy)
{
	if (!f.is_sentence())
		throw EvalError("'" + print(f) + "' has free real variables");
	if (policy.backend == ArithPolicy::Backend::External)
		return run_external(f, g, policy);
	return eval_nnf(to_nnf(f, true, &g), policy);
}

Verdict evaluate(const Formula1 &f, const Grounding &g, const ArithPolicy &policy)
{
	if (f.is_quantifier_free())
		return eval_ground_qf(f, g);
	return eval_quantified(f, g, policy);
}

std::string to_smtlib(const Formula1 &f, const Grounding &g)
{
	return "; " + print(f) + "\n(set-option :produce-models false)\n(assert " + smt_formula(f, g) + ")\n(check-sat)\n";
}

std::vector<PolyCase> qf_cases(const std::vector<Formula1> &conjuncts, std::size_t max_cases)
{
	std::vector<NnfPtr> parts;
	for (const auto &f : conjuncts) {
		if (!f.is_quantifier_free())
			throw EvalError("'" + print(f) + "' is not quantifier-free");
		parts.push_back(to_nnf(f, true, nullptr));
	}
	std::vector<Branch> branches;
	dnf(make({Nnf::Kind::And, {}, {}, parts}), branches, max_cases);
	std::vector<PolyCase> out;
	for (const auto &br : branches) {
		std::vector<PolyCase> cases{{}};
		bool dead = false;
		for (const auto &a : br) {
			if (a.p.is_constant()) {
				dead = dead || !holds_at(a.cmp, a.p.constant_term());
				continue;
			}
			if (a.cmp != Cmp::Ne) {
				for (auto &c : cases)
					c.push_back(a);
				continue;
			}
			std::vector<PolyCase> next;
			for (const auto &c : cases) {
				PolyCase l = c, r = c;
				l.push_back({a.p, Cmp::Lt});
				r.push_back({-a.p, Cmp::Lt});
				next.push_back(std::move(l));
				next.push_back(std::move(r));
			}
			cases = std::move(next);
		}
		if (dead)
			continue;
		for (auto &c : cases)
			out.push_back(std::move(c));
		if (out.size() > max_cases)
			throw ValidationError("more than " + std::to_string(max_cases) + " disjunctive cases");
	}
	return out;
}

Verdict rcf_entails(const std::vector<Formula1> &premises, const Formula1 &goal)
{
	for (const auto &p : premises)
		if (!p.is_quantifier_free())
			return Verdict::unknown("quantified premise");
	if (!goal.is_quantifier_free())
		return Verdict::unknown("quantified goal");
	std::vector<Formula1> all = premises;
	all.push_back(Formula1::negate(goal));
	std::vector<PolyCase> cases;
	try {
		cases = qf_cases(all);
	} catch (const ValidationError &e) {
		return Verdict::unknown(e.what());
	}
	bool incomplete = false;
	for (const auto &c : cases) {
		if (!std::all_of(c.begin(), c.end(), [](const PolyAtom &a) { return a.p.is_linear(); })) {
			incomplete = true;
			continue;
		}
		auto [sys, names] = to_linear_system(c);
		LinearResult r = solve_linear(sys);
		if (r.feasible) {
			Verdict v = Verdict::fails("counterexample to the implication");
			for (std::size_t i = 0; i < names.size(); ++i)
				v.witness[names[i]] = r.solution[i];
			return v;
		}
	}
	if (incomplete)
		return Verdict::unknown("nonlinear case outside the decided fragment");
	return Verdict::holds();
}

std::pair<LinearSystem, std::vector<std::string>> to_linear_system(const PolyCase &c)
{
	std::map<std::string, std::size_t> index;
	std::vector<std::string> names;
	for (const auto &a : c)
		for (const auto &v : a.p.variables())
			if (index.emplace(v, names.size()).second)
				names.push_back(v);
	LinearSystem sys(names.size());
	for (const auto &a : c) {
		if (!a.p.is_linear())
			throw EvalError("nonlinear atom " + a.p.str());
		if (a.cmp == Cmp::Ne)
			throw EvalError("disequality in a linear system");
		std::vector<Rational> coeffs(names.size());
		for (const auto &v : a.p.variables())
			coeffs[index[v]] = a.p.coefficient(v);
		sys.add(coeffs, a.cmp == Cmp::Eq ? Relation::Eq : a.cmp == Cmp::Le ? Relation::Le : Relation::Lt,
		        -a.p.constant_term());
	}
	return {std::move(sys), std::move(names)};
}

} // namespace mtl
