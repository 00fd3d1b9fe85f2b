/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/normal_form.hpp"

#include "mtl/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace mtl {

namespace {

template <class F>
F join(const std::vector<F> &fs, Op op)
{
	F acc = fs.front();
	for (std::size_t i = 1; i < fs.size(); ++i)
		acc = F::make_binary(op, acc, fs[i]);
	return acc;
}

template <class F>
void push_unique(std::vector<F> &v, const F &x)
{
	if (std::find(v.begin(), v.end(), x) == v.end())
		v.push_back(x);
}

template <class F>
F distribute(const F &f)
{
	// level 1: conjuncts; level 2: disjuncts; level 3: atoms
	std::vector<std::vector<std::vector<F>>> shape;
	for (const F &c : flatten(f, Op::And)) {
		auto &alts = shape.emplace_back();
		for (const F &d : flatten(c, Op::Or)) {
			auto &atoms = alts.emplace_back();
			for (const F &a : flatten(d, Op::And)) {
				if (a.op() == Op::Or)
					throw ValidationError("not a conjunction of disjunctions of conjunctions: "
					                      "disjunction nested below the third level");
				atoms.push_back(a);
			}
		}
	}

	std::vector<std::vector<F>> partial{{}};
	for (const auto &alts : shape) {
		std::vector<std::vector<F>> next;
		for (const auto &prefix : partial) {
			for (const auto &atoms : alts) {
				std::vector<F> combo = prefix;
				for (const F &a : atoms)
					push_unique(combo, a);
				next.push_back(std::move(combo));
			}
		}
		partial = std::move(next);
	}

	std::vector<F> disjuncts;
	for (const auto &atoms : partial)
		push_unique(disjuncts, join(atoms, Op::And));
	return join(disjuncts, Op::Or);
}

void terms_of_depth(const Signature &sig, const VarTuple &dom, int depth, std::vector<Term0> &out)
{
	if (depth == 0) {
		for (int v : dom)
			out.push_back(Term0::var(v));
		for (const auto &c : sig.constants())
			out.push_back(Term0::constant(c));
		return;
	}
	std::vector<Term0> smaller;
	terms_of_depth(sig, dom, depth - 1, smaller);
	out = smaller;
	if (smaller.empty())
		return;
	for (const auto &[f, arity] : sig.functions()) {
		std::vector<std::size_t> idx(arity, 0);
		for (;;) {
			std::vector<Term0> args;
			for (std::size_t i : idx)
				args.push_back(smaller[i]);
			out.push_back(Term0::apply(f, std::move(args)));
			int k = arity - 1;
			while (k >= 0 && ++idx[k] == smaller.size())
				idx[k--] = 0;
			if (k < 0)
				break;
		}
	}
}

} // namespace

Formula0 to_disjunctive_shape(const Formula0 &f) { return distribute(f); }
Formula1 to_disjunctive_shape(const Formula1 &f) { return distribute(f); }

bool canonical_less(const Formula0 &a, const Formula0 &b)
{
	std::string pa = print(a), pb = print(b);
	if (pa.size() != pb.size())
		return pa.size() < pb.size();
	return pa < pb;
}

std::vector<Formula0> canonical_enumeration(const Signature &sig, const VarTuple &dom, std::size_t bound,
                                            int term_depth, std::size_t max_count)
{
	std::vector<std::vector<Formula0>> by_size(bound + 1);
	std::size_t total = 0;
	auto add = [&](std::size_t s, Formula0 f) {
		if (++total > max_count)
			throw std::length_error("canonical enumeration exceeds " + std::to_string(max_count) + " formulas");
		by_size[s].push_back(std::move(f));
	};

	if (bound >= 1) {
		std::vector<Term0> terms;
		terms_of_depth(sig, dom, term_depth, terms);
		for (const auto &a : terms)
			for (const auto &b : terms)
				add(1, Formula0::eq(a, b));
		for (const auto &[r, arity] : sig.relations()) {
			if (arity > 0 && terms.empty())
				continue;
			std::vector<std::size_t> idx(arity, 0);
			for (;;) {
				std::vector<Term0> args;
				for (std::size_t i : idx)
					args.push_back(terms[i]);
				add(1, Formula0::rel(r, std::move(args)));
				int k = arity - 1;
				while (k >= 0 && ++idx[k] == terms.size())
					idx[k--] = 0;
				if (k < 0)
					break;
			}
		}
	}
	static const Op binops[] = {Op::And, Op::Or, Op::Implies, Op::Iff};
	for (std::size_t s = 2; s <= bound; ++s) {
		for (const auto &f : by_size[s - 1])
			add(s, Formula0::negate(f));
		for (std::size_t l = 1; l + 1 < s; ++l)
			for (const auto &a : by_size[l])
				for (const auto &b : by_size[s - 1 - l])
					for (Op op : binops)
						add(s, Formula0::binary(op, a, b));
	}

	std::vector<std::pair<std::string, Formula0>> keyed;
	for (auto &level : by_size)
		for (auto &f : level)
			keyed.emplace_back(print(f), std::move(f));
	std::sort(keyed.begin(), keyed.end(), [](const auto &x, const auto &y) {
		return x.first.size() != y.first.size() ? x.first.size() < y.first.size() : x.first < y.first;
	});
	std::vector<Formula0> out;
	out.reserve(keyed.size());
	for (auto &[k, f] : keyed)
		out.push_back(std::move(f));
	return out;
}

std::vector<Formula0> canonical_enumeration(const std::vector<Formula1> &sigma)
{
	std::vector<Formula0> out;
	for (const auto &s : sigma)
		for (const auto &phi : s.prob_constants())
			push_unique(out, phi);
	std::stable_sort(out.begin(), out.end(), canonical_less);
	return out;
}

} // namespace mtl
