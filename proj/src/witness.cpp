/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/witness.hpp"

#include "json.hpp"
#include "mtl/error.hpp"
#include "mtl/semantics.hpp"
#include "mtl/theory.hpp"

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace mtl {

std::string to_string(const AtomVector &sigma)
{
	std::string s;
	for (bool b : sigma)
		s += b ? '1' : '0';
	return s;
}

std::string to_string(WeightsResult::Status s)
{
	switch (s) {
	case WeightsResult::Status::Sat: return "SAT";
	case WeightsResult::Status::Unsat: return "UNSAT";
	case WeightsResult::Status::Unknown: return "UNKNOWN";
	}
	return "?";
}

// ---------------------------------------------------------------- atoms

namespace {

AtomVector sigma_of_index(std::size_t k, std::size_t m)
{
	AtomVector s(m);
	for (std::size_t i = 0; i < m; ++i)
		s[i] = ((k >> (m - 1 - i)) & 1U) == 0;
	return s;
}

std::size_t index_of_sigma(const AtomVector &s)
{
	std::size_t k = 0;
	for (bool b : s)
		k = (k << 1) | (b ? 0U : 1U);
	return k;
}

} // namespace

std::size_t AtomTable::realizable_count() const
{
	return static_cast<std::size_t>(
		std::count_if(atoms.begin(), atoms.end(), [](const AtomEntry &e) { return e.realizable(); }));
}

const AtomEntry &AtomTable::at(const AtomVector &sigma) const
{
	if (sigma.size() != formulas.size())
		throw std::out_of_range("sign vector " + to_string(sigma) + " has the wrong length");
	return atoms.at(index_of_sigma(sigma));
}

AtomTable enumerate_atoms(const FiniteStructure &A, const std::vector<Formula0> &formulas, const VarTuple &x,
                          std::size_t cap)
{
	const std::size_t m = formulas.size();
	for (const auto &phi : formulas)
		for (int v : phi.free_vars())
			if (std::find(x.begin(), x.end(), v) == x.end())
				throw ValidationError("formula '" + print(phi) + "' uses " + var_name(v) + " outside the tuple");

	// 2^m * |A|^|x| without overflow
	const std::size_t n = static_cast<std::size_t>(A.size());
	std::size_t tuples = 1;
	bool over = m >= 63;
	for (std::size_t i = 0; i < x.size() && !over; ++i) {
		if (n != 0 && tuples > cap / n)
			over = true;
		tuples *= n;
	}
	if (!over && (tuples > (cap >> m) || (std::size_t{1} << m) > cap))
		over = true;
	if (over)
		throw ValidationError("atom enumeration needs 2^" + std::to_string(m) + " * " + std::to_string(n) + "^"
		                      + std::to_string(x.size()) + " steps, above the cap of " + std::to_string(cap));

	AtomTable t;
	t.formulas = formulas;
	t.dom = x;
	t.atoms.resize(std::size_t{1} << m);
	for (std::size_t k = 0; k < t.atoms.size(); ++k)
		t.atoms[k].sigma = sigma_of_index(k, m);

	std::vector<FormulaEvaluator> evals;
	std::size_t env_size = 0;
	for (const auto &phi : formulas) {
		evals.emplace_back(A, phi);
		env_size = std::max(env_size, evals.back().env_size());
	}
	for (int v : x)
		env_size = std::max(env_size, static_cast<std::size_t>(v) + 1);

	constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
	auto scan = [&](std::size_t from, std::size_t to, std::vector<std::size_t> &first) {
		std::vector<Element> env(env_size, -1);
		for (std::size_t idx = from; idx < to; ++idx) {
			std::size_t rest = idx;
			for (std::size_t j = x.size(); j-- > 0;) {
				env[static_cast<std::size_t>(x[j])] = static_cast<Element>(rest % n);
				rest /= n;
			}
			std::size_t k = 0;
			for (auto &ev : evals)
				k = (k << 1) | (ev(env) ? 0U : 1U);
			if (first[k] == none)
				first[k] = idx;
		}
	};

	std::size_t threads = std::max(1U, std::thread::hardware_concurrency());
	threads = std::min(threads, tuples / 4096 + 1);
	std::vector<std::vector<std::size_t>> firsts(threads, std::vector<std::size_t>(t.atoms.size(), none));
	if (threads == 1) {
		scan(0, tuples, firsts[0]);
	} else {
		std::vector<std::thread> pool;
		std::size_t chunk = (tuples + threads - 1) / threads;
		for (std::size_t w = 0; w < threads; ++w)
			pool.emplace_back(scan, std::min(tuples, w * chunk), std::min(tuples, (w + 1) * chunk),
			                  std::ref(firsts[w]));
		for (auto &th : pool)
			th.join();
	}

	for (std::size_t k = 0; k < t.atoms.size(); ++k) {
		std::size_t best = none;
		for (const auto &f : firsts)
			best = std::min(best, f[k]);
		if (best == none)
			continue;
		std::vector<Element> rep(x.size());
		for (std::size_t j = x.size(); j-- > 0;) {
			rep[j] = static_cast<Element>(best % n);
			best /= n;
		}
		t.atoms[k].representative = std::move(rep);
	}
	return t;
}

std::vector<Formula0> theory_formulas(const std::vector<Formula1> &sigma)
{
	std::vector<Formula0> out;
	std::set<std::string> seen;
	for (const auto &f : sigma)
		for (auto &phi : f.prob_constants())
			if (seen.insert(print(phi)).second)
				out.push_back(std::move(phi));
	return out;
}

// ---------------------------------------------------------------- problem

namespace {

std::optional<bool> truth_at(const Formula0 &phi, const std::map<std::string, std::size_t> &index,
                             const AtomVector &sigma)
{
	auto it = index.find(print(phi));
	if (it != index.end())
		return sigma[it->second];
	auto sub = [&](std::size_t i) { return truth_at(phi.child(i), index, sigma); };
	switch (phi.op()) {
	case Op::Not: {
		auto a = sub(0);
		return a ? std::optional<bool>(!*a) : std::nullopt;
	}
	case Op::And:
	case Op::Or:
	case Op::Implies:
	case Op::Iff: {
		auto a = sub(0), b = sub(1);
		if (!a || !b)
			return std::nullopt;
		switch (phi.op()) {
		case Op::And: return *a && *b;
		case Op::Or: return *a || *b;
		case Op::Implies: return !*a || *b;
		default: return *a == *b;
		}
	}
	default: return std::nullopt;
	}
}

std::map<std::string, std::size_t> formula_index(const AtomTable &t)
{
	std::map<std::string, std::size_t> index;
	for (std::size_t i = 0; i < t.formulas.size(); ++i)
		index.emplace(print(t.formulas[i]), i);
	return index;
}

} // namespace

std::optional<Polynomial> expand_constant(const SynthesisProblem &p, const Formula0 &phi)
{
	auto index = formula_index(p.table);
	Polynomial sum;
	for (std::size_t u = 0; u < p.unknowns.size(); ++u) {
		auto v = truth_at(phi, index, p.table.atoms[p.unknown_atoms[u]].sigma);
		if (!v)
			return std::nullopt;
		if (*v)
			sum += Polynomial::variable(p.unknowns[u]);
	}
	// with no realizable atom the scan still has to accept the shape
	if (p.unknowns.empty() && !truth_at(phi, index, AtomVector(p.table.formulas.size(), true)))
		return std::nullopt;
	return sum;
}

SynthesisProblem build_problem(const std::vector<Formula1> &sigma, AtomTable table)
{
	SynthesisProblem p;
	for (const auto &f : sigma) {
		if (!f.is_quantifier_free())
			throw ValidationError("'" + print(f) + "' has real quantifiers; decide it with a team through check");
		if (!f.is_sentence())
			throw ValidationError("'" + print(f) + "' has free real variables");
	}
	p.table = std::move(table);
	p.sigma = sigma;
	auto index = formula_index(p.table);
	for (const auto &phi : theory_formulas(sigma))
		if (!index.count(print(phi)))
			throw ValidationError("|" + print(phi) + "| is not in the atom table");

	for (std::size_t k = 0; k < p.table.atoms.size(); ++k) {
		if (p.table.atoms[k].realizable()) {
			p.unknowns.push_back("p_" + to_string(p.table.atoms[k].sigma));
			p.unknown_atoms.push_back(k);
		} else {
			p.forced_zero.push_back(p.table.atoms[k].sigma);
		}
	}

	auto add_expansion = [&](const Formula0 &phi) {
		std::string name = prob_variable(phi);
		if (p.expansion.count(name))
			return;
		auto e = expand_constant(p, phi);
		if (!e)
			throw ValidationError("|" + print(phi) + "| is not a combination of table formulas");
		p.expansion.emplace(name, std::move(*e));
	};
	for (const auto &phi : p.table.formulas)
		add_expansion(phi);

	const auto &fs = p.table.formulas;
	auto pr = [](const Formula0 &phi) { return Term1::prob(phi); };
	const Term1 zero = Term1::num(0), one = Term1::num(1);
	for (std::size_t i = 0; i < fs.size(); ++i) {
		const Formula0 &a = fs[i];
		p.closure.push_back(Formula1::le(zero, pr(a)));
		p.closure.push_back(Formula1::le(pr(a), one));
		Formula0 na = Formula0::negate(a);
		p.closure.push_back(Formula1::eq(pr(na), Term1::sub(one, pr(a))));
		add_expansion(na);
		for (std::size_t j = 0; j < fs.size(); ++j) {
			if (i == j)
				continue;
			const Formula0 &b = fs[j];
			Formula0 ab = Formula0::conj(a, b), anb = Formula0::conj(a, Formula0::negate(b));
			p.closure.push_back(Formula1::eq(pr(a), Term1::add(pr(ab), pr(anb))));
			add_expansion(ab);
			add_expansion(anb);
			if (i < j) {
				Formula0 aob = Formula0::disj(a, b);
				p.closure.push_back(
					Formula1::eq(pr(aob), Term1::sub(Term1::add(pr(a), pr(b)), pr(ab))));
				add_expansion(aob);
			}
		}
	}

	std::vector<Formula1> all = sigma;
	all.insert(all.end(), p.closure.begin(), p.closure.end());
	p.cases = qf_cases(all);
	return p;
}

// ---------------------------------------------------------------- solving

namespace {

Relation relation_of(Cmp c)
{
	switch (c) {
	case Cmp::Eq: return Relation::Eq;
	case Cmp::Le: return Relation::Le;
	case Cmp::Lt: return Relation::Lt;
	case Cmp::Ne: break;
	}
	throw std::logic_error("disequality left in a disjunctive case");
}

bool holds_at(const PolyAtom &a, const std::map<std::string, Rational> &point)
{
	int s = a.p.eval(point).sign();
	switch (a.cmp) {
	case Cmp::Eq: return s == 0;
	case Cmp::Ne: return s != 0;
	case Cmp::Le: return s <= 0;
	case Cmp::Lt: return s < 0;
	}
	return false;
}

// linear polynomial over the unknowns as a row "coeffs . p rel rhs"
void add_row(LinearSystem &sys, const std::vector<std::string> &unknowns, const Polynomial &q, Cmp cmp)
{
	std::vector<Rational> coeffs(unknowns.size());
	for (std::size_t u = 0; u < unknowns.size(); ++u)
		coeffs[u] = q.coefficient(unknowns[u]);
	sys.add(std::move(coeffs), relation_of(cmp), -q.constant_term());
}

LinearSystem simplex_system(const std::vector<std::string> &unknowns)
{
	LinearSystem sys(unknowns.size(), true);
	sys.add(std::vector<Rational>(unknowns.size(), Rational(1)), Relation::Eq, Rational(1));
	return sys;
}

std::map<std::string, Rational> point_of(const std::vector<std::string> &unknowns, const std::vector<Rational> &x)
{
	std::map<std::string, Rational> pt;
	for (std::size_t u = 0; u < unknowns.size(); ++u)
		pt[unknowns[u]] = x[u];
	return pt;
}

// polynomial over the unknowns compiled for double evaluation
struct DoublePoly {
	struct Term {
		double c;
		std::vector<std::pair<std::size_t, int>> powers;
	};
	std::vector<Term> terms;

	DoublePoly(const Polynomial &q, const std::map<std::string, std::size_t> &slot)
	{
		for (const auto &[mono, c] : q.terms()) {
			Term t{c.to_double(), {}};
			for (const auto &[v, e] : mono)
				t.powers.emplace_back(slot.at(v), e);
			terms.push_back(std::move(t));
		}
	}

	double operator()(const Eigen::VectorXd &p) const
	{
		double s = 0;
		for (const auto &t : terms) {
			double v = t.c;
			for (auto [i, e] : t.powers)
				v *= std::pow(p[static_cast<Eigen::Index>(i)], e);
			s += v;
		}
		return s;
	}
};

struct Residuals {
	using Scalar = double;
	using InputType = Eigen::VectorXd;
	using ValueType = Eigen::VectorXd;
	using JacobianType = Eigen::MatrixXd;
	enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

	std::vector<std::pair<DoublePoly, Cmp>> atoms;
	int n = 0;

	int inputs() const { return n; }
	int values() const { return std::max<int>(n, static_cast<int>(atoms.size())); }

	static Eigen::VectorXd weights(const Eigen::VectorXd &z)
	{
		Eigen::VectorXd p = z.cwiseProduct(z);
		double s = p.sum();
		return s > 0 ? Eigen::VectorXd(p / s) : Eigen::VectorXd::Constant(z.size(), 1.0 / double(z.size()));
	}

	int operator()(const Eigen::VectorXd &z, Eigen::VectorXd &f) const
	{
		Eigen::VectorXd p = weights(z);
		f.setZero(values());
		for (std::size_t i = 0; i < atoms.size(); ++i) {
			double v = atoms[i].first(p);
			switch (atoms[i].second) {
			case Cmp::Eq: f[static_cast<Eigen::Index>(i)] = v; break;
			case Cmp::Le: f[static_cast<Eigen::Index>(i)] = std::max(0.0, v); break;
			case Cmp::Lt: f[static_cast<Eigen::Index>(i)] = std::max(0.0, v + 1e-9); break;
			case Cmp::Ne: break;
			}
		}
		return 0;
	}
};

// denominators tried when rounding: every small one, then doubling
std::vector<long> denominator_schedule(long cap)
{
	std::vector<long> ds;
	for (long d = 1; d <= std::min(cap, 12L); ++d)
		ds.push_back(d);
	for (long d = 16; d <= cap; d *= 2)
		ds.push_back(d);
	if (ds.back() != cap)
		ds.push_back(cap);
	return ds;
}

struct Pending {
	std::size_t case_index;
	LinearSystem linear;
	std::vector<PolyAtom> expanded;   // every atom of the case over the unknowns
};

std::optional<std::vector<Rational>> numeric_attempt(const SynthesisProblem &p, const Pending &pc,
                                                     const SolveOptions &opts)
{
	const auto &unknowns = p.unknowns;
	const PolyCase &raw = p.cases[pc.case_index];
	std::set<std::string> nonlinear_vars;
	for (const auto &a : raw)
		for (const auto &[mono, c] : a.p.terms()) {
			int deg = 0;
			for (const auto &[v, e] : mono)
				deg += e;
			if (deg >= 2)
				for (const auto &[v, e] : mono)
					nonlinear_vars.insert(v);
		}

	std::map<std::string, std::size_t> slot;
	for (std::size_t u = 0; u < unknowns.size(); ++u)
		slot[unknowns[u]] = u;
	Residuals fn;
	fn.n = static_cast<int>(unknowns.size());
	for (const auto &a : pc.expanded)
		fn.atoms.emplace_back(DoublePoly(a.p, slot), a.cmp);
	std::map<std::string, DoublePoly> constant_value;
	for (const auto &v : nonlinear_vars)
		constant_value.emplace(v, DoublePoly(p.expansion.at(v), slot));

	std::mt19937 rng(opts.seed);
	std::uniform_real_distribution<double> start(0.2, 1.8);
	std::set<std::map<std::string, Rational>> tried;
	for (int r = 0; r < std::max(1, opts.restarts); ++r) {
		Eigen::VectorXd z = Eigen::VectorXd::Ones(fn.n);
		if (r > 0)
			for (int i = 0; i < fn.n; ++i)
				z[i] = start(rng);
		Eigen::NumericalDiff<Residuals> nd(fn);
		Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residuals>> lm(nd);
		lm.parameters.maxfev = 4000;
		lm.parameters.xtol = 1e-14;
		lm.parameters.ftol = 1e-14;
		lm.minimize(z);
		Eigen::VectorXd w = Residuals::weights(z);

		for (long d : denominator_schedule(opts.max_denominator)) {
			std::map<std::string, Rational> fixed;
			for (const auto &[v, dp] : constant_value)
				fixed[v] = approximate(dp(w), mpz_class(d));
			if (!tried.insert(fixed).second)
				continue;
			LinearSystem sys = pc.linear;
			for (const auto &[v, val] : fixed)
				add_row(sys, unknowns, p.expansion.at(v) - Polynomial(val), Cmp::Eq);
			bool bad = false;
			for (const auto &a : raw) {
				Polynomial q = a.p.substitute(fixed).compose(p.expansion);
				if (!q.is_linear()) {
					bad = true;
					break;
				}
				add_row(sys, unknowns, q, a.cmp);
			}
			if (bad)
				continue;
			LinearResult lr = solve_linear(sys);
			if (!lr.feasible)
				continue;
			auto pt = point_of(unknowns, lr.solution);
			if (std::all_of(pc.expanded.begin(), pc.expanded.end(), [&](const PolyAtom &a) { return holds_at(a, pt); }))
				return lr.solution;
		}
	}
	return std::nullopt;
}

} // namespace

WeightsResult solve_weights(const SynthesisProblem &p, const SolveOptions &opts)
{
	WeightsResult res;
	auto finish = [&](const std::vector<Rational> &x) {
		res.status = WeightsResult::Status::Sat;
		for (const auto &a : p.table.atoms)
			res.weights[a.sigma] = Rational(0);
		for (std::size_t u = 0; u < p.unknowns.size(); ++u)
			res.weights[p.table.atoms[p.unknown_atoms[u]].sigma] = x[u];
		return res;
	};

	std::vector<Pending> pending;
	for (std::size_t ci = 0; ci < p.cases.size(); ++ci) {
		LinearSystem sys = simplex_system(p.unknowns);
		std::vector<PolyAtom> expanded;
		bool nonlinear = false;
		for (const auto &a : p.cases[ci]) {
			PolyAtom e{a.p.compose(p.expansion), a.cmp};
			if (e.p.is_linear())
				add_row(sys, p.unknowns, e.p, e.cmp);
			else
				nonlinear = true;
			expanded.push_back(std::move(e));
		}
		LinearResult lr = solve_linear(sys);
		if (!lr.feasible) {
			res.refutations.push_back({ci, std::move(sys), std::move(lr.certificate)});
			continue;
		}
		if (!nonlinear)
			return finish(lr.solution);
		pending.push_back({ci, std::move(sys), std::move(expanded)});
	}

	for (const auto &pc : pending)
		if (auto x = numeric_attempt(p, pc, opts))
			return finish(*x);

	if (pending.empty()) {
		res.status = WeightsResult::Status::Unsat;
		res.reason = p.cases.empty() ? "every case contains a false constant comparison"
		                             : "every case is refuted by a linear certificate";
		return res;
	}
	res.refutations.clear();
	res.status = WeightsResult::Status::Unknown;
	res.reason = std::to_string(pending.size()) + " nonlinear case(s) with no verified rational solution up to "
	             "denominator " + std::to_string(opts.max_denominator);
	return res;
}

// ---------------------------------------------------------------- assembly

DiscreteMeasureTeam assemble_team(const std::map<AtomVector, Rational> &weights, const AtomTable &table,
                                  const FiniteStructure &A)
{
	std::vector<TeamRow> rows;
	for (const auto &atom : table.atoms) {
		auto it = weights.find(atom.sigma);
		if (it == weights.end() || it->second.sign() <= 0)
			continue;
		if (!atom.realizable())
			throw std::logic_error("positive weight on unrealizable atom " + to_string(atom.sigma));
		rows.push_back({*atom.representative, it->second});
	}
	return DiscreteMeasureTeam(A, table.dom, std::move(rows));
}

std::vector<IntervalLevel> interval_tree(const std::map<AtomVector, Rational> &weights, const AtomTable &table)
{
	const std::size_t m = table.formulas.size();
	std::vector<Rational> mass(table.atoms.size());
	for (std::size_t k = 0; k < table.atoms.size(); ++k) {
		auto it = weights.find(table.atoms[k].sigma);
		if (it != weights.end())
			mass[k] = it->second;
	}
	std::vector<IntervalLevel> tree;
	for (std::size_t d = 1; d <= m; ++d) {
		IntervalLevel level{d, {}};
		// prefixes of length d in tree order; each covers a block of 2^(m-d) atoms
		std::size_t block = std::size_t{1} << (m - d);
		Rational lo;
		for (std::size_t j = 0; j < (std::size_t{1} << d); ++j) {
			Rational w;
			for (std::size_t k = j * block; k < (j + 1) * block; ++k)
				w += mass[k];
			AtomVector prefix(table.atoms[j * block].sigma.begin(), table.atoms[j * block].sigma.begin() + static_cast<long>(d));
			level.labels.push_back({std::move(prefix), lo, lo + w});
			lo += w;
		}
		tree.push_back(std::move(level));
	}
	return tree;
}

std::string interval_tree_json(const std::vector<IntervalLevel> &tree)
{
	nlohmann::ordered_json out = nlohmann::ordered_json::array();
	for (const auto &level : tree) {
		nlohmann::ordered_json labels = nlohmann::ordered_json::array();
		for (const auto &l : level.labels)
			labels.push_back({{"sigma", to_string(l.sigma)}, {"lo", l.lo.str()}, {"hi", l.hi.str()}});
		out.push_back({{"depth", level.depth}, {"labels", std::move(labels)}});
	}
	return out.dump(2);
}

WitnessResult synthesize_witness(const FiniteStructure &A, const std::vector<Formula1> &sigma, const VarTuple &x,
                                 const WitnessOptions &opts)
{
	WitnessResult r;
	r.problem = build_problem(sigma, enumerate_atoms(A, theory_formulas(sigma), x, opts.atom_cap));
	r.weights = solve_weights(r.problem, opts.solve);
	r.status = r.weights.status;
	if (r.status != WeightsResult::Status::Sat)
		return r;
	r.team = assemble_team(r.weights.weights, r.problem.table, A);
	TheoryReport check = check_theory(*r.team, A, sigma);
	if (check.overall() != Truth::Holds)
		throw std::logic_error("synthesized team does not satisfy the theory");
	r.tree = interval_tree(r.weights.weights, r.problem.table);
	return r;
}

} // namespace mtl
