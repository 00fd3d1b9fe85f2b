/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/corpus.hpp"

#include "json.hpp"
#include "mtl/error.hpp"
#include "mtl/theory.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace mtl {

// ---------------------------------------------------------------- genotypes

std::string to_string(Genotype g)
{
	switch (g) {
	case Genotype::AA: return "AA";
	case Genotype::Aa: return "Aa";
	case Genotype::aa: return "aa";
	}
	return "?";
}

void validate_distribution(const GenotypeDistribution &g)
{
	Rational total;
	for (const auto &q : g) {
		if (q.sign() < 0)
			throw ValidationError("genotype probability " + q.str() + " is negative");
		total += q;
	}
	if (total != 1)
		throw ValidationError("genotype probabilities sum to " + total.str() + ", not 1");
}

namespace {

std::size_t idx(Genotype g) { return static_cast<std::size_t>(g); }

// probability that a parent of genotype g passes on allele A
Rational allele_a(Genotype g)
{
	return g == Genotype::AA ? Rational(1) : g == Genotype::Aa ? Rational(1, 2) : Rational(0);
}

GenotypeModel make_model()
{
	std::vector<std::string> ids;
	for (Genotype f : all_genotypes)
		for (Genotype m : all_genotypes)
			for (Genotype c : all_genotypes)
				ids.push_back(to_string(f) + "-" + to_string(m) + "-" + to_string(c));
	FiniteStructure M("genotype", ids);
	const char *roles[] = {"f", "m", "c"};
	for (std::size_t r = 0; r < 3; ++r)
		for (Genotype k : all_genotypes) {
			std::vector<std::vector<Element>> tuples;
			for (Element e = 0; e < 27; ++e) {
				int part = r == 0 ? e / 9 : r == 1 ? (e / 3) % 3 : e % 3;
				if (part == static_cast<int>(k))
					tuples.push_back({e});
			}
			M.add_relation(std::string("P_") + roles[r] + "_" + to_string(k), 1, tuples);
		}
	M.validate();

	GenotypeModel model{std::move(M), {}};
	for (Genotype f : all_genotypes)
		for (Genotype m : all_genotypes) {
			Rational a = allele_a(f) * allele_a(m), b = (1 - allele_a(f)) * (1 - allele_a(m));
			model.mendel[idx(f)][idx(m)] = {a, 1 - a - b, b};
		}
	return model;
}

std::string pred(const char *role, Genotype k, int var)
{
	return std::string("P_") + role + "_" + to_string(k) + "(v" + std::to_string(var) + ")";
}

} // namespace

Element GenotypeModel::triple(Genotype f, Genotype m, Genotype c) const
{
	return static_cast<Element>(9 * idx(f) + 3 * idx(m) + idx(c));
}

const GenotypeModel &genotype_model()
{
	static const GenotypeModel model = make_model();
	return model;
}

std::vector<Formula1> hw_sigma()
{
	using G = Genotype;
	const Signature &sig = genotype_model().structure.signature();
	const VarTuple dom{0, 1, 2};
	std::vector<std::string> lines;
	// (1) each sex of generation i+1 has the genotype frequencies of the children of generation i
	for (const char *j : {"f", "m"})
		for (G k : all_genotypes)
			for (int i = 0; i < 2; ++i)
				lines.push_back("|" + pred(j, k, i + 1) + "| = |" + pred("c", k, i) + "|");
	// (2)-(4) Mendel: |f & m| = w * |f & m & c|
	struct Rule {
		G f, m, c;
		int w;
	};
	const std::vector<Rule> rules{
		{G::AA, G::AA, G::AA, 1}, {G::AA, G::aa, G::Aa, 1}, {G::aa, G::AA, G::Aa, 1}, {G::aa, G::aa, G::aa, 1},
		{G::AA, G::Aa, G::AA, 2}, {G::AA, G::Aa, G::Aa, 2}, {G::aa, G::Aa, G::Aa, 2}, {G::aa, G::Aa, G::aa, 2},
		{G::Aa, G::aa, G::aa, 2}, {G::Aa, G::AA, G::Aa, 2}, {G::Aa, G::aa, G::Aa, 2}, {G::Aa, G::AA, G::AA, 2},
		{G::Aa, G::Aa, G::Aa, 2}, {G::Aa, G::Aa, G::AA, 4}, {G::Aa, G::Aa, G::aa, 4},
	};
	for (const auto &r : rules)
		for (int i = 0; i < 2; ++i) {
			std::string fm = pred("f", r.f, i + 1) + " & " + pred("m", r.m, i + 1);
			std::string rhs = "|" + fm + " & " + pred("c", r.c, i + 1) + "|";
			lines.push_back("|" + fm + "| = " + (r.w == 1 ? rhs : std::to_string(r.w) + " * " + rhs));
		}
	// (5) random mating
	for (G k : all_genotypes)
		for (G l : all_genotypes)
			for (int i = 0; i < 2; ++i)
				lines.push_back("|" + pred("f", k, i + 1) + " & " + pred("m", l, i + 1) + "| = |" + pred("f", k, i + 1)
				                + "| * |" + pred("m", l, i + 1) + "|");
	std::vector<Formula1> out;
	for (const auto &l : lines)
		out.push_back(parse_l1(l, sig, dom));
	return out;
}

Formula1 hw_alpha()
{
	const Signature &sig = genotype_model().structure.signature();
	std::vector<Formula1> parts;
	for (Genotype k : all_genotypes)
		parts.push_back(parse_l1("|" + pred("c", k, 1) + "| = |" + pred("c", k, 2) + "|", sig, {0, 1, 2}));
	return Formula1::conj_all(parts);
}

GenotypeDistribution next_generation(const GenotypeDistribution &children)
{
	validate_distribution(children);
	const GenotypeModel &model = genotype_model();
	GenotypeDistribution out{Rational(0), Rational(0), Rational(0)};
	for (Genotype f : all_genotypes)
		for (Genotype m : all_genotypes)
			for (Genotype c : all_genotypes)
				out[idx(c)] += children[idx(f)] * children[idx(m)] * model.child(f, m)[idx(c)];
	return out;
}

DiscreteMeasureTeam synth_hw_team(const GenotypeDistribution &g1)
{
	validate_distribution(g1);
	const GenotypeModel &model = genotype_model();

	// marginal of each generation variable over the 27 triples
	using Marginal = std::vector<std::pair<Element, Rational>>;
	Marginal gen1;
	for (Genotype k : all_genotypes)
		if (g1[idx(k)].sign() > 0)
			gen1.emplace_back(model.triple(k, k, k), g1[idx(k)]);
	auto mate = [&](const GenotypeDistribution &parents) {
		Marginal out;
		for (Genotype f : all_genotypes)
			for (Genotype m : all_genotypes)
				for (Genotype c : all_genotypes) {
					Rational w = parents[idx(f)] * parents[idx(m)] * model.child(f, m)[idx(c)];
					if (w.sign() > 0)
						out.emplace_back(model.triple(f, m, c), w);
				}
		return out;
	};
	GenotypeDistribution g2 = next_generation(g1);
	Marginal gen2 = mate(g1), gen3 = mate(g2);

	std::vector<TeamRow> rows;
	for (const auto &[e0, w0] : gen1)
		for (const auto &[e1, w1] : gen2)
			for (const auto &[e2, w2] : gen3)
				rows.push_back({{e0, e1, e2}, w0 * w1 * w2});
	DiscreteMeasureTeam X(model.structure, {0, 1, 2}, std::move(rows));

	if (check_theory(X, model.structure, hw_sigma()).overall() != Truth::Holds)
		throw std::logic_error("generated genotype team violates the random-mating theory");
	return X;
}

// ---------------------------------------------------------------- Bell

std::string BellReport::to_json() const
{
	nlohmann::ordered_json j;
	j["values"] = nlohmann::ordered_json::array();
	for (const auto &v : values)
		j["values"].push_back(v.str());
	j["sum"] = sum.str();
	j["conjunction"] = conjunction.str();
	j["bound"] = bound.str();
	j["holds_general"] = holds_general;
	j["contradictory"] = contradictory;
	if (holds_contradictory)
		j["holds_contradictory"] = *holds_contradictory;
	else
		j["holds_contradictory"] = nullptr;
	return j.dump(2);
}

BellReport bell_audit(const BellInstance &inst)
{
	if (inst.formulas.empty())
		throw ValidationError("a Bell audit needs at least one formula");
	std::set<int> vars;
	for (const auto &phi : inst.formulas)
		phi.collect_vars(vars);
	const VarTuple &dom = inst.team.dom();
	for (int v : vars)
		if (std::find(dom.begin(), dom.end(), v) == dom.end())
			throw ValidationError("proposition " + var_name(v) + " is not in the team domain");

	static const FiniteStructure B = boolean_structure();
	BellReport r;
	TeamEvaluator ev(inst.team, B);
	for (const auto &phi : inst.formulas) {
		r.values.push_back(ev.prob(boolean_encoding(phi)));
		r.sum += r.values.back();
	}
	PropFormula conj = inst.formulas[0];
	for (std::size_t j = 1; j < inst.formulas.size(); ++j)
		conj = PropFormula::binary(PropFormula::Kind::And, conj, inst.formulas[j]);
	r.conjunction = ev.prob(boolean_encoding(conj));
	Rational k(static_cast<long>(inst.formulas.size()));
	r.bound = k - 1 + r.conjunction;
	r.holds_general = r.sum <= r.bound;

	if (vars.size() > 24)
		throw ValidationError("truth table over " + std::to_string(vars.size()) + " propositions is too large");
	std::vector<int> vs(vars.begin(), vars.end());
	std::vector<bool> valuation(vs.empty() ? 0 : static_cast<std::size_t>(vs.back()) + 1);
	r.contradictory = true;
	for (std::size_t bits = 0; bits < (std::size_t{1} << vs.size()) && r.contradictory; ++bits) {
		for (std::size_t i = 0; i < vs.size(); ++i)
			valuation[static_cast<std::size_t>(vs[i])] = (bits >> i) & 1U;
		if (conj.eval(valuation))
			r.contradictory = false;
	}
	if (r.contradictory)
		r.holds_contradictory = r.sum <= k - 1;
	return r;
}

// ---------------------------------------------------------------- Markov chains

std::string markov_constant(const std::vector<std::size_t> &eta)
{
	if (eta.empty())
		return "c_e";
	std::string s = "c";
	for (std::size_t k : eta)
		s += "_" + std::to_string(k);
	return s;
}

namespace {

std::vector<std::vector<std::size_t>> sequences_up_to(std::size_t fanout, std::size_t depth)
{
	std::vector<std::vector<std::size_t>> out{{}};
	for (std::size_t b = 0; b < out.size(); ++b) {
		if (out[b].size() == depth)
			continue;
		for (std::size_t k = 0; k < fanout; ++k) {
			auto next = out[b];
			next.push_back(k);
			out.push_back(std::move(next));
		}
	}
	return out;
}

std::vector<long> lattice_position(const std::vector<std::size_t> &eta, std::size_t fanout)
{
	std::vector<long> pos(fanout / 2, 0);
	for (std::size_t k : eta)
		pos[k / 2] += k % 2 == 0 ? 1 : -1;
	return pos;
}

std::string position_id(const std::vector<long> &pos)
{
	std::string s = "(";
	for (std::size_t i = 0; i < pos.size(); ++i)
		s += (i ? "," : "") + std::to_string(pos[i]);
	return s + ")";
}

std::string sequence_id(const std::vector<std::size_t> &eta) { return markov_constant(eta).substr(2); }

} // namespace

MarkovInstance markov_sigma(std::size_t fanout, std::size_t depth, std::size_t horizon, MarkovShape shape,
                            std::size_t cap)
{
	if (fanout == 0)
		throw ValidationError("fan-out must be positive");
	if (horizon == 0)
		throw ValidationError("horizon must be positive");
	if (shape == MarkovShape::Lattice && fanout % 2 != 0)
		throw ValidationError("a lattice walk needs an even fan-out");
	// constants: sum of N^l for l <= d
	std::size_t count = 0, level = 1;
	for (std::size_t l = 0; l <= depth; ++l) {
		count += level;
		if (count > cap || (l < depth && level > cap / fanout + 1))
			throw ValidationError("Markov structure needs more than " + std::to_string(cap) + " constants");
		level *= fanout;
	}
	std::size_t inner = count - level / fanout;   // sequences shorter than depth
	std::size_t instances = 2 + horizon + horizon * (horizon - 1) / 2 * inner * fanout;
	if (instances > cap)
		throw ValidationError("Markov theory needs " + std::to_string(instances) + " instances, above the cap of "
		                      + std::to_string(cap));

	auto seqs = sequences_up_to(fanout, depth);
	std::vector<std::string> ids;
	std::map<std::string, Element> element_of_id;
	std::vector<Element> element_of_seq;
	for (const auto &eta : seqs) {
		std::string id = shape == MarkovShape::Tree ? sequence_id(eta) : position_id(lattice_position(eta, fanout));
		auto [it, fresh] = element_of_id.emplace(id, static_cast<Element>(ids.size()));
		if (fresh)
			ids.push_back(id);
		element_of_seq.push_back(it->second);
	}
	std::string name = "markov-" + std::string(shape == MarkovShape::Tree ? "tree" : "lattice") + "-N"
	                   + std::to_string(fanout) + "-d" + std::to_string(depth);
	FiniteStructure A(name, ids);
	std::set<std::pair<Element, Element>> edges;
	std::map<std::vector<std::size_t>, std::size_t> seq_index;
	for (std::size_t s = 0; s < seqs.size(); ++s)
		seq_index[seqs[s]] = s;
	for (std::size_t s = 0; s < seqs.size(); ++s)
		if (seqs[s].size() < depth)
			for (std::size_t k = 0; k < fanout; ++k) {
				auto child = seqs[s];
				child.push_back(k);
				edges.emplace(element_of_seq[s], element_of_seq[seq_index.at(child)]);
			}
	std::vector<std::vector<Element>> etuples;
	for (auto [a, b] : edges)
		etuples.push_back({a, b});
	A.add_relation("E", 2, etuples);
	MarkovInstance m{fanout, depth, horizon, shape, A, {}, {}, {}};
	for (std::size_t s = 0; s < seqs.size(); ++s) {
		m.structure.add_constant(markov_constant(seqs[s]), element_of_seq[s]);
		m.constants.push_back(markov_constant(seqs[s]));
	}
	m.structure.validate();
	for (std::size_t i = 0; i <= horizon; ++i)
		m.dom.push_back(static_cast<int>(i));

	const Signature &sig = m.structure.signature();
	auto add = [&](const std::string &text) { m.sigma.push_back(parse_l1(text, sig, m.dom)); };
	auto v = [](std::size_t i) { return "v" + std::to_string(i); };
	add("|v0 = c_e| = 1");
	for (std::size_t i = 0; i < horizon && i < depth; ++i)
		add("|E(" + v(i) + ", " + v(i + 1) + ")| = 1");
	for (std::size_t i = 0; i < horizon; ++i)
		for (std::size_t j = i + 1; j < horizon; ++j)
			for (const auto &eta : seqs) {
				if (eta.size() >= depth)
					continue;
				std::string c = markov_constant(eta);
				for (std::size_t k = 0; k < fanout; ++k) {
					auto next = eta;
					next.push_back(k);
					std::string ck = markov_constant(next);
					std::string at_i = "|" + v(i) + " = " + c + "|", at_j = "|" + v(j) + " = " + c + "|";
					std::string step_i = "|" + v(i) + " = " + c + " & " + v(i + 1) + " = " + ck + "|";
					std::string step_j = "|" + v(j) + " = " + c + " & " + v(j + 1) + " = " + ck + "|";
					add("(" + at_i + " = 0) | (" + at_j + " = 0) | (" + step_i + " * " + at_j + " = " + step_j + " * "
					    + at_i + ")");
				}
			}
	return m;
}

DiscreteMeasureTeam markov_walk_team(const MarkovInstance &m)
{
	if (m.horizon > m.depth)
		throw ValidationError("a walk of horizon " + std::to_string(m.horizon) + " leaves the depth-"
		                      + std::to_string(m.depth) + " structure");
	std::map<std::vector<Element>, Rational> mass;
	std::vector<std::size_t> path(m.horizon, 0);
	Rational each = Rational(1);
	for (std::size_t i = 0; i < m.horizon; ++i)
		each /= Rational(static_cast<long>(m.fanout));
	while (true) {
		std::vector<Element> row;
		std::vector<std::size_t> eta;
		row.push_back(m.structure.constant(markov_constant(eta)));
		for (std::size_t k : path) {
			eta.push_back(k);
			row.push_back(m.structure.constant(markov_constant(eta)));
		}
		mass[row] += each;
		// next path in lexicographic order
		std::size_t pos = m.horizon;
		while (pos > 0 && path[pos - 1] + 1 == m.fanout)
			path[--pos] = 0;
		if (pos == 0)
			break;
		++path[pos - 1];
	}
	std::vector<TeamRow> rows;
	for (auto &[vals, w] : mass)
		rows.push_back({vals, w});
	return DiscreteMeasureTeam(m.structure, m.dom, std::move(rows));
}

// ---------------------------------------------------------------- quantum

QuantumBasis QuantumBasis::identity()
{
	QuantumBasis b;
	for (std::size_t i = 0; i < 4; ++i)
		for (std::size_t n = 0; n < 4; ++n)
			b.coords[i][n] = {Rational(i == n ? 1 : 0), Rational(0)};
	return b;
}

QuantumBasis QuantumBasis::parse_json(std::string_view text)
{
	nlohmann::json j;
	try {
		j = nlohmann::json::parse(text);
	} catch (const nlohmann::json::parse_error &e) {
		throw ParseError(std::string("basis: ") + e.what(), {});
	}
	auto rational = [](const nlohmann::json &v) {
		if (!v.is_string() && !v.is_number_integer())
			throw ValidationError("basis entries must be rationals written as strings, found " + v.dump());
		try {
			return v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<long>());
		} catch (const std::invalid_argument &) {
			throw ValidationError("basis entry " + v.dump() + " is not a rational");
		}
	};
	QuantumBasis b;
	if (j.contains("scale"))
		b.scale = rational(j["scale"]);
	const auto &c = j.at("coords");
	if (!c.is_array() || c.size() != 4)
		throw ValidationError("basis needs 4 rows of coordinates");
	for (std::size_t i = 0; i < 4; ++i) {
		if (!c[i].is_array() || c[i].size() != 4)
			throw ValidationError("basis row " + std::to_string(i + 1) + " needs 4 entries");
		for (std::size_t n = 0; n < 4; ++n) {
			const auto &e = c[i][n];
			if (!e.is_array() || e.size() != 2)
				throw ValidationError("basis entries are [real, imaginary] pairs");
			b.coords[i][n] = {rational(e[0]), rational(e[1])};
		}
	}
	return b;
}

FiniteStructure quantum_structure()
{
	FiniteStructure A("observables", {"1", "2", "3", "4"});
	for (Element e = 0; e < 4; ++e)
		A.add_constant("d" + std::to_string(e + 1), e);
	A.validate();
	return A;
}

Formula1 quantum_sigma(const QuantumBasis &basis)
{
	const FiniteStructure A = quantum_structure();
	const Signature &sig = A.signature();
	std::vector<Term1> a, b;
	for (int n = 1; n <= 4; ++n) {
		a.push_back(Term1::var("a" + std::to_string(n)));
		b.push_back(Term1::var("b" + std::to_string(n)));
	}
	// sum of coefficient * term over nonzero coefficients, times scale
	auto linear = [&](const std::vector<std::pair<Rational, Term1>> &parts) {
		std::optional<Term1> sum;
		for (const auto &[q, t] : parts) {
			if (q.is_zero())
				continue;
			Term1 piece = q == 1 ? t : Term1::mul(Term1::num(q), t);
			sum = sum ? Term1::add(*sum, piece) : piece;
		}
		if (!sum)
			return Term1::num(0);
		return basis.scale == 1 ? *sum : Term1::mul(Term1::num(basis.scale), *sum);
	};
	std::vector<Formula1> parts;
	for (std::size_t n = 0; n < 4; ++n)
		for (const Term1 &t : {a[n], b[n]}) {
			parts.push_back(Formula1::le(Term1::num(-2), t));
			parts.push_back(Formula1::le(t, Term1::num(2)));
		}
	for (std::size_t i = 0; i < 4; ++i) {
		std::string di = "d" + std::to_string(i + 1);
		parts.push_back(Formula1::eq(Term1::add(Term1::mul(a[i], a[i]), Term1::mul(b[i], b[i])),
		                             Term1::prob(parse_l0("v1 = " + di, sig))));
		// conj(c_n) * (x + i y) = (a x + b y) + i (a y - b x)
		std::vector<std::pair<Rational, Term1>> re, im;
		for (std::size_t n = 0; n < 4; ++n) {
			const auto &[x, y] = basis.coords[i][n];
			re.emplace_back(x, a[n]);
			re.emplace_back(y, b[n]);
			im.emplace_back(y, a[n]);
			im.emplace_back(-x, b[n]);
		}
		Term1 r = linear(re), s = linear(im);
		parts.push_back(Formula1::eq(Term1::add(Term1::mul(r, r), Term1::mul(s, s)),
		                             Term1::prob(parse_l0("v2 = " + di, sig))));
	}
	Formula1 body = Formula1::conj_all(parts);
	for (int n = 4; n >= 1; --n) {
		body = Formula1::quantify(Op::Exists, "b" + std::to_string(n), body);
		body = Formula1::quantify(Op::Exists, "a" + std::to_string(n), body);
	}
	return body;
}

} // namespace mtl
