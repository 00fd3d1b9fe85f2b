/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/team.hpp"

#include "mtl/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace mtl {

using nlohmann::json;

// ---------------------------------------------------------------- Grounding

void Grounding::set(const Formula0 &phi, Rational value) { values_[print(phi)] = std::move(value); }

bool Grounding::contains(const Formula0 &phi) const { return values_.count(print(phi)) > 0; }

std::optional<Rational> Grounding::find(const Formula0 &phi) const
{
	auto it = values_.find(print(phi));
	if (it == values_.end())
		return std::nullopt;
	return it->second;
}

const Rational &Grounding::at(const Formula0 &phi) const
{
	auto it = values_.find(print(phi));
	if (it == values_.end())
		throw EvalError("probability constant |" + print(phi) + "| is not grounded");
	return it->second;
}

// ---------------------------------------------------------------- teams

DiscreteMeasureTeam::DiscreteMeasureTeam(const FiniteStructure &A, VarTuple dom, std::vector<TeamRow> rows)
: dom_(std::move(dom)), rows_(std::move(rows)), structure_ref_(A.name())
{
	std::set<int> seen;
	for (int v : dom_) {
		if (v < 0)
			throw ValidationError("negative variable index in team domain");
		if (!seen.insert(v).second)
			throw ValidationError("variable " + var_name(v) + " listed twice in the team domain");
	}
	if (rows_.empty())
		throw ValidationError("a team needs at least one row");
	Rational total;
	for (std::size_t i = 0; i < rows_.size(); ++i) {
		const TeamRow &r = rows_[i];
		if (r.values.size() != dom_.size())
			throw ValidationError("row " + std::to_string(i + 1) + " has " + std::to_string(r.values.size())
			                      + " values for " + std::to_string(dom_.size()) + " variables");
		for (Element e : r.values)
			if (e < 0 || e >= A.size())
				throw ValidationError("row " + std::to_string(i + 1) + " holds a value outside the structure");
		if (r.weight.sign() < 0)
			throw ValidationError("row " + std::to_string(i + 1) + " has negative weight " + r.weight.str());
		total += r.weight;
	}
	if (total != Rational(1))
		throw ValidationError("team weights sum to " + total.str() + ", not 1");
}

DiscreteMeasureTeam DiscreteMeasureTeam::uniform(const FiniteStructure &A, VarTuple dom,
                                                 std::vector<std::vector<Element>> rows)
{
	std::vector<TeamRow> out;
	Rational w = rows.empty() ? Rational(0) : Rational(1, static_cast<long>(rows.size()));
	for (auto &r : rows)
		out.push_back({std::move(r), w});
	return DiscreteMeasureTeam(A, std::move(dom), std::move(out));
}

std::vector<std::size_t> DiscreteMeasureTeam::zero_weight_rows() const
{
	std::vector<std::size_t> out;
	for (std::size_t i = 0; i < rows_.size(); ++i)
		if (rows_[i].weight.is_zero())
			out.push_back(i);
	return out;
}

// ---------------------------------------------------------------- CSV

namespace {

std::string trim(std::string_view s)
{
	auto b = s.find_first_not_of(" \t\r");
	if (b == std::string_view::npos)
		return {};
	auto e = s.find_last_not_of(" \t\r");
	return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t lineno)
{
	std::vector<std::string> out;
	std::string cur;
	bool quoted = false, was_quoted = false;
	for (std::size_t i = 0; i < line.size(); ++i) {
		char c = line[i];
		if (quoted) {
			if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
				cur += '"';
				++i;
			} else if (c == '"') {
				quoted = false;
			} else {
				cur += c;
			}
		} else if (c == '"' && trim(cur).empty()) {
			quoted = was_quoted = true;
			cur.clear();
		} else if (c == ',') {
			out.push_back(was_quoted ? cur : trim(cur));
			cur.clear();
			was_quoted = false;
		} else {
			cur += c;
		}
	}
	if (quoted)
		throw ValidationError("line " + std::to_string(lineno) + ": unterminated quote");
	out.push_back(was_quoted ? cur : trim(cur));
	return out;
}

int dom_var(const std::string &name, const std::string &where)
{
	int v = parse_var_name(name);
	if (v < 0)
		throw ValidationError(where + ": '" + name + "' is not a variable name (v0, v1, ...)");
	return v;
}

Rational parse_weight(const std::string &text, const std::string &where)
{
	try {
		return Rational::parse(text);
	} catch (const std::exception &e) {
		throw ValidationError(where + ": bad weight '" + text + "'");
	}
}

std::string csv_field(const std::string &s)
{
	if (s.find_first_of(",\"") == std::string::npos && trim(s) == s && !s.empty())
		return s;
	std::string out = "\"";
	for (char c : s)
		out += c == '"' ? std::string("\"\"") : std::string(1, c);
	return out + "\"";
}

} // namespace

DiscreteMeasureTeam parse_team_csv(std::string_view text, const FiniteStructure &A)
{
	std::vector<std::vector<std::string>> lines;
	std::vector<std::size_t> linenos;
	std::size_t lineno = 0;
	std::size_t pos = 0;
	while (pos <= text.size()) {
		auto nl = text.find('\n', pos);
		std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
		++lineno;
		pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
		std::string t = trim(line);
		if (t.empty() || t[0] == '#')
			continue;
		lines.push_back(split_csv_line(line, lineno));
		linenos.push_back(lineno);
	}
	if (lines.empty())
		throw ValidationError("team file has no header");

	const auto &header = lines[0];
	VarTuple dom;
	int weight_col = -1;
	for (std::size_t i = 0; i < header.size(); ++i) {
		if (header[i] == "_weight") {
			if (weight_col >= 0)
				throw ValidationError("header: duplicate _weight column");
			weight_col = static_cast<int>(i);
		} else {
			dom.push_back(dom_var(header[i], "header"));
		}
	}

	std::vector<TeamRow> rows;
	for (std::size_t r = 1; r < lines.size(); ++r) {
		std::string where = "line " + std::to_string(linenos[r]);
		const auto &cells = lines[r];
		if (cells.size() != header.size())
			throw ValidationError(where + ": expected " + std::to_string(header.size()) + " fields, found "
			                      + std::to_string(cells.size()));
		TeamRow row;
		for (std::size_t i = 0; i < cells.size(); ++i) {
			if (static_cast<int>(i) == weight_col) {
				row.weight = parse_weight(cells[i], where);
				continue;
			}
			if (!A.has_element(cells[i]))
				throw ValidationError(where + ": unknown element id '" + cells[i] + "' in structure '" + A.name()
				                      + "'");
			row.values.push_back(A.element(cells[i]));
		}
		rows.push_back(std::move(row));
	}
	if (rows.empty())
		throw ValidationError("team file has no rows");
	if (weight_col < 0)
		for (auto &r : rows)
			r.weight = Rational(1, static_cast<long>(rows.size()));
	return DiscreteMeasureTeam(A, std::move(dom), std::move(rows));
}

DiscreteMeasureTeam parse_team_json(std::string_view text, const FiniteStructure &A)
{
	json j;
	try {
		j = json::parse(text);
	} catch (const json::parse_error &e) {
		throw ValidationError(std::string("team file is not valid JSON: ") + e.what());
	}
	if (!j.is_object() || !j.contains("dom") || !j["dom"].is_array() || !j.contains("rows") || !j["rows"].is_array())
		throw ValidationError("team JSON needs 'dom' and 'rows' arrays");
	VarTuple dom;
	std::vector<std::string> names;
	for (const auto &d : j["dom"]) {
		if (!d.is_string())
			throw ValidationError("team JSON: dom entries must be variable names");
		names.push_back(d.get<std::string>());
		dom.push_back(dom_var(names.back(), "dom"));
	}
	std::vector<TeamRow> rows;
	bool any_weight = false, all_weight = true;
	for (std::size_t r = 0; r < j["rows"].size(); ++r) {
		const json &row = j["rows"][r];
		std::string where = "row " + std::to_string(r + 1);
		if (!row.is_object() || !row.contains("assignment") || !row["assignment"].is_object())
			throw ValidationError(where + ": needs an 'assignment' object");
		TeamRow out;
		const json &asg = row["assignment"];
		if (asg.size() != names.size())
			throw ValidationError(where + ": assignment must bind exactly the dom variables");
		for (const auto &n : names) {
			if (!asg.contains(n))
				throw ValidationError(where + ": " + n + " is unassigned");
			const json &v = asg[n];
			std::string id = v.is_string() ? v.get<std::string>() : v.dump();
			if (!A.has_element(id))
				throw ValidationError(where + ": unknown element id '" + id + "' in structure '" + A.name() + "'");
			out.values.push_back(A.element(id));
		}
		if (row.contains("weight")) {
			const json &w = row["weight"];
			out.weight = parse_weight(w.is_string() ? w.get<std::string>() : w.dump(), where);
			any_weight = true;
		} else {
			all_weight = false;
		}
		rows.push_back(std::move(out));
	}
	if (any_weight && !all_weight)
		throw ValidationError("team JSON: either every row or no row carries a weight");
	if (!any_weight)
		for (auto &r : rows)
			r.weight = Rational(1, static_cast<long>(std::max<std::size_t>(rows.size(), 1)));
	return DiscreteMeasureTeam(A, std::move(dom), std::move(rows));
}

DiscreteMeasureTeam load_team(const std::filesystem::path &path, TeamFormat format, const FiniteStructure &A)
{
	std::ifstream in(path);
	if (!in)
		throw ValidationError("cannot open team file '" + path.string() + "'");
	std::ostringstream ss;
	ss << in.rdbuf();
	if (format == TeamFormat::Auto)
		format = path.extension() == ".json" ? TeamFormat::Json : TeamFormat::Csv;
	return format == TeamFormat::Json ? parse_team_json(ss.str(), A) : parse_team_csv(ss.str(), A);
}

std::string to_csv(const DiscreteMeasureTeam &X, const FiniteStructure &A)
{
	std::string out;
	for (int v : X.dom())
		out += var_name(v) + ",";
	out += "_weight\n";
	for (const auto &r : X.rows()) {
		for (Element e : r.values)
			out += csv_field(A.id(e)) + ",";
		out += r.weight.str() + "\n";
	}
	return out;
}

std::string to_json(const DiscreteMeasureTeam &X, const FiniteStructure &A)
{
	json j;
	json dom = json::array();
	for (int v : X.dom())
		dom.push_back(var_name(v));
	j["dom"] = dom;
	json rows = json::array();
	for (const auto &r : X.rows()) {
		json asg = json::object();
		for (std::size_t i = 0; i < r.values.size(); ++i)
			asg[var_name(X.dom()[i])] = A.id(r.values[i]);
		rows.push_back(json{{"assignment", asg}, {"weight", r.weight.str()}});
	}
	j["rows"] = rows;
	return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- evaluation

namespace {

void check_structure(const DiscreteMeasureTeam &X, const FiniteStructure &A)
{
	if (X.structure_ref() != A.name())
		throw ValidationError("team is over structure '" + X.structure_ref() + "', not '" + A.name() + "'");
}

Rational prob_uncached(const DiscreteMeasureTeam &X, const FiniteStructure &A, const Formula0 &phi)
{
	for (int v : phi.free_vars())
		if (std::find(X.dom().begin(), X.dom().end(), v) == X.dom().end())
			throw EvalError("variable " + var_name(v) + " of " + print(phi) + " is not in the team domain");
	FormulaEvaluator ev(A, phi);
	std::size_t n = ev.env_size();
	for (int v : X.dom())
		n = std::max(n, static_cast<std::size_t>(v) + 1);
	std::vector<Element> env(n, -1);
	Rational total;
	for (const auto &r : X.rows()) {
		for (std::size_t i = 0; i < r.values.size(); ++i)
			env[static_cast<std::size_t>(X.dom()[i])] = r.values[i];
		if (ev(env))
			total += r.weight;
	}
	return total;
}

} // namespace

Rational prob(const DiscreteMeasureTeam &X, const FiniteStructure &A, const Formula0 &phi)
{
	check_structure(X, A);
	return prob_uncached(X, A, phi);
}

TeamEvaluator::TeamEvaluator(const DiscreteMeasureTeam &X, const FiniteStructure &A) : X_(&X), A_(&A)
{
	check_structure(X, A);
}

const Rational &TeamEvaluator::prob(const Formula0 &phi)
{
	std::string key = print(phi);
	auto it = cache_.find(key);
	if (it == cache_.end())
		it = cache_.emplace(std::move(key), prob_uncached(*X_, *A_, phi)).first;
	return it->second;
}

Grounding TeamEvaluator::ground_constants(const std::vector<Formula0> &constants)
{
	Grounding g;
	for (const auto &phi : constants)
		g.set(phi, prob(phi));
	return g;
}

Grounding ground_constants(const DiscreteMeasureTeam &X, const FiniteStructure &A, const std::vector<Formula0> &constants)
{
	TeamEvaluator ev(X, A);
	return ev.ground_constants(constants);
}

// ---------------------------------------------------------------- sampling

Rational eval_piecewise(const std::vector<PolynomialPiece> &pieces, const Rational &t)
{
	for (std::size_t i = 0; i < pieces.size(); ++i) {
		const auto &p = pieces[i];
		bool last = i + 1 == pieces.size();
		if (p.from <= t && (t < p.to || (last && t == p.to))) {
			Rational acc;
			for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it)
				acc = acc * t + *it;
			return acc;
		}
	}
	throw EvalError("no piece covers t = " + t.str());
}

SampledContinuousSpec SampledContinuousSpec::parse_json(std::string_view text)
{
	json j;
	try {
		j = json::parse(text);
	} catch (const json::parse_error &e) {
		throw ValidationError(std::string("sampling spec is not valid JSON: ") + e.what());
	}
	auto rat = [](const json &v) {
		try {
			return Rational::parse(v.is_string() ? v.get<std::string>() : v.dump());
		} catch (const std::exception &) {
			throw ValidationError("bad rational " + v.dump() + " in sampling spec");
		}
	};
	SampledContinuousSpec spec;
	if (!j.contains("samples") || !j["samples"].is_number_integer())
		throw ValidationError("sampling spec needs an integer 'samples'");
	spec.samples = j["samples"].get<int>();
	if (!j.contains("functions") || !j["functions"].is_object())
		throw ValidationError("sampling spec needs a 'functions' object");
	std::map<int, std::vector<PolynomialPiece>> fns;
	for (const auto &[name, pieces] : j["functions"].items()) {
		int v = dom_var(name, "sampling spec");
		std::vector<PolynomialPiece> ps;
		for (const auto &p : pieces) {
			PolynomialPiece piece{rat(p.value("from", json("0"))), rat(p.value("to", json("1"))), {}};
			for (const auto &c : p.at("coeffs"))
				piece.coeffs.push_back(rat(c));
			ps.push_back(std::move(piece));
		}
		fns[v] = std::move(ps);
	}
	for (int i = 0; i < static_cast<int>(fns.size()); ++i) {
		if (!fns.count(i))
			throw ValidationError("sampling spec must define v0 ... v" + std::to_string(fns.size() - 1));
		spec.functions.push_back(fns[i]);
	}
	for (const auto &c : j.value("constants", json::array()))
		spec.constants.push_back(rat(c));
	return spec;
}

SampledTeam sample_continuous(const SampledContinuousSpec &spec)
{
	if (spec.samples < 1)
		throw ValidationError("sample count must be at least 1");
	if (spec.functions.empty())
		throw ValidationError("sampling spec defines no variables");
	const long N = spec.samples;
	std::vector<std::vector<Rational>> values(static_cast<std::size_t>(N));
	std::set<Rational> domain(spec.constants.begin(), spec.constants.end());
	for (long k = 0; k < N; ++k) {
		Rational t = Rational(k, N) + Rational(1, 2 * N);
		for (const auto &f : spec.functions) {
			Rational v = eval_piecewise(f, t);
			domain.insert(v);
			values[static_cast<std::size_t>(k)].push_back(v);
		}
	}

	std::vector<std::string> ids;
	std::map<Rational, Element> index;
	for (const auto &v : domain) {
		index[v] = static_cast<Element>(ids.size());
		ids.push_back(v.str());
	}
	FiniteStructure A("sampled", ids);
	std::vector<std::vector<Element>> le, lt;
	for (Element a = 0; a < A.size(); ++a)
		for (Element b = a; b < A.size(); ++b) {
			le.push_back({a, b});
			if (a != b)
				lt.push_back({a, b});
		}
	A.add_relation("<=", 2, le).add_relation("<", 2, lt);
	for (const auto &c : spec.constants)
		if (!A.signature().is_constant(c.str()))
			A.add_constant(c.str(), index.at(c));
	A.validate();

	VarTuple dom;
	for (std::size_t i = 0; i < spec.functions.size(); ++i)
		dom.push_back(static_cast<int>(i));
	std::vector<std::vector<Element>> rows;
	for (const auto &vs : values) {
		std::vector<Element> row;
		for (const auto &v : vs)
			row.push_back(index.at(v));
		rows.push_back(std::move(row));
	}
	DiscreteMeasureTeam X = DiscreteMeasureTeam::uniform(A, dom, std::move(rows));
	return SampledTeam{std::move(A), std::move(X), spec.samples};
}

} // namespace mtl
