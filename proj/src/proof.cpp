/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/proof.hpp"

#include "mtl/arith.hpp"
#include "mtl/error.hpp"
#include "mtl/normal_form.hpp"
#include "mtl/semantics.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace mtl {

namespace {

constexpr std::pair<Justification, const char *> kTags[] = {
	{Justification::HypT, "HYP_T"},         {Justification::HypSigma, "HYP_SIGMA"},
	{Justification::AxA0, "AX_A0"},         {Justification::AxA1, "AX_A1"},
	{Justification::AxA2, "AX_A2"},         {Justification::RuleR0, "RULE_R0"},
	{Justification::PropTaut, "PROP_TAUT"}, {Justification::RcfOracle, "RCF_ORACLE"},
	{Justification::FoSemantic, "FO_SEMANTIC"},
};

std::string trim(std::string_view s)
{
	std::size_t b = s.find_first_not_of(" \t\r");
	if (b == std::string_view::npos)
		return {};
	std::size_t e = s.find_last_not_of(" \t\r");
	return std::string(s.substr(b, e - b + 1));
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

} // namespace

std::string to_string(Justification j)
{
	for (const auto &[k, tag] : kTags)
		if (k == j)
			return tag;
	return "?";
}

std::optional<Justification> parse_justification(std::string_view tag)
{
	for (const auto &[k, t] : kTags)
		if (tag == t)
			return k;
	return std::nullopt;
}

bool justifies_l0(Justification j) { return j == Justification::HypT || j == Justification::FoSemantic; }

std::string ProofStep::statement_text() const
{
	return is_l0() ? print(std::get<Formula0>(statement)) : print(std::get<Formula1>(statement));
}

// ---------------------------------------------------------------- script parsing

ProofScript ProofScript::parse(std::string_view text, const std::filesystem::path &base_dir)
{
	ProofScript s;
	bool declared = false;
	std::vector<std::pair<std::size_t, std::string>> pending_t, pending_sigma, pending_steps;
	std::optional<std::pair<std::size_t, std::string>> pending_goal;
	std::istringstream in{std::string(text)};
	std::string raw;
	std::size_t lineno = 0;
	auto fail = [&](const std::string &msg) -> ParseError {
		SourceLocation loc;
		loc.line = lineno;
		return ParseError("proof script: " + msg, loc);
	};
	while (std::getline(in, raw)) {
		++lineno;
		std::string line = trim(raw);
		if (line.empty() || line[0] == '#')
			continue;
		std::istringstream words(line);
		std::string head;
		words >> head;
		if (head == "structure") {
			if (s.structure || declared)
				throw fail("a script names one structure, and no signature declarations besides it");
			std::string rest = trim(line.substr(head.size()));
			std::filesystem::path p = rest;
			if (p.is_relative())
				p = base_dir / p;
			s.structure = FiniteStructure::load(p);
			s.signature = s.structure->signature();
		} else if (head == "relation" || head == "function" || head == "constant") {
			if (s.structure)
				throw fail("signature declarations conflict with the designated structure");
			std::string sym;
			int arity = 0;
			words >> sym;
			if (head != "constant" && !(words >> arity))
				throw fail("expected '" + head + " <symbol> <arity>'");
			if (sym.empty())
				throw fail("missing symbol name");
			try {
				if (head == "relation")
					s.signature.add_relation(sym, arity);
				else if (head == "function")
					s.signature.add_function(sym, arity);
				else
					s.signature.add_constant(sym);
			} catch (const ValidationError &e) {
				throw fail(e.what());
			}
			declared = true;
		} else if (head == "dom") {
			std::string v;
			while (words >> v) {
				int i = parse_var_name(v);
				if (i < 0)
					throw fail("'" + v + "' is not a variable v<i>");
				s.dom.push_back(i);
			}
		} else if (head == "T" || head == "Sigma") {
			std::size_t colon = line.find(':');
			if (colon == std::string::npos)
				throw fail("expected '" + head + " <name>: <formula>'");
			std::string name = trim(line.substr(head.size(), colon - head.size()));
			(head == "T" ? pending_t : pending_sigma).push_back({lineno, name + "\n" + trim(line.substr(colon + 1))});
		} else if (starts_with(line, "goal:")) {
			pending_goal = std::make_pair(lineno, trim(line.substr(5)));
		} else if (!head.empty() && head.back() == '.' && std::all_of(head.begin(), head.end() - 1, ::isdigit)
		           && head.size() > 1) {
			pending_steps.push_back({lineno, line});
		} else {
			throw fail("unrecognized line '" + line + "'");
		}
	}

	// formulas are parsed once the signature and domain are known
	auto at_line = [&](std::size_t n, auto &&fn) {
		try {
			return fn();
		} catch (const ParseError &e) {
			SourceLocation loc;
			loc.line = n;
			throw ParseError(std::string("proof script: ") + e.what(), loc);
		} catch (const ValidationError &e) {
			SourceLocation loc;
			loc.line = n;
			throw ParseError(std::string("proof script: ") + e.what(), loc);
		}
	};
	auto split_named = [](const std::string &packed) {
		std::size_t nl = packed.find('\n');
		return std::make_pair(packed.substr(0, nl), packed.substr(nl + 1));
	};
	auto l0 = [&](const std::string &t) {
		Formula0 f = parse_l0(t, s.signature);
		check_sorts(f, s.signature);
		return f;
	};
	auto l1 = [&](const std::string &t) {
		Formula1 f = parse_l1(t, s.signature, s.dom);
		check_sorts(f, s.signature, s.dom);
		return f;
	};
	for (const auto &[n, packed] : pending_t) {
		auto [name, body] = split_named(packed);
		s.theory.emplace_back(name, at_line(n, [&] { return l0(body); }));
	}
	for (const auto &[n, packed] : pending_sigma) {
		auto [name, body] = split_named(packed);
		s.sigma.emplace_back(name, at_line(n, [&] { return l1(body); }));
	}
	if (pending_goal)
		s.goal = at_line(pending_goal->first, [&] { return l1(pending_goal->second); });

	for (const auto &[n, line] : pending_steps) {
		lineno = n;
		std::size_t dot = line.find('.');
		int number = std::stoi(line.substr(0, dot));
		if (number != static_cast<int>(s.steps.size()) + 1)
			throw fail("step " + std::to_string(number) + " out of sequence");
		std::string body = trim(line.substr(dot + 1));
		std::size_t by = body.rfind(" by ");
		if (by == std::string::npos)
			throw fail("step without ' by <justification>'");
		std::string stmt = trim(body.substr(0, by));
		std::istringstream just(body.substr(by + 4));
		std::string tag;
		just >> tag;
		auto j = parse_justification(tag);
		if (!j)
			throw fail("unknown justification '" + tag + "'");
		std::vector<int> refs;
		std::string ref;
		while (just >> ref) {
			ref.erase(std::remove(ref.begin(), ref.end(), ','), ref.end());
			if (ref.empty())
				continue;
			if (!std::all_of(ref.begin(), ref.end(), ::isdigit))
				throw fail("bad line reference '" + ref + "'");
			refs.push_back(std::stoi(ref));
		}
		std::variant<Formula0, Formula1> statement =
			starts_with(stmt, "[L0]") ? std::variant<Formula0, Formula1>(at_line(n, [&] { return l0(trim(stmt.substr(4))); }))
			                          : std::variant<Formula0, Formula1>(at_line(n, [&] { return l1(stmt); }));
		s.steps.push_back(ProofStep{number, std::move(statement), *j, std::move(refs), n});
	}
	return s;
}

ProofScript ProofScript::load(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError("cannot open proof script " + path.string(), {});
	std::stringstream ss;
	ss << in.rdbuf();
	return parse(ss.str(), path.parent_path());
}

// ---------------------------------------------------------------- axiom schemas

namespace {

// first differing subformula of two L0 formulas, preorder
std::optional<std::pair<Formula0, Formula0>> first_difference(const Formula0 &a, const Formula0 &b)
{
	if (a == b)
		return std::nullopt;
	if (a.op() != b.op() || is_atom(a.op()) || a.children().size() != b.children().size()
	    || (is_quantifier(a.op()) && a.bound_var() != b.bound_var()))
		return std::make_pair(a, b);
	for (std::size_t i = 0; i < a.children().size(); ++i)
		if (auto d = first_difference(a.child(i), b.child(i)))
			return d;
	return std::make_pair(a, b);
}

std::string mismatch(const std::string &schema, const Formula0 &expected, const Formula0 &found)
{
	auto d = first_difference(expected, found);
	return schema + ": metavariable instances differ: expected '" + print(d->first) + "' but found '"
	       + print(d->second) + "'";
}

const Formula0 *prob_of(const Term1 &t)
{
	return t.kind() == Term1::Kind::Prob ? &t.formula() : nullptr;
}

bool is_num(const Term1 &t, long v) { return t.kind() == Term1::Kind::Num && t.value() == Rational(v); }

} // namespace

CheckResult check_axiom_instance(Justification axiom, const Formula1 &st)
{
	const std::string name = to_string(axiom);
	if (st.op() != Op::Eq)
		return CheckResult::fail(name + ": statement is not an equation");
	const Formula0 *lhs = prob_of(st.lhs());
	if (!lhs)
		return CheckResult::fail(name + ": left side '" + print(st.lhs()) + "' is not a probability constant");

	if (axiom == Justification::AxA0 || axiom == Justification::AxA1) {
		Op want = axiom == Justification::AxA0 ? Op::And : Op::Or;
		const char *shape = axiom == Justification::AxA0 ? "|p & ~p| = 0" : "|p | ~p| = 1";
		if (lhs->op() != want || lhs->child(1).op() != Op::Not)
			return CheckResult::fail(name + ": '" + print(*lhs) + "' does not have the shape of " + shape);
		if (!(lhs->child(0) == lhs->child(1).child(0)))
			return CheckResult::fail(mismatch(name, lhs->child(0), lhs->child(1).child(0)));
		if (!is_num(st.rhs(), axiom == Justification::AxA0 ? 0 : 1))
			return CheckResult::fail(name + ": right side must be " + (axiom == Justification::AxA0 ? "0" : "1")
			                         + ", found '" + print(st.rhs()) + "'");
		return CheckResult::pass();
	}
	if (axiom != Justification::AxA2)
		return CheckResult::fail(name + " is not an axiom");

	if (lhs->op() != Op::Or)
		return CheckResult::fail(name + ": '" + print(*lhs) + "' is not a disjunction");
	const Formula0 &p = lhs->child(0), &q = lhs->child(1);
	const Term1 &r = st.rhs();
	// |p| + |q| - |p & q|
	if (r.kind() != Term1::Kind::Sub || r.args()[0].kind() != Term1::Kind::Add)
		return CheckResult::fail(name + ": right side '" + print(r) + "' does not have the shape |p| + |q| - |p & q|");
	const Formula0 *rp = prob_of(r.args()[0].args()[0]), *rq = prob_of(r.args()[0].args()[1]),
	               *rpq = prob_of(r.args()[1]);
	if (!rp || !rq || !rpq)
		return CheckResult::fail(name + ": right side '" + print(r) + "' does not have the shape |p| + |q| - |p & q|");
	if (!(*rp == p))
		return CheckResult::fail(mismatch(name, p, *rp));
	if (!(*rq == q))
		return CheckResult::fail(mismatch(name, q, *rq));
	Formula0 pq = Formula0::conj(p, q);
	if (!(*rpq == pq))
		return CheckResult::fail(mismatch(name, pq, *rpq));
	return CheckResult::pass();
}

// ---------------------------------------------------------------- R0

namespace {

CheckResult match_r0(const Formula0 &premise, const Formula1 &conclusion)
{
	auto pd = flatten(premise, Op::Or);
	auto cd = flatten(conclusion, Op::Or);
	if (pd.size() != cd.size())
		return CheckResult::fail("RULE_R0: premise has " + std::to_string(pd.size()) + " disjuncts, conclusion "
		                         + std::to_string(cd.size()));
	for (std::size_t i = 0; i < pd.size(); ++i) {
		auto pc = flatten(pd[i], Op::And);
		auto cc = flatten(cd[i], Op::And);
		if (pc.size() != cc.size())
			return CheckResult::fail("RULE_R0: disjunct " + std::to_string(i) + " has " + std::to_string(pc.size())
			                         + " conjuncts in the premise, " + std::to_string(cc.size()) + " in the conclusion");
		for (std::size_t j = 0; j < pc.size(); ++j) {
			const std::string at = " (disjunct " + std::to_string(i) + ", conjunct " + std::to_string(j) + ")";
			if (!pc[j].is_sentence())
				return CheckResult::fail("RULE_R0: premise part '" + print(pc[j]) + "' is not a sentence" + at);
			Formula0 body = pc[j];
			while (body.op() == Op::Forall)
				body = body.child(0);
			if (body.op() != Op::Implies)
				return CheckResult::fail("RULE_R0: premise part '" + print(pc[j])
				                         + "' is not of the form forall x (phi -> psi)" + at);
			const Formula1 &c = cc[j];
			const Formula0 *l = c.op() == Op::Le ? prob_of(c.lhs()) : nullptr;
			const Formula0 *r = c.op() == Op::Le ? prob_of(c.rhs()) : nullptr;
			if (!l || !r)
				return CheckResult::fail("RULE_R0: conclusion part '" + print(c) + "' is not of the form |phi| <= |psi|"
				                         + at);
			if (!(*l == body.child(0)))
				return CheckResult::fail("RULE_R0: expected |" + print(body.child(0)) + "| on the left but found |"
				                         + print(*l) + "|" + at);
			if (!(*r == body.child(1)))
				return CheckResult::fail("RULE_R0: expected |" + print(body.child(1)) + "| on the right but found |"
				                         + print(*r) + "|" + at);
		}
	}
	return CheckResult::pass();
}

} // namespace

CheckResult check_r0_shape(const Formula0 &premise, const Formula1 &conclusion)
{
	if (!premise.is_sentence())
		return CheckResult::fail("RULE_R0: premise '" + print(premise) + "' is not a sentence");
	CheckResult direct = match_r0(premise, conclusion);
	if (direct.ok)
		return direct;
	// retry with both sides in disjunctive shape
	try {
		Formula0 p = to_disjunctive_shape(premise);
		Formula1 c = to_disjunctive_shape(conclusion);
		if (!(p == premise) || !(c == conclusion))
			if (match_r0(p, c).ok)
				return CheckResult::pass();
	} catch (const ValidationError &) {
	}
	return direct;
}

CheckResult check_r0(const Formula0 &premise, const Formula1 &conclusion, Discharge how,
                     const std::vector<Formula0> &theory, const FiniteStructure *structure)
{
	CheckResult shape = check_r0_shape(premise, conclusion);
	if (!shape.ok)
		return shape;
	if (how == Discharge::HypT) {
		if (std::find(theory.begin(), theory.end(), premise) == theory.end())
			return CheckResult::fail("RULE_R0: premise '" + print(premise) + "' is not in T");
		return CheckResult::pass();
	}
	if (!structure)
		return CheckResult::fail("RULE_R0: semantic discharge needs a designated structure");
	if (!valid_on(*structure, premise))
		return CheckResult::fail("RULE_R0: premise '" + print(premise) + "' is not valid on structure '"
		                         + structure->name() + "'");
	return CheckResult::pass();
}

// ---------------------------------------------------------------- propositional steps

namespace {

// atoms of L1 formulas for truth-tabling; quantified subformulas are opaque atoms
void collect_atoms(const Formula1 &f, std::map<std::string, std::size_t> &atoms)
{
	if (is_atom(f.op()) || is_quantifier(f.op())) {
		atoms.emplace(print(f), atoms.size());
		return;
	}
	for (const auto &c : f.children())
		collect_atoms(c, atoms);
}

bool truth(const Formula1 &f, const std::map<std::string, std::size_t> &atoms, std::uint64_t val)
{
	switch (f.op()) {
	case Op::Not: return !truth(f.child(0), atoms, val);
	case Op::And: return truth(f.child(0), atoms, val) && truth(f.child(1), atoms, val);
	case Op::Or: return truth(f.child(0), atoms, val) || truth(f.child(1), atoms, val);
	case Op::Implies: return !truth(f.child(0), atoms, val) || truth(f.child(1), atoms, val);
	case Op::Iff: return truth(f.child(0), atoms, val) == truth(f.child(1), atoms, val);
	default: return (val >> atoms.at(print(f))) & 1U;
	}
}

constexpr std::size_t kMaxTautologyAtoms = 20;

CheckResult check_tautology(const std::vector<Formula1> &cited, const Formula1 &st)
{
	std::map<std::string, std::size_t> atoms;
	for (const auto &c : cited)
		collect_atoms(c, atoms);
	collect_atoms(st, atoms);
	if (atoms.size() > kMaxTautologyAtoms)
		return CheckResult::fail("PROP_TAUT: " + std::to_string(atoms.size()) + " atoms exceed the truth-table limit of "
		                         + std::to_string(kMaxTautologyAtoms));
	for (std::uint64_t val = 0; val < (std::uint64_t{1} << atoms.size()); ++val) {
		bool premises = std::all_of(cited.begin(), cited.end(), [&](const Formula1 &c) { return truth(c, atoms, val); });
		if (premises && !truth(st, atoms, val))
			return CheckResult::fail("PROP_TAUT: not a propositional consequence of the cited lines");
	}
	return CheckResult::pass();
}

} // namespace

// ---------------------------------------------------------------- whole scripts

ProofReport check_proof(const ProofScript &script)
{
	ProofReport report;
	std::vector<Formula0> theory;
	for (const auto &[name, f] : script.theory)
		theory.push_back(f);
	std::vector<bool> ok;

	for (const auto &step : script.steps) {
		LineReport lr;
		lr.number = step.number;
		lr.justification = to_string(step.justification);
		auto result = [&]() -> CheckResult {
			if (justifies_l0(step.justification) != step.is_l0())
				return CheckResult::fail(lr.justification + " justifies " + (step.is_l0() ? "L1" : "L0")
				                         + " statements, not " + (step.is_l0() ? "L0" : "L1") + " ones");
			std::vector<const ProofStep *> cited;
			for (int r : step.refs) {
				if (r < 1 || r >= step.number)
					return CheckResult::fail("reference to line " + std::to_string(r) + " is not an earlier line");
				// R0 re-checks the discharge of its premise itself
				if (!ok[r - 1] && step.justification != Justification::RuleR0)
					return CheckResult::fail("cites rejected line " + std::to_string(r));
				cited.push_back(&script.steps[r - 1]);
			}
			auto no_refs = [&]() -> std::optional<CheckResult> {
				if (!step.refs.empty())
					return CheckResult::fail(lr.justification + " takes no line references");
				return std::nullopt;
			};
			auto cited_l1 = [&](std::vector<Formula1> &out) -> std::optional<CheckResult> {
				for (const auto *c : cited) {
					if (c->is_l0())
						return CheckResult::fail("line " + std::to_string(c->number) + " is an L0 statement");
					out.push_back(std::get<Formula1>(c->statement));
				}
				return std::nullopt;
			};

			switch (step.justification) {
			case Justification::HypT: {
				if (auto e = no_refs())
					return *e;
				const auto &f = std::get<Formula0>(step.statement);
				if (std::find(theory.begin(), theory.end(), f) == theory.end())
					return CheckResult::fail("HYP_T: statement is not in T");
				return CheckResult::pass();
			}
			case Justification::HypSigma: {
				if (auto e = no_refs())
					return *e;
				const auto &f = std::get<Formula1>(step.statement);
				for (const auto &[name, g] : script.sigma)
					if (g == f)
						return CheckResult::pass();
				return CheckResult::fail("HYP_SIGMA: statement is not in Sigma");
			}
			case Justification::FoSemantic: {
				if (auto e = no_refs())
					return *e;
				const auto &f = std::get<Formula0>(step.statement);
				if (!script.structure)
					return CheckResult::fail("FO_SEMANTIC: the script designates no structure");
				if (!f.is_sentence())
					return CheckResult::fail("FO_SEMANTIC: statement is not a sentence");
				if (!valid_on(*script.structure, f))
					return CheckResult::fail("FO_SEMANTIC: statement is false in structure '"
					                         + script.structure->name() + "'");
				return CheckResult::pass();
			}
			case Justification::AxA0:
			case Justification::AxA1:
			case Justification::AxA2:
				if (auto e = no_refs())
					return *e;
				return check_axiom_instance(step.justification, std::get<Formula1>(step.statement));
			case Justification::RuleR0: {
				if (cited.size() != 1)
					return CheckResult::fail("RULE_R0 cites exactly one premise line");
				const ProofStep &p = *cited[0];
				if (!p.is_l0())
					return CheckResult::fail("RULE_R0: premise line " + std::to_string(p.number) + " is not an L0 statement");
				Discharge how = p.justification == Justification::HypT ? Discharge::HypT : Discharge::FoSemantic;
				return check_r0(std::get<Formula0>(p.statement), std::get<Formula1>(step.statement), how, theory,
				                script.structure ? &*script.structure : nullptr);
			}
			case Justification::PropTaut: {
				std::vector<Formula1> prem;
				if (auto e = cited_l1(prem))
					return *e;
				return check_tautology(prem, std::get<Formula1>(step.statement));
			}
			case Justification::RcfOracle: {
				std::vector<Formula1> prem;
				if (auto e = cited_l1(prem))
					return *e;
				Verdict v = rcf_entails(prem, std::get<Formula1>(step.statement));
				if (v.truth == Truth::Holds)
					return CheckResult::pass();
				if (v.truth == Truth::Unknown)
					return CheckResult::fail("ORACLE_INCOMPLETE: " + v.reason);
				std::string cex;
				for (const auto &[k, q] : v.witness)
					cex += (cex.empty() ? "" : ", ") + k + " = " + q.str();
				return CheckResult::fail("RCF_ORACLE: the cited lines do not imply the statement"
				                         + (cex.empty() ? std::string() : " (counterexample " + cex + ")"));
			}
			}
			return CheckResult::fail("unknown justification");
		}();
		lr.ok = result.ok;
		lr.reason = result.reason;
		ok.push_back(result.ok);
		report.lines.push_back(std::move(lr));
	}

	bool all = std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
	if (script.steps.empty()) {
		report.goal_reason = "script has no steps";
	} else if (script.goal) {
		const ProofStep &last = script.steps.back();
		if (last.is_l0() || !(std::get<Formula1>(last.statement) == *script.goal))
			report.goal_reason = "last line '" + last.statement_text() + "' is not the goal '" + print(*script.goal) + "'";
	}
	report.accepted = all && report.goal_reason.empty();
	return report;
}

std::string ProofReport::to_json() const
{
	nlohmann::ordered_json j;
	j["schema"] = "mtl-report/1";
	j["kind"] = "proof";
	j["status"] = accepted ? "ACCEPTED" : "REJECTED";
	j["lines"] = nlohmann::ordered_json::array();
	for (const auto &l : lines) {
		nlohmann::ordered_json e;
		e["line"] = l.number;
		e["justification"] = l.justification;
		e["ok"] = l.ok;
		if (!l.ok)
			e["reason"] = l.reason;
		j["lines"].push_back(e);
	}
	if (!goal_reason.empty())
		j["goal"] = goal_reason;
	return j.dump(2) + "\n";
}

} // namespace mtl
