/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"
#include "mtl/arith.hpp"
#include "mtl/corpus.hpp"
#include "mtl/error.hpp"
#include "mtl/proof.hpp"
#include "mtl/syntax.hpp"
#include "mtl/team.hpp"
#include "mtl/theory.hpp"
#include "mtl/witness.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace mtl::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char *schema = "mtl-report/1";

// bad option values and unreadable files; exits like a parse error
struct UsageError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct RunConfig {
	std::string structure, team, theory, script, spec, basis;
	std::string backend = "builtin";
	std::string solver;
	std::string delta = "1/1048576";
	std::size_t max_boxes = 200000;
	std::size_t atom_cap = std::size_t{1} << 26;
	long denominator_cap = 1000000;
	std::string format = "text";
	std::string dom;
	std::string out, out_team, out_tree, out_structure;
	std::string team_format = "auto";
};

std::string approx(const Rational &q)
{
	std::ostringstream s;
	s << std::setprecision(6) << q.to_double();
	return s.str();
}

std::string exact_and_approx(const Rational &q) { return q.str() + " (approx. " + approx(q) + ")"; }

json value_json(const Rational &q) { return json{{"exact", q.str()}, {"approx", approx(q)}}; }

ArithPolicy policy_of(const RunConfig &c)
{
	ArithPolicy p;
	if (c.backend == "external") {
		if (c.solver.empty())
			throw ValidationError("--backend external needs --solver");
		p.backend = ArithPolicy::Backend::External;
		p.command = c.solver;
	}
	try {
		p.delta = Rational::parse(c.delta);
	} catch (const std::invalid_argument &) {
		throw UsageError("--delta '" + c.delta + "' is not a rational");
	}
	if (p.delta.sign() <= 0)
		throw ValidationError("--delta must be positive");
	p.max_boxes = c.max_boxes;
	return p;
}

TeamFormat team_format_of(const RunConfig &c)
{
	return c.team_format == "csv" ? TeamFormat::Csv : c.team_format == "json" ? TeamFormat::Json : TeamFormat::Auto;
}

std::optional<VarTuple> dom_of(const RunConfig &c)
{
	if (c.dom.empty())
		return std::nullopt;
	VarTuple d;
	std::string text = c.dom;
	std::replace(text.begin(), text.end(), ',', ' ');
	std::istringstream in(text);
	std::string v;
	while (in >> v) {
		int i = parse_var_name(v);
		if (i < 0)
			throw UsageError("--dom: '" + v + "' is not a variable v<i>");
		d.push_back(i);
	}
	return d;
}

void write_file(const std::string &path, const std::string &text)
{
	std::ofstream f(path);
	if (!f)
		throw UsageError("cannot write " + path);
	f << text;
}

// text to --out when given, else to the stream
void emit(const RunConfig &c, std::ostream &out, const std::string &text)
{
	if (c.out.empty())
		out << text;
	else
		write_file(c.out, text);
}

std::string team_text(const DiscreteMeasureTeam &X, const FiniteStructure &A, const std::string &path,
                      const std::string &format)
{
	bool as_json = format == "json" || (format == "auto" && path.size() > 5 && path.substr(path.size() - 5) == ".json");
	return as_json ? to_json(X, A) : to_csv(X, A);
}

std::string status_of(Truth t)
{
	return t == Truth::Holds ? "SATISFIED" : t == Truth::Fails ? "NOT SATISFIED" : "UNKNOWN";
}

int exit_of(Truth t) { return t == Truth::Holds ? ExitOk : t == Truth::Fails ? ExitFailed : ExitUnknown; }

// ---------------------------------------------------------------- eval

int cmd_eval(const RunConfig &c, const std::string &text, std::ostream &out)
{
	FiniteStructure A = FiniteStructure::load(c.structure);
	DiscreteMeasureTeam X = load_team(c.team, team_format_of(c), A);
	const Signature &sig = A.signature();
	bool as_json = c.format == "json";

	// an L1 sentence gets a verdict
	std::optional<Formula1> sentence;
	try {
		Formula1 f = parse_l1(text, sig, X.dom());
		if (f.is_sentence())
			sentence = f;
	} catch (const ParseError &) {
	}
	if (sentence) {
		check_sorts(*sentence, sig, X.dom());
		TheoryReport r = check_theory(X, A, {*sentence}, policy_of(c));
		const Verdict &v = r.sentences[0].verdict;
		if (as_json) {
			json j{{"schema", schema}, {"kind", "eval"}, {"input", print(*sentence)}, {"verdict", to_string(v.truth)}};
			if (!v.reason.empty())
				j["reason"] = v.reason;
			if (v.delta)
				j["delta"] = v.delta->str();
			out << j.dump(2) << "\n";
		} else {
			out << to_string(v.truth) << (v.reason.empty() ? "" : ": " + v.reason) << "\n";
		}
		return exit_of(v.truth);
	}

	// a ground L1 term gets its value
	std::optional<Term1> term;
	try {
		// no parentheses, so error columns match the input
		Formula1 f = parse_l1(text + " = 0", sig, X.dom());
		if (!f.lhs().has_vars())
			term = f.lhs();
	} catch (const ParseError &) {
		// L0 has no bars, so the L1 diagnosis is the useful one
		if (text.find('|') != std::string::npos)
			throw;
	}
	Rational value;
	std::string shown;
	if (term) {
		check_sorts(Formula1::eq(*term, Term1::num(0)), sig, X.dom());
		std::vector<Formula0> cs;
		term->collect_probs(cs);
		value = eval_ground_term(*term, ground_constants(X, A, cs));
		shown = print(*term);
	} else {
		// otherwise an L0 formula gets its probability
		Formula0 phi = parse_l0(text, sig);
		check_sorts(phi, sig);
		for (int v : phi.free_vars())
			if (std::find(X.dom().begin(), X.dom().end(), v) == X.dom().end())
				throw ValidationError(var_name(v) + " is not in the team domain");
		value = prob(X, A, phi);
		shown = "|" + print(phi) + "|";
	}
	if (as_json)
		out << json{{"schema", schema}, {"kind", "eval"}, {"input", shown}, {"value", value_json(value)}}.dump(2) << "\n";
	else
		out << value.str() << " (approx. " << approx(value) << ")\n";
	return ExitOk;
}

// ---------------------------------------------------------------- check

json verdict_json(const Verdict &v)
{
	json j{{"verdict", to_string(v.truth)}};
	if (!v.reason.empty())
		j["reason"] = v.reason;
	if (v.delta)
		j["delta"] = v.delta->str();
	if (!v.witness.empty()) {
		json w = json::object();
		for (const auto &[name, q] : v.witness)
			w[name] = q.str();
		j[v.truth == Truth::Holds ? "witness" : "counterexample"] = w;
	}
	return j;
}

int cmd_check(const RunConfig &c, std::ostream &out)
{
	FiniteStructure A = FiniteStructure::load(c.structure);
	DiscreteMeasureTeam X = load_team(c.team, team_format_of(c), A);
	Theory t = Theory::load(c.theory, A.signature(), X.dom());
	for (int v : t.dom)
		if (std::find(X.dom().begin(), X.dom().end(), v) == X.dom().end())
			throw ValidationError("theory variable " + var_name(v) + " is not in the team domain");
	TheoryReport r = check_theory(X, A, t.sentences, policy_of(c));
	Truth overall = r.overall();

	if (c.format == "json") {
		json j{{"schema", schema}, {"kind", "check"}, {"status", status_of(overall)}};
		json g = json::array();
		for (const auto &[name, q] : r.grounding.entries())
			g.push_back(json{{"constant", "|" + name + "|"}, {"value", value_json(q)}});
		j["grounding"] = g;
		json s = json::array();
		for (const auto &sv : r.sentences) {
			json e{{"sentence", print(sv.sentence)}};
			e.update(verdict_json(sv.verdict));
			s.push_back(e);
		}
		j["sentences"] = s;
		out << j.dump(2) << "\n";
	} else {
		if (!r.grounding.empty())
			out << "grounding:\n";
		for (const auto &[name, q] : r.grounding.entries())
			out << "  |" << name << "| = " << exact_and_approx(q) << "\n";
		for (const auto &sv : r.sentences) {
			out << std::left << std::setw(8) << to_string(sv.verdict.truth) << print(sv.sentence);
			if (!sv.verdict.reason.empty())
				out << "  [" << sv.verdict.reason << "]";
			out << "\n";
		}
		out << status_of(overall) << "\n";
	}
	return exit_of(overall);
}

// ---------------------------------------------------------------- witness

const char *relation_text(Relation r) { return r == Relation::Le ? "<=" : r == Relation::Lt ? "<" : "="; }

int cmd_witness(const RunConfig &c, std::ostream &out)
{
	FiniteStructure A = FiniteStructure::load(c.structure);
	Theory t = Theory::load(c.theory, A.signature(), dom_of(c));
	WitnessOptions opts;
	opts.atom_cap = c.atom_cap;
	opts.solve.max_denominator = c.denominator_cap;
	WitnessResult r = synthesize_witness(A, t.sentences, t.dom, opts);
	const AtomTable &table = r.problem.table;

	auto representative = [&](const AtomEntry &e) {
		std::vector<std::string> ids;
		if (e.representative)
			for (Element x : *e.representative)
				ids.push_back(A.id(x));
		return ids;
	};
	std::string team_out;
	if (r.team) {
		team_out = team_text(*r.team, A, c.out_team, c.team_format);
		if (!c.out_team.empty())
			write_file(c.out_team, team_out);
		if (!c.out_tree.empty())
			write_file(c.out_tree, interval_tree_json(r.tree) + "\n");
	}

	if (c.format == "json") {
		json j{{"schema", schema}, {"kind", "witness"}, {"status", to_string(r.status)}};
		json dom = json::array();
		for (int v : t.dom)
			dom.push_back(var_name(v));
		j["dom"] = dom;
		json fs = json::array();
		for (const auto &phi : table.formulas)
			fs.push_back(print(phi));
		j["formulas"] = fs;
		json atoms = json::array();
		for (const auto &e : table.atoms) {
			json a{{"sigma", to_string(e.sigma)}, {"realizable", e.realizable()}};
			if (e.realizable())
				a["representative"] = representative(e);
			if (r.status == WeightsResult::Status::Sat)
				a["weight"] = value_json(r.weights.weights.at(e.sigma));
			atoms.push_back(a);
		}
		j["atoms"] = atoms;
		if (r.team) {
			j["team"] = nlohmann::ordered_json::parse(to_json(*r.team, A));
			j["recheck"] = "SATISFIED";
			j["tree"] = nlohmann::ordered_json::parse(interval_tree_json(r.tree));
		}
		if (r.status == WeightsResult::Status::Unsat) {
			j["variables"] = r.problem.unknowns;
			json refs = json::array();
			for (const auto &ref : r.weights.refutations) {
				json m = json::array();
				for (const auto &q : ref.certificate.multipliers)
					m.push_back(q.str());
				json rows = json::array();
				for (const auto &row : ref.system.rows) {
					json co = json::array();
					for (const auto &q : row.coeffs)
						co.push_back(q.str());
					rows.push_back(json{{"coeffs", co}, {"rel", relation_text(row.rel)}, {"rhs", row.rhs.str()}});
				}
				refs.push_back(json{{"case", ref.case_index}, {"rows", rows}, {"multipliers", m}});
			}
			j["certificates"] = refs;
		}
		if (!r.weights.reason.empty())
			j["reason"] = r.weights.reason;
		out << j.dump(2) << "\n";
	} else {
		out << to_string(r.status);
		if (!r.weights.reason.empty())
			out << ": " << r.weights.reason;
		out << "\n";
		out << "formulas:";
		for (std::size_t i = 0; i < table.formulas.size(); ++i)
			out << (i ? "; " : " ") << print(table.formulas[i]);
		out << "\n";
		if (r.status == WeightsResult::Status::Sat) {
			out << "weights:\n";
			for (const auto &e : table.atoms) {
				const Rational &w = r.weights.weights.at(e.sigma);
				if (w.sign() == 0)
					continue;
				out << "  " << (e.sigma.empty() ? "-" : to_string(e.sigma)) << "  ";
				auto ids = representative(e);
				for (std::size_t i = 0; i < ids.size(); ++i)
					out << (i ? "," : "") << ids[i];
				out << "  " << exact_and_approx(w) << "\n";
			}
			out << "team:\n" << team_out;
			out << "re-check: SATISFIED\n";
		} else if (r.status == WeightsResult::Status::Unsat) {
			for (const auto &ref : r.weights.refutations) {
				out << "case " << ref.case_index << ", rows over";
				for (const auto &u : r.problem.unknowns)
					out << " " << u;
				out << " (all >= 0):\n";
				for (std::size_t i = 0; i < ref.system.rows.size(); ++i) {
					const auto &row = ref.system.rows[i];
					out << "  [";
					for (std::size_t k = 0; k < row.coeffs.size(); ++k)
						out << (k ? " " : "") << row.coeffs[k].str();
					out << "] " << relation_text(row.rel) << " " << row.rhs.str() << "   multiplier "
					    << ref.certificate.multipliers[i].str() << "\n";
				}
			}
		}
	}
	return r.status == WeightsResult::Status::Sat     ? ExitOk
	       : r.status == WeightsResult::Status::Unsat ? ExitFailed
	                                                  : ExitUnknown;
}

// ---------------------------------------------------------------- prove

int cmd_prove(const RunConfig &c, std::ostream &out)
{
	ProofScript s = ProofScript::load(c.script);
	ProofReport r = check_proof(s);
	if (c.format == "json") {
		out << r.to_json();
	} else {
		for (const auto &l : r.lines) {
			out << "line " << l.number << "  " << std::left << std::setw(12) << l.justification
			    << (l.ok ? "ok" : "REJECTED: " + l.reason) << "\n";
		}
		if (!r.goal_reason.empty())
			out << "goal: " << r.goal_reason << "\n";
		out << (r.accepted ? "ACCEPTED" : "REJECTED") << "\n";
	}
	return r.accepted ? ExitOk : ExitFailed;
}

// ---------------------------------------------------------------- export / sample

int cmd_export(const RunConfig &c, std::ostream &out)
{
	FiniteStructure A = FiniteStructure::load(c.structure);
	DiscreteMeasureTeam X = load_team(c.team, team_format_of(c), A);
	Theory t = Theory::load(c.theory, A.signature(), X.dom());
	std::vector<Formula0> cs;
	for (const auto &f : t.sentences)
		for (auto &phi : f.prob_constants())
			cs.push_back(std::move(phi));
	Grounding g = ground_constants(X, A, cs);
	std::string text;
	for (std::size_t i = 0; i < t.sentences.size(); ++i)
		text += "; ---- sentence " + std::to_string(i + 1) + "\n(reset)\n" + to_smtlib(t.sentences[i], g);
	emit(c, out, text);
	return ExitOk;
}

std::string read_file(const std::string &path)
{
	std::ifstream f(path);
	if (!f)
		throw UsageError("cannot open " + path);
	std::stringstream ss;
	ss << f.rdbuf();
	return ss.str();
}

int cmd_sample(const RunConfig &c, std::ostream &out)
{
	SampledTeam s = sample_continuous(SampledContinuousSpec::parse_json(read_file(c.spec)));
	if (!c.out_structure.empty())
		write_file(c.out_structure, s.structure.to_json());
	std::string team = team_text(s.team, s.structure, c.out_team, c.team_format);
	if (!c.out_team.empty())
		write_file(c.out_team, team);
	else
		out << team;
	return ExitOk;
}

// ---------------------------------------------------------------- corpus

GenotypeDistribution parse_g1(const std::string &text)
{
	std::string s = text;
	std::replace(s.begin(), s.end(), ',', ' ');
	std::istringstream in(s);
	std::vector<Rational> qs;
	std::string w;
	while (in >> w) {
		try {
			qs.push_back(Rational::parse(w));
		} catch (const std::invalid_argument &) {
			throw UsageError("--g1: '" + w + "' is not a rational");
		}
	}
	if (qs.size() != 3)
		throw UsageError("--g1 needs three probabilities for AA, Aa, aa");
	return {qs[0], qs[1], qs[2]};
}

std::string theory_text(const VarTuple &dom, const std::vector<Formula1> &sigma)
{
	Theory t{dom, sigma};
	return t.str();
}

std::vector<PropFormula> parse_formula_list(const std::string &text)
{
	std::vector<PropFormula> out;
	std::string cur;
	std::istringstream in(text);
	while (std::getline(in, cur, ';')) {
		if (cur.find_first_not_of(" \t") == std::string::npos)
			continue;
		out.push_back(parse_prop(cur));
	}
	return out;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
	RunConfig c;
	CLI::App app{"Probabilities of first-order formulas over measure teams", "mtl"};
	app.set_config("--config", "", "read options from an INI or TOML file; flags override");
	app.require_subcommand(1);
	app.fallthrough();
	app.add_option("--format", c.format, "report format")->check(CLI::IsMember({"text", "json"}));

	auto backend_opts = [&](CLI::App *s) {
		s->add_option("--backend", c.backend, "real arithmetic backend")->check(CLI::IsMember({"builtin", "external"}));
		s->add_option("--solver", c.solver, "external solver command, given the SMT-LIB file path");
		s->add_option("--delta", c.delta, "box width where the built-in search stops splitting");
		s->add_option("--max-boxes", c.max_boxes, "box budget of the built-in search")->check(CLI::PositiveNumber);
	};
	auto team_opts = [&](CLI::App *s) {
		s->add_option("--structure", c.structure, "structure JSON")->required()->check(CLI::ExistingFile);
		s->add_option("--team", c.team, "team CSV or JSON")->required()->check(CLI::ExistingFile);
		s->add_option("--team-format", c.team_format, "team file format")->check(CLI::IsMember({"auto", "csv", "json"}));
	};

	std::string eval_text;
	CLI::App *eval = app.add_subcommand("eval", "probability of an L0 formula, value of an L1 term, or truth of an L1 sentence");
	team_opts(eval);
	backend_opts(eval);
	eval->add_option("formula", eval_text, "formula or term")->required();

	CLI::App *check = app.add_subcommand("check", "check a team against a theory");
	team_opts(check);
	backend_opts(check);
	check->add_option("--theory", c.theory, "theory file")->required()->check(CLI::ExistingFile);

	CLI::App *witness = app.add_subcommand("witness", "synthesize a team for a quantifier-free theory");
	witness->add_option("--structure", c.structure, "structure JSON")->required()->check(CLI::ExistingFile);
	witness->add_option("--theory", c.theory, "theory file")->required()->check(CLI::ExistingFile);
	witness->add_option("--dom", c.dom, "variable tuple, e.g. \"v0 v1\"");
	witness->add_option("--atom-cap", c.atom_cap, "bound on 2^m * |A|^|x|")->check(CLI::PositiveNumber);
	witness->add_option("--denominator-cap", c.denominator_cap, "largest denominator tried when rounding")
		->check(CLI::PositiveNumber);
	witness->add_option("--out-team", c.out_team, "write the team here");
	witness->add_option("--out-tree", c.out_tree, "write the interval tree JSON here");
	witness->add_option("--team-format", c.team_format, "team file format")->check(CLI::IsMember({"auto", "csv", "json"}));

	CLI::App *prove = app.add_subcommand("prove", "check a proof script");
	prove->add_option("--script", c.script, "proof script")->required()->check(CLI::ExistingFile);

	CLI::App *exp = app.add_subcommand("export", "grounded theory as SMT-LIB problems");
	team_opts(exp);
	exp->add_option("--theory", c.theory, "theory file")->required()->check(CLI::ExistingFile);
	exp->add_option("--out", c.out, "write here instead of stdout");

	CLI::App *sample = app.add_subcommand("sample", "sample a continuous team on a grid");
	sample->add_option("--spec", c.spec, "sampling spec JSON")->required()->check(CLI::ExistingFile);
	sample->add_option("--out-structure", c.out_structure, "write the ordered structure here");
	sample->add_option("--out-team", c.out_team, "write the team here instead of stdout");
	sample->add_option("--team-format", c.team_format, "team file format")->check(CLI::IsMember({"auto", "csv", "json"}));

	CLI::App *corpus = app.add_subcommand("corpus", "generate the worked examples");
	corpus->require_subcommand(1);
	corpus->add_option("--out", c.out, "write here instead of stdout");
	CLI::App *genotype = corpus->add_subcommand("genotype", "the 27-element genotype structure");
	CLI::App *hw_sigma_cmd = corpus->add_subcommand("hw-sigma", "random-mating theory (60 equations)");
	CLI::App *hw_alpha_cmd = corpus->add_subcommand("hw-alpha", "equilibrium sentence");
	std::string g1 = "1/2,0,1/2";
	CLI::App *hw_team = corpus->add_subcommand("hw-team", "random-mating team from a first-generation distribution");
	hw_team->add_option("--g1", g1, "child genotype probabilities AA,Aa,aa");
	hw_team->add_option("--team-format", c.team_format)->check(CLI::IsMember({"auto", "csv", "json"}));
	std::string bell_formulas;
	CLI::App *bell = corpus->add_subcommand("bell", "audit the logical Bell bounds on a boolean team");
	bell->add_option("--team", c.team, "boolean team")->required()->check(CLI::ExistingFile);
	bell->add_option("--formulas", bell_formulas, "propositional formulas separated by ';'")->required();
	std::size_t fanout = 2, depth = 2, horizon = 2, cap = 100000;
	bool lattice = false;
	std::string markov_emit = "theory";
	CLI::App *markov = corpus->add_subcommand("markov", "truncated Markov chain theory");
	markov->add_option("--fanout", fanout)->check(CLI::PositiveNumber);
	markov->add_option("--depth", depth);
	markov->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
	markov->add_option("--cap", cap)->check(CLI::PositiveNumber);
	markov->add_flag("--lattice", lattice, "identify sequences with their lattice positions");
	markov->add_option("--emit", markov_emit)->check(CLI::IsMember({"theory", "structure", "walk"}));
	std::string quantum_emit = "theory";
	CLI::App *quantum = corpus->add_subcommand("quantum", "measurement-agreement sentence");
	quantum->add_option("--basis", c.basis, "basis JSON")->check(CLI::ExistingFile);
	quantum->add_option("--emit", quantum_emit)->check(CLI::IsMember({"theory", "structure"}));

	std::vector<std::string> rev(args.rbegin(), args.rend());
	try {
		app.parse(rev);
	} catch (const CLI::CallForHelp &e) {
		app.exit(e, out, err);
		return ExitOk;
	} catch (const CLI::CallForAllHelp &e) {
		app.exit(e, out, err);
		return ExitOk;
	} catch (const CLI::ParseError &e) {
		app.exit(e, out, err);
		return ExitParse;
	}

	try {
		if (*eval)
			return cmd_eval(c, eval_text, out);
		if (*check)
			return cmd_check(c, out);
		if (*witness)
			return cmd_witness(c, out);
		if (*prove)
			return cmd_prove(c, out);
		if (*exp)
			return cmd_export(c, out);
		if (*sample)
			return cmd_sample(c, out);
		if (*genotype) {
			emit(c, out, genotype_model().structure.to_json() + "\n");
			return ExitOk;
		}
		if (*hw_sigma_cmd) {
			emit(c, out, theory_text({0, 1, 2}, hw_sigma()));
			return ExitOk;
		}
		if (*hw_alpha_cmd) {
			emit(c, out, theory_text({0, 1, 2}, {hw_alpha()}));
			return ExitOk;
		}
		if (*hw_team) {
			DiscreteMeasureTeam X = synth_hw_team(parse_g1(g1));
			emit(c, out, team_text(X, genotype_model().structure, c.out, c.team_format));
			return ExitOk;
		}
		if (*bell) {
			FiniteStructure B = boolean_structure();
			BellReport r = bell_audit({parse_formula_list(bell_formulas), load_team(c.team, TeamFormat::Auto, B)});
			bool ok = r.holds_general && r.holds_contradictory.value_or(true);
			if (c.format == "json") {
				json j{{"schema", schema}, {"kind", "bell"}};
				j.update(json::parse(r.to_json()));
				emit(c, out, j.dump(2) + "\n");
			} else {
				std::ostringstream s;
				s << "values:";
				for (const auto &v : r.values)
					s << " " << v.str();
				s << "\nsum: " << exact_and_approx(r.sum) << "\n";
				s << "general bound: sum <= " << r.bound.str() << "  " << (r.holds_general ? "HOLDS" : "FAILS") << "\n";
				s << "conjunction contradictory: " << (r.contradictory ? "yes" : "no") << "\n";
				if (r.holds_contradictory)
					s << "contradiction bound: sum <= " << r.values.size() - 1 << "  "
					  << (*r.holds_contradictory ? "HOLDS" : "FAILS") << "\n";
				emit(c, out, s.str());
			}
			return ok ? ExitOk : ExitFailed;
		}
		if (*markov) {
			MarkovInstance m = markov_sigma(fanout, depth, horizon, lattice ? MarkovShape::Lattice : MarkovShape::Tree, cap);
			if (markov_emit == "structure")
				emit(c, out, m.structure.to_json() + "\n");
			else if (markov_emit == "walk")
				emit(c, out, to_csv(markov_walk_team(m), m.structure));
			else
				emit(c, out, theory_text(m.dom, m.sigma));
			return ExitOk;
		}
		if (*quantum) {
			if (quantum_emit == "structure") {
				emit(c, out, quantum_structure().to_json() + "\n");
			} else {
				QuantumBasis b = c.basis.empty() ? QuantumBasis::identity() : QuantumBasis::parse_json(read_file(c.basis));
				emit(c, out, theory_text({1, 2}, {quantum_sigma(b)}));
			}
			return ExitOk;
		}
	} catch (const ParseError &e) {
		err << "error: " << e.what() << "\n";
		return ExitParse;
	} catch (const UsageError &e) {
		err << "error: " << e.what() << "\n";
		return ExitParse;
	} catch (const ValidationError &e) {
		err << "error: " << e.what() << "\n";
		return ExitValidation;
	} catch (const EvalError &e) {
		err << "error: " << e.what() << "\n";
		return ExitEvaluation;
	} catch (const nlohmann::json::exception &e) {
		err << "error: " << e.what() << "\n";
		return ExitParse;
	}
	return ExitParse;
}

} // namespace mtl::cli
