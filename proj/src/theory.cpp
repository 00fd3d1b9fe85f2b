/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/theory.hpp"

#include "mtl/error.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace mtl {

Theory Theory::parse(std::string_view text, const Signature &sig, std::optional<VarTuple> default_dom)
{
	std::vector<std::pair<std::size_t, std::string>> lines;
	std::optional<VarTuple> dom;
	std::istringstream in{std::string(text)};
	std::string raw;
	std::size_t n = 0;
	auto at = [&](std::size_t line, const std::string &msg, std::size_t column = 1) {
		SourceLocation loc;
		loc.line = line;
		loc.column = column;
		return ParseError("theory: " + msg, loc);
	};
	// re-anchor a parse error of one line at that line of the file
	auto relocate = [&](std::size_t line, const ParseError &e) {
		std::string msg = e.what();
		msg = msg.substr(0, msg.rfind(" at "));
		return at(line, msg, e.where().column);
	};
	while (std::getline(in, raw)) {
		++n;
		std::size_t b = raw.find_first_not_of(" \t\r");
		if (b == std::string::npos || raw[b] == '#')
			continue;
		std::string line = raw.substr(b);
		while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
			line.pop_back();
		if (line.rfind("dom", 0) == 0 && (line.size() == 3 || line[3] == ' ' || line[3] == '\t')) {
			if (dom)
				throw at(n, "more than one dom line");
			dom.emplace();
			std::istringstream words(line.substr(3));
			std::string v;
			while (words >> v) {
				int i = parse_var_name(v);
				if (i < 0)
					throw at(n, "'" + v + "' is not a variable v<i>");
				dom->push_back(i);
			}
			continue;
		}
		lines.emplace_back(n, line);
	}

	Theory t;
	// without a declared tuple, probe-parse to collect the free variables of the constants
	if (dom) {
		t.dom = *dom;
	} else if (default_dom) {
		t.dom = *default_dom;
	} else {
		std::set<int> vars;
		for (const auto &[line, body] : lines) {
			VarTuple all;
			for (int i = 0; i < 64; ++i)
				all.push_back(i);
			try {
				for (const auto &phi : parse_l1(body, sig, all).prob_constants())
					for (int v : phi.free_vars())
						vars.insert(v);
			} catch (const ParseError &e) {
				throw relocate(line, e);
			}
		}
		t.dom.assign(vars.begin(), vars.end());
	}
	for (const auto &[line, body] : lines) {
		try {
			Formula1 f = parse_l1(body, sig, t.dom);
			check_sorts(f, sig, t.dom);
			if (!f.is_sentence())
				throw at(line, "'" + body + "' has free real variables");
			t.sentences.push_back(std::move(f));
		} catch (const ParseError &e) {
			if (e.where().line != line || std::string(e.what()).rfind("theory: ", 0) != 0)
				throw relocate(line, e);
			throw;
		} catch (const ValidationError &e) {
			throw at(line, e.what());
		}
	}
	return t;
}

Theory Theory::load(const std::filesystem::path &path, const Signature &sig, std::optional<VarTuple> default_dom)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError("cannot open theory " + path.string(), {});
	std::stringstream ss;
	ss << in.rdbuf();
	return parse(ss.str(), sig, std::move(default_dom));
}

std::string Theory::str() const
{
	std::string out = "dom";
	for (int v : dom)
		out += " " + var_name(v);
	out += "\n";
	for (const auto &f : sentences)
		out += print(f) + "\n";
	return out;
}

Truth TheoryReport::overall() const
{
	bool unknown = false;
	for (const auto &s : sentences) {
		if (s.verdict.truth == Truth::Fails)
			return Truth::Fails;
		unknown = unknown || s.verdict.truth == Truth::Unknown;
	}
	return unknown ? Truth::Unknown : Truth::Holds;
}

TheoryReport check_theory(const DiscreteMeasureTeam &X, const FiniteStructure &A, const std::vector<Formula1> &sigma,
                          const ArithPolicy &policy)
{
	TheoryReport r;
	std::vector<Formula0> constants;
	for (const auto &f : sigma)
		for (auto &phi : f.prob_constants())
			constants.push_back(std::move(phi));
	r.grounding = ground_constants(X, A, constants);
	for (const auto &f : sigma)
		r.sentences.push_back({f, evaluate(f, r.grounding, policy)});
	return r;
}

} // namespace mtl
