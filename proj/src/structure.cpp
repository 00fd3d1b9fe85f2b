/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/structure.hpp"

#include "mtl/error.hpp"
#include "mtl/syntax.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mtl {

using nlohmann::json;

namespace {

constexpr std::uint64_t kMaxTable = std::uint64_t{1} << 26;

std::uint64_t table_size(int n, int arity)
{
	std::uint64_t s = 1;
	for (int i = 0; i < arity; ++i) {
		s *= static_cast<std::uint64_t>(n);
		if (s > kMaxTable)
			throw ValidationError("function table of arity " + std::to_string(arity) + " over "
			                      + std::to_string(n) + " elements is too large");
	}
	return s;
}

} // namespace

FiniteStructure::FiniteStructure(std::string name, std::vector<std::string> domain)
: name_(std::move(name)), domain_(std::move(domain)), sig_(name_)
{
	if (domain_.empty())
		throw ValidationError("structure '" + name_ + "' has an empty domain");
	for (std::size_t i = 0; i < domain_.size(); ++i)
		if (!index_.emplace(domain_[i], static_cast<Element>(i)).second)
			throw ValidationError("duplicate element id '" + domain_[i] + "'");
}

Element FiniteStructure::element(std::string_view id) const
{
	auto it = index_.find(std::string(id));
	if (it == index_.end())
		throw ValidationError("unknown element id '" + std::string(id) + "' in structure '" + name_ + "'");
	return it->second;
}

bool FiniteStructure::has_element(std::string_view id) const { return index_.count(std::string(id)) > 0; }

std::uint64_t FiniteStructure::encode(const Element *args, int arity) const
{
	std::uint64_t code = 0;
	for (int i = 0; i < arity; ++i)
		code = code * static_cast<std::uint64_t>(domain_.size()) + static_cast<std::uint64_t>(args[i]);
	return code;
}

FiniteStructure &FiniteStructure::add_relation(const std::string &sym, int arity,
                                               const std::vector<std::vector<Element>> &tuples)
{
	try {
		sig_.add_relation(sym, arity);
	} catch (const std::invalid_argument &e) {
		throw ValidationError(e.what());
	}
	if (arity > 0)
		table_size(size(), arity);
	RelationTable &r = relations_[sym];
	r.arity = arity;
	for (const auto &t : tuples) {
		if (static_cast<int>(t.size()) != arity)
			throw ValidationError("tuple of length " + std::to_string(t.size()) + " for relation '" + sym
			                      + "' of arity " + std::to_string(arity));
		for (Element e : t)
			if (e < 0 || e >= size())
				throw ValidationError("element index out of range in relation '" + sym + "'");
		r.tuples.insert(encode(t.data(), arity));
	}
	return *this;
}

FiniteStructure &FiniteStructure::add_function(const std::string &sym, int arity)
{
	try {
		sig_.add_function(sym, arity);
	} catch (const std::invalid_argument &e) {
		throw ValidationError(e.what());
	}
	FunctionTable &f = functions_[sym];
	f.arity = arity;
	f.table.assign(table_size(size(), arity), -1);
	return *this;
}

FiniteStructure &FiniteStructure::set_value(const std::string &sym, const std::vector<Element> &args, Element result)
{
	auto it = functions_.find(sym);
	if (it == functions_.end())
		throw ValidationError("'" + sym + "' is not a function of structure '" + name_ + "'");
	if (static_cast<int>(args.size()) != it->second.arity)
		throw ValidationError("wrong number of arguments for function '" + sym + "'");
	for (Element e : args)
		if (e < 0 || e >= size())
			throw ValidationError("element index out of range in function '" + sym + "'");
	if (result < 0 || result >= size())
		throw ValidationError("element index out of range in function '" + sym + "'");
	Element &slot = it->second.table[encode(args.data(), it->second.arity)];
	if (slot >= 0 && slot != result)
		throw ValidationError("function '" + sym + "' given two values at the same arguments");
	slot = result;
	return *this;
}

FiniteStructure &FiniteStructure::add_constant(const std::string &sym, Element e)
{
	try {
		sig_.add_constant(sym);
	} catch (const std::invalid_argument &ex) {
		throw ValidationError(ex.what());
	}
	if (e < 0 || e >= size())
		throw ValidationError("constant '" + sym + "' names an element outside the domain");
	constants_[sym] = e;
	return *this;
}

void FiniteStructure::validate() const
{
	for (const auto &[sym, f] : functions_)
		for (Element v : f.table)
			if (v < 0)
				throw ValidationError("function '" + sym + "' is not total on the domain");
}

const FiniteStructure::RelationTable &FiniteStructure::relation(const std::string &sym) const
{
	auto it = relations_.find(sym);
	if (it == relations_.end())
		throw EvalError("'" + sym + "' is not a relation of structure '" + name_ + "'");
	return it->second;
}

const FiniteStructure::FunctionTable &FiniteStructure::function(const std::string &sym) const
{
	auto it = functions_.find(sym);
	if (it == functions_.end())
		throw EvalError("'" + sym + "' is not a function of structure '" + name_ + "'");
	return it->second;
}

bool FiniteStructure::holds(const std::string &rel, const Element *args) const
{
	const RelationTable &r = relation(rel);
	return r.tuples.count(encode(args, r.arity)) > 0;
}

Element FiniteStructure::apply(const std::string &fn, const Element *args) const
{
	const FunctionTable &f = function(fn);
	return f.table[encode(args, f.arity)];
}

Element FiniteStructure::constant(const std::string &c) const
{
	auto it = constants_.find(c);
	if (it == constants_.end())
		throw EvalError("'" + c + "' is not a constant of structure '" + name_ + "'");
	return it->second;
}

// ---------------------------------------------------------------- JSON

namespace {

std::string element_id(const json &j)
{
	if (j.is_string())
		return j.get<std::string>();
	if (j.is_number_integer() || j.is_boolean())
		return j.dump();
	throw ValidationError("element ids must be strings or integers, got " + j.dump());
}

int arity_of(const json &j, const std::string &sym)
{
	if (!j.contains("arity") || !j["arity"].is_number_integer())
		throw ValidationError("'" + sym + "' needs an integer arity");
	return j["arity"].get<int>();
}

} // namespace

FiniteStructure FiniteStructure::parse_json(std::string_view text)
{
	json j;
	try {
		j = json::parse(text);
	} catch (const json::parse_error &e) {
		throw ValidationError(std::string("structure file is not valid JSON: ") + e.what());
	}
	if (!j.is_object() || !j.contains("domain") || !j["domain"].is_array())
		throw ValidationError("structure file needs a 'domain' array");
	std::vector<std::string> dom;
	for (const auto &e : j["domain"])
		dom.push_back(element_id(e));
	FiniteStructure s(j.value("name", std::string("structure")), std::move(dom));

	auto tuple = [&](const json &t, const std::string &sym) {
		if (!t.is_array())
			throw ValidationError("tuples of '" + sym + "' must be arrays");
		std::vector<Element> out;
		for (const auto &e : t)
			out.push_back(s.element(element_id(e)));
		return out;
	};

	if (j.contains("relations")) {
		for (const auto &[sym, r] : j["relations"].items()) {
			int arity = arity_of(r, sym);
			std::vector<std::vector<Element>> tuples;
			if (arity == 0) {
				if (r.value("holds", false))
					tuples.emplace_back();
			} else {
				for (const auto &t : r.value("tuples", json::array()))
					tuples.push_back(tuple(t, sym));
			}
			s.add_relation(sym, arity, tuples);
		}
	}
	if (j.contains("functions")) {
		for (const auto &[sym, f] : j["functions"].items()) {
			int arity = arity_of(f, sym);
			if (arity < 1)
				throw ValidationError("function '" + sym + "' needs arity >= 1; use a constant instead");
			s.add_function(sym, arity);
			for (const auto &row : f.value("table", json::array())) {
				std::vector<Element> t = tuple(row, sym);
				if (static_cast<int>(t.size()) != arity + 1)
					throw ValidationError("table rows of '" + sym + "' need arity + 1 entries");
				Element result = t.back();
				t.pop_back();
				s.set_value(sym, t, result);
			}
		}
	}
	if (j.contains("constants"))
		for (const auto &[sym, e] : j["constants"].items())
			s.add_constant(sym, s.element(element_id(e)));
	s.validate();
	return s;
}

FiniteStructure FiniteStructure::load(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw ValidationError("cannot open structure file '" + path.string() + "'");
	std::ostringstream ss;
	ss << in.rdbuf();
	return parse_json(ss.str());
}

std::string FiniteStructure::to_json() const
{
	json j;
	j["name"] = name_;
	j["domain"] = domain_;
	json rels = json::object();
	for (const auto &[sym, r] : relations_) {
		json rj{{"arity", r.arity}};
		if (r.arity == 0) {
			rj["holds"] = !r.tuples.empty();
		} else {
			std::vector<std::uint64_t> codes(r.tuples.begin(), r.tuples.end());
			std::sort(codes.begin(), codes.end());
			json ts = json::array();
			for (std::uint64_t c : codes) {
				std::vector<std::string> t(static_cast<std::size_t>(r.arity));
				for (int i = r.arity - 1; i >= 0; --i) {
					t[static_cast<std::size_t>(i)] = domain_[c % domain_.size()];
					c /= domain_.size();
				}
				ts.push_back(t);
			}
			rj["tuples"] = ts;
		}
		rels[sym] = rj;
	}
	j["relations"] = rels;
	json fns = json::object();
	for (const auto &[sym, f] : functions_) {
		json rows = json::array();
		for (std::uint64_t c = 0; c < f.table.size(); ++c) {
			std::vector<std::string> row(static_cast<std::size_t>(f.arity));
			std::uint64_t code = c;
			for (int i = f.arity - 1; i >= 0; --i) {
				row[static_cast<std::size_t>(i)] = domain_[code % domain_.size()];
				code /= domain_.size();
			}
			row.push_back(f.table[c] >= 0 ? domain_[static_cast<std::size_t>(f.table[c])] : "");
			rows.push_back(row);
		}
		fns[sym] = json{{"arity", f.arity}, {"table", rows}};
	}
	j["functions"] = fns;
	json cs = json::object();
	for (const auto &[sym, e] : constants_)
		cs[sym] = domain_[static_cast<std::size_t>(e)];
	j["constants"] = cs;
	return j.dump(2) + "\n";
}

FiniteStructure boolean_structure()
{
	FiniteStructure s("B2", {"0", "1"});
	s.add_function("&", 2).add_function("|", 2).add_function("~", 1);
	for (Element a = 0; a < 2; ++a) {
		s.set_value("~", {a}, 1 - a);
		for (Element b = 0; b < 2; ++b) {
			s.set_value("&", {a, b}, a & b);
			s.set_value("|", {a, b}, a | b);
		}
	}
	s.add_constant("0", 0).add_constant("1", 1);
	s.validate();
	return s;
}

} // namespace mtl
