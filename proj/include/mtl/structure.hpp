/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/signature.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mtl {

/* Element of a finite structure, as an index into its domain. */
using Element = int;

/*
 * A finite L0-structure with an explicitly tabulated interpretation. Element
 * ids are opaque strings; equality of elements is equality of ids. Relations
 * are sets of tuples, functions are total tables, constants name elements.
 *
 * Build with the add_* members, then call validate() (the JSON loader does so)
 * before evaluating formulas.
 */
class FiniteStructure {
public:
	FiniteStructure(std::string name, std::vector<std::string> domain);

	FiniteStructure &add_relation(const std::string &sym, int arity, const std::vector<std::vector<Element>> &tuples);
	FiniteStructure &add_function(const std::string &sym, int arity);
	FiniteStructure &set_value(const std::string &sym, const std::vector<Element> &args, Element result);
	FiniteStructure &add_constant(const std::string &sym, Element e);

	/* Throws ValidationError unless every function table is total. */
	void validate() const;

	static FiniteStructure parse_json(std::string_view text);
	static FiniteStructure load(const std::filesystem::path &path);
	std::string to_json() const;

	const std::string &name() const { return name_; }
	const Signature &signature() const { return sig_; }
	int size() const { return static_cast<int>(domain_.size()); }
	const std::vector<std::string> &domain() const { return domain_; }
	const std::string &id(Element e) const { return domain_.at(static_cast<std::size_t>(e)); }
	Element element(std::string_view id) const;   // throws ValidationError for unknown ids
	bool has_element(std::string_view id) const;

	bool holds(const std::string &rel, const Element *args) const;
	Element apply(const std::string &fn, const Element *args) const;
	Element constant(const std::string &c) const;

	/* Lookups by slot, resolved once per formula by the evaluator. */
	struct RelationTable {
		int arity = 0;
		std::unordered_set<std::uint64_t> tuples;
	};
	struct FunctionTable {
		int arity = 0;
		std::vector<Element> table;   // -1 where undefined
	};
	const RelationTable &relation(const std::string &sym) const;
	const FunctionTable &function(const std::string &sym) const;
	std::uint64_t encode(const Element *args, int arity) const;

private:
	std::string name_;
	std::vector<std::string> domain_;
	std::unordered_map<std::string, Element> index_;
	Signature sig_;
	std::map<std::string, RelationTable> relations_;
	std::map<std::string, FunctionTable> functions_;
	std::map<std::string, Element> constants_;
};

/* The two-element boolean algebra ({0,1}, 0, 1, |, &, ~) over boolean_signature(). */
FiniteStructure boolean_structure();

} // namespace mtl
