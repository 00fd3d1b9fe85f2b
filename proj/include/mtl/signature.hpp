/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mtl {

enum class SymbolKind { Relation, Function, Constant };

/* An L0 signature. Symbols are pairwise distinct across the three kinds;
 * relations may be nullary, functions have arity >= 1. Symbol names are
 * arbitrary non-empty strings, so the boolean algebra may declare "&", "|",
 * "~" as functions and "0", "1" as constants. */
class Signature {
public:
	Signature() = default;
	explicit Signature(std::string name) : name_(std::move(name)) {}

	Signature &add_relation(const std::string &sym, int arity);
	Signature &add_function(const std::string &sym, int arity);
	Signature &add_constant(const std::string &sym);

	const std::string &name() const { return name_; }
	const std::vector<std::pair<std::string, int>> &relations() const { return relations_; }
	const std::vector<std::pair<std::string, int>> &functions() const { return functions_; }
	const std::vector<std::string> &constants() const { return constants_; }

	std::optional<SymbolKind> kind_of(const std::string &sym) const;
	int arity(const std::string &sym) const;  // 0 for constants; throws if unknown

	bool is_relation(const std::string &sym) const { return kind_of(sym) == SymbolKind::Relation; }
	bool is_function(const std::string &sym) const { return kind_of(sym) == SymbolKind::Function; }
	bool is_constant(const std::string &sym) const { return kind_of(sym) == SymbolKind::Constant; }

	friend bool operator==(const Signature &, const Signature &) = default;

private:
	void claim(const std::string &sym, SymbolKind kind, int arity);

	std::string name_;
	std::vector<std::pair<std::string, int>> relations_;
	std::vector<std::pair<std::string, int>> functions_;
	std::vector<std::string> constants_;
	std::map<std::string, std::pair<SymbolKind, int>> index_;
};

} // namespace mtl
