/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/signature.hpp"

#include <stdexcept>

namespace mtl {

void Signature::claim(const std::string &sym, SymbolKind kind, int arity)
{
	if (sym.empty())
		throw std::invalid_argument("empty symbol name");
	if (index_.count(sym))
		throw std::invalid_argument("symbol '" + sym + "' declared twice");
	index_.emplace(sym, std::make_pair(kind, arity));
}

Signature &Signature::add_relation(const std::string &sym, int arity)
{
	if (arity < 0)
		throw std::invalid_argument("negative arity for relation '" + sym + "'");
	claim(sym, SymbolKind::Relation, arity);
	relations_.emplace_back(sym, arity);
	return *this;
}

Signature &Signature::add_function(const std::string &sym, int arity)
{
	if (arity < 1)
		throw std::invalid_argument("function '" + sym + "' must have arity >= 1 (use a constant)");
	claim(sym, SymbolKind::Function, arity);
	functions_.emplace_back(sym, arity);
	return *this;
}

Signature &Signature::add_constant(const std::string &sym)
{
	claim(sym, SymbolKind::Constant, 0);
	constants_.push_back(sym);
	return *this;
}

std::optional<SymbolKind> Signature::kind_of(const std::string &sym) const
{
	auto it = index_.find(sym);
	if (it == index_.end())
		return std::nullopt;
	return it->second.first;
}

int Signature::arity(const std::string &sym) const
{
	auto it = index_.find(sym);
	if (it == index_.end())
		throw std::out_of_range("unknown symbol '" + sym + "'");
	return it->second.second;
}

} // namespace mtl
