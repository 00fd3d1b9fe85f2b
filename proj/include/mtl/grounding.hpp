/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/ast.hpp"
#include "mtl/rational.hpp"

#include <map>
#include <optional>
#include <string>

namespace mtl {

/* Values of probability constants |phi|, keyed by the printed form of phi. */
class Grounding {
public:
	void set(const Formula0 &phi, Rational value);
	bool contains(const Formula0 &phi) const;
	std::optional<Rational> find(const Formula0 &phi) const;
	const Rational &at(const Formula0 &phi) const;   // throws EvalError when missing

	std::size_t size() const { return values_.size(); }
	bool empty() const { return values_.empty(); }
	const std::map<std::string, Rational> &entries() const { return values_; }

private:
	std::map<std::string, Rational> values_;
};

} // namespace mtl
