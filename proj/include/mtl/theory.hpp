/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/arith.hpp"
#include "mtl/ast.hpp"
#include "mtl/signature.hpp"
#include "mtl/syntax.hpp"
#include "mtl/team.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtl {

/*
 * A finite L1 theory file: one sentence per line, '#' comments, blank lines
 * ignored. An optional "dom v0 v1 ..." line fixes the variable tuple; without
 * it the tuple is the given default, or else the sorted free variables of the
 * probability constants.
 */
struct Theory {
	VarTuple dom;
	std::vector<Formula1> sentences;

	static Theory parse(std::string_view text, const Signature &sig, std::optional<VarTuple> default_dom = {});
	static Theory load(const std::filesystem::path &path, const Signature &sig,
	                   std::optional<VarTuple> default_dom = {});
	std::string str() const;
};

struct SentenceVerdict {
	Formula1 sentence;
	Verdict verdict;
};

struct TheoryReport {
	std::vector<SentenceVerdict> sentences;
	Grounding grounding;

	/* SATISFIED when every sentence HOLDS, NOT SATISFIED when one FAILS, else UNKNOWN. */
	Truth overall() const;
};

/* Grounds every probability constant of the theory once, then decides each sentence. */
TheoryReport check_theory(const DiscreteMeasureTeam &X, const FiniteStructure &A, const std::vector<Formula1> &sigma,
                          const ArithPolicy &policy = {});

} // namespace mtl
