/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/ast.hpp"
#include "mtl/signature.hpp"
#include "mtl/structure.hpp"
#include "mtl/syntax.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mtl {

enum class Justification { HypT, HypSigma, AxA0, AxA1, AxA2, RuleR0, PropTaut, RcfOracle, FoSemantic };

std::string to_string(Justification j);                          // "AX_A0", "RULE_R0", ...
std::optional<Justification> parse_justification(std::string_view tag);

/* Whether the justification produces an L0 statement (HYP_T, FO_SEMANTIC) or an L1 one. */
bool justifies_l0(Justification j);

struct ProofStep {
	int number = 0;
	std::variant<Formula0, Formula1> statement;
	Justification justification = Justification::HypT;
	std::vector<int> refs;
	std::size_t source_line = 0;

	bool is_l0() const { return std::holds_alternative<Formula0>(statement); }
	std::string statement_text() const;
};

/*
 * A proof script file:
 *
 *   # comment
 *   structure two.json          designated structure, path relative to the script
 *   relation R 1                signature declarations when no structure is given
 *   function f 2
 *   constant c
 *   dom v0 v1                   team domain for probability constants
 *   T name: <L0 sentence>
 *   Sigma name: <L1 formula>
 *   goal: <L1 formula>
 *   1. [L0] <L0 sentence> by FO_SEMANTIC
 *   2. <L1 formula> by RULE_R0 1
 *
 * A step is "N. <statement> by <TAG> <refs>", split at the last " by ".
 * Tags: HYP_T, HYP_SIGMA, AX_A0, AX_A1, AX_A2, RULE_R0 n, PROP_TAUT refs,
 * RCF_ORACLE refs, FO_SEMANTIC. Step numbers must be 1, 2, 3, ...
 */
struct ProofScript {
	Signature signature;
	std::optional<FiniteStructure> structure;
	VarTuple dom;
	std::vector<std::pair<std::string, Formula0>> theory;
	std::vector<std::pair<std::string, Formula1>> sigma;
	std::optional<Formula1> goal;
	std::vector<ProofStep> steps;

	static ProofScript parse(std::string_view text, const std::filesystem::path &base_dir = {});
	static ProofScript load(const std::filesystem::path &path);
};

struct CheckResult {
	bool ok = true;
	std::string reason;

	static CheckResult pass() { return {true, {}}; }
	static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

/* Schema match for AX_A0 |p & ~p| = 0, AX_A1 |p | ~p| = 1 and
 * AX_A2 |p | q| = |p| + |q| - |p & q|. Metavariables match syntactically. */
CheckResult check_axiom_instance(Justification axiom, const Formula1 &statement);

/* How the premise of an R0 step is discharged. */
enum class Discharge { HypT, FoSemantic };

/*
 * Rule R0: the premise is a disjunction of conjunctions of sentences
 * "forall ... (phi -> psi)" and the conclusion the same disjunction of
 * conjunctions with each of them replaced by |phi| <= |psi|, index by index.
 * The premise must also be a member of theory (HypT) or valid on structure
 * (FoSemantic).
 */
CheckResult check_r0_shape(const Formula0 &premise, const Formula1 &conclusion);
CheckResult check_r0(const Formula0 &premise, const Formula1 &conclusion, Discharge how,
                     const std::vector<Formula0> &theory, const FiniteStructure *structure);

struct LineReport {
	int number = 0;
	std::string justification;
	bool ok = true;
	std::string reason;
};

struct ProofReport {
	bool accepted = false;
	std::vector<LineReport> lines;
	std::string goal_reason;   // set when the last line does not match the goal

	std::string to_json() const;
};

ProofReport check_proof(const ProofScript &script);

} // namespace mtl
