/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/arith.hpp"
#include "mtl/ast.hpp"
#include "mtl/simplex.hpp"
#include "mtl/structure.hpp"
#include "mtl/syntax.hpp"
#include "mtl/team.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mtl {

/* Sign vector over the table formulas: sigma[i] says whether phi_i holds. */
using AtomVector = std::vector<bool>;

std::string to_string(const AtomVector &sigma);   // {1, 0} -> "10"

struct AtomEntry {
	AtomVector sigma;
	/* Lexicographically first tuple of A^|x| with this sign vector. */
	std::optional<std::vector<Element>> representative;

	bool realizable() const { return representative.has_value(); }
};

struct AtomTable {
	std::vector<Formula0> formulas;
	VarTuple dom;
	/* All 2^m sign vectors in tree order: 1 before 0, first formula most significant. */
	std::vector<AtomEntry> atoms;

	std::size_t realizable_count() const;
	const AtomEntry &at(const AtomVector &sigma) const;
};

/*
 * Scans A^|x| and records the sign vector of every tuple. The scan is split
 * across threads; the merge keeps the smallest tuple, so the result does not
 * depend on scheduling. ValidationError when 2^m * |A|^|x| exceeds cap or a
 * formula has a free variable outside x.
 */
AtomTable enumerate_atoms(const FiniteStructure &A, const std::vector<Formula0> &formulas, const VarTuple &x,
                          std::size_t cap = std::size_t{1} << 26);

/* The table formulas of a quantifier-free theory: its probability constants in order of first occurrence. */
std::vector<Formula0> theory_formulas(const std::vector<Formula1> &sigma);

struct SynthesisProblem {
	AtomTable table;
	std::vector<Formula1> sigma;
	/* Closure items for every pair of table formulas: bounds, negation, splitting, inclusion-exclusion. */
	std::vector<Formula1> closure;
	/* Unknown "p_<sigma>" for each realizable atom, in table order, with its table index. */
	std::vector<std::string> unknowns;
	std::vector<std::size_t> unknown_atoms;
	/* prob_variable name -> linear polynomial over the unknowns. */
	std::map<std::string, Polynomial> expansion;
	/* Disjunctive cases of sigma and closure, before expansion. */
	std::vector<PolyCase> cases;
	std::vector<AtomVector> forced_zero;
};

/*
 * Expansion of |phi| over the unknowns for a boolean combination phi of table
 * formulas; std::nullopt when phi is not one.
 */
std::optional<Polynomial> expand_constant(const SynthesisProblem &p, const Formula0 &phi);

/* ValidationError for a quantified member or a constant missing from the table. */
SynthesisProblem build_problem(const std::vector<Formula1> &sigma, AtomTable table);

struct CaseRefutation {
	std::size_t case_index;
	LinearSystem system;          // over the unknowns, with p >= 0 and the sum equal to 1
	FarkasCertificate certificate;
};

struct SolveOptions {
	/* Largest denominator tried when rounding a numeric solution. */
	long max_denominator = 1000000;
	int restarts = 8;
	unsigned seed = 1;
};

struct WeightsResult {
	enum class Status { Sat, Unsat, Unknown };
	Status status = Status::Unknown;
	/* One entry per atom of the table when Sat; unrealizable atoms get 0. */
	std::map<AtomVector, Rational> weights;
	/* One per case when Unsat. */
	std::vector<CaseRefutation> refutations;
	std::string reason;
};

std::string to_string(WeightsResult::Status s);

/*
 * Linear cases go to exact simplex. A case with products of probability terms
 * is first refuted through its linear atoms if possible; otherwise a numeric
 * search proposes values, the constants in nonlinear monomials are rounded to
 * rationals of growing denominator, and the remaining linear problem is solved
 * exactly. Only exactly verified weights are returned.
 */
WeightsResult solve_weights(const SynthesisProblem &p, const SolveOptions &opts = {});

/* One row per positive weight, at the atom's representative. */
DiscreteMeasureTeam assemble_team(const std::map<AtomVector, Rational> &weights, const AtomTable &table,
                                  const FiniteStructure &A);

struct IntervalLabel {
	AtomVector sigma;
	Rational lo, hi;   // [lo, hi), empty when lo == hi
};

struct IntervalLevel {
	std::size_t depth;
	std::vector<IntervalLabel> labels;
};

/* Depths 1..m; each node's interval is split between its 1-child and 0-child by their masses. */
std::vector<IntervalLevel> interval_tree(const std::map<AtomVector, Rational> &weights, const AtomTable &table);
std::string interval_tree_json(const std::vector<IntervalLevel> &tree);

struct WitnessOptions {
	std::size_t atom_cap = std::size_t{1} << 26;
	SolveOptions solve;
};

struct WitnessResult {
	WeightsResult::Status status = WeightsResult::Status::Unknown;
	SynthesisProblem problem;
	WeightsResult weights;
	std::optional<DiscreteMeasureTeam> team;
	std::vector<IntervalLevel> tree;
};

/* The whole pipeline; a Sat team is re-checked against sigma before it is returned. */
WitnessResult synthesize_witness(const FiniteStructure &A, const std::vector<Formula1> &sigma, const VarTuple &x,
                                 const WitnessOptions &opts = {});

} // namespace mtl
