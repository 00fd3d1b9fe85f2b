/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/grounding.hpp"
#include "mtl/semantics.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mtl {

struct TeamRow {
	std::vector<Element> values;   // one per dom variable, in dom order
	Rational weight;

	friend bool operator==(const TeamRow &, const TeamRow &) = default;
};

/*
 * A finite measure team: rows of assignments to the dom variables with
 * nonnegative rational weights summing to exactly 1. Values are elements of the
 * structure named by structure_ref. Zero-weight rows are kept.
 */
class DiscreteMeasureTeam {
public:
	DiscreteMeasureTeam(const FiniteStructure &A, VarTuple dom, std::vector<TeamRow> rows);

	/* Every row gets weight 1/|rows|. */
	static DiscreteMeasureTeam uniform(const FiniteStructure &A, VarTuple dom, std::vector<std::vector<Element>> rows);

	const VarTuple &dom() const { return dom_; }
	const std::vector<TeamRow> &rows() const { return rows_; }
	const std::string &structure_ref() const { return structure_ref_; }
	/* Indices of rows with weight 0. */
	std::vector<std::size_t> zero_weight_rows() const;

	friend bool operator==(const DiscreteMeasureTeam &, const DiscreteMeasureTeam &) = default;

private:
	VarTuple dom_;
	std::vector<TeamRow> rows_;
	std::string structure_ref_;
};

enum class TeamFormat { Auto, Csv, Json };

/*
 * CSV: a header of variable names in dom order plus an optional "_weight"
 * column, then one row per line with structure element ids. Weights are "p/q"
 * or exact decimals; without the column the rows are weighted uniformly. Blank
 * lines and lines starting with '#' are skipped.
 * JSON: {"dom": ["v0", ...], "rows": [{"assignment": {"v0": id, ...}, "weight": "p/q"}, ...]}.
 * Auto picks by file extension.
 */
DiscreteMeasureTeam parse_team_csv(std::string_view text, const FiniteStructure &A);
DiscreteMeasureTeam parse_team_json(std::string_view text, const FiniteStructure &A);
DiscreteMeasureTeam load_team(const std::filesystem::path &path, TeamFormat format, const FiniteStructure &A);

/* Canonical exports; loading an export and exporting again gives identical bytes. */
std::string to_csv(const DiscreteMeasureTeam &X, const FiniteStructure &A);
std::string to_json(const DiscreteMeasureTeam &X, const FiniteStructure &A);

/* [phi]_X: the total weight of rows satisfying phi. Throws EvalError when phi
 * has a free variable outside dom(X), ValidationError when A is not the team's
 * structure or phi is ill-sorted. */
Rational prob(const DiscreteMeasureTeam &X, const FiniteStructure &A, const Formula0 &phi);

/* prob for many formulas, memoized by formula text for the lifetime of the object. */
class TeamEvaluator {
public:
	TeamEvaluator(const DiscreteMeasureTeam &X, const FiniteStructure &A);

	const Rational &prob(const Formula0 &phi);
	Grounding ground_constants(const std::vector<Formula0> &constants);

	const DiscreteMeasureTeam &team() const { return *X_; }
	const FiniteStructure &structure() const { return *A_; }

private:
	const DiscreteMeasureTeam *X_;
	const FiniteStructure *A_;
	std::map<std::string, Rational> cache_;
};

Grounding ground_constants(const DiscreteMeasureTeam &X, const FiniteStructure &A, const std::vector<Formula0> &constants);

// ---------------------------------------------------------------- sampled continuous teams

/* One polynomial piece on [from, to); coeffs[k] multiplies t^k. */
struct PolynomialPiece {
	Rational from, to;
	std::vector<Rational> coeffs;
};

struct SampledContinuousSpec {
	/* functions[i] gives the value of dom variable v_i */
	std::vector<std::vector<PolynomialPiece>> functions;
	int samples = 1;
	/* extra values to include in the ordered structure as named constants */
	std::vector<Rational> constants;

	static SampledContinuousSpec parse_json(std::string_view text);
};

/*
 * Midpoint sampling of a continuous team on [0,1]: rows at t = k/N + 1/(2N),
 * each of weight 1/N. The structure is the ordered set of sample values and
 * spec constants, with relations "<=" and "<" and a constant per spec value
 * named by its "p/q" text. Results derived from it are approximations of the
 * continuous team.
 */
struct SampledTeam {
	FiniteStructure structure;
	DiscreteMeasureTeam team;
	int samples;
};

SampledTeam sample_continuous(const SampledContinuousSpec &spec);

/* Exact value of a piecewise polynomial at t; throws EvalError when no piece covers t.
 * The last piece also covers its right endpoint. */
Rational eval_piecewise(const std::vector<PolynomialPiece> &pieces, const Rational &t);

} // namespace mtl
