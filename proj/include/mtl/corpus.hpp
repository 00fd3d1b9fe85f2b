/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/ast.hpp"
#include "mtl/structure.hpp"
#include "mtl/syntax.hpp"
#include "mtl/team.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mtl {

// ---------------------------------------------------------------- genotypes

enum class Genotype { AA = 0, Aa = 1, aa = 2 };

std::string to_string(Genotype g);
constexpr std::array<Genotype, 3> all_genotypes{Genotype::AA, Genotype::Aa, Genotype::aa};

/* Probabilities of AA, Aa, aa in that order. */
using GenotypeDistribution = std::array<Rational, 3>;

/* Throws ValidationError unless the entries are nonnegative and sum to 1. */
void validate_distribution(const GenotypeDistribution &g);

struct GenotypeModel {
	/* 27 father-mother-child triples with ids "F-M-C" and predicates P_j_k, j in {f, m, c}. */
	FiniteStructure structure;
	/* mendel[f][m] is the child distribution of the mating f x m. */
	std::array<std::array<GenotypeDistribution, 3>, 3> mendel;

	const GenotypeDistribution &child(Genotype f, Genotype m) const
	{
		return mendel[static_cast<std::size_t>(f)][static_cast<std::size_t>(m)];
	}
	Element triple(Genotype f, Genotype m, Genotype c) const;
};

const GenotypeModel &genotype_model();

/* The 60 equations over dom (v0, v1, v2): sexes agree with the previous children,
 * Mendel's rules with weight 1, 2 and 4, and random mating, for generations 1 and 2. */
std::vector<Formula1> hw_sigma();
/* Children of the second and third generation have the same genotype frequencies (3 conjuncts). */
Formula1 hw_alpha();

/*
 * A team over dom (v0, v1, v2) whose first-generation children follow g1 and
 * whose later generations mate at random within the generation. Generation 1
 * rows are (k, k, k) for k in the support of g1: the theory leaves their
 * parents free. The three generations are independent as variables, so the
 * team is the product of the three marginals. Asserts hw_sigma() exactly.
 */
DiscreteMeasureTeam synth_hw_team(const GenotypeDistribution &g1);

/* Child marginal of generation i+1 given the child marginal of generation i. */
GenotypeDistribution next_generation(const GenotypeDistribution &children);

// ---------------------------------------------------------------- Bell

struct BellInstance {
	std::vector<PropFormula> formulas;
	DiscreteMeasureTeam team;   // over the two-element boolean structure
};

struct BellReport {
	std::vector<Rational> values;   // [phi_j]_X
	Rational sum;
	Rational conjunction;           // [phi_0 & ... & phi_{k-1}]_X
	Rational bound;                 // k - 1 + conjunction
	bool holds_general = false;     // sum <= bound
	bool contradictory = false;     // the conjunction is false under every valuation
	std::optional<bool> holds_contradictory;   // sum <= k - 1, decided only when contradictory

	std::string to_json() const;
};

/* ValidationError when a formula uses a variable outside the team domain. */
BellReport bell_audit(const BellInstance &inst);

// ---------------------------------------------------------------- Markov chains

enum class MarkovShape {
	Tree,     // every sequence names its own state
	Lattice   // N even: step k moves by +-1 along axis k/2, so sequences with equal sums coincide
};

struct MarkovInstance {
	std::size_t fanout, depth, horizon;
	MarkovShape shape;
	FiniteStructure structure;
	VarTuple dom;                        // v0 .. v_horizon
	std::vector<std::string> constants;  // c_e for the empty sequence, then c_0, c_1, c_0_0, ... by length
	std::vector<Formula1> sigma;
};

/* Name of the constant for a sequence: "c_e" for the empty one, else "c_" + digits joined by '_'. */
std::string markov_constant(const std::vector<std::size_t> &eta);

/*
 * The structure with constants for all sequences of length at most depth and
 * the edge relation of their one-step extensions, plus the instances of
 * (A) the chain starts at c_e;
 * (B) |E(v_i, v_i+1)| = 1, only for i < depth so that the walk stays inside;
 * (C) homogeneity for i < j < horizon, sequences shorter than depth and k < N,
 *     guarded by |v_i = c_eta| = 0 or |v_j = c_eta| = 0. The printed axiom
 *     repeats the first guard twice; the second guard here is the j one.
 * ValidationError when the constant or instance count exceeds cap.
 */
MarkovInstance markov_sigma(std::size_t fanout, std::size_t depth, std::size_t horizon,
                            MarkovShape shape = MarkovShape::Tree, std::size_t cap = 100000);

/* The walk choosing each of the N steps with probability 1/N, staying put at the boundary. */
DiscreteMeasureTeam markov_walk_team(const MarkovInstance &m);

// ---------------------------------------------------------------- quantum

/* coords[i][n] = <p(n) | q(i)> as (real, imaginary) rationals. */
struct QuantumBasis {
	std::array<std::array<std::pair<Rational, Rational>, 4>, 4> coords;
	Rational scale = Rational(1, 2);

	static QuantumBasis identity();
	/* {"scale": "1/2", "coords": [[["re","im"], ...4], ...4]}; entries must be rationals. */
	static QuantumBasis parse_json(std::string_view text);
};

/* Elements "1".."4" named by constants d1..d4; no relations. */
FiniteStructure quantum_structure();

/*
 * Over dom (v1, v2): reals a_n, b_n in [-2, 2] with a_i^2 + b_i^2 = |v1 = d_i| and
 * |<s|q(i)>|^2 = |v2 = d_i| for s = scale * sum_n (a_n + i b_n) p(n).
 */
Formula1 quantum_sigma(const QuantumBasis &basis);

} // namespace mtl
