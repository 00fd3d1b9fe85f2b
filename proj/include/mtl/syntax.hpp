/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include "mtl/ast.hpp"
#include "mtl/signature.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mtl {

/* Team domain: the ordered tuple of L0 variable indices (v_i) a run works over. */
using VarTuple = std::vector<int>;

std::string var_name(int index);            // 3 -> "v3"
int parse_var_name(std::string_view name);  // "v3" -> 3, -1 if not a variable name

/*
 * Concrete grammar (see docs/grammar.md):
 *
 *   formula  := iff
 *   iff      := imp ("<->" imp)*
 *   imp      := or ("->" imp)?
 *   or       := and ("|" and)*
 *   and      := unary ("&" unary)*
 *   unary    := "~" unary | ("forall"|"exists") VAR formula | "(" formula ")" | atom
 *
 * L0 atoms are "t = t", "R(t, ...)", "R" for nullary R, and infix "t <= t" / "t < t"
 * when the signature declares a binary relation of that name. L0 terms are
 * variables v0, v1, ..., constants, "f(t, ...)" and, for signatures declaring
 * them, "~t" and the infix "(t & t)", "(t | t)". Infix term operators only
 * appear inside parentheses.
 *
 * L1 atoms are "s = s", "s <= s", "s < s" (">=", ">", "!=" are sugar; chains
 * "a <= b <= c" expand to conjunctions). L1 terms are rational literals,
 * real variables, probability constants "|phi|", "+", "-", "*" and unary "-".
 *
 * Unicode aliases: ¬ ∧ ∨ → ↔ ∀ ∃ ≤ ≥ ≠ · −.
 */
Formula0 parse_l0(std::string_view text, const Signature &sig);
Term0 parse_term0(std::string_view text, const Signature &sig);
Formula1 parse_l1(std::string_view text, const Signature &sig, const VarTuple &dom);
PropFormula parse_prop(std::string_view text);

std::string print(const Term0 &t);
std::string print(const Formula0 &f);
std::string print(const Term1 &t);
std::string print(const Formula1 &f);
std::string print(const PropFormula &f);

/* Throws ValidationError when f uses a symbol not in sig or with the wrong arity. */
void check_sorts(const Formula0 &f, const Signature &sig);
void check_sorts(const Formula1 &f, const Signature &sig, const VarTuple &dom);

/* Boolean multi-team encoding: phi over propositional variables v_i becomes the
 * L0 formula "t_phi = 1" over the boolean algebra signature (see boolean_signature). */
Signature boolean_signature();
Term0 boolean_term(const PropFormula &phi);
Formula0 boolean_encoding(const PropFormula &phi);

} // namespace mtl
