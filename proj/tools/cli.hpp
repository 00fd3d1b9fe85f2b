/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mtl::cli {

/* Process exit codes. Codes from 3 up are input errors, split by kind. */
enum Exit : int {
	ExitOk = 0,          // success, HOLDS, SATISFIED, ACCEPTED, SAT
	ExitFailed = 1,      // FAILS, NOT SATISFIED, REJECTED, UNSAT
	ExitUnknown = 2,     // UNKNOWN
	ExitParse = 3,       // usage, unreadable file, malformed text
	ExitValidation = 4,  // well-formed input that breaks an invariant or cap
	ExitEvaluation = 5,  // outside the evaluable fragment (unbounded quantifier, bad solver answer)
};

/* Runs one command; args excludes the program name. */
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace mtl::cli
