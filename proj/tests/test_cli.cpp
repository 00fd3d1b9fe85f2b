/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "cli.hpp"
#include "doctest.h"
#include "mtl/corpus.hpp"
#include "mtl/team.hpp"
#include "mtl/theory.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace mtl;
namespace fs = std::filesystem;

namespace {

struct Result {
	int code;
	std::string out, err;
};

Result run(std::vector<std::string> args)
{
	std::ostringstream out, err;
	int code = cli::run(args, out, err);
	return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p)
{
	std::ifstream f(p);
	std::stringstream ss;
	ss << f.rdbuf();
	return ss.str();
}

void spill(const fs::path &p, const std::string &text) { std::ofstream(p) << text; }

// scratch directory removed on scope exit
struct Scratch {
	fs::path dir = fs::temp_directory_path() / ("mtl_cli_" + std::to_string(::getpid()));
	Scratch() { fs::create_directories(dir); }
	~Scratch() { fs::remove_all(dir); }
	std::string operator/(const std::string &name) const { return (dir / name).string(); }
};

const std::string data = MTL_DATA_DIR;
const std::string b2 = data + "/structures/b2.json";
const std::string binary8 = data + "/teams/binary8.csv";
const std::string rsc = data + "/structures/rsc.json";

} // namespace

TEST_CASE("golden reports")
{
	auto golden = [](const std::string &name) { return slurp(std::string(MTL_TEST_DIR) + "/golden/" + name); };

	Result c = run({"check", "--structure", b2, "--team", binary8, "--theory", data + "/theories/binary8_fails.theory",
	                "--format", "json"});
	CHECK(c.code == cli::ExitFailed);
	CHECK(c.out == golden("cli_check_binary8_fails.json"));

	Result w = run({"witness", "--structure", rsc, "--theory", data + "/theories/r_third.theory", "--format", "json"});
	CHECK(w.code == cli::ExitOk);
	CHECK(w.out == golden("cli_witness_r_third.json"));

	Result u = run({"witness", "--structure", rsc, "--theory", data + "/theories/contradictory.theory", "--format", "json"});
	CHECK(u.code == cli::ExitFailed);
	CHECK(u.out == golden("cli_witness_contradictory.json"));

	Result p = run({"prove", "--script", data + "/proofs/split.proof", "--format", "json"});
	CHECK(p.code == cli::ExitOk);
	CHECK(p.out == golden("proof_split.json"));
}

TEST_CASE("eval")
{
	std::vector<std::string> base{"eval", "--structure", b2, "--team", binary8};
	auto ev = [&](const std::string &text) {
		auto a = base;
		a.push_back(text);
		return run(a);
	};
	// binary8 rows with v0 = 1 and v3 = 1: rows 1, 2, 3 of 8
	CHECK(ev("v0 = 1 & v3 = 1").out == "3/8 (approx. 0.375)\n");
	CHECK(ev("|v0 = 1| * 2 + 1/3").out == "4/3 (approx. 1.33333)\n");
	Result s = ev("|v0 = 1| = 1/2");
	CHECK(s.code == cli::ExitOk);
	CHECK(s.out == "HOLDS\n");
	CHECK(ev("|v0 = 1| < 1/2").code == cli::ExitFailed);
	CHECK(ev("exists r (0 <= r & r <= 1 & r * r = 1/2)").code == cli::ExitUnknown);

	Result scope = ev("|v7 = 1|");
	CHECK(scope.code == cli::ExitParse);
	CHECK(scope.err.find("v7 outside the team domain") != std::string::npos);
	CHECK(ev("v0 = = 1").code == cli::ExitParse);
	CHECK(ev("exists r (r * r = 2)").code == cli::ExitEvaluation);
}

TEST_CASE("exit codes for bad input")
{
	Scratch tmp;
	CHECK(run({}).code == cli::ExitParse);
	CHECK(run({"frobnicate"}).code == cli::ExitParse);
	CHECK(run({"check", "--structure", b2, "--team", tmp / "missing.csv", "--theory", data + "/theories/binary8.theory"})
	          .code == cli::ExitParse);
	CHECK(run({"eval", "--structure", b2, "--team", binary8, "--delta", "tiny", "|v0 = 1| = 1"}).code == cli::ExitParse);
	CHECK(run({"eval", "--structure", b2, "--team", binary8, "--delta", "-1", "|v0 = 1| = 1"}).code ==
	      cli::ExitValidation);
	CHECK(run({"--help"}).code == cli::ExitOk);

	spill(tmp / "bad.theory", "|v0 = 1| = 1/2\n\n|v0 = 1| = = 1\n");
	Result bad = run({"check", "--structure", b2, "--team", binary8, "--theory", tmp / "bad.theory"});
	CHECK(bad.code == cli::ExitParse);
	CHECK(bad.err.find("at 3:") != std::string::npos);

	spill(tmp / "heavy.csv", "v0,_weight\n1,1/2\n0,1/3\n");
	CHECK(run({"eval", "--structure", b2, "--team", tmp / "heavy.csv", "v0 = 1"}).code == cli::ExitValidation);

	Result cap = run({"witness", "--structure", rsc, "--theory", data + "/theories/independence.theory", "--atom-cap", "10"});
	CHECK(cap.code == cli::ExitValidation);
	CHECK(cap.err.find("cap") != std::string::npos);

	spill(tmp / "quant.theory", "dom v0\nexists r (0 <= r & r <= 1 & |R(v0)| = r)\n");
	CHECK(run({"witness", "--structure", rsc, "--theory", tmp / "quant.theory"}).code == cli::ExitValidation);
}

TEST_CASE("witness files round trip through check")
{
	Scratch tmp;
	Result w = run({"witness", "--structure", rsc, "--theory", data + "/theories/independence.theory", "--out-team",
	                tmp / "team.csv", "--out-tree", tmp / "tree.json"});
	REQUIRE(w.code == cli::ExitOk);
	CHECK(w.out.find("re-check: SATISFIED") != std::string::npos);
	CHECK(slurp(tmp / "tree.json").find("\"depth\": 3") != std::string::npos);

	Result c = run({"check", "--structure", rsc, "--team", tmp / "team.csv", "--theory",
	                data + "/theories/independence.theory"});
	CHECK(c.code == cli::ExitOk);
	CHECK(c.out.find("\nSATISFIED\n") != std::string::npos);

	// JSON team output picked by extension
	REQUIRE(run({"witness", "--structure", rsc, "--theory", data + "/theories/r_third.theory", "--out-team",
	             tmp / "team.json"})
	            .code == cli::ExitOk);
	FiniteStructure A = FiniteStructure::load(rsc);
	DiscreteMeasureTeam X = load_team(tmp / "team.json", TeamFormat::Auto, A);
	CHECK(X.rows().size() == 2);
}

TEST_CASE("config file and flag precedence")
{
	Scratch tmp;
	spill(tmp / "mtl.ini", "format = json\n");
	Result j = run({"--config", tmp / "mtl.ini", "check", "--structure", b2, "--team", binary8, "--theory",
	                data + "/theories/binary8.theory"});
	CHECK(j.code == cli::ExitOk);
	CHECK(j.out.rfind("{", 0) == 0);
	Result t = run({"--config", tmp / "mtl.ini", "--format", "text", "check", "--structure", b2, "--team", binary8,
	                "--theory", data + "/theories/binary8.theory"});
	CHECK(t.out.rfind("grounding:", 0) == 0);
}

TEST_CASE("external backend through the command line")
{
	std::vector<std::string> a{"eval", "--structure", b2, "--team", binary8, "--backend", "external", "--solver",
	                           "sh " MTL_TEST_DIR "/stubs/solver.sh", "exists r (0 <= r & r <= 1 & r * r = 1/2)"};
	::setenv("MTL_STUB_ANSWER", "sat", 1);
	CHECK(run(a).code == cli::ExitOk);
	::setenv("MTL_STUB_ANSWER", "unsat", 1);
	CHECK(run(a).code == cli::ExitFailed);
	::setenv("MTL_STUB_ANSWER", "what", 1);
	CHECK(run(a).code == cli::ExitEvaluation);
	::unsetenv("MTL_STUB_ANSWER");
	CHECK(run({"eval", "--structure", b2, "--team", binary8, "--backend", "external", "|v0 = 1| = 1"}).code ==
	      cli::ExitValidation);
}

TEST_CASE("corpus generators feed check")
{
	Scratch tmp;
	REQUIRE(run({"corpus", "--out", tmp / "genotype.json", "genotype"}).code == cli::ExitOk);
	REQUIRE(run({"corpus", "--out", tmp / "hw.theory", "hw-sigma"}).code == cli::ExitOk);
	REQUIRE(run({"corpus", "--out", tmp / "alpha.theory", "hw-alpha"}).code == cli::ExitOk);
	REQUIRE(run({"corpus", "--out", tmp / "hw.csv", "hw-team", "--g1", "1/5,1/5,3/5"}).code == cli::ExitOk);
	CHECK(Theory::load(tmp / "hw.theory", genotype_model().structure.signature()).sentences.size() == 60);
	Result c = run({"check", "--structure", tmp / "genotype.json", "--team", tmp / "hw.csv", "--theory", tmp / "hw.theory"});
	CHECK(c.code == cli::ExitOk);
	Result eq = run({"check", "--structure", tmp / "genotype.json", "--team", tmp / "hw.csv", "--theory",
	                 tmp / "alpha.theory"});
	CHECK(eq.code == cli::ExitOk);
	CHECK(run({"corpus", "hw-team", "--g1", "1/2,1/2"}).code == cli::ExitParse);
	CHECK(run({"corpus", "hw-team", "--g1", "1/2,1/2,1/2"}).code == cli::ExitValidation);

	for (bool lattice : {false, true}) {
		std::vector<std::string> m{"corpus", "markov", "--fanout", "2", "--depth", "3", "--horizon", "3"};
		if (lattice)
			m.push_back("--lattice");
		auto emit = [&](const std::string &what, const std::string &file) {
			auto a = m;
			a.insert(a.begin() + 1, {"--out", tmp / file});
			a.insert(a.end(), {"--emit", what});
			return run(a).code;
		};
		REQUIRE(emit("structure", "m.json") == cli::ExitOk);
		REQUIRE(emit("theory", "m.theory") == cli::ExitOk);
		REQUIRE(emit("walk", "m.csv") == cli::ExitOk);
		CHECK(run({"check", "--structure", tmp / "m.json", "--team", tmp / "m.csv", "--theory", tmp / "m.theory"}).code ==
		      cli::ExitOk);
	}

	spill(tmp / "bell.csv", "v0,v1\n1,1\n1,0\n0,1\n");
	Result b = run({"corpus", "bell", "--team", tmp / "bell.csv", "--formulas", "v0; v1; ~(v0 & v1)"});
	CHECK(b.code == cli::ExitOk);
	CHECK(b.out.find("sum: 2 ") != std::string::npos);

	REQUIRE(run({"corpus", "--out", tmp / "q.json", "quantum", "--emit", "structure"}).code == cli::ExitOk);
	Result q = run({"corpus", "quantum"});
	CHECK(q.code == cli::ExitOk);
	CHECK(q.out.rfind("dom v1 v2\nexists a1", 0) == 0);
}

TEST_CASE("export and sample")
{
	Scratch tmp;
	Result e = run({"export", "--structure", b2, "--team", binary8, "--theory", data + "/theories/binary8_fails.theory"});
	CHECK(e.code == cli::ExitOk);
	CHECK(e.out.find("(assert (= (/ 1.0 2.0) (/ 1.0 3.0)))") != std::string::npos);

	spill(tmp / "spec.json", R"({"samples":4,"functions":{"v0":[{"from":"0","to":"1","coeffs":["0","1"]}]}})");
	Result s = run({"sample", "--spec", tmp / "spec.json", "--out-structure", tmp / "grid.json"});
	CHECK(s.code == cli::ExitOk);
	FiniteStructure G = FiniteStructure::load(tmp / "grid.json");
	spill(tmp / "grid.csv", s.out);
	DiscreteMeasureTeam X = load_team(tmp / "grid.csv", TeamFormat::Csv, G);
	CHECK(X.rows().size() == 4);
}
