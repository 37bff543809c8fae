#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#ifndef VALDEF_CLI_PATH
#error "VALDEF_CLI_PATH must point at the command-line binary"
#endif

namespace {

struct RunResult {
    int code;
    std::string out;
};

// tail is appended verbatim, so arguments with shell metacharacters must be
// quoted by the caller; stdin is /dev/null unless the tail pipes its own
RunResult run_cli(const std::string& tail) {
    std::string cmd = std::string("'") + VALDEF_CLI_PATH + "' " + tail;
    if (tail.find('|') == std::string::npos && tail.find('<') == std::string::npos)
        cmd += " < /dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

RunResult run_cli_stdin(const std::string& input_path, const std::string& tail) {
    std::string cmd = std::string("'") + VALDEF_CLI_PATH + "' " + tail + " < '" + input_path + "'";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

nlohmann::json as_json(const RunResult& r) { return nlohmann::json::parse(r.out); }

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/valdef_cli_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("emit then eval round trip") {
    auto emit = run_cli("emit phid --d 0");
    REQUIRE(emit.code == 0);
    auto j = as_json(emit);
    CHECK(j["schema"] == "1");
    REQUIRE(j.contains("formula"));

    auto path = write_temp("phid0.sexpr", j["formula"].get<std::string>());
    auto ev = run_cli("eval --field Fp:5 --sentence '" + path + "'");
    REQUIRE(ev.code == 0);
    CHECK(as_json(ev)["verdict"] == true);

    // same sentence through standard input
    auto ev2 = run_cli_stdin(path, "eval --field Fp:3 --sentence -");
    REQUIRE(ev2.code == 0);
    CHECK(as_json(ev2)["verdict"] == true);

    auto emit1 = run_cli("emit phid --d 1");
    REQUIRE(emit1.code == 0);
    auto path1 = write_temp("phid1.sexpr", as_json(emit1)["formula"].get<std::string>());
    auto ev3 = run_cli("eval --field Fp:5 --sentence '" + path1 + "'");
    REQUIRE(ev3.code == 0);
    CHECK(as_json(ev3)["verdict"] == false);
}

TEST_CASE("divisor support listing") {
    auto r = run_cli("divisor df --field 'RatFunc(Fp:3,t)' --f t");
    REQUIRE(r.code == 0);
    auto j = as_json(r);
    CHECK(j["places"] == nlohmann::json::array({"irr:[0,1]", "finf"}));
}

TEST_CASE("local invariant listing") {
    auto r = run_cli("symbol hbn --a=-1 --b=-1");
    REQUIRE(r.code == 0);
    auto j = as_json(r);
    CHECK(j["invariants"] == nlohmann::json({{"2", 1}, {"inf", 1}}));
    CHECK(j["sum"] == 0);
}

TEST_CASE("symbol subcommands") {
    auto bd = run_cli("symbol boundary --field 'RatFunc(Fp:5,t)' --place 'irr:[0,1]' --symbol t,2");
    REQUIRE(bd.code == 0);
    CHECK(as_json(bd)["symbol"] == "{2}");

    auto tr = run_cli("symbol trivial --field 'RatFunc(Fp:5,t)' --symbol 't,1-t'");
    REQUIRE(tr.code == 0);
    CHECK(as_json(tr)["verdict"] == true);

    auto rec = run_cli("symbol reciprocity --field 'RatFunc(Fp:3,t)' --f t --g 't+1'");
    REQUIRE(rec.code == 0);
    CHECK(as_json(rec)["verdict"] == true);
}

TEST_CASE("pfister subcommands") {
    auto iso = run_cli("pfister isotropic --field Fp:5 --coeffs 2,3");
    REQUIRE(iso.code == 0);
    CHECK(as_json(iso)["verdict"] == true);

    auto val = run_cli("pfister value --field Q --coeffs 2 --x 1,1");
    REQUIRE(val.code == 0);
    CHECK(as_json(val)["value"] == "-1");

    auto q = run_cli("pfister isotropic --field Q --coeffs 2,7");
    REQUIRE(q.code == 0);
    CHECK(as_json(q)["verdict"] == true);  // <<2,7>> is hyperbolic over Q
}

TEST_CASE("divisor ring trichotomy") {
    auto good = run_cli("divisor ring --field 'RatFunc(Fp:3,t)' --f t");
    REQUIRE(good.code == 0);
    auto jg = as_json(good);
    CHECK(jg["verdict"] == true);
    CHECK(jg["defect"] == "none");
    CHECK(jg["d0_size"] == 1);

    auto bad = run_cli("divisor ring --field 'RatFunc(Fp:3,t)' --f 't*(t+1)'");
    REQUIRE(bad.code == 0);
    auto jb = as_json(bad);
    CHECK(jb["verdict"] == false);
    CHECK(jb["defect"] == "totality_fails");
    CHECK(jb["d0_size"] == 2);
    CHECK(jb.contains("witness"));
}

TEST_CASE("divisor degree test") {
    auto yes = run_cli("divisor deg --field 'RatFunc(Fp:5,u)' --t 'u^3+u' --n 3");
    REQUIRE(yes.code == 0);
    CHECK(as_json(yes)["verdict"] == true);
    auto no = run_cli("divisor deg --field 'RatFunc(Fp:5,u)' --t 'u^3+u' --n 2");
    REQUIRE(no.code == 0);
    CHECK(as_json(no)["verdict"] == false);
}

TEST_CASE("formula statistics output") {
    auto path = write_temp("eq.sexpr", "(= 0 0)");
    auto r = run_cli("stats --formula '" + path + "'");
    REQUIRE(r.code == 0);
    auto j = as_json(r);
    CHECK(j["node_count"] == 3);
    CHECK(j["quantifier_depth"] == 0);
    CHECK(j["alternation_count"] == 0);
    CHECK(j["macro_names"] == nlohmann::json::array());
}

TEST_CASE("exit codes distinguish the error classes") {
    CHECK(run_cli("eval --field 'Fp:bogus' --sentence -").code == 2);

    auto path = write_temp("bad.sexpr", "(and 0 1)");
    auto parse = run_cli("stats --formula '" + path + "'");
    CHECK(parse.code == 2);
    CHECK(as_json(parse)["error"].get<std::string>().find("terms are not formulas") !=
          std::string::npos);

    CHECK(run_cli("emit vald --d 1").code == 3);

    auto free_var = write_temp("free.sexpr", "(= x 0)");
    CHECK(run_cli("eval --field Fp:3 --sentence '" + free_var + "'").code == 3);

    CHECK(run_cli("symbol trivial --field Q --symbol '-1,-1,-1,-1'").code == 4);

    CHECK(run_cli("totally-unknown-subcommand").code == 2);
}

TEST_CASE("sampled checks are deterministic under a fixed seed") {
    auto a = run_cli("kato complex --scheme p1:3 --samples 25 --seed 9");
    auto b = run_cli("kato complex --scheme p1:3 --samples 25 --seed 9");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(as_json(a)["verdict"] == "pass");

    auto c = run_cli("kato exactness --scheme specz --samples 10 --seed 3");
    REQUIRE(c.code == 0);
    CHECK(as_json(c)["verdict"] == "pass");
}
