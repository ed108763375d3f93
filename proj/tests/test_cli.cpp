#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

using Json = nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* cli = std::getenv("EFFALG_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "EFFALG_CLI must point at the built binary");
    std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int st = pclose(pipe);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string fx(const std::string& name) {
    const char* dir = std::getenv("EFFALG_FIXTURES");
    REQUIRE_MESSAGE(dir != nullptr, "EFFALG_FIXTURES must point at the fixture directory");
    return std::string(dir) + "/" + name;
}

Json parse(const RunResult& r) {
    CAPTURE(r.out);
    return Json::parse(r.out);
}

// rationals serialize either as plain numbers or as {"num", "den"} strings
double num_of(const Json& v) {
    if (v.is_object())
        return std::stod(v.at("num").get<std::string>()) /
               std::stod(v.at("den").get<std::string>());
    return v.get<double>();
}

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = "/tmp/" + name;
    std::ofstream f(path);
    f << body;
    f.close();
    return path;
}

}  // namespace

TEST_CASE("validate: algebras, tables with defects, and bad inputs") {
    for (const char* name : {"chain2.json", "chain3.json", "diamond.json", "mo2.json",
                             "luk3_squared_ea.json"}) {
        auto r = run_cli("validate --algebra " + fx(name));
        REQUIRE(r.code == 0);
        Json j = parse(r);
        CHECK(j["valid"] == true);
        CHECK(j["kind"] == "effect-algebra");
        CHECK(j["command"] == "validate");
        CHECK(j["seed"] == 42);
        CHECK(j["tolerances"].contains("eps_eq"));
    }

    SUBCASE("MV payloads are recognized by their total operation") {
        auto r = run_cli("validate --algebra " + fx("luk3.json"));
        REQUIRE(r.code == 0);
        Json j = parse(r);
        CHECK(j["valid"] == true);
        CHECK(j["kind"] == "mv-algebra");
    }
    SUBCASE("a broken table exits 1 and names the axiom") {
        auto r = run_cli("validate --algebra " + fx("broken_diamond.json"));
        REQUIRE(r.code == 1);
        Json j = parse(r);
        CHECK(j["valid"] == false);
        bool found = false;
        for (const auto& v : j["violations"])
            if (v["axiom"] == "EA1") found = true;
        CHECK(found);
    }
    SUBCASE("missing file exits 2") {
        auto r = run_cli("validate --algebra /nonexistent/nowhere.json");
        CHECK(r.code == 2);
    }
    SUBCASE("malformed JSON exits 2") {
        auto path = write_temp("effalg_cli_garbage.json", "{not json");
        auto r = run_cli("validate --algebra " + path);
        CHECK(r.code == 2);
    }
    SUBCASE("stochastic payloads validate through the same door") {
        auto r = run_cli("validate --matrix " + fx("collapse2.T.json"));
        REQUIRE(r.code == 0);
        Json j = parse(r);
        CHECK(j["valid"] == true);
        CHECK(j["kind"] == "stochastic-idempotent");
    }
}

TEST_CASE("classify: flags and exact state polytope") {
    auto r = run_cli("classify --algebra " + fx("chain3.json"));
    REQUIRE(r.code == 0);
    Json j = parse(r);
    CHECK(j["lattice"] == true);
    CHECK(j["orthomodular"] == false);
    CHECK(j["mv_effect_algebra"] == true);
    CHECK(j["state_space"]["dim"] == 0);
    REQUIRE(j["state_space"]["vertices"].size() == 1);
    const auto& v = j["state_space"]["vertices"][0];
    CHECK(num_of(v[0]) == doctest::Approx(0.0));
    CHECK(num_of(v[1]) == doctest::Approx(0.5));
    CHECK(num_of(v[2]) == doctest::Approx(1.0));

    SUBCASE("MV input is classified through its partial form") {
        auto r2 = run_cli("classify --algebra " + fx("luk3.json"));
        REQUIRE(r2.code == 0);
        Json j2 = parse(r2);
        CHECK(j2["mv_effect_algebra"] == true);
        CHECK(j2["orthomodular"] == false);
    }
    SUBCASE("the orthomodular fixture is not MV") {
        auto r2 = run_cli("classify --algebra " + fx("mo2.json"));
        REQUIRE(r2.code == 0);
        Json j2 = parse(r2);
        CHECK(j2["lattice"] == true);
        CHECK(j2["orthomodular"] == true);
        CHECK(j2["mv_effect_algebra"] == false);
        CHECK(j2["state_space"]["dim"] == 2);
        CHECK(j2["state_space"]["vertices"].size() == 4);
    }
}

TEST_CASE("enumerate: the diamond carries exactly three state operators") {
    auto r = run_cli("enumerate --algebra " + fx("diamond.json"));
    REQUIRE(r.code == 0);
    Json j = parse(r);
    CHECK(j["count"] == 3);
    REQUIRE(j["operators"].size() == 3);
    CHECK(j["operators"][1]["tau"] == Json::array({0, 1, 2, 3}));
    int faithful = 0;
    for (const auto& op : j["operators"]) {
        CHECK(op["strong"] == true);
        if (op["faithful"] == true) ++faithful;
    }
    CHECK(faithful == 1);
}

TEST_CASE("check-tau: the first-coordinate operator and a rejected swap") {
    auto r = run_cli("check-tau --algebra " + fx("luk3_squared_ea.json") + " --tau " +
                     fx("first_coordinate.tau.json"));
    REQUIRE(r.code == 0);
    Json j = parse(r);
    CHECK(j["state_operator"] == true);
    CHECK(j["strong"] == true);
    CHECK(j["faithful"] == false);
    CHECK(j["kernel"] == Json::array({0, 1, 2}));
    CHECK(j["law_failures"].empty());

    auto swap_path = write_temp("effalg_cli_swap.tau.json", R"({"tau": [0, 2, 1, 3]})");
    auto r2 = run_cli("check-tau --algebra " + fx("diamond.json") + " --tau " + swap_path);
    REQUIRE(r2.code == 1);
    Json j2 = parse(r2);
    CHECK(j2["state_operator"] == false);
    CHECK_FALSE(j2["violations"].empty());
}

TEST_CASE("quotient: diamond modulo the absorption kernel is the 2-chain") {
    auto r = run_cli("quotient --algebra " + fx("diamond.json") + " --tau " +
                     fx("diamond_absorb.tau.json"));
    REQUIRE(r.code == 0);
    Json j = parse(r);
    CHECK(j["algebra"]["n"] == 2);
    CHECK(j["class_of"] == Json::array({0, 0, 1, 1}));
    CHECK(j["representatives"] == Json::array({0, 2}));
    CHECK(j["tau"] == Json::array({0, 1}));
    CHECK(j["faithful"] == true);
}

TEST_CASE("luders: diagonal pinching reported with its image") {
    auto r = run_cli("luders --pvm " + fx("pinching2.pvm.json") + " --matrix " +
                     fx("offdiag2.matrix.json"));
    REQUIRE(r.code == 0);
    Json j = parse(r);
    CHECK(j["pvm_valid"] == true);
    CHECK(j["unital"] == true);
    CHECK(j["positive"] == true);
    CHECK(j["idempotent"] == true);
    CHECK(j["faithful"] == true);
    const auto& re = j["image"]["re"];
    CHECK(re[0][0].get<double>() == doctest::Approx(0.5));
    CHECK(re[1][1].get<double>() == doctest::Approx(0.5));
    CHECK(re[0][1].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("ks-check: frozen gaps at the fixture pair, then a seeded batch") {
    auto r = run_cli("ks-check --pvm " + fx("pinching2.pvm.json") + " --matrix " +
                     fx("offdiag2.matrix.json"));
    REQUIRE(r.code == 0);
    Json j = parse(r);
    CHECK(std::abs(j["lhs_gap"].get<double>()) <= 1e-9);
    CHECK(j["rhs_gap"].get<double>() == doctest::Approx(0.09).epsilon(1e-9));
    CHECK(j["pass"] == true);

    auto r2 = run_cli("ks-check --seed 7");
    REQUIRE(r2.code == 0);
    Json j2 = parse(r2);
    CHECK(j2["trials"] == 1000);
    CHECK(j2["worst_lhs_gap"].get<double>() >= -1e-9);
    CHECK(j2["worst_rhs_gap"].get<double>() >= -1e-9);
    CHECK(j2["pass"] == true);
}

TEST_CASE("support and decompose on the corner compression") {
    auto r = run_cli("support --matrix " + fx("corner2.map.json"));
    REQUIRE(r.code == 0);
    Json j = parse(r);
    CHECK(j["rank"] == 1);
    CHECK(j["support"]["re"][0][0].get<double>() == doctest::Approx(1.0));
    CHECK(j["support"]["re"][1][1].get<double>() == doctest::Approx(0.0));

    auto r2 = run_cli("decompose --matrix " + fx("corner2.map.json"));
    REQUIRE(r2.code == 0);
    Json j2 = parse(r2);
    CHECK(j2["domain_dimension"] == 2);
    CHECK(j2["recomposition_residual"].get<double>() <= 1e-8);
    // mu is the diagonal pinching: in superoperator form a projection onto
    // the two diagonal coordinates
    const auto& mu = j2["mu"]["matrix"];
    CHECK(mu[0][0].get<double>() == doctest::Approx(1.0));
    CHECK(mu[1][1].get<double>() == doctest::Approx(1.0));
    CHECK(mu[2][2].get<double>() == doctest::Approx(0.0));
    CHECK(mu[3][3].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("strong: witness for the straddle, clean pass for the collapse") {
    auto r = run_cli("strong --matrix " + fx("straddle3.T.json"));
    REQUIRE(r.code == 1);
    Json j = parse(r);
    CHECK(j["strong"] == false);
    REQUIRE(j.contains("witness"));
    const auto& w = j["witness"];
    CHECK(num_of(w["min"][0]) == doctest::Approx(0.0));
    CHECK(num_of(w["min"][1]) == doctest::Approx(0.0));
    CHECK(num_of(w["min"][2]) == doctest::Approx(0.5));
    CHECK(num_of(w["mapped"][0]) == doctest::Approx(0.0));
    CHECK(num_of(w["mapped"][2]) == doctest::Approx(0.0));

    auto r2 = run_cli("strong --matrix " + fx("collapse2.T.json"));
    REQUIRE(r2.code == 0);
    Json j2 = parse(r2);
    CHECK(j2["strong"] == true);
    CHECK_FALSE(j2.contains("witness"));
}

TEST_CASE("ce: stochastic and matrix payloads") {
    auto r = run_cli("ce --matrix " + fx("collapse2.T.json"));
    REQUIRE(r.code == 0);
    CHECK(parse(r)["conditional_expectation"] == true);

    auto r2 = run_cli("ce --matrix " + fx("straddle3.T.json"));
    REQUIRE(r2.code == 1);
    Json j2 = parse(r2);
    CHECK(j2["conditional_expectation"] == false);
    CHECK(j2.contains("witness"));

    auto r3 = run_cli("ce --matrix " + fx("corner2.map.json"));
    REQUIRE(r3.code == 0);
    Json j3 = parse(r3);
    CHECK(j3["conditional_expectation"] == true);
    CHECK(j3["basis_residual"].get<double>() <= 1e-9);
}

TEST_CASE("mvce: blockwise averages with and without null blocks") {
    auto r = run_cli("mvce --prob " + fx("uniform4.prob.json"));
    REQUIRE(r.code == 0);
    Json j = parse(r);
    CHECK(j["identity"] == true);
    const auto& e = j["expectation"];
    CHECK(num_of(e[0]) == doctest::Approx(0.5));
    CHECK(num_of(e[1]) == doctest::Approx(0.5));
    CHECK(num_of(e[2]) == doctest::Approx(1.0));
    CHECK(num_of(e[3]) == doctest::Approx(1.0));

    auto r2 = run_cli("mvce --prob " + fx("halfnull4.prob.json"));
    REQUIRE(r2.code == 0);
    Json j2 = parse(r2);
    CHECK(j2["identity"] == true);
    const auto& e2 = j2["expectation"];
    CHECK(num_of(e2[0]) == doctest::Approx(0.5));
    CHECK(num_of(e2[1]) == doctest::Approx(0.5));
    CHECK(num_of(e2[2]) == doctest::Approx(0.0));
    CHECK(num_of(e2[3]) == doctest::Approx(0.0));
}

TEST_CASE("reports are byte-stable across repeated runs") {
    auto a = run_cli("classify --algebra " + fx("mo2.json") + " --seed 5");
    auto b = run_cli("classify --algebra " + fx("mo2.json") + " --seed 5");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}

TEST_CASE("markdown format renders a headed bullet list") {
    auto r = run_cli("validate --algebra " + fx("diamond.json") + " --format markdown");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# validate", 0) == 0);
    CHECK(r.out.find("**valid**: true") != std::string::npos);
}
