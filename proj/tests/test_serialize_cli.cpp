#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "karoubi/cli.hpp"
#include "karoubi/serialize.hpp"

using namespace karoubi;
using serialize::Json;

namespace {

std::string write_temp(const std::string& name, const Json& j) {
  const std::string path = "/tmp/karoubi_test_" + name + ".json";
  std::ofstream f(path);
  f << j.dump();
  return path;
}

Json dephasing_choi_json() {
  Json j;
  j["dom"] = Json{{"dims", {2}}};
  j["cod"] = Json{{"dims", {2}}};
  j["repr"] = "choi";
  j["convention"] = Json{{"vectorization", "block-row-major"}, {"choi", "dom-tensor-cod"}};
  CMat choi = CMat::Zero(4, 4);
  choi(0, 0) = 1.0;
  choi(3, 3) = 1.0;
  j["choi"] = serialize::cmat_to_json(choi);
  return j;
}

Json dephasing_kraus_json() {
  Json j;
  j["dom"] = Json{{"dims", {2}}};
  j["cod"] = Json{{"dims", {2}}};
  j["repr"] = "kraus";
  j["convention"] = Json{{"vectorization", "block-row-major"}, {"choi", "dom-tensor-cod"}};
  CMat k0 = CMat::Zero(2, 2), k1 = CMat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(1, 1) = 1.0;
  j["kraus"] = Json::array({serialize::cmat_to_json(k0), serialize::cmat_to_json(k1)});
  return j;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("channel files parse and cross-validate") {
  SUBCASE("a dephasing choi file gives a cp, tp channel") {
    const auto in = serialize::parse_morphism_json(dephasing_choi_json());
    REQUIRE(in.is_channel());
    const auto checks = quant::validate_channel(*in.channel, 1e-9);
    CHECK(checks.cp);
    CHECK(checks.tp);
  }
  SUBCASE("choi and kraus files agree to 1e-12") {
    const auto a = serialize::parse_morphism_json(dephasing_choi_json());
    const auto b = serialize::parse_morphism_json(dephasing_kraus_json());
    CHECK(a.channel->distance(*b.channel) <= 1e-12);
  }
  SUBCASE("a wrong-size choi is a shape error") {
    Json j = dephasing_choi_json();
    j["choi"] = serialize::cmat_to_json(CMat::Zero(3, 3));
    CHECK_THROWS_WITH_AS(serialize::parse_morphism_json(j), doctest::Contains("ShapeError"),
                         Error);
  }
  SUBCASE("a missing repr tag is a convention error") {
    Json j = dephasing_choi_json();
    j.erase("repr");
    CHECK_THROWS_WITH_AS(serialize::parse_morphism_json(j),
                         doctest::Contains("ConventionError"), Error);
  }
  SUBCASE("a wrong convention value is rejected") {
    Json j = dephasing_choi_json();
    j["convention"]["vectorization"] = "column-major";
    CHECK_THROWS_WITH_AS(serialize::parse_morphism_json(j),
                         doctest::Contains("ConventionError"), Error);
  }
  SUBCASE("disagreeing choi and superop payloads are rejected") {
    Json j = dephasing_choi_json();
    j["superop"] = serialize::cmat_to_json(CMat::Identity(4, 4));
    CHECK_THROWS_WITH_AS(serialize::parse_morphism_json(j), doctest::Contains("ShapeError"),
                         Error);
  }
  SUBCASE("consistent dual payloads are accepted") {
    Json j = dephasing_choi_json();
    CMat s = CMat::Zero(4, 4);
    s(0, 0) = 1.0;
    s(3, 3) = 1.0;
    j["superop"] = serialize::cmat_to_json(s);
    CHECK_NOTHROW(serialize::parse_morphism_json(j));
  }
  SUBCASE("semiring payloads give matrix morphisms") {
    Json j;
    j["semiring"] = "boolean";
    j["matrix"] = Json::array({Json::array({1, 1}), Json::array({0, 1})});
    const auto in = serialize::parse_morphism_json(j);
    CHECK(!in.is_channel());
    CHECK(in.mat_morphism->theory().name() == "FRel");
  }
}

TEST_CASE("channel serialisation round trips") {
  Rng rng(3);
  quant::CompositeSystem s({2, 1});
  const quant::Channel c = quant::random_cp(s, s, rng);
  for (const std::string repr : {"superop", "choi"}) {
    const Json j = serialize::channel_to_json(c, repr);
    const auto back = serialize::parse_morphism_json(j);
    REQUIRE(back.is_channel());
    CHECK(back.channel->distance(c) < 1e-10);
  }
}

TEST_CASE("cli: check on the dephasing file") {
  const auto path = write_temp("dephasing", dephasing_choi_json());
  const auto r = run_cli({"check", "--in", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("idempotent yes") != std::string::npos);
}

TEST_CASE("cli: split emits a decomposition that re-verifies") {
  const auto path = write_temp("dephasing2", dephasing_choi_json());
  const std::string dec_path = "/tmp/karoubi_test_dec.json";
  const auto r = run_cli({"split", "--in", path, "--out", dec_path});
  CHECK(r.code == 0);
  CHECK(r.out.find("2 blocks") != std::string::npos);

  const auto r2 = run_cli({"check", "--in", path, "--verify-decomposition", dec_path});
  CHECK(r2.code == 0);

  // the q channel of the decomposition passes idempotent + causal checks
  const auto dec = serialize::decomposition_from_json(serialize::load_json_file(dec_path));
  Json qj = serialize::channel_to_json(dec.q);
  const auto qpath = write_temp("q", qj);
  const auto r3 = run_cli({"check", "--in", qpath});
  CHECK(r3.code == 0);
  std::remove(dec_path.c_str());
}

TEST_CASE("cli: identical invocations produce byte-identical JSON") {
  const auto path = write_temp("dephasing3", dephasing_choi_json());
  const auto a = run_cli({"split", "--in", path, "--json"});
  const auto b = run_cli({"split", "--in", path, "--json"});
  CHECK(a.out == b.out);
  const auto c = run_cli({"demo-equiv", "--seed", "7", "--dims", "2,2", "--json"});
  const auto d = run_cli({"demo-equiv", "--seed", "7", "--dims", "2,2", "--json"});
  CHECK(c.out == d.out);
}

TEST_CASE("cli: relsearch reports the counterexample faithfully") {
  const auto r = run_cli({"relsearch", "--p", "[[1,1],[0,1]]", "--max", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("no splitting up to dim 4") != std::string::npos);
  CHECK(r.out.find("causal yes") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  SUBCASE("unknown flags exit 2") {
    const auto r = run_cli({"split", "--whatever"});
    CHECK(r.code == 2);
  }
  SUBCASE("missing files exit 2") {
    const auto r = run_cli({"check", "--in", "/tmp/definitely_missing_karoubi.json"});
    CHECK(r.code == 2);
  }
  SUBCASE("non-idempotent input to split exits 1") {
    Json j;
    j["dom"] = Json{{"dims", {2}}};
    j["cod"] = Json{{"dims", {2}}};
    j["repr"] = "superop";
    j["convention"] = Json{{"vectorization", "block-row-major"}, {"choi", "dom-tensor-cod"}};
    CMat x(2, 2);
    x << 0, 1, 1, 0;
    j["superop"] = serialize::cmat_to_json(quant::pure_embed(quant::PureMap{x}).superop());
    const auto path = write_temp("xgate", j);
    const auto r = run_cli({"split", "--in", path});
    CHECK(r.code == 1);
  }
  SUBCASE("no subcommand exits 2") {
    const auto r = run_cli({});
    CHECK(r.code == 2);
  }
}

TEST_CASE("cli: flor handles the inline example") {
  const auto r = run_cli({"flor", "--p", "[[1,1],[0,0]]"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1 rank-one pair") != std::string::npos);
}

TEST_CASE("decomposition JSON round trip") {
  const auto [p, planted] = decompose::random_idempotent_instance({{2, 1}, {1, 1}}, 9);
  const auto dec = decompose::decompose_cptp_idempotent(p);
  const Json j = serialize::decomposition_to_json(dec);
  const auto back = serialize::decomposition_from_json(j);
  CHECK(back.q.distance(dec.q) < 1e-12);
  CHECK(back.blocks.size() == dec.blocks.size());
  CHECK(verify_decomposition(p, back, 1e-9).pass);
}

TEST_CASE("frobenius JSON round trip") {
  const auto fs = leaks::pants_delta(2);
  const auto back = serialize::frobenius_from_json(serialize::frobenius_to_json(fs));
  CHECK(back.dim == fs.dim);
  CHECK((back.delta - fs.delta).cwiseAbs().maxCoeff() == 0.0);
}
