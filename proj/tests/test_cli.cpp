#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include <unistd.h>

#include "oracles.hpp"
#include "rrb/cli.hpp"
#include "rrb/io.hpp"
#include "rrb/synth.hpp"

using namespace rrb;
namespace fs = std::filesystem;
using io::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rrb_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) { return io::read_text_file(path); }

}  // namespace

TEST_CASE("argument helpers") {
  const auto r = cli::parse_range("0.9:1.0:11");
  REQUIRE(r.size() == 11);
  CHECK(r.front() == 0.9);
  CHECK(r.back() == 1.0);
  CHECK(r[5] == doctest::Approx(0.95));
  CHECK(cli::parse_range("0.5:0.5:1") == std::vector<double>{0.5});
  CHECK_THROWS_AS(cli::parse_range("0.9:1.0"), ValidationError);
  CHECK_THROWS_AS(cli::parse_range("a:1:3"), ValidationError);
  CHECK_THROWS_AS(cli::parse_range("0:1:0"), ValidationError);
  CHECK(cli::parse_lengths("1,2,4") == std::vector<int>{1, 2, 4});
  CHECK_THROWS_AS(cli::parse_lengths("1,,4"), ValidationError);
  CHECK_THROWS_AS(cli::parse_lengths("1,0"), ValidationError);
  CHECK_THROWS_AS(cli::parse_lengths("1,2x"), ValidationError);
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("JSON round trips") {
  std::mt19937_64 gen(1);
  const CMatrix u = oracle::random_unitary(4, gen);
  CHECK(io::matrix_from_json(json::parse(io::to_json(u).dump())) == u);

  const GateSequence seq{2, {NativeGate::rz(0, 0.123456789012345), NativeGate::rx(1, -M_PI / 2), NativeGate::cz(0, 1)}};
  CHECK(io::sequence_from_json(json::parse(io::to_json(seq).dump())) == seq);
  const auto j = io::to_json(seq);
  CHECK(j["gates"][2]["kind"] == "CZ");
  CHECK(j["gates"][2]["q"] == json::array({0, 1}));

  NoiseModel m;
  m.cz = ChannelSpec::composite({ChannelSpec::depolarizing(0.98), ChannelSpec::amplitude_damping(0.01)});
  m.spam = ChannelSpec::depolarizing(0.9, Support::All);
  m.layer = ChannelSpec::unitary_conjugation(oracle::pauli('X'));
  const auto back = io::noise_model_from_json(json::parse(io::to_json(m).dump()));
  CHECK(io::to_json(back) == io::to_json(m));

  TwoQubitParams p;
  p.a.phi = 0.1;
  p.d.omega = -2.0;
  p.alpha = 0.3;
  p.global_phase = 1.0;
  CHECK(io::to_json(io::two_params_from_json(io::to_json(p))) == io::to_json(p));

  RBResult r;
  r.config.lengths = {1, 2};
  r.config.seed = 99;
  r.lengths = {{1, 0.9, 0.01, {0.9, 0.91}, {0.9, 0.9}}, {2, 0.8, 0.02, {0.8, 0.81}, {0.8, 0.8}}};
  CHECK(io::to_json(io::rb_result_from_json(json::parse(io::to_json(r).dump()))) == io::to_json(r));

  CHECK(io::format_double(0.1) == "0.1");
  CHECK(std::stod(io::format_double(M_PI)) == M_PI);
}

TEST_CASE("JSON readers reject bad input") {
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"dim":2,"re":[[1,0]],"im":[[0,0],[0,0]]})")), ValidationError);
  CHECK_THROWS_AS(io::sequence_from_json(json::parse(R"({"n_qubits":1,"gates":[{"kind":"RX","angle":0.3,"q":0}]})")),
                  ValidationError);
  CHECK_THROWS_AS(io::sequence_from_json(json::parse(R"({"n_qubits":1,"gates":[{"kind":"H","q":0}]})")),
                  ValidationError);
  CHECK_THROWS_AS(io::sequence_from_json(json::parse(R"({"n_qubits":1,"gates":[{"kind":"CZ","q":[0,1]}]})")),
                  ValidationError);
  const char* missing_spam = R"({"RZ":{"kind":"identity"},"RX":{"kind":"identity"},"CZ":{"kind":"identity"}})";
  CHECK_THROWS_AS(io::noise_model_from_json(json::parse(missing_spam)), ValidationError);
  const char* extra = R"({"RZ":{"kind":"identity"},"RX":{"kind":"identity"},"CZ":{"kind":"identity"},
                          "SPAM":{"kind":"identity"},"T":{"kind":"identity"}})";
  CHECK_THROWS_AS(io::noise_model_from_json(json::parse(extra)), ValidationError);
  CHECK_THROWS_AS(io::channel_from_json(json::parse(R"({"kind":"amplitude_damping","epsilon":-0.1})")),
                  ValidationError);
  CHECK_THROWS_AS(io::channel_from_json(json::parse(R"({"kind":"depolarizing","lambda":0.9,"q":"some"})")),
                  ValidationError);
  CHECK_THROWS_AS(io::channel_from_json(json::parse(R"({"kind":"thermal"})")), ValidationError);

  // the documented example parses
  const auto spec = io::channel_from_json(json::parse(
      R"({"kind":"composite","parts":[{"kind":"depolarizing","lambda":0.02,"q":"each"},{"kind":"amplitude_damping","epsilon":0.01,"q":"each"}]})"));
  CHECK(spec.parts.size() == 2);
}

TEST_CASE("version and usage") {
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.rfind("rrb 0.1.0 (git ", 0) == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  const auto help = run({"rb", "run", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("--sequences") != std::string::npos);
}

TEST_CASE("seed policy") {
  TempDir dir;
  const auto no_seed = run({"haar", "sample", "--count", "3", "--out", dir / "a.json"});
  CHECK(no_seed.code == 1);
  CHECK(no_seed.err.find("--seed") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "a.json"));

  CHECK(run({"haar", "sample", "--count", "3", "--out", dir / "a.json", "--seed", "1", "--entropy"}).code == 1);

  REQUIRE(run({"haar", "sample", "--count", "3", "--out", dir / "a.json", "--entropy"}).code == 0);
  const auto m = io::read_json_file(dir / "a.json.manifest.json");
  CHECK(m["seed_source"] == "entropy");
  CHECK(io::read_json_file(dir / "a.json")["provenance"]["seed"] == m["seed"]);
}

TEST_CASE("exit codes and diagnostics") {
  TempDir dir;
  io::write_text_file(dir / "broken.json", "{ not json");
  const auto broken = run({"decompose", "--in", dir / "broken.json", "--seed", "1"});
  CHECK(broken.code == 1);
  CHECK(broken.out.empty());
  CHECK(broken.err.find("malformed JSON") != std::string::npos);

  CHECK(run({"rb", "run", "--qubits", "3", "--seed", "1", "--out", dir / "r.json"}).code == 1);
  CHECK(run({"rb", "run", "--lengths", "1,x", "--seed", "1", "--out", dir / "r.json"}).code == 1);
  CHECK(run({"rb", "run", "--frobnicate", "--seed", "1", "--out", dir / "r.json"}).code == 1);
  CHECK(run({"haar", "verify", "--test", "bloch", "--count", "10", "--seed", "1"}).code == 1);
  CHECK(run({"noise", "scan", "--lambda", "0.9:1.2:2", "--seed", "1"}).code == 1);

  io::write_text_file(dir / "u.json", io::to_json(CMatrix(CMatrix::Ones(2, 2))).dump());
  const auto nonunitary = run({"decompose", "--in", dir / "u.json", "--seed", "1"});
  CHECK(nonunitary.code == 1);
  CHECK(nonunitary.err.find("unitary") != std::string::npos);
  // one line per diagnostic
  CHECK(std::count(nonunitary.err.begin(), nonunitary.err.end(), '\n') == 1);
}

TEST_CASE("decompose") {
  TempDir dir;
  std::mt19937_64 gen(5);
  const CMatrix u = oracle::random_unitary(4, gen);
  io::write_text_file(dir / "u.json", io::to_json(u).dump());
  REQUIRE(run({"decompose", "--in", dir / "u.json", "--out", dir / "p.json", "--seed", "1"}).code == 0);
  const auto p = io::read_json_file(dir / "p.json");
  const auto params = io::two_params_from_json(p);
  CHECK(distance_up_to_global_phase(reconstruct_2q(params).matrix(), u) < 1e-8);
  const auto seq = io::sequence_from_json(p["sequence"]);
  CHECK(seq.size() == kTwoQubitTemplateLength);
  CHECK(distance_up_to_global_phase(sequence_unitary(seq).matrix(), u) < 1e-8);
}

TEST_CASE("rb run then fit") {
  TempDir dir;
  REQUIRE(run({"rb", "run", "--qubits", "2", "--lengths", "1,2,4,8,16", "--sequences", "10", "--shots", "200",
               "--seed", "7", "--out", dir / "r.json"})
              .code == 0);
  const auto fitted = run({"fit", "--in", dir / "r.json", "--seed", "7"});
  REQUIRE(fitted.code == 0);
  const auto f = json::parse(fitted.out);
  const double p = f["p"], se = f["se_p"];
  CHECK(std::abs(p - 1.0) <= se + 1e-12);

  const auto result = io::read_json_file(dir / "r.json");
  CHECK(result["config"]["seed"] == 7);
  CHECK(result["provenance"]["version"] == "0.1.0");
  CHECK(result["provenance"]["manifest"] == "r.json.manifest.json");
  for (double mean : result["mean"]) CHECK(mean == 1.0);
}

TEST_CASE("rb run with default settings under CZ depolarizing") {
  TempDir dir;
  io::write_text_file(dir / "noise.json", R"({"RZ":{"kind":"identity"},"RX":{"kind":"identity"},
      "CZ":{"kind":"depolarizing","lambda":0.99,"q":"each"},"SPAM":{"kind":"identity"}})");
  REQUIRE(run({"rb", "run", "--noise", dir / "noise.json", "--lengths", "1,2,4,6,10,16,26", "--seed", "11", "--out",
               dir / "r.json"})
              .code == 0);
  const auto r = io::read_json_file(dir / "r.json");
  CHECK(r["config"]["sequences"] == 200);
  CHECK(r["config"]["shots"] == 800);
  REQUIRE(run({"fit", "--in", dir / "r.json", "--out", dir / "f.json", "--seed", "11"}).code == 0);
  const auto f = io::read_json_file(dir / "f.json");
  CHECK(f["weights"] == "inverse_variance");
  CHECK(f["degenerate"] == false);
  const double p = f["p"], se = f["se_p"];
  CHECK(std::isfinite(se));
  CHECK(se > 0.0);
  CHECK(p < 1.0);
  CHECK(p > 0.9);
}

TEST_CASE("haar verify reports") {
  const auto spacing = run({"haar", "verify", "--test", "spacing", "--qubits", "2", "--count", "5000", "--seed", "2"});
  REQUIRE(spacing.code == 0);
  const auto s = json::parse(spacing.out);
  CHECK(s["pass"] == true);
  CHECK(s["test"] == "spacing");

  const auto bloch = json::parse(run({"haar", "verify", "--test", "bloch", "--count", "5000", "--seed", "2"}).out);
  CHECK(bloch["pass"] == true);
  const auto frame = json::parse(run({"haar", "verify", "--test", "frame", "--count", "2000", "--seed", "2"}).out);
  CHECK(frame["t1"]["value"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("manifests describe their outputs") {
  TempDir dir;
  REQUIRE(run({"haar", "sample", "--qubits", "2", "--count", "4", "--seed", "3", "--out", dir / "s.json", "--threads",
               "2"})
              .code == 0);
  const auto m = io::read_json_file(dir / "s.json.manifest.json");
  CHECK(m["command"] == "haar sample");
  CHECK(m["seed"] == 3);
  CHECK(m["config"]["count"] == "4");
  CHECK(m["config"]["qubits"] == "2");
  CHECK(m["threads"] == 2);
  REQUIRE(m["outputs"].size() == 1);
  CHECK(m["outputs"][0]["sha256"] == cli::sha256_hex(slurp(dir / "s.json")));
  CHECK(io::read_json_file(dir / "s.json")["provenance"]["manifest"] == "s.json.manifest.json");

  const auto samples = io::read_json_file(dir / "s.json")["samples"];
  REQUIRE(samples.size() == 4);
  for (const auto& smp : samples) {
    const auto seq = io::sequence_from_json(smp["sequence"]);
    CHECK(distance_up_to_global_phase(sequence_unitary(seq).matrix(), io::matrix_from_json(smp["unitary"])) < 1e-10);
  }

  REQUIRE(run({"noise", "scan", "--lambda", "1:1:1", "--epsilon", "0:0.1:2", "--pairs", "2", "--seed", "3", "--out",
               dir / "scan.csv", "--manifest", dir / "scan.manifest.json"})
              .code == 0);
  CHECK(fs::exists(dir / "scan.manifest.json"));
  const auto csv = slurp(dir / "scan.csv");
  CHECK(csv.rfind("lambda,epsilon,mean_diamond,stderr\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("outputs are byte-identical across thread counts") {
  TempDir dir;
  std::mt19937_64 gen(2);
  io::write_text_file(dir / "u.json", io::to_json(CMatrix(oracle::random_unitary(4, gen))).dump());
  io::write_text_file(dir / "noise.json", R"({"RZ":{"kind":"identity"},"RX":{"kind":"amplitude_damping","epsilon":0.01},
      "CZ":{"kind":"depolarizing","lambda":0.97},"SPAM":{"kind":"depolarizing","lambda":0.95}})");
  const std::vector<std::vector<std::string>> commands = {
      {"haar", "sample", "--qubits", "2", "--count", "20", "--seed", "5", "--out", "OUT"},
      {"haar", "verify", "--test", "spacing", "--count", "1000", "--seed", "5", "--out", "OUT"},
      {"haar", "verify", "--test", "frame", "--count", "1000", "--seed", "5", "--out", "OUT"},
      {"decompose", "--in", dir / "u.json", "--seed", "5", "--out", "OUT"},
      {"rb", "run", "--lengths", "1,3,9", "--sequences", "6", "--shots", "50", "--noise", dir / "noise.json", "--seed",
       "5", "--out", "OUT"},
      {"rb", "run", "--scheme", "clifford", "--lengths", "1,3,9", "--sequences", "6", "--seed", "5", "--out", "OUT"},
      {"noise", "scan", "--lambda", "0.95:1:2", "--epsilon", "0:0.1:2", "--pairs", "2", "--seed", "5", "--out", "OUT"},
  };
  int k = 0;
  for (auto cmd : commands) {
    std::string first;
    for (const char* threads : {"1", "3"}) {
      auto args = cmd;
      const fs::path sub = dir.path / ("threads" + std::string(threads));
      fs::create_directories(sub);
      const std::string out = (sub / ("out" + std::to_string(k))).string();
      for (auto& a : args)
        if (a == "OUT") a = out;
      args.push_back("--threads");
      args.push_back(threads);
      REQUIRE(run(args).code == 0);
      const std::string content = slurp(out);
      if (first.empty())
        first = content;
      else
        CHECK(content == first);
    }
    ++k;
  }
}
