#include "rrb/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "rrb/analysis.hpp"
#include "rrb/haar.hpp"
#include "rrb/io.hpp"
#include "rrb/parallel.hpp"
#include "rrb/rb.hpp"
#include "rrb/synth.hpp"
#include "rrb/version.hpp"

namespace rrb::cli {

using io::json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::vector<double> parse_range(const std::string& spec) {
  const auto bad = [&] { return ValidationError("range \"" + spec + "\" must look like lo:hi:n, e.g. 0.9:1.0:11"); };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw bad();
  double lo, hi;
  long n;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw bad();
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw bad();
    n = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (n < 1) throw ValidationError("range \"" + spec + "\" needs at least one point");
  if (n == 1) {
    if (lo != hi) throw ValidationError("range \"" + spec + "\" has one point but lo != hi");
    return {lo};
  }
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    v[static_cast<std::size_t>(k)] = k == n - 1 ? hi : lo * (1.0 - t) + hi * t;
  }
  return v;
}

std::vector<int> parse_lengths(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(p, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != p.size()) throw ValidationError("lengths \"" + spec + "\" must be comma-separated integers");
    if (v < 1 || v > 100000) throw ValidationError("sequence length " + p + " out of range 1..100000");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ValidationError("lengths must not be empty");
  return out;
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Common {
  std::optional<std::uint64_t> seed;
  bool entropy = false;
  int threads = 0;
  std::string manifest;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master seed (required unless --entropy)");
  sub->add_flag("--entropy", c.entropy, "Draw the master seed from the system entropy source");
  sub->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")->check(CLI::Range(1, 1024));
  sub->add_option("--manifest", c.manifest, "Manifest path (default: <out>.manifest.json)");
}

// Bookkeeping for one command: seed, outputs, manifest.
class Run {
 public:
  Run(const CLI::App* sub, std::string command, const Common& c, std::vector<std::string> argv)
      : sub_(sub), command_(std::move(command)), common_(c), argv_(std::move(argv)), started_(utc_now()) {
    if (c.seed && c.entropy) throw ValidationError("pass either --seed or --entropy, not both");
    if (!c.seed && !c.entropy) throw ValidationError("--seed is required (or pass --entropy to draw one)");
    if (c.seed) {
      seed_ = *c.seed;
    } else {
      std::random_device rd;
      seed_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    set_thread_count(c.threads > 0 ? c.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  }

  std::uint64_t seed() const { return seed_; }

  /// Manifest path for a command whose main output is `out` ("" = stdout).
  std::string manifest_path(const std::string& out) const {
    if (!common_.manifest.empty()) return common_.manifest;
    if (!out.empty()) return out + ".manifest.json";
    return {};
  }

  std::string manifest_name(const std::string& out) const {
    const std::string p = manifest_path(out);
    return p.empty() ? std::string() : std::filesystem::path(p).filename().string();
  }

  json provenance(const std::string& out) const {
    json j{{"tool", "rrb"}, {"version", kVersion}, {"git", kGitHash}, {"command", command_}, {"seed", seed_}};
    const std::string m = manifest_name(out);
    if (!m.empty()) j["manifest"] = m;
    return j;
  }

  void write(const std::string& path, const std::string& content) {
    io::write_text_file(path, content);
    outputs_.push_back({{"path", path}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }

  void finish(const std::string& out) const {
    const std::string path = manifest_path(out);
    if (path.empty()) return;
    json config = json::object();
    for (const CLI::Option* opt : sub_->get_options()) {
      const auto& names = opt->get_lnames();
      if (names.empty() || names[0] == "help") continue;
      if (opt->count() == 0) {
        config[names[0]] = opt->get_default_str();
      } else if (opt->get_expected_max() == 0) {
        config[names[0]] = true;
      } else {
        const auto& r = opt->results();
        config[names[0]] = r.size() == 1 ? json(r[0]) : json(r);
      }
    }
    json m{{"command", command_},
           {"argv", argv_},
           {"config", config},
           {"seed", seed_},
           {"seed_source", common_.seed ? "flag" : "entropy"},
           {"threads", thread_count()},
           {"version", kVersion},
           {"git", kGitHash},
           {"started_at", started_},
           {"finished_at", utc_now()},
           {"outputs", outputs_}};
    io::write_text_file(path, io::dump(m));
  }

 private:
  const CLI::App* sub_;
  std::string command_;
  Common common_;
  std::vector<std::string> argv_;
  std::string started_;
  std::uint64_t seed_ = 0;
  json outputs_ = json::array();
};

void emit(Run& run, const std::string& out_path, const std::string& content, std::ostream& out) {
  if (out_path.empty())
    out << content;
  else
    run.write(out_path, content);
}

// ---------------------------------------------------------------------------

struct HaarSampleOpts {
  int qubits = 1;
  std::size_t count = 0;
  std::string out;
};

void haar_sample(Run& run, const HaarSampleOpts& o) {
  const auto circuits = sample_haar_circuits(o.qubits, o.count, RandomSource(run.seed()));
  json samples = json::array();
  for (const auto& c : circuits) samples.push_back({{"sequence", io::to_json(c.sequence)}, {"unitary", io::to_json(c.unitary.matrix())}});
  json j{{"provenance", run.provenance(o.out)}, {"n_qubits", o.qubits}, {"count", o.count}, {"samples", samples}};
  run.write(o.out, io::dump(j));
}

struct HaarVerifyOpts {
  std::string test;
  std::size_t count = 0;
  int qubits = 0;
  double tv_max = 0.0;  // 0: 0.02 at 10^4 samples, widened as 1/sqrt(n) below
  std::string out;
};

void haar_verify(Run& run, const HaarVerifyOpts& o, std::ostream& out) {
  const RandomSource master(run.seed());
  json report;
  if (o.test == "bloch") {
    if (o.qubits != 0 && o.qubits != 1) throw ValidationError("--test bloch works on 1 qubit");
    const auto circuits = sample_haar_circuits(1, o.count, master);
    std::vector<CVector> states;
    states.reserve(circuits.size());
    for (const auto& c : circuits) states.push_back(c.unitary.matrix().col(0));
    report = io::to_json(verify_bloch_uniformity(states));
  } else if (o.test == "spacing") {
    const int n = o.qubits == 0 ? 2 : o.qubits;
    const auto circuits = sample_haar_circuits(n, o.count, master);
    std::vector<Unitary> us;
    for (const auto& c : circuits) us.push_back(c.unitary);
    const auto r = eigenphase_spacing_stats(us, master.substream(0xfeedULL << 32));
    const double tv_max =
        o.tv_max > 0.0 ? o.tv_max : 0.02 * std::sqrt(std::max(1.0, 1e4 / static_cast<double>(o.count)));
    report = io::to_json(r);
    report["tv_max"] = tv_max;
    report["pass"] = !r.degenerate && r.total_variation <= tv_max;
  } else {
    const int n = o.qubits == 0 ? 2 : o.qubits;
    const auto circuits = sample_haar_circuits(n, o.count, master);
    std::vector<Unitary> us;
    for (const auto& c : circuits) us.push_back(c.unitary);
    const auto f1 = frame_potential(us, 1);
    const auto f2 = frame_potential(us, 2);
    const bool p1 = std::abs(f1.value - 1.0) <= 0.02, p2 = std::abs(f2.value - 2.0) <= 0.1;
    report = {{"test", "frame"},
              {"n_qubits", n},
              {"samples", us.size()},
              {"pairs", f1.pairs},
              {"t1", {{"value", f1.value}, {"target", 1.0}, {"tolerance", 0.02}, {"pass", p1}}},
              {"t2", {{"value", f2.value}, {"target", 2.0}, {"tolerance", 0.1}, {"pass", p2}}},
              {"pass", p1 && p2}};
  }
  report["provenance"] = run.provenance(o.out);
  emit(run, o.out, io::dump(report), out);
}

struct DecomposeOpts {
  std::string in;
  std::string out;
};

void decompose(Run& run, const DecomposeOpts& o, std::ostream& out) {
  const CMatrix m = io::matrix_from_json(io::read_json_file(o.in));
  if (m.rows() != 2 && m.rows() != 4) throw ValidationError(o.in + ": decompose takes a 2x2 or 4x4 unitary");
  const Unitary u(m, 1e-8);
  json j;
  GateSequence seq;
  if (m.rows() == 2) {
    const auto p = decompose_1q(u);
    j = io::to_json(p);
    seq = single_qubit_template(p.phi, p.theta, p.omega);
  } else {
    const auto p = decompose_2q(u);
    j = io::to_json(p);
    seq = two_qubit_template(p);
  }
  j["dim"] = m.rows();
  j["sequence"] = io::to_json(seq);
  j["reconstruction_distance"] = distance_up_to_global_phase(sequence_unitary(seq), u);
  j["provenance"] = run.provenance(o.out);
  emit(run, o.out, io::dump(j), out);
}

struct RbRunOpts {
  int qubits = 2;
  std::string scheme = "restricted";
  std::string lengths;
  std::size_t sequences = 200;
  std::size_t shots = 800;
  std::string noise;
  std::string out;
};

void rb_run(Run& run, const RbRunOpts& o) {
  RBConfig cfg;
  cfg.n_qubits = o.qubits;
  cfg.scheme = scheme_from_string(o.scheme);
  if (!o.lengths.empty()) cfg.lengths = parse_lengths(o.lengths);
  cfg.sequences = o.sequences;
  cfg.shots = o.shots;
  if (!o.noise.empty()) cfg.noise = io::noise_model_from_json(io::read_json_file(o.noise));
  cfg.seed = run.seed();
  json j = io::to_json(run_rb(cfg));
  j["provenance"] = run.provenance(o.out);
  run.write(o.out, io::dump(j));
}

struct FitOpts {
  std::string in;
  std::string out;
};

void fit(Run& run, const FitOpts& o, std::ostream& out) {
  const RBResult r = io::rb_result_from_json(io::read_json_file(o.in));
  const auto pts = decay_points(r);
  json j = io::to_json(fit_exponential(pts));
  j["weights"] = pts.front().weight == 1.0 && pts.back().weight == 1.0 ? "uniform" : "inverse_variance";
  j["input"] = std::filesystem::path(o.in).filename().string();
  j["provenance"] = run.provenance(o.out);
  emit(run, o.out, io::dump(j), out);
}

struct ScanOpts {
  std::string lambda = "0.9:1.0:11";
  std::string epsilon = "0.0:0.5:11";
  std::size_t pairs = 10;
  std::string convention = "retention";
  std::string out;
};

void noise_scan(Run& run, const ScanOpts& o, std::ostream& out) {
  const auto lambdas = parse_range(o.lambda);
  const auto epsilons = parse_range(o.epsilon);
  const auto conv = o.convention == "strength" ? LambdaConvention::Strength : LambdaConvention::Retention;
  const auto grid = gate_dependence_scan(lambdas, epsilons, o.pairs, RandomSource(run.seed()), conv);
  emit(run, o.out, io::scan_csv(grid), out);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restricted randomized benchmarking on a simulated noisy device", "rrb"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  bool version = false;
  app.add_flag("--version", version, "Print version and git hash");

  Common common;
  std::string command;

  auto* haar = app.add_subcommand("haar", "Haar-random fixed-depth circuits");
  haar->require_subcommand(1);
  HaarSampleOpts hs;
  auto* hsample = haar->add_subcommand("sample", "Write Haar-random template circuits");
  hsample->add_option("--qubits", hs.qubits, "1 or 2")->check(CLI::IsMember({1, 2}));
  hsample->add_option("--count", hs.count, "Number of circuits")->required()->check(CLI::Range(1, 10000000));
  hsample->add_option("--out", hs.out, "Output JSON")->required();
  add_common(hsample, common);

  HaarVerifyOpts hv;
  auto* hverify = haar->add_subcommand("verify", "Statistical checks of the sampler (JSON report)");
  hverify->add_option("--test", hv.test, "bloch, spacing or frame")->required()->check(CLI::IsMember({"bloch", "spacing", "frame"}));
  hverify->add_option("--count", hv.count, "Number of samples")->required()->check(CLI::Range(1000, 10000000));
  hverify->add_option("--qubits", hv.qubits, "1 or 2 (bloch: 1, others default 2)")->check(CLI::IsMember({1, 2}));
  hverify->add_option("--tv-max", hv.tv_max, "Spacing test: largest accepted total variation (default 0.02 at >= 10^4 samples, 0.02*sqrt(1e4/count) below)");
  hverify->add_option("--out", hv.out, "Write the report here instead of standard output");
  add_common(hverify, common);

  DecomposeOpts dc;
  auto* dec = app.add_subcommand("decompose", "Decompose a 2x2 or 4x4 unitary into template parameters");
  dec->add_option("--in", dc.in, "Matrix JSON")->required();
  dec->add_option("--out", dc.out, "Parameter JSON (default: standard output)");
  add_common(dec, common);

  auto* rb = app.add_subcommand("rb", "Randomized benchmarking");
  rb->require_subcommand(1);
  RbRunOpts rr;
  auto* rbrun = rb->add_subcommand("run", "Simulate an RB experiment");
  rbrun->add_option("--qubits", rr.qubits, "1 or 2")->check(CLI::IsMember({1, 2}));
  rbrun->add_option("--scheme", rr.scheme, "restricted or clifford")->check(CLI::IsMember({"restricted", "clifford"}));
  rbrun->add_option("--lengths", rr.lengths, "Comma-separated sequence lengths (default 1,2,4,6,10,16,26,42,68,110)");
  rbrun->add_option("--sequences", rr.sequences, "Sequences per length")->check(CLI::Range(1, 1000000));
  rbrun->add_option("--shots", rr.shots, "Shots per sequence")->check(CLI::Range(1, 100000000));
  rbrun->add_option("--noise", rr.noise, "Noise model JSON (default: noiseless)");
  rbrun->add_option("--out", rr.out, "Result JSON")->required();
  add_common(rbrun, common);

  FitOpts ft;
  auto* fitc = app.add_subcommand("fit", "Fit A + B p^m to an RB result");
  fitc->add_option("--in", ft.in, "RB result JSON")->required();
  fitc->add_option("--out", ft.out, "Fit JSON (default: standard output)");
  add_common(fitc, common);

  auto* noise = app.add_subcommand("noise", "Noise-model studies");
  noise->require_subcommand(1);
  ScanOpts sc;
  auto* scan = noise->add_subcommand("scan", "Gate-dependence scan of effective noise channels (CSV)");
  scan->add_option("--lambda", sc.lambda, "Depolarizing grid lo:hi:n");
  scan->add_option("--epsilon", sc.epsilon, "Amplitude-damping grid lo:hi:n");
  scan->add_option("--pairs", sc.pairs, "Circuit pairs per cell")->check(CLI::Range(1, 100000));
  scan->add_option("--lambda-convention", sc.convention, "retention (1 = noiseless) or strength (0 = noiseless)")
      ->check(CLI::IsMember({"retention", "strength"}));
  scan->add_option("--out", sc.out, "Output CSV (default: standard output)");
  add_common(scan, common);

  // --version short-circuits the subcommand requirement
  for (const auto& a : args)
    if (a == "--version") {
      out << "rrb " << kVersion << " (git " << kGitHash << ")\n";
      return kExitOk;
    }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (hsample->parsed()) {
      Run run(hsample, "haar sample", common, args);
      haar_sample(run, hs);
      run.finish(hs.out);
    } else if (hverify->parsed()) {
      Run run(hverify, "haar verify", common, args);
      haar_verify(run, hv, out);
      run.finish(hv.out);
    } else if (dec->parsed()) {
      Run run(dec, "decompose", common, args);
      decompose(run, dc, out);
      run.finish(dc.out);
    } else if (rbrun->parsed()) {
      Run run(rbrun, "rb run", common, args);
      rb_run(run, rr);
      run.finish(rr.out);
    } else if (fitc->parsed()) {
      Run run(fitc, "fit", common, args);
      fit(run, ft, out);
      run.finish(ft.out);
    } else if (scan->parsed()) {
      Run run(scan, "noise scan", common, args);
      noise_scan(run, sc, out);
      run.finish(sc.out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace rrb::cli
