#include "rrb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rrb::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(where, "expected a finite number");
  return x;
}

double number(const json& j, const char* key, const std::string& where) {
  return number(field(j, key, where), where + "." + key);
}

long long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

std::string text(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) fail(where, "unknown key \"" + it.key() + "\"");
  }
}

json real_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_from(const json& j, Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim) fail(where, "expected " + std::to_string(dim) + " rows");
  Eigen::MatrixXd m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != dim)
      fail(w, "expected " + std::to_string(dim) + " entries");
    for (Index k = 0; k < dim; ++k) m(i, k) = number(row[static_cast<std::size_t>(k)], w);
  }
  return m;
}

json vector_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::vector<double> vector_from(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

const char* support_name(Support s) { return s == Support::Each ? "each" : "all"; }

}  // namespace

// ---------------------------------------------------------------------------

json to_json(const CMatrix& m) {
  return {{"dim", m.rows()}, {"re", real_rows(m.real())}, {"im", real_rows(m.imag())}};
}

CMatrix matrix_from_json(const json& j) {
  const std::string where = "matrix";
  const long long dim = integer(field(j, "dim", where), where + ".dim");
  if (dim < 1 || dim > 16) fail(where + ".dim", "must be between 1 and 16");
  const auto re = rows_from(field(j, "re", where), dim, where + ".re");
  const auto im = rows_from(field(j, "im", where), dim, where + ".im");
  CMatrix m(dim, dim);
  m.real() = re;
  m.imag() = im;
  return m;
}

json to_json(const NativeGate& g) {
  json j{{"kind", to_string(g.kind)}};
  if (g.kind == GateKind::CZ) {
    j["q"] = {g.qubits[0], g.qubits[1]};
  } else {
    j["angle"] = g.angle;
    j["q"] = g.qubits[0];
  }
  return j;
}

json to_json(const GateSequence& s) {
  json gates = json::array();
  for (const auto& g : s.gates) gates.push_back(to_json(g));
  return {{"n_qubits", s.n_qubits}, {"gates", std::move(gates)}};
}

GateSequence sequence_from_json(const json& j) {
  const std::string where = "sequence";
  GateSequence s;
  s.n_qubits = static_cast<int>(integer(field(j, "n_qubits", where), where + ".n_qubits"));
  const json& gates = field(j, "gates", where);
  if (!gates.is_array()) fail(where + ".gates", "expected an array");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string w = where + ".gates[" + std::to_string(i) + "]";
    const json& g = gates[i];
    const std::string kind = text(g, "kind", w);
    const json& q = field(g, "q", w);
    try {
      if (kind == "CZ") {
        if (!q.is_array() || q.size() != 2) fail(w + ".q", "CZ needs two qubits");
        s.gates.push_back(NativeGate::cz(static_cast<int>(integer(q[0], w + ".q")), static_cast<int>(integer(q[1], w + ".q"))));
      } else if (kind == "RZ") {
        s.gates.push_back(NativeGate::rz(static_cast<int>(integer(q, w + ".q")), number(g, "angle", w)));
      } else if (kind == "RX") {
        s.gates.push_back(NativeGate::rx(static_cast<int>(integer(q, w + ".q")), number(g, "angle", w)));
      } else {
        fail(w + ".kind", "unknown gate \"" + kind + "\" (expected RZ, RX or CZ)");
      }
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      if (msg.rfind(where, 0) == 0) throw;
      fail(w, msg);
    }
  }
  try {
    s.validate();
  } catch (const ValidationError& e) {
    fail(where, e.what());
  }
  return s;
}

json to_json(const SingleQubitParams& p) {
  return {{"phi", p.phi}, {"theta", p.theta}, {"omega", p.omega}, {"global_phase", p.global_phase}};
}

json to_json(const TwoQubitParams& p) {
  return {{"a", to_json(p.a)},     {"b", to_json(p.b)},       {"c", to_json(p.c)},
          {"d", to_json(p.d)},     {"alpha", p.alpha},        {"beta", p.beta},
          {"delta", p.delta},      {"global_phase", p.global_phase}};
}

SingleQubitParams single_params_from_json(const json& j) {
  const std::string where = "params";
  SingleQubitParams p;
  p.phi = number(j, "phi", where);
  p.theta = number(j, "theta", where);
  p.omega = number(j, "omega", where);
  p.global_phase = j.contains("global_phase") ? number(j, "global_phase", where) : 0.0;
  return p;
}

TwoQubitParams two_params_from_json(const json& j) {
  const std::string where = "params";
  TwoQubitParams p;
  p.a = single_params_from_json(field(j, "a", where));
  p.b = single_params_from_json(field(j, "b", where));
  p.c = single_params_from_json(field(j, "c", where));
  p.d = single_params_from_json(field(j, "d", where));
  p.alpha = number(j, "alpha", where);
  p.beta = number(j, "beta", where);
  p.delta = number(j, "delta", where);
  p.global_phase = j.contains("global_phase") ? number(j, "global_phase", where) : 0.0;
  return p;
}

// ---------------------------------------------------------------------------

json to_json(const ChannelSpec& c) {
  switch (c.kind) {
    case ChannelKind::Identity:
      return {{"kind", "identity"}};
    case ChannelKind::Depolarizing:
      return {{"kind", "depolarizing"}, {"lambda", c.lambda}, {"q", support_name(c.support)}};
    case ChannelKind::AmplitudeDamping:
      return {{"kind", "amplitude_damping"}, {"epsilon", c.epsilon}, {"q", "each"}};
    case ChannelKind::Composite: {
      json parts = json::array();
      for (const auto& p : c.parts) parts.push_back(to_json(p));
      return {{"kind", "composite"}, {"parts", std::move(parts)}};
    }
    case ChannelKind::Unitary:
      return {{"kind", "unitary"}, {"matrix", to_json(c.unitary)}, {"q", support_name(c.support)}};
  }
  return {};
}

namespace {

Support support_from(const json& j, const std::string& where) {
  if (!j.contains("q")) return Support::Each;
  const std::string q = text(j, "q", where);
  if (q == "each") return Support::Each;
  if (q == "all") return Support::All;
  fail(where + ".q", "expected \"each\" or \"all\", got \"" + q + "\"");
}

ChannelSpec channel_at(const json& j, const std::string& where) {
  const std::string kind = text(j, "kind", where);
  ChannelSpec c;
  try {
    if (kind == "identity") {
      only_keys(j, {"kind", "q"}, where);
    } else if (kind == "depolarizing") {
      only_keys(j, {"kind", "lambda", "q"}, where);
      c = ChannelSpec::depolarizing(number(j, "lambda", where), support_from(j, where));
    } else if (kind == "amplitude_damping") {
      only_keys(j, {"kind", "epsilon", "q"}, where);
      if (support_from(j, where) != Support::Each) fail(where + ".q", "amplitude damping acts on each qubit");
      c = ChannelSpec::amplitude_damping(number(j, "epsilon", where));
    } else if (kind == "composite") {
      only_keys(j, {"kind", "parts", "q"}, where);
      const json& parts = field(j, "parts", where);
      if (!parts.is_array()) fail(where + ".parts", "expected an array");
      std::vector<ChannelSpec> list;
      for (std::size_t i = 0; i < parts.size(); ++i)
        list.push_back(channel_at(parts[i], where + ".parts[" + std::to_string(i) + "]"));
      c = ChannelSpec::composite(std::move(list));
    } else if (kind == "unitary") {
      only_keys(j, {"kind", "matrix", "q"}, where);
      c = ChannelSpec::unitary_conjugation(matrix_from_json(field(j, "matrix", where)));
      c.support = support_from(j, where);
    } else {
      fail(where + ".kind",
           "unknown channel \"" + kind + "\" (expected identity, depolarizing, amplitude_damping, composite or unitary)");
    }
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0) throw;
    fail(where, msg);
  }
  return c;
}

}  // namespace

ChannelSpec channel_from_json(const json& j) { return channel_at(j, "channel"); }

json to_json(const NoiseModel& m) {
  json j{{"RZ", to_json(m.rz)}, {"RX", to_json(m.rx)}, {"CZ", to_json(m.cz)}, {"SPAM", to_json(m.spam)}};
  if (m.layer.kind != ChannelKind::Identity) j["LAYER"] = to_json(m.layer);
  return j;
}

NoiseModel noise_model_from_json(const json& j) {
  const std::string where = "noise";
  if (!j.is_object()) fail(where, "expected a JSON object");
  only_keys(j, {"RZ", "RX", "CZ", "SPAM", "LAYER"}, where);
  NoiseModel m;
  m.rz = channel_at(field(j, "RZ", where), where + ".RZ");
  m.rx = channel_at(field(j, "RX", where), where + ".RX");
  m.cz = channel_at(field(j, "CZ", where), where + ".CZ");
  m.spam = channel_at(field(j, "SPAM", where), where + ".SPAM");
  if (j.contains("LAYER")) m.layer = channel_at(j["LAYER"], where + ".LAYER");
  return m;
}

// ---------------------------------------------------------------------------

json to_json(const RBConfig& c) {
  return {{"n_qubits", c.n_qubits},   {"scheme", to_string(c.scheme)}, {"lengths", c.lengths},
          {"sequences", c.sequences}, {"shots", c.shots},              {"noise", to_json(c.noise)},
          {"seed", c.seed}};
}

RBConfig rb_config_from_json(const json& j) {
  const std::string where = "config";
  RBConfig c;
  c.n_qubits = static_cast<int>(integer(field(j, "n_qubits", where), where + ".n_qubits"));
  c.scheme = scheme_from_string(text(j, "scheme", where));
  c.lengths.clear();
  const json& ls = field(j, "lengths", where);
  if (!ls.is_array()) fail(where + ".lengths", "expected an array");
  for (const auto& m : ls) c.lengths.push_back(static_cast<int>(integer(m, where + ".lengths")));
  const long long seqs = integer(field(j, "sequences", where), where + ".sequences");
  const long long shots = integer(field(j, "shots", where), where + ".shots");
  if (seqs < 1 || shots < 1) fail(where, "sequences and shots must be >= 1");
  c.sequences = static_cast<std::size_t>(seqs);
  c.shots = static_cast<std::size_t>(shots);
  c.noise = noise_model_from_json(field(j, "noise", where));
  const json& seed = field(j, "seed", where);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    fail(where + ".seed", "expected a nonnegative integer");
  c.seed = seed.get<std::uint64_t>();
  return c;
}

json to_json(const RBResult& r) {
  json lengths = json::array();
  json ms = json::array(), means = json::array(), stds = json::array();
  for (const auto& l : r.lengths) {
    ms.push_back(l.m);
    means.push_back(l.mean);
    stds.push_back(l.stddev);
    lengths.push_back(
        {{"m", l.m}, {"mean", l.mean}, {"std", l.stddev}, {"survival", vector_json(l.survival)}, {"exact", vector_json(l.exact)}});
  }
  return {{"config", to_json(r.config)}, {"m", ms}, {"mean", means}, {"std", stds}, {"per_length", lengths}};
}

RBResult rb_result_from_json(const json& j) {
  const std::string where = "result";
  RBResult r;
  r.config = rb_config_from_json(field(j, "config", where));
  const json& per = field(j, "per_length", where);
  if (!per.is_array() || per.empty()) fail(where + ".per_length", "expected a nonempty array");
  for (std::size_t i = 0; i < per.size(); ++i) {
    const std::string w = where + ".per_length[" + std::to_string(i) + "]";
    LengthResult l;
    l.m = static_cast<int>(integer(field(per[i], "m", w), w + ".m"));
    l.mean = number(per[i], "mean", w);
    l.stddev = number(per[i], "std", w);
    if (l.mean < 0.0 || l.mean > 1.0) fail(w + ".mean", "probability outside [0, 1]");
    if (l.stddev < 0.0) fail(w + ".std", "must be nonnegative");
    if (per[i].contains("survival")) l.survival = vector_from(per[i]["survival"], w + ".survival");
    if (per[i].contains("exact")) l.exact = vector_from(per[i]["exact"], w + ".exact");
    r.lengths.push_back(std::move(l));
  }
  return r;
}

json to_json(const DecayFit& f) {
  return {{"A", f.A},           {"B", f.B},       {"p", f.p},       {"rss", f.rss},
          {"se_A", f.se_A},     {"se_B", f.se_B}, {"se_p", f.se_p}, {"n_points", f.n_points},
          {"degenerate", f.degenerate}, {"at_boundary", f.at_boundary}};
}

json to_json(const stats::KsResult& k) {
  return {{"statistic", k.statistic}, {"p_value", k.p_value}, {"n", k.n}};
}

json to_json(const BlochReport& r) {
  return {{"test", "bloch"},
          {"samples", r.samples},
          {"alpha", r.alpha},
          {"ks_z", to_json(r.ks_z)},
          {"ks_azimuth", to_json(r.ks_azimuth)},
          {"first_moments", r.first_moments},
          {"second_moments", r.second_moments},
          {"moment_z", r.moment_z},
          {"moment_threshold", r.moment_threshold},
          {"pass", r.pass}};
}

json to_json(const SpacingReport& r) {
  return {{"test", "spacing"},
          {"dim", r.dim},
          {"unitaries", r.unitaries},
          {"bins", kSpacingBins},
          {"range", {0.0, kSpacingMax}},
          {"histogram", vector_json(r.histogram)},
          {"oracle_histogram", vector_json(r.oracle_histogram)},
          {"overflow", r.overflow},
          {"oracle_overflow", r.oracle_overflow},
          {"total_variation", r.total_variation},
          {"degenerate", r.degenerate}};
}

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string scan_csv(const ScanGrid& grid) {
  std::string out = "lambda,epsilon,mean_diamond,stderr\n";
  for (const auto& c : grid.cells)
    out += format_double(c.lambda) + "," + format_double(c.epsilon) + "," + format_double(c.mean) + "," +
           format_double(c.stderr_) + "\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  const std::string content = read_text_file(path);
  try {
    return json::parse(content);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": malformed JSON (" + e.what() + ")");
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
  if (!out) throw ValidationError("failed writing " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace rrb::io
