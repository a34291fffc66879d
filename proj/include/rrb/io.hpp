#pragma once

#include <string>

#include <json.hpp>

#include "rrb/analysis.hpp"
#include "rrb/channels.hpp"
#include "rrb/gates.hpp"
#include "rrb/haar.hpp"
#include "rrb/params.hpp"
#include "rrb/rb.hpp"

/// JSON and CSV forms of the library types. Every reader throws
/// ValidationError naming the offending field.
namespace rrb::io {

using nlohmann::json;

json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

json to_json(const NativeGate& g);
json to_json(const GateSequence& s);
GateSequence sequence_from_json(const json& j);

json to_json(const SingleQubitParams& p);
json to_json(const TwoQubitParams& p);
SingleQubitParams single_params_from_json(const json& j);
TwoQubitParams two_params_from_json(const json& j);

json to_json(const ChannelSpec& c);
ChannelSpec channel_from_json(const json& j);
json to_json(const NoiseModel& m);
/// Keys RZ, RX, CZ and SPAM are required; LAYER is optional.
NoiseModel noise_model_from_json(const json& j);

json to_json(const RBConfig& c);
RBConfig rb_config_from_json(const json& j);
json to_json(const RBResult& r);
RBResult rb_result_from_json(const json& j);

json to_json(const DecayFit& f);
json to_json(const stats::KsResult& k);
json to_json(const BlochReport& r);
json to_json(const SpacingReport& r);

/// Header "lambda,epsilon,mean_diamond,stderr", one row per cell.
std::string scan_csv(const ScanGrid& grid);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
/// Pretty-printed with a trailing newline.
std::string dump(const json& j);

}  // namespace rrb::io
