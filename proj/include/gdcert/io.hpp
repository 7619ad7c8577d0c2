#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gdcert/certificate.hpp"
#include "gdcert/init.hpp"
#include "gdcert/network.hpp"
#include "gdcert/report.hpp"

namespace gdcert::io {

using Json = nlohmann::json;

/// Shortest decimal form that parses back to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// JSON has no infinities: non-finite values become the strings above.
Json number_to_json(double v);
double number_from_json(const Json& j, const std::string& what);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Two-space indented, keys sorted, trailing newline.
std::string dump(const Json& j);

Json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

/// Architecture plus per-layer W (as nested rows) and b.
Json params_to_json(const NetworkArchitecture& arch, const NetworkParams& params);
std::pair<NetworkArchitecture, NetworkParams> params_from_json(const Json& j);

/// Rows "x_1,...,x_d,y"; an optional header line whose first field is not
/// numeric is skipped. Every row must have the same width >= 2.
Dataset parse_dataset_csv(const std::string& text);
Dataset load_dataset_csv(const std::string& path);
std::string dataset_to_csv(const Dataset& data);

/// k,f,grad_norm,dist_x0,rate_bound,ball_ok,rate_ok,residual_ok, with "na"
/// in monitor columns when no certificate was attached.
std::string descent_trace_csv(const Trace& trace);
/// t,f,grad_norm,dist_x0,exp_bound,ball_ok,rate_ok.
std::string flow_trace_csv(const Trace& trace);
/// trial,seed,final_S,iterations,success.
std::string trials_csv(const std::vector<TrialOutcome>& outcomes);

Json verdicts_to_json(const std::vector<MonitorVerdict>& verdicts);

}  // namespace gdcert::io
