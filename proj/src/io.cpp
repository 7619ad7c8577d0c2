#include "gdcert/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gdcert::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from_json(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw InputError("'" + what + "' must be a number");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write to '" + path + "' failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

RealVector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError("'" + what + "' must be an array");
  RealVector v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(number_from_json(e, what));
  return v;
}

Json vector_to_json(std::span<const double> v) {
  Json arr = Json::array();
  for (double e : v) arr.push_back(number_to_json(e));
  return arr;
}

std::string flag(const std::optional<bool>& b) {
  if (!b) return "na";
  return *b ? "1" : "0";
}

std::string opt_number(const std::optional<double>& v) {
  return v ? format_double(*v) : "na";
}

}  // namespace

Json certificate_to_json(const Certificate& cert) {
  Json j;
  j["center"] = vector_to_json(cert.center);
  j["dim"] = cert.dim();
  j["radius"] = number_to_json(cert.radius);
  j["f_x0"] = number_to_json(cert.f_x0);
  j["alpha"] = {{"value", number_to_json(cert.alpha.value)},
                {"kind", to_string(cert.alpha.kind)},
                {"sample_count", cert.alpha.sample_count}};
  j["epsilon"] = number_to_json(cert.epsilon);
  j["L1"] = number_to_json(cert.L1);
  j["L2"] = number_to_json(cert.L2);
  j["lipschitz_mode"] = to_string(cert.lipschitz_mode);
  j["eta"] = number_to_json(cert.eta);
  j["delta"] = number_to_json(cert.delta);
  j["flags"] = {{"proved", cert.proved()},
                {"heuristic_L", cert.heuristic_L()},
                {"sampled_alpha", cert.sampled_alpha()}};
  return j;
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.center = vector_from_json(field(j, "center"), "center");
  c.radius = number_from_json(field(j, "radius"), "radius");
  c.f_x0 = number_from_json(field(j, "f_x0"), "f_x0");
  const Json& a = field(j, "alpha");
  c.alpha.value = number_from_json(field(a, "value"), "alpha.value");
  c.alpha.kind = alpha_kind_from_string(field(a, "kind").get<std::string>());
  if (a.contains("sample_count")) c.alpha.sample_count = a.at("sample_count").get<std::size_t>();
  c.epsilon = number_from_json(field(j, "epsilon"), "epsilon");
  c.L1 = number_from_json(field(j, "L1"), "L1");
  c.L2 = number_from_json(field(j, "L2"), "L2");
  c.lipschitz_mode = bound_mode_from_string(field(j, "lipschitz_mode").get<std::string>());
  c.eta = number_from_json(field(j, "eta"), "eta");
  c.delta = number_from_json(field(j, "delta"), "delta");
  if (const auto err = c.validate(); !err.empty()) {
    throw InputError("certificate document is inconsistent: " + err);
  }
  return c;
}

Json params_to_json(const NetworkArchitecture& arch, const NetworkParams& params) {
  if (params.flat.size() != arch.param_count()) {
    throw InputError("params_to_json: parameter count mismatch");
  }
  Json j;
  j["input_dim"] = arch.input_dim();
  j["layer_dims"] = arch.layer_dims();
  Json acts = Json::array();
  for (const auto& act : arch.activations()) {
    acts.push_back({{"name", act.name()}, {"parameter", act.parameter()}});
  }
  j["activations"] = acts;
  Json layers = Json::array();
  for (std::size_t l = 1; l <= arch.depth(); ++l) {
    Json W = Json::array();
    for (std::size_t r = 0; r < arch.width(l); ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < arch.width(l - 1); ++c) {
        row.push_back(number_to_json(params.weight(arch, l, r, c)));
      }
      W.push_back(row);
    }
    Json b = Json::array();
    for (std::size_t r = 0; r < arch.width(l); ++r) b.push_back(number_to_json(params.bias(arch, l, r)));
    layers.push_back({{"layer", l},
                      {"shape", {arch.width(l), arch.width(l - 1)}},
                      {"W", W},
                      {"b", b}});
  }
  j["layers"] = layers;
  return j;
}

std::pair<NetworkArchitecture, NetworkParams> params_from_json(const Json& j) {
  const auto input_dim = field(j, "input_dim").get<std::size_t>();
  const auto dims = field(j, "layer_dims").get<std::vector<std::size_t>>();
  std::vector<Activation> acts;
  for (const auto& a : field(j, "activations")) {
    const double param = a.contains("parameter") ? a.at("parameter").get<double>() : 0.1;
    acts.push_back(activations::by_name(field(a, "name").get<std::string>(), param));
  }
  NetworkArchitecture arch(input_dim, dims, std::move(acts));
  NetworkParams params = NetworkParams::zeros(arch);
  const Json& layers = field(j, "layers");
  if (!layers.is_array() || layers.size() != arch.depth()) {
    throw InputError("params: expected one entry per layer");
  }
  for (std::size_t l = 1; l <= arch.depth(); ++l) {
    const Json& layer = layers[l - 1];
    const Json& W = field(layer, "W");
    const Json& b = field(layer, "b");
    if (!W.is_array() || W.size() != arch.width(l) || !b.is_array() || b.size() != arch.width(l)) {
      throw InputError("params: layer " + std::to_string(l) + " has the wrong shape");
    }
    for (std::size_t r = 0; r < arch.width(l); ++r) {
      const RealVector row = vector_from_json(W[r], "W");
      if (row.size() != arch.width(l - 1)) {
        throw InputError("params: layer " + std::to_string(l) + " has the wrong shape");
      }
      for (std::size_t c = 0; c < row.size(); ++c) params.weight(arch, l, r, c) = row[c];
      params.bias(arch, l, r) = number_from_json(b[r], "b");
    }
  }
  return {std::move(arch), std::move(params)};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r' && ch != ' ' && ch != '\t') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_number(const std::string& s, double& v) {
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

Dataset parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<RealVector> xs;
  RealVector ys;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_csv_line(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    double probe = 0.0;
    if (xs.empty() && !parse_number(fields[0], probe)) continue;  // header
    RealVector row;
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_number(f, v) || !std::isfinite(v)) {
        throw InputError("dataset line " + std::to_string(line_no) + ": bad number '" + f + "'");
      }
      row.push_back(v);
    }
    if (row.size() < 2) throw InputError("dataset rows need at least one input and a target");
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw InputError("dataset line " + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " fields");
    }
    ys.push_back(row.back());
    row.pop_back();
    xs.push_back(std::move(row));
  }
  if (xs.empty()) throw InputError("dataset is empty");
  return Dataset(std::move(xs), std::move(ys));
}

Dataset load_dataset_csv(const std::string& path) { return parse_dataset_csv(read_text_file(path)); }

std::string dataset_to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.input(i)) out += format_double(v) + ",";
    out += format_double(data.target(i)) + "\n";
  }
  return out;
}

std::string descent_trace_csv(const Trace& trace) {
  std::string out = "k,f,grad_norm,dist_x0,rate_bound,ball_ok,rate_ok,residual_ok\n";
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    out += std::to_string(k) + "," + format_double(s.f) + "," + format_double(s.grad_norm) +
           "," + format_double(s.dist_x0) + "," + opt_number(s.rate_bound) + "," +
           flag(s.ball_ok) + "," + flag(s.rate_ok) + "," + flag(s.residual_ok) + "\n";
  }
  return out;
}

std::string flow_trace_csv(const Trace& trace) {
  std::string out = "t,f,grad_norm,dist_x0,exp_bound,ball_ok,rate_ok\n";
  for (const auto& s : trace.steps) {
    out += format_double(s.time) + "," + format_double(s.f) + "," + format_double(s.grad_norm) +
           "," + format_double(s.dist_x0) + "," + opt_number(s.rate_bound) + "," +
           flag(s.ball_ok) + "," + flag(s.rate_ok) + "\n";
  }
  return out;
}

std::string trials_csv(const std::vector<TrialOutcome>& outcomes) {
  std::string out = "trial,seed,final_S,iterations,success\n";
  for (const auto& o : outcomes) {
    out += std::to_string(o.trial) + "," + std::to_string(o.seed) + "," +
           format_double(o.final_S) + "," + std::to_string(o.iterations) + "," +
           (o.success ? "1" : "0") + "\n";
  }
  return out;
}

Json verdicts_to_json(const std::vector<MonitorVerdict>& verdicts) {
  Json arr = Json::array();
  for (const auto& v : verdicts) {
    arr.push_back({{"name", v.name},
                   {"passed", v.passed},
                   {"worst_slack", number_to_json(v.worst_slack)},
                   {"violations", v.violations}});
  }
  return arr;
}

}  // namespace gdcert::io
