#include "gdcert/cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "gdcert/bounds.hpp"
#include "gdcert/descent.hpp"
#include "gdcert/flow.hpp"
#include "gdcert/init.hpp"
#include "gdcert/io.hpp"
#include "gdcert/objectives.hpp"
#include "gdcert/oracle.hpp"
#include "gdcert/rng.hpp"

namespace gdcert::cli {
namespace {

using io::Json;

// ---------------------------------------------------------------------------
// Config access. Unknown keys are rejected so typos surface as exit 2.

const std::map<std::string, std::set<std::string>> kSchema = {
    {"", {"seed", "objective", "network", "data", "certificate", "run", "output"}},
    {"objective", {"type", "curvatures", "dim", "x0"}},
    {"network", {"input_dim", "layer_dims", "activation", "activation_param", "init", "params"}},
    {"network.init", {"type", "delta", "K", "A", "c"}},
    {"data", {"csv", "generate", "n", "d", "inputs", "targets", "zero_targets"}},
    {"certificate",
     {"path", "radius", "alpha", "alpha_samples", "grid_resolution", "lipschitz",
      "epsilon_fraction", "attach", "delta", "K", "margin", "A_max"}},
    {"run",
     {"eta", "eta_scale", "max_iter", "stop_f_tol", "point_stride", "t_end", "h", "method",
      "target_S", "trials", "c", "budget", "tol", "samples", "resolution"}},
    {"output", {"dir"}},
};

void validate_section(const Json& j, const std::string& name) {
  if (!j.is_object()) {
    throw InputError("config section '" + (name.empty() ? std::string("<root>") : name) +
                     "' must be an object");
  }
  const auto& allowed = kSchema.at(name);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw InputError("unknown config key '" + (name.empty() ? key : name + "." + key) + "'");
    }
    const std::string child = name.empty() ? key : name + "." + key;
    if (kSchema.contains(child)) validate_section(value, child);
  }
}

const Json& section(const Json& cfg, const char* name) {
  static const Json empty = Json::object();
  return cfg.contains(name) ? cfg.at(name) : empty;
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("config key '") + key + "' has the wrong type");
  }
}

double number_or(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return io::number_from_json(j.at(key), key);
}

double require_number(const Json& j, const char* key, const char* sec) {
  if (!j.contains(key)) throw InputError(std::string("config needs ") + sec + "." + key);
  return io::number_from_json(j.at(key), key);
}

RealVector vector_of(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InputError(std::string("config key '") + key + "' must be an array");
  }
  RealVector v;
  for (const auto& e : j.at(key)) v.push_back(io::number_from_json(e, key));
  return v;
}

struct Context {
  Json cfg;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::ostream* out = nullptr;

  void write(const std::string& name, const std::string& content) const {
    io::write_text_file((out_dir / name).string(), content);
  }
};

// ---------------------------------------------------------------------------
// Problem construction.

struct ObjectiveSetup {
  ObjectiveFunction f;
  RealVector x0;
};

ObjectiveSetup make_objective(const Context& ctx) {
  const Json& o = section(ctx.cfg, "objective");
  const auto type = get_or<std::string>(o, "type", "");
  std::optional<ObjectiveFunction> f;
  if (type == "quadratic") {
    f = objectives::quadratic(vector_of(o, "curvatures"));
  } else if (type == "squared_norm") {
    f = objectives::squared_norm(get_or<std::size_t>(o, "dim", 0));
  } else if (type == "exponential") {
    f = objectives::exponential();
  } else {
    throw InputError("objective.type must be quadratic, squared_norm or exponential");
  }
  RealVector x0 = vector_of(o, "x0");
  require_same_dim(x0, RealVector(f->dim()), "objective.x0");
  return {*f, std::move(x0)};
}

Dataset make_dataset(const Context& ctx) {
  const Json& d = section(ctx.cfg, "data");
  std::optional<Dataset> data;
  if (d.contains("csv")) {
    data = io::load_dataset_csv(d.at("csv").get<std::string>());
  } else if (d.contains("generate")) {
    const auto kind = d.at("generate").get<std::string>();
    const auto n = get_or<std::size_t>(d, "n", 0);
    const auto dim = get_or<std::size_t>(d, "d", 0);
    const auto seed = derive_seed(ctx.seed, "data");
    if (kind == "orthonormal") {
      if (n > dim) {
        throw DataDegeneracyError("n > d: the criterion requires d >= n and independent inputs");
      }
      data = make_orthonormal_dataset(n, dim, seed);
    } else if (kind == "gaussian") {
      data = make_random_dataset(n, dim, seed);
    } else {
      throw InputError("data.generate must be orthonormal or gaussian");
    }
  } else if (d.contains("inputs")) {
    std::vector<RealVector> xs;
    for (const auto& row : d.at("inputs")) {
      RealVector x;
      for (const auto& e : row) x.push_back(io::number_from_json(e, "data.inputs"));
      xs.push_back(std::move(x));
    }
    data = Dataset(std::move(xs), vector_of(d, "targets"));
  } else {
    throw InputError("data needs csv, generate, or inputs/targets");
  }
  if (get_or<bool>(d, "zero_targets", false)) {
    data = Dataset(data->inputs(), RealVector(data->size(), 0.0));
  }
  return *data;
}

NetworkArchitecture make_architecture(const Context& ctx, std::size_t data_dim) {
  const Json& n = section(ctx.cfg, "network");
  const auto dims = get_or<std::vector<std::size_t>>(n, "layer_dims", {});
  if (dims.empty()) throw InputError("network.layer_dims is required");
  const auto input_dim = get_or<std::size_t>(n, "input_dim", data_dim);
  const double param = number_or(n, "activation_param", 0.1);
  std::vector<Activation> acts;
  if (n.contains("activation") && n.at("activation").is_array()) {
    for (const auto& a : n.at("activation")) acts.push_back(activations::by_name(a.get<std::string>(), param));
  } else {
    const auto name = get_or<std::string>(n, "activation", "tanh");
    for (std::size_t l = 1; l < dims.size(); ++l) acts.push_back(activations::by_name(name, param));
  }
  return NetworkArchitecture(input_dim, dims, std::move(acts));
}

struct NetworkSetup {
  NetworkArchitecture arch;
  Dataset data;
  NetworkParams params;
};

NetworkSetup make_network(const Context& ctx) {
  Dataset data = make_dataset(ctx);
  const Json& n = section(ctx.cfg, "network");
  if (n.contains("params")) {
    auto [arch, params] = io::params_from_json(
        Json::parse(io::read_text_file(n.at("params").get<std::string>())));
    return {std::move(arch), std::move(data), std::move(params)};
  }
  NetworkArchitecture arch = make_architecture(ctx, data.dim());
  const Json& init = section(n, "init");
  const auto type = get_or<std::string>(init, "type", "lecun");
  NetworkParams params;
  if (type == "lecun") {
    params = lecun_init(arch, number_or(init, "c", 1.0), derive_seed(ctx.seed, "init"));
  } else if (type == "theorem3") {
    const double delta = require_number(init, "delta", "network.init");
    params = theorem3_init(arch, delta, number_or(init, "K", delta),
                           require_number(init, "A", "network.init"), ctx.seed);
  } else if (type == "zeros") {
    params = NetworkParams::zeros(arch);
  } else {
    throw InputError("network.init.type must be lecun, theorem3 or zeros");
  }
  return {std::move(arch), std::move(data), std::move(params)};
}

// ---------------------------------------------------------------------------
// Certificates for built-in objectives.

AlphaEstimate estimate_alpha(const ObjectiveFunction& f, const Ball& ball, const Json& c,
                             std::uint64_t seed) {
  const auto kind = get_or<std::string>(c, "alpha", "analytic");
  if (kind == "analytic") {
    const auto k = f.analytic_constants(ball);
    if (!k) throw UnsupportedError("objective '" + f.name() + "' has no closed-form alpha");
    return AlphaEstimate::analytic(k->alpha);
  }
  if (kind == "sampled") {
    return alpha_sampled(f, ball, get_or<std::size_t>(c, "alpha_samples", 2000),
                         derive_seed(seed, "cli-alpha"));
  }
  if (kind == "grid") {
    const auto res = get_or<std::size_t>(c, "grid_resolution", 1001);
    AlphaEstimate a;
    a.value = oracle::grid_alpha(f, ball, res);
    a.kind = AlphaKind::grid_oracle;
    a.sample_count = static_cast<std::size_t>(std::pow(static_cast<double>(res), ball.dim()));
    return a;
  }
  throw InputError("certificate.alpha must be analytic, sampled or grid");
}

DerivativeBounds estimate_lipschitz(const ObjectiveFunction& f, const Ball& ball, const Json& c,
                                    std::uint64_t seed) {
  const BoundMode mode = bound_mode_from_string(get_or<std::string>(c, "lipschitz", "analytic"));
  if (mode == BoundMode::sampled) {
    return estimate_derivative_bounds(f, ball, derive_seed(seed, "cli-lipschitz"));
  }
  const auto k = f.analytic_constants(ball);
  if (!k) throw UnsupportedError("objective '" + f.name() + "' has no closed-form L1/L2");
  return {k->L1, k->L2, BoundMode::analytic};
}

struct CertifyOutcome {
  std::optional<Certificate> cert;
  Json report;
};

CertifyOutcome certify_objective(const Context& ctx, const ObjectiveSetup& obj) {
  const Json& c = section(ctx.cfg, "certificate");
  const Ball ball(obj.x0, require_number(c, "radius", "certificate"));
  const double f0 = obj.f(obj.x0);
  const AlphaEstimate alpha = estimate_alpha(obj.f, ball, c, ctx.seed);
  const CriterionCheck check = check_criterion(f0, ball.radius(), alpha);
  CertifyOutcome res;
  res.report = {{"f_x0", io::number_to_json(f0)},
                {"radius", io::number_to_json(ball.radius())},
                {"alpha", io::number_to_json(alpha.value)},
                {"alpha_kind", to_string(alpha.kind)},
                {"criterion",
                 {{"holds", check.holds},
                  {"slack", io::number_to_json(check.slack)},
                  {"relative_margin", io::number_to_json(check.relative_margin)}}}};
  if (!check.holds) return res;
  const DerivativeBounds lb = estimate_lipschitz(obj.f, ball, c, ctx.seed);
  res.cert = build_certificate(f0, ball, alpha, lb, number_or(c, "epsilon_fraction", 0.5));
  return res;
}

std::optional<Certificate> load_certificate(const Context& ctx) {
  const Json& c = section(ctx.cfg, "certificate");
  if (!c.contains("path")) return std::nullopt;
  return io::certificate_from_json(Json::parse(io::read_text_file(c.at("path").get<std::string>())));
}

FindAOptions find_a_options(const Json& c) {
  FindAOptions opt;
  opt.margin = number_or(c, "margin", opt.margin);
  opt.A_max = number_or(c, "A_max", opt.A_max);
  opt.epsilon_fraction = number_or(c, "epsilon_fraction", opt.epsilon_fraction);
  opt.lipschitz_mode = bound_mode_from_string(get_or<std::string>(c, "lipschitz", "analytic"));
  return opt;
}

Json find_a_report(const FindAResult& r) {
  const auto check = check_criterion(r.S0, r.certificate.radius, r.certificate.alpha);
  return {{"A", io::number_to_json(r.A)},
          {"doublings", r.doublings},
          {"S0", io::number_to_json(r.S0)},
          {"pl_bound", io::number_to_json(r.pl_bound)},
          {"alpha_data", io::number_to_json(r.spectrum.alpha_data)},
          {"beta_data", io::number_to_json(r.spectrum.beta_data)},
          {"envelope_a", r.envelope.a},
          {"envelope_c", r.envelope.c},
          {"criterion",
           {{"holds", check.holds},
            {"slack", io::number_to_json(check.slack)},
            {"relative_margin", io::number_to_json(check.relative_margin)}}}};
}

Json descent_summary(const Trace& trace) {
  const auto& last = trace.steps.back();
  return {{"iterations", trace.size() - 1},
          {"eta", io::number_to_json(trace.eta)},
          {"final_f", io::number_to_json(last.f)},
          {"final_grad_norm", io::number_to_json(last.grad_norm)},
          {"final_dist_x0", io::number_to_json(last.dist_x0)}};
}

bool verdicts_pass(const std::vector<MonitorVerdict>& v) {
  for (const auto& m : v) {
    if (!m.passed) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_certify(const Context& ctx) {
  Json report = {{"command", "certify"}, {"seed", ctx.seed}};
  if (ctx.cfg.contains("network")) {
    const Json& c = section(ctx.cfg, "certificate");
    const Dataset data = make_dataset(ctx);
    const auto arch = make_architecture(ctx, data.dim());
    const double delta = require_number(c, "delta", "certificate");
    const auto r = find_A(arch, data, delta, number_or(c, "K", delta), ctx.seed, find_a_options(c));
    report["find_A"] = find_a_report(r);
    ctx.write("certificate.json", io::dump(io::certificate_to_json(r.certificate)));
    ctx.write("params.json", io::dump(io::params_to_json(arch, r.params)));
    ctx.write("report.json", io::dump(report));
    *ctx.out << "certified: A=" << io::format_double(r.A) << " eta=" << io::format_double(r.eta)
             << " delta=" << io::format_double(r.certificate.delta) << "\n";
    return kOk;
  }
  const auto obj = make_objective(ctx);
  const auto res = certify_objective(ctx, obj);
  report.update(res.report);
  if (!res.cert) {
    ctx.write("report.json", io::dump(report));
    *ctx.out << "criterion fails: 4 f(x0) >= r^2 alpha\n";
    return kCriterionFailed;
  }
  ctx.write("certificate.json", io::dump(io::certificate_to_json(*res.cert)));
  ctx.write("report.json", io::dump(report));
  *ctx.out << "certified: eta=" << io::format_double(res.cert->eta)
           << " delta=" << io::format_double(res.cert->delta) << "\n";
  return kOk;
}

struct RunPlan {
  ObjectiveFunction f;
  RealVector x0;
  std::optional<Certificate> cert;
};

RunPlan plan_run(const Context& ctx, Json& report) {
  const Json& c = section(ctx.cfg, "certificate");
  if (ctx.cfg.contains("network")) {
    auto net = make_network(ctx);
    RunPlan plan{network_objective(net.arch, net.data), net.params.flat, load_certificate(ctx)};
    return plan;
  }
  auto obj = make_objective(ctx);
  RunPlan plan{obj.f, obj.x0, load_certificate(ctx)};
  if (!plan.cert && ctx.cfg.contains("certificate") && get_or<bool>(c, "attach", true)) {
    auto res = certify_objective(ctx, obj);
    report["certify"] = res.report;
    if (!res.cert) {
      throw CertificationError("criterion fails at x0; cannot attach a certificate",
                               res.report["criterion"]["slack"].is_number()
                                   ? res.report["criterion"]["slack"].get<double>()
                                   : 0.0);
    }
    plan.cert = res.cert;
    ctx.write("certificate.json", io::dump(io::certificate_to_json(*plan.cert)));
  }
  if (plan.cert && plan.cert->center != plan.x0) {
    throw InputError("certificate center differs from the starting point");
  }
  return plan;
}

double run_eta(const Json& run, const std::optional<Certificate>& cert) {
  const double scale = number_or(run, "eta_scale", 1.0);
  if (run.contains("eta")) return io::number_from_json(run.at("eta"), "eta") * scale;
  if (!cert) throw InputError("run.eta is required without a certificate");
  return cert->eta * scale;
}

int cmd_descend(const Context& ctx) {
  Json report = {{"command", "descend"}, {"seed", ctx.seed}};
  const Json& run = section(ctx.cfg, "run");
  const RunPlan plan = plan_run(ctx, report);
  DescentConfig dc;
  dc.eta = run_eta(run, plan.cert);
  dc.max_iter = get_or<std::size_t>(run, "max_iter", 1000);
  if (run.contains("stop_f_tol")) dc.stop_f_tol = io::number_from_json(run.at("stop_f_tol"), "stop_f_tol");
  dc.certificate = plan.cert;
  const Trace trace = run_descent(plan.f, plan.x0, dc);
  ctx.write("trace.csv", io::descent_trace_csv(trace));
  report["run"] = descent_summary(trace);
  bool ok = true;
  if (plan.cert) {
    report["monitors"] = io::verdicts_to_json(trace.monitor_verdicts);
    ok = verdicts_pass(trace.monitor_verdicts);
    if (dc.eta == plan.cert->eta) {
      const auto rates = verify_rate_bounds(trace, *plan.cert);
      const auto resid = check_descent_residual(plan.f, trace, *plan.cert);
      report["verification"] = io::verdicts_to_json(rates.summary);
      report["residual"] = io::verdicts_to_json(resid.summary);
      ok = ok && rates.all_passed() && resid.all_passed();
    }
  } else {
    report["monitors"] = "na";
  }
  report["all_passed"] = ok;
  ctx.write("report.json", io::dump(report));
  *ctx.out << "descent: " << trace.size() - 1 << " steps, f=" << io::format_double(trace.steps.back().f)
           << (plan.cert ? (ok ? ", monitors green" : ", monitors red") : ", monitors n/a") << "\n";
  return ok ? kOk : kCriterionFailed;
}

int cmd_flow(const Context& ctx) {
  Json report = {{"command", "flow"}, {"seed", ctx.seed}};
  const Json& run = section(ctx.cfg, "run");
  const RunPlan plan = plan_run(ctx, report);
  FlowConfig fc;
  fc.t_end = number_or(run, "t_end", fc.t_end);
  fc.h = number_or(run, "h", fc.h);
  fc.method = flow_method_from_string(get_or<std::string>(run, "method", "rk4"));
  fc.certificate = plan.cert;
  const Trace trace = integrate_flow(plan.f, plan.x0, fc);
  ctx.write("trace.csv", io::flow_trace_csv(trace));
  const auto& last = trace.steps.back();
  report["run"] = {{"t_end", io::number_to_json(last.time)},
                   {"h", io::number_to_json(fc.h)},
                   {"method", to_string(fc.method)},
                   {"final_f", io::number_to_json(last.f)},
                   {"final_dist_x0", io::number_to_json(last.dist_x0)}};
  bool ok = true;
  if (plan.cert) {
    const auto rep = verify_flow_bounds(trace, *plan.cert);
    report["monitors"] = io::verdicts_to_json(trace.monitor_verdicts);
    report["verification"] = io::verdicts_to_json(rep.summary);
    ok = verdicts_pass(trace.monitor_verdicts) && rep.all_passed();
  } else {
    report["monitors"] = "na";
  }
  report["all_passed"] = ok;
  ctx.write("report.json", io::dump(report));
  *ctx.out << "flow: t=" << io::format_double(last.time) << " f=" << io::format_double(last.f)
           << (plan.cert ? (ok ? ", monitors green" : ", monitors red") : ", monitors n/a") << "\n";
  return ok ? kOk : kCriterionFailed;
}

int cmd_train_nn(const Context& ctx) {
  Json report = {{"command", "train-nn"}, {"seed", ctx.seed}};
  const Json& c = section(ctx.cfg, "certificate");
  const Json& run = section(ctx.cfg, "run");
  const Dataset data = make_dataset(ctx);
  const auto arch = make_architecture(ctx, data.dim());
  const double delta = number_or(c, "delta", 0.1);
  const auto r = find_A(arch, data, delta, number_or(c, "K", delta), ctx.seed, find_a_options(c));
  report["find_A"] = find_a_report(r);
  ctx.write("certificate.json", io::dump(io::certificate_to_json(r.certificate)));

  const double target = number_or(run, "target_S", 1e-8);
  DescentConfig dc;
  dc.eta = r.eta;
  dc.max_iter = get_or<std::size_t>(run, "max_iter", 1000000);
  dc.stop_f_tol = number_or(run, "stop_f_tol", 0.1 * target);
  dc.certificate = r.certificate;
  dc.point_stride = get_or<std::size_t>(run, "point_stride", 1000);
  const auto f = network_objective(arch, data);
  const Trace trace = run_descent(f, r.params.flat, dc);
  ctx.write("trace.csv", io::descent_trace_csv(trace));
  NetworkParams final_params{trace.final_point()};
  ctx.write("params.json", io::dump(io::params_to_json(arch, final_params)));

  const auto rates = verify_rate_bounds(trace, r.certificate);
  const double S_final = trace.steps.back().f;
  const bool monitors_ok = verdicts_pass(trace.monitor_verdicts) && rates.all_passed();
  const bool reached = S_final < target || r.S0 == 0.0;
  report["run"] = descent_summary(trace);
  report["monitors"] = io::verdicts_to_json(trace.monitor_verdicts);
  report["verification"] = io::verdicts_to_json(rates.summary);
  report["target_S"] = io::number_to_json(target);
  report["reached_target"] = reached;
  report["all_passed"] = monitors_ok && reached;
  ctx.write("report.json", io::dump(report));
  *ctx.out << "train-nn: A=" << io::format_double(r.A) << " eta=" << io::format_double(r.eta) << ", "
           << trace.size() - 1 << " steps, S=" << io::format_double(S_final) << "\n";
  return monitors_ok && reached ? kOk : kCriterionFailed;
}

int cmd_lecun_prob(const Context& ctx) {
  const Json& run = section(ctx.cfg, "run");
  const Dataset data = make_dataset(ctx);
  const auto arch = make_architecture(ctx, data.dim());
  const auto trials = get_or<std::size_t>(run, "trials", 50);
  const double c = number_or(run, "c", 1.0);
  const double eta = require_number(run, "eta", "run");
  const auto budget = get_or<std::size_t>(run, "budget", 100000);
  const double tol = number_or(run, "tol", 1e-6);
  const auto est = estimate_theta(arch, data, c, trials, eta, budget, tol, ctx.seed);
  ctx.write("trials.csv", io::trials_csv(est.outcomes));
  const Json report = {{"command", "lecun-prob"},
                       {"seed", ctx.seed},
                       {"trials", trials},
                       {"c", io::number_to_json(c)},
                       {"eta", io::number_to_json(eta)},
                       {"budget", budget},
                       {"tol", io::number_to_json(tol)},
                       {"successes", est.successes},
                       {"theta_hat", io::number_to_json(est.theta_hat)},
                       {"ci95", {io::number_to_json(est.ci_low), io::number_to_json(est.ci_high)}}};
  ctx.write("report.json", io::dump(report));
  *ctx.out << "lecun-prob: theta_hat=" << io::format_double(est.theta_hat) << " ("
           << est.successes << "/" << trials << "), 95% CI [" << io::format_double(est.ci_low)
           << ", " << io::format_double(est.ci_high) << "]\n";
  return kOk;
}

int cmd_oracle_alpha(const Context& ctx) {
  const Json& c = section(ctx.cfg, "certificate");
  const Json& run = section(ctx.cfg, "run");
  const auto obj = make_objective(ctx);
  const Ball ball(obj.x0, require_number(c, "radius", "certificate"));
  Json report = {{"command", "oracle-alpha"}, {"seed", ctx.seed}};
  if (const auto k = obj.f.analytic_constants(ball)) report["analytic"] = io::number_to_json(k->alpha);
  const auto samples = get_or<std::size_t>(run, "samples", 2000);
  const auto sampled = alpha_sampled(obj.f, ball, samples, derive_seed(ctx.seed, "cli-alpha"));
  report["sampled"] = {{"value", io::number_to_json(sampled.value)}, {"samples", samples}};
  if (ball.dim() <= 3) {
    const auto res = get_or<std::size_t>(run, "resolution", 1001);
    report["grid"] = {{"value", io::number_to_json(oracle::grid_alpha(obj.f, ball, res))},
                      {"resolution", res}};
  }
  ctx.write("report.json", io::dump(report));
  *ctx.out << "oracle-alpha: sampled=" << io::format_double(sampled.value);
  if (report.contains("grid")) *ctx.out << " grid=" << report["grid"]["value"].dump();
  *ctx.out << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gdcert: certified gradient descent and gradient flow"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const Context&);
  };
  const Sub subs[] = {
      {"certify", "check the convergence criterion and write certificate.json", cmd_certify},
      {"descend", "fixed-step gradient descent with optional monitors", cmd_descend},
      {"flow", "integrate the gradient flow with optional monitors", cmd_flow},
      {"train-nn", "find A, initialize, and run certified descent on a network", cmd_train_nn},
      {"lecun-prob", "estimate the success probability under LeCun initialization", cmd_lecun_prob},
      {"oracle-alpha", "compare alpha estimates on a built-in objective", cmd_oracle_alpha},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    apps.push_back(sub);
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    Context ctx;
    try {
      ctx.cfg = Json::parse(io::read_text_file(config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError("config is not valid JSON: " + std::string(e.what()));
    }
    validate_section(ctx.cfg, "");
    ctx.seed = seed ? *seed : get_or<std::uint64_t>(ctx.cfg, "seed", 0);
    ctx.out_dir = !out_dir.empty() ? out_dir
                                   : get_or<std::string>(section(ctx.cfg, "output"), "dir", ".");
    std::filesystem::create_directories(ctx.out_dir);
    ctx.out = &out;
    for (std::size_t i = 0; i < apps.size(); ++i) {
      if (apps[i]->parsed()) {
        try {
          return subs[i].fn(ctx);
        } catch (const DivergenceError& e) {
          Json report = {{"command", subs[i].name},
                         {"error", "divergence"},
                         {"message", e.what()},
                         {"last_good_step", e.last_good_step()},
                         {"last_good_f", io::number_to_json(e.last_good_f())}};
          ctx.write("report.json", io::dump(report));
          throw;
        }
      }
    }
    return kConfigError;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << "\n";
    return kDivergence;
  } catch (const DataDegeneracyError& e) {
    err << "data degeneracy: " << e.what() << "\n";
    return kDataDegeneracy;
  } catch (const CertificationError& e) {
    err << "criterion failed: " << e.what() << "\n";
    return kCriterionFailed;
  } catch (const SearchFailureError& e) {
    err << "search failed: " << e.what() << "\n";
    return kCriterionFailed;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace gdcert::cli
