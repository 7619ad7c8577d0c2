#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "gdcert/cli.hpp"
#include "gdcert/io.hpp"

using namespace gdcert;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("gdcert_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& name, const io::Json& j) {
    const auto p = (dir_ / name).string();
    io::write_text_file(p, j.dump());
    return p;
  }
  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }
  std::string out_dir(const std::string& name) const { return (dir_ / name).string(); }
  io::Json report(const std::string& out) const {
    return io::Json::parse(io::read_text_file(out + "/report.json"));
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

io::Json quadratic_config(double radius) {
  return {{"seed", 1},
          {"objective", {{"type", "quadratic"}, {"curvatures", {1.0, 2.0}}, {"x0", {0.1, -0.1}}}},
          {"certificate", {{"radius", radius}}},
          {"run", {{"max_iter", 200}, {"stop_f_tol", 0.0}}}};
}

}  // namespace

TEST_F(CliTest, CertifyWritesCertificate) {
  const auto out = out_dir("ok");
  EXPECT_EQ(run({"certify", "--config", config("c.json", quadratic_config(1.0)), "--out", out}), cli::kOk);
  const auto cert = io::certificate_from_json(io::Json::parse(io::read_text_file(out + "/certificate.json")));
  EXPECT_GT(cert.eta, 0.0);
  EXPECT_TRUE(report(out)["criterion"]["holds"].get<bool>());
}

TEST_F(CliTest, CertifyCriterionFails) {
  const auto out = out_dir("fail");
  EXPECT_EQ(run({"certify", "--config", config("c.json", quadratic_config(0.01)), "--out", out}),
            cli::kCriterionFailed);
  EXPECT_FALSE(fs::exists(out + "/certificate.json"));
  EXPECT_FALSE(report(out)["criterion"]["holds"].get<bool>());
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EQ(run({"certify", "--config", (dir_ / "missing.json").string()}), cli::kConfigError);
  auto cfg = quadratic_config(1.0);
  cfg["certificate"]["raduis"] = 1.0;
  EXPECT_EQ(run({"certify", "--config", config("typo.json", cfg)}), cli::kConfigError);
  EXPECT_NE(err_.str().find("certificate.raduis"), std::string::npos);
  io::write_text_file((dir_ / "bad.json").string(), "{not json");
  EXPECT_EQ(run({"certify", "--config", (dir_ / "bad.json").string()}), cli::kConfigError);
  EXPECT_EQ(run({"certify"}), cli::kConfigError);
  EXPECT_EQ(run({"frobnicate", "--config", "x"}), cli::kConfigError);
  cfg = quadratic_config(1.0);
  cfg["objective"]["type"] = "rosenbrock";
  EXPECT_EQ(run({"certify", "--config", config("obj.json", cfg)}), cli::kConfigError);
}

TEST_F(CliTest, DescendCertifiedAndUncertified) {
  const auto out = out_dir("cert");
  EXPECT_EQ(run({"descend", "--config", config("c.json", quadratic_config(1.0)), "--out", out}), cli::kOk);
  auto rep = report(out);
  EXPECT_TRUE(rep["all_passed"].get<bool>());
  EXPECT_EQ(rep["run"]["iterations"].get<int>(), 200);
  EXPECT_TRUE(fs::exists(out + "/certificate.json"));

  auto cfg = quadratic_config(1.0);
  cfg.erase("certificate");
  cfg["run"]["eta"] = 0.1;
  const auto out2 = out_dir("plain");
  EXPECT_EQ(run({"descend", "--config", config("p.json", cfg), "--out", out2}), cli::kOk);
  EXPECT_EQ(report(out2)["monitors"], "na");
  const auto csv = io::read_text_file(out2 + "/trace.csv");
  EXPECT_NE(csv.find(",na,na,na,na\n"), std::string::npos);
}

TEST_F(CliTest, DescendWithLoadedCertificate) {
  const auto out = out_dir("first");
  ASSERT_EQ(run({"certify", "--config", config("c.json", quadratic_config(1.0)), "--out", out}), cli::kOk);
  auto cfg = quadratic_config(1.0);
  cfg["certificate"] = {{"path", out + "/certificate.json"}};
  const auto out2 = out_dir("second");
  EXPECT_EQ(run({"descend", "--config", config("l.json", cfg), "--out", out2}), cli::kOk);
  EXPECT_TRUE(report(out2).contains("residual"));
  cfg["objective"]["x0"] = {0.2, 0.0};
  EXPECT_EQ(run({"descend", "--config", config("m.json", cfg), "--out", out2}), cli::kConfigError);
}

TEST_F(CliTest, DescendOversizedStep) {
  auto cfg = quadratic_config(1.0);
  cfg["objective"]["curvatures"] = {1.0, 50.0};
  cfg["run"]["eta_scale"] = 1000.0;
  const auto out = out_dir("big");
  const int code = run({"descend", "--config", config("c.json", cfg), "--out", out});
  EXPECT_TRUE(code == cli::kCriterionFailed || code == cli::kDivergence) << code;
  EXPECT_TRUE(fs::exists(out + "/report.json"));
}

TEST_F(CliTest, DescendDivergence) {
  auto cfg = quadratic_config(1.0);
  cfg.erase("certificate");
  cfg["objective"]["curvatures"] = {100.0, 100.0};
  cfg["run"] = {{"eta", 1.0}, {"max_iter", 100000}, {"stop_f_tol", 0.0}};
  const auto out = out_dir("div");
  EXPECT_EQ(run({"descend", "--config", config("c.json", cfg), "--out", out}), cli::kDivergence);
  EXPECT_EQ(report(out)["error"], "divergence");
}

TEST_F(CliTest, Flow) {
  auto cfg = quadratic_config(1.0);
  cfg["run"] = {{"t_end", 1.0}, {"h", 1e-3}};
  const auto out = out_dir("flow");
  EXPECT_EQ(run({"flow", "--config", config("c.json", cfg), "--out", out}), cli::kOk);
  EXPECT_TRUE(report(out)["all_passed"].get<bool>());
  const auto csv = io::read_text_file(out + "/trace.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,f,grad_norm,dist_x0,exp_bound,ball_ok,rate_ok");
}

TEST_F(CliTest, TrainNnDegenerateData) {
  const io::Json cfg = {{"network", {{"layer_dims", {3, 1}}, {"activation", "tanh"}}},
                        {"data", {{"generate", "gaussian"}, {"n", 6}, {"d", 3}}}};
  EXPECT_EQ(run({"train-nn", "--config", config("c.json", cfg), "--out", out_dir("o")}),
            cli::kDataDegeneracy);
  io::Json cfg2 = cfg;
  cfg2["data"]["generate"] = "orthonormal";
  EXPECT_EQ(run({"train-nn", "--config", config("d.json", cfg2), "--out", out_dir("o")}),
            cli::kDataDegeneracy);
}

TEST_F(CliTest, TrainNnZeroTargets) {
  const io::Json cfg = {
      {"network", {{"layer_dims", {3, 1}}, {"activation", "tanh"}}},
      {"data", {{"generate", "orthonormal"}, {"n", 3}, {"d", 4}, {"zero_targets", true}}}};
  const auto out = out_dir("zero");
  EXPECT_EQ(run({"train-nn", "--config", config("c.json", cfg), "--out", out}), cli::kOk);
  const auto rep = report(out);
  EXPECT_EQ(rep["run"]["iterations"].get<int>(), 0);
  EXPECT_EQ(rep["find_A"]["S0"].get<double>(), 0.0);
}

TEST_F(CliTest, CertifyNetwork) {
  const io::Json cfg = {
      {"seed", 4},
      {"network", {{"layer_dims", {3, 1}}, {"activation", "tanh"}}},
      {"data", {{"generate", "orthonormal"}, {"n", 2}, {"d", 3}}},
      {"certificate", {{"delta", 0.1}}}};
  const auto out = out_dir("net");
  EXPECT_EQ(run({"certify", "--config", config("c.json", cfg), "--out", out}), cli::kOk);
  EXPECT_GE(report(out)["find_A"]["criterion"]["relative_margin"].get<double>(), 0.1);
  EXPECT_TRUE(fs::exists(out + "/params.json"));
}

TEST_F(CliTest, LecunProb) {
  const io::Json cfg = {
      {"network", {{"layer_dims", {4, 1}}, {"activation", "smooth_leaky_relu"}}},
      {"data", {{"generate", "gaussian"}, {"n", 3}, {"d", 6}}},
      {"run", {{"trials", 3}, {"eta", 0.05}, {"budget", 2000}, {"tol", 1e-6}}}};
  const auto out = out_dir("lecun");
  EXPECT_EQ(run({"lecun-prob", "--config", config("c.json", cfg), "--out", out}), cli::kOk);
  const auto csv = io::read_text_file(out + "/trials.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto rep = report(out);
  EXPECT_LE(rep["ci95"][0].get<double>(), rep["theta_hat"].get<double>());
}

TEST_F(CliTest, OracleAlpha) {
  const io::Json cfg = {{"objective", {{"type", "exponential"}, {"x0", {0.4}}}},
                        {"certificate", {{"radius", 0.8}}},
                        {"run", {{"resolution", 10001}}}};
  const auto out = out_dir("alpha");
  EXPECT_EQ(run({"oracle-alpha", "--config", config("c.json", cfg), "--out", out}), cli::kOk);
  const auto rep = report(out);
  EXPECT_NEAR(rep["grid"]["value"].get<double>(), std::exp(-0.4), 1e-3);
  EXPECT_GE(rep["sampled"]["value"].get<double>(), rep["grid"]["value"].get<double>() - 1e-12);
}

TEST_F(CliTest, SameSeedSameBytes) {
  const io::Json cfg = {
      {"seed", 9},
      {"network", {{"layer_dims", {2, 1}}, {"activation", "tanh"}}},
      {"data", {{"generate", "orthonormal"}, {"n", 2}, {"d", 3}}},
      {"run", {{"max_iter", 2000}, {"point_stride", 100}}}};
  const auto c = config("c.json", cfg);
  const auto a = out_dir("a"), b = out_dir("b"), s = out_dir("s");
  const int ca = run({"train-nn", "--config", c, "--out", a});
  const int cb = run({"train-nn", "--config", c, "--out", b});
  EXPECT_EQ(ca, cb);
  for (const char* name : {"certificate.json", "trace.csv", "params.json", "report.json"}) {
    EXPECT_EQ(io::read_text_file(a + "/" + name), io::read_text_file(b + "/" + name)) << name;
  }
  run({"train-nn", "--config", c, "--out", s, "--seed", "10"});
  EXPECT_NE(io::read_text_file(a + "/trace.csv"), io::read_text_file(s + "/trace.csv"));
}
