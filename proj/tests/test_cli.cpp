#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "test_support.hpp"

using namespace sungeo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "sungeo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sungeo_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const Matrix& a) {
    const std::string path = (dir_ / name).string();
    cli::write_matrix_file(path, a);
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

Matrix read_report_matrix(const json& j) { return cli::matrix_from_json(j); }

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(MatrixFile, RoundTripIsBitExact) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(u(rng) * 1e-7, u(rng));
    const Matrix b = cli::parse_matrix_text(cli::write_matrix_text(a));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        EXPECT_EQ(a(i, j).real(), b(i, j).real());
        EXPECT_EQ(a(i, j).imag(), b(i, j).imag());
      }
  }
}

TEST(MatrixFile, RejectsMalformedDocuments) {
  EXPECT_THROW(cli::parse_matrix_text("not json"), cli::InputError);
  EXPECT_THROW(cli::parse_matrix_text(R"({"n": 2, "matrix": [[[1,0],[0,0]]]})"), cli::InputError);
  EXPECT_THROW(cli::parse_matrix_text(R"({"n": 1, "matrix": [[[1]]]})"), cli::InputError);
  EXPECT_THROW(cli::parse_matrix_text(R"({"n": 0, "matrix": []})"), cli::InputError);
  EXPECT_NO_THROW(cli::parse_matrix_text(R"({"n": 1, "matrix": [[[1, 0]]]})"));
}

TEST_F(CliTest, DistReportsDiameterForAntipodalPair) {
  const auto p = write("i2.json", Matrix::Identity(2, 2));
  const auto q = write("m2.json", -Matrix::Identity(2, 2));
  const CliRun r = run({"dist", p, q});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["command"], "dist");
  EXPECT_NEAR(j["outputs"]["distance"].get<double>(), kPi * std::sqrt(2.0), 1e-9);
  EXPECT_EQ(j["outputs"]["zeta"], 1);
  EXPECT_EQ(j["outputs"]["s"], 2);
  EXPECT_NEAR(j["outputs"]["m"].get<double>(), 2 * kPi * kPi, 1e-9);
  EXPECT_TRUE(j["residuals"].contains("eig"));

  const CliRun same = run({"dist", p, p});
  EXPECT_EQ(same.report()["outputs"]["distance"].get<double>(), 0.0);
}

TEST_F(CliTest, InvalidInputExitsTwo) {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = 0.3;
  const auto b = write("bad.json", bad);
  const auto p = write("i2.json", Matrix::Identity(2, 2));
  const CliRun r = run({"dist", p, b});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("not_unitary"), std::string::npos);

  std::ofstream(path("garbage.json")) << "{\"n\": 2";
  EXPECT_EQ(run({"dist", p, path("garbage.json")}).code, 2);
  EXPECT_EQ(run({"dist", p, path("missing.json")}).code, 2);
  EXPECT_EQ(run({"diam", "1"}).code, 2);
  EXPECT_EQ(run({"geo", p, p, "--t", "0,abc"}).code, 2);
}

TEST_F(CliTest, UsageErrorsExitFour) {
  EXPECT_EQ(run({}).code, 4);
  EXPECT_EQ(run({"frobnicate"}).code, 4);
  EXPECT_EQ(run({"dist", "only_one.json"}).code, 4);
  EXPECT_EQ(run({"diam", "notanumber"}).code, 4);
  EXPECT_EQ(run({"plog", "x.json", "--tol", "-1"}).code, 4);
}

TEST_F(CliTest, LogEmitsMinimalLogarithm) {
  const auto p = write("i2.json", Matrix::Identity(2, 2));
  const auto q = write("m2.json", -Matrix::Identity(2, 2));
  const CliRun r = run({"log", p, q, "--out", path("x.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_NEAR(j["outputs"]["norm"].get<double>(), kPi * std::sqrt(2.0), 1e-12);
  const Matrix x = read_report_matrix(j["outputs"]["X"]);
  const HermitianEigen he = hermitian_eig(Complex(0.0, -1.0) * x);
  EXPECT_NEAR(he.values(0), -kPi, 1e-12);
  EXPECT_NEAR(he.values(1), kPi, 1e-12);
  EXPECT_EQ(cli::read_matrix_file(path("x.json")), x);

  const CliRun same = run({"log", p, p});
  EXPECT_EQ(read_report_matrix(same.report()["outputs"]["X"]).norm(), 0.0);
}

TEST_F(CliTest, LogRoundTripResidualOnRandomPair) {
  const auto p = write("p.json", random_special_unitary(4, 1).matrix());
  const auto q = write("q.json", random_special_unitary(4, 2).matrix());
  const CliRun r = run({"log", p, q});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(r.report()["residuals"]["roundtrip"].get<double>(), 1e-8);
}

TEST_F(CliTest, GeoEndpointsMidpointAndFlags) {
  const auto p = write("i2.json", Matrix::Identity(2, 2));
  const auto q = write("m2.json", -Matrix::Identity(2, 2));
  const CliRun r = run({"geo", p, q, "--t", "0,0.5,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["outputs"]["unique"], false);
  EXPECT_EQ(j["outputs"]["grassmannian"], "Gr(1;C^2)");
  const auto& pts = j["outputs"]["points"];
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_LE((read_report_matrix(pts[0]["point"]) - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LE((read_report_matrix(pts[2]["point"]) + Matrix::Identity(2, 2)).norm(), 1e-14);
  Matrix mid = Matrix::Zero(2, 2);
  mid(0, 0) = Complex(0.0, 1.0);
  mid(1, 1) = Complex(0.0, -1.0);
  const Matrix got = read_report_matrix(pts[1]["point"]);
  EXPECT_LE(std::min((got - mid).norm(), (got - mid.adjoint()).norm()), 1e-14);

  const auto a = write("a.json", random_special_unitary(3, 3).matrix());
  const auto b = write("b.json", random_special_unitary(3, 4).matrix());
  const json u = run({"geo", a, b, "--t", "1"}).report();
  EXPECT_EQ(u["outputs"]["unique"], true);
  EXPECT_TRUE(u["outputs"]["grassmannian"].is_null());
  EXPECT_LE((read_report_matrix(u["outputs"]["points"][0]["point"]) -
             random_special_unitary(3, 4).matrix()).norm(), 1e-7 * 3);
}

TEST_F(CliTest, PlogClassifies) {
  const json m = run({"plog", write("m2.json", -Matrix::Identity(2, 2))}).report();
  EXPECT_EQ(m["outputs"]["nonempty"], true);
  EXPECT_EQ(m["outputs"]["grassmannian"], "Gr(1;C^2)");
  const json c = run({"plog", write("c3.json", sungeo::testing::scalar_su(3, 2 * kPi / 3).matrix())}).report();
  EXPECT_EQ(c["outputs"]["nonempty"], false);
  EXPECT_EQ(c["outputs"]["grassmannian"], "empty");
  const json i = run({"plog", write("i4.json", Matrix::Identity(4, 4))}).report();
  EXPECT_EQ(i["outputs"]["nonempty"], true);
  EXPECT_EQ(i["outputs"]["is_singleton"], true);
}

TEST_F(CliTest, DiamAndDiametralPoints) {
  const json d4 = run({"diam", "4"}).report();
  EXPECT_NEAR(d4["outputs"]["diameter"].get<double>(), 2 * kPi, 1e-15);
  const CliRun r3 = run({"diam", "3", "--point", write("i3.json", Matrix::Identity(3, 3))});
  ASSERT_EQ(r3.code, 0) << r3.err;
  const json d3 = r3.report();
  ASSERT_EQ(d3["outputs"]["points"].size(), 2u);
  EXPECT_LE((read_report_matrix(d3["outputs"]["points"][0]) -
             sungeo::testing::scalar_su(3, 2 * kPi / 3).matrix()).norm(), 1e-15);
  EXPECT_LE((read_report_matrix(d3["outputs"]["points"][1]) -
             sungeo::testing::scalar_su(3, -2 * kPi / 3).matrix()).norm(), 1e-15);
  EXPECT_LT(d3["residuals"]["distance_minus_diameter"].get<double>(), 1e-9);
  EXPECT_EQ(run({"diam", "4", "--point", path("i3.json")}).code, 2);
}

TEST_F(CliTest, RandomIsDeterministicAndValid) {
  ASSERT_EQ(run({"random", "3", "--seed", "7", "--out", path("a.json")}).code, 0);
  ASSERT_EQ(run({"random", "3", "--seed", "7", "--out", path("b.json")}).code, 0);
  ASSERT_EQ(run({"random", "3", "--seed", "8", "--out", path("c.json")}).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const Matrix a = cli::read_matrix_file(path("a.json"));
  const Matrix c = cli::read_matrix_file(path("c.json"));
  const SpecialUnitary q = validate_special_unitary(a);
  EXPECT_LT(q.unitarity_residual(), 1e-12);
  EXPECT_LT(q.det_residual(), 1e-12);
  EXPECT_GT((a - c).norm(), 1e-6);
}

TEST_F(CliTest, ThetaDumpsDescriptorAndSamples) {
  const auto q = write("m2.json", -Matrix::Identity(2, 2));
  const CliRun r = run({"theta", q, "--samples", "5", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["outputs"]["is_singleton"], false);
  EXPECT_EQ(j["outputs"]["nu1"], 1);
  EXPECT_EQ(j["outputs"]["nu2"], 1);
  EXPECT_EQ(j["outputs"]["samples"].size(), 5u);
  EXPECT_LT(j["residuals"]["exp"].get<double>(), 1e-12);
  EXPECT_LT(j["residuals"]["norm_sq_minus_m"].get<double>(), 1e-10);

  const json s = run({"theta", write("d.json", sungeo::testing::diag_phases({0.1, 0.2, -0.3}).matrix()),
                      "--samples", "3"}).report();
  EXPECT_EQ(s["outputs"]["is_singleton"], true);
  EXPECT_TRUE(s["outputs"]["samples"].empty());
}

TEST_F(CliTest, OracleCrossChecks) {
  const auto q = write("q.json", random_special_unitary(4, 12).matrix());
  const CliRun r = run({"oracle", q});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["outputs"]["agree"], true);
  EXPECT_EQ(j["outputs"]["minimizer_spread_at_most_one"], true);
}

TEST_F(CliTest, ToleranceFlagAndEnvironment) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 0) = std::polar(1.0, 1e-6);  // det off by ~1e-6
  const auto p = write("near.json", a);
  EXPECT_EQ(run({"plog", p}).code, 2);
  EXPECT_EQ(run({"plog", p, "--tol", "1e-5"}).code, 0);
  ::setenv("SUNGEO_TOL", "1e-5", 1);
  EXPECT_EQ(run({"plog", p}).code, 0);
  EXPECT_EQ(run({"plog", p, "--tol", "1e-9"}).code, 2);
  ::setenv("SUNGEO_TOL", "bogus", 1);
  EXPECT_EQ(run({"plog", p}).code, 2);
  ::unsetenv("SUNGEO_TOL");
}

#ifdef SUNGEO_CLI_PATH
TEST_F(CliTest, BinaryExitCodes) {
  const std::string bin = SUNGEO_CLI_PATH;
  auto sh = [&](const std::string& args) {
    const int status = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  const auto p = write("i2.json", Matrix::Identity(2, 2));
  EXPECT_EQ(sh("dist " + p + " " + p), 0);
  EXPECT_EQ(sh("diam 1"), 2);
  EXPECT_EQ(sh("nosuchcommand"), 4);
  EXPECT_EQ(sh("random 3 --seed 7 --out " + path("x.json")), 0);
  EXPECT_EQ(sh("random 3 --seed 7 --out " + path("y.json")), 0);
  EXPECT_EQ(slurp(path("x.json")), slurp(path("y.json")));
}
#endif
