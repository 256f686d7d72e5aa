#pragma once

// Subcommands of the sungeo CLI. Each prints one JSON report on stdout.
// Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 usage error.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matrix_file.hpp"
#include "sungeo/sungeo.hpp"

namespace sungeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitUsage = 4;

using nlohmann::json;

struct Options {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string out;
  std::string t_list = "0,0.5,1";
  int samples = 0;
  std::string point;
  int box = 3;
  std::vector<std::string> files;
  int n = 0;
};

namespace detail {

/// --tol wins, then SUNGEO_TOL, then the order-scaled defaults.
inline Tolerances resolve_tolerances(const Options& opt, Eigen::Index n) {
  if (opt.tol) return Tolerances::from_group(*opt.tol);
  if (const char* env = std::getenv("SUNGEO_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw InputError("SUNGEO_TOL must be a positive number");
    }
    return Tolerances::from_group(v);
  }
  return Tolerances::for_order(n);
}

inline json tolerances_json(const Tolerances& t) {
  return {{"group", t.group}, {"alg", t.alg}, {"eig", t.eig}, {"cluster", t.cluster},
          {"zeta", t.zeta}};
}

inline SpecialUnitary load_special_unitary(const std::string& path, const Options& opt,
                                           Tolerances& tol_out) {
  const Matrix a = read_matrix_file(path);
  tol_out = resolve_tolerances(opt, a.rows());
  return validate_special_unitary(a, tol_out.group);
}

inline std::vector<double> parse_t_list(const std::string& text) {
  std::vector<double> ts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0' || !std::isfinite(v)) {
      throw InputError("bad --t entry '" + item + "'");
    }
    ts.push_back(v);
  }
  if (ts.empty()) throw InputError("--t needs at least one value");
  return ts;
}

inline json spectrum_json(const SpectralData& sd) {
  return {{"args", sd.args}, {"zeta", sd.zeta}, {"s", sd.s}};
}

inline json theta_json(const ThetaDescriptor& td) {
  json j = {{"zeta", td.zeta},
            {"oriented", td.oriented},
            {"is_singleton", td.is_singleton},
            {"m", td.m},
            {"grassmannian", td.grassmannian()}};
  j["beta_arg"] = td.beta_arg ? json(*td.beta_arg) : json(nullptr);
  j["nu1"] = td.nu1 ? json(*td.nu1) : json(nullptr);
  j["nu2"] = td.nu2 ? json(*td.nu2) : json(nullptr);
  return j;
}

inline json base_report(const std::string& command, json inputs) {
  return {{"command", command},
          {"inputs", std::move(inputs)},
          {"outputs", json::object()},
          {"residuals", json::object()}};
}

inline double roundtrip_residual(const SpecialUnitary& p, const SkewHermitianTraceless& x,
                                 const SpecialUnitary& q) {
  return (p.matrix() * expm_skew(x).matrix() - q.matrix()).norm();
}

inline double skew_residual(const SkewHermitianTraceless& x) {
  return (x.matrix() + x.matrix().adjoint()).norm() + std::abs(x.matrix().trace());
}

inline json cmd_dist(const Options& opt) {
  Tolerances tol;
  const SpecialUnitary p = load_special_unitary(opt.files.at(0), opt, tol);
  const SpecialUnitary q = load_special_unitary(opt.files.at(1), opt, tol);
  const GeodesicFamily fam = geodesic_family(p, q, tol);
  json r = base_report("dist", {{"P", opt.files[0]}, {"Q", opt.files[1]},
                                {"tolerances", tolerances_json(tol)}});
  r["outputs"] = spectrum_json(fam.spectrum);
  r["outputs"]["distance"] = fam.distance;
  r["outputs"]["m"] = fam.theta.m;
  r["residuals"] = {{"unitarity_P", p.unitarity_residual()},
                    {"unitarity_Q", q.unitarity_residual()},
                    {"eig", fam.spectrum.eig_residual},
                    {"zeta", fam.spectrum.zeta_residual}};
  return r;
}

inline json cmd_log(const Options& opt) {
  Tolerances tol;
  const SpecialUnitary p = load_special_unitary(opt.files.at(0), opt, tol);
  const SpecialUnitary q = load_special_unitary(opt.files.at(1), opt, tol);
  const GeodesicFamily fam = geodesic_family(p, q, tol);
  const SkewHermitianTraceless& x = fam.canonical.velocity;
  // Emitted matrices must re-validate.
  validate_skew(x.matrix(), tol.alg);
  if (!opt.out.empty()) write_matrix_file(opt.out, x.matrix());
  json r = base_report("log", {{"P", opt.files[0]}, {"Q", opt.files[1]}, {"out", opt.out},
                               {"tolerances", tolerances_json(tol)}});
  r["outputs"] = {{"X", matrix_to_json(x.matrix())},
                  {"norm", fam.canonical.length},
                  {"distance", fam.distance},
                  {"unique", fam.unique}};
  r["residuals"] = {{"roundtrip", roundtrip_residual(p, x, q)},
                    {"skew", skew_residual(x)},
                    {"eig", fam.spectrum.eig_residual}};
  return r;
}

inline json cmd_geo(const Options& opt) {
  Tolerances tol;
  const SpecialUnitary p = load_special_unitary(opt.files.at(0), opt, tol);
  const SpecialUnitary q = load_special_unitary(opt.files.at(1), opt, tol);
  const std::vector<double> ts = parse_t_list(opt.t_list);
  const GeodesicFamily fam = geodesic_family(p, q, tol);
  json points = json::array();
  double max_unitarity = 0.0;
  for (double t : ts) {
    const SpecialUnitary g = geodesic_eval(fam.canonical, t);
    max_unitarity = std::max(max_unitarity, g.unitarity_residual());
    points.push_back({{"t", t}, {"point", matrix_to_json(g.matrix())}});
  }
  json r = base_report("geo", {{"P", opt.files[0]}, {"Q", opt.files[1]}, {"t", ts},
                               {"tolerances", tolerances_json(tol)}});
  r["outputs"] = {{"unique", fam.unique},
                  {"grassmannian", fam.unique ? json(nullptr) : json(fam.theta.grassmannian())},
                  {"distance", fam.distance},
                  {"points", std::move(points)}};
  r["residuals"] = {{"endpoint", (geodesic_eval(fam.canonical, 1.0).matrix() - q.matrix()).norm()},
                    {"max_unitarity", max_unitarity},
                    {"eig", fam.spectrum.eig_residual}};
  return r;
}

inline json cmd_plog(const Options& opt) {
  Tolerances tol;
  const SpecialUnitary q = load_special_unitary(opt.files.at(0), opt, tol);
  const SpectralData sd = spectral_summary(q, tol);
  const PlogStatus st = plog_status(sd);
  json r = base_report("plog", {{"Q", opt.files[0]}, {"tolerances", tolerances_json(tol)}});
  r["outputs"] = spectrum_json(sd);
  r["outputs"]["nonempty"] = st.nonempty;
  r["outputs"]["is_singleton"] = st.is_singleton;
  r["outputs"]["grassmannian"] = st.label();
  r["outputs"]["m"] = m_value(sd);
  r["residuals"] = {{"eig", sd.eig_residual}, {"zeta", sd.zeta_residual}};
  return r;
}

inline json cmd_diam(const Options& opt) {
  json r = base_report("diam", {{"n", opt.n}, {"point", opt.point}});
  r["outputs"]["diameter"] = diameter(opt.n);
  if (!opt.point.empty()) {
    Tolerances tol;
    const SpecialUnitary p = load_special_unitary(opt.point, opt, tol);
    if (p.order() != opt.n) throw InputError("--point order does not match n");
    const DiametralReport rep = diametral_points(p);
    json pts = json::array();
    double worst = 0.0;
    for (const auto& d : rep.points) {
      pts.push_back(matrix_to_json(d.matrix()));
      worst = std::max(worst, std::fabs(distance(p, d, tol) - rep.diameter));
    }
    r["inputs"]["tolerances"] = tolerances_json(tol);
    r["outputs"]["points"] = std::move(pts);
    r["residuals"]["distance_minus_diameter"] = worst;
  }
  return r;
}

inline json cmd_random(const Options& opt) {
  if (opt.n < 1) throw InputError("n must be positive");
  const SpecialUnitary q = random_special_unitary(opt.n, opt.seed);
  if (!opt.out.empty()) write_matrix_file(opt.out, q.matrix());
  json r = base_report("random", {{"n", opt.n}, {"seed", opt.seed}, {"out", opt.out}});
  r["outputs"]["Q"] = matrix_to_json(q.matrix());
  r["residuals"] = {{"unitarity", q.unitarity_residual()}, {"det", q.det_residual()}};
  return r;
}

inline json cmd_theta(const Options& opt) {
  Tolerances tol;
  const SpecialUnitary q = load_special_unitary(opt.files.at(0), opt, tol);
  if (opt.samples < 0) throw InputError("--samples must be nonnegative");
  const SpectralData sd = spectral_summary(q, tol);
  const ThetaDescriptor td = theta_descriptor(sd);
  json r = base_report("theta", {{"Q", opt.files[0]}, {"samples", opt.samples},
                                 {"seed", opt.seed}, {"tolerances", tolerances_json(tol)}});
  r["outputs"] = theta_json(td);
  r["outputs"]["spectrum"] = spectrum_json(sd);
  r["outputs"]["base_log"] = matrix_to_json(td.base_log.matrix());
  const SpecialUnitary id = SpecialUnitary::identity(q.order());
  double worst_exp = roundtrip_residual(id, td.base_log, q);
  double worst_norm = std::fabs(std::pow(frobenius_norm(td.base_log.matrix()), 2) - td.m);
  json samples = json::array();
  if (!td.is_singleton && opt.samples > 0) {
    std::mt19937_64 rng(opt.seed);
    for (int i = 0; i < opt.samples; ++i) {
      const SkewHermitianTraceless x = random_theta_sample(td, q, rng);
      validate_skew(x.matrix(), tol.alg);
      worst_exp = std::max(worst_exp, roundtrip_residual(id, x, q));
      worst_norm = std::max(worst_norm, std::fabs(std::pow(frobenius_norm(x.matrix()), 2) - td.m));
      samples.push_back(matrix_to_json(x.matrix()));
    }
  }
  r["outputs"]["samples"] = std::move(samples);
  r["residuals"] = {{"exp", worst_exp}, {"norm_sq_minus_m", worst_norm},
                    {"eig", sd.eig_residual}};
  return r;
}

inline json cmd_oracle(const Options& opt) {
  Tolerances tol;
  const SpecialUnitary q = load_special_unitary(opt.files.at(0), opt, tol);
  if (opt.box < 1) throw InputError("--box must be positive");
  const SpectralData sd = spectral_summary(q, tol);
  const LatticeMinimum lm = brute_force_m(sd.args, sd.zeta, opt.box, tol.zeta);
  const double m = m_value(sd);
  bool spread_ok = true;
  bool shape_ok = true;
  for (const auto& k : lm.minimizers) {
    const auto [lo, hi] = std::minmax_element(k.begin(), k.end());
    spread_ok = spread_ok && (*hi - *lo <= 1);
    if (sd.zeta >= 0) {
      const auto neg = std::count(k.begin(), k.end(), -1);
      const auto zero = std::count(k.begin(), k.end(), 0);
      shape_ok = shape_ok && neg == sd.zeta && zero == static_cast<long>(k.size()) - sd.zeta;
    }
  }
  json r = base_report("oracle", {{"Q", opt.files[0]}, {"box", opt.box},
                                  {"tolerances", tolerances_json(tol)}});
  r["outputs"] = spectrum_json(sd);
  r["outputs"]["m"] = m;
  r["outputs"]["brute_force_min"] = lm.min;
  r["outputs"]["minimizers"] = lm.minimizers;
  r["outputs"]["agree"] = std::fabs(m - lm.min) <= 1e-9 * std::max(1.0, m);
  r["outputs"]["minimizer_spread_at_most_one"] = spread_ok;
  r["outputs"]["minimizers_zero_minus_one"] = sd.zeta >= 0 ? json(shape_ok) : json(nullptr);
  r["residuals"] = {{"m_minus_oracle", std::fabs(m - lm.min)}, {"eig", sd.eig_residual}};
  return r;
}

}  // namespace detail

/// Parses argv, dispatches, prints the report. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesic geometry of SU(n) under the Frobenius metric", "sungeo"};
  app.require_subcommand(1);
  Options opt;

  auto add_tol = [&](CLI::App* sc) {
    sc->add_option("--tol", opt.tol, "group-membership tolerance (others scale from it)")
        ->check(CLI::PositiveNumber);
  };
  auto add_pair = [&](CLI::App* sc) {
    sc->add_option("P", opt.files, "matrix files P and Q")->required()->expected(2);
    add_tol(sc);
  };

  CLI::App* dist = app.add_subcommand("dist", "geodesic distance d(P, Q)");
  add_pair(dist);
  CLI::App* log = app.add_subcommand("log", "minimal X with P exp(X) = Q");
  add_pair(log);
  log->add_option("--out", opt.out, "write X as a matrix file");
  CLI::App* geo = app.add_subcommand("geo", "points P exp(tX) on the canonical geodesic");
  add_pair(geo);
  geo->add_option("--t", opt.t_list, "comma-separated parameters");
  CLI::App* plog = app.add_subcommand("plog", "generalized principal logarithms of Q");
  plog->add_option("Q", opt.files, "matrix file")->required()->expected(1);
  add_tol(plog);
  CLI::App* diam = app.add_subcommand("diam", "diameter of SU(n) and diametral points");
  diam->add_option("n", opt.n, "order")->required();
  diam->add_option("--point", opt.point, "matrix file P");
  add_tol(diam);
  CLI::App* random = app.add_subcommand("random", "Haar-random element of SU(n)");
  random->add_option("n", opt.n, "order")->required();
  random->add_option("--seed", opt.seed, "generator seed");
  random->add_option("--out", opt.out, "write the matrix file here");
  CLI::App* theta = app.add_subcommand("theta", "set of minimal logarithms of Q");
  theta->add_option("Q", opt.files, "matrix file")->required()->expected(1);
  theta->add_option("--samples", opt.samples, "number of sampled logarithms");
  theta->add_option("--seed", opt.seed, "generator seed for samples");
  add_tol(theta);
  CLI::App* oracle = app.add_subcommand("oracle", "cross-check m(Q) against lattice enumeration");
  oracle->add_option("Q", opt.files, "matrix file")->required()->expected(1);
  oracle->add_option("--box", opt.box, "enumeration box half-width K");
  add_tol(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    json report;
    if (dist->parsed()) report = detail::cmd_dist(opt);
    else if (log->parsed()) report = detail::cmd_log(opt);
    else if (geo->parsed()) report = detail::cmd_geo(opt);
    else if (plog->parsed()) report = detail::cmd_plog(opt);
    else if (diam->parsed()) report = detail::cmd_diam(opt);
    else if (random->parsed()) report = detail::cmd_random(opt);
    else if (theta->parsed()) report = detail::cmd_theta(opt);
    else report = detail::cmd_oracle(opt);
    out << report.dump(2) << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << (is_numerical(e.code()) ? "numerical failure: " : "invalid input: ") << e.what()
        << "\n";
    return is_numerical(e.code()) ? kExitNumerical : kExitInvalidInput;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  }
}

}  // namespace sungeo::cli
