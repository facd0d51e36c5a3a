// SPDX-License-Identifier: Apache-2.0
//
// dirac-graph: spectra of Dirac operators on metric graphs with general
// (possibly non-self-adjoint) transmission conditions.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "CLI11.hpp"

#include "diracgraph/errors.hpp"
#include "diracgraph/io.hpp"
#include "diracgraph/oracle.hpp"
#include "diracgraph/solver.hpp"
#include "diracgraph/star.hpp"
#include "diracgraph/symmetry.hpp"
#include "diracgraph/transmission.hpp"

namespace
{

using diracgraph::Complex;
using diracgraph::Json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

double default_tolerance()
{
  if (const char* env = std::getenv("DIRAC_GRAPH_TOL"))
  {
    try
    {
      const double tol = std::stod(env);
      if (tol > 0.0 && std::isfinite(tol))
      {
        return tol;
      }
    }
    catch (const std::exception&)
    {
    }
    std::cerr << "warning: ignoring invalid DIRAC_GRAPH_TOL='" << env << "'\n";
  }
  return 1e-10;
}

void write_output(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-")
  {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out)
  {
    throw diracgraph::InputError("cannot open output file '" + path + "'");
  }
  out << text;
}

diracgraph::Rectangle parse_region(const std::vector<double>& r)
{
  return diracgraph::Rectangle{r[0], r[1], r[2], r[3]};
}

// Numerical kernel dimension of the characteristic matrix.  The floor is
// relative to the size of the two assembled terms, so a matrix whose entries
// all cancel (an eigenvalue of full multiplicity) reports a full kernel.
int kernel_dim_of(const diracgraph::SpectralProblem& p, Complex z)
{
  const diracgraph::Permutation& w = p.conditions.W;
  const diracgraph::Matrix t1 = w.right_apply(p.conditions.A);
  const diracgraph::Matrix t2 = p.conditions.B * w.left_apply(diracgraph::assemble_Q(p, z));
  const double scale = t1.cwiseAbs().maxCoeff() + t2.cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<diracgraph::Matrix> svd(t1 - t2);
  const auto& sigma = svd.singularValues();
  const double floor = 1e-7 * std::max({sigma(0), scale, 1e-300});
  int dim = 0;
  for (int i = 0; i < sigma.size(); i++)
  {
    dim += (sigma(i) <= floor);
  }
  return dim;
}

int cmd_spectrum(const std::string& problem_path, const std::vector<double>& region_v,
                 double tol, int jobs, std::uint64_t seed, const std::string& output)
{
  const diracgraph::SpectralProblem p = diracgraph::load_problem(problem_path);
  diracgraph::SolverOptions opts;
  opts.jobs = jobs;
  opts.seed = seed;
  const diracgraph::SpectralReport report =
      diracgraph::find_eigenvalues(p, parse_region(region_v), tol, opts);
  Json j = diracgraph::report_to_json(report);
  j["tolerance"] = tol;
  write_output(output, j.dump(2) + "\n");
  return report.complete ? kExitOk : kExitPartial;
}

int cmd_classify(const std::string& problem_path, const std::string& output)
{
  const diracgraph::SpectralProblem p = diracgraph::load_problem(problem_path);
  Json j;
  j["self_adjointness"] = diracgraph::self_adjointness_to_json(
      diracgraph::is_self_adjoint(p.conditions));
  j["T_symmetric"] = diracgraph::is_T_symmetric(p.conditions);
  j["C_symmetric"] = diracgraph::is_C_symmetric(p.graph, p.conditions);
  const diracgraph::RankReport rank =
      diracgraph::rank_deficiency(p.conditions.A, p.conditions.B);
  j["rank"] = Json{{"full", rank.full}, {"value", rank.rank}};
  j["essential_spectrum"] = diracgraph::essential_to_json(diracgraph::essential_spectrum(p));
  write_output(output, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_scan(const std::string& problem_path, const std::vector<double>& region_v, int nre,
             int nim, const std::string& output)
{
  const diracgraph::SpectralProblem p = diracgraph::load_problem(problem_path);
  const diracgraph::Rectangle region = parse_region(region_v);
  if (nre < 2 || nim < 2)
  {
    throw diracgraph::InputError("scan requires at least a 2x2 grid");
  }

  const double m = p.graph.mass();
  const bool has_external = p.graph.num_external() > 0;
  const double window = std::max(std::abs(region.re0), std::abs(region.re1)) + 1.0;
  const std::vector<double> ref_points =
      diracgraph::graph_reference_eigenvalues(p.graph, window);
  auto exclusion_radius = [&](std::size_t i) {
    double gap = 1.0;
    if (i > 0)
    {
      gap = std::min(gap, ref_points[i] - ref_points[i - 1]);
    }
    if (i + 1 < ref_points.size())
    {
      gap = std::min(gap, ref_points[i + 1] - ref_points[i]);
    }
    if (has_external && std::abs(ref_points[i]) < m)
    {
      gap = std::min(gap, m - std::abs(ref_points[i]));
    }
    return 1e-4 * gap;
  };

  std::string csv = "re,im,abs_F,arg_F,flag\n";
  for (int iy = 0; iy < nim; iy++)
  {
    const double y = region.im0 + region.height() * iy / (nim - 1);
    for (int ix = 0; ix < nre; ix++)
    {
      const double x = region.re0 + region.width() * ix / (nre - 1);
      const Complex z(x, y);
      bool flagged = false;
      if (has_external && std::abs(y) <= 1e-6 && std::abs(x) >= m - 1e-6)
      {
        flagged = true;
      }
      for (std::size_t i = 0; i < ref_points.size() && !flagged; i++)
      {
        flagged = std::abs(z - Complex(ref_points[i], 0.0)) <= exclusion_radius(i);
      }
      double abs_f = std::nan("");
      double arg_f = std::nan("");
      try
      {
        const Complex f = diracgraph::char_fn(p, z);
        abs_f = std::abs(f);
        arg_f = std::arg(f);
      }
      catch (const diracgraph::Error&)
      {
        flagged = true;
      }
      char line[160];
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%d\n", x, y, abs_f, arg_f,
                    flagged ? 1 : 0);
      csv += line;
    }
  }
  write_output(output, csv);
  return kExitOk;
}

int cmd_star(const std::string& problem_path, std::uint64_t seed, const std::string& output)
{
  const diracgraph::SpectralProblem p = diracgraph::load_problem(problem_path);
  const diracgraph::MetricGraph& g = p.graph;
  if (g.num_vertices() != 1 || g.num_internal() != 0)
  {
    throw diracgraph::InputError(
        "the star command requires a single-vertex graph with external edges only");
  }
  for (const diracgraph::Edge& e : g.edges())
  {
    if (std::get<diracgraph::ExternalEdge>(e).rho != -1)
    {
      throw diracgraph::InputError(
          "the star command requires all external edges outgoing (orientation -1)");
    }
  }
  const diracgraph::StarSpectrum s =
      diracgraph::star_point_spectrum(p.conditions.A, p.conditions.B, g.mass(), seed);
  Json j = diracgraph::star_to_json(s);
  Json verdicts = Json::array();
  for (double z0 : s.reference_candidates)
  {
    const diracgraph::ReferencePointVerdict v = diracgraph::check_reference_point(p, z0);
    Json jv;
    jv["z0"] = v.z0;
    jv["eigenvalue"] = v.eigenvalue;
    jv["multiplicity"] = v.multiplicity;
    verdicts.push_back(jv);
  }
  j["reference_candidate_verdicts"] = verdicts;
  write_output(output, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const std::string& problem_path, const std::vector<double>& z_v,
               const std::string& output)
{
  const diracgraph::SpectralProblem p = diracgraph::load_problem(problem_path);
  const Complex z(z_v[0], z_v[1]);
  Json j;
  j["z"] = diracgraph::complex_to_json(z);
  bool on_reference = false;
  try
  {
    const Complex f = diracgraph::char_fn(p, z);
    j["char_fn"] = Json{{"abs", std::abs(f)}, {"arg", std::arg(f)}};
    j["kernel_dim"] = kernel_dim_of(p, z);
  }
  catch (const diracgraph::Error& e)
  {
    on_reference = true;
    j["char_fn"] = nullptr;
    j["char_fn_unavailable"] = e.what();
  }
  const int oracle_dim = diracgraph::oracle_kernel_dim(p, z);
  j["oracle_kernel_dim"] = oracle_dim;
  j["on_reference_spectrum"] = on_reference;
  j["eigenvalue"] = oracle_dim > 0;
  write_output(output, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_flip(const std::string& problem_path, const std::vector<std::string>& edges,
             const std::string& output, const std::string& report_output)
{
  const diracgraph::SpectralProblem p = diracgraph::load_problem(problem_path);
  const diracgraph::ParityResult flipped = diracgraph::parity_transform(p, edges);
  if (output.empty())
  {
    throw diracgraph::InputError("flip requires --output for the transformed problem file");
  }
  write_output(output, diracgraph::problem_to_json(flipped.problem).dump(2) + "\n");

  // Consistency check: the characteristic functions must agree up to the
  // sign det S at every point where both are defined.
  const double s = p.graph.mass() + 1.0;
  double worst = 0.0;
  int checked = 0;
  for (int i = 0; i < 8; i++)
  {
    const double theta = 0.3 + 0.7 * i;
    const Complex z = s * Complex(0.8 * std::cos(theta), 0.6 + 0.5 * std::sin(theta));
    try
    {
      const Complex f = diracgraph::char_fn(p, z);
      const Complex f2 = diracgraph::char_fn(flipped.problem, z);
      const double denom = std::max(std::abs(f), 1e-300);
      worst = std::max(worst,
                       std::abs(f2 - static_cast<double>(flipped.sign) * f) / denom);
      checked++;
    }
    catch (const diracgraph::Error&)
    {
    }
  }
  Json j;
  j["sign"] = flipped.sign;
  j["output"] = output;
  j["samples_checked"] = checked;
  j["max_relative_deviation"] = worst;
  const bool consistent = checked > 0 && worst < 1e-8;
  j["consistent"] = consistent;
  write_output(report_output, j.dump(2) + "\n");
  return consistent ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Spectra of Dirac operators on metric graphs"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string output = "-";
  std::vector<double> region_v;
  std::vector<double> z_v;
  std::vector<std::string> flip_edges;
  std::string flip_problem_output;
  double tol = default_tolerance();
  int jobs = 1;
  int nre = 121, nim = 121;
  std::uint64_t seed = 20260814ull;

  auto add_problem = [&](CLI::App* cmd) {
    cmd->add_option("-p,--problem", problem_path, "problem JSON file")->required();
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", output, "output file ('-' for stdout)");
  };
  auto add_region = [&](CLI::App* cmd) {
    cmd->add_option("--region", region_v, "search rectangle: re0 re1 im0 im1")
        ->expected(4)
        ->required();
  };

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "point spectrum in a rectangle (argument-principle search)");
  add_problem(spectrum);
  add_region(spectrum);
  add_output(spectrum);
  spectrum->add_option("--tol", tol, "eigenvalue tolerance (env DIRAC_GRAPH_TOL)");
  spectrum->add_option("--jobs", jobs, "worker threads");
  spectrum->add_option("--seed", seed, "reproducibility seed");

  CLI::App* classify = app.add_subcommand(
      "classify", "self-adjointness, T/C symmetry, rank, essential spectrum");
  add_problem(classify);
  add_output(classify);

  CLI::App* scan = app.add_subcommand("scan", "CSV grid scan of the characteristic function");
  add_problem(scan);
  add_region(scan);
  add_output(scan);
  scan->add_option("--nre", nre, "grid points along Re");
  scan->add_option("--nim", nim, "grid points along Im");

  CLI::App* star = app.add_subcommand("star", "closed-form star-graph spectrum");
  add_problem(star);
  add_output(star);
  star->add_option("--seed", seed, "reproducibility seed");

  CLI::App* verify = app.add_subcommand("verify", "verify a candidate eigenvalue");
  add_problem(verify);
  add_output(verify);
  verify->add_option("--z", z_v, "candidate: re im")->expected(2)->required();

  CLI::App* flip = app.add_subcommand("flip", "reverse edge orientations (gauge transform)");
  add_problem(flip);
  flip->add_option("--edges", flip_edges, "edge ids to flip")->required();
  flip->add_option("-o,--output", flip_problem_output, "flipped problem JSON file")->required();
  std::string flip_report_output = "-";
  flip->add_option("--report", flip_report_output, "verdict JSON ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (spectrum->parsed())
    {
      return cmd_spectrum(problem_path, region_v, tol, jobs, seed, output);
    }
    if (classify->parsed())
    {
      return cmd_classify(problem_path, output);
    }
    if (scan->parsed())
    {
      return cmd_scan(problem_path, region_v, nre, nim, output);
    }
    if (star->parsed())
    {
      return cmd_star(problem_path, seed, output);
    }
    if (verify->parsed())
    {
      return cmd_verify(problem_path, z_v, output);
    }
    if (flip->parsed())
    {
      return cmd_flip(problem_path, flip_edges, flip_problem_output, flip_report_output);
    }
  }
  catch (const diracgraph::Error& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
