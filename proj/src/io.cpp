// SPDX-License-Identifier: Apache-2.0

#include "diracgraph/io.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include "diracgraph/errors.hpp"

namespace diracgraph
{

namespace
{

double parse_real(const Json& j, const std::string& where)
{
  if (!j.is_number())
  {
    throw InputError(where + ": expected a number");
  }
  return j.get<double>();
}

std::string parse_string(const Json& j, const std::string& where)
{
  if (!j.is_string())
  {
    throw InputError(where + ": expected a string");
  }
  return j.get<std::string>();
}

const Json& field(const Json& j, const std::string& key, const std::string& where)
{
  const auto it = j.find(key);
  if (it == j.end())
  {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return *it;
}

}  // namespace

Complex parse_complex(const Json& j, const std::string& where)
{
  if (j.is_number())
  {
    return Complex(j.get<double>(), 0.0);
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
  {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw InputError(where + ": expected a number or a [re, im] pair");
}

Matrix parse_matrix(const Json& j, const std::string& where)
{
  if (!j.is_array() || j.empty())
  {
    throw InputError(where + ": expected a nonempty array of rows");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
  {
    throw InputError(where + "[0]: expected a nonempty array of entries");
  }
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (std::size_t r = 0; r < rows; r++)
  {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
    {
      throw InputError(row_where + ": expected " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; c++)
    {
      m(static_cast<int>(r), static_cast<int>(c)) =
          parse_complex(j[r][c], row_where + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Json complex_to_json(Complex z)
{
  return Json::array({z.real(), z.imag()});
}

Json matrix_to_json(const Matrix& m)
{
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); r++)
  {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); c++)
    {
      row.push_back(complex_to_json(m(r, c)));
    }
    rows.push_back(row);
  }
  return rows;
}

MetricGraph parse_graph(const Json& j)
{
  if (!j.is_object())
  {
    throw InputError("problem: expected a JSON object");
  }
  const double mass = parse_real(field(j, "mass", "problem"), "problem.mass");

  const Json& jverts = field(j, "vertices", "problem");
  if (!jverts.is_array())
  {
    throw InputError("problem.vertices: expected an array of vertex ids");
  }
  std::vector<VertexId> vertices;
  for (std::size_t i = 0; i < jverts.size(); i++)
  {
    vertices.push_back(parse_string(jverts[i], "problem.vertices[" + std::to_string(i) + "]"));
  }

  const Json& jedges = field(j, "edges", "problem");
  if (!jedges.is_array())
  {
    throw InputError("problem.edges: expected an array of edges");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < jedges.size(); i++)
  {
    const std::string where = "problem.edges[" + std::to_string(i) + "]";
    const Json& je = jedges[i];
    if (!je.is_object())
    {
      throw InputError(where + ": expected an object");
    }
    const std::string id = parse_string(field(je, "id", where), where + ".id");
    const std::string kind = parse_string(field(je, "kind", where), where + ".kind");
    if (kind == "internal")
    {
      InternalEdge e;
      e.id = id;
      e.from = parse_string(field(je, "from", where), where + ".from");
      e.to = parse_string(field(je, "to", where), where + ".to");
      e.a = parse_real(field(je, "a", where), where + ".a");
      e.b = parse_real(field(je, "b", where), where + ".b");
      edges.push_back(e);
    }
    else if (kind == "external")
    {
      ExternalEdge e;
      e.id = id;
      e.vertex = parse_string(field(je, "vertex", where), where + ".vertex");
      const double rho = parse_real(field(je, "orientation", where), where + ".orientation");
      if (rho != 1.0 && rho != -1.0)
      {
        throw InputError(where + ".orientation: expected -1 (outgoing) or 1 (incoming)");
      }
      e.rho = static_cast<int>(rho);
      e.endpoint = parse_real(field(je, "endpoint", where), where + ".endpoint");
      edges.push_back(e);
    }
    else
    {
      throw InputError(where + ".kind: expected 'internal' or 'external'");
    }
  }
  return MetricGraph(std::move(vertices), std::move(edges), mass);
}

SpectralProblem parse_problem(const Json& j)
{
  MetricGraph g = parse_graph(j);
  const Json& jc = field(j, "conditions", "problem");
  if (!jc.is_object())
  {
    throw InputError("problem.conditions: expected an object");
  }
  const std::string scope = parse_string(field(jc, "scope", "problem.conditions"),
                                         "problem.conditions.scope");
  if (scope == "local")
  {
    const Json& jblocks = field(jc, "blocks", "problem.conditions");
    if (!jblocks.is_array())
    {
      throw InputError("problem.conditions.blocks: expected an array");
    }
    std::vector<VertexConditions> blocks;
    for (std::size_t i = 0; i < jblocks.size(); i++)
    {
      const std::string where = "problem.conditions.blocks[" + std::to_string(i) + "]";
      const Json& jb = jblocks[i];
      VertexConditions vc;
      vc.vertex = parse_string(field(jb, "vertex", where), where + ".vertex");
      vc.A = parse_matrix(field(jb, "A", where), where + ".A");
      vc.B = parse_matrix(field(jb, "B", where), where + ".B");
      blocks.push_back(std::move(vc));
    }
    GlobalConditions c = assemble_global(g, blocks);
    return SpectralProblem{std::move(g), std::move(c)};
  }
  if (scope == "global")
  {
    Matrix a = parse_matrix(field(jc, "A", "problem.conditions"), "problem.conditions.A");
    Matrix b = parse_matrix(field(jc, "B", "problem.conditions"), "problem.conditions.B");
    GlobalConditions c = make_global(g, std::move(a), std::move(b));
    return SpectralProblem{std::move(g), std::move(c)};
  }
  throw InputError("problem.conditions.scope: expected 'local' or 'global'");
}

SpectralProblem load_problem(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InputError("cannot open problem file '" + path + "'");
  }
  Json j;
  try
  {
    j = Json::parse(in);
  }
  catch (const std::exception& e)
  {
    throw InputError("cannot parse '" + path + "': " + e.what());
  }
  return parse_problem(j);
}

Json problem_to_json(const SpectralProblem& p)
{
  const MetricGraph& g = p.graph;
  Json out;
  out["mass"] = g.mass();
  out["vertices"] = g.vertices();
  Json jedges = Json::array();
  for (const Edge& e : g.edges())
  {
    Json je;
    je["id"] = edge_id(e);
    if (is_internal(e))
    {
      const auto& ie = std::get<InternalEdge>(e);
      je["kind"] = "internal";
      je["from"] = ie.from;
      je["to"] = ie.to;
      je["a"] = ie.a;
      je["b"] = ie.b;
    }
    else
    {
      const auto& ee = std::get<ExternalEdge>(e);
      je["kind"] = "external";
      je["vertex"] = ee.vertex;
      je["orientation"] = ee.rho;
      je["endpoint"] = ee.endpoint;
    }
    jedges.push_back(je);
  }
  out["edges"] = jedges;

  Json jc;
  const GlobalConditions& c = p.conditions;
  if (c.local)
  {
    jc["scope"] = "local";
    Json jblocks = Json::array();
    for (std::size_t i = 0; i < c.block_vertices.size(); i++)
    {
      const int off = c.block_offsets[i];
      const int d = c.block_sizes[i];
      Json jb;
      jb["vertex"] = c.block_vertices[i];
      jb["A"] = matrix_to_json(c.A.block(off, off, d, d));
      jb["B"] = matrix_to_json(c.B.block(off, off, d, d));
      jblocks.push_back(jb);
    }
    jc["blocks"] = jblocks;
  }
  else
  {
    jc["scope"] = "global";
    jc["A"] = matrix_to_json(c.A);
    jc["B"] = matrix_to_json(c.B);
  }
  out["conditions"] = jc;
  return out;
}

Json essential_to_json(const EssentialSpectrumResult& e)
{
  Json out;
  switch (e.kind)
  {
    case EssentialSpectrumResult::Kind::kEmpty:
      out["kind"] = "empty";
      out["description"] = "compact graph: purely discrete spectrum";
      break;
    case EssentialSpectrumResult::Kind::kRays:
      out["kind"] = "rays";
      out["description"] = "(-inf," + std::to_string(-e.mass) + "] U [" +
                           std::to_string(e.mass) + ",inf)";
      break;
    case EssentialSpectrumResult::Kind::kWholePlane:
      out["kind"] = "whole-plane";
      out["description"] = "rank-deficient conditions: every z is an eigenvalue";
      break;
  }
  out["mass"] = e.mass;
  out["certified"] = e.certified;
  return out;
}

Json report_to_json(const SpectralReport& report)
{
  Json out;
  out["complete"] = report.complete;
  out["whole_plane"] = report.whole_plane;
  Json evs = Json::array();
  for (const EigenvalueResult& ev : report.eigenvalues)
  {
    Json je;
    je["z"] = complex_to_json(ev.z);
    je["multiplicity"] = ev.multiplicity;
    je["residual"] = ev.residual;
    evs.push_back(je);
  }
  out["eigenvalues"] = evs;
  Json refs = Json::array();
  for (const ReferencePointVerdict& v : report.reference_points)
  {
    Json jv;
    jv["z0"] = v.z0;
    jv["eigenvalue"] = v.eigenvalue;
    jv["multiplicity"] = v.multiplicity;
    refs.push_back(jv);
  }
  out["reference_points"] = refs;
  out["essential_spectrum"] = essential_to_json(report.essential);
  Json uns = Json::array();
  for (const UnsearchedRegion& u : report.unsearched)
  {
    Json ju;
    ju["rect"] = Json::array({u.rect.re0, u.rect.re1, u.rect.im0, u.rect.im1});
    ju["reason"] = u.reason;
    uns.push_back(ju);
  }
  out["unsearched"] = uns;
  Json unres = Json::array();
  for (const Rectangle& r : report.unresolved)
  {
    unres.push_back(Json::array({r.re0, r.re1, r.im0, r.im1}));
  }
  out["unresolved"] = unres;
  return out;
}

Json star_to_json(const StarSpectrum& s)
{
  Json out;
  switch (s.regularity)
  {
    case StarRegularity::kWholePlane:
      out["regularity"] = "whole-plane";
      break;
    case StarRegularity::kEmptyPencil:
      out["regularity"] = "empty-pencil";
      break;
    case StarRegularity::kFinitePencil:
      out["regularity"] = "finite-pencil";
      break;
  }
  out["whole_plane"] = s.whole_plane;
  out["upper_half_plane"] = s.upper_half_plane;
  out["lower_half_plane"] = s.lower_half_plane;
  Json evs = Json::array();
  for (std::size_t i = 0; i < s.point_spectrum.size(); i++)
  {
    Json je;
    je["z"] = complex_to_json(s.point_spectrum[i]);
    je["multiplicity"] = s.multiplicities[i];
    evs.push_back(je);
  }
  out["point_spectrum"] = evs;
  Json notes = Json::array();
  for (const StarLambdaNote& n : s.notes)
  {
    Json jn;
    jn["lambda"] = complex_to_json(n.lambda);
    jn["multiplicity"] = n.multiplicity;
    jn["admitted"] = n.admitted;
    if (n.has_z)
    {
      jn["z"] = complex_to_json(n.z);
    }
    jn["reason"] = n.reason;
    notes.push_back(jn);
  }
  out["pencil_notes"] = notes;
  out["reference_candidates"] = s.reference_candidates;
  return out;
}

Json self_adjointness_to_json(const SelfAdjointnessReport& r)
{
  Json out;
  out["self_adjoint"] = r.self_adjoint;
  Json per_vertex = Json::array();
  for (const auto& [vertex, ok] : r.per_vertex)
  {
    Json jv;
    jv["vertex"] = vertex;
    jv["self_adjoint"] = ok;
    per_vertex.push_back(jv);
  }
  out["per_vertex"] = per_vertex;
  return out;
}

}  // namespace diracgraph
