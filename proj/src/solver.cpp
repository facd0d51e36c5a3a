// SPDX-License-Identifier: Apache-2.0

#include "diracgraph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <condition_variable>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "diracgraph/edge_spectral.hpp"
#include "diracgraph/errors.hpp"
#include "diracgraph/oracle.hpp"

namespace diracgraph
{

namespace
{

// Half-height of the excluded strips around the essential-spectrum rays.
constexpr double kStripHalfHeight = 1e-6;
// Relative |F| floor below which a contour sample counts as "on a zero".
constexpr double kBoundaryZeroFloor = 1e-13;
// Relative singular-value threshold for kernel extraction at a polished root.
constexpr double kKernelThreshold = 1e-7;

constexpr double kPi = 3.14159265358979323846;

bool complex_less(Complex a, Complex b)
{
  if (a.real() != b.real())
  {
    return a.real() < b.real();
  }
  return a.imag() < b.imag();
}

double median_of(std::vector<double> v)
{
  if (v.empty())
  {
    return 0.0;
  }
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

bool rectangle_nonempty(const Rectangle& r)
{
  const double wfloor = 1e-14 * (1.0 + std::abs(r.re0) + std::abs(r.re1));
  const double hfloor = 1e-14 * (1.0 + std::abs(r.im0) + std::abs(r.im1));
  return r.width() > wfloor && r.height() > hfloor;
}

// Set difference cell \ hole as at most four axis-aligned rectangles.
std::vector<Rectangle> subtract_hole(const Rectangle& cell, const Rectangle& hole)
{
  const Rectangle h{std::max(cell.re0, hole.re0), std::min(cell.re1, hole.re1),
                    std::max(cell.im0, hole.im0), std::min(cell.im1, hole.im1)};
  if (h.re0 >= h.re1 || h.im0 >= h.im1)
  {
    return {cell};
  }
  std::vector<Rectangle> pieces;
  const Rectangle left{cell.re0, h.re0, cell.im0, cell.im1};
  const Rectangle right{h.re1, cell.re1, cell.im0, cell.im1};
  const Rectangle bottom{h.re0, h.re1, cell.im0, h.im0};
  const Rectangle top{h.re0, h.re1, h.im1, cell.im1};
  for (const Rectangle& piece : {left, right, bottom, top})
  {
    if (rectangle_nonempty(piece))
    {
      pieces.push_back(piece);
    }
  }
  return pieces;
}

std::vector<Rectangle> subtract_hole_all(const std::vector<Rectangle>& cells,
                                         const Rectangle& hole)
{
  std::vector<Rectangle> out;
  for (const Rectangle& cell : cells)
  {
    std::vector<Rectangle> pieces = subtract_hole(cell, hole);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return out;
}

struct Cell
{
  Rectangle r;
  int depth = 0;
};

struct RawRoot
{
  Complex z;
  double f_abs = 0.0;   // |F| at the polished point
  double f_scale = 1.0; // contour scale it was measured against
};

struct ContourResult
{
  bool ok = false;
  bool pole_hit = false;  // F evaluation failed on the contour (σ(D⁰) grazed)
  int winding = 0;
  double scale = 1.0;
  std::optional<Complex> boundary_zero;
};

struct PolishResult
{
  bool ok = false;
  Complex z;
  double f_abs = 0.0;
};

class SearchEngine
{
public:
  SearchEngine(const SpectralProblem& p, double tol, const SolverOptions& opts)
    : p_(p), tol_(tol), opts_(opts)
  {
  }

  // Processes every cell; collected roots / unresolved cells are appended to
  // the member vectors under lock.
  void run(std::vector<Cell> initial)
  {
    if (opts_.jobs <= 1)
    {
      std::vector<Cell> stack = std::move(initial);
      while (!stack.empty())
      {
        const Cell cell = stack.back();
        stack.pop_back();
        process(cell, stack);
      }
      return;
    }

    std::vector<Cell> stack = std::move(initial);
    int active = 0;
    bool failed = false;
    std::exception_ptr error;
    std::mutex mtx;
    std::condition_variable cv;

    auto worker = [&]() {
      std::unique_lock<std::mutex> lk(mtx);
      for (;;)
      {
        cv.wait(lk, [&] { return failed || !stack.empty() || active == 0; });
        if (failed || (stack.empty() && active == 0))
        {
          cv.notify_all();
          return;
        }
        if (stack.empty())
        {
          continue;
        }
        const Cell cell = stack.back();
        stack.pop_back();
        active++;
        lk.unlock();
        std::vector<Cell> children;
        try
        {
          process(cell, children);
        }
        catch (...)
        {
          lk.lock();
          failed = true;
          error = std::current_exception();
          active--;
          cv.notify_all();
          return;
        }
        lk.lock();
        stack.insert(stack.end(), children.begin(), children.end());
        active--;
        cv.notify_all();
      }
    };

    const int n_workers = std::max(1, opts_.jobs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; i++)
    {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool)
    {
      t.join();
    }
    if (error)
    {
      std::rethrow_exception(error);
    }
  }

  std::vector<RawRoot> roots;
  std::vector<Rectangle> unresolved;

private:
  Complex eval(Complex z) const { return char_fn(p_, z); }

  void record_root(const RawRoot& root)
  {
    std::lock_guard<std::mutex> lk(results_mtx_);
    roots.push_back(root);
  }

  void record_unresolved(const Rectangle& r)
  {
    std::lock_guard<std::mutex> lk(results_mtx_);
    unresolved.push_back(r);
  }

  // Phase increment along one contour segment, subdividing until each step
  // rotates by less than π/2 and changes |F| by less than 4× (certified
  // argument tracking).  Returns false on budget/depth exhaustion or when a
  // contour sample lands on a zero or on σ(D⁰) (reported via the result).
  bool segment_phase(Complex z0, Complex f0, Complex z1, Complex f1, int depth,
                     ContourResult& res, long& budget, double& total) const
  {
    const double dphi = std::arg(f1 * std::conj(f0));
    const double growth = std::abs(std::log(std::abs(f1) / std::abs(f0)));
    if (std::abs(dphi) <= 0.5 * kPi && growth <= 1.3863)
    {
      total += dphi;
      return true;
    }
    if (depth >= 48 || budget <= 0)
    {
      return false;
    }
    const Complex zm = 0.5 * (z0 + z1);
    Complex fm;
    try
    {
      fm = eval(zm);
      budget--;
    }
    catch (const Error&)
    {
      res.pole_hit = true;
      return false;
    }
    if (std::abs(fm) < kBoundaryZeroFloor * res.scale)
    {
      res.boundary_zero = zm;
      return false;
    }
    return segment_phase(z0, f0, zm, fm, depth + 1, res, budget, total) &&
           segment_phase(zm, fm, z1, f1, depth + 1, res, budget, total);
  }

  ContourResult contour_winding(const Rectangle& r) const
  {
    ContourResult res;
    const int n0 = std::max(8, opts_.boundary_samples);
    const Complex corners[4] = {Complex(r.re0, r.im0), Complex(r.re1, r.im0),
                                Complex(r.re1, r.im1), Complex(r.re0, r.im1)};
    std::vector<Complex> ring;
    ring.reserve(static_cast<std::size_t>(4 * n0));
    for (int side = 0; side < 4; side++)
    {
      const Complex a = corners[side];
      const Complex b = corners[(side + 1) % 4];
      for (int i = 0; i < n0; i++)
      {
        ring.push_back(a + (b - a) * (static_cast<double>(i) / n0));
      }
    }

    std::vector<Complex> values(ring.size());
    std::vector<double> mags;
    mags.reserve(ring.size());
    for (std::size_t i = 0; i < ring.size(); i++)
    {
      try
      {
        values[i] = eval(ring[i]);
      }
      catch (const Error&)
      {
        res.pole_hit = true;
        return res;
      }
      mags.push_back(std::abs(values[i]));
    }
    res.scale = median_of(mags);
    if (!(res.scale > 0.0) || !std::isfinite(res.scale))
    {
      return res;  // F degenerate on the whole contour; caller subdivides
    }
    for (std::size_t i = 0; i < ring.size(); i++)
    {
      if (std::abs(values[i]) < kBoundaryZeroFloor * res.scale)
      {
        res.boundary_zero = ring[i];
        return res;
      }
    }

    long budget = 400000;
    double total = 0.0;
    for (std::size_t i = 0; i < ring.size(); i++)
    {
      const std::size_t j = (i + 1) % ring.size();
      if (!segment_phase(ring[i], values[i], ring[j], values[j], 0, res, budget, total))
      {
        return res;  // pole_hit / boundary_zero / exhaustion recorded
      }
    }
    const double w_raw = total / (2.0 * kPi);
    const long w = std::lround(w_raw);
    if (std::abs(w_raw - static_cast<double>(w)) > 0.2 || w < 0)
    {
      return res;
    }
    res.winding = static_cast<int>(w);
    res.ok = true;
    return res;
  }

  PolishResult polish(Complex start, double step0, double wander_cap, double f_scale) const
  {
    PolishResult out;
    const Complex rot(-0.5, 0.8660254037844386);  // exp(2πi/3)
    Complex x0 = start + step0;
    Complex x1 = start + step0 * rot;
    Complex x2 = start;
    Complex f0, f1, f2;
    try
    {
      f0 = eval(x0);
      f1 = eval(x1);
      f2 = eval(x2);
    }
    catch (const Error&)
    {
      return out;
    }
    const double f_floor = 1e-15 * f_scale;
    for (int it = 0; it < 96; it++)
    {
      if (std::abs(f2) < f_floor)
      {
        break;
      }
      Complex dz;
      const Complex dx21 = x2 - x1;
      const Complex dx10 = x1 - x0;
      if (std::abs(dx10) == 0.0 || std::abs(dx21) == 0.0)
      {
        break;
      }
      const Complex q = dx21 / dx10;
      const Complex a = q * f2 - q * (1.0 + q) * f1 + q * q * f0;
      const Complex b = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0;
      const Complex c = (1.0 + q) * f2;
      const Complex disc = std::sqrt(b * b - 4.0 * a * c);
      const Complex den1 = b + disc;
      const Complex den2 = b - disc;
      const Complex den = std::abs(den1) >= std::abs(den2) ? den1 : den2;
      if (std::abs(den) > 0.0)
      {
        dz = -dx21 * 2.0 * c / den;
      }
      else if (std::abs(f2 - f1) > 0.0)
      {
        dz = -f2 * dx21 / (f2 - f1);
      }
      else
      {
        break;
      }
      const Complex x3 = x2 + dz;
      if (std::abs(x3 - start) > wander_cap)
      {
        return out;
      }
      Complex f3;
      try
      {
        f3 = eval(x3);
      }
      catch (const Error&)
      {
        return out;
      }
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = f2;
      x2 = x3;
      f2 = f3;
      if (std::abs(dz) <= 0.05 * tol_ * (1.0 + std::abs(x2)))
      {
        break;
      }
    }
    const double fa = std::abs(f2);
    if (fa <= 1e-5 * f_scale)
    {
      out.ok = true;
      out.z = x2;
      out.f_abs = fa;
    }
    return out;
  }

  // Split the cell into four children at a cross whose lines avoid zeros of F.
  std::vector<Cell> subdivide(const Cell& cell, double scale) const
  {
    const Rectangle& r = cell.r;
    const double fractions[5] = {0.5, 0.46, 0.57, 0.41, 0.62};
    double fx = 0.5, fy = 0.5;
    for (double f : fractions)
    {
      if (line_clear(r, r.re0 + f * r.width(), /*vertical=*/true, scale))
      {
        fx = f;
        break;
      }
    }
    for (double f : fractions)
    {
      if (line_clear(r, r.im0 + f * r.height(), /*vertical=*/false, scale))
      {
        fy = f;
        break;
      }
    }
    const double xm = r.re0 + fx * r.width();
    const double ym = r.im0 + fy * r.height();
    std::vector<Cell> children;
    for (const Rectangle& piece :
         {Rectangle{r.re0, xm, r.im0, ym}, Rectangle{xm, r.re1, r.im0, ym},
          Rectangle{r.re0, xm, ym, r.im1}, Rectangle{xm, r.re1, ym, r.im1}})
    {
      if (rectangle_nonempty(piece))
      {
        children.push_back(Cell{piece, cell.depth + 1});
      }
    }
    return children;
  }

  bool line_clear(const Rectangle& r, double coord, bool vertical, double scale) const
  {
    for (int i = 0; i <= 8; i++)
    {
      const double t = static_cast<double>(i) / 8.0;
      const Complex z = vertical ? Complex(coord, r.im0 + t * r.height())
                                 : Complex(r.re0 + t * r.width(), coord);
      try
      {
        if (std::abs(eval(z)) < 1e-9 * scale)
        {
          return false;
        }
      }
      catch (const Error&)
      {
        return false;
      }
    }
    return true;
  }

  void process(const Cell& cell, std::vector<Cell>& out_children)
  {
    const double diam = cell.r.diameter();
    const ContourResult cw = contour_winding(cell.r);

    if (cw.boundary_zero.has_value())
    {
      // A zero (numerically) on the contour: polish it, then carve a small
      // hole around the polished point and re-search the remainder.
      const PolishResult pr =
          polish(*cw.boundary_zero, std::max(10.0 * tol_, 1e-7 * diam),
                 0.25 * diam + 100.0 * tol_, cw.scale);
      if (pr.ok)
      {
        record_root(RawRoot{pr.z, pr.f_abs, cw.scale});
        if (cell.depth >= opts_.max_depth)
        {
          record_unresolved(cell.r);
          return;
        }
        const double hr = std::max(4.0 * tol_, 1e-9 * (1.0 + std::abs(pr.z)));
        const Rectangle hole{pr.z.real() - hr, pr.z.real() + hr, pr.z.imag() - hr,
                             pr.z.imag() + hr};
        for (const Rectangle& piece : subtract_hole(cell.r, hole))
        {
          out_children.push_back(Cell{piece, cell.depth + 1});
        }
        return;
      }
      // Could not polish it: nudge the boundary and retry.
      jiggle_retry(cell, diam, out_children);
      return;
    }

    if (cw.pole_hit)
    {
      jiggle_retry(cell, diam, out_children);
      return;
    }

    if (!cw.ok)
    {
      // Phase tracking exhausted its budget: subdivision separates the
      // troublesome features.
      if (cell.depth < opts_.max_depth)
      {
        for (Cell& child : subdivide(cell, cw.scale))
        {
          out_children.push_back(child);
        }
      }
      else
      {
        record_unresolved(cell.r);
      }
      return;
    }

    if (cw.winding == 0)
    {
      return;
    }

    const double isolation =
        std::max(1000.0 * tol_, 1e-7) * (1.0 + std::abs(cell.r.center()));
    if (cw.winding == 1 || diam <= isolation || cell.depth >= opts_.max_depth)
    {
      const PolishResult pr =
          polish(cell.r.center(), diam / 6.0, 2.0 * diam + 100.0 * tol_, cw.scale);
      if (pr.ok && cell.r.contains(pr.z, cw.winding == 1 ? tol_ : isolation))
      {
        record_root(RawRoot{pr.z, pr.f_abs, cw.scale});
        return;
      }
      if (cell.depth >= opts_.max_depth)
      {
        record_unresolved(cell.r);
        return;
      }
      // The polish escaped the cell (a zero sits just outside, or several
      // cluster): subdivide to pin it down.
      for (Cell& child : subdivide(cell, cw.scale))
      {
        out_children.push_back(child);
      }
      return;
    }

    for (Cell& child : subdivide(cell, cw.scale))
    {
      out_children.push_back(child);
    }
  }

  void jiggle_retry(const Cell& cell, double diam, std::vector<Cell>& out_children)
  {
    if (cell.depth >= opts_.max_depth)
    {
      record_unresolved(cell.r);
      return;
    }
    const double pad = std::max(10.0 * tol_, 1e-7 * diam);
    const Rectangle grown{cell.r.re0 - pad, cell.r.re1 + pad, cell.r.im0 - pad,
                          cell.r.im1 + pad};
    out_children.push_back(Cell{grown, cell.depth + 1});
  }

  const SpectralProblem& p_;
  double tol_;
  SolverOptions opts_;
  std::mutex results_mtx_;
};

// Numerical kernel of M(z) = A·W − B·W·Q(z).  The singular-value floor is
// taken relative to the magnitude of the two terms being subtracted, not to
// σ_max(M) alone: at an eigenvalue of full geometric multiplicity the whole
// difference cancels, σ_max itself is a numerical zero, and a floor relative
// to it would report an empty kernel.
Matrix kernel_vectors(const SpectralProblem& p, Complex z)
{
  const Permutation& w = p.conditions.W;
  const Matrix t1 = w.right_apply(p.conditions.A);
  const Matrix t2 = p.conditions.B * w.left_apply(assemble_Q(p, z));
  const double scale = t1.cwiseAbs().maxCoeff() + t2.cwiseAbs().maxCoeff();
  const Matrix M = t1 - t2;
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double floor = kKernelThreshold * std::max({sigma(0), scale, 1e-300});
  int dim = 0;
  for (int i = 0; i < sigma.size(); i++)
  {
    if (sigma(i) <= floor)
    {
      dim++;
    }
  }
  return svd.matrixV().rightCols(dim);
}

Eigenfunction make_eigenfunction(const SpectralProblem& p, Complex z, const Vector& c)
{
  const MetricGraph& g = p.graph;
  Eigenfunction ef;
  for (std::size_t j = 0; j < g.edges().size(); j++)
  {
    const Edge& e = g.edges()[j];
    const int off = g.slot_offset(static_cast<int>(j));
    if (is_internal(e))
    {
      const auto& ie = std::get<InternalEdge>(e);
      const auto basis = eta_internal(z, g.mass(), ie.a, ie.b);
      const SpinorSampler eta1 = basis.first;
      const SpinorSampler eta2 = basis.second;
      const Complex c1 = c(off), c2 = c(off + 1);
      ef.per_edge.push_back([eta1, eta2, c1, c2](double x) -> Vector2 {
        return c1 * eta1(x) + c2 * eta2(x);
      });
    }
    else
    {
      const auto& ee = std::get<ExternalEdge>(e);
      const SpinorSampler eta = eta_external(z, g.mass(), ee.endpoint, ee.rho);
      const Complex c1 = c(off);
      ef.per_edge.push_back([eta, c1](double x) -> Vector2 { return c1 * eta(x); });
    }
  }
  return ef;
}

}  // namespace

double Rectangle::diameter() const
{
  return std::hypot(width(), height());
}

std::vector<double> graph_reference_eigenvalues(const MetricGraph& g, double window)
{
  std::vector<double> pts;
  for (const Edge& e : g.edges())
  {
    if (!is_internal(e))
    {
      continue;
    }
    const auto& ie = std::get<InternalEdge>(e);
    const std::vector<double> part = ref_spectrum_internal(g.mass(), ie.length(), window);
    pts.insert(pts.end(), part.begin(), part.end());
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> dedup;
  for (double x : pts)
  {
    if (dedup.empty() || x - dedup.back() > 1e-12 * (1.0 + std::abs(x)))
    {
      dedup.push_back(x);
    }
  }
  return dedup;
}

Matrix assemble_Q(const SpectralProblem& p, Complex z)
{
  const MetricGraph& g = p.graph;
  const int n = g.boundary_dim();
  Matrix q = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < g.edges().size(); j++)
  {
    const Edge& e = g.edges()[j];
    const int off = g.slot_offset(static_cast<int>(j));
    try
    {
      if (is_internal(e))
      {
        const auto& ie = std::get<InternalEdge>(e);
        q.block<2, 2>(off, off) = q_internal(z, g.mass(), ie.length());
      }
      else
      {
        q(off, off) = q_external(z, g.mass());
      }
    }
    catch (const ReferencePointError& err)
    {
      throw ReferencePointError("edge '" + edge_id(e) + "': " + err.what());
    }
    catch (const BranchPointError& err)
    {
      throw BranchPointError("edge '" + edge_id(e) + "': " + err.what());
    }
  }
  return q;
}

Matrix characteristic_matrix(const SpectralProblem& p, Complex z)
{
  const Permutation& w = p.conditions.W;
  return w.right_apply(p.conditions.A) - p.conditions.B * w.left_apply(assemble_Q(p, z));
}

Complex char_fn(const SpectralProblem& p, Complex z)
{
  return characteristic_matrix(p, z).determinant();
}

ReferencePointVerdict check_reference_point(const SpectralProblem& p, double z0)
{
  const int dim = oracle_kernel_dim(p, Complex(z0, 0.0));
  return ReferencePointVerdict{z0, dim > 0, dim};
}

EssentialSpectrumResult essential_spectrum(const SpectralProblem& p)
{
  EssentialSpectrumResult out;
  out.mass = p.graph.mass();
  if (!rank_deficiency(p.conditions.A, p.conditions.B).full)
  {
    out.kind = EssentialSpectrumResult::Kind::kWholePlane;
    out.certified = true;
    return out;
  }
  if (p.graph.num_external() == 0)
  {
    out.kind = EssentialSpectrumResult::Kind::kEmpty;
    out.certified = true;
    return out;
  }
  out.kind = EssentialSpectrumResult::Kind::kRays;
  if (is_self_adjoint(p.conditions).self_adjoint)
  {
    out.certified = true;
    return out;
  }
  // Look for an invertibility certificate of M(z) away from the real axis.
  const double s = out.mass + 1.0;
  const Complex candidates[] = {Complex(0.0, 1.3 * s),  Complex(0.0, -0.7 * s),
                                Complex(0.4 * s, 0.9 * s), Complex(-0.6 * s, -1.1 * s),
                                Complex(0.25 * s, 2.2 * s), Complex(-1.7 * s, 0.8 * s)};
  for (const Complex& z : candidates)
  {
    try
    {
      const Matrix M = characteristic_matrix(p, z);
      Eigen::JacobiSVD<Matrix> svd(M);
      const auto& sigma = svd.singularValues();
      if (sigma(sigma.size() - 1) > 1e-8 * std::max(sigma(0), 1e-300))
      {
        out.certified = true;
        return out;
      }
    }
    catch (const Error&)
    {
      // try the next sample point
    }
  }
  return out;
}

SpectralReport find_eigenvalues(const SpectralProblem& p, const Rectangle& region, double tol,
                                const SolverOptions& options)
{
  if (!(region.re0 < region.re1) || !(region.im0 < region.im1) ||
      !std::isfinite(region.re0) || !std::isfinite(region.re1) ||
      !std::isfinite(region.im0) || !std::isfinite(region.im1))
  {
    throw InputError("find_eigenvalues requires a bounded region with re0 < re1, im0 < im1");
  }
  if (!(tol > 0.0) || !std::isfinite(tol))
  {
    throw InputError("find_eigenvalues requires a finite tolerance > 0");
  }

  const MetricGraph& g = p.graph;
  const double m = g.mass();
  SpectralReport report;
  report.essential = essential_spectrum(p);

  if (!rank_deficiency(p.conditions.A, p.conditions.B).full)
  {
    report.whole_plane = true;
    // Consistency spot-check: M(z) must be singular wherever it is defined.
    const Complex probes[] = {region.center() + Complex(0.0, 0.37 * region.height()),
                              region.center() + Complex(0.21 * region.width(), -0.29 * region.height())};
    for (const Complex& z : probes)
    {
      try
      {
        const Matrix M = characteristic_matrix(p, z);
        Eigen::JacobiSVD<Matrix> svd(M);
        const auto& sigma = svd.singularValues();
        if (sigma(sigma.size() - 1) > 1e-6 * std::max(sigma(0), 1e-300))
        {
          throw Error("rank-deficient conditions but M(z) numerically invertible: "
                      "inconsistent input");
        }
      }
      catch (const ReferencePointError&)
      {
      }
      catch (const BranchPointError&)
      {
      }
    }
    return report;
  }

  // Carve out the reference spectrum: strips along the essential rays,
  // squares around the internal-edge eigenvalues.
  std::vector<Rectangle> cells = {region};
  const bool has_external = g.num_external() > 0;
  if (has_external)
  {
    const Rectangle right_strip{m - kStripHalfHeight, std::numeric_limits<double>::max(),
                                -kStripHalfHeight, kStripHalfHeight};
    const Rectangle left_strip{std::numeric_limits<double>::lowest(), -m + kStripHalfHeight,
                               -kStripHalfHeight, kStripHalfHeight};
    for (const Rectangle& strip : {right_strip, left_strip})
    {
      const Rectangle clipped{std::max(strip.re0, region.re0), std::min(strip.re1, region.re1),
                              std::max(strip.im0, region.im0), std::min(strip.im1, region.im1)};
      if (clipped.re0 < clipped.re1 && clipped.im0 < clipped.im1)
      {
        report.unsearched.push_back(UnsearchedRegion{
            clipped, "strip of half-height 1e-6 around an essential-spectrum ray"});
      }
      cells = subtract_hole_all(cells, strip);
    }
  }

  const double window = std::max(std::abs(region.re0), std::abs(region.re1)) + 1.0;
  const std::vector<double> ref_points = graph_reference_eigenvalues(g, window);
  for (std::size_t i = 0; i < ref_points.size(); i++)
  {
    const double x0 = ref_points[i];
    double gap = 1.0;
    if (i > 0)
    {
      gap = std::min(gap, x0 - ref_points[i - 1]);
    }
    if (i + 1 < ref_points.size())
    {
      gap = std::min(gap, ref_points[i + 1] - x0);
    }
    if (has_external && std::abs(x0) < m)
    {
      gap = std::min(gap, m - std::abs(x0));
    }
    const double r_excl = 1e-4 * gap;
    const Rectangle hole{x0 - r_excl, x0 + r_excl, -r_excl, r_excl};
    const bool touches_region = hole.re1 > region.re0 && hole.re0 < region.re1 &&
                                hole.im1 > region.im0 && hole.im0 < region.im1;
    if (!touches_region)
    {
      continue;
    }
    cells = subtract_hole_all(cells, hole);
    report.reference_points.push_back(check_reference_point(p, x0));
  }

  SearchEngine engine(p, tol, options);
  std::vector<Cell> initial;
  initial.reserve(cells.size());
  for (const Rectangle& r : cells)
  {
    initial.push_back(Cell{r, 0});
  }
  engine.run(std::move(initial));

  for (const Rectangle& r : engine.unresolved)
  {
    report.unresolved.push_back(r);
  }
  report.complete = report.unresolved.empty();

  // Deduplicate roots: sort, cluster, keep the best-polished representative.
  std::vector<RawRoot> raw = engine.roots;
  std::sort(raw.begin(), raw.end(),
            [](const RawRoot& a, const RawRoot& b) { return complex_less(a.z, b.z); });
  std::vector<RawRoot> distinct;
  std::size_t i = 0;
  while (i < raw.size())
  {
    RawRoot best = raw[i];
    std::size_t j = i + 1;
    while (j < raw.size() &&
           std::abs(raw[j].z - raw[i].z) <= std::max(5.0 * tol, 1e-11 * (1.0 + std::abs(raw[i].z))))
    {
      if (raw[j].f_abs / raw[j].f_scale < best.f_abs / best.f_scale)
      {
        best = raw[j];
      }
      j++;
    }
    distinct.push_back(best);
    i = j;
  }

  for (const RawRoot& root : distinct)
  {
    if (!region.contains(root.z, tol))
    {
      continue;
    }
    const Matrix kernel = kernel_vectors(p, root.z);
    if (kernel.cols() == 0)
    {
      continue;  // spurious: the matrix is not close to singular there
    }
    EigenvalueResult ev;
    ev.z = root.z;
    ev.multiplicity = static_cast<int>(kernel.cols());
    double worst = 0.0;
    for (int kcol = 0; kcol < kernel.cols(); kcol++)
    {
      Eigenfunction ef = make_eigenfunction(p, root.z, kernel.col(kcol));
      worst = std::max(worst, boundary_residual(p, ef.per_edge));
      ev.eigenfunctions.push_back(std::move(ef));
    }
    ev.residual = worst;
    report.eigenvalues.push_back(std::move(ev));
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const EigenvalueResult& a, const EigenvalueResult& b) {
              return complex_less(a.z, b.z);
            });
  return report;
}

std::vector<SampledSpinor> resolvent_apply(const SpectralProblem& p, Complex z,
                                           const std::vector<SpinorSampler>& rhs,
                                           const ResolventOptions& options)
{
  const MetricGraph& g = p.graph;
  if (rhs.size() != g.edges().size())
  {
    throw InputError("resolvent_apply: expected one right-hand side per edge (" +
                     std::to_string(g.edges().size()) + "), got " + std::to_string(rhs.size()));
  }
  if (!(options.grid_step > 0.0))
  {
    throw InputError("resolvent_apply requires grid_step > 0");
  }

  Matrix M;
  Matrix q;
  try
  {
    q = assemble_Q(p, z);
    const Permutation& w = p.conditions.W;
    M = w.right_apply(p.conditions.A) - p.conditions.B * w.left_apply(q);
  }
  catch (const Error& err)
  {
    throw NotInResolventSetError(std::string("z is on the reference spectrum: ") + err.what());
  }
  {
    Eigen::JacobiSVD<Matrix> svd(M);
    const auto& sigma = svd.singularValues();
    if (sigma(sigma.size() - 1) <= 1e-12 * std::max(sigma(0), 1.0))
    {
      throw NotInResolventSetError("characteristic matrix numerically singular: z is an "
                                   "eigenvalue (or within tolerance of one)");
    }
  }

  const int n = g.boundary_dim();
  const double m = g.mass();
  const Complex zbar = std::conj(z);

  // Per-edge uniform grids.
  std::vector<std::vector<double>> grids(g.edges().size());
  for (std::size_t j = 0; j < g.edges().size(); j++)
  {
    double lo, hi;
    if (is_internal(g.edges()[j]))
    {
      const auto& ie = std::get<InternalEdge>(g.edges()[j]);
      lo = ie.a;
      hi = ie.b;
    }
    else
    {
      const auto& ee = std::get<ExternalEdge>(g.edges()[j]);
      if (ee.rho < 0)
      {
        lo = ee.endpoint;
        hi = ee.endpoint + options.external_window;
      }
      else
      {
        lo = ee.endpoint - options.external_window;
        hi = ee.endpoint;
      }
    }
    const int segments = std::max(2, static_cast<int>(std::ceil((hi - lo) / options.grid_step)));
    std::vector<double>& xs = grids[j];
    xs.resize(static_cast<std::size_t>(segments + 1));
    for (int i = 0; i <= segments; i++)
    {
      xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / segments;
    }
  }

  // Boundary data w_in = γ(z̄)* rhs, one inner product per slot (trapezoid).
  Vector w_in = Vector::Zero(n);
  std::vector<std::vector<Vector2>> rhs_values(g.edges().size());
  for (std::size_t j = 0; j < g.edges().size(); j++)
  {
    const std::vector<double>& xs = grids[j];
    std::vector<Vector2>& fv = rhs_values[j];
    fv.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); i++)
    {
      fv[i] = rhs[j](xs[i]);
    }
    const int off = g.slot_offset(static_cast<int>(j));
    const double h = xs[1] - xs[0];
    auto trapezoid_against = [&](const SpinorSampler& dual) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < xs.size(); i++)
      {
        const double weight = (i == 0 || i + 1 == xs.size()) ? 0.5 : 1.0;
        acc += weight * dual(xs[i]).dot(fv[i]);
      }
      return acc * h;
    };
    if (is_internal(g.edges()[j]))
    {
      const auto& ie = std::get<InternalEdge>(g.edges()[j]);
      const auto duals = eta_internal(zbar, m, ie.a, ie.b);
      w_in(off) = trapezoid_against(duals.first);
      w_in(off + 1) = trapezoid_against(duals.second);
    }
    else
    {
      const auto& ee = std::get<ExternalEdge>(g.edges()[j]);
      const SpinorSampler dual = eta_external(zbar, m, ee.endpoint, ee.rho);
      w_in(off) = trapezoid_against(dual);
    }
  }

  const Permutation& w = p.conditions.W;
  const Vector coeff = M.partialPivLu().solve(p.conditions.B * w.apply(w_in));

  // Output samples: free resolvent part + defect-space correction.
  std::vector<SampledSpinor> out(g.edges().size());
  for (std::size_t j = 0; j < g.edges().size(); j++)
  {
    const std::vector<double>& xs = grids[j];
    const std::vector<Vector2>& fv = rhs_values[j];
    const double h = xs[1] - xs[0];
    const int off = g.slot_offset(static_cast<int>(j));

    ResolventKernel kernel = [&]() {
      if (is_internal(g.edges()[j]))
      {
        const auto& ie = std::get<InternalEdge>(g.edges()[j]);
        return resolvent_kernel_internal(z, m, ie.a, ie.b);
      }
      const auto& ee = std::get<ExternalEdge>(g.edges()[j]);
      return resolvent_kernel_external(z, m, ee.endpoint, ee.rho);
    }();

    std::function<Vector2(double)> defect_part;
    if (is_internal(g.edges()[j]))
    {
      const auto& ie = std::get<InternalEdge>(g.edges()[j]);
      const auto basis = eta_internal(z, m, ie.a, ie.b);
      const SpinorSampler eta1 = basis.first;
      const SpinorSampler eta2 = basis.second;
      const Complex c1 = coeff(off), c2 = coeff(off + 1);
      defect_part = [eta1, eta2, c1, c2](double x) -> Vector2 {
        return c1 * eta1(x) + c2 * eta2(x);
      };
    }
    else
    {
      const auto& ee = std::get<ExternalEdge>(g.edges()[j]);
      const SpinorSampler eta = eta_external(z, m, ee.endpoint, ee.rho);
      const Complex c1 = coeff(off);
      defect_part = [eta, c1](double x) -> Vector2 { return c1 * eta(x); };
    }

    SampledSpinor& sampled = out[j];
    sampled.x = xs;
    sampled.values.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); i++)
    {
      const double x = xs[i];
      // Trapezoid rule split at y = x, using the one-sided kernel values on
      // each side (the kernel jumps across the diagonal).
      Vector2 acc = Vector2::Zero();
      for (std::size_t l = 0; l + 1 < xs.size(); l++)
      {
        const bool below_diag = l + 1 <= i;   // segment [x_l, x_{l+1}] with y <= x
        const bool above_diag = l >= i;       // segment with y >= x
        if (below_diag)
        {
          acc += 0.5 * h *
                 (kernel.eval(x, xs[l], true) * fv[l] + kernel.eval(x, xs[l + 1], true) * fv[l + 1]);
        }
        else if (above_diag)
        {
          acc += 0.5 * h *
                 (kernel.eval(x, xs[l], false) * fv[l] +
                  kernel.eval(x, xs[l + 1], false) * fv[l + 1]);
        }
        else
        {
          // Segment straddling the diagonal cannot occur on a uniform grid
          // split at a grid point.
          throw Error("internal quadrature error: segment straddles the diagonal");
        }
      }
      sampled.values[i] = acc + defect_part(x);
    }
  }
  return out;
}

}  // namespace diracgraph
