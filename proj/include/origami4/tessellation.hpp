#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Geometry>

#include "origami4/closure.hpp"
#include "origami4/embedding.hpp"
#include "origami4/kinematics_ff.hpp"
#include "origami4/mesh.hpp"
#include "origami4/vertex.hpp"

namespace origami4
{

using Vec2 = Eigen::Vector2d;

enum class FaceKind
{
  central_square,
  strip,
  corner_square
};

struct Crease
{
  int a = 0;
  int b = 0;
  /// +1 valley, -1 mountain for positive major_rho.
  int mv = 0;
};

/// Corner j (0..3, counterclockwise from the lower left) of the central square of cell (row, col).
///
/// Local creases: c1 runs to the next corner, c2 to the previous corner, c3 and c4
/// along the two arms. Local sector angles are the canonical generator's.
struct TwistVertex
{
  int point = 0;
  int row = 0;
  int col = 0;
  int corner = 0;
  std::array<int, 4> crease_to{};
  std::array<int, 4> crease_ids{};
  /// Closed-form mode: 2 (majors c1, c3) on even corners, 1 (majors c2, c4) on odd corners.
  int mode = 1;
};

/// Unfolded square-twist crease pattern: one central square per cell, a strip off
/// each side and a small square at each corner. Central squares have side 1 and
/// arms have length 1; cell (i, j) starts at i*lattice1 + j*lattice2.
struct SquareTwistSheet
{
  Vertex4 generator{{kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0, kPi / 2.0}};
  double twist = kPi / 4.0;
  int rows = 1;
  int cols = 1;
  std::vector<Vec2> points;
  std::vector<std::vector<int>> faces;
  std::vector<FaceKind> face_kind;
  std::vector<Crease> creases;
  std::vector<TwistVertex> vertices;
  Vec2 lattice1 = Vec2::Zero();
  Vec2 lattice2 = Vec2::Zero();
  /// Valley path B of each cell row: bottom sides joined by arm creases.
  std::vector<std::vector<int>> valley_rows;
  /// Mountain path A of each cell row: top sides joined by arm creases.
  std::vector<std::vector<int>> mountain_rows;
  /// Index into `vertices` of the driving vertex; its crease c1 carries major_rho.
  int driver_vertex = 0;

  int crease_between(int p, int q) const
  {
    for (std::size_t k = 0; k < creases.size(); ++k)
    {
      const Crease& c = creases[k];
      if ((c.a == p && c.b == q) || (c.a == q && c.b == p))
      {
        return static_cast<int>(k);
      }
    }
    return -1;
  }
};

namespace detail
{

inline Vec2 unit(double angle)
{
  return {std::cos(angle), std::sin(angle)};
}

inline Vec2 rot90(const Vec2& p, int times)
{
  Vec2 r = p;
  for (int k = 0; k < ((times % 4) + 4) % 4; ++k)
  {
    r = Vec2(-r.y(), r.x());
  }
  return r;
}

/// Twist angle alpha when v is (alpha, pi/2, pi - alpha, pi/2) up to cyclic order.
inline std::optional<double> twist_angle(const Vertex4& v, double eps)
{
  std::optional<double> found;
  for (int k = 0; k < 4; ++k)
  {
    const Vertex4 w = v.shifted(k);
    if (std::abs(w.alpha(2) - kPi / 2.0) < eps && std::abs(w.alpha(4) - kPi / 2.0) < eps &&
        std::abs(w.alpha(1) + w.alpha(3) - kPi) < eps)
    {
      if (!found || w.alpha(1) < *found)
      {
        found = w.alpha(1);
      }
    }
  }
  return found;
}

struct PointIndex
{
  std::vector<Vec2>& points;
  std::map<std::pair<long long, long long>, int> index;

  int operator()(const Vec2& p)
  {
    constexpr double kGrid = 1e9;
    const std::pair<long long, long long> key{std::llround(p.x() * kGrid), std::llround(p.y() * kGrid)};
    const auto it = index.find(key);
    if (it != index.end())
    {
      return it->second;
    }
    points.push_back(p);
    const int id = static_cast<int>(points.size()) - 1;
    index.emplace(key, id);
    return id;
  }
};

struct Propagation
{
  std::vector<double> crease_rho;
  std::vector<FoldState> vertex_states;
};

/// Assigns every crease a folding angle by spreading closed-form modes from the driver.
inline Propagation propagate(const SquareTwistSheet& sheet, double major_rho, const Tolerances& tol)
{
  constexpr double kConflict = 1e-9;
  const std::size_t nc = sheet.creases.size();
  const std::size_t nv = sheet.vertices.size();
  std::vector<std::optional<double>> rho(nc);
  std::vector<std::optional<FoldState>> states(nv);
  rho[sheet.vertices[sheet.driver_vertex].crease_ids[0]] = major_rho;

  std::size_t solved = 0;
  bool progress = true;
  while (progress && solved < nv)
  {
    progress = false;
    for (std::size_t k = 0; k < nv; ++k)
    {
      if (states[k])
      {
        continue;
      }
      const TwistVertex& tv = sheet.vertices[k];
      const std::array<int, 2> major = mode_major_creases(tv.mode);
      int known = 0;
      for (const int c : {major[0], major[1], 1, 2, 3, 4})
      {
        if (rho[tv.crease_ids[slot(c)]])
        {
          known = c;
          break;
        }
      }
      if (known == 0)
      {
        continue;
      }
      const FoldState s =
          fold_mode_from_crease(sheet.generator, tv.mode, known, *rho[tv.crease_ids[slot(known)]], tol);
      for (int c = 1; c <= 4; ++c)
      {
        std::optional<double>& r = rho[tv.crease_ids[slot(c)]];
        if (r && angle_distance(*r, s.rho(c)) > kConflict)
        {
          const Crease& cr = sheet.creases[tv.crease_ids[slot(c)]];
          std::ostringstream os;
          os << "rigid-foldability violation at crease (" << cr.a << ", " << cr.b << "): " << *r << " vs " << s.rho(c);
          throw ConsistencyError(os.str());
        }
        r = s.rho(c);
      }
      states[k] = s;
      ++solved;
      progress = true;
    }
  }
  if (solved < nv)
  {
    throw ConsistencyError("fold propagation did not reach every vertex");
  }
  Propagation out;
  for (std::size_t c = 0; c < nc; ++c)
  {
    if (!rho[c])
    {
      std::ostringstream os;
      os << "crease (" << sheet.creases[c].a << ", " << sheet.creases[c].b << ") has no folding angle";
      throw ConsistencyError(os.str());
    }
    out.crease_rho.push_back(*rho[c]);
  }
  for (const auto& s : states)
  {
    out.vertex_states.push_back(*s);
  }
  return out;
}

} // namespace detail

inline SquareTwistSheet build_square_twist_sheet(const Vertex4& v, int rows = 1, int cols = 1, const Tolerances& tol = {})
{
  tol.validate();
  if (rows < 1 || cols < 1)
  {
    throw InputError("rows and cols must be at least 1");
  }
  require_euclidean_flat_foldable(v, tol.angle_eps);
  const std::optional<double> twist = detail::twist_angle(v, 1e-9);
  if (!twist)
  {
    throw DomainError("square-twist layout needs a generator (alpha, pi/2, pi - alpha, pi/2) up to cyclic order");
  }
  if (std::abs(*twist - kPi / 2.0) < 1e-9)
  {
    throw DomainError("twist angle pi/2 gives a degenerate square twist");
  }

  SquareTwistSheet s;
  s.twist = *twist;
  s.generator = Vertex4({*twist, kPi / 2.0, kPi - *twist, kPi / 2.0});
  s.rows = rows;
  s.cols = cols;
  const double a = *twist;
  constexpr double kArm = 1.0;
  s.lattice1 = kArm * detail::unit(-a) - Vec2(0.0, 1.0);
  s.lattice2 = detail::rot90(s.lattice1, 1);

  detail::PointIndex pid{s.points, {}};
  const std::array<Vec2, 4> square{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  std::map<int, int> vertex_of_point;
  // strips and corner squares are shared by neighbouring cells
  std::map<std::vector<int>, int> seen_faces;
  const auto add_face = [&](std::vector<int> f, FaceKind kind)
  {
    std::vector<int> key(f);
    std::sort(key.begin(), key.end());
    if (seen_faces.emplace(key, static_cast<int>(s.faces.size())).second)
    {
      s.faces.push_back(std::move(f));
      s.face_kind.push_back(kind);
    }
  };

  for (int i = 0; i < rows; ++i)
  {
    for (int j = 0; j < cols; ++j)
    {
      const Vec2 o = i * s.lattice1 + j * s.lattice2;
      std::array<int, 4> p{};
      for (int k = 0; k < 4; ++k)
      {
        p[k] = pid(o + square[k]);
      }
      add_face({p[0], p[1], p[2], p[3]}, FaceKind::central_square);
      for (int k = 0; k < 4; ++k)
      {
        const Vec2 pk = o + square[k];
        const Vec2 pn = o + square[(k + 1) % 4];
        const Vec2 u = kArm * detail::rot90(detail::unit(-a), k);
        add_face({pid(pk), pid(pk + u), pid(pn + u), pid(pn)}, FaceKind::strip);
        const Vec2 d1 = kArm * detail::rot90(detail::unit(1.5 * kPi - a), k);
        add_face({pid(pk), pid(pk + d1), pid(pk + d1 + u), pid(pk + u)}, FaceKind::corner_square);

        TwistVertex tv;
        tv.point = p[k];
        tv.row = i;
        tv.col = j;
        tv.corner = k;
        tv.mode = k % 2 == 0 ? 2 : 1;
        tv.crease_to = {p[(k + 1) % 4], p[(k + 3) % 4], pid(pk + d1), pid(pk + u)};
        vertex_of_point[tv.point] = static_cast<int>(s.vertices.size());
        s.vertices.push_back(tv);
      }
    }
  }

  // creases are the edges shared by two faces
  std::map<std::pair<int, int>, int> valence;
  for (const auto& f : s.faces)
  {
    for (std::size_t k = 0; k < f.size(); ++k)
    {
      const int p = f[k];
      const int q = f[(k + 1) % f.size()];
      ++valence[{std::min(p, q), std::max(p, q)}];
    }
  }
  for (const auto& [e, n] : valence)
  {
    if (n == 2)
    {
      s.creases.push_back({e.first, e.second, 0});
    }
    else if (n != 1)
    {
      throw ConsistencyError("square-twist layout produced an edge shared by more than two faces");
    }
  }
  for (TwistVertex& tv : s.vertices)
  {
    for (int c = 0; c < 4; ++c)
    {
      tv.crease_ids[c] = s.crease_between(tv.point, tv.crease_to[c]);
      if (tv.crease_ids[c] < 0)
      {
        throw ConsistencyError("twist vertex crease missing from the layout");
      }
    }
  }
  for (const Crease& c : s.creases)
  {
    if (!vertex_of_point.count(c.a) && !vertex_of_point.count(c.b))
    {
      throw ConsistencyError("crease without a twist vertex");
    }
  }

  const detail::Propagation pr = detail::propagate(s, kPi / 2.0, tol);
  for (std::size_t c = 0; c < s.creases.size(); ++c)
  {
    s.creases[c].mv = pr.crease_rho[c] > 0.0 ? 1 : -1;
  }

  for (int i = 0; i < rows; ++i)
  {
    std::vector<int> valley;
    std::vector<int> mountain;
    for (int j = 0; j < cols; ++j)
    {
      const int base = 4 * (i * cols + j);
      valley.push_back(s.vertices[base + 0].point);
      valley.push_back(s.vertices[base + 1].point);
      mountain.push_back(s.vertices[base + 3].point);
      mountain.push_back(s.vertices[base + 2].point);
    }
    s.valley_rows.push_back(std::move(valley));
    s.mountain_rows.push_back(std::move(mountain));
  }
  return s;
}

/// Rigid motion x -> rotation * x + translation with its registration residual.
struct RigidMotion
{
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double rms = 0.0;
  double max_deviation = 0.0;

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
};

/// Least-squares rigid registration of `from` onto `to` (no scaling).
inline RigidMotion register_polylines(const std::vector<Vec3>& from, const std::vector<Vec3>& to)
{
  if (from.size() != to.size() || from.size() < 3)
  {
    throw InputError("registration needs two point lists of equal length, at least 3");
  }
  Eigen::Matrix3Xd p(3, from.size());
  Eigen::Matrix3Xd q(3, to.size());
  for (std::size_t k = 0; k < from.size(); ++k)
  {
    p.col(static_cast<Eigen::Index>(k)) = from[k];
    q.col(static_cast<Eigen::Index>(k)) = to[k];
  }
  const Eigen::Matrix4d t = Eigen::umeyama(p, q, false);
  RigidMotion m;
  m.rotation = t.topLeftCorner<3, 3>();
  m.translation = t.topRightCorner<3, 1>();
  double ss = 0.0;
  for (std::size_t k = 0; k < from.size(); ++k)
  {
    const double e = (m.apply(from[k]) - to[k]).norm();
    ss += e * e;
    m.max_deviation = std::max(m.max_deviation, e);
  }
  m.rms = std::sqrt(ss / static_cast<double>(from.size()));
  return m;
}

/// Orthonormal bounding-box axes: y along the stacking direction, x along the first
/// folded lattice vector, z the remaining (thickness) direction.
struct BoxFrame
{
  std::array<Vec3, 3> axes{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
};

inline BoxFrame box_frame(const Vec3& stacking, const Vec3& lattice1, const Vec3& lattice2)
{
  constexpr double kTiny = 1e-9;
  BoxFrame f;
  if (stacking.norm() < kTiny)
  {
    throw ConsistencyError("stacking direction vanishes");
  }
  const Vec3 y = stacking.normalized();
  Vec3 x = lattice1 - lattice1.dot(y) * y;
  if (x.norm() < kTiny)
  {
    x = lattice2 - lattice2.dot(y) * y;
  }
  if (x.norm() < kTiny)
  {
    x = y.unitOrthogonal();
  }
  x.normalize();
  f.axes = {x, y, x.cross(y)};
  return f;
}

inline std::array<double, 3> box_extents(const BoxFrame& f, const std::vector<Vec3>& pts)
{
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k)
  {
    double lo = 1e300;
    double hi = -1e300;
    for (const Vec3& p : pts)
    {
      const double s = f.axes[k].dot(p);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    out[k] = pts.empty() ? 0.0 : hi - lo;
  }
  return out;
}

struct FoldedSheet
{
  double major_rho = 0.0;
  /// Vertices follow sheet.points; faces follow sheet.faces.
  FoldedMesh mesh;
  std::vector<double> crease_rho;
  std::vector<FoldState> vertex_states;
  std::vector<double> vertex_residuals;
  /// Folded images of the two lattice translations.
  Vec3 lattice1 = Vec3::Zero();
  Vec3 lattice2 = Vec3::Zero();
  /// Carries valley path B of row 0 onto mountain path A of row 0.
  RigidMotion row_registration;
  BoxFrame frame;
  std::array<double, 3> bbox{};
};

namespace detail
{

struct Placement
{
  Mat3 r = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 operator()(const Vec2& p) const { return r * Vec3(p.x(), p.y(), 0.0) + t; }
};

} // namespace detail

/// Rigidly folds the sheet with the driver crease at major_rho.
inline FoldedSheet fold_sheet(const SquareTwistSheet& sheet, double major_rho, const Tolerances& tol = {})
{
  tol.validate();
  if (!std::isfinite(major_rho) || std::abs(major_rho) > kPi + 1e-12)
  {
    throw RangeError("major_rho must lie in [-pi, pi]");
  }
  const detail::Propagation pr = detail::propagate(sheet, major_rho, tol);
  FoldedSheet out;
  out.major_rho = major_rho;
  out.crease_rho = pr.crease_rho;
  out.vertex_states = pr.vertex_states;
  for (const FoldState& s : pr.vertex_states)
  {
    const double r = closure_residual(sheet.generator, s);
    if (!(r < tol.residual_tol))
    {
      std::ostringstream os;
      os << "vertex loop does not close: residual " << r;
      throw ConsistencyError(os.str());
    }
    out.vertex_residuals.push_back(r);
  }

  // edge -> faces with the directed edge as seen by each face
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (std::size_t f = 0; f < sheet.faces.size(); ++f)
  {
    const auto& poly = sheet.faces[f];
    for (std::size_t k = 0; k < poly.size(); ++k)
    {
      const int p = poly[k];
      const int q = poly[(k + 1) % poly.size()];
      edge_faces[{std::min(p, q), std::max(p, q)}].push_back(static_cast<int>(f));
    }
  }

  const std::size_t nf = sheet.faces.size();
  std::vector<std::optional<detail::Placement>> place(nf);
  place[0] = detail::Placement{};
  std::deque<int> queue{0};
  while (!queue.empty())
  {
    const int f = queue.front();
    queue.pop_front();
    const auto& poly = sheet.faces[f];
    for (std::size_t k = 0; k < poly.size(); ++k)
    {
      const int a = poly[k];
      const int b = poly[(k + 1) % poly.size()];
      const int c = sheet.crease_between(a, b);
      if (c < 0)
      {
        continue;
      }
      for (const int g : edge_faces[{std::min(a, b), std::max(a, b)}])
      {
        if (g == f || place[g])
        {
          continue;
        }
        // neighbour lies to the right of a -> b; fold it about the crease line by rho
        const Vec2 pa = sheet.points[a];
        const Vec2 pb = sheet.points[b];
        const Vec3 axis = Vec3(pa.x() - pb.x(), pa.y() - pb.y(), 0.0).normalized();
        const Mat3 ru = rotation_about_axis(axis, pr.crease_rho[c]).matrix();
        const Vec3 pivot(pb.x(), pb.y(), 0.0);
        const detail::Placement& pf = *place[f];
        place[g] = detail::Placement{pf.r * ru, pf.r * (pivot - ru * pivot) + pf.t};
        queue.push_back(g);
      }
    }
  }

  constexpr double kCycle = 1e-8;
  std::vector<std::optional<Vec3>> pos(sheet.points.size());
  for (std::size_t f = 0; f < nf; ++f)
  {
    if (!place[f])
    {
      throw ConsistencyError("sheet faces are not connected through creases");
    }
    for (const int p : sheet.faces[f])
    {
      const Vec3 x = (*place[f])(sheet.points[p]);
      if (pos[p] && (*pos[p] - x).norm() > kCycle)
      {
        std::ostringstream os;
        os << "face cycle around point " << p << " fails to close by " << (*pos[p] - x).norm();
        throw ConsistencyError(os.str());
      }
      if (!pos[p])
      {
        pos[p] = x;
      }
    }
  }
  for (const auto& p : pos)
  {
    out.mesh.add_vertex(*p);
  }
  for (const auto& f : sheet.faces)
  {
    out.mesh.add_face(f);
  }

  const TwistVertex& v0 = sheet.vertices[0];
  const TwistVertex& v1 = sheet.vertices[1];
  const auto& x = out.mesh.vertices;
  out.lattice1 = x[v0.crease_to[3]] - x[v0.crease_to[1]];
  out.lattice2 = x[v1.crease_to[3]] - x[v0.point];

  std::vector<Vec3> from;
  std::vector<Vec3> to;
  for (std::size_t k = 0; k < sheet.valley_rows[0].size(); ++k)
  {
    from.push_back(x[sheet.valley_rows[0][k]]);
    to.push_back(x[sheet.mountain_rows[0][k]]);
  }
  if (from.size() >= 3)
  {
    out.row_registration = register_polylines(from, to);
  }
  else
  {
    // one cell: the rows are single segments; the gluing is the pure translation
    out.row_registration.translation = 0.5 * ((to[0] - from[0]) + (to[1] - from[1]));
    out.row_registration.max_deviation = ((to[0] - from[0]) - (to[1] - from[1])).norm();
    out.row_registration.rms = out.row_registration.max_deviation / 2.0;
  }
  out.frame = box_frame(out.row_registration.translation, out.lattice1, out.lattice2);
  out.bbox = box_extents(out.frame, out.mesh.vertices);
  return out;
}

/// Layer k+1 vertex `upper` glued onto layer k vertex `lower`.
struct GluePair
{
  int layer = 0;
  int lower = 0;
  int upper = 0;
};

/// Folded sheets stacked so that valley paths of each layer lie on mountain paths of the one below.
struct CwComplex
{
  int layers = 1;
  CombineVariant variant = CombineVariant::parallel;
  double major_rho = 0.0;
  std::vector<FoldedMesh> layer_meshes;
  std::vector<GluePair> glue_map;
  /// Maps layer k onto layer k+1.
  RigidMotion glue;
  double glue_residual = 0.0;
  BoxFrame frame;
  std::array<double, 3> bbox{};

  /// Layers in one mesh with glued vertices merged.
  FoldedMesh merged() const
  {
    std::vector<int> offset(layer_meshes.size(), 0);
    std::size_t total = 0;
    for (std::size_t k = 0; k < layer_meshes.size(); ++k)
    {
      offset[k] = static_cast<int>(total);
      total += layer_meshes[k].vertices.size();
    }
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int i)
    {
      while (parent[i] != i)
      {
        parent[i] = parent[parent[i]];
        i = parent[i];
      }
      return i;
    };
    for (const GluePair& g : glue_map)
    {
      const int lo = find(offset[g.layer] + g.lower);
      const int up = find(offset[g.layer + 1] + g.upper);
      parent[std::max(lo, up)] = std::min(lo, up);
    }
    FoldedMesh m;
    std::vector<int> index(total, -1);
    for (std::size_t k = 0; k < layer_meshes.size(); ++k)
    {
      for (std::size_t i = 0; i < layer_meshes[k].vertices.size(); ++i)
      {
        const int id = offset[k] + static_cast<int>(i);
        const int root = find(id);
        if (index[root] < 0)
        {
          index[root] = m.add_vertex(layer_meshes[k].vertices[i]);
        }
        index[id] = index[root];
      }
    }
    for (std::size_t k = 0; k < layer_meshes.size(); ++k)
    {
      for (const auto& f : layer_meshes[k].faces)
      {
        std::vector<int> g;
        for (const int i : f)
        {
          g.push_back(index[offset[k] + i]);
        }
        m.add_face(std::move(g));
      }
    }
    return m;
  }
};

/// Stacks `layers` copies of the folded sheet.
///
/// Parallel: valley path B of row 0 goes onto mountain path A of row 0 (a translation).
/// Rotated: valley path B of the last row, reversed, goes onto mountain path A of row 0
/// (a half-turn), the tessellation of the rotated combined vertex.
inline CwComplex stack_complex(const SquareTwistSheet& sheet,
                               int layers,
                               double major_rho,
                               CombineVariant variant = CombineVariant::parallel,
                               const Tolerances& tol = {})
{
  if (layers < 1)
  {
    throw InputError("layers must be at least 1");
  }
  const FoldedSheet fs = fold_sheet(sheet, major_rho, tol);
  const auto& x = fs.mesh.vertices;
  CwComplex cw;
  cw.layers = layers;
  cw.variant = variant;
  cw.major_rho = major_rho;

  if (variant == CombineVariant::parallel)
  {
    cw.glue = fs.row_registration;
  }
  else
  {
    const std::vector<int>& vr = sheet.valley_rows.back();
    const std::vector<int>& mr = sheet.mountain_rows.front();
    std::vector<Vec3> from;
    std::vector<Vec3> to;
    for (std::size_t k = 0; k < vr.size(); ++k)
    {
      from.push_back(x[vr[vr.size() - 1 - k]]);
      to.push_back(x[mr[k]]);
    }
    if (from.size() < 3)
    {
      throw DomainError("the rotated stacking needs at least 2 columns");
    }
    cw.glue = register_polylines(from, to);
  }
  constexpr double kGlue = 1e-8;
  if (!(cw.glue.max_deviation <= kGlue))
  {
    std::ostringstream os;
    os << "gluing incompatibility: crease rows differ by " << cw.glue.max_deviation << " after alignment";
    throw ConsistencyError(os.str());
  }

  FoldedMesh layer = fs.mesh;
  for (int k = 0; k < layers; ++k)
  {
    cw.layer_meshes.push_back(layer);
    layer.transform(cw.glue.rotation, cw.glue.translation);
  }

  std::vector<int> valley;
  std::vector<int> mountain;
  for (const auto& r : sheet.valley_rows)
  {
    valley.insert(valley.end(), r.begin(), r.end());
  }
  for (const auto& r : sheet.mountain_rows)
  {
    mountain.insert(mountain.end(), r.begin(), r.end());
  }
  for (int k = 0; k + 1 < layers; ++k)
  {
    bool linked = false;
    for (const int u : valley)
    {
      const Vec3 pu = cw.layer_meshes[k + 1].vertices[u];
      for (const int w : mountain)
      {
        const double e = (pu - cw.layer_meshes[k].vertices[w]).norm();
        if (e <= kGlue)
        {
          cw.glue_map.push_back({k, w, u});
          cw.glue_residual = std::max(cw.glue_residual, e);
          linked = true;
          break;
        }
      }
    }
    if (!linked)
    {
      throw ConsistencyError("stacked layers share no glued vertex");
    }
  }

  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : x)
  {
    centroid += p;
  }
  centroid /= static_cast<double>(x.size());
  const Vec3 stacking = variant == CombineVariant::parallel ? cw.glue.translation : cw.glue.apply(centroid) - centroid;
  cw.frame = box_frame(stacking, fs.lattice1, fs.lattice2);
  std::vector<Vec3> all;
  for (const FoldedMesh& m : cw.layer_meshes)
  {
    all.insert(all.end(), m.vertices.begin(), m.vertices.end());
  }
  cw.bbox = box_extents(cw.frame, all);
  return cw;
}

enum class AuxeticRegime
{
  two_contract_one_expand,
  three_contract,
  other
};

inline std::string to_string(AuxeticRegime r)
{
  switch (r)
  {
  case AuxeticRegime::two_contract_one_expand:
    return "2-contract/1-expand";
  case AuxeticRegime::three_contract:
    return "3-contract";
  case AuxeticRegime::other:
    return "other";
  }
  return "other";
}

struct AuxeticSample
{
  double rho = 0.0;
  std::array<double, 3> bbox{};
};

struct AuxeticReport
{
  int layers = 1;
  CombineVariant variant = CombineVariant::parallel;
  std::vector<AuxeticSample> samples;
  /// regimes[k] classifies the interval [samples[k], samples[k+1]].
  std::vector<AuxeticRegime> regimes;
};

inline AuxeticRegime classify_interval(const std::array<double, 3>& a, const std::array<double, 3>& b)
{
  constexpr double kFlat = 1e-12;
  int down = 0;
  int up = 0;
  for (int k = 0; k < 3; ++k)
  {
    const double d = b[k] - a[k];
    if (d < -kFlat)
    {
      ++down;
    }
    else if (d > kFlat)
    {
      ++up;
    }
  }
  if (down == 3)
  {
    return AuxeticRegime::three_contract;
  }
  if (down == 2 && up == 1)
  {
    return AuxeticRegime::two_contract_one_expand;
  }
  return AuxeticRegime::other;
}

inline AuxeticReport auxetic_sweep(const SquareTwistSheet& sheet,
                                   int layers,
                                   double rho_min,
                                   double rho_max,
                                   int n,
                                   CombineVariant variant = CombineVariant::parallel,
                                   const Tolerances& tol = {})
{
  if (n < 3)
  {
    throw InputError("auxetic sweep needs at least 3 samples");
  }
  if (!(rho_min < rho_max))
  {
    throw InputError("auxetic sweep needs rho_min < rho_max");
  }
  AuxeticReport rep;
  rep.layers = layers;
  rep.variant = variant;
  for (int k = 0; k < n; ++k)
  {
    const double rho = k == n - 1 ? rho_max : rho_min + (rho_max - rho_min) * k / (n - 1);
    rep.samples.push_back({rho, stack_complex(sheet, layers, rho, variant, tol).bbox});
  }
  for (int k = 0; k + 1 < n; ++k)
  {
    rep.regimes.push_back(classify_interval(rep.samples[k].bbox, rep.samples[k + 1].bbox));
  }
  return rep;
}

} // namespace origami4
