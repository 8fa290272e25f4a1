#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "origami4/closure.hpp"
#include "origami4/kinematics_gen.hpp"
#include "origami4/mesh.hpp"
#include "origami4/vertex.hpp"

namespace origami4
{

/// Rigid plates and crease directions of one folded vertex.
///
/// Sector j lies between creases c(j-1) and c(j). Its plate is the wedge
/// frames[j] * {(r cos p, r sin p, 0) : 0 <= p <= alpha_j}, so frames[j] * e_x = c(j-1).
struct FoldedVertexGeometry
{
  Vertex4 vertex;
  FoldState state;
  double radius = 1.0;
  int arc_segments = 8;
  std::array<Vec3, 4> crease_dirs;
  std::array<Mat3, 4> frames;
  std::array<std::vector<Vec3>, 4> plate_polys;

  const Vec3& crease(int i) const { return crease_dirs[slot(i)]; }
  const Mat3& frame(int sector) const { return frames[slot(sector)]; }
  const std::vector<Vec3>& plate(int sector) const { return plate_polys[slot(sector)]; }

  /// Unit vector bisecting sector j inside its plate.
  Vec3 sector_mid(int sector) const
  {
    const double h = vertex.alpha(sector) / 2.0;
    return frame(sector) * Vec3(std::cos(h), std::sin(h), 0.0);
  }

  /// Oriented plate normal (counterclockwise sector order).
  Vec3 sector_normal(int sector) const { return frame(sector).col(2); }
};

namespace detail
{

/// Sector frames from the fold_map factors; plate 1 stays in the reference plane.
inline std::array<Mat3, 4> sector_frames(const Vertex4& v, const FoldState& s)
{
  std::array<Mat3, 4> f;
  f[0] = rot_z(-v.alpha(1)).matrix();
  Rotation3 m = rot_x(s.rho(1));
  for (int j = 2; j <= 4; ++j)
  {
    f[slot(j)] = m.matrix();
    m = m * rot_z(v.alpha(j)) * rot_x(s.rho(j));
  }
  return f;
}

} // namespace detail

/// Crease directions c1..c4 of a state, c1 = +x in the reference plane.
inline std::array<Vec3, 4> crease_directions(const Vertex4& v, const FoldState& s)
{
  const std::array<Mat3, 4> f = detail::sector_frames(v, s);
  std::array<Vec3, 4> c;
  for (int i = 1; i <= 4; ++i)
  {
    c[slot(i)] = f[slot(i + 1)].col(0);
  }
  return c;
}

inline FoldedVertexGeometry embed_vertex(const Vertex4& v,
                                         const FoldState& s,
                                         double radius = 1.0,
                                         int arc_segments = 8,
                                         const Tolerances& tol = {})
{
  if (!(radius > 0.0) || !std::isfinite(radius))
  {
    throw InputError("plate radius must be positive");
  }
  if (arc_segments < 1)
  {
    throw InputError("arc_segments must be at least 1");
  }
  const double res = closure_residual(v, s);
  if (!(res < tol.residual_tol))
  {
    std::ostringstream os;
    os << "state does not close: residual " << res << " >= " << tol.residual_tol;
    throw InputError(os.str());
  }
  FoldedVertexGeometry g{v, s, radius, arc_segments, {}, detail::sector_frames(v, s), {}};
  for (int i = 1; i <= 4; ++i)
  {
    g.crease_dirs[slot(i)] = g.frame(i + 1).col(0);
  }
  for (int j = 1; j <= 4; ++j)
  {
    std::vector<Vec3>& poly = g.plate_polys[slot(j)];
    poly.reserve(arc_segments + 2);
    poly.push_back(Vec3::Zero());
    for (int k = 0; k <= arc_segments; ++k)
    {
      const double p = v.alpha(j) * k / arc_segments;
      poly.push_back(radius * (g.frame(j) * Vec3(std::cos(p), std::sin(p), 0.0)));
    }
  }
  return g;
}

/// Folding angle at crease c between the plates (c_prev, c) and (c, c_next).
inline double dihedral_fold(const Vec3& c_prev, const Vec3& c, const Vec3& c_next)
{
  const Vec3 n1 = c_prev.cross(c);
  const Vec3 n2 = c.cross(c_next);
  return std::atan2(n1.cross(n2).dot(c.normalized()), n1.dot(n2));
}

enum class CombineVariant
{
  parallel, ///< C u C*: c2, c4 identified with c2*, c4*
  rotated   ///< C u' C*: c2, c4 identified with c4*, c2*
};

inline std::string to_string(CombineVariant v)
{
  return v == CombineVariant::parallel ? "parallel" : "rotated";
}

inline CombineVariant parse_variant(const std::string& s)
{
  if (s == "parallel")
  {
    return CombineVariant::parallel;
  }
  if (s == "rotated")
  {
    return CombineVariant::rotated;
  }
  throw InputError("variant must be \"parallel\" or \"rotated\"");
}

enum class MergedPair
{
  c2c4,
  c1c3
};

inline std::string to_string(MergedPair p)
{
  return p == MergedPair::c2c4 ? "c2c4" : "c1c3";
}

inline MergedPair parse_merged_pair(const std::string& s)
{
  if (s == "c2c4")
  {
    return MergedPair::c2c4;
  }
  if (s == "c1c3")
  {
    return MergedPair::c1c3;
  }
  throw InputError("merged pair must be \"c2c4\" or \"c1c3\"");
}

/// Base creases of a merged pair, in order (a, b).
inline std::array<int, 2> merged_creases(MergedPair p)
{
  return p == MergedPair::c2c4 ? std::array<int, 2>{2, 4} : std::array<int, 2>{1, 3};
}

/// Driver crease that alone sets the angle between the merged creases.
inline int merged_driver(MergedPair p)
{
  return p == MergedPair::c2c4 ? 3 : 2;
}

struct SyncOptions
{
  MergedPair pair = MergedPair::c2c4;
  std::optional<BranchLabel> base_branch;
  Tolerances tol;
};

/// Angle interval between the merged creases over one run of feasible drivers in [0, pi].
struct ThetaInterval
{
  double driver_lo = 0.0;
  double driver_hi = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;

  bool contains(double theta, double eps) const { return theta >= theta_lo - eps && theta <= theta_hi + eps; }
};

struct CombinedVertex
{
  Vertex4 base;
  Vertex4 dual;
  CombineVariant variant = CombineVariant::parallel;
  MergedPair pair = MergedPair::c2c4;
  double theta = 0.0;
  /// crease_map[k]: dual crease identified with base crease merged_creases(pair)[k].
  std::array<int, 2> crease_map{2, 4};
  FoldState base_state;
  /// Dual state in the dual's own counterclockwise labels (closes fold_map(dual)).
  FoldState dual_state;
  /// -1 when the dual's counterclockwise orientation is reversed in the combined frame.
  int dual_orientation = -1;
  /// Places the base's canonical embedding into the combined frame.
  Mat3 placement = Mat3::Identity();
  /// Places the dual's canonical embedding into the combined frame.
  Mat3 dual_placement = Mat3::Identity();

  /// Dual folding angles as seen from the base side: dual_orientation * dual_state.
  FoldState dual_state_seen_from_base() const
  {
    return dual_orientation > 0 ? dual_state : dual_state.negated();
  }
};

namespace detail
{

inline double merged_angle(const Vertex4& v, const FoldState& s, const std::array<int, 2>& pair)
{
  const std::array<Vec3, 4> c = crease_directions(v, s);
  return vector_angle(c[slot(pair[0])], c[slot(pair[1])]);
}

/// Any closed state at driver x, or nothing.
inline std::optional<FoldState> any_state(const Vertex4& v, int d, double x, const Tolerances& tol)
{
  const std::vector<FoldState> c = candidate_states(v, d, x, tol);
  if (c.empty())
  {
    return std::nullopt;
  }
  return c.front();
}

/// Feasible runs of the merged-pair driver on [0, pi] with their theta images.
inline std::vector<ThetaInterval> theta_intervals(const Vertex4& v, MergedPair pair, const Tolerances& tol)
{
  constexpr int kGrid = 181;
  const int d = merged_driver(pair);
  const std::array<int, 2> m = merged_creases(pair);
  std::vector<double> xs(kGrid);
  std::vector<char> ok(kGrid);
  for (int k = 0; k < kGrid; ++k)
  {
    xs[k] = k == kGrid - 1 ? kPi : kPi * k / (kGrid - 1);
    ok[k] = any_state(v, d, xs[k], tol).has_value() ? 1 : 0;
  }
  auto refine = [&](double good, double bad)
  {
    for (int it = 0; it < 60 && std::abs(good - bad) > 1e-13; ++it)
    {
      const double mid = 0.5 * (good + bad);
      (any_state(v, d, mid, tol) ? good : bad) = mid;
    }
    return good;
  };
  std::vector<ThetaInterval> out;
  int k = 0;
  while (k < kGrid)
  {
    if (!ok[k])
    {
      ++k;
      continue;
    }
    int e = k;
    while (e + 1 < kGrid && ok[e + 1])
    {
      ++e;
    }
    ThetaInterval iv;
    iv.driver_lo = k == 0 ? xs[0] : refine(xs[k], xs[k - 1]);
    iv.driver_hi = e == kGrid - 1 ? xs[e] : refine(xs[e], xs[e + 1]);
    const double ta = merged_angle(v, *any_state(v, d, iv.driver_lo, tol), m);
    const double tb = merged_angle(v, *any_state(v, d, iv.driver_hi, tol), m);
    iv.theta_lo = std::min(ta, tb);
    iv.theta_hi = std::max(ta, tb);
    out.push_back(iv);
    k = e + 1;
  }
  return out;
}

inline std::string describe(const std::vector<ThetaInterval>& ivs)
{
  if (ivs.empty())
  {
    return "(none)";
  }
  std::ostringstream os;
  os.precision(10);
  for (std::size_t k = 0; k < ivs.size(); ++k)
  {
    os << (k ? " u " : "") << "[" << ivs[k].theta_lo << ", " << ivs[k].theta_hi << "]";
  }
  return os.str();
}

/// Driver in [0, pi] whose folded merged creases make angle theta.
inline double driver_for_theta(const Vertex4& v, MergedPair pair, const ThetaInterval& iv, double theta, const Tolerances& tol)
{
  const int d = merged_driver(pair);
  const std::array<int, 2> m = merged_creases(pair);
  auto f = [&](double x) { return merged_angle(v, *any_state(v, d, x, tol), m) - theta; };
  double lo = iv.driver_lo;
  double hi = iv.driver_hi;
  double flo = f(lo);
  if (std::abs(flo) <= tol.solver_tol)
  {
    return lo;
  }
  if (std::abs(f(hi)) <= tol.solver_tol)
  {
    return hi;
  }
  for (int it = 0; it < 200 && hi - lo > tol.solver_tol; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0))
    {
      lo = mid;
      flo = fm;
    }
    else
    {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Rotation carrying the unit pair (u1, u2) onto (w1, w2); the pairs span equal angles.
inline Mat3 align_pairs(const Vec3& u1, const Vec3& u2, const Vec3& w1, const Vec3& w2)
{
  auto frame = [](const Vec3& a, const Vec3& b)
  {
    Mat3 f;
    f.col(0) = (a + b).normalized();
    f.col(1) = (a - b).normalized();
    f.col(2) = f.col(0).cross(f.col(1));
    return f;
  };
  return frame(w1, w2) * frame(u1, u2).transpose();
}

inline FoldState flip(const FoldState& s, const std::array<int, 2>& creases)
{
  std::array<double, 4> r = s.rhos();
  r[slot(creases[0])] = -r[slot(creases[0])];
  r[slot(creases[1])] = -r[slot(creases[1])];
  return FoldState(r);
}

} // namespace detail

/// Angles reachable between the merged creases of v; one interval per feasible driver run.
inline std::vector<ThetaInterval> achievable_theta(const Vertex4& v, MergedPair pair = MergedPair::c2c4, const Tolerances& tol = {})
{
  return detail::theta_intervals(v, pair, tol);
}

/// Folds base and dual(base) so their merged creases both make angle theta, and
/// selects the dual state that realizes the requested identification.
///
/// Parallel: the dual's non-merged creases continue the base's plates as half-planes.
/// Rotated: the dual state is the base state with the merged pair's signs flipped.
inline CombinedVertex synchronize(const Vertex4& base, CombineVariant variant, double theta, const SyncOptions& opt = {})
{
  opt.tol.validate();
  if (!std::isfinite(theta))
  {
    throw InputError("theta must be finite");
  }
  const Tolerances& tol = opt.tol;
  const Vertex4 dv = dual(base);
  const int d = merged_driver(opt.pair);
  const std::array<int, 2> m = merged_creases(opt.pair);
  const std::array<int, 2> other{m[0] - 1 < 1 ? 4 : m[0] - 1, m[1] - 1};

  const std::vector<ThetaInterval> ib = detail::theta_intervals(base, opt.pair, tol);
  const std::vector<ThetaInterval> ih = detail::theta_intervals(dv, opt.pair, tol);
  constexpr double kThetaEps = 1e-12;
  const auto pick = [&](const std::vector<ThetaInterval>& ivs) -> const ThetaInterval*
  {
    for (const ThetaInterval& iv : ivs)
    {
      if (iv.contains(theta, kThetaEps))
      {
        return &iv;
      }
    }
    return nullptr;
  };
  const ThetaInterval* jb = pick(ib);
  const ThetaInterval* jh = pick(ih);
  if (jb == nullptr || jh == nullptr)
  {
    std::ostringstream os;
    os.precision(10);
    os << "theta = " << theta << " is not achievable by both vertices; base theta range " << detail::describe(ib)
       << ", dual theta range " << detail::describe(ih);
    throw RangeError(os.str());
  }

  CombinedVertex cv{base, dv, variant, opt.pair, theta, {}, FoldState(), FoldState(), -1, Mat3::Identity(), Mat3::Identity()};
  cv.crease_map = variant == CombineVariant::parallel ? m : std::array<int, 2>{m[1], m[0]};
  cv.dual_orientation = variant == CombineVariant::parallel ? -1 : 1;

  const double xb = detail::driver_for_theta(base, opt.pair, *jb, theta, tol);
  std::vector<FoldState> bc = candidate_states(base, d, xb, tol);
  if (opt.base_branch)
  {
    bc = detail::on_branch(bc, *opt.base_branch);
    if (bc.empty())
    {
      throw BranchError("branch " + opt.base_branch->str() + " of the base is not realizable at this theta");
    }
  }
  else
  {
    for (const BranchLabel& b : BranchLabel::all())
    {
      const std::vector<FoldState> on = detail::on_branch(bc, b);
      if (!on.empty())
      {
        bc = on;
        break;
      }
    }
  }
  cv.base_state = bc.front();

  const double xh = detail::driver_for_theta(dv, opt.pair, *jh, theta, tol);
  std::vector<FoldState> hc = candidate_states(dv, d, xh, tol);
  if (xh > 0.0)
  {
    const std::vector<FoldState> neg = candidate_states(dv, d, -xh, tol);
    hc.insert(hc.end(), neg.begin(), neg.end());
  }
  if (hc.empty())
  {
    throw ConsistencyError("dual has no closed state at the synchronized driver");
  }

  const std::array<Vec3, 4> ce = crease_directions(base, cv.base_state);
  const Vec3& ea = ce[slot(m[0])];
  const Vec3& eb = ce[slot(m[1])];
  const FoldState flipped = detail::flip(cv.base_state, m);
  double best = 1e300;
  for (const FoldState& s : hc)
  {
    const std::array<Vec3, 4> ch = crease_directions(dv, s);
    double score = 0.0;
    if (variant == CombineVariant::parallel)
    {
      const Mat3 r = detail::align_pairs(ch[slot(m[0])], ch[slot(m[1])], ea, eb);
      score = (r * ch[slot(other[0])] + ce[slot(other[0])]).norm() + (r * ch[slot(other[1])] + ce[slot(other[1])]).norm();
    }
    else
    {
      score = state_distance(s, flipped);
    }
    if (score < best)
    {
      best = score;
      cv.dual_state = s;
    }
  }
  constexpr double kMatch = 1e-6;
  if (!(best < kMatch))
  {
    std::ostringstream os;
    os << "no dual state realizes the " << to_string(variant) << " identification (mismatch " << best << ")";
    throw ConsistencyError(os.str());
  }

  const std::array<Vec3, 4> ch = crease_directions(dv, cv.dual_state);
  const Mat3 align = variant == CombineVariant::parallel
                         ? detail::align_pairs(ch[slot(m[0])], ch[slot(m[1])], ea, eb)
                         : detail::align_pairs(ch[slot(m[1])], ch[slot(m[0])], ea, eb);
  // merged creases symmetric about the x axis of the reference plane
  cv.placement = detail::align_pairs(ea, eb, Vec3(std::cos(theta / 2.0), std::sin(theta / 2.0), 0.0),
                                     Vec3(std::cos(theta / 2.0), -std::sin(theta / 2.0), 0.0));
  if (theta <= kThetaEps || theta >= kPi - kThetaEps)
  {
    cv.placement = Mat3::Identity();
  }
  cv.dual_placement = cv.placement * align;
  return cv;
}

/// Base and dual geometries in the combined frame.
inline std::pair<FoldedVertexGeometry, FoldedVertexGeometry> combined_geometry(const CombinedVertex& cv,
                                                                               double radius = 1.0,
                                                                               int arc_segments = 8,
                                                                               const Tolerances& tol = {})
{
  FoldedVertexGeometry gb = embed_vertex(cv.base, cv.base_state, radius, arc_segments, tol);
  FoldedVertexGeometry gh = embed_vertex(cv.dual, cv.dual_state, radius, arc_segments, tol);
  auto place = [](FoldedVertexGeometry& g, const Mat3& r)
  {
    for (Vec3& c : g.crease_dirs)
    {
      c = r * c;
    }
    for (Mat3& f : g.frames)
    {
      f = r * f;
    }
    for (auto& poly : g.plate_polys)
    {
      for (Vec3& p : poly)
      {
        p = r * p;
      }
    }
  };
  place(gb, cv.placement);
  place(gh, cv.dual_placement);
  return {gb, gh};
}

/// Both vertices' plates in one mesh; identified crease tips share vertex indices.
inline FoldedMesh combined_mesh(const CombinedVertex& cv, double radius = 1.0, int arc_segments = 8, const Tolerances& tol = {})
{
  const auto [gb, gh] = combined_geometry(cv, radius, arc_segments, tol);
  constexpr double kCoincide = 1e-9;
  FoldedMesh mesh;
  const int origin = mesh.add_vertex(Vec3::Zero());
  const std::array<int, 2> m = merged_creases(cv.pair);

  std::array<int, 4> tip_b{};
  for (int i = 1; i <= 4; ++i)
  {
    tip_b[slot(i)] = mesh.add_vertex(radius * gb.crease(i));
  }
  std::array<int, 4> tip_h{-1, -1, -1, -1};
  for (int k = 0; k < 2; ++k)
  {
    const Vec3 dev = gh.crease(cv.crease_map[k]) - gb.crease(m[k]);
    if (!(dev.norm() <= kCoincide))
    {
      std::ostringstream os;
      os << "identified creases c" << m[k] << " and c" << cv.crease_map[k] << "* differ by " << dev.norm();
      throw ConsistencyError(os.str());
    }
    tip_h[slot(cv.crease_map[k])] = tip_b[slot(m[k])];
  }
  for (int i = 1; i <= 4; ++i)
  {
    if (tip_h[slot(i)] < 0)
    {
      tip_h[slot(i)] = mesh.add_vertex(radius * gh.crease(i));
    }
  }

  auto add_plates = [&](const FoldedVertexGeometry& g, const std::array<int, 4>& tips)
  {
    for (int j = 1; j <= 4; ++j)
    {
      const std::vector<Vec3>& poly = g.plate(j);
      std::vector<int> face{origin, tips[slot(j - 1)]};
      for (std::size_t k = 2; k + 1 < poly.size(); ++k)
      {
        face.push_back(mesh.add_vertex(poly[k]));
      }
      face.push_back(tips[slot(j)]);
      mesh.add_face(std::move(face));
    }
  };
  add_plates(gb, tip_b);
  add_plates(gh, tip_h);
  return mesh;
}

/// Dihedral angles where base sector j and dual sector j meet along a merged crease
/// (parallel variant). Each value is pi when the two plates form a half-plane.
inline std::vector<double> half_plane_dihedrals(const CombinedVertex& cv, const Tolerances& tol = {})
{
  if (cv.variant != CombineVariant::parallel)
  {
    throw DomainError("half-plane junctions exist only in the parallel variant");
  }
  const auto [gb, gh] = combined_geometry(cv, 1.0, 1, tol);
  std::vector<double> out;
  for (const int a : merged_creases(cv.pair))
  {
    const Vec3 c = gb.crease(a);
    for (const int j : {a, a + 1})
    {
      const Vec3 u = gb.sector_mid(j);
      const Vec3 w = gh.sector_mid(j);
      out.push_back(vector_angle(u - u.dot(c) * c, w - w.dot(c) * c));
    }
  }
  return out;
}

namespace detail
{

inline void require_rotated(const CombinedVertex& cv)
{
  if (cv.variant != CombineVariant::rotated)
  {
    throw DomainError("split is defined only for the rotated variant; got " + to_string(cv.variant));
  }
}

/// Non-merged crease preceding merged crease a.
inline int before(int a)
{
  return slot(a - 1) + 1;
}

} // namespace detail

/// The two flat-foldable vertices V1, V2 that the rotated combination decomposes into.
/// With merged pair (a, b) and p = a-1, q = b-1:
///   V1 = (alpha_p, alpha_a, pi - alpha_p, pi - alpha_a), V2 = (alpha_q, alpha_b, pi - alpha_q, pi - alpha_b).
inline std::pair<Vertex4, Vertex4> split_combined(const CombinedVertex& cv)
{
  detail::require_rotated(cv);
  const std::array<int, 2> m = merged_creases(cv.pair);
  auto make = [&](int p, int a)
  {
    const Vertex4& v = cv.base;
    return Vertex4({v.alpha(p), v.alpha(a), kPi - v.alpha(p), kPi - v.alpha(a)});
  };
  return {make(detail::before(m[0]), m[0]), make(detail::before(m[1]), m[1])};
}

/// Creases of V1 and V2 in the combined frame, in their counterclockwise order.
inline std::pair<std::array<Vec3, 4>, std::array<Vec3, 4>> split_creases(const CombinedVertex& cv, const Tolerances& tol = {})
{
  detail::require_rotated(cv);
  const auto [gb, gh] = combined_geometry(cv, 1.0, 1, tol);
  const std::array<int, 2> m = merged_creases(cv.pair);
  const int p = detail::before(m[0]);
  const int q = detail::before(m[1]);
  const std::array<Vec3, 4> v1{gb.crease(p), gb.crease(m[0]), gh.crease(p), gb.crease(m[1])};
  const std::array<Vec3, 4> v2{gb.crease(q), gb.crease(m[1]), gh.crease(q), gb.crease(m[0])};
  return {v1, v2};
}

/// Folding angles of V1 and V2 read off the combined geometry.
inline std::pair<FoldState, FoldState> split_states(const CombinedVertex& cv, const Tolerances& tol = {})
{
  const auto [v1, v2] = split_creases(cv, tol);
  auto read = [](const std::array<Vec3, 4>& c)
  {
    std::array<double, 4> r{};
    for (int i = 1; i <= 4; ++i)
    {
      r[slot(i)] = dihedral_fold(c[slot(i - 1)], c[slot(i)], c[slot(i + 1)]);
    }
    return FoldState(r);
  };
  return {read(v1), read(v2)};
}

} // namespace origami4
