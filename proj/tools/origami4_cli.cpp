// origami4 command-line front end.
//
// Exit codes: 0 success, 1 library/domain error, 2 usage error or malformed input file.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "origami4/closure.hpp"
#include "origami4/duality.hpp"
#include "origami4/embedding.hpp"
#include "origami4/io.hpp"
#include "origami4/kinematics_ff.hpp"
#include "origami4/kinematics_gen.hpp"
#include "origami4/tessellation.hpp"
#include "origami4/vertex.hpp"

namespace
{

using namespace origami4;

/// Bad command line; reported with exit code 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Common
{
  std::string alphas;
  std::string vertex_path;
  bool degrees = false;
  std::string out;
  Tolerances tol;
};

void add_common(CLI::App* sc, Common& c)
{
  auto* a = sc->add_option("--alphas", c.alphas, "Sector angles a1,a2,a3,a4 (radians unless --degrees)");
  auto* v = sc->add_option("--vertex", c.vertex_path, "Vertex JSON file {\"alphas\": [...], \"units\": ...}");
  a->excludes(v);
  sc->add_flag("--degrees", c.degrees, "Angle inputs in degrees");
  sc->add_option("--out", c.out, "Output file (default: standard output)");
  sc->add_option("--angle-eps", c.tol.angle_eps, "Angle tolerance");
  sc->add_option("--residual-tol", c.tol.residual_tol, "Closure residual tolerance");
  sc->add_option("--solver-tol", c.tol.solver_tol, "Solver tolerance");
  sc->add_option("--step-max", c.tol.trace_step_max, "Largest trace step (radians)");
}

std::vector<double> parse_list(const std::string& text, std::size_t n, const char* what)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    try
    {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos)
      {
        throw std::invalid_argument(item);
      }
    }
    catch (const std::exception&)
    {
      throw UsageError(std::string(what) + ": cannot parse \"" + item + "\" as a number");
    }
  }
  if (out.size() != n)
  {
    throw UsageError(std::string(what) + ": expected " + std::to_string(n) + " comma-separated numbers");
  }
  return out;
}

double angle_in(const Common& c, double x)
{
  return c.degrees ? x * kPi / 180.0 : x;
}

std::optional<Vertex4> vertex_source(const Common& c)
{
  if (!c.alphas.empty())
  {
    const std::vector<double> a = parse_list(c.alphas, 4, "--alphas");
    return c.degrees ? Vertex4::from_degrees({a[0], a[1], a[2], a[3]}) : Vertex4({a[0], a[1], a[2], a[3]});
  }
  if (!c.vertex_path.empty())
  {
    return read_vertex_file(c.vertex_path);
  }
  return std::nullopt;
}

Vertex4 require_vertex(const Common& c)
{
  const std::optional<Vertex4> v = vertex_source(c);
  if (!v)
  {
    throw UsageError("a vertex is required: pass --alphas or --vertex");
  }
  return *v;
}

Vertex4 vertex_or_default(const Common& c)
{
  const std::optional<Vertex4> v = vertex_source(c);
  return v ? *v : Vertex4({kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0, kPi / 2.0});
}

Json base_config(const std::string& cmd, const Common& c, const Vertex4* v)
{
  Json j;
  j["command"] = cmd;
  if (v != nullptr)
  {
    j["alphas"] = vertex_to_json(*v)["alphas"];
  }
  j["input_units"] = c.degrees ? "degrees" : "radians";
  j["angle_eps"] = c.tol.angle_eps;
  j["residual_tol"] = c.tol.residual_tol;
  j["solver_tol"] = c.tol.solver_tol;
  j["trace_step_max"] = c.tol.trace_step_max;
  return j;
}

void emit(const Common& c, const std::string& text)
{
  if (c.out.empty())
  {
    std::cout << text;
    std::cout.flush();
  }
  else
  {
    write_text_file(c.out, text);
  }
}

void emit_json(const Common& c, Json body, const Json& config)
{
  body["meta"] = metadata(config);
  emit(c, body.dump(2) + "\n");
}

/// out.obj -> out_0003.obj
std::string frame_path(const std::string& out, int k)
{
  const std::size_t dot = out.rfind('.');
  const std::size_t slash = out.find_last_of("/\\");
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  char num[16];
  std::snprintf(num, sizeof num, "_%04d", k);
  return has_ext ? out.substr(0, dot) + num + out.substr(dot) : out + num + ".obj";
}

std::vector<double> linspace(double a, double b, int n)
{
  std::vector<double> xs;
  for (int k = 0; k < n; ++k)
  {
    xs.push_back(n == 1 ? b : (k == n - 1 ? b : a + (b - a) * k / (n - 1)));
  }
  return xs;
}

Json interval_json(const RangeInterval& iv)
{
  Json j;
  j["lo"] = iv.lo;
  j["hi"] = iv.hi;
  j["lo_cause"] = to_string(iv.lo_cause);
  j["hi_cause"] = to_string(iv.hi_cause);
  return j;
}

std::vector<BranchLabel> branches_from(const std::string& s)
{
  if (s.empty())
  {
    const auto all = BranchLabel::all();
    return {all.begin(), all.end()};
  }
  try
  {
    return {BranchLabel::parse(s)};
  }
  catch (const InputError& e)
  {
    throw UsageError(e.what());
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Degree-4 rigid-origami vertex kinematics, combined vertices and square-twist complexes"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common c;
  int driver_index = 1;
  double driver = 0.0;
  std::string branch;
  std::string guess;
  int samples = 0;
  std::string variant = "parallel";
  std::string pair = "c2c4";
  std::optional<double> theta;
  std::optional<double> rho;
  double radius = 1.0;
  int arc_segments = 8;
  int frames = 0;
  int rows = 2;
  int cols = 2;
  int layers = 2;
  double rho_min = 0.0;
  std::optional<double> rho_max;

  auto* classify_cmd = app.add_subcommand("classify", "Curvature class and flat-foldability");
  auto* dual_cmd = app.add_subcommand("dual", "Dual vertex (pi - alpha_i)");
  auto* modes_cmd = app.add_subcommand("modes", "Mode constants k1, k2 and closed-form mode curves");
  auto* trace_cmd = app.add_subcommand("trace", "Configuration curve CSV");
  auto* solve_cmd = app.add_subcommand("solve", "Closed states at one driver value");
  auto* oracle_cmd = app.add_subcommand("oracle", "Newton closure solve from a guess");
  auto* range_cmd = app.add_subcommand("range", "Folding range per branch");
  auto* combine_cmd = app.add_subcommand("combine", "Combined vertex with its dual, OBJ");
  auto* split_cmd = app.add_subcommand("split", "V1/V2 decomposition of the rotated combination");
  auto* sheet_cmd = app.add_subcommand("sheet", "Folded square-twist sheet, OBJ");
  auto* stack_cmd = app.add_subcommand("stack", "Stacked square-twist complex, OBJ");
  auto* auxetic_cmd = app.add_subcommand("auxetic", "Bounding-box sweep of a stacked complex, CSV");
  auto* duality_cmd = app.add_subcommand("verify-duality", "Compare configuration curves of a vertex and its dual");

  for (CLI::App* sc : app.get_subcommands([](CLI::App*) { return true; }))
  {
    add_common(sc, c);
  }
  for (CLI::App* sc : {trace_cmd, solve_cmd, oracle_cmd, range_cmd, duality_cmd})
  {
    sc->add_option("--driver-index", driver_index, "Driving crease 1..4")->check(CLI::Range(1, 4));
  }
  for (CLI::App* sc : {trace_cmd, solve_cmd, range_cmd})
  {
    sc->add_option("--branch", branch, "Branch label, e.g. +- (default: all)");
  }
  combine_cmd->add_option("--branch", branch, "Branch label of the base state");
  solve_cmd->add_option("--driver", driver, "Driver value")->required();
  oracle_cmd->add_option("--driver", driver, "Driver value")->required();
  oracle_cmd->add_option("--guess", guess, "Initial state r1,r2,r3,r4 (default zeros)");
  modes_cmd->add_option("--samples", samples, "Driver samples per mode (default 9)");
  trace_cmd->add_option("--samples", samples, "Minimum samples (default 50)");
  duality_cmd->add_option("--samples", samples, "Minimum samples per curve (default 50)");
  auxetic_cmd->add_option("--samples", samples, "Sweep samples (default 21)");
  for (CLI::App* sc : {combine_cmd, split_cmd, stack_cmd, auxetic_cmd})
  {
    sc->add_option("--variant", variant, "parallel or rotated");
  }
  for (CLI::App* sc : {combine_cmd, split_cmd})
  {
    sc->add_option("--theta", theta, "Angle between the merged creases");
    sc->add_option("--pair", pair, "Merged crease pair: c2c4 or c1c3");
  }
  combine_cmd->add_option("--radius", radius, "Plate radius");
  combine_cmd->add_option("--arc-segments", arc_segments, "Chords per plate arc");
  for (CLI::App* sc : {combine_cmd, sheet_cmd, stack_cmd})
  {
    sc->add_option("--frames", frames, "Write n OBJ files over a sweep");
  }
  for (CLI::App* sc : {sheet_cmd, stack_cmd})
  {
    sc->add_option("--rho", rho, "Major folding angle");
  }
  for (CLI::App* sc : {sheet_cmd, stack_cmd, auxetic_cmd})
  {
    sc->add_option("--rows", rows, "Cell rows");
    sc->add_option("--cols", cols, "Cell columns");
  }
  for (CLI::App* sc : {stack_cmd, auxetic_cmd})
  {
    sc->add_option("--layers", layers, "Stacked layers");
  }
  auxetic_cmd->add_option("--rho-min", rho_min, "Sweep start");
  auxetic_cmd->add_option("--rho-max", rho_max, "Sweep end (default pi)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try
  {
    c.tol.validate();
    if (*classify_cmd)
    {
      const Vertex4 v = require_vertex(c);
      const VertexClass k = classify(v, c.tol.angle_eps);
      Json j;
      j["curvature"] = to_string(k.curvature);
      j["flat_foldable"] = k.flat_foldable;
      j["angle_sum"] = v.sum();
      j["alternating_sum"] = v.alternating_sum();
      emit_json(c, j, base_config("classify", c, &v));
    }
    else if (*dual_cmd)
    {
      const Vertex4 v = require_vertex(c);
      const Vertex4 d = dual(v);
      if (!c.out.empty())
      {
        write_vertex_file(c.out, d);
      }
      else
      {
        std::vector<double> shown;
        if (c.degrees && !c.alphas.empty())
        {
          for (const double a : parse_list(c.alphas, 4, "--alphas"))
          {
            shown.push_back(180.0 - a);
          }
        }
        else
        {
          for (const double a : d.alphas())
          {
            shown.push_back(c.degrees ? a * 180.0 / kPi : a);
          }
        }
        std::cout << format_number(shown[0]) << ',' << format_number(shown[1]) << ',' << format_number(shown[2]) << ','
                  << format_number(shown[3]) << '\n';
      }
    }
    else if (*modes_cmd)
    {
      const Vertex4 v = require_vertex(c);
      const ModeConstants k = mode_constants(v, c.tol.angle_eps);
      const int n = samples > 0 ? samples : 9;
      Json j;
      j["k1"] = k.k1;
      j["k2"] = k.k2;
      for (const int mode : {1, 2})
      {
        Json curve = Json::array();
        for (const double x : linspace(-kPi, kPi, n))
        {
          const FoldState s = fold_mode(v, mode, x, c.tol);
          Json p;
          p["driver"] = x;
          p["rhos"] = state_to_json(s);
          p["residual"] = closure_residual(v, s);
          curve.push_back(p);
        }
        const std::array<int, 2> major = mode_major_creases(mode);
        Json m;
        m["major_creases"] = Json::array({major[0], major[1]});
        m["samples"] = curve;
        j["mode" + std::to_string(mode)] = m;
      }
      Json cfg = base_config("modes", c, &v);
      cfg["samples"] = n;
      emit_json(c, j, cfg);
    }
    else if (*trace_cmd)
    {
      const Vertex4 v = require_vertex(c);
      const int n = samples > 0 ? samples : 50;
      Json cfg = base_config("trace", c, &v);
      cfg["driver_index"] = driver_index;
      cfg["branch"] = branch.empty() ? "all" : branch;
      cfg["samples"] = n;
      std::ostringstream os;
      bool header = false;
      for (const BranchLabel& b : branches_from(branch))
      {
        const FoldingRange r = folding_range(v, driver_index, b, c.tol);
        if (r.empty())
        {
          if (!branch.empty())
          {
            throw RangeError("branch " + b.str() + ": " + r.diagnostic);
          }
          continue;
        }
        const ConfigCurve curve = trace_curve(v, driver_index, b, n, c.tol);
        if (!curve.complete)
        {
          std::cerr << "warning: " << curve.diagnostic << '\n';
        }
        std::ostringstream part;
        write_curve_csv(part, curve, cfg);
        std::string text = part.str();
        if (header)
        {
          // keep a single metadata line and header
          text = text.substr(text.find('\n', text.find('\n') + 1) + 1);
        }
        os << text;
        header = true;
      }
      if (!header)
      {
        throw RangeError("no branch of the vertex has a closed state");
      }
      emit(c, os.str());
    }
    else if (*solve_cmd)
    {
      const Vertex4 v = require_vertex(c);
      const double x = angle_in(c, driver);
      Json states = Json::array();
      for (const BranchLabel& b : branches_from(branch))
      {
        for (const FoldState& s : candidate_states(v, driver_index, x, c.tol))
        {
          if (branch_matches(b, s) && (branch.empty() ? branch_of(s) == b : true))
          {
            Json e;
            e["branch"] = b.str();
            e["rhos"] = state_to_json(s);
            e["residual"] = closure_residual(v, s);
            states.push_back(e);
          }
        }
      }
      if (states.empty())
      {
        if (branch.empty())
        {
          throw RangeError("driver rho" + std::to_string(driver_index) + " = " + format_number(x) +
                           " is infeasible: no closed state exists");
        }
        solve_state(v, driver_index, x, BranchLabel::parse(branch), c.tol);
      }
      Json cfg = base_config("solve", c, &v);
      cfg["driver_index"] = driver_index;
      cfg["driver"] = x;
      cfg["branch"] = branch.empty() ? "all" : branch;
      Json j;
      j["states"] = states;
      emit_json(c, j, cfg);
    }
    else if (*oracle_cmd)
    {
      const Vertex4 v = require_vertex(c);
      std::array<double, 4> g{};
      if (!guess.empty())
      {
        const std::vector<double> p = parse_list(guess, 4, "--guess");
        for (int k = 0; k < 4; ++k)
        {
          g[k] = angle_in(c, p[k]);
        }
      }
      const double x = angle_in(c, driver);
      const ClosureReport r = oracle_solve(v, driver_index, x, FoldState(g), c.tol);
      Json cfg = base_config("oracle", c, &v);
      cfg["driver_index"] = driver_index;
      cfg["driver"] = x;
      cfg["guess"] = Json::array({g[0], g[1], g[2], g[3]});
      Json j;
      j["rhos"] = state_to_json(r.state);
      j["residual"] = r.residual;
      j["converged"] = r.converged;
      j["iterations"] = r.iterations;
      emit_json(c, j, cfg);
    }
    else if (*range_cmd)
    {
      const Vertex4 v = require_vertex(c);
      Json ranges = Json::array();
      for (const BranchLabel& b : branches_from(branch))
      {
        const FoldingRange r = folding_range(v, driver_index, b, c.tol);
        Json e;
        e["branch"] = b.str();
        Json ivs = Json::array();
        for (const RangeInterval& iv : r.intervals)
        {
          ivs.push_back(interval_json(iv));
        }
        e["intervals"] = ivs;
        if (!r.diagnostic.empty())
        {
          e["diagnostic"] = r.diagnostic;
        }
        ranges.push_back(e);
      }
      Json cfg = base_config("range", c, &v);
      cfg["driver_index"] = driver_index;
      cfg["branch"] = branch.empty() ? "all" : branch;
      Json j;
      j["ranges"] = ranges;
      emit_json(c, j, cfg);
    }
    else if (*combine_cmd)
    {
      const Vertex4 v = require_vertex(c);
      SyncOptions opt;
      opt.pair = parse_merged_pair(pair);
      opt.tol = c.tol;
      if (!branch.empty())
      {
        opt.base_branch = branches_from(branch).front();
      }
      const CombineVariant var = parse_variant(variant);
      if (frames > 0)
      {
        if (c.out.empty())
        {
          throw UsageError("--frames needs --out for the file name pattern");
        }
        const std::vector<ThetaInterval> ib = achievable_theta(v, opt.pair, c.tol);
        const std::vector<ThetaInterval> ih = achievable_theta(dual(v), opt.pair, c.tol);
        if (ib.empty() || ih.empty())
        {
          throw RangeError("no synchronizing angle is achievable");
        }
        const double lo = std::max(ib.front().theta_lo, ih.front().theta_lo);
        const double hi = std::min(ib.front().theta_hi, ih.front().theta_hi);
        if (!(lo <= hi))
        {
          throw RangeError("the achievable theta intervals of the vertex and its dual do not overlap");
        }
        const std::vector<double> ts = linspace(lo, hi, frames);
        for (int k = 0; k < frames; ++k)
        {
          write_obj_file(frame_path(c.out, k), combined_mesh(synchronize(v, var, ts[k], opt), radius, arc_segments, c.tol));
        }
      }
      else
      {
        if (!theta)
        {
          throw UsageError("combine needs --theta or --frames");
        }
        const CombinedVertex cv = synchronize(v, var, angle_in(c, *theta), opt);
        emit(c, obj_string(combined_mesh(cv, radius, arc_segments, c.tol)));
      }
    }
    else if (*split_cmd)
    {
      const Vertex4 v = require_vertex(c);
      const CombineVariant var = parse_variant(variant);
      if (var != CombineVariant::rotated)
      {
        throw DomainError("split is defined only for the rotated variant; got " + variant);
      }
      const MergedPair mp = parse_merged_pair(pair);
      // the split vertices depend only on the base's sectors
      CombinedVertex cv{v, dual(v), var, mp, 0.0, {}, FoldState(), FoldState(), 1, Mat3::Identity(), Mat3::Identity()};
      Json cfg = base_config("split", c, &v);
      cfg["variant"] = variant;
      cfg["pair"] = pair;
      Json j;
      if (theta)
      {
        SyncOptions opt;
        opt.pair = mp;
        opt.tol = c.tol;
        cv = synchronize(v, var, angle_in(c, *theta), opt);
        const auto [s1, s2] = split_states(cv, c.tol);
        cfg["theta"] = cv.theta;
        j["V1_state"] = state_to_json(s1);
        j["V2_state"] = state_to_json(s2);
      }
      const auto [v1, v2] = split_combined(cv);
      j["V1"] = vertex_to_json(v1)["alphas"];
      j["V2"] = vertex_to_json(v2)["alphas"];
      j["V1_kawasaki"] = v1.alternating_sum() == 0.0;
      j["V2_kawasaki"] = v2.alternating_sum() == 0.0;
      if (theta)
      {
        const auto [s1, s2] = split_states(cv, c.tol);
        j["V1_residual"] = closure_residual(v1, s1);
        j["V2_residual"] = closure_residual(v2, s2);
      }
      emit_json(c, j, cfg);
    }
    else if (*sheet_cmd || *stack_cmd)
    {
      const Vertex4 v = vertex_or_default(c);
      const SquareTwistSheet sheet = build_square_twist_sheet(v, rows, cols, c.tol);
      const CombineVariant var = parse_variant(variant);
      const bool stacking = stack_cmd->parsed();
      auto mesh_at = [&](double r)
      { return stacking ? stack_complex(sheet, layers, r, var, c.tol).merged() : fold_sheet(sheet, r, c.tol).mesh; };
      if (frames > 0)
      {
        if (c.out.empty())
        {
          throw UsageError("--frames needs --out for the file name pattern");
        }
        const std::vector<double> rs = linspace(0.0, rho ? angle_in(c, *rho) : kPi, frames);
        for (int k = 0; k < frames; ++k)
        {
          write_obj_file(frame_path(c.out, k), mesh_at(rs[k]));
        }
      }
      else
      {
        if (!rho)
        {
          throw UsageError(std::string(stacking ? "stack" : "sheet") + " needs --rho or --frames");
        }
        emit(c, obj_string(mesh_at(angle_in(c, *rho))));
      }
    }
    else if (*auxetic_cmd)
    {
      const Vertex4 v = vertex_or_default(c);
      const SquareTwistSheet sheet = build_square_twist_sheet(v, rows, cols, c.tol);
      const int n = samples > 0 ? samples : 21;
      const double lo = angle_in(c, rho_min);
      const double hi = rho_max ? angle_in(c, *rho_max) : kPi;
      const CombineVariant var = parse_variant(variant);
      const AuxeticReport rep = auxetic_sweep(sheet, layers, lo, hi, n, var, c.tol);
      Json cfg = base_config("auxetic", c, &sheet.generator);
      cfg["rows"] = rows;
      cfg["cols"] = cols;
      cfg["layers"] = layers;
      cfg["rho_min"] = lo;
      cfg["rho_max"] = hi;
      cfg["samples"] = n;
      cfg["variant"] = variant;
      std::ostringstream os;
      write_auxetic_csv(os, rep, cfg);
      emit(c, os.str());
    }
    else if (*duality_cmd)
    {
      const Vertex4 v = require_vertex(c);
      const int n = samples > 0 ? samples : 50;
      const DualityReport rep = verify_duality(v, n, driver_index, c.tol);
      Json curves = Json::array();
      for (const DualCurvePair& p : rep.pairs)
      {
        Json e;
        e["branch"] = p.branch.str();
        e["samples"] = p.curve.samples.size();
        e["driver_lo"] = p.curve.samples.empty() ? 0.0 : p.curve.samples.front().rho(driver_index);
        e["driver_hi"] = p.curve.samples.empty() ? 0.0 : p.curve.samples.back().rho(driver_index);
        e["max_magnitude_mismatch"] = p.max_magnitude_mismatch;
        e["max_pattern_deviation"] = p.max_pattern_deviation;
        curves.push_back(e);
      }
      Json cfg = base_config("verify-duality", c, &v);
      cfg["driver_index"] = driver_index;
      cfg["samples"] = n;
      Json j;
      j["dual"] = vertex_to_json(rep.dual_vertex)["alphas"];
      j["curves"] = curves;
      j["total_samples"] = rep.samples;
      j["max_magnitude_mismatch"] = rep.max_magnitude_mismatch;
      j["max_pattern_deviation"] = rep.max_pattern_deviation;
      j["sign_pattern"] = "driver opposite pair preserved, other opposite pair negated";
      j["sign_pattern_confirmed"] = rep.confirmed(1e-6);
      if (!rep.diagnostic.empty())
      {
        j["diagnostic"] = rep.diagnostic;
      }
      emit_json(c, j, cfg);
    }
  }
  catch (const UsageError& e)
  {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  catch (const FormatError& e)
  {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
