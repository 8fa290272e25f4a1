#pragma once

#include <array>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "origami4/errors.hpp"
#include "origami4/kinematics_gen.hpp"
#include "origami4/mesh.hpp"
#include "origami4/tessellation.hpp"
#include "origami4/vertex.hpp"

#ifndef ORIGAMI4_VERSION
#define ORIGAMI4_VERSION "0.0.0"
#endif

namespace origami4
{

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = ORIGAMI4_VERSION;

enum class Units
{
  radians,
  degrees
};

inline std::string to_string(Units u)
{
  return u == Units::radians ? "radians" : "degrees";
}

/// Shortest round-trip form, at most 17 significant digits.
inline std::string format_number(double x)
{
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << (x == 0.0 ? 0.0 : x);
  return os.str();
}

/// {"tool", "version", "config"} block attached to every report.
inline Json metadata(const Json& config)
{
  Json m;
  m["tool"] = "origami4";
  m["version"] = kVersion;
  m["config"] = config;
  return m;
}

/// One-line comment carrying the metadata block, for CSV output.
inline std::string metadata_line(const Json& config)
{
  return "# " + metadata(config).dump();
}

inline Json vertex_to_json(const Vertex4& v, Units units = Units::radians)
{
  Json j;
  Json a = Json::array();
  for (const double x : v.alphas())
  {
    a.push_back(units == Units::radians ? x : x * 180.0 / kPi);
  }
  j["alphas"] = a;
  j["units"] = to_string(units);
  return j;
}

inline Vertex4 vertex_from_json(const Json& j)
{
  if (!j.is_object() || !j.contains("alphas") || !j["alphas"].is_array() || j["alphas"].size() != 4)
  {
    throw FormatError("vertex JSON needs an \"alphas\" array of four numbers");
  }
  Units units = Units::radians;
  if (j.contains("units"))
  {
    if (!j["units"].is_string())
    {
      throw FormatError("vertex JSON \"units\" must be \"radians\" or \"degrees\"");
    }
    const std::string u = j["units"].get<std::string>();
    if (u == "degrees")
    {
      units = Units::degrees;
    }
    else if (u != "radians")
    {
      throw FormatError("vertex JSON \"units\" must be \"radians\" or \"degrees\"");
    }
  }
  std::array<double, 4> a{};
  for (int k = 0; k < 4; ++k)
  {
    if (!j["alphas"][k].is_number())
    {
      throw FormatError("vertex JSON \"alphas\" entries must be numbers");
    }
    a[k] = j["alphas"][k].get<double>();
  }
  return units == Units::radians ? Vertex4(a) : Vertex4::from_degrees(a);
}

inline Json parse_json(const std::string& text)
{
  try
  {
    return Json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_text_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IoError("cannot open " + path + " for reading");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw IoError("cannot open " + path + " for writing");
  }
  out << content;
  out.flush();
  if (!out)
  {
    throw IoError("write to " + path + " failed");
  }
}

inline Vertex4 read_vertex_file(const std::string& path)
{
  return vertex_from_json(parse_json(read_text_file(path)));
}

inline void write_vertex_file(const std::string& path, const Vertex4& v, Units units = Units::radians)
{
  write_text_file(path, vertex_to_json(v, units).dump(2) + "\n");
}

/// Wavefront OBJ: `v` lines, then `f` lines with 1-based indices.
inline void write_obj(std::ostream& out, const FoldedMesh& mesh)
{
  for (const Vec3& p : mesh.vertices)
  {
    out << "v " << format_number(p.x()) << ' ' << format_number(p.y()) << ' ' << format_number(p.z()) << '\n';
  }
  for (const auto& f : mesh.faces)
  {
    out << 'f';
    for (const int i : f)
    {
      out << ' ' << (i + 1);
    }
    out << '\n';
  }
}

inline std::string obj_string(const FoldedMesh& mesh)
{
  std::ostringstream os;
  write_obj(os, mesh);
  return os.str();
}

inline void write_obj_file(const std::string& path, const FoldedMesh& mesh)
{
  write_text_file(path, obj_string(mesh));
}

/// ConfigCurve CSV: metadata comment, then `driver_index,branch,rho1,rho2,rho3,rho4,residual`.
inline void write_curve_csv(std::ostream& out, const ConfigCurve& curve, const Json& config)
{
  out << metadata_line(config) << '\n';
  out << "driver_index,branch,rho1,rho2,rho3,rho4,residual\n";
  for (std::size_t k = 0; k < curve.samples.size(); ++k)
  {
    const FoldState& s = curve.samples[k];
    out << curve.driver_index << ',' << curve.branch.str();
    for (int i = 1; i <= 4; ++i)
    {
      out << ',' << format_number(s.rho(i));
    }
    out << ',' << format_number(curve.residuals[k]) << '\n';
  }
}

/// AuxeticReport CSV: metadata comment, then `rho,bbox_x,bbox_y,bbox_z,regime`.
/// The regime of a row describes the interval to the next row; the last row has "-".
inline void write_auxetic_csv(std::ostream& out, const AuxeticReport& rep, const Json& config)
{
  out << metadata_line(config) << '\n';
  out << "rho,bbox_x,bbox_y,bbox_z,regime\n";
  for (std::size_t k = 0; k < rep.samples.size(); ++k)
  {
    const AuxeticSample& s = rep.samples[k];
    out << format_number(s.rho) << ',' << format_number(s.bbox[0]) << ',' << format_number(s.bbox[1]) << ','
        << format_number(s.bbox[2]) << ',' << (k < rep.regimes.size() ? to_string(rep.regimes[k]) : "-") << '\n';
  }
}

inline Json state_to_json(const FoldState& s)
{
  return Json::array({s.rho(1), s.rho(2), s.rho(3), s.rho(4)});
}

} // namespace origami4
