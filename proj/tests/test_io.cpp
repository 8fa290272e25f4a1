#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "origami4/embedding.hpp"
#include "origami4/io.hpp"

using namespace origami4;

namespace
{

std::string temp_path(const std::string& name)
{
  return (std::filesystem::temp_directory_path() / ("origami4_test_io_" + name)).string();
}

std::vector<std::string> lines(const std::string& text)
{
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string l;
  while (std::getline(is, l))
  {
    out.push_back(l);
  }
  return out;
}

} // namespace

TEST(VertexJson, RoundTripIsExact)
{
  const Vertex4 v({0.1234567890123456, 1.3, 2.0 / 3.0, kPi / 7});
  const std::string path = temp_path("vertex.json");
  write_vertex_file(path, v);
  const Vertex4 back = read_vertex_file(path);
  for (int i = 1; i <= 4; ++i)
  {
    EXPECT_EQ(back.alpha(i), v.alpha(i));
  }
  std::filesystem::remove(path);
}

TEST(VertexJson, DegreesConvertOnRead)
{
  const Vertex4 v = vertex_from_json(parse_json(R"({"alphas": [45, 90, 135, 90], "units": "degrees"})"));
  EXPECT_DOUBLE_EQ(v.alpha(1), kPi / 4);
  EXPECT_DOUBLE_EQ(v.alpha(3), 3 * kPi / 4);
  const Vertex4 r = vertex_from_json(parse_json(R"({"alphas": [1, 1, 1, 1]})"));
  EXPECT_EQ(r.alpha(2), 1.0);
  EXPECT_EQ(vertex_to_json(v)["units"], "radians");
}

TEST(VertexJson, MalformedInputIsAFormatError)
{
  EXPECT_THROW(parse_json("{\"alphas\": [1, 2"), FormatError);
  EXPECT_THROW(vertex_from_json(parse_json(R"({"alphas": [1, 2, 3]})")), FormatError);
  EXPECT_THROW(vertex_from_json(parse_json(R"({"alphas": [1, 2, 3, "x"]})")), FormatError);
  EXPECT_THROW(vertex_from_json(parse_json(R"({"alphas": [1, 1, 1, 1], "units": "grad"})")), FormatError);
  EXPECT_THROW(vertex_from_json(parse_json(R"([1, 1, 1, 1])")), FormatError);
  EXPECT_THROW(vertex_from_json(parse_json(R"({"alphas": [0, 1, 1, 1]})")), InputError);
  EXPECT_THROW(read_text_file(temp_path("does_not_exist.json")), IoError);
}

TEST(Obj, SquarePlate)
{
  FoldedMesh m;
  for (const Vec3& p : {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)})
  {
    m.add_vertex(p);
  }
  m.add_face({0, 1, 2, 3});
  const std::vector<std::string> l = lines(obj_string(m));
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "v 0 0 0");
  EXPECT_EQ(l[2], "v 1 1 0");
  EXPECT_EQ(l[4], "f 1 2 3 4");
  EXPECT_THROW(m.add_face({0, 1, 7}), InputError);
}

TEST(Obj, FullPrecisionAndNoNegativeZero)
{
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_number(kPi)), kPi);
}

TEST(Obj, CombinedMeshSharesMergedEndpointsAndIsDeterministic)
{
  const Vertex4 base({kPi / 4, kPi / 2, kPi / 4, kPi / 2});
  const FoldedMesh m = combined_mesh(synchronize(base, CombineVariant::parallel, 1.2));
  std::set<std::array<long long, 3>> seen;
  for (const Vec3& p : m.vertices)
  {
    seen.insert({std::llround(p.x() * 1e9), std::llround(p.y() * 1e9), std::llround(p.z() * 1e9)});
  }
  EXPECT_EQ(seen.size(), m.vertices.size());
  const std::string a = obj_string(m);
  const std::string b = obj_string(combined_mesh(synchronize(base, CombineVariant::parallel, 1.2)));
  EXPECT_EQ(a, b);
}

TEST(Csv, CurveHeaderAndMetadata)
{
  const ConfigCurve c = trace_curve(Vertex4({kPi / 4, kPi / 2, kPi / 4, kPi / 2}), 1, BranchLabel::parse("++"), 5);
  std::ostringstream os;
  write_curve_csv(os, c, Json{{"command", "trace"}});
  const std::vector<std::string> l = lines(os.str());
  ASSERT_GE(l.size(), 3u);
  EXPECT_EQ(l[0].rfind("# {", 0), 0u);
  const Json meta = parse_json(l[0].substr(2));
  EXPECT_EQ(meta["tool"], "origami4");
  EXPECT_EQ(meta["version"], kVersion);
  EXPECT_EQ(meta["config"]["command"], "trace");
  EXPECT_EQ(l[1], "driver_index,branch,rho1,rho2,rho3,rho4,residual");
  EXPECT_EQ(l[2].rfind("1,++,", 0), 0u);
  EXPECT_EQ(l.size(), c.samples.size() + 2);
}

TEST(Csv, AuxeticHeaderAndLastRow)
{
  AuxeticReport rep;
  rep.samples = {{0.0, {1, 2, 3}}, {0.5, {0.9, 2.1, 2.9}}};
  rep.regimes = {AuxeticRegime::two_contract_one_expand};
  std::ostringstream os;
  write_auxetic_csv(os, rep, Json{{"command", "auxetic"}});
  const std::vector<std::string> l = lines(os.str());
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[1], "rho,bbox_x,bbox_y,bbox_z,regime");
  EXPECT_EQ(l[2], "0,1,2,3,2-contract/1-expand");
  EXPECT_EQ(l[3].substr(l[3].size() - 2), ",-");
}
