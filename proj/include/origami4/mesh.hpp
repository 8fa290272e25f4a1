#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "origami4/errors.hpp"
#include "origami4/numerics.hpp"

namespace origami4
{

/// Polygonal surface in R^3; edges may be shared by any number of faces.
struct FoldedMesh
{
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;

  int add_vertex(const Vec3& p)
  {
    vertices.push_back(p);
    return static_cast<int>(vertices.size()) - 1;
  }

  void add_face(std::vector<int> f)
  {
    for (const int i : f)
    {
      if (i < 0 || i >= static_cast<int>(vertices.size()))
      {
        throw InputError("face index out of range");
      }
    }
    faces.push_back(std::move(f));
  }

  /// Largest distance of a face vertex from the face's best-fit plane.
  double max_nonplanarity() const
  {
    double worst = 0.0;
    for (const auto& f : faces)
    {
      if (f.size() < 4)
      {
        continue;
      }
      Vec3 c = Vec3::Zero();
      for (const int i : f)
      {
        c += vertices[i];
      }
      c /= static_cast<double>(f.size());
      Eigen::MatrixXd m(3, f.size());
      for (std::size_t k = 0; k < f.size(); ++k)
      {
        m.col(static_cast<Eigen::Index>(k)) = vertices[f[k]] - c;
      }
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
      const Vec3 n = svd.matrixU().col(2);
      for (std::size_t k = 0; k < f.size(); ++k)
      {
        worst = std::max(worst, std::abs(n.dot(m.col(static_cast<Eigen::Index>(k)))));
      }
    }
    return worst;
  }

  /// Number of faces using the undirected edge (a, b).
  int edge_valence(int a, int b) const
  {
    int n = 0;
    for (const auto& f : faces)
    {
      for (std::size_t k = 0; k < f.size(); ++k)
      {
        const int p = f[k];
        const int q = f[(k + 1) % f.size()];
        if ((p == a && q == b) || (p == b && q == a))
        {
          ++n;
        }
      }
    }
    return n;
  }

  void transform(const Mat3& r, const Vec3& t)
  {
    for (Vec3& p : vertices)
    {
      p = r * p + t;
    }
  }

  /// Appends another mesh; returns the index offset applied to its vertices.
  int append(const FoldedMesh& other)
  {
    const int off = static_cast<int>(vertices.size());
    vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
    for (const auto& f : other.faces)
    {
      std::vector<int> g(f);
      for (int& i : g)
      {
        i += off;
      }
      faces.push_back(std::move(g));
    }
    return off;
  }
};

} // namespace origami4
