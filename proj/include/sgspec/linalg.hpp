#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "sgspec/types.hpp"

namespace sgspec {

// Orthonormal basis (columns) of the numerical null space: right singular
// vectors whose singular value is <= threshold.
inline ComplexMatrix null_space(const ComplexMatrix& m, double threshold) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return identity(n);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  // singular values are sorted descending; rows < cols adds implicit zeros
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Orthonormal basis of the numerical range (column space).
inline ComplexMatrix range_basis(const ComplexMatrix& m, double threshold) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++rank;
  return svd.matrixU().leftCols(rank);
}

inline Eigen::Index numerical_rank(const ComplexMatrix& m, double threshold) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  return static_cast<Eigen::Index>((s.array() > threshold).count());
}

inline double smallest_singular_value(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (m.rows() < m.cols()) return 0.0;
  return s(s.size() - 1);
}

/// Sine of the largest principal angle between span(a) and span(b).
/// Bases must be orthonormal. Returns 1 when the dimensions differ.
inline double subspace_sine(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) return 1.0;
  if (a.cols() == 0) return 0.0;
  const ComplexMatrix resid_b = b - a * (a.adjoint() * b);
  const ComplexMatrix resid_a = a - b * (b.adjoint() * a);
  Eigen::JacobiSVD<ComplexMatrix> sb(resid_b), sa(resid_a);
  return std::min(1.0, std::max(sb.singularValues()(0), sa.singularValues()(0)));
}

inline double principal_angle(const ComplexMatrix& a, const ComplexMatrix& b) {
  return std::asin(subspace_sine(a, b));
}

inline ComplexMatrix orthonormalize(const ComplexMatrix& vecs, double threshold = 1e-12) {
  if (vecs.cols() == 0) return vecs;
  return range_basis(vecs, threshold * std::max(1.0, vecs.cwiseAbs().maxCoeff()));
}

// Raw eigenvalues from the dense complex Schur-based solver.
inline std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
  require_square(a, "eigenvalues");
  if (!all_finite(a)) throw NumericalError("eigenvalues: matrix has non-finite entries");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigensolver did not converge on a " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " matrix (norm " +
                         std::to_string(norm_inf(a)) + ")");
  std::vector<Complex> out(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

struct Cluster {
  Complex center;
  int count = 0;
};

/// Groups values whose mutual distance chains stay within radius
/// (single linkage). Output sorted lexicographically by center.
inline std::vector<Cluster> cluster_values(const std::vector<Complex>& values, double radius) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= radius) parent[find(i)] = find(j);

  std::vector<Cluster> clusters;
  std::vector<std::size_t> root_to_cluster(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (root_to_cluster[r] == std::numeric_limits<std::size_t>::max()) {
      root_to_cluster[r] = clusters.size();
      clusters.push_back({Complex(0.0), 0});
    }
    Cluster& c = clusters[root_to_cluster[r]];
    c.center += values[i];
    ++c.count;
  }
  for (auto& c : clusters) c.center /= static_cast<double>(c.count);
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return lex_less(a.center, b.center); });
  return clusters;
}

inline std::vector<Complex> sorted_set(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), lex_less);
  return v;
}

// max over a of the distance to the nearest point of b.
inline double directed_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty()) return 0.0;
  if (b.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Complex x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (Complex y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Symmetric Hausdorff distance between finite sets. Two empty sets are at
/// distance 0; an empty and a non-empty set at +inf.
inline double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  return std::max(directed_distance(a, b), directed_distance(b, a));
}

// Scales v to unit inf-norm with its first max-modulus entry real positive.
inline ComplexVector normalize_inf(const ComplexVector& v) {
  Eigen::Index idx = 0;
  const double m = v.cwiseAbs().maxCoeff(&idx);
  if (m == 0.0) return v;
  // first index within a few ulps of the max, for reproducible phase
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= m * (1.0 - 1e-12)) {
      idx = i;
      break;
    }
  const Complex phase = std::abs(v(idx)) / v(idx);
  return v * phase / m;
}

}  // namespace sgspec
