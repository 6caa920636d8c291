#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "sgspec/semigroup.hpp"

namespace sgspec {

// Deterministic random numbers built only on std::mt19937_64, whose output
// sequence is fixed by the standard (the std distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  Complex complex_normal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline ComplexVector random_vector(Eigen::Index n, Rng& rng) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

// Complex Gaussian entries scaled by 1/sqrt(n), so the spectral radius is O(1).
inline ComplexMatrix random_matrix(Eigen::Index n, Rng& rng) {
  ComplexMatrix m(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = s * rng.complex_normal();
  return m;
}

inline ComplexMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_matrix(n, rng);
}

inline ComplexMatrix random_unitary(Eigen::Index n, Rng& rng) {
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

namespace catalog {

inline void validate(const Entry& e) {
  struct V {
    void operator()(const Diagonal& d) const {
      if (d.entries.empty()) throw ConfigError("diagonal: entries must be non-empty");
      for (Complex z : d.entries)
        if (!is_finite(z)) throw ConfigError("diagonal: entries must be finite");
    }
    void operator()(const Rotation2d& r) const {
      if (!(r.omega > 0.0) || !std::isfinite(r.omega))
        throw ConfigError("rotation2d: omega must be > 0");
    }
    void operator()(const NilpotentShift& n) const {
      if (n.dim < 2) throw ConfigError("nilpotent_shift: dim must be >= 2");
    }
    void operator()(const DiscRotation& d) const {
      if (d.degree < 1) throw ConfigError("disc_rotation: degree N must be >= 1");
    }
    void operator()(const RandomStable& r) const {
      if (r.dim < 1) throw ConfigError("random_stable: dim must be >= 1");
      if (!(r.abscissa < 0.0) || !std::isfinite(r.abscissa))
        throw ConfigError("random_stable: spectral abscissa bound a must be < 0");
    }
  };
  std::visit(V{}, e);
}

// Upper-triangular Schur form with prescribed eigenvalues, conjugated by a
// random unitary. Real parts are drawn from [a - 1.5, a].
inline ComplexMatrix random_stable_matrix(const RandomStable& p) {
  Rng rng(p.seed);
  const Eigen::Index n = p.dim;
  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) t(i, i) = {p.abscissa - 1.5 * rng.uniform(), rng.uniform(-2.0, 2.0)};
  const double off = 0.3 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) t(i, j) = off * rng.complex_normal();
  const ComplexMatrix q = random_unitary(n, rng);
  return q * t * q.adjoint();
}

}  // namespace catalog

struct CatalogBuild {
  GeneratorSpec spec;
  SemigroupEvaluator evaluator;
};

/// Matched generator/evaluator pair for a catalog entry. Closed forms are
/// used wherever an exact action exists so catalog evaluators stay
/// independent of matrix_exp.
inline CatalogBuild catalog_build(const catalog::Entry& entry) {
  using namespace catalog;
  validate(entry);
  const GeneratorSpec spec{entry};

  struct V {
    const GeneratorSpec& spec;

    SemigroupEvaluator operator()(const Diagonal& d) const {
      const auto n = static_cast<Eigen::Index>(d.entries.size());
      ComplexVector diag(n);
      for (Eigen::Index i = 0; i < n; ++i) diag(i) = d.entries[static_cast<std::size_t>(i)];
      ComplexMatrix a = diag.asDiagonal();
      return SemigroupEvaluator::from_closed_form(spec, a, [diag](double t) {
        ComplexMatrix m = ComplexMatrix::Zero(diag.size(), diag.size());
        for (Eigen::Index i = 0; i < diag.size(); ++i) m(i, i) = std::exp(t * diag(i));
        return m;
      });
    }

    SemigroupEvaluator operator()(const Rotation2d& r) const {
      ComplexMatrix a(2, 2);
      a << 0.0, -r.omega, r.omega, 0.0;
      const double w = r.omega;
      return SemigroupEvaluator::from_closed_form(spec, a, [w](double t) {
        const double c = std::cos(w * t), s = std::sin(w * t);
        ComplexMatrix m(2, 2);
        m << c, -s, s, c;
        return m;
      });
    }

    SemigroupEvaluator operator()(const NilpotentShift& ns) const {
      const Eigen::Index n = ns.dim;
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      for (Eigen::Index i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
      // e^{tN} is the finite sum of t^k N^k / k!, i.e. entry (i, i+k) = t^k/k!.
      return SemigroupEvaluator::from_closed_form(spec, a, [n](double t) {
        ComplexMatrix m = ComplexMatrix::Zero(n, n);
        double term = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k > 0) term *= t / static_cast<double>(k);
          for (Eigen::Index i = 0; i + k < n; ++i) m(i, i + k) = term;
        }
        return m;
      });
    }

    SemigroupEvaluator operator()(const DiscRotation& d) const {
      const Eigen::Index n = d.degree + 1;
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      for (Eigen::Index k = 0; k < n; ++k) a(k, k) = Complex(0.0, static_cast<double>(k));
      return SemigroupEvaluator::from_closed_form(spec, a, [n](double t) {
        ComplexMatrix m = ComplexMatrix::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) m(k, k) = std::polar(1.0, static_cast<double>(k) * t);
        return m;
      });
    }

    SemigroupEvaluator operator()(const RandomStable& p) const {
      return SemigroupEvaluator::from_matrix_exponential(spec, random_stable_matrix(p));
    }
  };

  SemigroupEvaluator ev = std::visit(V{spec}, entry);
  return {spec, ev};
}

// A fixed, representative set of catalog entries used by the sweeps.
inline std::vector<catalog::Entry> standard_catalog() {
  using namespace catalog;
  return {
      Diagonal{{Complex(0.0, kTwoPi), Complex(0.0, -kTwoPi)}},
      Diagonal{{Complex(0.0, 0.0), Complex(0.0, kTwoPi)}},
      Diagonal{{Complex(1.0, 0.0), Complex(2.0, 0.0)}},
      Rotation2d{1.0},
      Rotation2d{kTwoPi},
      NilpotentShift{3},
      DiscRotation{3},
      DiscRotation{4},
      RandomStable{6, 42, -0.5},
  };
}

inline std::string describe(const catalog::Entry& e) {
  using namespace catalog;
  struct V {
    std::string operator()(const Diagonal& d) const {
      std::string s = "diagonal(";
      for (std::size_t i = 0; i < d.entries.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(d.entries[i].real()) + (d.entries[i].imag() < 0 ? "-" : "+") +
             std::to_string(std::abs(d.entries[i].imag())) + "i";
      }
      return s + ")";
    }
    std::string operator()(const Rotation2d& r) const {
      return "rotation2d(omega=" + std::to_string(r.omega) + ")";
    }
    std::string operator()(const NilpotentShift& n) const {
      return "nilpotent_shift(dim=" + std::to_string(n.dim) + ")";
    }
    std::string operator()(const DiscRotation& d) const {
      return "disc_rotation(N=" + std::to_string(d.degree) + ")";
    }
    std::string operator()(const RandomStable& r) const {
      return "random_stable(dim=" + std::to_string(r.dim) + ", seed=" + std::to_string(r.seed) +
             ", a=" + std::to_string(r.abscissa) + ")";
    }
  };
  return std::visit(V{}, e);
}

}  // namespace sgspec
