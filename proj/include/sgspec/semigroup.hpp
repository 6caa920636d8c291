#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sgspec/matrix_exp.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

// Catalog generators. Each one carries a closed-form semigroup except random_stable.
namespace catalog {

struct Diagonal {
  std::vector<Complex> entries;
};
struct Rotation2d {
  double omega = 1.0;
};
struct NilpotentShift {
  int dim = 2;
};
// Rotation semigroup f(z) -> f(e^{it}z) on Taylor coefficients of degree <= degree.
struct DiscRotation {
  int degree = 1;
};
struct RandomStable {
  int dim = 2;
  std::uint64_t seed = 0;
  double abscissa = -1.0;  // every eigenvalue has real part <= abscissa
};

using Entry = std::variant<Diagonal, Rotation2d, NilpotentShift, DiscRotation, RandomStable>;

inline std::string id_of(const Entry& e) {
  struct V {
    std::string operator()(const Diagonal&) const { return "diagonal"; }
    std::string operator()(const Rotation2d&) const { return "rotation2d"; }
    std::string operator()(const NilpotentShift&) const { return "nilpotent_shift"; }
    std::string operator()(const DiscRotation&) const { return "disc_rotation"; }
    std::string operator()(const RandomStable&) const { return "random_stable"; }
  };
  return std::visit(V{}, e);
}

}  // namespace catalog

// Either an explicit dense matrix or a catalog entry. std::variant keeps
// exactly one alternative populated.
using GeneratorSpec = std::variant<ComplexMatrix, catalog::Entry>;

enum class EvaluationStrategy { matrix_exponential, closed_form };

inline const char* to_string(EvaluationStrategy s) {
  return s == EvaluationStrategy::closed_form ? "closed_form" : "matrix_exponential";
}

/// Evaluates t -> T(t) for a finite-dimensional semigroup.
///
/// Immutable after construction; copies share the (stateless) closed-form
/// action, so concurrent evaluation is safe. Rescaling composes on top of
/// the base action: the stored object computes e^{-shift*t} T_base(scale*t).
class SemigroupEvaluator {
 public:
  using Action = std::function<ComplexMatrix(double)>;

  static SemigroupEvaluator from_dense(ComplexMatrix a, MatrixExpOptions opts = {}) {
    GeneratorSpec spec{a};
    return from_matrix_exponential(std::move(spec), std::move(a), opts);
  }

  // Matrix-exponential evaluator that keeps a non-dense spec (random_stable).
  static SemigroupEvaluator from_matrix_exponential(GeneratorSpec spec, ComplexMatrix a,
                                                    MatrixExpOptions opts = {}) {
    require_square(a, "SemigroupEvaluator");
    if (!all_finite(a)) throw ConfigError("SemigroupEvaluator: generator has non-finite entries");
    auto action = std::make_shared<const Action>(
        [a, opts](double t) { return matrix_exp(a, t, opts); });
    return SemigroupEvaluator(std::move(spec), std::move(a), std::move(action),
                              EvaluationStrategy::matrix_exponential);
  }

  static SemigroupEvaluator from_closed_form(GeneratorSpec spec, ComplexMatrix generator,
                                             Action action) {
    require_square(generator, "SemigroupEvaluator");
    return SemigroupEvaluator(std::move(spec), std::move(generator),
                              std::make_shared<const Action>(std::move(action)),
                              EvaluationStrategy::closed_form);
  }

  Eigen::Index dim() const { return generator_.rows(); }
  const GeneratorSpec& spec() const { return spec_; }
  EvaluationStrategy strategy() const { return strategy_; }
  double time_scale() const { return scale_; }
  Complex shift() const { return shift_; }

  /// The generator this evaluator claims to have: scale*A_base - shift*I
  /// unless overridden by with_declared_generator().
  const ComplexMatrix& generator() const { return generator_; }

  /// T(t). T(0) is returned as the exact identity.
  ComplexMatrix operator_at(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t))
      throw ConfigError("semigroup evaluation requires finite t >= 0, got " + std::to_string(t));
    if (t == 0.0) return identity(dim());
    ComplexMatrix m = (*action_)(scale_ * t);
    if (shift_ != Complex(0.0)) m *= std::exp(-shift_ * t);
    return m;
  }

  ComplexVector evaluate(double t, const ComplexVector& x) const {
    if (x.size() != dim())
      throw DimensionError("evaluate_orbit: vector has dimension " + std::to_string(x.size()) +
                           ", semigroup has " + std::to_string(dim()));
    if (t == 0.0) return x;
    return operator_at(t) * x;
  }

  /// S(t) = e^{-lambda t} T(c t); generator c*A - lambda*I.
  SemigroupEvaluator rescaled(Complex lambda, double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("rescale: c must be > 0");
    if (!is_finite(lambda)) throw ConfigError("rescale: lambda must be finite");
    SemigroupEvaluator out = *this;
    out.scale_ = scale_ * c;
    out.shift_ = shift_ * c + lambda;
    out.generator_ = c * generator_ - lambda * identity(dim());
    return out;
  }

  /// Same action, different claimed generator. Used to build deliberately
  /// mismatched pairs for negative controls.
  SemigroupEvaluator with_declared_generator(ComplexMatrix a) const {
    if (a.rows() != dim() || a.cols() != dim())
      throw DimensionError("with_declared_generator: dimension mismatch");
    SemigroupEvaluator out = *this;
    out.generator_ = std::move(a);
    out.spec_ = GeneratorSpec{out.generator_};
    return out;
  }

 private:
  SemigroupEvaluator(GeneratorSpec spec, ComplexMatrix generator,
                     std::shared_ptr<const Action> action, EvaluationStrategy strategy)
      : spec_(std::move(spec)),
        generator_(std::move(generator)),
        action_(std::move(action)),
        strategy_(strategy) {}

  GeneratorSpec spec_;
  ComplexMatrix generator_;
  std::shared_ptr<const Action> action_;
  EvaluationStrategy strategy_;
  double scale_ = 1.0;
  Complex shift_{0.0, 0.0};
};

inline ComplexVector evaluate_orbit(const SemigroupEvaluator& s, double t, const ComplexVector& x) {
  return s.evaluate(t, x);
}

inline SemigroupEvaluator rescale(const SemigroupEvaluator& s, Complex lambda, double c) {
  return s.rescaled(lambda, c);
}

inline ComplexMatrix generator_of(const SemigroupEvaluator& s) { return s.generator(); }

// ||(T(h)x - x)/h - Ax||_inf; first order in h for a correct generator.
inline double generator_fd_residual(const SemigroupEvaluator& s, const ComplexVector& x, double h) {
  if (!(h > 0.0)) throw ConfigError("generator_fd_residual: h must be > 0");
  const ComplexVector diff = (s.evaluate(h, x) - x) / h;
  return norm_inf(diff - s.generator() * x);
}

}  // namespace sgspec
