#pragma once

#include <array>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "sgspec/types.hpp"

namespace sgspec {

struct MatrixExpOptions {
  // Largest admissible ||tA||_1. Beyond this the horizon is treated as ill-posed.
  double max_norm = 700.0;
};

namespace detail {

// Pade approximant r_m(A) of degree m in {3, 5, 7, 9, 13}.
inline ComplexMatrix pade_approximant(const ComplexMatrix& a, int m) {
  static constexpr std::array<double, 4> b3{120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                            25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9{17643225600.0, 8821612800.0, 2075673600.0,
                                             302702400.0,   30270240.0,   2162160.0,
                                             110880.0,      3960.0,       90.0,
                                             1.0};
  static constexpr std::array<double, 14> b13{
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};

  const Eigen::Index n = a.rows();
  const ComplexMatrix id = identity(n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix u, v;

  auto low_order = [&](const auto& b) {
    // Powers A^0, A^2, A^4, ... up to the approximant degree.
    const int deg = static_cast<int>(b.size()) - 1;
    ComplexMatrix even_power = id;
    ComplexMatrix odd_sum = ComplexMatrix::Zero(n, n);
    ComplexMatrix even_sum = ComplexMatrix::Zero(n, n);
    for (int k = 0; k <= deg; k += 2) {
      even_sum += b[k] * even_power;
      if (k + 1 <= deg) odd_sum += b[k + 1] * even_power;
      even_power = even_power * a2;
    }
    u = a * odd_sum;
    v = even_sum;
  };

  switch (m) {
    case 3: low_order(b3); break;
    case 5: low_order(b5); break;
    case 7: low_order(b7); break;
    case 9: low_order(b9); break;
    default: {
      const auto& b = b13;
      const ComplexMatrix a4 = a2 * a2;
      const ComplexMatrix a6 = a4 * a2;
      ComplexMatrix inner_u = b[13] * a6 + b[11] * a4 + b[9] * a2;
      u = a * (a6 * inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
      ComplexMatrix inner_v = b[12] * a6 + b[10] * a4 + b[8] * a2;
      v = a6 * inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
      break;
    }
  }
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// e^{tA} by scaling and squaring around a diagonal Pade approximant
/// (degree selected from the 1-norm of tA, Higham 2005 thresholds).
/// Diagonal input takes an exact elementwise path.
inline ComplexMatrix matrix_exp(const ComplexMatrix& a, double t, const MatrixExpOptions& opts = {}) {
  require_square(a, "matrix_exp");
  if (!std::isfinite(t)) throw ConfigError("matrix_exp: t must be finite");
  const Eigen::Index n = a.rows();
  if (t == 0.0) return identity(n);

  const ComplexMatrix ta = t * a;
  const double nrm = norm_one(ta);
  if (!std::isfinite(nrm) || nrm > opts.max_norm)
    throw OverflowError("matrix_exp: ||tA||_1 = " + std::to_string(nrm) + " exceeds bound " +
                        std::to_string(opts.max_norm));

  if (ta.isDiagonal(0.0)) {
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = std::exp(ta(i, i));
    return out;
  }

  static constexpr std::array<std::pair<int, double>, 4> kThetas{{{3, 1.495585217958292e-2},
                                                                  {5, 2.539398330063230e-1},
                                                                  {7, 9.504178996162932e-1},
                                                                  {9, 2.097847961257068e0}}};
  for (const auto& [m, theta] : kThetas)
    if (nrm <= theta) return detail::pade_approximant(ta, m);

  constexpr double theta13 = 5.371920351148152;
  int squarings = 0;
  if (nrm > theta13) squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  ComplexMatrix r = detail::pade_approximant(ta / std::ldexp(1.0, squarings), 13);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

}  // namespace sgspec
