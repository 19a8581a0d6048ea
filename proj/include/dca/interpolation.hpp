#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dca/curvature.hpp"
#include "dca/vec.hpp"

namespace dca {

struct Triplet {
  Vec x;
  Vec g;
  double f = 0.0;
};

/// Right-hand side of the F_{mu,L} interpolation inequality for the pair
/// (i, j), with dg = g_i - g_j and dx = x_i - x_j:
///   |dg|^2/(2L) + mu/(2L(L-mu)) |dg - L dx|^2,
/// evaluated as (|dg|^2/L - 2 mu <dg,dx>/L + mu |dx|^2) / (2 (1 - mu/L)),
/// which reduces to mu |dx|^2 / 2 at L = inf.
double interpolation_rhs(const CurvatureClass& cls, std::span<const double> dg, std::span<const double> dx);

/// f_i - f_j - <g_j, x_i - x_j> - rhs.
double interpolation_slack(const CurvatureClass& cls, const Triplet& ti, const Triplet& tj);

enum class SlackScale { absolute, relative };

struct InterpReport {
  std::size_t n = 0;
  std::vector<double> slack;  // row-major n x n, zero diagonal
  double min_slack = 0.0;
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  bool feasible = true;

  double at(std::size_t i, std::size_t j) const { return slack[i * n + j]; }
};

inline constexpr double kInterpTol = 1e-9;
inline constexpr double kDegenerateClassGap = 1e-12;

InterpReport check_interpolation(std::span<const Triplet> triplets, const CurvatureClass& cls,
                                 double tol = kInterpTol, SlackScale scale = SlackScale::absolute);
InterpReport check_interpolation_serial(std::span<const Triplet> triplets, const CurvatureClass& cls,
                                        double tol = kInterpTol, SlackScale scale = SlackScale::absolute);

}  // namespace dca
