#include "topoloc/assembly2d.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace topoloc {

WilsonLoopResult wilson_loop(std::span<const double> row_correlations) {
  if (row_correlations.empty()) {
    throw std::invalid_argument("wilson_loop: need at least one row");
  }
  WilsonLoopResult out;
  out.d = row_correlations.size();
  out.per_row_factors.assign(row_correlations.begin(), row_correlations.end());
  for (const double c : row_correlations) {
    if (!std::isfinite(c)) throw std::invalid_argument("wilson_loop: non-finite factor");
    if (c <= 0.0) {
      out.vanished = true;
      out.log_value = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.log_value += std::log(c);
  }
  return out;
}

TwoDEntropyResult assemble_entropy(std::span<const double> row_entropies,
                                   TopologicalSector sector) {
  if (row_entropies.empty() || row_entropies.size() % 2 != 0) {
    throw std::invalid_argument("assemble_entropy: need 2M row entropies, got " +
                                std::to_string(row_entropies.size()));
  }
  double sum = 0.0;
  for (const double s : row_entropies) {
    if (!(s >= 0.0)) throw std::invalid_argument("assemble_entropy: negative row entropy");
    sum += s;
  }
  TwoDEntropyResult out;
  out.m_rows = row_entropies.size() / 2;
  out.sector = sector;
  out.total_bits = (sector == TopologicalSector::ZSector) ? sum - 1.0 : sum;
  out.gamma_topo = sum - out.total_bits;
  return out;
}

PerimeterAreaFit fit_perimeter_area(std::span<const double> sides,
                                    std::span<const double> log_values) {
  if (sides.size() != log_values.size() || sides.size() < 2) {
    throw std::invalid_argument("fit_perimeter_area: need >= 2 matching (D, ln W) pairs");
  }
  const auto n = static_cast<Eigen::Index>(sides.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = sides[static_cast<std::size_t>(i)];
    design(i, 0) = -d;
    design(i, 1) = -d * d;
    rhs(i) = log_values[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  PerimeterAreaFit fit;
  fit.perimeter = coef(0);
  fit.area = coef(1);
  fit.rms_residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace topoloc
