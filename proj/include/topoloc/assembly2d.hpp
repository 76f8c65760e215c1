#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace topoloc {

/// ln <W_R> for a D x D square loop, as a sum over the D independent rows
/// crossing the loop of ln |<mu^x_r mu^x_{r+D}>|.
struct WilsonLoopResult {
  std::size_t d = 0;
  double log_value = 0.0;
  std::vector<double> per_row_factors;
  bool vanished = false;  // some factor <= 0; log_value is -inf
};

WilsonLoopResult wilson_loop(std::span<const double> row_correlations);

enum class TopologicalSector {
  XSector,  // W^x_1 = 1: a winding string crosses every cylinder cut
  ZSector,  // only contractible closed strings
};

struct TwoDEntropyResult {
  std::size_t m_rows = 0;  // M; there are 2M chain rows
  double total_bits = 0.0;
  TopologicalSector sector = TopologicalSector::ZSector;
  double gamma_topo = 0.0;
};

/// Entropy of a cylindrical region as the sum of its 2M row entropies; the
/// ZSector carries the topological deficit log2(2) = 1.
TwoDEntropyResult assemble_entropy(std::span<const double> row_entropies,
                                   TopologicalSector sector);

/// Least-squares fit ln <W> = -perimeter * D - area * D^2.
struct PerimeterAreaFit {
  double perimeter = 0.0;
  double area = 0.0;
  double rms_residual = 0.0;
};

PerimeterAreaFit fit_perimeter_area(std::span<const double> sides,
                                    std::span<const double> log_values);

}  // namespace topoloc
