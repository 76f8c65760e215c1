#include "topoloc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace topoloc {
namespace {

void require_window(const QuenchPropagator& prop, std::size_t first, std::size_t count,
                    const char* who) {
  if (!prop.covers(first, count)) {
    throw std::out_of_range(std::string(who) + ": sites [" + std::to_string(first) + ", " +
                            std::to_string(first + count) + ") not covered by propagator rows [" +
                            std::to_string(prop.first_row) + ", " +
                            std::to_string(prop.first_row + prop.rows()) + ")");
  }
}

// Block of rows from the propagator window, addressed by absolute site.
auto rows_of(const CMatrix& m, const QuenchPropagator& prop, std::size_t first,
             std::size_t count) {
  return m.middleRows(static_cast<Eigen::Index>(first - prop.first_row),
                      static_cast<Eigen::Index>(count));
}

}  // namespace

TwoPointBlocks two_point_blocks(const QuenchPropagator& prop) {
  const CMatrix& phi = prop.phi_tilde;
  const CMatrix& psi = prop.psi_tilde;
  TwoPointBlocks out;
  out.first_site = prop.first_row;
  out.aa = phi * phi.adjoint();
  out.bb = -(psi * psi.adjoint());
  out.ab = phi * psi.adjoint();
  out.ba = -(psi * phi.adjoint());
  return out;
}

MajoranaCorrelation majorana_correlation(const QuenchPropagator& prop, std::size_t first,
                                         std::size_t length) {
  if (length == 0) throw std::invalid_argument("majorana_correlation: empty subsystem");
  require_window(prop, first, length, "majorana_correlation");
  const CMatrix phi = rows_of(prop.phi_tilde, prop, first, length);
  const CMatrix psi = rows_of(prop.psi_tilde, prop, first, length);
  const CMatrix aa = phi * phi.adjoint();
  const CMatrix bb = psi * psi.adjoint();
  const CMatrix ab = phi * psi.adjoint();

  const auto n = static_cast<Eigen::Index>(length);
  MajoranaCorrelation out;
  out.t = prop.t;
  out.first = first;
  out.length = length;
  out.gamma = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index s = 0; s < n; ++s) {
      if (l != s) {
        // -i (phi~ phi~^+)_ls and -i (psi~ psi~^+)_ls; the real parts are delta_ls.
        out.gamma(2 * l, 2 * s) = aa(l, s).imag();
        out.gamma(2 * l + 1, 2 * s + 1) = bb(l, s).imag();
      }
      out.gamma(2 * l, 2 * s + 1) = ab(l, s).real();
      out.gamma(2 * s + 1, 2 * l) = -ab(l, s).real();
    }
  }
  return out;
}

CorrelationResult correlation_xx(const QuenchPropagator& prop, std::size_t j, std::size_t l) {
  if (j >= l) {
    throw std::invalid_argument("correlation_xx: need j < l, got j=" + std::to_string(j) +
                                ", l=" + std::to_string(l));
  }
  require_window(prop, j, l - j + 1, "correlation_xx");
  const std::size_t d = l - j;
  const auto dd = static_cast<Eigen::Index>(d);

  // B operators on sites j .. l-1, A operators on sites j+1 .. l.
  const CMatrix phi_a = rows_of(prop.phi_tilde, prop, j + 1, d);
  const CMatrix psi_b = rows_of(prop.psi_tilde, prop, j, d);
  const CMatrix bb = psi_b * psi_b.adjoint();   // -<B_m B_n>
  const CMatrix aa = phi_a * phi_a.adjoint();   //  <A_m A_n>
  const CMatrix ba = psi_b * phi_a.adjoint();   // -<B_m A_n>

  // Rescaling A by e^{i pi/4} and B by e^{-i pi/4} leaves the Pfaffian
  // unchanged and makes every contraction real.
  Matrix gamma = Matrix::Zero(2 * dd, 2 * dd);
  for (Eigen::Index m = 0; m < dd; ++m) {
    for (Eigen::Index n = 0; n < dd; ++n) {
      if (m != n) {
        gamma(m, n) = -bb(m, n).imag();
        gamma(dd + m, dd + n) = -aa(m, n).imag();
      }
      gamma(m, dd + n) = -ba(m, n).real();
      gamma(dd + n, m) = ba(m, n).real();
    }
  }

  CorrelationResult out;
  out.d = d;
  out.t = prop.t;
  out.det = gamma.partialPivLu().determinant();
  if (out.det < -kDetTolerance) {
    throw std::runtime_error("correlation_xx: determinant " + std::to_string(out.det) +
                             " is negative beyond tolerance");
  }
  out.magnitude = std::sqrt(std::max(out.det, 0.0));
  return out;
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary_entropy: argument outside [0, 1]: " + std::to_string(x));
  }
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double entropy_from_spectrum(const std::vector<double>& nu) {
  double s = 0.0;
  for (const double v : nu) s += binary_entropy(0.5 * (1.0 - v));
  return s;
}

EntropyResult entanglement_entropy(const QuenchPropagator& prop, std::size_t first,
                                   std::size_t length) {
  const MajoranaCorrelation corr = majorana_correlation(prop, first, length);
  const auto n = static_cast<Eigen::Index>(length);

  // i Gamma is Hermitian with spectrum {+nu_m, -nu_m}.
  const CMatrix hermitian = std::complex<double>(0.0, 1.0) * corr.gamma.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("entanglement_entropy: eigensolver failed");
  }
  const Vector& spectrum = solver.eigenvalues();

  EntropyResult out;
  out.l = length;
  out.nu.reserve(length);
  for (Eigen::Index m = n; m < 2 * n; ++m) {
    const double raw = std::abs(spectrum(m));
    out.max_raw_nu = std::max(out.max_raw_nu, raw);
    if (raw > 1.0 + kNuTolerance) {
      throw std::runtime_error("entanglement_entropy: Majorana eigenvalue " + std::to_string(raw) +
                               " exceeds 1");
    }
    out.nu.push_back(std::min(raw, 1.0));
  }
  std::sort(out.nu.begin(), out.nu.end());
  out.bits = entropy_from_spectrum(out.nu);
  return out;
}

}  // namespace topoloc
