#include "topoloc/freefermion.hpp"

#include <complex>
#include <stdexcept>
#include <string>

namespace topoloc {

QuadraticHamiltonian build_quadratic(const ChainSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n_sites());
  QuadraticHamiltonian out{Matrix::Zero(n, n), Matrix::Zero(n, n), spec};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.a(j, j) = 2.0 * spec.fields[static_cast<std::size_t>(j)];
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double coupling = spec.couplings[static_cast<std::size_t>(j)];
    const Eigen::Index k = (j + 1) % n;
    // The wrap-around bond picks up the sign of the even-parity string,
    // leaving the fermions antiperiodic.
    const double sign = (k == 0) ? -1.0 : 1.0;
    out.a(j, k) += -sign * coupling;
    out.a(k, j) += -sign * coupling;
    out.b(j, k) += -sign * coupling;
    out.b(k, j) += sign * coupling;
  }
  return out;
}

BogoliubovBasis diagonalize(const QuadraticHamiltonian& hamiltonian) {
  const Matrix kernel = hamiltonian.a - hamiltonian.b;
  Eigen::BDCSVD<Matrix> svd(kernel, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const auto n = sigma.size();

  // kernel = U diag(s) V^T  =>  phi = U^T, psi = V^T, reordered ascending.
  BogoliubovBasis basis;
  basis.omega.resize(n);
  basis.phi.resize(n, n);
  basis.psi.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    basis.omega(k) = sigma(src);
    basis.phi.row(k) = svd.matrixU().col(src).transpose();
    basis.psi.row(k) = svd.matrixV().col(src).transpose();
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    if (basis.omega(k) < kZeroModeThreshold) ++basis.zero_modes;
  }
  if (basis.zero_modes > 0 && basis.phi.determinant() * basis.psi.determinant() < 0.0) {
    basis.psi.row(0) *= -1.0;
  }
  return basis;
}

QuenchDynamics::QuenchDynamics(const BogoliubovBasis& initial,
                               const BogoliubovBasis& final_basis) {
  if (initial.n_sites() != final_basis.n_sites()) {
    throw std::invalid_argument("quench_propagator: initial basis has " +
                                std::to_string(initial.n_sites()) + " modes, final has " +
                                std::to_string(final_basis.n_sites()));
  }
  phi_f_t_ = final_basis.phi.transpose();
  psi_f_t_ = final_basis.psi.transpose();
  phi_overlap_ = final_basis.phi * initial.phi.transpose();
  psi_overlap_ = final_basis.psi * initial.psi.transpose();
  omega_ = final_basis.omega;
}

QuenchPropagator QuenchDynamics::at(double t, std::size_t first_site, std::size_t count) const {
  if (first_site + count > n_sites()) {
    throw std::out_of_range("QuenchDynamics::at: site window exceeds chain length");
  }
  const Vector c = (omega_ * t).array().cos().matrix();
  const Vector s = (omega_ * t).array().sin().matrix();
  const auto first = static_cast<Eigen::Index>(first_site);
  const auto rows = static_cast<Eigen::Index>(count);

  const auto phi_rows = phi_f_t_.middleRows(first, rows);
  const auto psi_rows = psi_f_t_.middleRows(first, rows);

  QuenchPropagator out;
  out.t = t;
  out.first_row = first_site;
  const Matrix phi_re = phi_rows * (c.asDiagonal() * phi_overlap_);
  const Matrix phi_im = -(phi_rows * (s.asDiagonal() * psi_overlap_));
  const Matrix psi_re = psi_rows * (c.asDiagonal() * psi_overlap_);
  const Matrix psi_im = -(psi_rows * (s.asDiagonal() * phi_overlap_));
  out.phi_tilde.resize(rows, phi_re.cols());
  out.phi_tilde.real() = phi_re;
  out.phi_tilde.imag() = phi_im;
  out.psi_tilde.resize(rows, psi_re.cols());
  out.psi_tilde.real() = psi_re;
  out.psi_tilde.imag() = psi_im;
  return out;
}

QuenchPropagator quench_propagator(const BogoliubovBasis& initial,
                                   const BogoliubovBasis& final_basis, double t) {
  return QuenchDynamics(initial, final_basis).at(t);
}

}  // namespace topoloc
