#include "topoloc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "topoloc/parallel.hpp"
#include "topoloc/stats.hpp"

namespace topoloc {
namespace {

constexpr double kMaxPhasePerStep = 0.1;
constexpr Eigen::Index kTimeChunk = 256;

Eigen::Matrix2d s_block() {
  Eigen::Matrix2d s;
  s << 1.0, 1.0, -1.0, -1.0;
  return s;
}

struct BlockCoefficients {
  Matrix cos_coef;  // modes x columns
  Matrix sin_coef;
  bool paired = false;
};

// Coefficients such that, for each (j, k) block,
//   paired:  [[a - ib, c - ie], [c + ie, a + ib]] with (a, c) = cos_coef^T cos,
//            (b, e) = sin_coef^T sin, summed over the positive half of the spectrum;
//   generic: entry (a, b) = cos_coef^T cos - i sin_coef^T sin over all modes.
BlockCoefficients block_coefficients(const Vector& eigenvalues, const Matrix& vectors,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& blocks) {
  const Eigen::Index two_n = eigenvalues.size();
  const Eigen::Index n = two_n / 2;
  BlockCoefficients out;
  // Particle-hole symmetry pairs +lambda with -lambda (eigenvector swapped
  // within each 2-block); usable when no mode sits at zero.
  out.paired = eigenvalues(n) > 1e-9;
  const auto nb = static_cast<Eigen::Index>(blocks.size());
  if (out.paired) {
    out.cos_coef.resize(n, 2 * nb);
    out.sin_coef.resize(n, 2 * nb);
    for (Eigen::Index b = 0; b < nb; ++b) {
      const auto j = static_cast<Eigen::Index>(blocks[static_cast<std::size_t>(b)].first);
      const auto k = static_cast<Eigen::Index>(blocks[static_cast<std::size_t>(b)].second);
      for (Eigen::Index m = 0; m < n; ++m) {
        const auto& u = vectors.col(n + m);
        const double p00 = u(2 * j) * u(2 * k);
        const double p01 = u(2 * j) * u(2 * k + 1);
        const double p10 = u(2 * j + 1) * u(2 * k);
        const double p11 = u(2 * j + 1) * u(2 * k + 1);
        out.cos_coef(m, 2 * b) = p00 + p11;
        out.cos_coef(m, 2 * b + 1) = p01 + p10;
        out.sin_coef(m, 2 * b) = p00 - p11;
        out.sin_coef(m, 2 * b + 1) = p01 - p10;
      }
    }
  } else {
    out.cos_coef.resize(two_n, 4 * nb);
    for (Eigen::Index b = 0; b < nb; ++b) {
      const auto j = static_cast<Eigen::Index>(blocks[static_cast<std::size_t>(b)].first);
      const auto k = static_cast<Eigen::Index>(blocks[static_cast<std::size_t>(b)].second);
      for (Eigen::Index m = 0; m < two_n; ++m) {
        const auto& u = vectors.col(m);
        out.cos_coef(m, 4 * b + 0) = u(2 * j) * u(2 * k);
        out.cos_coef(m, 4 * b + 1) = u(2 * j) * u(2 * k + 1);
        out.cos_coef(m, 4 * b + 2) = u(2 * j + 1) * u(2 * k);
        out.cos_coef(m, 4 * b + 3) = u(2 * j + 1) * u(2 * k + 1);
      }
    }
    out.sin_coef = out.cos_coef;
  }
  return out;
}

double paired_norm(double a, double b, double c, double e) {
  const double frob = 2.0 * (a * a + b * b + c * c + e * e);
  const double det = a * a + b * b - c * c - e * e;
  const double disc = std::max(0.0, frob * frob - 4.0 * det * det);
  return std::sqrt(std::max(0.0, 0.5 * (frob + std::sqrt(disc))));
}

}  // namespace

OneParticleMatrix build_m(const ChainSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n_sites());
  OneParticleMatrix out{Matrix::Zero(2 * n, 2 * n), spec};
  Eigen::Matrix2d sigma_z;
  sigma_z << 1.0, 0.0, 0.0, -1.0;
  const Eigen::Matrix2d s = s_block();
  for (Eigen::Index j = 0; j < n; ++j) {
    out.m.block<2, 2>(2 * j, 2 * j) = 2.0 * spec.fields[static_cast<std::size_t>(j)] * sigma_z;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index k = (j + 1) % n;
    const double coupling = spec.couplings[static_cast<std::size_t>(j)];
    const double sign = (k == 0) ? 1.0 : -1.0;
    out.m.block<2, 2>(2 * j, 2 * k) += sign * coupling * s;
    out.m.block<2, 2>(2 * k, 2 * j) += sign * coupling * s.transpose();
  }
  return out;
}

OneParticlePropagator::OneParticlePropagator(const OneParticleMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("OneParticlePropagator: eigensolver failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::Matrix2cd OneParticlePropagator::block(std::size_t j, std::size_t k, double t) const {
  const std::size_t n = n_sites();
  if (j >= n || k >= n) throw std::out_of_range("OneParticlePropagator::block: site out of range");
  const auto rows = eigenvectors_.middleRows(static_cast<Eigen::Index>(2 * j), 2);
  const auto cols = eigenvectors_.middleRows(static_cast<Eigen::Index>(2 * k), 2);
  const CVector phase = (std::complex<double>(0.0, -t) * eigenvalues_.cast<std::complex<double>>())
                            .array()
                            .exp()
                            .matrix();
  return rows.cast<std::complex<double>>() * phase.asDiagonal() *
         cols.transpose().cast<std::complex<double>>();
}

double OneParticlePropagator::block_norm(std::size_t j, std::size_t k, double t) const {
  return spectral_norm(block(j, k, t));
}

CMatrix OneParticlePropagator::evolution(double t) const {
  const CVector phase = (std::complex<double>(0.0, -t) * eigenvalues_.cast<std::complex<double>>())
                            .array()
                            .exp()
                            .matrix();
  const CMatrix v = eigenvectors_.cast<std::complex<double>>();
  return v * phase.asDiagonal() * v.transpose();
}

double spectral_norm(const Eigen::Matrix2cd& block) {
  const double frob = block.squaredNorm();
  const double det = std::abs(block.determinant());
  const double disc = std::max(0.0, frob * frob - 4.0 * det * det);
  return std::sqrt(std::max(0.0, 0.5 * (frob + std::sqrt(disc))));
}

double propagator_block_norm(const OneParticleMatrix& m, std::size_t j, std::size_t k, double t) {
  return OneParticlePropagator(m).block_norm(j, k, t);
}

std::vector<double> sup_norm_single(const ChainSpec& spec, const ProbeSettings& settings,
                                    double* step_used) {
  if (settings.distances.empty()) throw std::invalid_argument("sup_norm_profile: no distances");
  if (!(settings.t_max >= 0.0)) throw std::invalid_argument("sup_norm_profile: t_max < 0");
  const std::size_t n = spec.n_sites();
  const std::size_t d_max = *std::max_element(settings.distances.begin(), settings.distances.end());
  if (n < 2 * settings.boundary_margin + d_max + 1) {
    throw std::invalid_argument("sup_norm_profile: chain too short for margin " +
                                std::to_string(settings.boundary_margin) + " and distance " +
                                std::to_string(d_max));
  }
  // Bulk starting sites, evenly spaced, keeping j and j + d clear of the
  // wrap-around bond.
  const std::size_t lo = settings.boundary_margin;
  const std::size_t hi = n - 1 - settings.boundary_margin - d_max;
  const std::size_t span = hi - lo + 1;
  const std::size_t count = std::clamp<std::size_t>(settings.bulk_positions, 1, span);
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < count; ++i) {
    starts.push_back(count == 1 ? lo + span / 2 : lo + (i * (span - 1)) / (count - 1));
  }

  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (const std::size_t j : starts) {
    for (const std::size_t d : settings.distances) blocks.emplace_back(j, j + d);
  }

  const OneParticlePropagator prop(build_m(spec));
  const Vector& lambda = prop.eigenvalues();
  const double omega_max = lambda.cwiseAbs().maxCoeff();
  double step = settings.t_step > 0.0 ? settings.t_step : settings.t_max;
  if (omega_max > 0.0) step = std::min(step, kMaxPhasePerStep / omega_max);
  const auto n_steps =
      settings.t_max > 0.0 ? static_cast<Eigen::Index>(std::ceil(settings.t_max / step - 1e-12)) : 0;
  const double dt = n_steps > 0 ? settings.t_max / static_cast<double>(n_steps) : 0.0;
  if (step_used) *step_used = dt;

  const BlockCoefficients coef = block_coefficients(lambda, prop.eigenvectors(), blocks);
  const Eigen::Index modes = coef.cos_coef.rows();
  const Vector freq = coef.paired ? Vector(lambda.tail(modes)) : lambda;

  std::vector<double> sup(blocks.size(), 0.0);
  for (Eigen::Index start = 0; start <= n_steps; start += kTimeChunk) {
    const Eigen::Index rows = std::min(kTimeChunk, n_steps + 1 - start);
    Matrix cos_t(rows, modes);
    Matrix sin_t(rows, modes);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double t = dt * static_cast<double>(start + r);
      for (Eigen::Index m = 0; m < modes; ++m) {
        cos_t(r, m) = std::cos(freq(m) * t);
        sin_t(r, m) = std::sin(freq(m) * t);
      }
    }
    const Matrix re = cos_t * coef.cos_coef;
    const Matrix im = sin_t * coef.sin_coef;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto bi = static_cast<Eigen::Index>(b);
      double best = sup[b];
      for (Eigen::Index r = 0; r < rows; ++r) {
        double norm = 0.0;
        if (coef.paired) {
          norm = paired_norm(re(r, 2 * bi), im(r, 2 * bi), re(r, 2 * bi + 1), im(r, 2 * bi + 1));
        } else {
          Eigen::Matrix2cd blk;
          blk << std::complex<double>(re(r, 4 * bi), -im(r, 4 * bi)),
              std::complex<double>(re(r, 4 * bi + 1), -im(r, 4 * bi + 1)),
              std::complex<double>(re(r, 4 * bi + 2), -im(r, 4 * bi + 2)),
              std::complex<double>(re(r, 4 * bi + 3), -im(r, 4 * bi + 3));
          norm = spectral_norm(blk);
        }
        best = std::max(best, norm);
      }
      sup[b] = best;
    }
  }

  const std::size_t nd = settings.distances.size();
  std::vector<double> profile(nd, 0.0);
  for (std::size_t b = 0; b < blocks.size(); ++b) profile[b % nd] += sup[b];
  for (double& v : profile) v /= static_cast<double>(starts.size());
  return profile;
}

SupNormProfile sup_norm_profile(const DisorderModel& model, const ProbeSettings& settings) {
  model.validate();
  if (settings.realizations == 0) throw std::invalid_argument("sup_norm_profile: no realizations");
  const std::size_t reps = settings.realizations;
  SupNormProfile out;
  out.t_max = settings.t_max;
  out.realizations = reps;
  out.per_realization.assign(reps, {});
  std::vector<double> steps(reps, 0.0);

  parallel_for(reps, settings.threads, [&](std::size_t r) {
    out.per_realization[r] = sup_norm_single(sample_chain(model, r), settings, &steps[r]);
  });

  out.finest_step = *std::min_element(steps.begin(), steps.end());
  const std::size_t nd = settings.distances.size();
  std::vector<double> column(reps);
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t r = 0; r < reps; ++r) column[r] = out.per_realization[r][i];
    out.samples.push_back({settings.distances[i], mean(column), jackknife_standard_error(column)});
  }
  return out;
}

namespace {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;  // eta, ln v = intercept - slope * x
  double rss = 0.0;
  double sxx = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y, bool clamp_slope) {
  const double xm = mean(x);
  const double ym = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  LinearFit fit;
  fit.sxx = sxx;
  fit.slope = sxx > 0.0 ? -sxy / sxx : 0.0;
  if (clamp_slope && fit.slope < 0.0) fit.slope = 0.0;
  fit.intercept = ym + fit.slope * xm;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept - fit.slope * x[i]);
    fit.rss += r * r;
  }
  return fit;
}

}  // namespace

DecayFit fit_decay(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 6) throw std::invalid_argument("fit_decay: need at least 6 samples");
  std::vector<double> d;
  std::vector<double> y;
  for (const auto& [dist, value] : samples) {
    if (!(value > 0.0) || !std::isfinite(value) || dist < 0.0) {
      throw std::invalid_argument("fit_decay: samples must have d >= 0 and positive values");
    }
    d.push_back(dist);
    y.push_back(std::log(value));
  }
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  if (*ymax - *ymin == 0.0) throw std::invalid_argument("fit_decay: all samples equal");

  auto fit_at = [&](double zeta) {
    std::vector<double> x(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) x[i] = std::pow(d[i], zeta);
    return fit_line(x, y, true);
  };

  // Coarse scan over zeta in (0, 1], then golden-section refinement.
  constexpr int kGrid = 400;
  constexpr double kZetaMin = 1e-3;
  auto zeta_of = [&](int i) { return kZetaMin + (1.0 - kZetaMin) * i / kGrid; };
  int best = kGrid;
  double best_rss = fit_at(1.0).rss;
  for (int i = 0; i < kGrid; ++i) {
    const double rss = fit_at(zeta_of(i)).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best = i;
    }
  }
  double lo = zeta_of(std::max(0, best - 1));
  double hi = zeta_of(std::min(kGrid, best + 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = fit_at(x1).rss;
  double f2 = fit_at(x2).rss;
  while (hi - lo > 1e-10) {
    if (f1 > f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fit_at(x2).rss;
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fit_at(x1).rss;
    }
  }
  double zeta = 0.5 * (lo + hi);
  if (fit_at(1.0).rss <= fit_at(zeta).rss) zeta = 1.0;

  DecayFit out;
  const double n = static_cast<double>(d.size());
  const LinearFit stretched = fit_at(zeta);
  out.zeta_fit = zeta;
  out.eta_fit = stretched.slope;
  out.c_fit = std::exp(stretched.intercept);
  out.residual = std::sqrt(stretched.rss / n);

  const LinearFit plain = fit_line(d, y, false);
  out.exp_c = std::exp(plain.intercept);
  out.exp_eta = plain.slope;
  out.exp_residual = std::sqrt(plain.rss / n);
  out.exp_eta_stderr = plain.sxx > 0.0 ? std::sqrt(plain.rss / (n - 2.0) / plain.sxx) : 0.0;

  std::vector<double> log_d(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) log_d[i] = std::log1p(d[i]);
  const LinearFit algebraic = fit_line(log_d, y, false);
  out.power_alpha = algebraic.slope;
  out.power_residual = std::sqrt(algebraic.rss / n);
  out.samples.assign(samples.begin(), samples.end());
  return out;
}

DecayFit fit_decay(std::span<const ProfileSample> samples) {
  std::vector<std::pair<double, double>> pairs;
  for (const auto& s : samples) pairs.emplace_back(static_cast<double>(s.distance), s.mean);
  return fit_decay(pairs);
}

}  // namespace topoloc
