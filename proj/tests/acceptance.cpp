// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "topoloc/assembly2d.hpp"
#include "topoloc/chain.hpp"
#include "topoloc/cleantheory.hpp"
#include "topoloc/experiment.hpp"
#include "topoloc/freefermion.hpp"
#include "topoloc/localization.hpp"
#include "topoloc/observables.hpp"
#include "topoloc/parallel.hpp"

using namespace topoloc;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

Hygiene hygiene;  // criteria 1 to 6

unsigned worker_count() {
  return threads_from_env(std::max(1u, std::thread::hardware_concurrency()));
}

double tracked_correlation(const QuenchPropagator& p, std::size_t j, std::size_t l) {
  const auto c = correlation_xx(p, j, l);
  hygiene.min_det = std::min(hygiene.min_det, c.det);
  ++hygiene.evaluations;
  return c.magnitude;
}

double tracked_entropy(const QuenchPropagator& p, std::size_t first, std::size_t length) {
  const auto e = entanglement_entropy(p, first, length);
  hygiene.max_nu = std::max(hygiene.max_nu, e.max_raw_nu);
  ++hygiene.evaluations;
  return e.bits;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

Verdict oracle_equivalence() {
  const std::size_t sizes[] = {6, 8, 10};
  const double times[] = {0.0, 0.7, 1.7, 5.0};
  const auto start = std::chrono::steady_clock::now();
  double dc = 0.0;
  double ds = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const DisorderModel model{0.5, 0.5, sizes[i % 3], 2024};
    const ChainSpec final_chain = sample_chain(model, i);
    const ChainSpec initial = final_chain.with_field(i % 2 == 0 ? 0.0 : 0.3);
    const auto cmp = compare_with_oracle(initial, final_chain, times);
    dc = std::max(dc, cmp.max_correlation_deviation);
    ds = std::max(ds, cmp.max_entropy_deviation);
    hygiene.merge(cmp.hygiene);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {dc < 1e-8 && ds < 1e-7 && seconds < 60.0,
          fmt("max |dC| = %.2e, max |dS| = %.2e bits, %.1f s", dc, ds, seconds)};
}

Verdict clean_correlation_asymptote() {
  const auto fin = ChainSpec::uniform(512, 1.0, 0.5);
  const QuenchDynamics dyn(diagonalize(fin.with_field(0.0)), diagonalize(fin));
  const auto prop = dyn.at(200.0, 0, 33);
  const double base = (1.0 + std::sqrt(0.75)) / 2.0;
  double worst = 0.0;
  for (std::size_t d : {8, 16, 32}) {
    const double c = tracked_correlation(prop, 0, d);
    worst = std::max(worst, std::abs(c / std::pow(base, static_cast<double>(d + 1)) - 1.0));
  }
  return {worst < 0.02, fmt("largest relative deviation %.4f", worst)};
}

Verdict static_ghz() {
  const std::size_t n = 64;
  const auto fin = ChainSpec::uniform(n, 1.0, 0.5);
  const QuenchDynamics dyn(diagonalize(fin.with_field(0.0)), diagonalize(fin));
  const auto prop = dyn.at(0.0);
  double dc = 0.0;
  for (std::size_t l = 1; l < n; ++l) dc = std::max(dc, std::abs(tracked_correlation(prop, 0, l) - 1.0));
  const double ds = std::abs(tracked_entropy(prop, 0, n / 2) - 1.0);
  return {dc < 1e-8 && ds < 1e-8, fmt("max |C - 1| = %.2e, |S(N/2) - 1| = %.2e", dc, ds)};
}

Verdict revival() {
  const auto fin = ChainSpec::uniform(256, 1.0, 0.5);
  const QuenchDynamics dyn(diagonalize(fin.with_field(0.0)), diagonalize(fin));
  double best_t = 0.0;
  double best_s = INFINITY;
  for (int k = 0; k <= 600; ++k) {
    const double t = 100.0 + 0.1 * k;
    const double s = tracked_entropy(dyn.at(t, 0, 64), 0, 64);
    if (s < best_s) {
      best_s = s;
      best_t = t;
    }
  }
  const bool interior = best_t > 100.0 && best_t < 160.0;
  return {interior && best_t >= 120.0 && best_t <= 136.0,
          fmt("minimum of S(64, t) on [100, 160] at t = %.1f (S = %.4f bits)", best_t, best_s)};
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Verdict linear_growth() {
  const auto fin = ChainSpec::uniform(512, 1.0, 0.5);
  const QuenchDynamics dyn(diagonalize(fin.with_field(0.0)), diagonalize(fin));
  const CleanQuenchSpec spec{0.0, 0.5, std::nullopt};
  std::vector<double> ts, numeric, theory;
  for (int k = 0; k <= 40; ++k) {
    const double t = 10.0 + k;
    ts.push_back(t);
    numeric.push_back(tracked_entropy(dyn.at(t, 0, 128), 0, 128));
    theory.push_back(semiclassical_entropy(spec, 128.0, t));
  }
  const double a = slope(ts, numeric);
  const double b = slope(ts, theory);
  return {std::abs(a / b - 1.0) < 0.05,
          fmt("slope %.4f bits/unit time vs semiclassical %.4f", a, b)};
}

Verdict saturation() {
  QuenchSettings s;
  s.n_sites = 512;
  s.h = 0.5;
  s.h0 = 0.0;
  s.realizations = 100;
  s.master_seed = 6;
  s.times = {250.0};
  s.distances = {64, 128, 256};
  s.threads = worker_count();
  s.epsilon = 0.5;
  const auto dis = quench_sweep(s);
  s.epsilon = 0.0;
  const auto clean = quench_sweep(s);
  hygiene.merge(dis.hygiene);
  hygiene.merge(clean.hygiene);
  const double grow_dis = dis.entropy[2].mean - dis.entropy[1].mean;
  const double grow_clean = clean.entropy[2].mean - clean.entropy[1].mean;
  const double c_dis = dis.correlation[0].mean;
  const double c_clean = clean.correlation[0].mean;
  return {grow_dis < 0.05 && grow_clean > 0.5 && c_dis > 10.0 * c_clean,
          fmt("S(256)-S(128): %.3f (eps 0.5), %.3f (clean); C(64): %.4f vs clean %.4f", grow_dis,
              grow_clean, c_dis, c_clean)};
}

Verdict localization_fit() {
  ProbeSettings settings;
  settings.t_max = 500.0;
  for (std::size_t d = 0; d <= 40; d += 2) settings.distances.push_back(d);
  settings.threads = worker_count();
  const auto fit_for = [&](double epsilon, std::size_t realizations) {
    settings.realizations = realizations;
    const auto profile = sup_norm_profile(DisorderModel{epsilon, 0.5, 256, 7}, settings);
    return fit_decay(std::span<const ProfileSample>(profile.samples));
  };
  const DecayFit strong = fit_for(0.5, 200);
  const DecayFit weak = fit_for(0.25, 200);
  // every clean realization is the same chain
  const DecayFit clean = fit_for(0.0, 1);
  const bool ordered = strong.exp_eta > weak.exp_eta && weak.decay_resolved();
  return {ordered && clean.exponential_rejected(),
          fmt("eta(0.5) = %.4f, eta(0.25) = %.4f; clean exp/alg residual %.3f / %.3f",
              strong.exp_eta, weak.exp_eta, clean.exp_residual, clean.power_residual)};
}

Verdict te_assembly() {
  bool ok = true;
  for (std::size_t m : {1, 2, 4, 16}) {
    const std::vector<double> rows(2 * m, 1.0);
    const auto x = assemble_entropy(rows, TopologicalSector::XSector);
    const auto z = assemble_entropy(rows, TopologicalSector::ZSector);
    const double two_m = 2.0 * static_cast<double>(m);
    ok = ok && x.total_bits == two_m && z.total_bits == two_m - 1.0 && z.gamma_topo == 1.0 &&
         x.gamma_topo == 0.0;
  }
  return {ok, "S = 2M (x), 2M - 1 (z), gamma = 1 for M in {1, 2, 4, 16}"};
}

Verdict gge_consistency() {
  const CleanQuenchSpec inf{0.0, 0.5, std::nullopt};
  const CleanQuenchSpec ring{0.0, 0.5, 512};
  const double density = gge(inf).entropy_density;
  const double per_site = gge(ring).entropy_total / 512.0;
  double worst = std::abs(per_site / density - 1.0);
  for (double d : {64.0, 128.0, 256.0}) {
    const double s = semiclassical_entropy(inf, d, 1e5) / d;
    worst = std::max(worst, std::abs(s / density - 1.0));
  }
  return {worst < 0.01, fmt("GGE density %.6f bits/site, largest relative deviation %.2e", density,
                            worst)};
}

Verdict numerical_hygiene() {
  return {hygiene.min_det >= -1e-8 && hygiene.max_nu <= 1.0 + 1e-6,
          fmt("min det = %.2e, max nu = 1 + %.2e over %.0f evaluations", hygiene.min_det,
              hygiene.max_nu - 1.0, static_cast<double>(hygiene.evaluations))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"clean correlation asymptote", clean_correlation_asymptote},
      {"static GHZ values", static_ghz},
      {"revival quasi-period", revival},
      {"linear entropy growth", linear_growth},
      {"localization saturation", saturation},
      {"localization bound fit", localization_fit},
      {"topological entropy assembly", te_assembly},
      {"GGE consistency", gge_consistency},
      {"numerical hygiene", numerical_hygiene},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
