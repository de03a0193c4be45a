#include "magnonlab/magnon_gas.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "magnonlab/numeric.hpp"

namespace magnonlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Mean of log(1 - e^{-bε}) over the midpoint grid with n nodes per axis,
// folded onto k_i in (0, π) and onto sorted index tuples.
double midpoint_level(double b, int dimension, int n) {
  const int half = n / 2;
  const double h = 2.0 * std::numbers::pi / n;
  std::vector<double> c(static_cast<std::size_t>(half));
  for (int j = 0; j < half; ++j) c[static_cast<std::size_t>(j)] = 1.0 - std::cos((j + 0.5) * h);
  auto f = [b](double e) { return log1mexp(b * e); };

  CompensatedSum sum;
  switch (dimension) {
    case 1:
      for (double ci : c) sum.add(f(ci));
      break;
    case 2:
      for (int i = 0; i < half; ++i) {
        const double ci = c[static_cast<std::size_t>(i)];
        sum.add(f(2.0 * ci));
        for (int j = i + 1; j < half; ++j) sum.add(2.0 * f(ci + c[static_cast<std::size_t>(j)]));
      }
      break;
    case 3:
      for (int i = 0; i < half; ++i) {
        const double ci = c[static_cast<std::size_t>(i)];
        for (int j = i; j < half; ++j) {
          const double cij = ci + c[static_cast<std::size_t>(j)];
          CompensatedSum row;
          for (int l = j; l < half; ++l) {
            const int mult = (i == j && j == l) ? 1 : (i == j || j == l) ? 3 : 6;
            row.add(mult * f(cij + c[static_cast<std::size_t>(l)]));
          }
          sum.add(row.value());
        }
      }
      break;
    default: throw std::invalid_argument("dimension must be 1, 2 or 3");
  }
  return sum.value() / std::pow(static_cast<double>(half), dimension);
}

// Coefficients of (Σ_j a_j y^j)^d with e^{-x} I₀(x) ~ (2πx)^{-1/2} Σ_j a_j x^{-j}.
std::array<double, 6> bessel_power_coefficients(int dimension) {
  const std::array<double, 6> a = {1.0, 1.0 / 8.0, 9.0 / 128.0, 225.0 / 3072.0, 11025.0 / 98304.0,
                                   893025.0 / 3932160.0};
  std::array<double, 6> out = {1.0, 0, 0, 0, 0, 0};
  for (int p = 0; p < dimension; ++p) {
    std::array<double, 6> next{};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; i + j < out.size(); ++j) next[i + j] += out[i] * a[j];
    out = next;
  }
  return out;
}

double scaled_bessel_i0(double x) {
  gsl_sf_result r;
  if (const int status = gsl_sf_bessel_I0_scaled_e(x, &r); status != GSL_SUCCESS)
    throw std::runtime_error(std::string("gsl_sf_bessel_I0_scaled: ") + gsl_strerror(status));
  return r.val;
}

double hurwitz_zeta(double s, double q) {
  gsl_sf_result r;
  if (const int status = gsl_sf_hzeta_e(s, q, &r); status != GSL_SUCCESS)
    throw std::runtime_error(std::string("gsl_sf_hzeta: ") + gsl_strerror(status));
  return r.val;
}

}  // namespace

double dispersion(std::span<const double> k) {
  double e = 0.0;
  for (double ki : k) e += 1.0 - std::cos(ki);
  return e;
}

void MagnonModel::validate() const {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("magnon model dimension must be 1, 2 or 3");
  if (!(coupling > 0.0) || !std::isfinite(coupling)) throw std::invalid_argument("coupling J must be positive");
  if (!(beta_tilde > 0.0) || !std::isfinite(beta_tilde))
    throw std::invalid_argument("scaled inverse temperature must be positive");
}

QuadratureResult magnon_free_energy_integral(const MagnonModel& model, const QuadratureSpec& spec) {
  model.validate();
  if (spec.max_level < 2) throw std::invalid_argument("quadrature needs max_level >= 2");
  const double b = model.stiffness();
  const int d = model.dimension;

  // table[i][j]: j-th Richardson column at level i.
  std::vector<std::vector<double>> table;
  double best = 0.0;
  double error = std::numeric_limits<double>::infinity();
  int n = 8;
  for (int level = 0; level <= spec.max_level; ++level, n *= 2) {
    std::vector<double> row{midpoint_level(b, d, n) / model.beta_tilde};
    for (int j = 1; j <= level; ++j) {
      const double factor = std::pow(2.0, d + 2 * (j - 1));
      row.push_back((factor * row[static_cast<std::size_t>(j - 1)] - table.back()[static_cast<std::size_t>(j - 1)]) /
                    (factor - 1.0));
    }
    table.push_back(std::move(row));
    if (level >= 2) {
      best = table[static_cast<std::size_t>(level)].back();
      error = std::abs(best - table[static_cast<std::size_t>(level - 1)].back());
      if (error <= spec.relative_tolerance * std::abs(best))
        return QuadratureResult{best, error, n, level + 1, "midpoint-richardson"};
    }
  }
  std::ostringstream os;
  os << "BZ quadrature did not reach relative tolerance " << spec.relative_tolerance << " (estimate " << best
     << " +/- " << error << ")";
  throw QuadratureError(os.str(), best, error);
}

QuadratureResult magnon_free_energy_bessel_series(const MagnonModel& model, double relative_tolerance) {
  model.validate();
  gsl_set_error_handler_off();
  const double b = model.stiffness();
  const int d = model.dimension;

  // Direct part up to N, where the asymptotic expansion of I₀ is sharp.
  const int terms = static_cast<int>(std::max(64.0, std::ceil(400.0 / b)));
  CompensatedSum direct;
  for (int n = 1; n <= terms; ++n) direct.add(std::pow(scaled_bessel_i0(n * b), d) / n);

  const auto coeff = bessel_power_coefficients(d);
  const double prefactor = std::pow(2.0 * std::numbers::pi * b, -0.5 * d);
  CompensatedSum tail;
  for (int j = 0; j < 5; ++j)
    tail.add(coeff[static_cast<std::size_t>(j)] * prefactor * std::pow(b, -j) *
             hurwitz_zeta(1.0 + 0.5 * d + j, terms + 1.0));
  const double next_term = coeff[5] * prefactor * std::pow(b, -5) * hurwitz_zeta(1.0 + 0.5 * d + 5, terms + 1.0);

  const double value = -(direct.value() + tail.value()) / model.beta_tilde;
  const double error = (std::abs(next_term) + 4.0 * std::numeric_limits<double>::epsilon() * terms *
                                                  std::abs(direct.value())) /
                       model.beta_tilde;
  if (error > relative_tolerance * std::abs(value)) {
    std::ostringstream os;
    os << "Bessel series did not reach relative tolerance " << relative_tolerance;
    throw QuadratureError(os.str(), value, error);
  }
  return QuadratureResult{value, error, terms, 1, "bessel-series"};
}

double magnon_free_energy_modes(double beta_tilde, std::span<const double> scaled_energies, double volume) {
  if (!(beta_tilde > 0.0)) throw std::invalid_argument("scaled inverse temperature must be positive");
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
  CompensatedSum sum;
  for (double e : scaled_energies) {
    if (!(e > 0.0)) throw std::domain_error("zero-energy mode included in the magnon sum (log divergence)");
    sum.add(log1mexp(beta_tilde * e));
  }
  return sum.value() / (beta_tilde * volume);
}

double magnon_free_energy_finite(const MagnonModel& model, const MomentumGrid& grid, bool exclude_zero_mode,
                                 std::optional<double> volume, double energy_shift) {
  model.validate();
  if (grid.size() == 0) throw std::invalid_argument("empty momentum grid");
  std::vector<double> energies;
  energies.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (exclude_zero_mode && grid.is_zero_mode(i)) continue;
    energies.push_back(model.coupling * dispersion(grid.momentum(i)) + energy_shift);
  }
  return magnon_free_energy_modes(model.beta_tilde, energies, volume.value_or(static_cast<double>(grid.size())));
}

void ConstrainedBoseSpec::validate() const {
  for (double e : energies)
    if (!std::isfinite(e) || e < 0.0) throw std::invalid_argument("mode energies must be finite and nonnegative");
  if (max_particles && *max_particles < 0) throw std::invalid_argument("particle cap must be nonnegative");
}

std::vector<double> bose_level_log_weights(std::span<const double> energies, double beta, int max_number) {
  if (max_number < 0) throw std::invalid_argument("max_number must be nonnegative");
  std::vector<double> w(static_cast<std::size_t>(max_number) + 1, kNegInf);
  w[0] = 0.0;
  // Adding an uncapped mode: W'_N = W_N + q W'_{N-1}, q = e^{-βe}.
  for (double e : energies) {
    const double log_q = -beta * e;
    for (std::size_t n = 1; n < w.size(); ++n) w[n] = log_add(w[n], w[n - 1] + log_q);
  }
  return w;
}

double constrained_bose_log_partition(const ConstrainedBoseSpec& spec, double beta) {
  spec.validate();
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const bool has_zero = std::any_of(spec.energies.begin(), spec.energies.end(), [](double e) { return e == 0.0; });
  if (!spec.max_particles) {
    if (has_zero) throw std::domain_error("uncapped zero-energy mode: partition function diverges");
    double log_z = 0.0;
    for (double e : spec.energies) log_z -= log1mexp(beta * e);
    return log_z;
  }
  if (spec.zero_mode_only_cap) return relaxed_bose_log_bound(spec, beta);
  const auto levels = bose_level_log_weights(spec.energies, beta, *spec.max_particles);
  return log_sum_exp(levels);
}

double relaxed_bose_log_bound(const ConstrainedBoseSpec& spec, double beta) {
  spec.validate();
  int zero_modes = 0;
  double log_z = 0.0;
  for (double e : spec.energies) {
    if (e == 0.0)
      ++zero_modes;
    else
      log_z -= log1mexp(beta * e);
  }
  if (zero_modes > 0) {
    if (!spec.max_particles) throw std::domain_error("uncapped zero-energy mode: partition function diverges");
    log_z += log_binomial(*spec.max_particles + zero_modes, zero_modes);
  }
  return log_z;
}

BoseTailReport bose_remainder_tail(double beta_tilde, double spin, double field, int cutoff, int box_side,
                                   int dimension) {
  if (!(beta_tilde > 0.0) || !(spin > 0.0)) throw std::invalid_argument("beta_tilde and S must be positive");
  if (!(field > 0.0)) throw std::invalid_argument("field h must be positive");
  if (cutoff < 0) throw std::invalid_argument("occupation cut must be nonnegative");
  if (box_side < 1 || dimension < 1 || dimension > 3) throw std::invalid_argument("invalid box geometry");

  BoseTailReport r;
  r.beta_tilde = beta_tilde;
  r.spin = spin;
  r.field = field;
  r.cutoff = cutoff;
  r.box_side = box_side;
  r.dimension = dimension;
  r.modes = static_cast<int>(std::lround(std::pow(box_side, dimension)));

  const double a = beta_tilde * field / spin;  // β h with β = β̃/S
  const double m = r.modes;
  const double log_full = -m * log1mexp(a);
  const std::vector<double> energies(static_cast<std::size_t>(r.modes), field);
  const double beta = beta_tilde / spin;

  // Level weights W_N = C(N+m-1, m-1) e^{-aN}; the part beyond N_big is bounded
  // by a geometric series with ratio q(N_big+m)/(N_big+1).
  const double log_x = -a;
  auto log_term = [&](double n) { return log_binomial(n + m - 1.0, m - 1.0) + n * log_x; };
  int n_big = cutoff + std::max(64, static_cast<int>(std::ceil(8.0 * m / a)));
  for (;;) {
    const double ratio = std::exp(log_x) * (n_big + m) / (n_big + 1.0);
    const auto levels = bose_level_log_weights(energies, beta, n_big);
    LogSumExp tail;
    for (int n = cutoff + 1; n <= n_big; ++n) tail.add(levels[static_cast<std::size_t>(n)]);
    if (ratio < 1.0 && !tail.empty()) {
      const double log_rest = log_term(n_big + 1.0) - std::log1p(-ratio);
      const double rel = std::exp(log_rest - tail.value());
      if (rel < 1e-17) {
        r.log_exact_tail = tail.value();
        r.truncation_bound = rel;
        LogSumExp below;
        for (int n = 0; n <= cutoff; ++n) below.add(levels[static_cast<std::size_t>(n)]);
        const double gap = log_full - below.value();
        r.log_dp_complement = gap > 0.0 ? log_full + log1mexp(gap) : kNegInf;
        break;
      }
    }
    if (n_big > 50'000'000) throw std::runtime_error("bose_remainder_tail: tail summation did not converge");
    n_big *= 2;
  }

  r.log_intermediate = -0.5 * a * cutoff + log_full;
  r.log_paper_bound = -0.25 * a * cutoff;
  r.field_below_spin = field < spin;
  r.occupation_margin = field * cutoff / spin - 4.0 * m * std::log(spin / field);
  r.bound_applicable = r.field_below_spin && r.occupation_margin > 0.0;
  r.bound_holds = r.log_exact_tail <= r.log_paper_bound + 1e-12 * std::max(1.0, std::abs(r.log_paper_bound));
  return r;
}

}  // namespace magnonlab
