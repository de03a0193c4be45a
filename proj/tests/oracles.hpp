#pragma once

// Brute-force reference constructions used only by the tests. Everything here
// works on the full tensor-product space with dense Kronecker products, so it
// shares no code path with the sector-blocked builders.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "magnonlab/block_operator.hpp"
#include "magnonlab/lattice.hpp"

namespace oracle {

using Eigen::MatrixXd;

inline MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Operator `a` acting on `site`, identity elsewhere. Site 0 is the most
// significant tensor factor.
inline MatrixXd on_site(const MatrixXd& a, int site, int sites) {
  const int q = static_cast<int>(a.rows());
  MatrixXd out = MatrixXd::Identity(1, 1);
  for (int x = 0; x < sites; ++x) out = kron(out, x == site ? a : MatrixXd::Identity(q, q));
  return out;
}

struct SpinMatrices {
  MatrixXd z, plus, minus, number;
};

// Basis |n⟩, n = 0..2S, S³ = n - S.
inline SpinMatrices spin_matrices(int twice) {
  const int q = twice + 1;
  const double s = 0.5 * twice;
  SpinMatrices m{MatrixXd::Zero(q, q), MatrixXd::Zero(q, q), MatrixXd::Zero(q, q), MatrixXd::Zero(q, q)};
  for (int n = 0; n < q; ++n) {
    const double mz = n - s;
    m.z(n, n) = mz;
    m.number(n, n) = n;
    if (n + 1 < q) m.plus(n + 1, n) = std::sqrt(s * (s + 1) - mz * (mz + 1));
  }
  m.minus = m.plus.transpose();
  return m;
}

// J Σ_b m_b (S² - S_x·S_y) + h Σ n_x + J S Σ w_x n_x.
inline MatrixXd spin_hamiltonian(const magnonlab::Lattice& lat, int twice, double j, double h = 0.0,
                                 const std::vector<int>& weights = {}) {
  const int sites = static_cast<int>(lat.num_sites());
  const double s = 0.5 * twice;
  const auto m = spin_matrices(twice);
  const int dim = static_cast<int>(std::pow(twice + 1, sites));
  MatrixXd out = MatrixXd::Zero(dim, dim);
  for (const auto& b : lat.bonds()) {
    const int x = static_cast<int>(b.first), y = static_cast<int>(b.second);
    MatrixXd dot = on_site(m.z, x, sites) * on_site(m.z, y, sites) +
                   0.5 * (on_site(m.plus, x, sites) * on_site(m.minus, y, sites) +
                          on_site(m.minus, x, sites) * on_site(m.plus, y, sites));
    out += j * b.multiplicity * (s * s * MatrixXd::Identity(dim, dim) - dot);
  }
  for (int x = 0; x < sites; ++x) {
    const double w = weights.empty() ? 0.0 : weights[static_cast<std::size_t>(x)];
    out += (h + j * s * w) * on_site(m.number, x, sites);
  }
  return out;
}

// Literal ordered-pair boson form on the truncated space n <= 2S.
inline MatrixXd hp_hamiltonian(const magnonlab::Lattice& lat, int twice, double j, double h = 0.0,
                               const std::vector<int>& weights = {}) {
  const int sites = static_cast<int>(lat.num_sites());
  const int q = twice + 1;
  const double s = 0.5 * twice;
  MatrixXd a = MatrixXd::Zero(q, q), n = MatrixXd::Zero(q, q), root = MatrixXd::Zero(q, q);
  for (int k = 0; k < q; ++k) {
    if (k > 0) a(k - 1, k) = std::sqrt(k);
    n(k, k) = k;
    root(k, k) = std::sqrt(1.0 - k / (2.0 * s));
  }
  const MatrixXd ad = a.transpose();
  const int dim = static_cast<int>(std::pow(q, sites));
  MatrixXd out = MatrixXd::Zero(dim, dim);
  for (const auto& b : lat.bonds()) {
    for (int dir = 0; dir < 2; ++dir) {
      const int x = static_cast<int>(dir ? b.second : b.first), y = static_cast<int>(dir ? b.first : b.second);
      MatrixXd term = -on_site(ad, x, sites) * on_site(root, x, sites) * on_site(root, y, sites) * on_site(a, y, sites) +
                      on_site(n, x, sites) - on_site(n, x, sites) * on_site(n, y, sites) / (2.0 * s);
      out += j * s * b.multiplicity * term;
    }
  }
  for (int x = 0; x < sites; ++x) {
    const double w = weights.empty() ? 0.0 : weights[static_cast<std::size_t>(x)];
    out += (h + j * s * w) * on_site(n, x, sites);
  }
  return out;
}

inline std::size_t full_index(std::span<const std::uint8_t> occ, int q) {
  std::size_t idx = 0;
  for (auto v : occ) idx = idx * static_cast<std::size_t>(q) + v;
  return idx;
}

// Embeds a block operator over the full space (every sector present).
inline MatrixXd dense(const magnonlab::BlockOperator& op) {
  const auto& sp = op.space();
  const int q = sp.cap() + 1;
  const auto dim = static_cast<int>(std::pow(q, sp.sites()));
  MatrixXd out = MatrixXd::Zero(dim, dim);
  for (std::size_t nb = 0; nb < op.num_blocks(); ++nb) {
    const auto& basis = sp.sector(static_cast<int>(nb));
    const auto& blk = op.block(static_cast<int>(nb));
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t k = 0; k < basis.size(); ++k)
        out(static_cast<int>(full_index(basis.state(i), q)), static_cast<int>(full_index(basis.state(k), q))) =
            blk(static_cast<int>(i), static_cast<int>(k));
  }
  return out;
}

inline std::vector<double> eigenvalues(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

inline double log_z(const std::vector<double>& energies, double beta) {
  const double e0 = *std::min_element(energies.begin(), energies.end());
  double acc = 0.0;
  for (double e : energies) acc += std::exp(-beta * (e - e0));
  return std::log(acc) - beta * e0;
}

// Visits every occupation vector with Σ n_k <= cap (cap < 0: per-mode bound only).
inline void for_each_occupation(int modes, int per_mode_max, int cap, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> n(static_cast<std::size_t>(modes), 0);
  std::function<void(int, int)> rec = [&](int k, int used) {
    if (k == modes) {
      f(n);
      return;
    }
    for (int v = 0; v <= per_mode_max && (cap < 0 || used + v <= cap); ++v) {
      n[static_cast<std::size_t>(k)] = v;
      rec(k + 1, used + v);
    }
    n[static_cast<std::size_t>(k)] = 0;
  };
  rec(0, 0);
}

// Gauss–Legendre on geometric panels accumulating at 0; resolves the log
// singularity of the 1D magnon integrand there.
inline double integrate_graded(const std::function<double(double)>& f, double b) {
  static const double x[] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
                             -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
                             0.8650633666889845,  0.9739065285171717};
  static const double w[] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
                             0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                             0.1494513491505806, 0.0666713443086881};
  double total = 0.0;
  double hi = b;
  for (int p = 0; p < 200 && hi > 1e-300; ++p) {
    const double lo = hi * 0.5;
    const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
    for (int i = 0; i < 10; ++i) total += w[i] * half * f(mid + half * x[i]);
    hi = lo;
  }
  return total;
}

}  // namespace oracle
