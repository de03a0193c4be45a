#include "magnonlab/occupation_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace magnonlab {

namespace {

std::string budget_message(double dimension, double budget) {
  std::ostringstream os;
  os << "Hilbert space dimension " << dimension << " exceeds budget " << budget;
  return os.str();
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const auto max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

}  // namespace

BudgetExceeded::BudgetExceeded(double dimension, double budget)
    : std::runtime_error(budget_message(dimension, budget)), dimension_(dimension), budget_(budget) {}

double composition_count(std::size_t sites, int cap, int total) {
  if (total < 0 || cap < 0) return 0.0;
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  for (std::size_t s = 0; s < sites; ++s) {
    std::vector<double> next(ways.size(), 0.0);
    for (int t = 0; t <= total; ++t) {
      if (ways[static_cast<std::size_t>(t)] == 0.0) continue;
      for (int n = 0; n <= cap && t + n <= total; ++n)
        next[static_cast<std::size_t>(t + n)] += ways[static_cast<std::size_t>(t)];
    }
    ways.swap(next);
  }
  return ways[static_cast<std::size_t>(total)];
}

OccupationBasis::OccupationBasis(std::size_t sites, int cap, int total)
    : sites_(sites), cap_(cap), total_(total) {
  if (cap < 0 || cap > 255) throw std::invalid_argument("per-site cap must lie in [0, 255]");
  if (total < 0) throw std::invalid_argument("total occupation must be nonnegative");

  const auto width = static_cast<std::size_t>(total) + 1;
  counts_.assign((sites + 1) * width, 0);
  counts_[0] = 1;
  for (std::size_t r = 1; r <= sites; ++r)
    for (int t = 0; t <= total; ++t) {
      std::uint64_t c = 0;
      for (int n = 0; n <= std::min(cap, t); ++n) c = saturating_add(c, counts_[(r - 1) * width + static_cast<std::size_t>(t - n)]);
      counts_[r * width + static_cast<std::size_t>(t)] = c;
    }
  size_ = static_cast<std::size_t>(count(sites, total));
  states_.reserve(size_ * sites);

  std::vector<std::uint8_t> current(sites, 0);
  // Depth-first fill: position p takes the smallest feasible value first.
  auto fill = [&](auto&& self, std::size_t p, int remaining) -> void {
    if (p == sites) {
      if (remaining == 0) states_.insert(states_.end(), current.begin(), current.end());
      return;
    }
    for (int n = 0; n <= std::min(cap, remaining); ++n) {
      if (count(sites - p - 1, remaining - n) == 0) continue;
      current[p] = static_cast<std::uint8_t>(n);
      self(self, p + 1, remaining - n);
    }
  };
  fill(fill, 0, total);
}

std::uint64_t OccupationBasis::count(std::size_t remaining_sites, int remaining_total) const {
  if (remaining_total < 0 || remaining_total > total_) return 0;
  return counts_[remaining_sites * (static_cast<std::size_t>(total_) + 1) + static_cast<std::size_t>(remaining_total)];
}

std::optional<std::size_t> OccupationBasis::find(std::span<const std::uint8_t> occupation) const {
  if (occupation.size() != sites_) return std::nullopt;
  std::size_t rank = 0;
  int remaining = total_;
  for (std::size_t p = 0; p < sites_; ++p) {
    const int n = occupation[p];
    if (n > cap_ || n > remaining) return std::nullopt;
    for (int v = 0; v < n; ++v) rank += static_cast<std::size_t>(count(sites_ - p - 1, remaining - v));
    remaining -= n;
  }
  if (remaining != 0) return std::nullopt;
  return rank;
}

SectorSpace::SectorSpace(std::size_t sites, int cap, int max_number, double budget) : sites_(sites), cap_(cap) {
  const int full = static_cast<int>(sites) * cap;
  if (max_number < 0) throw std::invalid_argument("max particle number must be nonnegative");
  max_number = std::min(max_number, full);

  double dimension = 0.0;
  if (max_number == full) {
    dimension = std::pow(static_cast<double>(cap + 1), static_cast<double>(sites));
  } else {
    for (int n = 0; n <= max_number; ++n) dimension += composition_count(sites, cap, n);
  }
  if (dimension > budget) throw BudgetExceeded(dimension, budget);

  bases_.reserve(static_cast<std::size_t>(max_number) + 1);
  for (int n = 0; n <= max_number; ++n) bases_.emplace_back(sites, cap, n);
}

std::size_t SectorSpace::dimension() const {
  std::size_t total = 0;
  for (const auto& b : bases_) total += b.size();
  return total;
}

}  // namespace magnonlab
