#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnonlab {

/// Raised when a requested Hilbert space exceeds the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(double dimension, double budget);
  double dimension() const { return dimension_; }
  double budget() const { return budget_; }

 private:
  double dimension_;
  double budget_;
};

inline constexpr double kDefaultDimensionBudget = 2.0e5;

/// Number of strings (n_1..n_sites), 0 <= n_x <= cap, with Σ n_x = total.
/// Returned as a double so that it can be compared with a budget before
/// anything is allocated.
double composition_count(std::size_t sites, int cap, int total);

/// All occupation strings with per-site cap and fixed total, enumerated
/// lexicographically (site 0 most significant, smaller occupations first).
class OccupationBasis {
 public:
  OccupationBasis(std::size_t sites, int cap, int total);

  std::size_t size() const { return size_; }
  std::size_t sites() const { return sites_; }
  int cap() const { return cap_; }
  int total() const { return total_; }

  std::span<const std::uint8_t> state(std::size_t i) const {
    return {states_.data() + i * sites_, sites_};
  }

  /// Lexicographic rank of an occupation string, or nullopt when the string
  /// violates the cap or the total.
  std::optional<std::size_t> find(std::span<const std::uint8_t> occupation) const;

 private:
  std::uint64_t count(std::size_t remaining_sites, int remaining_total) const;

  std::size_t sites_;
  int cap_;
  int total_;
  std::size_t size_ = 0;
  std::vector<std::uint8_t> states_;
  // counts_[r * (total_ + 1) + t]: strings of length r summing to t.
  std::vector<std::uint64_t> counts_;
};

/// The direct sum over conserved particle numbers N = min_number..max_number
/// of fixed-N occupation bases on `sites` sites with per-site cap.
class SectorSpace {
 public:
  SectorSpace(std::size_t sites, int cap, int max_number, double budget = kDefaultDimensionBudget);
  SectorSpace(std::size_t sites, int cap, double budget = kDefaultDimensionBudget)
      : SectorSpace(sites, cap, static_cast<int>(sites) * cap, budget) {}

  std::size_t sites() const { return sites_; }
  int cap() const { return cap_; }
  int max_number() const { return static_cast<int>(bases_.size()) - 1; }
  std::size_t num_sectors() const { return bases_.size(); }
  const OccupationBasis& sector(int number) const { return bases_.at(static_cast<std::size_t>(number)); }
  std::size_t dimension() const;

 private:
  std::size_t sites_;
  int cap_;
  std::vector<OccupationBasis> bases_;
};

}  // namespace magnonlab
