#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <vector>

#include "magnonlab/occupation_basis.hpp"

namespace magnonlab {

/// Eigenvalues of every block, each sorted ascending.
struct BlockSpectrum {
  std::vector<int> numbers;
  std::vector<Eigen::VectorXd> eigenvalues;

  std::size_t dimension() const;
  double min() const;
  /// All eigenvalues, ascending; ties keep block order then index order.
  std::vector<double> sorted() const;
};

/// Real symmetric operator that conserves the total occupation number, stored
/// as one dense block per sector of a SectorSpace.
class BlockOperator {
 public:
  BlockOperator(std::shared_ptr<const SectorSpace> space, std::vector<Eigen::MatrixXd> blocks);

  const SectorSpace& space() const { return *space_; }
  std::shared_ptr<const SectorSpace> shared_space() const { return space_; }

  std::size_t num_blocks() const { return blocks_.size(); }
  /// Block b carries particle number b.
  const Eigen::MatrixXd& block(int number) const { return blocks_.at(static_cast<std::size_t>(number)); }
  const std::vector<Eigen::MatrixXd>& blocks() const { return blocks_; }
  std::size_t dimension() const { return space_->dimension(); }

  double max_asymmetry() const;
  /// Largest |entry| of (this - other) over all blocks. Spaces must agree.
  double max_abs_difference(const BlockOperator& other) const;

  BlockOperator operator-(const BlockOperator& other) const;
  BlockOperator operator+(const BlockOperator& other) const;
  BlockOperator scaled(double factor) const;

  /// Dense symmetric diagonalization of every block, parallel over blocks.
  BlockSpectrum spectrum(unsigned workers = 0) const;

 private:
  std::shared_ptr<const SectorSpace> space_;
  std::vector<Eigen::MatrixXd> blocks_;
};

/// Eigenvalues of a symmetric matrix, ascending.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

}  // namespace magnonlab
