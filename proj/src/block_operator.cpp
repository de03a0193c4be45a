#include "magnonlab/block_operator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

#include "magnonlab/numeric.hpp"

namespace magnonlab {

std::size_t BlockSpectrum::dimension() const {
  std::size_t n = 0;
  for (const auto& e : eigenvalues) n += static_cast<std::size_t>(e.size());
  return n;
}

double BlockSpectrum::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : eigenvalues)
    if (e.size() > 0) m = std::min(m, e.minCoeff());
  return m;
}

std::vector<double> BlockSpectrum::sorted() const {
  std::vector<double> all;
  all.reserve(dimension());
  for (const auto& e : eigenvalues) all.insert(all.end(), e.data(), e.data() + e.size());
  std::stable_sort(all.begin(), all.end());
  return all;
}

BlockOperator::BlockOperator(std::shared_ptr<const SectorSpace> space, std::vector<Eigen::MatrixXd> blocks)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
  if (!space_) throw std::invalid_argument("BlockOperator needs a sector space");
  if (blocks_.size() != space_->num_sectors()) throw std::invalid_argument("BlockOperator: block count mismatch");
  for (std::size_t n = 0; n < blocks_.size(); ++n) {
    const auto dim = static_cast<Eigen::Index>(space_->sector(static_cast<int>(n)).size());
    if (blocks_[n].rows() != dim || blocks_[n].cols() != dim)
      throw std::invalid_argument("BlockOperator: block shape does not match its sector");
  }
}

double BlockOperator::max_asymmetry() const {
  double worst = 0.0;
  for (const auto& b : blocks_)
    if (b.size() > 0) worst = std::max(worst, (b - b.transpose()).cwiseAbs().maxCoeff());
  return worst;
}

double BlockOperator::max_abs_difference(const BlockOperator& other) const {
  if (other.blocks_.size() != blocks_.size()) throw std::invalid_argument("operators live on different spaces");
  double worst = 0.0;
  for (std::size_t n = 0; n < blocks_.size(); ++n) {
    if (blocks_[n].rows() != other.blocks_[n].rows()) throw std::invalid_argument("operators live on different spaces");
    if (blocks_[n].size() > 0) worst = std::max(worst, (blocks_[n] - other.blocks_[n]).cwiseAbs().maxCoeff());
  }
  return worst;
}

BlockOperator BlockOperator::operator-(const BlockOperator& other) const {
  std::vector<Eigen::MatrixXd> out(blocks_.size());
  for (std::size_t n = 0; n < blocks_.size(); ++n) out[n] = blocks_[n] - other.blocks_.at(n);
  return BlockOperator(space_, std::move(out));
}

BlockOperator BlockOperator::operator+(const BlockOperator& other) const {
  std::vector<Eigen::MatrixXd> out(blocks_.size());
  for (std::size_t n = 0; n < blocks_.size(); ++n) out[n] = blocks_[n] + other.blocks_.at(n);
  return BlockOperator(space_, std::move(out));
}

BlockOperator BlockOperator::scaled(double factor) const {
  std::vector<Eigen::MatrixXd> out(blocks_.size());
  for (std::size_t n = 0; n < blocks_.size(); ++n) out[n] = factor * blocks_[n];
  return BlockOperator(space_, std::move(out));
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return Eigen::VectorXd();
  if (m.rows() == 1) return Eigen::VectorXd::Constant(1, m(0, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  return solver.eigenvalues();
}

BlockSpectrum BlockOperator::spectrum(unsigned workers) const {
  BlockSpectrum out;
  out.numbers.resize(blocks_.size());
  out.eigenvalues.resize(blocks_.size());
  parallel_for(
      blocks_.size(),
      [&](std::size_t n) {
        out.numbers[n] = static_cast<int>(n);
        out.eigenvalues[n] = symmetric_eigenvalues(blocks_[n]);
      },
      workers);
  return out;
}

}  // namespace magnonlab
