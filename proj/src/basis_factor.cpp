#include "basis_factor.hpp"

#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace relulab::detail {

struct BasisFactor::Lu {
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> solver;
};

BasisFactor::BasisFactor() : lu_(std::make_unique<Lu>()) {}
BasisFactor::~BasisFactor() = default;
BasisFactor::BasisFactor(BasisFactor&&) noexcept = default;
BasisFactor& BasisFactor::operator=(BasisFactor&&) noexcept = default;

bool BasisFactor::factorize(int m, std::span<const SparseColumn* const> columns) {
  m_ = m;
  etas_.clear();
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < m; ++k) {
    const SparseColumn& c = *columns[k];
    for (std::size_t e = 0; e < c.rows.size(); ++e) triplets.emplace_back(c.rows[e], k, c.vals[e]);
  }
  lu_ = std::make_unique<Lu>();
  if (m == 0) return true;
  lu_->matrix.resize(m, m);
  lu_->matrix.setFromTriplets(triplets.begin(), triplets.end());
  lu_->matrix.makeCompressed();
  lu_->solver.analyzePattern(lu_->matrix);
  lu_->solver.factorize(lu_->matrix);
  if (lu_->solver.info() != Eigen::Success) return false;

  // SparseLU accepts tiny pivots; reject bases that are singular in practice.
  const double log_det = lu_->solver.logAbsDeterminant();
  return std::isfinite(log_det);
}

void BasisFactor::ftran(std::vector<double>& v) const {
  if (m_ == 0) return;
  Eigen::Map<Eigen::VectorXd> in(v.data(), m_);
  Eigen::VectorXd x = lu_->solver.solve(in);
  in = x;
  for (const Eta& e : etas_) {
    const double t = v[e.row];
    if (t == 0.0) continue;
    v[e.row] = t * e.pivot_inv;
    for (std::size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] += e.val[k] * t;
  }
}

void BasisFactor::btran(std::vector<double>& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row] * it->pivot_inv;
    for (std::size_t k = 0; k < it->idx.size(); ++k) s += it->val[k] * v[it->idx[k]];
    v[it->row] = s;
  }
  Eigen::Map<Eigen::VectorXd> in(v.data(), m_);
  Eigen::VectorXd x = lu_->solver.transpose().solve(in);
  in = x;
}

void BasisFactor::push_eta(int row, const std::vector<double>& alpha) {
  Eta e;
  e.row = row;
  const double p = alpha[row];
  e.pivot_inv = 1.0 / p;
  for (int i = 0; i < m_; ++i) {
    if (i == row || alpha[i] == 0.0) continue;
    const double val = -alpha[i] / p;
    if (std::abs(val) > 1e-14) {
      e.idx.push_back(i);
      e.val.push_back(val);
    }
  }
  etas_.push_back(std::move(e));
}

}  // namespace relulab::detail
