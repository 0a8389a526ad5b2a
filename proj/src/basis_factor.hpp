#pragma once

#include <memory>
#include <span>
#include <vector>

namespace relulab::detail {

struct SparseColumn {
  std::vector<int> rows;
  std::vector<double> vals;
};

// LU factorization of a basis matrix plus a product-form eta file for the
// updates since the last refactorization.
class BasisFactor {
 public:
  BasisFactor();
  ~BasisFactor();
  BasisFactor(BasisFactor&&) noexcept;
  BasisFactor& operator=(BasisFactor&&) noexcept;

  // Factorizes the m x m matrix whose k-th column is columns[k]. Returns
  // false when the matrix is numerically singular.
  bool factorize(int m, std::span<const SparseColumn* const> columns);

  // v <- B^{-1} v
  void ftran(std::vector<double>& v) const;
  // v <- B^{-T} v
  void btran(std::vector<double>& v) const;

  // Records the basis change at `row` given the ftran'd entering column.
  void push_eta(int row, const std::vector<double>& alpha);
  int eta_count() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int row = 0;
    double pivot_inv = 0.0;
    std::vector<int> idx;
    std::vector<double> val;
  };

  struct Lu;
  std::unique_ptr<Lu> lu_;
  std::vector<Eta> etas_;
  int m_ = 0;
};

}  // namespace relulab::detail
