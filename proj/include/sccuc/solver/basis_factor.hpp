#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace sccuc::solver {

/// LU factorization of a simplex basis with product-form updates between
/// refactorizations.
class BasisFactor {
 public:
  /// Returns false when the matrix is numerically singular.
  bool factorize(const Eigen::SparseMatrix<double>& basis);

  /// v <- B^-1 v
  void ftran(Eigen::VectorXd& v) const;
  /// v <- B^-T v
  void btran(Eigen::VectorXd& v) const;

  /// Column `pos` of B replaced by a; `alpha` = B^-1 a in the current basis.
  void update(int pos, const Eigen::VectorXd& alpha);

  std::size_t num_updates() const { return etas_.size(); }

 private:
  struct Eta {
    int pos = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };

  // mutable: SparseLU::transpose() is not const.
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

}  // namespace sccuc::solver
