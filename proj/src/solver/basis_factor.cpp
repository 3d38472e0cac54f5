#include "sccuc/solver/basis_factor.hpp"

#include <cmath>

namespace sccuc::solver {

bool BasisFactor::factorize(const Eigen::SparseMatrix<double>& basis) {
  etas_.clear();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  return lu_.info() == Eigen::Success;
}

void BasisFactor::ftran(Eigen::VectorXd& v) const {
  v = lu_.solve(v);
  for (const auto& e : etas_) {
    const double vp = v(e.pos) / e.pivot;
    v(e.pos) = vp;
    if (vp == 0.0) continue;
    for (std::size_t k = 0; k < e.index.size(); ++k) v(e.index[k]) -= e.value[k] * vp;
  }
}

void BasisFactor::btran(Eigen::VectorXd& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    const auto& e = *it;
    double s = v(e.pos);
    for (std::size_t k = 0; k < e.index.size(); ++k) s -= e.value[k] * v(e.index[k]);
    v(e.pos) = s / e.pivot;
  }
  v = lu_.transpose().solve(v);
}

void BasisFactor::update(int pos, const Eigen::VectorXd& alpha) {
  Eta e;
  e.pos = pos;
  e.pivot = alpha(pos);
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (i == pos || std::abs(alpha(i)) <= 1e-14) continue;
    e.index.push_back(static_cast<int>(i));
    e.value.push_back(alpha(i));
  }
  etas_.push_back(std::move(e));
}

}  // namespace sccuc::solver
