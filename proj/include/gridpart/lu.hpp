#ifndef GRIDPART_LU_HPP
#define GRIDPART_LU_HPP

#include <utility>
#include <vector>

namespace gridpart {

// Sparse LU factorization of a simplex basis with partial pivoting.
// Left-looking elimination with a singleton peel pre-ordering; simplex
// bases from network LPs are mostly triangular, so fill stays small.
class BasisLu {
 public:
  using SparseCol = std::vector<std::pair<int, double>>;  // (row, value)

  // Factorize the m x m matrix whose k-th column is cols[k].
  // Returns false when numerically singular.
  bool factorize(int m, const std::vector<SparseCol>& cols);

  // Solve B x = b. Input b indexed by row; output indexed by basis position.
  void ftran(std::vector<double>& b) const;

  // Solve B^T y = c. Input c indexed by basis position; output by row.
  void btran(std::vector<double>& c) const;

  int size() const { return m_; }
  long long fill_nnz() const;

 private:
  int m_ = 0;
  std::vector<int> order_;        // column processed at step k
  std::vector<int> prow_;         // pivot row of step k
  std::vector<int> step_of_row_;  // inverse of prow_
  std::vector<double> pdiag_;     // pivot values
  std::vector<SparseCol> lcols_;  // below-pivot multipliers (orig row, mult)
  std::vector<SparseCol> ucols_;  // (earlier step, value) per column
};

}  // namespace gridpart

#endif  // GRIDPART_LU_HPP
