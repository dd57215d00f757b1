#include "gridpart/lu.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace gridpart {

namespace {
constexpr double kPivotAbsTol = 1e-11;
constexpr double kPivotRelTol = 1e-3;
}  // namespace

bool BasisLu::factorize(int m, const std::vector<SparseCol>& cols) {
  m_ = m;
  order_.assign(m, -1);
  prow_.assign(m, -1);
  step_of_row_.assign(m, -1);
  pdiag_.assign(m, 0.0);
  lcols_.assign(m, {});
  ucols_.assign(m, {});

  // ---- structural pre-ordering ----------------------------------------
  // Forward peel: rows appearing in exactly one column fix that column at
  // the front. Backward peel: columns with one remaining row go to the
  // back. What is left (the bump) keeps natural order in the middle.
  std::vector<int> row_count(m, 0);
  std::vector<std::vector<int>> rows_cols(m);
  for (int c = 0; c < m; ++c)
    for (const auto& [r, v] : cols[c]) {
      (void)v;
      ++row_count[r];
      rows_cols[r].push_back(c);
    }

  std::vector<int> forced_row(m, -1);
  std::vector<char> col_assigned(m, 0), row_used(m, 0);
  int front = 0, back = m - 1;

  {
    std::queue<int> q;
    for (int r = 0; r < m; ++r)
      if (row_count[r] == 1) q.push(r);
    while (!q.empty()) {
      int r = q.front();
      q.pop();
      if (row_used[r] || row_count[r] != 1) continue;
      int col = -1;
      for (int c : rows_cols[r])
        if (!col_assigned[c]) {
          col = c;
          break;
        }
      if (col < 0) continue;
      order_[front++] = col;
      col_assigned[col] = 1;
      forced_row[col] = r;
      row_used[r] = 1;
      for (const auto& [rr, vv] : cols[col]) {
        (void)vv;
        if (--row_count[rr] == 1 && !row_used[rr]) q.push(rr);
      }
    }
  }
  {
    std::vector<int> col_active(m, 0);
    std::queue<int> q;
    for (int c = 0; c < m; ++c) {
      if (col_assigned[c]) continue;
      for (const auto& [r, v] : cols[c]) {
        (void)v;
        if (!row_used[r]) ++col_active[c];
      }
      if (col_active[c] == 1) q.push(c);
    }
    while (!q.empty()) {
      int c = q.front();
      q.pop();
      if (col_assigned[c] || col_active[c] != 1) continue;
      int row = -1;
      for (const auto& [r, v] : cols[c]) {
        (void)v;
        if (!row_used[r]) {
          row = r;
          break;
        }
      }
      if (row < 0) continue;
      order_[back--] = c;
      col_assigned[c] = 1;
      forced_row[c] = row;
      row_used[row] = 1;
      for (int cc : rows_cols[row])
        if (!col_assigned[cc] && --col_active[cc] == 1) q.push(cc);
    }
  }
  for (int c = 0; c < m; ++c)
    if (!col_assigned[c]) order_[front++] = c;
  // Backward-peeled columns sit at the end already; 'front' met 'back'.

  // ---- left-looking elimination ----------------------------------------
  std::vector<double> w(m, 0.0);
  std::vector<int> touched;
  touched.reserve(64);
  std::vector<char> seen_step(m, 0);
  std::priority_queue<int, std::vector<int>, std::greater<int>> heap;

  for (int k = 0; k < m; ++k) {
    const int c = order_[k];
    for (const auto& [r, v] : cols[c]) {
      w[r] = v;
      touched.push_back(r);
      const int s = step_of_row_[r];
      if (s >= 0 && !seen_step[s]) {
        seen_step[s] = 1;
        heap.push(s);
      }
    }
    auto& ucol = ucols_[k];
    while (!heap.empty()) {
      const int s = heap.top();
      heap.pop();
      seen_step[s] = 0;
      const double t = w[prow_[s]];
      if (t == 0.0) continue;
      ucol.push_back({s, t});
      w[prow_[s]] = 0.0;  // moved into U
      for (const auto& [i, mult] : lcols_[s]) {
        if (w[i] == 0.0) touched.push_back(i);
        w[i] -= t * mult;
        const int si = step_of_row_[i];
        if (si >= 0 && !seen_step[si]) {
          seen_step[si] = 1;
          heap.push(si);
        }
      }
    }

    // Pivot among still-unpivoted rows.
    int piv_row = -1;
    double piv_val = 0.0, col_max = 0.0;
    for (int r : touched) {
      if (step_of_row_[r] >= 0 || w[r] == 0.0) continue;
      col_max = std::max(col_max, std::fabs(w[r]));
    }
    const int want = forced_row[c];
    if (want >= 0 && step_of_row_[want] < 0 &&
        std::fabs(w[want]) >= std::max(kPivotAbsTol, kPivotRelTol * col_max)) {
      piv_row = want;
      piv_val = w[want];
    } else {
      for (int r : touched) {
        if (step_of_row_[r] >= 0 || w[r] == 0.0) continue;
        const double a = std::fabs(w[r]);
        if (a > std::fabs(piv_val) ||
            (a == std::fabs(piv_val) && piv_row >= 0 && r < piv_row)) {
          piv_val = w[r];
          piv_row = r;
        }
      }
    }
    if (piv_row < 0 || std::fabs(piv_val) < kPivotAbsTol) {
      for (int r : touched) w[r] = 0.0;
      touched.clear();
      while (!heap.empty()) {
        seen_step[heap.top()] = 0;
        heap.pop();
      }
      return false;  // singular
    }
    prow_[k] = piv_row;
    step_of_row_[piv_row] = k;
    pdiag_[k] = piv_val;
    auto& lcol = lcols_[k];
    for (int r : touched) {
      if (w[r] != 0.0 && step_of_row_[r] < 0)
        lcol.push_back({r, w[r] / piv_val});
      w[r] = 0.0;
    }
    touched.clear();
    std::sort(lcol.begin(), lcol.end());
  }
  return true;
}

void BasisLu::ftran(std::vector<double>& b) const {
  // Forward: z_k = value at pivot row after earlier eliminations.
  std::vector<double> z(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    const double t = b[prow_[k]];
    z[k] = t;
    if (t != 0.0)
      for (const auto& [i, mult] : lcols_[k]) b[i] -= t * mult;
  }
  // Backward: U x = z in step space.
  for (int k = m_ - 1; k >= 0; --k) {
    const double xk = z[k] / pdiag_[k];
    z[k] = xk;
    if (xk != 0.0)
      for (const auto& [ks, u] : ucols_[k]) z[ks] -= u * xk;
  }
  // Scatter to basis positions.
  for (int k = 0; k < m_; ++k) b[order_[k]] = z[k];
}

void BasisLu::btran(std::vector<double>& c) const {
  // Gather by column order, then U^T s = c_q forward.
  std::vector<double> s(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    double acc = c[order_[k]];
    for (const auto& [ks, u] : ucols_[k]) acc -= u * s[ks];
    s[k] = acc / pdiag_[k];
  }
  // L^T y = s backward, y in row space.
  std::fill(c.begin(), c.end(), 0.0);
  for (int k = m_ - 1; k >= 0; --k) {
    double acc = s[k];
    for (const auto& [i, mult] : lcols_[k]) acc -= mult * c[i];
    c[prow_[k]] = acc;
  }
}

long long BasisLu::fill_nnz() const {
  long long n = m_;
  for (const auto& c : lcols_) n += static_cast<long long>(c.size());
  for (const auto& c : ucols_) n += static_cast<long long>(c.size());
  return n;
}

}  // namespace gridpart
