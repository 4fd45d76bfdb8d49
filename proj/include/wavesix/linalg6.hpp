#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wavesix/error.hpp"
#include "wavesix/filtersim.hpp"
#include "wavesix/represent.hpp"
#include "wavesix/z6.hpp"

namespace wavesix {

class Mat6 {
 public:
  Mat6() = default;
  Mat6(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Mat6 identity(std::size_t n) {
    Mat6 m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Z6Value(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Z6Value& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Z6Value at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Z6Value> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool is_binary() const {
    for (auto v : data_) {
      if (v.value() > 1) return false;
    }
    return true;
  }

  friend bool operator==(const Mat6&, const Mat6&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Z6Value> data_;
};

// G over variables x_1..x_n (0..n-1) and y_1..y_n (n..2n-1) read off the
// Gram split: f = sum x_i y_i, g collects M[l][i] = 3, and h collects
// M[l][i] in {2, 4} with 4 h-coefficient = M[l][i] (mod 6).
inline FilterDecomposition dot_product_decomposition(const GramSplit& g) {
  FilterDecomposition d;
  const auto n = static_cast<std::uint32_t>(g.n);
  d.nvars = 2 * n;
  for (std::uint32_t i = 0; i < n; ++i) {
    d.f_terms[{i, n + i}] = Z6Value(1);
    for (auto l : g.s3[i]) d.g_terms[{l, n + i}] = Z6Value(1);
    for (auto l : g.s2[i]) d.h_terms[{l, n + i}] = Z6Value(g.at(l, i).value() == 4 ? 1 : 2);
  }
  return d;
}

// Exact mod-6 products through a valid bilinear representation. Linear forms
// use additions only; each output value costs t counted multiplications and
// one filter op that removes the 3g + 4h error terms.
class ProductEngine {
 public:
  explicit ProductEngine(const BilinearRep& rep)
      : rep_(&rep), gram_(gram(rep)), machine_(make_checked_machine(gram_)) {}

  const BilinearRep& rep() const { return *rep_; }
  const GramSplit& gram_split() const { return gram_; }
  const FilterMachine& machine() const { return machine_; }

  // Eq.-(3)-style forms: forms[j] = sum_i coeffs[i][j] v_i.
  std::vector<Z6Value> linear_forms(const BitMatrix& coeffs, std::span<const Z6Value> v,
                                    CostLedger& ledger) const {
    std::vector<Z6Value> forms(rep_->t());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      coeffs.for_each_set(i, [&](std::size_t j) { forms[j] = z6_add(forms[j], v[i], ledger); });
    }
    return forms;
  }

  Z6Value dot(std::span<const Z6Value> x, std::span<const Z6Value> y, CostLedger& ledger) const {
    require_binary_vector(x, "x");
    require_binary_vector(y, "y");
    const auto xf = linear_forms(rep_->b(), x, ledger);
    const auto yf = linear_forms(rep_->c(), y, ledger);
    return combine(xf, yf, x, y, ledger);
  }

  std::vector<Z6Value> matvec(const Mat6& a, std::span<const Z6Value> y, CostLedger& ledger) const {
    if (a.cols() != rep_->n()) {
      throw Error(ErrorKind::DimensionMismatch, "matrix has " + std::to_string(a.cols()) +
                                                    " columns, representation n = " + std::to_string(rep_->n()));
    }
    require_binary_matrix(a, "A");
    require_binary_vector(y, "y");
    const auto yf = linear_forms(rep_->c(), y, ledger);
    std::vector<Z6Value> out(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      const auto xf = linear_forms(rep_->b(), a.row(r), ledger);
      out[r] = combine(xf, yf, a.row(r), y, ledger);
    }
    return out;
  }

  Mat6 matmul(const Mat6& a, const Mat6& b, CostLedger& ledger) const {
    const std::size_t n = rep_->n();
    if (a.cols() != n || b.rows() != n) {
      throw Error(ErrorKind::DimensionMismatch, "inner dimension must equal representation n = " + std::to_string(n));
    }
    require_binary_matrix(a, "A");
    require_binary_matrix(b, "B");
    std::vector<std::vector<Z6Value>> row_forms(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) row_forms[r] = linear_forms(rep_->b(), a.row(r), ledger);
    std::vector<std::vector<Z6Value>> col_vals(b.cols(), std::vector<Z6Value>(n));
    std::vector<std::vector<Z6Value>> col_forms(b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
      for (std::size_t i = 0; i < n; ++i) col_vals[c][i] = b.at(i, c);
      col_forms[c] = linear_forms(rep_->c(), col_vals[c], ledger);
    }
    Mat6 out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = 0; c < b.cols(); ++c) {
        out.at(r, c) = combine(row_forms[r], col_forms[c], a.row(r), col_vals[c], ledger);
      }
    }
    return out;
  }

 private:
  static FilterMachine make_checked_machine(const GramSplit& g) {
    if (!g.valid) {
      const auto& v = *g.first_violation;
      throw Error(ErrorKind::InvalidRepresentation, "Gram entry M[" + std::to_string(v.row + 1) + "][" +
                                                        std::to_string(v.col + 1) + "] = " +
                                                        std::to_string(v.value.value()));
    }
    return make_filter_machine(dot_product_decomposition(g));
  }

  void require_binary_vector(std::span<const Z6Value> v, const char* name) const {
    if (v.size() != rep_->n()) {
      throw Error(ErrorKind::DimensionMismatch, std::string(name) + " has length " + std::to_string(v.size()) +
                                                    ", representation n = " + std::to_string(rep_->n()));
    }
    for (auto e : v) {
      if (e.value() > 1) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must have 0/1 entries");
    }
  }

  static void require_binary_matrix(const Mat6& m, const char* name) {
    if (!m.is_binary()) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must have 0/1 entries");
  }

  // t counted products, then one filter op at zeta = (x, y).
  Z6Value combine(std::span<const Z6Value> xf, std::span<const Z6Value> yf, std::span<const Z6Value> x,
                  std::span<const Z6Value> y, CostLedger& ledger) const {
    Z6Value acc;
    for (std::size_t j = 0; j < xf.size(); ++j) {
      const Z6Value p = z6_mul(xf[j], yf[j], ledger);
      acc = j == 0 ? p : z6_add(acc, p, ledger);
    }
    std::vector<Z6Value> zeta(x.begin(), x.end());
    zeta.insert(zeta.end(), y.begin(), y.end());
    return machine_.filter(acc, zeta, ledger);
  }

  const BilinearRep* rep_;
  GramSplit gram_;
  FilterMachine machine_;
};

inline Z6Value dot_rep(std::span<const Z6Value> x, std::span<const Z6Value> y, const BilinearRep& rep,
                       CostLedger& ledger) {
  return ProductEngine(rep).dot(x, y, ledger);
}

inline std::vector<Z6Value> matvec_rep(const Mat6& a, std::span<const Z6Value> y, const BilinearRep& rep,
                                       CostLedger& ledger) {
  return ProductEngine(rep).matvec(a, y, ledger);
}

inline Mat6 matmul_rep(const Mat6& a, const Mat6& b, const BilinearRep& rep, CostLedger& ledger) {
  return ProductEngine(rep).matmul(a, b, ledger);
}

// Schoolbook baselines: n, m*n and m*n*p counted multiplications.
inline Z6Value naive_dot(std::span<const Z6Value> x, std::span<const Z6Value> y, CostLedger& ledger) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "dot operands differ in length");
  Z6Value acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Z6Value p = z6_mul(x[i], y[i], ledger);
    acc = i == 0 ? p : z6_add(acc, p, ledger);
  }
  return acc;
}

inline std::vector<Z6Value> naive_matvec(const Mat6& a, std::span<const Z6Value> y, CostLedger& ledger) {
  if (a.cols() != y.size()) throw Error(ErrorKind::DimensionMismatch, "matrix/vector shapes disagree");
  std::vector<Z6Value> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = naive_dot(a.row(r), y, ledger);
  return out;
}

inline Mat6 naive_matmul(const Mat6& a, const Mat6& b, CostLedger& ledger) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix shapes disagree");
  Mat6 out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) {
      Z6Value acc;
      for (std::size_t i = 0; i < a.cols(); ++i) {
        const Z6Value p = z6_mul(a.at(r, i), b.at(i, c), ledger);
        acc = i == 0 ? p : z6_add(acc, p, ledger);
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

}  // namespace wavesix
