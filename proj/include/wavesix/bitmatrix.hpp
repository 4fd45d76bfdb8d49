#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wavesix/error.hpp"

namespace wavesix {

// Dense 0/1 matrix, rows packed into 64-bit words (bit c of a row lives in
// word c / 64, position c % 64). Padding bits past `cols` are always zero.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64), words_(rows * words_per_row_) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return words_per_row_; }

  bool get(std::size_t r, std::size_t c) const {
    return (words_[r * words_per_row_ + c / 64] >> (c % 64)) & 1U;
  }

  void set(std::size_t r, std::size_t c, bool v) {
    auto& w = words_[r * words_per_row_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = v ? (w | bit) : (w & ~bit);
  }

  void flip(std::size_t r, std::size_t c) { words_[r * words_per_row_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

  std::span<const std::uint64_t> row(std::size_t r) const {
    return {words_.data() + r * words_per_row_, words_per_row_};
  }

  std::size_t row_popcount(std::size_t r) const {
    std::size_t total = 0;
    for (auto w : row(r)) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  // Number of columns c where both this(r, c) and other(s, c) are set.
  std::size_t and_popcount(std::size_t r, const BitMatrix& other, std::size_t s) const {
    auto a = row(r);
    auto b = other.row(s);
    std::size_t total = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) total += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
    return total;
  }

  // Calls fn(c) for every set column c of row r, in increasing order.
  template <typename Fn>
  void for_each_set(std::size_t r, Fn&& fn) const {
    auto words = row(r);
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits != 0) {
        fn(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::string row_string(std::size_t r) const {
    std::string s(cols_, '0');
    for (std::size_t c = 0; c < cols_; ++c) {
      if (get(r, c)) s[c] = '1';
    }
    return s;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace wavesix
