#pragma once

// Shared helpers for the test suites: brute-force reference implementations
// (deliberately simple and independent of the library's algorithms) plus
// small builders and a temporary-directory guard for file-format tests.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "bbone/bipartite.hpp"

namespace testutil {

/// Pr(X >= t) by enumerating all 2^n outcomes of the independent Bernoulli
/// draws. Exponential, so keep n <= ~20.
inline double brute_force_upper_tail(const std::vector<double>& probs, int t) {
  const std::size_t n = probs.size();
  double total = 0.0;
  for (std::uint32_t code = 0; code < (1u << n); ++code) {
    int successes = 0;
    double mass = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (code & (1u << k)) {
        mass *= probs[k];
        ++successes;
      } else {
        mass *= 1.0 - probs[k];
      }
    }
    if (successes >= t) total += mass;
  }
  return total;
}

struct ScanResult {
  std::uint64_t cardinality = 0;
  bbone::Matrix<std::uint64_t> ones{0, 0};
};

/// Counts members of a matrix space by scanning every one of the 2^(r*c)
/// binary matrices and checking margins and constraints directly. Usable up
/// to r*c = 20 or so; the point is that it shares no code with the
/// backtracking enumerator.
inline ScanResult exhaustive_scan(const std::vector<int>& row_margins,
                                  const std::vector<int>& col_margins,
                                  const bbone::ConstraintMask& mask) {
  const std::size_t r = row_margins.size();
  const std::size_t c = col_margins.size();
  if (r * c > 24) throw std::invalid_argument("exhaustive_scan: matrix too large");
  ScanResult result;
  result.ones = bbone::Matrix<std::uint64_t>(r, c, 0);
  for (std::uint64_t code = 0; code < (1ull << (r * c)); ++code) {
    bool ok = true;
    std::vector<int> rs(r, 0), cs(c, 0);
    for (std::size_t i = 0; ok && i < r; ++i) {
      for (std::size_t k = 0; ok && k < c; ++k) {
        const int bit = (code >> (i * c + k)) & 1;
        if (mask(i, k) == bbone::CellState::Prohibited && bit == 1) ok = false;
        if (mask(i, k) == bbone::CellState::Required && bit == 0) ok = false;
        rs[i] += bit;
        cs[k] += bit;
      }
    }
    if (!ok || rs != row_margins || cs != col_margins) continue;
    ++result.cardinality;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < c; ++k)
        result.ones(i, k) += (code >> (i * c + k)) & 1;
  }
  return result;
}

inline std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

/// Incidence matrix from rows of 0/1 with default labels a1../p1.. .
inline bbone::IncidenceMatrix make_matrix(
    std::initializer_list<std::initializer_list<int>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = rows.begin()->size();
  bbone::Matrix<std::uint8_t> cells(r, c, 0);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t k = 0;
    for (int v : row) cells(i, k++) = static_cast<std::uint8_t>(v);
    ++i;
  }
  return bbone::IncidenceMatrix(labels("a", r), labels("p", c), cells);
}

inline bbone::ConstraintMask all_free(std::size_t r, std::size_t c) {
  return bbone::ConstraintMask{
      bbone::Matrix<bbone::CellState>(r, c, bbone::CellState::Free)};
}

/// Mask with the listed (row, col, state) overrides on an all-free base.
inline bbone::ConstraintMask mask_with(
    std::size_t r, std::size_t c,
    std::initializer_list<std::tuple<std::size_t, std::size_t, bbone::CellState>> cells) {
  bbone::Matrix<bbone::CellState> states(r, c, bbone::CellState::Free);
  for (const auto& [i, k, state] : cells) states(i, k) = state;
  return bbone::ConstraintMask{std::move(states)};
}

/// Unique writable directory, removed (recursively) on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "bbtestXXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
