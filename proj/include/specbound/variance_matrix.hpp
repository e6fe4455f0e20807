#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace specbound {

enum class Validation { strict, repair };

// Symmetric, entrywise nonnegative N x N variance profile S_xy = E|H_xy|^2.
// Dense row-major storage; immutable once constructed.
class VarianceMatrix {
 public:
  // Strict mode rejects asymmetric or negative input with a ParseError naming
  // the offending indices. Repair mode averages S and S^T, clamps negatives to
  // zero, and records a message per repaired entry in repairs().
  VarianceMatrix(std::size_t n, std::vector<double> entries,
                 Validation mode = Validation::strict);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t x, std::size_t y) const noexcept {
    return entries_[x * n_ + y];
  }
  std::span<const double> row(std::size_t x) const noexcept {
    return {entries_.data() + x * n_, n_};
  }
  std::span<const double> entries() const noexcept { return entries_; }
  const std::vector<std::string>& repairs() const noexcept { return repairs_; }

  // out = S * in. Rows are reduced left to right so results are reproducible.
  void multiply(std::span<const double> in, std::span<double> out) const;

  VarianceMatrix scaled(double factor) const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
  std::vector<std::string> repairs_;
};

// Nonnegative M x N matrix without symmetry, used as a Gram variance profile.
struct RectMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;  // row-major

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries[i * cols + j];
  }
};

struct NormSequence {
  double norm_s = 0.0;    // ||S||, max row sum
  std::vector<double> z;  // z[j-1] = ||S^j|| / ||S||^j for j = 1..J

  std::size_t J() const noexcept { return z.size(); }
  double operator[](std::size_t j) const { return z.at(j - 1); }
};

// Max-row-sum norm; no absolute values needed for nonnegative entries.
double inf_norm(const VarianceMatrix& s);

// z_1..z_J without forming S^j: since S >= 0 entrywise, ||S^j|| is the largest
// entry of S^j 1. Each step is normalized by ||S|| to avoid overflow.
// Throws ZeroMatrix when ||S|| == 0.
NormSequence norm_sequence(const VarianceMatrix& s, std::size_t J);

// [[0, S], [S^T, 0]]. The bound obtained for the result must be squared to
// bound the Gram matrix XX^*.
VarianceMatrix gram_linearize(const RectMatrix& s);

namespace profiles {

// S_xy = 1/N.
VarianceMatrix wigner(std::size_t n);

// S_ij = exp((i+j)/N) / N with zero-based i, j.
VarianceMatrix exponential(std::size_t n);

// Symmetric profile with iid uniform [0,1) entries on and above the diagonal.
VarianceMatrix random_uniform(std::size_t n, std::uint64_t seed);

RectMatrix random_rect(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace profiles

// Text formats:
//   plain: first token N, then N rows of N whitespace-separated values
//   csv:   header line "n=N", then N comma-separated rows
// Gram files use "M N" (plain) or "m=M,n=N" (csv) headers followed by M rows.
VarianceMatrix read_variance_matrix(std::istream& in,
                                    Validation mode = Validation::strict);
VarianceMatrix load_variance_matrix(const std::filesystem::path& path,
                                    Validation mode = Validation::strict);
RectMatrix read_rect_matrix(std::istream& in);
RectMatrix load_rect_matrix(const std::filesystem::path& path);

void write_variance_matrix(std::ostream& out, const VarianceMatrix& s);

}  // namespace specbound
