#include "specbound/variance_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "specbound/errors.hpp"

namespace specbound {

namespace {

std::string describe_entry(std::size_t x, std::size_t y, double v) {
  std::ostringstream os;
  os << "S[" << x << "][" << y << "] = " << v;
  return os.str();
}

}  // namespace

VarianceMatrix::VarianceMatrix(std::size_t n, std::vector<double> entries,
                               Validation mode)
    : n_(n), entries_(std::move(entries)) {
  if (n_ == 0) throw ParseError("variance matrix must have n >= 1");
  if (entries_.size() != n_ * n_) {
    throw ParseError("expected " + std::to_string(n_ * n_) + " entries, got " +
                     std::to_string(entries_.size()));
  }
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t y = 0; y < n_; ++y) {
      double& v = entries_[x * n_ + y];
      if (!std::isfinite(v)) {
        throw ParseError("non-finite entry " + describe_entry(x, y, v));
      }
      if (v < 0.0) {
        if (mode == Validation::strict) {
          throw ParseError("negative entry " + describe_entry(x, y, v));
        }
        repairs_.push_back("clamped negative " + describe_entry(x, y, v));
        v = 0.0;
      }
    }
  }
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t y = x + 1; y < n_; ++y) {
      double& a = entries_[x * n_ + y];
      double& b = entries_[y * n_ + x];
      if (a == b) continue;
      if (mode == Validation::strict) {
        throw ParseError("asymmetric entries " + describe_entry(x, y, a) +
                         " vs " + describe_entry(y, x, b));
      }
      repairs_.push_back("symmetrized " + describe_entry(x, y, a) + " and " +
                         describe_entry(y, x, b));
      const double mean = 0.5 * (a + b);
      a = mean;
      b = mean;
    }
  }
}

void VarianceMatrix::multiply(std::span<const double> in,
                              std::span<double> out) const {
  for (std::size_t x = 0; x < n_; ++x) {
    const double* r = entries_.data() + x * n_;
    double acc = 0.0;
    for (std::size_t y = 0; y < n_; ++y) acc += r[y] * in[y];
    out[x] = acc;
  }
}

VarianceMatrix VarianceMatrix::scaled(double factor) const {
  std::vector<double> e(entries_);
  for (double& v : e) v *= factor;
  return VarianceMatrix(n_, std::move(e));
}

double inf_norm(const VarianceMatrix& s) {
  double best = 0.0;
  for (std::size_t x = 0; x < s.size(); ++x) {
    double acc = 0.0;
    for (double v : s.row(x)) acc += v;
    best = std::max(best, acc);
  }
  return best;
}

NormSequence norm_sequence(const VarianceMatrix& s, std::size_t J) {
  if (J == 0) throw DomainError("norm_sequence requires J >= 1");
  NormSequence out;
  out.norm_s = inf_norm(s);
  if (out.norm_s == 0.0) throw ZeroMatrix();

  const std::size_t n = s.size();
  std::vector<double> u(n, 1.0), next(n);
  out.z.reserve(J);
  for (std::size_t j = 1; j <= J; ++j) {
    s.multiply(u, next);
    double zmax = 0.0;
    for (double& v : next) {
      v /= out.norm_s;
      zmax = std::max(zmax, v);
    }
    // Rounding can push the ratio a few ulps above 1; submultiplicativity
    // caps it there.
    out.z.push_back(j == 1 ? 1.0 : std::min(zmax, 1.0));
    u.swap(next);
  }
  return out;
}

VarianceMatrix gram_linearize(const RectMatrix& s) {
  const std::size_t m = s.rows, n = s.cols, dim = m + n;
  if (s.entries.size() != m * n) throw ParseError("rectangular matrix size mismatch");
  std::vector<double> e(dim * dim, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = s(i, j);
      if (v < 0.0) throw ParseError("negative Gram variance " + describe_entry(i, j, v));
      e[i * dim + (m + j)] = v;
      e[(m + j) * dim + i] = v;
    }
  }
  return VarianceMatrix(dim, std::move(e));
}

namespace profiles {

VarianceMatrix wigner(std::size_t n) {
  return VarianceMatrix(n, std::vector<double>(n * n, 1.0 / static_cast<double>(n)));
}

VarianceMatrix exponential(std::size_t n) {
  const double dn = static_cast<double>(n);
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      e[i * n + j] = std::exp(static_cast<double>(i + j) / dn) / dn;
    }
  }
  return VarianceMatrix(n, std::move(e));
}

VarianceMatrix random_uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = unif(rng);
      e[i * n + j] = v;
      e[j * n + i] = v;
    }
  }
  return VarianceMatrix(n, std::move(e));
}

RectMatrix random_rect(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RectMatrix r{rows, cols, std::vector<double>(rows * cols)};
  for (double& v : r.entries) v = unif(rng);
  return r;
}

}  // namespace profiles

namespace {

struct RawMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
};

std::size_t parse_size(const std::string& token, const char* what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &pos);
  } catch (const std::exception&) {
    throw ParseError(std::string("cannot parse ") + what + " from '" + token + "'");
  }
  if (pos != token.size() || v <= 0) {
    throw ParseError(std::string("invalid ") + what + " '" + token + "'");
  }
  return static_cast<std::size_t>(v);
}

// Reads a header ("N", "M N", "n=N" or "m=M,n=N") followed by rows*cols
// values. Square headers set rows = cols.
RawMatrix read_raw(std::istream& in, bool rectangular) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::istringstream lines(text);
  std::string header;
  while (std::getline(lines, header)) {
    if (header.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (header.empty()) throw ParseError("empty matrix file");

  const bool csv = header.find('=') != std::string::npos;
  if (csv) {
    std::replace(header.begin(), header.end(), ',', ' ');
  }
  std::istringstream hs(header);
  std::vector<std::string> fields;
  for (std::string f; hs >> f;) fields.push_back(f);

  RawMatrix raw;
  auto field_value = [&](const std::string& f, const std::string& key) {
    if (f.rfind(key + "=", 0) != 0) {
      throw ParseError("expected header field '" + key + "=...', got '" + f + "'");
    }
    return parse_size(f.substr(key.size() + 1), key.c_str());
  };
  if (rectangular) {
    if (fields.size() != 2) throw ParseError("Gram header must give two dimensions");
    raw.rows = csv ? field_value(fields[0], "m") : parse_size(fields[0], "M");
    raw.cols = csv ? field_value(fields[1], "n") : parse_size(fields[1], "N");
  } else {
    if (fields.size() != 1) throw ParseError("header must be a single dimension N");
    raw.rows = raw.cols = csv ? field_value(fields[0], "n") : parse_size(fields[0], "N");
  }

  std::size_t row = 0;
  for (std::string line; std::getline(lines, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (csv) std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::size_t count = 0;
    for (std::string tok; ls >> tok; ++count) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size()) {
        throw ParseError("row " + std::to_string(row) + ": cannot parse value '" + tok + "'");
      }
      raw.values.push_back(v);
    }
    if (count != raw.cols) {
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(count) +
                       " values, expected " + std::to_string(raw.cols));
    }
    ++row;
  }
  if (row != raw.rows) {
    throw ParseError("expected " + std::to_string(raw.rows) + " rows, found " +
                     std::to_string(row));
  }
  return raw;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open matrix file '" + path.string() + "'");
  return f;
}

}  // namespace

VarianceMatrix read_variance_matrix(std::istream& in, Validation mode) {
  RawMatrix raw = read_raw(in, false);
  return VarianceMatrix(raw.rows, std::move(raw.values), mode);
}

VarianceMatrix load_variance_matrix(const std::filesystem::path& path, Validation mode) {
  auto f = open_or_throw(path);
  return read_variance_matrix(f, mode);
}

RectMatrix read_rect_matrix(std::istream& in) {
  RawMatrix raw = read_raw(in, true);
  for (std::size_t k = 0; k < raw.values.size(); ++k) {
    if (raw.values[k] < 0.0 || !std::isfinite(raw.values[k])) {
      throw ParseError("invalid Gram variance " +
                       describe_entry(k / raw.cols, k % raw.cols, raw.values[k]));
    }
  }
  return RectMatrix{raw.rows, raw.cols, std::move(raw.values)};
}

RectMatrix load_rect_matrix(const std::filesystem::path& path) {
  auto f = open_or_throw(path);
  return read_rect_matrix(f);
}

void write_variance_matrix(std::ostream& out, const VarianceMatrix& s) {
  const auto old = out.precision(17);
  out << s.size() << '\n';
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t y = 0; y < s.size(); ++y) {
      out << (y ? " " : "") << s(x, y);
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace specbound
