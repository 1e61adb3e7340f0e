#pragma once

// Exact truth-table representation of single-output Boolean functions and
// their spectra: Walsh coefficients, autocorrelation coefficients, higher
// order derivatives, algebraic normal form and the sum-of-squares indicator.
//
// Bit convention used repo-wide: input variable x_j is bit (j-1) of the
// table index, i.e. x_1 is the least significant bit. All spectra use the
// 1/2^n normalization, so every coefficient is a dyadic rational that a
// double represents exactly for n <= 24.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace autospec {

inline constexpr int kMaxClassicalBits = 24;

class BooleanFunction {
 public:
  BooleanFunction(int n, std::vector<std::uint8_t> table) : n_(n), table_(std::move(table)) {
    if (n < 1 || n > kMaxClassicalBits)
      throw std::invalid_argument("BooleanFunction: n must be in [1, " +
                                  std::to_string(kMaxClassicalBits) + "], got " + std::to_string(n));
    if (table_.size() != (std::size_t{1} << n))
      throw std::invalid_argument("BooleanFunction: table length must be 2^n");
    for (std::uint8_t v : table_)
      if (v > 1) throw std::invalid_argument("BooleanFunction: table entries must be 0 or 1");
  }

  static BooleanFunction from_table(int n, std::vector<std::uint8_t> table) {
    return BooleanFunction(n, std::move(table));
  }

  static BooleanFunction constant(int n, int value) {
    if (value != 0 && value != 1) throw std::invalid_argument("constant: value must be 0 or 1");
    return BooleanFunction(n, std::vector<std::uint8_t>(std::size_t{1} << n,
                                                        static_cast<std::uint8_t>(value)));
  }

  // f(x) = <x, w> over GF(2).
  static BooleanFunction linear(int n, std::uint64_t w) {
    check_point(n, w, "linear mask w");
    std::vector<std::uint8_t> t(std::size_t{1} << n);
    for (std::uint64_t x = 0; x < t.size(); ++x)
      t[x] = static_cast<std::uint8_t>(std::popcount(x & w) & 1);
    return BooleanFunction(n, std::move(t));
  }

  // x1x2 + x3x4 + ... + x_{n-1}x_n; requires even n.
  static BooleanFunction bent_quadratic(int n) {
    if (n < 2 || n % 2 != 0)
      throw std::invalid_argument("bent_quadratic: n must be even and >= 2");
    std::vector<std::uint8_t> t(std::size_t{1} << n);
    for (std::uint64_t x = 0; x < t.size(); ++x) {
      unsigned acc = 0;
      for (int p = 0; p + 1 < n; p += 2) acc ^= ((x >> p) & (x >> (p + 1)));
      t[x] = static_cast<std::uint8_t>(acc & 1);
    }
    return BooleanFunction(n, std::move(t));
  }

  static BooleanFunction random(int n, std::uint64_t seed) {
    if (n < 1 || n > kMaxClassicalBits) throw std::invalid_argument("random: n out of range");
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> t(std::size_t{1} << n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i % 64 == 0) word = rng();
      t[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1);
    }
    return BooleanFunction(n, std::move(t));
  }

  int n() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }
  int operator()(std::uint64_t x) const { return table_[x]; }
  const std::vector<std::uint8_t>& table() const { return table_; }
  bool operator==(const BooleanFunction&) const = default;

  static void check_point(int n, std::uint64_t a, const char* what) {
    if (n >= 64) return;
    if (a >> n)
      throw std::invalid_argument(std::string(what) + " does not fit in " + std::to_string(n) + " bits");
  }

 private:
  int n_;
  std::vector<std::uint8_t> table_;
};

enum class SpectrumKind { walsh, autocorrelation, derivative_walsh };

struct Spectrum {
  int n = 0;
  SpectrumKind kind = SpectrumKind::walsh;
  std::vector<double> values;  // length 2^n, same index convention as the table
};

// Ordered list of shift points (a_1, ..., a_k); duplicates allowed, k <= n.
struct PointList {
  int n = 0;
  std::vector<std::uint64_t> points;

  PointList(int n_bits, std::vector<std::uint64_t> pts) : n(n_bits), points(std::move(pts)) {
    if (points.size() > static_cast<std::size_t>(n))
      throw std::invalid_argument("PointList: more points than input bits (k > n)");
    for (std::uint64_t a : points) BooleanFunction::check_point(n, a, "point");
  }

  std::size_t k() const { return points.size(); }
};

// In-place unnormalized Walsh-Hadamard butterfly; applying it twice yields
// 2^n times the identity.
inline void walsh_transform_inplace(std::vector<double>& v) {
  const std::size_t size = v.size();
  if (size == 0 || (size & (size - 1)) != 0)
    throw std::invalid_argument("walsh_transform_inplace: length must be a power of two");
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t base = 0; base < size; base += 2 * half) {
      for (std::size_t i = base; i < base + half; ++i) {
        const double a = v[i];
        const double b = v[i + half];
        v[i] = a + b;
        v[i + half] = a - b;
      }
    }
  }
}

// walsh(y) = 2^-n * sum_x (-1)^{f(x)} (-1)^{x.y}
inline Spectrum walsh_spectrum(const BooleanFunction& f) {
  Spectrum s{f.n(), SpectrumKind::walsh, std::vector<double>(f.size())};
  for (std::uint64_t x = 0; x < f.size(); ++x) s.values[x] = f(x) ? -1.0 : 1.0;
  walsh_transform_inplace(s.values);
  const double scale = 1.0 / static_cast<double>(f.size());
  for (double& v : s.values) v *= scale;
  return s;
}

// autocorr(a) = 2^-n * sum_x (-1)^{f(x)} (-1)^{f(x^a)} via the transform ->
// square -> transform pipeline. Every intermediate is a dyadic rational of
// magnitude <= 1, so the result is exact for n <= 24.
inline Spectrum autocorrelation_spectrum(const BooleanFunction& f) {
  Spectrum w = walsh_spectrum(f);
  Spectrum s{f.n(), SpectrumKind::autocorrelation, std::move(w.values)};
  for (double& v : s.values) v = v * v;
  walsh_transform_inplace(s.values);
  return s;
}

// Quadratic-time evaluation straight from the definition; retained as the
// independent check for the pipeline above.
inline Spectrum autocorrelation_spectrum_direct(const BooleanFunction& f) {
  if (f.n() > 12)
    throw std::invalid_argument("autocorrelation_spectrum_direct: limited to n <= 12");
  Spectrum s{f.n(), SpectrumKind::autocorrelation, std::vector<double>(f.size())};
  const double scale = 1.0 / static_cast<double>(f.size());
  for (std::uint64_t a = 0; a < f.size(); ++a) {
    std::int64_t acc = 0;
    for (std::uint64_t x = 0; x < f.size(); ++x) acc += (f(x) == f(x ^ a)) ? 1 : -1;
    s.values[a] = static_cast<double>(acc) * scale;
  }
  return s;
}

// k-th order derivative via the subset-XOR identity:
//   D_f[A](x) = XOR over all sub-lists S of A of f(x ^ XOR(S)).
// An empty list returns f itself; duplicated points cancel pairwise.
inline BooleanFunction derivative(const BooleanFunction& f, const PointList& a) {
  if (a.n != f.n())
    throw std::invalid_argument("derivative: point list width does not match function");
  const std::size_t k = a.k();
  std::vector<std::uint64_t> shifts;
  shifts.reserve(std::size_t{1} << k);
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << k); ++subset) {
    std::uint64_t x = 0;
    for (std::size_t j = 0; j < k; ++j)
      if ((subset >> j) & 1) x ^= a.points[j];
    shifts.push_back(x);
  }
  std::vector<std::uint8_t> t(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    unsigned acc = 0;
    for (std::uint64_t s : shifts) acc ^= f(x ^ s);
    t[x] = static_cast<std::uint8_t>(acc & 1);
  }
  return BooleanFunction(f.n(), std::move(t));
}

inline Spectrum derivative_walsh_spectrum(const BooleanFunction& f, const PointList& a) {
  Spectrum w = walsh_spectrum(derivative(f, a));
  w.kind = SpectrumKind::derivative_walsh;
  return w;
}

// sigma_f = sum_a autocorr(a)^2, in [1, 2^n].
inline double sum_of_squares(const BooleanFunction& f) {
  const Spectrum r = autocorrelation_spectrum(f);
  double acc = 0.0;
  for (double v : r.values) acc += v * v;
  return acc;
}

// In-place binary Moebius butterfly over GF(2); an involution.
inline void mobius_transform_inplace(std::vector<std::uint8_t>& v) {
  const std::size_t size = v.size();
  for (std::size_t half = 1; half < size; half <<= 1)
    for (std::size_t base = 0; base < size; base += 2 * half)
      for (std::size_t i = base; i < base + half; ++i) v[i + half] ^= v[i];
}

// Coefficient vector of the algebraic normal form; entry m is the
// coefficient of the monomial whose variables are the set bits of m.
inline std::vector<std::uint8_t> algebraic_normal_form(const BooleanFunction& f) {
  std::vector<std::uint8_t> anf = f.table();
  mobius_transform_inplace(anf);
  return anf;
}

// Max Hamming weight over monomials present in the ANF; 0 for constants.
inline int degree(const BooleanFunction& f) {
  const std::vector<std::uint8_t> anf = algebraic_normal_form(f);
  int deg = 0;
  for (std::uint64_t m = 0; m < anf.size(); ++m)
    if (anf[m]) deg = std::max(deg, std::popcount(m));
  return deg;
}

// --- truth-table file format -------------------------------------------
//
// Line 1: "n=<int>". Line 2: exactly ceil(2^n / 4) hex digits, most
// significant digit first; bit i of the encoded integer is table entry i.

class TruthTableError : public std::runtime_error {
 public:
  TruthTableError(const std::string& msg, std::size_t byte_offset)
      : std::runtime_error(msg + " (byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

inline std::string format_truth_table(const BooleanFunction& f) {
  const std::size_t digits = (f.size() + 3) / 4;
  std::string hex(digits, '0');
  static constexpr char kHex[] = "0123456789abcdef";
  for (std::uint64_t i = 0; i < f.size(); ++i) {
    if (!f(i)) continue;
    const std::size_t digit = digits - 1 - (i / 4);
    const int nibble_bit = static_cast<int>(i % 4);
    int v = hex[digit] <= '9' ? hex[digit] - '0' : hex[digit] - 'a' + 10;
    v |= 1 << nibble_bit;
    hex[digit] = kHex[v];
  }
  return "n=" + std::to_string(f.n()) + "\n" + hex + "\n";
}

inline BooleanFunction parse_truth_table(std::string_view text) {
  std::size_t pos = 0;
  auto expect = [&](char c) {
    if (pos >= text.size() || text[pos] != c)
      throw TruthTableError(std::string("expected '") + c + "' in header", pos);
    ++pos;
  };
  expect('n');
  expect('=');
  const std::size_t n_start = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  if (pos == n_start) throw TruthTableError("expected decimal bit count after 'n='", pos);
  if (pos - n_start > 2) throw TruthTableError("bit count out of range", n_start);
  const int n = std::stoi(std::string(text.substr(n_start, pos - n_start)));
  if (n < 1 || n > kMaxClassicalBits)
    throw TruthTableError("bit count out of range [1, 24]", n_start);
  expect('\n');

  const std::size_t digits = ((std::size_t{1} << n) + 3) / 4;
  const std::size_t hex_start = pos;
  std::vector<std::uint8_t> table(std::size_t{1} << n, 0);
  for (std::size_t d = 0; d < digits; ++d, ++pos) {
    if (pos >= text.size() || text[pos] == '\n')
      throw TruthTableError("hex table too short: expected " + std::to_string(digits) + " digits", pos);
    const char c = text[pos];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw TruthTableError(std::string("invalid hex digit '") + c + "'", pos);
    const std::size_t digit_index = digits - 1 - d;  // leftmost digit is most significant
    for (int b = 0; b < 4; ++b) {
      const std::uint64_t bit = static_cast<std::uint64_t>(digit_index) * 4 + b;
      if (bit < table.size()) table[bit] = static_cast<std::uint8_t>((v >> b) & 1);
      else if ((v >> b) & 1) throw TruthTableError("set bit beyond table length", pos);
    }
  }
  if (pos < text.size() && text[pos] != '\n')
    throw TruthTableError("hex table too long: expected exactly " + std::to_string(digits) +
                              " digits starting at byte " + std::to_string(hex_start),
                          pos);
  if (pos < text.size()) ++pos;
  while (pos < text.size()) {
    if (text[pos] != '\n' && text[pos] != ' ')
      throw TruthTableError("trailing content after table", pos);
    ++pos;
  }
  return BooleanFunction(n, std::move(table));
}

// Deterministic sub-seed derivation (splitmix64 step); every stochastic
// component of a run draws from seeds derived off one root seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace autospec
