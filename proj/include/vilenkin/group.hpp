#pragma once
// Exact arithmetic on Vilenkin group elements.
//
// An element is a p-ary digit sequence (x_j), j in Z, with finitely many
// nonzero digits.  The group operation is coordinatewise addition mod p,
// so there are no carries.  Characters evaluate to exact roots of unity;
// complex values appear only at the boundary of the API.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vilenkin {

enum class Side : std::uint8_t { primal, dual };

inline const char* side_name(Side s) { return s == Side::primal ? "primal" : "dual"; }

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void require_modulus(int p) {
  if (!is_prime(p)) throw std::domain_error("modulus must be a prime >= 2");
}

// p^e as an exactly representable double, e may be negative.
inline double p_pow(int p, int e) {
  double r = 1.0;
  for (int i = 0; i < (e >= 0 ? e : -e); ++i) r *= p;
  return e >= 0 ? r : 1.0 / r;
}

inline std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) {
    if (r > (~std::uint64_t{0}) / base) throw std::overflow_error("ipow overflow");
    r *= base;
  }
  return r;
}

// Nonnegative rational with a power-of-p denominator; value of the lambda map.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den <= 0) throw std::domain_error("rational: positive denominator required");
    long long g = std::gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
};

// Sparse canonical digit sequence.  digits() is sorted by index and holds no
// zero digits, so equality and ordering are structural.
class GroupElement {
 public:
  using Digit = std::pair<std::int32_t, std::uint8_t>;  // (index, value)

  GroupElement(int p, Side side) : modulus_(p), side_(side) { require_modulus(p); }

  static GroupElement zero(int p, Side side) { return GroupElement(p, side); }

  static GroupElement from_digits(int p, Side side, std::vector<Digit> digits) {
    GroupElement x(p, side);
    std::sort(digits.begin(), digits.end());
    for (const auto& [j, v] : digits) {
      if (v >= p) throw std::domain_error("digit out of range");
      if (v == 0) continue;
      if (!x.digits_.empty() && x.digits_.back().first == j)
        throw std::domain_error("duplicate digit index");
      x.digits_.emplace_back(j, v);
    }
    return x;
  }

  int modulus() const { return modulus_; }
  Side side() const { return side_; }
  const std::vector<Digit>& digits() const { return digits_; }
  bool is_zero() const { return digits_.empty(); }

  int digit(std::int32_t j) const {
    auto it = std::lower_bound(digits_.begin(), digits_.end(), j,
                               [](const Digit& d, std::int32_t k) { return d.first < k; });
    return (it != digits_.end() && it->first == j) ? it->second : 0;
  }

  // Smallest/largest index carrying a nonzero digit; element must be nonzero.
  std::int32_t min_index() const {
    if (is_zero()) throw std::domain_error("zero element has no support");
    return digits_.front().first;
  }
  std::int32_t max_index() const {
    if (is_zero()) throw std::domain_error("zero element has no support");
    return digits_.back().first;
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.modulus_ == b.modulus_ && a.side_ == b.side_ && a.digits_ == b.digits_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return a.digits_ < b.digits_;
  }

 private:
  int modulus_;
  Side side_;
  std::vector<Digit> digits_;
};

inline void require_compatible(const GroupElement& a, const GroupElement& b) {
  if (a.modulus() != b.modulus()) throw std::domain_error("mismatched modulus");
  if (a.side() != b.side()) throw std::domain_error("mismatched side");
}

inline GroupElement add(const GroupElement& a, const GroupElement& b) {
  require_compatible(a, b);
  const int p = a.modulus();
  std::vector<GroupElement::Digit> out;
  out.reserve(a.digits().size() + b.digits().size());
  auto ia = a.digits().begin(), ea = a.digits().end();
  auto ib = b.digits().begin(), eb = b.digits().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == ea || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      int v = (ia->second + ib->second) % p;
      if (v != 0) out.emplace_back(ia->first, static_cast<std::uint8_t>(v));
      ++ia;
      ++ib;
    }
  }
  return GroupElement::from_digits(p, a.side(), std::move(out));
}

inline GroupElement negate(const GroupElement& a) {
  const int p = a.modulus();
  std::vector<GroupElement::Digit> out;
  out.reserve(a.digits().size());
  for (const auto& [j, v] : a.digits())
    out.emplace_back(j, static_cast<std::uint8_t>((p - v) % p));
  return GroupElement::from_digits(p, a.side(), std::move(out));
}

inline GroupElement sub(const GroupElement& a, const GroupElement& b) {
  return add(a, negate(b));
}

// k-th power of the shift automorphism: result digit at j equals input digit
// at j + k.  k = 1 is A on the primal side and B on the dual side.
inline GroupElement shift_auto(const GroupElement& x, int k) {
  std::vector<GroupElement::Digit> out;
  out.reserve(x.digits().size());
  for (const auto& [j, v] : x.digits()) out.emplace_back(j - k, v);
  return GroupElement::from_digits(x.modulus(), x.side(), std::move(out));
}

// Fractional part: digits at indices >= 1 (the U / U* component).
inline GroupElement frac_part(const GroupElement& x) {
  std::vector<GroupElement::Digit> out;
  for (const auto& d : x.digits())
    if (d.first >= 1) out.push_back(d);
  return GroupElement::from_digits(x.modulus(), x.side(), std::move(out));
}

// Integer part: digits at indices <= 0 (the H / H-perp component).
inline GroupElement int_part(const GroupElement& x) {
  std::vector<GroupElement::Digit> out;
  for (const auto& d : x.digits())
    if (d.first <= 0) out.push_back(d);
  return GroupElement::from_digits(x.modulus(), x.side(), std::move(out));
}

// lambda(x) = sum_j x_j p^{-j}, exact.
inline Rational lambda_map(const GroupElement& x) {
  long long num = 0, den = 1;
  int hi = 0;
  for (const auto& [j, v] : x.digits()) hi = std::max(hi, static_cast<int>(j));
  den = static_cast<long long>(ipow(static_cast<std::uint64_t>(x.modulus()), hi));
  for (const auto& [j, v] : x.digits()) {
    // x_j p^{-j} = v * p^{hi-j} / p^{hi}
    num += static_cast<long long>(v) *
           static_cast<long long>(ipow(static_cast<std::uint64_t>(x.modulus()), hi - j));
  }
  return Rational(num, den);
}

// The lattice element with lambda = alpha: base-p digit a_i of alpha lands at
// index -i.  Side selects H (primal) or its annihilator model (dual).
inline GroupElement h_of(std::uint64_t alpha, int p, Side side) {
  std::vector<GroupElement::Digit> out;
  std::int32_t j = 0;
  while (alpha != 0) {
    auto v = static_cast<std::uint8_t>(alpha % static_cast<std::uint64_t>(p));
    if (v != 0) out.emplace_back(j, v);
    alpha /= static_cast<std::uint64_t>(p);
    --j;
  }
  return GroupElement::from_digits(p, side, std::move(out));
}

// Exact root of unity exp(2*pi*i*k/p).  The p = 2 values are exact so that
// dyadic pipelines stay exact end to end.
inline std::complex<double> root_of_unity(int p, int k) {
  k %= p;
  if (k < 0) k += p;
  if (k == 0) return {1.0, 0.0};
  if (2 * k == p) return {-1.0, 0.0};
  const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
  return {std::cos(t), std::sin(t)};
}

// chi(x, omega) = exp((2*pi*i/p) * sum_j x_j * omega_{1-j}); the exponent is
// returned as an exact residue mod p.
inline int character_index(const GroupElement& x, const GroupElement& omega) {
  if (x.modulus() != omega.modulus()) throw std::domain_error("mismatched modulus");
  if (x.side() != Side::primal || omega.side() != Side::dual)
    throw std::domain_error("character pairs a primal element with a dual one");
  long long acc = 0;
  for (const auto& [j, v] : x.digits()) acc += static_cast<long long>(v) * omega.digit(1 - j);
  return static_cast<int>(acc % x.modulus());
}

inline std::complex<double> character(const GroupElement& x, const GroupElement& omega) {
  return root_of_unity(x.modulus(), character_index(x, omega));
}

// Generalised Walsh function of order alpha.  For primal x this is
// W_alpha(x) = chi(x, omega_[alpha]); for dual omega it is the conjugate
// family W*_alpha(omega) = chi(h_[alpha], omega).
inline int walsh_index(std::uint64_t alpha, const GroupElement& x) {
  if (x.side() == Side::primal)
    return character_index(x, h_of(alpha, x.modulus(), Side::dual));
  return character_index(h_of(alpha, x.modulus(), Side::primal), x);
}

inline std::complex<double> walsh(std::uint64_t alpha, const GroupElement& x) {
  return root_of_unity(x.modulus(), walsh_index(alpha, x));
}

// --- digit-string encoding ---------------------------------------------
//
// Digits at indices <= 0 sit left of the dot, leftmost char = most negative
// index; digits at indices >= 1 sit right of the dot in index order.  Both
// sides are always present, padded with '0' ("0.0" is the zero element).

inline std::string format_element(const GroupElement& x, std::int32_t lo_index = 0,
                                  std::int32_t hi_index = 1) {
  // lo_index/hi_index widen the printed range; digits outside are an error
  // only if nonzero and are otherwise padded.
  for (const auto& [j, v] : x.digits()) {
    lo_index = std::min(lo_index, j);
    hi_index = std::max(hi_index, j);
  }
  lo_index = std::min(lo_index, 0);
  hi_index = std::max(hi_index, 1);
  std::string left, right;
  for (std::int32_t j = lo_index; j <= 0; ++j) left.push_back(static_cast<char>('0' + x.digit(j)));
  for (std::int32_t j = 1; j <= hi_index; ++j)
    right.push_back(static_cast<char>('0' + x.digit(j)));
  return left + "." + right;
}

inline GroupElement parse_element(const std::string& text, int p, Side side) {
  if (p > 10) throw std::domain_error("digit-string encoding requires p <= 10");
  const auto dot = text.find('.');
  if (dot == std::string::npos) throw ParseError("digit string lacks a dot: " + text);
  if (text.find('.', dot + 1) != std::string::npos)
    throw ParseError("digit string has multiple dots: " + text);
  const std::string left = text.substr(0, dot), right = text.substr(dot + 1);
  if (left.empty() || right.empty())
    throw ParseError("digit string needs digits on both sides of the dot: " + text);
  std::vector<GroupElement::Digit> out;
  for (std::size_t i = 0; i < left.size(); ++i) {
    const char c = left[i];
    if (c < '0' || c > '9') throw ParseError("bad digit character in: " + text);
    const int v = c - '0';
    if (v >= p) throw ParseError("digit exceeds modulus in: " + text);
    // leftmost char is the most negative index; rightmost is index 0
    const auto j = static_cast<std::int32_t>(i) - static_cast<std::int32_t>(left.size() - 1);
    if (v != 0) out.emplace_back(j, static_cast<std::uint8_t>(v));
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    const char c = right[i];
    if (c < '0' || c > '9') throw ParseError("bad digit character in: " + text);
    const int v = c - '0';
    if (v >= p) throw ParseError("digit exceeds modulus in: " + text);
    if (v != 0) out.emplace_back(static_cast<std::int32_t>(i) + 1, static_cast<std::uint8_t>(v));
  }
  return GroupElement::from_digits(p, side, std::move(out));
}

// --- cells ---------------------------------------------------------------
//
// A cell of the window [lo, hi] (lo <= hi) is a coset of U_hi inside the ball
// U_lo, identified by its digits at indices lo+1 .. hi.  Haar measure of a
// cell is p^{-hi}.

class CosetId {
 public:
  CosetId(int p, Side side, std::int32_t lo, std::int32_t hi, std::vector<std::uint8_t> digits)
      : modulus_(p), side_(side), lo_(lo), hi_(hi), digits_(std::move(digits)) {
    require_modulus(p);
    if (lo_ > hi_) throw std::domain_error("window requires lo <= hi");
    if (digits_.size() != static_cast<std::size_t>(hi_ - lo_))
      throw std::domain_error("cell digit count must equal the window width");
    for (auto d : digits_)
      if (d >= p) throw std::domain_error("cell digit out of range");
  }

  int modulus() const { return modulus_; }
  Side side() const { return side_; }
  std::int32_t window_lo() const { return lo_; }
  std::int32_t window_hi() const { return hi_; }
  const std::vector<std::uint8_t>& digits() const { return digits_; }

  GroupElement representative() const {
    std::vector<GroupElement::Digit> out;
    for (std::size_t t = 0; t < digits_.size(); ++t)
      if (digits_[t] != 0)
        out.emplace_back(lo_ + 1 + static_cast<std::int32_t>(t), digits_[t]);
    return GroupElement::from_digits(modulus_, side_, std::move(out));
  }

  bool contains(const GroupElement& x) const {
    if (x.modulus() != modulus_ || x.side() != side_) return false;
    for (const auto& [j, v] : x.digits())
      if (j <= lo_ && v != 0) return false;  // outside the ball U_lo
    for (std::size_t t = 0; t < digits_.size(); ++t)
      if (x.digit(lo_ + 1 + static_cast<std::int32_t>(t)) != digits_[t]) return false;
    return true;
  }

  double measure() const { return p_pow(modulus_, -hi_); }

  std::string to_string() const { return format_element(representative(), lo_ + 1, hi_); }

  friend bool operator==(const CosetId& a, const CosetId& b) {
    return a.modulus_ == b.modulus_ && a.side_ == b.side_ && a.lo_ == b.lo_ && a.hi_ == b.hi_ &&
           a.digits_ == b.digits_;
  }
  friend bool operator<(const CosetId& a, const CosetId& b) { return a.digits_ < b.digits_; }

 private:
  int modulus_;
  Side side_;
  std::int32_t lo_, hi_;
  std::vector<std::uint8_t> digits_;
};

}  // namespace vilenkin
