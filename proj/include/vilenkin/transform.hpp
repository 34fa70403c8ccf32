#pragma once
// Fourier transform between the group and its dual.
//
// A step function with window [lo, hi] transforms to one with window
// [-hi, -lo]: support ball and constancy resolution trade places.  On the
// restricted windows the character pairs digit x_j with digit w_{1-j}, so
// the transform factors into one p-point DFT per digit axis (the group is a
// product of cyclic groups, there are no twiddle factors) followed by a
// digit-reversal permutation.  For p = 2 every kernel entry is +1 or -1 and
// the whole pipeline is exact in floating point.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vilenkin/group.hpp"
#include "vilenkin/stepfn.hpp"

namespace vilenkin {

namespace detail {

// Largest dense transform we are willing to materialise: p^width cells.
inline constexpr std::uint64_t kMaxTransformCells = std::uint64_t{1} << 22;

inline std::uint64_t digit_reverse(std::uint64_t idx, int p, int width) {
  std::uint64_t out = 0;
  for (int t = 0; t < width; ++t) {
    out = out * static_cast<std::uint64_t>(p) + idx % static_cast<std::uint64_t>(p);
    idx /= static_cast<std::uint64_t>(p);
  }
  return out;
}

// In-place p-point DFTs along every axis of the dense rank-width tensor.
// sign = -1 gives the forward kernel exp(-2 pi i ab / p).
inline void axis_dfts(std::vector<std::complex<double>>& data, int p, int width, int sign) {
  std::vector<std::complex<double>> kernel(static_cast<std::size_t>(p) * p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      kernel[static_cast<std::size_t>(a) * p + b] = root_of_unity(p, sign * a * b);
  const std::uint64_t n = data.size();
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(p));
  std::uint64_t stride = n / static_cast<std::uint64_t>(p);
  for (int t = 0; t < width; ++t) {
    const std::uint64_t block = stride * static_cast<std::uint64_t>(p);
    for (std::uint64_t base = 0; base < n; base += block) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        for (int k = 0; k < p; ++k)
          scratch[static_cast<std::size_t>(k)] = data[base + off + static_cast<std::uint64_t>(k) * stride];
        for (int b = 0; b < p; ++b) {
          std::complex<double> acc{};
          for (int a = 0; a < p; ++a)
            acc += kernel[static_cast<std::size_t>(a) * p + b] * scratch[static_cast<std::size_t>(a)];
          data[base + off + static_cast<std::uint64_t>(b) * stride] = acc;
        }
      }
    }
    stride /= static_cast<std::uint64_t>(p);
  }
}

inline StepFunction dense_transform(const StepFunction& f, Side out_side, int sign,
                                    double scale_factor) {
  const int p = f.modulus();
  const int w = f.width();
  const std::uint64_t n = f.span();
  if (n > kMaxTransformCells) throw std::domain_error("window too wide for dense transform");
  std::vector<std::complex<double>> data(static_cast<std::size_t>(n));
  for (const auto& [idx, v] : f.cells()) data[static_cast<std::size_t>(idx)] = v;
  axis_dfts(data, p, w, sign);
  StepFunction::Table table;
  table.reserve(f.cells().size());
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    const auto v = data[static_cast<std::size_t>(idx)] * scale_factor;
    if (v != std::complex<double>{}) table.emplace_back(digit_reverse(idx, p, w), v);
  }
  return StepFunction::from_cells(p, out_side, -f.window_hi(), -f.window_lo(), std::move(table));
}

}  // namespace detail

inline StepFunction fourier(const StepFunction& f) {
  if (f.side() != Side::primal) throw std::domain_error("fourier expects a primal-side function");
  return detail::dense_transform(f, Side::dual, -1, p_pow(f.modulus(), -f.window_hi()));
}

inline StepFunction inverse_fourier(const StepFunction& g) {
  if (g.side() != Side::dual)
    throw std::domain_error("inverse_fourier expects a dual-side function");
  return detail::dense_transform(g, Side::primal, +1, p_pow(g.modulus(), -g.window_hi()));
}

// Definition-level oracle, one point at a time.  For a primal f and dual xi
// this is the integral of f against the conjugated character; for a dual f
// and primal xi it is the inverse integral.  Quadratic overall, used to
// cross-check the fast path.
inline std::complex<double> slow_fourier_at(const StepFunction& f, const GroupElement& xi) {
  if (f.modulus() != xi.modulus() || f.side() == xi.side())
    throw std::domain_error("oracle needs opposite sides and equal modulus");
  // The integral vanishes unless xi annihilates U_hi, i.e. xi has no nonzero
  // digit at any index <= -hi.
  for (const auto& [j, v] : xi.digits())
    if (j <= -f.window_hi() && v != 0) return {};
  std::complex<double> acc{};
  for (const auto& [idx, v] : f.cells()) {
    const GroupElement rep = f.cell_representative(idx);
    const std::complex<double> ch =
        (f.side() == Side::primal) ? character(rep, xi) : character(xi, rep);
    acc += (f.side() == Side::primal) ? v * std::conj(ch) : v * ch;
  }
  return acc * f.cell_measure();
}

// Full slow transform: evaluates the oracle on every output cell.
inline StepFunction slow_fourier(const StepFunction& f) {
  const Side out_side = (f.side() == Side::primal) ? Side::dual : Side::primal;
  StepFunction out(f.modulus(), out_side, -f.window_hi(), -f.window_lo());
  StepFunction::Table table;
  for (std::uint64_t idx = 0; idx < out.span(); ++idx) {
    const auto v = slow_fourier_at(f, out.cell_representative(idx));
    if (v != std::complex<double>{}) table.emplace_back(idx, v);
  }
  return StepFunction::from_cells(f.modulus(), out_side, out.window_lo(), out.window_hi(),
                                  std::move(table));
}

// p = 2 only: oracle for one packed output cell.  Cell bits are digits, and
// the character pairing in packed coordinates is a bit-reversed AND, so each
// term is a popcount sign.  Used to spot-check wide transforms where building
// group elements per cell would dominate.
inline std::complex<double> slow_fourier_at_packed(const StepFunction& f,
                                                   std::uint64_t out_idx) {
  if (f.modulus() != 2) throw std::domain_error("packed oracle is p = 2 only");
  const int w = f.width();
  const std::uint64_t mask = detail::digit_reverse(out_idx, 2, w);
  std::complex<double> acc{};
  for (const auto& [idx, v] : f.cells()) {
    const bool flip = __builtin_popcountll(idx & mask) & 1;
    acc += flip ? -v : v;
  }
  return acc * f.cell_measure();
}

}  // namespace vilenkin
