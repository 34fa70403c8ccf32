#pragma once
// Shift-invariant space analysis: lattice brackets, periodization, frame
// bounds, spectra, and fibers.
//
// Periodic objects live on the fundamental domain of the lattice (U for H,
// U* for H-perp) at a finite resolution r: they are determined by the digits
// at indices 1..r.  Integer-part digits and digits beyond r never influence
// a periodic value.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vilenkin/group.hpp"
#include "vilenkin/stepfn.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin {

enum class Lattice { H, Hperp };

inline Side lattice_side(Lattice l) { return l == Lattice::H ? Side::primal : Side::dual; }

// Returns the spectral-side representative: the transform of a primal
// function, or a dual function unchanged (already a "hat").
inline StepFunction hat(const StepFunction& f) {
  return f.side() == Side::primal ? fourier(f) : f;
}

// A lattice-periodic set, stored as the sorted packed patterns of digits
// 1..r that belong to it.  Pattern packing is MSD-first (digit 1 most
// significant), matching StepFunction cells of window [0, r].
class PeriodicSet {
 public:
  PeriodicSet(int p, Side side, int resolution, std::vector<std::uint64_t> patterns)
      : modulus_(p), side_(side), res_(resolution), patterns_(std::move(patterns)) {
    require_modulus(p);
    if (res_ < 0) throw std::domain_error("resolution must be >= 0");
    std::sort(patterns_.begin(), patterns_.end());
    patterns_.erase(std::unique(patterns_.begin(), patterns_.end()), patterns_.end());
    if (!patterns_.empty() && patterns_.back() >= span())
      throw std::domain_error("pattern outside resolution");
  }

  static PeriodicSet empty(int p, Side side, int resolution = 0) {
    return PeriodicSet(p, side, resolution, {});
  }
  static PeriodicSet full(int p, Side side, int resolution = 0) {
    std::vector<std::uint64_t> all(ipow(static_cast<std::uint64_t>(p), resolution));
    for (std::uint64_t i = 0; i < all.size(); ++i) all[i] = i;
    return PeriodicSet(p, side, resolution, std::move(all));
  }
  // The digit-1 = 0 half band; on the dual side this is the periodization of
  // the contracted fundamental domain B^{-1}U*.
  static PeriodicSet lower_halfband(int p, Side side) {
    return PeriodicSet(p, side, 1, {0});
  }

  int modulus() const { return modulus_; }
  Side side() const { return side_; }
  int resolution() const { return res_; }
  std::uint64_t span() const { return ipow(static_cast<std::uint64_t>(modulus_), res_); }
  const std::vector<std::uint64_t>& patterns() const { return patterns_; }
  bool is_empty() const { return patterns_.empty(); }
  double measure() const { return static_cast<double>(patterns_.size()) * p_pow(modulus_, -res_); }

  bool contains_pattern(std::uint64_t idx, int resolution) const {
    if (resolution < res_) throw std::domain_error("pattern coarser than set resolution");
    const std::uint64_t prefix =
        idx / ipow(static_cast<std::uint64_t>(modulus_), resolution - res_);
    return std::binary_search(patterns_.begin(), patterns_.end(), prefix);
  }

  // Membership of a group element; only digits 1..r matter (periodicity).
  bool contains(const GroupElement& x) const {
    if (x.modulus() != modulus_ || x.side() != side_)
      throw std::domain_error("element/set mismatch");
    std::uint64_t idx = 0;
    for (int j = 1; j <= res_; ++j)
      idx = idx * static_cast<std::uint64_t>(modulus_) + static_cast<std::uint64_t>(x.digit(j));
    return std::binary_search(patterns_.begin(), patterns_.end(), idx);
  }

  PeriodicSet refine(int resolution) const {
    if (resolution < res_) throw std::domain_error("refine must not coarsen");
    if (resolution == res_) return *this;
    const std::uint64_t split =
        ipow(static_cast<std::uint64_t>(modulus_), resolution - res_);
    std::vector<std::uint64_t> out;
    out.reserve(patterns_.size() * split);
    for (auto s : patterns_)
      for (std::uint64_t k = 0; k < split; ++k) out.push_back(s * split + k);
    return PeriodicSet(modulus_, side_, resolution, std::move(out));
  }

  PeriodicSet complement() const {
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(span()) - patterns_.size());
    auto it = patterns_.begin();
    for (std::uint64_t i = 0; i < span(); ++i) {
      if (it != patterns_.end() && *it == i) {
        ++it;
      } else {
        out.push_back(i);
      }
    }
    return PeriodicSet(modulus_, side_, res_, std::move(out));
  }

  friend PeriodicSet set_union(const PeriodicSet& a, const PeriodicSet& b) {
    auto [x, y] = PeriodicSet::aligned(a, b);
    std::vector<std::uint64_t> out;
    std::set_union(x.patterns_.begin(), x.patterns_.end(), y.patterns_.begin(),
                   y.patterns_.end(), std::back_inserter(out));
    return PeriodicSet(x.modulus_, x.side_, x.res_, std::move(out));
  }
  friend PeriodicSet set_intersection(const PeriodicSet& a, const PeriodicSet& b) {
    auto [x, y] = PeriodicSet::aligned(a, b);
    std::vector<std::uint64_t> out;
    std::set_intersection(x.patterns_.begin(), x.patterns_.end(), y.patterns_.begin(),
                          y.patterns_.end(), std::back_inserter(out));
    return PeriodicSet(x.modulus_, x.side_, x.res_, std::move(out));
  }
  friend PeriodicSet set_difference(const PeriodicSet& a, const PeriodicSet& b) {
    auto [x, y] = PeriodicSet::aligned(a, b);
    std::vector<std::uint64_t> out;
    std::set_difference(x.patterns_.begin(), x.patterns_.end(), y.patterns_.begin(),
                        y.patterns_.end(), std::back_inserter(out));
    return PeriodicSet(x.modulus_, x.side_, x.res_, std::move(out));
  }

  // {w : Bw in this set}: digit 1 becomes free, the pattern moves one slot
  // deeper, so the resolution grows by one.
  PeriodicSet preimage_under_shift() const {
    std::vector<std::uint64_t> out;
    out.reserve(patterns_.size() * static_cast<std::size_t>(modulus_));
    for (std::uint64_t a = 0; a < static_cast<std::uint64_t>(modulus_); ++a)
      for (auto s : patterns_) out.push_back(a * span() + s);
    return PeriodicSet(modulus_, side_, res_ + 1, std::move(out));
  }

  StepFunction to_indicator() const {
    StepFunction::Table table;
    table.reserve(patterns_.size());
    for (auto s : patterns_) table.emplace_back(s, StepFunction::Coeff{1.0, 0.0});
    return StepFunction::from_cells(modulus_, side_, 0, res_, std::move(table));
  }

  friend bool operator==(const PeriodicSet& a, const PeriodicSet& b) {
    if (a.modulus_ != b.modulus_ || a.side_ != b.side_) return false;
    auto [x, y] = PeriodicSet::aligned(a, b);
    return x.patterns_ == y.patterns_;
  }

 private:
  static std::pair<PeriodicSet, PeriodicSet> aligned(const PeriodicSet& a,
                                                     const PeriodicSet& b) {
    if (a.modulus_ != b.modulus_ || a.side_ != b.side_)
      throw std::domain_error("mismatched sets");
    const int r = std::max(a.res_, b.res_);
    return {a.refine(r), b.refine(r)};
  }

  int modulus_;
  Side side_;
  int res_;
  std::vector<std::uint64_t> patterns_;
};

// A lattice-periodic step function, stored by its restriction to the
// fundamental domain: a StepFunction with window [0, r].  Evaluation ignores
// integer-part digits, which is exactly the periodic extension.
class FilterSpec {
 public:
  explicit FilterSpec(StepFunction fn) : fn_(std::move(fn)) {
    if (fn_.window_lo() != 0)
      throw std::domain_error("periodic function needs window [0, r]");
  }

  static FilterSpec constant(int p, Side side, std::complex<double> v) {
    StepFunction::Table t;
    if (v != std::complex<double>{}) t.emplace_back(0, v);
    return FilterSpec(StepFunction::from_cells(p, side, 0, 0, std::move(t)));
  }
  static FilterSpec indicator(const PeriodicSet& s) { return FilterSpec(s.to_indicator()); }

  int modulus() const { return fn_.modulus(); }
  Side side() const { return fn_.side(); }
  int resolution() const { return fn_.window_hi(); }
  const StepFunction& restriction() const { return fn_; }

  std::complex<double> value_at_pattern(std::uint64_t idx, int resolution) const {
    if (resolution < this->resolution())
      throw std::domain_error("pattern coarser than filter resolution");
    return fn_.coeff(idx / ipow(static_cast<std::uint64_t>(modulus()),
                                resolution - this->resolution()));
  }

  std::complex<double> eval(const GroupElement& x) const {
    if (x.modulus() != modulus() || x.side() != side())
      throw std::domain_error("element/filter mismatch");
    std::uint64_t idx = 0;
    for (int j = 1; j <= resolution(); ++j)
      idx = idx * static_cast<std::uint64_t>(modulus()) + static_cast<std::uint64_t>(x.digit(j));
    return fn_.coeff(idx);
  }

  FilterSpec refine(int resolution) const {
    return FilterSpec(fn_.refine(0, resolution));
  }

  // The periodic extension restricted to a window; requires hi >= r so each
  // cell determines the digits the filter reads.
  StepFunction extend_to_window(std::int32_t lo, std::int32_t hi) const {
    if (hi < resolution()) throw std::domain_error("window too coarse for filter");
    if (lo > 0) throw std::domain_error("extension window must contain the domain");
    StepFunction out(modulus(), side(), lo, hi);
    StepFunction::Table table;
    const std::uint64_t frac_span = ipow(static_cast<std::uint64_t>(modulus()), hi);
    const std::uint64_t tail = ipow(static_cast<std::uint64_t>(modulus()),
                                    hi - resolution());
    for (std::uint64_t idx = 0; idx < out.span(); ++idx) {
      const std::uint64_t pattern = (idx % frac_span) / tail;  // digits 1..r
      const auto v = fn_.coeff(pattern);
      if (v != std::complex<double>{}) table.emplace_back(idx, v);
    }
    return StepFunction::from_cells(modulus(), side(), lo, hi, std::move(table));
  }

  PeriodicSet support() const {
    std::vector<std::uint64_t> cells;
    cells.reserve(fn_.cells().size());
    for (const auto& [idx, v] : fn_.cells()) cells.push_back(idx);
    return PeriodicSet(modulus(), side(), resolution(), std::move(cells));
  }

  double max_abs() const { return fn_.max_abs(); }

 private:
  StepFunction fn_;
};

// [f,g](x) = sum over lattice h of f(x+h) conj(g(x+h)).  In packed cell
// coordinates over the window [min(lo,0), max(hi,0)] the lattice translates
// of x are exactly the indices congruent to x's pattern mod p^hi, so the
// bracket is a fold of the pointwise product f conj(g).
inline FilterSpec bracket(const StepFunction& a, const StepFunction& b, Lattice lattice) {
  if (a.modulus() != b.modulus() || a.side() != b.side())
    throw std::domain_error("mismatched functions");
  if (a.side() != lattice_side(lattice))
    throw std::domain_error("lattice does not match function side");
  auto [f, g] = window_align(a, b);
  const std::int32_t lo = std::min<std::int32_t>(f.window_lo(), 0);
  const std::int32_t hi = std::max<std::int32_t>(f.window_hi(), 0);
  const StepFunction fr = f.refine(lo, hi), gr = g.refine(lo, hi);
  const std::uint64_t fold = ipow(static_cast<std::uint64_t>(f.modulus()), hi);
  std::map<std::uint64_t, std::complex<double>> acc;
  auto ia = fr.cells().begin(), ea = fr.cells().end();
  auto ib = gr.cells().begin(), eb = gr.cells().end();
  while (ia != ea && ib != eb) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      acc[ia->first % fold] += ia->second * std::conj(ib->second);
      ++ia;
      ++ib;
    }
  }
  StepFunction::Table table;
  table.reserve(acc.size());
  for (const auto& [idx, v] : acc)
    if (v != std::complex<double>{}) table.emplace_back(idx, v);
  return FilterSpec(
      StepFunction::from_cells(f.modulus(), f.side(), 0, hi, std::move(table)));
}

// P_phi = [phi-hat, phi-hat] over H-perp.  A primal argument is transformed
// first; a dual argument is taken as the hat itself.  Values are real and
// nonnegative by construction.
inline FilterSpec periodization(const StepFunction& phi) {
  const StepFunction ph = hat(phi);
  return bracket(ph, ph, Lattice::Hperp);
}

struct FrameReport {
  double lower = 0.0;              // C: least positive periodization value
  double upper = 0.0;              // D: largest periodization value
  PeriodicSet zero_set;            // where the periodization vanishes
  bool bessel = false;
  bool frame = false;
  bool parseval = false;
  bool orthonormal = false;
  FilterSpec gramian;              // the periodization itself
};

inline constexpr double kIndicatorTol = 1e-12;

inline FrameReport frame_report(const StepFunction& phi) {
  FilterSpec P = periodization(phi);
  const PeriodicSet supp = P.support();
  double lo = 0.0, hi = 0.0;
  bool unit = true;
  for (const auto& [idx, v] : P.restriction().cells()) {
    const double x = v.real();
    lo = (lo == 0.0) ? x : std::min(lo, x);
    hi = std::max(hi, x);
    unit = unit && std::abs(x - 1.0) <= kIndicatorTol;
  }
  const bool nonzero = !supp.is_empty();
  return FrameReport{
      lo,
      hi,
      supp.complement(),
      true,
      nonzero,
      nonzero && unit,
      nonzero && unit && supp.complement().is_empty(),
      std::move(P),
  };
}

// The fiber of a spectral-side function at omega: its values along the
// H-perp orbit, keyed by the packed lattice index.
struct Fiber {
  GroupElement base;
  std::map<std::uint64_t, std::complex<double>> entries;

  double norm_sq() const {
    double acc = 0.0;
    for (const auto& [n, v] : entries) acc += std::norm(v);
    return acc;
  }
};

inline Fiber fiber(const StepFunction& f, const GroupElement& omega) {
  const StepFunction fh = hat(f);
  if (omega.modulus() != fh.modulus() || omega.side() != fh.side())
    throw std::domain_error("element/function mismatch");
  Fiber out{omega, {}};
  const int depth = std::max(0, -fh.window_lo());
  const std::uint64_t count = ipow(static_cast<std::uint64_t>(fh.modulus()), depth);
  for (std::uint64_t beta = 0; beta < count; ++beta) {
    const auto v = fh.evaluate(add(omega, h_of(beta, fh.modulus(), fh.side())));
    if (v != std::complex<double>{}) out.entries[beta] = v;
  }
  return out;
}

// Spectrum of the generated shift-invariant space, computed three ways that
// must agree cell-for-cell: periodization support, nonzero fibers, and the
// projection of the spectral support into the fundamental domain.
inline PeriodicSet spectrum(const StepFunction& phi) { return periodization(phi).support(); }

inline PeriodicSet spectrum_via_fibers(const StepFunction& phi) {
  const StepFunction ph = hat(phi);
  const int r = std::max(0, static_cast<int>(ph.window_hi()));
  PeriodicSet domain = PeriodicSet::full(ph.modulus(), ph.side(), r);
  StepFunction grid = domain.to_indicator();
  std::vector<std::uint64_t> live;
  for (std::uint64_t idx = 0; idx < grid.span(); ++idx)
    if (!fiber(ph, grid.cell_representative(idx)).entries.empty()) live.push_back(idx);
  return PeriodicSet(ph.modulus(), ph.side(), r, std::move(live));
}

inline PeriodicSet spectrum_via_projection(const StepFunction& phi) {
  const StepFunction ph0 = hat(phi);
  const int r = std::max(0, static_cast<int>(ph0.window_hi()));
  const StepFunction ph = ph0.refine(std::min<std::int32_t>(ph0.window_lo(), 0), r);
  const std::uint64_t fold = ipow(static_cast<std::uint64_t>(ph.modulus()), r);
  std::vector<std::uint64_t> live;
  live.reserve(ph.cells().size());
  for (const auto& [idx, v] : ph.cells()) live.push_back(idx % fold);
  return PeriodicSet(ph.modulus(), ph.side(), r, std::move(live));
}

// Member of <phi> with spectral representation m * phi-hat; returned on the
// primal side.
inline StepFunction synthesize(const FilterSpec& m, const StepFunction& phi) {
  const StepFunction ph = hat(phi);
  if (m.modulus() != ph.modulus() || m.side() != Side::dual)
    throw std::domain_error("filter/function mismatch");
  const std::int32_t lo = std::min<std::int32_t>(ph.window_lo(), 0);
  const std::int32_t hi = std::max<std::int32_t>(ph.window_hi(), m.resolution());
  return inverse_fourier(m.extend_to_window(lo, hi) * ph.refine(lo, hi));
}

}  // namespace vilenkin
