#pragma once
// Frame multiresolution analysis: refinement filters, the low-pass identity,
// scaling-function verdicts, and the lift of a Parseval FMRA to an MRA with
// orthonormal translates.
//
// Throughout, B is the expansive dual shift automorphism and composition
// with B^k is StepFunction::window_shift(k).  A filter m refines phi when
// phi-hat(Bw) = m(w) phi-hat(w) everywhere.

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vilenkin/group.hpp"
#include "vilenkin/shift_invariant.hpp"
#include "vilenkin/stepfn.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin {

struct NotInSpaceError : std::runtime_error {
  explicit NotInSpaceError(const std::string& what) : std::runtime_error(what) {}
};
struct NotParsevalError : std::runtime_error {
  explicit NotParsevalError(const std::string& what) : std::runtime_error(what) {}
};
struct StrataCoverageError : std::runtime_error {
  StrataCoverageError(const std::string& what, PeriodicSet uncovered_cells)
      : std::runtime_error(what), uncovered(std::move(uncovered_cells)) {}
  PeriodicSet uncovered;
};

inline constexpr double kResidualTol = 1e-12;
inline constexpr double kChainedTol = 1e-9;

// Max over cells of |phi-hat(Bw) - m(w) phi-hat(w)|.
inline double check_refinement(const StepFunction& phi, const FilterSpec& m) {
  const StepFunction ph = hat(phi);
  if (ph.modulus() != m.modulus() || m.side() != Side::dual)
    throw std::domain_error("filter/function mismatch");
  if (ph.is_zero()) return 0.0;
  const std::int32_t lo = std::min<std::int32_t>(ph.window_lo(), 0);
  const std::int32_t hi =
      std::max<std::int32_t>(ph.window_hi() + 1, m.resolution());
  const StepFunction lhs = ph.window_shift(1);
  const StepFunction rhs = m.extend_to_window(lo, hi) * ph;
  return max_abs_diff(lhs, rhs);
}

// The bracket filter [f-hat(B^j .), phi-hat] / P_phi, zero where P_phi
// vanishes.  For Parseval phi the division is a no-op on the support.  The
// result is verified a posteriori: if f is not in the dilated space V_j the
// residual exceeds the tolerance and the call fails.
inline FilterSpec minimal_filter(const StepFunction& phi, const StepFunction& f, int j) {
  const StepFunction ph = hat(phi);
  const StepFunction g = hat(f).window_shift(j);
  const FilterSpec num = bracket(g, ph, Lattice::Hperp);
  const FilterSpec P = bracket(ph, ph, Lattice::Hperp);
  const int r = std::max(num.resolution(), P.resolution());
  const StepFunction numr = num.restriction().refine(0, r);
  StepFunction::Table table;
  for (const auto& [idx, v] : numr.cells()) {
    // Every nonzero bracket cell carries a phi-hat factor, so P > 0 there.
    table.emplace_back(idx, v / P.value_at_pattern(idx, r).real());
  }
  FilterSpec m(StepFunction::from_cells(ph.modulus(), Side::dual, 0, r, std::move(table)));
  if (!ph.is_zero()) {
    const std::int32_t lo = std::min<std::int32_t>({ph.window_lo(), g.window_lo(), 0});
    const std::int32_t hi = std::max<std::int32_t>({g.window_hi(), m.resolution()});
    const double residual = max_abs_diff(g, m.extend_to_window(lo, hi) * ph);
    if (residual > kChainedTol)
      throw NotInSpaceError("function is not in the dilated space V_j (residual " +
                            format_double(residual) + ")");
  }
  return m;
}

// Max residual of: sum over digit values z of |m(w (+) 0.z)|^2 equals the
// indicator of the spectrum at Bw.  Holds exactly when m is the minimal
// low-pass filter of a Parseval frame generator.
inline double lowpass_identity(const StepFunction& phi, const FilterSpec& m,
                               int min_resolution = 1) {
  const FrameReport report = frame_report(phi);
  if (!report.frame || !report.parseval)
    throw NotParsevalError("low-pass identity requires a Parseval frame generator");
  const PeriodicSet E = report.gramian.support();
  const int p = m.modulus();
  const int R = std::max({m.resolution(), E.resolution() + 1, min_resolution, 1});
  const std::uint64_t half = ipow(static_cast<std::uint64_t>(p), R - 1);
  double worst = 0.0;
  // Neither side depends on digit 1 of w, so only the trailing digits vary.
  for (std::uint64_t rest = 0; rest < half; ++rest) {
    double lhs = 0.0;
    for (int z = 0; z < p; ++z)
      lhs += std::norm(m.value_at_pattern(static_cast<std::uint64_t>(z) * half + rest, R));
    const double rhs = E.contains_pattern(rest, R - 1) ? 1.0 : 0.0;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// A member of V_1 with prescribed filter: the inverse transform of
// (m phi-hat) composed with B^{-1}.
inline StepFunction synthesize_v1(const FilterSpec& m, const StepFunction& phi) {
  const StepFunction ph = hat(phi);
  if (m.modulus() != ph.modulus() || m.side() != Side::dual)
    throw std::domain_error("filter/function mismatch");
  const std::int32_t lo = std::min<std::int32_t>(ph.window_lo(), 0);
  const std::int32_t hi = std::max<std::int32_t>(ph.window_hi(), m.resolution());
  return inverse_fourier((m.extend_to_window(lo, hi) * ph.refine(lo, hi)).window_shift(-1));
}

// Max residual of the bracket splitting identity
//   [f1-hat, f2-hat](Bw) = sum_z m1 conj(m2) P_phi at w (+) 0.z,
// for f_i with f_i-hat o B = m_i phi-hat (verified first).
inline double bracket_split_check(const StepFunction& f1, const StepFunction& f2,
                                  const FilterSpec& m1, const FilterSpec& m2,
                                  const StepFunction& phi) {
  const StepFunction ph = hat(phi);
  const int p = ph.modulus();
  const StepFunction fh1 = hat(f1), fh2 = hat(f2);
  const auto check_premise = [&ph](const StepFunction& fh, const FilterSpec& m) {
    if (ph.is_zero() && fh.is_zero()) return;
    const std::int32_t lo = std::min<std::int32_t>({ph.window_lo(), fh.window_lo() + 1, 0});
    const std::int32_t hi =
        std::max<std::int32_t>({ph.window_hi(), fh.window_hi() + 1, m.resolution()});
    const double res = max_abs_diff(fh.window_shift(1), m.extend_to_window(lo, hi) * ph);
    if (res > kChainedTol)
      throw NotInSpaceError("factorization premise fails (residual " + format_double(res) +
                            ")");
  };
  check_premise(fh1, m1);
  check_premise(fh2, m2);
  const FilterSpec lhs = bracket(fh1, fh2, Lattice::Hperp);
  const FilterSpec P = bracket(ph, ph, Lattice::Hperp);
  const int R = std::max({lhs.resolution() + 1, m1.resolution(), m2.resolution(),
                          P.resolution(), 1});
  const std::uint64_t half = ipow(static_cast<std::uint64_t>(p), R - 1);
  const std::uint64_t drop = ipow(static_cast<std::uint64_t>(p),
                                  R - 1 - lhs.resolution());
  double worst = 0.0;
  for (std::uint64_t rest = 0; rest < half; ++rest) {
    // Bw reads digits 2..r+1 of w; both sides ignore digit 1.
    const std::complex<double> left = lhs.value_at_pattern(rest / drop, lhs.resolution());
    std::complex<double> right{};
    for (int z = 0; z < p; ++z) {
      const std::uint64_t pat = static_cast<std::uint64_t>(z) * half + rest;
      right += m1.value_at_pattern(pat, R) * std::conj(m2.value_at_pattern(pat, R)) *
               P.value_at_pattern(pat, R).real();
    }
    worst = std::max(worst, std::abs(left - right));
  }
  return worst;
}

// Per-j maximum of | |phi-hat(B^{-j} w)| - 1 | over the fundamental domain.
inline std::vector<double> limit_modulus(const StepFunction& phi, int j_max) {
  const StepFunction ph = hat(phi);
  const int R = std::max<int>(ph.window_hi(), 1);
  const StepFunction probe(ph.modulus(), Side::dual, 0, R);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) {
    double worst = 0.0;
    for (std::uint64_t idx = 0; idx < probe.span(); ++idx) {
      const GroupElement w = probe.cell_representative(idx);
      worst = std::max(worst,
                       std::abs(std::abs(ph.evaluate(shift_auto(w, -j))) - 1.0));
    }
    out.push_back(worst);
  }
  return out;
}

enum class ScalingKind { MRA, ParsevalFMRA };

struct ScalingReport {
  ScalingKind kind;
  bool periodization_ok = false;   // P = 1 (MRA) / P = indicator of its support (FMRA)
  bool limit_ok = false;           // |phi-hat(B^{-j}w)| reaches 1
  int limit_depth = -1;
  std::vector<double> limit_deviations;
  bool filter_ok = false;          // a refinement filter exists
  double refinement_residual = 0.0;
  std::optional<FilterSpec> filter;
  bool passed = false;
};

inline ScalingReport scaling_checks(const StepFunction& phi, ScalingKind kind) {
  ScalingReport rep;
  rep.kind = kind;
  const FrameReport frame = frame_report(phi);
  rep.periodization_ok =
      (kind == ScalingKind::MRA) ? frame.orthonormal : (frame.frame && frame.parseval);
  const StepFunction ph = hat(phi);
  const int cap = std::max<int>(ph.window_hi(), 0);
  rep.limit_deviations = limit_modulus(phi, cap);
  for (int j = 0; j <= cap; ++j) {
    if (rep.limit_deviations[static_cast<std::size_t>(j)] <= kResidualTol) {
      rep.limit_ok = true;
      rep.limit_depth = j;
      break;
    }
  }
  try {
    FilterSpec m = minimal_filter(phi, phi, 1);
    rep.refinement_residual = check_refinement(phi, m);
    rep.filter_ok = rep.refinement_residual <= kResidualTol;
    rep.filter = std::move(m);
  } catch (const NotInSpaceError&) {
    rep.filter_ok = false;
  }
  rep.passed = rep.periodization_ok && rep.limit_ok && rep.filter_ok;
  return rep;
}

struct MRALift {
  StepFunction varphi;       // primal-side lifted generator
  StepFunction varphi_hat;
  FilterSpec m_varphi;
  std::vector<PeriodicSet> strata;   // depth classes E_0, E_1, ...
  std::vector<int> depth;            // per pattern at the strata resolution
  int resolution;
  double refinement_residual;
};

// Lifts a Parseval FMRA generator to an MRA generator: each cell of the
// fundamental domain is assigned the first depth j at which the contracted
// fiber is nonzero, and the fiber of phi-hat at B^{-j}w is transplanted onto
// the coset tree above w.  The result has unit periodization, so its
// translates are orthonormal.
inline MRALift fmra_to_mra(const StepFunction& phi) {
  const ScalingReport sc = scaling_checks(phi, ScalingKind::ParsevalFMRA);
  if (!sc.periodization_ok)
    throw NotParsevalError("input does not generate a Parseval frame");
  if (!sc.filter_ok)
    throw NotParsevalError("input has no exact refinement filter");
  const StepFunction ph = hat(phi);
  const int p = ph.modulus();
  const FilterSpec P = periodization(ph);
  const PeriodicSet eta = P.support();
  const int R = P.resolution();
  const std::uint64_t span = ipow(static_cast<std::uint64_t>(p), R);

  // Depth search: P(B^{-j}w) reads the pattern with j leading zeros, and is
  // constant in j once j >= R, so the search below is exhaustive.
  std::vector<int> depth(static_cast<std::size_t>(span), -1);
  int max_depth = 0;
  std::vector<std::uint64_t> uncovered;
  for (std::uint64_t s = 0; s < span; ++s) {
    for (int j = 0; j <= R; ++j) {
      const std::uint64_t contracted = s / ipow(static_cast<std::uint64_t>(p), j);
      if (eta.contains_pattern(contracted, R)) {
        depth[static_cast<std::size_t>(s)] = j;
        max_depth = std::max(max_depth, j);
        break;
      }
    }
    if (depth[static_cast<std::size_t>(s)] < 0) uncovered.push_back(s);
  }
  if (!uncovered.empty())
    throw StrataCoverageError(
        "limit condition unmet at resolution " + std::to_string(R),
        PeriodicSet(p, Side::dual, R, std::move(uncovered)));

  std::vector<PeriodicSet> strata;
  for (int j = 0; j <= max_depth; ++j) {
    std::vector<std::uint64_t> cells;
    for (std::uint64_t s = 0; s < span; ++s)
      if (depth[static_cast<std::size_t>(s)] == j) cells.push_back(s);
    strata.emplace_back(p, Side::dual, R, std::move(cells));
  }

  // Fiber transplant.  For a cell at depth j, the translate lattice above it
  // is B^j H-perp; entry h of the source fiber lands on the translate B^j h.
  const std::int32_t lo =
      std::min<std::int32_t>(0, ph.window_lo() - static_cast<std::int32_t>(max_depth));
  StepFunction out(p, Side::dual, lo, R);
  const StepFunction probe(p, Side::dual, 0, R);
  const std::uint64_t betas =
      ipow(static_cast<std::uint64_t>(p), std::max(0, -ph.window_lo()));
  StepFunction::Table table;
  for (std::uint64_t s = 0; s < span; ++s) {
    const int j = depth[static_cast<std::size_t>(s)];
    const GroupElement w = probe.cell_representative(s);
    const GroupElement base = shift_auto(w, -j);
    for (std::uint64_t beta = 0; beta < betas; ++beta) {
      const GroupElement h = h_of(beta, p, Side::dual);
      const auto v = ph.evaluate(add(base, h));
      if (v == std::complex<double>{}) continue;
      std::uint64_t idx;
      out.locate(add(w, shift_auto(h, j)), idx);
      table.emplace_back(idx, v);
    }
  }
  StepFunction vhat = StepFunction::from_cells(p, Side::dual, out.window_lo(),
                                               out.window_hi(), std::move(table));

  // Piecewise filter: the original filter survives where the spectrum meets
  // its own shift preimage; on the half band through fresh cells the filter
  // is 1; everywhere else 0.
  const FilterSpec m_phi = *sc.filter;
  const PeriodicSet pre = eta.preimage_under_shift();
  const PeriodicSet pre_c = eta.complement().preimage_under_shift();
  const PeriodicSet band = PeriodicSet::lower_halfband(p, Side::dual);
  const PeriodicSet keep = set_intersection(eta, pre);
  const PeriodicSet fresh = set_union(
      set_intersection(set_intersection(eta, pre_c), band),
      set_intersection(set_difference(eta.complement(), pre), band));
  const int rm = std::max({m_phi.resolution(), R + 1, 1});
  StepFunction::Table mtable;
  for (std::uint64_t idx = 0; idx < ipow(static_cast<std::uint64_t>(p), rm); ++idx) {
    std::complex<double> v{};
    if (keep.contains_pattern(idx, rm)) {
      v = m_phi.value_at_pattern(idx, rm);
    } else if (fresh.contains_pattern(idx, rm)) {
      v = 1.0;
    }
    if (v != std::complex<double>{}) mtable.emplace_back(idx, v);
  }
  FilterSpec m_new(StepFunction::from_cells(p, Side::dual, 0, rm, std::move(mtable)));

  const double residual = check_refinement(vhat, m_new);
  return MRALift{inverse_fourier(vhat), std::move(vhat),    std::move(m_new),
                 std::move(strata),     std::move(depth),   R,
                 residual};
}

}  // namespace vilenkin
