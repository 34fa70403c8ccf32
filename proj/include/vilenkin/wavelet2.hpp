#pragma once
// Frame wavelet construction on the Cantor dyadic group (p = 2).
//
// For a generator phi with refinement filter m, the fiber of V_1 at w splits
// by the parity of the lattice index into an even part (norm P_phi(sw)) and
// an odd part (norm P_phi(sw + 0.1)), where s is the contractive shift.  The
// wavelet fiber is the orthogonal complement of the V_0 fiber inside V_1,
// assembled cell by cell; the certificate checks the resulting frame bounds
// and the fiberwise dimension bookkeeping.

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vilenkin/fmra.hpp"
#include "vilenkin/group.hpp"
#include "vilenkin/shift_invariant.hpp"
#include "vilenkin/stepfn.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin {

struct BlockedSetError : std::runtime_error {
  BlockedSetError(const std::string& what, PeriodicSet cells)
      : std::runtime_error(what), blocked(std::move(cells)) {}
  PeriodicSet blocked;
};

inline constexpr double kZeroTol = 1e-12;

namespace detail {

inline void require_cantor(int p) {
  if (p != 2) throw std::domain_error("wavelet construction requires p = 2");
}

// The dual element 0.1: digit 1 at index 1.
inline GroupElement half_point() {
  return GroupElement::from_digits(2, Side::dual, {{1, 1}});
}

}  // namespace detail

struct FiberDecomposition {
  GroupElement base;
  std::map<std::uint64_t, std::complex<double>> a;       // phi-hat(s(w+n))
  std::map<std::uint64_t, std::complex<double>> a_even;  // n with n_0 = 0
  std::map<std::uint64_t, std::complex<double>> a_odd;
  std::map<std::uint64_t, std::complex<double>> b;       // sign (a_even - a_odd)
  std::map<std::uint64_t, std::complex<double>> c;       // filtered fiber, spans V_0 part
  std::complex<double> m_even{};                         // m(sw)
  std::complex<double> m_odd{};                          // m(sw + 0.1)
  double even_norm_sq = 0.0;
  double odd_norm_sq = 0.0;
};

inline FiberDecomposition fiber_decomposition(const StepFunction& phi, const FilterSpec& m,
                                              const GroupElement& omega) {
  const StepFunction ph = hat(phi);
  detail::require_cantor(ph.modulus());
  if (m.modulus() != 2 || m.side() != Side::dual || omega.modulus() != 2 ||
      omega.side() != Side::dual)
    throw std::domain_error("fiber decomposition needs dual p = 2 data");
  FiberDecomposition fd{omega, {}, {}, {}, {}, {}, {}, {}, 0.0, 0.0};
  const GroupElement contracted = shift_auto(omega, -1);
  fd.m_even = m.eval(contracted);
  fd.m_odd = m.eval(add(contracted, detail::half_point()));
  const double sign = (omega.digit(0) == 0) ? 1.0 : -1.0;
  const std::uint64_t count =
      std::uint64_t{1} << std::max(0, 1 - static_cast<int>(ph.window_lo()));
  for (std::uint64_t beta = 0; beta < count; ++beta) {
    const GroupElement n = h_of(beta, 2, Side::dual);
    const auto v = ph.evaluate(shift_auto(add(omega, n), -1));
    if (v == std::complex<double>{}) continue;
    fd.a[beta] = v;
    if (beta & 1) {
      fd.a_odd[beta] = v;
      fd.odd_norm_sq += std::norm(v);
      fd.b[beta] = -sign * v;
      if (fd.m_odd != std::complex<double>{}) fd.c[beta] = fd.m_odd * v;
    } else {
      fd.a_even[beta] = v;
      fd.even_norm_sq += std::norm(v);
      fd.b[beta] = sign * v;
      if (fd.m_even != std::complex<double>{}) fd.c[beta] = fd.m_even * v;
    }
  }
  return fd;
}

struct DeltaReport {
  PeriodicSet delta2;   // both parity norms positive: fiber dimension 2
  PeriodicSet delta1;   // exactly one positive
  PeriodicSet eta_v0;   // spectrum of the generator
  std::vector<int> dims;
  int resolution;
};

inline DeltaReport delta_sets(const StepFunction& phi) {
  const StepFunction ph = hat(phi);
  detail::require_cantor(ph.modulus());
  const FilterSpec P = periodization(ph);
  const int R = std::max({static_cast<int>(ph.window_hi()), P.resolution(), 2});
  const StepFunction probe(2, Side::dual, 0, R);
  const GroupElement half = detail::half_point();
  std::vector<std::uint64_t> two, one;
  std::vector<int> dims(static_cast<std::size_t>(probe.span()));
  for (std::uint64_t s = 0; s < probe.span(); ++s) {
    const GroupElement contracted = shift_auto(probe.cell_representative(s), -1);
    const int d = (P.eval(contracted).real() > kZeroTol) +
                  (P.eval(add(contracted, half)).real() > kZeroTol);
    dims[static_cast<std::size_t>(s)] = d;
    if (d == 2) two.push_back(s);
    if (d == 1) one.push_back(s);
  }
  return DeltaReport{PeriodicSet(2, Side::dual, R, std::move(two)),
                     PeriodicSet(2, Side::dual, R, std::move(one)),
                     P.support().refine(R), std::move(dims), R};
}

namespace detail {

// Cells of delta2 where both half-filter values vanish.
inline PeriodicSet blocked_cells(const PeriodicSet& delta2, const FilterSpec& m) {
  const int R = std::max(delta2.resolution(), m.resolution());
  const PeriodicSet d2 = delta2.refine(R);
  const StepFunction probe(2, Side::dual, 0, R);
  const GroupElement half = half_point();
  std::vector<std::uint64_t> out;
  for (auto s : d2.patterns()) {
    const GroupElement contracted = shift_auto(probe.cell_representative(s), -1);
    if (std::abs(m.eval(contracted)) <= kZeroTol &&
        std::abs(m.eval(add(contracted, half))) <= kZeroTol)
      out.push_back(s);
  }
  return PeriodicSet(2, Side::dual, R, std::move(out));
}

}  // namespace detail

// The obstruction set to a single-generator wavelet space, with its measure.
inline std::pair<PeriodicSet, double> blocked_set(const StepFunction& phi,
                                                  const FilterSpec& m) {
  detail::require_cantor(m.modulus());
  const double residual = check_refinement(phi, m);
  if (residual > kChainedTol)
    throw NotInSpaceError("filter does not refine the generator (residual " +
                          format_double(residual) + ")");
  const PeriodicSet E = detail::blocked_cells(delta_sets(phi).delta2, m);
  return {E, E.measure()};
}

struct RegionCheck {
  double max_violation = 0.0;
  bool support_ok = false;
  PeriodicSet eta_w0;
};

// Regionwise periodization bounds for the wavelet: [C^3, D^3] on delta2,
// [C, D] on delta1 off the generator spectrum, zero elsewhere.
inline RegionCheck wavelet_frame_check(const StepFunction& psi, double C, double D,
                                       const DeltaReport& deltas) {
  const FilterSpec P = periodization(psi);
  const int R = std::max(P.resolution(), deltas.resolution);
  const PeriodicSet d2 = deltas.delta2.refine(R);
  const PeriodicSet free1 =
      set_difference(deltas.delta1.refine(R), deltas.eta_v0.refine(R));
  const double C3 = C * C * C, D3 = D * D * D;
  double worst = 0.0;
  const std::uint64_t span = ipow(std::uint64_t{2}, R);
  for (std::uint64_t s = 0; s < span; ++s) {
    const double v = P.value_at_pattern(s, R).real();
    double violation;
    if (d2.contains_pattern(s, R)) {
      violation = std::max({C3 - v, v - D3, 0.0});
    } else if (free1.contains_pattern(s, R)) {
      violation = std::max({C - v, v - D, 0.0});
    } else {
      violation = std::abs(v);
    }
    worst = std::max(worst, violation);
  }
  RegionCheck out{worst, false, set_union(d2, free1)};
  out.support_ok = P.support() == out.eta_w0;
  return out;
}

struct OrthogonalityCheck {
  double residual = 0.0;  // max |<filtered fiber, wavelet fiber>|
  bool dims_ok = false;
  PeriodicSet failures;
};

// The wavelet fiber must be orthogonal to the V_0 fiber inside V_1, and the
// fiber dimensions must satisfy dim V_1 = dim V_0 + dim W_0 on every cell.
inline OrthogonalityCheck fiber_orthogonality_check(const StepFunction& phi,
                                                    const FilterSpec& m,
                                                    const StepFunction& psi) {
  const StepFunction ph = hat(phi);
  const StepFunction psih = hat(psi);
  detail::require_cantor(ph.modulus());
  const FilterSpec P = periodization(ph);
  const int R = std::max({static_cast<int>(ph.window_hi()), P.resolution(), m.resolution(),
                          static_cast<int>(psih.window_hi()), 2});
  const StepFunction probe(2, Side::dual, 0, R);
  double worst = 0.0;
  bool dims_ok = true;
  std::vector<std::uint64_t> failures;
  for (std::uint64_t s = 0; s < probe.span(); ++s) {
    const GroupElement w = probe.cell_representative(s);
    const FiberDecomposition fd = fiber_decomposition(ph, m, w);
    const Fiber pf = fiber(psih, w);
    std::complex<double> ip{};
    for (const auto& [beta, v] : fd.c) {
      const auto it = pf.entries.find(beta);
      if (it != pf.entries.end()) ip += v * std::conj(it->second);
    }
    worst = std::max(worst, std::abs(ip));
    const int dim_v1 =
        (fd.even_norm_sq > kZeroTol) + (fd.odd_norm_sq > kZeroTol);
    const int dim_v0 = (P.eval(w).real() > kZeroTol) ? 1 : 0;
    int dim_w0 = 0;
    for (const auto& [beta, v] : pf.entries)
      if (std::abs(v) > kZeroTol) {
        dim_w0 = 1;
        break;
      }
    if (dim_v1 != dim_v0 + dim_w0) {
      dims_ok = false;
      failures.push_back(s);
    }
  }
  return OrthogonalityCheck{worst, dims_ok, PeriodicSet(2, Side::dual, R, std::move(failures))};
}

struct WaveletCertificate {
  StepFunction psi;        // primal-side wavelet
  StepFunction psi_hat;
  FilterSpec m_psi;        // restriction to the fundamental domain
  double input_lower, input_upper;
  double output_lower, output_upper;  // min(C, C^3), max(D, D^3)
  double region_violation;
  double orthogonality_residual;
  bool support_ok;
  bool dims_ok;
  DeltaReport deltas;
  PeriodicSet eta_w0;
  bool passed;
};

inline WaveletCertificate construct_wavelet(const StepFunction& phi, const FilterSpec& m,
                                            double C, double D) {
  const StepFunction ph = hat(phi);
  detail::require_cantor(ph.modulus());
  const auto [blocked, blocked_measure] = blocked_set(ph, m);
  if (!blocked.is_empty())
    throw BlockedSetError("wavelet space is not singly generated: blocked cells of measure " +
                              format_double(blocked_measure),
                          blocked);
  DeltaReport deltas = delta_sets(ph);
  const int R = std::max(deltas.resolution, m.resolution());
  const PeriodicSet d2 = deltas.delta2.refine(R);
  const PeriodicSet free1 =
      set_difference(deltas.delta1.refine(R), deltas.eta_v0.refine(R));
  const StepFunction probe(2, Side::dual, 0, R);
  StepFunction out(2, Side::dual,
                   std::min<std::int32_t>(ph.window_lo() - 1, 0), R);
  StepFunction::Table table;
  StepFunction::Table mtable;
  for (std::uint64_t s = 0; s < probe.span(); ++s) {
    const GroupElement w = probe.cell_representative(s);
    const bool two = d2.contains_pattern(s, R);
    const bool fresh = free1.contains_pattern(s, R);
    if (!two && !fresh) continue;
    const FiberDecomposition fd = fiber_decomposition(ph, m, w);
    for (const auto& [beta, v] : fd.a) {
      std::complex<double> val;
      if (two) {
        val = (beta & 1) ? -std::conj(fd.m_even) * fd.even_norm_sq * v
                         : std::conj(fd.m_odd) * fd.odd_norm_sq * v;
      } else {
        val = v;
      }
      if (val == std::complex<double>{}) continue;
      std::uint64_t idx;
      out.locate(add(w, h_of(beta, 2, Side::dual)), idx);
      table.emplace_back(idx, val);
    }
    const std::complex<double> mv =
        two ? std::conj(fd.m_odd) * fd.odd_norm_sq : std::complex<double>{1.0, 0.0};
    if (mv != std::complex<double>{}) mtable.emplace_back(s, mv);
  }
  StepFunction psih = StepFunction::from_cells(2, Side::dual, out.window_lo(),
                                               out.window_hi(), std::move(table));
  FilterSpec m_psi(StepFunction::from_cells(2, Side::dual, 0, R, std::move(mtable)));
  const RegionCheck region = wavelet_frame_check(psih, C, D, deltas);
  const OrthogonalityCheck orth = fiber_orthogonality_check(ph, m, psih);
  const double C3 = C * C * C, D3 = D * D * D;
  const bool passed = region.max_violation <= kResidualTol && region.support_ok &&
                      orth.residual <= kResidualTol && orth.dims_ok;
  return WaveletCertificate{inverse_fourier(psih),
                            std::move(psih),
                            std::move(m_psi),
                            C,
                            D,
                            std::min(C, C3),
                            std::max(D, D3),
                            region.max_violation,
                            orth.residual,
                            region.support_ok,
                            orth.dims_ok,
                            std::move(deltas),
                            region.eta_w0,
                            passed};
}

struct ExistenceReport {
  bool cond_i = false;        // half-filter values not simultaneously zero on delta2
  bool cond_ii = false;       // C/D <= |m_e|^2 + |m_o|^2 <= D/C on delta2
  bool equivalent = false;
  double band_lo = 0.0, band_hi = 0.0;
  PeriodicSet violations_i;
  PeriodicSet violations_ii;
  double two_scale_residual = 0.0;       // two-scale periodization identity
  double alt_refinement_residual = 0.0;  // residual of the perturbed filter
  PeriodicSet alt_blocked;               // blocked set of the perturbed filter
  double alt_blocked_measure = 0.0;
};

// Wavelet existence conditions, checked cell-exactly on delta2, plus the
// two-scale identity P_phi(w) = |m_e|^2 P_phi(sw) + |m_o|^2 P_phi(sw + 0.1)
// on every cell, and a rerun of condition (i) against a filter perturbed on
// the zero set of the periodization (which cannot change the blocked set).
inline ExistenceReport existence_conditions(const StepFunction& phi, const FilterSpec& m,
                                            double C, double D) {
  const StepFunction ph = hat(phi);
  detail::require_cantor(ph.modulus());
  const DeltaReport deltas = delta_sets(ph);
  const FilterSpec P = periodization(ph);
  const int R = std::max(deltas.resolution, m.resolution());
  const PeriodicSet d2 = deltas.delta2.refine(R);
  const StepFunction probe(2, Side::dual, 0, R);
  const GroupElement half = detail::half_point();
  const double lo_band = (D > 0.0) ? C / D : 0.0;
  const double hi_band = (C > 0.0) ? D / C : 0.0;
  std::vector<std::uint64_t> bad_i, bad_ii;
  double two_scale = 0.0;
  for (std::uint64_t s = 0; s < probe.span(); ++s) {
    const GroupElement w = probe.cell_representative(s);
    const GroupElement contracted = shift_auto(w, -1);
    const std::complex<double> me = m.eval(contracted);
    const std::complex<double> mo = m.eval(add(contracted, half));
    const double lhs = P.eval(w).real();
    const double rhs = std::norm(me) * P.eval(contracted).real() +
                       std::norm(mo) * P.eval(add(contracted, half)).real();
    two_scale = std::max(two_scale, std::abs(lhs - rhs));
    if (!d2.contains_pattern(s, R)) continue;
    if (std::abs(me) <= kZeroTol && std::abs(mo) <= kZeroTol) bad_i.push_back(s);
    const double q = std::norm(me) + std::norm(mo);
    if (q < lo_band || q > hi_band) bad_ii.push_back(s);
  }
  PeriodicSet vi(2, Side::dual, R, std::move(bad_i));
  PeriodicSet vii(2, Side::dual, R, std::move(bad_ii));

  const PeriodicSet zero = P.support().complement();
  const int rz = std::max(m.resolution(), zero.resolution());
  const FilterSpec alt(m.refine(rz).restriction() +
                       zero.refine(rz).to_indicator().scale({0.5, 0.0}));
  const double alt_residual = check_refinement(ph, alt);
  const PeriodicSet alt_blocked = detail::blocked_cells(deltas.delta2, alt);

  ExistenceReport rep{vi.is_empty(),
                      vii.is_empty(),
                      vi.is_empty() == vii.is_empty(),
                      lo_band,
                      hi_band,
                      std::move(vi),
                      std::move(vii),
                      two_scale,
                      alt_residual,
                      alt_blocked,
                      alt_blocked.measure()};
  return rep;
}

}  // namespace vilenkin
