#pragma once
// Shared test instances and generators.  Everything here is deterministic:
// generators take an explicit engine and all instances are constructed
// in-code (the files under samples/ mirror them byte for byte).

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "vilenkin/vilenkin.hpp"

namespace fixtures {

using namespace vilenkin;
using Coeff = StepFunction::Coeff;

// phi = 1_U, the orthonormal scaling function of the dyadic ladder.
inline StepFunction haar() {
  return StepFunction::indicator(CosetId(2, Side::primal, 0, 0, {}));
}

// phi = (1/2) 1_{U_{-1}}; Parseval with spectrum a strict half of the domain.
inline StepFunction halfband() {
  return StepFunction::indicator(CosetId(2, Side::primal, -1, -1, {})).scale({0.5, 0.0});
}

// Frame generator with bounds [1/4, 1]: refinable but not Parseval.
inline StepFunction nonparseval() {
  StepFunction::Table t;
  t.emplace_back(0, Coeff{0.75, 0.0});
  t.emplace_back(1, Coeff{0.25, 0.0});
  return StepFunction::from_cells(2, Side::primal, -1, 0, std::move(t));
}

// Parseval pair whose blocked set is {100, 101} (measure 1/4): phi-hat is the
// indicator of six res-3 cells and m its exact minimal filter.
inline StepFunction blocked_phihat() {
  StepFunction::Table t;
  for (std::uint64_t s : {0ull, 1ull, 2ull, 3ull, 6ull, 7ull}) t.emplace_back(s, Coeff{1.0, 0.0});
  return StepFunction::from_cells(2, Side::dual, 0, 3, std::move(t));
}

inline FilterSpec blocked_m() {
  StepFunction::Table t;
  for (std::uint64_t s : {0ull, 1ull, 3ull}) t.emplace_back(s, Coeff{1.0, 0.0});
  return FilterSpec(StepFunction::from_cells(2, Side::dual, 0, 3, std::move(t)));
}

inline PeriodicSet blocked_cells_expected() {
  return PeriodicSet(2, Side::dual, 3, {4, 5});
}

// Random step function: each cell independently nonzero with the given
// density, coefficients uniform in the unit square.
inline StepFunction random_step(std::mt19937_64& rng, int p, Side side, std::int32_t lo,
                                std::int32_t hi, double density = 0.5) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  StepFunction probe(p, side, lo, hi);
  StepFunction::Table t;
  for (std::uint64_t idx = 0; idx < probe.span(); ++idx)
    if (keep(rng)) t.emplace_back(idx, Coeff{unit(rng), unit(rng)});
  return StepFunction::from_cells(p, side, lo, hi, std::move(t));
}

// Random Parseval generator, returned as phi-hat: for each pattern of a
// random nonempty subset of the res-r cells, exactly one lattice translate
// carries a fourth-root-of-unity phase, so P is exactly a 0/1 indicator.
inline StepFunction random_parseval_hat(std::mt19937_64& rng, int p, int r,
                                        std::int32_t lo = -2) {
  static const Coeff phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const std::uint64_t span = ipow(static_cast<std::uint64_t>(p), r);
  const std::uint64_t lift = ipow(static_cast<std::uint64_t>(p), -lo);
  std::bernoulli_distribution keep(0.6);
  std::uniform_int_distribution<std::uint64_t> translate(0, lift - 1);
  std::uniform_int_distribution<int> phase(0, 3);
  StepFunction::Table t;
  for (std::uint64_t s = 0; s < span; ++s)
    if (keep(rng)) t.emplace_back(translate(rng) * span + s, phases[phase(rng)]);
  if (t.empty()) t.emplace_back(0, phases[0]);
  return StepFunction::from_cells(p, Side::dual, lo, r, std::move(t));
}

// A deterministic family of dual-side filters at the given resolution:
// the zero filter, the constant 1, every single-cell indicator, and a few
// seeded complex-valued ones.
inline std::vector<FilterSpec> filter_family(int p, int r, unsigned seed) {
  std::vector<FilterSpec> out;
  out.push_back(FilterSpec::constant(p, Side::dual, {0.0, 0.0}));
  out.push_back(FilterSpec::constant(p, Side::dual, {1.0, 0.0}));
  const std::uint64_t span = ipow(static_cast<std::uint64_t>(p), r);
  for (std::uint64_t s = 0; s < span; ++s) {
    StepFunction::Table t;
    t.emplace_back(s, Coeff{1.0, 0.0});
    out.push_back(FilterSpec(StepFunction::from_cells(p, Side::dual, 0, r, std::move(t))));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < 4; ++k) {
    StepFunction::Table t;
    for (std::uint64_t s = 0; s < span; ++s) t.emplace_back(s, Coeff{unit(rng), unit(rng)});
    out.push_back(FilterSpec(StepFunction::from_cells(p, Side::dual, 0, r, std::move(t))));
  }
  return out;
}

// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.  Small and
// slow; used as an oracle independent of the bracket fold.
inline std::vector<double> hermitian_eigenvalues(std::vector<std::vector<Coeff>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += std::norm(a[i][j]);
    if (off <= 1e-26) break;
    for (std::size_t pi = 0; pi < n; ++pi) {
      for (std::size_t q = pi + 1; q < n; ++q) {
        const Coeff apq = a[pi][q];
        if (std::abs(apq) <= 1e-15) continue;
        // Factor out the phase of a_pq, then apply a real rotation; the
        // combined unitary is J = diag(1, conj(u)) R(theta).
        const Coeff u = apq / std::abs(apq);
        const double app = a[pi][pi].real(), aqq = a[q][q].real();
        const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t k = 0; k < n; ++k) {
          const Coeff akp = a[k][pi], akq = a[k][q];
          a[k][pi] = c * akp + s * std::conj(u) * akq;
          a[k][q] = -s * akp + c * std::conj(u) * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Coeff apk = a[pi][k], aqk = a[q][k];
          a[pi][k] = c * apk + s * u * aqk;
          a[q][k] = -s * apk + c * u * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i].real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Gram matrix of the first p^K lattice translates of phi.
inline std::vector<std::vector<Coeff>> translate_gram(const StepFunction& phi, int K) {
  const std::uint64_t n = ipow(static_cast<std::uint64_t>(phi.modulus()), K);
  std::vector<std::vector<Coeff>> g(n, std::vector<Coeff>(n));
  std::vector<StepFunction> tr;
  tr.reserve(n);
  for (std::uint64_t a = 0; a < n; ++a)
    tr.push_back(phi.translate(h_of(a, phi.modulus(), phi.side())));
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) g[a][b] = inner_product(tr[a], tr[b]);
  return g;
}

}  // namespace fixtures
