// Dyadic wavelet construction: fiber decompositions, dimension sets, the
// blocked-set obstruction, certificates, and the existence conditions.

#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "vilenkin/wavelet2.hpp"

#include "fixtures.hpp"

using namespace vilenkin;

namespace {

StepFunction::Coeff at(const std::map<std::uint64_t, StepFunction::Coeff>& m,
                       std::uint64_t k) {
  const auto it = m.find(k);
  return it == m.end() ? StepFunction::Coeff{} : it->second;
}

}  // namespace

TEST_CASE("fiber decomposition of the full-band generator") {
  const auto phi = fixtures::haar();
  const auto m = minimal_filter(phi, phi, 1);
  const auto fd = fiber_decomposition(phi, m, GroupElement::zero(2, Side::dual));
  REQUIRE(fd.m_even == StepFunction::Coeff{1.0, 0.0});
  REQUIRE(fd.m_odd == StepFunction::Coeff{});
  REQUIRE(fd.a.size() == 2);
  REQUIRE(at(fd.a, 0) == StepFunction::Coeff{1.0, 0.0});
  REQUIRE(at(fd.a, 1) == StepFunction::Coeff{1.0, 0.0});
  REQUIRE(fd.even_norm_sq == 1.0);
  REQUIRE(fd.odd_norm_sq == 1.0);
  REQUIRE(at(fd.b, 0) == StepFunction::Coeff{1.0, 0.0});
  REQUIRE(at(fd.b, 1) == StepFunction::Coeff{-1.0, 0.0});
  REQUIRE(fd.c.size() == 1);
  REQUIRE(at(fd.c, 0) == StepFunction::Coeff{1.0, 0.0});

  // the parity sign flips with digit zero of the base point
  const auto fd1 = fiber_decomposition(phi, m, parse_element("1.0", 2, Side::dual));
  REQUIRE(at(fd1.b, 0) == StepFunction::Coeff{-1.0, 0.0});
  REQUIRE(at(fd1.b, 1) == StepFunction::Coeff{1.0, 0.0});
}

TEST_CASE("dimension sets of the reference generators") {
  const auto d_haar = delta_sets(fixtures::haar());
  REQUIRE(d_haar.resolution == 2);
  REQUIRE(d_haar.delta2 == PeriodicSet::full(2, Side::dual, 2));
  REQUIRE(d_haar.delta1.is_empty());
  REQUIRE(d_haar.eta_v0 == PeriodicSet::full(2, Side::dual, 2));
  REQUIRE(d_haar.dims == std::vector<int>{2, 2, 2, 2});

  const auto d_half = delta_sets(fixtures::halfband());
  REQUIRE(d_half.delta2.is_empty());
  REQUIRE(d_half.delta1 == PeriodicSet::full(2, Side::dual, 2));
  REQUIRE(d_half.eta_v0 == PeriodicSet::lower_halfband(2, Side::dual));

  const auto d_np = delta_sets(fixtures::nonparseval());
  REQUIRE(d_np.delta2 == PeriodicSet::full(2, Side::dual, 2));
  REQUIRE(d_np.delta1.is_empty());

  const auto d_blocked = delta_sets(fixtures::blocked_phihat());
  REQUIRE(d_blocked.resolution == 3);
  REQUIRE(d_blocked.delta2 == PeriodicSet(2, Side::dual, 3, {4, 5, 6, 7}));
  REQUIRE(d_blocked.delta1 == PeriodicSet(2, Side::dual, 3, {0, 1, 2, 3}));
}

TEST_CASE("blocked set detection") {
  const auto [empty_haar, zero_measure] =
      blocked_set(fixtures::haar(), minimal_filter(fixtures::haar(), fixtures::haar(), 1));
  REQUIRE(empty_haar.is_empty());
  REQUIRE(zero_measure == 0.0);

  const auto [blocked, measure] = blocked_set(fixtures::blocked_phihat(), fixtures::blocked_m());
  REQUIRE(blocked == fixtures::blocked_cells_expected());
  REQUIRE(measure == 0.25);

  // a filter that does not refine the generator is rejected outright
  REQUIRE_THROWS_AS(blocked_set(fixtures::haar(), FilterSpec::constant(2, Side::dual, {0, 0})),
                    NotInSpaceError);
}

TEST_CASE("wavelet certificate for the full-band generator") {
  const auto phi = fixtures::haar();
  const auto m = minimal_filter(phi, phi, 1);
  const auto cert = construct_wavelet(phi, m, 1.0, 1.0);

  REQUIRE(cert.psi_hat.window_lo() == -1);
  REQUIRE(cert.psi_hat.window_hi() == 2);
  REQUIRE(cert.psi_hat.cells() ==
          StepFunction::Table{{4, {-1.0, 0.0}}, {5, {-1.0, 0.0}}, {6, {-1.0, 0.0}},
                              {7, {-1.0, 0.0}}});
  REQUIRE(cert.psi.cells() == StepFunction::Table{{0, {-1.0, 0.0}}, {1, {1.0, 0.0}}});
  REQUIRE(cert.m_psi.restriction().is_zero());

  REQUIRE(cert.output_lower == 1.0);
  REQUIRE(cert.output_upper == 1.0);
  REQUIRE(cert.region_violation == 0.0);
  REQUIRE(cert.orthogonality_residual == 0.0);
  REQUIRE(cert.support_ok);
  REQUIRE(cert.dims_ok);
  REQUIRE(cert.passed);
  REQUIRE(frame_report(cert.psi).orthonormal);
}

TEST_CASE("wavelet certificate for the half-band generator") {
  const auto phi = fixtures::halfband();
  const auto m = minimal_filter(phi, phi, 1);
  const auto cert = construct_wavelet(phi, m, 1.0, 1.0);

  REQUIRE(cert.psi_hat.window_lo() == 0);
  REQUIRE(cert.psi_hat.window_hi() == 2);
  REQUIRE(cert.psi_hat.cells() == StepFunction::Table{{2, {1.0, 0.0}}, {3, {1.0, 0.0}}});
  REQUIRE(cert.m_psi.restriction().cells() ==
          StepFunction::Table{{2, {1.0, 0.0}}, {3, {1.0, 0.0}}});
  REQUIRE(cert.output_lower == 1.0);
  REQUIRE(cert.output_upper == 1.0);
  REQUIRE(cert.region_violation == 0.0);
  REQUIRE(cert.orthogonality_residual == 0.0);
  REQUIRE(cert.support_ok);
  REQUIRE(cert.dims_ok);
  REQUIRE(cert.passed);
  REQUIRE(cert.eta_w0 == PeriodicSet(2, Side::dual, 2, {2, 3}));
}

TEST_CASE("wavelet certificate for the non-parseval generator") {
  const auto phi = fixtures::nonparseval();
  const auto m = minimal_filter(phi, phi, 1);
  const auto rep = frame_report(phi);
  const auto cert = construct_wavelet(phi, m, rep.lower, rep.upper);

  REQUIRE(cert.psi_hat.window_lo() == -1);
  REQUIRE(cert.psi_hat.window_hi() == 2);
  REQUIRE(cert.psi_hat.cells() ==
          StepFunction::Table{{4, {-0.5, 0.0}}, {5, {-0.5, 0.0}}, {6, {-0.25, 0.0}},
                              {7, {-0.25, 0.0}}});
  REQUIRE(cert.input_lower == 0.25);
  REQUIRE(cert.input_upper == 1.0);
  REQUIRE(cert.output_lower == 0.015625);
  REQUIRE(cert.output_upper == 1.0);
  REQUIRE(cert.region_violation == 0.0);
  REQUIRE(cert.orthogonality_residual == 0.0);
  REQUIRE(cert.passed);

  const auto pw = periodization(cert.psi_hat);
  REQUIRE(pw.value_at_pattern(0, 2) == StepFunction::Coeff{0.25, 0.0});
  REQUIRE(pw.value_at_pattern(1, 2) == StepFunction::Coeff{0.25, 0.0});
  REQUIRE(pw.value_at_pattern(2, 2) == StepFunction::Coeff{0.0625, 0.0});
  REQUIRE(pw.value_at_pattern(3, 2) == StepFunction::Coeff{0.0625, 0.0});
}

TEST_CASE("wavelet fiber follows the parity formula") {
  for (const auto& phi : {fixtures::haar(), fixtures::nonparseval()}) {
    const auto m = minimal_filter(phi, phi, 1);
    const auto rep = frame_report(phi);
    const auto cert = construct_wavelet(phi, m, rep.lower, rep.upper);
    const auto ph = hat(phi);
    const int R = cert.deltas.resolution;
    const StepFunction probe(2, Side::dual, 0, R);
    const std::uint64_t betas =
        std::uint64_t{1} << std::max(0, 1 - static_cast<int>(ph.window_lo()));
    for (auto s : cert.deltas.delta2.patterns()) {
      const GroupElement w = probe.cell_representative(s);
      const auto fd = fiber_decomposition(ph, m, w);
      const auto pf = fiber(cert.psi_hat, w);
      for (std::uint64_t beta = 0; beta < betas; ++beta) {
        const auto expected =
            (beta & 1) ? -std::conj(fd.m_even) * fd.even_norm_sq * at(fd.a, beta)
                       : std::conj(fd.m_odd) * fd.odd_norm_sq * at(fd.a, beta);
        REQUIRE(std::abs(at(pf.entries, beta) - expected) <= 1e-15);
      }
    }
  }
}

TEST_CASE("region check flags out-of-band periodization") {
  const auto phi = fixtures::haar();
  const auto m = minimal_filter(phi, phi, 1);
  const auto cert = construct_wavelet(phi, m, 1.0, 1.0);
  const auto bad = wavelet_frame_check(cert.psi_hat.scale({2.0, 0.0}), 1.0, 1.0, cert.deltas);
  REQUIRE(bad.max_violation == 3.0);  // periodization 4 against D^3 = 1
  REQUIRE(bad.support_ok);
}

TEST_CASE("orthogonality check flags the generator itself") {
  const auto phi = fixtures::haar();
  const auto m = minimal_filter(phi, phi, 1);
  const auto bad = fiber_orthogonality_check(phi, m, phi);
  REQUIRE(bad.residual == 1.0);
  REQUIRE(bad.dims_ok);
}

TEST_CASE("blocked generator cannot produce a wavelet") {
  try {
    construct_wavelet(fixtures::blocked_phihat(), fixtures::blocked_m(), 1.0, 1.0);
    FAIL("expected BlockedSetError");
  } catch (const BlockedSetError& e) {
    REQUIRE(e.blocked == fixtures::blocked_cells_expected());
  }
}

TEST_CASE("existence conditions on well-posed generators") {
  const auto e_haar = existence_conditions(
      fixtures::haar(), minimal_filter(fixtures::haar(), fixtures::haar(), 1), 1.0, 1.0);
  REQUIRE(e_haar.cond_i);
  REQUIRE(e_haar.cond_ii);
  REQUIRE(e_haar.equivalent);
  REQUIRE(e_haar.band_lo == 1.0);
  REQUIRE(e_haar.band_hi == 1.0);
  REQUIRE(e_haar.two_scale_residual == 0.0);
  REQUIRE(e_haar.alt_blocked.is_empty());

  const auto phi = fixtures::nonparseval();
  const auto e_np =
      existence_conditions(phi, minimal_filter(phi, phi, 1), 0.25, 1.0);
  REQUIRE(e_np.cond_i);
  REQUIRE(e_np.cond_ii);  // the band boundary C/D = 1/4 is attained, not crossed
  REQUIRE(e_np.equivalent);
  REQUIRE(e_np.band_lo == 0.25);
  REQUIRE(e_np.band_hi == 4.0);
  REQUIRE(e_np.two_scale_residual == 0.0);
}

TEST_CASE("existence conditions on the blocked generator") {
  const auto e = existence_conditions(fixtures::blocked_phihat(), fixtures::blocked_m(), 1.0, 1.0);
  REQUIRE_FALSE(e.cond_i);
  REQUIRE_FALSE(e.cond_ii);
  REQUIRE(e.equivalent);
  REQUIRE(e.violations_i == fixtures::blocked_cells_expected());
  REQUIRE(e.violations_ii == fixtures::blocked_cells_expected());
  REQUIRE(e.two_scale_residual == 0.0);
  // perturbing the filter on the dead zone moves nothing
  REQUIRE(e.alt_refinement_residual == 0.0);
  REQUIRE(e.alt_blocked == fixtures::blocked_cells_expected());
  REQUIRE(e.alt_blocked_measure == 0.25);
}

TEST_CASE("construction is dyadic only") {
  const auto phi3 = StepFunction::indicator(CosetId(3, Side::primal, 0, 0, {}));
  const auto m3 = FilterSpec::constant(3, Side::dual, {1.0, 0.0});
  REQUIRE_THROWS_AS(delta_sets(phi3), std::domain_error);
  REQUIRE_THROWS_AS(construct_wavelet(phi3, m3, 1.0, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(fiber_decomposition(phi3, m3, GroupElement::zero(3, Side::dual)),
                    std::domain_error);
}
