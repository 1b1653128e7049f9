#include <catch2/catch_amalgamated.hpp>

#include "deltaline/analytic.hpp"
#include "deltaline/waveguide.hpp"

#include <random>

using namespace deltaline;
using Catch::Approx;

namespace {

std::mt19937& rng() {
  static std::mt19937 gen(777);
  return gen;
}

// cascade-limit draw: gamma_13 = gamma_23 = Gamma_32/2, Gamma_31 = Gamma_21 = 0,
// where the resonant closed forms are exact
AtomParams cascade_atom(double g12, double G32) {
  AtomParams p = reference_atom();
  p.gamma_pop_31 = 0.0;
  p.gamma_pop_21 = 0.0;
  p.gamma_pop_32 = G32;
  p.gamma_coh_12 = g12;
  p.gamma_coh_13 = G32 / 2.0;
  p.gamma_coh_23 = G32 / 2.0;
  return p;
}

} // namespace

TEST_CASE("coherence lineshape basics") {
  const AtomParams p = reference_atom();

  SECTION("vanishes without the 3-1 drive") {
    DriveConfig d = reference_drives();
    d.rabi_31.mag = 0.0;
    CHECK(std::abs(coherence_general(p, d)) == 0.0);
  }

  SECTION("resonant value matches the closed form with drive phases") {
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    for (int i = 0; i < 10; ++i) {
      DriveConfig d = reference_drives();
      d.rabi_31.phase = ph(rng());
      d.rabi_32.phase = ph(rng());
      const Complex expect =
          -(42875.0 / 262150.0) * std::polar(1.0, d.rabi_31.phase - d.rabi_32.phase);
      CHECK(std::abs(coherence_general(p, d) - expect) < 1e-9);
    }
  }

  SECTION("near-symmetric wings") {
    DriveConfig plus = reference_drives();
    plus.detuning_32 = -50.0; // Delta = +50
    DriveConfig minus = reference_drives();
    minus.detuning_32 = 50.0;
    CHECK(std::abs(std::abs(coherence_general(p, plus)) -
                   std::abs(coherence_general(p, minus))) < 1e-3);
  }

  SECTION("domain guards") {
    DriveConfig d = reference_drives();
    d.detuning_31 = 1.0;
    CHECK_THROWS_AS(coherence_general(p, d), DomainError);
    DriveConfig probed = reference_drives();
    probed.rabi_21 = RabiField{0.5, 0.0};
    CHECK_THROWS_AS(coherence_general(p, probed), DomainError);
  }
}

TEST_CASE("lineshape identity matches the numeric coherence across the spectrum") {
  // exact identity of the stationary coherence block, valid at the full
  // reference rates (Gamma_21 = 11 MHz included)
  const AtomParams p = reference_atom();
  for (int i = 0; i <= 100; ++i) {
    const double delta = -100.0 + 2.0 * i;
    DriveConfig d = reference_drives();
    d.detuning_32 = -delta;
    const DensityMatrix rho = solve_steady(build_liouvillian(p, d));
    const Complex predicted = coherence_general(p, d, rho(0, 0).real(),
                                                rho(1, 1).real(), rho(2, 2).real());
    CHECK(std::abs(predicted - rho(1, 0)) < 1e-6 * std::max(1.0, std::abs(rho(1, 0))));
  }
}

TEST_CASE("resonant summary at the reference point") {
  const ResonantSummary s = resonant_summary(reference_atom(), reference_drives());
  CHECK(s.a_norm == Approx(262150.0).epsilon(1e-14));
  CHECK(std::abs(s.rho21) == Approx(42875.0 / 262150.0).epsilon(1e-14));
  CHECK(s.rho11 == Approx(86975.0 / 262150.0).epsilon(1e-14));
  CHECK(s.rho22 == Approx(0.5).epsilon(1e-14));
  CHECK(s.rho33 == Approx(44100.0 / 262150.0).epsilon(1e-14));
}

TEST_CASE("resonant summary properties") {
  std::uniform_real_distribution<double> rate(0.5, 40.0);
  std::uniform_real_distribution<double> mag(0.5, 80.0);

  SECTION("populations sum to one") {
    for (int i = 0; i < 100; ++i) {
      AtomParams p = reference_atom();
      p.gamma_coh_12 = rate(rng());
      p.gamma_pop_32 = rate(rng());
      DriveConfig d;
      d.rabi_31 = RabiField{mag(rng()), 0.0};
      d.rabi_32 = RabiField{mag(rng()), 0.0};
      const ResonantSummary s = resonant_summary(p, d);
      CHECK(s.rho11 + s.rho22 + s.rho33 == Approx(1.0).epsilon(1e-12));
      CHECK(s.rho11 >= 0.0);
      CHECK(s.rho22 >= 0.0);
      CHECK(s.rho33 >= 0.0);
    }
  }

  SECTION("half the population sits in level 2 at matched drives") {
    for (int i = 0; i < 20; ++i) {
      AtomParams p = reference_atom();
      p.gamma_coh_12 = rate(rng());
      p.gamma_pop_32 = rate(rng());
      DriveConfig d;
      d.rabi_31 = RabiField{p.gamma_pop_32, 0.3};
      d.rabi_32 = RabiField{p.gamma_pop_32, -0.8};
      CHECK(resonant_summary(p, d).rho22 == Approx(0.5).epsilon(1e-14));
    }
  }

  SECTION("single-drive limit traps population in level 2") {
    DriveConfig d = reference_drives();
    d.rabi_32.mag = 0.0;
    const ResonantSummary s = resonant_summary(reference_atom(), d);
    CHECK(s.rho11 == 0.0);
    CHECK(s.rho22 == Approx(1.0).epsilon(1e-14));
    CHECK(s.rho33 == 0.0);
  }

  SECTION("off resonance is out of domain") {
    DriveConfig d = reference_drives();
    d.detuning_32 = 1.0;
    CHECK_THROWS_AS(resonant_summary(reference_atom(), d), DomainError);
  }
}

TEST_CASE("cascade-limit closed forms agree with the numeric steady state") {
  // trimmed version of the acceptance comparison (200 draws there)
  std::uniform_real_distribution<double> rate(0.5, 40.0);
  std::uniform_real_distribution<double> mag(0.5, 80.0);
  std::uniform_real_distribution<double> ph(0.0, kTwoPi);
  for (int i = 0; i < 40; ++i) {
    const AtomParams p = cascade_atom(rate(rng()), rate(rng()) + 1.0);
    DriveConfig d;
    d.rabi_31 = RabiField{mag(rng()), ph(rng())};
    d.rabi_32 = RabiField{mag(rng()), ph(rng())};
    const ResonantSummary s = resonant_summary(p, d);
    const DensityMatrix rho = solve_steady(build_liouvillian(p, d));
    CHECK(rho(0, 0).real() == Approx(s.rho11).epsilon(1e-9));
    CHECK(rho(1, 1).real() == Approx(s.rho22).epsilon(1e-9));
    CHECK(rho(2, 2).real() == Approx(s.rho33).epsilon(1e-9));
    CHECK(std::abs(rho(1, 0) - s.rho21) < 1e-9 * std::abs(s.rho21));
  }
}

TEST_CASE("coherence and upper population ignore Gamma_21 at matched drive magnitudes") {
  // the property that keeps every emitted-current observable exact at the
  // reference Gamma_21 = 11 MHz even though the rho11/rho22 split moves
  std::uniform_real_distribution<double> rate(0.5, 30.0);
  std::uniform_real_distribution<double> mag(1.0, 60.0);
  for (int i = 0; i < 25; ++i) {
    AtomParams p = cascade_atom(rate(rng()), rate(rng()) + 1.0);
    p.gamma_pop_21 = rate(rng()); // arbitrary, not zero
    p.gamma_coh_12 = 0.5 * p.gamma_pop_21 + rate(rng());
    DriveConfig d;
    const double om = mag(rng());
    d.rabi_31 = RabiField{om, 1.1};
    d.rabi_32 = RabiField{om, -0.4};
    const ResonantSummary s = resonant_summary(p, d);
    const DensityMatrix rho = solve_steady(build_liouvillian(p, d));
    CHECK(std::abs(rho(1, 0) - s.rho21) < 1e-11);
    CHECK(rho(2, 2).real() == Approx(s.rho33).epsilon(1e-11));
  }
}

TEST_CASE("probe response coefficient") {
  const AtomParams p = reference_atom();

  SECTION("vanishes at matched drives equal to Gamma_32") {
    std::uniform_real_distribution<double> rate(0.5, 40.0);
    for (int i = 0; i < 20; ++i) {
      AtomParams q = reference_atom();
      q.gamma_coh_12 = rate(rng());
      DriveConfig d;
      d.rabi_31 = RabiField{q.gamma_pop_32, 0.0};
      d.rabi_32 = RabiField{q.gamma_pop_32, 0.0};
      CHECK(std::abs(probe_coherence_correction(q, d).b) < 1e-12);
    }
  }

  SECTION("bare-atom limit reduces to the two-level response") {
    DriveConfig d; // both strong drives off
    d.rabi_21 = RabiField{0.2, 0.0};
    const ProbeCorrection pc = probe_coherence_correction(p, d);
    const Complex expect = Complex{0.0, 1.0} / (2.0 * p.gamma_coh_12);
    CHECK(std::abs(pc.b - expect) < 1e-12);
    CHECK(std::abs(pc.rho21_prime - d.rabi_21.value() * expect) < 1e-12);
  }

  SECTION("strong 3-2 drive quenches the response") {
    DriveConfig d = reference_drives();
    d.rabi_32.mag = 1e4;
    const Complex b = probe_coherence_correction(p, d).b;
    CHECK(std::abs(b) < 1e-6);
    // leading-order tail: -i (Gamma_32 + 2 gamma_12) Gamma_32
    //                     / ((6 gamma_12 + Gamma_32) |Omega_32|^2)
    const double tail = (p.gamma_pop_32 + 2.0 * p.gamma_coh_12) * p.gamma_pop_32 /
                        ((6.0 * p.gamma_coh_12 + p.gamma_pop_32) * 1e8);
    CHECK(std::abs(b + Complex{0.0, 1.0} * tail) < 0.05 * tail);
  }

  SECTION("off resonance is out of domain") {
    DriveConfig d = reference_drives();
    d.detuning_31 = 2.0;
    CHECK_THROWS_AS(probe_coherence_correction(p, d), DomainError);
  }
}

TEST_CASE("first-order probe response tracks the numeric coherence for weak probes") {
  const AtomParams p = reference_atom();
  for (double frac : {1.0 / 50.0, 1.0 / 100.0}) {
    DriveConfig d = reference_drives();
    d.rabi_21 = RabiField{p.gamma_pop_21 * frac, 0.7};
    const ProbeCorrection pc = probe_coherence_correction(p, d);
    const DensityMatrix rho = solve_steady(build_liouvillian(p, d));
    CHECK(std::abs(pc.rho21_prime - rho(1, 0)) < 0.01 * std::abs(rho(1, 0)));
  }
}

TEST_CASE("interference factors") {
  const AtomParams p = reference_atom();

  SECTION("unit alpha at quadrature phase switches the output off") {
    DriveConfig d = reference_drives();
    d.rabi_21 = RabiField{probe_for_unit_alpha(p, d), std::numbers::pi / 2.0};
    const InterferenceFactors f = interference_intensity(p, d);
    CHECK(f.alpha == Approx(1.0).epsilon(1e-14));
    CHECK(f.theta == Approx(std::numbers::pi / 2.0));
    CHECK(f.bracket == 0.0);
  }

  SECTION("probe alone passes unchanged") {
    DriveConfig d;
    d.rabi_21 = RabiField{1.0, 0.3};
    const InterferenceFactors f = interference_intensity(p, d);
    CHECK(f.alpha == 0.0);
    CHECK(f.bracket == 1.0);
  }

  SECTION("reference drive strengths balance at about 1.8 MHz") {
    const double probe = probe_for_unit_alpha(p, reference_drives());
    CHECK(probe == Approx(471625.0 / 262150.0).epsilon(1e-14));
    CHECK(probe == Approx(1.7991).margin(5e-5));
  }

  SECTION("bracket is minimized exactly at quadrature") {
    DriveConfig d = reference_drives();
    d.rabi_21 = RabiField{probe_for_unit_alpha(p, d), 0.0};
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= 100; ++i) {
      d.rabi_21.phase = kTwoPi * static_cast<double>(i) / 100.0;
      const double val = interference_intensity(p, d).bracket;
      if (val < best_val) {
        best_val = val;
        best = i;
      }
    }
    CHECK(best == 25); // grid point at pi/2
    CHECK(best_val == 0.0);
  }

  SECTION("zero probe is out of domain") {
    CHECK_THROWS_AS(interference_intensity(p, reference_drives()), DomainError);
  }
}

TEST_CASE("interference intensity matches the numeric total field at matched drives") {
  // two routes to |I_t|; compared on the probe amplitude scale J|Omega_21|/Gamma_21
  const AtomParams p = reference_atom();
  const double j = j_scale(p);
  for (double mag : {0.5, 1.0, 471625.0 / 262150.0, 3.0}) {
    for (double theta : {0.0, 0.9, std::numbers::pi / 2.0, 4.0}) {
      DriveConfig d = reference_drives();
      d.rabi_21 = RabiField{mag, theta};
      const double probe_scale = j * mag / p.gamma_pop_21;
      const double predicted = probe_scale * interference_intensity(p, d).bracket;
      const DensityMatrix rho = solve_steady(build_liouvillian(p, d));
      const double numeric = std::abs(total_field(p, d, rho(1, 0)).i_total_right);
      CHECK(std::abs(predicted - numeric) < 0.02 * probe_scale);
    }
  }
}

TEST_CASE("bare two-level transmission") {
  const AtomParams p = reference_atom();

  SECTION("dephasing-free atom is a mirror") {
    AtomParams q = p;
    q.gamma_coh_12 = q.gamma_pop_21 / 2.0; // zero pure dephasing
    CHECK(std::abs(two_level_probe_transmission(q, 0.0)) < 1e-14);
  }

  SECTION("reference dephasing transmits about half the power") {
    const Complex t = two_level_probe_transmission(p, 0.0);
    CHECK(std::norm(t) == Approx(625.0 / 1296.0).epsilon(1e-12)); // (1 - 11/36)^2
  }

  SECTION("far-detuned probe is untouched") {
    CHECK(std::abs(two_level_probe_transmission(p, 1e9) - 1.0) < 1e-6);
  }

  SECTION("numeric route agrees for weak probes and saturates above") {
    const Complex weak =
        two_level_probe_transmission_numeric(p, Complex{0.001, 0.0}, 3.0);
    CHECK(std::abs(weak - two_level_probe_transmission(p, 3.0)) < 1e-5);

    const Complex strong =
        two_level_probe_transmission_numeric(p, Complex{30.0, 0.0}, 0.0);
    CHECK(std::norm(strong) > std::norm(two_level_probe_transmission(p, 0.0)));

    CHECK_THROWS_AS(two_level_probe_transmission_numeric(p, Complex{0.0, 0.0}, 0.0),
                    DomainError);
  }
}
