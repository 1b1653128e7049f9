#include <catch2/catch_amalgamated.hpp>

#include "deltaline/core.hpp"
#include "deltaline/json_io.hpp"

#include <fstream>
#include <random>

using namespace deltaline;
using Catch::Approx;

TEST_CASE("reference configuration validates cleanly") {
  const ValidationReport rep = validate(reference_atom(), reference_drives());
  CHECK(rep.ok());
  CHECK(rep.warnings.empty());
}

TEST_CASE("negative pure dephasing is rejected") {
  AtomParams p = reference_atom();
  p.gamma_coh_12 = 5.0; // below gamma_pop_21/2 = 5.5
  const ValidationReport rep = validate(p, reference_drives());
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    found = found || v.find("negative pure dephasing") != std::string::npos;
  CHECK(found);
}

TEST_CASE("strong probe raises a non-fatal warning") {
  DriveConfig d = reference_drives();
  d.rabi_21 = RabiField{10.0, 0.0}; // > gamma_pop_21/5 = 2.2
  const ValidationReport rep = validate(reference_atom(), d);
  CHECK(rep.ok());
  REQUIRE_FALSE(rep.warnings.empty());
  CHECK(rep.warnings.front().find("probe not weak") != std::string::npos);
}

TEST_CASE("pure dephasing arithmetic") {
  AtomParams p = reference_atom();
  CHECK(pure_dephasing(p) == Approx(12.5)); // 18 - 11/2

  p.gamma_coh_12 = p.gamma_pop_21 / 2.0;
  CHECK(pure_dephasing(p) == Approx(0.0).margin(1e-15));

  p.gamma_coh_12 = 7.0;
  p.gamma_pop_21 = 11.0;
  CHECK(pure_dephasing(p) == Approx(1.5));
}

TEST_CASE("probe detuning is always the drive-detuning difference") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(-200.0, 200.0);
  for (int i = 0; i < 100; ++i) {
    DriveConfig d;
    d.detuning_31 = u(rng);
    d.detuning_32 = u(rng);
    CHECK(d.detuning_21() == d.detuning_31 - d.detuning_32);
  }
  DriveConfig d;
  d.detuning_32 = -7.25;
  CHECK(d.delta() == 7.25);
}

TEST_CASE("loop phase combines the three drive phases") {
  DriveConfig d;
  d.rabi_31 = RabiField{35.0, 0.4};
  d.rabi_32 = RabiField{35.0, -0.3};
  d.rabi_21 = RabiField{1.0, 1.2};
  CHECK(d.loop_phase() == Approx(1.2 - 0.3 - 0.4));
}

TEST_CASE("density matrix invariant checks") {
  Matrix3c rho = Matrix3c::Zero();
  rho(0, 0) = 1.0;
  CHECK_NOTHROW(check_density_matrix(rho));

  SECTION("non-Hermitian rejected") {
    Matrix3c bad = rho;
    bad(0, 1) = Complex{0.1, 0.0}; // no conjugate partner
    CHECK_THROWS_AS(check_density_matrix(bad), NonPhysicalResult);
  }
  SECTION("trace deviation rejected") {
    Matrix3c bad = rho;
    bad(1, 1) = 0.1;
    CHECK_THROWS_AS(check_density_matrix(bad), NonPhysicalResult);
  }
  SECTION("negative eigenvalue rejected") {
    Matrix3c bad = Matrix3c::Zero();
    bad(0, 0) = 1.2;
    bad(1, 1) = -0.2;
    CHECK_THROWS_AS(check_density_matrix(bad), NonPhysicalResult);
  }
}

TEST_CASE("config JSON round-trip is bit-exact") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> rate(0.0, 80.0);
  std::uniform_real_distribution<double> ghz(0.5, 40.0);
  std::uniform_real_distribution<double> phase(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    Config cfg;
    cfg.atom.gamma_pop_31 = rate(rng);
    cfg.atom.gamma_pop_32 = rate(rng);
    cfg.atom.gamma_pop_21 = rate(rng);
    cfg.atom.gamma_coh_12 = cfg.atom.gamma_pop_21 / 2.0 + rate(rng);
    cfg.atom.gamma_coh_13 = rate(rng);
    cfg.atom.gamma_coh_23 = rate(rng);
    cfg.atom.omega_21 = ghz(rng);
    cfg.atom.omega_32 = ghz(rng);
    cfg.atom.line_impedance = 25.0 + rate(rng);
    cfg.drives.rabi_31 = RabiField{rate(rng), phase(rng)};
    cfg.drives.rabi_32 = RabiField{rate(rng), phase(rng)};
    cfg.drives.rabi_21 = RabiField{rate(rng), phase(rng)};
    cfg.drives.detuning_31 = rate(rng) - 40.0;
    cfg.drives.detuning_32 = rate(rng) - 40.0;

    // through text, as a file would store it
    const Json j = Json::parse(config_to_json(cfg).dump());
    const Config back = parse_config(j);
    CHECK(back.atom == cfg.atom);
    CHECK(back.drives == cfg.drives);
  }
}

TEST_CASE("config schema rejects unknown keys and bad shapes") {
  Json good = config_to_json({reference_atom(), reference_drives()});

  SECTION("top-level unknown key") {
    Json j = good;
    j["extra"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("atom unknown key") {
    Json j = good;
    j["atom"]["gamma_pop_99"] = 1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("rabi unknown key") {
    Json j = good;
    j["drives"]["rabi_31"]["units"] = "MHz";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("missing required atom field") {
    Json j = good;
    j["atom"].erase("gamma_coh_12");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("non-numeric value") {
    Json j = good;
    j["atom"]["gamma_pop_32"] = "35";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("negative rabi magnitude") {
    Json j = good;
    j["drives"]["rabi_31"]["mag_mhz"] = -1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("error message carries the key path") {
    Json j = good;
    j["drives"]["rabi_32"]["bogus"] = 0;
    try {
      parse_config(j);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("/drives/rabi_32/bogus") != std::string::npos);
    }
  }
}

TEST_CASE("optional config fields take documented defaults") {
  Json j = {{"atom",
             {{"gamma_pop_32", 35.0},
              {"gamma_pop_21", 11.0},
              {"gamma_coh_12", 18.0},
              {"omega_21", 10.96},
              {"omega_32", 24.15},
              {"line_impedance", 50.0}}},
            {"drives",
             {{"rabi_31", {{"mag_mhz", 35.0}}},
              {"rabi_32", {{"mag_mhz", 35.0}}}}}};
  const Config cfg = parse_config(j);
  CHECK(cfg.atom.gamma_pop_31 == 0.0);
  CHECK(cfg.atom.gamma_coh_13 == 17.5);
  CHECK(cfg.atom.gamma_coh_23 == 17.5);
  CHECK_FALSE(cfg.drives.probe_on());
  CHECK(cfg.drives.detuning_31 == 0.0);
  CHECK(cfg.drives.detuning_32 == 0.0);
  CHECK(cfg.atom == reference_atom());
  CHECK(cfg.drives == reference_drives());
}

TEST_CASE("parse errors point at the offending line") {
  const std::string path = "bad_config_for_test.json";
  {
    std::ofstream out(path);
    out << "{\n  \"atom\": {\n  oops\n}\n";
  }
  try {
    load_json_file(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(path + ":3") != std::string::npos);
  }
  std::remove(path.c_str());
}
