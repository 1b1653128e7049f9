// Copyright 2026 The deltaline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal library walkthrough: drive the atom, read the emitted microwave,
// then cancel it on the transmission side with a quadrature probe.

#include "deltaline/deltaline.hpp"

#include <iostream>

int main() {
  using namespace deltaline;

  const AtomParams atom = reference_atom();
  DriveConfig drives = reference_drives();

  DensityMatrix rho = solve_steady(build_liouvillian(atom, drives));
  std::cout << "drive-induced coherence |rho21| = " << std::abs(rho(1, 0)) << "\n";
  std::cout << "emitted current |I_g| = "
            << std::abs(emission_amplitude(atom, rho(1, 0))) * 1e9 << " nA\n";

  // a probe of matched amplitude and quadrature loop phase interferes the
  // transmitted wave away while the reflected side keeps radiating
  drives.rabi_21 = RabiField{probe_for_unit_alpha(atom, drives), std::numbers::pi / 2.0};
  rho = solve_steady(build_liouvillian(atom, drives));
  const FieldAmplitudes f = total_field(atom, drives, rho(1, 0));
  std::cout << "with the switch-off probe:\n";
  std::cout << "  transmitted |I_t| = " << std::abs(f.i_total_right) * 1e9 << " nA\n";
  std::cout << "  reflected  |I_r| = " << std::abs(f.i_total_left_reflected) * 1e9
            << " nA\n";
  std::cout << "  power transmission |t|^2 = " << std::norm(f.t) << "\n";
  return 0;
}
