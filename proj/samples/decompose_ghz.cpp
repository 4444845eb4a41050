// Decomposes a three-qutrit GHZ state and the W state and prints the outcome.

#include <iostream>

#include "hosd/hosd.hpp"

int main() {
  const auto ghz = hosd::ghz(3, 3);
  const auto verdict = hosd::higher_schmidt(ghz);
  std::cout << "GHZ(3,3): " << (verdict.decomposable() ? "decomposable" : "not decomposable")
            << ", residual " << *verdict.residual << "\n  a =";
  for (double a : verdict.decomposition->a) std::cout << ' ' << a;
  std::cout << "\n";

  const auto w = hosd::higher_schmidt(hosd::w_state(3));
  std::cout << "W(3): " << hosd::to_string(w.certificate->kind) << ", measured "
            << w.certificate->measured_value << " > " << w.certificate->threshold << "\n";

  std::cout << hosd::io::dump(hosd::io::verdict_to_json(verdict));
  return 0;
}
