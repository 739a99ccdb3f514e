// Oscillatory regime: the order-zero Bessel equation in normal form.
// Prints the coefficients of the two oscillatory solutions and a fit of
// sqrt(r) J0(r) against the pipeline branch.

#include <cstdio>

#include "lgasym/lgasym.hpp"

int main() {
  using namespace lgasym;
  const Analysis an = Analysis::run("0-1", "(0-1)/(4*x^2)", AnalysisOptions{});
  const OscillatoryCoeffs c = *an.coefficients();
  auto show = [](const char* name, Complex v) { std::printf("%-12s %+.12f %+.12fi\n", name, v.real(), v.imag()); };
  std::printf("regime %s, cutoff %.4f\n", to_string(an.regime()), an.cutoff());
  show("xi1", c.xi1);
  show("xi2", c.xi2);
  show("eta1", c.eta1);
  show("eta2", c.eta2);
  show("determinant", c.determinant());
  if (an.oracle()) {
    const AsymptoticFit& f = an.oracle()->fit;
    std::printf("oracle fit: amplitude %.10f, phase %.10f, residual %.2e\n", f.amplitude, f.theta, f.residual);
  }
}
