// Behaviour at x = 0 for u'' = (1/x^2 + 1 - 1/(4x^2)) u, reached through
// the inversion s = 1/x. The recessive branch at 0 grows like x^{3/2}.

#include <cmath>
#include <cstdio>

#include "lgasym/lgasym.hpp"

int main() {
  using namespace lgasym;
  AnalysisOptions o;
  o.endpoint = EndpointKind::Zero;
  const Analysis an = Analysis::run("1/x^2", "1-1/(4*x^2)", o);
  std::printf("regime %s via %s, certified for x <= %.6f\n", to_string(an.regime()), to_string(an.reduction()),
              an.cutoff_original());
  std::printf("%10s %24s %24s\n", "x", "recessive / x^1.5", "dominant * x^0.5");
  for (double x : {0.5, 0.1, 1e-2, 1e-3, 1e-4}) {
    const double r = an.branch(Branch::Recessive, x).value.real() / std::pow(x, 1.5);
    const double d = an.branch(Branch::Dominant, x).value.real() * std::sqrt(x);
    std::printf("%10.0e %24.15f %24.15f\n", x, r, d);
  }
}
