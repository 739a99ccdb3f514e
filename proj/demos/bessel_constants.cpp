// Connection constants of the order-one modified Bessel equation in
// normal form, w'' = (1 + 3/(4x^2)) w, compared with an ODE solve.

#include <cstdio>

#include "lgasym/lgasym.hpp"

int main() {
  using namespace lgasym;
  const Analysis an = Analysis::run("1", "3/(4*x^2)", AnalysisOptions{});
  std::printf("regime            %s\n", to_string(an.regime()));
  std::printf("cutoff a          %.6f\n", an.cutoff());
  std::printf("certified radius  %.6e\n", an.certificate().radius());
  std::printf("z_inf             %.15f +- %.1e\n", an.solution().main.real(), an.solution().main_error);
  if (an.oracle()) std::printf("oracle deviation  %.2e\n", an.oracle()->max_deviation);
  std::printf("\n%8s %22s %22s\n", "x", "dominant / e^x", "recessive * e^x");
  for (double x : {2.0, 5.0, 10.0, 20.0, 40.0}) {
    const BranchSample d = an.branch(Branch::Dominant, x), r = an.branch(Branch::Recessive, x);
    std::printf("%8.1f %22.15f %22.15f\n", x, d.ratio.real(), r.ratio.real());
  }
}
