// Decides whether the upper triangular Regge-Wheeler system with spins
// (0, 1) and off-diagonal block f1/r^2 can be diagonalized, then prints
// the reduction pair and checks the operator identity.

#include <iostream>

#include "rode/rode.hpp"

int main() {
  using namespace rode;
  RWParams p;
  p.M = 1;
  p.omega = GaussianRational::fraction(1, 2);
  p.l = 2;

  const RWDelta Delta = RWDelta::from_operator(DiffOp::scalar({parse_expression("f1/r^2", rw_symbols(p))}));
  const RWReduction r = rw_reduce(Delta, 0, 1, p);
  std::cout << "ansatz powers " << r.bounds.lower << " .. " << r.bounds.upper << ", R = " << r.bounds.R << "\n";
  if (!r.exists()) {
    std::cout << "no reduction exists\n";
    return 0;
  }
  std::cout << "delta   = " << r.pair->delta << "\n"
            << "epsilon = " << r.pair->epsilon << "\n"
            << "unique: " << (r.unique() ? "yes" : "no") << "\n"
            << "identity holds: " << (rw_residual(0, 1, p, Delta, *r.pair).is_zero() ? "yes" : "no") << "\n";

  // The same question through the generic triangular machinery.
  const TriangularSystem sys(regge_wheeler(0, p), regge_wheeler(1, p), Delta.to_operator());
  const ReductionResult g = decide_reduction(sys);
  std::cout << "generic solver agrees: " << (g.exists() && g.pair->delta == r.pair->delta ? "yes" : "no") << "\n";
  return 0;
}
