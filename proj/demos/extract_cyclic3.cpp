// Library walkthrough: build the Kac-Takesaki operator of the cyclic group of
// order three, certify it, extract the quantum-group data and print the
// residual report.
#include <iostream>

#include "muw/muw.hpp"

int main() {
  using namespace muw;

  const GroupTable z3 = GroupTable::cyclic(3);
  const MultUnitary w = gen_group_kt(z3);
  std::cout << "pentagon residual: " << pentagon_residual(w) << "\n";

  RVec diag(3);
  diag << 1, 2, 4;
  const auto [q, q_hat] = gen_skewed_certificate(w, diag);
  std::cout << "certificate verdict: "
            << (check_modular(w, q, q_hat).passed() ? "pass" : "fail") << "\n";

  const QGData qg = extract(w, q, q_hat);
  std::cout << "rank(A) = " << qg.a.rank() << ", rank(A-hat) = " << qg.a_hat.rank() << "\n";
  std::cout << qg.checks.to_markdown("cyclic group of order 3");
  return 0;
}
