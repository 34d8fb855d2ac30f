// Prints the generic Newton polygon formula for every nontrivial residue class
// of a rectangle, with the specialized polygon at one prime of each class.
//
//   gnp_table [d1 d2]

#include <cstdlib>
#include <iostream>

#include "asw/gnp.hpp"

int main(int argc, char** argv) {
  using namespace asw;
  long d1 = argc > 2 ? std::atol(argv[1]) : 3;
  long d2 = argc > 2 ? std::atol(argv[2]) : 3;
  try {
    RectDelta delta(d1, d2);
    for (const auto& R : nontrivial_classes(delta)) {
      auto F = gnp_formula(delta, CostSpec::formula(R));
      std::cout << "class " << to_string(R) << ":";
      for (const auto& t : F.terms) std::cout << "  n=" << t.n << " M=" << t.M << " eps=" << t.eps;
      long p = 0;
      for (long q = 5; q < 2000 && p == 0; ++q)
        if (is_prime(q) && R.contains(delta, q)) p = q;
      if (p != 0) {
        std::cout << "\n    p=" << p << " polygon:";
        for (const auto& v : snp(F, p).vertices()) std::cout << " (" << v.x << "," << v.y << ")";
      } else {
        std::cout << "\n    (no prime in this class)";
      }
      std::cout << "\n";
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
