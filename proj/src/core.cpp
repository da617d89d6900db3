#include "divischan/core.hpp"

#include <cstdlib>
#include <string>

namespace divischan {

Tolerance tolerance_from_env() {
  Tolerance t;
  if (const char* s = std::getenv("DIVISCHAN_TOL")) {
    try {
      double v = std::stod(s);
      if (v > 0) t.tol = v;
    } catch (...) {
      // malformed override: keep the default
    }
  }
  return t;
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::no: return "no";
    case Tri::yes: return "yes";
    default: return "undecided";
  }
}

const Mat2c& pauli(int i) {
  static const Mat2c s[4] = {
      (Mat2c() << 1, 0, 0, 1).finished(),
      (Mat2c() << 0, 1, 1, 0).finished(),
      (Mat2c() << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
      (Mat2c() << 1, 0, 0, -1).finished(),
  };
  return s[i];
}

}  // namespace divischan
