// Times each OpenMP kernel against its serial reference and checks that both
// produce identical results.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "moduli/cohft.hpp"
#include "moduli/series.hpp"
#include "moduli/strata.hpp"

using namespace moduli;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* name, double par, double ser, bool same) {
  std::printf("%-34s parallel %9.4f s  serial %9.4f s  speedup %5.2fx  %s\n", name, par, ser, ser / par,
              same ? "identical" : "MISMATCH");
}

Series dense_series(const SeriesCaps& caps, int salt) {
  Series s(caps);
  for (int a = 0; a <= caps.order_cap; ++a) {
    for (int b = 0; a + b <= caps.order_cap; ++b) {
      for (int c = 0; a + b + c <= caps.order_cap; ++c) {
        for (int q = 0; q <= caps.q_cap; ++q) {
          s.add_term(make_exponent(caps, {a, b, c}, q), Rational(1 + (a * 7 + b * 3 + c + q + salt) % 11, 1 + q));
        }
      }
    }
  }
  return s;
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", omp_get_max_threads());

  for (Space s : {Space{SpaceKind::MULT, 6}, Space{SpaceKind::SCALED, 6}}) {
    std::vector<MarkedGraph> a, b;
    double par = seconds([&] { a = enumerate_strata(s); }, 1);
    double ser = seconds([&] { b = enumerate_strata_serial(s); }, 1);
    row(("enumerate " + to_string(s)).c_str(), par, ser, a == b);
  }

  SeriesCaps caps{3, 1, 12, 3};
  Series x = dense_series(caps, 1), y = dense_series(caps, 5);
  Series p1(caps), p2(caps);
  double par = seconds([&] { p1 = x * y; }, 3);
  double ser = seconds([&] { p2 = multiply_serial(x, y); }, 3);
  row("series product (3 vars, order 12)", par, ser, p1 == p2);

  SeriesCaps acaps{0, 1, 5, 3};
  CohFTAlgebra alg = projective_space(5, acaps);
  CheckResult r1, r2;
  par = seconds([&] { r1 = check_associativity(alg, acaps); }, 1);
  ser = seconds([&] { r2 = check_associativity_serial(alg, acaps); }, 1);
  row("associativity P^4 (order 5)", par, ser, r1.ok == r2.ok && r1.witness == r2.witness);
  return 0;
}
