#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ldg/tensor.hpp"

using namespace ldg;

namespace {

SymTensor3 random_sym(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return {d(rng), d(rng), d(rng), d(rng), d(rng), d(rng)};
}

}  // namespace

TEST_CASE("frobenius inner product") {
  CHECK(inner(SymTensor3::identity(), SymTensor3::identity()) == doctest::Approx(3.0));

  // tr P^2 = tr P = 1 for a rank-one projection
  const SymTensor3 p{0.5, 0.5, 0, 0.5, 0, 0};
  CHECK(inner(p, p) == doctest::Approx(1.0));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const SymTensor3 a = random_sym(rng), b = random_sym(rng);
    // component-sum oracle over the full 3x3 matrices
    double expect = 0;
    const Mat3 fa = a.full(), fb = b.full();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) expect += fa(r, c) * fb(r, c);
    CHECK(inner(a, b) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(inner(a, b) == doctest::Approx(inner(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("commutator against dense arithmetic") {
  CHECK(commutator(SymTensor3::identity(), SymTensor3::identity()).norm() == doctest::Approx(0.0));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const SymTensor3 a = random_sym(rng), b = random_sym(rng);
    const AntiSymTensor3 c = commutator(a, b);
    const Mat3 dense = a.full() * b.full() - b.full() * a.full();
    CHECK(norm(c.full() - dense) < 1e-13);
    // antisymmetry of the bracket
    const AntiSymTensor3 cr = commutator(b, a);
    CHECK((c + cr).norm() < 1e-14);
  }
}

TEST_CASE("antisymmetric storage reconstructs an exactly antisymmetric matrix") {
  const AntiSymTensor3 a{0.3, -0.7, 1.1};
  const Mat3 m = a.full();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m(i, j) == -m(j, i));
}

TEST_CASE("symmetric square and determinant") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const SymTensor3 a = random_sym(rng);
    const Mat3 dense = a.full() * a.full();
    CHECK(norm(square(a).full() - dense) < 1e-13);

    const Mat3 f = a.full();
    const double dd = f(0, 0) * (f(1, 1) * f(2, 2) - f(1, 2) * f(2, 1)) -
                      f(0, 1) * (f(1, 0) * f(2, 2) - f(1, 2) * f(2, 0)) +
                      f(0, 2) * (f(1, 0) * f(2, 1) - f(1, 1) * f(2, 0));
    CHECK(det(a) == doctest::Approx(dd).epsilon(1e-12));
  }
}

TEST_CASE("antisym commutator matches dense bracket") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const AntiSymTensor3 a{d(rng), d(rng), d(rng)}, b{d(rng), d(rng), d(rng)};
    const Mat3 dense = a.full() * b.full() - b.full() * a.full();
    CHECK(norm(commutator(a, b).full() - dense) < 1e-13);
  }
}

TEST_CASE("conjugation keeps symmetry classes") {
  std::mt19937_64 rng(19);
  const SymTensor3 a = random_sym(rng);
  Mat3 r;  // a rotation-ish matrix is enough for the algebraic identity
  r.m = {{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};
  const Mat3 dense = r * a.full() * r.transpose();
  CHECK(norm(conjugate(r, a).full() - dense) < 1e-13);
}
