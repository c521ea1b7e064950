#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ldg/error.hpp"
#include "ldg/oracles.hpp"
#include "ldg/projective.hpp"

using namespace ldg;

namespace {

std::mt19937_64 rng(42);

SymTensor3 random_sym(double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng), d(rng), d(rng), d(rng), d(rng)};
}

SymTensor3 random_trace1() {
  SymTensor3 u = random_sym();
  const double s = (1.0 - u.trace()) / 3.0;
  u.xx += s; u.yy += s; u.zz += s;
  return u;
}

SymTensor3 projector(double nx, double ny, double nz) {
  const double n = std::sqrt(nx * nx + ny * ny + nz * nz);
  nx /= n; ny /= n; nz /= n;
  return {nx * nx, nx * ny, nx * nz, ny * ny, ny * nz, nz * nz};
}

SymTensor3 random_projector() {
  std::normal_distribution<double> d(0.0, 1.0);
  return projector(d(rng), d(rng), d(rng));
}

}  // namespace

TEST_CASE("potential W on reference points") {
  CHECK(potential_w(random_projector()) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(potential_w(SymTensor3::isotropic()) == doctest::Approx(2.0 / 27.0));

  // invariant expansion oracle: W = I2^2 - I3 on the trace-1 slice
  for (int i = 0; i < 300; ++i) {
    const SymTensor3 u = random_trace1();
    const double i2 = 0.5 * (1.0 - norm2(u));
    const double i3 = det(u);
    CHECK(potential_w(u) == doctest::Approx(i2 * i2 - i3).epsilon(1e-10));
    // the beta family relates by W_2 = 2 W, not by beta = 3
    CHECK(potential_wbeta(u, 2.0) == doctest::Approx(2.0 * potential_w(u)).epsilon(1e-10));
  }
}

TEST_CASE("potential W_beta on reference points") {
  for (const double b : {2.0, 3.0, 5.5}) {
    CHECK(potential_wbeta(random_projector(), b) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(potential_wbeta(SymTensor3::isotropic(), b) == doctest::Approx(2.0 / 9.0 - b / 27.0));
  }
}

TEST_CASE("grad W_beta structure") {
  for (const double b : {2.0, 3.0, 5.5}) {
    CHECK(norm(grad_wbeta(random_projector(), b)) < 1e-13);
    const SymTensor3 g = grad_wbeta(SymTensor3::isotropic(), b);
    const double expect = (2.0 * b - 4.0) / 9.0;
    CHECK(norm(g - expect * SymTensor3::identity()) < 1e-14);
    // trace identity (beta - 2)(1 - |u|^2)
    for (int i = 0; i < 50; ++i) {
      const SymTensor3 u = random_trace1();
      CHECK(grad_wbeta(u, b).trace() ==
            doctest::Approx((b - 2.0) * (1.0 - norm2(u))).epsilon(1e-9));
    }
  }
}

TEST_CASE("eigen decomposition") {
  {
    const auto es = eigen_sym3(SymTensor3::isotropic());
    for (int i = 0; i < 3; ++i) CHECK(es.lambda[i] == doctest::Approx(1.0 / 3.0));
  }
  {
    const auto es = eigen_sym3(geodesic_gamma0(0.0));
    CHECK(es.lambda[0] == doctest::Approx(1.0));
    CHECK(es.lambda[1] == doctest::Approx(0.0));
    CHECK(es.lambda[2] == doctest::Approx(0.0));
    CHECK(std::abs(es.vec[0][0]) == doctest::Approx(1.0));
  }
  double worst = 0;
  for (int i = 0; i < 2000; ++i) {
    const SymTensor3 u = random_sym();
    const auto es = eigen_sym3(u);
    worst = std::max(worst, norm(es.reconstruct() - u));
    CHECK(es.lambda[0] >= es.lambda[1]);
    CHECK(es.lambda[1] >= es.lambda[2]);
    for (int a = 0; a < 3; ++a)
      for (int c = a; c < 3; ++c) {
        double dot = 0;
        for (int k = 0; k < 3; ++k) dot += es.vec[a][k] * es.vec[c][k];
        CHECK(std::abs(dot - (a == c ? 1.0 : 0.0)) < 1e-12);
      }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("simplex projection cases") {
  {
    const auto mu = simplex_project({0.7, 0.5, -0.2});
    CHECK(mu[0] == doctest::Approx(0.6));
    CHECK(mu[1] == doctest::Approx(0.4));
    CHECK(mu[2] == doctest::Approx(0.0));
  }
  {
    const auto mu = simplex_project({0.5, 0.3, 0.2});
    CHECK(mu[0] == 0.5);
    CHECK(mu[1] == 0.3);
    CHECK(mu[2] == 0.2);
  }
  {
    const auto mu = simplex_project({1.4, -0.1, -0.3});
    CHECK(mu[0] == doctest::Approx(1.0));
    CHECK(mu[1] == doctest::Approx(0.0));
    CHECK(mu[2] == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(simplex_project({0.2, 0.5, 0.3}), Error);   // unsorted
  CHECK_THROWS_AS(simplex_project({0.9, 0.5, -0.2}), Error);  // sum != 1

  // agreement with the generic sort-and-threshold oracle
  std::uniform_real_distribution<double> d(-1.0, 2.0);
  for (int i = 0; i < 10000; ++i) {
    std::array<double, 3> l{d(rng), d(rng), d(rng)};
    const double s = (1.0 - (l[0] + l[1] + l[2])) / 3.0;
    for (auto& v : l) v += s;
    std::sort(l.begin(), l.end(), std::greater<>());
    const auto mine = simplex_project(l);
    const auto ref = oracle::simplex_project_generic(l);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(mine[k] - ref[k]) < 1e-8);
  }
}

TEST_CASE("sigma projection") {
  {
    const SymTensor3 u = SymTensor3::diag(0.7, 0.5, -0.2);
    const SymTensor3 v = project_sigma(u);
    CHECK(norm(v - SymTensor3::diag(0.6, 0.4, 0.0)) < 1e-12);
  }
  for (int i = 0; i < 500; ++i) {
    const SymTensor3 u = random_trace1();
    const SymTensor3 v = project_sigma(u);
    CHECK(norm(project_sigma(v) - v) < 1e-10);  // idempotence
    const auto l = eigenvalues_sym3(v);
    CHECK(l[2] >= -1e-12);
    CHECK(l[0] <= 1.0 + 1e-12);
    // pointwise potential decrease; W_beta variant holds for beta >= 2
    CHECK(potential_w(v) <= potential_w(u) + 1e-12);
    for (const double b : {2.0, 3.5, 6.0})
      CHECK(potential_wbeta(v, b) <= potential_wbeta(u, b) + 1e-11);
  }
  // non-expansive on pairs
  for (int i = 0; i < 500; ++i) {
    const SymTensor3 u = random_trace1(), w = random_trace1();
    CHECK(norm(project_sigma(u) - project_sigma(w)) <= norm(u - w) + 1e-12);
  }
}

TEST_CASE("nearest projection Q") {
  const SymTensor3 p = random_projector();
  CHECK(norm(nearest_projection_q(p) - p) < 1e-10);
  CHECK(norm(nearest_projection_q(SymTensor3::diag(0.6, 0.4, 0.0)) - SymTensor3::diag(1, 0, 0)) <
        1e-12);
  CHECK_THROWS_AS(nearest_projection_q(SymTensor3::isotropic()), Error);

  // conjugation equivariance
  for (int i = 0; i < 100; ++i) {
    const SymTensor3 u = project_sigma(random_trace1());
    const auto l = eigenvalues_sym3(u);
    if (l[0] - l[1] < 1e-3) continue;
    const Mat3 r = euler_zyx(0.3 + 0.01 * i, -0.2, 0.9);
    const SymTensor3 lhs = nearest_projection_q(conjugate(r, u));
    const SymTensor3 rhs = conjugate(r, nearest_projection_q(u));
    CHECK(norm(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("differential of Q") {
  const SymTensor3 u = SymTensor3::diag(1, 0, 0);
  {
    SymTensor3 a;
    a.xy = 0.5;
    CHECK(norm(dq_apply(u, a) - a) < 1e-12);  // tangent directions are fixed
  }
  {
    const SymTensor3 a = SymTensor3::diag(0, 1, -1);
    CHECK(norm(dq_apply(u, a)) < 1e-12);  // normal directions are killed
  }

  // finite differences of Q near P
  int tested = 0;
  for (int i = 0; i < 200 && tested < 50; ++i) {
    const SymTensor3 x = random_projector() + random_sym(0.05);
    const auto l = eigenvalues_sym3(x);
    if (l[0] - l[1] < 0.5) continue;
    ++tested;
    const SymTensor3 dir = random_sym(1.0);
    const double t = 1e-6;
    const SymTensor3 fd = (nearest_projection_q(x + t * dir) - nearest_projection_q(x - t * dir)) *
                          (1.0 / (2.0 * t));
    const SymTensor3 an = dq_apply(x, dir);
    CHECK(norm(fd - an) / std::max(norm(an), 1e-12) < 1e-5);
  }
  CHECK(tested >= 40);
}

TEST_CASE("minimal rotation") {
  const SymTensor3 a = geodesic_gamma0(0.0);
  CHECK(norm(minimal_rotation(a, a).r - Mat3::identity()) < 1e-14);

  const SymTensor3 b = geodesic_gamma0(0.3);
  const Rotation3 r = minimal_rotation(a, b);
  CHECK(norm(conjugate(r.r, a) - b) < 1e-8);
  CHECK(r.orthogonality_defect() < 1e-10);
  CHECK(std::abs(r.determinant() - 1.0) < 1e-10);

  // continuity: ||R - I|| ~ ||a - b|| as the pair shrinks together
  for (const double t : {0.2, 0.1, 0.05, 0.025}) {
    const SymTensor3 bt = geodesic_gamma0(t);
    const Rotation3 rt = minimal_rotation(a, bt);
    CHECK(norm(rt.r - Mat3::identity()) <= 2.0 * norm(a - bt));
  }

  CHECK_THROWS_AS(minimal_rotation(projector(1, 0, 0), projector(0, 1, 0)), Error);
}

TEST_CASE("geodesic gamma0") {
  CHECK(norm(geodesic_gamma0(0.0) - SymTensor3::diag(1, 0, 0)) < 1e-15);
  CHECK(norm(geodesic_gamma0(2.0 * std::numbers::pi) - geodesic_gamma0(0.0)) < 1e-14);
  CHECK(norm(geodesic_gamma0(std::numbers::pi) - SymTensor3::diag(0, 1, 0)) < 1e-14);
  for (int i = 0; i < 100; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 100.0;
    const SymTensor3 g = geodesic_gamma0(t);
    CHECK(norm(square(g) - g) < 1e-14);
    CHECK(g.trace() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("antisymmetric representative of gamma0") {
  const AntisymRep rep = antisym_rep(sample_gamma0(256));
  const double q = 1.0 / (4.0 * std::numbers::pi);
  CHECK(rep.mean.a12 == doctest::Approx(q).epsilon(1e-3));
  CHECK(std::abs(rep.mean.a13) < 1e-12);
  CHECK(std::abs(rep.mean.a23) < 1e-12);
  CHECK(rep.max_deviation < 1e-3);
  CHECK(rep.mean.norm2() ==
        doctest::Approx(1.0 / (8.0 * std::numbers::pi * std::numbers::pi)).epsilon(1e-3));

  // refining the sampling shrinks the deviation
  const AntisymRep fine = antisym_rep(sample_gamma0(1024));
  CHECK(fine.max_deviation < rep.max_deviation / 4.0);

  // conjugated geodesic carries the conjugated representative, equal norm
  const Mat3 r = euler_zyx(0.7, 0.3, -0.4);
  const AntisymRep conj = antisym_rep(sample_gamma0(256, &r));
  CHECK((conj.mean - conjugate(r, rep.mean)).norm() < 1e-6);
  CHECK(conj.mean.norm() == doctest::Approx(rep.mean.norm()).epsilon(1e-9));
}

TEST_CASE("geodesic length") {
  const double expected = std::sqrt(2.0) * std::numbers::pi;
  CHECK(std::abs(geodesic_length(sample_gamma0(512)) - expected) < 1e-4);

  std::vector<std::pair<double, SymTensor3>> constant;
  for (int i = 0; i < 64; ++i)
    constant.emplace_back(2.0 * std::numbers::pi * i / 64.0, geodesic_gamma0(0.5));
  CHECK(geodesic_length(constant) < 1e-14);

  // quadrature error shrinks under refinement, order-consistently
  const double e16 = std::abs(geodesic_length(sample_gamma0(16)) - expected);
  const double e32 = std::abs(geodesic_length(sample_gamma0(32)) - expected);
  const double e64 = std::abs(geodesic_length(sample_gamma0(64)) - expected);
  CHECK(e32 < e16 / 2.0);
  CHECK(e64 < e32 / 2.0);
}

TEST_CASE("commutator of gamma0 with its derivative") {
  const AntiSymTensor3 c = commutator(geodesic_gamma0(0.0), geodesic_gamma0_deriv(0.0));
  CHECK(c.a12 == doctest::Approx(0.5));
  CHECK(std::abs(c.a13) < 1e-15);
  CHECK(std::abs(c.a23) < 1e-15);
}

TEST_CASE("dist to P") {
  CHECK(dist_to_p(random_projector()) < 1e-7);
  CHECK(dist_to_p(SymTensor3::isotropic()) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(dist_to_p(SymTensor3::diag(0.6, 0.4, 0.0)) == doctest::Approx(0.4 * std::sqrt(2.0)));
}
