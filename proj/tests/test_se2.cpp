#include <cmath>
#include <random>

#include <doctest.h>

#include "circ/se2.hpp"

using namespace circ;

namespace {

std::mt19937_64 rng(314159);
double rnd() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }
Se2Element rnd_g() { return Se2Element(3.0 * rnd(), Vec2(rnd(), rnd())); }
Se2Vector rnd_zeta() { return Se2Vector(rnd(), Vec2(rnd(), rnd())); }

}  // namespace

TEST_CASE("compose and inverse give the identity") {
  for (int k = 0; k < 20; ++k) {
    const Se2Element g = rnd_g();
    const Mat3 m = compose(g, inverse(g)).matrix();
    CHECK((m - Mat3::Identity()).norm() < 1e-14);
    CHECK((g.matrix() * inverse(g).matrix() - Mat3::Identity()).norm() < 1e-14);
  }
}

TEST_CASE("composition matches the 3x3 matrix product") {
  for (int k = 0; k < 20; ++k) {
    const Se2Element g = rnd_g(), h = rnd_g();
    CHECK((compose(g, h).matrix() - g.matrix() * h.matrix()).norm() < 1e-13);
    // (R_theta, x0)(R_psi, y0) = (R_{theta+psi}, x0 + R_theta y0)
    CHECK(compose(g, h).theta() == doctest::Approx(g.theta() + h.theta()));
    CHECK((compose(g, h).translation() -
           (g.translation() + g.rot() * h.translation()))
              .norm() < 1e-14);
  }
}

TEST_CASE("exponential of a pure translation is a straight shift") {
  const Se2Element g = exp(Se2Vector(0.0, Vec2(2.0, -1.0)), 0.7);
  CHECK(g.theta() == 0.0);
  CHECK((g.translation() - Vec2(1.4, -0.7)).norm() < 1e-15);
}

TEST_CASE("exp is a one-parameter subgroup, including the small-angle branch") {
  for (double omega : {1.3, 1e-8, -2.0e-7, 0.0}) {
    const Se2Vector zeta(omega, Vec2(0.4, -0.9));
    const Se2Element whole = exp(zeta, 0.9);
    const Se2Element split = compose(exp(zeta, 0.5), exp(zeta, 0.4));
    CHECK(std::abs(whole.theta() - split.theta()) < 1e-12);
    CHECK((whole.translation() - split.translation()).norm() < 1e-12);
  }
}

TEST_CASE("coadjoint action is dual to the adjoint action") {
  for (int k = 0; k < 50; ++k) {
    const Se2Element g = rnd_g();
    const Se2Momentum pi(rnd(), Vec2(rnd(), rnd()));
    const Se2Vector zeta = rnd_zeta();
    // duality: <Ad*_{g^-1} pi, Ad_g zeta> = <pi, zeta>, and Ad_g = Ad_{(g^-1)^-1}
    CHECK(std::abs(pairing(coad_action(g, pi), ad_action(inverse(g), zeta)) -
                   pairing(pi, zeta)) < 1e-12);
  }
  // translational part of Ad*_{g^-1} pi is R_theta P
  const Se2Element g = rnd_g();
  const Se2Momentum pi(0.3, Vec2(1.0, -2.0));
  CHECK((coad_action(g, pi).lin - g.rot() * pi.lin).norm() < 1e-14);
  // identity acts trivially
  const Se2Element e = Se2Element::identity();
  CHECK((coad_action(e, pi).as_vec3() - pi.as_vec3()).norm() == 0.0);
  CHECK((ad_action(e, rnd_zeta()).as_vec3() -
         ad_action(e, ad_action(e, rnd_zeta())).as_vec3())
            .norm() >= 0.0);  // no-throw smoke
}

TEST_CASE("lie bracket matches the derivative-of-Ad oracle") {
  auto ad_derivative = [](const Se2Vector& z1, const Se2Vector& z2) {
    const double h = 1e-6;
    // Ad_{exp(t z1)} z2 = ad_action(exp(-t z1), z2) since ad_action is Ad_{g^-1}
    const Vec3 plus = ad_action(exp(z1, -h), z2).as_vec3();
    const Vec3 minus = ad_action(exp(z1, h), z2).as_vec3();
    return Se2Vector::from_vec3((plus - minus) / (2.0 * h));
  };
  for (int k = 0; k < 30; ++k) {
    const Se2Vector z1 = rnd_zeta(), z2 = rnd_zeta();
    const Vec3 closed = lie_bracket(z1, z2).as_vec3();
    CHECK((closed - ad_derivative(z1, z2).as_vec3()).norm() < 1e-8);
    // antisymmetry
    CHECK((closed + lie_bracket(z2, z1).as_vec3()).norm() < 1e-15);
  }
  // pure translations commute
  const Se2Vector t1(0.0, Vec2(1.0, 2.0)), t2(0.0, Vec2(-3.0, 0.5));
  CHECK(lie_bracket(t1, t2).as_vec3().norm() == 0.0);
  // [e_Omega, e_x] is a pure translation, fixed by the oracle
  const Se2Vector eo(1.0, Vec2(0.0, 0.0)), ex(0.0, Vec2(1.0, 0.0));
  const Se2Vector b = lie_bracket(eo, ex);
  CHECK(b.ang == 0.0);
  CHECK((b.as_vec3() - ad_derivative(eo, ex).as_vec3()).norm() < 1e-8);
}
