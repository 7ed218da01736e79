#include <doctest.h>

#include "gcgeo/jet.hpp"

using namespace gcgeo;

namespace {
RVec pt3(double a, double b, double c) {
  RVec p(3);
  p << a, b, c;
  return p;
}
}  // namespace

TEST_CASE("jet arithmetic on polynomials is exact") {
  // f = x0^2 x1 + 3 x2
  JetScalar f = JetScalar::coordinate(0) * JetScalar::coordinate(0) * JetScalar::coordinate(1) +
                3.0 * JetScalar::coordinate(2);
  Jet j = f.jet(pt3(2.0, -1.0, 0.5));
  CHECK(std::abs(j.v - cplx(-2.5)) < 1e-14);
  CHECK(std::abs(j.g(0) - cplx(-4.0)) < 1e-14);  // 2 x0 x1
  CHECK(std::abs(j.g(1) - cplx(4.0)) < 1e-14);   // x0^2
  CHECK(std::abs(j.g(2) - cplx(3.0)) < 1e-14);
  CHECK(std::abs(j.h(0, 0) - cplx(-2.0)) < 1e-14);  // 2 x1
  CHECK(std::abs(j.h(0, 1) - cplx(4.0)) < 1e-14);   // 2 x0
  CHECK(std::abs(j.h(1, 1)) < 1e-14);
}

TEST_CASE("transcendental rules against central differences") {
  JetScalar x = JetScalar::coordinate(0), y = JetScalar::coordinate(1),
            z = JetScalar::coordinate(2);
  JetScalar f = js_exp(x * y) / js_sqrt(JetScalar::constant(2.0) + js_abs2(x + kI * z)) +
                js_log(JetScalar::constant(3.0) + y * y) * js_conj(x + kI * y);
  RVec p = pt3(0.3, -0.7, 0.4);
  Jet j = f.jet(p);
  const double h = 1e-5;
  for (int k = 0; k < 3; ++k) {
    RVec pp = p, pm = p;
    pp(k) += h;
    pm(k) -= h;
    cplx fd = (f.value(pp) - f.value(pm)) / (2 * h);
    CHECK(std::abs(j.g(k) - fd) < 1e-9);
    for (int l = 0; l < 3; ++l) {
      cplx fdh = (f.jet(pp).g(l) - f.jet(pm).g(l)) / (2 * h);
      CHECK(std::abs(j.h(l, k) - fdh) < 1e-8);
    }
  }
  CHECK((j.h - j.h.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("symbolic differentiation and substitution") {
  JetScalar x = JetScalar::coordinate(0), y = JetScalar::coordinate(1);
  JetScalar f = js_exp(x) * y + js_conj(x) * x;
  JetScalar fx = diff(f, 0);
  RVec p = pt3(0.5, 2.0, 0.0);
  // d/dx (e^x y + x^2) = e^x y + 2x on real points
  CHECK(std::abs(fx.value(p) - (std::exp(0.5) * 2.0 + 1.0)) < 1e-14);
  // substitute x -> y*y, y -> 1
  JetScalar g = substitute(f, {y * y, JetScalar::constant(1.0), JetScalar()});
  CHECK(std::abs(g.value(p) - (std::exp(4.0) + 16.0)) < 1e-12);
  // conj is an involution at the expression level
  CHECK(js_conj(js_conj(f)).node() == f.node());
}

TEST_CASE("derivative of conj commutes with conj") {
  JetScalar x = JetScalar::coordinate(0), y = JetScalar::coordinate(1);
  JetScalar w = x + kI * y;  // complex coordinate
  JetScalar f = js_log(JetScalar::constant(2.0) + w * w);
  RVec p = pt3(0.4, 0.9, 0.0);
  Jet a = js_conj(f).jet(p);
  Jet b = f.jet(p);
  CHECK((a.g - b.g.conjugate()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("parser grammar") {
  std::vector<std::string> names = {"x", "y"};
  JetScalar f = parse_expr("exp(x*y) - 2.5*conj(x) + i*sqrt(abs2(y)+1)", names);
  RVec p(2);
  p << 0.3, -1.2;
  cplx expected = std::exp(0.3 * -1.2) - 2.5 * 0.3 + kI * std::sqrt(1.2 * 1.2 + 1.0);
  CHECK(std::abs(f.value(p) - expected) < 1e-14);
  CHECK_THROWS_AS(parse_expr("x + unknown(y)", names), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("x + ", names), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("z", names), std::invalid_argument);
}

TEST_CASE("serialization round trip") {
  std::vector<std::string> names = {"x", "y"};
  JetScalar f = parse_expr("re(x*y)/(1+abs2(x)) - im(conj(y))", names);
  JetScalar g = parse_expr(f.str(), {});  // str() uses positional $k tokens
  RVec p(2);
  p << -0.8, 0.35;
  CHECK(std::abs(f.value(p) - g.value(p)) < 1e-15);
}

TEST_CASE("structural zero guards") {
  JetScalar zero;
  CHECK(zero.is_zero());
  CHECK_THROWS_AS(JetScalar::constant(1.0) / zero, std::invalid_argument);
  CHECK((zero + JetScalar::constant(2.0)).constant_value() == cplx(2.0));
}

TEST_CASE("context reuse across temporary expressions is safe") {
  JetScalar x = JetScalar::coordinate(0), y = JetScalar::coordinate(1);
  RVec p = pt3(0.7, -0.3, 0.0);
  JetContext ctx(p);
  cplx first = diff(js_exp(x * y), 0).value(ctx);
  for (int k = 0; k < 50; ++k) (void)diff(js_exp(x * y) * cplx(k + 1.0), 0).value(ctx);
  cplx again = diff(js_exp(x * y), 0).value(ctx);
  CHECK(std::abs(first - cplx(-0.3) * std::exp(-0.21)) < 1e-14);
  CHECK(std::abs(first - again) < 1e-15);
}
