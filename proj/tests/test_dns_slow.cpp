#include <doctest.h>

#include <cmath>

#include "ams/committor.hpp"
#include "ams/dns.hpp"

using namespace ams;

TEST_CASE("drift model against the closed form at dt = 1e-4") {
  const auto p = make_drift_problem(0.3, 1.0, CoordinateChoice::Linear);
  const DnsResult d = dns_run(p, {SchemeKind::Euler, 1e-4}, 100000, 21);
  const double exact = committor_drift(1.0, 0.0, 2.0, 1.0, 0.3);
  MESSAGE("dns " << d.alphaDns << " +- " << d.stdErr << " exact " << exact);
  CHECK(std::abs(d.alphaDns - exact) < 3.0 * d.stdErr);
}

TEST_CASE("double well at beta = 1 against the quadrature committor") {
  const auto p = make_double_well_problem(1.0, CoordinateChoice::Linear);
  const DnsResult d = dns_run(p, {SchemeKind::Euler, 1e-5}, 100000, 22);
  const double q = committor_1d_quadrature(-0.9, p.model, -1.0, 1.0);
  MESSAGE("dns " << d.alphaDns << " +- " << d.stdErr << " quadrature " << q);
  CHECK(std::abs(d.alphaDns - q) < 3.0 * d.stdErr);
}
