#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "fsidd/timegrid.hpp"

using namespace fsidd;

namespace {

std::shared_ptr<const TimeGrid> grid(std::vector<double> p) { return std::make_shared<const TimeGrid>(std::move(p)); }
std::shared_ptr<const TimeGrid> uniform(double T, int M) {
  return std::make_shared<const TimeGrid>(make_uniform_grid(T, M));
}

// Value of a piecewise constant series at time t, slabs half-open (t^{m-1}, t^m].
double sample(const TraceSeries& s, int dof, double t) {
  const auto& p = s.grid().points();
  for (int m = 1; m <= s.num_slabs(); ++m) {
    if (t > p[m - 1] && t <= p[m]) return s.slab(m)(dof);
  }
  return 0.0;
}

// Midpoint Riemann sum of the slab average, independent of the overlap walk.
TraceSeries brute_force_project(const TraceSeries& s, std::shared_ptr<const TimeGrid> target, int samples) {
  TraceSeries out(target, s.ndof());
  for (int m = 1; m <= target->num_slabs(); ++m) {
    const double a = target->t(m - 1), h = target->dt(m) / samples;
    for (int d = 0; d < s.ndof(); ++d) {
      double acc = 0.0;
      for (int k = 0; k < samples; ++k) acc += sample(s, d, a + (k + 0.5) * h);
      out.slab(m)(d) = acc / samples;
    }
  }
  return out;
}

TraceSeries random_series(std::shared_ptr<const TimeGrid> g, int ndof, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TraceSeries s(g, ndof);
  for (int m = 1; m <= s.num_slabs(); ++m)
    for (int d = 0; d < ndof; ++d) s.slab(m)(d) = u(gen);
  return s;
}

std::shared_ptr<const TimeGrid> random_grid(double T, int M, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> w(M);
  double sum = 0.0;
  for (auto& x : w) sum += (x = u(gen));
  std::vector<double> p{0.0};
  for (int m = 0; m < M - 1; ++m) p.push_back(p.back() + T * w[m] / sum);
  p.push_back(T);
  return grid(p);
}

}  // namespace

TEST_CASE("uniform grids") {
  const TimeGrid one = make_uniform_grid(1.0, 1);
  CHECK(one.num_slabs() == 1);
  CHECK(one.t(0) == 0.0);
  CHECK(one.final_time() == 1.0);

  const TimeGrid g = make_uniform_grid(0.2, 8);
  CHECK(g.num_slabs() == 8);
  for (int m = 1; m <= 8; ++m) CHECK(g.dt(m) == doctest::Approx(0.025).epsilon(1e-13));
  CHECK(g.final_time() == 0.2);

  CHECK(slab_count(0.1, 2e-4) == 500);
  CHECK(slab_count(0.1, 1e-4) == 1000);
  CHECK(make_uniform_grid(0.1, slab_count(0.1, 2e-4)).final_time() == 0.1);
  CHECK_THROWS_AS(slab_count(0.1, 3e-2), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(1.0, 0), std::invalid_argument);
}

TEST_CASE("grids must be strictly increasing from zero") {
  CHECK_THROWS_AS(TimeGrid({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid({0.1, 1.0}), std::invalid_argument);
}

TEST_CASE("slab overlaps") {
  CHECK(overlap(0, 1, 0, 1) == 1.0);
  CHECK(overlap(0, 0.5, 0.25, 0.75) == 0.25);
  CHECK(overlap(0, 0.25, 0.5, 1) == 0.0);
  CHECK(overlap(0, 0.5, 0.5, 1) == 0.0);
}

TEST_CASE("two-slab series onto one slab and onto thirds") {
  const double a = 1.75, b = -0.5;
  TraceSeries s(uniform(1.0, 2), 1);
  s.slab(1)(0) = a;
  s.slab(2)(0) = b;

  const TraceSeries one = project(s, uniform(1.0, 1));
  CHECK(one.slab(1)(0) == doctest::Approx((a + b) / 2).epsilon(1e-15));

  const auto thirds = uniform(1.0, 3);
  const TraceSeries t = project(s, thirds);
  CHECK(t.slab(1)(0) == doctest::Approx(a).epsilon(1e-14));
  CHECK(t.slab(2)(0) == doctest::Approx((a + b) / 2).epsilon(1e-14));
  CHECK(t.slab(3)(0) == doctest::Approx(b).epsilon(1e-14));

  const TraceSeries oracle = brute_force_project(s, thirds, 3000);
  for (int m = 1; m <= 3; ++m) CHECK(t.slab(m)(0) == doctest::Approx(oracle.slab(m)(0)).epsilon(1e-9));
}

TEST_CASE("projection agrees with a Riemann-sum oracle on random grids") {
  const auto src = random_grid(0.7, 9, 21);
  const auto dst = random_grid(0.7, 5, 22);
  const TraceSeries s = random_series(src, 3, 23);
  const TraceSeries p = project(s, dst);
  const TraceSeries q = brute_force_project(s, dst, 20000);
  // one sample per slab boundary can land on the wrong side
  CHECK((p.values() - q.values()).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("identity and constants") {
  const auto g = random_grid(1.3, 7, 3);
  const TraceSeries s = random_series(g, 4, 4);
  CHECK(project(s, g).values() == s.values());
  CHECK(project(s, grid(g->points())).values() == s.values());

  TraceSeries c(g, 2);
  c.values().row(0).setConstant(2.5);
  c.values().row(1).setConstant(-1.0);
  const TraceSeries pc = project(c, uniform(1.3, 11));
  CHECK((pc.values().row(0).array() - 2.5).abs().maxCoeff() <= 1e-14);
  CHECK((pc.values().row(1).array() + 1.0).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("integral preservation and stability") {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const auto src = random_grid(2.0, 13 + seed, 100 + seed);
    const auto dst = random_grid(2.0, 6 + 2 * seed, 200 + seed);
    const TraceSeries s = random_series(src, 5, 300 + seed);
    const TraceSeries p = project(s, dst);
    CHECK((p.integral() - s.integral()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(p.l2_norm() <= s.l2_norm() + 1e-12);

    Eigen::MatrixXd w = Eigen::MatrixXd::Random(5, 5);
    w = w * w.transpose() + Eigen::MatrixXd::Identity(5, 5);
    CHECK(p.l2_norm(&w) <= s.l2_norm(&w) + 1e-12);
  }
}

TEST_CASE("projection is idempotent and composes through a coarser grid") {
  const auto fine4 = random_grid(1.0, 4, 31);
  const auto fine6 = random_grid(1.0, 6, 32);
  const auto coarse = uniform(1.0, 2);
  const TraceSeries s = random_series(fine4, 2, 33);

  const TraceSeries p = project(s, fine6);
  const TraceSeries pp = project(p, fine6);
  CHECK((pp.values() - p.values()).norm() == 0.0);

  // fine -> coarse -> fine equals coarse -> fine of the coarse average
  const TraceSeries c = project(s, coarse);
  const TraceSeries via = project(c, fine6);
  const TraceSeries avg = brute_force_project(s, coarse, 20000);
  const TraceSeries direct = brute_force_project(avg, fine6, 20000);
  CHECK((via.values() - direct.values()).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("projection matrix") {
  const auto a = random_grid(1.0, 5, 41);
  const auto b = random_grid(1.0, 3, 42);
  const Eigen::MatrixXd P = projection_matrix(*a, *b);
  CHECK(P.rows() == 3);
  CHECK(P.cols() == 5);
  CHECK((P.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-14);
  CHECK((P.array() >= 0.0).all());
  const TraceSeries s = random_series(a, 2, 43);
  const Eigen::MatrixXd viaP = s.values() * P.transpose();
  CHECK((viaP - project(s, b).values()).norm() <= 1e-14);
}

TEST_CASE("grids over different intervals are rejected") {
  const TraceSeries s(uniform(1.0, 4), 1);
  CHECK_THROWS_AS(project(s, uniform(1.1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(TraceSeries(uniform(1.0, 4), Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}
