#include "doctest.h"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "fsidd/fem.hpp"
#include "fsidd/mms.hpp"

using namespace fsidd;

namespace {

BoundarySpec all(BoundaryTag t) { return {{Side::bottom, t}, {Side::right, t}, {Side::top, t}, {Side::left, t}}; }

BoundarySpec fluid_spec() {
  return {{Side::bottom, BoundaryTag::gamma_f}, {Side::right, BoundaryTag::gamma_f},
          {Side::top, BoundaryTag::interface}, {Side::left, BoundaryTag::gamma_f}};
}

std::shared_ptr<const Mesh> square(int n, const BoundarySpec& spec = fluid_spec()) {
  return std::make_shared<const Mesh>(build_structured_mesh({0, 0, 1, 1}, n, n, spec));
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Gauss-Legendre on [0,1] by Golub-Welsch, independent of the library routine.
std::vector<std::pair<double, double>> oracle_gauss(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) {
    const double w = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    out.emplace_back(0.5 * (es.eigenvalues()(i) + 1.0), 0.5 * w);
  }
  return out;
}

// ∫_T g over a physical triangle, degree-14 collapsed Gauss.
double oracle_integrate(const std::array<Point, 3>& v, const std::function<double(double, double)>& g) {
  static const auto rule = oracle_gauss(8);
  const double det = (v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y);
  double s = 0.0;
  for (auto [a, wa] : rule) {
    for (auto [b, wb] : rule) {
      const double xi = a, eta = b * (1.0 - a);
      const double x = v[0].x + (v[1].x - v[0].x) * xi + (v[2].x - v[0].x) * eta;
      const double y = v[0].y + (v[1].y - v[0].y) * xi + (v[2].y - v[0].y) * eta;
      s += wa * wb * (1.0 - a) * std::abs(det) * g(x, y);
    }
  }
  return s;
}

std::array<Point, 3> corners(const Mesh& m, int t) {
  return {m.vertices[m.triangles[t][0]], m.vertices[m.triangles[t][1]], m.vertices[m.triangles[t][2]]};
}

// Barycentric coordinate of (x, y) for local vertex k, by Cramer's rule.
double barycentric(const std::array<Point, 3>& v, int k, double x, double y) {
  const auto& a = v[(k + 1) % 3];
  const auto& b = v[(k + 2) % 3];
  const double num = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
  const double den = (b.x - a.x) * (v[k].y - a.y) - (b.y - a.y) * (v[k].x - a.x);
  return num / den;
}

double max_asymmetry(const SparseOperator& a) {
  const Eigen::MatrixXd d(a);
  return (d - d.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("triangle rules integrate monomials exactly") {
  for (int deg = 0; deg <= 14; ++deg) {
    const auto& rule = triangle_rule(deg);
    for (int a = 0; a <= deg; ++a) {
      for (int b = 0; a + b <= deg; ++b) {
        double s = 0.0;
        for (const auto& q : rule) s += q.weight * std::pow(q.xi, a) * std::pow(q.eta, b);
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(std::abs(s - exact) < 1e-15);
      }
    }
  }
}

TEST_CASE("gauss-legendre agrees with the Golub-Welsch oracle") {
  for (int n = 1; n <= 10; ++n) {
    auto lib = gauss_legendre(n);
    auto ref = oracle_gauss(n);
    std::sort(ref.begin(), ref.end());
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(lib[i].s - ref[i].first) < 1e-14);
      CHECK(std::abs(lib[i].weight - ref[i].second) < 1e-14);
    }
  }
}

TEST_CASE("dof counts") {
  const auto m = square(4);
  CHECK(FeSpace(m, ElementKind::P1, 1).num_dofs() == 25);
  CHECK(FeSpace(m, ElementKind::P2, 2).num_dofs() == 162);
  CHECK(FeSpace(m, ElementKind::P1_bubble, 2).num_dofs() == 114);
  CHECK(FeSpace(m, ElementKind::P0, 1).num_dofs() == 32);
}

TEST_CASE("interface dofs are ordered by arclength") {
  const auto m = square(4);
  for (auto kind : {ElementKind::P1, ElementKind::P2, ElementKind::P1_bubble}) {
    const FeSpace v(m, kind, 2);
    const auto& d = v.interface_scalar_dofs();
    CHECK(d.size() == (kind == ElementKind::P2 ? 9u : 5u));
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(v.node(d[i]).y == doctest::Approx(1.0));
      if (i > 0) CHECK(v.node(d[i]).x > v.node(d[i - 1]).x);
    }
  }
}

TEST_CASE("basis functions form a partition of unity with zero gradient sum") {
  for (auto kind : {ElementKind::P1, ElementKind::P2}) {
    const int n = local_dof_count(kind);
    std::vector<double> val(n);
    std::vector<Eigen::Vector2d> grad(n);
    eval_reference_basis(kind, 0.21, 0.37, val, grad);
    double s = 0.0;
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int i = 0; i < n; ++i) {
      s += val[i];
      g += grad[i];
    }
    CHECK(s == doctest::Approx(1.0));
    CHECK(g.norm() < 1e-14);
  }
}

TEST_CASE("mass, strain and div identities") {
  const auto m = square(4);
  for (auto kind : {ElementKind::P1, ElementKind::P2, ElementKind::P1_bubble}) {
    const FeSpace v(m, kind, 2);
    const FeSpace s(m, kind, 1);
    const SparseOperator ms = assemble_form(s, s, FormKind::mass, 1.0);
    const DofVector one = interpolate(s, ScalarField([](const Point&, double) { return 1.0; }), 0.0);
    CHECK(std::abs(one.dot(ms * one) - 1.0) < 1e-13);

    const SparseOperator a = assemble_form(v, v, FormKind::strain, 1.0);
    const DofVector rigid =
        interpolate(v, VectorField([](const Point& p, double) { return Eigen::Vector2d(-p.y, p.x); }), 0.0);
    CHECK(std::abs(rigid.dot(a * rigid)) < 1e-12);

    const FeSpace q(m, ElementKind::P1, 1);
    const SparseOperator b = assemble_form(v, q, FormKind::div, 1.0);
    const DofVector c =
        interpolate(v, VectorField([](const Point&, double) { return Eigen::Vector2d(2.0, -3.0); }), 0.0);
    CHECK((b * c).cwiseAbs().maxCoeff() < 1e-13);
    // transposed placement gives the transposed matrix
    const SparseOperator bt = assemble_form(q, v, FormKind::div, 1.0);
    CHECK((Eigen::MatrixXd(bt) - Eigen::MatrixXd(b).transpose()).cwiseAbs().maxCoeff() < 1e-15);

    CHECK(max_asymmetry(ms) < 1e-13);
    CHECK(max_asymmetry(a) < 1e-13);
    CHECK(max_asymmetry(assemble_form(v, v, FormKind::divdiv, 2.0)) < 1e-13);
    CHECK(max_asymmetry(assemble_form(v, v, FormKind::iface_mass, 1.0)) < 1e-13);
  }
}

TEST_CASE("div form on a linear field") {
  const auto m = square(3);
  const FeSpace v(m, ElementKind::P2, 2);
  const FeSpace q(m, ElementKind::P1, 1);
  const SparseOperator b = assemble_form(v, q, FormKind::div, 1.0);
  // u = (x, 2y): div u = 3, so (1, div u) = 3
  const DofVector u =
      interpolate(v, VectorField([](const Point& p, double) { return Eigen::Vector2d(p.x, 2.0 * p.y); }), 0.0);
  const DofVector one = DofVector::Ones(q.num_dofs());
  CHECK(one.dot(b * u) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("strain kernel is the rigid motions") {
  const auto m = square(2, all(BoundaryTag::gamma_f));
  for (auto kind : {ElementKind::P1, ElementKind::P2}) {
    const FeSpace v(m, kind, 2);
    const Eigen::MatrixXd a(assemble_form(v, v, FormKind::strain, 1.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    int zeros = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      CHECK(es.eigenvalues()(i) > -1e-10);
      if (es.eigenvalues()(i) < 1e-10) ++zeros;
    }
    CHECK(zeros == 3);
  }
}

TEST_CASE("load vectors") {
  const auto m = square(4);
  const FeSpace v(m, ElementKind::P1, 2);
  CHECK(assemble_load(v, VectorField([](const Point&, double) { return Eigen::Vector2d::Zero(); }), 0.0).norm() == 0.0);
  const DofVector b = assemble_load(v, VectorField([](const Point&, double) { return Eigen::Vector2d(2.5, -1.0); }), 0.0);
  CHECK(b.head(v.num_scalar_dofs()).sum() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(b.tail(v.num_scalar_dofs()).sum() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("manufactured fluid forcing load matches the oracle") {
  const auto m = square(4);
  const FeSpace v(m, ElementKind::P1, 2);
  const MaterialParams params;
  const auto fields = mms_fields(params);
  const DofVector b = assemble_load(v, fields.f_f, 0.0);
  DofVector ref = DofVector::Zero(v.num_dofs());
  for (int t = 0; t < m->num_triangles(); ++t) {
    const auto c = corners(*m, t);
    for (int k = 0; k < 3; ++k) {
      for (int comp = 0; comp < 2; ++comp) {
        ref(v.dof(comp, m->triangles[t][k])) += oracle_integrate(c, [&](double x, double y) {
          return mms_exact(params, x, y, 0.0).f_f(comp) * barycentric(c, k, x, y);
        });
      }
    }
  }
  CHECK((b - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("interface loads") {
  const auto m = square(4);
  for (auto kind : {ElementKind::P1, ElementKind::P2}) {
    const FeSpace v(m, kind, 2);
    const int n = static_cast<int>(v.interface_scalar_dofs().size());
    CHECK(assemble_interface_load(v, DofVector::Zero(2 * n)).norm() == 0.0);

    DofVector g(2 * n);
    g.head(n).setConstant(3.0);
    g.tail(n).setConstant(-2.0);
    const DofVector b = assemble_interface_load(v, g);
    CHECK(b.head(v.num_scalar_dofs()).sum() == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(b.tail(v.num_scalar_dofs()).sum() == doctest::Approx(-2.0).epsilon(1e-13));

    // linear trace a + b x against the test function x: a/2 + b/3
    for (int i = 0; i < n; ++i) {
      const double x = v.node(v.interface_scalar_dofs()[i]).x;
      g(i) = 1.0 + 2.0 * x;
      g(n + i) = 0.0;
    }
    const DofVector load = assemble_interface_load(v, g);
    const DofVector xfun =
        interpolate(v, VectorField([](const Point& p, double) { return Eigen::Vector2d(p.x, 0.0); }), 0.0);
    CHECK(std::abs(xfun.dot(load) - (0.5 + 2.0 / 3.0)) < 1e-12);
    CHECK_THROWS_AS(assemble_interface_load(v, DofVector::Zero(n)), std::invalid_argument);
  }
}

TEST_CASE("essential boundary conditions") {
  const auto m = square(2);
  const FeSpace v(m, ElementKind::P2, 2);
  const SparseOperator a = assemble_form(v, v, FormKind::strain, 1.0) + assemble_form(v, v, FormKind::mass, 1.0);
  const std::vector<BoundaryTag> tags{BoundaryTag::gamma_f, BoundaryTag::interface};
  const auto dofs = dirichlet_dofs(v, tags);

  const auto hom = apply_essential_bc(a, DofVector::Zero(v.num_dofs()), dofs, DofVector::Zero(v.num_dofs()));
  Eigen::SimplicialLDLT<SparseOperator> solver(hom.op);
  CHECK(DofVector(solver.solve(hom.rhs)).norm() == 0.0);
  CHECK(max_asymmetry(hom.op) < 1e-13);

  const MaterialParams params;
  const auto fields = mms_fields(params);
  const DofVector exact = interpolate(v, fields.u, 0.0);
  const auto con = apply_essential_bc(a, a * exact, dofs, exact);
  CHECK(max_asymmetry(con.op) < 1e-13);
  solver.compute(con.op);
  const DofVector x = solver.solve(con.rhs);
  for (int d : dofs) CHECK(x(d) == exact(d));
  // consistent data reproduces the whole field
  CHECK((x - exact).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("error norms") {
  const auto m = square(4);
  const FeSpace v(m, ElementKind::P2, 2);
  const VectorExact quad{
      [](const Point& p, double) { return Eigen::Vector2d(p.x * p.y, p.x * p.x - p.y); },
      [](const Point& p, double) {
        Eigen::Matrix2d g;
        g << p.y, p.x, 2.0 * p.x, -1.0;
        return g;
      }};
  const DofVector qi = interpolate(v, quad.value, 0.0);
  CHECK(error_norm(v, qi, quad, 0.0, Norm::L2) < 1e-13);
  CHECK(error_norm(v, qi, quad, 0.0, Norm::H1_semi) < 1e-13);

  const MaterialParams params;
  const auto fields = mms_fields(params);
  const double T = 0.0025;
  double ref = 0.0;
  for (int t = 0; t < m->num_triangles(); ++t) {
    ref += oracle_integrate(corners(*m, t),
                            [&](double x, double y) { return mms_exact(params, x, y, T).u.squaredNorm(); });
  }
  CHECK(error_norm(v, DofVector::Zero(v.num_dofs()), fields.u_exact, T, Norm::L2) ==
        doctest::Approx(std::sqrt(ref)).epsilon(1e-12));
}

TEST_CASE("P2 interpolation converges at third order in L2") {
  const MaterialParams params;
  const auto fields = mms_fields(params);
  std::vector<double> err;
  for (int n : {4, 8, 16, 32}) {
    const FeSpace v(square(n), ElementKind::P2, 2);
    err.push_back(error_norm(v, interpolate(v, fields.u, 0.1), fields.u_exact, 0.1, Norm::L2));
  }
  for (std::size_t i = 1; i < err.size(); ++i) CHECK(std::log2(err[i - 1] / err[i]) == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("point evaluation") {
  const auto m = square(3);
  const FeSpace v(m, ElementKind::P2, 2);
  const VectorField f = [](const Point& p, double) { return Eigen::Vector2d(p.x * p.x, p.x * p.y - 1.0); };
  const DofVector c = interpolate(v, f, 0.0);
  for (Point p : {Point{0.0, 0.0}, Point{0.5, 1.0}, Point{0.31, 0.77}, Point{1.0, 0.5}}) {
    CHECK((evaluate(v, c, p) - f(p, 0.0)).norm() < 1e-13);
  }
  CHECK_THROWS_AS(evaluate(v, c, {2.0, 0.5}), std::invalid_argument);
}

namespace {

// Smallest nonzero generalized eigenvalue of B A^{-1} B^T against the pressure
// mass, with no-slip velocity on the whole boundary.
double inf_sup_constant(ElementKind vkind, int n) {
  const auto m = square(n, all(BoundaryTag::gamma_f));
  const FeSpace v(m, vkind, 2);
  const FeSpace q(m, ElementKind::P1, 1);
  const std::vector<BoundaryTag> tags{BoundaryTag::gamma_f};
  const auto dofs = dirichlet_dofs(v, tags);
  std::vector<char> fixed(v.num_dofs(), 0);
  for (int d : dofs) fixed[d] = 1;
  std::vector<int> freedofs;
  for (int i = 0; i < v.num_dofs(); ++i) {
    if (!fixed[i]) freedofs.push_back(i);
  }
  const SparseOperator a_full = assemble_form(v, v, FormKind::grad, 1.0);
  const Eigen::MatrixXd b_full(assemble_form(v, q, FormKind::div, 1.0));
  const Eigen::MatrixXd a_dense(a_full);
  const int nf = static_cast<int>(freedofs.size());
  Eigen::MatrixXd a(nf, nf), b(q.num_dofs(), nf);
  for (int i = 0; i < nf; ++i) {
    b.col(i) = b_full.col(freedofs[i]);
    for (int j = 0; j < nf; ++j) a(i, j) = a_dense(freedofs[i], freedofs[j]);
  }
  const Eigen::MatrixXd s = b * a.llt().solve(b.transpose());
  const Eigen::MatrixXd mp(assemble_form(q, q, FormKind::mass, 1.0));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, mp);
  return std::sqrt(es.eigenvalues()(1));  // (0) is the constant pressure
}

}  // namespace

TEST_CASE("discrete inf-sup constants stay bounded below") {
  for (auto kind : {ElementKind::P2, ElementKind::P1_bubble}) {
    double coarse = 0.0;
    for (int n : {4, 8, 16}) {
      const double beta = inf_sup_constant(kind, n);
      MESSAGE(std::string(to_string(kind)) << " h=1/" << n << " beta=" << beta);
      CHECK(beta > 0.3);
      if (coarse > 0.0) CHECK(beta > 0.97 * coarse);
      coarse = beta;
    }
  }
}
