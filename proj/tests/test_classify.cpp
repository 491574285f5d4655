#include <catch_amalgamated.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "symdiag/classify.hpp"
#include "symdiag/generators.hpp"

using namespace symdiag;

namespace {

// Stationary diagonal tensor with a prescribed ratio per pair:
// A_ijj = gamma_ij A_iii and A_iij = gamma_ij A_jjj.
SymTensor3 sd_with_ratios(const std::vector<double>& diag, const Matrix& gamma) {
  const int n = static_cast<int>(diag.size());
  SymTensor3 a(n);
  for (int i = 0; i < n; ++i) a.set(i, i, i, diag[i]);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a.set(i, j, j, gamma(i, j) * diag[i]);
      a.set(i, i, j, gamma(i, j) * diag[j]);
    }
  return a;
}

}  // namespace

TEST_CASE("pseudo diagonal detection") {
  CHECK(is_pseudo_diagonal(random_pd(5, 2100), 1e-12));
  SymTensor3 a = random_pd(4, 2101);
  a.set(0, 0, 1, 1e-3);
  CHECK(!is_pseudo_diagonal(a, 1e-9));
  CHECK(is_pseudo_diagonal(a, 1e-2));
}

TEST_CASE("stationary diagonal residual is max |d|") {
  SymTensor3 a(3);
  a.set(0, 0, 0, 2.0);
  a.set(1, 1, 1, 1.0);
  a.set(0, 0, 1, 0.5);  // d_{0,1} = 2*0.5 - 0 = 1
  const SdVerdict v = is_stationary_diagonal(a, 1e-9);
  CHECK(!v.sd);
  CHECK_THAT(v.residual, Catch::Matchers::WithinRel(1.0, 1e-12));
  CHECK(is_stationary_diagonal(lmd3_example(0.3, 0.2), 1e-12).sd);
}

TEST_CASE("least-squares ratios recover the constructed gammas") {
  Matrix g = Matrix::Zero(4, 4);
  g(0, 1) = -0.8;
  g(0, 2) = 0.3;
  g(0, 3) = 1.7;
  g(1, 2) = 0.0;
  g(1, 3) = -1.2;
  g(2, 3) = 0.25;
  const SymTensor3 a = sd_with_ratios({1.5, -0.7, 2.2, 0.9}, g);
  REQUIRE(is_stationary_diagonal(a, 1e-12).sd);
  for (const auto& r : stationary_ratios(a)) {
    REQUIRE(r.kind == StationaryRatio::Kind::Finite);
    CHECK_THAT(r.gamma, Catch::Matchers::WithinAbs(g(r.i, r.j), 1e-12));
  }
}

TEST_CASE("jd verdict follows the gamma interval [-1, 1/3]") {
  struct Row {
    double gamma;
    bool jd;
  };
  for (const Row row : {Row{-1.5, false}, Row{-1.0, true}, Row{-0.4, true}, Row{0.0, true},
                        Row{1.0 / 3.0, true}, Row{0.5, false}, Row{1.2, false}}) {
    const SymTensor3 a = lmd3_example(0.0, row.gamma);
    const JdEvidence ev = is_jacobi_diagonal(a, 1e-9);
    CHECK(ev.sd);
    CHECK(ev.jd == row.jd);
    CHECK(ev.routes_agree);
  }
}

TEST_CASE("omega and the gamma polynomial agree exactly on the ratio family") {
  for (double gamma : {-1.8, -0.6, 0.1, 0.33, 0.9}) {
    const SymTensor3 a = lmd3_example(0.4, gamma);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const PairStats st = pair_stats(a, i, j);
        const double aii = a(i, i, i), ajj = a(j, j, j);
        CHECK_THAT(-st.omega,
                   Catch::Matchers::WithinAbs(
                       (3.0 * gamma * gamma + 2.0 * gamma - 1.0) * (aii * aii + ajj * ajj),
                       1e-12));
      }
  }
}

TEST_CASE("hessian form assembly agrees with the direct sum and the tangent-route form") {
  Rng rng(2200);
  for (int s = 0; s < 10; ++s) {
    const int n = 3 + s % 3;
    const SymTensor3 a = random_symmetric(n, 2200 + s);
    const HessianForm form = hessian_form_at_identity(a);
    for (int rep = 0; rep < 3; ++rep) {
      const SkewMatrix delta = random_skew(n, rng);
      const double direct = hessian_form_direct(a, delta);
      CHECK_THAT(form.value(delta), Catch::Matchers::WithinAbs(direct, 1e-10));
      CHECK_THAT(hessian_form_at(a, Matrix::Identity(n, n), delta),
                 Catch::Matchers::WithinAbs(direct, 1e-10));
    }
  }
}

TEST_CASE("hessian form matches geodesic second differences at arbitrary Q") {
  Rng rng(2300);
  for (int s = 0; s < 10; ++s) {
    const int n = 2 + s % 3;
    const SymTensor3 a = random_symmetric(n, 2300 + s);
    const Matrix q = random_orthogonal(n, rng);
    const SkewMatrix delta = random_skew(n, rng);
    const Matrix d = delta.matrix();
    const double h = 1e-4;
    const double f0 = cost_f(a, q);
    const double fp = cost_f(a, q * (h * d).exp());
    const double fm = cost_f(a, q * (-h * d).exp());
    const double fd = (fp - 2.0 * f0 + fm) / (h * h);
    const double scale = std::max(1.0, std::abs(fd));
    CHECK_THAT(hessian_form_at(a, q, delta), Catch::Matchers::WithinAbs(fd, 1e-4 * scale));
  }
}

TEST_CASE("euclidean 3x3 hessian matrix reproduces the quadratic form") {
  Rng rng(2400);
  for (double gamma : {-0.9, -0.3, 0.0, 0.3}) {
    const SymTensor3 a = lmd3_example(0.45, gamma);
    const Matrix m = euclidean_hessian_matrix_3(a);
    const HessianForm form = hessian_form_at_identity(a);
    // Coordinates (u, v, w) = (Delta_01, Delta_02, Delta_12) in pair order.
    CHECK((form.H - 6.0 * m).cwiseAbs().maxCoeff() < 1e-10);
    for (int rep = 0; rep < 3; ++rep) {
      const SkewMatrix delta = random_skew(3, rng);
      const Vector xi = delta.coords();
      CHECK_THAT(hessian_form_direct(a, delta),
                 Catch::Matchers::WithinAbs(6.0 * xi.dot(m * xi), 1e-10));
    }
  }
  CHECK_THROWS_AS(euclidean_hessian_matrix_3(random_symmetric(3, 1)), std::invalid_argument);
}

TEST_CASE("hessian of the dimension-4 pseudo diagonal example is 18 on the witness") {
  const SymTensor3 a = pd4_threequarters();
  SkewMatrix delta(4);
  delta.at(0, 1) = 1.0;
  delta.at(0, 2) = 1.0;
  delta.at(0, 3) = 1.0;
  CHECK(hessian_form_direct(a, delta) == 18.0);
  CHECK(hessian_form_at_identity(a).value(delta) == 18.0);
  // Hence a positive curvature direction exists although every principal
  // 3x3 subtensor is a strict local maximizer.
  const LmdResult lmd = lmd_certificate(a);
  CHECK(lmd.certificate == LmdCertificate::DefiniteNo);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        const SymTensor3 sub = subtensor(a, {i, j, k});
        CHECK(lmd_certificate(sub).certificate == LmdCertificate::DefiniteYes);
      }
}

TEST_CASE("local-maximality interval for the unit-diagonal family") {
  struct Row {
    double g;
    LmdCertificate want;
  };
  for (const Row row :
       {Row{-0.6, LmdCertificate::DefiniteNo}, Row{-0.5, LmdCertificate::Inconclusive},
        Row{-0.4, LmdCertificate::DefiniteYes}, Row{0.0, LmdCertificate::DefiniteYes},
        Row{0.5, LmdCertificate::DefiniteYes}, Row{0.9, LmdCertificate::DefiniteYes},
        Row{1.0, LmdCertificate::Inconclusive}, Row{1.2, LmdCertificate::DefiniteNo}}) {
    const SymTensor3 a = lmd3_example(row.g, 0.0);
    const LmdResult res = lmd_certificate(a);
    INFO("g = " << row.g);
    CHECK(res.certificate == row.want);
    // Spectrum of the 3x3 form matrix: {2g-2, 2g-2, -4g-2} (times 6).
    const Matrix m = euclidean_hessian_matrix_3(a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    CHECK_THAT(es.eigenvalues()(2),
               Catch::Matchers::WithinAbs(std::max(2.0 * row.g - 2.0, -4.0 * row.g - 2.0),
                                          1e-12));
  }
}

TEST_CASE("first-order failure yields a witness pair before any spectrum work") {
  SymTensor3 a(3);
  a.set(0, 0, 0, 1.0);
  a.set(0, 0, 1, 0.4);  // d_{0,1} != 0
  const LmdResult res = lmd_certificate(a);
  CHECK(res.certificate == LmdCertificate::DefiniteNo);
  REQUIRE(res.first_order_witness.has_value());
  CHECK(res.first_order_witness->first == 0);
  CHECK(res.first_order_witness->second == 1);
  REQUIRE(res.witness.has_value());
}

TEST_CASE("definite-no witness direction has positive curvature") {
  const SymTensor3 a = lmd3_example(1.2, 0.0);
  const LmdResult res = lmd_certificate(a);
  REQUIRE(res.certificate == LmdCertificate::DefiniteNo);
  REQUIRE(res.witness.has_value());
  CHECK(hessian_form_direct(a, *res.witness) > 0.0);
}

TEST_CASE("z-eigenbasis and odeco certification") {
  Rng rng(2500);
  const int n = 4;
  std::vector<double> w = {2.0, -1.0, 1.5, 0.8};
  const Matrix u = random_orthogonal(n, rng);
  const SymTensor3 a = from_weights_and_basis(w, u);
  const ZEigenbasisResult z = verify_z_eigenbasis(a, OrthoMatrix(u), 1e-10);
  REQUIRE(z.ok);
  for (int i = 0; i < n; ++i) CHECK_THAT(z.lambdas[i], Catch::Matchers::WithinAbs(w[i], 1e-10));
  CHECK(verify_odeco_given_basis(a, OrthoMatrix(u), 1e-10));
  // A generic rotation is not an eigenbasis.
  const Matrix v = random_orthogonal(n, rng);
  CHECK(!verify_z_eigenbasis(a, OrthoMatrix(v), 1e-10).ok);
  // A pseudo diagonal tensor has the identity as z-eigenbasis but is not odeco.
  const SymTensor3 pd = pd4_threequarters();
  const OrthoMatrix id(Matrix::Identity(4, 4));
  CHECK(verify_z_eigenbasis(pd, id, 1e-10).ok);
  CHECK(!verify_odeco_given_basis(pd, id, 1e-10));
}

TEST_CASE("z-eigenvalue magnitudes are invariant under basis conjugation") {
  Rng rng(2600);
  const int n = 4;
  std::vector<double> w = {2.5, -1.2, 0.9, 1.7};
  const Matrix u = random_orthogonal(n, rng);
  const SymTensor3 a = from_weights_and_basis(w, u);
  const Matrix q = random_orthogonal(n, rng);
  const SymTensor3 b = contract_all(a, q);
  const ZEigenbasisResult z = verify_z_eigenbasis(b, OrthoMatrix(q.transpose() * u), 1e-9);
  REQUIRE(z.ok);
  std::vector<double> got;
  for (double l : z.lambdas) got.push_back(std::abs(l));
  std::sort(got.begin(), got.end());
  std::vector<double> want = {0.9, 1.2, 1.7, 2.5};
  for (int i = 0; i < n; ++i) CHECK_THAT(got[i], Catch::Matchers::WithinAbs(want[i], 1e-9));
}

TEST_CASE("verdicts are invariant under tensor scaling") {
  for (double c : {1e-4, 1.0, 1e4}) {
    SymTensor3 a = lmd3_example(0.5, 0.2);
    SymTensor3 b(3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        for (int k = j; k < 3; ++k) b.set(i, j, k, c * a(i, j, k));
    const ClassReport rep = class_report(b);
    CHECK(rep.sd.sd);
    CHECK(rep.jd.jd);
    CHECK(rep.lmd.certificate == LmdCertificate::DefiniteYes);
  }
}

TEST_CASE("class report enforces the lattice") {
  const ClassReport diag_rep = class_report(random_odeco(3, 2700));
  CHECK(diag_rep.lattice_consistent);

  SymTensor3 d(3);
  for (int i = 0; i < 3; ++i) d.set(i, i, i, 1.0 + i);
  const ClassReport rep = class_report(d);
  CHECK(rep.pd);
  CHECK(rep.sd.sd);
  CHECK(rep.jd.jd);
  CHECK(rep.lmd.certificate == LmdCertificate::DefiniteYes);
  CHECK(rep.lattice_consistent);

  const ClassReport rnd = class_report(random_symmetric(4, 2800));
  CHECK(!rnd.sd.sd);
  CHECK(rnd.lmd.certificate == LmdCertificate::DefiniteNo);
  CHECK(rnd.lattice_consistent);
}
