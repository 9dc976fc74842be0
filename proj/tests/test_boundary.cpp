#include <cmath>

#include "doctest.h"
#include "mcloop/boundary.hpp"
#include "mcloop/errors.hpp"

using namespace mcloop;

namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Error relative to the feedthrough term: D + C (sI - A)^-1 B cancels when
// |s| is far below the pole, so precision is set by |D|, not by |H|.
double err_vs(cplx a, cplx b, double d) { return std::abs(a - b) / std::max(std::abs(b), d); }

const TransmembraneParams kMembrane{200.0, 83.0, 1.0};
const LigandReceptorParams kReceptor{0.1, 100.0, 1.0, 1000.0, 83.0};

}  // namespace

TEST_CASE("transmembrane resolvent matches its rational form") {
  for (const TransmembraneParams& p : {kMembrane, TransmembraneParams{0.05, 83.0, 1.0},
                                       TransmembraneParams{3.0, 10.0, 0.5}}) {
    const auto ss = make_transmembrane(p);
    CHECK(ss.order() == 1);
    CHECK(ss.kind() == BoundaryKind::Dirichlet);
    for (double w : {1e-5, 1e-2, 1.0, 1e3}) {
      const cplx s(0.0, w);
      const Matrix2c H = eval_H(ss, ComplexFreq{s});
      CHECK(rel_err(H(0, 0), p.mu / p.dr / (s + p.k)) < 1e-13);
      CHECK(rel_err(H(0, 1), p.k / (s + p.k)) < 1e-13);
      CHECK(rel_err(H(1, 0), p.mu * p.k / p.dr / (s + p.k)) < 1e-13);
      CHECK(err_vs(H(1, 1), -p.k * s / (s + p.k), p.k) < 1e-13);
    }
  }
}

TEST_CASE("transmembrane passes the robot concentration below sqrt(3) k") {
  const auto ss = make_transmembrane(kMembrane);
  const double w = std::sqrt(3.0) * kMembrane.k;
  // |k / (j w + k)| = 1/2 exactly at w = sqrt(3) k.
  CHECK(std::abs(eval_H(ss, ComplexFreq::jw(w))(0, 1)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("ligand-receptor resolvent matches its rational form") {
  const auto ss = make_ligand_receptor(kReceptor);
  CHECK(ss.kind() == BoundaryKind::Neumann);
  const auto& p = kReceptor;
  for (double w : {1e-4, 1e-1, 1e2, 1e5}) {
    const cplx s(0.0, w);
    const Matrix2c H = eval_H(ss, ComplexFreq{s});
    CHECK(err_vs(H(0, 0), p.R * p.k_on / p.mu * s / (s + p.k_off), p.R * p.k_on / p.mu) < 1e-13);
    CHECK(rel_err(H(1, 0), p.k_re * p.k_on / (s + p.k_off)) < 1e-13);
    CHECK(std::abs(H(0, 1)) == 0.0);
    CHECK(std::abs(H(1, 1)) == 0.0);
  }
}

TEST_CASE("receptor count scales only the gradient channel") {
  auto doubled = kReceptor;
  doubled.R *= 2.0;
  const ComplexFreq s = ComplexFreq::jw(0.7);
  const Matrix2c a = eval_H(make_ligand_receptor(kReceptor), s);
  const Matrix2c b = eval_H(make_ligand_receptor(doubled), s);
  CHECK(rel_err(b(0, 0), 2.0 * a(0, 0)) < 1e-14);
  CHECK(rel_err(b(1, 0), a(1, 0)) < 1e-14);
}

TEST_CASE("conjugate symmetry of the boundary systems") {
  for (const auto& ss : {make_transmembrane(kMembrane), make_ligand_receptor(kReceptor)}) {
    for (double w : {1e-3, 2.0, 500.0}) {
      const Matrix2c hp = eval_H(ss, ComplexFreq::jw(w));
      const Matrix2c hm = eval_H(ss, ComplexFreq::jw(-w));
      CHECK((hm - hp.conjugate()).norm() <= 1e-14 * hp.norm());
    }
  }
}

TEST_CASE("static gain systems return D") {
  Eigen::Matrix2d D;
  D << 1.0, 2.0, 3.0, 4.0;
  const auto ss = StateSpaceLTI::static_gain(D);
  CHECK(ss.order() == 0);
  const Matrix2c H = eval_H(ss, ComplexFreq::jw(5.0));
  CHECK(H(1, 0) == cplx(3.0, 0.0));
  CHECK(!ss.kind().has_value());
}

TEST_CASE("evaluating at a pole raises SingularResolvent") {
  const auto ss = make_transmembrane(kMembrane);
  try {
    eval_H(ss, ComplexFreq{cplx(-kMembrane.k, 0.0)});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularResolvent);
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(make_transmembrane({0.0, 83.0, 1.0}), Error);
  CHECK_THROWS_AS(make_transmembrane({1.0, 83.0, 0.0}), Error);
  CHECK_THROWS_AS(make_transmembrane({1.0, -1.0, 1.0}), Error);
  auto bad = kReceptor;
  bad.k_off = -1.0;
  CHECK_THROWS_AS(make_ligand_receptor(bad), Error);
  bad = kReceptor;
  bad.R = NAN;
  CHECK_THROWS_AS(make_ligand_receptor(bad), Error);
  CHECK_THROWS_AS(StateSpaceLTI(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(1, 2),
                                Eigen::MatrixXd::Zero(2, 2), Eigen::Matrix2d::Zero()),
                  Error);
  Eigen::MatrixXd A(1, 1);
  A << INFINITY;
  CHECK_THROWS_AS(StateSpaceLTI(A, Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Zero(2, 1),
                                Eigen::Matrix2d::Zero()),
                  Error);
}
