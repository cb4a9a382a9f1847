#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>

#include "uplr/generators.hpp"
#include "uplr/kernels.hpp"
#include "uplr/structure.hpp"

using namespace uplr;

TEST_CASE("log spaced singular values hit both endpoints exactly", "[generators]") {
  RealVector one = log_spaced_sigmas(1, 1e-6);
  REQUIRE(one.size() == 1);
  CHECK(one(0) == 1.0);

  RealVector four = log_spaced_sigmas(4, 1e-6);
  REQUIRE(four.size() == 4);
  CHECK(four(0) == 1.0);
  CHECK(four(1) == Catch::Approx(1e-2).epsilon(1e-14));
  CHECK(four(2) == Catch::Approx(1e-4).epsilon(1e-14));
  CHECK(four(3) == 1e-6);

  CHECK(log_spaced_sigmas(0, 1e-3).size() == 0);
  CHECK_THROWS_AS(log_spaced_sigmas(3, 0.0), PreconditionError);
}

TEST_CASE("planted ensembles expose their factors", "[generators]") {
  SECTION("hermitian plus rank k") {
    PlantedHermitian ph = random_hermitian_plus_rank(25, 3, 1e-4, 701);
    CHECK((ph.H - ph.H.adjoint()).norm() == 0.0);
    CHECK((ph.A - ph.H - ph.G * ph.B.adjoint()).norm() < 1e-14 * ph.A.norm());
    CHECK((ph.B.adjoint() * ph.B - ComplexMatrix::Identity(3, 3)).norm() < 1e-13);
    RealVector gnorm = (ph.G.adjoint() * ph.G).diagonal().real().cwiseSqrt();
    CHECK((gnorm - ph.plantedSigma).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(hermitian_min_rank(ph.A) == 3);
  }
  SECTION("unitary plus rank k") {
    PlantedUnitary pu = random_unitary_plus_rank(25, 3, 1e-4, 702);
    CHECK((pu.Q.adjoint() * pu.Q - ComplexMatrix::Identity(25, 25)).norm() < 1e-13);
    CHECK((pu.A - pu.Q - pu.G * pu.B.adjoint()).norm() < 1e-14 * pu.A.norm());
    CHECK(unitary_min_rank(pu.A) == 3);
  }
  SECTION("seeded determinism") {
    PlantedHermitian a = random_hermitian_plus_rank(10, 2, 1e-3, 703);
    PlantedHermitian b = random_hermitian_plus_rank(10, 2, 1e-3, 703);
    PlantedHermitian c = random_hermitian_plus_rank(10, 2, 1e-3, 704);
    CHECK((a.A - b.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.A - c.A).cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("polynomial constructions agree with hand expansions", "[generators]") {
  SECTION("roots to coefficients") {
    MonicPoly p = poly_from_roots({Complex(1), Complex(2), Complex(3)});
    REQUIRE(p.degree() == 3);
    CHECK(p.coeffs[0] == Complex(6.0));    // x^3 - 6x^2 + 11x - 6 => subtracted tail
    CHECK(p.coeffs[1] == Complex(-11.0));
    CHECK(p.coeffs[2] == Complex(6.0));
  }
  SECTION("factorial-table polynomial matches the root expansion") {
    MonicPoly w = wilkinson(3);
    MonicPoly r = poly_from_roots({Complex(1), Complex(2), Complex(3)});
    REQUIRE(w.degree() == 3);
    for (int i = 0; i < 3; ++i) CHECK(w.coeffs[i] == r.coeffs[i]);
  }
  SECTION("integer overflow guard") {
    MonicPoly w17 = wilkinson(17);
    CHECK(w17.coeffs[0].real() == 355687428096000.0);  // 17!
    CHECK_THROWS_AS(wilkinson(18), OverflowError);
  }
  SECTION("random monic determinism") {
    MonicPoly a = random_monic(6, 705), b = random_monic(6, 705);
    for (int i = 0; i < 6; ++i) CHECK(a.coeffs[i] == b.coeffs[i]);
  }
}

TEST_CASE("companion matrix linearizes a monic polynomial", "[generators]") {
  SECTION("frozen layout") {
    MonicPoly p;
    p.coeffs = {Complex(1.0), Complex(0.0)};  // x^2 - 1
    ComplexMatrix C = companion(p);
    ComplexMatrix expected(2, 2);
    expected << 0.0, 1.0, 1.0, 0.0;
    CHECK((C - expected).norm() == 0.0);
  }
  SECTION("eigenvalues are the roots") {
    std::vector<Complex> roots = {Complex(-2.5), Complex(-1.0), Complex(0.5), Complex(1.5),
                                  Complex(3.0)};
    ComplexMatrix C = companion(poly_from_roots(roots));
    Eigen::ComplexEigenSolver<ComplexMatrix> es(C, false);
    ComplexVector ev = es.eigenvalues();
    std::vector<double> got(5);
    for (int i = 0; i < 5; ++i) got[i] = ev(i).real();
    std::sort(got.begin(), got.end());
    for (int i = 0; i < 5; ++i) {
      CHECK(got[i] == Catch::Approx(roots[i].real()).margin(1e-9));
      CHECK(std::abs(ev(i).imag()) < 1e-9);
    }
  }
  SECTION("interior singular values equal one") {
    ComplexMatrix C = companion(random_monic(9, 706));
    RealVector sv = svd_values(C);
    for (int i = 1; i < 8; ++i) CHECK(sv(i) == Catch::Approx(1.0).margin(1e-13));
    CHECK(unitary_min_rank(C) == 1);
  }
}

TEST_CASE("pentadiagonal companion form interleaves the coefficients", "[generators]") {
  SECTION("frozen layout for degree six") {
    MonicPoly p;
    p.coeffs = {Complex(.1), Complex(.2), Complex(.3), Complex(.4), Complex(.5), Complex(.6)};
    ComplexMatrix F = fiedler_pentadiagonal(p);
    ComplexMatrix expected = ComplexMatrix::Zero(6, 6);
    expected(0, 2) = 1.0;
    expected(1, 0) = 0.1;  // p_0
    expected(1, 2) = 0.2;  // p_1
    expected(2, 4) = 1.0;
    expected(3, 1) = 1.0;
    expected(3, 2) = 0.3;  // p_2
    expected(3, 4) = 0.4;  // p_3
    expected(4, 5) = 1.0;
    expected(5, 3) = 1.0;
    expected(5, 4) = 0.5;  // p_4
    expected(5, 5) = 0.6;  // p_5
    CHECK((F - expected).norm() == 0.0);
  }
  SECTION("pentadiagonal bandwidth") {
    ComplexMatrix F = fiedler_pentadiagonal(random_monic(11, 707));
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j < 11; ++j)
        if (std::abs(i - j) > 2) CHECK(F(i, j) == Complex(0.0));
  }
  SECTION("same spectrum as the dense companion matrix") {
    MonicPoly p = poly_from_roots({Complex(-2.0), Complex(-0.5), Complex(1.0), Complex(2.5)});
    ComplexMatrix F = fiedler_pentadiagonal(p);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(F, false);
    std::vector<double> got(4);
    for (int i = 0; i < 4; ++i) got[i] = es.eigenvalues()(i).real();
    std::sort(got.begin(), got.end());
    CHECK(got[0] == Catch::Approx(-2.0).margin(1e-9));
    CHECK(got[1] == Catch::Approx(-0.5).margin(1e-9));
    CHECK(got[2] == Catch::Approx(1.0).margin(1e-9));
    CHECK(got[3] == Catch::Approx(2.5).margin(1e-9));
  }
  SECTION("perturbation width grows with the dimension") {
    CHECK(unitary_min_rank(fiedler_pentadiagonal(random_monic(8, 708))) == 4);
    CHECK(unitary_min_rank(fiedler_pentadiagonal(random_monic(16, 709))) == 8);
  }
}

TEST_CASE("chebyshev linearization reproduces polynomial eigenvalues", "[generators]") {
  SECTION("scalar oracle against planted roots") {
    std::vector<Complex> roots = {Complex(-0.8), Complex(-0.3), Complex(0.2), Complex(0.6),
                                  Complex(0.9)};
    ChebBlockPoly P = cheb_from_monic(poly_from_roots(roots));
    ComplexMatrix C = colleague(P);
    REQUIRE(C.rows() == 5);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(C, false);
    std::vector<double> got(5);
    for (int i = 0; i < 5; ++i) got[i] = es.eigenvalues()(i).real();
    std::sort(got.begin(), got.end());
    for (int i = 0; i < 5; ++i) CHECK(got[i] == Catch::Approx(roots[i].real()).margin(1e-10));
  }
  SECTION("block layout") {
    const Eigen::Index m = 2;
    ChebBlockPoly P;
    P.blocks.resize(4);
    P.blocks[0] = (RealMatrix(2, 2) << 0.1, 0.2, 0.3, 0.4).finished();
    P.blocks[1] = (RealMatrix(2, 2) << 1.0, 2.0, 3.0, 4.0).finished();
    P.blocks[2] = (RealMatrix(2, 2) << 5.0, 6.0, 7.0, 8.0).finished();
    P.blocks[3] = RealMatrix::Identity(2, 2);
    ComplexMatrix C = colleague(P);
    REQUIRE(C.rows() == 6);
    CHECK((C.block(0, 0, m, m).real() + 0.5 * P.blocks[2]).norm() < 1e-15);
    CHECK((C.block(0, m, m, m).real() - 0.5 * (RealMatrix::Identity(2, 2) - P.blocks[1])).norm() <
          1e-15);
    CHECK((C.block(0, 2 * m, m, m).real() + 0.5 * P.blocks[0]).norm() < 1e-15);
    CHECK((C.block(m, 0, m, m).real() - 0.5 * RealMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK((C.block(m, 2 * m, m, m).real() - 0.5 * RealMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK((C.block(2 * m, m, m, m).real() - RealMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK(C.block(2 * m, 0, m, m).norm() == 0.0);
  }
  SECTION("rescaling halves the perturbation width") {
    ChebBlockPoly P = random_cheb_blocks(5, 3, 710);
    CHECK(hermitian_min_rank(colleague(P)) == 6);
    CHECK(hermitian_min_rank(colleague(P, true)) == 3);
  }
  SECTION("rejects non-monic input") {
    ChebBlockPoly P = random_cheb_blocks(3, 2, 711);
    P.blocks.back()(0, 0) = 2.0;
    CHECK_THROWS_AS(colleague(P), PreconditionError);
  }
}
