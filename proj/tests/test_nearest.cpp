#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "uplr/generators.hpp"
#include "uplr/nearest.hpp"
#include "uplr/random.hpp"
#include "uplr/structure.hpp"

using namespace uplr;

namespace {

ComplexMatrix with_singular_values(const RealVector& sigma, Rng& rng) {
  const Eigen::Index n = sigma.size();
  return random_unitary(n, rng) * sigma.asDiagonal() * random_unitary(n, rng);
}

}  // namespace

TEST_CASE("nearest unitary perturbation snaps interior singular values", "[nearest]") {
  Rng rng(301);
  RealVector sigma(5);
  sigma << 2.0, 1.5, 1.0, 1.0, 0.5;
  ComplexMatrix A = with_singular_values(sigma, rng);

  SECTION("rank-one distance") {
    NearestResult nr = nearest_unitary(A, 1);
    CHECK(nr.dist2 == Catch::Approx(0.5).margin(1e-12));
    CHECK(nr.distFro == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(nr.snappedIndices.size() == 1);
    CHECK(nr.snappedIndices[0] == 2);
    CHECK(unitary_min_rank(nr.nearest) <= 1);
    // The same matrix attains both distances.
    CHECK(spectral_norm(ComplexMatrix(A - nr.nearest)) == Catch::Approx(0.5).margin(1e-12));
    CHECK((A - nr.nearest).norm() == Catch::Approx(0.5).margin(1e-12));
  }
  SECTION("rank-zero distance snaps everything") {
    NearestResult nr = nearest_unitary(A, 0);
    CHECK(nr.dist2 == Catch::Approx(1.0).margin(1e-12));
    CHECK(nr.distFro == Catch::Approx(std::sqrt(1.5)).margin(1e-12));
    CHECK(nr.snappedIndices.size() == 3);
    CHECK(unitary_min_rank(nr.nearest) == 0);
  }
  SECTION("diagonal example") {
    ComplexMatrix D = ComplexMatrix::Zero(4, 4);
    D(0, 0) = 3.0;
    D(1, 1) = 2.0;
    D(2, 2) = 1.0;
    D(3, 3) = 0.5;
    CHECK(nearest_unitary(D, 1).dist2 == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("members are returned unchanged, bit for bit") {
    NearestResult nr = nearest_unitary(A, 2);  // already within rank 2 of unitary
    CHECK(nr.dist2 == 0.0);
    CHECK(nr.distFro == 0.0);
    CHECK((nr.nearest - A).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("norm inequalities") {
    Rng rng2(302);
    ComplexMatrix B = random_gaussian(7, 7, rng2);
    for (int k = 0; k < 3; ++k) {
      NearestResult nr = nearest_unitary(B, k);
      CHECK(nr.dist2 <= nr.distFro + 1e-15);
      CHECK(nr.distFro <=
            std::sqrt(static_cast<double>(std::max<std::size_t>(nr.snappedIndices.size(), 1))) *
                    nr.dist2 +
                1e-15);
    }
  }
  SECTION("no random rank-k neighbour beats the reported distance") {
    Rng rng3(303);
    ComplexMatrix B = random_gaussian(5, 5, rng3);
    NearestResult nr = nearest_unitary(B, 1);
    for (int trial = 0; trial < 20; ++trial) {
      // Random member of the class: unitary plus random rank-1 correction.
      ComplexMatrix X = random_unitary(5, rng3) +
                        random_gaussian(5, 1, rng3) * random_gaussian(5, 1, rng3).adjoint();
      CHECK(spectral_norm(ComplexMatrix(B - X)) >= nr.dist2 - 1e-12);
      CHECK((B - X).norm() >= nr.distFro - 1e-12);
    }
  }
}

TEST_CASE("nearest hermitian perturbation zeroes interior skew eigenvalues", "[nearest]") {
  SECTION("one-sided skew spectrum") {
    ComplexMatrix A = Complex(0, 1) * ComplexMatrix::Identity(2, 2);
    NearestResult nr = nearest_hermitian(A, 1);
    CHECK(nr.dist2 == Catch::Approx(1.0).margin(1e-12));
    CHECK(nr.distFro == Catch::Approx(1.0).margin(1e-12));
    CHECK(hermitian_min_rank(nr.nearest) <= 1);
  }
  SECTION("planted members are returned unchanged") {
    PlantedHermitian ph = random_hermitian_plus_rank(12, 2, 1e-2, 304);
    NearestResult nr = nearest_hermitian(ph.A, 2);
    CHECK(nr.dist2 == 0.0);
    CHECK((nr.nearest - ph.A).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("rank zero reduces to the hermitian part") {
    Rng rng(305);
    ComplexMatrix A = random_gaussian(6, 6, rng);
    NearestResult nr = nearest_hermitian(A, 0);
    CHECK((nr.nearest - (A + A.adjoint()) * 0.5).norm() < 1e-12);
    CHECK(nr.dist2 == Catch::Approx(spectral_norm(skew_part(A))).margin(1e-12));
  }
  SECTION("reported distances are attained in both norms") {
    Rng rng(306);
    ComplexMatrix A = random_gaussian(8, 8, rng);
    NearestResult nr = nearest_hermitian(A, 2);
    CHECK(spectral_norm(ComplexMatrix(A - nr.nearest)) == Catch::Approx(nr.dist2).margin(1e-12));
    CHECK((A - nr.nearest).norm() == Catch::Approx(nr.distFro).margin(1e-12));
    CHECK(hermitian_min_rank(nr.nearest) <= 2);
  }
}

TEST_CASE("distance profile tabulates both families per rank", "[nearest]") {
  SECTION("diagonal example profile") {
    ComplexMatrix D = ComplexMatrix::Zero(4, 4);
    D(0, 0) = 3.0;
    D(1, 1) = 2.0;
    D(2, 2) = 1.0;
    D(3, 3) = 0.5;
    DistanceProfile prof = distance_profile(D);
    REQUIRE(prof.dist2U.size() == 5);
    CHECK(prof.dist2U(0) == Catch::Approx(2.0).margin(1e-13));
    CHECK(prof.dist2U(1) == Catch::Approx(1.0).margin(1e-13));
    CHECK(prof.dist2U(2) == 0.0);
    CHECK(prof.dist2U(3) == 0.0);
    CHECK(prof.dist2U(4) == 0.0);
    // Real diagonal: already hermitian at every rank.
    for (int k = 0; k <= 4; ++k) CHECK(prof.dist2H(k) == 0.0);
  }
  SECTION("profiles agree with the one-shot queries and decrease in k") {
    Rng rng(307);
    ComplexMatrix A = random_gaussian(6, 6, rng);
    DistanceProfile prof = distance_profile(A);
    for (int k = 0; k <= 6; ++k) {
      CHECK(prof.dist2U(k) == Catch::Approx(nearest_unitary(A, k).dist2).margin(1e-13));
      CHECK(prof.distFroU(k) == Catch::Approx(nearest_unitary(A, k).distFro).margin(1e-13));
      CHECK(prof.dist2H(k) == Catch::Approx(nearest_hermitian(A, k).dist2).margin(1e-13));
      CHECK(prof.distFroH(k) == Catch::Approx(nearest_hermitian(A, k).distFro).margin(1e-13));
      if (k > 0) {
        CHECK(prof.dist2U(k) <= prof.dist2U(k - 1) + 1e-15);
        CHECK(prof.dist2H(k) <= prof.dist2H(k - 1) + 1e-15);
      }
    }
    CHECK(prof.dist2U(unitary_min_rank(A)) == 0.0);
    CHECK(prof.dist2H(hermitian_min_rank(A)) == 0.0);
  }
}
