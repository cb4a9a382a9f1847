#include <catch2/catch_amalgamated.hpp>

#include "uplr/generators.hpp"
#include "uplr/random.hpp"
#include "uplr/recover.hpp"
#include "uplr/structure.hpp"

using namespace uplr;

TEST_CASE("hermitian plus low rank recovery finds planted structure", "[recovery]") {
  SECTION("planted correction") {
    PlantedHermitian ph = random_hermitian_plus_rank(60, 4, 1e-3, 5);
    StructuredDecomposition d = hk_find(ph.A);
    const double scale = spectral_norm(ph.A);
    CHECK(d.kind == StructureKind::hermitian);
    CHECK(d.width() == 4);
    CHECK(d.residual2 <= 1e-13 * scale);
    CHECK(d.baseStructureError <= 1e-12 * scale);
    CHECK((d.base + d.G * d.B.adjoint() - ph.A).norm() < 1e-12 * scale);
    CHECK((d.base - d.base.adjoint()).norm() < 1e-11 * scale);
    CHECK_FALSE(d.exhaustedSteps);
    // The coupling collapses right after the structure is captured.
    const int k = 4;
    CHECK(d.history.steps() >= 2 * k + 1);
    CHECK(d.history.steps() <= 2 * k + 2);
    CHECK(d.history.at_step(2 * k + 1) <= 1e-6 * d.history.at_step(2 * k - 1));
  }
  SECTION("hermitian input yields an empty correction") {
    Rng rng(501);
    ComplexMatrix H = random_hermitian(10, rng);
    StructuredDecomposition d = hk_find(H);
    CHECK(d.width() == 0);
    CHECK(d.G.cols() == 0);
    CHECK((d.base - H).norm() < 1e-13);
    CHECK(d.residual2 < 1e-13);
  }
  SECTION("capping the steps raises a structured error") {
    PlantedHermitian ph = random_hermitian_plus_rank(40, 4, 1e-3, 6);
    RecoverOptions opts;
    opts.maxSteps = 3;
    bool threw = false;
    try {
      hk_find(ph.A, opts);
    } catch (const RecoveryError& e) {
      threw = true;
      CHECK(e.history().steps() == 3);
      CHECK(std::string(e.code()) == "E_NOCONV");
    }
    CHECK(threw);
  }
  SECTION("deterministic across runs") {
    PlantedHermitian ph = random_hermitian_plus_rank(30, 3, 1e-2, 7);
    StructuredDecomposition a = hk_find(ph.A), b = hk_find(ph.A);
    CHECK((a.base - b.base).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.G - b.G).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("unitary plus low rank recovery finds planted structure", "[recovery]") {
  SECTION("planted correction") {
    PlantedUnitary pu = random_unitary_plus_rank(60, 4, 1e-3, 6);
    StructuredDecomposition d = uk_find(pu.A);
    const double scale = spectral_norm(pu.A);
    CHECK(d.kind == StructureKind::unitary);
    CHECK(d.width() == 4);
    CHECK(d.residual2 <= 1e-13 * scale);
    CHECK(d.baseStructureError <= 1e-12);
    CHECK((d.base + d.G * d.B.adjoint() - pu.A).norm() < 1e-12 * scale);
    CHECK_FALSE(d.exhaustedSteps);
    const int k = 4;
    CHECK(d.history.at_step(2 * k + 1) <= 1e-6 * d.history.at_step(2 * k - 1));
  }
  SECTION("unitary input yields an empty correction") {
    Rng rng(502);
    ComplexMatrix Q = random_unitary(9, rng);
    StructuredDecomposition d = uk_find(Q);
    CHECK(d.width() == 0);
    CHECK((d.base - Q).norm() < 1e-13);
    CHECK(d.baseStructureError < 1e-13);
  }
  SECTION("capping the steps raises a structured error") {
    PlantedUnitary pu = random_unitary_plus_rank(40, 4, 1e-3, 8);
    RecoverOptions opts;
    opts.maxSteps = 3;
    CHECK_THROWS_AS(uk_find(pu.A, opts), RecoveryError);
  }
}

TEST_CASE("recovery handles companion-style structured inputs", "[recovery]") {
  SECTION("pentadiagonal companion form has width n/2") {
    ComplexMatrix F = fiedler_pentadiagonal(random_monic(16, 17));
    StructuredDecomposition d = uk_find(F);
    CHECK(d.width() == 8);
    CHECK(d.residual2 < 1e-12 * spectral_norm(F));
    CHECK(d.baseStructureError < 1e-11);
    CHECK(d.exhaustedSteps);  // no early coupling collapse at this size
  }
  SECTION("chebyshev linearization has width 2m, or m when rescaled") {
    ChebBlockPoly P = random_cheb_blocks(4, 4, 21);
    StructuredDecomposition d = hk_find(colleague(P));
    CHECK(d.width() == 8);
    CHECK(d.residual2 < 1e-12 * spectral_norm(colleague(P)));

    StructuredDecomposition ds = hk_find(colleague(P, true));
    CHECK(ds.width() == 4);
    CHECK(ds.residual2 < 1e-12 * spectral_norm(colleague(P, true)));
  }
}

TEST_CASE("recovery reports exhaustion on unstructured input", "[recovery]") {
  Rng rng(503);
  ComplexMatrix A = random_gaussian(12, 12, rng);
  StructuredDecomposition du = uk_find(A);
  CHECK(du.exhaustedSteps);
  CHECK(du.residual2 < 1e-12 * spectral_norm(A));  // full split still reconstructs
  CHECK(du.width() == unitary_min_rank(A));
  StructuredDecomposition dh = hk_find(A);
  CHECK(dh.exhaustedSteps);
  CHECK(dh.residual2 < 1e-12 * spectral_norm(A));
  CHECK(dh.width() == hermitian_min_rank(A));
}
