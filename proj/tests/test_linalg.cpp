#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ggme/linalg.hpp"

using namespace ggme;

namespace {

// random SPD matrix: A = B B^T + eps I
Matrix random_spd(std::mt19937& gen, int p) {
    std::normal_distribution<double> nd;
    Matrix b(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) b(i, j) = nd(gen);
    return Matrix(b * b.transpose() + 0.1 * Matrix::Identity(p, p));
}

} // namespace

TEST_CASE("schur_remove_last small examples") {
    Matrix a(2, 2);
    a << 2, 1, 1, 2;
    Matrix r = schur_remove_last(a);
    REQUIRE(r.rows() == 1);
    CHECK(r(0, 0) == doctest::Approx(1.5).epsilon(1e-14));

    Matrix r3 = schur_remove_last(Matrix::Identity(3, 3));
    CHECK(r3.isApprox(Matrix::Identity(2, 2), 1e-14));
}

TEST_CASE("schur_remove_last determinant identity") {
    std::mt19937 gen(7);
    for (int rep = 0; rep < 20; ++rep) {
        int p = 2 + (int)(gen() % 7);
        Matrix a = random_spd(gen, p);
        Matrix r = schur_remove_last(a);
        double lhs = a.determinant();
        double rhs = a(p - 1, p - 1) * r.determinant();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("spd_check accepts identity and rejects indefinite") {
    CHECK(spd_check(Matrix::Identity(5, 5)).ok);
    Matrix bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_FALSE(spd_check(bad).ok);
    CHECK_THROWS_AS(spd_chol(bad), NotPositiveDefinite);
    CHECK_THROWS_AS(spd_inverse(bad), NotPositiveDefinite);
}

TEST_CASE("spd_inverse on diagonal and random matrices") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    Matrix di = spd_inverse(d);
    CHECK(di(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(di(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(di(0, 1) == doctest::Approx(0.0));

    std::mt19937 gen(3);
    Matrix a = random_spd(gen, 6);
    Matrix ai = spd_inverse(a);
    CHECK((a * ai - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spd_logdet matches direct computation") {
    std::mt19937 gen(11);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix a = random_spd(gen, 5);
        CHECK(spd_logdet(a) == doctest::Approx(std::log(a.determinant())).epsilon(1e-9));
    }
}

TEST_CASE("spd fuzz: chol round trip on random SPD matrices") {
    std::mt19937 gen(42);
    for (int rep = 0; rep < 100; ++rep) {
        int p = 1 + (int)(gen() % 20);
        Matrix a = random_spd(gen, p);
        auto chk = spd_check(a);
        REQUIRE(chk.ok);
        Matrix recon = chk.chol * chk.chol.transpose();
        CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-9 * a.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("submatrix and subvector select rows/cols in order") {
    Matrix a(3, 3);
    a << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    Matrix s = submatrix(a, {0, 2});
    REQUIRE(s.rows() == 2);
    CHECK(s(0, 0) == 1);
    CHECK(s(0, 1) == 3);
    CHECK(s(1, 0) == 7);
    CHECK(s(1, 1) == 9);

    Vector v(4);
    v << 10, 11, 12, 13;
    Vector sv = subvector(v, {3, 1});
    REQUIRE(sv.size() == 2);
    CHECK(sv(0) == 13);
    CHECK(sv(1) == 11);
}

TEST_CASE("drop_index removes one row/col") {
    Matrix a(3, 3);
    a << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    Matrix d = drop_index(a, 1);
    REQUIRE(d.rows() == 2);
    CHECK(d(0, 0) == 1);
    CHECK(d(0, 1) == 3);
    CHECK(d(1, 0) == 7);
    CHECK(d(1, 1) == 9);

    Vector v(3);
    v << 5, 6, 7;
    Vector dv = drop_index(v, 0);
    REQUIRE(dv.size() == 2);
    CHECK(dv(0) == 6);
    CHECK(dv(1) == 7);
}

TEST_CASE("symmetrize averages off-diagonal pairs") {
    Matrix a(2, 2);
    a << 1, 2, 4, 3;
    Matrix s = symmetrize(a);
    CHECK(s(0, 1) == doctest::Approx(3.0));
    CHECK(s(1, 0) == doctest::Approx(3.0));
    CHECK(s(0, 0) == doctest::Approx(1.0));
}
