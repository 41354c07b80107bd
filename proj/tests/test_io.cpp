#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ggme/io.hpp"

using namespace ggme;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/ggme_io_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("csv round trip is exact") {
    TempFile f("rt.csv");
    Matrix m(2, 3);
    m << 1.0, -2.5, 3.333333333333333, 1e-17, -4.2e300, 0.1;
    write_csv_matrix(f.path, m);
    Matrix back = read_csv_matrix(f.path);
    REQUIRE(back.rows() == 2);
    REQUIRE(back.cols() == 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) CHECK(back(i, j) == m(i, j)); // bitwise, %.17g suffices
}

TEST_CASE("read_csv_matrix rejects bad input") {
    CHECK_THROWS_AS(read_csv_matrix("/tmp/ggme_io_no_such_file.csv"), IoError);

    TempFile ragged("ragged.csv");
    std::ofstream(ragged.path) << "1,2,3\n4,5\n";
    CHECK_THROWS_AS(read_csv_matrix(ragged.path), IoError);

    TempFile badcell("badcell.csv");
    std::ofstream(badcell.path) << "1,2\n3,oops\n";
    CHECK_THROWS_AS(read_csv_matrix(badcell.path), IoError);

    TempFile empty("empty.csv");
    std::ofstream(empty.path) << "";
    CHECK_THROWS_AS(read_csv_matrix(empty.path), IoError);
}

TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a_hex(nullptr, 0) == "cbf29ce484222325"); // offset basis
    const char a = 'a';
    CHECK(fnv1a_hex(&a, 1) == "af63dc4c8601ec8c");
    CHECK(string_hash("hello") == fnv1a_hex("hello", 5));
    CHECK(string_hash("hello") != string_hash("hellp"));
}

TEST_CASE("matrix_hash separates nearby matrices") {
    Matrix a = Matrix::Identity(2, 2);
    Matrix b = a;
    CHECK(matrix_hash(a) == matrix_hash(b));
    b(0, 0) += 1e-12;
    CHECK(matrix_hash(a) != matrix_hash(b));
    // hash is over the printed form, so shape matters too
    Matrix c = Matrix::Ones(1, 4);
    Matrix d = Matrix::Ones(2, 2);
    CHECK(matrix_hash(c) != matrix_hash(d));
}
