#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "sscor/io.hpp"

using namespace sscor;

namespace {

// Writes content to a unique temp file and removes it on scope exit.
class TempCsv {
public:
    explicit TempCsv(const std::string& content) {
        static int counter = 0;
        path_ = "sscor_io_test_" + std::to_string(counter++) + ".csv";
        std::ofstream out(path_);
        out << content;
    }
    ~TempCsv() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace

TEST_CASE("plain two-column csv") {
    TempCsv f("1.5,2.5\n-3,4\n0.25,-0.75\n");
    auto X = read_matrix_csv(f.path());
    REQUIRE(X.rows() == 3);
    CHECK(X.cols() == 2);
    CHECK(X(0, 0) == 1.5);
    CHECK(X(0, 1) == 2.5);
    CHECK(X(1, 0) == -3.0);
    CHECK(X(2, 1) == -0.75);
}

TEST_CASE("whitespace-delimited input") {
    TempCsv f("1 2\n3\t4\n  5   6  \n");
    auto X = read_matrix_csv(f.path());
    REQUIRE(X.rows() == 3);
    CHECK(X(1, 0) == 3.0);
    CHECK(X(2, 1) == 6.0);
}

TEST_CASE("single header row is dropped") {
    TempCsv f("x,y\n1,2\n3,4\n");
    auto X = read_matrix_csv(f.path());
    REQUIRE(X.rows() == 2);
    CHECK(X(0, 0) == 1.0);
    CHECK(X(1, 1) == 4.0);
}

TEST_CASE("comments and blank lines are skipped") {
    TempCsv f("# generated data\n\n1,2\n   \n# midway note\n3,4\n5,6\n");
    auto X = read_matrix_csv(f.path());
    REQUIRE(X.rows() == 3);
    CHECK(X(2, 0) == 5.0);
}

TEST_CASE("first two numeric columns are selected") {
    TempCsv f("id,x,y\nalpha,1,2\nbeta,3,4\n");
    auto X = read_matrix_csv(f.path());
    REQUIRE(X.rows() == 2);
    CHECK(X(0, 0) == 1.0);
    CHECK(X(0, 1) == 2.0);
    CHECK(X(1, 0) == 3.0);
}

TEST_CASE("malformed rows carry the right line number") {
    TempCsv f("x,y\n1,2\n3,oops\n5,6\n");
    try {
        read_matrix_csv(f.path());
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        CHECK(e.line == 3);
    }

    TempCsv g("1,2\n3\n");
    try {
        read_matrix_csv(g.path());
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("two header-like rows are an error") {
    TempCsv f("title\nx,y\n1,2\n3,4\n");
    CHECK_THROWS_AS(read_matrix_csv(f.path()), CsvError);
}

TEST_CASE("missing file and short files") {
    CHECK_THROWS_AS(read_matrix_csv("does_not_exist_anywhere.csv"), InvalidInputError);

    TempCsv one("1,2\n");
    CHECK_THROWS_AS(read_matrix_csv(one.path()), CsvError);

    TempCsv empty("# nothing but comments\n");
    CHECK_THROWS_AS(read_matrix_csv(empty.path()), CsvError);
}

TEST_CASE("non-finite fields are rejected") {
    TempCsv f("1,2\ninf,4\n");
    CHECK_THROWS_AS(read_matrix_csv(f.path()), CsvError);
}
