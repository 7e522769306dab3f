#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace sscor {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Precondition violation on user-supplied data or parameters.
struct InvalidInputError : Error {
    using Error::Error;
};

/// A scale estimate came out as zero (or otherwise unusable), so the
/// column cannot be standardized. `column` is the 0-based offender.
struct DegenerateScaleError : Error {
    std::size_t column;
    explicit DegenerateScaleError(std::size_t col)
        : Error("degenerate scale estimate (zero) in column " + std::to_string(col)),
          column(col) {}
};

/// An iterative solve ran out of iterations. Carries the last iterate and
/// the final residual (step size relative to the data scale).
struct ConvergenceError : Error {
    std::vector<double> last_iterate;
    double residual;
    int iterations;
    ConvergenceError(std::vector<double> iterate, double res, int iters)
        : Error("iteration limit reached (residual " + std::to_string(res) + ")"),
          last_iterate(std::move(iterate)), residual(res), iterations(iters) {}
};

/// Malformed input file; `line` is 1-based.
struct CsvError : InvalidInputError {
    std::size_t line;
    CsvError(const std::string& msg, std::size_t ln)
        : InvalidInputError(msg + " (line " + std::to_string(ln) + ")"), line(ln) {}
};

/// Dense row-major n x p data matrix. Constructors that accept data verify
/// that every entry is finite.
class SampleMatrix {
public:
    SampleMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
        if (rows == 0 || cols == 0)
            throw InvalidInputError("SampleMatrix: dimensions must be positive");
    }

    SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0)
            throw InvalidInputError("SampleMatrix: dimensions must be positive");
        if (data_.size() != rows * cols)
            throw InvalidInputError("SampleMatrix: data size does not match dimensions");
        for (double v : data_)
            if (!std::isfinite(v))
                throw InvalidInputError("SampleMatrix: non-finite entry");
    }

    static SampleMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        std::size_t n = rows.size();
        std::size_t p = n ? rows.begin()->size() : 0;
        std::vector<double> flat;
        flat.reserve(n * p);
        for (const auto& r : rows) {
            if (r.size() != p)
                throw InvalidInputError("SampleMatrix: ragged rows");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return SampleMatrix(n, p, std::move(flat));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    /// Pointer to the start of row i (contiguous, cols() entries).
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = data_[i * cols_ + j];
        return c;
    }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

/// Symmetric p x p matrix; only the upper triangle is stored, so symmetry
/// is exact by construction.
class SymMat {
public:
    explicit SymMat(std::size_t dim) : dim_(dim), tri_(dim * (dim + 1) / 2, 0.0) {
        if (dim == 0) throw InvalidInputError("SymMat: dimension must be positive");
    }

    static SymMat sym2(double s11, double s12, double s22) {
        SymMat m(2);
        m.set(0, 0, s11);
        m.set(0, 1, s12);
        m.set(1, 1, s22);
        return m;
    }

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j) const { return tri_[index(i, j)]; }
    void set(std::size_t i, std::size_t j, double v) { tri_[index(i, j)] = v; }

private:
    // Packed upper triangle, row-wise: row i starts at i*dim - i*(i-1)/2.
    std::size_t index(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return i * dim_ - i * (i - 1) / 2 + (j - i);
    }

    std::size_t dim_;
    std::vector<double> tri_;
};

}  // namespace sscor
