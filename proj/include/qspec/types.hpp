#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qspec {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

// Hard cap on any constructed operator dimension (joint spaces included).
constexpr Eigen::Index kDefaultDimCap = 4096;

struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct UnsupportedRepresentationError : std::runtime_error {
    explicit UnsupportedRepresentationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    int line = 0;
    int column = 0;
    ConfigError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dense complex operator on a tensor-product space. `dims` lists the factor
/// dimensions in order; their product equals the matrix dimension.
struct OperatorMatrix {
    Matrix m;
    std::vector<Eigen::Index> dims;

    OperatorMatrix() = default;
    OperatorMatrix(Matrix mat, std::vector<Eigen::Index> factor_dims)
        : m(std::move(mat)), dims(std::move(factor_dims)) {
        check_consistent();
    }
    explicit OperatorMatrix(Matrix mat) : m(std::move(mat)) {
        dims = {m.rows()};
        check_consistent();
    }

    Eigen::Index dim() const { return m.rows(); }

    static OperatorMatrix identity(const std::vector<Eigen::Index>& factor_dims) {
        Eigen::Index d = 1;
        for (auto f : factor_dims) d *= f;
        return OperatorMatrix(Matrix::Identity(d, d), factor_dims);
    }

    void check_consistent() const {
        if (m.rows() != m.cols()) throw ArgumentError("OperatorMatrix must be square");
        Eigen::Index prod = 1;
        for (auto d : dims) {
            if (d <= 0) throw ArgumentError("OperatorMatrix factor dimensions must be positive");
            prod *= d;
        }
        if (prod != m.rows())
            throw ArgumentError("OperatorMatrix space tag does not match matrix dimension");
        if (!m.allFinite()) throw NumericalError("OperatorMatrix contains non-finite entries");
    }
};

}  // namespace qspec
