#pragma once

#include "qspec/types.hpp"

#include <functional>
#include <set>

namespace qspec {

/// Kronecker product, A-index major. The result's factor list is the
/// concatenation of both inputs' factor lists.
OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b,
                              Eigen::Index dim_cap = kDefaultDimCap);

Matrix kron(const Matrix& a, const Matrix& b);

/// Trace out all factors not listed in `keep`. Kept factors stay in their
/// original relative order.
OperatorMatrix partial_trace(const OperatorMatrix& x, const std::set<std::size_t>& keep);

Matrix commutator(const Matrix& v, const Matrix& x);
Matrix anticommutator(const Matrix& v, const Matrix& x);

/// U f(diag) U^dag from the eigendecomposition of a Hermitian matrix.
/// Throws ArgumentError if H is not Hermitian within 1e-10 * ||H||.
Matrix hermitian_function(const Matrix& h, const std::function<cplx(double)>& f);

bool is_hermitian(const Matrix& m, double tol_rel = 1e-10);

}  // namespace qspec
