#include "qspec/operator_core.hpp"

#include <Eigen/Eigenvalues>

namespace qspec {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

OperatorMatrix tensor_product(const OperatorMatrix& a, const OperatorMatrix& b,
                              Eigen::Index dim_cap) {
    const Eigen::Index d = a.dim() * b.dim();
    if (d > dim_cap)
        throw SizeError("tensor product dimension " + std::to_string(d) +
                        " exceeds cap " + std::to_string(dim_cap));
    std::vector<Eigen::Index> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    return OperatorMatrix(kron(a.m, b.m), std::move(dims));
}

OperatorMatrix partial_trace(const OperatorMatrix& x, const std::set<std::size_t>& keep) {
    const std::size_t nf = x.dims.size();
    if (nf < 2) throw ArgumentError("partial_trace needs at least two factors");
    if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
    for (auto k : keep)
        if (k >= nf) throw ArgumentError("partial_trace: factor index out of range");

    // Multi-index strides, row-major over the factor list.
    std::vector<Eigen::Index> stride(nf, 1);
    for (std::size_t f = nf; f-- > 1;) stride[f - 1] = stride[f] * x.dims[f];

    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::vector<std::size_t> traced;
    for (std::size_t f = 0; f < nf; ++f)
        if (!keep.count(f)) traced.push_back(f);

    Eigen::Index dk = 1, dt = 1;
    for (auto f : kept) dk *= x.dims[f];
    for (auto f : traced) dt *= x.dims[f];

    auto unpack = [&](Eigen::Index idx, const std::vector<std::size_t>& factors,
                      std::vector<Eigen::Index>& digits) {
        for (std::size_t q = factors.size(); q-- > 0;) {
            digits[q] = idx % x.dims[factors[q]];
            idx /= x.dims[factors[q]];
        }
    };

    Matrix out = Matrix::Zero(dk, dk);
    std::vector<Eigen::Index> kd(kept.size()), ld(kept.size()), td(traced.size());
    for (Eigen::Index r = 0; r < dk; ++r) {
        unpack(r, kept, kd);
        for (Eigen::Index c = 0; c < dk; ++c) {
            unpack(c, kept, ld);
            cplx acc(0.0, 0.0);
            for (Eigen::Index t = 0; t < dt; ++t) {
                unpack(t, traced, td);
                Eigen::Index row = 0, col = 0;
                for (std::size_t q = 0; q < kept.size(); ++q) {
                    row += kd[q] * stride[kept[q]];
                    col += ld[q] * stride[kept[q]];
                }
                for (std::size_t q = 0; q < traced.size(); ++q) {
                    row += td[q] * stride[traced[q]];
                    col += td[q] * stride[traced[q]];
                }
                acc += x.m(row, col);
            }
            out(r, c) = acc;
        }
    }

    std::vector<Eigen::Index> out_dims;
    for (auto f : kept) out_dims.push_back(x.dims[f]);
    return OperatorMatrix(std::move(out), std::move(out_dims));
}

Matrix commutator(const Matrix& v, const Matrix& x) {
    if (v.rows() != x.rows()) throw ArgumentError("commutator: dimension mismatch");
    return v * x - x * v;
}

Matrix anticommutator(const Matrix& v, const Matrix& x) {
    if (v.rows() != x.rows()) throw ArgumentError("anticommutator: dimension mismatch");
    return v * x + x * v;
}

bool is_hermitian(const Matrix& m, double tol_rel) {
    const double scale = std::max(m.norm(), 1e-300);
    return (m - m.adjoint()).norm() <= tol_rel * scale;
}

Matrix hermitian_function(const Matrix& h, const std::function<cplx(double)>& f) {
    if (!is_hermitian(h)) throw ArgumentError("hermitian_function: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_function: eigendecomposition failed");
    const auto& u = es.eigenvectors();
    Vector fv(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) fv(i) = f(es.eigenvalues()(i));
    Matrix out = u * fv.asDiagonal() * u.adjoint();
    if (!out.allFinite()) throw NumericalError("hermitian_function: non-finite result");
    return out;
}

}  // namespace qspec
