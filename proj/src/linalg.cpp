#include "lamecouple/linalg.hpp"

#include <sstream>

namespace lamecouple {

LuFactor::LuFactor(const Matrix& a, double rcond_min)
{
    if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("LuFactor: matrix must be square and nonempty");
    if (!a.allFinite()) throw SingularMatrixError("LuFactor: matrix has non-finite entries");
    lu_.compute(a);
    rcond_ = lu_.rcond();
    if (!(rcond_ > rcond_min)) {
        std::ostringstream os;
        os << "LuFactor: matrix is numerically singular (rcond=" << rcond_ << ")";
        throw SingularMatrixError(os.str());
    }
}

Vector LuFactor::solve(const Vector& b) const { return lu_.solve(b); }

Matrix LuFactor::solve(const Matrix& b) const { return lu_.solve(b); }

Vector sym_eigenvalues(const Matrix& a)
{
    Matrix s = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("sym_eigenvalues: eigensolver failed");
    return es.eigenvalues();
}

Vector generalized_sym_eigenvalues(const Matrix& a, const Matrix& b)
{
    Matrix as = 0.5 * (a + a.transpose());
    Matrix bs = 0.5 * (b + b.transpose());
    Eigen::LLT<Matrix> llt(bs);
    if (llt.info() != Eigen::Success) throw SingularMatrixError("generalized_sym_eigenvalues: B is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(as, bs, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw std::runtime_error("generalized_sym_eigenvalues: eigensolver failed");
    return es.eigenvalues();
}

Vector singular_values(const Matrix& a)
{
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues();
}

}  // namespace lamecouple
