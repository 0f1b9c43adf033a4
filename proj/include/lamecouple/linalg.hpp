#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace lamecouple {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

// Partial-pivot LU; throws SingularMatrixError when the reciprocal condition
// estimate drops below rcond_min.
class LuFactor {
public:
    explicit LuFactor(const Matrix& a, double rcond_min = 1e-15);
    Vector solve(const Vector& b) const;
    Matrix solve(const Matrix& b) const;
    double rcond() const { return rcond_; }
    Eigen::Index size() const { return lu_.rows(); }

private:
    Eigen::PartialPivLU<Matrix> lu_;
    double rcond_ = 0.0;
};

// Ascending eigenvalues of the symmetric part of a.
Vector sym_eigenvalues(const Matrix& a);

// Ascending eigenvalues of a x = l b x with b symmetric positive definite.
Vector generalized_sym_eigenvalues(const Matrix& a, const Matrix& b);

// Descending singular values.
Vector singular_values(const Matrix& a);

}  // namespace lamecouple
