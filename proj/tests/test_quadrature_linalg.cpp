#include "doctest.h"
#include "lamecouple/linalg.hpp"
#include "lamecouple/quadrature.hpp"
#include "oracles.hpp"

using namespace lamecouple;

TEST_CASE("gauss_legendre matches Golub-Welsch nodes and weights")
{
    for (int n : {1, 2, 3, 5, 8, 13, 24, 32}) {
        const Rule1D& r = gauss_legendre(n);
        auto [x, w] = oracle::golub_welsch(n);
        REQUIRE(r.x.size() == size_t(n));
        for (int i = 0; i < n; ++i) {
            CHECK(r.x[i] == doctest::Approx(x[i]).epsilon(1e-13));
            CHECK(r.w[i] == doctest::Approx(w[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("gauss_legendre integrates degree 2n-1 exactly")
{
    for (int n : {2, 4, 7}) {
        const Rule1D& r = gauss_legendre(n);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.w[i] * std::pow(r.x[i], p);
            CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("triangle rule is exact for degree 5 monomials")
{
    // int_T x^a y^b over the reference triangle = a! b! / (a + b + 2)!; rule weights are relative to area 1/2
    const TriRule& r = triangle_rule_deg5();
    double wsum = 0.0;
    for (double w : r.w) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; a + b <= 5; ++b) {
            double s = 0.0;
            for (size_t q = 0; q < r.w.size(); ++q) s += 0.5 * r.w[q] * std::pow(r.bary[q][1], a) * std::pow(r.bary[q][2], b);
            const double exact = std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 3);
            CHECK(s == doctest::Approx(exact).epsilon(1e-14));
        }
}

TEST_CASE("dense backend contracts")
{
    SUBCASE("identity has unit eigenvalues")
    {
        Vector e = sym_eigenvalues(Matrix::Identity(5, 5));
        for (int i = 0; i < 5; ++i) CHECK(e[i] == doctest::Approx(1.0));
    }
    SUBCASE("generalized eigenvalues of diag(2,3) against identity")
    {
        Matrix a(2, 2);
        a << 2, 0, 0, 3;
        Vector e = generalized_sym_eigenvalues(a, Matrix::Identity(2, 2));
        CHECK(e[0] == doctest::Approx(2.0));
        CHECK(e[1] == doctest::Approx(3.0));
    }
    SUBCASE("LU solve residual on a random SPD matrix")
    {
        std::mt19937 g(7);
        Matrix b(40, 40);
        for (int j = 0; j < 40; ++j) b.col(j) = oracle::random_vector(40, g);
        Matrix a = b * b.transpose() + Matrix::Identity(40, 40);
        Vector rhs = oracle::random_vector(40, g);
        LuFactor lu(a);
        CHECK((a * lu.solve(rhs) - rhs).norm() / rhs.norm() <= 1e-12);
    }
    SUBCASE("singular matrix is rejected")
    {
        Matrix a = Matrix::Ones(3, 3);
        CHECK_THROWS_AS(LuFactor{a}, SingularMatrixError);
    }
    SUBCASE("indefinite B is rejected by the generalized solver")
    {
        Matrix b(2, 2);
        b << 1, 0, 0, -1;
        CHECK_THROWS(generalized_sym_eigenvalues(Matrix::Identity(2, 2), b));
    }
    SUBCASE("singular values descending")
    {
        Matrix a(3, 2);
        a << 3, 0, 0, 4, 0, 0;
        Vector s = singular_values(a);
        CHECK(s[0] == doctest::Approx(4.0));
        CHECK(s[1] == doctest::Approx(3.0));
    }
}
