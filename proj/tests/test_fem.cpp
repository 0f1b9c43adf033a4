#include <random>
#include <set>

#include "doctest.h"
#include "lamecouple/fem.hpp"
#include "lamecouple/linalg.hpp"
#include "oracles.hpp"

using namespace lamecouple;

namespace {

std::shared_ptr<const FemSpace> space(const std::vector<Vec2>& poly, double h)
{
    return std::make_shared<const FemSpace>(std::make_shared<const Mesh>(build_polygon_mesh(poly, h)));
}

MaterialLaw hencky() { return MaterialLaw(Hencky{5.0, parse_shear_profile("rational(2,1)"), 1.875, 1.0}); }

}  // namespace

TEST_CASE("FemSpace dof layout and trace map")
{
    auto sp = space(lshape_polygon(), 0.25);
    CHECK(sp->dof_count() == 2 * sp->mesh().node_count());
    std::set<int> bnodes;
    for (auto& e : sp->mesh().boundary_edges()) bnodes.insert(e[0]);
    std::set<int> trace(sp->trace_nodes().begin(), sp->trace_nodes().end());
    CHECK(trace == bnodes);
    CHECK(sp->trace_nodes().size() == bnodes.size());
}

TEST_CASE("rigid motions produce zero residual and lie in the stiffness kernel")
{
    auto sp = space(unit_square_polygon(), 0.25);
    Matrix k = assemble_tangent_matrix(*sp, MaterialLaw(LinearLame{1.0, 1.0}), CoefVector::Zero(sp->dof_count()));
    for (const CoefVector& r : rigid_coefficients(*sp)) {
        CHECK(assemble_nonlinear_form(*sp, MaterialLaw(LinearLame{2.0, 0.5}), r).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK(assemble_nonlinear_form(*sp, hencky(), r).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK((k * r).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(h1_seminorm(*sp, r) <= 1e-14);
    }
    CHECK((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("stiffness kernel has dimension 3")
{
    for (double h : {1.0, 0.5, 0.25}) {
        auto sp = space(lshape_polygon(), h);
        Matrix k = assemble_tangent_matrix(*sp, MaterialLaw(LinearLame{1.0, 1.0}), CoefVector::Zero(sp->dof_count()));
        Vector e = sym_eigenvalues(k);
        const double top = e.maxCoeff();
        int zero = 0;
        for (int i = 0; i < e.size(); ++i) zero += std::abs(e[i]) <= 1e-12 * top;
        CHECK(zero == 3);
        CHECK(e[3] > 1e-6 * top);
        CHECK(e.minCoeff() >= -1e-12 * top);
    }
}

TEST_CASE("smallest nonzero stiffness eigenvalue on the 2-triangle square is positive")
{
    auto sp = space(unit_square_polygon(), 1.0);
    Vector e = sym_eigenvalues(assemble_tangent_matrix(*sp, MaterialLaw(LinearLame{1.0, 1.0}), CoefVector::Zero(8)));
    CHECK(e[3] > 1e-3);
}

TEST_CASE("linear law: residual equals stiffness times u")
{
    auto sp = space(lshape_polygon(), 0.2);
    std::mt19937 g(1);
    Vector u = oracle::random_vector(sp->dof_count(), g);
    MaterialLaw law(LinearLame{1.3, 0.6});
    Matrix k = assemble_tangent_matrix(*sp, law, u);
    CHECK((assemble_nonlinear_form(*sp, law, u) - k * u).cwiseAbs().maxCoeff() <= 1e-12 * (k * u).cwiseAbs().maxCoeff());
}

TEST_CASE("energy of u = (x, 0) on the unit square")
{
    auto sp = space(unit_square_polygon(), 0.25);
    CoefVector u = interpolate(*sp, [](const Vec2& x) { return Vec2(x.x(), 0.0); });
    MaterialLaw law(LinearLame{1.0, 1.0});
    CHECK(u.dot(assemble_nonlinear_form(*sp, law, u)) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(h1_seminorm(*sp, u) == doctest::Approx(1.0).epsilon(1e-14));
    CoefVector v = interpolate(*sp, [](const Vec2& x) { return Vec2(x.y(), 0.0); });
    CHECK(h1_seminorm(*sp, v) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    SymTensor2 e = strain_at(*sp, v, 3);
    CHECK(e.xx == doctest::Approx(0.0));
    CHECK(e.xy == doctest::Approx(0.5));
}

TEST_CASE("load vector")
{
    auto sp = space(lshape_polygon(), 0.25);
    CHECK(assemble_load(*sp, [](const Vec2&) { return Vec2(0, 0); }).cwiseAbs().maxCoeff() == 0.0);
    CoefVector f = assemble_load(*sp, [](const Vec2&) { return Vec2(1, 0); });
    double sx = 0, sy = 0;
    for (int i = 0; i < sp->mesh().node_count(); ++i) sx += f[2 * i], sy += f[2 * i + 1];
    CHECK(sx == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(sy == doctest::Approx(0.0));

    auto sq = space(unit_square_polygon(), 0.25);
    CoefVector g = assemble_load(*sq, [](const Vec2& x) { return Vec2(x.x(), 0); });
    sx = 0;
    for (int i = 0; i < sq->mesh().node_count(); ++i) sx += g[2 * i];
    CHECK(sx == doctest::Approx(0.5).epsilon(1e-14));

    // linear f against a linear test field: the rule is exact for quadratics
    CoefVector h = assemble_load(*sq, [](const Vec2& x) { return Vec2(2 * x.x() - x.y(), 1 + x.y()); });
    CoefVector w = interpolate(*sq, [](const Vec2& x) { return Vec2(x.x() - 2 * x.y(), 3 * x.x() + x.y()); });
    const double ref = oracle::gauss(
        [](double x) {
            return oracle::gauss([x](double y) { return (2 * x - y) * (x - 2 * y) + (1 + y) * (3 * x + y); }, 0, 1, 4);
        },
        0, 1, 4);
    CHECK(h.dot(w) == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("rigid body bases")
{
    auto r2 = rigid_body_basis2();
    REQUIRE(r2.size() == 3);
    Vec2 x(0.3, -0.7);
    CHECK((r2[0](x) - Vec2(1, 0)).norm() == 0.0);
    CHECK((r2[1](x) - Vec2(0, 1)).norm() == 0.0);
    CHECK((r2[2](x) - Vec2(0.7, 0.3)).norm() <= 1e-16);
    auto r3 = rigid_body_basis3();
    REQUIRE(r3.size() == 6);
    CHECK(rigid_body_dimension(2) == 3);
    CHECK(rigid_body_dimension(3) == 6);
    CHECK_THROWS(rigid_body_dimension(4));
    CHECK_THROWS(rigid_body_dimension(1));

    // eps(r) = 0 by central differences at random points
    std::mt19937 g(2);
    std::uniform_real_distribution<double> d(-2, 2);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        Vec2 p(d(g), d(g));
        for (auto& r : r2) {
            Mat2 grad;
            for (int j = 0; j < 2; ++j) {
                Vec2 e = Vec2::Unit(j) * h;
                grad.col(j) = (r(p + e) - r(p - e)) / (2 * h);
            }
            CHECK((grad + grad.transpose()).norm() <= 1e-9);
        }
        Vec3 q(d(g), d(g), d(g));
        for (auto& r : r3) {
            Eigen::Matrix3d grad;
            for (int j = 0; j < 3; ++j) {
                Vec3 e = Vec3::Unit(j) * h;
                grad.col(j) = (r(q + e) - r(q - e)) / (2 * h);
            }
            CHECK((grad + grad.transpose()).norm() <= 1e-9);
        }
    }
    // the printed rotations are among the six fields
    Vec3 q(0.2, -0.4, 0.9);
    auto has = [&](Vec3 v) {
        for (auto& r : r3)
            if ((r(q) - v).norm() <= 1e-15) return true;
        return false;
    };
    CHECK(has(Vec3(0.4, 0.2, 0.0)));
    CHECK(has(Vec3(0.0, -0.9, -0.4)));
    CHECK(has(Vec3(0.9, 0.0, -0.2)));
}

TEST_CASE("Hencky tangent matrix matches finite differences of the residual")
{
    auto sp = space(unit_square_polygon(), 0.5);
    std::mt19937 g(4);
    Vector u = 0.5 * oracle::random_vector(sp->dof_count(), g), d = oracle::random_vector(sp->dof_count(), g);
    const double t = 1e-6;
    Vector fd = (assemble_nonlinear_form(*sp, hencky(), u + t * d) - assemble_nonlinear_form(*sp, hencky(), u - t * d)) / (2 * t);
    Matrix k = assemble_tangent_matrix(*sp, hencky(), u);
    CHECK((fd - k * d).norm() <= 1e-6 * fd.norm());
    CHECK((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * k.cwiseAbs().maxCoeff());
}

TEST_CASE("discrete strong monotonicity of the volume form")
{
    auto sp = space(lshape_polygon(), 0.25);
    Matrix gram = strain_gram(*sp);
    std::mt19937 g(8);
    for (const MaterialLaw& law : {MaterialLaw(LinearLame{1.0, 1.0}), hencky()}) {
        const double cA = monotonicity_constants(law).c_A;
        for (int i = 0; i < 20; ++i) {
            Vector u = oracle::random_vector(sp->dof_count(), g), v = oracle::random_vector(sp->dof_count(), g);
            Vector du = u - v;
            const double lhs = (assemble_nonlinear_form(*sp, law, u) - assemble_nonlinear_form(*sp, law, v)).dot(du);
            const double e2 = du.dot(gram * du);
            CHECK(lhs >= cA * e2 * (1 - 1e-12));
            CHECK(std::pow(h1_seminorm(*sp, du), 2) == doctest::Approx(e2).epsilon(1e-12));
        }
    }
}

TEST_CASE("parallel and serial assembly agree")
{
    auto sp = space(lshape_polygon(), 0.1);
    std::mt19937 g(6);
    Vector u = oracle::random_vector(sp->dof_count(), g);
    for (const MaterialLaw& law : {MaterialLaw(LinearLame{1.0, 1.0}), hencky()}) {
        CHECK((assemble_nonlinear_form(*sp, law, u) - assemble_nonlinear_form_serial(*sp, law, u)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((assemble_tangent_matrix(*sp, law, u) - assemble_tangent_matrix_serial(*sp, law, u)).cwiseAbs().maxCoeff() == 0.0);
    }
}
