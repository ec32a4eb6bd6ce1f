#include "doctest.h"

#include <cmath>
#include <numbers>

#include "cfgd/data.hpp"
#include "cfgd/errors.hpp"
#include "cfgd/objectives.hpp"

using namespace cfgd;

namespace {

// f(x + (u - x_l) e_l) evaluated from scratch; the reference the cached
// derivative paths are differenced against.
double restricted_value(const TwoLayerTanhNet& net, std::size_t l, const Vector& x, double u) {
    Vector xu = x;
    xu[l] = u;
    return net.value(xu);
}

TwoLayerTanhNet make_net(std::size_t m, std::size_t n, Rng& rng, std::vector<double>* zs = nullptr,
                         std::vector<double>* ys = nullptr) {
    std::vector<double> z(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        z[i] = rng.uniform(-1.0, 1.0);
        y[i] = scalar_test(TestFunction::h1, z[i]);
    }
    if (zs) *zs = z;
    if (ys) *ys = y;
    return TwoLayerTanhNet(std::move(z), std::move(y), n);
}

} // namespace

TEST_CASE("objective values") {
    QuadraticObjective q(Matrix::diagonal(Vector{20.0, 2.0}), Vector{0.0, 0.0});
    CHECK(q.value(Vector{1.0, -10.0}) == doctest::Approx(110.0).epsilon(1e-14));

    LeastSquaresObjective lsq(Matrix::identity(3), Vector{0.0, 0.0, 0.0});
    CHECK(lsq.value(Vector{1.0, 2.0, 2.0}) == doctest::Approx(4.5).epsilon(1e-14));

    // zero output layer: value = 1/2 sum y_i^2
    Rng rng(5);
    std::vector<double> z, y;
    TwoLayerTanhNet net = make_net(20, 4, rng, &z, &y);
    Vector x(net.dimension());
    for (std::size_t j = 0; j < 8; ++j) x[j] = rng.normal(); // a3 stays zero
    double half_sum = 0.0;
    for (double v : y) half_sum += 0.5 * v * v;
    CHECK(net.value(x) == doctest::Approx(half_sum).epsilon(1e-14));
}

TEST_CASE("gradients") {
    QuadraticObjective q(Matrix::diagonal(Vector{20.0, 2.0}), Vector{0.0, 0.0});
    const Vector g = q.gradient(Vector{1.0, -10.0});
    CHECK(g[0] == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(-20.0).epsilon(1e-14));

    // gradient vanishes at the minimizer
    Rng rng(11);
    Matrix G(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) G(i, j) = rng.normal();
    Matrix A = gram(G);
    for (std::size_t i = 0; i < 5; ++i) A(i, i) += 1.0;
    Vector b(5);
    for (std::size_t i = 0; i < 5; ++i) b[i] = rng.normal();
    QuadraticObjective q2(A, b);
    CHECK(norm_inf(q2.gradient(q2.minimizer())) <= 1e-10);
}

TEST_CASE("tanh net gradient matches central differences") {
    Rng rng(23);
    TwoLayerTanhNet net = make_net(15, 3, rng);
    Vector x(net.dimension());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.normal();
    const Vector g = net.gradient(x);
    const double h = 1e-5;
    for (std::size_t l = 0; l < x.size(); ++l) {
        Vector xp = x, xm = x;
        xp[l] += h;
        xm[l] -= h;
        const double fd = (net.value(xp) - net.value(xm)) / (2.0 * h);
        CHECK(g[l] == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("coordinate restriction of the quadratic form") {
    Matrix A(2, 2);
    A(0, 0) = 4.0;
    A(0, 1) = 1.0;
    A(1, 0) = 1.0;
    A(1, 1) = 3.0;
    QuadraticObjective q(A, Vector{0.5, -0.5});
    const Vector x{2.0, -1.0};
    // f'_{0,x}(u) = a_00 u + a_01 x_1 + b_0
    CHECK(q.coord_first(0, x, 1.5) == doctest::Approx(4.0 * 1.5 + 1.0 * -1.0 + 0.5).epsilon(1e-14));
    CHECK(q.coord_second(0, x, 1.5) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(q.coord_second(1, x, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("gradient consistency: coord_first at u = x_j") {
    Rng rng(31);
    Matrix G(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) G(i, j) = rng.normal();
    Matrix A = gram(G);
    for (std::size_t i = 0; i < 6; ++i) A(i, i) += 1.0;
    Vector b(6);
    for (std::size_t i = 0; i < 6; ++i) b[i] = rng.normal();
    QuadraticObjective q(A, b);

    TwoLayerTanhNet net = make_net(12, 4, rng);

    for (int trial = 0; trial < 100; ++trial) {
        Vector xq(6);
        for (std::size_t i = 0; i < 6; ++i) xq[i] = rng.normal();
        const Vector gq = q.gradient(xq);
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(q.coord_first(j, xq, xq[j]) == doctest::Approx(gq[j]).epsilon(1e-12));

        Vector xn(net.dimension());
        for (std::size_t i = 0; i < xn.size(); ++i) xn[i] = rng.normal();
        net.prepare_cache(xn);
        const Vector gn = net.gradient(xn);
        for (std::size_t j = 0; j < xn.size(); ++j)
            CHECK(net.coord_first(j, xn, xn[j]) ==
                  doctest::Approx(gn[j]).epsilon(1e-12).scale(1.0 + std::abs(gn[j])));
    }
}

TEST_CASE("tanh net restricted derivatives match finite differences on all blocks") {
    Rng rng(41);
    TwoLayerTanhNet net = make_net(25, 5, rng);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        Vector x(net.dimension());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
        net.prepare_cache(x);
        for (std::size_t block = 0; block < 3; ++block) {
            const std::size_t l =
                block * 5 + static_cast<std::size_t>(rng.uniform(0.0, 5.0)) % 5;
            const double u = rng.normal();
            const double fd1 =
                (restricted_value(net, l, x, u + h) - restricted_value(net, l, x, u - h)) /
                (2.0 * h);
            const double fd2 = (restricted_value(net, l, x, u + h) -
                                2.0 * restricted_value(net, l, x, u) +
                                restricted_value(net, l, x, u - h)) /
                               (h * h);
            const double an1 = net.coord_first(l, x, u);
            const double an2 = net.coord_second(l, x, u);
            CHECK(an1 == doctest::Approx(fd1).epsilon(1e-5).scale(1.0 + std::abs(fd1)));
            CHECK(an2 == doctest::Approx(fd2).epsilon(1e-3).scale(1.0 + std::abs(fd2)));
        }
    }
}

TEST_CASE("cache equivalence and invalidation") {
    Rng rng(47);
    std::vector<double> z, y;
    TwoLayerTanhNet net = make_net(10, 3, rng, &z, &y);
    Vector x(net.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();

    CHECK_THROWS_AS(net.coord_first(0, x, 0.1), CacheMissing);
    net.prepare_cache(x);

    // value recomputed from the cached misfit equals the direct path
    const Vector& mis = net.cached_misfit();
    double from_cache = 0.0;
    for (std::size_t i = 0; i < mis.size(); ++i) from_cache += 0.5 * mis[i] * mis[i];
    CHECK(from_cache == doctest::Approx(net.value(x)).epsilon(1e-12));

    Vector other = x;
    other[2] += 0.5;
    CHECK_THROWS_AS(net.coord_first(0, other, 0.1), CacheMissing);
    CHECK_THROWS_AS(net.coord_second(1, other, 0.1), CacheMissing);
}

TEST_CASE("degenerate single-neuron net") {
    TwoLayerTanhNet net({0.0}, {0.0}, 1);
    Vector x{1.0, 0.0, 1.0};
    CHECK(net.value(x) == doctest::Approx(0.0).epsilon(1e-15)); // tanh(0) = 0
}

TEST_CASE("coefficient-block second derivative is the squared feature norm") {
    Rng rng(53);
    TwoLayerTanhNet net = make_net(12, 4, rng);
    Vector x(net.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
    net.prepare_cache(x);
    const Matrix& phi = net.cached_features();
    for (std::size_t j = 0; j < 4; ++j) {
        double q = 0.0;
        for (std::size_t i = 0; i < 12; ++i) q += phi(j, i) * phi(j, i);
        CHECK(net.coord_second(8 + j, x, rng.normal()) == doctest::Approx(q).epsilon(1e-13));
    }
}

TEST_CASE("least squares equals its quadratic form") {
    Rng rng(59);
    Matrix W(4, 7);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 7; ++j) W(i, j) = rng.normal();
    Vector y(7);
    for (std::size_t j = 0; j < 7; ++j) y[j] = rng.normal();
    LeastSquaresObjective lsq(W, y);

    Matrix A = gram(W);
    Vector b = -1.0 * matvec(W, y);
    QuadraticObjective q(A, b, 0.5 * dot(y, y));
    for (int trial = 0; trial < 10; ++trial) {
        Vector x(4);
        for (std::size_t i = 0; i < 4; ++i) x[i] = rng.normal();
        CHECK(lsq.value(x) == doctest::Approx(q.value(x)).epsilon(1e-10));
        const Vector g1 = lsq.gradient(x), g2 = q.gradient(x);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-10));
    }
}

TEST_CASE("scalar test functions") {
    CHECK(scalar_test(TestFunction::h1, 0.1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(scalar_test(TestFunction::h2, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(scalar_test(TestFunction::h3, -0.25) == doctest::Approx(-0.2).epsilon(1e-14));
    CHECK(scalar_test(TestFunction::h3, 0.25) == doctest::Approx(1.2).epsilon(1e-14));

    // quartic: product form against the expansion used for derivatives
    for (double zv : {-3.0, -1.0, 0.0, 0.7, 2.5, 6.0}) {
        const double product = (zv - 6.0) * (zv + 4.0) * (7.0 * zv * zv + 10.0 * zv + 24.0);
        CHECK(scalar_test(TestFunction::landscape_quartic, zv) ==
              doctest::Approx(product).epsilon(1e-14));
        const auto dv = landscape_quartic_derivatives(0.0);
        const double expansion = dv[0] + dv[1] * zv + dv[2] / 2.0 * zv * zv +
                                 dv[3] / 6.0 * zv * zv * zv + dv[4] / 24.0 * zv * zv * zv * zv;
        CHECK(expansion == doctest::Approx(product).epsilon(1e-12));
    }
}

TEST_CASE("quartic Taylor expansion reproduces the function around any center") {
    for (double c : {-1.0, 0.7, 3.0}) {
        const auto dv = landscape_quartic_derivatives(c);
        for (double dz : {-0.9, 0.3, 1.4}) {
            const double zv = c + dz;
            double acc = 0.0, power = 1.0, factorial = 1.0;
            for (std::size_t k = 0; k < 5; ++k) {
                acc += dv[k] / factorial * power;
                power *= dz;
                factorial *= static_cast<double>(k + 1);
            }
            CHECK(acc ==
                  doctest::Approx(scalar_test(TestFunction::landscape_quartic, zv)).epsilon(1e-12));
        }
    }
}

TEST_CASE("quadratic construction rejects bad matrices") {
    Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(QuadraticObjective(asym, Vector{0.0, 0.0}), NotSpd);

    Matrix indef(2, 2);
    indef(0, 0) = 1.0;
    indef(0, 1) = 2.0;
    indef(1, 0) = 2.0;
    indef(1, 1) = 1.0;
    CHECK_THROWS_AS(QuadraticObjective(indef, Vector{0.0, 0.0}), NotSpd);
}
