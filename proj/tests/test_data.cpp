#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "cfgd/data.hpp"
#include "cfgd/errors.hpp"
#include "cfgd/linalg.hpp"

using namespace cfgd;

namespace {

struct TempFile {
    explicit TempFile(const std::string& contents) {
        path = std::string("cfgd_data_test_") + std::to_string(counter++) + ".txt";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
    std::string path;
    static int counter;
};
int TempFile::counter = 0;

} // namespace

TEST_CASE("rng streams are deterministic and split streams differ") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
    Rng c1 = Rng(42).fork(1);
    Rng c2 = Rng(42).fork(2);
    bool all_equal = true;
    for (int i = 0; i < 10; ++i) all_equal = all_equal && (c1.uniform01() == c2.uniform01());
    CHECK_FALSE(all_equal);
}

TEST_CASE("gaussian problem generation is deterministic per seed") {
    RandomProblemSpec spec;
    spec.d = 5;
    spec.m = 7;
    spec.seed = 9;
    LeastSquaresObjective p1 = gen_gaussian_lsq(spec);
    LeastSquaresObjective p2 = gen_gaussian_lsq(spec);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 7; ++j) CHECK(p1.design()(i, j) == p2.design()(i, j));
    for (std::size_t j = 0; j < 7; ++j) CHECK(p1.targets()[j] == p2.targets()[j]);
}

TEST_CASE("gaussian entries carry variance near 1/m") {
    RandomProblemSpec spec;
    spec.d = 100;
    spec.m = 100;
    spec.seed = 31;
    LeastSquaresObjective p = gen_gaussian_lsq(spec);
    double acc = 0.0;
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t j = 0; j < 100; ++j) acc += p.design()(i, j) * p.design()(i, j);
    const double sample_variance = acc / 10000.0;
    CHECK(sample_variance > 0.8 / 100.0);
    CHECK(sample_variance < 1.2 / 100.0);
}

TEST_CASE("gaussian gram matrix is symmetric PSD") {
    RandomProblemSpec spec;
    spec.d = 2;
    spec.m = 5;
    spec.seed = 3;
    LeastSquaresObjective p = gen_gaussian_lsq(spec);
    const Matrix A = p.quadratic_matrix();
    CHECK(A.is_symmetric());
    const SymmetricEigen eig = sym_eigen(A);
    CHECK(eig.values[0] >= -1e-12);
}

TEST_CASE("illcond generator forces the extreme singular values") {
    // Seed chosen so the seed matrix's interior singular values lie inside
    // (0.1, 10); the forced extremes are then the extremes of the output.
    RandomProblemSpec spec;
    spec.d = 20;
    spec.m = 20;
    spec.seed = 4;
    spec.kind = ProblemKind::illcond;
    LeastSquaresObjective p = gen_illcond(spec);
    auto [lo, hi] = extreme_singular_values(p.design());
    CHECK(lo == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(hi == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(condition_number(p.quadratic_matrix()) >= 1e4 * (1.0 - 1e-9));
}

TEST_CASE("illcond generator preserves interior singular values") {
    RandomProblemSpec spec;
    spec.d = 12;
    spec.m = 16;
    spec.seed = 8;
    LeastSquaresObjective seed_problem = gen_gaussian_lsq(spec);
    spec.kind = ProblemKind::illcond;
    LeastSquaresObjective forced = gen_illcond(spec);

    const SymmetricEigen e0 = sym_eigen(gram(seed_problem.design()));
    const SymmetricEigen e1 = sym_eigen(gram(forced.design()));
    // interior values (all but first and last) match to 1e-8
    for (std::size_t i = 1; i + 1 < 12; ++i) {
        const double s0 = std::sqrt(std::max(e0.values[i], 0.0));
        const double s1 = std::sqrt(std::max(e1.values[i], 0.0));
        CHECK(s1 == doctest::Approx(s0).epsilon(1e-8));
    }
    CHECK_THROWS_AS(gen_illcond(RandomProblemSpec{16, 12, 8, ProblemKind::illcond}), DomainError);
}

TEST_CASE("csv loader normalizes features and targets") {
    TempFile f("a,b,target\n"
               "1.0,5.0,2.0\n"
               "2.0,5.0,4.0\n"
               "3.0,5.0,9.0\n");
    RegressionDataset ds = load_regression(f.path, DatasetFormat::csv);
    REQUIRE(ds.features.rows() == 3);
    REQUIRE(ds.features.cols() == 2);

    // column 0 normalized, column 1 constant and flagged
    double mean0 = 0.0;
    for (std::size_t r = 0; r < 3; ++r) mean0 += ds.features(r, 0);
    CHECK(std::abs(mean0 / 3.0) <= 1e-10);
    double var0 = 0.0;
    for (std::size_t r = 0; r < 3; ++r) var0 += ds.features(r, 0) * ds.features(r, 0);
    CHECK(std::sqrt(var0 / 3.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(ds.constant_column[0]);
    CHECK(ds.constant_column[1]);
    CHECK(ds.features(0, 1) == 5.0); // left unscaled
    CHECK(ds.warnings.size() == 1);

    double tmean = 0.0;
    for (std::size_t r = 0; r < 3; ++r) tmean += ds.targets[r];
    CHECK(std::abs(tmean / 3.0) <= 1e-10);

    // round trip
    const Matrix X = ds.denormalized_features();
    CHECK(X(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(X(2, 0) == doctest::Approx(3.0).epsilon(1e-12));
    const Vector t = ds.denormalized_targets();
    CHECK(t[2] == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("csv loader respects the target column flag") {
    TempFile f("1.0,10.0,3.0\n2.0,20.0,6.0\n");
    RegressionDataset ds = load_regression(f.path, DatasetFormat::csv, 1);
    const Vector t = ds.denormalized_targets();
    CHECK(t[0] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(t[1] == doctest::Approx(20.0).epsilon(1e-12));
    const Matrix X = ds.denormalized_features();
    CHECK(X(1, 1) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("libsvm loader parses sparse rows densely") {
    TempFile f("3.5 1:0.2 4:1.0\n-1.0 2:5.0 4:2.0\n0.5 1:0.4 2:2.5\n");
    RegressionDataset ds = load_regression(f.path, DatasetFormat::libsvm);
    REQUIRE(ds.features.rows() == 3);
    REQUIRE(ds.features.cols() == 4);
    const Matrix X = ds.denormalized_features();
    CHECK(X(0, 0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(X(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(X(0, 3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(X(1, 1) == doctest::Approx(5.0).epsilon(1e-12));
    const Vector t = ds.denormalized_targets();
    CHECK(t[0] == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("normalization is idempotent") {
    TempFile f("1.0,2.0\n-1.0,0.0\n3.0,4.0\n0.5,1.5\n");
    RegressionDataset ds = load_regression(f.path, DatasetFormat::csv);
    // write the normalized data back out and normalize again
    std::string second;
    for (std::size_t r = 0; r < ds.features.rows(); ++r) {
        second += std::to_string(ds.features(r, 0)) + "," + std::to_string(ds.targets[r]) + "\n";
    }
    TempFile f2(second);
    RegressionDataset ds2 = load_regression(f2.path, DatasetFormat::csv);
    for (std::size_t r = 0; r < ds.features.rows(); ++r)
        CHECK(std::abs(ds2.features(r, 0) - ds.features(r, 0)) <= 1e-4); // to_string trims digits
}

TEST_CASE("loader error paths") {
    TempFile bad("1.0,2.0\nfoo,3.0\n");
    CHECK_THROWS_AS(load_regression(bad.path, DatasetFormat::csv), ParseError);
    try {
        load_regression(bad.path, DatasetFormat::csv);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    TempFile empty("");
    CHECK_THROWS_AS(load_regression(empty.path, DatasetFormat::csv), EmptyDataset);

    TempFile badsvm("1.0 3:x\n");
    CHECK_THROWS_AS(load_regression(badsvm.path, DatasetFormat::libsvm), ParseError);

    CHECK_THROWS_AS(load_regression("does_not_exist.csv", DatasetFormat::csv), ParseError);
}

TEST_CASE("function approximation tasks") {
    FunctionApproxTask task;
    task.target = TestFunction::h1;
    task.train_count = 100;
    task.test_count = 500;
    task.seed = 11;
    FunctionApproxData d1 = gen_function_approx(task);
    FunctionApproxData d2 = gen_function_approx(task);

    REQUIRE(d1.train_inputs.size() == 100);
    REQUIRE(d1.test_inputs.size() == 500);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(d1.train_inputs[i] == d2.train_inputs[i]); // reproducible
        CHECK(std::abs(d1.train_inputs[i]) > 1e-12);     // away from the h3 step
        CHECK(std::abs(d1.train_inputs[i]) < 1.0);
        CHECK(d1.train_targets[i] >= -1.0);
        CHECK(d1.train_targets[i] <= 1.0); // sine range
    }
    // train and test streams are disjoint
    CHECK(d1.train_inputs[0] != d1.test_inputs[0]);

    task.target = TestFunction::h3;
    FunctionApproxData d3 = gen_function_approx(task);
    for (double z : d3.train_inputs) CHECK(std::abs(z) > 1e-12);
}

TEST_CASE("net parameter initialization is uniform in [-1,1] and seeded") {
    Rng rng(77);
    const Vector x = init_net_parameters(50, rng);
    REQUIRE(x.size() == 150);
    for (double v : x) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    Rng rng2(77);
    const Vector y = init_net_parameters(50, rng2);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == y[i]);
}
