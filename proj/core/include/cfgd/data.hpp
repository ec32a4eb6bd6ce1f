#ifndef CFGD_DATA_HPP
#define CFGD_DATA_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cfgd/linalg.hpp"
#include "cfgd/objectives.hpp"

namespace cfgd {

/// Deterministic random stream: mt19937_64 (bit-exact across platforms) with
/// Box-Muller normals. fork(tag) derives an independent child stream via
/// splitmix64, so each tensor of a generated problem owns its own stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    Rng fork(std::uint64_t tag) const;

    /// Uniform on [0, 1) from the top 53 bits.
    double uniform01();
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller (pairs; the spare is cached).
    double normal();

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

enum class ProblemKind { gaussian, illcond };

struct RandomProblemSpec {
    std::size_t d = 20;
    std::size_t m = 20;
    std::uint64_t seed = 0;
    ProblemKind kind = ProblemKind::gaussian;
    double sigma_max = 10.0; // forced extremes for illcond
    double sigma_min = 0.1;
};

/// W of size d x m with entries N(0, 1/m), y of size m with entries N(0, 1).
LeastSquaresObjective gen_gaussian_lsq(const RandomProblemSpec& spec);

/// Gaussian seed matrix with the largest/smallest singular values replaced by
/// sigma_max/sigma_min (the other singular values are untouched, so values
/// below sigma_min in the seed matrix survive and the conditioning is at
/// least (sigma_max/sigma_min)^2 for the Gram matrix). Requires d <= m.
LeastSquaresObjective gen_illcond(const RandomProblemSpec& spec);

enum class DatasetFormat { csv, libsvm };

/// Dense regression dataset with z-score normalization applied to features
/// and target. Constant columns are flagged and left unscaled.
struct RegressionDataset {
    Matrix features; // examples x features, normalized
    Vector targets;  // normalized
    Vector feature_mean, feature_std;
    double target_mean = 0.0, target_std = 1.0;
    std::vector<bool> constant_column;
    std::vector<std::string> warnings;

    /// Undo the z-score on a copy of the stored features/targets.
    Matrix denormalized_features() const;
    Vector denormalized_targets() const;
};

/// Parse a CSV (optional header; target_column < 0 selects the last column)
/// or libsvm ("label idx:val ...", 1-based indices) file and normalize it.
/// Throws ParseError with a line number, or EmptyDataset.
RegressionDataset load_regression(const std::string& path, DatasetFormat format,
                                  int target_column = -1);

struct FunctionApproxTask {
    TestFunction target = TestFunction::h1;
    std::size_t train_count = 100;
    std::size_t test_count = 10000;
    std::uint64_t seed = 0;
};

struct FunctionApproxData {
    std::vector<double> train_inputs, train_targets;
    std::vector<double> test_inputs, test_targets;
};

/// Train inputs uniform on (-1,1) excluding a 1e-12 ball around zero (the h3
/// discontinuity sits there); the test sample draws from a forked stream.
FunctionApproxData gen_function_approx(const FunctionApproxTask& task);

/// Network parameter initialization: a1, a2 uniform on [-1,1] and a3 uniform
/// on [-1,1], all from per-block forked streams.
Vector init_net_parameters(std::size_t width, Rng& rng);

} // namespace cfgd

#endif
