#include "cfgd/data.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cfgd/errors.hpp"

namespace cfgd {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::fork(std::uint64_t tag) const { return Rng(splitmix64(seed_ ^ splitmix64(tag + 1))); }

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

LeastSquaresObjective gen_gaussian_lsq(const RandomProblemSpec& spec) {
    if (spec.d < 1 || spec.m < 1) throw DomainError("gen_gaussian_lsq: d and m must be positive");
    Rng rng(spec.seed);
    Rng w_stream = rng.fork(1);
    Rng y_stream = rng.fork(2);

    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));
    Matrix W(spec.d, spec.m);
    for (std::size_t i = 0; i < spec.d; ++i)
        for (std::size_t j = 0; j < spec.m; ++j) W(i, j) = scale * w_stream.normal();
    Vector y(spec.m);
    for (std::size_t j = 0; j < spec.m; ++j) y[j] = y_stream.normal();
    return LeastSquaresObjective(std::move(W), std::move(y));
}

LeastSquaresObjective gen_illcond(const RandomProblemSpec& spec) {
    if (spec.d > spec.m) throw DomainError("gen_illcond: requires d <= m");
    LeastSquaresObjective seed_problem = gen_gaussian_lsq(spec);
    const Matrix& W0 = seed_problem.design();

    // Thin SVD through the symmetric eigendecomposition of W0 W0'.
    const SymmetricEigen eig = sym_eigen(gram(W0)); // ascending
    const std::size_t d = spec.d;
    Vector sigma(d);
    for (std::size_t i = 0; i < d; ++i) sigma[i] = std::sqrt(std::max(eig.values[i], 0.0));

    // v_i = W0' u_i / sigma_i, columns of the m x d factor
    Matrix V(spec.m, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (!(sigma[i] > 0.0)) throw NoConvergence("gen_illcond: seed matrix is rank deficient");
        for (std::size_t r = 0; r < spec.m; ++r) {
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) acc += W0(k, r) * eig.vectors(k, i);
            V(r, i) = acc / sigma[i];
        }
    }

    // Replace only the extremes; middle singular values stay.
    sigma[0] = spec.sigma_min;
    sigma[d - 1] = spec.sigma_max;

    Matrix W(d, spec.m);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t cidx = 0; cidx < spec.m; ++cidx) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                acc += eig.vectors(r, i) * sigma[i] * V(cidx, i);
            W(r, cidx) = acc;
        }

    return LeastSquaresObjective(std::move(W), Vector(seed_problem.targets()));
}

namespace {

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        return pos == tok.size();
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

struct RawRows {
    std::vector<std::vector<double>> features;
    std::vector<double> targets;
};

RawRows read_csv(std::istream& is, int target_column) {
    RawRows raw;
    std::string line;
    std::size_t lineno = 0;
    bool header_checked = false;
    std::size_t width = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> toks = split_csv_line(line);
        if (!header_checked) {
            header_checked = true;
            double probe;
            if (!parse_double(toks[0], probe)) continue; // header row
        }
        std::vector<double> row(toks.size());
        for (std::size_t i = 0; i < toks.size(); ++i)
            if (!parse_double(toks[i], row[i]))
                throw ParseError("csv: cannot parse field '" + toks[i] + "'", lineno);
        if (row.size() < 2) throw ParseError("csv: need at least two columns", lineno);
        if (width == 0)
            width = row.size();
        else if (row.size() != width)
            throw ParseError("csv: ragged row", lineno);

        const std::size_t tcol =
            target_column < 0 ? width - 1 : static_cast<std::size_t>(target_column);
        if (tcol >= width) throw ParseError("csv: target column out of range", lineno);
        raw.targets.push_back(row[tcol]);
        std::vector<double> feats;
        feats.reserve(width - 1);
        for (std::size_t i = 0; i < width; ++i)
            if (i != tcol) feats.push_back(row[i]);
        raw.features.push_back(std::move(feats));
    }
    return raw;
}

RawRows read_libsvm(std::istream& is) {
    RawRows raw;
    std::string line;
    std::size_t lineno = 0;
    std::size_t max_index = 0;
    std::vector<std::vector<std::pair<std::size_t, double>>> sparse;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        double label;
        if (!parse_double(tok, label))
            throw ParseError("libsvm: cannot parse label '" + tok + "'", lineno);
        std::vector<std::pair<std::size_t, double>> row;
        while (ls >> tok) {
            const std::size_t colon = tok.find(':');
            if (colon == std::string::npos)
                throw ParseError("libsvm: expected index:value, got '" + tok + "'", lineno);
            double value;
            long index;
            try {
                index = std::stol(tok.substr(0, colon));
            } catch (...) {
                throw ParseError("libsvm: bad feature index in '" + tok + "'", lineno);
            }
            if (index < 1) throw ParseError("libsvm: indices are 1-based", lineno);
            if (!parse_double(tok.substr(colon + 1), value))
                throw ParseError("libsvm: bad feature value in '" + tok + "'", lineno);
            row.emplace_back(static_cast<std::size_t>(index), value);
            max_index = std::max(max_index, static_cast<std::size_t>(index));
        }
        raw.targets.push_back(label);
        sparse.push_back(std::move(row));
    }
    for (const auto& row : sparse) {
        std::vector<double> dense(max_index, 0.0);
        for (const auto& [idx, val] : row) dense[idx - 1] = val;
        raw.features.push_back(std::move(dense));
    }
    return raw;
}

} // namespace

RegressionDataset load_regression(const std::string& path, DatasetFormat format,
                                  int target_column) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    RawRows raw = format == DatasetFormat::csv ? read_csv(in, target_column) : read_libsvm(in);
    if (raw.features.empty()) throw EmptyDataset("no examples in '" + path + "'");

    const std::size_t rows = raw.features.size();
    const std::size_t cols = raw.features.front().size();
    for (std::size_t r = 0; r < rows; ++r)
        if (raw.features[r].size() != cols)
            throw ParseError("inconsistent feature width", r + 1);

    RegressionDataset ds;
    ds.features = Matrix(rows, cols);
    ds.targets = Vector(rows);
    ds.feature_mean = Vector(cols);
    ds.feature_std = Vector(cols, 1.0);
    ds.constant_column.assign(cols, false);

    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) ds.features(r, c) = raw.features[r][c];
        ds.targets[r] = raw.targets[r];
    }

    const double nr = static_cast<double>(rows);
    for (std::size_t c = 0; c < cols; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < rows; ++r) mean += ds.features(r, c);
        mean /= nr;
        double var = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double dv = ds.features(r, c) - mean;
            var += dv * dv;
        }
        const double sd = std::sqrt(var / nr);
        if (sd < 1e-15) {
            ds.constant_column[c] = true;
            ds.warnings.push_back("column " + std::to_string(c) + " is constant; left unscaled");
            continue;
        }
        ds.feature_mean[c] = mean;
        ds.feature_std[c] = sd;
        for (std::size_t r = 0; r < rows; ++r) ds.features(r, c) = (ds.features(r, c) - mean) / sd;
    }

    double tmean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) tmean += ds.targets[r];
    tmean /= nr;
    double tvar = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double dv = ds.targets[r] - tmean;
        tvar += dv * dv;
    }
    const double tsd = std::sqrt(tvar / nr);
    if (tsd < 1e-15) {
        ds.warnings.push_back("target is constant; left unscaled");
    } else {
        ds.target_mean = tmean;
        ds.target_std = tsd;
        for (std::size_t r = 0; r < rows; ++r) ds.targets[r] = (ds.targets[r] - tmean) / tsd;
    }
    return ds;
}

Matrix RegressionDataset::denormalized_features() const {
    Matrix out = features;
    for (std::size_t c = 0; c < out.cols(); ++c) {
        if (constant_column[c]) continue;
        for (std::size_t r = 0; r < out.rows(); ++r)
            out(r, c) = out(r, c) * feature_std[c] + feature_mean[c];
    }
    return out;
}

Vector RegressionDataset::denormalized_targets() const {
    Vector out = targets;
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = out[r] * target_std + target_mean;
    return out;
}

FunctionApproxData gen_function_approx(const FunctionApproxTask& task) {
    Rng rng(task.seed);
    Rng train_stream = rng.fork(11);
    Rng test_stream = rng.fork(12);

    auto draw = [](Rng& stream) {
        // (-1,1) excluding a tiny ball around the h3 step at zero
        for (;;) {
            const double z = stream.uniform(-1.0, 1.0);
            if (std::abs(z) > 1e-12) return z;
        }
    };

    FunctionApproxData data;
    data.train_inputs.reserve(task.train_count);
    for (std::size_t i = 0; i < task.train_count; ++i) data.train_inputs.push_back(draw(train_stream));
    data.test_inputs.reserve(task.test_count);
    for (std::size_t i = 0; i < task.test_count; ++i) data.test_inputs.push_back(draw(test_stream));
    for (double z : data.train_inputs) data.train_targets.push_back(scalar_test(task.target, z));
    for (double z : data.test_inputs) data.test_targets.push_back(scalar_test(task.target, z));
    return data;
}

Vector init_net_parameters(std::size_t width, Rng& rng) {
    Rng a1 = rng.fork(21), a2 = rng.fork(22), a3 = rng.fork(23);
    Vector x(3 * width);
    for (std::size_t j = 0; j < width; ++j) x[j] = a1.uniform(-1.0, 1.0);
    for (std::size_t j = 0; j < width; ++j) x[width + j] = a2.uniform(-1.0, 1.0);
    for (std::size_t j = 0; j < width; ++j) x[2 * width + j] = a3.uniform(-1.0, 1.0);
    return x;
}

} // namespace cfgd
