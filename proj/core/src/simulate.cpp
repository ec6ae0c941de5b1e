#include <netinfer/simulate.hpp>

#include <netinfer/error.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace netinfer {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

// Support positions and signed magnitudes; A(row, col) with row = target.
Matrix draw_coupling(const SimConfig& cfg, Rng& rng) {
    const std::size_t p = cfg.p;
    const std::size_t cells = p * p;
    const std::size_t edges = true_edge_count(p, cfg.pi);

    std::vector<std::size_t> idx(cells);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t k = 0; k < edges; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, cells - 1);
        std::swap(idx[k], idx[pick(rng)]);
    }

    Matrix A = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    std::uniform_real_distribution<double> magnitude(cfg.coeff_min, cfg.coeff_max);
    std::bernoulli_distribution negative(0.5);
    for (std::size_t k = 0; k < edges; ++k) {
        const double v = magnitude(rng);
        const auto row = static_cast<Eigen::Index>(idx[k] / p);
        const auto col = static_cast<Eigen::Index>(idx[k] % p);
        A(row, col) = negative(rng) ? -v : v;
    }
    return A;
}

Network truth_from_coupling(const Matrix& A) {
    const auto p = static_cast<std::size_t>(A.rows());
    Network net(p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < p; ++i)
            if (A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) != 0.0) net.set_edge(i, j);
    return net;
}

double stabilize_in_place(Matrix& A, double target) {
    if (A.isZero(0.0)) return 1.0;
    const double radius = Eigen::EigenSolver<Matrix>(A, false).eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius > target)) return 1.0;
    const double scale = target / radius;
    A *= scale;
    return scale;
}

void check_row(const Matrix& X, Eigen::Index t) {
    if (!X.row(t).allFinite())
        throw ExplosiveSeries("simulated series became non-finite at timepoint " + std::to_string(t + 1),
                              static_cast<std::size_t>(t + 1));
}

SimOutput simulate_transformed(const SimConfig& cfg, SimMode expected) {
    cfg.validate();
    if (cfg.mode != expected) throw InvalidInput("simulate: config mode does not match the requested simulator");
    Rng rng(splitmix64(cfg.seed));

    SimOutput out;
    out.A = draw_coupling(cfg, rng);
    out.truth = truth_from_coupling(out.A);

    const int first = expected == SimMode::Nonlinear ? 1 : 4;
    const int count = expected == SimMode::Nonlinear ? 3 : 4;
    std::uniform_int_distribution<int> tag(first, first + count - 1);
    out.transforms.reserve(cfg.p);
    for (std::size_t j = 0; j < cfg.p; ++j) out.transforms.push_back(static_cast<Transform>(tag(rng)));

    std::uniform_real_distribution<double> sigma(cfg.sigma_min, cfg.sigma_max);
    out.sigma = sigma(rng);
    if (cfg.stabilize_enabled()) out.stabilize_scale = stabilize_in_place(out.A, cfg.spectral_target);

    out.series = TimeSeries(rollout_transformed(out.A, out.transforms, out.sigma, cfg.n, rng));
    return out;
}

} // namespace

Matrix rollout_linear(const Matrix& A, const Vector& B, double sigma, std::size_t n, std::mt19937_64& rng) {
    const Eigen::Index p = A.rows();
    std::normal_distribution<double> noise(0.0, sigma);
    Matrix X(static_cast<Eigen::Index>(n), p);
    for (Eigen::Index j = 0; j < p; ++j) X(0, j) = noise(rng);
    check_row(X, 0);
    for (Eigen::Index t = 1; t < static_cast<Eigen::Index>(n); ++t) {
        const Vector prev = X.row(t - 1).transpose();
        const Vector next = A * prev + B;
        for (Eigen::Index j = 0; j < p; ++j) X(t, j) = next(j) + noise(rng);
        check_row(X, t);
    }
    return X;
}

Matrix rollout_transformed(const Matrix& A, const std::vector<Transform>& transforms, double sigma, std::size_t n,
                           std::mt19937_64& rng) {
    const Eigen::Index p = A.rows();
    if (static_cast<Eigen::Index>(transforms.size()) != p)
        throw InvalidInput("rollout_transformed: one transform per variable required");
    std::normal_distribution<double> noise(0.0, sigma);
    Matrix X(static_cast<Eigen::Index>(n), p);
    for (Eigen::Index j = 0; j < p; ++j) X(0, j) = 2.0 * std::sin(noise(rng));
    check_row(X, 0);
    Vector z(p);
    for (Eigen::Index t = 1; t < static_cast<Eigen::Index>(n); ++t) {
        for (Eigen::Index j = 0; j < p; ++j) z(j) = apply_transform(transforms[static_cast<std::size_t>(j)], X(t - 1, j));
        const Vector next = A * z;
        for (Eigen::Index j = 0; j < p; ++j) X(t, j) = next(j) + noise(rng);
        check_row(X, t);
    }
    return X;
}

std::string_view to_string(SimMode mode) {
    switch (mode) {
    case SimMode::Linear: return "linear";
    case SimMode::Nonlinear: return "nonlinear";
    case SimMode::Mixture: return "mixture";
    }
    return "linear";
}

SimMode parse_sim_mode(std::string_view name) {
    if (name == "linear") return SimMode::Linear;
    if (name == "nonlinear") return SimMode::Nonlinear;
    if (name == "mixture" || name == "mixed") return SimMode::Mixture;
    throw InvalidInput("unknown simulation mode '" + std::string(name) + "'");
}

double apply_transform(Transform f, double x) {
    switch (f) {
    case Transform::F1:
    case Transform::F4:
        return std::sin(x);
    case Transform::F2:
        return std::cos(x);
    case Transform::F3:
    case Transform::F6:
        return std::cbrt(x * x) - std::pow(2.0, std::sin(x));
    case Transform::F5:
        return 0.5 * x;
    case Transform::F7:
        return -0.8 * x;
    }
    return x;
}

std::string_view to_string(Transform f) {
    static constexpr std::string_view names[] = {"f1", "f2", "f3", "f4", "f5", "f6", "f7"};
    return names[static_cast<int>(f) - 1];
}

void SimConfig::validate() const {
    if (p < 2) throw InvalidInput("SimConfig: p must be at least 2");
    if (n < 3) throw InvalidInput("SimConfig: n must be at least 3");
    if (!(pi > 0.0 && pi < 1.0)) throw InvalidInput("SimConfig: pi must lie in (0, 1)");
    if (!(coeff_min > 0.0 && coeff_min <= coeff_max))
        throw InvalidInput("SimConfig: coefficient range must be positive and ordered");
    if (!(sigma_min > 0.0 && sigma_min <= sigma_max))
        throw InvalidInput("SimConfig: sigma range must be positive and ordered");
    if (!(spectral_target > 0.0)) throw InvalidInput("SimConfig: spectral target must be positive");
}

std::size_t true_edge_count(std::size_t p, double pi) {
    const double cells = static_cast<double>(p) * static_cast<double>(p);
    return static_cast<std::size_t>(std::floor(cells * pi + 1e-9));
}

SimOutput simulate_linear(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.mode != SimMode::Linear) throw InvalidInput("simulate_linear: config mode is not linear");
    Rng rng(splitmix64(cfg.seed));

    SimOutput out;
    out.A = draw_coupling(cfg, rng);
    out.truth = truth_from_coupling(out.A);

    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    out.B.resize(static_cast<Eigen::Index>(cfg.p));
    for (Eigen::Index j = 0; j < out.B.size(); ++j) out.B(j) = unit(rng);
    std::uniform_real_distribution<double> sigma(cfg.sigma_min, cfg.sigma_max);
    out.sigma = sigma(rng);
    if (cfg.stabilize_enabled()) out.stabilize_scale = stabilize_in_place(out.A, cfg.spectral_target);

    out.series = TimeSeries(rollout_linear(out.A, out.B, out.sigma, cfg.n, rng));
    return out;
}

SimOutput simulate_nonlinear(const SimConfig& cfg) { return simulate_transformed(cfg, SimMode::Nonlinear); }

SimOutput simulate_mixture(const SimConfig& cfg) { return simulate_transformed(cfg, SimMode::Mixture); }

SimOutput simulate(const SimConfig& cfg) {
    switch (cfg.mode) {
    case SimMode::Linear: return simulate_linear(cfg);
    case SimMode::Nonlinear: return simulate_nonlinear(cfg);
    case SimMode::Mixture: return simulate_mixture(cfg);
    }
    throw InvalidInput("simulate: unknown mode");
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
    return h;
}

} // namespace netinfer
