#pragma once

#include <netinfer/types.hpp>

#include <filesystem>
#include <random>
#include <string>

namespace netinfer::test {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix M(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) M(r, c) = z(rng);
    return M;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
    return random_matrix(rng, n, 1).col(0);
}

/// Fresh, empty directory under the test working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::current_path() / "scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace netinfer::test
