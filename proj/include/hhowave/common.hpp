// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hhowave {

using Point2 = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr std::size_t invalid_index = std::numeric_limits<std::size_t>::max();

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

/// Raised by time loops when a state entry becomes non-finite.
class InstabilityError : public Error {
public:
    InstabilityError(const std::string& what, std::size_t step)
        : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path; `parallel` distributes independent cells/faces over OpenMP threads.
/// Both write disjoint outputs per index, so results are bit-identical.
enum class Exec { serial, parallel };

template <typename Body>
void parallel_for(std::size_t n, Exec exec, Body&& body)
{
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < count; ++i)
        body(static_cast<std::size_t>(i));
}

} // namespace hhowave
