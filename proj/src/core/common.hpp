#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jumpwave {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown on precondition violations (bad parameters, dimension mismatches,
// out-of-domain queries). The C API maps these to JW_EINVAL / JW_EDOMAIN.
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when an iterative computation fails (non-finite loss, singular
// system, truncation error above tolerance).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_input(msg);
}

} // namespace jumpwave
