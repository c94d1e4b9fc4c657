#ifndef DAO_TYPES_HPP
#define DAO_TYPES_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dao {

template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IndexMatrix = Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using LabelVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Malformed or degenerate input data (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Records do not cover the analysis grid that was asked for (CLI exit code 3).
class IncompleteGridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dao

#endif // DAO_TYPES_HPP
