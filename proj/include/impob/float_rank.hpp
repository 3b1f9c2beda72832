#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "impob/matrix.hpp"
#include "impob/rational.hpp"

namespace impob {

// Double-precision SVD rank, used only to quantify how often floating point
// agrees with the exact path. Never feeds a verdict.
inline std::size_t float_rank_with_tolerance(const RationalMatrix& m, double tol) {
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    Eigen::MatrixXd a(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > tol)
            ++r;
    return r;
}

// Default tolerance: max(rows, cols) * machine epsilon * largest singular
// value, the usual numerical-rank threshold.
inline std::size_t float_rank(const RationalMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    Eigen::MatrixXd a(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        return 0;
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon() * sv(0);
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > tol)
            ++r;
    return r;
}

} // namespace impob
