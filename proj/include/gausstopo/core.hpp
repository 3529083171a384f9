// Copyright 2026 The gausstopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAUSSTOPO_CORE_HPP
#define GAUSSTOPO_CORE_HPP

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace gausstopo {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Errors are split into two families so callers (the CLI in particular) can
/// map them onto distinct exit codes: bad input versus failed numerics.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
   public:
    using Error::Error;
};

class NumericalError : public Error {
   public:
    using Error::Error;
};

class DomainError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

class UnsupportedStateError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

class GeometryError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

class IllConditionedError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class SingularPivotError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class SingularTransformError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class FitFailedError : public NumericalError {
   public:
    FitFailedError(const std::string &what, std::vector<double> trace)
        : NumericalError(what), residual_trace(std::move(trace)) {}
    std::vector<double> residual_trace;
};

class DiagnosticError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// Set of mode indices, kept sorted and duplicate free.
using Region = std::vector<int>;

inline Region make_region(std::vector<int> modes, int n_modes) {
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    if (modes.empty()) {
        throw DomainError("region must not be empty");
    }
    if (modes.front() < 0 || modes.back() >= n_modes) {
        throw DomainError(fmt::format("region index out of range [0, {})", n_modes));
    }
    return modes;
}

inline Region complement(const Region &region, int n_modes) {
    std::vector<char> in(n_modes, 0);
    for (int i : region) {
        in[i] = 1;
    }
    Region out;
    out.reserve(n_modes - region.size());
    for (int i = 0; i < n_modes; ++i) {
        if (!in[i]) {
            out.push_back(i);
        }
    }
    return out;
}

inline Region region_union(const Region &a, const Region &b) {
    Region out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline Region region_difference(const Region &a, const Region &b) {
    Region out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// Symplectic form for the ordering (q_1..q_N, p_1..p_N).
inline Mat symplectic_form(int n) {
    Mat omega = Mat::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n) = Mat::Identity(n, n);
    omega.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return omega;
}

inline Mat select(const Mat &m, const std::vector<int> &rows, const std::vector<int> &cols) {
    Mat out(rows.size(), cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
        for (size_t i = 0; i < rows.size(); ++i) {
            out(i, j) = m(rows[i], cols[j]);
        }
    }
    return out;
}

inline bool is_symmetric(const Mat &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return m.rows() == 0 || (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace gausstopo

#endif
