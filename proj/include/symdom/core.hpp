#pragma once

#include <cstddef>
#include <vector>

#include "symdom/errors.hpp"

namespace symdom {

using Vector = std::vector<double>;

/// Largest supported ambient dimension.
inline constexpr std::size_t kMaxDimension = 16;

inline void check_dimension(std::size_t dim, const char* where) {
    if (dim == 0 || dim > kMaxDimension)
        throw ParameterError(std::string(where) + ": dimension must be in [1, 16], got " +
                             std::to_string(dim));
}

}  // namespace symdom
