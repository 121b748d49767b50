#pragma once

#include <stdexcept>
#include <string>

namespace selgrade {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad shapes, index overflow, dimension caps
struct dimension_error : error {
    using error::error;
};

// pivot collapse in linear solves; signals nonhyperbolicity at a control value
struct singular_matrix_error : error {
    using error::error;
};

// control value outside the admissible box
struct control_range_error : error {
    using error::error;
};

struct zero_vector_error : error {
    using error::error;
};

// point on or too close to the equator, no finite preimage
struct at_infinity_error : error {
    using error::error;
};

// system lacks the split structure an operation requires
struct not_split_error : error {
    using error::error;
};

// coefficient matrix has an eigenvalue too close to the imaginary axis
struct nonhyperbolic_error : error {
    using error::error;
};

// component without a directed cycle has no mean-cycle spectrum
struct no_cycle_error : error {
    using error::error;
};

struct config_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

struct numerical_error : error {
    using error::error;
};

}  // namespace selgrade
