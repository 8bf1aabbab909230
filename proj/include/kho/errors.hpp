#pragma once

#include <stdexcept>
#include <string>

namespace kho {

/// Base class of all errors thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid grid construction, or an operation mixing incompatible grids.
struct grid_error : error {
    using error::error;
};

/// State mass reached the edge of the grid (position or momentum side).
/// `step` is the Floquet step at which the guard tripped, -1 if not stepwise.
struct grid_overflow_error : error {
    int step = -1;
    explicit grid_overflow_error(const std::string& what, int step_ = -1)
        : error(what), step(step_) {}
};

/// Number-basis truncation is too small for the state it must represent.
struct truncation_error : error {
    using error::error;
};

/// Adaptive refinement exceeded its point budget (exponential stretching).
struct point_budget_error : error {
    using error::error;
};

/// Invalid or inconsistent experiment configuration.
struct config_error : error {
    using error::error;
};

/// Output file could not be written.
struct io_error : error {
    using error::error;
};

}  // namespace kho
