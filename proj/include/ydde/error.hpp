#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ydde {

/// Violated precondition: off-grid window, bad exponent, inconsistent meshes.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// fBm covariance could not be factored even after jitter.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Picard iteration did not reach tolerance. Carries the residual trace of
/// the failing window so the caller can see whether it stalled or diverged.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double window_start, double window_end,
                     std::vector<double> residuals)
        : std::runtime_error(what),
          window_start_(window_start),
          window_end_(window_end),
          residuals_(std::move(residuals)) {}

    double window_start() const noexcept { return window_start_; }
    double window_end() const noexcept { return window_end_; }
    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    double window_start_;
    double window_end_;
    std::vector<double> residuals_;
};

}  // namespace ydde
