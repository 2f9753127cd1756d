#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dyspec
{
//! Largest fiber or torus dimension handled without heap allocation.
inline constexpr int kMaxDim = 4;

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

//! Base class for all library errors.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Invalid arguments: dimension mismatch, non-unit direction, bad counts.
class InputError : public Error
{
  public:
    using Error::Error;
};

//! Non-finite state encountered during time integration.
class IntegrationError : public Error
{
  public:
    IntegrationError(std::string const& what, double last_good_time)
        : Error(what), last_good_time_(last_good_time)
    {
    }

    double last_good_time() const noexcept { return last_good_time_; }

  private:
    double last_good_time_;
};

//! Degenerate triangular factor during QR re-orthonormalization.
class ConditioningError : public Error
{
  public:
    using Error::Error;
};

//! Requested operation has no closed form for the given object.
class UnsupportedError : public Error
{
  public:
    using Error::Error;
};

}  // namespace dyspec
