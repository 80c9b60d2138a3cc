#pragma once

#include "dforms/solver/advected_system.hpp"

#include <functional>
#include <string>

namespace dforms {

enum class Scheme { Euler, Midpoint, RK4 };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

using Tendency = std::function<SystemState(const SystemState&)>;

/// One explicit step of the chosen scheme.
SystemState step(const Tendency& f, const SystemState& state, double dt, Scheme scheme);

/// Time stepper with a step counter; throws BlowUpError when a step produces
/// nonfinite values.
class Integrator {
 public:
  Integrator(Tendency f, Scheme scheme) : f_(std::move(f)), scheme_(scheme) {}

  void advance(SystemState& state, double dt);
  long steps() const { return steps_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  Scheme scheme() const { return scheme_; }

 private:
  Tendency f_;
  Scheme scheme_;
  long steps_ = 0;
  double time_ = 0.0;
};

/// Advisory step bound for the MHD system:
///   0.4 h / (max|u| + max sqrt(c_s^2 + v_A^2)), further limited by the
/// diffusion numbers of the closure.
double cfl_estimate(const AdvectedSystem& system, const SystemState& state);

}  // namespace dforms
