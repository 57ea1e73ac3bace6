#include "softslides/integrators.hpp"

#include <cmath>

namespace softbody {

namespace {

void require_positive_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("integrator timestep must be positive and finite");
  }
}

void require_finite(std::span<const double> s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i])) {
      throw NumericFault(i, "non-finite state entry at index " + std::to_string(i));
    }
  }
}

StateVector evaluate(const DerivFn& f, std::span<const double> s) {
  StateVector out(s.size(), 0.0);
  f(s, out);
  return out;
}

// out = s + scale * k
StateVector offset(std::span<const double> s, double scale, const StateVector& k) {
  StateVector out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + scale * k[i];
  return out;
}

}  // namespace

std::string_view to_string(IntegratorKind kind) {
  switch (kind) {
    case IntegratorKind::ExplicitEuler: return "euler";
    case IntegratorKind::Midpoint: return "midpoint";
    case IntegratorKind::Feynman: return "feynman";
    case IntegratorKind::RK4: return "rk4";
  }
  return "euler";
}

std::optional<IntegratorKind> parse_integrator(std::string_view name) {
  if (name == "euler") return IntegratorKind::ExplicitEuler;
  if (name == "midpoint") return IntegratorKind::Midpoint;
  if (name == "feynman") return IntegratorKind::Feynman;
  if (name == "rk4") return IntegratorKind::RK4;
  return std::nullopt;
}

int evaluations_per_step(IntegratorKind kind) {
  switch (kind) {
    case IntegratorKind::ExplicitEuler: return 1;
    case IntegratorKind::Midpoint: return 2;
    case IntegratorKind::Feynman: return 1;
    case IntegratorKind::RK4: return 4;
  }
  return 1;
}

StateVector euler_step(std::span<const double> state, const DerivFn& f, double h) {
  require_positive_step(h);
  StateVector out = offset(state, h, evaluate(f, state));
  require_finite(out);
  return out;
}

StateVector midpoint_step(std::span<const double> state, const DerivFn& f, double h) {
  require_positive_step(h);
  const StateVector k1 = evaluate(f, state);
  const StateVector mid = offset(state, 0.5 * h, k1);
  StateVector out = offset(state, h, evaluate(f, mid));
  require_finite(out);
  return out;
}

StateVector rk4_step(std::span<const double> state, const DerivFn& f, double h) {
  require_positive_step(h);
  const StateVector k1 = evaluate(f, state);
  const StateVector k2 = evaluate(f, offset(state, 0.5 * h, k1));
  const StateVector k3 = evaluate(f, offset(state, 0.5 * h, k2));
  const StateVector k4 = evaluate(f, offset(state, h, k3));

  StateVector out(state.size());
  const double w = h / 6.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    out[i] = state[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  require_finite(out);
  return out;
}

FeynmanResult feynman_step(std::span<const double> state, const DerivFn& f, double h,
                           const std::optional<HalfStepMemory>& memory, std::size_t dim) {
  require_positive_step(h);
  const std::size_t block = 2 * dim;
  if (dim == 0 || state.size() % block != 0) {
    throw std::invalid_argument("state length is not a multiple of the position/velocity block");
  }
  const std::size_t blocks = state.size() / block;
  const std::size_t slots = blocks * dim;
  if (memory && memory->velocity.size() != slots) {
    throw std::invalid_argument("half-step memory does not match the state layout");
  }

  // Stage state: x(t) with the latest known velocity.
  StateVector eval_state(state.begin(), state.end());
  if (memory) {
    for (std::size_t b = 0; b < blocks; ++b) {
      for (std::size_t d = 0; d < dim; ++d) {
        eval_state[b * block + dim + d] = memory->velocity[b * dim + d];
      }
    }
  }
  const StateVector deriv = evaluate(f, eval_state);

  FeynmanResult result;
  result.state.assign(state.begin(), state.end());
  result.memory.velocity.resize(slots);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t d = 0; d < dim; ++d) {
      const std::size_t x = b * block + d;
      const std::size_t v = x + dim;
      const double accel = deriv[v];
      double v_plus;
      double reported;
      if (memory) {
        const double v_minus = memory->velocity[b * dim + d];
        v_plus = v_minus + h * accel;
        reported = 0.5 * (v_minus + v_plus);
      } else {
        v_plus = state[v] + 0.5 * h * accel;
        reported = state[v];
      }
      result.state[x] = state[x] + h * v_plus;
      result.state[v] = reported;
      result.memory.velocity[b * dim + d] = v_plus;
    }
  }
  // A non-finite half-step velocity always surfaces in the position.
  require_finite(result.state);
  return result;
}

}  // namespace softbody
