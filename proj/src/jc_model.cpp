#include "spinrecon/jc_model.hpp"

#include "spinrecon/errors.hpp"

#include <cmath>
#include <string>

namespace spinrecon::jc {

double JCParams::poisson_tail() const { return spinrecon::poisson_tail(mean_photons(), n_max); }

JCParams JCParams::make(double gamma, double omega, Complex alpha, std::optional<int> n_max) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be > 0");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be >= 0");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw InvalidArgument("alpha must be finite");
  }
  JCParams p{gamma, omega, alpha, n_max.value_or(kDefaultNmax)};
  if (p.n_max < 1) throw InvalidArgument("n_max must be >= 1");
  if (n_max) {
    const double tail = p.poisson_tail();
    if (tail >= kMaxPoissonTail) {
      throw TruncationError("Poisson mass beyond n_max = " + std::to_string(p.n_max) + " is " +
                                std::to_string(tail) + " for |alpha|^2 = " +
                                std::to_string(p.mean_photons()) + " (limit 1e-8)",
                            tail);
    }
  } else {
    while (p.poisson_tail() >= kMaxPoissonTail) ++p.n_max;
  }
  return p;
}

}  // namespace spinrecon::jc
