#pragma once

#include <functional>

#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"

namespace finslerlab {

// Adaptive Gauss-Kronrod (G7, K15) quadrature of a jet-valued integrand over
// [lo, hi]. The error estimate is the coefficient-wise max of |K15 - G7|;
// intervals are bisected until the estimate is below abs_tol scaled by the
// interval fraction. Throws QuadratureFailure past max_depth.
Jet integrate_jet(const std::function<Jet(double)>& f, double lo, double hi, double abs_tol,
                  int max_depth = 30);

// Composition helpers for type-erased scalar functions h: Jet -> Jet.
// compose_scalar(h, w) is h(w); compose_scalar_derivative(h, w) is h'(w),
// which needs h''' of the inner function and therefore requires
// w.order() <= 2.
Jet compose_scalar(const std::function<Jet(const Jet&)>& h, const Jet& w);
Jet compose_scalar_derivative(const std::function<Jet(const Jet&)>& h, const Jet& w);

}  // namespace finslerlab
