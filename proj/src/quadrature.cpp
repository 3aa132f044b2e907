#include "finslerlab/quadrature.hpp"

#include <cmath>

namespace finslerlab {

namespace {

// QUADPACK qk15 abscissae/weights; odd-indexed points carry the 7-point
// Gauss rule.
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct PanelResult {
  Jet kronrod;
  double err = 0.0;
};

double jet_abs_max(const Jet& a) {
  double m = std::abs(a.value());
  for (int i = 0; i < a.nvars(); ++i) {
    m = std::max(m, std::abs(a.grad(i)));
    if (a.order() >= 2)
      for (int j = 0; j < a.nvars(); ++j) m = std::max(m, std::abs(a.hess(i, j)));
  }
  return m;
}

PanelResult panel(const std::function<Jet(double)>& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  Jet fc = f(c);
  Jet resk = kWgk[7] * fc;
  Jet resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    Jet fp = f(c + h * kXgk[j]);
    Jet fm = f(c - h * kXgk[j]);
    Jet pair = fp + fm;
    resk += kWgk[j] * pair;
    if (j % 2 == 1) resg += kWg[j / 2] * pair;
  }
  PanelResult out;
  out.kronrod = h * resk;
  out.err = jet_abs_max(h * (resk - resg));
  return out;
}

Jet adaptive(const std::function<Jet(double)>& f, double lo, double hi, double tol, int depth,
             int max_depth) {
  PanelResult p = panel(f, lo, hi);
  if (p.err <= tol || hi - lo < 1e-14) return p.kronrod;
  if (depth >= max_depth) throw QuadratureFailure("adaptive quadrature exceeded max depth");
  const double mid = 0.5 * (lo + hi);
  return adaptive(f, lo, mid, tol / 2, depth + 1, max_depth) +
         adaptive(f, mid, hi, tol / 2, depth + 1, max_depth);
}

}  // namespace

Jet integrate_jet(const std::function<Jet(double)>& f, double lo, double hi, double abs_tol,
                  int max_depth) {
  if (lo == hi) return Jet(0.0);
  return adaptive(f, lo, hi, abs_tol, 0, max_depth);
}

Jet compose_scalar(const std::function<Jet(const Jet&)>& h, const Jet& w) {
  Jet inner = h(Jet::variable(w.value(), 1, 0, 3));
  return compose(w, inner.value(), inner.grad(0), inner.hess(0, 0), inner.third(0, 0, 0));
}

Jet compose_scalar_derivative(const std::function<Jet(const Jet&)>& h, const Jet& w) {
  if (!w.is_constant() && w.order() > 2)
    throw Error("compose_scalar_derivative needs jets of order <= 2");
  Jet inner = h(Jet::variable(w.value(), 1, 0, 3));
  return compose(w, inner.grad(0), inner.hess(0, 0), inner.third(0, 0, 0), 0.0);
}

}  // namespace finslerlab
