#include "sdecoef/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdecoef {

namespace {

void check_model(const DyadicModel& model) {
  if (model.level < 0 || model.level > 30) {
    throw std::invalid_argument("DyadicModel: level out of range [0, 30]");
  }
  if (model.degree < 0 || model.degree > kMaxDegree) {
    throw std::invalid_argument("DyadicModel: degree out of range [0, " +
                                std::to_string(kMaxDegree) + "]");
  }
}

}  // namespace

Window make_window(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument(
        "make_window: requires finite bounds with lo < hi");
  }
  return Window{lo, hi};
}

namespace detail {

void legendre_all(int max_degree, double u, double* values) {
  values[0] = 1.0;
  if (max_degree == 0) return;
  values[1] = u;
  for (int k = 2; k <= max_degree; ++k) {
    values[k] =
        ((2 * k - 1) * u * values[k - 1] - (k - 1) * values[k - 2]) / k;
  }
}

int basis_row(const DyadicModel& model, double u, double* row) {
  if (!(u >= 0.0 && u <= 1.0)) return -1;
  // Multiplying by 2^level is exact in binary floating point, so the bin
  // index never straddles a knot; u = 1 folds into the last bin.
  const double scaled = std::ldexp(u, model.level);
  int bin = static_cast<int>(scaled);
  if (bin >= model.bins()) bin = model.bins() - 1;
  const double local = scaled - bin;  // exact; lies in [0, 1]
  double legendre[kMaxDegree + 1];
  legendre_all(model.degree, 2.0 * local - 1.0, legendre);
  for (int deg = 0; deg <= model.degree; ++deg) {
    // Normalization 2^{level/2} * sqrt(2 deg + 1), taken as one square root
    // of an exactly representable integer to round only once.
    row[deg] =
        std::sqrt(std::ldexp(2.0 * deg + 1.0, model.level)) * legendre[deg];
  }
  return bin;
}

}  // namespace detail

double legendre_eval(int degree, double u) {
  if (degree < 0 || degree > kMaxDegree) {
    throw std::invalid_argument("legendre_eval: degree out of range");
  }
  if (!(u >= -1.0 && u <= 1.0)) {
    throw std::invalid_argument("legendre_eval: argument outside [-1, 1]");
  }
  double values[kMaxDegree + 1];
  detail::legendre_all(degree, u, values);
  return values[degree];
}

double phi_eval(const DyadicModel& model, int bin, int degree, double u) {
  check_model(model);
  if (bin < 1 || bin > model.bins()) {
    throw std::invalid_argument("phi_eval: bin index out of range");
  }
  if (degree < 0 || degree > model.degree) {
    throw std::invalid_argument("phi_eval: degree out of range for model");
  }
  double row[kMaxDegree + 1];
  const int hit = detail::basis_row(model, u, row);
  if (hit != bin - 1) return 0.0;
  return row[degree];
}

double norm_connection_bound(const DyadicModel& model) {
  check_model(model);
  return static_cast<double>(model.dimension()) * (model.degree + 1);
}

PiecewisePolyFn::PiecewisePolyFn()
    : model_{}, coeffs_(1, 0.0), window_{0.0, 1.0} {}

PiecewisePolyFn::PiecewisePolyFn(const DyadicModel& model,
                                 std::vector<double> coeffs,
                                 const Window& window)
    : model_(model), coeffs_(std::move(coeffs)), window_(window) {
  check_model(model_);
  if (coeffs_.size() != static_cast<std::size_t>(model_.dimension())) {
    throw std::invalid_argument(
        "PiecewisePolyFn: coefficient count must equal model dimension");
  }
  if (!std::isfinite(window_.lo) || !std::isfinite(window_.hi) ||
      !(window_.lo < window_.hi)) {
    throw std::invalid_argument("PiecewisePolyFn: degenerate window");
  }
}

double PiecewisePolyFn::evaluate(double x) const {
  if (!window_.contains(x)) return 0.0;
  const double u = window_.to_unit(x);
  double row[kMaxDegree + 1];
  const int bin = detail::basis_row(model_, u, row);
  if (bin < 0) return 0.0;
  const double* c = coeffs_.data() +
                    static_cast<std::size_t>(bin) * (model_.degree + 1);
  double sum = 0.0;
  for (int deg = 0; deg <= model_.degree; ++deg) {
    sum += c[deg] * row[deg];
  }
  return sum;
}

double PiecewisePolyFn::coeff(int bin, int degree) const {
  if (bin < 1 || bin > model_.bins() || degree < 0 ||
      degree > model_.degree) {
    throw std::invalid_argument("PiecewisePolyFn::coeff: index out of range");
  }
  return coeffs_[static_cast<std::size_t>(bin - 1) * (model_.degree + 1) +
                 degree];
}

}  // namespace sdecoef
