#pragma once

#include <vector>

namespace sdecoef {

/// Highest per-bin polynomial degree the basis supports.
inline constexpr int kMaxDegree = 9;

/// A dyadic piecewise-polynomial approximation space on the unit interval:
/// 2^level equal bins, each carrying polynomials up to the given degree.
struct DyadicModel {
  int level = 0;   // dyadic resolution p; 2^p bins
  int degree = 0;  // polynomial degree r on every bin

  int bins() const { return 1 << level; }
  int dimension() const { return bins() * (degree + 1); }

  friend bool operator==(const DyadicModel&, const DyadicModel&) = default;
};

/// Closed interval [lo, hi] on which estimation is carried out. Estimators
/// vanish outside it; inside, x is mapped affinely onto [0, 1].
struct Window {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double to_unit(double x) const { return (x - lo) / (hi - lo); }
  double from_unit(double u) const { return lo + u * (hi - lo); }
};

/// Validates lo < hi and finiteness; throws std::invalid_argument otherwise.
Window make_window(double lo, double hi);

/// Legendre polynomial of the given degree on [-1, 1], by the three-term
/// recurrence. Degree must lie in [0, kMaxDegree].
double legendre_eval(int degree, double u);

/// Orthonormal basis function of the model on the unit interval: the
/// L2([0,1])-normalized Legendre polynomial of the given degree, rescaled to
/// bin `bin` (1-based) and zero elsewhere. Bins are half-open except the
/// last, which includes u = 1.
double phi_eval(const DyadicModel& model, int bin, int degree, double u);

/// sup over [0,1] of the sum of squared basis functions; equals
/// dimension * (degree + 1) for these spaces.
double norm_connection_bound(const DyadicModel& model);

class PiecewisePolyFn;

namespace detail {

/// Fills values[0..max_degree] with Legendre polynomials at u in [-1, 1].
void legendre_all(int max_degree, double u, double* values);

/// Evaluates every basis function alive at unit coordinate u, i.e. writes
/// phi_{j,l}(u) for l = 0..model.degree into row[] where j is the bin
/// holding u. Returns j (0-based), or -1 when u lies outside [0, 1].
int basis_row(const DyadicModel& model, double u, double* row);

}  // namespace detail

/// A function in a dyadic model's span, restricted to a window: coefficients
/// against the orthonormal basis, evaluated after mapping x into [0, 1].
/// Evaluates to zero outside the window.
class PiecewisePolyFn {
 public:
  /// The zero function on [0, 1] in the one-dimensional constant model.
  PiecewisePolyFn();

  /// Coefficients are row-major over (bin, degree); size must equal
  /// model.dimension(). Throws std::invalid_argument on mismatch.
  PiecewisePolyFn(const DyadicModel& model, std::vector<double> coeffs,
                  const Window& window);

  double evaluate(double x) const;
  double operator()(double x) const { return evaluate(x); }

  const DyadicModel& model() const { return model_; }
  const Window& window() const { return window_; }

  /// Coefficient of basis function (bin, degree), bin 1-based.
  double coeff(int bin, int degree) const;
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  DyadicModel model_;
  std::vector<double> coeffs_;
  Window window_;
};

}  // namespace sdecoef
