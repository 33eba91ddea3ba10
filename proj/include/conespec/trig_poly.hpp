#pragma once

#include <vector>

namespace conespec {

// Trigonometric polynomial on the circle of circumference 2*pi*m:
//
//   p(phi) = a(0) + sum_{k>=1} a(k) cos(k phi / m) + b(k) sin(k phi / m)
//
// Products, derivatives and L^2 pairings are computed on the coefficients
// (no sampling), so identities like cos^2 + sin^2 = 1 hold exactly.
class TrigPoly {
 public:
  explicit TrigPoly(int m);
  static TrigPoly constant(int m, double c);
  static TrigPoly cosine(int m, int k, double amp = 1.0);
  static TrigPoly sine(int m, int k, double amp = 1.0);

  int m() const { return m_; }
  int max_freq() const { return static_cast<int>(a_.size()) - 1; }

  double a(int k) const { return k <= max_freq() ? a_[k] : 0.0; }
  double b(int k) const { return (k >= 1 && k <= max_freq()) ? b_[k] : 0.0; }
  void set_a(int k, double v);
  void set_b(int k, double v);

  TrigPoly operator+(const TrigPoly& q) const;
  TrigPoly operator-(const TrigPoly& q) const;
  TrigPoly operator*(const TrigPoly& q) const;
  TrigPoly operator*(double c) const;

  // d/dphi (frequencies k/m).
  TrigPoly derivative() const;

  double eval(double phi) const;

  // Integral over the circle divided by its length 2*pi*m.
  double mean() const { return a_[0]; }

  // Exact integral of p*q over [0, 2*pi*m].
  double inner(const TrigPoly& q) const;

  // Drops trailing coefficients below |eps|.
  void trim(double eps = 0.0);

 private:
  int m_;
  std::vector<double> a_;  // a_[0] = constant term
  std::vector<double> b_;  // b_[0] unused
};

}  // namespace conespec
