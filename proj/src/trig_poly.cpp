#include "conespec/trig_poly.hpp"

#include <cmath>
#include <numbers>

#include "conespec/errors.hpp"

namespace conespec {

TrigPoly::TrigPoly(int m) : m_(m), a_(1, 0.0), b_(1, 0.0) {
  if (m < 1) throw InvalidParameter("TrigPoly: m must be >= 1");
}

TrigPoly TrigPoly::constant(int m, double c) {
  TrigPoly p(m);
  p.a_[0] = c;
  return p;
}

TrigPoly TrigPoly::cosine(int m, int k, double amp) {
  if (k < 0) throw InvalidParameter("TrigPoly::cosine: k must be >= 0");
  TrigPoly p(m);
  p.set_a(k, amp);
  return p;
}

TrigPoly TrigPoly::sine(int m, int k, double amp) {
  if (k < 1) throw InvalidParameter("TrigPoly::sine: k must be >= 1");
  TrigPoly p(m);
  p.set_b(k, amp);
  return p;
}

void TrigPoly::set_a(int k, double v) {
  if (k > max_freq()) {
    a_.resize(k + 1, 0.0);
    b_.resize(k + 1, 0.0);
  }
  a_[k] = v;
}

void TrigPoly::set_b(int k, double v) {
  if (k < 1) throw InvalidParameter("TrigPoly::set_b: k must be >= 1");
  if (k > max_freq()) {
    a_.resize(k + 1, 0.0);
    b_.resize(k + 1, 0.0);
  }
  b_[k] = v;
}

TrigPoly TrigPoly::operator+(const TrigPoly& q) const {
  if (m_ != q.m_) throw InvalidParameter("TrigPoly: mixed circle sizes");
  TrigPoly r(m_);
  int K = std::max(max_freq(), q.max_freq());
  for (int k = 0; k <= K; ++k) r.set_a(k, a(k) + q.a(k));
  for (int k = 1; k <= K; ++k) r.set_b(k, b(k) + q.b(k));
  r.trim();
  return r;
}

TrigPoly TrigPoly::operator-(const TrigPoly& q) const {
  return *this + q * (-1.0);
}

TrigPoly TrigPoly::operator*(double c) const {
  TrigPoly r = *this;
  for (auto& v : r.a_) v *= c;
  for (auto& v : r.b_) v *= c;
  return r;
}

// Product formulas:
//   cos x cos y = (cos(x-y) + cos(x+y))/2
//   sin x sin y = (cos(x-y) - cos(x+y))/2
//   sin x cos y = (sin(x-y) + sin(x+y))/2   (sin(-u) = -sin u)
TrigPoly TrigPoly::operator*(const TrigPoly& q) const {
  if (m_ != q.m_) throw InvalidParameter("TrigPoly: mixed circle sizes");
  TrigPoly r(m_);
  int K = max_freq() + q.max_freq();
  r.set_a(K, 0.0);  // reserve
  auto add_a = [&](int k, double v) {
    if (k < 0) k = -k;
    r.a_[k] += v;
  };
  auto add_b = [&](int k, double v) {
    if (k == 0) return;  // sin(0) = 0
    if (k < 0) {
      k = -k;
      v = -v;
    }
    r.b_[k] += v;
  };
  for (int i = 0; i <= max_freq(); ++i) {
    for (int j = 0; j <= q.max_freq(); ++j) {
      double ai = a(i), bi = b(i), aj = q.a(j), bj = q.b(j);
      if (ai != 0.0 && aj != 0.0) {
        add_a(i - j, 0.5 * ai * aj);
        add_a(i + j, 0.5 * ai * aj);
      }
      if (bi != 0.0 && bj != 0.0) {
        add_a(i - j, 0.5 * bi * bj);
        add_a(i + j, -0.5 * bi * bj);
      }
      if (bi != 0.0 && aj != 0.0) {
        add_b(i - j, 0.5 * bi * aj);
        add_b(i + j, 0.5 * bi * aj);
      }
      if (ai != 0.0 && bj != 0.0) {
        add_b(j - i, 0.5 * ai * bj);
        add_b(j + i, 0.5 * ai * bj);
      }
    }
  }
  r.trim();
  return r;
}

TrigPoly TrigPoly::derivative() const {
  TrigPoly r(m_);
  int K = max_freq();
  for (int k = 1; k <= K; ++k) {
    double nu = static_cast<double>(k) / m_;
    r.set_a(k, nu * b(k));
    r.set_b(k, -nu * a(k));
  }
  r.trim();
  return r;
}

double TrigPoly::eval(double phi) const {
  double s = a_[0];
  for (int k = 1; k <= max_freq(); ++k) {
    double arg = k * phi / m_;
    s += a_[k] * std::cos(arg) + b_[k] * std::sin(arg);
  }
  return s;
}

double TrigPoly::inner(const TrigPoly& q) const {
  // Orthogonality over length 2*pi*m: <1,1> = 2*pi*m, <cos_k,cos_k> = pi*m.
  double L = 2.0 * std::numbers::pi * m_;
  double s = a(0) * q.a(0) * L;
  int K = std::min(max_freq(), q.max_freq());
  for (int k = 1; k <= K; ++k) s += 0.5 * L * (a(k) * q.a(k) + b(k) * q.b(k));
  return s;
}

void TrigPoly::trim(double eps) {
  int K = max_freq();
  while (K > 0 && std::abs(a_[K]) <= eps && std::abs(b_[K]) <= eps) --K;
  a_.resize(K + 1);
  b_.resize(K + 1);
}

}  // namespace conespec
