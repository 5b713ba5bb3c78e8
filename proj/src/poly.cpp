#include "g2lab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace g2lab {

namespace {

void trim_trailing_zeros(std::vector<double>& c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
}

} // namespace

UnivariatePoly::UnivariatePoly(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  trim_trailing_zeros(c_);
  if (degree() > kMaxDegree)
    throw Error(errc::degree_overflow,
                "univariate degree " + std::to_string(degree()) + " exceeds " +
                    std::to_string(kMaxDegree));
  for (double v : c_)
    if (!std::isfinite(v)) throw Error(errc::overflow, "non-finite polynomial coefficient");
}

double UnivariatePoly::eval(double x) const {
  double r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

UnivariatePoly UnivariatePoly::derivative() const {
  if (c_.size() <= 1) return UnivariatePoly();
  std::vector<double> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return UnivariatePoly(std::move(d));
}

double UnivariatePoly::max_abs_coefficient() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

UnivariatePoly UnivariatePoly::operator+(const UnivariatePoly& o) const {
  std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t k = 0; k < c.size(); ++k) c[k] = coefficient(static_cast<int>(k)) + o.coefficient(static_cast<int>(k));
  return UnivariatePoly(std::move(c));
}

UnivariatePoly UnivariatePoly::operator-(const UnivariatePoly& o) const {
  std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t k = 0; k < c.size(); ++k) c[k] = coefficient(static_cast<int>(k)) - o.coefficient(static_cast<int>(k));
  return UnivariatePoly(std::move(c));
}

UnivariatePoly UnivariatePoly::operator*(const UnivariatePoly& o) const {
  if (is_zero() || o.is_zero()) return UnivariatePoly();
  std::vector<double> c(c_.size() + o.c_.size() - 1, 0.0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  return UnivariatePoly(std::move(c));
}

UnivariatePoly UnivariatePoly::operator*(double s) const {
  std::vector<double> c(c_);
  for (double& v : c) v *= s;
  return UnivariatePoly(std::move(c));
}

namespace {

// Bisect a sign change of p on [lo, hi]; p is monotone there.
double bisect_root(const UnivariatePoly& p, double lo, double hi) {
  double flo = p.eval(lo), fhi = p.eval(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = p.eval(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) != (fm < 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

} // namespace

std::vector<double> UnivariatePoly::real_roots(double lo, double hi) const {
  std::vector<double> roots;
  if (degree() <= 0) return roots; // constants (incl. zero poly): no isolated roots reported
  if (degree() == 1) {
    const double r = -c_[0] / c_[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }
  // critical points split [lo, hi] into monotone pieces
  std::vector<double> cuts = derivative().real_roots(lo, hi);
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b <= a) continue;
    const double fa = eval(a), fb = eval(b);
    if (fa == 0.0) {
      if (roots.empty() || std::abs(roots.back() - a) > 1e-12) roots.push_back(a);
    }
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      const double r = bisect_root(*this, a, b);
      if (roots.empty() || std::abs(roots.back() - r) > 1e-12) roots.push_back(r);
    }
    if (fb == 0.0 && k + 2 == cuts.size()) roots.push_back(b);
  }
  return roots;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Cursor {
  std::string s; // whitespace stripped
  size_t i = 0;

  explicit Cursor(std::string_view text) {
    s.reserve(text.size());
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  bool done() const { return i >= s.size(); }
  char peek() const { return done() ? '\0' : s[i]; }
  char take() { return s[i++]; }
};

double parse_number(Cursor& c) {
  size_t start = c.i;
  while (!c.done() && (std::isdigit(static_cast<unsigned char>(c.peek())) || c.peek() == '.')) c.take();
  // exponent part
  if (!c.done() && (c.peek() == 'e' || c.peek() == 'E')) {
    size_t save = c.i;
    c.take();
    if (!c.done() && (c.peek() == '+' || c.peek() == '-')) c.take();
    if (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
      while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) c.take();
    } else {
      c.i = save; // not an exponent after all
    }
  }
  if (c.i == start) throw Error(errc::parse_error, "expected a number at '" + c.s.substr(c.i) + "'");
  try {
    return std::stod(c.s.substr(start, c.i - start));
  } catch (const std::exception&) {
    throw Error(errc::parse_error, "bad numeric literal '" + c.s.substr(start, c.i - start) + "'");
  }
}

int parse_exponent(Cursor& c) {
  if (c.peek() != '^') return 1;
  c.take();
  size_t start = c.i;
  while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) c.take();
  if (c.i == start) throw Error(errc::parse_error, "expected an integer exponent after '^'");
  return std::stoi(c.s.substr(start, c.i - start));
}

// one product of numbers and powers; `var_index` is filled per factor
struct Term {
  double coeff = 1.0;
  std::map<int, int> powers; // var index -> exponent
};

Term parse_term(Cursor& c, bool multivariate, int nvars) {
  Term t;
  bool expect_factor = true;
  while (!c.done() && expect_factor) {
    const char ch = c.peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      t.coeff *= parse_number(c);
    } else if (ch == 'x' && !multivariate) {
      c.take();
      t.powers[0] += parse_exponent(c);
    } else if (ch == 'y' && multivariate) {
      c.take();
      size_t start = c.i;
      while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) c.take();
      if (c.i == start) throw Error(errc::parse_error, "expected a variable index after 'y'");
      const int idx = std::stoi(c.s.substr(start, c.i - start));
      if (idx < 1 || idx > nvars)
        throw Error(errc::parse_error, "variable y" + std::to_string(idx) + " out of range");
      t.powers[idx - 1] += parse_exponent(c);
    } else {
      throw Error(errc::parse_error, std::string("unexpected character '") + ch + "'");
    }
    // factors chain with '*' or by juxtaposition with a variable
    if (!c.done() && c.peek() == '*') {
      c.take();
      expect_factor = true;
    } else if (!c.done() && ((c.peek() == 'x' && !multivariate) || (c.peek() == 'y' && multivariate))) {
      expect_factor = true;
    } else {
      expect_factor = false;
    }
  }
  return t;
}

template <typename AddTerm>
void parse_sum(std::string_view text, bool multivariate, int nvars, AddTerm&& add) {
  Cursor c(text);
  if (c.done()) throw Error(errc::parse_error, "empty polynomial");
  bool first = true;
  while (!c.done()) {
    double sign = 1.0;
    while (!c.done() && (c.peek() == '+' || c.peek() == '-')) {
      if (c.take() == '-') sign = -sign;
      first = false;
    }
    if (c.done()) throw Error(errc::parse_error, "dangling sign");
    (void)first;
    Term t = parse_term(c, multivariate, nvars);
    add(sign * t.coeff, t.powers);
  }
}

} // namespace

UnivariatePoly parse_poly(std::string_view text) {
  std::vector<double> coeffs;
  parse_sum(text, false, 1, [&](double coeff, const std::map<int, int>& powers) {
    int deg = 0;
    auto it = powers.find(0);
    if (it != powers.end()) deg = it->second;
    if (deg > UnivariatePoly::kMaxDegree) throw Error(errc::degree_overflow, "parsed degree too large");
    if (static_cast<int>(coeffs.size()) <= deg) coeffs.resize(deg + 1, 0.0);
    coeffs[deg] += coeff;
  });
  return UnivariatePoly(std::move(coeffs));
}

// ---------------------------------------------------------------------------
// multivariate

MultivariatePoly MultivariatePoly::variable(int nvars, int index) {
  MultivariatePoly p(nvars);
  std::vector<int> e(nvars, 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

MultivariatePoly MultivariatePoly::constant(int nvars, double c) {
  MultivariatePoly p(nvars);
  p.add_term(std::vector<int>(nvars, 0), c);
  return p;
}

void MultivariatePoly::add_term(const std::vector<int>& exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != nvars_)
    throw Error(errc::size_mismatch, "exponent tuple length mismatch");
  const int total = std::accumulate(exponents.begin(), exponents.end(), 0);
  if (total > kMaxTotalDegree)
    throw Error(errc::degree_overflow,
                "multivariate total degree " + std::to_string(total) + " exceeds " +
                    std::to_string(kMaxTotalDegree));
  auto [it, inserted] = terms_.try_emplace(exponents, coeff);
  if (!inserted) it->second += coeff;
  if (it->second == 0.0) terms_.erase(it);
}

double MultivariatePoly::eval(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw Error(errc::size_mismatch, "evaluation point length mismatch");
  double r = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int v = 0; v < nvars_; ++v)
      for (int k = 0; k < e[v]; ++k) t *= point[v];
    r += t;
  }
  return r;
}

double MultivariatePoly::eval_at_origin() const {
  auto it = terms_.find(std::vector<int>(nvars_, 0));
  return it == terms_.end() ? 0.0 : it->second;
}

MultivariatePoly MultivariatePoly::partial(int index) const {
  MultivariatePoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[index] == 0) continue;
    std::vector<int> d = e;
    d[index] -= 1;
    out.add_term(d, c * static_cast<double>(e[index]));
  }
  return out;
}

UnivariatePoly MultivariatePoly::compose(const std::vector<UnivariatePoly>& args) const {
  if (static_cast<int>(args.size()) != nvars_)
    throw Error(errc::size_mismatch, "composition needs one polynomial per variable");
  UnivariatePoly out;
  for (const auto& [e, c] : terms_) {
    UnivariatePoly t = UnivariatePoly::constant(c);
    for (int v = 0; v < nvars_; ++v)
      for (int k = 0; k < e[v]; ++k) t = t * args[v];
    out = out + t;
  }
  return out;
}

MultivariatePoly MultivariatePoly::operator+(const MultivariatePoly& o) const {
  if (nvars_ != o.nvars_) throw Error(errc::size_mismatch, "variable count mismatch");
  MultivariatePoly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

MultivariatePoly MultivariatePoly::operator-(const MultivariatePoly& o) const {
  return (*this) + o * -1.0;
}

MultivariatePoly MultivariatePoly::operator*(const MultivariatePoly& o) const {
  if (nvars_ != o.nvars_) throw Error(errc::size_mismatch, "variable count mismatch");
  MultivariatePoly out(nvars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      std::vector<int> e(nvars_);
      for (int v = 0; v < nvars_; ++v) e[v] = ea[v] + eb[v];
      out.add_term(e, ca * cb);
    }
  return out;
}

MultivariatePoly MultivariatePoly::operator*(double s) const {
  MultivariatePoly out(nvars_);
  if (s == 0.0) return out;
  for (const auto& [e, c] : terms_) out.add_term(e, c * s);
  return out;
}

MultivariatePoly parse_multipoly(std::string_view text, int nvars) {
  MultivariatePoly p(nvars);
  parse_sum(text, true, nvars, [&](double coeff, const std::map<int, int>& powers) {
    std::vector<int> e(nvars, 0);
    for (const auto& [v, k] : powers) e[v] = k;
    p.add_term(e, coeff);
  });
  return p;
}

} // namespace g2lab
