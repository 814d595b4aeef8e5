#pragma once

// Exact arithmetic in the Laurent coefficient rings, the Rees subring with
// h*u = q^{-1}-q (oriented) or v^{-1}-v (framed), and h-adic truncations.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace skein {

using Int = boost::multiprecision::cpp_int;

struct input_error : std::runtime_error {
  explicit input_error(const std::string& m) : std::runtime_error(m) {}
};
struct contract_error : std::runtime_error {
  explicit contract_error(const std::string& m) : std::runtime_error(m) {}
};

enum class Variant { oriented, framed };

inline const char* variant_name(Variant v) {
  return v == Variant::oriented ? "oriented" : "framed";
}

// Exponent vector of a single term in variables q, v, z, h, u.
struct Exps {
  int dq = 0, dv = 0, dz = 0, dh = 0, du = 0;

  // Fixed total order: lexicographic on (dh, du, dz, dq, dv) with du
  // compared in reverse so that split-unknot powers print high to low.
  std::tuple<int, int, int, int, int> key() const {
    return {dh, -du, dz, dq, dv};
  }
  bool operator==(const Exps& o) const {
    return dq == o.dq && dv == o.dv && dz == o.dz && dh == o.dh && du == o.du;
  }
  bool operator<(const Exps& o) const { return key() < o.key(); }

  Exps operator+(const Exps& o) const {
    return {dq + o.dq, dv + o.dv, dz + o.dz, dh + o.dh, du + o.du};
  }
};

using TermMap = std::map<Exps, Int>;

namespace detail {

inline void add_term(TermMap& m, const Exps& e, const Int& c) {
  if (c == 0) return;
  auto it = m.find(e);
  if (it == m.end()) {
    m.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) m.erase(it);
  }
}

inline std::string format_terms(const TermMap& terms) {
  if (terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    Int a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      if (a < 0) {
        out << " - ";
        a = -a;
      } else {
        out << " + ";
      }
    }
    std::vector<std::string> factors;
    auto var = [&](const char* name, int d) {
      if (d == 0) return;
      std::string f = name;
      if (d != 1) f += "^" + std::to_string(d);
      factors.push_back(f);
    };
    var("q", e.dq);
    var("v", e.dv);
    var("z", e.dz);
    var("h", e.dh);
    var("u", e.du);
    if (factors.empty()) {
      out << a.str();
    } else {
      if (a != 1) out << a.str() << "*";
      for (size_t i = 0; i < factors.size(); ++i) {
        if (i) out << "*";
        out << factors[i];
      }
    }
    first = false;
  }
  return out.str();
}

// Parses the textual sum-of-terms format produced by format_terms.
inline TermMap parse_terms(const std::string& s) {
  TermMap out;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  if (i >= s.size()) throw input_error("empty coefficient string");
  if (s.compare(i, 1, "0") == 0 && i + 1 == s.size()) return out;
  int sign = 1;
  bool expect_term = true;
  while (i < s.size()) {
    skip_ws();
    if (!expect_term) {
      if (s[i] == '+') {
        sign = 1;
      } else if (s[i] == '-') {
        sign = -1;
      } else {
        throw input_error("expected '+' or '-' in coefficient at: " + s.substr(i));
      }
      ++i;
      skip_ws();
    }
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
      skip_ws();
    }
    // integer part
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    Int coeff = digits.empty() ? Int(1) : Int(digits);
    Exps e;
    bool saw_var = false;
    while (i < s.size()) {
      skip_ws();
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip_ws();
      }
      if (i >= s.size()) break;
      char v = s[i];
      int* slot = nullptr;
      switch (v) {
        case 'q': slot = &e.dq; break;
        case 'v': slot = &e.dv; break;
        case 'z': slot = &e.dz; break;
        case 'h': slot = &e.dh; break;
        case 'u': slot = &e.du; break;
        default: slot = nullptr;
      }
      if (!slot) break;
      ++i;
      int d = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
          neg = s[i] == '-';
          ++i;
        }
        std::string ds;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ds += s[i++];
        if (ds.empty()) throw input_error("missing exponent in coefficient string");
        d = std::atoi(ds.c_str());
        if (neg) d = -d;
      }
      *slot += d;
      saw_var = true;
    }
    if (digits.empty() && !saw_var)
      throw input_error("malformed term in coefficient string: " + s);
    add_term(out, e, sign * coeff);
    sign = 1;
    expect_term = false;
    skip_ws();
  }
  return out;
}

}  // namespace detail

// Element of the free Laurent ring Z[q^{±1},v^{±1},z^{±1},h^{±1},u^{±1}].
// No relation between the variables; used as the target of embeddings and
// specializations, and as the coefficient ring of the Vassiliev expansion.
class Laurent {
 public:
  Laurent() = default;
  static Laurent term(Int c, Exps e) {
    Laurent r;
    detail::add_term(r.terms_, e, c);
    return r;
  }
  static Laurent integer(Int c) { return term(std::move(c), Exps{}); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Laurent operator-() const {
    Laurent r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  Laurent operator+(const Laurent& o) const {
    Laurent r = *this;
    for (const auto& [e, c] : o.terms_) detail::add_term(r.terms_, e, c);
    return r;
  }
  Laurent operator-(const Laurent& o) const { return *this + (-o); }
  Laurent operator*(const Laurent& o) const {
    Laurent r;
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_)
        detail::add_term(r.terms_, e1 + e2, c1 * c2);
    return r;
  }
  bool operator==(const Laurent& o) const { return terms_ == o.terms_; }
  bool operator!=(const Laurent& o) const { return !(*this == o); }

  int min_h_degree() const {
    if (terms_.empty()) return 0;
    int m = terms_.begin()->first.dh;
    for (const auto& [e, c] : terms_) m = std::min(m, e.dh);
    return m;
  }

  std::string str() const { return detail::format_terms(terms_); }
  static Laurent parse(const std::string& s) {
    Laurent r;
    r.terms_ = detail::parse_terms(s);
    return r;
  }

 private:
  TermMap terms_;
};

// Element of the Rees coefficient ring in normal form: no term carries both
// h and u, all of z,h,u have nonnegative exponents, and the oriented variant
// has no v. The rewrite h*u -> q^{-1}-q (oriented) or v^{-1}-v (framed) is
// applied on construction.
class Rees {
 public:
  explicit Rees(Variant v = Variant::oriented) : var_(v) {}

  static Rees integer(Int c, Variant v = Variant::oriented) {
    return monomial(std::move(c), 0, 0, 0, 0, 0, v);
  }
  static Rees monomial(Int c, int dq, int dv, int dz, int dh, int du,
                       Variant var = Variant::oriented) {
    Rees r(var);
    r.insert_raw({dq, dv, dz, dh, du}, std::move(c));
    return r;
  }
  static Rees q(int k, Variant v = Variant::oriented) { return monomial(1, k, 0, 0, 0, 0, v); }
  static Rees v_pow(int k) { return monomial(1, 0, k, 0, 0, 0, Variant::framed); }
  static Rees z(Variant v = Variant::oriented) { return monomial(1, 0, 0, 1, 0, 0, v); }
  static Rees h(Variant v = Variant::oriented) { return monomial(1, 0, 0, 0, 1, 0, v); }
  static Rees u(Variant v = Variant::oriented) { return monomial(1, 0, 0, 0, 0, 1, v); }
  static Rees zero(Variant v = Variant::oriented) { return Rees(v); }
  static Rees one(Variant v = Variant::oriented) { return integer(1, v); }

  // Normalizes an arbitrary raw term set into the Rees normal form.
  static Rees normalize(const TermMap& raw, Variant var) {
    Rees r(var);
    for (const auto& [e, c] : raw) r.insert_raw(e, c);
    return r;
  }

  Variant variant() const { return var_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == Exps{} &&
           terms_.begin()->second == 1;
  }

  Rees operator-() const {
    Rees r(var_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  Rees operator+(const Rees& o) const {
    check_variant(o);
    Rees r = *this;
    for (const auto& [e, c] : o.terms_) detail::add_term(r.terms_, e, c);
    return r;
  }
  Rees operator-(const Rees& o) const { return *this + (-o); }
  Rees operator*(const Rees& o) const {
    check_variant(o);
    Rees r(var_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_)
        r.insert_raw(e1 + e2, c1 * c2);
    return r;
  }
  Rees& operator+=(const Rees& o) { return *this = *this + o; }
  Rees& operator*=(const Rees& o) { return *this = *this * o; }
  bool operator==(const Rees& o) const { return var_ == o.var_ && terms_ == o.terms_; }
  bool operator!=(const Rees& o) const { return !(*this == o); }

  Rees pow(unsigned k) const {
    Rees r = one(var_);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  // Injective embedding with u eliminated: u -> (q^{-1}-q)/h in the oriented
  // variant and u -> (v^{-1}-v)/h in the framed one.
  Laurent embed_h_inverted() const {
    Laurent acc;
    for (const auto& [e, c] : terms_) {
      Laurent t = Laurent::term(c, {e.dq, e.dv, e.dz, e.dh - e.du, 0});
      acc = acc + t * twist_unit().pow_laurent(e.du);
    }
    return acc;
  }

  // Representative substitution z := h in the free Laurent ring. Not a ring
  // map on normal forms; it acts on the stored representative.
  Laurent specialize_z_to_h() const {
    Laurent acc;
    for (const auto& [e, c] : terms_)
      acc = acc + Laurent::term(c, {e.dq, e.dv, e.dz * 0, e.dh + e.dz, e.du});
    return acc;
  }

  std::string str() const { return detail::format_terms(terms_); }
  static Rees parse(const std::string& s, Variant var = Variant::oriented) {
    return normalize(detail::parse_terms(s), var);
  }

 private:
  struct TwistUnit {
    // q^{-1}-q or v^{-1}-v as a two-term Laurent factor
    Exps lo, hi;
    Laurent pow_laurent(int k) const {
      Laurent r = Laurent::integer(1);
      Laurent base = Laurent::term(1, lo) + Laurent::term(-1, hi);
      for (int i = 0; i < k; ++i) r = r * base;
      return r;
    }
  };
  TwistUnit twist_unit() const {
    if (var_ == Variant::oriented) return {{-1, 0, 0, 0, 0}, {1, 0, 0, 0, 0}};
    return {{0, -1, 0, 0, 0}, {0, 1, 0, 0, 0}};
  }

  void check_variant(const Rees& o) const {
    if (var_ != o.var_)
      throw input_error(std::string("ring variant mismatch: ") + variant_name(var_) +
                        " vs " + variant_name(o.var_));
  }

  void insert_raw(const Exps& e, const Int& c) {
    if (c == 0) return;
    if (e.dz < 0 || e.dh < 0 || e.du < 0)
      throw input_error("negative z/h/u exponent is not a Rees element");
    if (var_ == Variant::oriented && e.dv != 0)
      throw input_error("oriented Rees element cannot involve v");
    if (e.dh > 0 && e.du > 0) {
      // one application of the rewrite h*u -> twist unit
      Exps base{e.dq, e.dv, e.dz, e.dh - 1, e.du - 1};
      TwistUnit tw = twist_unit();
      insert_raw(base + tw.lo, c);
      insert_raw(base + tw.hi, -c);
      return;
    }
    detail::add_term(terms_, e, c);
  }

  Variant var_;
  TermMap terms_;
};

inline Rees operator*(const Int& c, const Rees& r) {
  return Rees::integer(c, r.variant()) * r;
}

// h-adic truncation of the embedded element. Requires the embedded image to
// have no negative h powers.
struct TruncatedSeries {
  int order = 0;
  Variant var = Variant::oriented;
  std::vector<Laurent> coeffs;  // index i holds the h^i coefficient, u- and h-free

  bool operator==(const TruncatedSeries& o) const {
    return order == o.order && var == o.var && coeffs == o.coeffs;
  }
  bool is_zero() const {
    for (const auto& c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }

  TruncatedSeries operator+(const TruncatedSeries& o) const {
    if (order != o.order) throw input_error("series order mismatch");
    TruncatedSeries r = *this;
    for (int i = 0; i <= order; ++i) r.coeffs[i] = r.coeffs[i] + o.coeffs[i];
    return r;
  }
  TruncatedSeries operator*(const TruncatedSeries& o) const {
    if (order != o.order) throw input_error("series order mismatch");
    TruncatedSeries r{order, var, std::vector<Laurent>(order + 1)};
    for (int i = 0; i <= order; ++i)
      for (int j = 0; i + j <= order; ++j)
        r.coeffs[i + j] = r.coeffs[i + j] + coeffs[i] * o.coeffs[j];
    return r;
  }

  std::string str() const {
    std::ostringstream out;
    out << "[";
    for (int i = 0; i <= order; ++i) {
      if (i) out << ", ";
      out << coeffs[i].str();
    }
    out << "]";
    return out.str();
  }
};

inline TruncatedSeries truncate_h(const Rees& x, int N) {
  if (N < 0) throw input_error("truncation order must be nonnegative");
  Laurent em = x.embed_h_inverted();
  TruncatedSeries s{N, x.variant(), std::vector<Laurent>(N + 1)};
  for (const auto& [e, c] : em.terms()) {
    if (e.dh < 0)
      throw input_error("not h-adically truncatable: negative h-degree after embedding");
    if (e.dh > N) continue;
    s.coeffs[e.dh] = s.coeffs[e.dh] + Laurent::term(c, {e.dq, e.dv, e.dz, 0, 0});
  }
  return s;
}

}  // namespace skein
