#include "bscan/criteria.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace bscan {

namespace {

BigInt mod_norm(BigInt x, const BigInt& n) {
  x %= n;
  if (x < 0) x += n;
  return x;
}

// ------------------------------------------------------------ order caching
//
// The theorem searches hammer a small set of (prime power, base) pairs with
// multiplicative-order queries; memoize them process-wide. Only pairs whose
// prime and reduced base fit in 64 bits are cached (everything the pipeline
// produces does); anything else is computed directly.

struct OrderKey {
  u64 p;
  unsigned e;
  u64 base;
  bool operator==(const OrderKey&) const = default;
};

struct OrderKeyHash {
  std::size_t operator()(const OrderKey& k) const {
    std::size_t h = std::hash<u64>{}(k.p);
    h ^= std::hash<u64>{}(k.base) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<unsigned>{}(k.e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

BigInt order_mod_prime_power(const BigInt& p, unsigned e, const BigInt& base) {
  const Factorization f = make_factorization({{p, e}});
  return mult_order(base, f.value, f);
}

// Order of base modulo p^e; gcd(base, p) == 1 is the caller's contract.
BigInt prime_power_order(const BigInt& p, unsigned e, const BigInt& base) {
  const BigInt pe = pow_big(p, e);
  const BigInt reduced = mod_norm(base, pe);
  if (p > BigInt(UINT64_MAX) || reduced > BigInt(UINT64_MAX) || e > 64) {
    return order_mod_prime_power(p, e, reduced);
  }
  const OrderKey key{static_cast<u64>(p), e, static_cast<u64>(reduced)};
  static std::unordered_map<OrderKey, BigInt, OrderKeyHash> cache;
  static std::shared_mutex mutex;
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  BigInt ord = order_mod_prime_power(p, e, reduced);
  std::unique_lock lock(mutex);
  return cache.emplace(key, std::move(ord)).first->second;
}

// nu_r(q^(r-1) - 1) for odd prime r and q coprime to r, found by lifting the
// congruence through r^2, r^3, ... instead of expanding the power.
unsigned fermat_valuation_uncached(const BigInt& q, const BigInt& r) {
  unsigned e = 1;
  BigInt mod = r * r;
  while (powmod(q, r - 1, mod) == 1) {
    ++e;
    mod *= r;
  }
  return e;
}

unsigned fermat_valuation(const BigInt& q, const BigInt& r) {
  if (q > BigInt(UINT64_MAX) || r > BigInt(UINT64_MAX)) return fermat_valuation_uncached(q, r);
  const std::pair<u64, u64> key{static_cast<u64>(q), static_cast<u64>(r)};
  struct PairHash {
    std::size_t operator()(const std::pair<u64, u64>& k) const {
      return std::hash<u64>{}(k.first) ^ (std::hash<u64>{}(k.second) * 0x9e3779b97f4a7c15ULL);
    }
  };
  static std::unordered_map<std::pair<u64, u64>, unsigned, PairHash> cache;
  static std::shared_mutex mutex;
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const unsigned v = fermat_valuation_uncached(q, r);
  std::unique_lock lock(mutex);
  return cache.emplace(key, v).first->second;
}

// ------------------------------------------------------------ factored helpers

Factorization divisor_factorization(const Factorization& parent, const Divisor& d) {
  Factorization f;
  f.value = d.value;
  for (std::size_t i = 0; i < parent.factors.size(); ++i) {
    if (d.exponents[i] > 0) f.factors.push_back({parent.factors[i].prime, d.exponents[i]});
  }
  return f;
}

Factorization square_of(const Factorization& u) {
  Factorization f;
  f.value = u.value * u.value;
  for (const auto& pp : u.factors) f.factors.push_back({pp.prime, 2 * pp.exponent});
  return f;
}

// 4u^2 in factored form.
Factorization four_u_squared(const Factorization& u) {
  Factorization f = square_of(u);
  f.value <<= 2;
  if (!f.factors.empty() && f.factors.front().prime == 2) {
    f.factors.front().exponent += 2;
  } else {
    f.factors.insert(f.factors.begin(), {BigInt(2), 2});
  }
  return f;
}

// parent / divisor, in factored form (the divisor's exponent vector must be
// aligned with parent.factors).
Factorization quotient_factorization(const Factorization& parent, const Divisor& d) {
  Factorization f;
  f.value = parent.value / d.value;
  for (std::size_t i = 0; i < parent.factors.size(); ++i) {
    const unsigned e = parent.factors[i].exponent - d.exponents[i];
    if (e > 0) f.factors.push_back({parent.factors[i].prime, e});
  }
  return f;
}

Verdict make_pass(Theorem t) { return Verdict{t, Outcome::pass, {}}; }

Verdict make_excluded(Theorem t, std::vector<BigInt> witness) {
  return Verdict{t, Outcome::excluded, std::move(witness)};
}

Verdict make_inconclusive(Theorem t) { return Verdict{t, Outcome::inconclusive, {}}; }

}  // namespace

// ---------------------------------------------------------------- name maps

std::string_view mode_name(Mode mode) { return mode == Mode::barker ? "barker" : "chm"; }

Mode parse_mode(std::string_view name) {
  if (name == "barker") return Mode::barker;
  if (name == "chm") return Mode::chm;
  throw std::invalid_argument("parse_mode: unknown mode '" + std::string(name) + "'");
}

std::string_view theorem_name(Theorem t) {
  switch (t) {
    case Theorem::eks: return "EKS";
    case Theorem::large_prime_cor: return "LargePrimeCor";
    case Theorem::field_descent: return "FieldDescent";
    case Theorem::turyn: return "Turyn";
    case Theorem::ls5: return "LS5";
    case Theorem::ls1: return "LS1";
    case Theorem::ls10: return "LS10";
  }
  throw std::logic_error("theorem_name: bad enum");
}

Theorem parse_theorem(std::string_view name) {
  for (Theorem t : {Theorem::eks, Theorem::large_prime_cor, Theorem::field_descent, Theorem::turyn,
                    Theorem::ls5, Theorem::ls1, Theorem::ls10}) {
    if (theorem_name(t) == name) return t;
  }
  throw std::invalid_argument("parse_theorem: unknown theorem '" + std::string(name) + "'");
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::excluded: return "excluded";
    case Outcome::inconclusive: return "inconclusive";
  }
  throw std::logic_error("outcome_name: bad enum");
}

// ---------------------------------------------------------------- predicates

bool is_semiprimitive(const BigInt& r, const Factorization& s_fact) {
  const BigInt& s = s_fact.value;
  if (s <= 2) return true;
  const BigInt rm = mod_norm(r, s);
  if (boost::multiprecision::gcd(rm, s) != 1) return false;

  // 2-part first: mod 4 demands r == -1 and an odd exponent j; mod 2^a with
  // a >= 3 the only power landing on -1 is r == -1 itself.
  const unsigned a = s_fact.exponent_of(2);
  if (a == 2 && rm % 4 != 3) return false;
  if (a >= 3) {
    const BigInt two_a = BigInt(1) << a;
    if (rm % two_a != two_a - 1) return false;
  }
  const bool need_odd_j = (a >= 2);

  // Odd part: -1 is reachable simultaneously iff every per-prime-power order
  // is even with one shared 2-adic valuation; the witness exponent j is odd
  // exactly when that valuation is 1.
  int common = -1;
  for (const auto& pp : s_fact.factors) {
    if (pp.prime == 2) continue;
    const BigInt d = prime_power_order(pp.prime, pp.exponent, rm);
    const unsigned nu = (d % 2 == 0) ? valuation(BigInt(2), d) : 0;
    if (nu == 0) return false;
    if (need_odd_j && nu != 1) return false;
    if (common == -1) {
      common = static_cast<int>(nu);
    } else if (common != static_cast<int>(nu)) {
      return false;
    }
  }
  return true;
}

bool is_semiprimitive(const BigInt& r, const BigInt& s) {
  if (s < 1) throw std::domain_error("is_semiprimitive: modulus must be positive");
  if (s <= 2) return true;
  return is_semiprimitive(r, factorize(s));
}

Factorization p_free_part(const Factorization& s_fact, const BigInt& p) {
  Factorization f;
  f.value = s_fact.value;
  for (const auto& pp : s_fact.factors) {
    if (pp.prime == p) {
      f.value /= pow_big(pp.prime, pp.exponent);
    } else {
      f.factors.push_back(pp);
    }
  }
  return f;
}

BigInt p_free_part(const BigInt& s, const BigInt& p) {
  if (s < 1) throw std::domain_error("p_free_part: s must be positive");
  return s / pow_big(p, valuation(p, s));
}

bool is_self_conjugate(const Factorization& r_fact, const Factorization& s_fact) {
  for (const auto& pp : r_fact.factors) {
    if (!is_semiprimitive(pp.prime, p_free_part(s_fact, pp.prime))) return false;
  }
  return true;
}

bool is_self_conjugate(const BigInt& r, const BigInt& s) {
  if (r < 1 || s < 1) throw std::domain_error("is_self_conjugate: arguments must be positive");
  if (r == 1) return true;
  return is_self_conjugate(factorize(r), factorize(s));
}

BigInt m_q(const Factorization& m_fact, const BigInt& q) {
  BigInt prod = 1;
  for (const auto& pp : m_fact.factors) {
    if (pp.prime != q) prod *= pp.prime;
  }
  if (m_fact.value % 2 == 0 && q % 2 != 0) prod *= 2;
  return prod;
}

BigInt m_q(const BigInt& m, const BigInt& q) {
  if (m < 1) throw std::domain_error("m_q: m must be positive");
  return m_q(factorize(m), q);
}

unsigned b_exponent(const BigInt& r, const Factorization& m_fact, const Factorization& n_fact) {
  std::vector<BigInt> qs;
  for (const auto& pp : n_fact.factors) {
    if (pp.prime != r) qs.push_back(pp.prime);
  }
  if (qs.empty()) return r == 2 ? 2 : 1;  // n is a power of r (n = 1 included)

  const bool m_even = m_fact.exponent_of(2) > 0;
  unsigned best = 0;
  for (const BigInt& q : qs) {
    // nu_r of the order of q mod m_q: m_q is squarefree apart from a possible
    // factor 4, so the order is an lcm over the parts and the valuation is a
    // max. The 4-part contributes only for r = 2 with q == 3 mod 4.
    unsigned nu_ord = 0;
    for (const auto& pp : m_fact.factors) {
      if (pp.prime == q) continue;
      if (pp.prime == 2) {
        if (m_even && q % 2 != 0 && r == 2 && q % 4 == 3) nu_ord = std::max(nu_ord, 1u);
        continue;
      }
      const BigInt ord = prime_power_order(pp.prime, 1, q);
      nu_ord = std::max(nu_ord, valuation(r, ord));
    }
    unsigned term;
    if (r == 2) {
      term = valuation(BigInt(2), q * q - 1) + nu_ord - 1;  // q is odd here
    } else {
      term = fermat_valuation(q, r) + nu_ord;
    }
    best = std::max(best, term);
  }
  return best;
}

unsigned b_exponent(const BigInt& r, const BigInt& m, const BigInt& n) {
  if (m < 1 || n < 1) throw std::domain_error("b_exponent: m, n must be positive");
  return b_exponent(r, factorize(m), factorize(n));
}

Factorization field_descent_F(const Factorization& m_fact, const Factorization& n_fact) {
  Factorization f;
  f.value = 1;
  for (const auto& pp : m_fact.factors) {
    const unsigned b = b_exponent(pp.prime, m_fact, n_fact);
    const unsigned e = std::min(pp.exponent, b);
    if (e > 0) {
      f.factors.push_back({pp.prime, e});
      f.value *= pow_big(pp.prime, e);
    }
  }
  return f;
}

BigInt field_descent_F(const BigInt& m, const BigInt& n) {
  if (m < 1 || n < 1) throw std::domain_error("field_descent_F: m, n must be positive");
  return field_descent_F(factorize(m), factorize(n)).value;
}

// ---------------------------------------------------------------- theorem tests

Verdict test_eks(const Factorization& u) {
  for (const auto& pp : u.factors) {
    if (pp.prime % 4 != 1) return make_excluded(Theorem::eks, {pp.prime});
  }
  return make_pass(Theorem::eks);
}

Verdict test_large_prime_cor(const Factorization& u) {
  const BigInt two_u_sq = 2 * u.value * u.value;
  for (auto it = u.factors.rbegin(); it != u.factors.rend(); ++it) {
    if (pow_big(it->prime, 3 * it->exponent) > two_u_sq) {
      return make_excluded(Theorem::large_prime_cor, {it->prime, BigInt(it->exponent)});
    }
  }
  return make_pass(Theorem::large_prime_cor);
}

Verdict test_field_descent(const Factorization& u) {
  const Factorization F = field_descent_F(square_of(u), u);
  if (u.value * euler_phi(u) > F.value) {
    return make_excluded(Theorem::field_descent, {F.value});
  }
  return make_pass(Theorem::field_descent);
}

Verdict test_turyn(const Factorization& u, Mode mode, const CriteriaCaps& caps) {
  (void)mode;  // the inequality reads the same for both problems
  if (u.big_omega() > caps.turyn_max_omega) return make_inconclusive(Theorem::turyn);
  if (u.value == 1) return make_pass(Theorem::turyn);

  const Factorization n_fact = four_u_squared(u);
  const BigInt& n = n_fact.value;
  const std::vector<Divisor> r_divs = all_divisors(u);
  const std::vector<Divisor> s_divs = all_divisors(n_fact);

  // Index of each u-prime inside n's factor list (n = 4u^2 contains them all).
  std::vector<std::size_t> n_index(u.factors.size());
  for (std::size_t i = 0; i < u.factors.size(); ++i) {
    for (std::size_t j = 0; j < n_fact.factors.size(); ++j) {
      if (n_fact.factors[j].prime == u.factors[i].prime) {
        n_index[i] = j;
        break;
      }
    }
  }

  for (const Divisor& r : r_divs) {
    if (r.value == 1) continue;
    for (const Divisor& s : s_divs) {
      const BigInt rs = r.value * s.value;
      if (rs <= n) continue;  // the bound is at least n whatever k turns out to be
      unsigned k = 0;
      for (std::size_t i = 0; i < u.factors.size(); ++i) {
        if (r.exponents[i] > 0 && s.exponents[n_index[i]] > 0) ++k;
      }
      if (k == 0) continue;
      if (rs > (BigInt(1) << (k - 1)) * n &&
          is_self_conjugate(divisor_factorization(u, r), divisor_factorization(n_fact, s))) {
        return make_excluded(Theorem::turyn, {r.value, s.value});
      }
    }
  }
  return make_pass(Theorem::turyn);
}

Verdict test_ls5(const Factorization& u, const CriteriaCaps& caps) {
  if (u.big_omega() > caps.ls5_max_omega) return make_inconclusive(Theorem::ls5);
  const BigInt two_u = 2 * u.value;
  for (auto it = u.factors.rbegin(); it != u.factors.rend(); ++it) {
    const BigInt& p = it->prime;
    if (p == 2) continue;
    const unsigned a = it->exponent;
    if (pow_big(p, 2 * a) <= two_u) continue;

    Factorization m_fact;
    m_fact.value = u.value / pow_big(p, a);
    for (const auto& pp : u.factors) {
      if (pp.prime != p) m_fact.factors.push_back(pp);
    }
    const Factorization p_fact = make_factorization({{p, 1}});
    for (const Divisor& r : all_divisors(m_fact)) {
      if (!is_self_conjugate(divisor_factorization(m_fact, r), p_fact)) continue;
      // gcd of ord_p(q) over the primes q of m/r; empty product means the
      // bound is vacuously violated.
      BigInt g = 0;
      bool any = false;
      for (std::size_t i = 0; i < m_fact.factors.size(); ++i) {
        if (m_fact.factors[i].exponent - r.exponents[i] == 0) continue;
        any = true;
        g = boost::multiprecision::gcd(g, prime_power_order(p, 1, m_fact.factors[i].prime));
        if (g == 1) break;
      }
      const BigInt ratio = m_fact.value / r.value;
      if (!any || g > ratio * ratio) {
        return make_excluded(Theorem::ls5, {p, r.value});
      }
    }
  }
  return make_pass(Theorem::ls5);
}

Verdict test_ls1(const Factorization& u, const CriteriaCaps& caps) {
  if (u.big_omega() > caps.ls1_max_omega) return make_inconclusive(Theorem::ls1);
  const Factorization n_fact = four_u_squared(u);
  const BigInt& n = n_fact.value;
  const std::vector<Divisor> m_divs = all_divisors(u);
  const std::vector<Divisor> w_divs = all_divisors(n_fact);

  for (const Divisor& m : m_divs) {
    const Factorization m_fact = divisor_factorization(u, m);
    // u^2 / m^2 = (u/m)^2
    Factorization um_sq;
    um_sq.value = (u.value / m.value) * (u.value / m.value);
    for (std::size_t i = 0; i < u.factors.size(); ++i) {
      const unsigned e = u.factors[i].exponent - m.exponents[i];
      if (e > 0) um_sq.factors.push_back({u.factors[i].prime, 2 * e});
    }
    for (const Divisor& w : w_divs) {
      const Factorization nw_fact = quotient_factorization(n_fact, w);
      if (!is_self_conjugate(m_fact, nw_fact)) continue;
      const Factorization F = field_descent_F(nw_fact, um_sq);
      if (n * euler_phi(F) > w.value * w.value * F.value * F.value) {
        return make_excluded(Theorem::ls1, {m.value, w.value});
      }
    }
  }
  return make_pass(Theorem::ls1);
}

Verdict test_ls10(const Factorization& u, const CriteriaCaps& caps) {
  for (const auto& pp : u.factors) {
    if (pp.prime % 4 != 3) return make_pass(Theorem::ls10);  // hypothesis unmet
  }
  if (u.big_omega() > caps.ls10_max_omega) return make_inconclusive(Theorem::ls10);
  const std::vector<Divisor> w_divs = all_divisors(u);
  for (const auto& pp : u.factors) {
    const BigInt& p = pp.prime;
    const Factorization p_fact = make_factorization({{p, 1}});
    for (auto w = w_divs.rbegin(); w != w_divs.rend(); ++w) {
      if (!is_self_conjugate(divisor_factorization(u, *w), p_fact)) continue;
      if (w->value == u.value) {
        return make_excluded(Theorem::ls10, {p, w->value});
      }
      BigInt g = 0;
      bool any = false;
      for (std::size_t i = 0; i < u.factors.size(); ++i) {
        if (u.factors[i].exponent - w->exponents[i] == 0) continue;
        if (u.factors[i].prime == p) continue;
        any = true;
        g = boost::multiprecision::gcd(g, prime_power_order(p, 1, u.factors[i].prime));
      }
      const BigInt ratio = u.value / w->value;
      if (any && g <= ratio * ratio) {
        return make_excluded(Theorem::ls10, {p, w->value});
      }
    }
  }
  return make_pass(Theorem::ls10);
}

// ---------------------------------------------------------------- revalidation

bool revalidate(const Factorization& u, const Verdict& v) {
  if (!v.excluded()) return true;
  const std::vector<BigInt>& w = v.witness;
  switch (v.theorem) {
    case Theorem::eks: {
      if (w.size() != 1) return false;
      return is_prime(w[0]) && u.value % w[0] == 0 && w[0] % 4 != 1;
    }
    case Theorem::large_prime_cor: {
      if (w.size() != 2) return false;
      const BigInt& p = w[0];
      if (!is_prime(p) || w[1] <= 0) return false;
      const unsigned l = static_cast<unsigned>(w[1]);
      return valuation(p, u.value) == l && pow_big(p, 3 * l) > 2 * u.value * u.value;
    }
    case Theorem::field_descent: {
      if (w.size() != 1) return false;
      const BigInt F = field_descent_F(u.value * u.value, u.value);
      return F == w[0] && u.value * euler_phi(factorize(u.value)) > F;
    }
    case Theorem::turyn: {
      if (w.size() != 2) return false;
      const BigInt &r = w[0], &s = w[1];
      const BigInt n = 4 * u.value * u.value;
      if (r < 1 || s < 1 || u.value % r != 0 || n % s != 0) return false;
      const Factorization g = factorize(boost::multiprecision::gcd(r, s));
      const unsigned k = g.omega();
      if (k < 1) return false;
      return r * s > (BigInt(1) << (k - 1)) * n && is_self_conjugate(r, s);
    }
    case Theorem::ls5: {
      if (w.size() != 2) return false;
      const BigInt &p = w[0], &r = w[1];
      if (!is_prime(p) || p == 2 || u.value % p != 0) return false;
      const unsigned a = valuation(p, u.value);
      if (pow_big(p, 2 * a) <= 2 * u.value) return false;
      const BigInt m = u.value / pow_big(p, a);
      if (r < 1 || m % r != 0) return false;
      if (!is_self_conjugate(r, p)) return false;
      BigInt g = 0;
      bool any = false;
      for (const auto& pp : factorize(m / r).factors) {
        any = true;
        g = boost::multiprecision::gcd(g, mult_order(pp.prime, p));
      }
      const BigInt ratio = m / r;
      return !any || g > ratio * ratio;
    }
    case Theorem::ls1: {
      if (w.size() != 2) return false;
      const BigInt &m = w[0], &ww = w[1];
      const BigInt n = 4 * u.value * u.value;
      if (m < 1 || ww < 1 || u.value % m != 0 || n % ww != 0) return false;
      const BigInt nw = n / ww;
      if (!is_self_conjugate(m, nw)) return false;
      const BigInt q = u.value / m;
      const BigInt F = field_descent_F(nw, q * q);
      return n * euler_phi(factorize(F)) > ww * ww * F * F;
    }
    case Theorem::ls10: {
      if (w.size() != 2) return false;
      const BigInt &p = w[0], &ww = w[1];
      if (!is_prime(p) || u.value % p != 0) return false;
      if (ww < 1 || u.value % ww != 0) return false;
      if (!is_self_conjugate(ww, p)) return false;
      if (ww == u.value) return true;
      BigInt g = 0;
      bool any = false;
      for (const auto& pp : factorize(u.value / ww).factors) {
        if (pp.prime == p) continue;
        any = true;
        g = boost::multiprecision::gcd(g, mult_order(pp.prime, p));
      }
      const BigInt ratio = u.value / ww;
      return any && g <= ratio * ratio;
    }
  }
  return false;
}

}  // namespace bscan
