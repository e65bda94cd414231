#include "bscan/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace bscan {

namespace {

constexpr u128 one128 = 1;
constexpr u128 fast_modulus_limit = one128 << fast_modulus_bits;

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int bit_length(u128 v) {
  int n = 0;
  while (v != 0) {
    ++n;
    v >>= 1;
  }
  return n;
}

BigInt mod_norm(BigInt x, const BigInt& n) {
  x %= n;
  if (x < 0) x += n;
  return x;
}

}  // namespace

const BigInt& deterministic_primality_bound() {
  static const BigInt bound("3317044064679887385961981");
  return bound;
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

u128 u128_from(const BigInt& v) {
  if (v < 0 || v >= BigInt(1) << 128) throw std::domain_error("u128_from: out of range");
  u128 r = 0;
  BigInt t = v;
  int shift = 0;
  while (t != 0 && shift < 128) {
    r |= static_cast<u128>(static_cast<u64>(t & 0xffffffffffffffffULL)) << shift;
    t >>= 64;
    shift += 64;
  }
  return r;
}

BigInt bigint_from(u128 v) {
  BigInt r = static_cast<u64>(v >> 64);
  r <<= 64;
  r += static_cast<u64>(v);
  return r;
}

// ---------------------------------------------------------------- modular ops

u64 mulmod(u64 a, u64 b, u64 m) {
  if (m == 0) throw std::domain_error("mulmod: zero modulus");
  if (m <= 0xffffffffULL) return (a % m) * (b % m) % m;
  return static_cast<u64>(static_cast<u128>(a % m) * (b % m) % m);
}

u128 mulmod(u128 a, u128 b, u128 m) {
  if (m == 0) throw std::domain_error("mulmod: zero modulus");
  if (m >= fast_modulus_limit) throw std::domain_error("mulmod: modulus exceeds fast tier");
  a %= m;
  b %= m;
  if (m <= static_cast<u128>(UINT64_MAX)) return a * b % m;
  // m < 2^75: split b so that every partial product stays inside 128 bits.
  const u128 b_lo = b & ((one128 << 37) - 1);
  const u128 b_hi = b >> 37;                  // < 2^38
  u128 t = a * b_hi % m;                      // < 2^75 * 2^38 = 2^113
  t = (t << 37) % m;                          // < 2^112
  const u128 t2 = a * b_lo % m;               // < 2^112
  return (t + t2) % m;
}

u64 powmod(u64 b, u64 e, u64 m) {
  if (m == 0) throw std::domain_error("powmod: zero modulus");
  if (m == 1) return 0;
  u64 r = 1;
  b %= m;
  if (m <= 0xffffffffULL) {
    while (e != 0) {
      if (e & 1) r = r * b % m;
      b = b * b % m;
      e >>= 1;
    }
    return r;
  }
  while (e != 0) {
    if (e & 1) r = static_cast<u64>(static_cast<u128>(r) * b % m);
    b = static_cast<u64>(static_cast<u128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

u128 powmod(u128 b, u128 e, u128 m) {
  if (m == 0) throw std::domain_error("powmod: zero modulus");
  if (m == 1) return 0;
  if (m <= static_cast<u128>(UINT64_MAX) && b <= static_cast<u128>(UINT64_MAX) &&
      e <= static_cast<u128>(UINT64_MAX)) {
    return powmod(static_cast<u64>(b), static_cast<u64>(e), static_cast<u64>(m));
  }
  u128 r = 1;
  b %= m;
  while (e != 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

u128 powmod(u128 b, const BigInt& e, u128 m) {
  if (m == 0) throw std::domain_error("powmod: zero modulus");
  if (e < 0) throw std::domain_error("powmod: negative exponent");
  if (m == 1) return 0;
  if (e == 0) return 1 % m;
  u128 r = 1;
  b %= m;
  const int top = static_cast<int>(boost::multiprecision::msb(e));
  for (int i = top; i >= 0; --i) {
    r = mulmod(r, r, m);
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) r = mulmod(r, b, m);
  }
  return r;
}

BigInt powmod(const BigInt& b, const BigInt& e, const BigInt& m) {
  if (m <= 0) throw std::domain_error("powmod: nonpositive modulus");
  if (e < 0) throw std::domain_error("powmod: negative exponent");
  if (m == 1) return 0;
  if (m < bigint_from(fast_modulus_limit)) {
    const u128 mm = u128_from(m);
    return bigint_from(powmod(u128_from(mod_norm(b, m)), e, mm));
  }
  return boost::multiprecision::powm(mod_norm(b, m), e, m);
}

// ---------------------------------------------------------------- primality

namespace {

bool miller_rabin_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness battery for all 64-bit inputs.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    a %= n;
    if (a == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool miller_rabin_big(const BigInt& n, const std::vector<unsigned>& bases) {
  BigInt d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned base : bases) {
    BigInt a = base % n;
    if (a == 0) continue;
    BigInt x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = powmod(x, BigInt(2), n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

int jacobi(BigInt a, BigInt n) {
  // n odd positive.
  a = mod_norm(a, n);
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const unsigned r = static_cast<unsigned>(n % 8);
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  const BigInt r = boost::multiprecision::sqrt(n);
  return r * r == n;
}

// Strong Lucas probable-prime test with Selfridge parameters.
bool strong_lucas(const BigInt& n) {
  if (is_perfect_square(n)) return false;
  long d_abs = 5;
  int sign = 1;
  BigInt D;
  while (true) {
    D = BigInt(sign) * d_abs;
    const int j = jacobi(D, n);
    if (j == -1) break;
    if (j == 0 && boost::multiprecision::abs(D) < n) return false;
    d_abs += 2;
    sign = -sign;
    if (d_abs > 1000) return false;  // unreachable for non-squares
  }
  const BigInt P = 1;
  const BigInt Q = (1 - D) / 4;

  BigInt d = n + 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Compute U_d, V_d (mod n) by binary chain from the top bit.
  BigInt U = 1, V = P, Qk = mod_norm(Q, n);
  const int top = static_cast<int>(boost::multiprecision::msb(d));
  for (int i = top - 1; i >= 0; --i) {
    // double: (U, V)_k -> (U, V)_{2k}
    U = mod_norm(U * V, n);
    V = mod_norm(V * V - 2 * Qk, n);
    Qk = mod_norm(Qk * Qk, n);
    if (boost::multiprecision::bit_test(d, static_cast<unsigned>(i))) {
      BigInt t1 = P * U + V;
      if ((t1 & 1) != 0) t1 += n;
      t1 >>= 1;
      BigInt t2 = D * U + P * V;
      if ((t2 & 1) != 0) t2 += n;
      t2 >>= 1;
      U = mod_norm(t1, n);
      V = mod_norm(t2, n);
      Qk = mod_norm(Qk * Q, n);
    }
  }
  if (U == 0 || V == 0) return true;
  for (int r = 1; r < s; ++r) {
    V = mod_norm(V * V - 2 * Qk, n);
    if (V == 0) return true;
    Qk = mod_norm(Qk * Qk, n);
  }
  return false;
}

const std::vector<unsigned> first_13_primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

}  // namespace

Primality classify_prime(const BigInt& t) {
  if (t < 2) return Primality::composite;
  if (t <= BigInt(UINT64_MAX)) {
    return miller_rabin_u64(static_cast<u64>(t)) ? Primality::prime : Primality::composite;
  }
  for (unsigned p : first_13_primes) {
    if (t % p == 0) return Primality::composite;
  }
  if (!miller_rabin_big(t, first_13_primes)) return Primality::composite;
  if (t < deterministic_primality_bound()) return Primality::prime;
  return strong_lucas(t) ? Primality::probably_prime : Primality::composite;
}

bool is_prime(const BigInt& t) { return classify_prime(t) != Primality::composite; }

bool is_prime(u64 t) { return miller_rabin_u64(t); }

// ---------------------------------------------------------------- sieving

namespace {

std::vector<u64> simple_sieve(u64 n) {
  std::vector<u64> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i * i <= n; ++i) {
    if (!composite[i]) {
      for (u64 j = i * i; j <= n; j += i) composite[j] = true;
    }
  }
  for (u64 i = 2; i <= n; ++i) {
    if (!composite[i]) primes.push_back(i);
  }
  return primes;
}

}  // namespace

const std::vector<u32>& small_primes() {
  static const std::vector<u32> primes = [] {
    std::vector<u32> out;
    for (u64 p : simple_sieve(1'000'000)) out.push_back(static_cast<u32>(p));
    return out;
  }();
  return primes;
}

void for_primes(u64 lo, u64 hi, const std::function<void(u64)>& fn, u64 segment_size) {
  if (segment_size == 0) throw std::invalid_argument("for_primes: zero segment size");
  if (hi < lo || hi < 2) return;
  if (lo <= 2) fn(2);
  u64 from = std::max<u64>(lo, 3);
  if ((from & 1) == 0) ++from;
  if (from > hi) return;

  const u64 root = isqrt(hi);
  if (root > 100'000'000ULL) throw std::invalid_argument("for_primes: range too large");
  const std::vector<u64> base = simple_sieve(root);

  std::vector<std::uint8_t> is_comp;
  for (u64 seg_lo = from; seg_lo <= hi; ) {
    const u64 span = std::min<u64>(segment_size, hi - seg_lo + 1);
    const u64 seg_hi = seg_lo + span - 1;  // inclusive; seg_lo odd
    const u64 count = (seg_hi - seg_lo) / 2 + 1;  // odd numbers in segment
    is_comp.assign(count, 0);
    for (u64 p : base) {
      if (p == 2) continue;
      if (p * p > seg_hi) break;
      u64 start = std::max(p * p, (seg_lo + p - 1) / p * p);
      if ((start & 1) == 0) start += p;
      for (u64 v = start; v <= seg_hi; v += 2 * p) is_comp[(v - seg_lo) / 2] = 1;
    }
    for (u64 i = 0; i < count; ++i) {
      if (!is_comp[i]) fn(seg_lo + 2 * i);
    }
    if (seg_hi >= hi) break;
    seg_lo = seg_hi + 1;
    if ((seg_lo & 1) == 0) ++seg_lo;
  }
}

std::vector<u64> sieve_primes(u64 lo, u64 hi, std::optional<Residue> filter, u64 segment_size) {
  if (filter && filter->modulus == 0) throw std::invalid_argument("sieve_primes: zero filter modulus");
  std::vector<u64> out;
  for_primes(lo, hi, [&](u64 p) {
    if (!filter || filter->matches(p)) out.push_back(p);
  }, segment_size);
  return out;
}

// ---------------------------------------------------------------- factoring

unsigned Factorization::big_omega() const {
  unsigned total = 0;
  for (const auto& f : factors) total += f.exponent;
  return total;
}

BigInt Factorization::radical() const {
  BigInt r = 1;
  for (const auto& f : factors) r *= f.prime;
  return r;
}

bool Factorization::squarefree() const {
  for (const auto& f : factors) {
    if (f.exponent > 1) return false;
  }
  return true;
}

unsigned Factorization::exponent_of(const BigInt& p) const {
  for (const auto& f : factors) {
    if (f.prime == p) return f.exponent;
  }
  return 0;
}

u64 Factorization::prime64(std::size_t i) const {
  const BigInt& p = factors.at(i).prime;
  if (p > BigInt(UINT64_MAX)) throw std::domain_error("prime64: prime exceeds 64 bits");
  return static_cast<u64>(p);
}

bool Factorization::check() const {
  BigInt prod = 1;
  const BigInt* prev = nullptr;
  for (const auto& f : factors) {
    if (f.exponent == 0) return false;
    if (prev != nullptr && !(*prev < f.prime)) return false;
    if (!is_prime(f.prime)) return false;
    prod *= pow_big(f.prime, f.exponent);
    prev = &f.prime;
  }
  return prod == value;
}

namespace {

// Brent's cycle-based rho on the fast tier. Returns 0 when the iteration
// budget runs out. n must be odd, composite, and > 1.
u128 brent_rho_u128(u128 n, u64& budget) {
  for (u128 c = 1; budget > 0; ++c) {
    u128 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const u64 batch = 128;
    while (g == 1) {
      x = y;
      for (u128 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
      if (r > budget) {
        budget = 0;
        return 0;
      }
      budget -= static_cast<u64>(r);
      u128 k = 0;
      while (k < r && g == 1) {
        ys = y;
        const u128 limit = std::min<u128>(batch, r - k);
        for (u128 i = 0; i < limit; ++i) {
          y = (mulmod(y, y, n) + c) % n;
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u128(q, n);
        k += batch;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time.
      g = 1;
      while (g == 1) {
        ys = (mulmod(ys, ys, n) + c) % n;
        g = gcd_u128(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
    // Cycle collapsed; retry with the next polynomial.
  }
  return 0;
}

BigInt brent_rho_big(const BigInt& n, u64& budget) {
  using boost::multiprecision::gcd;
  for (BigInt c = 1; budget > 0; ++c) {
    BigInt y = 2, q = 1, g = 1, x = 0, ys = 0;
    u64 r = 1;
    const u64 batch = 64;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = (y * y + c) % n;
      budget -= std::min<u64>(r, budget);
      if (budget == 0) return 0;
      u64 k = 0;
      while (k < r && g == 1) {
        ys = y;
        const u64 limit = std::min<u64>(batch, r - k);
        for (u64 i = 0; i < limit; ++i) {
          y = (y * y + c) % n;
          q = q * boost::multiprecision::abs(x - y) % n;
        }
        g = gcd(q, n);
        k += batch;
      }
      r *= 2;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        g = gcd(boost::multiprecision::abs(x - ys), n);
      }
    }
    if (g != n) return g;
  }
  return 0;
}

void merge_factor(std::map<BigInt, unsigned>& acc, const BigInt& p, unsigned e) {
  acc[p] += e;
}

Factorization from_map(const BigInt& value, const std::map<BigInt, unsigned>& acc) {
  Factorization f;
  f.value = value;
  for (const auto& [p, e] : acc) f.factors.push_back({p, e});
  return f;
}

}  // namespace

Factorization factorize(const BigInt& t, const FactorBudget& budget) {
  if (t < 1) throw std::domain_error("factorize: input must be positive");
  std::map<BigInt, unsigned> acc;
  if (t == 1) return from_map(t, acc);

  BigInt work = t;
  const u64 tried = std::min<u64>(budget.trial_bound, small_primes().back());
  for (u32 p : small_primes()) {
    if (p > tried) break;
    if (BigInt(p) * p > work) break;
    if (work % p == 0) {
      unsigned e = 0;
      do {
        work /= p;
        ++e;
      } while (work % p == 0);
      merge_factor(acc, p, e);
    }
  }
  if (work > 1 && work <= BigInt(tried) * tried) {
    // Residue below the square of the trial bound is prime.
    merge_factor(acc, work, 1);
    work = 1;
  }

  u64 rho_budget = budget.rho_iterations;
  std::vector<BigInt> pending;
  if (work > 1) pending.push_back(work);
  while (!pending.empty()) {
    BigInt c = pending.back();
    pending.pop_back();
    if (is_prime(c)) {
      merge_factor(acc, c, 1);
      continue;
    }
    BigInt f;
    if (c < bigint_from(fast_modulus_limit)) {
      f = bigint_from(brent_rho_u128(u128_from(c), rho_budget));
    } else {
      f = brent_rho_big(c, rho_budget);
    }
    if (f == 0 || f == c) {
      BigInt unfactored = c;
      for (const BigInt& rest : pending) unfactored *= rest;
      throw FactorizationError("factorize: rho budget exhausted", from_map(t, acc), unfactored);
    }
    pending.push_back(f);
    pending.push_back(c / f);
  }
  return from_map(t, acc);
}

Factorization factorize(u64 t, const FactorBudget& budget) {
  if (t < 1) throw std::domain_error("factorize: input must be positive");
  std::map<BigInt, unsigned> acc;
  if (t == 1) return from_map(BigInt(t), acc);

  u64 work = t;
  const u64 tried = std::min<u64>(budget.trial_bound, small_primes().back());
  for (u32 p : small_primes()) {
    if (p > tried) break;
    if (static_cast<u64>(p) * p > work) break;
    if (work % p == 0) {
      unsigned e = 0;
      do {
        work /= p;
        ++e;
      } while (work % p == 0);
      merge_factor(acc, p, e);
    }
  }
  if (work > 1 && work <= tried * tried) {
    merge_factor(acc, work, 1);
    work = 1;
  }
  if (work > 1) {
    u64 rho_budget = budget.rho_iterations;
    std::vector<u64> pending{work};
    while (!pending.empty()) {
      const u64 c = pending.back();
      pending.pop_back();
      if (is_prime(c)) {
        merge_factor(acc, c, 1);
        continue;
      }
      const u64 f = static_cast<u64>(brent_rho_u128(c, rho_budget));
      if (f == 0 || f == c) {
        BigInt unfactored = c;
        for (u64 rest : pending) unfactored *= rest;
        throw FactorizationError("factorize: rho budget exhausted", from_map(BigInt(t), acc),
                                 unfactored);
      }
      pending.push_back(f);
      pending.push_back(c / f);
    }
  }
  return from_map(BigInt(t), acc);
}

Factorization factorize_cached(u64 t) {
  static std::unordered_map<u64, Factorization> cache;
  static std::shared_mutex mutex;
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
  }
  Factorization f = factorize(t);
  std::unique_lock lock(mutex);
  return cache.emplace(t, std::move(f)).first->second;
}

Factorization make_factorization(const std::vector<std::pair<BigInt, unsigned>>& parts) {
  std::map<BigInt, unsigned> acc;
  BigInt value = 1;
  for (const auto& [p, e] : parts) {
    if (e == 0) continue;
    if (!is_prime(p)) throw std::domain_error("make_factorization: part is not prime");
    merge_factor(acc, p, e);
    value *= pow_big(p, e);
  }
  return from_map(value, acc);
}

// ---------------------------------------------------------------- arithmetic

unsigned valuation(const BigInt& p, const BigInt& t) {
  if (p < 2 || t < 1) throw std::domain_error("valuation: requires p >= 2, t >= 1");
  unsigned e = 0;
  BigInt work = t;
  while (work % p == 0) {
    work /= p;
    ++e;
  }
  return e;
}

unsigned valuation(u64 p, u64 t) {
  if (p < 2 || t < 1) throw std::domain_error("valuation: requires p >= 2, t >= 1");
  unsigned e = 0;
  while (t % p == 0) {
    t /= p;
    ++e;
  }
  return e;
}

BigInt euler_phi(const Factorization& f) {
  BigInt phi = 1;
  for (const auto& pp : f.factors) {
    phi *= pow_big(pp.prime, pp.exponent - 1) * (pp.prime - 1);
  }
  return phi;
}

BigInt mult_order(const BigInt& t, const BigInt& s, const Factorization& s_fact) {
  if (s < 1) throw std::domain_error("mult_order: modulus must be positive");
  if (s == 1) return 1;
  const BigInt base = mod_norm(t, s);
  if (boost::multiprecision::gcd(base, s) != 1) {
    throw std::domain_error("mult_order: base not coprime to modulus");
  }
  // Carmichael exponent of s, kept in factored form for stripping.
  std::map<BigInt, unsigned> lam;
  for (const auto& pp : s_fact.factors) {
    if (pp.prime == 2) {
      if (pp.exponent == 2) merge_factor(lam, 2, 1);
      if (pp.exponent >= 3) merge_factor(lam, 2, pp.exponent - 2);
      continue;
    }
    if (pp.exponent > 1) merge_factor(lam, pp.prime, pp.exponent - 1);
    const BigInt pm1 = pp.prime - 1;
    Factorization fm1 = pm1 <= BigInt(UINT64_MAX) ? factorize_cached(static_cast<u64>(pm1))
                                                  : factorize(pm1);
    for (const auto& q : fm1.factors) {
      auto it = lam.find(q.prime);
      if (it == lam.end() || it->second < q.exponent) lam[q.prime] = q.exponent;
      // lcm: keep the max exponent seen.
    }
  }
  BigInt order = 1;
  for (const auto& [p, e] : lam) order *= pow_big(p, e);
  for (const auto& [p, e] : lam) {
    for (unsigned i = 0; i < e; ++i) {
      const BigInt reduced = order / p;
      if (powmod(base, reduced, s) == 1) {
        order = reduced;
      } else {
        break;
      }
    }
  }
  return order;
}

BigInt mult_order(const BigInt& t, const BigInt& s) {
  const Factorization s_fact =
      s <= BigInt(UINT64_MAX) ? factorize_cached(static_cast<u64>(s)) : factorize(s);
  return mult_order(t, s, s_fact);
}

u64 mult_order(u64 t, u64 s) {
  return static_cast<u64>(mult_order(BigInt(t), BigInt(s), factorize_cached(s)));
}

// ---------------------------------------------------------------- divisors

std::vector<Divisor> all_divisors(const Factorization& f) {
  std::vector<Divisor> out;
  out.push_back({BigInt(1), std::vector<unsigned>(f.factors.size(), 0)});
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    const std::size_t have = out.size();
    BigInt power = 1;
    for (unsigned e = 1; e <= f.factors[i].exponent; ++e) {
      power *= f.factors[i].prime;
      for (std::size_t j = 0; j < have; ++j) {
        Divisor d = out[j];
        d.value *= power;
        d.exponents[i] = e;
        out.push_back(std::move(d));
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Divisor& a, const Divisor& b) { return a.value < b.value; });
  return out;
}

// ---------------------------------------------------------------- misc

BigInt pow_big(const BigInt& base, unsigned e) {
  return boost::multiprecision::pow(base, e);
}

u64 isqrt(u64 x) {
  if (x == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r > x / r) --r;
  while ((r + 1) <= x / (r + 1)) ++r;
  return r;
}

BigInt iroot(const BigInt& x, unsigned k) {
  if (x < 0 || k == 0) throw std::domain_error("iroot: requires x >= 0, k >= 1");
  if (x == 0) return 0;
  if (k == 1) return x;
  BigInt lo = 1;
  BigInt hi = BigInt(1) << (static_cast<unsigned>(boost::multiprecision::msb(x)) / k + 1);
  while (lo < hi) {
    const BigInt mid = (lo + hi + 1) / 2;
    if (pow_big(mid, k) <= x) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace bscan
