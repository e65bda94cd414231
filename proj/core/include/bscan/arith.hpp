// Integer arithmetic kernel: exact modular arithmetic in two tiers (a fast
// __uint128_t tier for moduli below 2^75 and an arbitrary-precision tier on
// boost cpp_int), deterministic primality testing, segmented sieving,
// factorization, and multiplicative orders.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bscan {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

// Largest modulus accepted by the fast tier: products are split so that every
// intermediate fits in 128 bits. 75 bits covers p^2 for primes p <= 1.9e11.
inline constexpr int fast_modulus_bits = 75;

// Every integer below this bound is classified exactly by the fixed
// Miller-Rabin witness battery; beyond it the verdict can be "probable".
const BigInt& deterministic_primality_bound();

std::string to_string(u128 v);
u128 u128_from(const BigInt& v);
BigInt bigint_from(u128 v);

// ---------------------------------------------------------------- modular ops

// Exact (a*b) mod m. Requires m >= 1 and m < 2^75.
u128 mulmod(u128 a, u128 b, u128 m);
u64 mulmod(u64 a, u64 b, u64 m);

// Exact (b^e) mod m for the same modulus range. powmod(b, 0, m) == 1 mod m.
u128 powmod(u128 b, u128 e, u128 m);
u64 powmod(u64 b, u64 e, u64 m);
u128 powmod(u128 b, const BigInt& e, u128 m);
BigInt powmod(const BigInt& b, const BigInt& e, const BigInt& m);

// ---------------------------------------------------------------- primality

enum class Primality { composite, prime, probably_prime };

// Deterministic for t < deterministic_primality_bound() (~3.3e24); beyond that
// a Baillie-PSW-style battery yields probably_prime instead of prime.
Primality classify_prime(const BigInt& t);
bool is_prime(const BigInt& t);
bool is_prime(u64 t);

// ---------------------------------------------------------------- sieving

// Congruence filter "value % modulus == remainder". modulus >= 1.
struct Residue {
  u64 remainder = 0;
  u64 modulus = 1;
  bool matches(u64 v) const { return v % modulus == remainder; }
};

inline constexpr u64 default_segment_size = 10'000'000;

// All primes in [lo, hi] (inclusive), optionally filtered by a congruence.
// Memory is bounded by the segment size, not the range width.
std::vector<u64> sieve_primes(u64 lo, u64 hi,
                              std::optional<Residue> filter = std::nullopt,
                              u64 segment_size = default_segment_size);

// Streaming form: fn is invoked on every prime in [lo, hi] in ascending order.
void for_primes(u64 lo, u64 hi, const std::function<void(u64)>& fn,
                u64 segment_size = default_segment_size);

// Shared table of the primes below one million (trial-division base).
const std::vector<u32>& small_primes();

// ---------------------------------------------------------------- factoring

struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;

  bool operator==(const PrimePower& other) const = default;
};

// Complete prime factorization; primes strictly ascending, exponents >= 1.
struct Factorization {
  BigInt value = 1;
  std::vector<PrimePower> factors;

  unsigned omega() const { return static_cast<unsigned>(factors.size()); }
  unsigned big_omega() const;
  BigInt radical() const;
  bool squarefree() const;
  unsigned exponent_of(const BigInt& p) const;  // 0 when p is absent
  // The prime at index i, which must fit in 64 bits.
  u64 prime64(std::size_t i) const;
  bool check() const;  // product of prime powers equals value, primes ascending

  bool operator==(const Factorization& other) const = default;
};

struct FactorBudget {
  u64 trial_bound = 1'000'000;
  u64 rho_iterations = 100'000'000;
};

class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(std::string msg, Factorization partial, BigInt unfactored)
      : std::runtime_error(std::move(msg)),
        partial(std::move(partial)),
        unfactored(std::move(unfactored)) {}
  Factorization partial;   // factors recovered before giving up
  BigInt unfactored;       // composite cofactor that resisted the budget
};

// Throws FactorizationError when a composite cofactor survives the budget.
Factorization factorize(const BigInt& t, const FactorBudget& budget = {});
Factorization factorize(u64 t, const FactorBudget& budget = {});

// Process-wide memoized factorization for 64-bit inputs (thread-safe).
Factorization factorize_cached(u64 t);

// Assemble a Factorization from known parts; validates and sorts.
Factorization make_factorization(const std::vector<std::pair<BigInt, unsigned>>& parts);

// ---------------------------------------------------------------- arithmetic

// nu_p(t): the exact power of p dividing t. Requires p >= 2, t >= 1.
unsigned valuation(const BigInt& p, const BigInt& t);
unsigned valuation(u64 p, u64 t);

BigInt euler_phi(const Factorization& f);

// Multiplicative order of t modulo s. Requires gcd(t, s) == 1; ord_1(t) == 1.
// Walks down from the Carmichael exponent of s, stripping primes while the
// power stays 1.
BigInt mult_order(const BigInt& t, const BigInt& s, const Factorization& s_fact);
BigInt mult_order(const BigInt& t, const BigInt& s);
u64 mult_order(u64 t, u64 s);

// ---------------------------------------------------------------- divisors

// A divisor of a factored integer, carried with its exponent vector (aligned
// with the owning Factorization's prime list).
struct Divisor {
  BigInt value;
  std::vector<unsigned> exponents;
};

// All divisors of f, sorted ascending by value. tau(f) grows multiplicatively;
// callers cap omega before enumerating.
std::vector<Divisor> all_divisors(const Factorization& f);

// ---------------------------------------------------------------- misc

// Floor of the k-th root of x (x >= 0, k >= 1).
BigInt iroot(const BigInt& x, unsigned k);
u64 isqrt(u64 x);

BigInt pow_big(const BigInt& base, unsigned e);

}  // namespace bscan
