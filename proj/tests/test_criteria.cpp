#include <numeric>
#include <random>

#include "bscan/criteria.hpp"
#include "doctest.h"

using namespace bscan;
namespace mp = boost::multiprecision;

namespace {

// ---- fully independent oracles (tiny inputs): no order machinery at all ----

// Scan every exponent j up to s: is some r^j == -1 mod s?
bool sp_brute(i64 r, u64 s) {
  if (s <= 2) return true;
  const u64 rm = static_cast<u64>(((r % static_cast<i64>(s)) + static_cast<i64>(s))) % s;
  u64 acc = 1 % s;
  for (u64 j = 0; j <= s; ++j) {
    if (acc == s - 1) return true;
    acc = acc * rm % s;
  }
  return false;
}

// ---- structurally naive implementations (medium inputs): literal formulas,
// no caching, no per-prime-power decomposition ----

bool sp_naive(const BigInt& r, const BigInt& s) {
  if (s <= 2) return true;
  BigInt rm = r % s;
  if (rm < 0) rm += s;
  if (mp::gcd(rm, s) != 1) return false;
  const BigInt d = mult_order(rm, s);
  if (d % 2 != 0) return false;
  return powmod(rm, d / 2, s) == s - 1;
}

bool sc_naive(const BigInt& r, const BigInt& s) {
  for (const auto& pp : factorize(r).factors) {
    BigInt part = s;
    while (part % pp.prime == 0) part /= pp.prime;
    if (!sp_naive(pp.prime, part)) return false;
  }
  return true;
}

BigInt mq_naive(const BigInt& m, const BigInt& q) {
  BigInt prod = 1;
  for (const auto& pp : factorize(m).factors) {
    if (pp.prime != q) prod *= pp.prime;
  }
  if (m % 2 == 0 && q % 2 != 0) prod *= 2;
  return prod;
}

unsigned nu_naive(const BigInt& p, const BigInt& t) {
  unsigned e = 0;
  BigInt w = t;
  while (w % p == 0) {
    w /= p;
    ++e;
  }
  return e;
}

unsigned b_naive(const BigInt& r, const BigInt& m, const BigInt& n) {
  std::vector<BigInt> qs;
  for (const auto& pp : factorize(n).factors) {
    if (pp.prime != r) qs.push_back(pp.prime);
  }
  if (qs.empty()) return r == 2 ? 2 : 1;
  unsigned best = 0;
  for (const BigInt& q : qs) {
    const BigInt mq = mq_naive(m, q);
    const BigInt ord = mq == 1 ? BigInt(1) : mult_order(q, mq);
    unsigned term;
    if (r == 2) {
      term = nu_naive(2, q * q - 1) + nu_naive(2, ord) - 1;
    } else {
      unsigned lift = 1;
      BigInt mod = r * r;
      while (powmod(q, r - 1, mod) == 1) {
        ++lift;
        mod *= r;
      }
      term = lift + nu_naive(r, ord);
    }
    best = std::max(best, term);
  }
  return best;
}

BigInt F_naive(const BigInt& m, const BigInt& n) {
  BigInt prod = 1;
  for (const auto& pp : factorize(m).factors) {
    prod *= pow_big(pp.prime, b_naive(pp.prime, m, n));
  }
  return mp::gcd(m, prod);
}

std::vector<BigInt> divisors_naive(const BigInt& v) {
  std::vector<BigInt> out;
  for (const auto& d : all_divisors(factorize(v))) out.push_back(d.value);
  return out;
}

bool turyn_naive(const BigInt& u) {
  const BigInt n = 4 * u * u;
  for (const BigInt& r : divisors_naive(u)) {
    if (r == 1) continue;
    for (const BigInt& s : divisors_naive(n)) {
      const unsigned k = factorize(mp::gcd(r, s)).omega();
      if (k < 1) continue;
      if (r * s > (BigInt(1) << (k - 1)) * n && sc_naive(r, s)) return true;
    }
  }
  return false;
}

bool ls5_naive(const BigInt& u) {
  for (const auto& pp : factorize(u).factors) {
    const BigInt& p = pp.prime;
    if (p == 2) continue;
    if (pow_big(p, 2 * pp.exponent) <= 2 * u) continue;
    const BigInt m = u / pow_big(p, pp.exponent);
    for (const BigInt& r : divisors_naive(m)) {
      if (!sc_naive(r, p)) continue;
      BigInt g = 0;
      bool any = false;
      for (const auto& qq : factorize(m / r).factors) {
        any = true;
        g = mp::gcd(g, mult_order(qq.prime, p));
      }
      if (!any || g * r * r > m * m) return true;
    }
  }
  return false;
}

bool ls1_naive(const BigInt& u) {
  const BigInt n = 4 * u * u;
  for (const BigInt& m : divisors_naive(u)) {
    for (const BigInt& w : divisors_naive(n)) {
      if (!sc_naive(m, n / w)) continue;
      const BigInt F = F_naive(n / w, (u / m) * (u / m));
      BigInt phi = 1;
      for (const auto& pp : factorize(F).factors) {
        phi *= pow_big(pp.prime, pp.exponent - 1) * (pp.prime - 1);
      }
      if (n * phi > w * w * F * F) return true;
    }
  }
  return false;
}

bool ls10_naive(const BigInt& u) {
  const Factorization uf = factorize(u);
  for (const auto& pp : uf.factors) {
    if (pp.prime % 4 != 3) return false;  // hypothesis unmet -> never excludes
  }
  for (const auto& pp : uf.factors) {
    const BigInt& p = pp.prime;
    for (const BigInt& w : divisors_naive(u)) {
      if (!sc_naive(w, p)) continue;
      if (w == u) return true;
      BigInt g = 0;
      bool any = false;
      for (const auto& qq : factorize(u / w).factors) {
        if (qq.prime == p) continue;
        any = true;
        g = mp::gcd(g, mult_order(qq.prime, p));
      }
      if (any && g * w * w <= u * u) return true;
    }
  }
  return false;
}

Factorization fact(std::vector<std::pair<BigInt, unsigned>> parts) {
  return make_factorization(parts);
}

}  // namespace

TEST_CASE("semiprimitivity matches the exponent-scan oracle exhaustively") {
  for (u64 s = 1; s <= 300; ++s) {
    const Factorization sf = factorize(s);
    for (i64 r = -3; r <= 120; ++r) {
      const bool expect = sp_brute(r, s);
      CAPTURE(r);
      CAPTURE(s);
      REQUIRE(is_semiprimitive(BigInt(r), BigInt(s)) == expect);
      REQUIRE(is_semiprimitive(BigInt(r), sf) == expect);
    }
  }
}

TEST_CASE("semiprimitivity matches the order-based form on random inputs") {
  std::mt19937_64 rng(0x5e111);
  for (int i = 0; i < 4000; ++i) {
    const u64 s = 1 + rng() % 2000000;
    const u64 r = rng() % (s + 10);
    const bool expect = sp_naive(BigInt(r), BigInt(s));
    CAPTURE(r);
    CAPTURE(s);
    REQUIRE(is_semiprimitive(BigInt(r), BigInt(s)) == expect);
  }
}

TEST_CASE("semiprimitivity spec examples") {
  CHECK(is_semiprimitive(BigInt(4), BigInt(5)));
  CHECK_FALSE(is_semiprimitive(BigInt(2), BigInt(7)));
  CHECK(is_semiprimitive(BigInt(2), BigInt(9)));
  CHECK(is_semiprimitive(BigInt(7), BigInt(1)));
  CHECK(is_semiprimitive(BigInt(4), BigInt(2)));
  CHECK_FALSE(is_semiprimitive(BigInt(6), BigInt(9)));
}

TEST_CASE("restriction to divisors preserves semiprimitivity") {
  std::mt19937_64 rng(0xd17);
  int checked = 0;
  for (int i = 0; checked < 300 && i < 30000; ++i) {
    const u64 s = 3 + rng() % 100000;
    const u64 r = 2 + rng() % 1000;
    if (!is_semiprimitive(BigInt(r), BigInt(s))) continue;
    ++checked;
    for (const auto& d : all_divisors(factorize(s))) {
      if (d.value <= 2) continue;
      if (mp::gcd(BigInt(r), d.value) != 1) continue;
      CAPTURE(r);
      CAPTURE(s);
      CAPTURE(d.value);
      REQUIRE(is_semiprimitive(BigInt(r), d.value));
    }
  }
  CHECK(checked == 300);
}

TEST_CASE("p_free_part") {
  CHECK(p_free_part(BigInt(72), BigInt(2)) == 9);
  CHECK(p_free_part(BigInt(7), BigInt(3)) == 7);
  const BigInt s = 2 * BigInt(2953) * 2953;
  CHECK(p_free_part(s, BigInt(2953)) == 2);
  const Factorization sf = fact({{2, 1}, {2953, 2}});
  CHECK(p_free_part(sf, BigInt(2953)).value == 2);
  CHECK(p_free_part(sf, BigInt(7)).value == sf.value);
}

TEST_CASE("self-conjugacy examples and divisor restriction") {
  CHECK(is_self_conjugate(BigInt(2), BigInt(9)));
  CHECK_FALSE(is_self_conjugate(BigInt(6), BigInt(35)));
  CHECK(is_self_conjugate(BigInt(1), BigInt(123456)));
  CHECK_FALSE(is_self_conjugate(BigInt(21), BigInt(3)));  // 7 == 1 mod 3

  std::mt19937_64 rng(0x5c5c);
  int checked = 0;
  for (int i = 0; checked < 120 && i < 40000; ++i) {
    const u64 r = 2 + rng() % 300;
    const u64 s = 2 + rng() % 30000;
    if (!is_self_conjugate(BigInt(r), BigInt(s))) continue;
    ++checked;
    for (const auto& d : all_divisors(factorize(s))) {
      CAPTURE(r);
      CAPTURE(s);
      CAPTURE(d.value);
      REQUIRE(is_self_conjugate(BigInt(r), d.value));
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("m_q follows the printed definition") {
  CHECK(m_q(BigInt(45), BigInt(3)) == 5);
  CHECK(m_q(BigInt(12), BigInt(3)) == 4);
  CHECK(m_q(BigInt(1), BigInt(7)) == 1);
  CHECK(m_q(BigInt(12), BigInt(2)) == 3);
  CHECK(m_q(BigInt(30), BigInt(5)) == 12);  // 2*3 doubled
  std::mt19937_64 rng(0x30f);
  for (int i = 0; i < 500; ++i) {
    const u64 m = 1 + rng() % 1000000;
    const u64 q = small_primes()[rng() % 20];
    REQUIRE(m_q(BigInt(m), BigInt(q)) == mq_naive(BigInt(m), BigInt(q)));
  }
}

TEST_CASE("b_exponent conventions and random agreement with the naive form") {
  CHECK(b_exponent(BigInt(2), BigInt(45), BigInt(8)) == 2);
  CHECK(b_exponent(BigInt(3), BigInt(45), BigInt(27)) == 1);
  CHECK(b_exponent(BigInt(5), BigInt(45), BigInt(1)) == 1);
  CHECK(b_exponent(BigInt(2), BigInt(45), BigInt(1)) == 2);

  std::mt19937_64 rng(0xbe39);
  const std::vector<u64> rs = {2, 3, 5, 7, 11, 13};
  for (int i = 0; i < 400; ++i) {
    const BigInt r = rs[rng() % rs.size()];
    const BigInt m = 1 + rng() % 1000000;
    const BigInt n = 1 + rng() % 1000000;
    CAPTURE(r);
    CAPTURE(m);
    CAPTURE(n);
    REQUIRE(b_exponent(r, m, n) == b_naive(r, m, n));
  }
}

TEST_CASE("field_descent_F divides m and matches the naive form") {
  CHECK(field_descent_F(BigInt(1), BigInt(12345)) == 1);
  std::mt19937_64 rng(0xfd);
  for (int i = 0; i < 300; ++i) {
    const BigInt m = 1 + rng() % 2000000;
    const BigInt n = 1 + rng() % 2000000;
    const BigInt F = field_descent_F(m, n);
    CAPTURE(m);
    CAPTURE(n);
    REQUIRE(m % F == 0);
    REQUIRE(F == F_naive(m, n));
  }
}

TEST_CASE("flimsy contribution example") {
  // 41 divides 2952 = 2953 - 1, so the group mod 2953 has 41-torsion; the
  // order of 13 there is the full 2952, which lifts b(41, *, u0) past the
  // bare Fermat term. 2953 itself gets no such help from {5, 13, 41}.
  const Factorization u0 = fact({{13, 1}, {41, 1}, {2953, 1}, {138200401, 1}});
  const Factorization m_sq = fact({{5, 2}, {13, 2}, {41, 2}, {2953, 2}});
  CHECK(mult_order(BigInt(13), BigInt(2953)) % 41 == 0);
  CHECK(b_exponent(BigInt(41), m_sq, u0) >= 2);
  CHECK(b_exponent(BigInt(2953), m_sq, u0) == 1);
  for (u64 r : {13, 41, 2953}) {
    CHECK(b_exponent(BigInt(r), m_sq, u0) == b_naive(BigInt(r), m_sq.value, u0.value));
  }
}

TEST_CASE("field descent keeps F(u0^2, u0) at u0^2") {
  const Factorization u0 = fact({{13, 1}, {41, 1}, {2953, 1}, {138200401, 1}});
  const Factorization u0_sq = fact({{13, 2}, {41, 2}, {2953, 2}, {138200401, 2}});
  CHECK(field_descent_F(u0_sq, u0).value == u0.value * u0.value);
  CHECK(test_field_descent(u0).passed());
}

TEST_CASE("square field-descent equivalence on small squarefree candidates") {
  // F(u^2, u) = u^2 iff every prime of u sees another prime q that is either
  // a Wieferich partner or has order divisible by p mod the q-free part.
  int count = 0;
  for (u64 u = 5; u <= 100000; u += 2) {
    const Factorization f = factorize_cached(u);
    if (!f.squarefree() || f.omega() < 2) continue;
    bool eligible = true;
    for (const auto& pp : f.factors) {
      if (pp.prime % 4 != 1) {
        eligible = false;
        break;
      }
    }
    if (!eligible) continue;
    ++count;
    bool condition = true;
    for (std::size_t i = 0; i < f.factors.size() && condition; ++i) {
      const u64 p = f.prime64(i);
      bool found = false;
      for (std::size_t j = 0; j < f.factors.size() && !found; ++j) {
        if (j == i) continue;
        const u64 q = f.prime64(j);
        if (powmod(BigInt(q), BigInt(p - 1), BigInt(p) * p) == 1) found = true;
        else if (mult_order(q, u / q) % p == 0) found = true;
      }
      condition = found;
    }
    std::vector<std::pair<BigInt, unsigned>> sq_parts;
    for (const auto& pp : f.factors) sq_parts.emplace_back(pp.prime, 2 * pp.exponent);
    const Factorization u_sq = make_factorization(sq_parts);
    CAPTURE(u);
    REQUIRE((field_descent_F(u_sq, f).value == BigInt(u) * u) == condition);
  }
  CHECK(count > 500);
}

TEST_CASE("eks and large-prime tests") {
  CHECK(test_eks(factorize(static_cast<u64>(65))).passed());
  const Verdict v21 = test_eks(factorize(static_cast<u64>(21)));
  CHECK(v21.excluded());
  CHECK(v21.witness == std::vector<BigInt>{3});
  CHECK(test_eks(factorize(static_cast<u64>(1))).passed());
  CHECK(revalidate(factorize(static_cast<u64>(21)), v21));

  CHECK(test_large_prime_cor(factorize(static_cast<u64>(11715))).passed());
  const Verdict v505 = test_large_prime_cor(factorize(static_cast<u64>(505)));
  CHECK(v505.excluded());
  CHECK(v505.witness == std::vector<BigInt>{101, 1});
  CHECK(revalidate(factorize(static_cast<u64>(505)), v505));
  const Verdict vp = test_large_prime_cor(factorize(static_cast<u64>(7)));
  CHECK(vp.excluded());
  CHECK(vp.witness == std::vector<BigInt>{7, 1});
}

TEST_CASE("turyn golden witnesses") {
  const Factorization v2 = fact({{5, 2}, {193, 1}, {4877, 1}, {53471161, 1}});
  const Verdict t2 = test_turyn(v2, Mode::barker);
  REQUIRE(t2.excluded());
  const BigInt r2 = 53471161;
  const BigInt s2 = 2 * BigInt(4877) * 4877 * r2 * r2;
  CHECK(t2.witness == std::vector<BigInt>{r2, s2});
  CHECK(revalidate(v2, t2));

  const Factorization v4 = fact({{5, 1}, {5333, 1}, {BigInt("188748146801"), 1}});
  const Verdict t4 = test_turyn(v4, Mode::barker);
  REQUIRE(t4.excluded());
  const BigInt r4 = 5333;
  const BigInt s4 = BigInt("188748146801") * BigInt("188748146801") * r4 * r4;
  CHECK(t4.witness == std::vector<BigInt>{r4, s4});
  CHECK(revalidate(v4, t4));

  const Factorization v6 = fact({{5, 1}, {53, 1}, {193, 1}, {4877, 1}, {53471161, 1}});
  const Verdict t6 = test_turyn(v6, Mode::barker);
  REQUIRE(t6.excluded());
  const BigInt r6 = BigInt(4877) * 53471161;
  const BigInt s6 = r6 * r6;
  CHECK(t6.witness == std::vector<BigInt>{r6, s6});
  CHECK(revalidate(v6, t6));

  // The published witnesses must re-validate no matter what the search found.
  CHECK(revalidate(v2, Verdict{Theorem::turyn, Outcome::excluded, {r2, s2}}));
  CHECK(revalidate(v4, Verdict{Theorem::turyn, Outcome::excluded, {r4, s4}}));
  CHECK(revalidate(v6, Verdict{Theorem::turyn, Outcome::excluded, {r6, s6}}));

  const Factorization v7 =
      fact({{5, 1}, {13, 1}, {29, 1}, {41, 1}, {2953, 1}, {138200401, 1}});
  CHECK(test_turyn(v7, Mode::barker).passed());
}

TEST_CASE("ls5 golden witnesses") {
  const Factorization u0 = fact({{13, 1}, {41, 1}, {2953, 1}, {138200401, 1}});
  const Verdict w0 = test_ls5(u0);
  REQUIRE(w0.excluded());
  CHECK(w0.witness == std::vector<BigInt>{138200401, 2953});
  CHECK(revalidate(u0, w0));

  const Factorization v1 = fact({{5, 1}, {13, 1}, {41, 1}, {2953, 1}, {138200401, 1}});
  const Verdict w1 = test_ls5(v1);
  REQUIRE(w1.excluded());
  CHECK(w1.witness == std::vector<BigInt>{138200401, 5 * BigInt(2953)});
  CHECK(revalidate(v1, w1));

  const Factorization v3 = fact({{5, 1}, {29, 1}, {41, 1}, {2953, 1}, {138200401, 1}});
  const Verdict w3 = test_ls5(v3);
  REQUIRE(w3.excluded());
  CHECK(w3.witness == std::vector<BigInt>{138200401, 29 * BigInt(2953)});
  CHECK(revalidate(v3, w3));

  const Factorization v5 = fact({{13, 1}, {29, 1}, {41, 1}, {2953, 1}, {138200401, 1}});
  const Verdict w5 = test_ls5(v5);
  REQUIRE(w5.excluded());
  CHECK(w5.witness == std::vector<BigInt>{138200401, 29 * BigInt(2953)});
  CHECK(revalidate(v5, w5));

  const Factorization v7 =
      fact({{5, 1}, {13, 1}, {29, 1}, {41, 1}, {2953, 1}, {138200401, 1}});
  CHECK(test_ls5(v7).passed());
  CHECK(test_ls1(v7).passed());
}

TEST_CASE("ls10 examples") {
  const Verdict v33 = test_ls10(factorize(static_cast<u64>(33)));
  REQUIRE(v33.excluded());
  CHECK(v33.witness == std::vector<BigInt>{3, 33});
  CHECK(revalidate(factorize(static_cast<u64>(33)), v33));
  CHECK(revalidate(factorize(static_cast<u64>(33)),
                   Verdict{Theorem::ls10, Outcome::excluded, {BigInt(3), BigInt(33)}}));
  CHECK(test_ls10(factorize(static_cast<u64>(65))).passed());  // no prime == 3 mod 4
}

TEST_CASE("enumeration caps yield inconclusive") {
  const Factorization big = fact({{3, 9}});
  CHECK(test_turyn(big, Mode::barker).outcome == Outcome::inconclusive);
  CHECK(test_ls5(big).outcome == Outcome::inconclusive);
  CHECK(test_ls1(fact({{3, 7}})).outcome == Outcome::inconclusive);
  CriteriaCaps caps;
  caps.turyn_max_omega = 12;
  CHECK(test_turyn(big, Mode::barker, caps).outcome != Outcome::inconclusive);
}

TEST_CASE("theorem booleans agree with brute-force search on random candidates") {
  std::mt19937_64 rng(0x7e57);
  for (int i = 0; i < 120; ++i) {
    const u64 u = 3 + 2 * (rng() % 1500);
    const Factorization f = factorize_cached(u);
    CAPTURE(u);
    REQUIRE(test_turyn(f, Mode::barker).excluded() == turyn_naive(u));
    REQUIRE(test_ls5(f).excluded() == ls5_naive(u));
    REQUIRE(test_ls10(f).excluded() == ls10_naive(u));
  }
  for (int i = 0; i < 40; ++i) {
    const u64 u = 3 + 2 * (rng() % 200);
    CAPTURE(u);
    REQUIRE(test_ls1(factorize_cached(u)).excluded() == ls1_naive(u));
  }
}

TEST_CASE("every excluded verdict re-validates") {
  std::mt19937_64 rng(0xe7a1);
  int excluded_seen = 0;
  for (int i = 0; i < 200; ++i) {
    const u64 u = 3 + 2 * (rng() % 100000);
    const Factorization f = factorize_cached(u);
    for (const Verdict& v :
         {test_eks(f), test_large_prime_cor(f), test_field_descent(f),
          test_turyn(f, Mode::barker), test_ls5(f), test_ls1(f), test_ls10(f)}) {
      if (v.excluded()) ++excluded_seen;
      const std::string tn(theorem_name(v.theorem));
      CAPTURE(u);
      CAPTURE(tn);
      REQUIRE(revalidate(f, v));
    }
  }
  CHECK(excluded_seen > 100);
}

TEST_CASE("name round-trips") {
  for (Theorem t : {Theorem::eks, Theorem::large_prime_cor, Theorem::field_descent,
                    Theorem::turyn, Theorem::ls5, Theorem::ls1, Theorem::ls10}) {
    CHECK(parse_theorem(theorem_name(t)) == t);
  }
  CHECK(parse_mode("barker") == Mode::barker);
  CHECK(parse_mode("chm") == Mode::chm);
  CHECK_THROWS_AS(parse_mode("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_theorem("x"), std::invalid_argument);
  CHECK(outcome_name(Outcome::pass) == "pass");
  CHECK(outcome_name(Outcome::excluded) == "excluded");
  CHECK(outcome_name(Outcome::inconclusive) == "inconclusive");
}
