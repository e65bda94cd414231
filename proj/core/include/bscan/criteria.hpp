// Exclusion predicates for candidate orders n = 4u^2: semiprimitivity,
// self-conjugacy, the q-free squarefree part m_q, the exponent b(r,m,n), the
// field-descent bound F(m,n), and the seven theorem tests. Each test returns
// a verdict carrying a witness that can be re-validated from scratch.
#pragma once

#include <string>
#include <string_view>

#include "bscan/arith.hpp"

namespace bscan {

enum class Mode { barker, chm };

std::string_view mode_name(Mode mode);            // "barker" / "chm"
Mode parse_mode(std::string_view name);           // throws std::invalid_argument

enum class Theorem { eks, large_prime_cor, field_descent, turyn, ls5, ls1, ls10 };

std::string_view theorem_name(Theorem t);         // "EKS", "LargePrimeCor", ...
Theorem parse_theorem(std::string_view name);     // throws std::invalid_argument

enum class Outcome { pass, excluded, inconclusive };

std::string_view outcome_name(Outcome o);         // "pass", "excluded", "inconclusive"

struct Verdict {
  Theorem theorem;
  Outcome outcome = Outcome::pass;
  std::vector<BigInt> witness;  // theorem-specific tuple, empty unless excluded

  bool excluded() const { return outcome == Outcome::excluded; }
  bool passed() const { return outcome == Outcome::pass; }

  bool operator==(const Verdict& other) const = default;
};

// Enumeration caps: tests whose divisor searches would blow up beyond these
// Omega(u) limits return `inconclusive` instead of scanning.
struct CriteriaCaps {
  unsigned turyn_max_omega = 8;
  unsigned ls1_max_omega = 6;
  unsigned ls5_max_omega = 8;
  unsigned ls10_max_omega = 8;
};

// True iff some power of r is congruent to -1 mod s. s in {1, 2} is always
// true (-1 and 1 coincide); gcd(r, s) != 1 with s > 2 is always false.
bool is_semiprimitive(const BigInt& r, const BigInt& s);
// Same predicate evaluated from a ready factorization of s (the hot path:
// per-prime-power orders are cached process-wide).
bool is_semiprimitive(const BigInt& r, const Factorization& s_fact);

// Largest divisor of s coprime to p.
BigInt p_free_part(const BigInt& s, const BigInt& p);
Factorization p_free_part(const Factorization& s_fact, const BigInt& p);

// True iff every prime divisor p of r is semiprimitive mod the p-free part
// of s. r = 1 is vacuously true.
bool is_self_conjugate(const BigInt& r, const BigInt& s);
bool is_self_conjugate(const Factorization& r_fact, const Factorization& s_fact);

// The q-free squarefree part of m, doubled when m is even and q is odd (the
// printed definition; note this can leave a factor 4).
BigInt m_q(const Factorization& m_fact, const BigInt& q);
BigInt m_q(const BigInt& m, const BigInt& q);

// The exponent b(r, m, n) for prime r: a maximum of Fermat-quotient
// valuations plus order valuations over the primes q of n other than r, with
// the conventions b(2, m, 2^k) = 2 and b(r, m, r^k) = 1 whenever no such q
// exists (n = 1 included). Valuations nu_r(q^(r-1) - 1) are found by lifting
// powmod residues mod r^2, r^3, ..., never by expanding the power.
unsigned b_exponent(const BigInt& r, const Factorization& m_fact, const Factorization& n_fact);
unsigned b_exponent(const BigInt& r, const BigInt& m, const BigInt& n);

// F(m, n) = gcd(m, prod_{p | m} p^b(p,m,n)); always divides m.
Factorization field_descent_F(const Factorization& m_fact, const Factorization& n_fact);
BigInt field_descent_F(const BigInt& m, const BigInt& n);

// The seven theorem tests. Each takes the candidate u in factored form.
// Witness layouts: EKS {p}; LargePrimeCor {p, l}; FieldDescent {F};
// Turyn {r, s}; LS5 {p, r}; LS1 {m, w}; LS10 {p, w}.
// Divisor searches stop at the first witness in a fixed enumeration order
// (Turyn: r then s ascending; LS5: eligible p descending, r ascending;
// LS1: m then w ascending; LS10: p ascending, w descending), so witnesses
// are deterministic even where several would do.
Verdict test_eks(const Factorization& u);
Verdict test_large_prime_cor(const Factorization& u);
Verdict test_field_descent(const Factorization& u);
Verdict test_turyn(const Factorization& u, Mode mode, const CriteriaCaps& caps = {});
Verdict test_ls5(const Factorization& u, const CriteriaCaps& caps = {});
Verdict test_ls1(const Factorization& u, const CriteriaCaps& caps = {});
Verdict test_ls10(const Factorization& u, const CriteriaCaps& caps = {});

// Recomputes the verdict's theorem at its stored witness, entirely from the
// witness values (independent of how the search found them). Returns true
// when an excluded verdict reproduces its violation; non-excluded verdicts
// have nothing to check and return true.
bool revalidate(const Factorization& u, const Verdict& v);

}  // namespace bscan
