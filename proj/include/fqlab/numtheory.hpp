#ifndef FQLAB_NUMTHEORY_HPP
#define FQLAB_NUMTHEORY_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fqlab::numtheory {

using u64 = std::uint64_t;

class RangeError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Raised when a sieve would need more memory than the configured budget.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PrimePower {
    u64 prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer together with its prime factorization (primes ascending).
class FactoredInteger {
  public:
    FactoredInteger() = default;
    FactoredInteger(u64 value, std::vector<PrimePower> factors);

    u64 value() const { return value_; }
    const std::vector<PrimePower>& factors() const { return factors_; }

    /// Exponent of `p` in the factorization, 0 if absent.
    unsigned valuation(u64 p) const;
    /// Recomputes the product of the factors; throws RangeError on overflow.
    u64 product() const;
    std::size_t divisor_count() const;

  private:
    u64 value_ = 1;
    std::vector<PrimePower> factors_;
};

struct PrimeList {
    u64 limit = 0;
    std::vector<u64> primes;
};

inline constexpr u64 kDefaultFactorBound = 0x7fffffffffffffffULL;
/// Entries per sieve segment.
inline constexpr std::size_t kDefaultSegment = std::size_t{1} << 22;
/// Largest limit accepted by the non-segmented sieves (primes_up_to, sieve_np).
inline constexpr u64 kDefaultMemoryBudget = u64{1} << 31;

bool is_prime(u64 n);
u64 gcd(u64 a, u64 b);

FactoredInteger factor(u64 n, u64 bound = kDefaultFactorBound);
std::vector<u64> divisors(const FactoredInteger& n);

PrimeList primes_up_to(u64 limit, u64 memory_budget = kDefaultMemoryBudget);

// Set membership.  Throws std::invalid_argument when `p` is not prime.
bool np_contains(u64 n, u64 p);
bool pp_contains(u64 p, u64 a);
bool sp_contains(u64 n, u64 a);

/// Bit n-1 is set iff n is in NP_p, for n in [1, limit].
std::vector<bool> sieve_np(u64 p, u64 limit, u64 memory_budget = kDefaultMemoryBudget);

/// Membership of NP_p restricted to [lo, hi) written into `out` (out[i] <-> lo+i).
void sieve_np_segment(u64 p, u64 lo, u64 hi, std::vector<std::uint8_t>& out);
/// Membership of SP_a restricted to [lo, hi); `primes` must cover every prime < hi.
void sieve_sp_segment(u64 a, u64 lo, u64 hi, const std::vector<u64>& primes,
                      std::vector<std::uint8_t>& out);

// ---------------------------------------------------------------------------
// Density series

/// A segment-capable membership test.  `fill(lo, hi, out)` writes membership
/// of every n in [lo, hi) to out[n - lo].
struct Predicate {
    std::string name;
    std::function<void(u64 lo, u64 hi, std::vector<std::uint8_t>& out)> fill;
};

/// Known names: all, even, odd, squarefree, primes, np:<p>, pp:<a>, sp:<a>.
/// Throws std::invalid_argument for anything else.
Predicate make_predicate(const std::string& name, u64 limit);

struct Checkpoint {
    u64 limit;
    u64 count;
    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct DensitySeries {
    std::string predicate_name;
    std::vector<Checkpoint> checkpoints;

    double ratio(std::size_t i) const;
    /// "count/limit" as a decimal string with 6 fractional digits, rounded half up.
    std::string ratio_string(std::size_t i) const;
    /// `limit,count,density` with header.
    std::string to_csv() const;
};

struct DensityOptions {
    std::size_t segment = kDefaultSegment;
    unsigned threads = 1;
};

DensitySeries density_series(const Predicate& predicate, u64 limit, std::vector<u64> checkpoints,
                             const DensityOptions& options = {});
DensitySeries density_series(const std::string& predicate, u64 limit, std::vector<u64> checkpoints,
                             const DensityOptions& options = {});

/// Powers of ten up to `limit`, plus `limit` itself.
std::vector<u64> default_checkpoints(u64 limit);

std::string format_ratio(u64 count, u64 limit);

struct Witness {
    u64 prime;
    u64 witness;
    friend bool operator==(const Witness&, const Witness&) = default;
};

/// Primes p <= prime_limit in PP_a for which X meets NP_p inside [1, limit],
/// each with the smallest such member of X.
std::vector<Witness> witness_primes(const std::function<bool(u64)>& in_x, u64 a, u64 prime_limit,
                                    u64 limit);

} // namespace fqlab::numtheory

#endif // FQLAB_NUMTHEORY_HPP
