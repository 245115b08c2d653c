#include "fqlab/numtheory.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <numeric>

namespace fqlab::numtheory {

namespace {

using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

// Primes below 2^16; enough to trial-divide anything below 2^32 outright.
const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = primes_up_to(u64{1} << 16).primes;
    return primes;
}

void require_prime(u64 p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

std::vector<u64> sieve_primes_vector(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        if (i <= limit / i)
            for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

u64 first_multiple_at_least(u64 step, u64 lo) { return (lo + step - 1) / step * step; }

} // namespace

// ---------------------------------------------------------------------------

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    // Miller-Rabin with the first twelve primes as bases is exact below 3.3e24.
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

FactoredInteger::FactoredInteger(u64 value, std::vector<PrimePower> factors)
    : value_(value), factors_(std::move(factors)) {
    if (value_ == 0) throw RangeError("FactoredInteger requires a positive value");
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].exponent == 0 || !is_prime(factors_[i].prime) ||
            (i > 0 && factors_[i - 1].prime >= factors_[i].prime))
            throw std::invalid_argument("malformed factorization");
    }
    if (product() != value_) throw std::invalid_argument("factorization does not multiply to value");
}

unsigned FactoredInteger::valuation(u64 p) const {
    for (const auto& f : factors_)
        if (f.prime == p) return f.exponent;
    return 0;
}

u64 FactoredInteger::product() const {
    u64 result = 1;
    for (const auto& f : factors_) {
        for (unsigned e = 0; e < f.exponent; ++e) {
            if (__builtin_mul_overflow(result, f.prime, &result))
                throw RangeError("factor product overflows 64 bits");
        }
    }
    return result;
}

std::size_t FactoredInteger::divisor_count() const {
    std::size_t count = 1;
    for (const auto& f : factors_) count *= f.exponent + 1;
    return count;
}

FactoredInteger factor(u64 n, u64 bound) {
    if (n == 0 || n > bound) throw RangeError("factor: " + std::to_string(n) + " out of range");
    std::vector<PrimePower> factors;
    u64 rest = n;
    auto strip = [&](u64 p) {
        if (rest % p != 0) return;
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        factors.push_back({p, e});
    };
    for (u64 p : small_primes()) {
        if (p > rest / p) break;
        strip(p);
    }
    // Beyond the table: trial division by 6k +- 1.
    for (u64 k = (u64{1} << 16) / 6 * 6 + 6; k - 1 <= rest / (k - 1); k += 6) {
        strip(k - 1);
        if (k + 1 > rest / (k + 1)) break;
        strip(k + 1);
    }
    if (rest > 1) factors.push_back({rest, 1});
    return FactoredInteger(n, std::move(factors));
}

std::vector<u64> divisors(const FactoredInteger& n) {
    std::vector<u64> result{1};
    result.reserve(n.divisor_count());
    for (const auto& f : n.factors()) {
        const std::size_t previous = result.size();
        u64 power = 1;
        for (unsigned e = 1; e <= f.exponent; ++e) {
            power *= f.prime;
            for (std::size_t i = 0; i < previous; ++i) result.push_back(result[i] * power);
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

PrimeList primes_up_to(u64 limit, u64 memory_budget) {
    if (limit > memory_budget)
        throw ResourceError("primes_up_to: limit " + std::to_string(limit) + " exceeds memory budget");
    return {limit, sieve_primes_vector(limit)};
}

bool np_contains(u64 n, u64 p) {
    require_prime(p);
    if (n == 0 || n % p != 0) return false;
    const u64 cofactor = n / p;
    if (cofactor % p == 0) return false;
    // A divisor congruent to 1 mod p is coprime to p, so it divides n / p.
    for (u64 d : divisors(factor(cofactor)))
        if (d > 1 && d % p == 1) return false;
    return true;
}

bool pp_contains(u64 p, u64 a) {
    require_prime(p);
    if (a == 0) throw std::invalid_argument("pp_contains: a must be positive");
    return gcd(a, p) == 1 && gcd(a, p - 1) <= 2;
}

bool sp_contains(u64 n, u64 a) {
    if (n == 0 || a == 0) throw std::invalid_argument("sp_contains: arguments must be positive");
    const FactoredInteger fn = factor(n);
    for (const auto& f : fn.factors()) {
        if (f.exponent == 1 && pp_contains(f.prime, a) && np_contains(n, f.prime)) return true;
    }
    return false;
}

namespace {

// Clears out[m - lo] for every m in [lo, hi) divisible by p * d with d > 1 and
// d = 1 (mod p).
void clear_residue_multiples(u64 p, u64 lo, u64 hi, std::vector<std::uint8_t>& out) {
    const u64 width = hi - lo;
    const u64 d_max = (hi - 1) / p;
    u64 d = p + 1;
    for (; d <= d_max && d * p < width; d += p) {
        const u64 step = d * p;
        for (u64 m = first_multiple_at_least(step, lo); m < hi; m += step) out[m - lo] = 0;
    }
    if (d > d_max) return;
    // Steps of at least a segment: walk the cofactor k of m = k * p * d instead.
    const u64 d_first = d;
    for (u64 kp = p; kp <= (hi - 1) / d_first; kp += p) {
        u64 lower = std::max(d_first, (lo + kp - 1) / kp);
        lower += (1 + p - lower % p) % p;
        const u64 upper = (hi - 1) / kp;
        for (u64 e = lower; e <= upper; e += p) out[kp * e - lo] = 0;
    }
}

} // namespace

void sieve_np_segment(u64 p, u64 lo, u64 hi, std::vector<std::uint8_t>& out) {
    out.assign(hi > lo ? hi - lo : 0, 0);
    if (hi <= lo) return;
    const u64 square = p * p;
    for (u64 m = first_multiple_at_least(p, lo); m < hi; m += p)
        if (m % square != 0) out[m - lo] = 1;
    clear_residue_multiples(p, lo, hi, out);
}

std::vector<bool> sieve_np(u64 p, u64 limit, u64 memory_budget) {
    require_prime(p);
    if (limit < p) throw std::invalid_argument("sieve_np: limit must be at least p");
    if (limit > memory_budget)
        throw ResourceError("sieve_np: limit " + std::to_string(limit) + " exceeds memory budget");
    std::vector<bool> bits(limit, false);
    std::vector<std::uint8_t> segment;
    const u64 width = kDefaultSegment;
    for (u64 lo = 1; lo <= limit; lo += width) {
        const u64 hi = std::min(limit + 1, lo + width);
        sieve_np_segment(p, lo, hi, segment);
        for (u64 n = lo; n < hi; ++n)
            if (segment[n - lo]) bits[n - 1] = true;
    }
    return bits;
}

void sieve_sp_segment(u64 a, u64 lo, u64 hi, const std::vector<u64>& primes,
                      std::vector<std::uint8_t>& out) {
    out.assign(hi > lo ? hi - lo : 0, 0);
    if (hi <= lo) return;
    auto admissible = [a](u64 p) { return std::gcd(a, p) == 1 && std::gcd(a, p - 1) <= 2; };
    std::vector<std::uint8_t> scratch(hi - lo, 0);
    auto large = primes.begin();
    for (; large != primes.end() && *large <= (hi - 1) / *large; ++large) {
        const u64 p = *large;
        if (!admissible(p)) continue;
        const u64 square = p * p;
        const u64 start = first_multiple_at_least(p, lo);
        for (u64 m = start; m < hi; m += p)
            if (m % square != 0) scratch[m - lo] = 1;
        clear_residue_multiples(p, lo, hi, scratch);
        for (u64 m = start; m < hi; m += p) {
            out[m - lo] |= scratch[m - lo];
            scratch[m - lo] = 0;
        }
    }
    // p^2 >= hi: every multiple p c below hi has c < p and lies in NP_p.
    if (large == primes.end()) return;
    const u64 smallest = *large;
    for (u64 c = 1; c <= (hi - 1) / smallest; ++c) {
        auto it = std::lower_bound(large, primes.end(), std::max(smallest, (lo + c - 1) / c));
        for (; it != primes.end() && *it <= (hi - 1) / c; ++it)
            if (admissible(*it)) out[*it * c - lo] = 1;
    }
}

// ---------------------------------------------------------------------------

namespace {

u64 parse_parameter(const std::string& name, std::size_t colon) {
    u64 value = 0;
    const char* first = name.data() + colon + 1;
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || value == 0)
        throw std::invalid_argument("bad predicate parameter in '" + name + "'");
    return value;
}

void fill_primes(u64 lo, u64 hi, const std::vector<u64>& primes, std::vector<std::uint8_t>& out) {
    out.assign(hi - lo, 0);
    auto it = std::lower_bound(primes.begin(), primes.end(), lo);
    for (; it != primes.end() && *it < hi; ++it) out[*it - lo] = 1;
}

} // namespace

Predicate make_predicate(const std::string& name, u64 limit) {
    using Out = std::vector<std::uint8_t>;
    if (name == "all")
        return {name, [](u64 lo, u64 hi, Out& out) { out.assign(hi - lo, 1); }};
    if (name == "even" || name == "odd") {
        const u64 parity = name == "even" ? 0 : 1;
        return {name, [parity](u64 lo, u64 hi, Out& out) {
                    out.assign(hi - lo, 0);
                    for (u64 n = lo; n < hi; ++n) out[n - lo] = (n % 2 == parity);
                }};
    }
    const auto colon = name.find(':');
    const std::string kind = name.substr(0, colon);
    if (name == "squarefree" || name == "primes" || kind == "sp" || kind == "pp") {
        // Shared, immutable prime table; safe to read from worker threads.
        auto primes = std::make_shared<const std::vector<u64>>(primes_up_to(limit).primes);
        if (name == "squarefree") {
            return {name, [primes](u64 lo, u64 hi, Out& out) {
                        out.assign(hi - lo, 1);
                        for (u64 p : *primes) {
                            if (p > (hi - 1) / p) break;
                            const u64 sq = p * p;
                            for (u64 m = first_multiple_at_least(sq, lo); m < hi; m += sq) out[m - lo] = 0;
                        }
                    }};
        }
        if (name == "primes")
            return {name, [primes](u64 lo, u64 hi, Out& out) { fill_primes(lo, hi, *primes, out); }};
        if (colon == std::string::npos) throw std::invalid_argument("missing parameter in '" + name + "'");
        const u64 a = parse_parameter(name, colon);
        if (kind == "pp") {
            return {name, [primes, a](u64 lo, u64 hi, Out& out) {
                        fill_primes(lo, hi, *primes, out);
                        for (u64 n = lo; n < hi; ++n)
                            if (out[n - lo] && !pp_contains(n, a)) out[n - lo] = 0;
                    }};
        }
        return {name, [primes, a](u64 lo, u64 hi, Out& out) { sieve_sp_segment(a, lo, hi, *primes, out); }};
    }
    if (kind == "np" && colon != std::string::npos) {
        const u64 p = parse_parameter(name, colon);
        require_prime(p);
        return {name, [p](u64 lo, u64 hi, Out& out) { sieve_np_segment(p, lo, hi, out); }};
    }
    throw std::invalid_argument("unknown predicate '" + name + "'");
}

std::vector<u64> default_checkpoints(u64 limit) {
    std::vector<u64> points;
    for (u64 c = 10; c <= limit; c *= 10) {
        points.push_back(c);
        if (c > limit / 10) break;
    }
    if (points.empty() || points.back() != limit) points.push_back(limit);
    return points;
}

std::string format_ratio(u64 count, u64 limit) {
    if (limit == 0) throw std::invalid_argument("format_ratio: zero limit");
    const u128 scaled = (static_cast<u128>(count) * 2000000 + limit) / (static_cast<u128>(limit) * 2);
    const auto whole = static_cast<u64>(scaled / 1000000);
    const auto frac = static_cast<u64>(scaled % 1000000);
    std::string digits = std::to_string(frac);
    return std::to_string(whole) + "." + std::string(6 - digits.size(), '0') + digits;
}

double DensitySeries::ratio(std::size_t i) const {
    return static_cast<double>(checkpoints.at(i).count) / static_cast<double>(checkpoints.at(i).limit);
}

std::string DensitySeries::ratio_string(std::size_t i) const {
    return format_ratio(checkpoints.at(i).count, checkpoints.at(i).limit);
}

std::string DensitySeries::to_csv() const {
    std::string csv = "limit,count,density\n";
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        csv += std::to_string(checkpoints[i].limit) + "," + std::to_string(checkpoints[i].count) + "," +
               ratio_string(i) + "\n";
    }
    return csv;
}

DensitySeries density_series(const Predicate& predicate, u64 limit, std::vector<u64> checkpoints,
                             const DensityOptions& options) {
    if (limit == 0) throw std::invalid_argument("density_series: limit must be positive");
    if (checkpoints.empty()) checkpoints = default_checkpoints(limit);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] == 0 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
            throw std::invalid_argument("density_series: checkpoints must be positive and increasing");
    }
    if (checkpoints.back() > limit)
        throw std::invalid_argument("density_series: checkpoint beyond limit");
    const u64 top = checkpoints.back();
    const u64 width = std::max<std::size_t>(options.segment, 1);
    const u64 segments = (top + width - 1) / width;

    // Per segment, the number of members at or below each checkpoint.
    auto count_segment = [&](u64 s) {
        const u64 lo = 1 + s * width;
        const u64 hi = std::min(top + 1, lo + width);
        std::vector<std::uint8_t> members;
        predicate.fill(lo, hi, members);
        std::vector<u64> counts(checkpoints.size(), 0);
        u64 running = 0;
        std::size_t c = 0;
        while (c < checkpoints.size() && checkpoints[c] < lo) ++c;
        for (u64 n = lo; n < hi; ++n) {
            running += members[n - lo] ? 1 : 0;
            while (c < checkpoints.size() && checkpoints[c] == n) counts[c++] = running;
        }
        for (; c < checkpoints.size(); ++c) counts[c] = running;
        return counts;
    };

    std::vector<std::vector<u64>> partial(segments);
    const unsigned threads = std::max(1U, options.threads);
    if (threads == 1 || segments == 1) {
        for (u64 s = 0; s < segments; ++s) partial[s] = count_segment(s);
    } else {
        std::vector<std::future<void>> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.push_back(std::async(std::launch::async, [&, t] {
                for (u64 s = t; s < segments; s += threads) partial[s] = count_segment(s);
            }));
        }
        for (auto& w : workers) w.get();
    }

    DensitySeries series{predicate.name, {}};
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        u64 total = 0;
        for (const auto& counts : partial) total += counts[c];
        series.checkpoints.push_back({checkpoints[c], total});
    }
    return series;
}

DensitySeries density_series(const std::string& predicate, u64 limit, std::vector<u64> checkpoints,
                             const DensityOptions& options) {
    return density_series(make_predicate(predicate, limit), limit, std::move(checkpoints), options);
}

std::vector<Witness> witness_primes(const std::function<bool(u64)>& in_x, u64 a, u64 prime_limit,
                                    u64 limit) {
    std::vector<Witness> result;
    for (u64 p : primes_up_to(prime_limit).primes) {
        if (!pp_contains(p, a)) continue;
        for (u64 n = p; n <= limit; n += p) {
            if (in_x(n) && np_contains(n, p)) {
                result.push_back({p, n});
                break;
            }
        }
    }
    return result;
}

} // namespace fqlab::numtheory
