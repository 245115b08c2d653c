#ifndef FQLAB_SMITH_HPP
#define FQLAB_SMITH_HPP

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fqlab {

using BigInt = boost::multiprecision::cpp_int;

template <typename Scalar>
using IntMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using IntVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class SmithOverflow : public std::overflow_error {
  public:
    SmithOverflow() : std::overflow_error("integer overflow during Smith normal form") {}
};

namespace detail {

template <typename Scalar>
struct Checked {
    static Scalar mul(const Scalar& a, const Scalar& b) { return a * b; }
    static Scalar sub(const Scalar& a, const Scalar& b) { return a - b; }
    static Scalar add(const Scalar& a, const Scalar& b) { return a + b; }
    static Scalar neg(const Scalar& a) { return -a; }
    static Scalar abs(const Scalar& a) { return a < 0 ? Scalar(-a) : a; }
};

template <>
struct Checked<std::int64_t> {
    static std::int64_t mul(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw SmithOverflow();
        return r;
    }
    static std::int64_t sub(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_sub_overflow(a, b, &r)) throw SmithOverflow();
        return r;
    }
    static std::int64_t add(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r)) throw SmithOverflow();
        return r;
    }
    static std::int64_t neg(std::int64_t a) {
        if (a == std::numeric_limits<std::int64_t>::min()) throw SmithOverflow();
        return -a;
    }
    static std::int64_t abs(std::int64_t a) { return a < 0 ? neg(a) : a; }
};

} // namespace detail

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... .
template <typename Scalar>
struct SmithForm {
    IntMatrix<Scalar> diagonal;
    IntMatrix<Scalar> left;   // U, rows x rows
    IntMatrix<Scalar> right;  // V, cols x cols
    /// The min(rows, cols) diagonal entries, nonnegative; zeros trail.
    std::vector<Scalar> invariants;
    /// Number of nonzero invariants.
    std::size_t rank = 0;
    /// cols - rank: the free rank of the cokernel of the row space.
    std::size_t free_rank = 0;

    /// Invariants other than 1 and 0: the torsion part of the cokernel.
    std::vector<Scalar> torsion() const {
        std::vector<Scalar> out;
        for (const Scalar& d : invariants)
            if (d != 0 && d != 1) out.push_back(d);
        return out;
    }
};

/// Row and column reduction with the smallest nonzero absolute value as pivot,
/// ties to the lowest row then column.  For std::int64_t every operation is
/// overflow-checked and SmithOverflow is thrown.
template <typename Scalar>
SmithForm<Scalar> smith_normal_form(const IntMatrix<Scalar>& a) {
    using Ops = detail::Checked<Scalar>;
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    IntMatrix<Scalar> d = a;
    IntMatrix<Scalar> u = IntMatrix<Scalar>::Identity(m, m);
    IntMatrix<Scalar> v = IntMatrix<Scalar>::Identity(n, n);

    // row_i -= q row_j on d and u; col_i -= q col_j on d and v
    auto row_sub = [&](Eigen::Index i, Eigen::Index j, const Scalar& q) {
        for (Eigen::Index k = 0; k < n; ++k) d(i, k) = Ops::sub(d(i, k), Ops::mul(q, d(j, k)));
        for (Eigen::Index k = 0; k < m; ++k) u(i, k) = Ops::sub(u(i, k), Ops::mul(q, u(j, k)));
    };
    auto col_sub = [&](Eigen::Index i, Eigen::Index j, const Scalar& q) {
        for (Eigen::Index k = 0; k < m; ++k) d(k, i) = Ops::sub(d(k, i), Ops::mul(q, d(k, j)));
        for (Eigen::Index k = 0; k < n; ++k) v(k, i) = Ops::sub(v(k, i), Ops::mul(q, v(k, j)));
    };

    const Eigen::Index steps = std::min(m, n);
    Eigen::Index t = 0;
    for (; t < steps; ++t) {
        for (;;) {
            Eigen::Index pr = -1;
            Eigen::Index pc = -1;
            Scalar best = 0;
            for (Eigen::Index i = t; i < m; ++i)
                for (Eigen::Index j = t; j < n; ++j) {
                    if (d(i, j) == 0) continue;
                    const Scalar mag = Ops::abs(d(i, j));
                    if (pr < 0 || mag < best) {
                        best = mag;
                        pr = i;
                        pc = j;
                    }
                }
            if (pr < 0) goto done;
            if (pr != t) {
                d.row(pr).swap(d.row(t));
                u.row(pr).swap(u.row(t));
            }
            if (pc != t) {
                d.col(pc).swap(d.col(t));
                v.col(pc).swap(v.col(t));
            }
            bool clean = true;
            for (Eigen::Index i = t + 1; i < m; ++i) {
                if (d(i, t) == 0) continue;
                row_sub(i, t, Scalar(d(i, t) / d(t, t)));
                if (d(i, t) != 0) clean = false;
            }
            for (Eigen::Index j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                col_sub(j, t, Scalar(d(t, j) / d(t, t)));
                if (d(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // Divisibility: fold an offending row into row t and reduce again.
            Eigen::Index offending = -1;
            for (Eigen::Index i = t + 1; i < m && offending < 0; ++i)
                for (Eigen::Index j = t + 1; j < n; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        offending = i;
                        break;
                    }
            if (offending < 0) break;
            row_sub(t, offending, Scalar(-1));
        }
        if (d(t, t) < 0) {
            for (Eigen::Index k = 0; k < n; ++k) d(t, k) = Ops::neg(d(t, k));
            for (Eigen::Index k = 0; k < m; ++k) u(t, k) = Ops::neg(u(t, k));
        }
    }
done:
    SmithForm<Scalar> out;
    out.rank = static_cast<std::size_t>(t);
    for (Eigen::Index i = 0; i < steps; ++i) out.invariants.push_back(d(i, i));
    out.free_rank = static_cast<std::size_t>(n) - out.rank;
    out.diagonal = std::move(d);
    out.left = std::move(u);
    out.right = std::move(v);
    return out;
}

template <typename To, typename From>
SmithForm<To> smith_cast(const SmithForm<From>& s) {
    SmithForm<To> out;
    out.diagonal = s.diagonal.template cast<To>();
    out.left = s.left.template cast<To>();
    out.right = s.right.template cast<To>();
    for (const From& x : s.invariants) out.invariants.push_back(To(x));
    out.rank = s.rank;
    out.free_rank = s.free_rank;
    return out;
}

/// Tries 64-bit arithmetic first and redoes the reduction with BigInt on overflow.
inline SmithForm<BigInt> smith_normal_form_auto(const IntMatrix<std::int64_t>& a) {
    try {
        return smith_cast<BigInt>(smith_normal_form<std::int64_t>(a));
    } catch (const SmithOverflow&) {
        return smith_normal_form<BigInt>(a.cast<BigInt>());
    }
}

/// Exact product; cpp_int does not take part in Eigen's product expressions.
inline IntMatrix<BigInt> multiply(const IntMatrix<BigInt>& a, const IntMatrix<BigInt>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
    IntMatrix<BigInt> out(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            BigInt sum = 0;
            for (Eigen::Index k = 0; k < a.cols(); ++k) sum += a(i, k) * b(k, j);
            out(i, j) = sum;
        }
    return out;
}

/// Checks U * A * V == D exactly, D diagonal with a divisibility chain, and
/// U, V unimodular.
template <typename Scalar>
bool verify_smith_form(const IntMatrix<Scalar>& a, const SmithForm<Scalar>& s) {
    const IntMatrix<BigInt> wa = a.template cast<BigInt>();
    const IntMatrix<BigInt> wu = s.left.template cast<BigInt>();
    const IntMatrix<BigInt> wv = s.right.template cast<BigInt>();
    const IntMatrix<BigInt> wd = s.diagonal.template cast<BigInt>();
    if (wu.rows() != a.rows() || wv.rows() != a.cols()) return false;
    const IntMatrix<BigInt> product = multiply(multiply(wu, wa), wv);
    if (product != wd) return false;
    for (Eigen::Index i = 0; i < wd.rows(); ++i)
        for (Eigen::Index j = 0; j < wd.cols(); ++j)
            if (i != j && wd(i, j) != 0) return false;
    for (std::size_t i = 0; i < s.invariants.size(); ++i) {
        if (s.invariants[i] < 0) return false;
        if (i + 1 < s.invariants.size()) {
            const BigInt x = BigInt(s.invariants[i]);
            const BigInt y = BigInt(s.invariants[i + 1]);
            if (x == 0 ? y != 0 : y % x != 0) return false;
        }
    }
    // Unimodularity by inverse-free means: |det| = 1 via fraction-free elimination.
    auto unit_det = [](IntMatrix<BigInt> w) {
        const Eigen::Index k = w.rows();
        BigInt prev = 1;
        for (Eigen::Index c = 0; c < k; ++c) {
            Eigen::Index p = c;
            while (p < k && w(p, c) == 0) ++p;
            if (p == k) return false;
            if (p != c) w.row(p).swap(w.row(c));
            for (Eigen::Index i = c + 1; i < k; ++i) {
                for (Eigen::Index j = c + 1; j < k; ++j) w(i, j) = (w(i, j) * w(c, c) - w(i, c) * w(c, j)) / prev;
                w(i, c) = 0;
            }
            prev = w(c, c);
        }
        return k == 0 || abs(w(k - 1, k - 1)) == 1;
    };
    return unit_det(wu) && unit_det(wv);
}

} // namespace fqlab

#endif // FQLAB_SMITH_HPP
