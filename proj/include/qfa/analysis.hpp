#pragma once

// Functional equivalence of GPFAs and cutpoint membership.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"
#include "qfa/models.hpp"
#include "qfa/sim.hpp"

namespace qfa {

using Rational = boost::multiprecision::cpp_rational;

/// Relative threshold for rank and orthogonality decisions in numeric mode.
inline constexpr double tol_rank = 1e-8;

/// Largest denominator accepted when reading a double as an exact rational.
inline constexpr std::int64_t max_exact_denominator = std::int64_t{1} << 20;

/// The rational p/q (q <= 2^20) whose correctly rounded value is x, taking
/// the first continued-fraction convergent that matches. Entries such as
/// 0.1 or 1/3 map back to 1/10 and 1/3; values that only match a huge
/// denominator are treated as irrational and rejected with mode_error.
inline Rational to_exact_rational(double x)
{
    if (!std::isfinite(x))
        throw mode_error("non-finite entry has no rational value");
    using boost::multiprecision::cpp_int;
    constexpr double limit = 9007199254740992.0; // 2^53
    Rational rest(x);
    cpp_int p_prev2 = 0, p_prev1 = 1;
    cpp_int q_prev2 = 1, q_prev1 = 0;
    while (true) {
        cpp_int a = numerator(rest) / denominator(rest);
        if (numerator(rest) < 0 && a * denominator(rest) != numerator(rest))
            a -= 1;
        const cpp_int p = a * p_prev1 + p_prev2;
        const cpp_int q = a * q_prev1 + q_prev2;
        if (q > max_exact_denominator)
            break;
        const double pd = p.convert_to<double>();
        if (std::abs(pd) < limit && pd / q.convert_to<double>() == x)
            return Rational(p, q);
        const Rational frac = rest - Rational(a);
        if (frac == 0)
            break;
        rest = 1 / frac;
        p_prev2 = p_prev1;
        p_prev1 = p;
        q_prev2 = q_prev1;
        q_prev1 = q;
    }
    throw mode_error("entry " + std::to_string(x) +
                     " is not a rational with a small denominator; use numeric mode");
}

enum class EquivalenceMode { exact, numeric };

struct EquivalenceVerdict {
    bool equivalent = true;
    std::optional<Word> witness;
    double max_observed_gap = 0.0;
    /// Rank of the reachable span of the difference automaton; never exceeds
    /// the combined state count.
    std::size_t basis_size = 0;
};

namespace detail {

/// Numeric span tracker: modified Gram-Schmidt with one reorthogonalization
/// pass. A candidate is independent when its residual norm exceeds tol_rank
/// times its own norm.
class NumericSpan {
public:
    using Vector = std::vector<double>;

    bool add(const Vector& x)
    {
        RealVector r = Eigen::Map<const RealVector>(x.data(), static_cast<Eigen::Index>(x.size()));
        const double norm = r.norm();
        if (norm == 0.0 || !std::isfinite(norm))
            return false;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis_)
                r -= q.dot(r) * q;
        const double residual = r.norm();
        if (residual <= tol_rank * norm)
            return false;
        basis_.push_back(r / residual);
        return true;
    }

private:
    std::vector<RealVector> basis_;
};

/// Exact span tracker over the rationals: rows kept in echelon form.
class ExactSpan {
public:
    using Vector = std::vector<Rational>;

    bool add(Vector x)
    {
        for (const auto& [pivot, row] : rows_) {
            if (x[pivot] == 0)
                continue;
            const Rational factor = x[pivot] / row[pivot];
            for (std::size_t j = 0; j < x.size(); ++j)
                if (row[j] != 0)
                    x[j] -= factor * row[j];
        }
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] != 0) {
                rows_.emplace_back(j, std::move(x));
                return true;
            }
        return false;
    }

private:
    std::vector<std::pair<std::size_t, Vector>> rows_;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double d) { return d; }

template <typename Scalar>
struct DifferenceAutomaton {
    std::vector<Scalar> initial;
    std::vector<std::vector<std::vector<Scalar>>> transitions; ///< [symbol][row][col]
    std::vector<Scalar> final;
    std::size_t split = 0; ///< states of the first automaton

    std::vector<Scalar> step(const std::vector<Scalar>& x, std::size_t symbol) const
    {
        const auto& a = transitions[symbol];
        std::vector<Scalar> y(x.size(), Scalar(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0)
                continue;
            for (std::size_t j = 0; j < x.size(); ++j)
                if (a[i][j] != 0)
                    y[j] += x[i] * a[i][j];
        }
        return y;
    }

    Scalar gap(const std::vector<Scalar>& x) const
    {
        Scalar acc(0);
        for (std::size_t i = 0; i < x.size(); ++i)
            acc += x[i] * final[i];
        return acc;
    }

    double scale(const std::vector<Scalar>& x) const
    {
        double n1 = 0, n2 = 0, f1 = 0, f2 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xv = to_double(x[i]);
            const double fv = to_double(final[i]);
            (i < split ? n1 : n2) += xv * xv;
            (i < split ? f1 : f2) += fv * fv;
        }
        return std::sqrt(n1 * f1) + std::sqrt(n2 * f2);
    }
};

template <typename Scalar, typename Convert>
DifferenceAutomaton<Scalar> difference_automaton(const Gpfa& g1, const Gpfa& g2, Convert convert)
{
    const std::size_t s1 = g1.size(), s2 = g2.size(), s = s1 + s2;
    DifferenceAutomaton<Scalar> d;
    d.split = s1;
    d.initial.assign(s, Scalar(0));
    d.final.assign(s, Scalar(0));
    for (std::size_t i = 0; i < s1; ++i) {
        d.initial[i] = convert(g1.initial()(i));
        d.final[i] = convert(g1.final()(i));
    }
    for (std::size_t i = 0; i < s2; ++i) {
        d.initial[s1 + i] = convert(g2.initial()(i));
        d.final[s1 + i] = -convert(g2.final()(i));
    }
    const auto& symbols = g1.alphabet().symbols();
    for (const auto& name : symbols) {
        const auto& a1 = g1.transition(*g1.alphabet().find(name));
        const auto& a2 = g2.transition(*g2.alphabet().find(name));
        std::vector<std::vector<Scalar>> a(s, std::vector<Scalar>(s, Scalar(0)));
        for (std::size_t i = 0; i < s1; ++i)
            for (std::size_t j = 0; j < s1; ++j)
                a[i][j] = convert(a1(i, j));
        for (std::size_t i = 0; i < s2; ++i)
            for (std::size_t j = 0; j < s2; ++j)
                a[s1 + i][s1 + j] = convert(a2(i, j));
        d.transitions.push_back(std::move(a));
    }
    return d;
}

/// Breadth-first spanning of the reachable row-vector space. Each basis
/// vector is v·A_w for a concrete word w, so its gap is exactly
/// value1(w) - value2(w); the series are equal iff every basis gap vanishes.
template <typename Scalar, typename Span, typename IsNonzero>
EquivalenceVerdict span_and_compare(const DifferenceAutomaton<Scalar>& d, const Alphabet& alphabet,
                                    Span span, IsNonzero is_nonzero)
{
    struct Entry {
        std::vector<Scalar> x;
        std::vector<std::size_t> word;
    };
    EquivalenceVerdict verdict;
    std::deque<Entry> queue;
    auto consider = [&](Entry e) {
        if (!span.add(e.x))
            return;
        ++verdict.basis_size;
        const Scalar gap = d.gap(e.x);
        const double magnitude = std::abs(to_double(gap));
        verdict.max_observed_gap = std::max(verdict.max_observed_gap, magnitude);
        if (verdict.equivalent && is_nonzero(gap, d.scale(e.x))) {
            verdict.equivalent = false;
            Word w;
            for (auto s : e.word)
                w.push_back(alphabet.symbols()[s]);
            verdict.witness = std::move(w);
        }
        queue.push_back(std::move(e));
    };
    consider(Entry{d.initial, {}});
    while (!queue.empty()) {
        Entry e = std::move(queue.front());
        queue.pop_front();
        for (std::size_t s = 0; s < alphabet.size(); ++s) {
            Entry next{d.step(e.x, s), e.word};
            next.word.push_back(s);
            consider(std::move(next));
        }
    }
    return verdict;
}

} // namespace detail

/// Decides whether two GPFAs over the same alphabet assign equal values to
/// every word. Exact mode reads entries as small-denominator rationals and
/// throws mode_error otherwise; numeric mode uses tol_rank.
inline EquivalenceVerdict gpfa_equivalent(const Gpfa& g1, const Gpfa& g2,
                                          EquivalenceMode mode = EquivalenceMode::numeric)
{
    {
        auto a = g1.alphabet().symbols();
        auto b = g2.alphabet().symbols();
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            throw input_error("GPFAs have different alphabets");
    }
    if (mode == EquivalenceMode::exact) {
        auto d = detail::difference_automaton<Rational>(g1, g2, [](double x) { return to_exact_rational(x); });
        return detail::span_and_compare(d, g1.alphabet(), detail::ExactSpan{},
                                        [](const Rational& gap, double) { return gap != 0; });
    }
    auto d = detail::difference_automaton<double>(g1, g2, [](double x) { return x; });
    return detail::span_and_compare(d, g1.alphabet(), detail::NumericSpan{},
                                    [](double gap, double scale) {
                                        return std::abs(gap) > tol_rank * std::max(1.0, scale);
                                    });
}

/// Strict cutpoint membership: value(w) > λ.
inline bool cutpoint_member(const Gpfa& g, const Cutpoint& c, const Word& w)
{
    return run_gpfa(g, w) > c.value();
}

} // namespace qfa
