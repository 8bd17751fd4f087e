#pragma once

// Seeded random automata for property suites. Unitaries are Haar
// distributed; measurements are coordinate-block projectors conjugated by a
// Haar unitary. The same RandomSpec always yields the same model.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"
#include "qfa/models.hpp"

namespace qfa {

struct RandomSpec {
    std::uint64_t seed = 0;
    std::size_t states = 2;
    std::size_t alphabet_size = 1;
    /// Halting partition sizes; drawn at random when unset.
    std::optional<std::size_t> accepting;
    std::optional<std::size_t> rejecting;
    /// Projector count of the intermediate measurement (NQFA) or of the
    /// observable (QFC); drawn uniformly from 1..states when unset.
    std::optional<std::size_t> measurement_blocks;
    std::size_t control_states = 2;
    /// GPFA entries are small-denominator rationals when set.
    bool rational = true;
};

using Rng = std::mt19937_64;

/// QR of a complex Gaussian matrix, with R's diagonal phases moved into Q so
/// the result is Haar distributed.
inline ComplexMatrix haar_unitary(std::size_t n, Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto dim = static_cast<Eigen::Index>(n);
    ComplexMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = complex(re, im);
        }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0)
            q.col(j) *= r(j, j) / mag;
    }
    return q;
}

namespace detail {

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<std::string> names(const std::string& prefix, std::size_t count)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(prefix + std::to_string(i));
    return out;
}

inline std::vector<std::string> symbol_names(std::size_t count)
{
    if (count == 0)
        throw domain_error("alphabet size must be at least 1");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(count <= 26 ? std::string(1, static_cast<char>('a' + i)) : "s" + std::to_string(i));
    return out;
}

/// Haar-rotated block projectors; block sizes by stars and bars.
inline std::vector<ComplexMatrix> random_measurement(std::size_t n, std::optional<std::size_t> blocks,
                                                     Rng& rng)
{
    const std::size_t k = blocks ? *blocks : uniform_index(rng, 1, n);
    if (k == 0 || k > n)
        throw domain_error("measurement block count must lie in 1.." + std::to_string(n));
    std::vector<std::size_t> cuts(n - 1);
    std::iota(cuts.begin(), cuts.end(), std::size_t{1});
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(k - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(n);

    const ComplexMatrix w = haar_unitary(n, rng);
    std::vector<ComplexMatrix> out;
    for (std::size_t b = 0; b < k; ++b) {
        ComplexMatrix d = ComplexMatrix::Zero(n, n);
        for (std::size_t i = cuts[b]; i < cuts[b + 1]; ++i)
            d(i, i) = 1.0;
        out.push_back(w * d * w.adjoint());
    }
    return out;
}

inline KwqfaDescription random_quantum_core(const RandomSpec& spec, Rng& rng)
{
    const std::size_t n = spec.states;
    if (n < 2)
        throw domain_error("random quantum automata need at least 2 states");
    KwqfaDescription d;
    d.alphabet = symbol_names(spec.alphabet_size);
    d.states = names("q", n);
    d.initial = d.states[0];

    const std::size_t acc = spec.accepting ? *spec.accepting : uniform_index(rng, 1, n - 1);
    if (acc > n - 1)
        throw domain_error("partition sizes leave no room for the initial state");
    const std::size_t rej = spec.rejecting ? *spec.rejecting : uniform_index(rng, 0, n - 1 - acc);
    if (acc + rej > n - 1)
        throw domain_error("partition sizes leave no room for the initial state");

    std::vector<std::size_t> others(n - 1);
    std::iota(others.begin(), others.end(), std::size_t{1});
    std::shuffle(others.begin(), others.end(), rng);
    std::vector<Halting> role(n, Halting::non_halting);
    for (std::size_t i = 0; i < acc; ++i)
        role[others[i]] = Halting::accepting;
    for (std::size_t i = acc; i < acc + rej; ++i)
        role[others[i]] = Halting::rejecting;
    for (std::size_t i = 0; i < n; ++i)
        (role[i] == Halting::accepting   ? d.partition.accepting
         : role[i] == Halting::rejecting ? d.partition.rejecting
                                         : d.partition.non_halting)
            .push_back(d.states[i]);

    const Alphabet a(d.alphabet);
    for (std::size_t t : a.tape_order())
        d.unitaries[a.tape_name(t)] = haar_unitary(n, rng);
    return d;
}

} // namespace detail

inline Kwqfa random_kwqfa(const RandomSpec& spec)
{
    Rng rng(spec.seed);
    return build_kwqfa(detail::random_quantum_core(spec, rng));
}

inline Nqfa random_nqfa(const RandomSpec& spec)
{
    Rng rng(spec.seed);
    const auto core = detail::random_quantum_core(spec, rng);
    NqfaDescription d{core.alphabet, core.states, core.initial, core.partition, core.unitaries, {}};
    const Alphabet a(d.alphabet);
    for (std::size_t t : a.tape_order())
        d.measurements[a.tape_name(t)] = detail::random_measurement(spec.states, spec.measurement_blocks, rng);
    return build_nqfa(d);
}

inline Qfc random_qfc(const RandomSpec& spec)
{
    Rng rng(spec.seed);
    const std::size_t n = spec.states;
    if (n < 1)
        throw domain_error("random QFC needs at least 1 state");
    if (spec.control_states < 1)
        throw domain_error("random QFC needs at least 1 control state");
    QfcDescription d;
    d.alphabet = detail::symbol_names(spec.alphabet_size);
    d.states = detail::names("q", n);
    d.initial = d.states[0];
    const Alphabet a(d.alphabet);
    for (std::size_t t : a.tape_order())
        d.unitaries[a.tape_name(t)] = haar_unitary(n, rng);

    const auto projectors = detail::random_measurement(n, spec.measurement_blocks, rng);
    const auto labels = detail::names("c", projectors.size());
    for (std::size_t c = 0; c < projectors.size(); ++c)
        d.observable.push_back({labels[c], projectors[c]});

    auto& dfa = d.control;
    dfa.alphabet = labels;
    dfa.states = detail::names("d", spec.control_states);
    dfa.start = dfa.states[0];
    std::bernoulli_distribution coin(0.5);
    for (const auto& q : dfa.states) {
        if (coin(rng))
            dfa.accepting.push_back(q);
        for (const auto& c : labels)
            dfa.transitions[q][c] = dfa.states[detail::uniform_index(rng, 0, dfa.states.size() - 1)];
    }
    return build_qfc(d);
}

/// Rational mode draws k/m with k in [-4, 4] and m in {1, 2, 3, 4}; real
/// mode draws standard normals.
inline Gpfa random_gpfa(const RandomSpec& spec)
{
    Rng rng(spec.seed);
    const std::size_t s = spec.states;
    if (s < 1)
        throw domain_error("random GPFA needs at least 1 state");
    std::uniform_int_distribution<int> numer(-4, 4);
    std::uniform_int_distribution<int> denom(1, 4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto entry = [&]() {
        if (spec.rational) {
            const int k = numer(rng);
            return static_cast<double>(k) / static_cast<double>(denom(rng));
        }
        return gauss(rng);
    };
    GpfaDescription d;
    d.alphabet = detail::symbol_names(spec.alphabet_size);
    d.initial = RealVector::NullaryExpr(static_cast<Eigen::Index>(s), entry);
    for (const auto& sym : d.alphabet)
        d.transitions[sym] = RealMatrix::NullaryExpr(static_cast<Eigen::Index>(s),
                                                     static_cast<Eigen::Index>(s), entry);
    d.final = RealVector::NullaryExpr(static_cast<Eigen::Index>(s), entry);
    return build_gpfa(d);
}

/// Random rows normalized to sum 1; random 0/1 final indicator.
inline Pfa random_pfa(const RandomSpec& spec)
{
    Rng rng(spec.seed);
    const auto s = static_cast<Eigen::Index>(spec.states);
    if (s < 1)
        throw domain_error("random PFA needs at least 1 state");
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution coin(0.5);
    auto distribution = [&]() {
        RealVector v = RealVector::NullaryExpr(s, [&]() { return expo(rng); });
        v /= v.sum();
        // pin the last entry so the row sums to 1 up to one rounding
        v(s - 1) = 0.0;
        v(s - 1) = std::max(0.0, 1.0 - v.sum());
        return v;
    };
    PfaDescription d;
    d.alphabet = detail::symbol_names(spec.alphabet_size);
    d.initial = distribution();
    for (const auto& sym : d.alphabet) {
        RealMatrix a(s, s);
        for (Eigen::Index r = 0; r < s; ++r)
            a.row(r) = distribution().transpose();
        d.transitions[sym] = a;
    }
    d.final = RealVector::NullaryExpr(s, [&]() { return coin(rng) ? 1.0 : 0.0; });
    return build_pfa(d);
}

} // namespace qfa
