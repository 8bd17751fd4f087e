#pragma once

// Hand-built automata and independent oracles shared by the unit and
// acceptance suites. Oracles here never call the library's simulators or
// converters.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qfa/qfa.hpp"

namespace qfa::testing {

inline ComplexMatrix permutation(const std::vector<int>& image)
{
    const auto n = static_cast<Eigen::Index>(image.size());
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        p(image[j], j) = 1.0;
    return p;
}

/// R(θ): rotates span(q0, q1) by θ per "a"; "$" sends q1 to accept and q0
/// to reject. Acceptance on a^k is sin²(kθ).
inline KwqfaDescription rotation_description(double theta)
{
    KwqfaDescription d;
    d.alphabet = {"a"};
    d.states = {"q0", "q1", "qacc", "qrej"};
    d.initial = "q0";
    d.partition = {{"q0", "q1"}, {"qacc"}, {"qrej"}};
    ComplexMatrix ua = ComplexMatrix::Identity(4, 4);
    ua(0, 0) = std::cos(theta);
    ua(1, 0) = std::sin(theta);
    ua(0, 1) = -std::sin(theta);
    ua(1, 1) = std::cos(theta);
    d.unitaries["a"] = ua;
    d.unitaries[std::string(left_marker)] = ComplexMatrix::Identity(4, 4);
    d.unitaries["$"] = permutation({3, 2, 1, 0});
    return d;
}

inline Kwqfa rotation(double theta = std::numbers::pi / 4) { return build_kwqfa(rotation_description(theta)); }

/// Accepts every word over {a, b} with probability 1.
inline KwqfaDescription identity_description()
{
    KwqfaDescription d;
    d.alphabet = {"a", "b"};
    d.states = {"q0", "qacc"};
    d.initial = "q0";
    d.partition = {{"q0"}, {"qacc"}, {}};
    d.unitaries["a"] = ComplexMatrix::Identity(2, 2);
    d.unitaries["b"] = ComplexMatrix::Identity(2, 2);
    d.unitaries[std::string(left_marker)] = ComplexMatrix::Identity(2, 2);
    d.unitaries["$"] = permutation({1, 0});
    return d;
}

inline Kwqfa identity_machine() { return build_kwqfa(identity_description()); }

/// D(θ): R(θ) with "a" followed by the measurement
/// {|q0><q0|, |q1><q1|, projector onto the halting span}.
inline NqfaDescription dephasing_description(double theta)
{
    auto d = with_identity_measurements(rotation_description(theta));
    d.measurements["a"] = {basis_projector(0, 4), basis_projector(1, 4),
                           basis_projector(2, 4) + basis_projector(3, 4)};
    return d;
}

inline Nqfa dephasing(double theta = std::numbers::pi / 4) { return build_nqfa(dephasing_description(theta)); }

/// value(w) = 0.w in binary: reading 1 moves half the start mass to an
/// accepting sink, reading 0 moves half to a rejecting sink.
inline PfaDescription binary_expansion_description()
{
    PfaDescription d;
    d.alphabet = {"0", "1"};
    d.initial = RealVector::Unit(3, 0);
    RealMatrix a0(3, 3), a1(3, 3);
    a0 << 0.5, 0, 0.5, 0, 1, 0, 0, 0, 1;
    a1 << 0.5, 0.5, 0, 0, 1, 0, 0, 0, 1;
    d.transitions["0"] = a0;
    d.transitions["1"] = a1;
    d.final = RealVector::Unit(3, 1);
    return d;
}

inline Pfa binary_expansion() { return build_pfa(binary_expansion_description()); }

/// 0.w read as a binary fraction.
inline double binary_fraction(const Word& w)
{
    double value = 0.0, weight = 0.5;
    for (const auto& s : w) {
        if (s == "1")
            value += weight;
        weight /= 2;
    }
    return value;
}

/// One quantum state, observable {I} labelled "c", one control state.
inline QfcDescription trivial_qfc_description(bool accept_all)
{
    QfcDescription d;
    d.alphabet = {"a"};
    d.states = {"q0"};
    d.initial = "q0";
    for (const char* s : {"a", "$"})
        d.unitaries[s] = ComplexMatrix::Identity(1, 1);
    d.unitaries[std::string(left_marker)] = ComplexMatrix::Identity(1, 1);
    d.observable = {{"c", ComplexMatrix::Identity(1, 1)}};
    d.control.alphabet = {"c"};
    d.control.states = {"d0"};
    d.control.start = "d0";
    if (accept_all)
        d.control.accepting = {"d0"};
    d.control.transitions["d0"]["c"] = "d0";
    return d;
}

inline Qfc trivial_qfc(bool accept_all = true) { return build_qfc(trivial_qfc_description(accept_all)); }

/// Pure-state KWQFA oracle: tracks ψ and the halted masses directly.
inline double pure_state_acceptance(const Kwqfa& m, const Word& w)
{
    const auto& nq = m.nqfa();
    const auto& a = nq.alphabet();
    ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(nq.size()));
    psi(nq.initial()) = 1.0;
    std::vector<std::size_t> tape{a.left()};
    for (const auto& s : w)
        tape.push_back(*a.find(s));
    tape.push_back(a.right());
    double accept = 0.0;
    for (auto t : tape) {
        psi = nq.unitary(t) * psi;
        for (Eigen::Index i = 0; i < psi.size(); ++i) {
            if (nq.halting()[i] == Halting::accepting)
                accept += std::norm(psi(i));
            if (nq.halting()[i] != Halting::non_halting)
                psi(i) = 0.0;
        }
    }
    return accept;
}

/// Populations of (q0, q1) under D(θ) form a Markov chain with transition
/// matrix [[c², s²], [s², c²]]; "$" accepts the q1 population.
inline double dephasing_markov_acceptance(double theta, std::size_t k)
{
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    double p0 = 1.0, p1 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double n0 = c2 * p0 + s2 * p1;
        const double n1 = s2 * p0 + c2 * p1;
        p0 = n0;
        p1 = n1;
    }
    return p1;
}

inline Word random_word(const Alphabet& a, std::size_t max_len, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> sym(0, a.size() - 1);
    Word w(len(rng));
    for (auto& s : w)
        s = a.symbols()[sym(rng)];
    return w;
}

/// Every word of length <= max_len, shortest first.
inline std::vector<Word> all_words(const Alphabet& a, std::size_t max_len)
{
    std::vector<Word> out{{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& s : a.symbols()) {
                Word w = out[i];
                w.push_back(s);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

// ---- exact rational GPFAs ----

using RationalMatrix = std::vector<std::vector<Rational>>;

struct ExactGpfa {
    std::vector<std::string> alphabet;
    std::vector<Rational> initial;
    std::vector<RationalMatrix> transitions;
    std::vector<Rational> final;

    std::size_t size() const { return initial.size(); }

    Rational value(const Word& w) const
    {
        std::vector<Rational> x = initial;
        for (const auto& s : w) {
            const auto& a = transitions[*Alphabet(alphabet).find(s)];
            std::vector<Rational> y(x.size(), Rational(0));
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t j = 0; j < x.size(); ++j)
                    y[j] += x[i] * a[i][j];
            x = std::move(y);
        }
        Rational acc = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            acc += x[i] * final[i];
        return acc;
    }

    Gpfa to_gpfa() const
    {
        auto to_d = [](const Rational& r) {
            // both parts are small integers, so this division is correctly rounded
            return numerator(r).convert_to<double>() / denominator(r).convert_to<double>();
        };
        const auto s = static_cast<Eigen::Index>(size());
        GpfaDescription d;
        d.alphabet = alphabet;
        d.initial.resize(s);
        d.final.resize(s);
        for (Eigen::Index i = 0; i < s; ++i) {
            d.initial(i) = to_d(initial[i]);
            d.final(i) = to_d(final[i]);
        }
        for (std::size_t k = 0; k < alphabet.size(); ++k) {
            RealMatrix a(s, s);
            for (Eigen::Index i = 0; i < s; ++i)
                for (Eigen::Index j = 0; j < s; ++j)
                    a(i, j) = to_d(transitions[k][i][j]);
            d.transitions[alphabet[k]] = a;
        }
        return build_gpfa(d);
    }
};

inline Rational small_rational(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> num(-3, 3), den(1, 4);
    return Rational(num(rng), den(rng));
}

inline ExactGpfa random_exact_gpfa(std::size_t s, std::size_t symbols, std::mt19937_64& rng)
{
    ExactGpfa g;
    for (std::size_t k = 0; k < symbols; ++k)
        g.alphabet.push_back(std::string(1, static_cast<char>('a' + k)));
    for (std::size_t i = 0; i < s; ++i) {
        g.initial.push_back(small_rational(rng));
        g.final.push_back(small_rational(rng));
    }
    for (std::size_t k = 0; k < symbols; ++k) {
        RationalMatrix a(s, std::vector<Rational>(s));
        for (auto& row : a)
            for (auto& x : row)
                x = small_rational(rng);
        g.transitions.push_back(std::move(a));
    }
    return g;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b)
{
    const std::size_t n = a.size();
    RationalMatrix c(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                c[i][j] += a[i][k] * b[k][j];
    return c;
}

/// g conjugated by a random unimodular integer S: v S⁻¹, S A S⁻¹, S f.
inline ExactGpfa similar(const ExactGpfa& g, std::mt19937_64& rng)
{
    const std::size_t n = g.size();
    RationalMatrix s(n, std::vector<Rational>(n, Rational(0))), inv = s;
    for (std::size_t i = 0; i < n; ++i)
        s[i][i] = inv[i][i] = 1;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int step = 0; n > 1 && step < 4; ++step) {
        const std::size_t i = idx(rng), j = idx(rng);
        const int c = coef(rng);
        if (i == j || c == 0)
            continue;
        // S <- E S with E = I + c e_i e_j^T; S^{-1} <- S^{-1} E^{-1}
        for (std::size_t k = 0; k < n; ++k)
            s[i][k] += c * s[j][k];
        for (std::size_t k = 0; k < n; ++k)
            inv[k][j] -= c * inv[k][i];
    }
    ExactGpfa out = g;
    for (std::size_t j = 0; j < n; ++j) {
        out.initial[j] = 0;
        out.final[j] = 0;
        for (std::size_t i = 0; i < n; ++i) {
            out.initial[j] += g.initial[i] * inv[i][j];
            out.final[j] += s[j][i] * g.final[i];
        }
    }
    for (std::size_t k = 0; k < g.transitions.size(); ++k)
        out.transitions[k] = multiply(multiply(s, g.transitions[k]), inv);
    return out;
}

/// Appends `extra` states that the original states never reach.
inline ExactGpfa padded(const ExactGpfa& g, std::size_t extra, std::mt19937_64& rng)
{
    const std::size_t n = g.size(), m = n + extra;
    ExactGpfa out = g;
    out.initial.resize(m, Rational(0));
    for (std::size_t i = n; i < m; ++i)
        out.final.push_back(small_rational(rng));
    for (auto& a : out.transitions) {
        for (auto& row : a)
            row.resize(m, Rational(0));
        for (std::size_t i = n; i < m; ++i) {
            std::vector<Rational> row(m);
            for (auto& x : row)
                x = small_rational(rng);
            a.push_back(std::move(row));
        }
    }
    return out;
}

/// Shifts one random transition entry by 1/2.
inline ExactGpfa perturbed(const ExactGpfa& g, std::mt19937_64& rng)
{
    ExactGpfa out = g;
    std::uniform_int_distribution<std::size_t> sym(0, g.transitions.size() - 1), idx(0, g.size() - 1);
    out.transitions[sym(rng)][idx(rng)][idx(rng)] += Rational(1, 2);
    return out;
}

/// Pair generator for the equivalence suites: a mix of similar, padded,
/// perturbed and independent partners. Combined size stays <= 8 (s <= 4 each).
inline std::pair<ExactGpfa, ExactGpfa> random_exact_pair(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> size(1, 3), symbols(1, 2), mode(0, 3);
    const auto g1 = random_exact_gpfa(size(rng), symbols(rng), rng);
    switch (mode(rng)) {
    case 0:
        return {g1, similar(g1, rng)};
    case 1:
        return {g1, padded(similar(g1, rng), 1, rng)};
    case 2:
        return {g1, perturbed(similar(g1, rng), rng)};
    default:
        return {g1, random_exact_gpfa(size(rng), g1.alphabet.size(), rng)};
    }
}

/// Brute-force equivalence: all words of length <= s1 + s2 - 1, exactly.
inline std::optional<Word> brute_force_difference(const ExactGpfa& g1, const ExactGpfa& g2)
{
    for (const auto& w : all_words(Alphabet(g1.alphabet), g1.size() + g2.size() - 1))
        if (g1.value(w) != g2.value(w))
            return w;
    return std::nullopt;
}

} // namespace qfa::testing
