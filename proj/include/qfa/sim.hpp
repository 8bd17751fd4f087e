#pragma once

// Reference simulators. These define the acceptance probability function of
// every model and serve as the oracles the converters are judged against.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qfa/linalg.hpp"
#include "qfa/models.hpp"

namespace qfa {

/// State of a quantum run after one tape symbol.
struct StepRecord {
    std::string symbol;
    double accept = 0.0;    ///< cumulative acceptance probability
    double reject = 0.0;    ///< cumulative rejection probability
    double surviving = 0.0; ///< trace of the unhalted density matrix
};

struct RunResult {
    double accept = 0.0;
    double reject = 0.0;
    /// Unhalted weight after the final fold; zero for the quantum models,
    /// whose leftover weight after "$" counts as rejection. The last trace
    /// record holds the weight before the fold.
    double residual = 0.0;
    std::vector<StepRecord> trace;
};

/// Tolerance for probability conservation along a run.
inline constexpr double tol_sim = 1e-9;

namespace detail {
struct NoObserver {
    void operator()(const StepRecord&, const ComplexMatrix&) const noexcept {}
};
} // namespace detail

/// Density-matrix simulation of an NQFA on ¢ w $. `on_step` is called after
/// each tape symbol with the record and the surviving (unnormalized) state.
template <typename OnStep>
RunResult run_nqfa(const Nqfa& m, const Word& w, OnStep&& on_step)
{
    const auto& alphabet = m.alphabet();
    std::vector<std::size_t> tape{alphabet.left()};
    for (auto s : alphabet.encode(w))
        tape.push_back(s);
    tape.push_back(alphabet.right());

    const auto n = static_cast<Eigen::Index>(m.size());
    const auto& halting = m.halting();
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    rho(m.initial(), m.initial()) = 1.0;

    RunResult result;
    result.trace.reserve(tape.size());
    double accept = 0.0;
    double reject = 0.0;
    for (std::size_t t : tape) {
        const auto& u = m.unitary(t);
        rho = (u * rho * u.adjoint()).eval();

        const auto& family = m.measurement(t);
        if (family.size() > 1) {
            ComplexMatrix mixed = ComplexMatrix::Zero(n, n);
            for (const auto& p : family.projectors)
                mixed.noalias() += p * rho * p;
            rho = std::move(mixed);
        } else {
            const auto& p = family.projectors.front();
            rho = (p * rho * p).eval();
        }

        for (Eigen::Index i = 0; i < n; ++i) {
            if (halting[i] == Halting::non_halting)
                continue;
            (halting[i] == Halting::accepting ? accept : reject) += std::max(rho(i, i).real(), 0.0);
            rho.row(i).setZero();
            rho.col(i).setZero();
        }

        StepRecord rec{alphabet.tape_name(t), accept, reject, rho.trace().real()};
        on_step(rec, rho);
        result.trace.push_back(std::move(rec));
    }
    result.accept = accept;
    result.reject = reject + result.trace.back().surviving;
    result.residual = 0.0;
    return result;
}

inline RunResult run_nqfa(const Nqfa& m, const Word& w)
{
    return run_nqfa(m, w, detail::NoObserver{});
}

inline RunResult run_kwqfa(const Kwqfa& m, const Word& w) { return run_nqfa(m.nqfa(), w); }

/// QFC simulation: one unnormalized density matrix per control state; the
/// DFA product sums over outcome words without enumerating them. Trace
/// records carry the total weight across control states in `surviving`;
/// acceptance is only read at the end.
template <typename OnStep>
RunResult run_qfc(const Qfc& m, const Word& w, OnStep&& on_step)
{
    const auto& alphabet = m.alphabet();
    std::vector<std::size_t> tape{alphabet.left()};
    for (auto s : alphabet.encode(w))
        tape.push_back(s);
    tape.push_back(alphabet.right());

    const auto n = static_cast<Eigen::Index>(m.size());
    const auto& dfa = m.control();
    const auto& obs = m.observable();
    const std::size_t d_count = dfa.states.size();

    std::vector<ComplexMatrix> rho(d_count, ComplexMatrix::Zero(n, n));
    std::vector<bool> live(d_count, false);
    rho[dfa.start](m.initial(), m.initial()) = 1.0;
    live[dfa.start] = true;

    RunResult result;
    result.trace.reserve(tape.size());
    for (std::size_t t : tape) {
        const auto& u = m.unitary(t);
        std::vector<ComplexMatrix> next(d_count, ComplexMatrix::Zero(n, n));
        std::vector<bool> next_live(d_count, false);
        for (std::size_t d = 0; d < d_count; ++d) {
            if (!live[d])
                continue;
            const ComplexMatrix evolved = u * rho[d] * u.adjoint();
            for (std::size_t c = 0; c < obs.size(); ++c) {
                const auto& p = obs.projectors[c];
                const std::size_t target = dfa.delta[d][c];
                next[target].noalias() += p * evolved * p;
                next_live[target] = true;
            }
        }
        rho = std::move(next);
        live = std::move(next_live);

        double total = 0.0;
        ComplexMatrix sum = ComplexMatrix::Zero(n, n);
        for (std::size_t d = 0; d < d_count; ++d) {
            total += rho[d].trace().real();
            sum += rho[d];
        }
        StepRecord rec{alphabet.tape_name(t), 0.0, 0.0, total};
        on_step(rec, sum);
        result.trace.push_back(std::move(rec));
    }
    for (std::size_t d = 0; d < d_count; ++d)
        if (dfa.accepting[d])
            result.accept += rho[d].trace().real();
    result.reject = 1.0 - result.accept;
    result.residual = 0.0;
    return result;
}

inline RunResult run_qfc(const Qfc& m, const Word& w)
{
    return run_qfc(m, w, detail::NoObserver{});
}

/// Left fold of the row vector: O(s^2) per symbol.
inline double run_gpfa(const Gpfa& g, const Word& w)
{
    Eigen::RowVectorXd x = g.initial().transpose();
    for (auto s : g.alphabet().encode(w))
        x = (x * g.transition(s)).eval();
    return x.dot(g.final());
}

inline double run_pfa(const Pfa& p, const Word& w) { return run_gpfa(p.gpfa(), w); }

/// Acceptance value of any model on w.
inline double acceptance(const Model& m, const Word& w)
{
    return std::visit(
        [&](const auto& x) -> double {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Nqfa>)
                return run_nqfa(x, w).accept;
            else if constexpr (std::is_same_v<T, Kwqfa>)
                return run_kwqfa(x, w).accept;
            else if constexpr (std::is_same_v<T, Qfc>)
                return run_qfc(x, w).accept;
            else if constexpr (std::is_same_v<T, Gpfa>)
                return run_gpfa(x, w);
            else
                return run_pfa(x, w);
        },
        m);
}

/// Full run result for any model. Classical models have an empty trace and
/// report 1 - value as rejection.
inline RunResult run(const Model& m, const Word& w)
{
    return std::visit(
        [&](const auto& x) -> RunResult {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Nqfa>)
                return run_nqfa(x, w);
            else if constexpr (std::is_same_v<T, Kwqfa>)
                return run_kwqfa(x, w);
            else if constexpr (std::is_same_v<T, Qfc>)
                return run_qfc(x, w);
            else {
                RunResult r;
                r.accept = acceptance(m, w);
                r.reject = 1.0 - r.accept;
                return r;
            }
        },
        m);
}

struct SweepRow {
    std::size_t length;
    double value;
};

/// Acceptance value on symbol^k for k = 0..max_len.
inline std::vector<SweepRow> sweep(const Model& m, const std::string& symbol, std::size_t max_len)
{
    if (!alphabet_of(m).find(symbol))
        throw input_error("symbol '" + symbol + "' is not in the input alphabet");
    std::vector<SweepRow> rows;
    Word w;
    for (std::size_t k = 0; k <= max_len; ++k) {
        rows.push_back({k, acceptance(m, w)});
        w.push_back(symbol);
    }
    return rows;
}

} // namespace qfa
